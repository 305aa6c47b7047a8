import numpy as np
import pytest

from pdalift import blackburn as bb
from pdalift.base import identity_pda, one_pda, two_pda
from pdalift.core import STAR, PdaArray, blackburn_set_check, params, validate
from pdalift.errors import ParameterError
from pdalift.lifting import regular_lift

import fixtures as fx
import formulas


def lift_over_identity(bset):
    return params(regular_lift(identity_pda(bset.b), bset))


def test_pi_operators_are_bijections():
    p = PdaArray(np.arange(36).reshape(6, 6))
    for op in (bb.pi_d1, bb.pi_ad1, bb.pi_d2, bb.pi_ad2):
        q = p
        n = 6 if op in (bb.pi_d1, bb.pi_ad1) else 3
        for _ in range(n):
            q = op(q)
            assert sorted(q.grid.ravel()) == list(range(36))
        assert q == p


@pytest.mark.parametrize("name,make,members", [
    ("c1", lambda: bb.c1_set(3), [fx.C1_P0, fx.C1_P1, fx.C1_P2]),
    ("c2", lambda: bb.c2_set(2), [fx.C2_Q0, fx.C2_Q1]),
    ("bw1", lambda: bb.bw1_set(4, 2), [fx.H8, fx.BW1_P1]),
    ("bw2", lambda: bb.bw2_set(4, 2), [fx.H8, fx.BW2_P1]),
    ("bw3", lambda: bb.bw3_set(6, 2), [fx.BW3_P0, fx.BW3_P1]),
    ("bw4", lambda: bb.bw4_set(2), [fx.BW4_P0, fx.BW4_P1, fx.BW4_PT0, fx.BW4_PT1]),
    ("tiling", lambda: bb.tiling_set(6, 3), fx.TILE6),
    ("tilingx", lambda: bb.tiling_set_extended(6, 4), fx.TILE4),
    ("a2r", lambda: bb.a2r_family(2), [fx.A4, fx.A4P]),
    ("a2", lambda: bb.a2r_family(1), [fx.a2(0), fx.a2p(0)]),
    ("tall5", bb.tall_pair_5, [fx.TALL5_P0, fx.TALL5_P1]),
])
def test_members_match_worked_examples(name, make, members):
    assert list(make().members) == members


@pytest.mark.parametrize("make,ref", [
    (lambda: bb.bw2_set(4, 2), fx.BW2_STAR),
    (lambda: bb.bw3_set(6, 2), fx.BW3_STAR),
    (lambda: bb.bw4_set(2), fx.BW4_STAR),
    (lambda: bb.bw1_set(4, 2), fx.BW1_STAR),
])
def test_reference_star_pattern_matches(make, ref):
    assert (make().pstar.grid == STAR).tolist() == (ref.grid == STAR).tolist()


def test_t1_pair_matches_example():
    fam = bb.t1_pair(fx.J3)
    assert list(fam.members) == [fx.J3, fx.T1_P1]
    assert params(regular_lift(identity_pda(2), fam)).as_tuple() == (6, 6, 1, 15, 2)


def test_t2_pair_with_two_star_diagonals():
    fam = bb.t2_pair(one_pda(4, 0), 2)
    ref = fam.pstar.grid == STAR
    for x in range(4):
        assert ref[x, x] and ref[x, (x + 2) % 4]
    assert fam.check().compatible


def test_t2_shift_zero_is_t1():
    assert bb.t2_pair(fx.J3, 0).members == bb.t1_pair(fx.J3).members


def _in_range():
    out = []
    for g in range(1, 9):
        if g >= 2:
            out.append(("c1", (g,)))
            out.append(("t1", (g,)))
        out.append(("c2", (g,)))
        for d in range(1, g + 1):
            if g % d == 0:
                if d == 1 or d * d == g:
                    out.append(("bw1", (g, d)))
                if g % (d * d) == 0:
                    out.append(("bw2", (g, d)))
                if g >= 2:
                    out.append(("bw3", (g, d)))
                out.append(("tiling", (g, d)))
    for n in range(1, 4):
        out.append(("bw4", (n,)))
    for r in range(1, 5):
        out.append(("lift2r", (r,)))
    return out


MAKERS = {
    "c1": bb.c1_set, "c2": bb.c2_set, "t1": lambda g: bb.t1_pair(one_pda(g, 0)),
    "bw1": bb.bw1_set, "bw2": bb.bw2_set, "bw3": bb.bw3_set, "bw4": bb.bw4_set,
    "tiling": bb.tiling_set, "lift2r": bb.a2r_family,
}


@pytest.mark.parametrize("name,args", _in_range(), ids=lambda v: str(v))
def test_family_matches_closed_forms(name, args):
    fam = MAKERS[name](*args)
    Kc, fc, e, z_star, g_star = formulas.FAMILY[name](*args)
    assert fam.b == formulas.FAMILY_SIZE[name](*args)
    assert fam.shape == (fc, Kc)
    assert fam.e == e and fam.z_star == z_star and fam.r == g_star
    assert blackburn_set_check(fam.members, fam.pstar).compatible
    assert validate(fam.pstar).valid
    if name in formulas.IDENTITY_LIFT:
        got = lift_over_identity(fam)
        assert (got.K, got.f, got.Z, got.S) == formulas.IDENTITY_LIFT[name](*args)


@pytest.mark.parametrize("g,b", [(g, b) for g in range(1, 9) for b in range(1, 9)])
def test_tiling_extended(g, b):
    fam = bb.tiling_set_extended(g, b)
    got = lift_over_identity(fam)
    assert (got.K, got.f, got.Z, got.S) == formulas.tiling_extended(g, b)


@pytest.mark.parametrize("g,d", [(2, 2), (3, 3), (6, 3), (8, 4)])
def test_bw1_rejects_large_block_count(g, d):
    with pytest.raises(ParameterError):
        bb.bw1_set(g, d)


@pytest.mark.parametrize("g,d", [(4, 3), (6, 4)])
def test_divisibility_is_required(g, d):
    with pytest.raises(ParameterError):
        bb.bw3_set(g, d)


def test_recursive_expand_of_a2_gives_a4_parameters():
    fam = bb.recursive_expand(bb.a2r_family(1))
    assert fam.check().compatible
    assert lift_over_identity(fam).as_tuple() == lift_over_identity(bb.a2r_family(2)).as_tuple()


@pytest.mark.parametrize("make", [lambda: bb.c1_set(3), lambda: bb.tiling_set(4, 2),
                                  lambda: bb.bw3_set(6, 3)])
def test_recursive_expand_keeps_compatibility(make):
    src = make()
    fam = bb.recursive_expand(src)
    assert fam.check().compatible
    inner = lift_over_identity(src).g
    assert lift_over_identity(fam).g == src.b * inner


def test_tall_pair_3_parameters():
    fam = bb.tall_pair_3()
    assert fam.shape == (12, 3) and fam.e == 3 and fam.z_star == 8 and fam.r == 3
    assert params(regular_lift(identity_pda(2), fam)).as_tuple() == (6, 24, 11, 26, 3)


def test_tall_pair_5_parameters():
    fam = bb.tall_pair_5()
    assert fam.e == 5 and fam.z_star == 8 and fam.r == 5
    assert params(regular_lift(identity_pda(2), fam)).as_tuple() == (10, 20, 13, 14, 5)


def test_shifted_diag_block_star_positions():
    for i in range(3):
        blk = bb.shifted_diag_block(i, [0, 1, 2])
        for x in range(3):
            assert blk[x, (x - i) % 3] == STAR


def test_c_families_share_full_alphabet():
    for fam in (bb.c1_set(4), bb.c2_set(3)):
        alphas = {m.alphabet for m in fam.members}
        assert len(alphas) == 1


def test_lift_of_two_pda_follows_general_formula():
    base = two_pda(6, 1)
    b = params(base)
    fam = bb.bw3_set(6, 2)
    got = params(regular_lift(base, fam))
    assert got.as_tuple() == formulas.general_regular(
        (b.K, b.f, b.Z, b.S), *formulas.FAMILY["bw3"](6, 2))


def test_recursive_expand_single_member_is_identity_layout():
    src = bb.a2r_family(1)
    one = bb.BlackburnSet((src.members[0],), src.pstar)
    fam = bb.recursive_expand(one)
    assert fam.b == 1 and fam.members[0] == src.members[0]
