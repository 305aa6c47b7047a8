"""Lifting: grow a base array by substituting small arrays into its cells.

Stars of the base become star blocks (or copies of a reference array), and
each occurrence of a base symbol becomes a constituent array.  All outputs use
a contiguous alphabet starting at 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .base import one_pda, two_pda
from .blackburn import BlackburnSet, a2r_family, c2_set
from .core import (
    STAR,
    PdaArray,
    blackburn_set_check,
    normalize_alphabet,
    regularity,
)
from .errors import (
    BlockShapeMismatch,
    CompatibilityError,
    ConstructionError,
    ParameterError,
    SymbolCollision,
)


def _normalized_family(arrays: Sequence[PdaArray]) -> tuple[list[np.ndarray], int]:
    """Jointly renumber ``arrays`` onto 0..A-1 and return the grids and A."""
    alpha = sorted(set().union(*(a.alphabet for a in arrays)))
    keys = np.array(alpha, dtype=np.int64)
    out = []
    for a in arrays:
        g = a.grid
        m = g != STAR
        h = np.full(g.shape, STAR, dtype=np.int64)
        h[m] = np.searchsorted(keys, g[m])
        out.append(h)
    return out, len(alpha)


def _shift(grid: np.ndarray, offset: int) -> np.ndarray:
    return np.where(grid == STAR, STAR, grid + offset)


def _occurrence_index(pb: PdaArray) -> np.ndarray:
    """For every non-star cell, how many earlier row-major cells share its symbol."""
    flat = pb.grid.ravel()
    occ = np.full(flat.shape, -1, dtype=np.int64)
    seen: dict[int, int] = {}
    for pos in np.nonzero(flat != STAR)[0]:
        s = int(flat[pos])
        occ[pos] = seen.get(s, 0)
        seen[s] = occ[pos] + 1
    return occ.reshape(pb.shape)


def basic_lift(pb: PdaArray, constituents: Mapping[int, PdaArray]) -> PdaArray:
    """Replace each base symbol by its constituent and each star by a star block."""
    alpha = pb.alphabet
    missing = [s for s in alpha if s not in constituents]
    if missing:
        raise ConstructionError(f"no constituent for base symbols {missing[:5]}")
    parts = [constituents[s] for s in alpha]
    shapes = {p.shape for p in parts}
    if len(shapes) != 1:
        raise BlockShapeMismatch(f"constituents have different shapes {sorted(shapes)}")
    seen: set[int] = set()
    for p in parts:
        if seen & set(p.alphabet):
            raise SymbolCollision("constituents must use disjoint symbols")
        seen |= set(p.alphabet)
    n, m = shapes.pop()
    out = np.full((pb.f * n, pb.K * m), STAR, dtype=np.int64)
    for (i, j), s in np.ndenumerate(pb.grid):
        if s != STAR:
            out[i * n:(i + 1) * n, j * m:(j + 1) * m] = constituents[int(s)].grid
    return normalize_alphabet(PdaArray(out))


def regular_basic_lift(pb: PdaArray, pl: PdaArray) -> PdaArray:
    """Basic lift with a symbol-disjoint copy of ``pl`` per base symbol."""
    if regularity(pb).g is None or regularity(pl).g is None:
        raise ParameterError("both arrays must be regular")
    (norm,), span = _normalized_family([pl])
    n, m = pl.shape
    out = np.full((pb.f * n, pb.K * m), STAR, dtype=np.int64)
    index = {s: u for u, s in enumerate(pb.alphabet)}
    for (i, j), s in np.ndenumerate(pb.grid):
        if s != STAR:
            out[i * n:(i + 1) * n, j * m:(j + 1) * m] = _shift(norm, index[int(s)] * span)
    return PdaArray(out)


def general_lift(pb: PdaArray, constituents: Mapping[tuple[int, int], PdaArray],
                 pstar: PdaArray, check: bool = True) -> PdaArray:
    """Lift where the t-th row-major occurrence of symbol s becomes
    ``constituents[s, t]`` and every star becomes a fresh copy of ``pstar``."""
    shape = pstar.shape
    if any(c.shape != shape for c in constituents.values()):
        raise BlockShapeMismatch("constituents and reference must share one shape")
    occ = _occurrence_index(pb)
    counts = pb.symbol_counts()
    groups: dict[int, list[PdaArray]] = {}
    for s, g in counts.items():
        try:
            groups[s] = [constituents[s, t] for t in range(g)]
        except KeyError as exc:
            raise ConstructionError(f"missing constituent {exc.args[0]}") from None
    if check:
        owner: dict[int, int] = {}
        for s, grp in groups.items():
            for c in grp:
                for v in c.alphabet:
                    if owner.setdefault(v, s) != s:
                        raise SymbolCollision(f"symbol {v} used by base symbols {owner[v]} and {s}")
            w = blackburn_set_check(grp, pstar)
            if not w.compatible:
                raise CompatibilityError(f"constituents of base symbol {s} are incompatible", w)
    n, m = shape
    nxt = max([c.max_symbol for c in constituents.values()] + [-1]) + 1
    (ref,), span = _normalized_family([pstar]) if pstar.alphabet else ([pstar.grid], 0)
    out = np.full((pb.f * n, pb.K * m), STAR, dtype=np.int64)
    for (i, j), s in np.ndenumerate(pb.grid):
        if s == STAR:
            block = _shift(ref, nxt)
            nxt += span
        else:
            block = constituents[int(s), int(occ[i, j])].grid
        out[i * n:(i + 1) * n, j * m:(j + 1) * m] = block
    return PdaArray(out)


def regular_lift(pb: PdaArray, bset: BlackburnSet, check: bool = True) -> PdaArray:
    """Lift a b-regular base with a b-member family, one disjoint copy per symbol.

    With ``check=True`` the family is verified against its reference first.
    """
    b = bset.b
    counts = pb.symbol_counts()
    if any(c != b for c in counts.values()):
        raise ParameterError(
            f"base symbols must each occur {b} times to match the family size")
    if check:
        w = bset.check()
        if not w.compatible:
            raise CompatibilityError("family members are not compatible", w)
    members, span = _normalized_family(bset.members)
    (ref,), ref_span = (_normalized_family([bset.pstar]) if bset.pstar.alphabet
                        else ([bset.pstar.grid], 0))
    n, m = bset.shape
    occ = _occurrence_index(pb)
    index = {s: u for u, s in enumerate(pb.alphabet)}
    nxt = len(index) * span
    out = np.full((pb.f * n, pb.K * m), STAR, dtype=np.int64)
    for (i, j), s in np.ndenumerate(pb.grid):
        if s == STAR:
            block = _shift(ref, nxt)
            nxt += ref_span
        else:
            block = _shift(members[occ[i, j]], index[int(s)] * span)
        out[i * n:(i + 1) * n, j * m:(j + 1) * m] = block
    return PdaArray(out)


# ------------------------------------------------------------ chained lifts


@dataclass(frozen=True)
class ZTrace:
    K: tuple[int, ...]
    Z: tuple[int, ...]


def _small_pda(k: int, g: int, z: int) -> PdaArray:
    if g == 1:
        return one_pda(k, z)
    if g == 2:
        return two_pda(k, z)
    raise ParameterError(f"steps must use coding gain 1 or 2, got {g}")


def recursive_basic_lift(steps: Sequence[tuple[int, int, int]]) -> tuple[PdaArray, ZTrace]:
    """Iterated regular basic lifts by 1- or 2-regular square arrays.

    ``steps`` lists (K_i, g_i, z_i).  The star counts follow
    ``Z_i = Z_{i-1} K_i + (K_1...K_{i-1} - Z_{i-1}) z_i`` and are checked
    against the constructed arrays.
    """
    if not steps:
        raise ParameterError("need at least one step")
    k1, g1, z1 = steps[0]
    p = _small_pda(k1, g1, z1)
    ks, zs = [k1], [z1]
    size = k1
    for k, g, z in steps[1:]:
        p = regular_basic_lift(p, _small_pda(k, g, z))
        zs.append(zs[-1] * k + (size - zs[-1]) * z)
        size *= k
        ks.append(size)
        actual = int(p.column_star_counts()[0])
        if actual != zs[-1]:
            raise ConstructionError(f"star count {actual} disagrees with recursion {zs[-1]}")
    return p, ZTrace(tuple(ks), tuple(zs))


def lift2r(pb: PdaArray, r: int) -> PdaArray:
    """Lift a 2-regular base to a 2^r-regular array of 2^r times the size."""
    if regularity(pb).g != 2:
        raise ParameterError("base must be 2-regular")
    return regular_lift(pb, a2r_family(r), check=False)


def nested2g(q: int, r: int) -> tuple[PdaArray, list[tuple[int, int, int]]]:
    """Repeated doubling lifts starting from a (q, q, 1) 2-regular array.

    Returns the final array and the (n_i, Z_i, S_i) trace, which is checked
    level by level against the recursion.
    """
    if q < 2 or r < 1:
        raise ParameterError("need q >= 2 and r >= 1")
    p = two_pda(q, 1)
    n, z, s = q, 1, q * (q - 1) // 2
    trace = [(n, z, s)]
    for i in range(2, r + 1):
        p = regular_lift(p, c2_set(1 << (i - 1)), check=False)
        z, s = (2 ** i - 2) * z + n, (2 ** i * (2 ** i - 1) // 2) * s + n * z
        n *= 2 ** i
        trace.append((n, z, s))
        actual = (p.f, int(p.column_star_counts()[0]), len(p.alphabet))
        if actual != (n, z, s):
            raise ConstructionError(f"level {i}: built {actual}, recursion gives {(n, z, s)}")
    return p, trace
