"""Deterministic families of mutually compatible arrays.

Every family is returned as a :class:`BlackburnSet`: the member arrays plus
the reference array whose stars make the members safe to combine in a lift.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .base import anti_identity_pda, antidiag2_pda, dense_pda, diag2_pda, identity_pda
from .core import (
    STAR,
    CompatibilityWitness,
    PdaArray,
    blackburn_set_check,
    relabel,
)
from .errors import ParameterError


@dataclass(frozen=True)
class BlackburnSet:
    members: tuple[PdaArray, ...]
    pstar: PdaArray

    @property
    def b(self) -> int:
        return len(self.members)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pstar.shape

    @property
    def e(self) -> int:
        """Stars per column shared by all members."""
        counts = {int(c) for m in self.members for c in m.column_star_counts()}
        if len(counts) != 1:
            raise ParameterError(f"members disagree on stars per column: {sorted(counts)}")
        return counts.pop()

    @property
    def z_star(self) -> int:
        counts = set(self.pstar.column_star_counts().tolist())
        if len(counts) != 1:
            raise ParameterError("reference array has non-uniform star counts")
        return counts.pop()

    def total_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self.members:
            for s, c in m.symbol_counts().items():
                out[s] = out.get(s, 0) + c
        return out

    @property
    def r(self) -> int | None:
        """Total occurrences of every symbol across members, if uniform."""
        vals = set(self.total_counts().values())
        return vals.pop() if len(vals) == 1 else None

    @property
    def member_regularity(self) -> tuple[int | None, ...]:
        out = []
        for m in self.members:
            vals = set(m.symbol_counts().values())
            out.append(vals.pop() if len(vals) == 1 else None)
        return tuple(out)

    @property
    def max_symbol(self) -> int:
        return max([m.max_symbol for m in self.members] + [self.pstar.max_symbol])

    def check(self) -> CompatibilityWitness:
        return blackburn_set_check(self.members, self.pstar)

    def shifted(self, offset: int) -> BlackburnSet:
        return BlackburnSet(
            tuple(relabel(m, offset=offset) for m in self.members),
            relabel(self.pstar, offset=offset),
        )


def _fresh(*arrays: PdaArray) -> int:
    return max(a.max_symbol for a in arrays) + 1


# -------------------------------------------------------- cell permutations


def _square(p: PdaArray) -> int:
    if p.f != p.K:
        raise ParameterError(f"expected a square array, got {p.shape}")
    return p.f


def pi_d1(p: PdaArray, power: int = 1) -> PdaArray:
    """Rotate the main diagonal down by ``power`` positions."""
    n = _square(p)
    g = p.grid.copy()
    idx = np.arange(n)
    g[(idx + power) % n, (idx + power) % n] = p.grid[idx, idx]
    return PdaArray(g)


def pi_ad1(p: PdaArray, power: int = 1) -> PdaArray:
    """Rotate the anti-diagonal: the entry in row i moves to row i - ``power``."""
    n = _square(p)
    g = p.grid.copy()
    idx = np.arange(n)
    dst = (idx - power) % n
    g[dst, n - 1 - dst] = p.grid[idx, n - 1 - idx]
    return PdaArray(g)


def _halves(p: PdaArray) -> int:
    n = _square(p)
    if n % 2:
        raise ParameterError("block operators need an even side")
    return n // 2


def _assemble(blocks: Sequence[Sequence[PdaArray | np.ndarray]]) -> PdaArray:
    return PdaArray(np.block([[b.grid if isinstance(b, PdaArray) else b for b in row]
                              for row in blocks]))


def pi_d2(p: PdaArray, power: int = 1) -> PdaArray:
    """Rotate the first half of the diagonal down and the second half up."""
    h = _halves(p)
    g = p.grid
    a, b = PdaArray(g[:h, :h]), PdaArray(g[h:, h:])
    return _assemble([[pi_d1(a, power), g[:h, h:]], [g[h:, :h], pi_d1(b, -power)]])


def pi_ad2(p: PdaArray, power: int = 1) -> PdaArray:
    """Anti-diagonal analogue of :func:`pi_d2`, acting on the off-diagonal blocks."""
    h = _halves(p)
    g = p.grid
    a, b = PdaArray(g[:h, h:]), PdaArray(g[h:, :h])
    return _assemble([[g[:h, :h], pi_ad1(a, power)], [pi_ad1(b, -power), g[h:, h:]]])


def blocks_of(p: PdaArray, size: int) -> list[list[np.ndarray]]:
    if p.f % size or p.K % size:
        raise ParameterError(f"side {p.f} is not a multiple of block size {size}")
    return [[p.grid[i:i + size, j:j + size] for j in range(0, p.K, size)]
            for i in range(0, p.f, size)]


def substitute_blocks(p: PdaArray, block: PdaArray | None = None) -> PdaArray:
    """Replace every symbol ``s`` of ``p`` by ``block`` relabeled to ``s`` and stars by
    all-star blocks.  ``block`` must carry a single symbol; the default is a 1x1 cell.
    """
    if block is None:
        return p
    alpha = block.alphabet
    if len(alpha) != 1:
        raise ParameterError("substitution block must use exactly one symbol")
    mask = block.grid != STAR
    out = np.full((p.f * block.f, p.K * block.K), STAR, dtype=np.int64)
    for (i, j), s in np.ndenumerate(p.grid):
        if s != STAR:
            out[i * block.f:(i + 1) * block.f, j * block.K:(j + 1) * block.K][mask] = s
    return PdaArray(out)


# ----------------------------------------------------------------- families


def c1_set(g: int) -> BlackburnSet:
    """Diagonal rotations of a dense array, compatible against the identity."""
    if g < 2:
        raise ParameterError("g must be at least 2")
    base = dense_pda(g)
    members = tuple(pi_d1(base, i) for i in range(g))
    return BlackburnSet(members, identity_pda(g, g * g))


def c2_set(g: int) -> BlackburnSet:
    """Block-diagonal rotations of an anti-diagonal-star array of side 2g."""
    if g < 1:
        raise ParameterError("g must be positive")
    base = antidiag2_pda(2 * g)
    members = tuple(pi_d2(base, i) for i in range(g))
    return BlackburnSet(members, identity_pda(2 * g, g * (2 * g - 1)))


def _require_one_pda(p: PdaArray) -> int:
    n = _square(p)
    if any(c != 1 for c in p.symbol_counts().values()):
        raise ParameterError("expected an array in which every symbol occurs once")
    return n


def t1_pair(p: PdaArray) -> BlackburnSet:
    """An array and its transpose; the reference has stars on the diagonal."""
    n = _require_one_pda(p)
    ref = diag2_pda(n, range(p.max_symbol + 1, p.max_symbol + 1 + n * (n - 1) // 2))
    return BlackburnSet((p, p.T), ref)


def diagonal_star_reference(n: int, shifts: Sequence[int], start: int) -> PdaArray:
    """Stars on the cyclic diagonals ``y = x + i`` for ``i`` in ``shifts``; other
    cells get distinct fresh symbols from ``start`` upward."""
    r, c = np.indices((n, n))
    star = np.isin((c - r) % n, list(shifts))
    g = np.full((n, n), STAR, dtype=np.int64)
    g[~star] = np.arange(start, start + int((~star).sum()))
    return PdaArray(g)


def t2_pair(p: PdaArray, i: int) -> BlackburnSet:
    """An array with the anti-diagonal-rotated transpose.  ``i = 0`` gives ``t1_pair``."""
    n = _require_one_pda(p)
    if not 0 <= i < n:
        raise ParameterError(f"shift must lie in [0, {n})")
    if i == 0:
        return t1_pair(p)
    ref = diagonal_star_reference(n, (0, i), p.max_symbol + 1)
    return BlackburnSet((p, pi_ad1(p.T, i)), ref)


def _divides(d: int, g: int) -> None:
    if d < 1 or g < 1 or g % d:
        raise ParameterError(f"{d} does not divide {g}")


def _block_grid(blocks: dict[tuple[int, int], np.ndarray], d: int) -> PdaArray:
    return _assemble([[blocks[j, k] for k in range(d)] for j in range(d)])


def _split_family(p0: PdaArray, d: int, shift_diagonal: bool) -> tuple[PdaArray, ...]:
    """Members built from the d x d blocks of a symmetric array.

    Diagonal blocks get ``pi_ad2`` (optionally taken from a shifted diagonal
    slot), blocks below the diagonal get ``pi_ad1`` twice per step, and blocks
    above are transposes of those below.
    """
    size = p0.f // d
    b0 = blocks_of(p0, size)
    members = []
    for i in range(d):
        blk: dict[tuple[int, int], np.ndarray] = {}
        for j in range(d):
            src = (j - i) % d if shift_diagonal else j
            blk[j, j] = pi_ad2(PdaArray(b0[src][src]), i).grid
            for k in range(j):
                blk[j, k] = pi_ad1(PdaArray(b0[j][k]), 2 * i).grid
                blk[k, j] = blk[j, k].T
        members.append(_block_grid(blk, d))
    return tuple(members)


def chunked_anti_identity(n: int, chunk: int, start: int) -> PdaArray:
    """Anti-diagonal non-stars, consecutive runs of ``chunk`` cells sharing a symbol."""
    g = np.full((n, n), STAR, dtype=np.int64)
    idx = np.arange(n)
    g[idx, n - 1 - idx] = start + idx // chunk
    return PdaArray(g)


def _aligned_reference(d: int, side: int, diagonal: Sequence[PdaArray], start: int) -> PdaArray:
    """d x d block array: ``diagonal[j]`` on the diagonal, anti-diagonal blocks elsewhere.

    Off-diagonal anti-diagonals are split into runs of 2d cells when 2d divides
    the block side, so that each symbol occurs 2d times.
    """
    chunk = 2 * d if side % (2 * d) == 0 else side
    per_block = side // chunk
    nxt = start
    rows = []
    for j in range(d):
        row = []
        for k in range(d):
            if j == k:
                row.append(diagonal[j])
            else:
                row.append(chunked_anti_identity(side, chunk, nxt))
                nxt += per_block
        rows.append(row)
    return _assemble(rows)


def anti_identity_tiling(m: int, n: int, start: int) -> PdaArray:
    """m x m grid of n x n anti-identity blocks, each block with its own symbol."""
    g = np.full((m * n, m * n), STAR, dtype=np.int64)
    idx = np.arange(n)
    for a in range(m):
        for b in range(m):
            g[a * n + idx, b * n + n - 1 - idx] = start + a * m + b
    return PdaArray(g)


def bw1_set(g: int, d: int) -> BlackburnSet:
    """Split family of a diagonal-star array of side 2g into d x d blocks.

    Requires d | g and d^2 <= g; beyond that the anti-diagonal rotations of the
    off-diagonal blocks collide.
    """
    _divides(d, g)
    if d * d > g:
        raise ParameterError(f"need d^2 <= g, got g={g}, d={d}")
    p0 = diag2_pda(2 * g, upper=True)
    members = _split_family(p0, d, shift_diagonal=False)
    side = 2 * g // d
    t0 = p0.max_symbol + 1
    tiled = anti_identity_tiling(g // d, 2 * d, t0)
    if blackburn_set_check(members, tiled, validate_members=False).compatible:
        return BlackburnSet(members, tiled)
    # the tiled reference is too sparse once 1 < d and d^2 < g; fall back to
    # the sparsest reference these members admit
    chunk = 2 * d if side % (2 * d) == 0 else side
    diag = [chunked_anti_identity(side, chunk, t0 + j * (side // chunk)) for j in range(d)]
    ref = _aligned_reference(d, side, diag, t0 + d * (side // chunk))
    return BlackburnSet(members, ref)


def bw2_reference(g: int, d: int, start: int = 0) -> PdaArray:
    """Reference array for the shifted-diagonal split family (needs d^2 | g).

    Diagonal block j is the tiled anti-identity array with its anti-diagonal
    rotated by 2j; off-diagonal blocks are anti-diagonal arrays.
    """
    if d < 1 or g % (d * d):
        raise ParameterError(f"{d}^2 does not divide {g}")
    q = g // d
    tile = substitute_blocks(dense_pda(q, range(start, start + q * q)), anti_identity_pda(2, 0))
    diag = [pi_ad1(tile, 2 * j) for j in range(d)]
    return _aligned_reference(d, 2 * q, diag, start + q * q)


def bw2_set(g: int, d: int) -> BlackburnSet:
    """Like :func:`bw1_set` but the diagonal blocks also move between slots."""
    if d < 1 or g % (d * d):
        raise ParameterError(f"{d}^2 does not divide {g}")
    p0 = diag2_pda(2 * g, upper=True)
    members = _split_family(p0, d, shift_diagonal=True)
    return BlackburnSet(members, bw2_reference(g, d, p0.max_symbol + 1))


def bw3_set(g: int, d: int) -> BlackburnSet:
    """Diagonal-star array whose diagonal blocks are cyclically permuted."""
    _divides(d, g)
    if g < 2:
        raise ParameterError("g must be at least 2")
    p0 = diag2_pda(g, upper=True)
    size = g // d
    b0 = blocks_of(p0, size)
    members = []
    for i in range(d):
        blk = {(j, k): b0[j][k] for j in range(d) for k in range(d)}
        for j in range(d):
            src = (j - i) % d
            blk[j, j] = b0[src][src]
        members.append(_block_grid(blk, d))
    t0 = p0.max_symbol + 1
    if size >= 2:
        inner = diag2_pda(size, range(t0, t0 + size * (size - 1) // 2))
        ref = np.full((g, g), STAR, dtype=np.int64)
        for j in range(d):
            ref[j * size:(j + 1) * size, j * size:(j + 1) * size] = inner.grid
        ref = PdaArray(ref)
    else:
        ref = _all_star(g)
    return BlackburnSet(tuple(members), ref)


def _all_star(n: int) -> PdaArray:
    return PdaArray(np.full((n, n), STAR, dtype=np.int64))


def bw4_reference(n: int, start: int) -> PdaArray:
    """Block array with rotated diagonal-star blocks on the diagonal and
    anti-identity blocks elsewhere."""
    t = diag2_pda(2 * n, range(start, start + n * (2 * n - 1)))
    nxt = t.max_symbol + 1
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            if j == k:
                row.append(pi_ad2(t, j))
            else:
                row.append(anti_identity_pda(2 * n, nxt))
                nxt += 1
        rows.append(row)
    return _assemble(rows)


def bw4_set(n: int) -> BlackburnSet:
    """2n members of side 2n^2 built from a block-dense array."""
    if n < 1:
        raise ParameterError("n must be positive")
    side = 2 * n
    area = side * side
    blocks0 = {(j, k): dense_pda(side, range(area * (n * j + k), area * (n * j + k + 1))).grid
               for j in range(n) for k in range(n)}
    plain = [blocks0]
    for _ in range(1, n):
        prev = plain[-1]
        cur = {}
        for j in range(n):
            for k in range(n):
                src = prev[(j - 1) % n, (j - 1) % n] if j == k else prev[j, k]
                cur[j, k] = pi_ad1(PdaArray(src), 2).grid
        plain.append(cur)
    tilde = []
    for blk in plain:
        cur = {}
        for (j, k), b in blk.items():
            cur[j, k] = b.T if j == k else pi_ad1(PdaArray(b), 1).grid
        tilde.append(cur)
    members = tuple(_block_grid(b, n) for b in plain + tilde)
    return BlackburnSet(members, bw4_reference(n, area * n * n))


def tiling_set(g: int, d: int) -> BlackburnSet:
    """Diagonal rotations of a dense d x d array with every symbol blown up to an
    identity block of side g/d."""
    _divides(d, g)
    q = g // d
    block = identity_pda(q, 0)
    base = dense_pda(d)
    members = tuple(substitute_blocks(pi_d1(base, i), block) for i in range(d))
    return BlackburnSet(members, identity_pda(g, d * d))


def tiling_set_extended(g: int, b: int) -> BlackburnSet:
    """``b`` members: ``b / gcd(g, b)`` symbol-disjoint copies of ``tiling_set(g, gcd(g, b))``."""
    if g < 1 or b < 1:
        raise ParameterError("g and b must be positive")
    d = gcd(g, b)
    unit = tiling_set(g, d)
    span = d * d
    members = []
    for c in range(b // d):
        members.extend(relabel(m, offset=c * span) for m in unit.members)
    return BlackburnSet(tuple(members), identity_pda(g, span * (b // d)))


def _a2(x: int) -> tuple[PdaArray, PdaArray]:
    return (PdaArray([[x, x + 1], [x + 2, x + 3]]),
            PdaArray([[x + 3, x + 1], [x + 2, x]]))


def a2r_pair(r: int, x: int = 0) -> tuple[PdaArray, PdaArray]:
    if r < 1:
        raise ParameterError("r must be at least 1")
    if r == 1:
        return _a2(x)
    a, a_alt = a2r_pair(r - 1, x + 2)
    h = 1 << (r - 1)
    lo, hi = identity_pda(h, x), identity_pda(h, x + 1)
    return (_assemble([[lo, a], [a_alt, hi]]), _assemble([[hi, a], [a_alt, lo]]))


def a2r_family(r: int, x: int = 0) -> BlackburnSet:
    """Two compatible arrays of side 2^r using the symbols x .. x + 2r + 1."""
    a, a_alt = a2r_pair(r, x)
    return BlackburnSet((a, a_alt), identity_pda(1 << r, x + 2 * r + 2))


def recursive_expand(bset: BlackburnSet) -> BlackburnSet:
    """Grow a g-member family by a factor g in side.

    Member i carries member ``(k + 1 + i) mod g`` in diagonal slot k and fixed
    symbol-disjoint copies of the reference in every off-diagonal slot.  The new
    reference repeats one fresh copy of the old one along its block diagonal.
    """
    g = bset.b
    n = bset.pstar.f
    if any(m.shape != (n, n) for m in bset.members):
        raise ParameterError("members and reference must be square of equal size")
    span_ref = len(bset.pstar.alphabet)
    nxt = bset.max_symbol + 1
    star_ref = bset.pstar

    def ref_copy() -> PdaArray:
        nonlocal nxt
        out = relabel(star_ref, mapping={s: nxt + i for i, s in enumerate(star_ref.alphabet)})
        nxt += span_ref
        return out

    off = {(j, k): ref_copy() for j in range(g) for k in range(g) if j != k}
    members = []
    for i in range(g):
        rows = []
        for j in range(g):
            rows.append([bset.members[(j + 1 + i) % g] if j == k else off[j, k]
                         for k in range(g)])
        members.append(_assemble(rows))
    diag = ref_copy()
    ref = _assemble([[diag if j == k else _all_star(n) for k in range(g)]
                     for j in range(g)])
    return BlackburnSet(tuple(members), ref)


# ------------------------------------------------------- fixed tall pairs

_TALL5 = (
    """
    0 * * 1 6
    2 1 * * 7
    * 5 2 * 3
    * 4 9 3 *
    * * 0 5 4
    * * 1 * 8
    9 * * 7 *
    3 8 * * *
    4 * 6 * *
    * 0 * 2 *
    """,
    """
    * * * 1 6
    2 * * * 7
    * 5 * * 3
    * 4 9 * *
    * * 0 5 *
    5 * 1 * 8
    9 6 * 7 *
    3 8 7 * *
    4 * 6 8 *
    * 0 * 2 9
    """,
)


def _stacked_identities(n: int, copies: int, start: int) -> PdaArray:
    return PdaArray(np.vstack([identity_pda(n, start + k).grid for k in range(copies)]))


def tall_pair_5() -> BlackburnSet:
    """Two 10 x 5 arrays whose symbols occur five times in total.

    Lifting a 2-regular base with this pair gives a 5-regular array.
    """
    members = tuple(PdaArray.parse(t) for t in _TALL5)
    return BlackburnSet(members, _stacked_identities(5, 2, 10))


def shifted_diag_block(i: int, symbols: Sequence[int]) -> np.ndarray:
    """3 x 3 block with stars on the cyclic diagonal ``y = x - i``.

    The k-th symbol fills the two cells that avoid row ``(k + i) mod 3``.
    """
    g = np.full((3, 3), STAR, dtype=np.int64)
    for k, s in enumerate(symbols):
        w = (k + i) % 3
        u1, u2 = (u for u in range(3) if u != w)
        g[u1, (u2 - i) % 3] = s
        g[u2, (u1 - i) % 3] = s
    return g


def tall_pair_3() -> BlackburnSet:
    """Two 12 x 3 arrays: a dense 3 x 3 block over three shifted-diagonal blocks.

    Every symbol occurs once in one member and twice in the other, so a
    2-regular base lifts to a 3-regular array.
    """

    def member(dense: range, groups: Sequence[Sequence[int]]) -> PdaArray:
        parts = [dense_pda(3, dense).grid]
        parts += [shifted_diag_block(i, grp) for i, grp in enumerate(groups)]
        return PdaArray(np.vstack(parts))

    p0 = member(range(9), [(9, 13, 17), (10, 14, 15), (11, 12, 16)])
    p1 = member(range(9, 18), [(0, 4, 8), (1, 5, 6), (2, 3, 7)])
    return BlackburnSet((p0, p1), _stacked_identities(3, 4, 18))
