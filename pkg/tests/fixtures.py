"""Literal arrays used as golden inputs.

Each entry records the grid as text and the parameters it is declared to
have.  Placeholder symbols of reference arrays are given concrete values
starting at 100 so they never clash with member symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pdalift.core import STAR, PdaArray


def arr(text: str) -> PdaArray:
    return PdaArray.parse(text)


def fresh_copy(p: PdaArray, start: int) -> tuple[np.ndarray, int]:
    """``p`` with its symbols renumbered from ``start`` in order of value."""
    syms = sorted(set(int(s) for s in p.grid.ravel() if s != STAR))
    lut = {s: start + k for k, s in enumerate(syms)}
    g = np.array([[STAR if c == STAR else lut[int(c)] for c in row] for row in p.grid])
    return g, start + len(syms)


def lift_identity(members: list[PdaArray], pstar: PdaArray) -> PdaArray:
    """Block array with ``members`` on the diagonal and fresh ``pstar`` copies elsewhere."""
    g = len(members)
    n, m = pstar.shape
    nxt = max(max(int(q.grid.max()) for q in members), int(pstar.grid.max())) + 1
    out = np.full((g * n, g * m), STAR, dtype=np.int64)
    for i in range(g):
        for j in range(g):
            if i == j:
                block = members[i].grid
            else:
                block, nxt = fresh_copy(pstar, nxt)
            out[i * n:(i + 1) * n, j * m:(j + 1) * m] = block
    return PdaArray(out)


def blocks(grid_of_arrays) -> PdaArray:
    return PdaArray(np.block([[a.grid for a in row] for row in grid_of_arrays]))


def ident(n: int, t: int) -> PdaArray:
    g = np.full((n, n), STAR, dtype=np.int64)
    np.fill_diagonal(g, t)
    return PdaArray(g)


@dataclass(frozen=True)
class Fixture:
    name: str
    pda: PdaArray
    K: int
    f: int
    Z: int | None = None
    S: int | None = None
    g: int | None = None


# ---------------------------------------------------------------- small ones

G3_465 = arr("""
4 6 *
5 * 6
* 5 4
""")
G3_645 = arr("""
6 4 *
5 * 4
* 5 6
""")
H3_321 = arr("""
* 3 2
3 * 1
2 1 *
""")
I3_1 = arr("""
1 * *
* 1 *
* * 1
""")
ITILDE3_0 = arr("""
* * 0
* 0 *
0 * *
""")
J3 = arr("""
0 1 2
3 4 5
6 7 8
""")

# two basic-lifting results on 9 users
BASIC_9_6 = arr("""
0 * * 1 * * 2 * *
* 0 * * 1 * * 2 *
* * 0 * * 1 * * 2
3 * * 4 * * 5 * *
* 3 * * 4 * * 5 *
* * 3 * * 4 * * 5
6 * * 7 * * 8 * *
* 6 * * 7 * * 8 *
* * 6 * * 7 * * 8
""")
BASE_B2 = arr("""
* 0 1
0 * 2
1 2 *
""")
BASIC_9_5 = arr("""
* * * 0 1 * * 3 4
* * * 2 * 1 3 * 5
* * * * 2 0 4 5 *
0 1 * * * * 6 7 *
2 * 1 * * * 8 * 7
* 2 0 * * * * 8 6
* 3 4 6 7 * * * *
3 * 5 8 * 7 * * *
4 5 * * 8 6 * * *
""")

# a column lifted by two arrays sharing one symbol
TRIVIAL_2_4 = arr("""
0 *
* *
* *
* 0
""")

# two individually irregular 3 x 3 arrays lifted over a diagonal base
A3_P0 = arr("""
* 0 2
0 * 1
3 1 *
""")
A3_P1 = arr("""
1 2 *
3 * 2
* 3 0
""")
A3_LIFT = blocks([[A3_P0, arr("* * *\n* * *\n* * *")],
                  [arr("* * *\n* * *\n* * *"), A3_P1]])

G4_6 = arr("""
0 1 2 *
3 4 * 2
5 * 4 1
* 5 3 0
""")
L6_3 = arr("""
* 0 2 4 * *
0 * 1 * 4 *
3 1 * * * 4
5 * * 1 2 *
* 5 * 3 * 2
* * 5 * 3 0
""")

# ------------------------------------------------------------- tall pairs

TALL5_P0 = arr("""
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
""")
TALL5_P1 = arr("""
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
""")
TALL5_STAR = PdaArray(np.vstack([ident(5, 100).grid, ident(5, 101).grid]))

# ---------------------------------------------------------- C1, C2, T1

C1_P0 = J3
C1_P1 = arr("""
8 1 2
3 0 5
6 7 4
""")
C1_P2 = arr("""
4 1 2
3 8 5
6 7 0
""")
C2_Q0 = arr("""
0 1 2 *
3 4 * 2
5 * 4 1
* 5 3 0
""")
C2_Q1 = arr("""
4 1 2 *
3 0 * 2
5 * 0 1
* 5 3 4
""")
T1_STAR = arr("""
*   100 101
100 *   102
101 102 *
""")
T1_P1 = arr("""
0 3 6
1 4 7
2 5 8
""")
T1_LIFT = arr("""
6  7  8  *  0  1
9  10 11 0  *  2
12 13 14 1  2  *
*  3  4  6  9  12
3  *  5  7  10 13
4  5  *  8  11 14
""")

# ------------------------------------------------------------ block-wise

BW1_STAR = arr("""
*   *   *   100 *   *   *   101
*   *   100 *   *   *   101 *
*   100 *   *   *   101 *   *
100 *   *   *   101 *   *   *
*   *   *   102 *   *   *   103
*   *   102 *   *   *   103 *
*   102 *   *   *   103 *   *
102 *   *   *   103 *   *   *
""")
H8 = arr("""
* 0  1  2  3  4  5  6
0 *  7  8  9  10 11 12
1 7  *  13 14 15 16 17
2 8  13 *  18 19 20 21
3 9  14 18 *  22 23 24
4 10 15 19 22 *  25 26
5 11 16 20 23 25 *  27
6 12 17 21 24 26 27 *
""")
BW1_P1 = arr("""
*  0  1  7  3  4  5  15
0  *  2  8  9  10 18 12
1  2  *  13 14 6  16 17
7  8  13 *  11 19 20 21
3  9  14 11 *  22 23 25
4  10 6  19 22 *  24 26
5  18 16 20 23 24 *  27
15 12 17 21 25 26 27 *
""")
BW2_STAR = arr("""
*   102 *   104 *   *   *   100
102 *   104 *   *   *   100 *
*   103 *   105 *   100 *   *
103 *   105 *   100 *   *   *
*   *   *   101 *   102 *   103
*   *   101 *   102 *   103 *
*   101 *   *   *   104 *   105
101 *   *   *   104 *   105 *
""")
BW2_P1 = arr("""
*  22 23 25 3  4  5  15
22 *  24 26 9  10 18 12
23 24 *  27 14 6  16 17
25 26 27 *  11 19 20 21
3  9  14 11 *  0  1  7
4  10 6  19 0  *  2  8
5  18 16 20 1  2  *  13
15 12 17 21 7  8  13 *
""")
BW3_STAR = arr("""
*   100 101 *   *   *
100 *   102 *   *   *
101 102 *   *   *   *
*   *   *   *   100 101
*   *   *   100 *   102
*   *   *   101 102 *
""")
BW3_P0 = arr("""
* 0 1  2  3  4
0 * 5  6  7  8
1 5 *  9  10 11
2 6 9  *  12 13
3 7 10 12 *  14
4 8 11 13 14 *
""")
BW3_P1 = arr("""
*  12 13 2  3  4
12 *  14 6  7  8
13 14 *  9  10 11
2  6  9  *  0  1
3  7  10 0  *  5
4  8  11 1  5  *
""")
BW4_STAR = arr("""
*   104 103 106 *   *   *   100
104 *   102 105 *   *   100 *
103 102 *   107 *   100 *   *
106 105 107 *   100 *   *   *
*   *   *   101 *   104 103 102
*   *   101 *   104 *   106 105
*   101 *   *   103 106 *   107
101 *   *   *   102 105 107 *
""")
BW4_P0 = PdaArray(np.arange(64).reshape(2, 2, 4, 4).transpose(0, 2, 1, 3).reshape(8, 8))
BW4_PT0 = arr("""
0  4  8  12 16 17 18 22
1  5  9  13 20 21 25 23
2  6  10 14 24 28 26 27
3  7  11 15 19 29 30 31
32 33 34 38 48 52 56 60
36 37 41 39 49 53 57 61
40 44 42 43 50 54 58 62
35 45 46 47 51 55 59 63
""")
BW4_P1 = arr("""
48 49 50 57 16 17 18 25
52 53 60 55 20 21 28 23
56 51 58 59 24 19 26 27
54 61 62 63 22 29 30 31
32 33 34 41 0  1  2  9
36 37 44 39 4  5  12 7
40 35 42 43 8  3  10 11
38 45 46 47 6  13 14 15
""")
BW4_PT1 = arr("""
48 52 56 54 16 17 18 28
49 53 51 61 20 21 19 23
50 60 58 62 24 22 26 27
57 55 59 63 25 29 30 31
32 33 34 44 0  4  8  6
36 37 35 39 1  5  3  13
40 38 42 43 2  12 10 14
41 45 46 47 9  7  11 15
""")

# ------------------------------------------------------- tiling examples


def _tile(q: int, labels) -> PdaArray:
    return blocks([[ident(q, t) for t in row] for row in labels])


TILE6 = [_tile(2, [[0, 1, 2], [3, 4, 5], [6, 7, 8]]),
         _tile(2, [[8, 1, 2], [3, 0, 5], [6, 7, 4]]),
         _tile(2, [[4, 1, 2], [3, 8, 5], [6, 7, 0]])]
TILE4 = [_tile(3, [[0, 1], [2, 3]]), _tile(3, [[3, 1], [2, 0]]),
         _tile(3, [[4, 5], [6, 7]]), _tile(3, [[7, 5], [6, 4]])]

# ------------------------------------------------------ doubling pair


def a2(x: int) -> PdaArray:
    return PdaArray([[x, x + 1], [x + 2, x + 3]])


def a2p(x: int) -> PdaArray:
    return PdaArray([[x + 3, x + 1], [x + 2, x]])


def a2r(r: int, x: int) -> tuple[PdaArray, PdaArray]:
    """The recursive pair written out block by block."""
    if r == 1:
        return a2(x), a2p(x)
    h = 1 << (r - 1)
    lo, lo_p = a2r(r - 1, x + 2)
    first = blocks([[ident(h, x), lo], [lo_p, ident(h, x + 1)]])
    second = blocks([[ident(h, x + 1), lo], [lo_p, ident(h, x)]])
    return first, second


A4, A4P = a2r(2, 0)


GOLDEN = [
    Fixture("G3(4,6,5)", G3_465, 3, 3, 1, 3, 2),
    Fixture("G3(6,4,5)", G3_645, 3, 3, 1, 3, 2),
    Fixture("H3(3,2,1)", H3_321, 3, 3, 1, 3, 2),
    Fixture("I3(1)", I3_1, 3, 3, 2, 1, 3),
    Fixture("anti I3(0)", ITILDE3_0, 3, 3, 2, 1, 3),
    Fixture("J3", J3, 3, 3, 0, 9, 1),
    Fixture("basic 9x9 gain 3", BASIC_9_6, 9, 9, 6, 9, 3),
    Fixture("basic 9x9 gain 4", BASIC_9_5, 9, 9, 5, 9, 4),
    Fixture("shared-symbol column lift", TRIVIAL_2_4, 2, 4, 3, 1, 2),
    Fixture("irregular pair lift", A3_LIFT, 6, 6, g=3),
    Fixture("G4 lift", G4_6, 4, 4, 1, 6, 2),
    Fixture("3x3 pair lift", L6_3, 6, 6, 3, 6, 3),
    Fixture("10x5 pair lift", lift_identity([TALL5_P0, TALL5_P1], TALL5_STAR), 10, 20, 13, 14, 5),
    Fixture("C1 lift", lift_identity([C1_P0, C1_P1, C1_P2], ident(3, 100)), 9, 9, 4, 15, 3),
    Fixture("C2 lift", lift_identity([C2_Q0, C2_Q1], ident(4, 100)), 8, 8, 4, 8, 4),
    Fixture("T1 lift", T1_LIFT, 6, 6, 1, 15, 2),
    Fixture("BW1 lift", lift_identity([H8, BW1_P1], BW1_STAR), 16, 16, 7, 36, 4),
    Fixture("BW2 lift", lift_identity([H8, BW2_P1], BW2_STAR), 16, 16, 6, 40, 4),
    Fixture("BW3 lift", lift_identity([BW3_P0, BW3_P1], BW3_STAR), 12, 12, 5, 21, 4),
    Fixture("BW4 lift", lift_identity([BW4_P0, BW4_P1, BW4_PT0, BW4_PT1], BW4_STAR),
            32, 32, 12, 160, 4),
    Fixture("tiling g6 d3", lift_identity(TILE6, ident(6, 100)), 18, 18, 13, 15, 6),
    Fixture("tiling g6 b4", lift_identity(TILE4, ident(6, 100)), 24, 24, 19, 20, 6),
    Fixture("A2 pair lift", lift_identity([a2(0), a2p(0)], ident(2, 100)), 4, 4, 1, 6, 2),
    Fixture("A4 pair lift", lift_identity([A4, A4P], ident(4, 100)), 8, 8, 4, 8, 4),
]


def same_up_to_relabel(a: PdaArray, b: PdaArray) -> bool:
    """True when a symbol bijection maps ``a`` onto ``b`` cell by cell."""
    if a.shape != b.shape or not np.array_equal(a.grid == STAR, b.grid == STAR):
        return False
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    for x, y in zip(a.grid.ravel().tolist(), b.grid.ravel().tolist()):
        if x == STAR:
            continue
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True
