"""Primitive square arrays and the graph-based 1- and 2-regular families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import STAR, PdaArray, normalize_alphabet
from .errors import ParameterError


def _symbols(symbols: Sequence[int] | None, need: int, start: int = 0) -> list[int]:
    if symbols is None:
        return list(range(start, start + need))
    symbols = [int(s) for s in symbols]
    if len(symbols) != need:
        raise ParameterError(f"need exactly {need} symbols, got {len(symbols)}")
    if len(set(symbols)) != need:
        raise ParameterError("symbols must be distinct")
    return symbols


def identity_pda(n: int, t: int = 0) -> PdaArray:
    """``t`` on the main diagonal, stars elsewhere: an n-regular (n, n, n-1, 1)."""
    if n < 1:
        raise ParameterError("n must be positive")
    g = np.full((n, n), STAR, dtype=np.int64)
    np.fill_diagonal(g, t)
    return PdaArray(g)


def anti_identity_pda(n: int, t: int = 0) -> PdaArray:
    """``t`` on the anti-diagonal, stars elsewhere."""
    if n < 1:
        raise ParameterError("n must be positive")
    g = np.full((n, n), STAR, dtype=np.int64)
    g[np.arange(n), n - 1 - np.arange(n)] = t
    return PdaArray(g)


def dense_pda(n: int, symbols: Sequence[int] | None = None) -> PdaArray:
    """Star-free n x n array filled row-major with ``n*n`` distinct symbols."""
    if n < 1:
        raise ParameterError("n must be positive")
    return PdaArray(np.array(_symbols(symbols, n * n), dtype=np.int64).reshape(n, n))


def diag2_pda(n: int, symbols: Sequence[int] | None = None, upper: bool = False) -> PdaArray:
    """Symmetric 2-regular array with stars on the main diagonal.

    Symbols are laid out row-major over the cells below the diagonal and
    mirrored.  With ``upper=True`` the cells above the diagonal are used for
    the row-major fill instead.
    """
    if n < 2:
        raise ParameterError("n must be at least 2")
    syms = _symbols(symbols, n * (n - 1) // 2)
    g = np.full((n, n), STAR, dtype=np.int64)
    if upper:
        r, c = np.triu_indices(n, 1)
    else:
        r, c = np.tril_indices(n, -1)
    g[r, c] = syms
    g[c, r] = syms
    return PdaArray(g)


def antidiag2_pda(n: int, symbols: Sequence[int] | None = None) -> PdaArray:
    """2-regular array with stars on the anti-diagonal.

    Symbols fill the cells above the anti-diagonal row-major and are mirrored
    across it, so (i, j) and (n-1-j, n-1-i) carry the same symbol.
    """
    if n < 2:
        raise ParameterError("n must be at least 2")
    syms = iter(_symbols(symbols, n * (n - 1) // 2))
    g = np.full((n, n), STAR, dtype=np.int64)
    for i in range(n):
        for j in range(n - 1 - i):
            s = next(syms)
            g[i, j] = s
            g[n - 1 - j, n - 1 - i] = s
    return PdaArray(g)


# ------------------------------------------------------------------- graphs


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: int


@dataclass(frozen=True)
class EdgeLabeledGraph:
    n: int
    edges: tuple[Edge, ...]

    def edge_set(self) -> set[frozenset[int]]:
        return {frozenset((e.u, e.v)) for e in self.edges}

    def label_of(self, u: int, v: int) -> int:
        for e in self.edges:
            if {e.u, e.v} == {u, v}:
                return e.label
        raise KeyError((u, v))

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg


def associated_graph(p: PdaArray) -> EdgeLabeledGraph:
    """Graph on the columns of a 2-regular array with one edge per symbol."""
    edges = []
    for s, (_, cols) in sorted(p.occurrences.items()):
        if len(cols) != 2:
            raise ParameterError(f"symbol {s} occurs {len(cols)} times, expected 2")
        u, v = sorted(int(c) for c in cols)
        edges.append(Edge(u, v, s))
    return EdgeLabeledGraph(p.K, tuple(edges))


@dataclass(frozen=True)
class OneFactorization:
    n: int
    factors: tuple[tuple[tuple[int, int], ...], ...]


def one_factorization(n: int) -> OneFactorization:
    """Round-robin split of the complete graph on an even number of vertices."""
    if n < 2 or n % 2:
        raise ParameterError("one-factorization needs an even n >= 2")
    m = n - 1
    factors = []
    for r in range(m):
        pairs = [(min(r, m), max(r, m))]
        for k in range(1, n // 2):
            a, b = (r + k) % m, (r - k) % m
            pairs.append((min(a, b), max(a, b)))
        factors.append(tuple(pairs))
    return OneFactorization(n, tuple(factors))


@dataclass(frozen=True)
class HamiltonianDecomposition:
    n: int
    cycles: tuple[tuple[int, ...], ...]

    def cycle_edges(self, i: int) -> list[tuple[int, int]]:
        c = self.cycles[i]
        return [tuple(sorted((c[k], c[(k + 1) % len(c)]))) for k in range(len(c))]


def hamiltonian_decomposition(n: int) -> HamiltonianDecomposition:
    """Zig-zag decomposition of the complete graph on an odd n into (n-1)/2 cycles."""
    if n < 3 or n % 2 == 0:
        raise ParameterError("Hamiltonian decomposition needs an odd n >= 3")
    m = n - 1  # rim vertices 0..m-1, hub vertex m
    cycles = []
    for i in range(m // 2):
        path = [i]
        for k in range(1, m // 2 + 1):
            path.append((i + k) % m)
            if len(path) < m:
                path.append((i - k) % m)
        cycles.append(tuple([m] + path))
    return HamiltonianDecomposition(n, tuple(cycles))


def star_substitute(p: PdaArray, remove: Sequence[int]) -> PdaArray:
    """Turn every cell holding one of ``remove`` into a star.

    The removed symbols must span a regular subgraph of the associated graph,
    which keeps the per-column star count uniform.
    """
    drop = np.isin(p.grid, np.asarray(list(remove), dtype=np.int64))
    counts = drop.sum(axis=0)
    if len(set(counts.tolist())) > 1:
        raise ParameterError("removed symbols do not form a regular spanning subgraph")
    return PdaArray(np.where(drop, STAR, p.grid))


def two_pda(n: int, Z: int) -> PdaArray:
    """2-regular (n, n, Z, n(n-Z)/2) array for any ``1 <= Z < n``.

    Starts from the diagonal-star symmetric array and deletes one-factors
    (even n) or Hamiltonian cycles (odd n) of its associated complete graph.
    The symbols are renumbered by first appearance.
    """
    if not 1 <= Z < n:
        raise ParameterError(f"need 1 <= Z < n, got n={n}, Z={Z}")
    if n % 2 == 0:
        parts = [list(f) for f in one_factorization(n).factors]
        take = Z - 1
    else:
        if (Z - 1) % 2:
            raise ParameterError(f"for odd n the star count Z must be odd, got Z={Z}")
        hd = hamiltonian_decomposition(n)
        parts = [hd.cycle_edges(i) for i in range(len(hd.cycles))]
        take = (Z - 1) // 2
    base = diag2_pda(n)
    removed = [int(base.grid[u, v]) for part in parts[:take] for u, v in part]
    return normalize_alphabet(star_substitute(base, removed))


def one_pda(n: int, Z: int) -> PdaArray:
    """1-regular (n, n, Z, n(n-Z)) array: stars on Z cyclic diagonals."""
    if not 0 <= Z < n:
        raise ParameterError(f"need 0 <= Z < n, got n={n}, Z={Z}")
    r, c = np.indices((n, n))
    star = ((c - r) % n) < Z
    g = np.where(star, STAR, 0)
    g[~star] = np.arange(int((~star).sum()))
    return PdaArray(g)
