"""Seeded greedy search for compatible families with arbitrary parameters.

Members are ``eta*r x alpha*r`` arrays compatible with respect to an
``eta x alpha`` grid of ``r x r`` identity blocks.  Symbols are placed one
occurrence at a time, cycling through the members, at the admissible cell with
the smallest penalty.  The penalty counts how many rows and columns of the
other members stop being usable for the current symbol, plus how crowded the
target row and column already are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blackburn import BlackburnSet
from .core import STAR, PdaArray, blackburn_set_check, regularity
from .errors import ExhaustedAttempts, ParameterError


@dataclass(frozen=True)
class RandBcSpec:
    b: int
    r: int
    e: int
    alpha: int = 1
    eta: int = 1
    seed: int = 0
    max_attempts: int = 100

    def __post_init__(self):
        for name in ("b", "r", "alpha", "eta", "max_attempts"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive")
        if not 0 <= self.e < self.eta * self.r:
            raise ParameterError(f"need 0 <= e < eta*r, got e={self.e}")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.eta * self.r, self.alpha * self.r

    @property
    def symbols(self) -> int:
        return self.b * self.alpha * (self.eta * self.r - self.e)

    def to_json(self) -> dict:
        return {"b": self.b, "r": self.r, "e": self.e, "alpha": self.alpha,
                "eta": self.eta, "seed": self.seed, "maxAttempts": self.max_attempts}

    @classmethod
    def from_json(cls, obj: dict) -> RandBcSpec:
        return cls(obj["b"], obj["r"], obj["e"], obj.get("alpha", 1), obj.get("eta", 1),
                   obj.get("seed", 0), obj.get("maxAttempts", 100))


@dataclass(frozen=True)
class RandBcOutcome:
    success: bool
    members: tuple[PdaArray, ...]
    pstar: PdaArray
    attempts_used: int
    seed_used: int
    failed_symbol: int | None = None
    failures: tuple[int, ...] = field(default=())

    def family(self) -> BlackburnSet:
        if not self.success:
            raise ExhaustedAttempts(
                f"no success in {self.attempts_used} attempts "
                f"(last failure at symbol {self.failed_symbol})", self)
        return BlackburnSet(self.members, self.pstar)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "attemptsUsed": self.attempts_used,
            "seedUsed": self.seed_used,
            "failedSymbol": self.failed_symbol,
            "members": [m.to_cells() for m in self.members],
            "pstar": self.pstar.to_cells(),
        }


def identity_block_reference(r: int, eta: int, alpha: int, start: int) -> PdaArray:
    """``eta x alpha`` grid of ``r x r`` identity blocks, one fresh symbol each."""
    g = np.full((eta * r, alpha * r), STAR, dtype=np.int64)
    for a in range(eta):
        for c in range(alpha):
            block = g[a * r:(a + 1) * r, c * r:(c + 1) * r]
            np.fill_diagonal(block, start + a * alpha + c)
    return PdaArray(g)


def attempt_seed(seed: int, k: int) -> int:
    """Seed of the k-th attempt, derived deterministically from the base seed."""
    return int(np.random.SeedSequence(seed, spawn_key=(k,)).generate_state(1, np.uint64)[0])


class GreedyState:
    """Mutable placement state for one attempt."""

    def __init__(self, spec: RandBcSpec):
        self.spec = spec
        b, (h, w) = spec.b, spec.shape
        self.grid = np.full((b, h, w), STAR, dtype=np.int64)
        self.reserved = np.zeros((b, h, w), dtype=bool)
        self.col_int = np.zeros((b, w), dtype=np.int64)
        self.row_int = np.zeros((b, h), dtype=np.int64)
        self.col_res = np.zeros((b, w), dtype=np.int64)
        self.cap = h - spec.e
        self.current: int | None = None
        self.where: list[list[tuple[int, int]]] = [[] for _ in range(b)]

    def start_symbol(self, v: int) -> None:
        self.current = v
        self.where = [[] for _ in range(self.spec.b)]

    def placeable(self, j: int) -> np.ndarray:
        """Cells of member ``j`` that may receive the current symbol."""
        r, e = self.spec.r, self.spec.e
        g, res = self.grid[j], self.reserved[j]
        m = (g == STAR) & ~res & (self.col_int[j] < self.cap)[None, :]
        new_res = np.zeros(g.shape[1], dtype=np.int64)
        for x1, y1 in self.where[j]:
            m[x1, :] = False
            m[:, y1] = False
            m[g[:, y1] != STAR, :] = False
            m[:, g[x1, :] != STAR] = False
            if self.col_res[j, y1] + 1 > e:
                m[~res[:, y1], :] = False
            new_res += ~res[x1, :]
        if self.where[j]:
            m[:, self.col_res[j] + new_res > e] = False
        bad_rows = np.zeros(r, dtype=bool)
        bad_cols = np.zeros(r, dtype=bool)
        for k, occ in enumerate(self.where):
            if k != j:
                for x2, y2 in occ:
                    bad_rows[y2 % r] = True
                    bad_cols[x2 % r] = True
        m &= ~np.tile(bad_rows, self.spec.eta)[:, None]
        m &= ~np.tile(bad_cols, self.spec.alpha)[None, :]
        return m

    def penalties(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Admissible cells of member ``i`` and the penalty of each of them."""
        r = self.spec.r
        eta, alpha = self.spec.eta, self.spec.alpha
        free = self.placeable(i)
        h, w = free.shape
        nr = np.zeros((r, r), dtype=np.int64)  # indexed [x % r, y % r]
        nc = np.zeros((r, r), dtype=np.int64)  # indexed [y % r, x % r]
        for j in range(self.spec.b):
            if j == i:
                continue
            a = self.placeable(j)
            # rh[c, x']: row x' has an open cell in a column congruent to c
            rh = a.reshape(h, alpha, r).any(axis=1).T
            ch = a.reshape(eta, r, w).any(axis=0)
            rowany, colany = a.any(axis=1), a.any(axis=0)
            nr += rh.sum(axis=1)[:, None] + (rowany[None, :] ^ rh).reshape(r, eta, r).sum(axis=1)
            nc += ch.sum(axis=1)[:, None] + (colany[None, :] ^ ch).reshape(r, alpha, r).sum(axis=1)
        xs = np.arange(h) % r
        ys = np.arange(w) % r
        pen = (nr[xs[:, None], ys[None, :]] + nc[ys[None, :], xs[:, None]]
               + self.row_int[i][:, None] + self.col_int[i][None, :])
        return free, pen

    def place(self, i: int, x: int, y: int) -> None:
        v = self.current
        for x1, y1 in self.where[i]:
            for cx, cy in ((x, y1), (x1, y)):
                if not self.reserved[i, cx, cy]:
                    self.reserved[i, cx, cy] = True
                    self.col_res[i, cy] += 1
        self.grid[i, x, y] = v
        self.col_int[i, y] += 1
        self.row_int[i, x] += 1
        self.where[i].append((x, y))


def _attempt(spec: RandBcSpec, seed: int) -> tuple[np.ndarray | None, int | None]:
    rng = np.random.default_rng(seed)
    st = GreedyState(spec)
    i = 0
    for v in range(spec.symbols):
        st.start_symbol(v)
        for _ in range(spec.r):
            free, pen = st.penalties(i)
            if not free.any():
                return None, v
            best = np.where(free, pen, np.iinfo(np.int64).max)
            cand = np.argwhere(best == best.min())
            x, y = cand[rng.integers(len(cand))]
            st.place(i, int(x), int(y))
            i = (i + 1) % spec.b
    return st.grid, None


def rand_bc(spec: RandBcSpec) -> RandBcOutcome:
    """Run up to ``spec.max_attempts`` seeded attempts and return the first success."""
    pstar = identity_block_reference(spec.r, spec.eta, spec.alpha, spec.symbols)
    failures = []
    for k in range(spec.max_attempts):
        seed = attempt_seed(spec.seed, k)
        grid, failed = _attempt(spec, seed)
        if grid is not None:
            members = tuple(PdaArray(g) for g in grid)
            return RandBcOutcome(True, members, pstar, k + 1, seed, None, tuple(failures))
        failures.append(failed)
    return RandBcOutcome(False, (), pstar, spec.max_attempts, seed,
                         failures[-1], tuple(failures))


def verify_outcome(outcome: RandBcOutcome, spec: RandBcSpec) -> bool:
    """Independent check of every promised property of a successful outcome."""
    from .base import identity_pda
    from .lifting import regular_lift

    if not outcome.success:
        return False
    members = outcome.members
    if len(members) != spec.b or any(m.shape != spec.shape for m in members):
        return False
    if any((m.column_star_counts() != spec.e).any() for m in members):
        return False
    bset = BlackburnSet(members, outcome.pstar)
    if bset.r != spec.r or len(bset.total_counts()) != spec.symbols:
        return False
    if not blackburn_set_check(members, outcome.pstar).compatible:
        return False
    return regularity(regular_lift(identity_pda(spec.b), bset, check=False)).g == spec.r


def rand_bc_family(b: int, r: int, e: int, alpha: int = 1, eta: int = 1,
                   seed: int = 0, max_attempts: int = 100) -> BlackburnSet:
    return rand_bc(RandBcSpec(b, r, e, alpha, eta, seed, max_attempts)).family()
