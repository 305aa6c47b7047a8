"""Enumerate lifting chains for a user count and collect the achieved points.

Chains grow breadth-first from small bases; every step multiplies the number
of users and must keep it a divisor of the target.  Arrays with identical
parameters are merged, keeping the first (shortest) chain, so every reported
point comes from an array that was actually built and validated.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from math import comb, isqrt
from typing import Iterable, Iterator, Sequence

from .chain import LiftChain, Step
from .core import PdaArray, PdaParams, params
from .errors import PdaError
from .pipeline import apply_step, build_base

FAMILIES = ("basic", "c1", "c2", "t1", "t2", "bw1", "bw2", "bw3", "bw4",
            "tiling", "tilingx", "lift2r", "randbc")

CSV_COLUMNS = ["K", "f", "Z", "S", "g", "mem_num", "mem_den", "rate_num", "rate_den",
               "mem", "rate", "chain"]

_DEC = Context(prec=12)


def decimal_text(x: Fraction) -> str:
    """``x`` rounded to 12 significant digits, without exponent notation."""
    d = _DEC.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(d, "f")


@dataclass(frozen=True)
class TradeoffPoint:
    K: int
    f: int
    Z: int
    S: int
    g: int | None
    chain: str
    min_z: bool = False
    derived: bool = False

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.Z, self.f)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.S, self.f)

    @classmethod
    def from_params(cls, prm: PdaParams, chain: str) -> TradeoffPoint:
        return cls(prm.K, prm.f, prm.Z, prm.S, prm.g, chain)

    def row(self) -> dict[str, object]:
        m, r = self.memory_ratio, self.rate
        return {
            "K": self.K, "f": self.f, "Z": self.Z, "S": self.S,
            "g": "" if self.g is None else self.g,
            "mem_num": m.numerator, "mem_den": m.denominator,
            "rate_num": r.numerator, "rate_den": r.denominator,
            "mem": decimal_text(m), "rate": decimal_text(r), "chain": self.chain,
        }

    def to_json(self) -> dict:
        out = self.row()
        out["minZ"] = self.min_z
        out["derived"] = self.derived
        return out


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _base_steps(K: int) -> Iterator[Step]:
    # largest bases first, so a point reachable in equally many steps keeps
    # the chain that needs the smallest family
    for n in reversed(_divisors(K)):
        if n < 2:
            continue
        for z in range(1, n):
            if n % 2 == 0 or z % 2 == 1:
                yield Step("2pda", (n, z))
        for z in range(n):
            yield Step("1pda", (n, z))
        yield Step("i", (n,))


def _candidate_steps(m: int, g: int | None, families: frozenset[str],
                     randbc_max_r: int) -> Iterator[Step]:
    """Steps that multiply the user count by a divisor of ``m``, for a g-regular base."""
    divs = [d for d in _divisors(m) if d > 1]
    if "basic" in families:
        for n in divs:
            for z in range(1, n):
                if n % 2 == 0 or z % 2 == 1:
                    yield Step("basic", (n, z))
            for z in range(n):
                yield Step("basic", (n, z, 1))
            yield Step("basic", (n, n - 1, n))
    if g is None:
        return
    for n in divs:
        if "c1" in families and n == g:
            yield Step("c1", (g,))
        if "c2" in families and n == 2 * g:
            yield Step("c2", (g,))
        if g == 2 and "t1" in families:
            for z in range(n):
                yield Step("t1", (n, z))
        if g == 2 and "t2" in families:
            for i in range(1, n):
                yield Step("t2", (n, i))
        if n % g == 0:
            if "bw1" in families and g * g <= n:
                yield Step("bw1", (n, g))
            if "bw2" in families and n % (g * g) == 0:
                yield Step("bw2", (n, g))
            if "bw3" in families:
                yield Step("bw3", (n, g))
            if "tiling" in families:
                yield Step("tiling", (n, g))
        elif "tilingx" in families:
            yield Step("tilingx", (n, g))
        if "bw4" in families and n == 2 * g * g:
            yield Step("bw4", (g,))
        if g == 2 and "lift2r" in families and n & (n - 1) == 0:
            yield Step("lift2r", (n.bit_length() - 1,))
        if "randbc" in families and n <= randbc_max_r:
            for e in range(n):
                yield Step("randbc", (n, e))


def sweep(K: int, families: Iterable[str] = FAMILIES, max_steps: int = 4,
          randbc_max_r: int = 4, randbc_attempts: int = 20) -> list[TradeoffPoint]:
    """All distinct points with ``K`` users reachable within ``max_steps`` lifts.

    Points are sorted by memory ratio, then rate, and the smallest ``Z`` for
    each gain is flagged.
    """
    if K < 2:
        raise ValueError("need at least two users")
    fam = frozenset(families)
    unknown = fam - set(FAMILIES)
    if unknown:
        raise ValueError(f"unknown families {sorted(unknown)}")
    seen: dict[tuple, tuple[LiftChain, PdaArray, PdaParams]] = {}
    frontier: list[tuple[LiftChain, PdaArray, PdaParams]] = []
    for step in _base_steps(K):
        p = build_base(step)
        prm = params(p)
        key = prm.as_tuple()
        if key not in seen:
            seen[key] = (LiftChain(step), p, prm)
            frontier.append(seen[key])
    for _ in range(max_steps):
        nxt = []
        for chain, p, prm in frontier:
            if prm.K == K:
                continue
            for step in _candidate_steps(K // prm.K, prm.g, fam, randbc_max_r):
                try:
                    q = apply_step(p, step, randbc_attempts)
                    qprm = params(q)
                except PdaError:
                    continue
                key = qprm.as_tuple()
                if key not in seen and K % qprm.K == 0:
                    seen[key] = (chain.then(step), q, qprm)
                    nxt.append(seen[key])
        frontier = nxt
    points = [TradeoffPoint.from_params(prm, chain.render())
              for chain, _, prm in seen.values() if prm.K == K]
    return flag_minima(sort_points(points))


def sort_points(points: Iterable[TradeoffPoint]) -> list[TradeoffPoint]:
    return sorted(points, key=lambda t: (t.memory_ratio, t.rate, t.f, t.chain))


def flag_minima(points: Sequence[TradeoffPoint]) -> list[TradeoffPoint]:
    """Mark, for every gain, the regular points with the smallest memory ratio."""
    best: dict[int, Fraction] = {}
    for t in points:
        if t.g is not None and (t.g not in best or t.memory_ratio < best[t.g]):
            best[t.g] = t.memory_ratio
    return [TradeoffPoint(t.K, t.f, t.Z, t.S, t.g, t.chain,
                          t.g is not None and t.memory_ratio == best[t.g], t.derived)
            for t in points]


def mn_baseline(K: int, t: int) -> tuple[Fraction, Fraction, int]:
    """Memory ratio, rate and subpacketization of the uncoded-placement scheme with parameter t."""
    if not 0 <= t <= K:
        raise ValueError(f"need 0 <= t <= K, got t={t}")
    return Fraction(t, K), Fraction(K - t, 1 + t), comb(K, t)


def mn_points(K: int) -> list[TradeoffPoint]:
    out = []
    for t in range(K + 1):
        f = comb(K, t)
        Z = comb(K - 1, t - 1) if t else 0
        out.append(TradeoffPoint(K, f, Z, comb(K, t + 1), t + 1, f"mn({t})"))
    return out


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: Iterable[TradeoffPoint]) -> list[TradeoffPoint]:
    """Vertices of the lower convex hull in the (memory ratio, rate) plane."""
    best: dict[Fraction, TradeoffPoint] = {}
    for t in sort_points(points):
        best.setdefault(t.memory_ratio, t)
    pts = sorted(best.values(), key=lambda t: t.memory_ratio)
    hull: list[TradeoffPoint] = []
    for t in pts:
        xy = (t.memory_ratio, t.rate)
        while len(hull) >= 2 and _cross((hull[-2].memory_ratio, hull[-2].rate),
                                        (hull[-1].memory_ratio, hull[-1].rate), xy) <= 0:
            hull.pop()
        hull.append(t)
    return [TradeoffPoint(t.K, t.f, t.Z, t.S, t.g, t.chain, t.min_z, True) for t in hull]


def to_csv(points: Iterable[TradeoffPoint], with_derived: bool = False) -> str:
    buf = io.StringIO()
    cols = CSV_COLUMNS + (["derived"] if with_derived else [])
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for t in points:
        row = t.row()
        if with_derived:
            row["derived"] = "true" if t.derived else "false"
        w.writerow(row)
    return buf.getvalue()
