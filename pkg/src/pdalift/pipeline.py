"""Execute parsed chains: build the base, apply each lift, check annotations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import blackburn as bb
from .base import antidiag2_pda, dense_pda, diag2_pda, identity_pda, one_pda, two_pda
from .chain import LiftChain, Step, parse_chain
from .core import PdaArray, PdaParams, params, regularity, require_pda
from .errors import ConstructionError, ParameterError
from .lifting import lift2r, regular_basic_lift, regular_lift
from .randbc import RandBcSpec, rand_bc


class StepMismatch(ConstructionError):
    """A step produced parameters different from its annotation."""

    def __init__(self, message: str, index: int, expected, actual: PdaParams):
        super().__init__(message)
        self.index = index
        self.expected = expected
        self.actual = actual


def build_base(step: Step) -> PdaArray:
    a = step.args
    if step.name == "2pda":
        return two_pda(*a)
    if step.name == "1pda":
        return one_pda(*a)
    if step.name == "i":
        return identity_pda(a[0])
    if step.name == "j":
        return dense_pda(a[0])
    if step.name == "g":
        return antidiag2_pda(a[0])
    if step.name == "h":
        return diag2_pda(a[0])
    raise ParameterError(f"unknown base {step.name!r}")


def _gain(p: PdaArray) -> int:
    g = regularity(p).g
    if g is None:
        raise ParameterError("the array is not regular, so the family size is undefined")
    return g


def _basic(p: PdaArray, n: int, z: int, g: int = 2) -> PdaArray:
    if g == 2:
        small = two_pda(n, z)
    elif g == 1:
        small = one_pda(n, z)
    elif g == n and z == n - 1:
        small = identity_pda(n)
    else:
        raise ParameterError(f"no regular ({n},{n},{z}) array with gain {g} is available")
    return regular_basic_lift(p, small)


def _rows(p: PdaArray, k: int) -> PdaArray:
    if k < 1:
        raise ParameterError("k must be positive")
    return regular_basic_lift(p, PdaArray(np.arange(k, dtype=np.int64)[:, None]))


def _nested(p: PdaArray, r: int) -> PdaArray:
    if _gain(p) != 2:
        raise ParameterError("nested doubling needs a 2-regular base")
    for i in range(2, r + 1):
        p = regular_lift(p, bb.c2_set(1 << (i - 1)), check=False)
    return p


@lru_cache(maxsize=512)
def _randbc_outcome(b: int, r: int, e: int, alpha: int, eta: int, seed: int, attempts: int):
    return rand_bc(RandBcSpec(b, r, e, alpha, eta, seed, attempts))


def randbc_family(b: int, r: int, e: int, alpha: int = 1, eta: int = 1,
                  seed: int = 0, attempts: int = 100) -> bb.BlackburnSet:
    """Seeded family; outcomes (failures included) are memoized because the
    search is deterministic and slow.  Attempt k always uses the same derived
    seed, so a family found within a smaller budget is the same family."""
    return _randbc_outcome(b, r, e, alpha, eta, seed, attempts).family()


def _randbc(p: PdaArray, r: int, e: int, alpha: int = 1, eta: int = 1,
            seed: int = 0, *, attempts: int = 100) -> PdaArray:
    fam = randbc_family(_gain(p), r, e, alpha, eta, seed, attempts)
    return regular_lift(p, fam, check=False)


def _family(make: Callable[..., bb.BlackburnSet]) -> Callable[..., PdaArray]:
    def apply(p: PdaArray, *args: int) -> PdaArray:
        return regular_lift(p, make(*args))
    return apply


STEP_IMPL: dict[str, Callable[..., PdaArray]] = {
    "basic": _basic,
    "rows": _rows,
    "c1": _family(bb.c1_set),
    "c2": _family(bb.c2_set),
    "t1": _family(lambda n, z=0: bb.t1_pair(one_pda(n, z))),
    "t2": _family(lambda n, i, z=0: bb.t2_pair(one_pda(n, z), i)),
    "bw1": _family(bb.bw1_set),
    "bw2": _family(bb.bw2_set),
    "bw3": _family(bb.bw3_set),
    "bw4": _family(bb.bw4_set),
    "tiling": _family(bb.tiling_set),
    "tilingx": _family(bb.tiling_set_extended),
    "lift2r": lift2r,
    "nested2g": _nested,
    "randbc": _randbc,
    "pair10x5": _family(bb.tall_pair_5),
    "pair12x3": _family(bb.tall_pair_3),
}


def apply_step(p: PdaArray, step: Step, randbc_attempts: int = 100) -> PdaArray:
    if step.name == "randbc":
        return _randbc(p, *step.args, attempts=randbc_attempts)
    return STEP_IMPL[step.name](p, *step.args)


def check_annotation(step: Step, prm: PdaParams, index: int) -> None:
    a = step.anno
    if a is None:
        return
    got = (prm.K, prm.f, prm.Z) + ((prm.g,) if a.g is not None else ())
    want = (a.K, a.f, a.Z) + ((a.g,) if a.g is not None else ())
    if got != want:
        raise StepMismatch(f"step {index} ({step.render()}) declared {a.render()}, "
                           f"built {prm}", index, a, prm)


@dataclass(frozen=True)
class ChainResult:
    pda: PdaArray
    params: PdaParams
    trace: tuple[PdaParams, ...]


def run_chain(chain: LiftChain | str, validate_steps: bool = False) -> ChainResult:
    """Build the chain and return the final array with per-step parameters.

    The final array is always validated; ``validate_steps`` also validates
    every intermediate one.
    """
    if isinstance(chain, str):
        chain = parse_chain(chain)
    p = build_base(chain.base)
    trace = [params(p, check=validate_steps)]
    for k, step in enumerate(chain.steps, 1):
        p = apply_step(p, step)
        last = k == len(chain.steps)
        prm = params(p, check=validate_steps or last)
        check_annotation(step, prm, k)
        trace.append(prm)
    if not chain.steps:
        require_pda(p)
    return ChainResult(p, trace[-1], tuple(trace))
