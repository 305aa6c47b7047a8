"""Placement delivery arrays for coded caching, built by lifting small arrays."""

from .base import anti_identity_pda, dense_pda, diag2_pda, identity_pda, one_pda, two_pda
from .blackburn import BlackburnSet
from .caching import FileStore, RoundTripReport, decode, deliver, place, round_trip_verify
from .chain import LiftChain, Step, parse_chain, render_chain
from .core import (
    STAR,
    PdaArray,
    PdaParams,
    ValidationReport,
    blackburn_compatible,
    blackburn_set_check,
    params,
    regularity,
    test_diagonal_compat,
    validate,
)
from .errors import PdaError
from .lifting import basic_lift, general_lift, lift2r, nested2g, regular_basic_lift, regular_lift
from .pipeline import ChainResult, run_chain
from .randbc import RandBcOutcome, RandBcSpec, rand_bc
from .sweep import TradeoffPoint, mn_baseline, sweep

__all__ = [
    "STAR", "PdaArray", "PdaParams", "ValidationReport", "validate", "params", "regularity",
    "blackburn_compatible", "blackburn_set_check", "test_diagonal_compat",
    "identity_pda", "anti_identity_pda", "dense_pda", "diag2_pda", "one_pda", "two_pda",
    "BlackburnSet", "basic_lift", "regular_basic_lift", "general_lift", "regular_lift",
    "lift2r", "nested2g", "RandBcSpec", "RandBcOutcome", "rand_bc",
    "FileStore", "place", "deliver", "decode", "round_trip_verify", "RoundTripReport",
    "LiftChain", "Step", "parse_chain", "render_chain", "run_chain", "ChainResult",
    "TradeoffPoint", "sweep", "mn_baseline", "PdaError",
]
