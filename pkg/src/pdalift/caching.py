"""Byte-level simulation of the caching scheme defined by an array.

Rows are subfiles and columns are users.  A star at (j, k) means user k
caches subfile j of every file; each integer becomes one XOR multicast packet.
The decoder is deliberately honest: it only reads its own cache and the
packets, so a broken array shows up as a :class:`DecodeFailure`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import STAR, PdaArray, validate
from .errors import BadDemand, DecodeFailure, SubpacketizationMismatch


@dataclass(frozen=True)
class FileStore:
    """``N`` files of ``F`` bytes, each cut into ``f`` equal subfiles."""

    data: np.ndarray  # uint8, shape (N, f, F // f)

    @classmethod
    def random(cls, N: int, F: int, f: int, seed: int = 0) -> FileStore:
        if N < 1 or f < 1 or F < 1:
            raise SubpacketizationMismatch("N, F and f must be positive")
        if F % f:
            raise SubpacketizationMismatch(f"file size {F} is not a multiple of f={f}")
        rng = np.random.default_rng(seed)
        return cls(rng.integers(0, 256, size=(N, f, F // f), dtype=np.uint8))

    @classmethod
    def from_files(cls, files: Sequence[bytes], f: int) -> FileStore:
        sizes = {len(x) for x in files}
        if len(sizes) != 1:
            raise SubpacketizationMismatch("files must all have the same size")
        F = sizes.pop()
        if F % f:
            raise SubpacketizationMismatch(f"file size {F} is not a multiple of f={f}")
        arr = np.frombuffer(b"".join(files), dtype=np.uint8)
        return cls(arr.reshape(len(files), f, F // f).copy())

    @property
    def N(self) -> int:
        return self.data.shape[0]

    @property
    def f(self) -> int:
        return self.data.shape[1]

    @property
    def F(self) -> int:
        return self.data.shape[1] * self.data.shape[2]

    @property
    def subfile_size(self) -> int:
        return self.data.shape[2]

    def file(self, i: int) -> bytes:
        return self.data[i].tobytes()

    def subfile(self, i: int, j: int) -> np.ndarray:
        return self.data[i, j]


@dataclass(frozen=True)
class CacheContents:
    """Subfiles ``rows`` of every file, as an array of shape (N, len(rows), L)."""

    user: int
    rows: tuple[int, ...]
    data: np.ndarray
    _lut: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        have = np.asarray(self.rows, dtype=np.int64)
        lut = np.full(int(have.max(initial=-1)) + 1, -1, dtype=np.int64)
        lut[have] = np.arange(have.size)
        object.__setattr__(self, "_lut", lut)

    @property
    def size_bytes(self) -> int:
        return self.data.size

    def slots_of(self, js: np.ndarray) -> np.ndarray:
        """Positions of subfile indices ``js`` in ``data``; fails if one is not cached."""
        slots = np.full(js.shape, -1, dtype=np.int64)
        inside = js < self._lut.size
        slots[inside] = self._lut[js[inside]]
        if (slots < 0).any():
            j = int(js[np.argmax(slots < 0)])
            raise DecodeFailure(f"user {self.user} does not cache subfile {j}")
        return slots

    def get(self, i: int, j: int) -> np.ndarray:
        return self.data[i, self.slots_of(np.array([j]))[0]]

    def get_many(self, files: np.ndarray, js: np.ndarray) -> np.ndarray:
        """Subfiles ``(files[t], js[t])`` stacked; fails if any one is not cached."""
        return self.data[files, self.slots_of(js)]


@dataclass(frozen=True)
class TransmissionSet:
    """One packet per symbol; row ``t`` of ``payload`` belongs to ``symbols[t]``."""

    symbols: np.ndarray  # sorted
    payload: np.ndarray

    @property
    def size_bytes(self) -> int:
        return self.payload.size

    @property
    def packets(self) -> dict[int, np.ndarray]:
        return dict(zip(self.symbols.tolist(), self.payload))

    def slots(self, symbols: np.ndarray) -> np.ndarray:
        """Payload rows of ``symbols``; fails if a symbol was not transmitted."""
        slot = np.searchsorted(self.symbols, symbols)
        found = np.zeros(symbols.shape, dtype=bool)
        inside = slot < self.symbols.size
        found[inside] = self.symbols[slot[inside]] == symbols[inside]
        if not found.all():
            raise DecodeFailure(f"no packet for symbol {int(symbols[np.argmin(found)])}")
        return slot


def place(p: PdaArray, store: FileStore) -> list[CacheContents]:
    """User k caches W[i, j] for every file i and every row j with a star in column k."""
    if store.f != p.f:
        raise SubpacketizationMismatch(f"store has {store.f} subfiles, array has {p.f} rows")
    caches = []
    for k in range(p.K):
        rows = np.nonzero(p.star_mask[:, k])[0]
        caches.append(CacheContents(k, tuple(rows.tolist()), store.data[:, rows].copy()))
    return caches


def _check_demand(p: PdaArray, store: FileStore, demand: Sequence[int]) -> list[int]:
    d = [int(x) for x in demand]
    if len(d) != p.K:
        raise BadDemand(f"need one demand per user ({p.K}), got {len(d)}")
    if any(not 0 <= x < store.N for x in d):
        raise BadDemand(f"demands must lie in 0..{store.N - 1}")
    return d


def _by_symbol(p: PdaArray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Integer cells sorted by symbol: symbols, rows, cols and segment starts."""
    g = p.grid
    rows, cols = np.nonzero(g != STAR)
    order = np.argsort(g[rows, cols], kind="stable")
    rows, cols = rows[order], cols[order]
    syms = g[rows, cols]
    starts = np.flatnonzero(np.r_[True, syms[1:] != syms[:-1]]) if syms.size else syms
    return syms, rows, cols, starts


def deliver(p: PdaArray, store: FileStore, demand: Sequence[int]) -> TransmissionSet:
    """One packet per symbol: XOR of W[D_k, j] over all cells (j, k) holding it."""
    if store.f != p.f:
        raise SubpacketizationMismatch(f"store has {store.f} subfiles, array has {p.f} rows")
    d = np.asarray(_check_demand(p, store, demand))
    syms, rows, cols, starts = _by_symbol(p)
    if not syms.size:
        return TransmissionSet(syms, np.zeros((0, store.subfile_size), dtype=np.uint8))
    payload = np.bitwise_xor.reduceat(store.data[d[cols], rows], starts, axis=0)
    return TransmissionSet(syms[starts], payload)


@dataclass(frozen=True)
class DecodePlan:
    """Demand-independent part of one user's decoding.

    ``missing`` are the rows the user lacks and ``symbols`` their symbols; the
    other cells holding the symbol of ``missing[seg[t]]`` are ``(j2[t], k2[t])``.
    """

    user: int
    starred: np.ndarray
    missing: np.ndarray
    symbols: np.ndarray
    seg: np.ndarray
    j2: np.ndarray
    k2: np.ndarray


def decode_plan(p: PdaArray, user: int) -> DecodePlan:
    col = p.grid[:, user]
    missing = np.flatnonzero(col != STAR)
    empty = np.zeros(0, dtype=np.int64)
    seg, j2, k2 = [empty], [empty], [empty]
    occ = p.occurrences
    for t, j in enumerate(missing.tolist()):
        rows, cols = occ[int(col[j])]
        keep = (rows != j) | (cols != user)
        seg.append(np.full(int(keep.sum()), t))
        j2.append(rows[keep])
        k2.append(cols[keep])
    return DecodePlan(user, np.flatnonzero(col == STAR), missing, col[missing], np.concatenate(seg),
                      np.concatenate(j2), np.concatenate(k2))


def decode_batch(user: int, cache: CacheContents, txs: Sequence[TransmissionSet],
                 p: PdaArray, demands: np.ndarray, plan: DecodePlan | None = None) -> np.ndarray:
    """Decode one user under several demand vectors at once.

    ``demands`` has one row per transmission; the result has shape
    (len(txs), f, subfile size), each slice being the requested file.
    """
    plan = plan or decode_plan(p, user)
    d = np.asarray(demands).reshape(len(txs), p.K)
    size = txs[0].payload.shape[1] if txs else 0
    out = np.empty((len(txs), p.f, size), dtype=np.uint8)
    if plan.starred.size:
        out[:, plan.starred] = cache.data[d[:, user][:, None], cache.slots_of(plan.starred)[None, :]]
    if plan.missing.size:
        acc = np.stack([tx.payload[tx.slots(plan.symbols)] for tx in txs])
        if plan.seg.size:
            pos = cache.slots_of(plan.j2)
            np.bitwise_xor.at(acc, (slice(None), plan.seg), cache.data[d[:, plan.k2], pos[None, :]])
        out[:, plan.missing] = acc
    return out


def decode(user: int, cache: CacheContents, tx: TransmissionSet,
           p: PdaArray, demand: Sequence[int], plan: DecodePlan | None = None) -> bytes:
    """Rebuild the file requested by ``user`` from its cache and the packets."""
    return decode_batch(user, cache, [tx], p, np.asarray(demand)[None, :], plan)[0].tobytes()


@dataclass(frozen=True)
class RoundTripReport:
    decoded_ok: bool
    measured_rate: Fraction
    measured_memory_ratio: Fraction
    trials: int
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "decodedOk": self.decoded_ok,
            "rate": str(self.measured_rate),
            "memoryRatio": str(self.measured_memory_ratio),
            "trials": self.trials,
            "failures": list(self.failures),
        }


def round_trip_verify(p: PdaArray, N: int, F: int,
                      demands: Sequence[Sequence[int]] | None = None,
                      trials: int = 20, seed: int = 0,
                      require_valid: bool = True) -> RoundTripReport:
    """Place, deliver and decode, then compare every decoded file byte for byte.

    Without explicit ``demands``, ``trials`` random demand vectors are drawn.
    ``require_valid=False`` lets invalid arrays through so that their decode
    failures can be observed.
    """
    if require_valid:
        rep = validate(p)
        if not rep.valid:
            raise DecodeFailure(f"array is not valid: {rep.summary()}")
    store = FileStore.random(N, F, p.f, seed)
    rng = np.random.default_rng(seed + 1)
    if demands is None:
        demands = [rng.integers(0, N, size=p.K).tolist() for _ in range(trials)]
    caches = place(p, store)
    plans = [decode_plan(p, k) for k in range(p.K)]
    cache_bytes = {c.size_bytes for c in caches}
    if len(cache_bytes) != 1:
        raise DecodeFailure("users cache different amounts")
    mem = Fraction(cache_bytes.pop(), N * F)
    rate = None
    txs = []
    for d in demands:
        txs.append(deliver(p, store, d))
        r = Fraction(txs[-1].size_bytes, F)
        if rate is not None and r != rate:
            raise DecodeFailure("transmission size depends on the demand")
        rate = r
    D = np.asarray(demands, dtype=np.int64).reshape(len(txs), p.K)
    failures = []
    for k in range(p.K):
        try:
            got = decode_batch(k, caches[k], txs, p, D, plans[k])
        except DecodeFailure as exc:
            failures += [f"demand {D[t].tolist()} user {k}: {exc}" for t in range(len(txs))]
            continue
        want = store.data[D[:, k]]
        for t in np.flatnonzero((got != want).reshape(len(txs), -1).any(axis=1)):
            failures.append(f"demand {D[t].tolist()} user {k}: wrong bytes")
    return RoundTripReport(not failures, rate if rate is not None else Fraction(0),
                           mem, len(demands), tuple(failures))
