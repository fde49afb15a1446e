"""Trace multiplicities g(n) of closed geodesics, and the smoothed approximant.

g(n) sums class numbers h(d) over the decompositions n^2 - 4 = d v^2 whose
(d, v) is fundamental, i.e. whose d makes its first appearance at trace n.
alpha(n) = g(n) log(n)/n is the normalized multiplicity; beta(n, smoothing)
replaces each h(d) log eps_d by its smoothed character series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadforms
from .arith import Factorization, square_divisors
from .errors import ResourceLimitError

MEMORY_BUDGET_DEFAULT = 2 << 30
_ENTRY_COST = 120  # rough bytes per first-occurrence map slot, with dict overhead


@dataclass(frozen=True)
class TraceEntry:
    d: int
    v: int
    fundamental: bool | None = None


@dataclass(frozen=True)
class TraceDecomposition:
    n: int
    entries: tuple[TraceEntry, ...]


@dataclass(frozen=True)
class SpectrumRow:
    n: int
    g: int
    alpha: float
    alpha_tilde: float


@dataclass(frozen=True)
class SieveDetails:
    """Sieve output with the evidence the row table was built from."""

    rows: list[SpectrumRow]
    decompositions: list[TraceDecomposition]
    class_numbers: dict[int, int]
    first_trace: dict[int, tuple[int, int]]


def _check_trace(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"trace must be an integer, got {type(n).__name__}")
    if n <= 2:
        raise ValueError(f"trace must exceed 2, got {n}")


def _spf_table(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _merged_factorization(n: int, spf: list[int]) -> Factorization:
    """Factorization of n^2 - 4 assembled from the factors of n-2 and n+2."""
    exps: dict[int, int] = {}
    for m in (n - 2, n + 2):
        while m > 1:
            p = spf[m]
            while m % p == 0:
                m //= p
                exps[p] = exps.get(p, 0) + 1
    return Factorization(n * n - 4, tuple(sorted(exps.items())))


def _entries_for(n: int, fac: Factorization) -> tuple[TraceEntry, ...]:
    m = n * n - 4
    out = []
    for v in square_divisors(fac):
        d = m // (v * v)
        if d % 4 > 1:
            continue
        # cofactors of n^2 - 4 by squares are never squares themselves
        assert math.isqrt(d) ** 2 != d
        out.append(TraceEntry(d, v))
    return tuple(out)


def trace_decompositions(n: int) -> TraceDecomposition:
    """All (d, v) with d v^2 = n^2 - 4 and d a discriminant, v ascending."""
    _check_trace(n)
    from .arith import factorize

    return TraceDecomposition(n, _entries_for(n, factorize(n * n - 4)))


def _decompose_range(N: int) -> list[TraceDecomposition]:
    spf = _spf_table(N + 2)
    return [TraceDecomposition(n, _entries_for(n, _merged_factorization(n, spf))) for n in range(3, N + 1)]


def _class_numbers_for(ds: list[int], engine: str) -> dict[int, int]:
    if engine == "auto":
        engine = "bulk" if len(ds) > 64 or (ds and max(ds) > 10**6) else "pure"
    if engine == "pure":
        return {d: quadforms.class_number(d) for d in ds}
    if engine == "bulk":
        from . import _kernels

        arr = np.asarray(ds, dtype=np.int64)
        hs = _kernels.class_numbers_bulk(arr)
        return {int(d): int(h) for d, h in zip(arr, hs)}
    raise ValueError(f"unknown class-number engine {engine!r}")


def spectrum_sieve(
    N: int,
    *,
    known_h: dict[int, int] | None = None,
    memory_budget: int = MEMORY_BUDGET_DEFAULT,
    h_engine: str = "auto",
    return_details: bool = False,
) -> list[SpectrumRow] | SieveDetails:
    """Rows (n, g, alpha, alpha_tilde) for 2 < n <= N via first-occurrence sieve.

    Processing n ascending, an entry (d, v) is fundamental iff d has not
    appeared at any smaller trace; g(n) sums h(d) over fundamental entries.
    Class numbers are collected first and evaluated in one deferred batch;
    `known_h` seeds that batch (e.g. from a cache file).
    """
    _check_trace(N)
    est = int(1.4 * N) * _ENTRY_COST
    if est > memory_budget:
        raise ResourceLimitError(
            f"first-occurrence map for N={N} needs ~{est} bytes, budget is {memory_budget}"
        )
    h_map: dict[int, int] = {}
    for d, h in (known_h or {}).items():
        if not isinstance(h, int) or h < 1:
            raise ValueError(f"invalid seeded class number h({d}) = {h!r}")
        h_map[d] = h

    first: dict[int, tuple[int, int]] = {}
    need: list[int] = []
    decomps: list[TraceDecomposition] = []
    for dec in _decompose_range(N):
        flagged = []
        for e in dec.entries:
            fund = e.d not in first
            if fund:
                first[e.d] = (dec.n, e.v)
                if e.d not in h_map:
                    need.append(e.d)
            flagged.append(TraceEntry(e.d, e.v, fund))
        # the v=1 cofactor n^2-4 itself is always a first occurrence
        assert flagged and flagged[0].v == 1 and flagged[0].fundamental
        decomps.append(TraceDecomposition(dec.n, tuple(flagged)))

    h_map.update(_class_numbers_for(need, h_engine))

    rows = []
    for dec in decomps:
        g = sum(h_map[e.d] for e in dec.entries if e.fundamental)
        assert g >= 1
        alpha = g * math.log(dec.n) / dec.n
        rows.append(SpectrumRow(dec.n, g, alpha, alpha - 1.0))
    if return_details:
        return SieveDetails(rows, decomps, {d: h_map[d] for d in first}, first)
    return rows


def beta(n: int, smoothing: float) -> float:
    """Sum of smoothed_L(d, smoothing)/v over ALL decompositions of n^2 - 4."""
    dec = trace_decompositions(n)
    return sum(quadforms.smoothed_L(e.d, smoothing) / e.v for e in dec.entries)


def beta_table(max_n: int, smoothing: float) -> list[float]:
    """beta(n, smoothing) for 3 <= n <= max_n, sharing one character sieve."""
    from . import _kernels

    decomps = _decompose_range(max_n)
    ds = sorted({e.d for dec in decomps for e in dec.entries})
    vals = _kernels.smoothed_L_block(np.asarray(ds, dtype=np.int64), smoothing)
    table = {d: float(x) for d, x in zip(ds, vals)}
    return [sum(table[e.d] / e.v for e in dec.entries) for dec in decomps]
