"""Empirical pair correlation of normalized multiplicities vs the prediction.

gamma_N(r) = (1/N) Sum_{2<n<=N} alpha_tilde(n) alpha_tilde(n+r) from sieve
rows, the empirical mean and Fourier coefficients of alpha, and side-by-side
reports against the truncated Euler product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .localfactors import ComplexValue, euler_product_gamma
from .spectrum import SpectrumRow, spectrum_sieve


@dataclass(frozen=True)
class CorrelationReport:
    r: int
    N: int
    empirical: float
    predicted: float
    predicted_tail: float
    prime_limit: int
    b_cap: int


def _row_arrays(rows: list[SpectrumRow], upto: int) -> tuple[np.ndarray, np.ndarray]:
    """(alpha, alpha_tilde) arrays indexed by n-3, validated contiguous to upto."""
    if not rows or rows[0].n != 3:
        raise ValueError("rows must start at n=3")
    if rows[-1].n < upto or len(rows) != rows[-1].n - 2:
        # length check catches gaps without scanning every element
        raise ValueError(f"rows must cover 2 < n <= {upto} contiguously")
    alpha = np.fromiter((row.alpha for row in rows), np.float64, len(rows))
    return alpha, alpha - 1.0


def empirical_gamma(rows: list[SpectrumRow], r: int, N: int) -> float:
    """(1/N) Sum_{2<n<=N} alpha_tilde(n) alpha_tilde(n+r)."""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if N < 3:
        raise ValueError(f"N must be at least 3, got {N}")
    _, at = _row_arrays(rows, N + r)
    m = N - 2
    return float(at[:m] @ at[r : r + m]) / N


def empirical_mean(rows: list[SpectrumRow], N: int) -> float:
    """(1/N) Sum_{2<n<=N} alpha(n); the limit is the mean value M(alpha) = 1."""
    if N < 3:
        raise ValueError(f"N must be at least 3, got {N}")
    alpha, _ = _row_arrays(rows, N)
    return float(alpha[: N - 2].sum()) / N


def empirical_fourier(rows: list[SpectrumRow], N: int, a: int, b: int) -> ComplexValue:
    """(1/N) Sum_{2<n<=N} alpha(n) e^(-2 pi i a n / b) for a reduced fraction a/b."""
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    if math.gcd(a, b) != 1:
        raise ValueError(f"a/b must be reduced, got {a}/{b}")
    if N < 3:
        raise ValueError(f"N must be at least 3, got {N}")
    alpha, _ = _row_arrays(rows, N)
    ns = np.arange(3, N + 1)
    phase = np.exp((-2j * np.pi * (a % b) / b) * (ns % b))
    total = complex(alpha[: N - 2] @ phase) / N
    return ComplexValue(total.real, total.imag)


def compare_report(
    r_max: int,
    N: int,
    prime_limit: int,
    b_cap: int,
    *,
    rows: list[SpectrumRow] | None = None,
) -> list[CorrelationReport]:
    """One CorrelationReport per r in [0, r_max].

    The empirical side needs rows up to N + r_max; they are sieved here unless
    a covering row table is passed in.
    """
    if r_max < 0:
        raise ValueError(f"r_max must be nonnegative, got {r_max}")
    if N < 3:
        raise ValueError(f"N must be at least 3, got {N}")
    if rows is None:
        rows = spectrum_sieve(N + r_max)
    reports = []
    for r in range(r_max + 1):
        emp = empirical_gamma(rows, r, N)
        pred, tail = euler_product_gamma(r, prime_limit, b_cap)
        reports.append(CorrelationReport(r, N, emp, pred, tail, prime_limit, b_cap))
    return reports
