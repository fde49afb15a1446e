"""Local densities at each prime and the Euler product for the pair correlation.

The density beta_(p)(n) sums p^-b (1 - chi_D(p)/p)^-1 over the 2b-power
congruences n^2 == 4 (p^2b), D = (n^2-4) p^-2b. Its Fourier coefficients at
frequencies a/p^c have closed forms for odd p; a DFT oracle averages the
truncated density over one exact period for every p including 2. The local
factors A_r(p^b) combine |coefficients|^2 with the shift phase, and their
product over primes gives gamma(r) + 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import chi_prime, is_probable_prime, legendre
from .errors import ResourceLimitError

PERIOD_LIMIT = 10**8
EULER_PRIME_LIMIT_DEFAULT = 10_000
EULER_B_CAP_DEFAULT = 8


@dataclass(frozen=True)
class ComplexValue:
    re: float
    im: float

    @property
    def cx(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class FourierValue(ComplexValue):
    """DFT-oracle coefficient with its truncation bounds.

    tail_bound is the contractual bound 2 p^-b_max (p^2+p+1)/((p+1)(p-1));
    tail_sharp additionally uses the p^-2b-1 decay of the term means and is
    the bound propagated into oracle-vs-closed tolerances.
    """

    tail_bound: float
    tail_sharp: float


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2 or not is_probable_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")


def indicator_I(p: int, b: int, n: int) -> int:
    """1 iff n^2 == 4 (mod p^2b), and for p = 2 also (n^2-4)/2^2b == 0,1 (mod 4)."""
    _check_prime(p)
    if b < 0:
        raise ValueError(f"b must be nonnegative, got {b}")
    q = p ** (2 * b)
    if (n * n - 4) % q:
        return 0
    if p == 2 and ((n * n - 4) // q) % 4 > 1:
        return 0
    return 1


def beta_p(p: int, n: int, b_max: int) -> float:
    """Finite local-density sum Sum_{b <= b_max} p^-b (1 - chi_D(p)/p)^-1 I_{p^b}(n)."""
    _check_prime(p)
    if n <= 2:
        raise ValueError(f"n must exceed 2, got {n}")
    # p^2b <= n^2 - 4 for every nonzero term, so b_max >= log_p(n+2) captures all
    if p**b_max < n + 2:
        raise ValueError(f"b_max={b_max} insufficient for n={n}: need p^b_max >= n+2")
    total = 0.0
    m = n * n - 4
    q = 1
    for b in range(b_max + 1):
        if m % (q * q) == 0:
            d = m // (q * q)
            if p > 2 or d % 4 <= 1:
                total += 1.0 / q / (1.0 - chi_prime(d, p) / p)
        q *= p
        if q * q > m:
            break
    return total


def beta_p_full(p: int, n: int) -> float:
    """beta_p at the smallest depth past which every term vanishes."""
    if n <= 2:
        raise ValueError(f"n must exceed 2, got {n}")
    b = 1
    while p**b < n + 2:
        b += 1
    return beta_p(p, n, b)


def beta_truncated(n: int, prime_limit: int) -> float:
    """Smooth-denominator density: Sum over d v^2 = n^2 - 4 with v P-smooth
    of (1/v) Prod_{p <= P} (1 - chi_d(p)/p)^-1.

    Factors as Prod_{p <= P} beta_p_full(p, n); the two routes are computed
    independently so they can be checked against each other.
    """
    if n <= 2:
        raise ValueError(f"n must exceed 2, got {n}")
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be at least 2, got {prime_limit}")
    from .spectrum import trace_decompositions

    primes = _primes_list(prime_limit)
    total = 0.0
    for e in trace_decompositions(n).entries:
        m = e.v
        for p in primes:
            while m % p == 0:
                m //= p
        if m != 1:
            continue
        w = 1.0 / e.v
        for p in primes:
            w /= 1.0 - chi_prime(e.d, p) / p
        total += w
    return total


# ------------------------------------------------------------- DFT oracle


def dft_b_max_cap(p: int) -> int:
    """Largest b_max whose oracle period stays within PERIOD_LIMIT."""
    _check_prime(p)
    b = 0
    while _dft_period(p, b + 1) <= PERIOD_LIMIT:
        b += 1
    return b


def dft_b_max_default(p: int, c: int) -> int:
    """Default truncation (c+6 odd, c+10 for p=2) clamped to the period cap."""
    want = c + 10 if p == 2 else c + 6
    return min(want, dft_b_max_cap(p))


def _dft_period(p: int, b_max: int) -> int:
    return 2 ** (2 * b_max + 3) if p == 2 else p ** (2 * b_max + 1)


def dft_tail_reported(p: int, b_max: int) -> float:
    return 2.0 * p ** (-b_max) * (p * p + p + 1) / ((p + 1) * (p - 1))


def dft_tail_sharp(p: int, b_max: int) -> float:
    # term means decay like p^-(3b+1); factor 2 of slack on the constant
    if p == 2:
        return 2.0 * (16.0 / 7.0) * 2.0 ** (-3 * b_max)
    geo = p ** (-3.0 * (b_max + 1)) / (1.0 - p**-3.0)
    return 2.0 * (2.0 * p / (p - 1)) * geo


def fourier_beta_p_dft(p: int, a: int, c: int, b_max: int) -> FourierValue:
    """Exact mean of the truncated density times e^(-2 pi i a n / p^c).

    The truncated density with terms b <= b_max is exactly periodic modulo
    p^(2 b_max + 1) (2^(2 b_max + 3) for p = 2), so the mean over one period
    equals the limit mean; only the b > b_max series remainder is missing.
    """
    _check_prime(p)
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    if c > 0 and math.gcd(a, p) != 1:
        raise ValueError(f"a={a} must be coprime to p={p} unless (a, c) = (0, 0)")
    if c == 0 and a != 0:
        raise ValueError(f"c=0 requires a=0, got a={a}")
    if b_max < c:
        raise ValueError(f"b_max={b_max} must be at least c={c}")
    period = _dft_period(p, b_max)
    if period > PERIOD_LIMIT:
        raise ResourceLimitError(f"oracle period {period} exceeds limit {PERIOD_LIMIT}")
    from . import _kernels

    cs, T = _kernels.fold_class_sums(p, b_max, c)
    q = p**c
    phase = np.exp((-2j * np.pi * (a % q) / q) * np.arange(q))
    val = complex(cs @ phase) / T
    return FourierValue(val.real, val.imag, dft_tail_reported(p, b_max), dft_tail_sharp(p, b_max))


# ------------------------------------------------------------ closed forms


def fourier_beta_p_closed(p: int, a: int, c: int) -> ComplexValue:
    """Closed-form Fourier coefficient at a/p^c for odd p.

    c=0: 1. c=1: (p^2-1)^-1 Sum_n ((n^2-4)/p) e^(2 pi i a n / p); the sum is
    real and even in a, so the exponent sign is immaterial (the DFT oracle
    equivalence test pins the value either way). c>=2: the eps_p pair formula
    for odd c, 2 cos(4 pi a / p^c) for even c, over (p^2-1) p^(3c/2-2).
    """
    _check_prime(p)
    if p == 2:
        raise ValueError("closed forms cover odd p only; use fourier_beta_p_dft for p=2")
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    if c == 0:
        return ComplexValue(1.0, 0.0)
    if math.gcd(a, p) != 1:
        raise ValueError(f"a={a} must be coprime to p={p}")
    if c == 1:
        s = 0.0
        for n in range(p):
            t = (n * n - 4) % p
            if t:
                s += legendre(t, p) * math.cos(2.0 * math.pi * (a % p) * n / p)
        return ComplexValue(s / (p * p - 1), 0.0)
    q = p**c
    a %= q
    scale = (p * p - 1) * p ** (3 * c / 2 - 2)
    if c % 2 == 0:
        return ComplexValue(2.0 * math.cos(4.0 * math.pi * a / q) / scale, 0.0)
    eps = 1 if p % 4 == 1 else 1j
    la = legendre(a % p, p)
    lna = legendre(-a % p, p)
    z = eps * (la * cmath.exp(4j * math.pi * a / q) + lna * cmath.exp(-4j * math.pi * a / q)) / scale
    return ComplexValue(z.real, z.imag)


def _sign_pow(p: int, b: int) -> int:
    """((-1)/p)^b for odd p."""
    return 1 if p % 4 == 1 or b % 2 == 0 else -1


def local_A_closed(p: int, b: int, r: int) -> float:
    """A_r(p^b) from the closed tables; r is reduced mod p^b first."""
    _check_prime(p)
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    q = p**b
    r %= q
    if p == 2:
        if b == 1:
            return 1.0 / 9.0 if r == 0 else -1.0 / 9.0
        if b == 2:
            if r % 2:
                return 0.0
            return 1.0 / 18.0 if r == 0 else -1.0 / 18.0
        if b == 3 or b == 5:
            return 0.0
        if b == 4:
            if r % 8:
                return 0.0
            return 1.0 / 144.0 if r == 0 else -1.0 / 144.0
        scale = 9.0 * 2.0 ** (2 * b - 4)
        half = q >> 1
        quarter = q >> 2
        if r == 0:
            return 2.0 / scale
        if r == half:
            return -2.0 / scale
        if r == (4 + quarter) % q or r == (-4 - quarter) % q:
            return 1.0 / scale
        if r == (4 + quarter + half) % q or r == (-4 - quarter - half) % q:
            return -1.0 / scale
        return 0.0
    if b == 1:
        from . import _kernels

        s = _kernels.shifted_pair_charsum(p, r)
        return (p * s - 1.0) / (p * p - 1) ** 2
    prev = q // p
    scale = (p * p - 1) ** 2 * float(p) ** (3 * b - 4)
    if r == 0:
        return 2.0 * q * (1.0 - 1.0 / p) / scale
    if r % prev == 0:
        return -2.0 * prev / scale
    sgn = _sign_pow(p, b)
    if r == 4 % q or r == -4 % q:
        return sgn * q * (1.0 - 1.0 / p) / scale
    if (r - 4) % prev == 0 or (r + 4) % prev == 0:
        return -sgn * prev / scale
    return 0.0


@dataclass(frozen=True)
class LocalAOracleValue:
    value: float
    im: float
    tail_bound: float


def local_A_oracle_detail(p: int, b: int, r: int, b_max: int) -> LocalAOracleValue:
    """A_r(p^b) summed from DFT coefficients, with the propagated tail bound."""
    _check_prime(p)
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    if b_max < b:
        raise ValueError(f"b_max={b_max} must be at least b={b}")
    period = _dft_period(p, b_max)
    if period > PERIOD_LIMIT:
        raise ResourceLimitError(f"oracle period {period} exceeds limit {PERIOD_LIMIT}")
    from . import _kernels

    cs, T = _kernels.fold_class_sums(p, b_max, b)
    q = p**b
    coeff = np.fft.fft(cs) / T  # coeff[a] = mean of density * e^(-2 pi i a n / q)
    ar = np.arange(q)
    mask = (ar % p) != 0
    tau = dft_tail_sharp(p, b_max)
    vals = coeff[mask]
    phases = np.exp((2j * np.pi * (r % q) / q) * ar[mask])
    total = complex(np.sum(np.abs(vals) ** 2 * phases))
    tail = float(2.0 * tau * np.sum(np.abs(vals)) + vals.size * tau * tau)
    return LocalAOracleValue(total.real, total.imag, tail)


def local_A_oracle(p: int, b: int, r: int, b_max: int) -> float:
    """A_r(p^b) via the DFT oracle; fails loudly if the sum is not real."""
    det = local_A_oracle_detail(p, b, r, b_max)
    if abs(det.im) >= 1e-9:
        raise ArithmeticError(f"A_{r}({p}^{b}) oracle imaginary part {det.im} not negligible")
    return det.value


# ----------------------------------------------------------- Euler product


def _local_b_tail(p: int, cap: int) -> float:
    """Bound on |Sum_{b > cap} A_r(p^b)| from |A_r(p^b)| <= 4/((p^2-1)^2 p^(2b-4))."""
    return 4.0 * float(p) ** (2 - 2 * cap) / ((p * p - 1) ** 2 * (1.0 - p**-2.0))


def euler_prime_cap(p: int, r: int, b_cap: int) -> int:
    """Per-prime power cutoff: the case boundaries at r, r+-4 must stay in range."""
    need = 2
    while p**need <= r + 4:
        need += 1
    return max(b_cap, need + 2)


def euler_factor(p: int, r: int, b_cap: int) -> tuple[float, float]:
    """(1 + Sum_{b <= cap} A_r(p^b), b-tail bound) for one prime."""
    cap = euler_prime_cap(p, r, b_cap)
    total = 1.0
    for b in range(1, cap + 1):
        total += local_A_closed(p, b, r)
    return total, _local_b_tail(p, cap)


def _euler_factor_from_charsum(p: int, s: int, r: int, b_cap: int) -> tuple[float, float]:
    """euler_factor with the b=1 character sum already evaluated (odd p)."""
    cap = euler_prime_cap(p, r, b_cap)
    total = 1.0 + (p * s - 1.0) / (p * p - 1) ** 2
    for b in range(2, cap + 1):
        total += local_A_closed(p, b, r)
    return total, _local_b_tail(p, cap)


def euler_product_gamma(
    r: int,
    prime_limit: int = EULER_PRIME_LIMIT_DEFAULT,
    b_cap: int = EULER_B_CAP_DEFAULT,
) -> tuple[float, float]:
    """Truncated product over p <= prime_limit for gamma(r), with a tail bound.

    Returns (gamma, tail_bound). The b-tails are the geometric bounds above.
    The prime tail covers |A_r(p)| <= (p^2 + 3 p^1.5)/(p^2-1)^2 for p > P,
    which dominates both the exact A_0(p) = (p^2-2p-1)/(p^2-1)^2 at r = 0 and
    the Weil-type 3 sqrt(p) character-sum bound otherwise; the sum over p > P
    is bounded by partial summation against pi(t) <= 1.26 t/log t. Heuristic
    in its constants, recorded with the result rather than proven sharp.
    """
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be at least 2, got {prime_limit}")
    if b_cap < 1:
        raise ValueError(f"b_cap must be positive, got {b_cap}")
    from . import _kernels

    primes = _kernels.primes_upto(prime_limit)
    charsums = _kernels.shifted_pair_charsum_batch(primes, r)
    prod = 1.0
    rel_tail = 0.0
    for p, s in zip(primes, charsums):
        p = int(p)
        if p == 2:
            # the b=1 character-sum formula is stated for p > 2 only
            factor, btail = euler_factor(2, r, b_cap)
        else:
            factor, btail = _euler_factor_from_charsum(p, int(s), r, b_cap)
        prod *= factor
        rel_tail += btail / abs(factor)
    prime_tail = (2.6 + 6.5 / math.sqrt(prime_limit)) / (prime_limit * math.log(prime_limit))
    tail_bound = abs(prod) * (rel_tail + prime_tail)
    return prod - 1.0, tail_bound


# ------------------------------------------------------ consistency checks


def character_sum_check(p: int) -> int:
    """Sum over n mod p of ((n^2-4)/p); the value-count identity forces -1."""
    _check_prime(p)
    if p == 2:
        raise ValueError("character sum check is for odd p")
    total = 0
    for n in range(p):
        t = (n * n - 4) % p
        if t:
            total += legendre(t, p)
    return total


def quadratic_value_counts(p: int) -> tuple[int, int]:
    """(#{n mod p : chi_{n^2-4}(p) = 1}, #{... = -1}); expected ((p-3)/2, (p-1)/2)."""
    _check_prime(p)
    if p == 2:
        raise ValueError("value counts are for odd p")
    plus = minus = 0
    for n in range(p):
        t = (n * n - 4) % p
        if t:
            if legendre(t, p) == 1:
                plus += 1
            else:
                minus += 1
    return plus, minus


def gauss_sum_check(p: int, a: int) -> ComplexValue:
    """Sum_m (m/p) e^(2 pi i a m / p) minus (a/p) eps_p sqrt(p); must vanish."""
    _check_prime(p)
    if p == 2 or math.gcd(a, p) != 1:
        raise ValueError("gauss sum check needs odd p and a coprime to p")
    total = 0j
    for m in range(1, p):
        total += legendre(m, p) * cmath.exp(2j * math.pi * a * m / p)
    eps = 1 if p % 4 == 1 else 1j
    total -= legendre(a % p, p) * eps * math.sqrt(p)
    return ComplexValue(total.real, total.imag)


@lru_cache(maxsize=None)
def _primes_list(limit: int) -> tuple[int, ...]:
    from . import _kernels

    return tuple(int(p) for p in _kernels.primes_upto(limit))
