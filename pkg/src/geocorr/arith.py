"""Integer arithmetic: factorization, square divisors, quadratic characters.

Everything downstream (form enumeration, trace decompositions, L-series,
local densities) reduces to the four operations here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_TRIAL_LIMIT = 1_000_000
_MAX_INPUT = 1 << 96

_small_primes: list[int] | None = None


def _primes_upto(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, fl in enumerate(sieve) if fl]


def _trial_primes() -> list[int]:
    global _small_primes
    if _small_primes is None:
        _small_primes = _primes_upto(_TRIAL_LIMIT)
    return _small_primes


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin. Deterministic for n < 2^64 via a fixed witness set."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # first 12 primes are a proven deterministic set below 2^64; beyond that
    # they leave no known pseudoprimes either
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Brent's cycle variant; n must be odd, composite, not a prime power issue-free."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    """An integer with its prime factorization, primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]


def factorize(m: int) -> Factorization:
    """Factor m into primes. Accepts 1 <= m <= 2^96."""
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError(f"need an int, got {type(m).__name__}")
    if m < 1:
        raise ValueError(f"need a positive integer, got {m}")
    if m > _MAX_INPUT:
        raise ValueError(f"input exceeds 2^96: {m}")
    n = m
    found: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > n:
            break
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            k = stack.pop()
            if k < _TRIAL_LIMIT * _TRIAL_LIMIT or is_probable_prime(k):
                # below the trial square no composite survives; otherwise MR decides
                found[k] = found.get(k, 0) + 1
                continue
            g = _pollard_rho(k)
            stack.append(g)
            stack.append(k // g)
    return Factorization(m, tuple(sorted(found.items())))


def square_divisors(f: Factorization) -> list[int]:
    """All v >= 1 with v^2 dividing f.value, ascending."""
    vs = [1]
    for p, e in f.factors:
        half = e // 2
        if half == 0:
            continue
        vs = [v * p**k for v in vs for k in range(half + 1)]
    return sorted(vs)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, in {-1, 0, 1}."""
    if p == 2 or p < 3 or not is_probable_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def chi_prime(d: int, p: int) -> int:
    """The quadratic character attached to discriminant d, at a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        m8 = d % 8
        return 1 if m8 == 1 else -1
    if d % p == 0:
        return 0
    return legendre(d, p)


def chi_d(d: int, m: int) -> int:
    """Completely multiplicative quadratic character mod d, at m.

    Defined on primes by chi_prime; chi_d(1) = 1, chi_d(-1) = 1, chi_d(0) = 0.
    d must be a (not necessarily positive-nonsquare) discriminant shape,
    i.e. d == 0 or 1 mod 4.
    """
    if d % 4 not in (0, 1):
        raise ValueError(f"d must be 0 or 1 mod 4, got {d}")
    if m == 0:
        return 0
    m = abs(m)
    out = 1
    for p, e in factorize(m).factors:
        c = chi_prime(d, p)
        if c == 0:
            return 0
        if c == -1 and e % 2 == 1:
            out = -out
    return out
