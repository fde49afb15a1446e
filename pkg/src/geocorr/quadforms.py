"""Indefinite binary quadratic forms of positive nonsquare discriminant.

Reduction cycles give the class number; the cycle automorph gives the
fundamental solution of u^2 - d v^2 = 4 and with it the regulator. The
smoothed character series provides an independent analytic route to the
same class number (class_number_oracle), used to cross-check the cycle
count everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import chi_d, factorize
from .errors import ResourceLimitError, StabilizationError

PELL_U_BOUND_DEFAULT = 10_000_000
ORACLE_SMOOTHING_START = 256
ORACLE_SMOOTHING_CEILING = 2**22


def is_discriminant(d: int) -> bool:
    """True iff d > 0, d == 0 or 1 mod 4, and d is not a perfect square."""
    if not isinstance(d, int) or isinstance(d, bool):
        return False
    if d <= 0 or d % 4 not in (0, 1):
        return False
    return math.isqrt(d) ** 2 != d


def _check_discriminant(d: int) -> None:
    if not is_discriminant(d):
        raise ValueError(f"not a positive nonsquare discriminant: {d}")


@dataclass(frozen=True)
class QuadForm:
    """Binary quadratic form a x^2 + b x y + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class PellFundamental:
    """Minimal positive solution of u^2 - d v^2 = 4, with regulator log((u+v sqrt d)/2)."""

    d: int
    u: int
    v: int
    regulator: float


def _divisors(m: int) -> list[int]:
    out = [1]
    for p, e in factorize(m).factors:
        out = [v * p**k for v in out for k in range(e + 1)]
    return sorted(out)


def reduced_forms(d: int) -> list[QuadForm]:
    """All primitive reduced forms of discriminant d, sorted by b then descending a.

    (a, b, c) is reduced iff 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b.
    """
    _check_discriminant(d)
    s = math.isqrt(d)
    out: list[QuadForm] = []
    b = 2 - d % 2
    while b <= s:
        m = (d - b * b) // 4
        for a in _divisors(m):
            # exact window test; sqrt(d) is irrational here
            if (2 * a + b) ** 2 <= d:
                continue
            if 2 * a - b >= 0 and (2 * a - b) ** 2 >= d:
                break
            c = m // a
            if math.gcd(math.gcd(a, b), c) == 1:
                out.append(QuadForm(a, b, -c))
                out.append(QuadForm(-a, b, c))
        b += 2
    return sorted(out, key=lambda f: (f.b, -f.a))


def reduce_step(form: QuadForm) -> QuadForm:
    """One application of the reduction operator: (a,b,c) -> (c, b', (b'^2-d)/(4c)).

    b' is the unique value congruent to -b mod 2|c| with the image reduced.
    """
    d = form.discriminant
    s = math.isqrt(d)
    two_c = 2 * abs(form.c)
    b2 = s - (s + form.b) % two_c
    num = b2 * b2 - d
    den = 4 * form.c
    if num % den:
        raise ArithmeticError(f"reduction step left {form} with non-integral tail")
    return QuadForm(form.c, b2, num // den)


def class_number(d: int) -> int:
    """Number of cycles of the reduction operator on the reduced forms of d."""
    forms = reduced_forms(d)
    index = {(f.a, f.b): i for i, f in enumerate(forms)}
    visited = [False] * len(forms)
    cycles = 0
    for i, f in enumerate(forms):
        if visited[i]:
            continue
        cycles += 1
        g = f
        while True:
            j = index[(g.a, g.b)]
            if visited[j]:
                break
            visited[j] = True
            g = reduce_step(g)
    return cycles


def _regulator_from_u(u: int) -> float:
    """log((u + sqrt(u^2-4))/2), stable for arbitrarily large integer u."""
    lu = math.log(u)
    x = 4.0 * math.exp(-2.0 * lu)
    return lu + math.log((1.0 + math.sqrt(1.0 - x)) / 2.0)


def pell_fundamental(d: int, u_bound: int | None = PELL_U_BOUND_DEFAULT) -> PellFundamental:
    """Minimal-u positive solution of u^2 - d v^2 = 4.

    Walks one reduction cycle and reads the fundamental automorph off the
    accumulated transformation matrix; exact integer arithmetic throughout.
    Raises ResourceLimitError when the resulting u exceeds u_bound (pass
    u_bound=None to lift the guard).
    """
    _check_discriminant(d)
    start = reduced_forms(d)[0]
    # automorph = product of the per-step matrices [[0, -1], [1, t]]
    m00, m01, m10, m11 = 1, 0, 0, 1
    g = start
    while True:
        h = reduce_step(g)
        t, rem = divmod(g.b + h.b, 2 * g.c)
        if rem:
            raise ArithmeticError(f"non-integral step coefficient at {g}")
        m00, m01, m10, m11 = m01, -m00 + t * m01, m11, -m10 + t * m11
        g = h
        if g == start:
            break
    u = abs(m00 + m11)
    v, rem = divmod(abs(m10), abs(start.a))
    if rem or u * u - d * v * v != 4:
        raise ArithmeticError(f"cycle automorph failed for d={d}")
    if u_bound is not None and u > u_bound:
        raise ResourceLimitError(f"fundamental u for d={d} exceeds bound {u_bound}")
    return PellFundamental(d, u, v, _regulator_from_u(u))


def smoothed_L(d: int, smoothing: float) -> float:
    """Sum over l <= 40*smoothing of chi_d(l)/l * exp(-l/smoothing)."""
    _check_discriminant(d)
    if not smoothing >= 1:
        raise ValueError(f"smoothing must be >= 1, got {smoothing}")
    from . import _kernels

    return _kernels.smoothed_L_value(d, float(smoothing))


def smoothed_L_reference(d: int, smoothing: float) -> float:
    """Pure-Python rendering of smoothed_L for small cutoffs; test anchor."""
    _check_discriminant(d)
    if not smoothing >= 1:
        raise ValueError(f"smoothing must be >= 1, got {smoothing}")
    cutoff = int(40 * smoothing)
    return sum(chi_d(d, l) / l * math.exp(-l / smoothing) for l in range(1, cutoff + 1))


def class_number_oracle(d: int) -> int:
    """Class number via sqrt(d) L(1,chi_d) / regulator, rounded at stabilization.

    The smoothing parameter doubles until two successive estimates round to
    the same positive integer with residual < 0.25.
    """
    _check_discriminant(d)
    reg = pell_fundamental(d, u_bound=None).regulator
    sq = math.sqrt(d)
    smoothing = ORACLE_SMOOTHING_START
    prev: int | None = None
    while smoothing <= ORACLE_SMOOTHING_CEILING:
        est = sq * smoothed_L(d, smoothing) / reg
        k = round(est)
        if prev is not None and k == prev and k >= 1 and abs(est - k) < 0.25:
            return k
        prev = k
        smoothing *= 2
    raise StabilizationError(f"class number estimate for d={d} did not stabilize")
