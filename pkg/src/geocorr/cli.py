"""Command line front end.

Subcommands: `alpha` (spectrum table CSV), `predict` (Euler-product
correlations CSV), `compare` (empirical vs predicted JSON), `verify`
(named invariant suites). Class numbers can be cached across runs in a
small text file; `--cache` beats the GEODESIC_CACHE environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

from . import __version__
from .correlation import compare_report
from .errors import ResourceLimitError, StabilizationError
from .localfactors import (
    beta_p_full,
    beta_truncated,
    character_sum_check,
    dft_b_max_default,
    euler_product_gamma,
    fourier_beta_p_closed,
    fourier_beta_p_dft,
    gauss_sum_check,
    local_A_closed,
    local_A_oracle_detail,
    quadratic_value_counts,
)
from .quadforms import class_number, class_number_oracle
from .spectrum import spectrum_sieve

CACHE_ENV = "GEODESIC_CACHE"
CACHE_HEADER = "# geodesic-cache v1"


class CacheFormatError(ValueError):
    """Cache file rejected; the message lists the offending line numbers."""


@dataclass(frozen=True)
class CacheEntry:
    """One cached discriminant: minimal trace (u, v) on u^2 - d v^2 = 4 and h(d)."""

    d: int
    u: int
    v: int
    h: int


def _entry_problem(d: int, u: int, v: int, h: int) -> str | None:
    if d <= 0 or d % 4 > 1:
        return f"d={d} is not a positive discriminant"
    if math.isqrt(d) ** 2 == d:
        return f"d={d} is a perfect square"
    if u < 3 or v < 1:
        return f"(u, v)=({u}, {v}) is not a valid trace pair"
    if u * u - d * v * v != 4:
        return f"u^2 - d v^2 = {u * u - d * v * v} != 4"
    if h < 1:
        return f"h={h} is not a positive class number"
    return None


def read_cache(path: str) -> dict[int, CacheEntry]:
    """Parse a cache file; any malformed content fails with line numbers."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    problems: list[str] = []
    if not lines or lines[0] != CACHE_HEADER:
        problems.append(f"line 1: expected header {CACHE_HEADER!r}")
        body: list[tuple[int, str]] = []
    else:
        body = [(i, ln) for i, ln in enumerate(lines[1:], start=2) if ln.strip()]
    entries: dict[int, CacheEntry] = {}
    prev_d = 0
    for lineno, line in body:
        parts = line.split(",")
        try:
            if len(parts) != 4:
                raise ValueError
            d, u, v, h = (int(x) for x in parts)
        except ValueError:
            problems.append(f"line {lineno}: expected `d,u,v,h` integers, got {line!r}")
            continue
        bad = _entry_problem(d, u, v, h)
        if bad:
            problems.append(f"line {lineno}: {bad}")
            continue
        if d <= prev_d:
            problems.append(f"line {lineno}: d={d} out of order (entries must be sorted, unique)")
            continue
        prev_d = d
        entries[d] = CacheEntry(d, u, v, h)
    if problems:
        raise CacheFormatError(f"corrupt cache file {path}: " + "; ".join(problems))
    return entries


def _atomic_write_text(path: str, text: str) -> None:
    out_dir = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".geocorr-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_cache(path: str, entries: dict[int, CacheEntry]) -> None:
    lines = [CACHE_HEADER]
    lines += [f"{e.d},{e.u},{e.v},{e.h}" for e in sorted(entries.values(), key=lambda e: e.d)]
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _fmt(x: float) -> str:
    """CSV float format: 12 significant digits, `.` decimal separator."""
    return format(x, ".12g")


def _resolve_cache_path(flag_value: str | None) -> str | None:
    return flag_value or os.environ.get(CACHE_ENV) or None


# ------------------------------------------------------------- subcommands


def _cmd_alpha(args: argparse.Namespace) -> int:
    cache_path = _resolve_cache_path(args.cache)
    cached: dict[int, CacheEntry] = {}
    if cache_path and os.path.exists(cache_path):
        cached = read_cache(cache_path)
    details = spectrum_sieve(
        args.max_n,
        known_h={d: e.h for d, e in cached.items()},
        return_details=True,
    )
    lines = ["n,g,alpha"]
    lines += [f"{row.n},{row.g},{_fmt(row.alpha)}" for row in details.rows]
    _atomic_write_text(args.out, "\n".join(lines) + "\n")
    if cache_path:
        for d, (u, v) in details.first_trace.items():
            cached[d] = CacheEntry(d, u, v, details.class_numbers[d])
        write_cache(cache_path, cached)
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    lines = ["r,gamma_predicted,tail_bound"]
    for r in range(args.r_max + 1):
        gamma, tail = euler_product_gamma(r, args.prime_limit, args.b_cap)
        lines.append(f"{r},{_fmt(gamma)},{_fmt(tail)}")
    _atomic_write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    reports = compare_report(args.r_max, args.max_n, args.prime_limit, args.b_cap)
    obj = {
        "meta": {
            "r_max": args.r_max,
            "max_n": args.max_n,
            "prime_limit": args.prime_limit,
            "b_cap": args.b_cap,
            "version": __version__,
        },
        "reports": [asdict(rep) for rep in reports],
    }
    _atomic_write_text(args.out, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return 0


# ------------------------------------------------------------- verify suites


def _coprime_residues(p: int, c: int) -> list[int]:
    if c == 0:
        return [0]
    q = p**c
    return [a for a in range(1, q) if math.gcd(a, q) == 1]


def _suite_fourier() -> list[tuple[str, bool]]:
    checks = []
    for p in (3, 5, 7):
        for c in (0, 1, 2):
            b_max = dft_b_max_default(p, c)
            worst, ok = 0.0, True
            for a in _coprime_residues(p, c):
                dft = fourier_beta_p_dft(p, a, c, b_max)
                closed = fourier_beta_p_closed(p, a, c)
                err = math.hypot(dft.re - closed.re, dft.im - closed.im)
                worst = max(worst, err)
                ok = ok and err <= 1e-9 + dft.tail_bound
            checks.append((f"fourier closed form vs DFT p={p} c={c} (max err {worst:.2e})", ok))
    return checks


def _suite_localfactors() -> list[tuple[str, bool]]:
    checks = []
    for p in (2, 3, 5):
        b = 1
        while p**b <= 64:
            b_max = dft_b_max_default(p, 0)
            worst, ok = 0.0, True
            for r in range(41):
                det = local_A_oracle_detail(p, b, r, max(b, b_max))
                err = abs(local_A_closed(p, b, r) - det.value)
                worst = max(worst, err)
                ok = ok and err <= 1e-9 + det.tail_bound and abs(det.im) < 1e-9
            checks.append((f"A_r({p}^{b}) closed vs DFT oracle, r<=40 (max err {worst:.2e})", ok))
            b += 1
    return checks


def _suite_classnumber() -> list[tuple[str, bool]]:
    known = {5: 1, 8: 1, 12: 2, 13: 1, 60: 4, 229: 3}
    ok_known = all(class_number(d) == h for d, h in known.items())
    checks = [("class numbers of six pinned discriminants", ok_known)]
    ok_all, count = True, 0
    for d in range(5, 301):
        if d % 4 > 1 or math.isqrt(d) ** 2 == d:
            continue
        count += 1
        try:
            ok_all = ok_all and class_number(d) == class_number_oracle(d)
        except StabilizationError:
            ok_all = False
    checks.append((f"cycle count vs analytic oracle for all {count} discriminants d<=300", ok_all))
    return checks


def _suite_lemma41() -> list[tuple[str, bool]]:
    checks = []
    for prime_limit in (2, 3, 5, 7):
        primes = [p for p in (2, 3, 5, 7) if p <= prime_limit]
        worst = 0.0
        for n in range(3, 301):
            lhs = beta_truncated(n, prime_limit)
            rhs = math.prod(beta_p_full(p, n) for p in primes)
            worst = max(worst, abs(lhs - rhs))
        checks.append(
            (f"smooth density factorizes over p<={prime_limit}, n<=300 (max err {worst:.2e})",
             worst <= 1e-10)
        )
    return checks


def _suite_gauss() -> list[tuple[str, bool]]:
    odd_primes = [p for p in range(3, 201) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    ok_sum = all(character_sum_check(p) == -1 for p in odd_primes)
    ok_counts = all(quadratic_value_counts(p) == ((p - 3) // 2, (p - 1) // 2) for p in odd_primes)
    pairs = [(p, a) for p in odd_primes for a in (1, 2, p - 1)][:50]
    worst = max(math.hypot(*astuple) for astuple in
                ((g.re, g.im) for g in (gauss_sum_check(p, a) for p, a in pairs)))
    return [
        (f"character sums equal -1 for all odd p<=200 ({len(odd_primes)} primes)", ok_sum),
        ("value counts are ((p-3)/2, (p-1)/2) for all odd p<=200", ok_counts),
        (f"gauss sums match eps_p sqrt(p) on 50 pairs (max err {worst:.2e})", worst <= 1e-10),
    ]


_SUITES = {
    "fourier": _suite_fourier,
    "localfactors": _suite_localfactors,
    "classnumber": _suite_classnumber,
    "lemma41": _suite_lemma41,
    "gauss": _suite_gauss,
}


def _cmd_verify(args: argparse.Namespace) -> int:
    checks = _SUITES[args.suite]()
    for label, ok in checks:
        print(("PASS" if ok else "FAIL") + "  " + label)
    passed = sum(ok for _, ok in checks)
    print(f"{passed}/{len(checks)} checks passed")
    return 0 if passed == len(checks) else 1


# ------------------------------------------------------------- entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geocorr",
        description="Geodesic length-spectrum multiplicities and their pair correlations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_alpha = sub.add_parser("alpha", help="write the n,g,alpha table as CSV")
    p_alpha.add_argument("--max-n", type=int, required=True, help="largest trace n (>= 3)")
    p_alpha.add_argument("--out", required=True, help="output CSV path")
    p_alpha.add_argument("--cache", help=f"class-number cache file (default ${CACHE_ENV})")

    p_pred = sub.add_parser("predict", help="write predicted correlations as CSV")
    p_pred.add_argument("--r-max", type=int, required=True, help="largest shift r (>= 0)")
    p_pred.add_argument("--prime-limit", type=int, default=10_000)
    p_pred.add_argument("--b-cap", type=int, default=8)
    p_pred.add_argument("--out", required=True, help="output CSV path")

    p_cmp = sub.add_parser("compare", help="write empirical vs predicted report as JSON")
    p_cmp.add_argument("--r-max", type=int, required=True)
    p_cmp.add_argument("--max-n", type=int, required=True, help="empirical cutoff N (>= 3)")
    p_cmp.add_argument("--prime-limit", type=int, default=10_000)
    p_cmp.add_argument("--b-cap", type=int, default=8)
    p_cmp.add_argument("--out", required=True, help="output JSON path")

    p_ver = sub.add_parser("verify", help="run a named invariant suite")
    p_ver.add_argument("--suite", required=True, choices=sorted(_SUITES))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_n", 3) < 3:
        parser.error(f"--max-n must be at least 3, got {args.max_n}")
    if getattr(args, "r_max", 0) < 0:
        parser.error(f"--r-max must be nonnegative, got {args.r_max}")
    if getattr(args, "prime_limit", 2) < 2:
        parser.error(f"--prime-limit must be at least 2, got {args.prime_limit}")
    if getattr(args, "b_cap", 1) < 1:
        parser.error(f"--b-cap must be positive, got {args.b_cap}")
    handler = {
        "alpha": _cmd_alpha,
        "predict": _cmd_predict,
        "compare": _cmd_compare,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, ArithmeticError, ResourceLimitError, StabilizationError, OSError) as exc:
        print(f"geocorr: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
