"""numba kernels: character sieves, smoothed L sums, bulk class numbers, local-density folds.

Everything here is an exact-integer or double-precision rendering of the pure
routines in arith/quadforms, shaped for array batches. The pure versions stay
the reference; tests pin kernel == reference on overlapping ranges.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numba import njit

SIEVE_CAP = 1 << 24  # largest series cutoff served by the SPF sieve path


# ---------------------------------------------------------------- primitives


@njit(cache=True, inline="always")
def _powmod(a, e, m):
    r = 1
    a %= m
    while e > 0:
        if e & 1:
            r = r * a % m
        a = a * a % m
        e >>= 1
    return r


@njit(cache=True, inline="always")
def _modinv(a, m):
    g, x = m, 0
    b, y = a % m, 1
    while b:
        q = g // b
        g, b = b, g - q * b
        x, y = y, x - q * y
    return x % m


@njit(cache=True, inline="always")
def _gcd64(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, inline="always")
def _isqrt64(n):
    s = np.int64(math.sqrt(np.float64(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


@njit(cache=True)
def _sqrt_mod_p(a, p):
    """Tonelli-Shanks; requires odd prime p and (a/p) = 1."""
    a %= p
    if p & 3 == 3:
        return _powmod(a, (p + 1) >> 2, p)
    z = 2
    while _powmod(z, (p - 1) >> 1, p) != p - 1:
        z += 1
    q = p - 1
    s = 0
    while q & 1 == 0:
        q >>= 1
        s += 1
    m = s
    c = _powmod(z, q, p)
    t = _powmod(a, q, p)
    r = _powmod(a, (q + 1) >> 1, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = _powmod(c, np.int64(1) << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


@njit(cache=True)
def _sieve_spf(limit):
    spf = np.zeros(limit + 1, np.int32)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            for j in range(i, limit + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    return spf


@njit(cache=True)
def _primes_upto(limit):
    spf = _sieve_spf(limit)
    cnt = 0
    for i in range(2, limit + 1):
        if spf[i] == i:
            cnt += 1
    out = np.empty(cnt, np.int64)
    k = 0
    for i in range(2, limit + 1):
        if spf[i] == i:
            out[k] = i
            k += 1
    return out


@njit(cache=True)
def _kron_pos(a, n):
    """Kronecker symbol (a/n) for a > 0, n >= 1."""
    t = 1
    if n & 1 == 0:
        if a & 1 == 0:
            return 0
        while n & 1 == 0:
            n >>= 1
            m8 = a & 7
            if m8 == 3 or m8 == 5:
                t = -t
    a %= n
    while a != 0:
        while a & 1 == 0:
            a >>= 1
            m8 = n & 7
            if m8 == 3 or m8 == 5:
                t = -t
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            t = -t
        a %= n
    if n == 1:
        return t
    return 0


# ------------------------------------------------------- smoothed character L


@njit(cache=True)
def _chi_fill(d, L, spf, chi):
    chi[1] = np.int8(1)
    for l in range(2, L + 1):
        p = spf[l]
        if p == l:
            if p == 2:
                if d & 1 == 0:
                    chi[l] = np.int8(0)
                elif d % 8 == 1:
                    chi[l] = np.int8(1)
                else:
                    chi[l] = np.int8(-1)
            else:
                dp = d % p
                if dp == 0:
                    chi[l] = np.int8(0)
                elif _powmod(dp, (p - 1) >> 1, p) == 1:
                    chi[l] = np.int8(1)
                else:
                    chi[l] = np.int8(-1)
        else:
            chi[l] = chi[p] * chi[l // p]


@njit(cache=True)
def _smoothed_sieved_single(d, N, L, spf):
    chi = np.empty(L + 1, np.int8)
    _chi_fill(d, L, spf, chi)
    acc = 0.0
    for l in range(1, L + 1):
        c = chi[l]
        if c:
            acc += c * math.exp(-l / N) / l
    return acc


@njit(cache=True)
def _smoothed_jacobi(d, N, L):
    acc = 0.0
    for l in range(1, L + 1):
        c = _kron_pos(d, l)
        if c:
            acc += c * math.exp(-l / N) / l
    return acc


@njit(cache=True)
def _smoothed_block(ds, L, spf, weights, out):
    chi = np.empty(L + 1, np.int8)
    for k in range(ds.shape[0]):
        _chi_fill(ds[k], L, spf, chi)
        acc = 0.0
        for l in range(1, L + 1):
            c = chi[l]
            if c:
                acc += c * weights[l]
        out[k] = acc


@lru_cache(maxsize=4)
def _spf_for(limit: int) -> np.ndarray:
    return _sieve_spf(limit)


def smoothed_L_value(d: int, smoothing: float) -> float:
    """Sum_{l <= 40*smoothing} chi_d(l)/l e^{-l/smoothing}, exact cutoff."""
    L = int(40.0 * smoothing)
    if L < 1:
        L = 1
    if L <= SIEVE_CAP:
        return float(_smoothed_sieved_single(d, smoothing, L, _spf_for(L)))
    return float(_smoothed_jacobi(d, smoothing, L))


def smoothed_L_block(ds: np.ndarray, smoothing: float) -> np.ndarray:
    """smoothed_L for many discriminants at one shared smoothing parameter."""
    L = int(40.0 * smoothing)
    if L < 1:
        L = 1
    if L > SIEVE_CAP:
        raise ValueError(f"block cutoff {L} beyond sieve cap; use smoothed_L_value per d")
    ls = np.arange(L + 1, dtype=np.float64)
    ls[0] = 1.0
    weights = np.exp(-ls / smoothing) / ls
    out = np.empty(len(ds), np.float64)
    _smoothed_block(np.asarray(ds, dtype=np.int64), L, _spf_for(L), weights, out)
    return out


# ------------------------------------------------------- bulk class numbers


@njit(cache=True)
def _sqrt_mod_2k(d, k, out_r, out_m):
    """Progressions (r mod m) covering all solutions of x^2 == d (mod 2^k), k >= 2."""
    w = 0
    dd = d
    while dd & 1 == 0 and w < k:
        dd >>= 1
        w += 1
    if w >= k:
        out_r[0] = 0
        out_m[0] = np.int64(1) << ((k + 1) >> 1)
        return 1
    if w & 1:
        return 0
    j = k - w
    if j == 1 or j == 2:
        if j == 2 and dd & 3 != 1:
            return 0
        cnt = 1
        out_r[0] = 1
        out_m[0] = 2
    else:
        if dd & 7 != 1:
            return 0
        r = np.int64(1)
        for t in range(3, j):
            if (r * r - dd) & ((np.int64(1) << (t + 1)) - 1) != 0:
                r += np.int64(1) << (t - 1)
        m = np.int64(1) << j
        half = np.int64(1) << (j - 1)
        out_r[0] = r
        out_r[1] = m - r
        out_r[2] = r + half
        out_r[3] = half - r if half > r else half - r + m
        out_m[0] = m
        out_m[1] = m
        out_m[2] = m
        out_m[3] = m
        cnt = 4
    hw = w >> 1
    for i in range(cnt):
        out_r[i] <<= hw
        out_m[i] <<= hw
    return cnt


@njit(cache=True)
def _sqrt_mod_pk(d, p, e, lg, r0, out_r, out_m):
    """Progressions covering x^2 == d (mod p^e) for odd p.

    lg, r0: cached Legendre symbol of d mod p and a base square root (valid when lg == 1).
    """
    if lg == -1:
        return 0
    if lg == 1:
        r = r0
        pe = p
        for _ in range(1, e):
            pe1 = pe * p
            num = (r * r - d) % pe1
            if num:
                inv = _modinv((2 * r) % pe1, pe1)
                r = (r - num * inv) % pe1
            pe = pe1
        out_r[0] = r
        out_m[0] = pe
        out_r[1] = pe - r
        out_m[1] = pe
        return 2
    # p divides d
    w = 0
    dd = d
    while dd % p == 0 and w < e:
        dd //= p
        w += 1
    if w >= e:
        m = np.int64(1)
        for _ in range((e + 1) >> 1):
            m *= p
        out_r[0] = 0
        out_m[0] = m
        return 1
    if w & 1:
        return 0
    dp = dd % p
    if _powmod(dp, (p - 1) >> 1, p) != 1:
        return 0
    r = _sqrt_mod_p(dp, p)
    pe = p
    for _ in range(1, e - w):
        pe1 = pe * p
        num = (r * r - dd) % pe1
        if num:
            inv = _modinv((2 * r) % pe1, pe1)
            r = (r - num * inv) % pe1
        pe = pe1
    scale = np.int64(1)
    for _ in range(w >> 1):
        scale *= p
    out_r[0] = r * scale
    out_m[0] = pe * scale
    out_r[1] = (pe - r) * scale
    out_m[1] = pe * scale
    return 2


@njit(cache=True, inline="always")
def _crt(r1, m1, r2, m2):
    t = ((r2 - r1) % m2) * _modinv(m1 % m2, m2) % m2
    return r1 + m1 * t, m1 * m2


@njit(cache=True, inline="always")
def _bsearch(arr, n, key):
    lo = 0
    hi = n
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < n and arr[lo] == key:
        return lo
    return -1


@njit(cache=True)
def _class_numbers_bulk(ds, spf, primes, pidx):
    """Cycle counts of the reduction operator, one per discriminant.

    spf covers 4*isqrt(max d)+4; primes covers isqrt(max d). Returns -1 on
    internal inconsistency (never expected; callers raise).
    """
    nd = ds.shape[0]
    out = np.zeros(nd, np.int64)
    npr = primes.shape[0]
    leg = np.zeros(npr, np.int8)
    root = np.zeros(npr, np.int64)
    res_a = np.empty(1024, np.int64)
    mod_a = np.empty(1024, np.int64)
    res_b = np.empty(1024, np.int64)
    mod_b = np.empty(1024, np.int64)
    part_r = np.empty(8, np.int64)
    part_m = np.empty(8, np.int64)
    keys_cap = 1 << 12
    keys = np.empty(keys_cap, np.int64)

    for di in range(nd):
        d = ds[di]
        s = _isqrt64(d)
        for i in range(npr):
            p = primes[i]
            if p > s:
                break
            if p == 2:
                leg[i] = 2
                continue
            dp = d % p
            if dp == 0:
                leg[i] = 0
            elif _powmod(dp, (p - 1) >> 1, p) == 1:
                leg[i] = 1
                root[i] = _sqrt_mod_p(dp, p)
            else:
                leg[i] = -1

        nkeys = 0
        for A in range(1, s + 1):
            blo = s - 2 * A + 1
            t2 = 2 * A - s
            if t2 > blo:
                blo = t2
            if blo < 1:
                blo = 1
            m4 = 4 * A
            e2 = 2
            aa = A
            while aa & 1 == 0:
                aa >>= 1
                e2 += 1
            ncombo = _sqrt_mod_2k(d, e2, part_r, part_m)
            if ncombo == 0:
                continue
            for q in range(ncombo):
                res_a[q] = part_r[q]
                mod_a[q] = part_m[q]
            ok = True
            rem = aa
            while rem > 1:
                p = np.int64(spf[rem])
                e = 0
                while rem % p == 0:
                    rem //= p
                    e += 1
                cnt = _sqrt_mod_pk(d, p, e, leg[pidx[p]], root[pidx[p]], part_r, part_m)
                if cnt == 0:
                    ok = False
                    break
                nn = 0
                for ci in range(ncombo):
                    for q in range(cnt):
                        rr, mm = _crt(res_a[ci], mod_a[ci], part_r[q], part_m[q])
                        res_b[nn] = rr
                        mod_b[nn] = mm
                        nn += 1
                for ci in range(nn):
                    res_a[ci] = res_b[ci]
                    mod_a[ci] = mod_b[ci]
                ncombo = nn
            if not ok:
                continue
            for ci in range(ncombo):
                m = mod_a[ci]
                b = blo + (res_a[ci] - blo) % m
                while b <= s:
                    t = d - b * b
                    if t % m4 == 0:
                        c = t // m4
                        if _gcd64(_gcd64(A, b), c) == 1:
                            if nkeys + 2 > keys_cap:
                                keys_cap *= 2
                                grown = np.empty(keys_cap, np.int64)
                                grown[:nkeys] = keys[:nkeys]
                                keys = grown
                            keys[nkeys] = (b << 18) | (A << 1)
                            keys[nkeys + 1] = (b << 18) | (A << 1) | 1
                            nkeys += 2
                    b += m

        skeys = np.sort(keys[:nkeys])
        visited = np.zeros(nkeys, np.uint8)
        cycles = 0
        bad = False
        for i0 in range(nkeys):
            if visited[i0]:
                continue
            cycles += 1
            b = skeys[i0] >> 18
            aabs = (skeys[i0] >> 1) & 0x1FFFF
            neg = skeys[i0] & 1
            while True:
                idx = _bsearch(skeys, nkeys, (b << 18) | (aabs << 1) | neg)
                if idx < 0:
                    bad = True
                    break
                if visited[idx]:
                    break
                visited[idx] = 1
                a = -aabs if neg else aabs
                c = (b * b - d) // (4 * a)
                aabs = c if c > 0 else -c
                b = s - (s + b) % (2 * aabs)
                neg = 1 if c < 0 else 0
            if bad:
                break
        out[di] = -1 if bad else cycles
    return out


def class_numbers_bulk(ds) -> np.ndarray:
    """Class numbers for an array of discriminants via the reduction-cycle kernel."""
    arr = np.asarray(ds, dtype=np.int64)
    if arr.size == 0:
        return np.zeros(0, np.int64)
    smax = math.isqrt(int(arr.max()))
    spf = _spf_for(4 * smax + 4)
    primes = _primes_upto(max(smax, 2))
    pidx = np.zeros(smax + 2, np.int64)
    for i, p in enumerate(primes):
        pidx[p] = i
    res = _class_numbers_bulk(arr, spf, primes, pidx)
    if (res < 0).any():
        bad = arr[res < 0]
        raise RuntimeError(f"reduction walk left the reduced set for d={bad[:5]}")
    return res


# ------------------------------------------------ local-density class folds


@njit(cache=True)
def _fold_class_sums_odd(p, b_max, c_max):
    """Class sums mod p^c_max over one full period of the b <= b_max partial density."""
    T = np.int64(1)
    for _ in range(2 * b_max + 1):
        T *= p
    pc = np.int64(1)
    for _ in range(c_max):
        pc *= p
    out = np.zeros(pc, np.float64)
    qr = np.full(p, np.int8(-1))
    for y in range(p):
        qr[y * y % p] = np.int8(1)
    qr[0] = np.int8(0)
    t0 = np.empty(p, np.float64)
    for j in range(p):
        t0[j] = 1.0 / (1.0 - qr[(j * j - 4) % p] / p)
    if pc >= p:
        cnt = T // pc
        for j in range(pc):
            out[j] += cnt * t0[j % p]
    else:
        # c = 0: the single class collects every residue of the b=0 term
        ssum = 0.0
        for u in range(p):
            ssum += t0[u]
        out[0] += (T // p) * ssum
    pb = np.int64(1)
    for b in range(1, b_max + 1):
        pb *= p
        m = pb * pb
        scale = 1.0 / pb
        for r0 in (np.int64(2), m - 2):
            n = r0
            while n < T:
                dd = (n * n - 4) // m
                e = qr[dd % p]
                out[n % pc] += scale / (1.0 - e / p)
                n += m
    return out


@njit(cache=True)
def _fold_class_sums_two(b_max, c_max):
    """p = 2 analogue of _fold_class_sums_odd; period 2^(2 b_max + 3)."""
    T = np.int64(1) << (2 * b_max + 3)
    pc = np.int64(1) << c_max
    mask = pc - 1
    out = np.zeros(pc, np.float64)
    if pc >= 2:
        cnt = T // pc
        for j in range(pc):
            out[j] += cnt * (2.0 / 3.0 if j & 1 else 1.0)
    else:
        # c = 0: even and odd residues fold into the single class
        out[0] += (T // 2) * (1.0 + 2.0 / 3.0)
    starts = np.empty(4, np.int64)
    for b in range(1, b_max + 1):
        scale = 2.0 ** (-b)
        if b == 1:
            nstarts = 1
            starts[0] = 0
            step = np.int64(2)
        elif b == 2:
            nstarts = 1
            starts[0] = 2
            step = np.int64(4)
        else:
            step = np.int64(1) << (2 * b - 1)
            half = step >> 1
            nstarts = 4
            starts[0] = 2
            starts[1] = step - 2
            starts[2] = half + 2
            starts[3] = half - 2
        for si in range(nstarts):
            n = starts[si]
            while n < T:
                dd = (n * n - 4) >> (2 * b)
                if dd & 3 <= 1:
                    if dd & 1:
                        e = 1.0 if dd & 7 == 1 else -1.0
                        out[n & mask] += scale / (1.0 - e / 2.0)
                    else:
                        out[n & mask] += scale
                n += step
    return out


@lru_cache(maxsize=64)
def fold_class_sums(p: int, b_max: int, c: int) -> tuple[np.ndarray, int]:
    """(class sums mod p^c, period length) for the truncated local density."""
    if p == 2:
        T = 1 << (2 * b_max + 3)
        return _fold_class_sums_two(b_max, c), T
    T = p ** (2 * b_max + 1)
    return _fold_class_sums_odd(p, b_max, c), T


# ------------------------------------------- shifted-pair character sums


@njit(cache=True)
def _shifted_pair_charsum(p, r):
    qr = np.full(p, np.int64(-1))
    for y in range(p):
        qr[y * y % p] = 1
    qr[0] = 0
    s = 0
    for n in range(p):
        s += qr[(n * n - 4) % p] * qr[((n + r) * (n + r) - 4) % p]
    return s


@njit(cache=True)
def _shifted_pair_charsum_batch(primes, r):
    out = np.empty(primes.shape[0], np.int64)
    for i in range(primes.shape[0]):
        p = primes[i]
        out[i] = _shifted_pair_charsum(p, r % p)
    return out


def shifted_pair_charsum(p: int, r: int) -> int:
    """Sum over n mod p of ((n^2-4)/p)(((n+r)^2-4)/p), as an integer."""
    return int(_shifted_pair_charsum(np.int64(p), np.int64(r % p)))


def shifted_pair_charsum_batch(primes: np.ndarray, r: int) -> np.ndarray:
    return _shifted_pair_charsum_batch(np.asarray(primes, dtype=np.int64), np.int64(r))


def primes_upto(limit: int) -> np.ndarray:
    return _primes_upto(limit)
