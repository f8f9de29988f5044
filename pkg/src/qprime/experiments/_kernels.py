"""numba hot loops: row sieving of f(m, L) values and Type I residue counts."""

from __future__ import annotations

import math

import numba
import numpy as np
from numba import njit, prange

# an old system TBB is rejected with a warning; try it last
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def _isqrt(n: np.int64) -> np.int64:
    if n <= 0:
        return 0
    r = np.int64(math.sqrt(float(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _powmod(b: np.int64, e: np.int64, m: np.int64) -> np.int64:
    r = np.int64(1)
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@njit(cache=True)
def _sqrt_mod(a: np.int64, p: np.int64) -> np.int64:
    """Tonelli-Shanks for an odd prime p < 2^31; -1 when a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if _powmod(a, (p - 1) // 2, p) != 1:
        return -1
    if p % 4 == 3:
        return _powmod(a, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = np.int64(2)
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = _powmod(z, q, p)
    t = _powmod(a, q, p)
    r = _powmod(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = b * b % p
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


@njit(cache=True)
def _invmod(a: np.int64, m: np.int64) -> np.int64:
    a %= m
    t, nt, r, nr = np.int64(0), np.int64(1), m, a
    while nr != 0:
        q = r // nr
        t, nt = nt, t - q * nt
        r, nr = nr, r - q * nr
    if t < 0:
        t += m
    return t


@njit(cache=True)
def prime_roots(f2: np.int64, f1: np.int64, f0: np.int64, primes: np.ndarray):
    """Roots of f(x, 1) mod p for each prime; count -1 flags p | f2 and p | f1."""
    n = primes.shape[0]
    roots = np.zeros((n, 2), dtype=np.int64)
    count = np.zeros(n, dtype=np.int64)
    disc = f1 * f1 - 4 * f2 * f0
    for i in range(n):
        p = primes[i]
        a, b, c = f2 % p, f1 % p, f0 % p
        if p == 2 or disc % p == 0 or a == 0:
            k = 0
            if p < 64 or a == 0:
                if a == 0 and b == 0:
                    count[i] = 0
                    continue
                if a == 0:
                    roots[i, 0] = (p - c) * _invmod(b, p) % p
                    count[i] = 1
                    continue
                for x in range(p):
                    if (a * x % p * x + b * x + c) % p == 0:
                        roots[i, k] = x
                        k += 1
                count[i] = k
            else:
                roots[i, 0] = (p - b) % p * _invmod(2 * a, p) % p
                count[i] = 1
            continue
        s = _sqrt_mod(disc % p, p)
        if s < 0:
            continue
        inv = _invmod(2 * a, p)
        r1 = (p - b + s) % p * inv % p
        r2 = (2 * p - b - s) % p * inv % p
        roots[i, 0] = min(r1, r2)
        roots[i, 1] = max(r1, r2)
        count[i] = 2
    return roots, count


@njit(cache=True)
def _row_segment(f2, f1, f0, L, lo, hi, X, primes, roots, count, want_lambda):
    """Sieve the values v = f(m, L) for lo <= m <= hi and return
    (number of primes, sum of Lambda) over 0 < v <= X.

    state: 0 = no prime <= sqrt(X) divides v; p = v is a power of p;
    -1 = composite (or out of range).
    """
    n = hi - lo + 1
    if n <= 0:
        return 0.0, 0.0
    vals = np.empty(n, dtype=np.int64)
    state = np.zeros(n, dtype=np.int64)
    for j in range(n):
        m = lo + j
        v = f2 * m * m + f1 * m * L + f0 * L * L
        vals[j] = v
        if v <= 0 or v > X:
            state[j] = -1
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p > X:
            break
        Lp = L % p
        step = p
        nres = count[i]
        res0 = roots[i, 0] * Lp % p
        res1 = roots[i, 1] * Lp % p
        if Lp == 0:
            nres = 1
            res0 = 0
            if f2 % p == 0:
                step = 1
        for k in range(nres):
            res = res0 if k == 0 else res1
            first = 0 if step == 1 else (res - lo) % p
            for j in range(first, n, step):
                st = state[j]
                if st == 0:
                    w = vals[j]
                    while w % p == 0:
                        w //= p
                    state[j] = p if w == 1 else -1
                elif st > 0 and st != p:
                    state[j] = -1
    cnt = 0.0
    lam = 0.0
    for j in range(n):
        st = state[j]
        if st == 0:
            v = vals[j]
            if v > 1:
                cnt += 1.0
                if want_lambda:
                    lam += math.log(float(v))
        elif st > 0:
            if st == vals[j]:
                cnt += 1.0
            if want_lambda:
                lam += math.log(float(st))
    return cnt, lam


@njit(cache=True)
def _row_bounds(f2, f1, f0, L, X):
    """Up to two integer m-ranges covering {m : 0 < f(m, L) <= X}.

    Returned as (a1, b1, a2, b2); an empty range has b < a. Float roots are
    widened outward by 2 and the caller filters values exactly.
    """
    A = float(f2)
    B = float(f1) * float(L)
    C = float(f0) * float(L) * float(L)
    d_top = B * B - 4.0 * A * (C - float(X))
    d_zero = B * B - 4.0 * A * C
    if A > 0:
        if d_top < 0:
            return 1, 0, 1, 0
        s = math.sqrt(d_top)
        a = np.int64(math.floor((-B - s) / (2 * A))) - 2
        b = np.int64(math.ceil((-B + s) / (2 * A))) + 2
        if d_zero <= 0:
            return a, b, 1, 0
        t = math.sqrt(d_zero)
        c = np.int64(math.ceil((-B - t) / (2 * A))) + 2
        d = np.int64(math.floor((-B + t) / (2 * A))) - 2
    else:
        if d_zero <= 0:
            return 1, 0, 1, 0
        t = math.sqrt(d_zero)
        a = np.int64(math.floor((-B + t) / (2 * A))) - 2
        b = np.int64(math.ceil((-B - t) / (2 * A))) + 2
        if d_top <= 0:
            return a, b, 1, 0
        s = math.sqrt(d_top)
        c = np.int64(math.ceil((-B + s) / (2 * A))) + 2
        d = np.int64(math.floor((-B - s) / (2 * A))) - 2
    if c >= d:
        return a, b, 1, 0
    return a, c, d, b


@njit(cache=True, parallel=True)
def count_rows(f2, f1, f0, Ls, weights, X, primes, roots, count, want_lambda, m_positive):
    """Per-row prime counts and Lambda sums of f(m, L) over 0 < f <= X.

    Row r uses second argument Ls[r]; the caller combines rows with weights
    in a fixed order so the reduction is deterministic.
    """
    nrows = Ls.shape[0]
    cnt = np.zeros(nrows)
    lam = np.zeros(nrows)
    for r in prange(nrows):
        L = Ls[r]
        a1, b1, a2, b2 = _row_bounds(f2, f1, f0, L, X)
        if m_positive:
            a1 = max(a1, 1)
            a2 = max(a2, 1)
        c1, l1 = _row_segment(f2, f1, f0, L, a1, b1, X, primes, roots, count, want_lambda)
        c2, l2 = _row_segment(f2, f1, f0, L, a2, b2, X, primes, roots, count, want_lambda)
        cnt[r] = c1 + c2
        lam[r] = l1 + l2
    return cnt, lam


@njit(cache=True)
def _gcd(a: np.int64, b: np.int64) -> np.int64:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _primes_divide(g: np.int64, f2: np.int64) -> bool:
    """Every prime factor of g divides f2."""
    h = g
    t = _gcd(h, f2)
    while t > 1:
        while h % t == 0:
            h //= t
        t = _gcd(h, f2)
    return h == 1


@njit(cache=True)
def _count_progression(f2, f1, f0, L, lo, hi, res, d, X, w):
    """Weight w times #{lo <= m <= hi : m = res mod d, 0 < f(m, L) <= X, (m, L) = 1}."""
    total = 0.0
    if hi < lo:
        return total
    m = lo + (res - lo) % d
    while m <= hi:
        v = f2 * m * m + f1 * m * L + f0 * L * L
        if 0 < v <= X and _gcd(m, L) == 1:
            total += w
        m += d
    return total


@njit(cache=True, parallel=True)
def type1_residue_counts(f2, f1, f0, ells, weights, X, ds, roots, offsets):
    """A_d for each d in ds by walking the progressions m = nu L mod d.

    roots[offsets[i]:offsets[i + 1]] are the roots of f(x, 1) mod ds[i]. For
    gcd(L, d) > 1 there are no coprime solutions unless every common prime
    divides f2; those rows are solved by trying every residue.
    """
    nd = ds.shape[0]
    out = np.zeros(nd)
    for i in prange(nd):
        d = ds[i]
        total = 0.0
        for j in range(ells.shape[0]):
            L = ells[j]
            w = weights[j]
            a1, b1, a2, b2 = _row_bounds(f2, f1, f0, L, X)
            g = _gcd(L, d)
            if g == 1:
                for k in range(offsets[i], offsets[i + 1]):
                    res = roots[k] * (L % d) % d
                    total += _count_progression(f2, f1, f0, L, a1, b1, res, d, X, w)
                    total += _count_progression(f2, f1, f0, L, a2, b2, res, d, X, w)
            elif _primes_divide(g, f2):
                for t in range(d):
                    if (f2 * t % d * t + f1 * t % d * (L % d) + f0 * (L % d) % d * (L % d)) % d == 0:
                        total += _count_progression(f2, f1, f0, L, a1, b1, t, d, X, w)
                        total += _count_progression(f2, f1, f0, L, a2, b2, t, d, X, w)
        out[i] = total
    return out


@njit(cache=True)
def coprime_value_histogram(f2, f1, f0, ells, weights, X):
    """h[n] = sum of weights over (m, L) with f(m, L) = n, 0 < n <= X, (m, L) = 1."""
    h = np.zeros(X + 1)
    for j in range(ells.shape[0]):
        L = ells[j]
        w = weights[j]
        a1, b1, a2, b2 = _row_bounds(f2, f1, f0, L, X)
        for lo, hi in ((a1, b1), (a2, b2)):
            for m in range(lo, hi + 1):
                v = f2 * m * m + f1 * m * L + f0 * L * L
                if 0 < v <= X and _gcd(m, L) == 1:
                    h[v] += w
    return h


@njit(cache=True)
def value_histogram(f2, f1, f0, ells, weights, X):
    """h[n] = sum of weights over (m, L) with f(m, L) = n, 0 < n <= X."""
    h = np.zeros(X + 1)
    for j in range(ells.shape[0]):
        L = ells[j]
        w = weights[j]
        a1, b1, a2, b2 = _row_bounds(f2, f1, f0, L, X)
        for lo, hi in ((a1, b1), (a2, b2)):
            for m in range(lo, hi + 1):
                v = f2 * m * m + f1 * m * L + f0 * L * L
                if 0 < v <= X:
                    h[v] += w
    return h
