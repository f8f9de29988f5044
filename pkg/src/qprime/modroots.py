"""Roots of f(x, 1) = 0 modulo d, and the empirical large sieve over them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qform import QuadForm, classify
from .sieve import factorint, is_prime_u64

_BRUTE_LIMIT = 2**16


@dataclass(frozen=True)
class RootSet:
    modulus: int
    roots: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.roots)


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Square root of a modulo the prime p, the smaller of r and p - r."""
    if not is_prime_u64(p):
        raise ValueError(f"{p} is not prime")
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


def _poly(F: QuadForm, x: int, mod: int) -> int:
    return (F.f2 * x * x + F.f1 * x + F.f0) % mod


def _brute(F: QuadForm, mod: int) -> list[int]:
    x = np.arange(mod, dtype=object if mod > 2**31 else np.int64)
    vals = (F.f2 % mod * x % mod * x + F.f1 % mod * x + F.f0 % mod) % mod
    return [int(r) for r in np.flatnonzero(vals == 0)]


def _lift_layers(F: QuadForm, p: int, roots: list[int], j: int, k: int) -> list[int]:
    """Exhaustive lifting from p^j to p^k, one digit at a time."""
    for i in range(j, k):
        pi, nxt = p**i, p ** (i + 1)
        roots = [r + t * pi for r in roots for t in range(p) if _poly(F, r + t * pi, nxt) == 0]
    return sorted(roots)


def _hensel(F: QuadForm, r: int, p: int, k: int) -> int:
    """Newton lift of a simple root r mod p to mod p^k."""
    mod = p
    while mod < p**k:
        mod = min(mod * mod, p**k)
        deriv = (2 * F.f2 * r + F.f1) % mod
        r = (r - _poly(F, r, mod) * pow(deriv, -1, mod)) % mod
    return r


@lru_cache(maxsize=1 << 16)
def roots_mod_prime_power(F: QuadForm, p: int, k: int) -> RootSet:
    if not is_prime_u64(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be positive")
    mod = p**k
    if mod > 2**63:
        raise ValueError("p^k exceeds 2^63")
    if F.f2 % p == 0 and F.f1 % p == 0 and F.f0 % p == 0:
        raise ValueError("form is not primitive at p")
    disc = F.f1 * F.f1 - 4 * F.f2 * F.f0
    if (2 * disc) % p == 0:
        if mod <= _BRUTE_LIMIT:
            return RootSet(mod, tuple(_brute(F, mod)))
        j = 1
        while p ** (j + 1) <= _BRUTE_LIMIT:
            j += 1
        return RootSet(mod, tuple(_lift_layers(F, p, _brute(F, p**j), j, k)))
    if F.f2 % p == 0:
        base = [(-F.f0 * pow(F.f1, -1, p)) % p]
    else:
        s = sqrt_mod_prime(disc, p)
        if s is None:
            return RootSet(mod, ())
        inv = pow(2 * F.f2, -1, p)
        base = sorted({(-F.f1 + s) * inv % p, (-F.f1 - s) * inv % p})
    return RootSet(mod, tuple(sorted(_hensel(F, r, p, k) for r in base)))


def _crt_combine(a: list[int], m: int, b: tuple[int, ...], n: int) -> list[int]:
    inv = pow(m, -1, n)
    return [x + m * ((y - x) * inv % n) for x in a for y in b]


def roots_mod(F: QuadForm, d: int) -> RootSet:
    """All roots of f(x, 1) modulo d, combined across prime powers by CRT."""
    if d < 1:
        raise ValueError("d must be positive")
    roots, mod = [0], 1
    for p, e in factorint(d).items():
        part = roots_mod_prime_power(F, p, e)
        if not part.roots:
            return RootSet(d, ())
        roots = _crt_combine(roots, mod, part.roots, part.modulus)
        mod *= part.modulus
    return RootSet(d, tuple(sorted(roots)))


def rho_count(F: QuadForm, d: int) -> int:
    """rho_f(d) as a product of prime-power root counts (no root lists)."""
    out = 1
    for p, e in factorint(d).items():
        out *= len(roots_mod_prime_power(F, p, e).roots)
        if out == 0:
            break
    return out


def large_sieve_ratio(
    F: QuadForm, D: int, N: int, alpha: np.ndarray, chunk: int = 1 << 20
) -> float:
    """Ratio of sum_{D<=d<=2D} sum_{F(1,v)=0 mod d} |sum_n alpha_n e(vn/d)|^2
    to (D + N) * sum |alpha_n|^2.

    The congruence sits in the second argument, so the roots are those of the
    reversed polynomial f0 x^2 + f1 x + f2.
    """
    if not classify(F).irreducible:
        raise ValueError("degenerate form")
    alpha = np.asarray(alpha, dtype=np.complex128)
    if alpha.shape != (N,):
        raise ValueError("alpha must have length N")
    energy = float(np.sum(np.abs(alpha) ** 2))
    if energy == 0.0:
        return 0.0
    rev = QuadForm(F.f0, F.f1, F.f2)
    num, den = [], []
    for d in range(D, 2 * D + 1):
        for v in _roots_any(rev, d):
            num.append(v)
            den.append(d)
    if not num:
        return 0.0
    nu = np.asarray(num, dtype=np.float64)
    dd = np.asarray(den, dtype=np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    parts = []
    step = max(1, chunk // N)
    for i in range(0, len(nu), step):
        phase = np.outer(nu[i : i + step] / dd[i : i + step], n) % 1.0
        s = np.exp(2j * np.pi * phase) @ alpha
        parts.extend((s.real**2 + s.imag**2).tolist())
    return math.fsum(parts) / ((D + N) * energy)


def _roots_any(F: QuadForm, d: int) -> tuple[int, ...]:
    # large-sieve moduli may share a prime with every coefficient of a
    # non-primitive reversal; fall back to brute force there
    try:
        return roots_mod(F, d).roots
    except ValueError:
        return tuple(_brute(F, d))
