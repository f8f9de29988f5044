"""Prime infrastructure: segmented sieve, 64-bit primality, factorization,
multiplicative functions and an exact evaluation of Vaughan's identity."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Witnesses 2..37 are a complete Miller-Rabin set for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6
_SEGMENT_BYTES = 1 << 22


class Arith(enum.Enum):
    LAMBDA = "Lambda"
    MU = "Mu"
    TAU = "Tau"
    PHI = "Phi"


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 2**64 (and beyond)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_upto(_TRIAL_LIMIT))


def _pollard_brent(n: int, seed: int) -> int:
    """A nontrivial factor of the odd composite n (Brent's cycle variant)."""
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
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


def _split(n: int, out: dict[int, int], seed: int = 1) -> None:
    if n == 1:
        return
    if is_prime_u64(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out, seed)
        _split(r, out, seed)
        return
    g = _pollard_brent(n, seed)
    _split(g, out, seed + 1)
    _split(n // g, out, seed + 1)


def factorint(n: int) -> dict[int, int]:
    """Prime factorization {p: e}; trial division to 10**6, then Pollard-Brent."""
    if n < 1:
        raise ValueError(f"factorint needs n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
            out[n] = out.get(n, 0) + 1
        else:
            rest: dict[int, int] = {}
            _split(n, rest)
            for p, e in rest.items():
                out[p] = out.get(p, 0) + e
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def arith(n: int, which: Arith | str) -> float | int:
    """Lambda (natural log), Mu, Tau or Phi of n from its factorization."""
    which = Arith(which)
    fac = factorint(n)
    if which is Arith.LAMBDA:
        return math.log(next(iter(fac))) if len(fac) == 1 else 0.0
    if which is Arith.MU:
        if any(e > 1 for e in fac.values()):
            return 0
        return -1 if len(fac) % 2 else 1
    if which is Arith.TAU:
        return math.prod(e + 1 for e in fac.values())
    return math.prod((p - 1) * p ** (e - 1) for p, e in fac.items())


@dataclass(frozen=True)
class PrimeTable:
    """Sieve output over [lo, hi). Optional layers are None when not built."""

    lo: int
    hi: int
    prime_bits: np.ndarray
    lambda_vm: np.ndarray | None = None
    mu: np.ndarray | None = None
    tau: np.ndarray | None = None
    phi: np.ndarray | None = None

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.prime_bits).astype(np.int64) + self.lo

    def _at(self, arr: np.ndarray | None, n: int, name: str):
        if arr is None:
            raise ValueError(f"layer {name!r} was not built")
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside [{self.lo}, {self.hi})")
        return arr[n - self.lo]

    def is_prime(self, n: int) -> bool:
        return bool(self._at(self.prime_bits, n, "prime_bits"))

    def Lambda(self, n: int) -> float:
        return float(self._at(self.lambda_vm, n, "lambda"))


def _segment_prime_bits(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    bits = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        bits[start - lo :: p] = False
    bits[: max(0, min(2, hi) - lo)] = False
    return bits


def prime_table(
    lo: int,
    hi: int,
    layers: tuple[str, ...] = ("lambda",),
    segment_bytes: int = _SEGMENT_BYTES,
) -> PrimeTable:
    """Segmented Eratosthenes over [lo, hi) with optional Lambda/mu/tau/phi.

    The multiplicative layers are built by dividing out every base prime from
    a copy of the segment; whatever cofactor survives is a single large prime.
    """
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if hi - lo > 2**31 or hi > 2**63:
        raise ValueError("range too large")
    unknown = set(layers) - {"lambda", "mu", "tau", "phi"}
    if unknown:
        raise ValueError(f"unknown layers {sorted(unknown)}")
    base = primes_upto(math.isqrt(hi - 1) + 1)
    bits = np.empty(hi - lo, dtype=bool)
    for a in range(lo, hi, segment_bytes):
        b = min(hi, a + segment_bytes)
        bits[a - lo : b - lo] = _segment_prime_bits(a, b, base)

    lam = mu = tau = phi = None
    if "lambda" in layers:
        lam = np.zeros(hi - lo, dtype=np.float64)
        idx = np.flatnonzero(bits)
        lam[idx] = np.log((idx + lo).astype(np.float64))
        for p in base:
            p = int(p)
            q = p * p
            while q < hi:
                if q >= lo:
                    lam[q - lo] = math.log(p)
                q *= p
    if {"mu", "tau", "phi"} & set(layers):
        n = np.arange(lo, hi, dtype=np.int64)
        rem = n.copy()
        mu = np.ones(hi - lo, dtype=np.int8)
        tau = np.ones(hi - lo, dtype=np.int64)
        phi = n.copy()
        for p in base:
            p = int(p)
            first = -(-lo // p) * p
            if first >= hi:
                continue
            sl = slice(first - lo, None, p)
            e = np.zeros(len(range(first, hi, p)), dtype=np.int64)
            pk = p
            while pk < hi:
                hit = (n[sl] % pk) == 0
                if not hit.any():
                    break
                e += hit
                pk *= p
            rem[sl] //= np.power(p, e)
            mu[sl] = np.where(e == 1, -mu[sl], 0)
            tau[sl] *= e + 1
            phi[sl] = phi[sl] // p * (p - 1)
        big = rem > 1
        mu[big] = -mu[big]
        tau[big] *= 2
        phi[big] = phi[big] // rem[big] * (rem[big] - 1)
        if lo == 0:
            mu[0] = tau[0] = phi[0] = 0
        mu = mu if "mu" in layers else None
        tau = tau if "tau" in layers else None
        phi = phi if "phi" in layers else None
    return PrimeTable(lo, hi, bits, lam, mu, tau, phi)


def vaughan_check(n: int, Y: float, Z: float) -> float:
    """Right side of Vaughan's identity at n with cut-offs Y and Z.

    Equals Lambda(n) when n > Z and 0 when n <= Z. The double sums run over
    pairs (m, c) with mc | n; only squarefree m and prime-power c contribute.
    """
    if n < 1 or Y < 1 or Z < 1:
        raise ValueError("need n, Y, Z >= 1")
    if n > 10**7:
        raise ValueError("n exceeds the divisor-enumeration budget of 10**7")
    fac = factorint(n)
    primes = list(fac)
    # squarefree divisors m with mu(m)
    sqfree = [(1, 1)]
    for p in primes:
        sqfree += [(m * p, -s) for m, s in sqfree]
    terms = [s * math.log(n / m) for m, s in sqfree if m <= Y]
    for m, s in sqfree:
        rest = n // m
        for p in primes:
            c = p
            while rest % c == 0:
                if m <= Y and c <= Z:
                    terms.append(-s * math.log(p))
                elif m > Y and c > Z:
                    terms.append(s * math.log(p))
                c *= p
    return math.fsum(terms)


def smallest_prime_factor_table(n: int) -> np.ndarray:
    """spf[k] for 0 <= k <= n (spf[0] = 0, spf[1] = 1)."""
    spf = np.zeros(n + 1, dtype=np.int32 if n < 2**31 else np.int64)
    if n >= 1:
        spf[1] = 1
    for p in primes_upto(math.isqrt(n)):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = spf[2:] == 0
    spf[2:][rest] = np.arange(2, n + 1)[rest]
    return spf
