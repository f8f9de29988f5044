"""Main-term constants: the local-density product, real-region areas and
interval areas."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .modroots import roots_mod_prime_power
from .qform import FormKind, QuadForm, classify, require_admissible
from .sieve import primes_upto


class NuVariant(enum.Enum):
    AS_PRINTED = "as-printed"
    RHO_AT_RAMIFIED = "rho-ramified"
    # diagnostic: density of pairs (m, l) with p not dividing f(m, l^2)
    PAIR_DENSITY = "pair-density"


@dataclass(frozen=True)
class DensityResult:
    value: float
    tail_bound: float
    truncation: float
    # indefinite forms: normalized areas at X_probe and 16 X_probe
    pair: tuple[float, float] | None = None


def _legendre_many(a: int, ps: np.ndarray) -> np.ndarray:
    """Legendre symbol (a/p) for an array of odd primes (p < 2^31)."""
    base = np.mod(a, ps).astype(np.int64)
    e = (ps - 1) // 2
    out = np.ones_like(ps)
    while np.any(e > 0):
        odd = (e & 1) == 1
        out = np.where(odd, out * base % ps, out)
        base = base * base % ps
        e >>= 1
    out = np.where(np.mod(a, ps) == 0, 0, out)
    return np.where(out == ps - 1, -1, out)


def _pair_zero_count(F: QuadForm, p: int) -> int:
    """#{(m, l) mod p : f(m, l^2) = 0 mod p}."""
    m = np.arange(p, dtype=np.int64)[:, None]
    sq = (np.arange(p, dtype=np.int64) ** 2 % p)[None, :]
    vals = (F.f2 % p * m % p * m + F.f1 % p * m % p * sq + F.f0 % p * sq % p * sq) % p
    return int(np.count_nonzero(vals == 0))


def nu_f(F: QuadForm, p_max: int, variant: NuVariant | str = NuVariant.AS_PRINTED) -> DensityResult:
    """Truncated product over p <= p_max of the local factors.

    AS_PRINTED uses (1 - rho(p)/p)(1 - 1/p)^-1 for p not dividing the
    discriminant and (1 - 1/p)^-1 alone for p dividing it. RHO_AT_RAMIFIED
    uses the first factor everywhere. PAIR_DENSITY is the heuristic density
    for unrestricted pairs (m, l) in f(m, l^2).
    """
    variant = NuVariant(variant)
    require_admissible(F)
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    disc = F.disc
    ps = primes_upto(p_max)
    is_special = (ps == 2) | (disc % ps == 0) | (F.f2 % ps == 0)
    special = [int(p) for p in ps[is_special]]
    generic = ps[~is_special]
    pf = generic.astype(np.float64)
    chi = _legendre_many(disc, generic).astype(np.float64)
    if variant is NuVariant.PAIR_DENSITY:
        # zero pairs = 1 + (p-1)(1+chi) for p not dividing 2*disc*f2
        zeros = 1 + (pf - 1) * (1 + chi)
        logs = np.log1p(-zeros / pf**2) - np.log1p(-1 / pf)
    else:
        logs = np.log1p(-(1 + chi) / pf) - np.log1p(-1 / pf)
    terms = logs.tolist()
    for p in special:
        if variant is NuVariant.PAIR_DENSITY:
            terms.append(math.log1p(-_pair_zero_count(F, p) / p**2) - math.log1p(-1 / p))
            continue
        r = len(roots_mod_prime_power(F, p, 1).roots)
        if variant is NuVariant.AS_PRINTED and disc % p == 0:
            terms.append(-math.log1p(-1 / p))
        else:
            if r == p:
                raise ValueError(f"local factor vanishes at p={p}")
            terms.append(math.log1p(-r / p) - math.log1p(-1 / p))
    value = math.exp(math.fsum(terms))
    # tail: the oscillating chi(p)/p part is estimated by the spread of the
    # partial sums over the last half of the primes, the rest by sum 2/p^2
    tail = 2.0 / (p_max * max(1.0, math.log(p_max)))
    if len(logs) > 4:
        csum = np.cumsum(logs)
        half = csum[pf > p_max / 2]
        if len(half):
            tail += float(np.max(np.abs(csum[-1] - half)))
    return DensityResult(value, value * math.expm1(tail), float(p_max))


def _radical_len(F: QuadForm, y: float, X: float) -> float:
    """Length of {x in R : 0 < f(x, y) < X}."""
    d = F.disc
    inner = d * y * y
    outer = inner + 4 * F.f2 * X
    return abs(math.sqrt(max(0.0, inner)) - math.sqrt(max(0.0, outer))) / abs(F.f2)


def _check_region(F: QuadForm) -> FormKind:
    cls = classify(F)
    if not cls.irreducible:
        raise ValueError("degenerate form")
    if cls.kind is FormKind.NEGATIVE_DEFINITE:
        raise ValueError("negative definite form takes no positive values")
    return cls.kind


def _quad(fn, a: float, b: float, points=None) -> tuple[float, float]:
    val, err = integrate.quad(fn, a, b, points=points, limit=400, epsabs=1e-11, epsrel=1e-11)
    return val, err


def c_f(F: QuadForm) -> float:
    """sup of y over f(x, y) <= 1 for definite f, and 1 for indefinite f."""
    if _check_region(F) is FormKind.INDEFINITE:
        return 1.0
    return math.sqrt(4 * F.f2 / -F.disc)


def sigma_f(F: QuadForm, X_probe: float = 1e6) -> DensityResult:
    """Area of f(x, y^2) <= 1 (definite) or the probe-scale normalized area of
    0 < f(x, y^2) < X, 0 < y <= X^(1/4) (indefinite)."""
    kind = _check_region(F)
    if kind is FormKind.POSITIVE_DEFINITE:
        top = c_f(F) ** 0.5
        # t = top * (1 - u^2) smooths the square-root endpoint
        fn = lambda u: 2 * u * top * _radical_len(F, (top * (1 - u * u)) ** 2, 1.0)
        val, err = _quad(fn, 0.0, 1.0)
        return DensityResult(2 * val, 2 * err, math.inf)
    vals = []
    for X in (X_probe, 16 * X_probe):
        top = X**0.25
        fn = lambda t, X=X: _radical_len(F, t * t, X)
        brk = [(-4 * F.f2 * X / F.disc) ** 0.25] if F.f2 < 0 else None
        if brk and brk[0] >= top:
            brk = None
        vals.append(_quad(fn, 0.0, top, brk)[0] / X**0.75)
    return DensityResult(vals[1], abs(vals[1] - vals[0]), 16 * X_probe, (vals[0], vals[1]))


def sigma_f_prime(F: QuadForm, X_probe: float = 1e6) -> DensityResult:
    """Area of f(x, y) <= 1 (definite) or the probe-scale normalized area of
    0 < f(x, y) < X, 0 < y < X^(1/2) (indefinite)."""
    kind = _check_region(F)
    if kind is FormKind.POSITIVE_DEFINITE:
        closed = 2 * math.pi / math.sqrt(-F.disc)
        top = c_f(F)
        fn = lambda u: 2 * u * top * _radical_len(F, top * (1 - u * u), 1.0)
        val, err = _quad(fn, 0.0, 1.0)
        return DensityResult(closed, abs(2 * val - closed) + 2 * err, math.inf)
    vals = []
    for X in (X_probe, 16 * X_probe):
        top = X**0.5
        brk = [math.sqrt(-4 * F.f2 * X / F.disc)] if F.f2 < 0 else None
        if brk and brk[0] >= top:
            brk = None
        vals.append(_quad(lambda y, X=X: _radical_len(F, y, X), 0.0, top, brk)[0] / X)
    return DensityResult(vals[1], abs(vals[1] - vals[0]), 16 * X_probe, (vals[0], vals[1]))


def mu_f_interval(F: QuadForm, I: tuple[float, float], X: float) -> float:
    """Area of {(x, y) : 0 < f(x, y) < X, y in I} for I = (a, b]."""
    kind = _check_region(F)
    a, b = I
    hi = c_f(F) * math.sqrt(X)
    if a < 0 or b < a or b > hi * (1 + 1e-12):
        raise ValueError(f"interval {I} outside (0, {hi}]")
    if b == a:
        return 0.0
    b = min(b, hi)
    fn = lambda y: _radical_len(F, y, X)
    if kind is FormKind.POSITIVE_DEFINITE and b >= hi * (1 - 1e-9):
        # square-root endpoint at y = hi
        span = hi - a
        g = lambda u: 2 * u * span * fn(hi - span * u * u)
        return _quad(g, 0.0, 1.0)[0]
    pts = None
    if F.f2 < 0 and kind is FormKind.INDEFINITE:
        z = math.sqrt(-4 * F.f2 * X / F.disc)
        pts = [z] if a < z < b else None
    return _quad(fn, a, b, pts)[0]
