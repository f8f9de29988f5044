"""The four weighted comparison sequences on a short l-interval, their
sifting functionals, and the prime sums pi(C)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..density import c_f, mu_f_interval
from ..qform import QuadForm, require_admissible
from ..sieve import is_prime_u64, primes_upto, smallest_prime_factor_table
from ._kernels import _row_bounds, value_histogram

MAX_SIEVE_X = 10**7
MAX_PI_X = 10**8


class SeqKind(enum.Enum):
    A = "a"
    B = "b"
    A_SPADE = "as"
    B_SPADE = "bs"


def interval_partition(F: QuadForm, X: float) -> list[tuple[float, float]]:
    """Intervals (X*, (1 + eta) X*] that exactly partition
    (sqrt(X) (log X)^-4, c_f sqrt(X)], with eta close to 1/log X."""
    lo = math.sqrt(X) / math.log(X) ** 4
    hi = c_f(F) * math.sqrt(X)
    count = math.ceil(math.log(hi / lo) * math.log(X))
    eta = math.exp(math.log(hi / lo) / count) - 1
    edges = [lo * (1 + eta) ** j for j in range(count)] + [hi]
    return list(zip(edges[:-1], edges[1:]))


def middle_interval_index(F: QuadForm, X: float) -> int:
    """Index of the first interval at or above c_f sqrt(X) / 2 that contains
    the square of a prime, so every sequence kind has support."""
    target = c_f(F) * math.sqrt(X) / 2
    parts = interval_partition(F, X)
    start = next(i for i, (a, b) in enumerate(parts) if a < target <= b)
    for i in range(start, len(parts)):
        a, b = parts[i]
        k = math.isqrt(math.floor(a)) + 1
        while k * k <= b:
            if is_prime_u64(k):
                return i
            k += 1
    return start


@dataclass(frozen=True)
class SequenceSpec:
    kind: SeqKind
    form: QuadForm
    X: int
    interval: tuple[float, float]

    @classmethod
    def at(cls, kind: SeqKind | str, F: QuadForm, X: int, index: int | None = None) -> SequenceSpec:
        parts = interval_partition(F, X)
        if index is None:
            index = middle_interval_index(F, X)
        return cls(SeqKind(kind), F, int(X), parts[index])

    def weights(self) -> tuple[np.ndarray, np.ndarray]:
        """The l in the interval with nonzero weight, and the weights."""
        lo, hi = self.interval
        ells = np.arange(math.floor(lo) + 1, math.floor(hi) + 1, dtype=np.int64)
        w = np.zeros(len(ells))
        for i, l in enumerate(ells.tolist()):
            w[i] = ell_weight(self.kind, l)
        keep = w != 0
        return ells[keep], w[keep]


def _prime_power(l: int) -> int | None:
    """p when l = p^k, else None."""
    if l < 2:
        return None
    for k in range(max(1, l.bit_length()), 0, -1):
        p = round(l ** (1 / k))
        for q in (p - 1, p, p + 1):
            if q >= 2 and q**k == l and is_prime_u64(q):
                return q
    return None


def ell_weight(kind: SeqKind, l: int) -> float:
    """2 p log p at l = p^2 (A); Lambda(l) (B); 2 k at l = k^2 (A spade); 1 (B spade)."""
    if kind is SeqKind.B_SPADE:
        return 1.0
    if kind is SeqKind.B:
        p = _prime_power(l)
        return math.log(p) if p else 0.0
    k = math.isqrt(l)
    if k * k != l:
        return 0.0
    if kind is SeqKind.A_SPADE:
        return 2.0 * k
    return 2.0 * k * math.log(k) if is_prime_u64(k) else 0.0


@dataclass(frozen=True)
class SieveParams:
    varpi: float = 0.5
    A1: float = 0.5
    Y_exponent: float = 17 / 48

    def delta1(self, X: float) -> float:
        return math.log(X) ** (self.varpi - 1)

    def delta2(self, X: float) -> float:
        return self.A1 * math.log(math.log(X)) / math.log(X)

    def check(self, X: float) -> None:
        if X ** self.delta1(X) < 2:
            raise ValueError("X^delta1 must be at least 2")
        if self.Y_exponent <= 1 / 3:
            raise ValueError("Y must exceed X^(1/3)")


def sequence_values(spec: SequenceSpec, limit: int) -> np.ndarray:
    """c[n] for 0 <= n <= X, with X bounded by `limit`."""
    require_admissible(spec.form)
    if spec.X > limit:
        raise ValueError(f"X={spec.X} exceeds {limit}")
    ells, w = spec.weights()
    F = spec.form
    return value_histogram(F.f2, F.f1, F.f0, ells, w, spec.X)


class _Sifter:
    """S(C_d, z) = sum of c[d k] over k <= X/d whose prime factors are all >= z."""

    def __init__(self, c: np.ndarray, spf: np.ndarray) -> None:
        self.c = c
        self.X = len(c) - 1
        # least prime factor, with k = 1 sent to infinity
        lpf = spf.astype(np.float64)
        lpf[1] = np.inf
        self.lpf = lpf

    def S(self, d: int, z: float) -> float:
        top = self.X // d
        if top < 1:
            return 0.0
        vals = self.c[d : d * top + 1 : d]
        return float(np.sum(vals[self.lpf[1 : top + 1] >= z]))


@dataclass
class SieveFunctionals:
    S1: float
    S2: float
    S3: float
    # sum over X^(1/2 - delta2) <= p <= X^(1/2) of S(C_p, p)
    tail: float
    T: list[float]
    U: list[float]
    pi: float
    # sum of c_p over p <= sqrt(X), minus c_1: what S1 - S2 - S3 - tail misses
    boundary: float
    n0: int
    cutoffs: dict[str, float] = field(default_factory=dict)

    @property
    def buchstab_gap(self) -> float:
        return self.pi - (self.S1 - self.S2 - self.S3 - self.tail + self.boundary)

    @property
    def s2_gap(self) -> float:
        alt = math.fsum((-1) ** (n - 1) * (t - u) for n, (t, u) in enumerate(zip(self.T, self.U), start=1))
        return self.S2 - alt

    def _ok(self, gap: float, scale: float) -> bool:
        return abs(gap) <= 1e-6 * max(1.0, abs(scale))

    @property
    def buchstab_ok(self) -> bool:
        return self._ok(self.buchstab_gap, self.S1)

    @property
    def s2_ok(self) -> bool:
        return self._ok(self.s2_gap, self.S2)


def _decreasing_products(ps: list[int], n: int, bound: float):
    """Tuples p_1 > ... > p_n from ps with product < bound, with the product."""

    def rec(start_hi: int, depth: int, prod: int, chosen: tuple[int, ...]):
        if depth == 0:
            yield chosen, prod
            return
        for i in range(start_hi):
            p = ps[i]
            if prod * p >= bound:
                break
            yield from rec(i, depth - 1, prod * p, chosen + (p,))

    # ps ascending; each pick comes from below the previous one
    yield from rec(len(ps), n, 1, ())


def sieve_functionals(spec: SequenceSpec, params: SieveParams | None = None) -> SieveFunctionals:
    """S_1, S_2, S_3, the Buchstab tail and the T^(n), U^(n) decomposition of
    S_2 from the full weighted sequence."""
    params = params or SieveParams()
    X = spec.X
    params.check(X)
    c = sequence_values(spec, MAX_SIEVE_X)
    spf = smallest_prime_factor_table(X)
    sift = _Sifter(c, spf)
    z1 = X ** params.delta1(X)
    zt = X ** (0.5 - params.delta2(X))
    # S_3 needs Y <= X^(1/2 - delta2); clamp Y when delta2 is large
    Y = min(X**params.Y_exponent, zt)
    root = math.sqrt(X)
    primes = primes_upto(math.isqrt(X)).tolist()
    S1 = sift.S(1, z1)
    S2 = math.fsum(sift.S(p, p) for p in primes if z1 <= p < Y)
    S3 = math.fsum(sift.S(p, p) for p in primes if Y <= p < zt)
    tail = math.fsum(sift.S(p, p) for p in primes if zt <= p <= root)
    is_p = spf == np.arange(len(spf))
    is_p[:2] = False
    pi = float(np.sum(c[is_p]))
    small = float(np.sum(c[: math.isqrt(X) + 1][is_p[: math.isqrt(X) + 1]]))
    boundary = small - float(c[1])
    n0 = math.floor(math.log(Y) / (params.delta1(X) * math.log(X)))
    mid = [p for p in primes if z1 <= p < Y]
    T, U = [], []
    for n in range(1, n0 + 1):
        t_terms, u_terms = [], []
        for chosen, prod in _decreasing_products(mid, n, Y):
            t_terms.append(sift.S(prod, z1))
            # p_{n+1} < p_n with p_1...p_{n+1} >= Y
            for q in mid:
                if q >= chosen[-1]:
                    break
                if prod * q >= Y:
                    u_terms.append(sift.S(prod * q, q))
        T.append(math.fsum(t_terms))
        U.append(math.fsum(u_terms))
    cut = {"X_delta1": z1, "Y": Y, "X_half_minus_delta2": zt, "sqrt_X": root}
    return SieveFunctionals(S1, S2, S3, tail, T, U, pi, boundary, n0, cut)


# ---------------------------------------------------------------- prime sums


@dataclass(frozen=True)
class PiComparison:
    pi: dict[str, float]
    mu_I: float
    interval: tuple[float, float]
    X: int

    @property
    def gap_ab(self) -> float:
        return abs(self.pi["a"] - self.pi["b"])

    @property
    def gap_spade(self) -> float:
        return abs(self.pi["as"] - self.pi["bs"])

    def normalized(self, with_loglog: bool = False) -> tuple[float, float]:
        """Gaps over mu_f(I)/(log X)^2, or over mu_f(I) loglog X/(log X)^2."""
        scale = self.mu_I / math.log(self.X) ** 2
        if with_loglog:
            scale *= math.log(math.log(self.X))
        return self.gap_ab / scale, self.gap_spade / scale


def _pair_values(spec: SequenceSpec) -> tuple[np.ndarray, np.ndarray]:
    """All values 0 < f(m, l) <= X over the weighted rows, with their weights."""
    F = spec.form
    ells, w = spec.weights()
    vals, wts = [], []
    for l, wt in zip(ells.tolist(), w.tolist()):
        a1, b1, a2, b2 = _row_bounds(F.f2, F.f1, F.f0, l, spec.X)
        for lo, hi in ((a1, b1), (a2, b2)):
            if hi < lo:
                continue
            m = np.arange(lo, hi + 1, dtype=np.int64)
            v = F.f2 * m * m + F.f1 * m * l + F.f0 * l * l
            v = v[(v > 0) & (v <= spec.X)]
            vals.append(v)
            wts.append(np.full(len(v), wt))
    if not vals:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    return np.concatenate(vals), np.concatenate(wts)


def pi_sequence(spec: SequenceSpec) -> float:
    """pi(C) from the row values and a prime sieve up to X."""
    if spec.X > MAX_PI_X:
        raise ValueError(f"X={spec.X} exceeds {MAX_PI_X}")
    require_admissible(spec.form)
    vals, wts = _pair_values(spec)
    flags = np.zeros(spec.X + 1, dtype=bool)
    flags[primes_upto(spec.X)] = True
    return math.fsum(wts[flags[vals]].tolist())


def pi_sequence_direct(spec: SequenceSpec) -> float:
    """pi(C) by walking the pairs (m, l) and testing each value."""
    if spec.X > MAX_PI_X:
        raise ValueError(f"X={spec.X} exceeds {MAX_PI_X}")
    F = spec.form
    ells, w = spec.weights()
    terms = []
    for l, wt in zip(ells.tolist(), w.tolist()):
        a1, b1, a2, b2 = _row_bounds(F.f2, F.f1, F.f0, l, spec.X)
        for lo, hi in ((a1, b1), (a2, b2)):
            for m in range(int(lo), int(hi) + 1):
                v = F(m, l)
                if 0 < v <= spec.X and is_prime_u64(v):
                    terms.append(wt)
    return math.fsum(terms)


def pi_compare(F: QuadForm, X: int, interval_index: int | None = None) -> PiComparison:
    require_admissible(F)
    if X > MAX_PI_X:
        raise ValueError(f"X={X} exceeds {MAX_PI_X}")
    specs = {k.value: SequenceSpec.at(k, F, X, interval_index) for k in SeqKind}
    pis = {k: pi_sequence(s) for k, s in specs.items()}
    I = specs["a"].interval
    return PiComparison(pis, mu_f_interval(F, I, X), I, int(X))
