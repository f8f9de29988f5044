"""Type I scans: counts of f(m, l) divisible by d against their expected
main terms, over cube-free d up to a level D."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..density import _radical_len, c_f
from ..modroots import roots_mod
from ..qform import QuadForm, require_admissible
from ..sieve import Arith, arith, primes_upto
from ._kernels import coprime_value_histogram, type1_residue_counts


@dataclass(frozen=True)
class Type1Scan:
    d: np.ndarray
    A: np.ndarray
    M: np.ndarray
    # A_d from the second route, when it was run
    A_check: np.ndarray | None
    X: int
    D: int
    r: int

    @property
    def remainder(self) -> np.ndarray:
        return np.abs(self.A - self.M)

    @property
    def remainder_total(self) -> float:
        return math.fsum(self.remainder.tolist())

    @property
    def main_total(self) -> float:
        return math.fsum(self.M.tolist())

    @property
    def relative_remainder(self) -> float:
        return self.remainder_total / self.main_total

    @property
    def shape(self) -> float:
        """D^(1/4) X^(3(r+1)/(8r)), the log power dropped."""
        return self.D**0.25 * self.X ** (3 * (self.r + 1) / (8 * self.r))

    @property
    def routes_agree(self) -> bool:
        return self.A_check is not None and bool(np.array_equal(self.A, self.A_check))

    def truncate(self, D: int) -> Type1Scan:
        """The same scan restricted to d <= D."""
        keep = self.d <= D
        check = self.A_check[keep] if self.A_check is not None else None
        return Type1Scan(self.d[keep], self.A[keep], self.M[keep], check, self.X, D, self.r)

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [(int(d), float(a), float(m), float(abs(a - m))) for d, a, m in zip(self.d, self.A, self.M)]


def cube_free_upto(D: int) -> np.ndarray:
    ok = np.ones(D + 1, dtype=bool)
    ok[0] = False
    for p in primes_upto(round(D ** (1 / 3)) + 1).tolist():
        ok[p**3 :: p**3] = False
    return np.flatnonzero(ok).astype(np.int64)


def rth_powers_in(I: tuple[float, float], r: int) -> np.ndarray:
    lo, hi = I
    k = np.arange(1, math.floor(hi ** (1 / r)) + 3, dtype=np.int64)
    ells = k**r
    return ells[(ells > lo) & (ells <= hi)]


def type1_scan(
    F: QuadForm,
    X: int,
    D: int,
    r: int = 1,
    I: tuple[float, float] | None = None,
    route: str = "both",
) -> Type1Scan:
    """A_d(X) and M_d(X) for cube-free d <= D.

    The sequence is a_n = #{(m, l) : f(m, l) = n, l in I, gcd(m, l) = 1,
    l an r-th power}. A_d comes from walking residue classes of m modulo d
    (route "residue"), from summing a_n over multiples of d ("divisibility"),
    or from both. I defaults to (0, c_f sqrt(X)].
    """
    require_admissible(F)
    X, D = int(X), int(D)
    if r < 1:
        raise ValueError("r must be positive")
    if D < 1 or D > X**0.75:
        raise ValueError(f"level D={D} outside [1, X^(3/4)]")
    if route not in ("both", "residue", "divisibility"):
        raise ValueError(f"unknown route {route!r}")
    if I is None:
        I = (0.0, c_f(F) * math.sqrt(X))
    ells = rth_powers_in(I, r)
    weights = np.ones(len(ells))
    ds = cube_free_upto(D)
    root_lists = [roots_mod(F, int(d)).roots for d in ds.tolist()]
    rho = np.array([len(rs) for rs in root_lists], dtype=np.float64)
    # M_d = rho(d)/d * sum over l coprime to d of phi(l)/l * iota(l; X)
    base = np.array(
        [arith(int(l), Arith.PHI) / l * _radical_len(F, float(l), float(X)) for l in ells.tolist()]
    )
    M = np.array(
        [rho[i] / d * float(np.sum(base[np.gcd(ells, d) == 1])) if rho[i] else 0.0 for i, d in enumerate(ds.tolist())]
    )
    A = A_check = None
    if route in ("both", "residue"):
        offsets = np.zeros(len(ds) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(rs) for rs in root_lists])
        flat = np.array([x for rs in root_lists for x in rs], dtype=np.int64)
        A = type1_residue_counts(F.f2, F.f1, F.f0, ells, weights, X, ds, flat, offsets)
    if route in ("both", "divisibility"):
        h = coprime_value_histogram(F.f2, F.f1, F.f0, ells, weights, X)
        B = np.array([h[d::d].sum() for d in ds.tolist()])
        if A is None:
            A = B
        else:
            A_check = B
    assert A is not None
    return Type1Scan(ds, A, M, A_check, X, D, r)
