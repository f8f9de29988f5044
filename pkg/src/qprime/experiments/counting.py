"""Prime counts of f(m, l^2) and f(m, l) by row sieving, against the
predicted main terms."""

from __future__ import annotations

import enum
import math
import os
import time

import numba
import numpy as np

from ..density import NuVariant, c_f, nu_f, sigma_f, sigma_f_prime
from ..qform import FormKind, QuadForm, classify, require_admissible
from ..sieve import primes_upto
from ._kernels import count_rows, prime_roots
from .report import ExperimentReport, ReportRow

MAX_X = {"MT0": 10**10, "MT": 10**10, "MT2": 10**9}
NU_PRIME_BOUND = 10**6


class Theorem(enum.Enum):
    MT0 = "MT0"
    MT = "MT"
    MT2 = "MT2"


class Region(enum.Enum):
    # m, l over Z for definite forms; 0 < l for indefinite ones
    FULL = "full"
    # m > 0 and l > 0 (the first-quadrant count)
    POSITIVE = "positive"


def set_threads(threads: int | None = None) -> int:
    """Apply an explicit thread count, else QPRIME_THREADS, else numba's default."""
    if threads is None:
        env = os.environ.get("QPRIME_THREADS")
        threads = int(env) if env else None
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    return numba.get_num_threads()


def _rows(F: QuadForm, X: int, theorem: Theorem, region: Region):
    """Second arguments L, multiplicities, and the per-row weight kind."""
    definite = classify(F).kind is FormKind.POSITIVE_DEFINITE
    if theorem is Theorem.MT2:
        top = math.isqrt(X) if not definite else math.floor(c_f(F) * math.sqrt(X)) + 1
    else:
        top = math.isqrt(math.isqrt(X)) if not definite else math.isqrt(math.floor(c_f(F) * math.sqrt(X)) + 1)
    if theorem is Theorem.MT0:
        ells = np.arange(0 if definite and region is Region.FULL else 1, top + 1, dtype=np.int64)
        weights = np.ones(len(ells))
    elif theorem is Theorem.MT:
        ells = primes_upto(top)
        weights = np.ones(len(ells))
    else:
        ps = primes_upto(top)
        ells_l, w_l = [], []
        for p in ps.tolist():
            q = p
            while q <= top:
                ells_l.append(q)
                w_l.append(math.log(p))
                q *= p
        order = np.argsort(ells_l, kind="stable")
        ells = np.asarray(ells_l, dtype=np.int64)[order]
        weights = np.asarray(w_l)[order]
    if definite and region is Region.FULL:
        # l and -l give the same multiset of values
        weights = weights * np.where(ells == 0, 1.0, 2.0)
    Ls = ells * ells if theorem is not Theorem.MT2 else ells
    return Ls, weights


def empirical_sum(F: QuadForm, X: int, theorem: Theorem | str, region: Region | str = Region.FULL) -> float:
    """The left side of the chosen counting theorem at scale X."""
    theorem, region = Theorem(theorem), Region(region)
    require_admissible(F)
    kind = classify(F).kind
    if kind is FormKind.NEGATIVE_DEFINITE:
        raise ValueError("negative definite form takes no positive values")
    X = int(X)
    if X > MAX_X[theorem.value]:
        raise ValueError(f"X={X} exceeds the {theorem.value} budget {MAX_X[theorem.value]}")
    if X < 2:
        return 0.0
    Ls, weights = _rows(F, X, theorem, region)
    if len(Ls) == 0:
        return 0.0
    if max(abs(F.f2), abs(F.f1), abs(F.f0)) * (int(Ls.max()) + 4 * math.isqrt(X) + 8) ** 2 >= 2**62:
        raise OverflowError("row values exceed 64 bits")
    primes = primes_upto(math.isqrt(X) + 1)
    roots, count = prime_roots(F.f2, F.f1, F.f0, primes)
    want_lambda = theorem is Theorem.MT2
    cnt, lam = count_rows(
        F.f2, F.f1, F.f0, Ls, weights, X, primes, roots, count, want_lambda, region is Region.POSITIVE
    )
    per_row = lam if want_lambda else cnt
    return math.fsum((weights * per_row).tolist())


def predicted_main(F: QuadForm, X: float, theorem: Theorem | str, variant: NuVariant | str) -> float:
    theorem = Theorem(theorem)
    nu = nu_f(F, NU_PRIME_BOUND, variant).value
    if theorem is Theorem.MT2:
        return nu * sigma_f_prime(F).value * X
    power = 1 if theorem is Theorem.MT0 else 2
    return nu * sigma_f(F).value * X**0.75 / math.log(X) ** power


def count_theorem(
    F: QuadForm,
    X: int,
    which: Theorem | str,
    region: Region | str = Region.FULL,
    variants: tuple[NuVariant | str, ...] = (NuVariant.AS_PRINTED, NuVariant.RHO_AT_RAMIFIED),
    threads: int | None = None,
) -> ExperimentReport:
    """One row per density variant, sharing the same empirical sum."""
    which, region = Theorem(which), Region(region)
    set_threads(threads)
    t0 = time.perf_counter()
    emp = empirical_sum(F, X, which, region)
    wall = time.perf_counter() - t0
    rows = []
    for v in variants:
        v = NuVariant(v)
        pred = predicted_main(F, X, which, v)
        rows.append(ReportRow(float(X), emp, pred, emp / pred, v.value, wall))
    meta = {"form": str(F), "theorem": which.value, "region": region.value, "seed": "none"}
    return ExperimentReport(rows, meta)
