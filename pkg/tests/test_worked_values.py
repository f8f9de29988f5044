"""Small hand-checkable values for each module."""

import math

import numpy as np
import pytest

from oracles import kronecker, mangoldt
from qprime.charsum import (
    HeckeCharSpec,
    HeckeTable,
    gaussian_context,
    hecke_lambda,
    jacobi_ext,
    spin_symbol,
    symbol_context,
    xi,
    xi_pair_sum,
    xi_pair_sum_direct,
)
from qprime.classfield import (
    QElt,
    class_group,
    delta_congruence,
    fundamental_unit,
    ideal_number,
    multiply,
    norm_of,
    normalize_L0,
    representations,
    verify_key_decomp,
)
from qprime.density import NuVariant, mu_f_interval, nu_f, sigma_f_prime
from qprime.experiments.counting import Theorem, empirical_sum
from qprime.experiments.functionals import SeqKind, SequenceSpec, SieveParams, sieve_functionals
from qprime.experiments.report import ExperimentReport, ReportRow, emit_report, read_report
from qprime.experiments.type1 import type1_scan
from qprime.modroots import large_sieve_ratio, roots_mod, sqrt_mod_prime
from qprime.qform import QuadForm
from qprime.sieve import Arith, arith, is_prime_u64, prime_table, primes_upto, vaughan_check

F_GAUSS = QuadForm(1, 0, 1)


# ---------------------------------------------------------------- modroots


@pytest.mark.parametrize("a,p,want", [(4, 7, 2), (2, 7, 3), (3, 7, None)])
def test_sqrt_mod_seven(a, p, want):
    assert sqrt_mod_prime(a, p) == want


@pytest.mark.parametrize(
    "d,want", [(25, (7, 18)), (2, (1,)), (3, ()), (65, (8, 18, 47, 57)), (1, (0,)), (12, ())]
)
def test_gaussian_roots(d, want):
    assert roots_mod(F_GAUSS, d).roots == want


def test_large_sieve_single_coefficient():
    # one coefficient: every root contributes 1
    F = QuadForm(1, 1, 2)
    D = 10
    rev = QuadForm(2, 1, 1)
    expected = sum(len(roots_mod(rev, d)) for d in range(D, 2 * D + 1)) / (D + 1)
    assert large_sieve_ratio(F, D, 1, np.ones(1)) == pytest.approx(expected, rel=1e-12)


def test_large_sieve_random_signs_moderate():
    signs = np.random.default_rng(0).choice([-1.0, 1.0], size=512)
    assert large_sieve_ratio(F_GAUSS, 512, 512, signs) <= 20


# ---------------------------------------------------------------- sieve


def test_small_primes_and_lambda():
    assert primes_upto(29).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    t = prime_table(0, 100)
    assert t.Lambda(8) == pytest.approx(math.log(2))
    assert t.Lambda(12) == 0


def test_pi_one_million_and_trial_division():
    t = prime_table(0, 10**6 + 1)
    assert len(t.primes()) == 78498
    rng = np.random.default_rng(1)
    for n in rng.integers(1, 10**6, size=1000).tolist():
        by_trial = n > 1 and all(n % k for k in range(2, math.isqrt(n) + 1))
        assert t.is_prime(n) == by_trial


@pytest.mark.parametrize("n,want", [(2**61 - 1, True), (1, False), (10**12 + 39, True), (10**12 + 41, False)])
def test_primality_examples(n, want):
    assert is_prime_u64(n) is want


@pytest.mark.parametrize("n,Y,Z,want", [(7, 2, 2, math.log(7)), (4, 2, 2, math.log(2)), (2, 2, 3, 0.0)])
def test_vaughan_examples(n, Y, Z, want):
    assert vaughan_check(n, Y, Z) == pytest.approx(want, abs=1e-12)


def test_vaughan_matches_mangoldt_when_parameters_small():
    for n in (7, 4, 9, 30):
        assert vaughan_check(n, 2, 2) == pytest.approx(mangoldt(n), abs=1e-12)


def test_arith_examples():
    assert arith(30, Arith.MU) == -1
    assert arith(12, Arith.TAU) == 6
    assert arith(10, Arith.PHI) == 4


# ---------------------------------------------------------------- density


def test_density_at_two_for_eisenstein_form():
    assert nu_f(QuadForm(1, 1, 1), 2, NuVariant.AS_PRINTED).value == pytest.approx(2.0)


def test_density_rejects_reducible():
    with pytest.raises(ValueError):
        nu_f(QuadForm(1, 3, 2), 100)


def test_sigma_prime_closed_forms():
    assert sigma_f_prime(F_GAUSS).value == pytest.approx(math.pi, rel=1e-9)
    assert sigma_f_prime(QuadForm(1, 1, 1)).value == pytest.approx(2 * math.pi / math.sqrt(3), rel=1e-9)


def test_indefinite_sigma_prime_stable_across_probes():
    F = QuadForm(1, 0, -2)
    a, b = sigma_f_prime(F, 1e5).value, sigma_f_prime(F, 1e7).value
    assert a == pytest.approx(b, rel=0.02)


def test_mu_full_interval_and_empty():
    X = 1000.0
    assert mu_f_interval(F_GAUSS, (0.0, math.sqrt(X)), X) == pytest.approx(math.pi * X / 2, rel=1e-8)
    assert mu_f_interval(F_GAUSS, (3.0, 3.0), X) == 0.0


def test_mu_against_grid_count():
    X, lo, hi = 100.0, 5.0, 6.0
    h = 1e-3
    ys = np.arange(lo + h / 2, hi, h)
    xs = np.arange(-10 + h / 2, 10, h)
    xx, yy = np.meshgrid(xs, ys)
    area = np.count_nonzero(xx**2 + yy**2 < X) * h * h
    assert mu_f_interval(F_GAUSS, (lo, hi), X) == pytest.approx(area, rel=0.05)


# ---------------------------------------------------------------- classfield


def test_small_class_groups():
    assert class_group(-4).field.class_number == 1
    assert sorted(c.form for c in class_group(-20).classes) == [(1, 0, 5), (2, 2, 3)]
    assert class_group(-23).field.class_number == 3


@pytest.mark.parametrize(
    "D,p,q",
    # elements are written p + q sqrt(D)
    [(8, 1, 0.5), (5, 0.5, 0.5), (13, 1.5, 0.5)],
)
def test_fundamental_units(D, p, q):
    eps = fundamental_unit(D)
    assert (eps.p, eps.q) == (pytest.approx(p), pytest.approx(q))
    assert abs(eps.norm()) == 1


def test_gaussian_product():
    G = class_group(-4)
    prod = multiply(ideal_number(G, 0, (2, 1)), ideal_number(G, 0, (3, 2)), G)
    assert (prod.x1, prod.x2) == (4, 7)
    w1, w2 = G.classes[0].basis
    assert w1 == QElt.of(-4, 1) and w2 * w2 == QElt.of(-4, -1)


def test_nonprincipal_product_lands_in_principal_class():
    G = class_group(-20)
    nonprincipal = 1 - G.index_of((1, 0, 5))
    a = ideal_number(G, nonprincipal, (0, 1))
    b = ideal_number(G, nonprincipal, (1, 1))
    assert norm_of(G, a) * norm_of(G, b) == 21
    prod = multiply(a, b, G)
    assert prod.class_index == G.index_of((1, 0, 5))
    assert norm_of(G, prod) == 21


def test_gaussian_orbit_normalizes_to_first_quadrant():
    G = class_group(-4)
    for c in [(4, 7), (-7, 4), (-4, -7), (7, -4)]:
        g = normalize_L0(ideal_number(G, 0, c), G)
        assert (g.x1, g.x2) == (4, 7)


def test_normalization_idempotent():
    G = class_group(-20)
    rng = np.random.default_rng(3)
    for _ in range(1000):
        i = int(rng.integers(0, 2))
        c = tuple(int(v) for v in rng.integers(-30, 31, size=2))
        if c == (0, 0):
            continue
        g = normalize_L0(ideal_number(G, i, c), G)
        assert normalize_L0(g, G) == g


def test_representations_of_65_and_3():
    reps = representations(F_GAUSS, 65)
    assert len(reps) == 16 and all(x * x + y * y == 65 for x, y in reps)
    assert representations(F_GAUSS, 3) == []
    assert len(representations(F_GAUSS, 65, (0.0, math.inf))) == 8


@pytest.mark.parametrize("F,m,n", [(F_GAUSS, 5, 13), (F_GAUSS, 1, 65), (QuadForm(1, 0, 5), 3, 7)])
def test_factorization_identity_examples(F, m, n):
    left, right, ok = verify_key_decomp(F, m, n, (0.0, math.inf))
    assert ok and left == right


def test_factorization_identity_five_thirteen_count():
    left, _, _ = verify_key_decomp(F_GAUSS, 5, 13, (0.0, math.inf))
    assert left == 8


def test_delta_congruence_examples():
    assert delta_congruence((0, 1), (1, 0), 3, 4) == (1, True, (3, 4))
    delta, ok, w = delta_congruence((0, 2), (2, 0), 3, 4)
    assert delta == 4 and not ok and w is None


# ---------------------------------------------------------------- charsum


def test_jacobi_examples():
    assert jacobi_ext(2, 7) == 1
    assert jacobi_ext(-3, -5) == 1
    assert jacobi_ext(0, 1) == 1
    for a in range(-20, 21):
        assert jacobi_ext(a, 7) == kronecker(a, 7)


@pytest.mark.parametrize("z,want", [((1, 0), 1), ((3, 2), -1j), ((5, 4), -1)])
def test_spin_examples(z, want):
    assert spin_symbol(z) == want


def test_gaussian_xi_examples():
    ctx = gaussian_context()
    assert xi(ctx, (1, 0), (3, 5)) == 1
    assert xi(ctx, (1, 2), (1, 1)) == -1
    assert xi(ctx, (1, 2), (2, -1)) == 0


def test_pair_sum_square_product():
    ctx = symbol_context(-35)
    w, v = (0, 1), (1, -1)
    assert ctx.g(w) == ctx.g(v) == 9
    direct, closed = xi_pair_sum(ctx, w, v)
    assert direct == closed == 2916


def test_pair_sum_with_unit_value():
    ctx = symbol_context(-35)
    w, v = (1, 0), (0, 1)
    assert ctx.g(w) == 1 and ctx.g(v) == 9
    # only z with 3 | v.z drop out: 81 * 2/3
    assert xi_pair_sum_direct(ctx, w, v) == 54


def test_hecke_lambda_at_five():
    ctx = gaussian_context()
    val = hecke_lambda(ctx, HeckeCharSpec.principal(), 5)
    allowed = [0, 1, -1, 1j, -1j, 2, -2, 2j, -2j]
    assert any(abs(val - a) < 1e-9 for a in allowed)


def test_hecke_tau_bound():
    ctx = gaussian_context()
    table = HeckeTable(ctx, HeckeCharSpec.principal(), 10**4)
    for n in range(1, 10**4 + 1):
        assert abs(table[n]) <= arith(n, Arith.TAU) + 1e-9


# ---------------------------------------------------------------- experiments


def test_mt0_small_brute():
    # f(m, l^2) prime, every integer l
    X = 100
    want = 0
    for l in range(-4, 5):
        for m in range(-10, 11):
            n = m * m + l**4
            want += n <= X and is_prime_u64(n)
    assert empirical_sum(F_GAUSS, X, Theorem.MT0) == want


def test_mt0_below_smallest_prime_is_zero():
    assert empirical_sum(F_GAUSS, 1, Theorem.MT0) == 0


def test_type1_first_divisor_is_total():
    scan = type1_scan(F_GAUSS, 10**4, 50)
    total = scan.A[0]
    assert scan.d[0] == 1
    assert total == scan.A_check[0]
    assert total > 0


def test_type1_five_exact():
    X = 10**6
    scan = type1_scan(F_GAUSS, X, 5)
    lmax = math.isqrt(X)
    count = 0
    for l in range(1, lmax + 1):
        m = np.arange(-lmax - 1, lmax + 2, dtype=np.int64)
        v = m * m + l * l
        ok = (v <= X) & (np.gcd(m, l) == 1) & (v % 5 == 0)
        count += int(np.count_nonzero(ok))
    assert scan.A[list(scan.d).index(5)] == count


def test_type1_no_roots_means_no_main_term():
    scan = type1_scan(F_GAUSS, 10**4, 20)
    i = list(scan.d).index(3)
    assert scan.M[i] == 0.0 and scan.A[i] == 0


def test_sieve_identity_holds():
    spec = SequenceSpec.at(SeqKind.B, F_GAUSS, 10**5)
    assert sieve_functionals(spec, SieveParams(varpi=0.1)).buchstab_ok


def test_empty_report_and_round_trip(tmp_path):
    p = tmp_path / "empty.csv"
    emit_report(ExperimentReport(), p)
    assert [ln for ln in p.read_text().splitlines() if not ln.startswith("#")] == [
        "X,empirical_sum,predicted_main,ratio,secondary_constant_variant,wall_time"
    ]
    rep = ExperimentReport([ReportRow(1e6, 12.0, 11.5, 12 / 11.5, "as_printed", 0.25)], {"form": "1,0,1"})
    q = tmp_path / "one.csv"
    emit_report(rep, q)
    back = read_report(q)
    assert back.rows == rep.rows and back.metadata["form"] == "1,0,1"
    r = tmp_path / "again.csv"
    emit_report(back, r)
    assert r.read_bytes() == q.read_bytes()
