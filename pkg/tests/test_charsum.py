import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qprime.charsum import (
    HeckeCharSpec,
    HeckeTable,
    OscMode,
    dirichlet_character,
    gaussian_context,
    hecke_lambda,
    jacobi,
    jacobi_ext,
    multi_identity_probe,
    non_proportional,
    oscillation_suite,
    spin_symbol,
    symbol_context,
    tau_bound_holds,
    xi,
    xi_pair_sum,
)

odd_pos = st.integers(1, 10**6).filter(lambda n: n % 2)


@given(st.integers(-(10**6), 10**6), odd_pos)
def test_jacobi_matches_kronecker(a, n):
    assert jacobi(a, n) == oracles.kronecker(a, n)


def test_jacobi_rejects_even():
    with pytest.raises(ValueError):
        jacobi(3, 10)
    with pytest.raises(ValueError):
        jacobi_ext(3, -4)


@given(st.integers(-1000, 1000), st.integers(-999, 999).filter(lambda b: b % 2))
def test_jacobi_ext_sign_rule(a, b):
    s = oracles.kronecker(a, abs(b))
    assert jacobi_ext(a, b) == (-s if a < 0 and b < 0 else s)


@given(st.integers(-999, 999).filter(lambda x: x % 2), st.integers(-999, 999))
def test_spin_symbol(z1, z2):
    unit = 1j ** (((z1 - 1) // 2) % 4)
    assert spin_symbol((z1, z2)) == pytest.approx(unit * oracles.kronecker(z2, abs(z1)))


def test_dirichlet_character_tables():
    assert dirichlet_character(12).tolist() == [int(math.gcd(r, 12) == 1) for r in range(12)]
    chi = dirichlet_character(20, -4)
    for r in range(20):
        want = oracles.kronecker(-4, r) if math.gcd(r, 20) == 1 else 0
        assert chi[r] == want


CONTEXTS = [(-4, 0), (-20, 0), (-20, 1), (-23, 0), (5, 0), (8, 0), (-3, 0)]


@pytest.mark.parametrize("disc,cls", CONTEXTS)
def test_symbol_context_product_and_g(disc, cls):
    ctx = symbol_context(disc, cls)
    box = [v for v in itertools.product(range(-4, 5), repeat=2) if v != (0, 0)]
    g1, g2 = ctx.C_basis
    for x in box:
        for y in box:
            r, q = ctx.product(x, y)
            assert (r, q) == (ctx.R(x, y), ctx.Q(x, y))
            assert ctx.A.element(x) * ctx.B.element(y) == ctx.entry.mu * (g1 * r + g2 * q)
            if ctx.dot:
                assert r == x[0] * y[0] + x[1] * y[1]
    for z in box:
        perp = (z[1], -z[0]) if ctx.dot else None
        if perp is not None:
            assert ctx.R(perp, z) == 0
            assert ctx.g(z) == ctx.Q(perp, z)
        assert ctx.g(z) == ctx.g_scale * ctx.B.norm_value(z)


def test_gaussian_context_g_is_sum_of_squares():
    ctx = gaussian_context()
    assert ctx.dot
    for z in itertools.product(range(-6, 7), repeat=2):
        assert abs(ctx.g(z)) == z[0] ** 2 + z[1] ** 2


def test_xi_definition():
    ctx = gaussian_context()
    w, z = (1, 2), (3, -7)
    gw = ctx.g(w)
    assert xi(ctx, w, z) == jacobi_ext(w[0] * z[0] + w[1] * z[1], gw)
    with pytest.raises(ValueError):
        xi(ctx, (1, 1), z)


def brute_pair_sum(ctx, w, v):
    aw, av = abs(ctx.g(w)), abs(ctx.g(v))
    q = aw * av
    total = 0
    for z1 in range(q):
        for z2 in range(q):
            total += oracles.kronecker(w[0] * z1 + w[1] * z2, aw) * oracles.kronecker(v[0] * z1 + v[1] * z2, av)
    return total


@pytest.mark.parametrize("w,v", [((1, 2), (1, 0)), ((1, 2), (1, 4)), ((3, 2), (1, 2)), ((1, 0), (1, 0))])
def test_pair_sum_direct_against_brute(w, v):
    ctx = gaussian_context()
    direct, _ = xi_pair_sum(ctx, w, v)
    assert direct == brute_pair_sum(ctx, w, v)


@pytest.mark.parametrize("disc", [-4, -20, 5, 8])
def test_pair_sum_closed_form(disc):
    ctx = symbol_context(disc)
    vecs = [v for v in itertools.product(range(-5, 6), repeat=2) if math.gcd(*v) == 1 and ctx.g(v) % 2]
    checked = 0
    for w, v in itertools.combinations(vecs, 2):
        if abs(ctx.g(w) * ctx.g(v)) > 1500 or not non_proportional(ctx, w, v):
            continue
        direct, closed = xi_pair_sum(ctx, w, v)
        assert direct == closed, (w, v)
        checked += 1
    assert checked > 20


def test_pair_sum_degenerate_pair_is_not_zero():
    # w = v is proportional modulo g(w), where the closed form does not apply
    ctx = gaussian_context()
    assert not non_proportional(ctx, (1, 2), (1, 2))
    direct, closed = xi_pair_sum(ctx, (1, 2), (1, 2))
    assert (direct, closed) == (500, 0)


@pytest.mark.parametrize("disc", [-4, -20, 5, 8, -3])
def test_probe_finds_constant_sign(disc):
    res = multi_identity_probe(symbol_context(disc), radius=30, samples=30_000)
    assert res.constant, res.witness
    assert res.modulus == 8
    assert res.mean_per_cell > 1


def test_probe_reports_witness_without_sign_cells():
    # only modulus 2 allowed: the sign relation is not determined by parity alone
    res = multi_identity_probe(gaussian_context(), radius=30, samples=20_000, moduli=(2,))
    assert not res.constant
    assert res.witness is not None and res.witness[0] == 2


def test_probe_argument_checks():
    with pytest.raises(ValueError):
        multi_identity_probe(gaussian_context(), identity="other", samples=10)
    with pytest.raises(ValueError):
        multi_identity_probe(gaussian_context(), g_of="both", samples=10)


@pytest.mark.parametrize("disc", [-4, -20, 5, -3])
@pytest.mark.parametrize(
    "spec",
    [HeckeCharSpec.principal(), HeckeCharSpec.principal(1, 4), HeckeCharSpec(3, 0, tuple(dirichlet_character(12, -3)))],
    ids=["principal", "k4", "chi-3"],
)
def test_hecke_tau_bound(disc, spec):
    table = HeckeTable(symbol_context(disc), spec, 3000)
    assert tau_bound_holds(table)
    assert table[97] == pytest.approx(hecke_lambda(symbol_context(disc), spec, 97))
    with pytest.raises(ValueError):
        table[0]


def test_hecke_gaussian_by_enumeration():
    # one normalized representative per orbit of the four units
    ctx = gaussian_context()
    table = HeckeTable(ctx, HeckeCharSpec.principal(), 400)
    for n in range(1, 401):
        orbit_count = sum(
            1
            for a in range(-21, 22)
            for b in range(-21, 22)
            if a * a + b * b == n and math.gcd(a, b) == 1
        )
        assert 4 * len(table.elements.get(n, ())) == orbit_count
        want = sum(spin_symbol(z) if z[0] % 2 else 0 for z in table.elements.get(n, ()))
        assert table[n] == pytest.approx(want)


def test_oscillation_ln_and_twisted_against_loops():
    ctx = symbol_context(-4)
    spec = HeckeCharSpec.principal()
    table = HeckeTable(ctx, spec, 2000)
    rows = oscillation_suite(-4, OscMode.LN, grid=(100, 700), m=2)
    for r in rows:
        s = sum(table.values[2 * n] for n in range(1, int(r.scale) + 1))
        assert complex(r.raw_sum_re, r.raw_sum_im) == pytest.approx(s)
        assert r.ratio == pytest.approx(abs(s) / r.bound_shape)
    rows = oscillation_suite(-4, OscMode.TWISTED, grid=(500,), c=3)
    s = sum(oracles.mangoldt(n) * table.values[3 * n] for n in range(1, 501))
    assert complex(rows[0].raw_sum_re, rows[0].raw_sum_im) == pytest.approx(s)


def test_oscillation_lmn_against_loop():
    ctx = symbol_context(5)
    table = HeckeTable(ctx, HeckeCharSpec.principal(), 900)
    rows = oscillation_suite(5, "lmn", grid=(30,), seed=4)
    a = np.random.default_rng(4).choice(np.array([-1, 1]), size=31)
    b = np.random.default_rng(5).choice(np.array([-1, 1]), size=31)
    s = sum(a[m] * b[n] * table.values[m * n] for m in range(1, 31) for n in range(1, 31))
    assert complex(rows[0].raw_sum_re, rows[0].raw_sum_im) == pytest.approx(s)


@pytest.mark.parametrize("mode", list(OscMode))
def test_oscillation_rows_shape(mode):
    grid = (10, 20) if mode is OscMode.LMN else (200, 400)
    rows = oscillation_suite(-20, mode, grid=grid)
    assert [r.scale for r in rows] == list(map(float, grid))
    assert all(r.bound_shape > 0 and r.ratio >= 0 for r in rows)
