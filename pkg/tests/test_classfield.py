import math
from fractions import Fraction
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qprime.classfield import (
    KeyDecomposition,
    QElt,
    check_composition,
    class_group,
    class_number_by_enumeration,
    delta_congruence,
    fundamental_unit,
    ideal_number,
    is_fundamental,
    multiply,
    norm_of,
    normalize_L0,
    reduced_forms,
    representations,
    totally_positive_unit,
    verify_key_decomp,
)
from qprime.qform import QuadForm

FIELDS = [-4, -3, -20, -23, -84, 5, 8, 12, 229]


def test_is_fundamental_against_oracle():
    for D in range(-600, 601):
        assert is_fundamental(D) == oracles.is_fundamental(D), D


def test_class_numbers_small_discriminants():
    for D in range(-200, 201):
        if not oracles.is_fundamental(D):
            continue
        h = oracles.class_number_negative(D) if D < 0 else oracles.narrow_class_number_positive(D)
        G = class_group(D)
        assert G.field.class_number == len(G.classes) == class_number_by_enumeration(D) == h, D


def test_reduced_forms_negative():
    for D in range(-400, 0):
        if oracles.is_fundamental(D):
            assert len(reduced_forms(D)) == oracles.reduced_form_count(D)


@pytest.mark.parametrize("D", [-4, -20, -23, -84, -260, 5, 229, 316 * 4 + 1])
def test_group_axioms(D):
    if not oracles.is_fundamental(D):
        pytest.skip("not fundamental")
    G = class_group(D)
    h = len(G.classes)
    M = G.mult
    e = G.identity
    for a in range(h):
        assert M[e][a] == M[a][e] == a
        assert M[a][G.inverse(a)] == e
        for b in range(h):
            assert M[a][b] == M[b][a]
            for c in range(h):
                assert M[M[a][b]][c] == M[a][M[b][c]]


@pytest.mark.parametrize("D", FIELDS)
def test_composition_table_identities(D):
    G = class_group(D)
    for a, b, checked, failures in check_composition(G, radius=2):
        assert checked > 0 and failures == 0, (a, b)


@pytest.mark.parametrize("D", [5, 8, 12, 229, 13, 21])
def test_units(D):
    eps = fundamental_unit(D)
    assert abs(eps.norm()) == 1 and eps.real() > 1
    t, u = oracles.totally_positive_unit(D)
    plus = totally_positive_unit(D)
    assert plus == QElt.of(D, Fraction(t, 2), Fraction(u, 2))


@pytest.mark.parametrize("D", FIELDS)
def test_ideal_numbers_multiply_and_normalize(D):
    G = class_group(D)
    rng = random.Random(D)
    h = len(G.classes)
    for _ in range(200):
        x = (rng.randint(-15, 15), rng.randint(-15, 15))
        y = (rng.randint(-15, 15), rng.randint(-15, 15))
        if x == (0, 0) or y == (0, 0):
            continue
        A = ideal_number(G, rng.randrange(h), x)
        B = ideal_number(G, rng.randrange(h), y)
        C = multiply(A, B, G)
        assert C.class_index == G.mult[A.class_index][B.class_index]
        assert norm_of(G, C) == norm_of(G, A) * norm_of(G, B)
        if norm_of(G, A) > 0:
            N = normalize_L0(A, G)
            assert normalize_L0(N, G) == N
            assert norm_of(G, N) == norm_of(G, A)


@given(st.integers(1, 3000))
def test_representations_brute(n):
    F = QuadForm(2, 1, 3)
    got = sorted(representations(F, n))
    r = math.isqrt(4 * n) + 2
    want = sorted((x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if F(x, y) == n)
    assert got == want


@given(
    st.tuples(st.integers(-200, 200), st.integers(-200, 200)),
    st.tuples(st.integers(-200, 200), st.integers(-200, 200)),
    st.tuples(st.integers(-200, 200), st.integers(-200, 200)),
)
def test_delta_congruence_round_trip(z, y, w):
    if y[0] * z[1] == y[1] * z[0]:
        with pytest.raises(ValueError):
            delta_congruence(z, y, 1, 1)
        return
    q1 = w[0] * y[0] + w[1] * y[1]
    q2 = w[0] * z[0] + w[1] * z[1]
    delta, holds, sol = delta_congruence(z, y, q1, q2)
    assert holds and sol == w
    assert delta == y[0] * z[1] - y[1] * z[0]
    # the shift by (1, 0) keeps integrality iff (1, 0) lies in the image
    # lattice, i.e. the solution (z2, -z1) / delta is integral
    _, holds2, _ = delta_congruence(z, y, q1 + 1, q2)
    assert holds2 == (z[0] % delta == 0 and z[1] % delta == 0)
    if abs(delta) == 1:
        assert holds2


@pytest.mark.parametrize(
    "form,I",
    [("1,0,1", (0.0, math.inf)), ("2,2,3", (0.0, math.inf)), ("3,2,2", (-5.0, 40.0)), ("1,1,-1", (0.0, 30.0))],
)
def test_key_decomposition_small(form, I):
    F = QuadForm.parse(form)
    kd = KeyDecomposition(F, I, 300)
    for m in range(1, 61):
        for n in range(1, 300 // m + 1):
            lhs, rhs, ok = verify_key_decomp(F, m, n, I, checker=kd)
            assert ok, (m, n, lhs, rhs)
    # a non-trivial weight compares term by term
    w = lambda q: math.log(abs(q) + 2)
    assert verify_key_decomp(F, 6, 10, I, w, kd)[2]


def test_key_decomposition_rejections():
    with pytest.raises(ValueError):
        KeyDecomposition(QuadForm(2, 0, 2), (0, 10), 10)
    with pytest.raises(ValueError):
        KeyDecomposition(QuadForm(1, 0, -2), (0, math.inf), 10)
    with pytest.raises(ValueError):
        KeyDecomposition(QuadForm(1, 0, 4), (0, math.inf), 10)
