import pytest
from hypothesis import given
from hypothesis import strategies as st

from qprime.qform import FormKind, QuadForm, classify, evaluate, require_admissible, rho, transform

coeff = st.integers(min_value=-50, max_value=50)
forms = st.tuples(coeff, coeff, coeff).filter(lambda c: c != (0, 0, 0)).map(lambda c: QuadForm(*c))
nonsingular = st.tuples(coeff, coeff, coeff, coeff).filter(lambda m: m[0] * m[3] != m[1] * m[2])


def test_parse_and_str_round_trip():
    F = QuadForm.parse(" 1, -3 ,7")
    assert F.coeffs == (1, -3, 7)
    assert QuadForm.parse(str(F)) == F
    with pytest.raises(ValueError):
        QuadForm.parse("1,2")
    with pytest.raises(ValueError):
        QuadForm(0, 0, 0)
    with pytest.raises(OverflowError):
        QuadForm(2**63, 0, 1)


def test_classification_table():
    assert classify(QuadForm(1, 0, 1)).kind is FormKind.POSITIVE_DEFINITE
    assert classify(QuadForm(-1, 0, -1)).kind is FormKind.NEGATIVE_DEFINITE
    assert classify(QuadForm(1, 0, -2)).kind is FormKind.INDEFINITE
    assert classify(QuadForm(1, 0, -4)).kind is FormKind.DEGENERATE_SQUARE_DISC
    assert not classify(QuadForm(2, 0, 2)).primitive
    # f(x, 1) = x^2 + x is always even
    assert not classify(QuadForm(1, 1, 0)).admissible
    assert not classify(QuadForm(1, 1, 2)).admissible
    assert classify(QuadForm(1, 1, 1)).admissible
    with pytest.raises(ValueError):
        require_admissible(QuadForm(1, 1, 2))


@given(forms, st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_evaluate(F, x, y):
    assert evaluate(F, x, y) == F.f2 * x * x + F.f1 * x * y + F.f0 * y * y == F(x, y)


@given(forms, nonsingular, st.integers(-30, 30), st.integers(-30, 30))
def test_transform_column_and_row(F, m, x, y):
    a, b, c, d = m
    M = ((a, b), (c, d))
    G = transform(F, M)
    assert G(x, y) == F(a * x + b * y, c * x + d * y)
    H = transform(F, M, action="row")
    assert H(x, y) == F(a * x + c * y, b * x + d * y)
    assert G.disc == H.disc == (a * d - b * c) ** 2 * F.disc


def test_transform_rejects_singular():
    with pytest.raises(ValueError):
        transform(QuadForm(1, 0, 1), ((1, 2), (2, 4)))
    with pytest.raises(ValueError):
        transform(QuadForm(1, 0, 1), ((1, 0), (0, 1)), action="diag")


@given(forms, st.integers(1, 200))
def test_rho_counts_roots(F, d):
    if not classify(F).admissible:
        with pytest.raises(ValueError):
            rho(F, d)
        return
    brute = sum(1 for x in range(d) if (F.f2 * x * x + F.f1 * x + F.f0) % d == 0)
    assert rho(F, d) == brute


def test_worked_values():
    assert QuadForm(1, 0, 1)(3, 4) == 25
    assert QuadForm(1, 1, 1)(2, 3) == 19
    assert QuadForm(5, -7, 2)(0, 0) == 0
    assert transform(QuadForm(1, 0, 1), ((1, 0), (0, 1))) == QuadForm(1, 0, 1)
    assert transform(QuadForm(1, 0, 1), ((1, 1), (0, 1))) == QuadForm(1, 2, 2)
    assert transform(QuadForm(1, 0, 1), ((1, 1), (0, 1)), action="row") == QuadForm(2, 2, 1)
    assert transform(QuadForm(2, 1, 3), ((0, 1), (-1, 0))).disc == -23
    assert rho(QuadForm(1, 0, 1), 5) == 2
    assert rho(QuadForm(1, 0, 1), 1) == 1
    assert rho(QuadForm(1, 0, 1), 3) == 0
    with pytest.raises(ValueError):
        rho(QuadForm(1, 0, 1), 0)


PRIMES_100 = [p for p in range(2, 101) if all(p % q for q in range(2, p))]


@given(forms)
def test_admissible_forms_have_no_fixed_prime_divisor(F):
    if not classify(F).admissible:
        return
    for p in PRIMES_100:
        assert any(F(x, y) % p for x in range(p) for y in range(p)), p
