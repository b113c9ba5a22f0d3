"""Ring laws, truncation soundness and serialization of the exact series."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kwq.series import (
    NonInvertibleError, PiPolynomial, QSeries, ZetaSeries, XSeries,
    pi_add, pi_eval, pi_from_string, pi_mul, pi_scale, pi_to_string,
    qs_add, qs_first_mismatch, qs_from_json, qs_inv, qs_mul, qs_pow,
    qs_reduce_lattice, qs_scale, qs_scale_exponent, qs_shift, qs_to_json,
    xs_add, xs_inv, xs_mul, xs_pow,
    zs_add, zs_extract, zs_first_mismatch, zs_mul, zs_sub_zeta_shift,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def qseries(draw, max_terms=6, denoms=(1, 2, 8, 24)):
    d = draw(st.sampled_from(denoms))
    n_terms = draw(st.integers(0, max_terms))
    keys = draw(st.lists(st.integers(0, 40), min_size=n_terms, max_size=n_terms,
                         unique=True))
    coeffs = {k: draw(fractions) for k in keys}
    trunc = draw(st.integers(41, 80))
    return QSeries(d, coeffs, trunc)


def brute_mul_coeff(a: QSeries, b: QSeries, key: int, d: int) -> Fraction:
    total = Fraction(0)
    for n1, c1 in a.coeffs.items():
        for n2, c2 in b.coeffs.items():
            if n1 * (d // a.exp_denom) + n2 * (d // b.exp_denom) == key:
                total += c1 * c2
    return total


@given(qseries(), qseries())
@settings(max_examples=120)
def test_mul_commutes(a, b):
    assert qs_mul(a, b) == qs_mul(b, a)


@given(qseries(), qseries(), qseries())
@settings(max_examples=60)
def test_mul_distributes(a, b, c):
    lhs = qs_mul(a, qs_add(b, c))
    rhs = qs_add(qs_mul(a, b), qs_mul(a, c))
    assert qs_first_mismatch(lhs, rhs) is None


@given(qseries(), qseries(), qseries())
@settings(max_examples=60)
def test_mul_associates_on_common_range(a, b, c):
    lhs = qs_mul(qs_mul(a, b), c)
    rhs = qs_mul(a, qs_mul(b, c))
    assert qs_first_mismatch(lhs, rhs) is None


@given(qseries(), qseries())
@settings(max_examples=120)
def test_mul_matches_brute_force(a, b):
    p = qs_mul(a, b)
    d = p.exp_denom
    for key in range(0, p.trunc):
        assert p.coeffs.get(key, Fraction(0)) == brute_mul_coeff(a, b, key, d)


@given(qseries())
@settings(max_examples=80)
def test_add_negate_cancels(a):
    z = qs_add(a, qs_scale(a, -1))
    assert z.is_zero()
    assert z.trunc == a.trunc


@given(qseries())
@settings(max_examples=80)
def test_json_round_trip(a):
    assert qs_from_json(qs_to_json(a)) == a


@given(qseries())
@settings(max_examples=60)
def test_shift_then_unshift(a):
    s = qs_shift(a, 3)
    back = qs_shift(s, -3)
    assert back == a


@given(qseries())
@settings(max_examples=60)
def test_scale_exponent_is_substitution(a):
    s = qs_scale_exponent(a, 3)
    assert s.exp_denom == a.exp_denom
    assert s.trunc == 3 * a.trunc
    for key, c in a.coeffs.items():
        assert s.coeffs.get(3 * key) == c
    assert len(s.coeffs) == len(a.coeffs)


def test_inverse_against_long_division():
    # 1/(q^0 (1 + q)) = 1 - q + q^2 - ... and q(1+q) inverse has a pole
    a = QSeries(1, {0: Fraction(1), 1: Fraction(1)}, 10)
    inv = qs_inv(a)
    for n in range(inv.trunc):
        assert inv.coeffs.get(n, Fraction(0)) == (-1) ** n
    prod = qs_mul(a, inv)
    assert prod.coefficient(Fraction(0)) == 1
    assert all(c == 0 for k, c in prod.coeffs.items() if k != 0)


@given(qseries(max_terms=5))
@settings(max_examples=80)
def test_inverse_law(a):
    if a.is_zero():
        with pytest.raises(NonInvertibleError):
            qs_inv(a)
        return
    inv = qs_inv(a)
    prod = qs_mul(a, inv)
    one_key = 0
    for k in range(prod.trunc):
        want = Fraction(1) if k == one_key else Fraction(0)
        assert prod.coeffs.get(k, Fraction(0)) == want


@given(qseries())
@settings(max_examples=60)
def test_reduce_lattice_preserves_values(a):
    r = qs_reduce_lattice(a)
    for key, c in a.coeffs.items():
        assert r.coefficient(Fraction(key, a.exp_denom)) == c
    assert Fraction(r.trunc, r.exp_denom) <= Fraction(a.trunc, a.exp_denom)


def test_truncation_is_min_under_add():
    a = QSeries(1, {0: Fraction(1)}, 5)
    b = QSeries(1, {0: Fraction(1)}, 9)
    assert qs_add(a, b).trunc == 5


def test_mul_truncation_uses_valuation():
    # (q^2 + ...)<10> * (1 + ...)<6> is trusted below q^8
    a = QSeries(1, {2: Fraction(1)}, 10)
    b = QSeries(1, {0: Fraction(1)}, 6)
    assert qs_mul(a, b).trunc == 8


def test_pow_zero_is_one():
    a = QSeries(1, {3: Fraction(2)}, 7)
    p = qs_pow(a, 0)
    assert p.coeffs == {0: Fraction(1)}
    assert p.trunc == a.trunc


# bivariate layer

def _zs(pairs, e=2, d=8, trunc=64, unit=0):
    terms = {r: QSeries(d, dict(cs), trunc) for r, cs in pairs.items()}
    return ZetaSeries(e, d, trunc, terms, unit_ipow=unit)


def test_zeta_mul_grades_add():
    a = _zs({1: {0: Fraction(1)}}, unit=1)
    b = _zs({-1: {8: Fraction(2)}}, unit=3)
    p = zs_mul(a, b)
    assert p.unit_ipow == 0
    assert p.zeta_support() == [0]
    assert p.term(0).coefficient(Fraction(1)) == 2


def test_zeta_shift_substitution():
    # zeta -> zeta q: a term zeta^{r/2} picks up q^{r/2}
    a = _zs({1: {0: Fraction(1)}, 3: {0: Fraction(1)}})
    s = zs_sub_zeta_shift(a, 1, 1)
    assert s.term(1).coefficient(Fraction(1, 2)) == 1
    assert s.term(3).coefficient(Fraction(3, 2)) == 1


def test_zeta_sign_shift_all_odd():
    # zeta -> -zeta on half-integer powers multiplies the unit by i
    a = _zs({1: {0: Fraction(1)}, -1: {0: Fraction(1)}}, unit=0)
    s = zs_sub_zeta_shift(a, 0, -1)
    assert s.unit_ipow == 1
    assert s.term(1).coefficient(Fraction(0)) == 1
    assert s.term(-1).coefficient(Fraction(0)) == -1


def test_zeta_extract_and_mismatch():
    a = _zs({0: {0: Fraction(2)}, 2: {8: Fraction(3)}})
    assert zs_extract(a, Fraction(0)).coefficient(Fraction(0)) == 2
    b = _zs({0: {0: Fraction(2)}, 2: {8: Fraction(4)}})
    assert zs_first_mismatch(a, a) is None
    loc = zs_first_mismatch(a, b)
    assert loc is not None


def test_zeta_add_requires_matching_unit_parity():
    real = _zs({0: {0: Fraction(1)}}, unit=0)
    imag = _zs({0: {0: Fraction(1)}}, unit=1)
    with pytest.raises(ValueError):
        zs_add(real, imag)
    # units 1 and 3 differ only by sign, which folds into the coefficients
    a = _zs({1: {0: Fraction(1)}}, unit=1)
    b = _zs({1: {0: Fraction(1)}}, unit=3)
    s = zs_add(a, b)
    assert s.term(1).is_zero()


# Laurent-in-x layer

def _qs1(c, trunc=30):
    return QSeries(1, {0: Fraction(c)}, trunc)


def test_xs_mul_and_inverse():
    # (x + x^2)(1/(x + x^2)) = 1 on the known window
    a = XSeries(1, [_qs1(1), _qs1(1), _qs1(0), _qs1(0)], 5)
    inv = xs_inv(a)
    assert inv.lo == -1
    prod = xs_mul(a, inv)
    assert prod.coefficient(0).coefficient(Fraction(0)) == 1
    for n in range(1, prod.x_trunc):
        assert prod.coefficient(n).is_zero()


def test_xs_pow_matches_repeated_mul():
    a = XSeries(-1, [_qs1(2), _qs1(0), _qs1(1)], 2)
    p3 = xs_pow(a, 3)
    p_ref = xs_mul(xs_mul(a, a), a)
    assert p3.lo == p_ref.lo
    for n in range(p_ref.lo, min(p3.x_trunc, p_ref.x_trunc)):
        assert p3.coefficient(n) == p_ref.coefficient(n)


def test_xs_add_aligns_offsets():
    a = XSeries(0, [_qs1(1)], 1)
    b = XSeries(-2, [_qs1(5), _qs1(0), _qs1(7)], 1)
    s = xs_add(a, b)
    assert s.lo == -2
    assert s.coefficient(-2).coefficient(Fraction(0)) == 5
    assert s.coefficient(0).coefficient(Fraction(0)) == 8


# pi polynomials

@given(st.dictionaries(st.integers(0, 6), fractions, max_size=5))
def test_pi_string_round_trip(coeffs):
    a = PiPolynomial(coeffs)
    assert pi_from_string(pi_to_string(a)) == a


@given(st.dictionaries(st.integers(0, 4), fractions, max_size=4),
       st.dictionaries(st.integers(0, 4), fractions, max_size=4))
def test_pi_mul_matches_eval(c1, c2):
    import mpmath
    a, b = PiPolynomial(c1), PiPolynomial(c2)
    with mpmath.workdps(40):
        lhs = pi_eval(pi_mul(a, b), 30)
        rhs = pi_eval(a, 30) * pi_eval(b, 30)
        assert abs(lhs - rhs) < mpmath.mpf("1e-20")


def test_pi_add_scale():
    a = PiPolynomial({0: Fraction(1, 2), 2: Fraction(-1)})
    b = pi_scale(a, 2)
    assert pi_add(a, b).coeffs == {0: Fraction(3, 2), 2: Fraction(-3)}
