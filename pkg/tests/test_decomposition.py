"""Laurent data, pole sums and character assembly."""

from fractions import Fraction

import pytest

from kwq import decomposition, modular
from kwq.series import QSeries, qs_first_mismatch, qs_mul, qs_shift


def test_odd_m_rejected():
    for fn in (lambda: decomposition.extract_D(3, 5),
               lambda: decomposition.chF(1, 0, 5),
               lambda: decomposition.phi_finite(6 - 1, 5)):
        with pytest.raises(ValueError):
            fn()


def test_chi_zero_rejected():
    with pytest.raises(ValueError):
        decomposition.chi(2, 0, 10)


def test_phi_x_window():
    phi = decomposition.phi_x(2, 2, 12)
    assert phi.lo == -2
    assert phi.x_trunc == 3
    # even function of x: odd coefficients vanish
    assert phi.coefficient(-1).is_zero()
    assert phi.coefficient(1).is_zero()


def test_phi_x_odd_powers_vanish_m4():
    phi = decomposition.phi_x(4, 1, 8)
    for n in (-3, -1, 1):
        assert phi.coefficient(n).is_zero()


def test_extract_D_against_closed_forms():
    for m, order in ((2, 25), (4, 15)):
        got = decomposition.extract_D(m, order)
        want = decomposition.example_D(m, order)
        for j in range(m // 2 + 1):
            assert qs_first_mismatch(got.D[j], want.D[j]) is None


def test_D_heads_m2():
    D = decomposition.extract_D(2, 6).D
    assert [D[1].coefficient(Fraction(n)) for n in range(5)] == [-4, -32, -160, -640, -2208]
    assert [D[0].coefficient(Fraction(n)) for n in range(3)] == [
        Fraction(-2, 3), Fraction(-64, 3), Fraction(-512, 3)]


def test_oracle_matches_characters_small():
    for m in (2, 4):
        oracle = decomposition.kw_product_oracle(m, 12)
        for r in range(-3, 4):
            got = decomposition.chF(m, r, 12).series
            assert qs_first_mismatch(got, oracle.term(r)) is None


def test_oracle_zeta_zero_is_signed_finite_part():
    oracle = decomposition.kw_product_oracle(2, 10)
    want = decomposition.phi_finite(2, 10)
    got = oracle.term(0)
    # chF_0 = (-1)^{m/2} phiF
    assert qs_first_mismatch(got, QSeries(want.exp_denom,
                                          {k: -c for k, c in want.coeffs.items()},
                                          want.trunc)) is None


def test_reflection_symmetry():
    for m in (2, 4):
        for r in (1, 2, 3):
            a = decomposition.chF(m, r, 15).series
            b = decomposition.chF(m, -r, 15).series
            assert qs_first_mismatch(a, b) is None


def test_chi_negative_r_shift_identity():
    # chi_{-s} = q^s chi_s
    for s in (1, 2, 3):
        neg = decomposition.chi(2, -s, 12)
        pos = decomposition.chi(2, s, 12)
        shifted = qs_shift(pos, s)
        assert qs_first_mismatch(neg, shifted) is None


def test_trace_heads():
    tr = decomposition.character(2, 1, 5).series
    assert tr.coefficient(Fraction(1, 2)) == 4
    assert tr.coefficient(Fraction(3, 2)) == 32
    assert tr.coefficient(Fraction(5, 2)) == 156
    assert tr.coefficient(Fraction(7, 2)) == 604
    tr0 = decomposition.character(2, 0, 5).series
    assert tr0.coefficient(Fraction(0)) == 1
    assert tr0.coefficient(Fraction(1)) == 15
    assert tr0.coefficient(Fraction(2)) == 79
    assert tr0.coefficient(Fraction(3)) == 336


def test_character_deep_matches_generic():
    # the fast closed-form route must stay equal to the assembled route
    for r in (0, 1, 2, -3):
        fast = decomposition.character_deep(2, r, 20).series
        slow = decomposition.character(2, r, 20).series
        assert qs_first_mismatch(fast, slow) is None


def test_character_deep_m4_falls_back():
    fast = decomposition.character_deep(4, 1, 10).series
    slow = decomposition.character(4, 1, 10).series
    assert qs_first_mismatch(fast, slow) is None


def test_chf_trusted_range_extends_with_r():
    cs = decomposition.chF(2, 4, 10).series
    assert Fraction(cs.trunc, cs.exp_denom) >= 10 + Fraction(4, 2)


def test_polar_zeta_collects_chi():
    pz = decomposition.phi_polar_zeta(2, 8, 3)
    assert sorted(pz.zeta_support()) == [-3, -2, -1, 1, 2, 3]
    for r in (1, 2, 3):
        assert qs_first_mismatch(pz.term(r), decomposition.chi(2, r, 8)) is None


def test_phi_finite_head_m2():
    f = decomposition.phi_finite(2, 4)
    assert f.coefficient(Fraction(0)) == -1
    assert f.coefficient(Fraction(1)) == -16
    assert f.coefficient(Fraction(2)) == -96
