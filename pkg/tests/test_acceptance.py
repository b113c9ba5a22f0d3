"""Acceptance gate: the eleven verification criteria at full depth.

Every test runs the corresponding battery criterion at its stated
tolerance and records the outcome so the terminal summary prints one
PASS/FAIL line per criterion.  Criterion 8 additionally carries two
strict-xfail probes pinning measured facts about the halving ratio:
the r=1 ratio only lands in [16, 64] when read as defect(0.1) over
defect(0.05), and r=0 admits no power-law ratio at all because every
correction term carries a factor of r.  If either probe ever starts
passing, the convergence behavior changed and the battery reading
must be revisited.
"""

import time
from fractions import Fraction

import pytest

import kwq
from kwq import asymptotics, cli, decomposition, modular, verify
from kwq.series import QSeries, ZetaSeries

from conftest import record_criterion


def _gate(cid: int, **kwargs) -> dict:
    res = verify.CRITERIA[cid](fast=False, **kwargs)
    record_criterion(cid, res["title"], res["passed"])
    assert res["passed"], [c for c in res["checks"] if not c["passed"]]
    return res


def test_criterion_1_oracle_equality():
    res = _gate(1)
    assert res["elapsed"] < 60


def test_criterion_2_laurent_closed_forms_m2():
    _gate(2)


def test_criterion_3_laurent_closed_forms_m4():
    _gate(3)


def test_criterion_4_triple_product():
    _gate(4)


def test_criterion_5_theta_special_values():
    _gate(5)


def test_criterion_6_divisor_sum_identity():
    _gate(6)


def test_criterion_7_generalized_euler():
    _gate(7)


def test_criterion_8_convergence_order():
    res = _gate(8)
    assert res["elapsed"] < 300


@pytest.mark.xfail(strict=True,
                   reason="measured ratio direction: defect(0.05)/defect(0.1) "
                          "is ~1/64, not in [16, 64]; the battery checks the "
                          "inverse, which is the actual convergence statement")
def test_criterion_8_literal_direction_r1():
    d_small = asymptotics.asymptotic_defect(2, 1, Fraction(1, 20), 4, 50)
    d_big = asymptotics.asymptotic_defect(2, 1, Fraction(1, 10), 4, 50)
    assert 16 <= d_small / d_big <= 64


@pytest.mark.xfail(strict=True,
                   reason="for r=0 all t^k corrections with k >= 1 vanish, so "
                          "the defect sits at the nonperturbative remainder "
                          "scale and the halving ratio is ~1e13 either way")
def test_criterion_8_literal_r0():
    d_small = asymptotics.asymptotic_defect(2, 0, Fraction(1, 20), 4, 50)
    d_big = asymptotics.asymptotic_defect(2, 0, Fraction(1, 10), 4, 50)
    ratio = max(d_big, d_small) / min(d_big, d_small)
    assert 16 <= ratio <= 64


def test_criterion_9_transformation_battery():
    _gate(9, seed=0)


def test_criterion_10_reflection():
    _gate(10)


# --- criterion 11: exit-code gate plus injected perturbations ---------------

def _battery_exit(capsys) -> int:
    code = cli.main(["verify-all", "--fast"])
    capsys.readouterr()
    return code


def _bump_qseries(s: QSeries) -> QSeries:
    coeffs = dict(s.coeffs)
    key = next(iter(sorted(coeffs))) if coeffs else 0
    coeffs[key] = coeffs.get(key, Fraction(0)) + 1
    return QSeries(s.exp_denom, coeffs, s.trunc)


def _flip(monkeypatch, capsys, module, name, tampered) -> int:
    kwq.clear_caches()
    monkeypatch.setattr(module, name, tampered)
    try:
        return _battery_exit(capsys)
    finally:
        monkeypatch.undo()
        kwq.clear_caches()


def test_criterion_11_gate_and_perturbations(capsys, monkeypatch):
    t0 = time.time()
    ok = True
    try:
        assert _battery_exit(capsys) == 0, "baseline battery must exit 0"

        orig_eis = modular.eisenstein.__wrapped__

        def bad_eisenstein(j, order):
            s = orig_eis(j, order)
            return _bump_qseries(s) if j == 1 else s

        assert _flip(monkeypatch, capsys, modular, "eisenstein",
                     bad_eisenstein) == 1

        orig_eta = modular.eta.__wrapped__

        def bad_eta(order):
            return _bump_qseries(orig_eta(order))

        assert _flip(monkeypatch, capsys, modular, "eta", bad_eta) == 1

        orig_tz = modular.theta_zeta.__wrapped__

        def bad_theta_zeta(order):
            zs = orig_tz(order)
            terms = dict(zs.terms)
            r = sorted(terms)[0]
            terms[r] = _bump_qseries(terms[r])
            return ZetaSeries(zs.zeta_denom, zs.exp_denom, zs.q_trunc, terms,
                              unit_ipow=zs.unit_ipow)

        assert _flip(monkeypatch, capsys, modular, "theta_zeta",
                     bad_theta_zeta) == 1

        orig_euler = asymptotics._euler_value.__wrapped__

        def bad_euler(k, m):
            v = orig_euler(k, m)
            if (k, m) == (2, 2):
                coeffs = dict(v.coeffs)
                coeffs[1] = coeffs.get(1, Fraction(0)) + Fraction(1, 7)
                return type(v)(coeffs)
            return v

        assert _flip(monkeypatch, capsys, asymptotics, "_euler_value",
                     bad_euler) == 1

        # library-level variant: a character perturbation must fail run_all
        orig_chi = decomposition.chi.__wrapped__

        def bad_chi(m, r, order):
            return _bump_qseries(orig_chi(m, r, order))

        kwq.clear_caches()
        monkeypatch.setattr(decomposition, "chi", bad_chi)
        try:
            assert verify.run_all(fast=True)["passed"] is False
        finally:
            monkeypatch.undo()
            kwq.clear_caches()
    except BaseException:
        ok = False
        raise
    finally:
        record_criterion(11, "exit-code gate flips under perturbation", ok)
        assert time.time() - t0 < 300
