"""High-precision evaluation and transformation-law checks.

theta_eval is validated against mpmath's independent jtheta
implementation; eta against its Gamma-function value at tau = i.
"""

import mpmath
import pytest

from kwq import modular, numeric
from kwq.numeric import EvalContext, GammaMatrix, PrecisionError

TAU = mpmath.mpc("0.23", "0.81")
Z = mpmath.mpc("0.21", "0.11")
T = GammaMatrix(1, 1, 0, 1)
S = GammaMatrix(0, -1, 1, 0)
V = GammaMatrix(1, 0, 2, 1)
W = GammaMatrix(3, 1, 2, 1)


@pytest.fixture
def ctx():
    return EvalContext(precision=50)


def _tiny(x, digits=40):
    assert abs(x) < mpmath.mpf(10) ** -digits, mpmath.nstr(abs(x), 8)


def test_gamma_matrix_validation():
    with pytest.raises(ValueError):
        GammaMatrix(1, 0, 0, 2)
    with pytest.raises(ValueError):
        GammaMatrix(2, 0, 0, 1)
    assert V.in_gamma0_2()
    assert not S.in_gamma0_2()


def test_gamma_canonical():
    g = GammaMatrix(-1, -1, 0, -1).canonical()
    assert (g.a, g.b, g.c, g.d) == (1, 1, 0, 1)
    h = GammaMatrix(-1, 0, -2, -1).canonical()
    assert h.c > 0


def test_eta_at_i(ctx):
    with ctx.workdps():
        val = numeric.eval_adaptive(lambda o: modular.eta(o), 1j, ctx)
        want = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** mpmath.mpf("0.75"))
        _tiny(val - want)


def test_theta_against_jtheta(ctx):
    with ctx.workdps():
        for z, tau in ((Z, TAU), (mpmath.mpc("-0.4", "0.2"), mpmath.mpc("0.1", "1.3")),
                       (mpmath.mpc("0.35"), 1j)):
            mine = numeric.theta_eval(z, tau, ctx)
            oracle = -mpmath.jtheta(1, mpmath.pi * z, mpmath.exp(1j * mpmath.pi * tau))
            _tiny(mine - oracle)


def test_theta_odd(ctx):
    with ctx.workdps():
        _tiny(numeric.theta_eval(Z, TAU, ctx) + numeric.theta_eval(-Z, TAU, ctx))


def test_rho_translation(ctx):
    r = numeric.rho_from_eta(T, ctx)
    assert r.index == 1
    assert r.snap_distance < 1e-10
    with ctx.workdps():
        _tiny(r.value - mpmath.exp(1j * mpmath.pi / 12))


def test_rho_inversion(ctx):
    r = numeric.rho_from_eta(S, ctx)
    assert r.index == 21
    with ctx.workdps():
        _tiny(r.value ** 24 - 1)
        _tiny(r.value - mpmath.exp(-1j * mpmath.pi / 4))


def test_theta_modular_laws(ctx):
    for g in (T, S, V, W):
        _tiny(numeric.check_theta_modular(g, Z, TAU, ctx))


def test_phi_transform_and_elliptic(ctx):
    for g in (T, V, W):
        _tiny(numeric.check_phi_transform(g, Z, TAU, 2, ctx))
    _tiny(numeric.check_phi_elliptic(Z, TAU, 1, 1, 2, ctx))
    _tiny(numeric.check_phi_elliptic(Z, TAU, -1, 2, 4, ctx))


def test_psi_character_values():
    assert numeric.psi_char(V, 2) == -1
    assert numeric.psi_char(V, 4) == 1
    assert numeric.psi_char(T, 2) == 1
    assert numeric.psi_char(GammaMatrix(1, 0, 4, 1), 2) == 1


def test_e2hat_inversion(ctx):
    with ctx.workdps():
        lhs = numeric.e2hat_eval(-1 / TAU, ctx).total
        rhs = TAU ** 2 * numeric.e2hat_eval(TAU, ctx).total
        _tiny(lhs - rhs)
        # the bare holomorphic part must NOT transform (anomaly check)
        bare = numeric.e2hat_eval(-1 / TAU, ctx).holomorphic_part \
            - TAU ** 2 * numeric.e2hat_eval(TAU, ctx).holomorphic_part
        assert abs(bare) > 1e-3


def test_D_transform(ctx):
    _tiny(numeric.check_D_transform(1, V, TAU, 2, ctx))
    _tiny(numeric.check_D_transform(0, V, TAU, 2, ctx))


def test_completed_parts_transform(ctx):
    res = numeric.check_completed_parts(V, TAU, 2, z=Z, ctx=ctx)
    _tiny(res["fhat"])
    _tiny(res["phat"])
    assert res["f_uncompleted"] > 1e-6


def test_qs_eval_reports_larger_order():
    s = modular.eisenstein(2, 12)
    with pytest.raises(PrecisionError) as err:
        numeric.qs_eval(s, mpmath.mpc(0, "0.05"), EvalContext(precision=40))
    assert err.value.suggested_order is not None
    assert err.value.suggested_order > 12


def test_eval_adaptive_recovers():
    ctx = EvalContext(precision=40)
    with ctx.workdps():
        val = numeric.eval_adaptive(lambda o: modular.eisenstein(2, o),
                                    mpmath.mpc(0, "0.2"), ctx, start_order=8)
        dps_direct = numeric.qs_eval(modular.eisenstein(2, 400),
                                     mpmath.mpc(0, "0.2"), ctx)
        assert abs(val - dps_direct) < mpmath.mpf(10) ** -38


def test_phi_pole_guard(ctx):
    with pytest.raises(ValueError):
        numeric.phi_eval(0, TAU, 2, ctx)
    with pytest.raises(ValueError):
        numeric.phi_eval(TAU, TAU, 2, ctx)


def test_precision_floor():
    with pytest.raises(ValueError):
        EvalContext(precision=10)
