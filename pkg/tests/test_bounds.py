import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fracorlicz import bounds as bd
from fracorlicz import young as yf
from fracorlicz.errors import ConditionViolatedError, IntervalUnboundedError


def _sympy_E_power(p, n, s, t):
    """E(t) for A = tau^p from the exact conjugate and a symbolic integral."""
    tau, T = sympy.symbols("tau T", positive=True)
    P, S = sympy.Rational(p), sympy.Rational(s)
    q = P / (P - 1)
    conj = (P - 1) * P ** (-q) * tau ** q
    m = sympy.Integer(n) / (n - S)
    expr = T ** m * sympy.integrate(conj * tau ** (-1 - m), (tau, T, sympy.oo))
    return float(expr.subs(T, sympy.nsimplify(t)))


@pytest.mark.parametrize("p,n,s", [(4, 1, "1/2"), (3, 1, "3/4"), (6, 2, "1/2"), (5, 2, "2/3")])
@pytest.mark.parametrize("t", [0.01, 1.0, 37.0])
def test_E_against_symbolic(p, n, s, t):
    f = yf.power(float(p))
    s_val = float(sympy.Rational(s))
    ref = _sympy_E_power(p, n, s, t)
    assert bd.E_function(f, n, s_val, t) == pytest.approx(ref, rel=1e-8)
    assert float(bd.E_young(f, n, s_val).A(t)) == pytest.approx(ref, rel=1e-6)


def test_E_value_t4():
    assert bd.E_function(yf.power(4.0), 1, 0.5, 1.0) == pytest.approx(4.5 * 4 ** (-4 / 3), rel=1e-10)


def test_E_requires_cond1():
    # t^2 with n=1, s=1/2: conjugate grows like t^2 = t^m, the integral diverges
    with pytest.raises(ConditionViolatedError):
        bd.E_function(yf.power(2.0), 1, 0.5, 1.0)


def test_E_tabulated_matches_quadrature_for_p_q():
    f = yf.p_q(4.0, 6.0)
    E = bd.E_young(f, 1, 0.5)
    for t in (1e-3, 0.2, 1.0, 5.0, 300.0):
        assert float(E.A(t)) == pytest.approx(bd.E_function(f, 1, 0.5, t), rel=1e-6)


def test_E_is_young():
    E = bd.E_young(yf.p_q(4.0, 6.0), 1, 0.5)
    assert yf.check_invariants(E, np.logspace(-3, 3, 61), tol=1e-6) == []


@pytest.mark.parametrize("f,n,s,expected", [
    (yf.power(4.0), 1, 0.75, ("holds", None, None)),
    (yf.power(2.0), 1, 0.5, ("fails", None, None)),
    (yf.power(2.0), 2, 0.5, ("fails", "holds", None)),
    (yf.p_q(2.0, 3.0), 2, 0.5, (None, None, "fails")),
])
def test_growth_conditions(f, n, s, expected):
    g = bd.check_conditions(f, n, s)
    for got, want in zip((g.cond1, g.cond2, g.cond3), expected):
        if want is not None:
            assert got == want
    assert set(g.to_dict()) == {"cond1", "cond2", "cond3", "evidence"}


def test_psi_forms_monotone_and_comparable():
    f = yf.power(4.0)
    r = np.logspace(-1, 1, 7)
    a = bd.psi_s(f, 1, 0.5, r, form="E")
    b = bd.psi_s(f, 1, 0.5, r, form="B")
    assert np.all(np.diff(a) > 0) and np.all(np.diff(b) > 0)
    # the two forms are equivalent up to constants: their ratio stays bounded
    ratio = a / b
    assert ratio.max() / ratio.min() < 4


def test_psi_rejects_bad_input():
    with pytest.raises(ValueError):
        bd.psi_s(yf.power(4.0), 1, 0.5, [0.0])
    with pytest.raises(ValueError):
        bd.psi_s(yf.power(4.0), 1, 0.5, [1.0], form="C")


def test_thm1_power_value():
    rep = bd.bound_thm1(yf.power(4.0), 1, 0.75, 0.5, 1.0)
    assert rep.value == pytest.approx(4.0)
    assert rep.applicable


def test_thm1_p_q_value():
    # r^n / M(r^s) with M(t) = max(t^2, t^4): 2 / M(2^{3/4}) = 2 / 8
    rep = bd.bound_thm1(yf.p_q(2.0, 4.0), 1, 0.75, 2.0, 1.0)
    assert rep.value == pytest.approx(0.25)


def test_diameter_value():
    rep = bd.bound_diameter(yf.power(2.0), 2, 0.5, 2.0, 1.0)
    assert rep.value == pytest.approx(0.5)


def test_inradius_flags_cond3():
    rep = bd.bound_inradius_delta2(yf.p_q(2.0, 3.0), 2, 0.5, 4.0, 1.0)
    assert rep.value == pytest.approx(0.125)
    assert not rep.applicable
    assert any("cond3" in r for r in rep.reasons)


def test_non_doubling_inapplicable():
    rep = bd.bound_inradius_delta2(yf.exp_taylor(2), 1, 0.5, 2.0, 1.0)
    assert not rep.applicable
    assert rep.value == 0.0


@given(r=st.floats(0.05, 20.0), C=st.floats(0.1, 10.0))
@settings(max_examples=40, deadline=None)
def test_bounds_linear_in_C(r, C):
    f = yf.power(4.0)
    a = bd.bound_thm1(f, 1, 0.75, r, 1.0, C=1.0).value
    b = bd.bound_thm1(f, 1, 0.75, r, 1.0, C=C).value
    assert b == pytest.approx(C * a, rel=1e-12)


@given(r=st.floats(0.05, 20.0), alpha=st.floats(0.01, 100.0))
@settings(max_examples=40, deadline=None)
def test_thm1_equals_thm2_for_power(r, alpha):
    f = yf.power(4.0)
    a = bd.bound_thm1(f, 1, 0.75, r, 1.0).value
    b = bd.bound_thm2_inverse(f, 1, 0.75, r, 1.0, alpha).value
    assert b == pytest.approx(a, rel=1e-8)


def test_calibrate_makes_bound_dominated():
    rep = bd.bound_thm1(yf.power(4.0), 1, 0.75, 0.5, 1.0)
    C = bd.calibrate(rep, 3.0)
    assert bd.bound_thm1(yf.power(4.0), 1, 0.75, 0.5, 1.0, C=C).value <= 3.0


def test_eigenvalue_interval():
    assert bd.eigenvalue_interval(2.0, 3.0) == (2.0 / 3.0, 6.0)
    with pytest.raises(IntervalUnboundedError):
        bd.eigenvalue_interval(2.0, math.inf)
    rep = bd.rescale_by_pA(bd.bound_thm1(yf.power(4.0), 1, 0.75, 0.5, 1.0), 4.0)
    assert rep.value == pytest.approx(1.0)


@pytest.mark.parametrize("kw", [{"r_Omega": -1.0}, {"omega_L1": 0.0}, {"C": 0.0}])
def test_invalid_bound_inputs(kw):
    args = {"r_Omega": 1.0, "omega_L1": 1.0, "C": 1.0, **kw}
    with pytest.raises(ValueError):
        bd.bound_thm1(yf.power(4.0), 1, 0.75, **args)
