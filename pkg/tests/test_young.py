import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracorlicz import young as yf
from fracorlicz.errors import ConfigError, ConjugateInfiniteError, DegenerateYoungError

CATALOG = {
    "power_1.5": lambda: yf.power(1.5),
    "power_2": lambda: yf.power(2.0),
    "power_3": lambda: yf.power(3.0),
    "p_q_2_3": lambda: yf.p_q(2.0, 3.0),
    "p_log_2_1_1": lambda: yf.p_log(2.0, 1.0, 1.0),
    "exp_taylor_2": lambda: yf.exp_taylor(2),
    "double_exp": lambda: yf.double_exp(),
    "exp_neg_power_2": lambda: yf.exp_neg_power(2.0),
}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_invariants(name):
    assert yf.check_invariants(CATALOG[name]()) == []


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_A_matches_exp_log_A(name):
    f = CATALOG[name]()
    t = np.logspace(-2, 1.5, 30)
    A, lA = f.A(t), f.log_A(t)
    ok = (A > 1e-250) & (A < 1e250)
    assert np.allclose(np.log(A[ok]), lA[ok], rtol=1e-10, atol=1e-10)


def test_closed_forms_by_hand():
    assert yf.power(2.0).A(3.0) == pytest.approx(9.0)
    assert yf.p_q(2.0, 3.0).A(2.0) == pytest.approx(2.0 + 8.0 / 3.0)
    assert yf.p_log(2.0, 1.0, 1.0).A(math.e - 1) == pytest.approx((math.e - 1) ** 2)
    assert yf.exp_taylor(2).A(1.0) == pytest.approx(math.e - 2.0)
    assert yf.double_exp().A(1.0) == pytest.approx(math.exp(math.e) - math.e)
    assert yf.exp_neg_power(2.0).A(0.5) == pytest.approx(math.exp(-4.0))


def test_exp_taylor_small_t_keeps_digits():
    # e^t - 1 - t ~ t^2/2 where direct subtraction would cancel
    f = yf.exp_taylor(2)
    assert f.A(1e-8) == pytest.approx(0.5e-16, rel=1e-6)


def test_saturation_is_finite():
    f = yf.double_exp()
    assert float(f.A(1e3)) == yf.SATURATION
    assert bool(f.saturated(1e3))


@pytest.mark.parametrize("kind,args", [("power", (0.5,)), ("p_q", (3.0, 2.0)), ("p_q", (1.0, 2.0))])
def test_invalid_parameters(kind, args):
    with pytest.raises(ValueError):
        getattr(yf, kind)(*args)


@given(st.floats(min_value=-6, max_value=6))
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip_p_q(logt):
    f = yf.p_q(2.0, 3.0)
    t = 10.0 ** logt
    assert yf.inverse(f, f.A(t)) == pytest.approx(t, rel=1e-9)


@given(st.floats(min_value=-3, max_value=1.2))
@settings(max_examples=40, deadline=None)
def test_inverse_roundtrip_exponential(logt):
    f = yf.exp_taylor(3)
    t = 10.0 ** logt
    assert yf.inverse(f, f.A(t)) == pytest.approx(t, rel=1e-8)


def test_inverse_of_zero_and_tiny_levels():
    assert yf.inverse(yf.power(2.0), 0.0) == 0.0
    # A(t) = exp(-1/t) reaches 1e-300 at t = 1/(300 ln 10)
    assert yf.inverse(yf.exp_neg_power(1.0), 1e-300) == pytest.approx(1 / (300 * math.log(10)), rel=1e-9)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_power_conjugate_closed_vs_numeric(p):
    f = yf.power(p)
    t = np.logspace(-4, 4, 25)
    a = yf.conjugate(f).A(t)
    b = yf.conjugate(f, numeric=True).A(t)
    assert np.allclose(b, a, rtol=1e-9)


def test_conjugate_of_t2_is_quarter_t2():
    g = yf.conjugate(yf.power(2.0), numeric=True)
    assert g.A(3.0) == pytest.approx(9.0 / 4.0, rel=1e-10)


def test_conjugate_of_linear_is_infinite():
    with pytest.raises(ConjugateInfiniteError):
        yf.conjugate(yf.power(1.0))


@pytest.mark.parametrize("name", ["power_1.5", "p_q_2_3", "p_log_2_1_1"])
def test_young_inequality(name):
    # tau t <= A(tau) + Ã(t) on a grid
    f = CATALOG[name]()
    g = yf.conjugate(f)
    x = np.logspace(-3, 3, 15)
    T, U = np.meshgrid(x, x)
    assert np.all(T * U <= (f.A(T) + g.A(U)) * (1 + 1e-9))


@pytest.mark.parametrize("name,z,i", [
    ("power_2", True, True), ("p_q_2_3", True, True), ("p_log_2_1_1", True, True),
    ("exp_taylor_2", True, False), ("double_exp", True, False),
    ("exp_neg_power_2", False, True),
])
def test_doubling_numeric_matches_analytic(name, z, i):
    c = yf.classify_doubling(CATALOG[name](), analytic=False)
    assert (c.delta2_zero, c.delta2_inf) == (z, i)
    assert c.delta2_global == (z and i)


@pytest.mark.parametrize("name,pa", [("power_3", (3.0, 3.0)), ("p_q_2_3", (2.0, 3.0)),
                                     ("p_log_2_1_1", (2.0, 3.0))])
def test_pA_bounds(name, pa):
    f = CATALOG[name]()
    c = yf.classify_doubling(f)
    assert (c.pA_minus, c.pA_plus) == pytest.approx(pa)
    sampled = yf.classify_doubling(f, analytic=False)
    assert pa[0] - 0.1 <= sampled.pA_minus and sampled.pA_plus <= pa[1] + 1e-9


def test_degenerate_young_function():
    f = yf.custom(lambda t: np.where(np.asarray(t) < 1, -np.inf, np.log(np.maximum(t, 1) - 1 + 1e-300)),
                  lambda t: np.where(np.asarray(t) < 1, 0.0, 1.0))
    with pytest.raises(DegenerateYoungError):
        yf.classify_doubling(f)


def test_tabulated_matches_power():
    t = np.linspace(0, 10, 2001)
    f = yf.tabulated(t, 2 * t)
    x = np.array([0.5, 1.0, 3.0, 7.5])
    assert np.allclose(f.A(x), x ** 2, rtol=1e-6)


def test_from_spec_roundtrip():
    for spec in ({"kind": "power", "p": 2}, {"kind": "p_q", "p": 2, "q": 3},
                 {"kind": "p_log", "p": 2, "q": 1, "r": 1}, {"kind": "exp_taylor", "k": 2}):
        f = yf.from_spec(spec)
        g = yf.from_spec(yf.to_spec(f))
        assert g.A(1.7) == pytest.approx(f.A(1.7))


@pytest.mark.parametrize("spec,path", [({"kind": "nope"}, "young.kind"),
                                       ({"kind": "p_q", "p": 2}, "young.q")])
def test_from_spec_errors_name_field(spec, path):
    with pytest.raises(ConfigError) as exc:
        yf.from_spec(spec)
    assert exc.value.path == path
