import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracorlicz import matuszewska as mz
from fracorlicz import young as yf


def _brute_sup(f, t, alphas=np.logspace(-18, 18, 3601)):
    """Plain-space sup of A(alpha t)/A(alpha) for kinds that do not overflow."""
    return float(np.max(f.A(alphas * t) / f.A(alphas)))


@pytest.mark.parametrize("t", [0.25, 0.5, 2.0, 4.0, 10.0])
@pytest.mark.parametrize("kind", [lambda: yf.p_q(2.0, 3.0), lambda: yf.p_q(1.5, 4.0),
                                  lambda: yf.p_log(2.0, 1.0, 1.0)])
def test_sup_matches_brute_force(kind, t):
    f = kind()
    assert mz.matuszewska_sup(f, t, numeric=True) == pytest.approx(_brute_sup(f, t), rel=1e-3)


@given(p=st.floats(1.1, 6.0), logt=st.floats(-2, 2))
@settings(max_examples=40, deadline=None)
def test_power_M_is_t_to_p(p, logt):
    t = 10.0 ** logt
    f = yf.power(p)
    expected = t ** p
    for v in (mz.matuszewska_sup(f, t, numeric=True),
              mz.matuszewska_limit(f, t, "zero", numeric=True),
              mz.matuszewska_limit(f, t, "infinity", numeric=True)):
        assert v == pytest.approx(expected, rel=1e-9)


@given(a=st.floats(-1.5, 1.5), b=st.floats(-1.5, 1.5))
@settings(max_examples=40, deadline=None)
def test_sup_is_submultiplicative(a, b):
    f = yf.p_q(2.0, 3.0)
    s, t = 10.0 ** a, 10.0 ** b
    lhs = mz.matuszewska_sup(f, s * t, numeric=True)
    rhs = mz.matuszewska_sup(f, s, numeric=True) * mz.matuszewska_sup(f, t, numeric=True)
    assert lhs <= rhs * (1 + 1e-6)


@pytest.mark.parametrize("f", [yf.p_q(2.0, 3.0), yf.p_log(2.0, 1.0, 1.0), yf.exp_taylor(2)])
def test_limits_below_sup(f):
    for t in (0.3, 0.7, 1.5, 3.0):
        M = mz.matuszewska_sup(f, t, numeric=True)
        assert mz.matuszewska_limit(f, t, "zero", numeric=True) <= M * (1 + 1e-9)
        assert mz.matuszewska_limit(f, t, "infinity", numeric=True) <= M * (1 + 1e-9)


def test_exp_neg_power_limits():
    f = yf.exp_neg_power(2.0)
    assert mz.matuszewska_limit(f, 0.5, "zero", numeric=True) == 0.0
    assert math.isinf(mz.matuszewska_limit(f, 2.0, "zero", numeric=True))
    assert math.isinf(mz.matuszewska_index(f, "zero", numeric=True))


def test_double_exp_infinite_beyond_one():
    f = yf.double_exp()
    assert mz.matuszewska_limit(f, 0.5, "infinity", numeric=True) == 0.0
    assert math.isinf(mz.matuszewska_limit(f, 1.5, "infinity", numeric=True))
    assert mz.matuszewska_limit(f, 0.5, "zero", numeric=True) == pytest.approx(0.5, rel=1e-3)


@pytest.mark.parametrize("which,expected", [("global", 4.0), ("zero", 1.5), ("infinity", 4.0)])
def test_index_p_q(which, expected):
    assert mz.matuszewska_index(yf.p_q(1.5, 4.0), which, numeric=True) == pytest.approx(expected, abs=0.05)


def test_index_rejects_unknown_end():
    with pytest.raises(ValueError):
        mz.matuszewska_index(yf.power(2.0), "middle")


def test_sup_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        mz.matuszewska_sup(yf.power(2.0), 0.0)


@pytest.mark.parametrize("numeric", [True, False])
def test_profile_invariants_and_csv(numeric):
    p = mz.profile(yf.exp_taylor(2), numeric=numeric)
    assert mz.check_profile(p) == []
    assert math.isinf(p.i) and p.i0 == pytest.approx(2.0, abs=0.05)
    d = p.to_dict()
    assert d["i"] == "inf"
    lines = p.to_csv().splitlines()
    assert lines[0] == "t,M,M0,Minf"
    assert len(lines) == 1 + len(p.t_grid)
    assert "inf" in p.to_csv()
