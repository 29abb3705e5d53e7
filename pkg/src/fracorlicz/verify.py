"""Invariant suites of every module, runnable as one verification pass.

Each check returns ``(passed, detail)``; the suite runner records exceptions
as failures so that one broken check does not hide the others.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bounds as bd
from . import domain as dm
from . import matuszewska as mz
from . import spectral as sp
from . import young as yf

PROBES = np.logspace(-6, 6, 60)


def _catalog():
    return {
        "power_1.5": yf.power(1.5), "power_2": yf.power(2.0), "power_3": yf.power(3.0),
        "p_q_2_3": yf.p_q(2.0, 3.0), "p_log_2_1_1": yf.p_log(2.0, 1.0, 1.0),
        "exp_taylor_2": yf.exp_taylor(2), "double_exp": yf.double_exp(),
        "exp_neg_power_2": yf.exp_neg_power(2.0),
    }


def _delta2_catalog():
    return {"power_2": yf.power(2.0), "p_q_2_3": yf.p_q(2.0, 3.0),
            "p_log_2_1_1": yf.p_log(2.0, 1.0, 1.0)}


# -- young -------------------------------------------------------------------

def _young_invariants(_seed):
    bad = {k: yf.check_invariants(f) for k, f in _catalog().items()}
    bad = {k: v for k, v in bad.items() if v}
    return not bad, bad


def _doubling_consistency(_seed):
    out = {}
    ok = True
    for k, f in _catalog().items():
        c = yf.classify_doubling(f, analytic=False)
        good = (c.delta2_global == (c.delta2_zero and c.delta2_inf)
                and c.pA_minus >= 1 - 1e-9 and c.pA_plus >= c.pA_minus)
        ok &= good
        out[k] = {"delta2_zero": c.delta2_zero, "delta2_inf": c.delta2_inf,
                  "pA_plus": round(c.pA_plus, 6), "pA_minus": round(c.pA_minus, 6)}
    return ok, out


def _sandwich(_seed):
    worst = {}
    ok = True
    for k in ("power_1.5", "power_2", "power_3", "p_q_2_3"):
        f = _catalog()[k]
        g = yf.conjugate(f)
        prod = yf.inverse(f, PROBES) * yf.inverse(g, PROBES)
        lo = np.min(prod / PROBES)
        hi = np.max((prod - 1e-6 * PROBES) / PROBES)
        ok &= bool(lo >= 1 - 1e-6 and hi <= 2)
        worst[k] = [round(float(lo), 9), round(float(hi), 9)]
    return ok, worst


def _inverse_roundtrip(_seed):
    ok = True
    err = {}
    for k, f in _catalog().items():
        t = np.logspace(-3, 1.5, 25)
        y = f.A(t)
        keep = (y > 1e-290) & (y < 1e290)
        rel = np.abs(yf.inverse(f, y[keep]) / t[keep] - 1)
        e = float(rel.max()) if rel.size else 0.0
        ok &= e <= 1e-8
        err[k] = e <= 1e-8
    return ok, err


def _biconjugation(_seed):
    f = yf.p_q(2.0, 3.0)
    t = np.logspace(-6, 6, 20)
    g = yf.conjugate(yf.conjugate(f, numeric=True))
    rel = float(np.max(np.abs(g.A(t) / f.A(t) - 1)))
    return rel <= 1e-6, {"p_q_2_3_max_rel": rel <= 1e-6}


def _power_sandwich_delta2(_seed):
    ok = True
    out = {}
    tau = np.logspace(-3, 3, 13)
    t = np.logspace(-3, 3, 13)
    for k, f in _delta2_catalog().items():
        p = yf.classify_doubling(f).pA_plus
        T, U = np.meshgrid(t, tau, indexing="ij")
        mid = f.A(T * U)
        lo = np.minimum(U, U ** p) * f.A(T)
        hi = np.maximum(U, U ** p) * f.A(T)
        good = bool(np.all(mid >= lo * (1 - 1e-9)) and np.all(mid <= hi * (1 + 1e-9)))
        ok &= good
        out[k] = good
    return ok, out


# -- matuszewska -------------------------------------------------------------

def _profile_invariants(_seed):
    bad = {}
    for k, f in _catalog().items():
        v = mz.check_profile(mz.profile(f, numeric=True))
        if v:
            bad[k] = v
    return not bad, bad


def _closed_vs_numeric(_seed):
    fixtures = {"p_q_2_3": yf.p_q(2.0, 3.0), "p_log_2_1_1": yf.p_log(2.0, 1.0, 1.0),
                "exp_taylor_2": yf.exp_taylor(2)}
    worst = 0.0
    for f in fixtures.values():
        for t in (0.25, 0.5, 2.0, 4.0):
            for which in ("sup", "zero", "infinity"):
                if which == "sup":
                    a, b = mz.matuszewska_sup(f, t, numeric=True), mz.matuszewska_sup(f, t)
                else:
                    a = mz.matuszewska_limit(f, t, which, numeric=True)
                    b = mz.matuszewska_limit(f, t, which)
                if a == b:
                    continue
                if not (math.isfinite(a) and math.isfinite(b) and b > 0):
                    return False, {"mismatch": [t, which]}
                worst = max(worst, abs(a / b - 1))
    return worst <= 0.05, {"max_rel": round(worst, 6)}


def _power_bounds_M(_seed):
    ok = True
    t = np.logspace(-2, 2, 9)
    for k, f in _delta2_catalog().items():
        c = yf.classify_doubling(f)
        M = np.array([mz.matuszewska_sup(f, x) for x in t])
        lo = np.minimum(t ** c.pA_plus, t ** c.pA_minus)
        hi = np.maximum(t ** c.pA_plus, t ** c.pA_minus)
        ok &= bool(np.all(M >= lo * (1 - 1e-6)) and np.all(M <= hi * (1 + 1e-6)))
    return ok, {}


def _non_doubling_M(_seed):
    ok = True
    for f in (yf.exp_taylor(2), yf.double_exp(), yf.exp_neg_power(2.0)):
        for t in (1.5, 2.0, 4.0):
            ok &= math.isinf(mz.matuszewska_sup(f, t, numeric=True))
        for t in (0.25, 0.5, 0.9):
            ok &= mz.matuszewska_sup(f, t, numeric=True) <= t * (1 + 1e-9)
    return ok, {}


def _power_type_M(_seed):
    ok = True
    t = np.logspace(2, 6, 5)
    out = {}
    for k, f in _delta2_catalog().items():
        M = np.array([mz.matuszewska_sup(f, x, numeric=True) for x in t])
        ratio = np.log(M) / np.log(t)
        good = bool(np.ptp(ratio) <= 0.05)
        ok &= good
        out[k] = round(float(np.mean(ratio)), 6)
    return ok, out


# -- bounds ------------------------------------------------------------------

def _psi_monotone(_seed):
    r = np.logspace(-2, 2, 17)
    psi = bd.psi_s(yf.power(4.0), 1, 0.5, r)
    return bool(np.all(np.diff(psi) >= -1e-12 * psi[1:])), {}


def _bound_scaling(_seed):
    f, n, s, p = yf.power(4.0), 1, 0.75, 4.0
    r = np.array([0.5, 1.0, 2.0])
    thm1 = [bd.bound_thm1(f, n, s, x, 1.0).value for x in r]
    thm4 = [bd.bound_inradius_delta2(yf.power(2.0), 2, 0.4, x, 1.0).value for x in r]
    s1 = np.polyfit(np.log(r), np.log(thm1), 1)[0]
    s4 = np.polyfit(np.log(r), np.log(thm4), 1)[0]
    ok = abs(s1 - (n - s * p)) <= 1e-9 and abs(s4 + 0.8) <= 1e-9
    return ok, {"thm1_slope": round(float(s1), 9), "thm4_slope": round(float(s4), 9)}


def _bound_calibration(_seed):
    f = yf.power(4.0)
    a = bd.bound_thm1(f, 1, 0.75, 0.5, 1.0, C=1.0).value
    b = bd.bound_thm1(f, 1, 0.75, 0.5, 1.0, C=3.0).value
    c = bd.bound_thm2_inverse(f, 1, 0.75, 0.5, 1.0, 2.0, C=1.0).value
    d = bd.bound_thm2_inverse(f, 1, 0.75, 0.5, 1.0, 2.0, C=3.0).value
    w = bd.bound_thm1(f, 1, 0.75, 0.5, 2.0, C=1.0).value
    ok = (abs(b - 3 * a) <= 1e-12 * b and d < c and w <= a
          and abs(a - c) <= 1e-8 * a)
    return ok, {}


# -- domain ------------------------------------------------------------------

def _domains(h):
    L = np.ones((16, 16), dtype=bool)
    L[8:, 8:] = False
    return {
        "interval": dm.build_domain({"type": "interval", "a": 0.0, "b": 1.0}, h),
        "rectangle": dm.build_domain({"type": "rectangle", "lo": [0, 0], "hi": [1, 0.5]}, h),
        "disc": dm.build_domain({"type": "disc", "center": [0, 0], "radius": 1.0}, h),
        "L": dm.from_mask(L, h),
    }


def _domain_invariants(_seed):
    bad = []
    for k, d in _domains(1 / 16).items():
        if not (d.r_Omega <= d.d_Omega / 2 + d.h and d.measure > 0
                and np.all(d.delta > 0) and d.r_Omega == float(d.delta.max())):
            bad.append(k)
        brute = dm.boundary_distance(d.index, d.h, "brute")
        edt = dm.boundary_distance(d.index, d.h, "edt")
        if np.max(np.abs(brute - edt)) > d.h:
            bad.append(k + ":distance")
    return not bad, bad


def _refinement(_seed):
    bad = []
    coarse, fine = _domains(1 / 16), _domains(1 / 32)
    for k in ("interval", "rectangle", "disc"):
        a, b = coarse[k], fine[k]
        if abs(a.r_Omega - b.r_Omega) > 2 * a.h or abs(a.d_Omega - b.d_Omega) > 2 * a.h:
            bad.append(k)
    return not bad, bad


def _subdomain(_seed):
    big = dm.build_domain({"type": "disc", "center": [0, 0], "radius": 1.0}, 1 / 16)
    small = dm.build_domain({"type": "disc", "center": [0.2, 0], "radius": 0.5}, 1 / 16)
    return small.r_Omega <= big.r_Omega and small.d_Omega <= big.d_Omega, {}


# -- spectral ----------------------------------------------------------------

def _interval(h=1 / 32):
    return dm.build_domain({"type": "interval", "a": 0.0, "b": 1.0}, h)


def _quadratic_oracle(seed):
    dom = _interval()
    lam, _ = sp.quadratic_eigen(dom, 0.5)
    r = sp.minimize_critical_value(dom, yf.power(2.0), None, 1.0, 0.5,
                                   sp.SolverOptions(seed=seed, starts=("random",)))
    rel = abs(r.lam / lam - 1)
    return rel <= 0.01 and abs(r.Lambda / r.lam - 1) <= 1e-8, {"rel": rel <= 0.01}


def _homogeneity(seed):
    dom = _interval()
    lams = [sp.minimize_critical_value(dom, yf.power(3.0), None, a, 0.5,
                                       sp.SolverOptions(seed=seed)).lam for a in (0.1, 1.0, 10.0)]
    spread = max(lams) / min(lams) - 1
    return spread <= 0.02, {"spread_ok": spread <= 0.02}


def _energy_monotone(seed):
    curve = sp.alpha_energy(_interval(), yf.p_q(2.0, 3.0), None, 0.5, [0.25, 1.0, 4.0],
                            sp.SolverOptions(seed=seed))
    return not curve.nonmonotone, {"nonmonotone": curve.nonmonotone}


def _lambda_sandwich(seed):
    ok = True
    out = {}
    dom = _interval()
    for k, f in _delta2_catalog().items():
        pA = yf.classify_doubling(f).pA_plus
        r = sp.minimize_critical_value(dom, f, None, 1.0, 0.5, sp.SolverOptions(seed=seed))
        good = r.lam / pA * 0.99 <= r.Lambda <= pA * r.lam * 1.01
        ok &= good
        out[k] = good
    return ok, out


def _descent_and_constraint(seed):
    r = sp.minimize_critical_value(_interval(), yf.p_q(2.0, 3.0), None, 2.0, 0.5,
                                   sp.SolverOptions(seed=seed, starts=("random",)))
    hist = np.array(r.history)
    mono = bool(np.all(np.diff(hist) <= 0))
    return mono and r.constraint_residual <= 1e-8 * r.alpha and r.converged, {
        "monotone": mono, "residual_ok": r.constraint_residual <= 1e-8 * r.alpha}


SUITES: dict[str, dict[str, Callable]] = {
    "young": {
        "invariants": _young_invariants,
        "doubling_consistency": _doubling_consistency,
        "duality_sandwich": _sandwich,
        "inverse_roundtrip": _inverse_roundtrip,
        "biconjugation": _biconjugation,
        "delta2_power_sandwich": _power_sandwich_delta2,
    },
    "matuszewska": {
        "profile_invariants": _profile_invariants,
        "closed_vs_numeric": _closed_vs_numeric,
        "power_bounds": _power_bounds_M,
        "non_doubling": _non_doubling_M,
        "power_type": _power_type_M,
    },
    "bounds": {
        "psi_monotone": _psi_monotone,
        "power_scaling": _bound_scaling,
        "calibration_monotonicity": _bound_calibration,
    },
    "domain": {
        "invariants": _domain_invariants,
        "refinement": _refinement,
        "subdomain": _subdomain,
    },
    "spectral": {
        "quadratic_oracle": _quadratic_oracle,
        "homogeneity": _homogeneity,
        "energy_monotone": _energy_monotone,
        "lambda_sandwich": _lambda_sandwich,
        "descent_and_constraint": _descent_and_constraint,
    },
}


def run_suite(name: str, seed: int = 0) -> dict:
    out = {}
    for check, fn in SUITES[name].items():
        try:
            passed, detail = fn(seed)
            out[check] = {"passed": bool(passed), "detail": detail}
        except Exception as exc:  # recorded, not raised
            out[check] = {"passed": False, "detail": f"{type(exc).__name__}: {exc}"}
    return out


def run_all(seed: int = 0, suites=None) -> dict:
    names = list(SUITES) if suites is None else list(suites)
    results = {name: run_suite(name, seed) for name in names}
    passed = all(c["passed"] for r in results.values() for c in r.values())
    return {"seed": seed, "suites": results, "passed": passed}
