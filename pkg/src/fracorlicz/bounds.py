"""The Young function E built from the conjugate, the Morrey modulus Psi_s,
growth-condition classification and the geometric lower bounds.

Every theorem's constant is unknown in closed form and enters as a
user-supplied calibration ``C`` (default 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, interpolate

from .errors import (ConditionViolatedError, IntervalUnboundedError,
                     TailInconclusiveError)
from .matuszewska import matuszewska_index, matuszewska_sup
from .young import (YoungFunction, classify_doubling, conjugate, inverse)

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"

# log10 windows for integrand tail exponents, expanding away from 1
_WINDOWS_INF = ((3.0, 6.0), (6.0, 12.0), (12.0, 24.0))
_WINDOWS_ZERO = ((-6.0, -3.0), (-12.0, -6.0), (-24.0, -12.0))
_K_WINDOWS_INF = ((2.0, 4.0), (4.0, 6.0))
_K_WINDOWS_ZERO = ((-4.0, -2.0), (-6.0, -4.0))

# tabulated E: Gauss-Legendre panels in log tau
E_TABLE_DECADES = (-30.0, 30.0)
E_TOP = 1e36
E_PANELS_PER_DECADE = 10
E_GAUSS_NODES = 8
E_SPLINE_PER_DECADE = 40


def _m(n, s):
    _check_ns(n, s)
    return n / (n - s)


def _check_ns(n, s):
    if not (0 < s < 1):
        raise ValueError("s must lie in (0, 1)")
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")


# -- growth conditions -------------------------------------------------------

@dataclass
class GrowthConditions:
    cond1: str
    cond2: str
    cond3: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"cond1": self.cond1, "cond2": self.cond2, "cond3": self.cond3,
                "evidence": _jsonable(self.evidence)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        return ("inf" if v > 0 else "-inf") if math.isinf(v) else v
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _log_integrand(f, n, s, logt):
    """log of ``(t/A(t))^{s/(n-s)}``."""
    e = s / (n - s)
    t = np.exp(logt)
    return e * (logt - f.log_A(t))


def _window_fit(f, n, s, lo, hi, points=25):
    """Slope of the log integrand and the partial integral on a window."""
    logt = np.linspace(lo, hi, points) * math.log(10.0)
    lg = _log_integrand(f, n, s, logt)
    if np.all(np.isneginf(lg)):
        return -math.inf, 0.0
    fin = np.isfinite(lg)
    if np.count_nonzero(fin) < 3:
        return (-math.inf if np.any(np.isneginf(lg)) else math.inf), math.nan
    slope = float(np.polyfit(logt[fin], lg[fin], 1)[0])
    if not np.all(fin) and np.any(np.isneginf(lg)):
        slope = -math.inf
    # partial integral in the log variable: int g(t) t dlog t
    with np.errstate(over="ignore", under="ignore"):
        vals = np.exp(np.where(fin, lg + logt, -np.inf))
    partial = float(integrate.trapezoid(vals, logt))
    return slope, partial


def _limit_slope(slopes):
    """Extrapolated limit of the window slopes.

    When the slope changes shrink geometrically (log corrections), the limit
    is estimated by Aitken's correction; otherwise the last slope is used.
    """
    b1, b2, b3 = slopes
    if not all(math.isfinite(b) for b in slopes):
        return b3
    d1, d2 = b2 - b1, b3 - b2
    if d1 != 0 and d1 * d2 > 0:
        q = d2 / d1
        if q < 0.9:
            return b3 + d2 * q / (1.0 - q)
    return b3


def _classify_infinity(slopes):
    """``int^inf t^b dt`` converges iff ``b < -1``."""
    lim = _limit_slope(slopes)
    if slopes[1] < -1.05 and slopes[2] < -1.05 and lim < -1.05:
        return HOLDS
    if lim >= -1.02 and (abs(slopes[2] - slopes[1]) <= 0.1
                         or slopes[0] <= slopes[1] <= slopes[2]):
        return FAILS
    return INCONCLUSIVE


def _classify_zero(slopes):
    """``int_0 t^b dt`` converges iff ``b > -1``."""
    lim = _limit_slope(slopes)
    if slopes[1] > -0.95 and slopes[2] > -0.95 and lim > -0.95:
        return HOLDS
    if lim <= -0.98 and (abs(slopes[2] - slopes[1]) <= 0.1
                         or slopes[0] >= slopes[1] >= slopes[2]):
        return FAILS
    return INCONCLUSIVE


def _integral_status(f, n, s, end):
    windows = _WINDOWS_INF if end == "infinity" else _WINDOWS_ZERO
    fits = [_window_fit(f, n, s, lo, hi) for lo, hi in windows]
    slopes = [b for b, _ in fits]
    status = (_classify_infinity if end == "infinity" else _classify_zero)(slopes)
    return status, {"slopes": slopes, "limit_slope": _limit_slope(slopes),
                    "partial_sums": [p for _, p in fits]}


def _k_slope(f, k_lo, k_hi, power):
    ks = np.logspace(k_lo, k_hi, 9)
    M = np.array([matuszewska_sup(f, k) for k in ks])
    if np.any(np.isinf(M)):
        return math.inf
    if np.any(M <= 0):
        return -math.inf
    return float(np.polyfit(np.log(ks), np.log(M) - power * np.log(ks), 1)[0])


def _cond3(f, n, s):
    """Both ``M(k)/k^{n/s} -> 0`` (k -> inf) and ``M(k)/k^{1/s} -> 0`` (k -> 0)."""
    inf_slopes = [_k_slope(f, lo, hi, n / s) for lo, hi in _K_WINDOWS_INF]
    zero_slopes = [_k_slope(f, lo, hi, 1.0 / s) for lo, hi in _K_WINDOWS_ZERO]
    # ratio ~ k^b: tends to 0 at infinity iff b < 0, at zero iff b > 0
    if all(b < -0.05 for b in inf_slopes):
        at_inf = HOLDS
    elif inf_slopes[-1] >= -0.01:
        at_inf = FAILS
    else:
        at_inf = INCONCLUSIVE
    if all(b > 0.05 for b in zero_slopes):
        at_zero = HOLDS
    elif zero_slopes[-1] <= 0.01:
        at_zero = FAILS
    else:
        at_zero = INCONCLUSIVE
    status = _combine_and(at_inf, at_zero)
    return status, {"k_inf_slopes": inf_slopes, "k_zero_slopes": zero_slopes,
                    "k_inf": at_inf, "k_zero": at_zero}


def _combine_and(a, b):
    if FAILS in (a, b):
        return FAILS
    if a == b == HOLDS:
        return HOLDS
    return INCONCLUSIVE


def _cond1_status(f, n, s):
    return _integral_status(f, n, s, "infinity")


def check_conditions(f: YoungFunction, n: int, s: float) -> GrowthConditions:
    """Classify the three integral growth conditions as holds/fails/inconclusive."""
    _check_ns(n, s)
    inf_status, inf_ev = _integral_status(f, n, s, "infinity")
    zero_status, zero_ev = _integral_status(f, n, s, "zero")
    # cond2: divergence at infinity and convergence at zero
    diverges = {HOLDS: FAILS, FAILS: HOLDS, INCONCLUSIVE: INCONCLUSIVE}[inf_status]
    cond2 = _combine_and(diverges, zero_status)
    cond3, k_ev = _cond3(f, n, s)
    return GrowthConditions(
        cond1=inf_status, cond2=cond2, cond3=cond3,
        evidence={"integral_at_infinity": inf_ev, "integral_at_zero": zero_ev,
                  "cond3": k_ev},
    )


def _require_cond1(f, n, s):
    status, ev = _cond1_status(f, n, s)
    if status == FAILS:
        raise ConditionViolatedError("E undefined: condition (cond1) violated")
    if status == INCONCLUSIVE:
        raise TailInconclusiveError(f"tail inconclusive: slopes {ev['slopes']}")


# -- the function E ----------------------------------------------------------

def _tail(conj, m, T):
    """``T^m int_T^inf conj(tau) tau^{-1-m} dtau`` from the local power law at T."""
    beta = float(conj.elasticity(T))
    beta_lo = float(conj.elasticity(T / 100.0))
    if not (math.isfinite(beta) and math.isfinite(beta_lo)) or abs(beta - beta_lo) > 0.1:
        raise TailInconclusiveError(f"tail inconclusive at T={T:g}")
    if m - beta < 0.02:
        raise TailInconclusiveError(
            f"tail inconclusive: conjugate exponent {beta:.4g} >= {m:.4g}")
    return float(conj.A(T)) / (m - beta)


def E_function(f: YoungFunction, n: int, s: float, t: float) -> float:
    """``E(t) = t^m int_t^inf Ã(tau) tau^{-1-m} dtau`` with ``m = n/(n-s)``.

    Adaptive quadrature in ``log tau`` up to ``T* = max(1e6 t, 1e8)``, then a
    power-law tail taken from the local exponent of ``Ã`` at ``T*``.
    """
    m = _m(n, s)
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    _require_cond1(f, n, s)
    conj = conjugate(f)
    T = max(t * 1e6, 1e8)
    lt = math.log(t)

    def g(u):
        return float(conj.A(math.exp(u))) * math.exp(m * (lt - u))

    body, _ = integrate.quad(g, lt, math.log(T), limit=400, epsabs=0.0, epsrel=1e-11)
    return body + (t / T) ** m * _tail(conj, m, T)


class _ETable:
    """Tabulated E on Gauss-Legendre panels in ``log tau``."""

    def __init__(self, f, n, s):
        self.m = m = _m(n, s)
        self.conj = conj = conjugate(f)
        lo, hi = E_TABLE_DECADES
        top = math.log10(E_TOP)
        edges = np.linspace(lo, top, int(round((top - lo) * E_PANELS_PER_DECADE)) + 1)
        self.u = edges * math.log(10.0)
        x, w = np.polynomial.legendre.leggauss(E_GAUSS_NODES)
        self._x, self._w = x, w
        a, b = self.u[:-1], self.u[1:]
        nodes = (0.5 * (b - a))[:, None] * x[None, :] + (0.5 * (a + b))[:, None]
        # integrals are scaled by exp(m * edge) so they stay in range
        vals = self._g(nodes, a[:, None])
        J = 0.5 * (b - a) * (vals @ w)
        tail = _tail(conj, m, E_TOP)
        # I_k = exp(m u_k) * int_{u_k}^inf, accumulated from the top
        I = np.empty(self.u.size)
        I[-1] = tail
        for k in range(self.u.size - 2, -1, -1):
            I[k] = J[k] + math.exp(-m * (self.u[k + 1] - self.u[k])) * I[k + 1]
        self.I = I
        self.n_table = int(np.searchsorted(edges, hi)) + 1
        self.lo, self.hi = lo * math.log(10.0), hi * math.log(10.0)
        self._build_spline()

    def _g(self, u, ref):
        return self.conj.A(np.exp(u)) * np.exp(self.m * (ref - u))

    def E_inside(self, logt):
        """``E(t)`` for ``log t`` inside the table range."""
        k = np.clip(np.searchsorted(self.u, logt, side="right"), 1, self.u.size - 1)
        ub = self.u[k]
        x, w = self._x, self._w
        half = 0.5 * (ub - logt)
        nodes = half[:, None] * x[None, :] + (0.5 * (ub + logt))[:, None]
        part = half * (self._g(nodes, logt[:, None]) @ w)
        return part + np.exp(-self.m * (ub - logt)) * self.I[k]

    def _build_spline(self):
        grid = np.linspace(self.lo, self.hi,
                           int(round((self.hi - self.lo) / math.log(10.0) * E_SPLINE_PER_DECADE)) + 1)
        self._spline = interpolate.CubicSpline(grid, np.log(self.E_inside(grid)))
        self._dspline = self._spline.derivative()
        # elasticity t E'(t)/E(t) = m - Ã(t)/E(t) at the table edges
        self._edge = {}
        for which, lt in (("lo", self.lo), ("hi", self.hi)):
            lE = float(self._spline(lt))
            eta = self.m - float(self.conj.A(math.exp(lt))) / math.exp(lE)
            self._edge[which] = (lt, lE, eta)

    def log_E(self, t):
        t = np.asarray(t, dtype=float)
        logt = np.log(t).ravel()
        out = np.empty_like(logt)
        inside = (logt >= self.lo) & (logt <= self.hi)
        out[inside] = self._spline(logt[inside])
        for which, mask in (("lo", logt < self.lo), ("hi", logt > self.hi)):
            if np.any(mask):
                # power-law continuation beyond the table
                edge, lE, eta = self._edge[which]
                out[mask] = lE + eta * (logt[mask] - edge)
        return out.reshape(t.shape)

    def e(self, t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        tp = np.where(pos, t, 1.0)
        logt = np.log(tp)
        eta = np.where(logt < self.lo, self._edge["lo"][2],
                       np.where(logt > self.hi, self._edge["hi"][2],
                                self._dspline(np.clip(logt, self.lo, self.hi))))
        d = np.exp(self.log_E(tp)) * eta / tp
        return np.where(pos, np.maximum(d, 0.0), 0.0)


_E_CACHE: dict = {}


def E_young(f: YoungFunction, n: int, s: float) -> YoungFunction:
    """E as a :class:`YoungFunction` (tabulated; inverse by bisection)."""
    key = (id(f), int(n), float(s))
    hit = _E_CACHE.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    _require_cond1(f, n, s)
    table = _ETable(f, n, s)
    E = YoungFunction(
        kind="E",
        params={"n": int(n), "s": float(s)},
        log_A_fn=table.log_E,
        a_fn=table.e,
    )
    if len(_E_CACHE) > 32:
        _E_CACHE.clear()
    _E_CACHE[key] = (f, E)
    return E


def psi_s(f: YoungFunction, n: int, s: float, r, form: str = "E"):
    """Morrey modulus ``Psi_s(r) = 1/(r^{n-s} E^{-1}(r^{-n}))``.

    ``form='B'`` gives the equivalent ``r^s B^{-1}(r^{-n})`` with ``B = Ẽ``.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValueError("r must be positive")
    E = E_young(f, n, s)
    y = r_arr ** (-float(n))
    if form == "E":
        out = 1.0 / (r_arr ** (n - s) * inverse(E, y))
    elif form == "B":
        B = conjugate(E, numeric=True)
        out = r_arr ** s * inverse(B, y)
    else:
        raise ValueError("form must be 'E' or 'B'")
    return float(out) if np.ndim(out) == 0 else out


# -- bound reports -----------------------------------------------------------

@dataclass
class BoundReport:
    theorem: str
    value: float
    calibration_C: float
    applicable: bool
    reasons: list = field(default_factory=list)
    inputs_echo: dict = field(default_factory=dict)

    def to_dict(self):
        return {"theorem": self.theorem, "value": _jsonable(float(self.value)),
                "calibration_C": self.calibration_C, "applicable": self.applicable,
                "reasons": list(self.reasons), "inputs_echo": _jsonable(self.inputs_echo)}


def _positive(name, v):
    if not (v > 0 and math.isfinite(v)):
        raise ValueError(f"{name} must be positive and finite")


def _index_reasons(f, n, s, regime):
    reasons = []
    if regime in ("below_alpha0", None):
        i0 = matuszewska_index(f, "zero")
        if not i0 > n / s:
            reasons.append(f"index condition: i0(A)={i0:g} <= n/s={n / s:g}")
    if regime in ("above_alpha0", None):
        iinf = matuszewska_index(f, "infinity")
        if not iinf > n / s:
            reasons.append(f"index condition: iinf(A)={iinf:g} <= n/s={n / s:g}")
    return reasons


def _cond_reason(name, status):
    return [] if status == HOLDS else [f"growth condition {name} {status}"]


def _report(theorem, value, C, reasons, echo):
    if not math.isfinite(value):
        reasons = reasons + ["Matuszewska function infinite at the probe"]
        value = 0.0
    return BoundReport(theorem=theorem, value=float(value), calibration_C=float(C),
                       applicable=not reasons, reasons=reasons, inputs_echo=echo)


def _M_or_inf(f, t):
    return matuszewska_sup(f, t)


def bound_thm1(f: YoungFunction, n: int, s: float, r_Omega: float, omega_L1: float,
               alpha_regime: str = "above_alpha0", C: float = 1.0) -> BoundReport:
    """``C r^n / (|omega|_1 M(r^s))``, the inradius bound under condition cond1."""
    _check_ns(n, s)
    _positive("r_Omega", r_Omega)
    _positive("omega_L1", omega_L1)
    _positive("C", C)
    if alpha_regime not in ("below_alpha0", "above_alpha0"):
        raise ValueError("alpha_regime must be 'below_alpha0' or 'above_alpha0'")
    reasons = _cond_reason("cond1", _cond1_status(f, n, s)[0])
    reasons += _index_reasons(f, n, s, alpha_regime)
    M = _M_or_inf(f, r_Omega ** s)
    value = C * r_Omega ** n / (omega_L1 * M) if math.isfinite(M) else math.inf
    echo = {"n": n, "s": s, "r_Omega": r_Omega, "omega_L1": omega_L1,
            "alpha_regime": alpha_regime}
    return _report("thm1", value, C, reasons, echo)


def bound_thm2_inverse(f: YoungFunction, n: int, s: float, r_Omega: float,
                       omega_L1: float, alpha: float, C: float = 1.0,
                       alpha_regime: str | None = None) -> BoundReport:
    """``(r^n/alpha) A(A^{-1}(alpha/|omega|_1) / (C r^s))``.

    With ``alpha_regime=None`` both index conditions are required.
    """
    _check_ns(n, s)
    for name, v in (("r_Omega", r_Omega), ("omega_L1", omega_L1), ("alpha", alpha), ("C", C)):
        _positive(name, v)
    reasons = _cond_reason("cond1", _cond1_status(f, n, s)[0])
    reasons += _index_reasons(f, n, s, alpha_regime)
    x = float(inverse(f, alpha / omega_L1)) / (C * r_Omega ** s)
    value = r_Omega ** n / alpha * float(f.A(x))
    echo = {"n": n, "s": s, "r_Omega": r_Omega, "omega_L1": omega_L1, "alpha": alpha,
            "alpha_regime": alpha_regime}
    return _report("thm2_inverse", value, C, reasons, echo)


def _delta2_reasons(f):
    cls = classify_doubling(f)
    return [] if cls.delta2_global else ["doubling condition: A not in Delta2"]


def bound_diameter(f: YoungFunction, n: int, s: float, d_Omega: float,
                   omega_Linf: float, C: float = 1.0) -> BoundReport:
    """``C / (|omega|_inf M(d^s))`` for domains containing the origin."""
    _check_ns(n, s)
    _positive("d_Omega", d_Omega)
    _positive("omega_Linf", omega_Linf)
    _positive("C", C)
    reasons = []
    i = matuszewska_index(f, "global")
    if not i < n / s:
        reasons.append(f"index condition: i(A)={i:g} >= n/s={n / s:g}")
    reasons += _delta2_reasons(f)
    inf_status, _ = _integral_status(f, n, s, "infinity")
    zero_status, _ = _integral_status(f, n, s, "zero")
    diverges = {HOLDS: FAILS, FAILS: HOLDS, INCONCLUSIVE: INCONCLUSIVE}[inf_status]
    reasons += _cond_reason("cond2", _combine_and(diverges, zero_status))
    M = _M_or_inf(f, d_Omega ** s)
    value = C / (omega_Linf * M) if math.isfinite(M) else math.inf
    echo = {"n": n, "s": s, "d_Omega": d_Omega, "omega_Linf": omega_Linf}
    return _report("thm2_diameter", value, C, reasons, echo)


def bound_inradius_delta2(f: YoungFunction, n: int, s: float, r_Omega: float,
                          omega_Linf: float, C: float = 1.0) -> BoundReport:
    """``C / (|omega|_inf M(r^s))`` for doubling A on Lipschitz domains."""
    _check_ns(n, s)
    _positive("r_Omega", r_Omega)
    _positive("omega_Linf", omega_Linf)
    _positive("C", C)
    reasons = _delta2_reasons(f)
    status, _ = _cond3(f, n, s)
    reasons += _cond_reason("cond3", status)
    M = _M_or_inf(f, r_Omega ** s)
    value = C / (omega_Linf * M) if math.isfinite(M) else math.inf
    echo = {"n": n, "s": s, "r_Omega": r_Omega, "omega_Linf": omega_Linf}
    return _report("thm4_inradius", value, C, reasons, echo)


def eigenvalue_interval(lam: float, pA: float) -> tuple:
    """``[lam/pA, pA lam]``, the admissible range for the Lagrange eigenvalue."""
    if not math.isfinite(pA):
        raise IntervalUnboundedError("interval unbounded: A not in Delta2")
    if pA < 1:
        raise ValueError("pA must be >= 1")
    return (lam / pA, pA * lam)


def rescale_by_pA(report: BoundReport, pA: float) -> BoundReport:
    """Lower bound for the Lagrange eigenvalue derived from a critical-value bound."""
    if not math.isfinite(pA):
        raise IntervalUnboundedError("interval unbounded: A not in Delta2")
    return replace(report, theorem=report.theorem + "_eigenvalue",
                   value=report.value / pA,
                   inputs_echo={**report.inputs_echo, "pA": pA})


def calibrate(report: BoundReport, target: float, slack: float = 1e-6) -> float:
    """Largest C (scaled by ``1 - slack``) for which ``report`` does not exceed ``target``.

    Valid for the bounds linear in C.
    """
    if report.value <= 0:
        raise ValueError("cannot calibrate a zero bound")
    return report.calibration_C * target / report.value * (1.0 - slack)
