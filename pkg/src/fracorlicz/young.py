"""Young functions: evaluation, inversion, conjugation and doubling classes.

A :class:`YoungFunction` bundles the pair ``(A, a = A')`` together with a
log-space evaluator, so that exponential kinds can be handled far beyond the
double precision range.  Values returned by :meth:`YoungFunction.A` saturate
at :data:`SATURATION` instead of overflowing to ``inf``.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from .errors import (
    ConfigError,
    ConjugateInfiniteError,
    OrliczError,
    DegenerateYoungError,
    InverseBracketError,
    SaturationError,
)

SATURATION = 1e300
LOG_SATURATION = math.log(SATURATION)
RTOL = 1e-10
MAX_ITER = 200

# conjugate grid: 400 points per decade over [1e-10, 1e10]
CONJ_PER_DECADE = 400
CONJ_LO, CONJ_HI = 1e-10, 1e10
CONJ_CAP = 1e150

DIVERGENCE_THRESHOLD = 1e3

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _finish(values, scalar):
    if scalar:
        return float(values)
    return values


def _saturate(raw):
    raw = np.where(np.isnan(raw), np.inf, raw) if np.any(np.isnan(raw)) else raw
    return np.minimum(raw, SATURATION)


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """An evaluable Young function ``A`` with left derivative ``a``.

    ``log_A`` is the primary evaluator; ``A`` is recovered from it unless a
    direct evaluator is supplied (needed where ``exp(log A)`` loses digits).
    ``closed_forms`` carries the analytic Matuszewska data and doubling class
    of catalog kinds.
    """

    kind: str
    params: dict
    log_A_fn: Callable[[np.ndarray], np.ndarray]
    a_fn: Callable[[np.ndarray], np.ndarray]
    A_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    log_a_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    inverse_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    conjugate_fn: Optional[Callable[[], "YoungFunction"]] = None
    closed_forms: dict = field(default_factory=dict)
    log_a_over_A_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def log_A(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.where(t > 0, self.log_A_fn(np.where(t > 0, t, 1.0)), -np.inf)
        return _finish(out, scalar)

    def A(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.A_fn is not None:
                raw = self.A_fn(t)
            else:
                raw = np.exp(self.log_A(t))
        return _finish(_saturate(np.asarray(raw, dtype=float)), scalar)

    def a(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            raw = np.asarray(self.a_fn(t), dtype=float)
        return _finish(_saturate(raw), scalar)

    def log_a(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.log_a_fn is not None:
                out = self.log_a_fn(t)
            else:
                out = np.log(self.a_fn(t))
        return _finish(np.asarray(out, dtype=float), scalar)

    def elasticity(self, t):
        """``t a(t) / A(t)``, evaluated in log space."""
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.log_a_over_A_fn is not None:
                d = self.log_a_over_A_fn(t)
            else:
                d = self.log_a(t) - self.log_A(t)
            out = np.exp(np.log(t) + d)
        return _finish(out, scalar)

    def saturated(self, t):
        return np.asarray(self.log_A(t)) >= LOG_SATURATION

    def __call__(self, t):
        return self.A(t)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items()
                         if not isinstance(v, (list, np.ndarray)))
        return f"YoungFunction({self.kind}{', ' if args else ''}{args})"


# ---------------------------------------------------------------------------
# catalog

def _step_M(low):
    """Matuszewska closed form ``low(t)`` on (0,1], ``inf`` beyond 1."""
    def M(t):
        return low(t) if t <= 1 else math.inf
    return M


def _zero_one_inf(t):
    if t < 1:
        return 0.0
    return 1.0 if t == 1 else math.inf


def power(p: float, c: float = 1.0) -> YoungFunction:
    """``A(t) = c t^p`` with ``p >= 1``."""
    if not p >= 1 or not c > 0:
        raise ValueError("power kind needs p >= 1 and c > 0")
    p, c = float(p), float(c)
    logc = math.log(c)

    def conj():
        if p == 1:
            raise ConjugateInfiniteError([c])
        q = p / (p - 1.0)
        return power(q, (p - 1.0) * c * (c * p) ** (-q))

    return YoungFunction(
        kind="power",
        params={"p": p, "c": c},
        log_A_fn=lambda t: logc + p * np.log(t),
        A_fn=lambda t: c * t ** p,
        a_fn=lambda t: c * p * t ** (p - 1.0),
        log_a_fn=lambda t: math.log(c * p) + (p - 1.0) * np.log(t),
        inverse_fn=lambda y: (y / c) ** (1.0 / p),
        conjugate_fn=conj,
        closed_forms={
            "M": lambda t: t ** p, "M0": lambda t: t ** p, "Minf": lambda t: t ** p,
            "i": p, "i0": p, "iinf": p,
            "delta2": (True, True),
            "pA": (p, p),
        },
    )


def p_q(p: float, q: float) -> YoungFunction:
    """``A(t) = t^p/p + t^q/q`` with ``1 < p < q``."""
    if not 1 < p < q:
        raise ValueError("p_q kind needs 1 < p < q")
    p, q = float(p), float(q)

    def log_A(t):
        lt = np.log(t)
        return np.logaddexp(p * lt - math.log(p), q * lt - math.log(q))

    def log_a(t):
        lt = np.log(t)
        return np.logaddexp((p - 1) * lt, (q - 1) * lt)

    return YoungFunction(
        kind="p_q",
        params={"p": p, "q": q},
        log_A_fn=log_A,
        A_fn=lambda t: t ** p / p + t ** q / q,
        a_fn=lambda t: t ** (p - 1) + t ** (q - 1),
        log_a_fn=log_a,
        closed_forms={
            "M": lambda t: max(t ** p, t ** q), "M0": lambda t: t ** p,
            "Minf": lambda t: t ** q,
            "i": q, "i0": p, "iinf": q,
            "delta2": (True, True),
            "pA": (p, q),
        },
    )


def p_log(p: float, q: float, r: float) -> YoungFunction:
    """``A(t) = t^p log^r(1 + t^q)``."""
    if not (p >= 1 and q > 0 and r >= 0):
        raise ValueError("p_log kind needs p >= 1, q > 0, r >= 0")
    p, q, r = float(p), float(q), float(r)

    def log_L(t):
        # log(log(1 + t^q)) without overflow
        big = t > 1
        ts = np.where(big, t, 1.0)
        tm = np.where(big, 1.0, t)
        L = np.where(big, q * np.log(ts) + np.log1p(ts ** -q), np.log1p(tm ** q))
        return np.log(L), L

    def log_A(t):
        lL, _ = log_L(t)
        return p * np.log(t) + r * lL

    def a(t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        tp = np.where(pos, t, 1.0)
        lL, L = log_L(tp)
        frac = np.where(tp > 1, 1.0 / (1.0 + tp ** -q), tp ** q / (1.0 + tp ** q))
        term1 = p * tp ** (p - 1) * np.exp(r * lL)
        term2 = r * q * tp ** (p - 1) * np.exp((r - 1) * lL) * frac
        return np.where(pos, term1 + term2, 0.0)

    def log_a(t):
        lL, L = log_L(t)
        frac = np.where(t > 1, 1.0 / (1.0 + t ** -q), t ** q / (1.0 + t ** q))
        return (p - 1) * np.log(t) + r * lL + np.log(p + r * q * frac / L)

    s = p + q * r
    return YoungFunction(
        kind="p_log",
        params={"p": p, "q": q, "r": r},
        log_A_fn=log_A,
        a_fn=a,
        log_a_fn=log_a,
        closed_forms={
            "M": lambda t: max(t ** p, t ** s), "M0": lambda t: t ** s,
            "Minf": lambda t: t ** p,
            "i": s, "i0": s, "iinf": p,
            "delta2": (True, True),
            "pA": (p, s),
        },
    )


def exp_taylor(k: int) -> YoungFunction:
    """``A(t) = e^t - sum_{j<k} t^j/j!`` (exponential minus its Taylor head)."""
    k = int(k)
    if k < 1:
        raise ValueError("exp_taylor kind needs k >= 1")
    lgk = special.gammaln(k + 1)

    def _log_tail(t, order):
        # log(e^t - sum_{j<order} t^j/j!) = t + log P(order, t)
        if order == 0:
            return t
        with np.errstate(divide="ignore"):
            g = special.gammainc(order, t)
            out = t + np.log(g)
        small = ~(g > 1e-290)
        if np.any(small):
            ts = t[small]
            series = (order * np.log(ts) - special.gammaln(order + 1)
                      + np.log1p(ts / (order + 1) * (1 + ts / (order + 2))))
            out = np.where(small, 0.0, out)
            out[small] = series
        return out

    def log_A(t):
        t = np.atleast_1d(t)
        return _log_tail(t, k)

    def A(t):
        t = np.asarray(t, dtype=float)
        return np.exp(t) * special.gammainc(k, t)

    def a(t):
        t = np.asarray(t, dtype=float)
        if k == 1:
            return np.exp(t)
        return np.exp(t) * special.gammainc(k - 1, t)

    def log_a(t):
        t = np.atleast_1d(t)
        return _log_tail(t, k - 1)

    inv = (lambda y: np.log1p(y)) if k == 1 else None
    return YoungFunction(
        kind="exp_taylor",
        params={"k": k},
        log_A_fn=lambda t: log_A(t).reshape(np.shape(t)),
        A_fn=A,
        a_fn=a,
        log_a_fn=lambda t: log_a(t).reshape(np.shape(t)),
        inverse_fn=inv,
        closed_forms={
            "M": _step_M(lambda t: t ** k), "M0": lambda t: float(t) ** k,
            "Minf": _zero_one_inf,
            "i": math.inf, "i0": float(k), "iinf": math.inf,
            "delta2": (True, False),
            "_lgk": lgk,
        },
    )


def double_exp() -> YoungFunction:
    """``A(t) = exp(exp(t)) - e``."""

    def log_A(t):
        u = np.expm1(t)
        with np.errstate(over="ignore"):
            em = np.expm1(np.minimum(u, 700.0))
        return 1.0 + np.where(u > 700.0, u + np.log1p(-np.exp(-np.maximum(u, 700.0))),
                              np.log(em))

    def a(t):
        return np.exp(t + np.exp(t))

    def log_ratio(t):
        # log a - log A = t + e^t - 1 - log(expm1(e^t - 1)), cancellation-free
        u = np.expm1(t)
        big = u > 30.0
        um = np.where(big, 1.0, u)
        small = t + np.exp(t) - 1.0 - np.log(np.expm1(um))
        return np.where(big, t - np.log1p(-np.exp(-np.where(big, u, 30.0))), small)

    return YoungFunction(
        kind="double_exp",
        params={},
        log_A_fn=log_A,
        A_fn=lambda t: math.e * np.expm1(np.expm1(t)),
        a_fn=a,
        log_a_fn=lambda t: t + np.exp(t),
        log_a_over_A_fn=log_ratio,
        inverse_fn=lambda y: np.log1p(np.log1p(y / math.e)),
        closed_forms={
            "M": _step_M(lambda t: t), "M0": lambda t: float(t),
            "Minf": _zero_one_inf,
            "i": math.inf, "i0": 1.0, "iinf": math.inf,
            "delta2": (True, False),
        },
    )


def exp_neg_power(r: float) -> YoungFunction:
    """``A(t) = exp(-t^-r)`` near zero, continued linearly past its inflection.

    ``exp(-t^-r)`` is convex only on ``(0, t*]`` with ``t* = (r/(r+1))^(1/r)``;
    beyond ``t*`` the tangent line is used so that ``A`` is a Young function.
    """
    r = float(r)
    if not r > 0:
        raise ValueError("exp_neg_power kind needs r > 0")
    ts = (r / (r + 1.0)) ** (1.0 / r)
    As = math.exp(-ts ** -r)
    as_ = r * ts ** (-r - 1.0) * As

    def log_A(t):
        lin = np.log(As + as_ * np.maximum(t - ts, 0.0))
        return np.where(t <= ts, -np.minimum(t, ts) ** -r, lin)

    def log_a(t):
        tc = np.minimum(t, ts)
        inner = math.log(r) + (-r - 1.0) * np.log(tc) - tc ** -r
        return np.where(t <= ts, inner, math.log(as_))

    def a(t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        return np.where(pos, np.exp(log_a(np.where(pos, t, 1.0))), 0.0)

    return YoungFunction(
        kind="exp_neg_power",
        params={"r": r, "t_star": ts},
        log_A_fn=log_A,
        a_fn=a,
        log_a_fn=log_a,
        closed_forms={
            "M": _step_M(lambda t: t), "M0": _zero_one_inf,
            "Minf": lambda t: float(t),
            "i": math.inf, "i0": math.inf, "iinf": 1.0,
            "delta2": (False, True),
        },
    )


def tabulated(t_nodes, a_nodes) -> YoungFunction:
    """Young function from samples of ``a``; ``A`` is the trapezoid integral.

    ``t_nodes`` must start at 0 and increase strictly; ``a`` is interpolated
    linearly between nodes and held constant past the last node.
    """
    t_nodes = np.asarray(t_nodes, dtype=float)
    a_nodes = np.asarray(a_nodes, dtype=float)
    if t_nodes.ndim != 1 or t_nodes.shape != a_nodes.shape or len(t_nodes) < 2:
        raise ValueError("tabulated kind needs matching 1-d t and a arrays")
    if t_nodes[0] != 0 or np.any(np.diff(t_nodes) <= 0):
        raise ValueError("tabulated t must start at 0 and increase strictly")
    if np.any(a_nodes < 0) or np.any(np.diff(a_nodes) < 0):
        raise ValueError("tabulated a must be nonnegative and nondecreasing")
    if not np.any(a_nodes > 0):
        raise DegenerateYoungError("degenerate Young function: a vanishes")
    dt = np.diff(t_nodes)
    A_nodes = np.concatenate([[0.0], np.cumsum(0.5 * dt * (a_nodes[1:] + a_nodes[:-1]))])
    slope = np.concatenate([np.diff(a_nodes) / dt, [0.0]])

    def A(t):
        t = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(t_nodes, t, side="right") - 1, 0, len(t_nodes) - 1)
        d = t - t_nodes[i]
        return A_nodes[i] + a_nodes[i] * d + 0.5 * slope[i] * d * d

    def a(t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, t_nodes, a_nodes)

    return YoungFunction(
        kind="tabulated",
        params={"t": t_nodes.tolist(), "a": a_nodes.tolist()},
        log_A_fn=lambda t: np.log(A(t)),
        A_fn=A,
        a_fn=a,
    )


def tabulated_values(t_nodes, A_nodes) -> YoungFunction:
    """Young function from samples of ``A`` itself.

    ``A`` is interpolated linearly; ``a`` comes from central differences on
    the nodes (forward difference at 0).
    """
    t_nodes = np.asarray(t_nodes, dtype=float)
    A_nodes = np.asarray(A_nodes, dtype=float)
    if t_nodes[0] != 0 or A_nodes[0] != 0 or np.any(np.diff(t_nodes) <= 0):
        raise ValueError("tabulated A must start at (0, 0) with increasing t")
    a_nodes = np.gradient(A_nodes, t_nodes, edge_order=1)
    a_nodes[0] = (A_nodes[1] - A_nodes[0]) / (t_nodes[1] - t_nodes[0])
    a_nodes = np.maximum.accumulate(np.maximum(a_nodes, 0.0))
    last_slope = (A_nodes[-1] - A_nodes[-2]) / (t_nodes[-1] - t_nodes[-2])

    def A(t):
        t = np.asarray(t, dtype=float)
        inside = np.interp(t, t_nodes, A_nodes)
        return np.where(t > t_nodes[-1], A_nodes[-1] + last_slope * (t - t_nodes[-1]), inside)

    return YoungFunction(
        kind="tabulated_A",
        params={"t": t_nodes.tolist(), "A": A_nodes.tolist()},
        log_A_fn=lambda t: np.log(A(t)),
        A_fn=A,
        a_fn=lambda t: np.interp(np.asarray(t, dtype=float), t_nodes, a_nodes),
    )


def custom(log_A, a, *, A=None, log_a=None, kind="custom", params=None) -> YoungFunction:
    """Wrap user supplied vectorized callables."""
    return YoungFunction(kind=kind, params=dict(params or {}), log_A_fn=log_A,
                         a_fn=a, A_fn=A, log_a_fn=log_a)


def read_tabulated_csv(path) -> YoungFunction:
    """Load a ``(t, a(t))`` CSV; a non-numeric first row is taken as header."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if rows:
                    raise
    arr = np.array(rows, dtype=float)
    return tabulated(arr[:, 0], arr[:, 1])


_KINDS = {
    "power": (power, ("p",), ("c",)),
    "p_q": (p_q, ("p", "q"), ()),
    "p_log": (p_log, ("p", "q", "r"), ()),
    "exp_taylor": (exp_taylor, ("k",), ()),
    "double_exp": (double_exp, (), ()),
    "exp_neg_power": (exp_neg_power, ("r",), ()),
}


def from_spec(spec: dict, path: str = "young", base_dir=None) -> YoungFunction:
    """Build a Young function from a config mapping such as ``{"kind": "p_q", "p": 2, "q": 3}``."""
    if not isinstance(spec, dict):
        raise ConfigError(path, "must be an object")
    kind = spec.get("kind")
    if kind == "tabulated":
        if "csv" in spec:
            p = spec["csv"]
            if base_dir is not None and not os.path.isabs(p):
                p = os.path.join(base_dir, p)
            try:
                return read_tabulated_csv(p)
            except (OSError, ValueError, IndexError) as exc:
                raise ConfigError(f"{path}.csv", str(exc)) from exc
        try:
            return tabulated(spec["t"], spec["a"])
        except KeyError as exc:
            raise ConfigError(f"{path}.{exc.args[0]}", "missing") from exc
        except (ValueError, OrliczError) as exc:
            raise ConfigError(path, str(exc)) from exc
    if kind not in _KINDS:
        raise ConfigError(f"{path}.kind", f"unknown kind {kind!r}; expected one of "
                          f"{sorted(list(_KINDS) + ['tabulated'])}")
    ctor, required, optional = _KINDS[kind]
    kwargs = {}
    for name in required + optional:
        if name not in spec:
            if name in required:
                raise ConfigError(f"{path}.{name}", "missing")
            continue
        val = spec[name]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{path}.{name}", "must be a number")
        kwargs[name] = val
    try:
        return ctor(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def to_spec(f: YoungFunction) -> dict:
    """Inverse of :func:`from_spec` for catalog kinds (used in report echoes)."""
    out = {"kind": f.kind}
    for k, v in f.params.items():
        if k == "t_star" or isinstance(v, list):
            continue
        out[k] = v
    return out


# ---------------------------------------------------------------------------
# operations

def evaluate(f: YoungFunction, t: float, which: str = "A") -> float:
    """Evaluate ``A(t)`` or ``a(t)``; raises :class:`SaturationError` on overflow."""
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"t must be finite and nonnegative, got {t}")
    if which == "A":
        if f.log_A(t) >= LOG_SATURATION:
            raise SaturationError("value exceeds representable range", SATURATION)
        return float(f.A(t))
    if which == "a":
        if t > 0 and f.log_a(t) >= LOG_SATURATION:
            raise SaturationError("value exceeds representable range", SATURATION)
        return float(f.a(t))
    raise ValueError("which must be 'A' or 'a'")


def inverse(f: YoungFunction, y, rtol: float = RTOL, max_iter: int = MAX_ITER):
    """Return ``t`` with ``A(t) = y`` (vectorized over ``y``).

    Uses the registered closed form when present; otherwise bisection in
    ``log t`` after a geometric bracket expansion.
    """
    y, scalar = _as_array(y)
    if np.any(y < 0) or np.any(~np.isfinite(y)):
        raise ValueError("inverse needs finite y >= 0")
    if f.inverse_fn is not None:
        with np.errstate(over="ignore"):
            return _finish(np.asarray(f.inverse_fn(y), dtype=float), scalar)
    flat = y.ravel()
    out = np.zeros_like(flat)
    pos = flat > 0
    if np.any(pos):
        out[pos] = _bisect_inverse(f, flat[pos], rtol, max_iter)
    return _finish(out.reshape(y.shape), scalar)


def _bisect_inverse(f, y, rtol, max_iter):
    logy = np.log(y)
    lo = np.ones_like(y)
    hi = np.ones_like(y)
    for _ in range(700):
        high = f.log_A(lo) > logy
        if not np.any(high):
            break
        lo[high] *= 0.1
        if np.any(lo < 1e-300):
            raise InverseBracketError("inverse out of bracket", (float(lo.min()), 1.0))
    for _ in range(700):
        low = f.log_A(hi) < logy
        if not np.any(low):
            break
        if np.any(hi[low] >= 1e300):
            raise InverseBracketError("inverse out of bracket", (1.0, float(hi.max())))
        hi[low] *= 10.0
    llo, lhi = np.log(lo), np.log(hi)
    for _ in range(max_iter):
        mid = 0.5 * (llo + lhi)
        below = f.log_A(np.exp(mid)) < logy
        llo = np.where(below, mid, llo)
        lhi = np.where(below, lhi, mid)
        if np.all(lhi - llo <= 1e-15 * np.maximum(1.0, np.abs(mid))):
            break
    t = np.exp(0.5 * (llo + lhi))
    # log-bisection converges in t; rtol on A follows from that
    return t


# -- Legendre transform ------------------------------------------------------

class _Legendre:
    """Numeric complementary function ``sup_tau (tau t - A(tau))``."""

    def __init__(self, f: YoungFunction):
        self.f = f
        n = int(round(math.log10(CONJ_HI / CONJ_LO) * CONJ_PER_DECADE)) + 1
        self.log_tau = np.linspace(math.log(CONJ_LO), math.log(CONJ_HI), n)
        self._A_grid = None

    @property
    def A_grid(self):
        if self._A_grid is None:
            self._A_grid = self.f.A(np.exp(self.log_tau))
        return self._A_grid

    def _phi(self, t, log_tau):
        tau = np.exp(log_tau)
        return tau * t - self.f.A(tau)

    def __call__(self, t):
        t = np.asarray(t, dtype=float).ravel()
        val = np.zeros_like(t)
        arg = np.zeros_like(t)
        pos = np.flatnonzero(t > 0)
        if pos.size == 0:
            return val, arg
        tau = np.exp(self.log_tau)
        Ag = self.A_grid
        tp = t[pos]
        j = np.empty(tp.size, dtype=int)
        best = np.empty(tp.size)
        chunk = max(1, 2_000_000 // tau.size)
        for s in range(0, tp.size, chunk):
            phi = tp[s:s + chunk, None] * tau[None, :] - Ag[None, :]
            jj = np.argmax(phi, axis=1)
            j[s:s + chunk] = jj
            best[s:s + chunk] = phi[np.arange(jj.size), jj]
        last = self.log_tau.size - 1
        lo = self.log_tau[np.maximum(j - 1, 0)]
        hi = self.log_tau[np.minimum(j + 1, last)]
        infinite = []
        for m in np.flatnonzero(j == last):
            bracket = self._extend_up(tp[m])
            if bracket is None:
                infinite.append(tp[m])
            else:
                lo[m], hi[m] = bracket
        if infinite:
            raise ConjugateInfiniteError(infinite)
        for m in np.flatnonzero(j == 0):
            lo[m], hi[m] = self._extend_down(tp[m])
        xs, fs = self._golden(tp, lo, hi)
        better = fs > best
        v = np.where(better, fs, best)
        x = np.where(better, xs, self.log_tau[j])
        nonpos = v <= 0
        val[pos] = np.where(nonpos, 0.0, v)
        arg[pos] = np.where(nonpos, 0.0, np.exp(x))
        return val, arg

    def _extend_up(self, t):
        lt = self.log_tau[-1]
        step = math.log(10.0)
        cur = self._phi(t, lt)
        while lt < math.log(CONJ_CAP):
            nxt = self._phi(t, lt + step)
            if nxt <= cur:
                return lt - step, lt + step
            lt, cur = lt + step, nxt
        return None

    def _extend_down(self, t):
        lt = self.log_tau[0]
        step = math.log(10.0)
        cur = self._phi(t, lt)
        while lt > math.log(1e-300):
            nxt = self._phi(t, lt - step)
            if nxt <= cur:
                return lt - step, lt + step
            lt, cur = lt - step, nxt
        return lt, lt + step

    def _golden(self, t, a, b, iters=90):
        a = a.copy()
        b = b.copy()
        for _ in range(iters):
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            left = self._phi(t, c) >= self._phi(t, d)
            b = np.where(left, d, b)
            a = np.where(left, a, c)
            if np.all(b - a < 1e-13):
                break
        x = 0.5 * (a + b)
        return x, self._phi(t, x)


def conjugate(f: YoungFunction, numeric: bool = False) -> YoungFunction:
    """Complementary function ``Ã(t) = sup_{tau>=0} (tau t - A(tau))``.

    A registered closed form is used unless ``numeric`` is set.  The numeric
    path maximizes on a logarithmic grid and refines the maximizer by
    golden-section search; the maximizer doubles as the derivative of Ã.
    """
    if f.conjugate_fn is not None and not numeric:
        return f.conjugate_fn()
    leg = _Legendre(f)
    cache = {}

    def values(t):
        t = np.asarray(t, dtype=float)
        key = t.tobytes() if t.size <= 64 else None
        if key is not None and key in cache:
            return cache[key]
        v, x = leg(t)
        res = (v.reshape(t.shape), x.reshape(t.shape))
        if key is not None:
            if len(cache) > 256:
                cache.clear()
            cache[key] = res
        return res

    holder = {}

    def conj_of_conj():
        return conjugate(holder["self"], numeric=True)

    g = YoungFunction(
        kind="conjugate",
        params={"of": to_spec(f)},
        log_A_fn=lambda t: np.log(values(t)[0]),
        A_fn=lambda t: values(t)[0],
        a_fn=lambda t: values(t)[1],
        conjugate_fn=conj_of_conj,
    )
    holder["self"] = g
    return g


# -- doubling ----------------------------------------------------------------

@dataclass(frozen=True)
class DoublingClass:
    delta2_zero: bool
    C0: float
    delta2_inf: bool
    Cinf: float
    delta2_global: bool
    pA_plus: float
    pA_minus: float
    source: str = "numeric"

    def to_dict(self):
        return {k: _json_float(v) for k, v in self.__dict__.items()}


def _json_float(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _diverges(ratios):
    """Trend test on ``t a/A`` samples ordered toward the limit end."""
    if np.max(ratios) > DIVERGENCE_THRESHOLD:
        return True
    n = len(ratios)
    d = n // 3
    if d < 1:
        return False
    r_far, r_mid, r_end = ratios[-1 - 2 * d], ratios[-1 - d], ratios[-1]
    inc_prev = r_mid - r_far
    inc_last = r_end - r_mid
    return inc_last > 1e-3 * r_end and inc_last >= 0.9 * inc_prev


def classify_doubling(f: YoungFunction, t_lo: float = 1e-6, t_hi: float = 1e6,
                      per_decade: int = 50, analytic: bool = True) -> DoublingClass:
    """Sample ``t a(t)/A(t)`` on a log grid and classify Δ2 near 0 and ∞.

    ``pA_plus``/``pA_minus`` are the sample max/min.  Catalog kinds carry
    their exact class (and exact ``pA`` bounds for doubling kinds); with
    ``analytic`` the result follows them.
    """
    if not (0 < t_lo < 1 < t_hi):
        raise ValueError("need 0 < t_lo < 1 < t_hi")
    n = int(round(math.log10(t_hi / t_lo) * per_decade)) + 1
    t = np.logspace(math.log10(t_lo), math.log10(t_hi), n)
    logA = f.log_A(t)
    if np.any(logA == -np.inf):
        raise DegenerateYoungError("degenerate Young function: A(t) = 0 for some t > 0")
    # beyond exp(exp(709)) even log A is not representable: growth is not doubling
    beyond_log_range = bool(np.any(~np.isfinite(f.log_A(2 * t))))
    keep = np.isfinite(f.log_A(2 * t))
    t, logA = t[keep], logA[keep]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        ratio = f.elasticity(t)
        dbl = np.exp(f.log_A(2 * t) - logA)
    low = t <= 1
    high = t >= 1
    C0 = float(np.max(dbl[low]))
    Cinf = float(np.max(dbl[high]))
    z = not _diverges(ratio[low][::-1]) and C0 < 2 ** DIVERGENCE_THRESHOLD
    i = (not beyond_log_range and not _diverges(ratio[high])
         and Cinf < 2 ** DIVERGENCE_THRESHOLD)
    source = "numeric"
    p_minus, p_plus = float(np.min(ratio)), float(np.max(ratio))
    if analytic and "delta2" in f.closed_forms:
        z, i = f.closed_forms["delta2"]
        if "pA" in f.closed_forms:
            p_minus, p_plus = (float(v) for v in f.closed_forms["pA"])
        source = "analytic"
    return DoublingClass(
        delta2_zero=bool(z), C0=C0 if z else math.inf,
        delta2_inf=bool(i), Cinf=Cinf if i else math.inf,
        delta2_global=bool(z and i),
        pA_plus=p_plus, pA_minus=p_minus,
        source=source,
    )


# -- invariants ----------------------------------------------------------------

def check_invariants(f: YoungFunction, t=None, tol: float = 1e-9) -> list:
    """Return the list of violated Young-function invariants on a sample grid."""
    if t is None:
        t = np.logspace(-3, 3, 121)
    t = np.asarray(t, dtype=float)
    bad = []
    if float(f.A(0.0)) != 0.0:
        bad.append("A(0) != 0")
    lt = np.linspace(math.log(t[0]), math.log(t[-1]), t.size)
    tt = np.exp(lt)
    A = f.A(tt)
    ok = A < SATURATION
    # convexity via the chord test on triples
    x0, x1, x2 = tt[:-2], tt[1:-1], tt[2:]
    w = (x2 - x1) / (x2 - x0)
    A0, A1, A2 = A[:-2], A[1:-1], A[2:]
    sel = ok[:-2] & ok[1:-1] & ok[2:]
    chord = w * A0 + (1 - w) * A2
    if np.any((A1 - chord)[sel] > tol * np.maximum(chord[sel], 1e-300) + 1e-300):
        bad.append("A not convex")
    if np.all(A == A[0]):
        bad.append("A constant")
    a = f.a(tt)
    if np.any(np.diff(a)[ok[1:]] < -tol * np.abs(a[1:][ok[1:]])):
        bad.append("a not nondecreasing")
    logA = f.log_A(tt)
    if np.any(f.elasticity(tt) < 1 - tol):
        bad.append("A(t) > t a(t)")
    for rr in (0.1, 0.5, 0.9):
        if np.any(f.log_A(rr * tt) > math.log(rr) + logA + tol):
            bad.append(f"A(rt) > r A(t) for r={rr}")
    for rr in (1.5, 2.0, 10.0):
        if np.any(f.log_A(rr * tt) < math.log(rr) + logA - tol):
            bad.append(f"A(rt) < r A(t) for r={rr}")
    return bad
