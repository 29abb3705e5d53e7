"""Matuszewska-Orlicz functions and indices.

All ratios ``A(alpha t)/A(alpha)`` are formed in log space, so exponential
kinds can be probed at ``alpha = 2^60`` without overflow.  Infinite values are
returned as ``math.inf``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndeterminateError, IndexNotEstimableError
from .young import YoungFunction

INF_THRESHOLD = 1e12
LOG_INF_THRESHOLD = math.log(INF_THRESHOLD)
# sup over alpha is taken on [2^-60, 2^60], the same range the limits probe
SUP_LOG2_RANGE = 60
SUP_PER_DECADE = 20
LIMIT_TERMS = 60
LIMIT_TAIL = 10
INDEX_SLOPE_CAP = 50.0
INDEX_T = np.logspace(2, 6, 17)
INDEX_FIT_FROM = 1e3


def _log_ratio(f: YoungFunction, alpha, t):
    num = f.log_A(alpha * t)
    den = f.log_A(alpha)
    with np.errstate(invalid="ignore"):
        lr = num - den
    # A(alpha t) beyond log range while A(alpha) is not: ratio is +inf
    lr = np.where(np.isposinf(num) & np.isfinite(den), np.inf, lr)
    lr = np.where(np.isposinf(den) & np.isfinite(num), -np.inf, lr)
    return lr


def _alpha_grid():
    lo = -SUP_LOG2_RANGE * math.log10(2.0)
    n = int(round(2 * -lo * SUP_PER_DECADE)) + 1
    return np.logspace(lo, -lo, n)


def _closed(f, key):
    return None if key not in f.closed_forms else f.closed_forms[key]


def matuszewska_sup(f: YoungFunction, t: float, numeric: bool = False) -> float:
    """``M(t, A) = sup_alpha A(alpha t)/A(alpha)``."""
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    cf = _closed(f, "M")
    if cf is not None and not numeric:
        return float(cf(t))
    if t == 1.0:
        return 1.0
    return _sup_numeric(f, t)


def _sup_numeric(f, t):
    alpha = _alpha_grid()
    lr = _log_ratio(f, alpha, t)
    ok = ~np.isnan(lr)
    if not np.any(ok):
        raise IndeterminateError(f"indeterminate at t={t:g}")
    m = np.max(lr[ok])
    if m == np.inf:
        return math.inf
    if m > LOG_INF_THRESHOLD:
        d = 2 * SUP_PER_DECADE
        vals = lr[ok]
        for seq in (vals, vals[::-1]):
            if len(seq) > d and seq[-1] >= m - 1e-12 * abs(m) \
                    and seq[-1] - seq[-1 - d] > 1e-3 * max(1.0, abs(seq[-1])):
                return math.inf
    return math.inf if m > 700.0 else float(math.exp(m))


def matuszewska_limit_info(f: YoungFunction, t: float, end: str):
    """Numeric liminf toward ``end`` plus a convergence flag."""
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    if end not in ("zero", "infinity"):
        raise ValueError("end must be 'zero' or 'infinity'")
    if t == 1.0:
        return 1.0, True
    sign = -1.0 if end == "zero" else 1.0
    alpha = 2.0 ** (sign * np.arange(LIMIT_TERMS + 1))
    lr = _log_ratio(f, alpha, t)
    tail = lr[~np.isnan(lr)][-LIMIT_TAIL:]
    if tail.size < 3:
        raise IndeterminateError(f"limit indeterminate at t={t:g} ({end})")
    with np.errstate(invalid="ignore"):
        steps = np.diff(tail)
    nondecr = np.all((steps >= 0) | np.isposinf(tail[1:]))
    nonincr = np.all((steps <= 0) | np.isneginf(tail[1:]))
    with np.errstate(invalid="ignore"):
        rise = tail[-1] - tail[0]
    trend = 1e-3 * max(1.0, abs(float(tail[0])))
    if nondecr and tail[-1] > LOG_INF_THRESHOLD and rise > trend:
        return math.inf, True
    lo = float(np.min(tail))
    if nonincr and tail[-1] < -LOG_INF_THRESHOLD and -rise > trend:
        return 0.0, True
    if lo > 700.0:
        return math.inf, True
    value = math.exp(lo)
    spread = float(np.max(tail) - lo)
    return value, spread <= 1e-3


def matuszewska_limit(f: YoungFunction, t: float, end: str, numeric: bool = False) -> float:
    """``M_0`` (``end='zero'``) or ``M_inf`` (``end='infinity'``) at ``t``.

    Approximated by the infimum of the last resolvable terms of
    ``A(alpha_k t)/A(alpha_k)`` with ``alpha_k = 2^(-/+k)``, ``k <= 60``.
    """
    key = "M0" if end == "zero" else "Minf"
    cf = _closed(f, key)
    if cf is not None and not numeric:
        if end not in ("zero", "infinity"):
            raise ValueError("end must be 'zero' or 'infinity'")
        return float(cf(float(t)))
    return matuszewska_limit_info(f, t, end)[0]


_WHICH = {"global": ("i", None), "zero": ("i0", "zero"), "infinity": ("iinf", "infinity")}


def matuszewska_index(f: YoungFunction, which: str = "global", numeric: bool = False) -> float:
    """Matuszewska-Orlicz index ``i``, ``i_0`` or ``i_inf``.

    Least-squares slope of ``log M(t)`` against ``log t`` over the top three
    decades of ``[1e2, 1e6]``; ``inf`` when ``M`` is infinite at a probe or
    the slope exceeds 50.
    """
    if which not in _WHICH:
        raise ValueError("which must be 'global', 'zero' or 'infinity'")
    key, end = _WHICH[which]
    cf = _closed(f, key)
    if cf is not None and not numeric:
        return float(cf)
    if end is None:
        vals = np.array([_sup_numeric(f, t) for t in INDEX_T])
    else:
        vals = np.array([matuszewska_limit_info(f, t, end)[0] for t in INDEX_T])
    if np.any(np.isinf(vals)):
        return math.inf
    good = (vals > 0) & (INDEX_T >= INDEX_FIT_FROM)
    if np.count_nonzero(good) < 4:
        raise IndexNotEstimableError(f"index not estimable ({which})")
    slope = np.polyfit(np.log(INDEX_T[good]), np.log(vals[good]), 1)[0]
    if slope > INDEX_SLOPE_CAP:
        return math.inf
    return float(slope)


@dataclass
class MatuszewskaProfile:
    t_grid: np.ndarray
    M: np.ndarray
    M0: np.ndarray
    Minf: np.ndarray
    i: float
    i0: float
    iinf: float
    infinite_flags: dict = field(default_factory=dict)
    converged: dict = field(default_factory=dict)
    numeric: bool = True

    def to_dict(self):
        return {
            "t": self.t_grid.tolist(),
            "M": [_enc(v) for v in self.M],
            "M0": [_enc(v) for v in self.M0],
            "Minf": [_enc(v) for v in self.Minf],
            "i": _enc(self.i), "i0": _enc(self.i0), "iinf": _enc(self.iinf),
            "converged": {k: bool(np.all(v)) for k, v in self.converged.items()},
            "numeric": self.numeric,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "M", "M0", "Minf"])
        for row in zip(self.t_grid, self.M, self.M0, self.Minf):
            w.writerow([_enc_csv(v) for v in row])
        return buf.getvalue()


def _enc(v):
    v = float(v)
    return "inf" if math.isinf(v) else v


def _enc_csv(v):
    v = float(v)
    return "inf" if math.isinf(v) else repr(v)


def profile(f: YoungFunction, t_grid=None, numeric: bool = True) -> MatuszewskaProfile:
    """Sample ``M``, ``M_0``, ``M_inf`` on ``t_grid`` and estimate the indices."""
    if t_grid is None:
        t_grid = np.logspace(-2, 2, 17)
    t_grid = np.asarray(t_grid, dtype=float)
    M = np.array([matuszewska_sup(f, t, numeric=numeric) for t in t_grid])
    if numeric:
        z = [matuszewska_limit_info(f, t, "zero") for t in t_grid]
        z_inf = [matuszewska_limit_info(f, t, "infinity") for t in t_grid]
    else:
        z = [(matuszewska_limit(f, t, "zero"), True) for t in t_grid]
        z_inf = [(matuszewska_limit(f, t, "infinity"), True) for t in t_grid]
    M0 = np.array([v for v, _ in z])
    Minf = np.array([v for v, _ in z_inf])
    return MatuszewskaProfile(
        t_grid=t_grid, M=M, M0=M0, Minf=Minf,
        i=matuszewska_index(f, "global", numeric=numeric),
        i0=matuszewska_index(f, "zero", numeric=numeric),
        iinf=matuszewska_index(f, "infinity", numeric=numeric),
        infinite_flags={"M": np.isinf(M), "M0": np.isinf(M0), "Minf": np.isinf(Minf)},
        converged={"zero": np.array([c for _, c in z]),
                   "infinity": np.array([c for _, c in z_inf])},
        numeric=numeric,
    )


def check_profile(p: MatuszewskaProfile, tol: float = 1e-6) -> list:
    """Violated profile invariants (empty when all hold)."""
    bad = []
    t = p.t_grid
    at1 = np.isclose(t, 1.0)
    if np.any(at1):
        for name in ("M", "M0", "Minf"):
            if not np.allclose(getattr(p, name)[at1], 1.0, rtol=tol):
                bad.append(f"{name}(1) != 1")
    for name in ("M0", "Minf"):
        v = getattr(p, name)
        fin = np.isfinite(p.M)
        if np.any(v[fin] > p.M[fin] * (1 + tol)):
            bad.append(f"{name} > M")
    order = np.argsort(t)
    Ms = p.M[order]
    with np.errstate(invalid="ignore"):  # inf - inf between saturated probes
        drops = np.diff(Ms) < -tol * Ms[1:]
    if np.any(drops):
        bad.append("M not nondecreasing")
    for i in range(len(t)):
        for j in range(len(t)):
            prod_t = t[i] * t[j]
            k = np.flatnonzero(np.isclose(t, prod_t, rtol=1e-9))
            if k.size and np.isfinite(p.M[i]) and np.isfinite(p.M[j]):
                if p.M[k[0]] > p.M[i] * p.M[j] * (1 + tol):
                    bad.append("M not submultiplicative")
                    break
    if max(p.i0, p.iinf) > p.i + 0.05:
        bad.append("max(i0, iinf) > i")
    return sorted(set(bad))
