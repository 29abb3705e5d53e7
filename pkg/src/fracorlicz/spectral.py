"""Discretized modular Rayleigh quotient and its constrained minimization.

The Gagliardo-type modular of a grid function ``u`` (zero outside the
domain) is the double sum over ordered node pairs

    S(u) = sum_{x != y} A(|u(x) - u(y)| / |x - y|^s) |x - y|^{-n} h^{2n}

where ``y`` also runs over an exterior collar of zero nodes.  The critical
value at level ``alpha`` is ``min S(u)/alpha`` subject to
``sum omega A(|u|) h^n = alpha``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate, linalg, optimize
from scipy.spatial.distance import cdist
from scipy.special import logsumexp

from .bounds import E_young
from .domain import DomainGeometry
from .errors import (Alpha0RangeError, DegeneratePairingError, DomainError,
                     NonconvergentError, NormalizationError)
from .young import LOG_SATURATION, YoungFunction, conjugate, inverse

COLLAR_KAPPA = 2.0
STORE_EXTERIOR_MAX = 20_000_000
CHUNK = 2_000_000
NORMALIZE_RTOL = 1e-10
DESCENT_RTOL = 1e-9
DESCENT_MAX_ITER = 5000
ARMIJO_C = 1e-4
ARMIJO_SHRINK = 0.5
ALPHA0_RTOL = 5e-4


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nodal values on the interior nodes of a domain; zero elsewhere."""

    values: np.ndarray
    domain: DomainGeometry

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size != self.domain.size:
            raise ValueError("values must have one entry per interior node")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        object.__setattr__(self, "values", v)

    def __mul__(self, c):
        return GridFunction(self.values * float(c), self.domain)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(-self.values, self.domain)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*("x", "y")[:self.domain.dim], "u"])
        for x, v in zip(self.domain.coords, self.values):
            w.writerow([*(repr(float(c)) for c in x), repr(float(v))])
        return buf.getvalue()


def grid_function(domain: DomainGeometry, fn) -> GridFunction:
    """Sample ``fn(coords)`` (coords of shape (K, dim)) on the interior nodes."""
    return GridFunction(np.asarray(fn(domain.coords), dtype=float), domain)


# -- pair geometry -----------------------------------------------------------

class PairKernel:
    """Pair distances for interior-interior and interior-exterior sums."""

    def __init__(self, dom: DomainGeometry, s: float, kappa: float = COLLAR_KAPPA):
        if not 0 < s < 1:
            raise ValueError("s must lie in (0, 1)")
        self.dom, self.s, self.kappa = dom, float(s), float(kappa)
        n, h = dom.dim, dom.h
        self.n, self.h = n, h
        X = dom.coords
        R = cdist(X, X)
        np.fill_diagonal(R, np.inf)
        self.R = R
        self.hn2 = h ** (2 * n)
        # exterior collar: lattice nodes within kappa*d beyond the box
        width = int(math.ceil(kappa * max(dom.d_Omega, h) / h))
        lo = dom.index.min(axis=0) - width
        hi = dom.index.max(axis=0) + width
        axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
        grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        inside = np.zeros(grid.shape[0], dtype=bool)
        flat = np.ravel_multi_index((grid - lo).T, tuple(hi - lo + 1))
        inside[np.ravel_multi_index((dom.index - lo).T, tuple(hi - lo + 1))] = True
        del flat
        self.ext_index = grid[~inside]
        self.n_ext = self.ext_index.shape[0]
        self._ext_R = None
        self._power = {}

    @property
    def ext_coords(self):
        return self.dom.offset[None, :] + (self.ext_index + 0.5) * self.h

    def ext_R_chunks(self):
        """Yield (row slice, distance block) for interior-exterior pairs."""
        if self._ext_R is not None:
            yield slice(0, self.dom.size), self._ext_R
            return
        X, Y = self.dom.coords, self.ext_coords
        rows = max(1, CHUNK // max(1, self.n_ext))
        store = self.dom.size * self.n_ext <= STORE_EXTERIOR_MAX
        blocks = []
        for s0 in range(0, X.shape[0], rows):
            block = cdist(X[s0:s0 + rows], Y)
            if store:
                blocks.append(block)
            yield slice(s0, s0 + block.shape[0]), block
        if store:
            self._ext_R = np.vstack(blocks)

    def power_weights(self, p: float):
        """``W = |x-y|^{-sp-n} h^{2n}`` and the exterior killing weight."""
        key = float(p)
        if key not in self._power:
            e = -self.s * p - self.n
            W = self.R ** e * self.hn2
            kill = np.empty(self.dom.size)
            for sl, block in self.ext_R_chunks():
                kill[sl] = 2.0 * np.sum(block ** e, axis=1) * self.hn2
            self._power[key] = (W, kill)
        return self._power[key]


_KERNELS: dict = {}


def pair_kernel(dom: DomainGeometry, s: float, kappa: float = COLLAR_KAPPA) -> PairKernel:
    key = (id(dom), float(s), float(kappa))
    hit = _KERNELS.get(key)
    if hit is not None and hit.dom is dom:
        return hit
    if len(_KERNELS) > 16:
        _KERNELS.clear()
    k = PairKernel(dom, s, kappa)
    _KERNELS[key] = k
    return k


def _power_params(f: YoungFunction):
    if f.kind == "power":
        return f.params["p"], f.params.get("c", 1.0)
    return None


def _weights(omega, dom):
    if omega is None:
        return np.ones(dom.size)
    w = np.broadcast_to(np.asarray(omega, dtype=float), (dom.size,)).copy()
    if np.any(w < 0) or not np.any(w > 0):
        raise ValueError("omega must be nonnegative and not identically zero")
    return w


def weight_norms(omega, dom: DomainGeometry) -> tuple:
    """``(|omega|_L1, |omega|_Linf)`` by the nodal quadrature."""
    w = _weights(omega, dom)
    return float(np.sum(w) * dom.h ** dom.dim), float(np.max(w))


# -- modulars ----------------------------------------------------------------

def _values(u):
    if isinstance(u, GridFunction):
        return u.values, u.domain
    raise TypeError("expected a GridFunction")


def _seminorm_values(v, f, K: PairKernel, saturation=False):
    pp = _power_params(f)
    if pp is not None:
        p, c = pp
        W, kill = K.power_weights(p)
        D = np.abs(v[:, None] - v[None, :])
        with np.errstate(over="ignore"):
            val = c * (np.sum(W * D ** p) + np.sum(kill * np.abs(v) ** p))
        sat = not math.isfinite(val) or val >= 1e300
        val = min(val, 1e300)
        return (val, sat) if saturation else val
    s = K.s
    D = np.abs(v[:, None] - v[None, :]) / K.R ** s
    lA = f.log_A(D)
    sat = bool(np.any(lA >= LOG_SATURATION))
    total = np.sum(f.A(D) / K.R ** K.n) * K.hn2
    av = np.abs(v)
    ext = 0.0
    for sl, block in K.ext_R_chunks():
        arg = av[sl, None] / block ** s
        sat = sat or bool(np.any(f.log_A(arg) >= LOG_SATURATION))
        ext += np.sum(f.A(arg) / block ** K.n)
    val = min(float(total + 2.0 * ext * K.hn2), 1e300)
    return (val, sat) if saturation else val


def modular_seminorm(u: GridFunction, f: YoungFunction, s: float,
                     kappa: float = COLLAR_KAPPA, return_saturation: bool = False):
    """Double sum of ``A(|D^s u|)`` against ``|x-y|^{-n} h^{2n}`` over ordered pairs.

    Exterior collar nodes carry zero values.  With ``return_saturation`` the
    result is ``(value, saturated)`` where ``saturated`` flags summands that hit
    the saturation threshold.
    """
    v, dom = _values(u)
    return _seminorm_values(v, f, pair_kernel(dom, s, kappa), return_saturation)


def _seminorm_grad(v, f, K: PairKernel):
    pp = _power_params(f)
    diff = v[:, None] - v[None, :]
    if pp is not None:
        p, c = pp
        W, kill = K.power_weights(p)
        g = 2.0 * np.sum(W * np.abs(diff) ** (p - 1.0) * np.sign(diff), axis=1)
        g += kill * np.abs(v) ** (p - 1.0) * np.sign(v)
        return c * p * g
    s = K.s
    Rs = K.R ** s
    D = np.abs(diff) / Rs
    g = 2.0 * np.sum(f.a(D) * np.sign(diff) / (Rs * K.R ** K.n), axis=1) * K.hn2
    av, sg = np.abs(v), np.sign(v)
    for sl, block in K.ext_R_chunks():
        bs = block ** s
        g[sl] += 2.0 * sg[sl] * np.sum(f.a(av[sl, None] / bs) / (bs * block ** K.n), axis=1) * K.hn2
    return g


def _pairing_values(v, f, K: PairKernel):
    """``sum a(|D^s u|)|D^s u|`` against the kernel measure."""
    pp = _power_params(f)
    if pp is not None:
        return pp[0] * _seminorm_values(v, f, K)
    s = K.s
    D = np.abs(v[:, None] - v[None, :]) / K.R ** s
    total = np.sum(f.a(D) * D / K.R ** K.n) * K.hn2
    av = np.abs(v)
    ext = 0.0
    for sl, block in K.ext_R_chunks():
        arg = av[sl, None] / block ** s
        ext += np.sum(f.a(arg) * arg / block ** K.n)
    return float(total + 2.0 * ext * K.hn2)


def weighted_modular(u: GridFunction, f: YoungFunction, omega=None) -> float:
    """``sum omega(x) A(|u(x)|) h^n`` over interior nodes."""
    v, dom = _values(u)
    w = _weights(omega, dom)
    return float(np.sum(w * f.A(np.abs(v))) * dom.h ** dom.dim)


def _log_weighted(v, f, w, hn):
    pos = (w > 0) & (v != 0)
    if not np.any(pos):
        return -np.inf
    return float(logsumexp(np.log(w[pos]) + f.log_A(np.abs(v[pos])))) + math.log(hn)


def _normalize_values(v, f, w, hn, alpha):
    pos = (w > 0) & (v != 0)
    if not np.any(pos):
        raise NormalizationError("u vanishes where omega is positive")
    pp = _power_params(f)
    if pp is not None:
        p, c = pp
        G = c * np.sum(w * np.abs(v) ** p) * hn
        r = (alpha / G) ** (1.0 / p)
        return v * r, r
    target = math.log(alpha)

    def phi(logr):
        return _log_weighted(v * math.exp(logr), f, w, hn) - target

    lo, hi = -1.0, 1.0
    for _ in range(400):
        if phi(lo) < 0:
            break
        lo -= 2.0
    else:
        raise NormalizationError("normalization bracket not found")
    for _ in range(400):
        val = phi(hi)
        if val > 0:
            break
        if not math.isfinite(val) or np.max(f.log_A(np.abs(v) * math.exp(hi))) >= LOG_SATURATION:
            raise NormalizationError("normalization unreachable at saturation")
        hi += 2.0
    else:
        raise NormalizationError("normalization unreachable at saturation")
    logr = optimize.brentq(phi, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    r = math.exp(logr)
    return v * r, r


def normalize_to_alpha(u: GridFunction, f: YoungFunction, omega, alpha: float):
    """Scale ``u`` so that ``weighted_modular(r u) = alpha``; returns ``(r u, r)``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    v, dom = _values(u)
    w = _weights(omega, dom)
    nv, r = _normalize_values(v, f, w, dom.h ** dom.dim, float(alpha))
    return GridFunction(nv, dom), r


def luxemburg_norm(u: GridFunction, f: YoungFunction) -> float:
    """``inf{k > 0 : sum A(|u|/k) h^n <= 1}``."""
    v, dom = _values(u)
    if not np.any(v != 0):
        return 0.0
    hn = dom.h ** dom.dim
    pp = _power_params(f)
    if pp is not None:
        p, c = pp
        return float((c * np.sum(np.abs(v) ** p) * hn) ** (1.0 / p))
    w = np.ones(v.size)
    _, r = _normalize_values(v, f, w, hn, 1.0)
    return 1.0 / r


# -- critical value ----------------------------------------------------------

@dataclass
class CriticalValueResult:
    alpha: float
    lam: float
    Lambda: float
    minimizer: GridFunction
    iterations: int
    restarts: list
    converged: bool
    constraint_residual: float
    history: list = field(default_factory=list, repr=False)

    def to_dict(self, include_minimizer: bool = True) -> dict:
        d = {"alpha": self.alpha, "lambda": self.lam, "Lambda": self.Lambda,
             "iterations": self.iterations, "restarts": self.restarts,
             "converged": self.converged,
             "constraint_residual": self.constraint_residual}
        if include_minimizer:
            d["minimizer"] = self.minimizer.values.tolist()
        return d


@dataclass
class SolverOptions:
    seed: int = 0
    n_random: int = 1
    starts: tuple = ("eigenvector", "distance", "random")
    max_iter: int = DESCENT_MAX_ITER
    rtol: float = DESCENT_RTOL
    kappa: float = COLLAR_KAPPA
    warm_start: np.ndarray | None = None


def quadratic_forms(dom: DomainGeometry, s: float, omega=None, kappa: float = COLLAR_KAPPA):
    """Assembled ``(K, M)`` with ``S(u) = u K u`` for ``A = t^2`` and ``M = diag(omega h^n)``."""
    Kp = pair_kernel(dom, s, kappa)
    W, kill = Kp.power_weights(2.0)
    Kmat = 2.0 * (np.diag(W.sum(axis=1)) - W) + np.diag(kill)
    M = np.diag(_weights(omega, dom) * dom.h ** dom.dim)
    return Kmat, M


def quadratic_eigen(dom: DomainGeometry, s: float, omega=None, kappa: float = COLLAR_KAPPA):
    """Smallest generalized eigenpair of the assembled ``(K, M)``."""
    Kmat, M = quadratic_forms(dom, s, omega, kappa)
    if np.any(np.diag(M) <= 0):
        M = M + np.eye(M.shape[0]) * 1e-12 * np.max(np.diag(M))
    vals, vecs = linalg.eigh(Kmat, M, subset_by_index=[0, 0])
    return float(vals[0]), vecs[:, 0]


def _descend(v0, f, w, hn, alpha, K: PairKernel, max_iter, rtol):
    v, _ = _normalize_values(v0, f, w, hn, alpha)
    S = _seminorm_values(v, f, K)
    history = [S / alpha]
    t = None
    v_prev = g_prev = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = _seminorm_grad(v, f, K)
        nvec = w * f.a(np.abs(v)) * np.sign(v) * hn
        nn = nvec @ nvec
        gt = g - (g @ nvec) / nn * nvec if nn > 0 else g
        gn2 = float(gt @ gt)
        if gn2 == 0.0:
            converged = True
            break
        if t is None:
            t = 0.1 * math.sqrt(float(v @ v) / gn2)
        else:
            sk, yk = v - v_prev, gt - g_prev
            sy = float(sk @ yk)
            t = float(sk @ sk) / sy if sy > 0 else 2.0 * t
        accepted = False
        for _ in range(60):
            try:
                cand, _ = _normalize_values(v - t * gt, f, w, hn, alpha)
            except NormalizationError:
                t *= ARMIJO_SHRINK
                continue
            Sc = _seminorm_values(cand, f, K)
            if Sc <= S - ARMIJO_C * t * gn2:
                accepted = True
                break
            t *= ARMIJO_SHRINK
        if not accepted:
            # no sufficient decrease at any step: stationary to working precision
            converged = True
            break
        v_prev, g_prev = v, gt
        rel = (S - Sc) / max(S, 1e-300)
        v, S = cand, Sc
        history.append(S / alpha)
        if rel < rtol:
            converged = True
            break
    return v, S, it, converged, history


def minimize_critical_value(dom: DomainGeometry, f: YoungFunction, omega, alpha: float,
                            s: float, opts: SolverOptions | None = None) -> CriticalValueResult:
    """Projected descent on ``S(u)/alpha`` over ``{sum omega A(|u|) h^n = alpha}``.

    Runs from every configured start and keeps the smallest objective.
    Raises :class:`NonconvergentError` (carrying the best result) when no
    start converges.
    """
    opts = opts or SolverOptions()
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    w = _weights(omega, dom)
    hn = dom.h ** dom.dim
    K = pair_kernel(dom, s, opts.kappa)
    starts = []
    if opts.warm_start is not None:
        starts.append(("warm", np.abs(np.asarray(opts.warm_start, dtype=float))))
    for name in opts.starts:
        if name == "eigenvector":
            starts.append((name, np.abs(quadratic_eigen(dom, s, w, opts.kappa)[1])))
        elif name == "distance":
            starts.append((name, dom.delta.copy()))
        elif name == "random":
            rng = np.random.default_rng(opts.seed)
            for j in range(opts.n_random):
                starts.append((f"random{j}", rng.random(dom.size) + 0.05))
        else:
            raise ValueError(f"unknown start {name!r}")
    if not starts:
        raise ValueError("no starts configured")
    best = None
    runs = []
    for name, v0 in starts:
        v, S, its, conv, hist = _descend(v0, f, w, hn, float(alpha), K, opts.max_iter, opts.rtol)
        runs.append({"start": name, "lambda": S / alpha, "iterations": its, "converged": conv})
        if best is None or S < best[1] or (S == best[1] and conv and not best[3]):
            best = (v, S, its, conv, hist)
    v, S, its, conv, hist = best
    any_conv = any(r["converged"] for r in runs)
    u = GridFunction(v, dom)
    G = float(np.sum(w * f.A(np.abs(v))) * hn)
    res = CriticalValueResult(
        alpha=float(alpha), lam=S / alpha,
        Lambda=_lagrange(v, f, w, hn, K), minimizer=u, iterations=its,
        restarts=runs, converged=any_conv,
        constraint_residual=abs(G - alpha), history=hist)
    if not any_conv:
        raise NonconvergentError("nonconvergent", res)
    return res


def _lagrange(v, f, w, hn, K):
    av = np.abs(v)
    den = float(np.sum(w * f.a(av) * av) * hn)
    if not den > 0:
        raise DegeneratePairingError("degenerate test pairing")
    return _pairing_values(v, f, K) / den


def lagrange_eigenvalue(u: GridFunction, f: YoungFunction, omega, s: float,
                        kappa: float = COLLAR_KAPPA) -> float:
    """Multiplier from testing the discrete Euler-Lagrange equation with ``u``."""
    v, dom = _values(u)
    return _lagrange(v, f, _weights(omega, dom), dom.h ** dom.dim, pair_kernel(dom, s, kappa))


# -- energy map and alpha0 ---------------------------------------------------

@dataclass
class EnergyCurve:
    alphas: list
    energies: list
    results: list = field(repr=False)
    nonmonotone: list

    def pairs(self):
        return list(zip(self.alphas, self.energies))


def alpha_energy(dom, f, omega, s, alpha_list, opts: SolverOptions | None = None,
                 tol: float = 1e-7) -> EnergyCurve:
    """``E(alpha) = alpha * lambda_alpha`` for increasing ``alpha``.

    Each solve is warm-started from the previous minimizer.  Adjacent pairs
    with ``E(a_{k+1}) <= E(a_k) (1 + tol)`` are reported in ``nonmonotone``.
    """
    alphas = [float(a) for a in alpha_list]
    if any(a <= 0 for a in alphas) or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha list must be positive and increasing")
    opts = opts or SolverOptions()
    results, energies = [], []
    warm = None
    for a in alphas:
        o = SolverOptions(**{**opts.__dict__, "warm_start": warm})
        try:
            r = minimize_critical_value(dom, f, omega, a, s, o)
        except NonconvergentError as exc:
            raise NonconvergentError(f"nonconvergent at alpha={a:g}", exc.result) from None
        results.append(r)
        energies.append(a * r.lam)
        warm = r.minimizer.values
    bad = [(i, i + 1) for i in range(len(alphas) - 1)
           if not energies[i + 1] > energies[i] * (1 + tol)]
    return EnergyCurve(alphas, energies, results, bad)


@dataclass
class Alpha0Result:
    alpha0: float
    energy: float
    target: float
    evaluations: int
    result: CriticalValueResult = field(repr=False)


def solve_alpha0(dom, f, omega, s, opts: SolverOptions | None = None,
                 rtol: float = ALPHA0_RTOL) -> Alpha0Result:
    """Solve ``alpha lambda_alpha = r_Omega^n`` by a log-log secant iteration.

    The bracket grows geometrically from ``alpha = 1`` within ``[1e-8, 1e8]``;
    inside it Illinois-modified regula falsi runs until the relative residual
    is below ``rtol``.
    """
    opts = opts or SolverOptions()
    target = dom.r_Omega ** dom.dim
    cache = {}
    state = {"warm": None}

    def energy(la):
        if la not in cache:
            o = SolverOptions(**{**opts.__dict__, "warm_start": state["warm"]})
            r = minimize_critical_value(dom, f, omega, math.exp(la), s, o)
            state["warm"] = r.minimizer.values
            cache[la] = (math.exp(la) * r.lam, r)
        return cache[la]

    def phi(la):
        return math.log(energy(la)[0] / target)

    lo = hi = 0.0
    flo = fhi = phi(0.0)
    step = math.log(4.0)
    limit = math.log(1e8)
    while flo > 0:
        hi, fhi = lo, flo
        lo -= step
        if lo < -limit:
            raise Alpha0RangeError("alpha0 out of range")
        flo = phi(lo)
    while fhi < 0:
        lo, flo = hi, fhi
        hi += step
        if hi > limit:
            raise Alpha0RangeError("alpha0 out of range")
        fhi = phi(hi)
    best = min((lo, flo), (hi, fhi), key=lambda p: abs(p[1]))
    side = 0
    for _ in range(100):
        if abs(math.expm1(best[1])) <= rtol:
            break
        x = (lo * fhi - hi * flo) / (fhi - flo)
        fx = phi(x)
        best = (x, fx)
        if fx == 0:
            break
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
    la = best[0]
    E, r = energy(la)
    if abs(E - target) > rtol * target:
        raise NonconvergentError("alpha0 iteration did not reach tolerance", r)
    return Alpha0Result(alpha0=math.exp(la), energy=E, target=target,
                        evaluations=len(cache), result=r)


# -- Morrey and Hardy witnesses ---------------------------------------------

def _inverse_table(B: YoungFunction, ys: np.ndarray):
    """``B^{-1}`` at ``ys`` via a monotone table in log space, bisection outside."""
    t = np.logspace(-12, 12, 24 * 20 + 1)
    lB = B.log_A(t)
    ok = np.isfinite(lB)
    t, lB = t[ok], lB[ok]
    keep = np.concatenate([[True], np.diff(lB) > 0])
    t, lB = t[keep], lB[keep]
    ly = np.log(ys)
    out = np.empty_like(ys)
    inside = (ly >= lB[0]) & (ly <= lB[-1])
    if np.any(inside):
        out[inside] = np.exp(interpolate.PchipInterpolator(lB, np.log(t))(ly[inside]))
    if np.any(~inside):
        out[~inside] = inverse(B, ys[~inside])
    return out


def morrey_ratio(u: GridFunction, f: YoungFunction, n: int, s: float,
                 kappa: float = COLLAR_KAPPA) -> float:
    """Smallest constant in the modular Morrey inequality seen on the grid.

    The max over node pairs of ``|u(x)-u(y)| / (|x-y|^s B^{-1}(S(u)/|x-y|^n))``
    with ``B`` the conjugate of E; exterior partners enter through the nearest
    exterior node of each interior node.
    """
    v, dom = _values(u)
    if n != dom.dim:
        raise ValueError("n must match the domain dimension")
    S = modular_seminorm(u, f, s, kappa)
    if S == 0.0:
        return 0.0
    B = conjugate(E_young(f, n, s), numeric=True)
    K = pair_kernel(dom, s, kappa)
    iu = np.triu_indices(dom.size, 1)
    rho = K.R[iu]
    diff = np.abs(v[:, None] - v[None, :])[iu]
    rho_ext = dom.delta + 0.5 * dom.h
    all_rho = np.concatenate([rho, rho_ext])
    all_diff = np.concatenate([diff, np.abs(v)])
    # lattice distances repeat; invert B once per distinct value
    uniq, inv = np.unique(np.round(all_rho / dom.h, 9), return_inverse=True)
    r_u = uniq * dom.h
    denom = r_u ** s * _inverse_table(B, S / r_u ** n)
    return float(np.max(all_diff / denom[inv]))


def hardy_ratio(u: GridFunction, f: YoungFunction, s: float, variant: str = "origin",
                kappa: float = COLLAR_KAPPA) -> float:
    """``sum A(|u|/rho^s) h^n / S(u)`` with ``rho = |x|`` or ``delta_Omega(x)``."""
    v, dom = _values(u)
    if variant == "origin":
        if not dom.contains_origin():
            raise DomainError("origin not in domain")
        rho = np.linalg.norm(dom.coords, axis=1)
        rho = np.where(rho > 0, rho, 0.5 * dom.h)
    elif variant == "boundary":
        rho = dom.delta
    else:
        raise ValueError("variant must be 'origin' or 'boundary'")
    if not np.any(v != 0):
        return 0.0
    num = float(np.sum(f.A(np.abs(v) / rho ** s)) * dom.h ** dom.dim)
    return num / modular_seminorm(u, f, s, kappa)
