"""Run configuration parsing and validation.

Configs are JSON objects; every validation failure raises
:class:`ConfigError` naming the offending field path.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import DomainGeometry, build_domain
from .errors import ConfigError, OrliczError
from .young import YoungFunction, from_spec

REGIMES = ("below_alpha0", "above_alpha0")


@dataclass
class RunConfig:
    young: YoungFunction
    young_spec: dict
    domain: DomainGeometry
    domain_spec: dict
    s: float
    n: int
    omega: np.ndarray
    omega_spec: dict
    alphas: list
    calibration_C: float = 1.0
    seed: int = 0
    outputs: dict = field(default_factory=dict)
    alpha0: bool = False
    alpha_regime: str = "above_alpha0"
    n_random: int = 1

    def echo(self) -> dict:
        return {"young": self.young_spec, "domain": self.domain_spec, "s": self.s,
                "n": self.n, "omega": self.omega_spec, "alpha": self.alphas,
                "calibration_C": self.calibration_C, "seed": self.seed,
                "alpha0": self.alpha0, "alpha_regime": self.alpha_regime,
                "n_random": self.n_random}


def _number(raw, path, positive=False, lo=None, hi=None):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(path, f"expected a number, got {raw!r}")
    v = float(raw)
    if not math.isfinite(v):
        raise ConfigError(path, "must be finite")
    if positive and not v > 0:
        raise ConfigError(path, "must be positive")
    if lo is not None and not v > lo:
        raise ConfigError(path, f"must be > {lo}")
    if hi is not None and not v < hi:
        raise ConfigError(path, f"must be < {hi}")
    return v


def _omega(raw, dom: DomainGeometry, base_dir):
    if raw is None:
        raw = {"constant": 1.0}
    if not isinstance(raw, dict):
        raise ConfigError("omega", "expected an object")
    if "constant" in raw:
        c = _number(raw["constant"], "omega.constant", positive=True)
        return np.full(dom.size, c), {"constant": c}
    if "grid" in raw:
        p = Path(raw["grid"])
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        try:
            vals = np.loadtxt(p, delimiter=None, dtype=float).ravel()
        except (OSError, ValueError) as exc:
            raise ConfigError("omega.grid", f"cannot read weight grid: {exc}") from None
        if vals.size != dom.size:
            raise ConfigError("omega.grid",
                              f"expected {dom.size} values (one per interior node), got {vals.size}")
        if np.any(vals < 0) or not np.any(vals > 0) or not np.all(np.isfinite(vals)):
            raise ConfigError("omega.grid", "weights must be finite, nonnegative, not all zero")
        return vals, {"grid": str(raw["grid"])}
    raise ConfigError("omega", "expected 'constant' or 'grid'")


def parse_config(raw: dict, base_dir=None) -> RunConfig:
    """Validate a config mapping and build the objects it describes."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if "young" not in raw:
        raise ConfigError("young", "missing field")
    if not isinstance(raw["young"], dict):
        raise ConfigError("young", "expected an object")
    try:
        f = from_spec(raw["young"], path="young", base_dir=base_dir)
    except ConfigError:
        raise
    except (OrliczError, ValueError, TypeError) as exc:
        raise ConfigError("young", str(exc)) from None

    dspec = raw.get("domain")
    if not isinstance(dspec, dict):
        raise ConfigError("domain", "missing or not an object")
    h = dspec.get("h")
    if h is not None:
        h = _number(h, "domain.h", positive=True)
    elif dspec.get("type") != "mask":
        raise ConfigError("domain.h", "missing field")
    try:
        dom = build_domain({k: v for k, v in dspec.items() if k != "h"}, h, base_dir=base_dir)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("domain", f"invalid domain spec: {exc}") from None
    except OrliczError as exc:
        raise ConfigError("domain", str(exc)) from None

    if "s" not in raw:
        raise ConfigError("s", "missing field")
    s = _number(raw["s"], "s", lo=0.0, hi=1.0)
    n = raw.get("n", dom.dim)
    if isinstance(n, bool) or not isinstance(n, int) or n != dom.dim:
        raise ConfigError("n", f"must equal the domain dimension {dom.dim}")

    omega, omega_spec = _omega(raw.get("omega"), dom, base_dir)

    alpha = raw.get("alpha", 1.0)
    if isinstance(alpha, list):
        if not alpha:
            raise ConfigError("alpha", "empty list")
        alphas = [_number(a, f"alpha[{i}]", positive=True) for i, a in enumerate(alpha)]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ConfigError("alpha", "list must be strictly increasing")
    else:
        alphas = [_number(alpha, "alpha", positive=True)]

    C = _number(raw.get("calibration_C", 1.0), "calibration_C", positive=True)
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed", "must be a nonnegative integer")
    outputs = raw.get("outputs", {})
    if not isinstance(outputs, dict):
        raise ConfigError("outputs", "expected an object")
    alpha0 = raw.get("alpha0", False)
    if not isinstance(alpha0, bool):
        raise ConfigError("alpha0", "expected true or false")
    regime = raw.get("alpha_regime", "above_alpha0")
    if regime not in REGIMES:
        raise ConfigError("alpha_regime", f"must be one of {REGIMES}")
    n_random = raw.get("n_random", 1)
    if isinstance(n_random, bool) or not isinstance(n_random, int) or n_random < 0:
        raise ConfigError("n_random", "must be a nonnegative integer")
    return RunConfig(young=f, young_spec=dict(raw["young"]), domain=dom,
                     domain_spec=dict(dspec), s=s, n=n, omega=omega,
                     omega_spec=omega_spec, alphas=alphas, calibration_C=C,
                     seed=seed, outputs=outputs, alpha0=alpha0,
                     alpha_regime=regime, n_random=n_random)


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    return parse_config(raw, base_dir=p.parent)
