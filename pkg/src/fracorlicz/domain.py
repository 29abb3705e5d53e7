"""Rasterized bounded domains in one and two dimensions.

Nodes are cell centers ``offset + (k + 1/2) h`` of a global lattice.  A
shape is rasterized by keeping the centers that fall strictly inside it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .errors import ConfigError, DomainError

BRUTE_FORCE_PAIRS = 4_000_000
PDIST_MAX_NODES = 3000


@dataclass(frozen=True, eq=False)
class DomainGeometry:
    """Interior lattice nodes of a domain together with its geometry.

    ``delta`` is the distance from each interior node to the complement,
    measured as the distance to the nearest exterior cell center minus
    ``h/2`` (the boundary sits between the two centers).
    """

    dim: int
    h: float
    index: np.ndarray          # (K, dim) integer lattice indices
    offset: np.ndarray         # (dim,) translation of the lattice
    delta: np.ndarray          # (K,)
    r_Omega: float
    d_Omega: float
    measure: float
    spec: dict

    @property
    def size(self) -> int:
        return int(self.index.shape[0])

    @property
    def coords(self) -> np.ndarray:
        return self.offset[None, :] + (self.index + 0.5) * self.h

    @property
    def bounding_box(self) -> tuple:
        c = self.coords
        return tuple((float(lo), float(hi)) for lo, hi in zip(c.min(axis=0), c.max(axis=0)))

    @property
    def mask(self) -> np.ndarray:
        """Boolean grid over the index bounding box (axis k is coordinate k)."""
        lo = self.index.min(axis=0)
        shape = tuple(self.index.max(axis=0) - lo + 1)
        m = np.zeros(shape, dtype=bool)
        m[tuple((self.index - lo).T)] = True
        return m

    def contains_origin(self) -> bool:
        """True when the origin lies in a cell of the domain."""
        k = np.floor(-self.offset / self.h).astype(int)
        return bool(np.any(np.all(self.index == k[None, :], axis=1)))

    def translate(self, shift) -> "DomainGeometry":
        shift = np.asarray(shift, dtype=float).reshape(self.dim)
        return replace(self, offset=self.offset + shift,
                       spec={**self.spec, "translated_by": shift.tolist()})

    def to_dict(self) -> dict:
        return {"dim": self.dim, "h": self.h, "nodes": self.size,
                "r_Omega": self.r_Omega, "d_Omega": self.d_Omega,
                "measure": self.measure,
                "bounding_box": [list(b) for b in self.bounding_box],
                "spec": self.spec}


# -- rasterization -----------------------------------------------------------

def _centers(lo, hi, h):
    """Lattice indices whose centers may fall in ``(lo, hi)``."""
    k0 = math.floor(lo / h - 0.5) - 1
    k1 = math.ceil(hi / h - 0.5) + 1
    return np.arange(k0, k1 + 1)


def _raster_box(lo, hi, h):
    axes = [_centers(a, b, h) for a, b in zip(lo, hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)
    return idx, (idx + 0.5) * h


def _vec(spec, key, dim, path):
    try:
        v = np.asarray(spec[key], dtype=float).reshape(dim)
    except KeyError:
        raise ConfigError(f"{path}.{key}", "missing field") from None
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}", f"expected {dim} numbers") from None
    if not np.all(np.isfinite(v)):
        raise ConfigError(f"{path}.{key}", "must be finite")
    return v


def read_mask_file(path) -> tuple:
    """Parse a mask file: header ``h=<spacing>`` then rows of 0/1.

    Row ``i``, column ``j`` is lattice node ``(i, j)``; a single row gives a
    one-dimensional mask.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].replace(" ", "").startswith("h="):
        raise ConfigError("domain.path", "mask file must start with 'h=<spacing>'")
    try:
        h = float(lines[0].replace(" ", "")[2:])
    except ValueError:
        raise ConfigError("domain.path", "bad spacing in mask header") from None
    rows = []
    for ln in lines[1:]:
        cells = ln.replace(",", " ").split()
        if len(cells) == 1 and len(cells[0]) > 1:
            cells = list(cells[0])
        if any(c not in "01" for c in cells):
            raise ConfigError("domain.path", f"mask rows must hold 0/1, got {ln!r}")
        rows.append([c == "1" for c in cells])
    if len({len(r) for r in rows}) != 1:
        raise ConfigError("domain.path", "mask rows have unequal length")
    mask = np.array(rows, dtype=bool)
    if mask.shape[0] == 1:
        mask = mask[0]
    return h, mask


def build_domain(spec: dict, h: float | None = None, base_dir=None) -> DomainGeometry:
    """Rasterize ``spec`` at spacing ``h``.

    Supported types: ``interval`` (``a``, ``b``), ``rectangle`` (``lo``,
    ``hi``), ``disc`` (``center``, ``radius``) and ``mask`` (``path`` to a
    mask file, or an inline ``mask`` array with ``h``).
    """
    kind = spec.get("type")
    if kind == "mask":
        if "path" in spec:
            p = Path(spec["path"])
            if base_dir is not None and not p.is_absolute():
                p = Path(base_dir) / p
            h_file, mask = read_mask_file(p)
            h = h_file if h is None else h
        else:
            mask = np.asarray(spec.get("mask"), dtype=bool)
            h = spec.get("h", h)
        return from_mask(mask, h, spec=dict(spec))
    if h is None or not h > 0:
        raise ConfigError("domain.h", "spacing must be positive")
    h = float(h)
    if kind == "interval":
        a, b = float(spec["a"]), float(spec["b"])
        if not a < b:
            raise ConfigError("domain", "interval needs a < b")
        idx, x = _raster_box([a], [b], h)
        inside = (x[:, 0] > a) & (x[:, 0] < b)
    elif kind == "rectangle":
        lo, hi = _vec(spec, "lo", 2, "domain"), _vec(spec, "hi", 2, "domain")
        if not np.all(lo < hi):
            raise ConfigError("domain", "rectangle needs lo < hi")
        idx, x = _raster_box(lo, hi, h)
        inside = np.all((x > lo) & (x < hi), axis=1)
    elif kind == "disc":
        c = _vec(spec, "center", 2, "domain")
        R = float(spec.get("radius", 0))
        if not R > 0:
            raise ConfigError("domain.radius", "must be positive")
        idx, x = _raster_box(c - R, c + R, h)
        inside = np.sum((x - c) ** 2, axis=1) < R * R
    else:
        raise ConfigError("domain.type", f"unknown domain type {kind!r}")
    return _from_index(idx[inside], h, np.zeros(idx.shape[1]), dict(spec))


def from_mask(mask, h, spec=None) -> DomainGeometry:
    """Domain from a boolean grid; ``mask[k]`` is lattice node ``k``."""
    mask = np.atleast_1d(np.asarray(mask, dtype=bool))
    if h is None or not float(h) > 0:
        raise ConfigError("domain.h", "spacing must be positive")
    if mask.ndim not in (1, 2):
        raise DomainError("only 1D and 2D masks are supported")
    idx = np.argwhere(mask)
    return _from_index(idx, float(h), np.zeros(mask.ndim), spec or {"type": "mask"})


def _from_index(idx, h, offset, spec) -> DomainGeometry:
    if idx.shape[0] == 0:
        raise DomainError("domain vanishes at this resolution")
    idx = np.asarray(idx, dtype=np.int64)
    dim = idx.shape[1]
    delta = boundary_distance(idx, h)
    d = _diameter(idx, h)
    return DomainGeometry(dim=dim, h=h, index=idx, offset=np.asarray(offset, dtype=float),
                          delta=delta, r_Omega=float(delta.max()), d_Omega=d,
                          measure=float(idx.shape[0] * h ** dim), spec=spec)


def _padded_mask(idx):
    lo = idx.min(axis=0) - 1
    shape = tuple(idx.max(axis=0) - lo + 2)
    m = np.zeros(shape, dtype=bool)
    m[tuple((idx - lo).T)] = True
    return m, lo


def boundary_distance(idx, h, method: str = "auto") -> np.ndarray:
    """Per-node distance to the complement.

    ``brute`` scans all exterior centers of the padded bounding box;
    ``edt`` uses the exact Euclidean distance transform.  Both give the
    center-to-center distance, from which ``h/2`` is subtracted.
    """
    m, lo = _padded_mask(idx)
    n_ext = m.size - idx.shape[0]
    if method == "auto":
        method = "brute" if idx.shape[0] * n_ext <= BRUTE_FORCE_PAIRS else "edt"
    if method == "brute":
        ext = np.argwhere(~m)
        inn = idx - lo
        best = np.full(inn.shape[0], np.inf)
        step = max(1, BRUTE_FORCE_PAIRS // max(1, ext.shape[0]))
        for s in range(0, inn.shape[0], step):
            diff = inn[s:s + step, None, :] - ext[None, :, :]
            best[s:s + step] = np.sqrt(np.min(np.sum(diff * diff, axis=2), axis=1))
        dist = best * h
    elif method == "edt":
        dist = ndimage.distance_transform_edt(m, sampling=h)[tuple((idx - lo).T)]
    else:
        raise ValueError("method must be 'auto', 'brute' or 'edt'")
    return dist - 0.5 * h


def _diameter(idx, h) -> float:
    if idx.shape[0] == 1:
        return 0.0
    if idx.shape[1] == 1:
        return float((idx.max() - idx.min()) * h)
    pts = idx.astype(float)
    if pts.shape[0] > PDIST_MAX_NODES:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except QhullError:
            pass
    return float(pdist(pts).max() * h)
