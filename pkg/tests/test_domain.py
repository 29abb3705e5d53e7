import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracorlicz import domain as dm
from fracorlicz.errors import ConfigError, DomainError


def _brute_delta(mask, h):
    """Distance from each true cell to the nearest false cell of the padded grid, minus h/2."""
    m = np.pad(np.atleast_2d(mask), 1)
    inside = np.argwhere(m)
    outside = np.argwhere(~m)
    d = np.array([np.min(np.hypot(*(outside - p).T)) for p in inside])
    return d * h - h / 2


def test_interval_geometry():
    d = dm.build_domain({"type": "interval", "a": 0.0, "b": 1.0}, 1 / 64)
    assert d.size == 64
    assert d.r_Omega == pytest.approx(0.4921875)
    assert d.d_Omega == pytest.approx(0.984375)
    assert d.measure == pytest.approx(1.0)


def test_disc_geometry_near_continuum():
    d = dm.build_domain({"type": "disc", "center": [0, 0], "radius": 1.0}, 1 / 32)
    assert d.r_Omega == pytest.approx(1.0, abs=2 / 32)
    assert d.d_Omega == pytest.approx(2.0, abs=2 / 32)
    assert d.measure == pytest.approx(math.pi, rel=0.02)


def test_rectangle_inradius():
    d = dm.build_domain({"type": "rectangle", "lo": [0, 0], "hi": [2, 1]}, 1 / 16)
    assert d.r_Omega == pytest.approx(0.5, abs=1 / 16)
    assert d.d_Omega == pytest.approx(math.hypot(2, 1), abs=2 / 16)


@given(arrays(bool, (7, 9), elements=st.booleans()))
@settings(max_examples=50, deadline=None)
def test_distance_methods_agree_with_oracle(mask):
    if not mask.any():
        return
    idx = np.argwhere(mask)
    h = 0.1
    brute = dm.boundary_distance(idx, h, "brute")
    edt = dm.boundary_distance(idx, h, "edt")
    oracle = _brute_delta(mask, h)
    assert np.allclose(brute, oracle)
    assert np.allclose(edt, oracle)


@given(arrays(bool, (6, 6), elements=st.booleans()))
@settings(max_examples=40, deadline=None)
def test_diameter_matches_pairwise_max(mask):
    if not mask.any():
        return
    d = dm.from_mask(mask, 0.5)
    X = d.coords
    ref = max(np.linalg.norm(a - b) for a in X for b in X)
    assert d.d_Omega == pytest.approx(ref)
    assert d.r_Omega <= d.d_Omega / 2 + d.h


def test_large_domain_uses_hull_diameter():
    d = dm.build_domain({"type": "disc", "center": [0, 0], "radius": 1.0}, 1 / 40)
    assert d.size > 3000
    X = d.coords
    ext = X[np.argmax(X[:, 0])], X[np.argmin(X[:, 0])]
    assert d.d_Omega >= np.linalg.norm(ext[0] - ext[1])


def test_translation_invariance():
    d = dm.build_domain({"type": "disc", "center": [0, 0], "radius": 0.5}, 1 / 16)
    t = d.translate([0.3, -0.2])
    assert np.allclose(t.delta, d.delta)
    assert t.r_Omega == d.r_Omega and t.d_Omega == d.d_Omega
    assert np.allclose(t.coords, d.coords + [0.3, -0.2])
    assert d.contains_origin()
    assert not d.translate([2.0, 2.0]).contains_origin()


def test_mask_file(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("h=0.25\n0110\n1111\n0110\n")
    d = dm.build_domain({"type": "mask", "path": str(p)})
    assert d.h == 0.25 and d.size == 8
    assert d.mask.sum() == 8


@pytest.mark.parametrize("text", ["0110\n", "h=abc\n01\n", "h=1\n012\n", "h=1\n01\n011\n"])
def test_bad_mask_file(tmp_path, text):
    p = tmp_path / "m.txt"
    p.write_text(text)
    with pytest.raises(ConfigError):
        dm.read_mask_file(p)


def test_errors():
    with pytest.raises(ConfigError):
        dm.build_domain({"type": "hexagon"}, 0.1)
    with pytest.raises(ConfigError):
        dm.build_domain({"type": "interval", "a": 1.0, "b": 0.0}, 0.1)
    with pytest.raises(DomainError):
        dm.build_domain({"type": "interval", "a": 0.0, "b": 0.01}, 1.0)


def test_to_dict_is_plain():
    d = dm.build_domain({"type": "interval", "a": 0.0, "b": 1.0}, 0.25).to_dict()
    assert d["r_Omega"] == pytest.approx(0.375)
    assert d["nodes"] == 4
