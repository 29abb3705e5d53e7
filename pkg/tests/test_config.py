import json

import numpy as np
import pytest

from fracorlicz.config import load_config, parse_config
from fracorlicz.errors import ConfigError

BASE = {"young": {"kind": "p_q", "p": 2, "q": 3},
        "domain": {"type": "interval", "a": 0, "b": 1, "h": 0.125}, "s": 0.5}


def _with(**kw):
    raw = json.loads(json.dumps(BASE))
    for k, v in kw.items():
        if v is None:
            raw.pop(k, None)
        else:
            raw[k] = v
    return raw


def test_defaults():
    cfg = parse_config(_with())
    assert cfg.n == 1 and cfg.alphas == [1.0] and cfg.seed == 0
    assert cfg.calibration_C == 1.0 and cfg.alpha_regime == "above_alpha0"
    assert np.all(cfg.omega == 1.0) and cfg.domain.size == 8


@pytest.mark.parametrize("raw,path", [
    (_with(young=None), "young"),
    (_with(young={"kind": "p_q", "p": 2}), "young.q"),
    (_with(young={"kind": "bogus"}), "young.kind"),
    (_with(domain={"type": "interval", "a": 0, "b": 1}), "domain.h"),
    (_with(domain={"type": "interval", "a": 0, "b": 1, "h": -1}), "domain.h"),
    (_with(s=1.5), "s"),
    (_with(s=None), "s"),
    (_with(n=2), "n"),
    (_with(omega={"constant": -1}), "omega.constant"),
    (_with(alpha=[1.0, "x"]), "alpha[1]"),
    (_with(alpha=[2.0, 1.0]), "alpha"),
    (_with(calibration_C=0), "calibration_C"),
    (_with(seed=-3), "seed"),
    (_with(alpha_regime="sideways"), "alpha_regime"),
])
def test_errors_name_the_field(raw, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(raw)
    assert exc.value.path == path
    assert path in str(exc.value)


def test_omega_grid_file(tmp_path):
    (tmp_path / "w.txt").write_text("\n".join(["2.0"] * 8))
    (tmp_path / "c.json").write_text(json.dumps(_with(omega={"grid": "w.txt"})))
    cfg = load_config(tmp_path / "c.json")
    assert np.all(cfg.omega == 2.0)
    (tmp_path / "w.txt").write_text("1 2 3")
    with pytest.raises(ConfigError) as exc:
        load_config(tmp_path / "c.json")
    assert exc.value.path == "omega.grid"


def test_unreadable_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.json")


def test_echo_round_trips():
    cfg = parse_config(_with(alpha=[0.5, 2.0], seed=4))
    again = parse_config({**cfg.echo(), "domain": cfg.domain_spec})
    assert again.echo() == cfg.echo()
