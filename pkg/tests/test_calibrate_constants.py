import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_lab import calibrate, constants, weight as wt
from nodal_lab.constants import CalibrationMissingError


def test_shipped_file_has_every_section():
    c = constants.load_constants()
    for name in ("weight", "schrodinger", "theorem4", "semifactorial"):
        assert name in c
    for d in calibrate.DIMS:
        for m in calibrate.ORDERS:
            for case in ("a", "b"):
                e = constants.weight_entry(c, d, m, case)
                assert e["K"] > 0 and e["bound_max"] >= 1.0
    assert constants.constants_version().startswith(c["version"] + "+")


def test_stored_ceilings_cover_their_samples():
    c = constants.load_constants()
    for d in calibrate.DIMS:
        for m in calibrate.ORDERS:
            e = constants.weight_entry(c, d, m, "a")
            assert e["bound_max"] <= e["C0"] * math.exp(e["C1"] * wt.sigma_weight(d, m)) * (1 + 1e-12)
            assert wt.constant_estimate(d, m) >= 2 * e["bound_max"] * (1 - 1e-12)


def test_semifactorial_constant_is_reproducible():
    stored = constants.load_constants()["semifactorial"]["constant"]
    assert calibrate.calibrate_semifactorial()["constant"] == pytest.approx(stored, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(1e-3, 1e6)), min_size=1, max_size=12))
def test_fit_ceiling_covers_samples(pairs):
    xs, ys = map(np.array, zip(*pairs))
    C0, C1 = calibrate.fit_ceiling(xs, ys)
    assert C1 >= 0
    assert np.all(C0 * np.exp(C1 * xs) >= 2.0 * ys * (1 - 1e-12))


def test_env_override(tmp_path, monkeypatch):
    path = tmp_path / "c.toml"
    constants.save_constants({"version": "test", "semifactorial": {"constant": 3.0}}, path)
    monkeypatch.setenv(constants.ENV_VAR, str(path))
    c = constants.load_constants()
    assert c["semifactorial"]["constant"] == 3.0
    assert constants.constants_version().startswith("test+")
    with pytest.raises(CalibrationMissingError, match="d=2, m=1"):
        wt.select_alpha(2, 1)


def test_missing_file(tmp_path, monkeypatch):
    monkeypatch.setenv(constants.ENV_VAR, str(tmp_path / "absent.toml"))
    with pytest.raises(CalibrationMissingError, match="not found"):
        constants.load_constants()


def test_missing_section():
    with pytest.raises(CalibrationMissingError, match=r"\[theorem4\]"):
        constants.section({}, "theorem4")
