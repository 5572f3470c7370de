"""Calibration constants: the implied constants behind every ``<~`` in the estimates.

Values are produced by ``python -m nodal_lab.calibrate`` and frozen in
``data/constants.toml``.  The environment variable ``NODAL_LAB_CONSTANTS``
points to an alternative file.
"""
from __future__ import annotations

import hashlib
import os
import sys
from functools import lru_cache
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

ENV_VAR = "NODAL_LAB_CONSTANTS"
DEFAULT_PATH = Path(__file__).with_name("data") / "constants.toml"


class CalibrationMissingError(KeyError):
    pass


def constants_path(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else DEFAULT_PATH


@lru_cache(maxsize=8)
def _load(path: str, mtime: float) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def load_constants(path: str | os.PathLike | None = None) -> dict:
    p = constants_path(path)
    if not p.exists():
        raise CalibrationMissingError(f"constants file not found: {p}")
    return _load(str(p), p.stat().st_mtime)


def constants_version(path: str | os.PathLike | None = None) -> str:
    """Version tag plus content hash, recorded in every run."""
    p = constants_path(path)
    digest = hashlib.sha256(p.read_bytes()).hexdigest()[:16]
    data = load_constants(p)
    return f"{data.get('version', 'unversioned')}+{digest}"


def weight_entry(consts: dict, d: int, m: int, case: str) -> dict:
    try:
        return consts["weight"][f"d{d}"][f"m{m}"][case]
    except KeyError:
        raise CalibrationMissingError(f"no calibrated weight constants for d={d}, m={m}, case {case}") from None


def section(consts: dict, name: str) -> dict:
    try:
        return consts[name]
    except KeyError:
        raise CalibrationMissingError(f"constants file has no [{name}] section") from None


def save_constants(data: dict, path: str | os.PathLike) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        tomli_w.dump(data, fh)
