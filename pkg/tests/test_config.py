import json

import pytest

from avcensus import config
from avcensus.errors import PreconditionError


def test_defaults():
    assert config.get("weil.max_g") == 4
    assert config.get("weil.max_q") == 9
    assert config.get("cl.prng") == "philox4x64-10"


def test_unknown_key_rejected():
    with pytest.raises(PreconditionError):
        config.set_value("weil.nope", 1)


def test_load_and_reset(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"version": 1, "hermitian.max_rank": 3}))
    config.load(p)
    assert config.get("hermitian.max_rank") == 3
    config.reset()
    assert config.get("hermitian.max_rank") == 4


def test_bad_files(tmp_path):
    with pytest.raises(PreconditionError):
        config.load(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(PreconditionError):
        config.load(p)


def test_environment(tmp_path, monkeypatch):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"version": 1, "ec.max_scan_p": 50}))
    monkeypatch.setenv("AVCENSUS_CONFIG", str(p))
    config.from_environment()
    assert config.get("ec.max_scan_p") == 50
