import json

import pytest

from jmlharness.config import ConfigError, GlobalConfig, ProviderSettings, load_config


def write(tmp_path, obj):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return p


def test_defaults():
    cfg = load_config()
    assert cfg.backend == "builtin"
    a = cfg.agent_config()
    assert (a.max_steps, a.planning_interval, a.max_refinement_cycles, a.max_pairs) == (12, 4, 3, 5)
    assert cfg.thresholds == (0.5, 0.5)
    assert cfg.mutation.k == 4


def test_full_file(tmp_path):
    cfg = load_config(write(tmp_path, {
        "backend": "openjml",
        "verifier": {"executable": "/opt/openjml/openjml", "timeout": 60, "flags": ["--esc"]},
        "provider": {"kind": "http", "endpoint": "http://localhost:8000/v1", "model": "m"},
        "mutation": {"k": 2, "integer_deltas": [1, -1]},
        "agent": {"max_steps": 20},
        "thresholds": [0.6, 0.4],
        "seed": 3,
    }))
    assert cfg.verifier.flags == ("--esc",)
    assert cfg.mutation.integer_deltas == (1, -1)
    assert cfg.agent_config().max_steps == 20
    assert cfg.agent_config().thresholds == (0.6, 0.4)
    assert cfg.path.endswith("cfg.json")


@pytest.mark.parametrize("obj", [
    {"backendd": "builtin"},
    {"verifier": {"exe": "x"}},
    {"provider": {"kind": "http", "url": "x"}},
    {"mutation": {"kk": 1}},
    {"agent": {"steps": 3}},
    {"agent": {"max_steps": 0}},
    {"backend": "z3"},
    {"thresholds": [0.5, 2.0]},
    {"provider": {"kind": "carrier-pigeon"}},
])
def test_rejects_bad_config(tmp_path, obj):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, obj))


def test_unreadable_and_invalid(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json")
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "{not json"))


def test_overrides_ignore_none():
    cfg = GlobalConfig().with_overrides(backend=None, workers=4)
    assert cfg.backend == "builtin" and cfg.workers == 4
    assert ProviderSettings().kind == "scripted"
