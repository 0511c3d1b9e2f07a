"""One JSON file holding every default; flags override it, unknown keys are errors.

Example::

    {
      "backend": "builtin",
      "verifier": {"executable": "openjml", "flags": ["--esc", "--quiet"], "timeout": 300, "parallelism": 1},
      "provider": {"kind": "http", "endpoint": "http://localhost:8000/v1", "model": "some-model"},
      "mutation": {"k": 4},
      "agent": {"max_steps": 12, "planning_interval": 4, "max_refinement_cycles": 3, "max_pairs": 5},
      "thresholds": [0.5, 0.5],
      "seed": 0,
      "workers": 1,
      "verbosity": "warning"
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .agent.loop import AgentConfig
from .harness import DEFAULT_THRESHOLDS
from .testkit.mutation import MutationConfig
from .verify.config import VerifierConfig


class ConfigError(ValueError):
    pass


def _check_keys(section: str, obj: dict, allowed) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{section} must be an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {section}: {sorted(unknown)}")


@dataclass(frozen=True)
class ProviderSettings:
    kind: str = "scripted"  # scripted | http
    script: Optional[str] = None
    endpoint: Optional[str] = None
    model: Optional[str] = None
    api_key_env: str = "JMLHARNESS_API_KEY"
    timeout: float = 120.0

    def __post_init__(self):
        if self.kind not in ("scripted", "http"):
            raise ConfigError(f"unknown provider kind {self.kind!r}")


_AGENT_KEYS = ("max_steps", "planning_interval", "max_refinement_cycles", "max_pairs")


@dataclass(frozen=True)
class GlobalConfig:
    path: Optional[str] = None
    backend: str = "builtin"
    verifier: VerifierConfig = VerifierConfig()
    provider: ProviderSettings = ProviderSettings()
    mutation: MutationConfig = MutationConfig()
    agent: dict = field(default_factory=dict)
    thresholds: tuple = DEFAULT_THRESHOLDS
    seed: int = 0
    workers: int = 1
    verbosity: str = "warning"

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if self.backend not in ("builtin", "openjml"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.verbosity not in ("debug", "info", "warning", "error"):
            raise ConfigError(f"unknown verbosity {self.verbosity!r}")
        _check_keys("agent", self.agent, _AGENT_KEYS)

    def agent_config(self) -> AgentConfig:
        return AgentConfig(
            thresholds=self.thresholds,
            provider=self.provider.kind,
            seed=self.seed,
            mutation=self.mutation,
            **self.agent,
        )

    def with_overrides(self, **kw) -> "GlobalConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def from_json(cls, obj: dict, path: Optional[str] = None) -> "GlobalConfig":
        top = [f.name for f in fields(cls) if f.name != "path"]
        _check_keys("config", obj, top)
        kw = {k: v for k, v in obj.items() if k in ("backend", "seed", "workers", "verbosity", "agent")}
        try:
            if "verifier" in obj:
                _check_keys("verifier", obj["verifier"], [f.name for f in fields(VerifierConfig)])
                kw["verifier"] = VerifierConfig.from_json(obj["verifier"])
            if "provider" in obj:
                _check_keys("provider", obj["provider"], [f.name for f in fields(ProviderSettings)])
                kw["provider"] = ProviderSettings(**obj["provider"])
            if "mutation" in obj:
                _check_keys("mutation", obj["mutation"], [f.name for f in fields(MutationConfig)])
                kw["mutation"] = MutationConfig.from_json(obj["mutation"])
            if "thresholds" in obj:
                kw["thresholds"] = tuple(float(x) for x in obj["thresholds"])
            cfg = cls(path=path, **kw)
            cfg.agent_config()  # validates ranges
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return cfg


def load_config(path=None) -> GlobalConfig:
    if path is None:
        return GlobalConfig()
    p = Path(path)
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p} is not valid JSON: {exc}") from exc
    return GlobalConfig.from_json(obj, str(p))
