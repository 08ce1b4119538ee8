"""Toolkit configuration: a single JSON document naming backends, quota
limits, the sample store, and the simulated-corpus parameters."""

from __future__ import annotations

import datetime
import json
import os
from dataclasses import dataclass, field

from . import backend as be
from .errors import ConfigurationError
from .sim_index import InterfaceKind, SimConfig, SimCorpus, generate_corpus

ENV_CONFIG = "WEBOMETER_CONFIG"


@dataclass
class BackendSpec:
    name: str
    kind: str  # "sim" | "http"
    interface: str = "standard"  # sim only
    base_url: str = ""  # http only


@dataclass
class Config:
    backends: list[BackendSpec] = field(
        default_factory=lambda: [
            BackendSpec(name="standard", kind="sim", interface="standard"),
            BackendSpec(name="api", kind="sim", interface="api"),
        ]
    )
    default_k: int = 100
    daily_limit: int = be.DAILY_LIMIT
    store_path: str = "samples.jsonl"
    state_dir: str = "."
    sim: SimConfig = field(default_factory=SimConfig)
    enforce_quota: bool = True

    def validate(self) -> None:
        if not self.backends:
            raise ConfigurationError("backends", "at least one backend required")
        names = [b.name for b in self.backends]
        if len(names) != len(set(names)):
            raise ConfigurationError("backends", "backend names must be unique")
        for b in self.backends:
            if b.kind not in ("sim", "http"):
                raise ConfigurationError("backends", f"unknown kind {b.kind!r}")
            if b.kind == "sim" and b.interface not in ("standard", "api"):
                raise ConfigurationError(
                    "backends", f"unknown sim interface {b.interface!r}"
                )
            if b.kind == "http" and not b.base_url:
                raise ConfigurationError("backends", f"{b.name}: base_url required")


def load_config(path: str | None) -> Config:
    """Read the JSON config file; missing path gives the default config."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        cfg = Config()
        cfg.validate()
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError("config", f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigurationError("config", f"invalid JSON in {path}: {exc}") from exc
    cfg = Config()
    if "backends" in doc:
        cfg.backends = [
            BackendSpec(
                name=b["name"],
                kind=b["kind"],
                interface=b.get("interface", "standard"),
                base_url=b.get("base_url", ""),
            )
            for b in doc["backends"]
        ]
    cfg.default_k = int(doc.get("default_k", cfg.default_k))
    cfg.daily_limit = int(doc.get("daily_limit", cfg.daily_limit))
    cfg.store_path = doc.get("store_path", cfg.store_path)
    cfg.state_dir = doc.get("state_dir", os.path.dirname(path) or ".")
    cfg.enforce_quota = bool(doc.get("enforce_quota", True))
    if "sim" in doc:
        sim = doc["sim"]
        if "filetype_weights" in sim:
            sim["filetype_weights"] = tuple(sim["filetype_weights"].items())
        if "tld_alphabet" in sim:
            sim["tld_alphabet"] = tuple(sim["tld_alphabet"])
        try:
            cfg.sim = SimConfig(**sim)
        except TypeError as exc:
            raise ConfigurationError("sim", str(exc)) from exc
    cfg.validate()
    cfg.sim.validate()
    return cfg


class Runtime:
    """Shared corpus + instantiated backends for one CLI/service run."""

    def __init__(self, config: Config, clock=datetime.date.today):
        self.config = config
        self.clock = clock
        self._corpus: SimCorpus | None = None
        self.backends: dict[str, be.SearchBackend] = {}
        for spec in config.backends:
            quota = None
            if config.enforce_quota:
                quota = be.QuotaMeter(
                    daily_limit=config.daily_limit,
                    path=os.path.join(config.state_dir, f"{spec.name}.quota.json"),
                    clock=clock,
                )
            if spec.kind == "sim":
                kind = (
                    InterfaceKind.STANDARD
                    if spec.interface == "standard"
                    else InterfaceKind.API
                )
                self.backends[spec.name] = be.SimBackend(
                    self.corpus, kind, name=spec.name, quota=quota
                )
            else:
                self.backends[spec.name] = be.HttpBackend(
                    spec.base_url, name=spec.name, quota=quota
                )

    @property
    def corpus(self) -> SimCorpus:
        if self._corpus is None:
            self._corpus = generate_corpus(self.config.sim)
        return self._corpus
