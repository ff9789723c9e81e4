"""Run configuration: defaults, an optional JSON file, then command-line flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

CONFIG_ENV = "PIERCED_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tolerance: float = 1e-9
    samples: int = 100_000
    n_cap: int = 14
    output: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")

    def override(self, **kwargs) -> RunConfig:
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)

    def echo(self) -> str:
        return "config: " + json.dumps(self.as_dict(), sort_keys=True)


def load_config(path: str | None = None) -> RunConfig:
    """Defaults, overlaid with the JSON file named by ``path`` or $PIERCED_CONFIG."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return RunConfig(**doc)
