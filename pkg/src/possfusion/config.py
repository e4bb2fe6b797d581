"""Global numeric tolerances and size caps."""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, fields


@dataclass
class Settings:
    eps: float = 1e-9
    max_vars: int = 20
    explosion_cap: int = 200_000
    n_max: int = 8


settings = Settings()


@contextlib.contextmanager
def configured(**overrides):
    """Temporarily override fields of the global settings."""
    names = {f.name for f in fields(Settings)}
    unknown = set(overrides) - names
    if unknown:
        raise TypeError(f"unknown settings: {sorted(unknown)}")
    saved = {k: getattr(settings, k) for k in overrides}
    try:
        for k, v in overrides.items():
            setattr(settings, k, v)
        yield settings
    finally:
        for k, v in saved.items():
            setattr(settings, k, v)
