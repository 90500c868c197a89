"""Run configuration shared by the library entry points and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .linalg import MERSENNE61

ENV_PREFIX = "DIAGCUT_"


@dataclass(frozen=True)
class RunConfig:
    prime: int = MERSENNE61
    trials: int = 3
    seed: int = 0
    exact_cap: int = 300
    depth: int = 6
    rank_threshold: int = 60
    jobs: int = 1
    format_version: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.prime != MERSENNE61:
            from sympy import isprime

            if not isprime(self.prime):
                raise ValueError(f"field modulus {self.prime} is not prime")

    def with_env(self, environ=None) -> "RunConfig":
        """Override fields from ``DIAGCUT_<FIELD>`` environment variables."""
        environ = os.environ if environ is None else environ
        updates = {}
        for f in fields(self):
            key = ENV_PREFIX + f.name.upper()
            if key in environ:
                updates[f.name] = int(environ[key])
        return replace(self, **updates) if updates else self
