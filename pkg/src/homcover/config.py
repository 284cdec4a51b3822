"""Run configuration shared by the pipeline and the command line."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Config:
    k_max: int = 8
    class_max: int = 4
    primes: tuple = (2, 3, 5, 7, 11)
    max_stages: int = 3
    edge_cap: int = 10**5
    cycle_cap: int = 10**6
    word_budget: int = 10**7
    char_denominators: tuple = (2, 3, 4, 5, 6, 8)
    shadow_ks: tuple = (10, 40)
    specialize_tol: float = 1e-10
    radius_slack: float = 1e-8
    heuristic_tol: float = 1e-6
    seed: int = 0
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    verbosity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "char_denominators", tuple(int(d) for d in self.char_denominators))
        object.__setattr__(self, "shadow_ks", tuple(int(k) for k in self.shadow_ks))
        for name in ("k_max", "class_max", "max_stages", "edge_cap", "cycle_cap", "word_budget", "jobs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.primes or any(p < 2 for p in self.primes):
            raise ValueError("primes must be at least 2")
        if min(self.specialize_tol, self.radius_slack, self.heuristic_tol) <= 0:
            raise ValueError("tolerances must be positive")

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("jobs")  # machine dependent; never affects results
        for k in ("primes", "char_denominators", "shadow_ks"):
            d[k] = list(d[k])
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Config":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)
