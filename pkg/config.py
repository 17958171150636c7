"""Configuration for the stablegraph analyzer and solvers."""

import os
from dataclasses import dataclass, fields, replace
from typing import Optional

from errors import ConfigError

# --- DEFAULTS ---
DEFAULT_MAX_MODELS = 100_000
DEFAULT_MAX_CYCLES = 10_000
DEFAULT_ATOM_CAP = 24
DEFAULT_UNFOLD_CAP = 100_000
DEFAULT_HYPOTHESIS_BUDGET = 2 ** 20

METHODS = ("coloring", "decomposition", "brute")
HEURISTICS = ("handles", "lex")

# Environment overrides: variable name -> config field
ENV_OVERRIDES = {
    "STABLEGRAPH_MAX_MODELS": "max_models",
    "STABLEGRAPH_MAX_CYCLES": "max_cycles",
    "STABLEGRAPH_ATOM_CAP": "atom_cap",
    "STABLEGRAPH_UNFOLD_CAP": "unfold_cap",
    "STABLEGRAPH_HYPOTHESIS_BUDGET": "hypothesis_budget",
}

CAP_FIELDS = ("max_models", "max_cycles", "atom_cap", "unfold_cap", "hypothesis_budget")


@dataclass(frozen=True)
class StableConfig:
    """Caps and defaults shared by every pipeline stage."""

    max_models: int = DEFAULT_MAX_MODELS
    max_cycles: int = DEFAULT_MAX_CYCLES
    atom_cap: int = DEFAULT_ATOM_CAP
    unfold_cap: int = DEFAULT_UNFOLD_CAP
    hypothesis_budget: int = DEFAULT_HYPOTHESIS_BUDGET
    heuristic: str = "handles"
    method: str = "coloring"

    # Audit logging
    audit_log_file: Optional[str] = None
    enable_audit_logging: bool = False

    @classmethod
    def from_env(cls, environ=None) -> "StableConfig":
        environ = os.environ if environ is None else environ
        overrides = {}
        for var, field_name in ENV_OVERRIDES.items():
            if var in environ:
                try:
                    overrides[field_name] = int(environ[var])
                except ValueError:
                    raise ConfigError(f"{var} must be an integer, got {environ[var]!r}")
        if environ.get("STABLEGRAPH_AUDIT_LOG"):
            overrides["audit_log_file"] = environ["STABLEGRAPH_AUDIT_LOG"]
            overrides["enable_audit_logging"] = True
        return cls(**overrides).validate()

    def with_overrides(self, **changes) -> "StableConfig":
        """Copy with the non-None entries of ``changes`` applied."""
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in changes.items() if v is not None}).validate()

    def validate(self) -> "StableConfig":
        for name in CAP_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if self.method not in METHODS:
            raise ConfigError(f"Unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.heuristic not in HEURISTICS:
            raise ConfigError(f"Unknown heuristic {self.heuristic!r}; choose from {', '.join(HEURISTICS)}")
        return self
