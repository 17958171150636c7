"""
Pipelines over a parsed program.

Usage:
    engine = create_engine()
    result = engine.solve(program)                # raises StableGraphError
    result, error = engine.run_safely(engine.solve, program)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple

import pandas as pd

from analysis import (Decomposition, ExistenceVerdict, check_necessary_condition, decompose,
                      solve_by_decomposition)
from coloring import solve_colorings
from config import StableConfig
from errors import StableGraphError
from graphs import CycleInfo, Edg, build_edg
from kernel import KernelProgram, TransformLog, reconstruct_model, to_kernel
from oracle import enumerate_stable_brute
from program import Interpretation, Program, sort_models

logger = logging.getLogger(__name__)


@dataclass
class SolveResult:
    method: str
    models: List[Interpretation] = field(default_factory=list)
    truncated: bool = False
    nodes_expanded: int = 0

    @property
    def count(self) -> int:
        return len(self.models)

    def to_dict(self) -> dict:
        return {
            "models": [m.sorted_names() for m in self.models],
            "count": self.count,
            "truncated": self.truncated,
            "method": self.method,
        }


@dataclass
class AnalysisReport:
    kernel: KernelProgram
    log: TransformLog
    edg: Edg
    cycles: List[CycleInfo]
    decomposition: Decomposition

    def to_frame(self) -> pd.DataFrame:
        """One row per extended cycle."""
        rows = []
        for ec in self.decomposition:
            c = ec.cycle
            rows.append({
                "cycle": c.name,
                "parity": c.parity,
                "vertices": " -> ".join(v.label for v in c.vertices),
                "handles": ", ".join(f"{h.kind} {h.edge.source.label}" for h in c.handles) or "-",
                "H": ", ".join(sorted(ec.handle_atoms)) or "-",
                "auxiliary": " ".join(r.to_text() for r in ec.auxiliary_rules) or "-",
            })
        return pd.DataFrame(rows, columns=["cycle", "parity", "vertices", "handles", "H", "auxiliary"])

    def to_dict(self) -> dict:
        return {
            "cycles": [
                {
                    "name": ec.cycle.name,
                    "parity": ec.cycle.parity,
                    "vertices": [v.label for v in ec.cycle.vertices],
                    "atoms": ec.cycle.atom_names,
                    "handles": [
                        {"kind": h.kind, "source": h.edge.source.label, "target": h.edge.target.label,
                         "atom": h.source_atom.name}
                        for h in ec.cycle.handles
                    ],
                    "unconstrained": ec.cycle.is_unconstrained,
                    "auxiliary_rules": [r.to_text() for r in ec.auxiliary_rules],
                    "handle_atoms": sorted(ec.handle_atoms),
                }
                for ec in self.decomposition
            ],
            "bridges": [
                {
                    "chain": [v.label for v in b.vertices],
                    "rules": [self.edg.rule_of(v).to_text() for v in b.vertices],
                    "from": [f"C{n}" for n in b.source_cycles],
                    "to": [f"C{n}" for n in b.target_cycles],
                }
                for b in self.decomposition.bridges
            ],
            "bridge_rules": [r.to_text() for r in self.decomposition.bridge_rules],
        }


@dataclass
class VerifyResult:
    method: str
    expected: List[Interpretation]
    actual: List[Interpretation]

    @property
    def matches(self) -> bool:
        return self.expected == self.actual

    def summary(self) -> str:
        if self.matches:
            noun = "model" if len(self.actual) == 1 else "models"
            return f"{self.method} == brute: {len(self.actual)} {noun}"
        return f"{self.method} != brute: {len(self.actual)} vs {len(self.expected)} models"

    def to_frame(self) -> pd.DataFrame:
        """Every model found by either side, with where it was found."""
        rows = []
        for model in sort_models(self.expected + self.actual):
            rows.append({
                "model": str(model),
                self.method: model in self.actual,
                "brute": model in self.expected,
            })
        return pd.DataFrame(rows, columns=["model", self.method, "brute"])


class StableModelEngine:
    """Runs the kernel, graph, analysis and solver stages with one configuration."""

    def __init__(self, config: Optional[StableConfig] = None):
        self.config = (config or StableConfig()).validate()
        logger.info(
            f"Engine ready: method={self.config.method}, heuristic={self.config.heuristic}, "
            f"max_models={self.config.max_models}"
        )

    def kernel(self, program: Program) -> Tuple[KernelProgram, TransformLog]:
        return to_kernel(program, self.config.unfold_cap)

    def analyze(self, program: Program) -> AnalysisReport:
        """Cycles, handles and extended cycles of the program's kernel."""
        kernel, log = self.kernel(program)
        g = build_edg(kernel.program)
        decomposition = decompose(kernel, g, self.config.max_cycles)
        cycles = [ec.cycle for ec in decomposition]
        return AnalysisReport(kernel, log, g, cycles, decomposition)

    def check(self, program: Program) -> ExistenceVerdict:
        kernel, _ = self.kernel(program)
        return check_necessary_condition(
            kernel,
            max_cycles=self.config.max_cycles,
            hypothesis_budget=self.config.hypothesis_budget,
        )

    def solve(self, program: Program, method: Optional[str] = None) -> SolveResult:
        method = method or self.config.method
        if method == "brute":
            return self._cap(SolveResult(method, enumerate_stable_brute(program, self.config.atom_cap)))

        kernel, log = self.kernel(program)
        if method == "decomposition":
            kernel_models = solve_by_decomposition(
                kernel,
                max_cycles=self.config.max_cycles,
                hypothesis_budget=self.config.hypothesis_budget,
                atom_cap=self.config.atom_cap,
            )
            result = SolveResult(method, [reconstruct_model(s, log) for s in kernel_models])
            return self._cap(result)

        search = solve_colorings(
            build_edg(kernel.program),
            max_models=self.config.max_models,
            heuristic=self.config.heuristic,
            max_cycles=self.config.max_cycles,
        )
        models = sort_models(reconstruct_model(s, log) for s in search.models)
        return SolveResult(method, models, search.truncated, search.nodes_expanded)

    def verify(self, program: Program, method: Optional[str] = None) -> VerifyResult:
        """Compare a solver against brute-force GL enumeration."""
        method = method or self.config.method
        expected = enumerate_stable_brute(program, self.config.atom_cap)
        actual = self.solve(program, method).models
        result = VerifyResult(method, sort_models(expected), sort_models(actual))
        if not result.matches:
            logger.warning(f"Verification mismatch: {result.summary()}")
        return result

    def run_safely(self, fn: Callable[..., Any], *args, **kwargs) -> Tuple[Optional[Any], Optional[str]]:
        """
        Call ``fn`` and return (result, error_message) instead of raising.
        """
        try:
            return fn(*args, **kwargs), None
        except StableGraphError as e:
            return None, str(e)
        except Exception as e:
            logger.error(f"Unexpected error in {getattr(fn, '__name__', fn)}: {e}", exc_info=True)
            return None, "❌ Internal error: analysis failed"

    def _cap(self, result: SolveResult) -> SolveResult:
        models = sort_models(result.models)
        if len(models) > self.config.max_models:
            logger.warning(f"Model cap of {self.config.max_models} reached; output truncated")
            return SolveResult(result.method, models[:self.config.max_models], True, result.nodes_expanded)
        return SolveResult(result.method, models, result.truncated, result.nodes_expanded)


# === FACTORY FUNCTION ===
def create_engine(config: Optional[StableConfig] = None, **overrides) -> StableModelEngine:
    """
    Create a configured StableModelEngine.

    Args:
        config: base configuration (defaults to ``StableConfig.from_env()``)
        overrides: field overrides; ``None`` values are ignored
    """
    base = config or StableConfig.from_env()
    return StableModelEngine(base.with_overrides(**overrides))
