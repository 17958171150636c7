"""
Exception hierarchy for stablegraph.

Every error carries the CLI exit code it maps to and a snake-case ``kind``
used in machine-readable error output.
"""

from typing import Optional


class StableGraphError(Exception):
    """Root of all stablegraph errors."""

    exit_code = 1
    kind = "error"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class ConfigError(StableGraphError, ValueError):
    exit_code = 2
    kind = "config_error"


class ProgramSyntaxError(StableGraphError, ValueError):
    """Malformed program text. Carries the 1-based line and column."""

    exit_code = 2
    kind = "syntax_error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"Syntax error at line {line}:{column} - {message}"
        super().__init__(message)

    def to_dict(self) -> dict:
        info = super().to_dict()
        info["line"] = self.line
        info["column"] = self.column
        return info


# === BUDGET ERRORS ===
class BudgetExceeded(StableGraphError):
    """A work budget (unfolding, cycles, hypotheses, atoms) ran out."""

    exit_code = 3
    kind = "budget_exceeded"

    def __init__(self, message: str, cap: Optional[int] = None):
        self.cap = cap
        super().__init__(message)

    def to_dict(self) -> dict:
        info = super().to_dict()
        info["cap"] = self.cap
        return info


class UnfoldBudgetExceeded(BudgetExceeded):
    kind = "unfold_budget_exceeded"


class CycleBudgetExceeded(BudgetExceeded):
    kind = "cycle_budget_exceeded"


class DecompositionBudgetExceeded(BudgetExceeded):
    kind = "decomposition_budget_exceeded"


class TooManyAtoms(BudgetExceeded):
    kind = "too_many_atoms"


# === SEMANTIC ERRORS ===
class InconsistentLog(StableGraphError):
    """A transform log references an atom whose truth value is unknown."""

    kind = "inconsistent_log"


class HypothesisOutOfRange(StableGraphError, ValueError):
    kind = "hypothesis_out_of_range"


class NotKernelProgram(StableGraphError, ValueError):
    """Coloring is only defined on EDGs of kernel programs."""

    kind = "not_kernel_program"
