"""Work budgets for the exponential parts of the pipeline."""

import logging
from typing import Type

from errors import BudgetExceeded

logger = logging.getLogger(__name__)


class BudgetManager:
    """Tracks and enforces a work budget (generated rules, cycles, hypotheses)"""

    def __init__(self, max_budget: int, error_cls: Type[BudgetExceeded] = BudgetExceeded,
                 what: str = "work units"):
        self.max_budget = max_budget
        self.error_cls = error_cls
        self.what = what
        self.current_spent = 0
        self.spend_log = []

    def check_affordability(self, cost: int) -> bool:
        """Check if there's enough budget left for this cost"""
        return (self.current_spent + cost) <= self.max_budget

    def spend(self, cost: int = 1, note: str = "") -> int:
        """
        Deduct ``cost`` from the budget.
        Raises ``error_cls`` if insufficient budget remains.
        """
        if not self.check_affordability(cost):
            raise self.error_cls(
                f"⛔ BUDGET EXCEEDED: more than {self.max_budget} {self.what}"
                + (f" ({note})" if note else ""),
                cap=self.max_budget,
            )
        self.current_spent += cost
        if note:
            self.spend_log.append({"note": note, "cost": cost, "remaining": self.remaining()})
        return self.remaining()

    def remaining(self) -> int:
        return max(0, self.max_budget - self.current_spent)

    def reset(self):
        self.current_spent = 0
        self.spend_log = []

    def get_report(self) -> str:
        report = f"{self.what}: {self.current_spent} of {self.max_budget} used"
        for i, entry in enumerate(self.spend_log, 1):
            report += f"\n{i}. {entry['note']}: cost {entry['cost']}, remaining {entry['remaining']}"
        return report
