"""
Kernel transformation.

A kernel program has no positive conditions and every head occurs in some
body. ``to_kernel`` rewrites an arbitrary ground program into one, iterating
to fixpoint:

1. fact / falsity propagation,
2. positive unfolding (derivation branches that revisit an atom on their own
   positive-ancestor chain are dropped; positive loops are unfounded),
3. elimination of rules whose body can never hold,
4. tail stripping: heads occurring in no body are removed layer by layer and
   logged so ``reconstruct_model`` can put them back.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from budget import BudgetManager
from config import DEFAULT_UNFOLD_CAP
from errors import InconsistentLog, NotKernelProgram, UnfoldBudgetExceeded
from program import Interpretation, Program, Rule, program_from_rules

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NameRule:
    """A rule over atom names, used while rewriting and inside logs."""

    head: str
    pos: FrozenSet[str] = frozenset()
    neg: FrozenSet[str] = frozenset()

    @classmethod
    def from_rule(cls, rule: Rule) -> "NameRule":
        return cls(rule.head.name, frozenset(a.name for a in rule.pos), frozenset(a.name for a in rule.neg))

    @property
    def is_fact(self) -> bool:
        return not self.pos and not self.neg

    def body_atoms(self) -> FrozenSet[str]:
        return self.pos | self.neg

    def holds_in(self, true_atoms: Set[str]) -> bool:
        return self.pos <= true_atoms and not (self.neg & true_atoms)

    def to_text(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        body = [a for a in sorted(self.pos)] + [f"not {a}" for a in sorted(self.neg)]
        return f"{self.head} :- {', '.join(body)}."


@dataclass(frozen=True)
class UnfoldTrace:
    generated: int = 0
    dropped_loops: int = 0
    cap: int = DEFAULT_UNFOLD_CAP


@dataclass(frozen=True)
class TransformLog:
    """Replayable record of the simplifications done by ``to_kernel``."""

    established_facts: FrozenSet[str] = frozenset()
    forced_false: FrozenSet[str] = frozenset()
    stripped_tail: Tuple[Tuple[str, Tuple[NameRule, ...]], ...] = ()
    kernel_atoms: FrozenSet[str] = frozenset()
    unfold_trace: UnfoldTrace = field(default_factory=UnfoldTrace)

    @property
    def is_empty(self) -> bool:
        return not (self.established_facts or self.forced_false or self.stripped_tail
                    or self.unfold_trace.generated)

    def to_dict(self) -> dict:
        return {
            "facts": sorted(self.established_facts),
            "false": sorted(self.forced_false),
            "tail": [{"atom": atom, "rules": [r.to_text() for r in rules]}
                     for atom, rules in self.stripped_tail],
            "unfolded": self.unfold_trace.generated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def kernel_violations(program: Program) -> List[str]:
    """Reasons ``program`` is not a kernel program; empty when it is one."""
    problems = []
    referenced = set()
    for rule in program.rules:
        referenced.update(a.name for a in rule.body_atoms())
        if rule.pos:
            problems.append(f"rule '{rule}' has positive conditions")
        if rule.is_fact:
            problems.append(f"rule '{rule}' has an empty body")
    heads = {r.head.name for r in program.rules}
    for atom in program.atoms:
        if atom.name in heads and atom.name not in referenced:
            problems.append(f"head '{atom.name}' occurs in no body")
        if atom.name not in heads:
            problems.append(f"atom '{atom.name}' has no defining rule")
    return problems


@dataclass(frozen=True)
class KernelProgram:
    """A Program satisfying the kernel conditions."""

    program: Program

    def __post_init__(self):
        problems = kernel_violations(self.program)
        if problems:
            raise NotKernelProgram("not a kernel program: " + "; ".join(problems))

    @property
    def rules(self):
        return self.program.rules

    @property
    def atoms(self):
        return self.program.atoms


# === SIMPLIFICATION PASSES ===
def _propagate(rules: List[NameRule], universe: Iterable[str],
               facts: Set[str], false: Set[str]) -> List[NameRule]:
    """Fact and falsity propagation to fixpoint. Updates ``facts`` and ``false`` in place."""
    universe = list(universe)
    while True:
        facts.update(r.head for r in rules if r.is_fact)
        simplified = []
        for r in rules:
            if r.head in facts:
                continue
            if r.neg & facts or r.pos & false:
                continue
            r = NameRule(r.head, r.pos - facts, r.neg - false)
            if r.pos & r.neg:
                # needs x and not x
                continue
            simplified.append(r)
        heads = {r.head for r in simplified}
        newly_false = {a for a in universe if a not in heads and a not in facts and a not in false}
        false.update(newly_false)
        settled = simplified == rules and not newly_false and not any(r.is_fact for r in simplified)
        rules = simplified
        if settled:
            return rules


def _unfold(rules: List[NameRule], budget: BudgetManager) -> Tuple[List[NameRule], int]:
    """Replace every positive literal by the bodies of its defining rules."""
    definitions: Dict[str, List[NameRule]] = {}
    for r in rules:
        definitions.setdefault(r.head, []).append(r)

    unfolded: List[NameRule] = []
    dropped = 0
    for rule in rules:
        if not rule.pos:
            unfolded.append(rule)
            continue
        root_chain = frozenset([rule.head])
        if rule.head in rule.pos:
            dropped += 1
            continue
        # partial derivation: (negative literals, pending positive literals with their ancestor chain)
        stack = [(rule.neg, tuple((atom, root_chain) for atom in sorted(rule.pos)))]
        emitted: List[NameRule] = []
        seen = set()
        while stack:
            neg, pending = stack.pop()
            if not pending:
                derived = NameRule(rule.head, frozenset(), neg)
                if derived not in seen:
                    seen.add(derived)
                    emitted.append(derived)
                continue
            (atom, chain), rest = pending[0], pending[1:]
            chain = chain | {atom}
            # push in reverse so the first definition is expanded first
            for definition in reversed(definitions.get(atom, [])):
                if definition.pos & chain:
                    dropped += 1
                    continue
                new_neg = neg | definition.neg
                new_pending = rest + tuple((p, chain) for p in sorted(definition.pos))
                if any(p in new_neg for p, _ in new_pending):
                    continue
                budget.spend(1)
                stack.append((new_neg, new_pending))
        unfolded.extend(emitted)
    return unfolded, dropped


def _strip_tail(rules: List[NameRule]) -> Tuple[List[NameRule], List[Tuple[str, Tuple[NameRule, ...]]]]:
    stripped = []
    while True:
        in_bodies = set()
        for r in rules:
            in_bodies.update(r.body_atoms())
        tail_heads = []
        for r in rules:
            if r.head not in in_bodies and r.head not in tail_heads:
                tail_heads.append(r.head)
        if not tail_heads:
            return rules, stripped
        for head in tail_heads:
            stripped.append((head, tuple(r for r in rules if r.head == head)))
        rules = [r for r in rules if r.head not in tail_heads]


def to_kernel(program: Program, unfold_cap: Optional[int] = None) -> Tuple[KernelProgram, TransformLog]:
    """Equivalent kernel program plus the log needed to rebuild full models."""
    unfold_cap = DEFAULT_UNFOLD_CAP if unfold_cap is None else unfold_cap
    budget = BudgetManager(unfold_cap, UnfoldBudgetExceeded, "generated rules during unfolding")
    universe = program.atom_names
    rules = [NameRule.from_rule(r) for r in program.rules]
    facts: Set[str] = set()
    false: Set[str] = set()
    dropped_loops = 0

    while True:
        rules = _propagate(rules, universe, facts, false)
        if not any(r.pos for r in rules):
            break
        rules, dropped = _unfold(rules, budget)
        dropped_loops += dropped

    rules, tail = _strip_tail(rules)
    kernel = program_from_rules([(r.head, (), sorted(r.neg)) for r in rules], atom_order=universe)
    log = TransformLog(
        established_facts=frozenset(facts),
        forced_false=frozenset(false),
        stripped_tail=tuple(tail),
        kernel_atoms=frozenset(kernel.atom_names),
        unfold_trace=UnfoldTrace(budget.current_spent, dropped_loops, unfold_cap),
    )
    logger.info(
        f"Kernel: {len(kernel.rules)} rules; {len(facts)} facts, {len(false)} false, "
        f"{len(tail)} stripped, {budget.current_spent} unfolded"
    )
    return KernelProgram(kernel), log


def reconstruct_model(s: Interpretation, log: TransformLog) -> Interpretation:
    """Extend a kernel stable model to a stable model of the original program."""
    known = set(log.kernel_atoms) | log.established_facts | log.forced_false
    true_atoms = set(s.true_atoms) | log.established_facts
    for atom, rules in reversed(log.stripped_tail):
        fired = False
        for rule in rules:
            unknown = rule.body_atoms() - known
            if unknown:
                raise InconsistentLog(
                    f"stripped rule '{rule.to_text()}' references {sorted(unknown)} with no truth value"
                )
            fired = fired or rule.holds_in(true_atoms)
        known.add(atom)
        if fired:
            true_atoms.add(atom)
    return Interpretation(frozenset(true_atoms))
