"""
Structural analysis of programs: existence conditions and the cycle
decomposition solver.

An extended cycle is a negative cycle together with its auxiliary rules (the
other rules defining cycle atoms). Its handle atoms H are the atoms outside
the cycle that occur in the bodies of those rules. Completing the extended
cycle with a hypothesis I (a subset of H asserted as facts) gives a small
standalone program; stable models of the whole program are exactly the
consistent unions of stable models of completed cycles.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from budget import BudgetManager
from coloring import solve_colorings
from config import DEFAULT_ATOM_CAP, DEFAULT_HYPOTHESIS_BUDGET
from errors import BudgetExceeded, CycleBudgetExceeded, DecompositionBudgetExceeded, HypothesisOutOfRange
from graphs import NEGATIVE, Bridge, CycleInfo, Edg, build_dg, build_edg, enumerate_cycles, find_bridges
from kernel import KernelProgram, reconstruct_model, to_kernel
from oracle import enumerate_stable_brute, is_stable
from program import Interpretation, Program, Rule, program_from_rules, sort_models

logger = logging.getLogger(__name__)

NO_MODELS_PROVEN = "no_models_proven"
MODELS_GUARANTEED = "models_guaranteed"
UNKNOWN = "unknown"


# === SUFFICIENT CONDITIONS ===
@dataclass(frozen=True)
class StructureCheck:
    """Outcome of a structural test; ``witness`` explains a negative answer."""

    holds: bool
    witness: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def is_stratified(p: Program) -> StructureCheck:
    """True iff no dependency cycle goes through a negative edge. Witness: the offending SCC."""
    dg = build_dg(p)
    graph = nx.DiGraph()
    graph.add_nodes_from(dg.atoms)
    graph.add_edges_from((s, t) for s, t, _ in dg.edges)
    component_of = {}
    for i, component in enumerate(nx.strongly_connected_components(graph)):
        for atom in component:
            component_of[atom] = i
    for source, target, sign in dg.edges:
        if sign == NEGATIVE and component_of[source] == component_of[target]:
            members = sorted(a for a, c in component_of.items() if c == component_of[source])
            return StructureCheck(False, tuple(members))
    return StructureCheck(True)


def is_call_consistent(p: Program) -> StructureCheck:
    """
    True iff no atom depends on itself through an odd number of negative edges.

    Parity reachability on the doubled graph: node (a, 0) reaches (a, 1) iff
    some closed walk through ``a`` is odd. Witness: that walk, as atom names.
    """
    dg = build_dg(p)
    doubled = nx.DiGraph()
    for atom in dg.atoms:
        doubled.add_node((atom, 0))
        doubled.add_node((atom, 1))
    for source, target, sign in dg.edges:
        flip = 1 if sign == NEGATIVE else 0
        doubled.add_edge((source, 0), (target, flip))
        doubled.add_edge((source, 1), (target, 1 - flip))
    for atom in dg.atoms:
        if nx.has_path(doubled, (atom, 0), (atom, 1)):
            path = nx.shortest_path(doubled, (atom, 0), (atom, 1))
            return StructureCheck(False, tuple(name for name, _ in path))
    return StructureCheck(True)


# === EXTENDED CYCLES ===
def enumerate_hypotheses(handle_atoms: Iterable[str]) -> Iterator[FrozenSet[str]]:
    """Every subset of ``handle_atoms``, smallest first, then by name."""
    names = sorted(handle_atoms)
    for size in range(len(names) + 1):
        for chosen in combinations(names, size):
            yield frozenset(chosen)


@dataclass(frozen=True)
class ExtendedCycle:
    cycle: CycleInfo
    cycle_rules: Tuple[Rule, ...]
    auxiliary_rules: Tuple[Rule, ...]
    handle_atoms: FrozenSet[str]

    @property
    def rules(self) -> Tuple[Rule, ...]:
        return self.cycle_rules + self.auxiliary_rules

    @property
    def atom_names(self) -> FrozenSet[str]:
        return frozenset(a.name for a in self.cycle.atoms)

    @property
    def hypothesis_count(self) -> int:
        return 2 ** len(self.handle_atoms)


@dataclass(frozen=True)
class CompletedCycle:
    base: ExtendedCycle
    hypothesis: FrozenSet[str]
    program: Program


@dataclass(frozen=True)
class Decomposition:
    """All extended cycles, the bridges between them, and rules in no extended cycle."""

    extended_cycles: Tuple[ExtendedCycle, ...] = ()
    bridges: Tuple[Bridge, ...] = ()
    bridge_rules: Tuple[Rule, ...] = ()

    def __iter__(self):
        return iter(self.extended_cycles)

    def __len__(self) -> int:
        return len(self.extended_cycles)


def extend_cycle(cycle: CycleInfo, g: Edg) -> ExtendedCycle:
    cycle_rules = tuple(g.rule_of(v) for v in cycle.vertices)
    atoms = cycle.atoms
    auxiliary = tuple(r for r in g.program.rules if r.head in atoms and r not in cycle_rules)
    handle_atoms = frozenset(
        a.name for r in cycle_rules + auxiliary for a in r.body_atoms() if a not in atoms
    )
    return ExtendedCycle(cycle, cycle_rules, auxiliary, handle_atoms)


def decompose(p: KernelProgram, g: Optional[Edg] = None, max_cycles: Optional[int] = None) -> Decomposition:
    g = g or build_edg(p.program)
    cycles = enumerate_cycles(g, max_cycles)
    extended = tuple(extend_cycle(c, g) for c in cycles)
    covered = {r for ec in extended for r in ec.rules}
    residue = tuple(r for r in p.rules if r not in covered)
    return Decomposition(extended, tuple(find_bridges(g, cycles)), residue)


def _completed_program(rules: Sequence[Rule], hypothesis: Iterable[str]) -> Program:
    # rules of one head keep index order; heads keep atom-id order
    ordered = sorted(rules, key=lambda r: (r.head.id, r.index))
    specs = [(r.head.name, [a.name for a in sorted(r.pos)], [a.name for a in sorted(r.neg)]) for r in ordered]
    specs.extend((x, (), ()) for x in sorted(hypothesis))
    return program_from_rules(specs)


def complete(ec: ExtendedCycle, hypothesis: Iterable[str]) -> CompletedCycle:
    """Cycle rules plus auxiliary rules (original order), then the hypothesis as facts."""
    hypothesis = frozenset(hypothesis)
    outside = hypothesis - ec.handle_atoms
    if outside:
        raise HypothesisOutOfRange(
            f"hypothesis atoms {sorted(outside)} are not handle atoms of {ec.cycle.name} "
            f"(H = {sorted(ec.handle_atoms)})"
        )
    return CompletedCycle(ec, hypothesis, _completed_program(ec.rules, hypothesis))


def _completed_models(program: Program, max_cycles: Optional[int]) -> List[Interpretation]:
    kernel, log = to_kernel(program)
    search = solve_colorings(build_edg(kernel.program), max_cycles=max_cycles)
    return sort_models(reconstruct_model(s, log) for s in search.models)


def completed_cycle_outcomes(ec: ExtendedCycle, max_cycles: Optional[int] = None
                             ) -> List[Tuple[FrozenSet[str], List[Interpretation]]]:
    """
    Stable models of every completed cycle of ``ec``, one entry per hypothesis.

    Completed cycles are reduced to their kernel and colored, so a long ring
    costs a propagation pass per branch rather than a subset enumeration.
    """
    return [
        (hyp, _completed_models(complete(ec, hyp).program, max_cycles))
        for hyp in enumerate_hypotheses(ec.handle_atoms)
    ]


def stratifying_hypotheses(ec: ExtendedCycle) -> List[FrozenSet[str]]:
    """Hypotheses whose completed cycle simplifies to a stratified program (one stable model)."""
    found = []
    for hyp in enumerate_hypotheses(ec.handle_atoms):
        kernel, _ = to_kernel(complete(ec, hyp).program)
        if is_stratified(kernel.program):
            found.append(hyp)
    return found


def alternating_models(cycle: CycleInfo) -> Tuple[Interpretation, Interpretation]:
    """The two stable models of an unconstrained even cycle: alternate positions."""
    if cycle.is_odd:
        raise ValueError(f"{cycle.name} is odd; alternating models exist only for even cycles")
    first = Interpretation.of(v.atom.name for v in cycle.vertices[0::2])
    second = Interpretation.of(v.atom.name for v in cycle.vertices[1::2])
    return first, second


# === EXISTENCE CHECK ===
@dataclass(frozen=True)
class ExistenceVerdict:
    status: str
    reasons: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"status": self.status, "reasons": list(self.reasons)}


def _describe(ec: ExtendedCycle) -> str:
    return f"{ec.cycle.name} ({', '.join(ec.cycle.atom_names)})"


def _hypothesis_text(hyp: FrozenSet[str], handle_atoms: FrozenSet[str]) -> str:
    parts = [f"{a}" if a in hyp else f"not {a}" for a in sorted(handle_atoms)]
    return "{" + ", ".join(parts) + "}"


def check_necessary_condition(p: KernelProgram, g: Optional[Edg] = None,
                              max_cycles: Optional[int] = None,
                              hypothesis_budget: Optional[int] = None) -> ExistenceVerdict:
    """
    Structural verdict on stable-model existence.

    ``no_models_proven`` only when some odd cycle is unconstrained; otherwise
    ``models_guaranteed`` when the program is stratified or call-consistent,
    ``unknown`` when neither holds. Constrained odd cycles are completed under
    each hypothesis and what that reveals is added to the reasons; it never
    changes the status.
    """
    g = g or build_edg(p.program)
    hypothesis_budget = hypothesis_budget or DEFAULT_HYPOTHESIS_BUDGET
    try:
        decomposition = decompose(p, g, max_cycles)
    except CycleBudgetExceeded as exc:
        return ExistenceVerdict(UNKNOWN, (f"cycle enumeration stopped: {exc}",))

    reasons: List[str] = []
    proven_empty = False
    for ec in decomposition:
        if not ec.cycle.is_odd:
            continue
        if ec.cycle.is_unconstrained:
            reasons.append(f"unconstrained odd cycle {_describe(ec)}")
            proven_empty = True
            continue
        if ec.hypothesis_count > hypothesis_budget:
            reasons.append(f"odd cycle {_describe(ec)} not examined: {ec.hypothesis_count} hypotheses")
            continue
        try:
            outcomes = completed_cycle_outcomes(ec, max_cycles)
        except BudgetExceeded as exc:
            reasons.append(f"odd cycle {_describe(ec)} not examined: {exc}")
            continue
        satisfiable = [hyp for hyp, models in outcomes if models]
        if not satisfiable:
            reasons.append(f"odd cycle {_describe(ec)} has no completed cycle with a stable model")
        elif len(satisfiable) < len(outcomes):
            options = " or ".join(_hypothesis_text(h, ec.handle_atoms) for h in satisfiable)
            reasons.append(f"odd cycle {_describe(ec)} has stable models only when {options}")
    if proven_empty:
        return ExistenceVerdict(NO_MODELS_PROVEN, tuple(reasons))

    stratified = is_stratified(p.program)
    if stratified:
        return ExistenceVerdict(MODELS_GUARANTEED, tuple(reasons) + ("stratified",))
    consistent = is_call_consistent(p.program)
    if consistent:
        return ExistenceVerdict(MODELS_GUARANTEED, tuple(reasons) + ("call-consistent",))
    reasons.append(f"not call-consistent: odd dependency {' -> '.join(consistent.witness)}")
    return ExistenceVerdict(UNKNOWN, tuple(reasons))


# === DECOMPOSITION SOLVER ===
@dataclass
class _Component:
    name: str
    owned: FrozenSet[str]
    rules: Tuple[Rule, ...]
    handle_atoms: FrozenSet[str]
    # (hypothesis, assignment over owned + handle atoms)
    partial_models: List[Tuple[FrozenSet[str], Dict[str, bool]]] = field(default_factory=list)


def _components(p: KernelProgram, decomposition: Decomposition) -> List[_Component]:
    components = [
        _Component(ec.cycle.name, ec.atom_names, ec.rules, ec.handle_atoms)
        for ec in decomposition
    ]
    on_cycle = {a for ec in decomposition for a in ec.atom_names}
    # atoms on no cycle: single-atom bridge components
    for atom in p.atoms:
        if atom.name in on_cycle:
            continue
        rules = tuple(p.program.rules_for(atom))
        handles = frozenset(a.name for r in rules for a in r.body_atoms()) - {atom.name}
        components.append(_Component(f"bridge {atom.name}", frozenset([atom.name]), rules, handles))
    return components


def _solve_component(component: _Component, atom_cap: int) -> None:
    for hyp in enumerate_hypotheses(component.handle_atoms):
        program = _completed_program(component.rules, hyp)
        for model in enumerate_stable_brute(program, atom_cap):
            assignment = {a: a in model for a in component.owned}
            assignment.update({a: a in hyp for a in component.handle_atoms})
            component.partial_models.append((hyp, assignment))


def solve_by_decomposition(p: KernelProgram, g: Optional[Edg] = None,
                           max_cycles: Optional[int] = None,
                           hypothesis_budget: Optional[int] = None,
                           atom_cap: Optional[int] = None) -> List[Interpretation]:
    """Stable models of ``p`` as consistent unions of completed-cycle models, each GL-verified."""
    hypothesis_budget = hypothesis_budget or DEFAULT_HYPOTHESIS_BUDGET
    atom_cap = atom_cap or DEFAULT_ATOM_CAP
    decomposition = decompose(p, g, max_cycles)
    components = _components(p, decomposition)

    total = prod(2 ** len(c.handle_atoms) for c in components)
    BudgetManager(hypothesis_budget, DecompositionBudgetExceeded, "hypothesis tuples").spend(
        total, note=f"{len(components)} components"
    )
    for component in components:
        _solve_component(component, atom_cap)
    logger.info(
        f"Decomposition: {len(components)} components, {total} hypothesis tuples, "
        f"{sum(len(c.partial_models) for c in components)} partial models"
    )

    models = set()
    chosen: List[FrozenSet[str]] = []

    def join(i: int, assignment: Dict[str, bool]):
        if i == len(components):
            union = frozenset(a for a, value in assignment.items() if value)
            # each hypothesis must match the union
            for component, hyp in zip(components, chosen):
                if any((a in hyp) != (a in union) for a in component.handle_atoms):
                    return
            candidate = Interpretation(union)
            if is_stable(p.program, candidate):
                models.add(candidate)
            return
        for hyp, partial in components[i].partial_models:
            if any(assignment.get(a, value) != value for a, value in partial.items()):
                continue
            merged = dict(assignment)
            merged.update(partial)
            chosen.append(hyp)
            join(i + 1, merged)
            chosen.pop()

    join(0, {})
    return sort_models(models)
