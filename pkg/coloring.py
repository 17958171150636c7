"""
Stable models of kernel programs as admissible colorings of the EDG.

A total green/red coloring is admissible when
  1. no negative edge joins two green vertices, and
  2. no red vertex has all its incoming edges coming from red vertices.
An atom is true iff at least one of its rule vertices is green.

The search propagates the two clauses as forcing rules and branches
green-before-red on the first undecided vertex of the chosen order.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from config import DEFAULT_MAX_MODELS
from errors import CycleBudgetExceeded, NotKernelProgram
from graphs import Edg, Edge, Vertex, enumerate_cycles
from program import Interpretation

logger = logging.getLogger(__name__)

GREEN = "green"
RED = "red"

GREEN_GREEN_EDGE = "green_green_edge"
RED_ALL_RED_IN = "red_all_red_in"


@dataclass(frozen=True)
class Coloring:
    """Vertex -> color. Vertices missing from ``assignment`` are unassigned."""

    assignment: Mapping[Vertex, str] = field(default_factory=dict)

    @classmethod
    def from_green(cls, g: Edg, green_labels: Iterable[str]) -> "Coloring":
        """Total coloring: the labelled vertices green, everything else red."""
        green = set(green_labels)
        return cls({v: GREEN if v.label in green else RED for v in g.vertices})

    def color(self, v: Vertex) -> Optional[str]:
        return self.assignment.get(v)

    def green(self) -> List[Vertex]:
        return [v for v, c in self.assignment.items() if c == GREEN]

    def is_total(self, g: Edg) -> bool:
        return all(v in self.assignment for v in g.vertices)

    def green_labels(self) -> List[str]:
        return sorted(v.label for v in self.green())

    def __str__(self) -> str:
        return "green {" + ", ".join(self.green_labels()) + "}"


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: Union[Edge, Vertex]

    def __str__(self) -> str:
        return f"{self.kind} at {self.witness}"


@dataclass(frozen=True)
class AdmissibilityCheck:
    admissible: bool
    violations: Tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.admissible


@dataclass(frozen=True)
class Conflict:
    """A vertex forced both ways (or against its color) during propagation."""

    vertex: Vertex
    reasons: Tuple[str, ...]

    def __str__(self) -> str:
        return f"conflict at {self.vertex.label}: " + "; ".join(self.reasons)


def is_admissible(g: Edg, c: Coloring) -> AdmissibilityCheck:
    if not c.is_total(g):
        raise ValueError("admissibility is only decided for total colorings")
    violations = []
    for e in g.negative_edges():
        if c.color(e.source) == GREEN and c.color(e.target) == GREEN:
            violations.append(Violation(GREEN_GREEN_EDGE, e))
    for v in g.vertices:
        if c.color(v) == RED and all(c.color(s) == RED for s in g.in_neighbors(v)):
            violations.append(Violation(RED_ALL_RED_IN, v))
    return AdmissibilityCheck(not violations, tuple(violations))


def _propagate(g: Edg, colors: Dict[Vertex, str]) -> Optional[Conflict]:
    """Forcing to fixpoint, in place on ``colors``."""
    queue = list(g.vertices)
    queued = set(queue)
    while queue:
        v = queue.pop(0)
        queued.discard(v)
        sources = g.in_neighbors(v)
        green_source = next((s for s in sources if colors.get(s) == GREEN), None)
        all_red = bool(sources) and all(colors.get(s) == RED for s in sources)
        if green_source is not None and all_red:
            return Conflict(v, (f"in-neighbor {green_source.label} is green", "all in-neighbors are red"))
        if green_source is not None:
            forced, reason = RED, f"in-neighbor {green_source.label} is green"
        elif all_red:
            forced, reason = GREEN, "all in-neighbors are red"
        else:
            continue
        current = colors.get(v)
        if current == forced:
            continue
        if current is not None:
            return Conflict(v, (f"assigned {current}", f"forced {forced}: {reason}"))
        colors[v] = forced
        for w in g.out_neighbors(v):
            if w not in queued:
                queue.append(w)
                queued.add(w)
    return None


def propagate(g: Edg, partial: Coloring) -> Tuple[Optional[Coloring], Optional[Conflict]]:
    """
    Close ``partial`` under the forcing rules: a vertex with a green in-neighbor
    is red, a vertex whose in-neighbors are all red is green.

    Returns (closure, None) or (None, conflict).
    """
    colors = dict(partial.assignment)
    conflict = _propagate(g, colors)
    if conflict:
        return None, conflict
    return Coloring(colors), None


def coloring_to_interpretation(g: Edg, c: Coloring) -> Interpretation:
    return Interpretation.of(v.atom.name for v in g.vertices
                             if not v.is_undefined and c.color(v) == GREEN)


def interpretation_to_coloring(g: Edg, s: Interpretation) -> Coloring:
    """A rule vertex is green iff its rule body holds in ``s``."""
    assignment = {}
    for v in g.vertices:
        rule = g.rule_of(v)
        holds = rule is not None and all(a.name in s for a in rule.pos) \
            and not any(a.name in s for a in rule.neg)
        assignment[v] = GREEN if holds else RED
    return Coloring(assignment)


# === SEARCH ===
@dataclass
class ColoringSearchResult:
    solutions: List[Tuple[Coloring, Interpretation]] = field(default_factory=list)
    truncated: bool = False
    nodes_expanded: int = 0

    @property
    def models(self) -> List[Interpretation]:
        return [s for _, s in self.solutions]


def check_kernel_graph(g: Edg) -> None:
    if g.positive_edges():
        raise NotKernelProgram(
            f"coloring needs the EDG of a kernel program; found positive edge {g.positive_edges()[0]}"
        )
    for v in g.vertices:
        if not g.in_edges(v):
            raise NotKernelProgram(
                f"coloring needs the EDG of a kernel program; vertex {v.label} has no incoming edge"
            )


def branch_order(g: Edg, heuristic: str = "handles", max_cycles: Optional[int] = None) -> List[Vertex]:
    """Vertex branching order. ``handles`` puts handle sources of odd cycles first."""
    if heuristic == "lex":
        return list(g.vertices)
    try:
        cycles = enumerate_cycles(g, max_cycles)
    except CycleBudgetExceeded as exc:
        logger.warning(f"handles heuristic unavailable, falling back to lex: {exc}")
        return list(g.vertices)
    order: List[Vertex] = []
    for cycle in cycles:
        if cycle.is_odd:
            for handle in cycle.handles:
                if handle.edge.source not in order:
                    order.append(handle.edge.source)
    order.extend(v for v in g.vertices if v not in order)
    return order


def solve_colorings(g: Edg, max_models: Optional[int] = None, heuristic: str = "handles",
                    max_cycles: Optional[int] = None) -> ColoringSearchResult:
    """All admissible total colorings of a kernel EDG, up to ``max_models``."""
    max_models = DEFAULT_MAX_MODELS if max_models is None else max_models
    check_kernel_graph(g)
    order = branch_order(g, heuristic, max_cycles)
    result = ColoringSearchResult()

    stack: List[Dict[Vertex, str]] = [{}]
    while stack:
        colors = stack.pop()
        result.nodes_expanded += 1
        if _propagate(g, colors) is not None:
            continue
        undecided = next((v for v in order if v not in colors), None)
        if undecided is None:
            coloring = Coloring(colors)
            # propagation is only pruning; leaves are checked in full
            if is_admissible(g, coloring):
                if len(result.solutions) == max_models:
                    result.truncated = True
                    break
                result.solutions.append((coloring, coloring_to_interpretation(g, coloring)))
            continue
        # LIFO: push red first so green is explored first
        stack.append({**colors, undecided: RED})
        stack.append({**colors, undecided: GREEN})

    if result.truncated:
        logger.warning(f"Model cap of {max_models} reached; more admissible colorings exist")
    logger.info(
        f"Coloring search ({heuristic}): {len(result.solutions)} model(s), "
        f"{result.nodes_expanded} nodes expanded"
    )
    return result
