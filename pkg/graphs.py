"""
Dependency graphs of ground programs.

* ``Dg``  - classical signed atom-level dependency graph.
* ``Edg`` - extended dependency graph: one vertex per rule (duplicates of an
  atom are primed: ``h``, ``h'``, ``h''``) plus one vertex per atom that heads
  no rule. Edge ``<c^l, a^k, sign>`` for every vertex of every body atom.

Cycles are elementary circuits over negative edges, found with networkx's
implementation of Johnson's algorithm and reported in canonical rotation.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from budget import BudgetManager
from config import DEFAULT_MAX_CYCLES
from errors import CycleBudgetExceeded
from program import Atom, Program, Rule

logger = logging.getLogger(__name__)

POSITIVE = "+"
NEGATIVE = "-"

AND_HANDLE = "AND"
OR_HANDLE = "OR"


@dataclass(frozen=True)
class Vertex:
    """EDG vertex: the k-th rule of ``atom``, or ``rule_index=None`` for an atom with no rule."""

    atom: Atom
    rule_index: Optional[int] = None

    @property
    def is_undefined(self) -> bool:
        return self.rule_index is None

    @property
    def label(self) -> str:
        return self.atom.name + "'" * (self.rule_index or 0)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Edge:
    source: Vertex
    target: Vertex
    sign: str

    def __str__(self) -> str:
        return f"<{self.source.label}, {self.target.label}, {self.sign}>"


class Edg:
    """Extended dependency graph of a program. Immutable after construction."""

    def __init__(self, program: Program, vertices: Sequence[Vertex], edges: Sequence[Edge],
                 rules: Dict[Vertex, Rule]):
        self.program = program
        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self._rules = dict(rules)
        self._position = {v: i for i, v in enumerate(self.vertices)}
        self._in: Dict[Vertex, List[Edge]] = {v: [] for v in self.vertices}
        self._out: Dict[Vertex, List[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            self._out[e.source].append(e)
            self._in[e.target].append(e)

    def position(self, v: Vertex) -> int:
        """Index of ``v`` in the deterministic vertex order."""
        return self._position[v]

    def rule_of(self, v: Vertex) -> Optional[Rule]:
        return self._rules.get(v)

    def vertex(self, label: str) -> Vertex:
        for v in self.vertices:
            if v.label == label:
                return v
        raise KeyError(label)

    def in_edges(self, v: Vertex) -> List[Edge]:
        return self._in[v]

    def in_neighbors(self, v: Vertex) -> List[Vertex]:
        return [e.source for e in self._in[v]]

    def out_neighbors(self, v: Vertex) -> List[Vertex]:
        return [e.target for e in self._out[v]]

    def positive_edges(self) -> List[Edge]:
        return [e for e in self.edges if e.sign == POSITIVE]

    def negative_edges(self) -> List[Edge]:
        return [e for e in self.edges if e.sign == NEGATIVE]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        for v in self.vertices:
            graph.add_node(v.label)
        for e in self.edges:
            graph.add_edge(e.source.label, e.target.label, sign=e.sign)
        return graph

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Edg({len(self.vertices)} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class Dg:
    """Signed atom-level dependency graph."""

    atoms: Tuple[str, ...] = ()
    edges: Tuple[Tuple[str, str, str], ...] = ()

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.atoms)
        for source, target, sign in self.edges:
            graph.add_edge(source, target, sign=sign)
        return graph


def build_edg(program: Program) -> Edg:
    """EDG with vertex order: rules in program order, then undefined atoms by name."""
    vertices: List[Vertex] = []
    rules: Dict[Vertex, Rule] = {}
    for rule in program.rules:
        v = Vertex(rule.head, rule.index)
        vertices.append(v)
        rules[v] = rule
    vertices.extend(Vertex(atom, None) for atom in program.undefined_atoms())

    by_atom: Dict[Atom, List[Vertex]] = {}
    for v in vertices:
        by_atom.setdefault(v.atom, []).append(v)

    edges: List[Edge] = []
    for rule in program.rules:
        target = Vertex(rule.head, rule.index)
        for atom, positive in rule.literals():
            sign = POSITIVE if positive else NEGATIVE
            edges.extend(Edge(source, target, sign) for source in by_atom[atom])
    return Edg(program, vertices, edges, rules)


def build_dg(program: Program) -> Dg:
    edges: List[Tuple[str, str, str]] = []
    seen: Set[Tuple[str, str, str]] = set()
    for rule in program.rules:
        for atom, positive in rule.literals():
            edge = (atom.name, rule.head.name, POSITIVE if positive else NEGATIVE)
            if edge not in seen:
                seen.add(edge)
                edges.append(edge)
    return Dg(program.atom_names, tuple(edges))


def same_topology(first: Union[Edg, Dg], second: Union[Edg, Dg]) -> bool:
    """Signed-graph isomorphism."""
    return nx.is_isomorphic(first.to_networkx(), second.to_networkx(),
                            edge_match=nx.algorithms.isomorphism.categorical_multiedge_match("sign", None))


# === CYCLES ===
@dataclass(frozen=True)
class Handle:
    edge: Edge
    kind: str
    source_atom: Atom

    def __str__(self) -> str:
        return f"{self.kind} handle {self.edge}"


@dataclass(frozen=True)
class CycleInfo:
    """
    Elementary cycle of negative EDG edges, rotated to start at its smallest vertex.

    ``number`` is the 1-based position in the enumeration order and serves as
    the cycle's name in reports (C1, C2, ...).
    """

    vertices: Tuple[Vertex, ...]
    number: int = 0
    handles: Tuple[Handle, ...] = ()

    @property
    def parity(self) -> str:
        return "odd" if len(self.vertices) % 2 else "even"

    @property
    def is_odd(self) -> bool:
        return len(self.vertices) % 2 == 1

    @property
    def atoms(self) -> frozenset:
        return frozenset(v.atom for v in self.vertices)

    @property
    def atom_names(self) -> List[str]:
        return sorted(a.name for a in self.atoms)

    @property
    def is_unconstrained(self) -> bool:
        return not self.handles

    @property
    def name(self) -> str:
        return f"C{self.number}"

    def describe(self) -> str:
        return " -> ".join(v.label for v in self.vertices)


def canonical_rotation(cycle: List[int]) -> Tuple[int, ...]:
    """Rotate the cycle so it starts with its smallest node."""
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


def enumerate_cycles(g: Edg, cap: Optional[int] = None) -> List[CycleInfo]:
    """All elementary negative cycles of ``g``, with handles, in deterministic order."""
    cap = DEFAULT_MAX_CYCLES if cap is None else cap
    budget = BudgetManager(cap, CycleBudgetExceeded, "elementary cycles")
    negative = nx.DiGraph()
    negative.add_nodes_from(range(len(g.vertices)))
    negative.add_edges_from((g.position(e.source), g.position(e.target)) for e in g.negative_edges())

    found = []
    for cycle in nx.simple_cycles(negative):
        budget.spend(1)
        found.append(canonical_rotation(cycle))
    found.sort()

    cycles = []
    for number, positions in enumerate(found, 1):
        info = CycleInfo(tuple(g.vertices[i] for i in positions), number)
        cycles.append(replace(info, handles=tuple(find_handles(info, g))))
    logger.info(f"Found {len(cycles)} negative cycle(s), {sum(c.is_odd for c in cycles)} odd")
    return cycles


def find_handles(c: CycleInfo, g: Edg) -> List[Handle]:
    """Edges entering a cycle vertex from outside the cycle's vertex set."""
    on_cycle = set(c.vertices)
    cycle_atoms = c.atoms
    handles = []
    for v in c.vertices:
        for e in g.in_edges(v):
            if e.source in on_cycle:
                continue
            kind = OR_HANDLE if e.source.atom in cycle_atoms else AND_HANDLE
            handles.append(Handle(e, kind, e.source.atom))
    return handles


@dataclass(frozen=True)
class Bridge:
    """
    A chain of rules on no cycle that ends in an auxiliary rule.

    ``vertices`` runs from the chain entry to the auxiliary rule; the chain
    connects ``source_cycles`` (cycles feeding its entry) to ``target_cycles``
    (cycles containing the auxiliary rule's head).
    """

    vertices: Tuple[Vertex, ...]
    source_cycles: Tuple[int, ...] = ()
    target_cycles: Tuple[int, ...] = ()

    @property
    def auxiliary(self) -> Vertex:
        return self.vertices[-1]

    def describe(self) -> str:
        return " -> ".join(v.label for v in self.vertices)


def find_bridges(g: Edg, cycles: Iterable[CycleInfo]) -> List[Bridge]:
    cycles = list(cycles)
    on_any_cycle: Dict[Vertex, Set[int]] = {}
    for c in cycles:
        for v in c.vertices:
            on_any_cycle.setdefault(v, set()).add(c.number)
    cycle_atoms = {a for c in cycles for a in c.atoms}

    bridges = []
    for v in g.vertices:
        if v.is_undefined or v in on_any_cycle or v.atom not in cycle_atoms:
            continue
        chain = [v]
        sources: Set[int] = set()
        frontier = [v]
        # walk backwards through off-cycle rule vertices
        while frontier:
            current = frontier.pop(0)
            for e in g.in_edges(current):
                s = e.source
                if s in on_any_cycle:
                    sources |= on_any_cycle[s]
                elif not s.is_undefined and s not in chain:
                    chain.append(s)
                    frontier.append(s)
        targets = sorted(c.number for c in cycles if v.atom in c.atoms)
        bridges.append(Bridge(tuple(reversed(chain)), tuple(sorted(sources)), tuple(targets)))
    return bridges


# === EXPORT ===
def _quote(label: str) -> str:
    return '"' + label.replace('"', '\\"') + '"'


def _edge_style(sign: str) -> str:
    if sign == NEGATIVE:
        return '[label="-", style=dashed]'
    return '[label="+", style=solid]'


def to_dot(g: Union[Edg, Dg], name: Optional[str] = None) -> str:
    """DOT digraph; dashed edges are negative, solid ones positive."""
    if isinstance(g, Edg):
        name = name or "edg"
        nodes = [v.label for v in g.vertices]
        edges = [(e.source.label, e.target.label, e.sign) for e in g.edges]
    else:
        name = name or "dg"
        nodes = list(g.atoms)
        edges = list(g.edges)
    if not nodes:
        return f"digraph {name} {{}}\n"
    lines = [f"digraph {name} {{"]
    lines.extend(f"  {_quote(n)};" for n in nodes)
    lines.extend(f"  {_quote(s)} -> {_quote(t)} {_edge_style(sign)};" for s, t, sign in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: Union[Edg, Dg]) -> dict:
    if isinstance(g, Edg):
        return {
            "kind": "edg",
            "vertices": [
                {"label": v.label, "atom": v.atom.name, "rule": v.rule_index} for v in g.vertices
            ],
            "edges": [
                {"source": e.source.label, "target": e.target.label, "sign": e.sign} for e in g.edges
            ],
        }
    return {
        "kind": "dg",
        "vertices": [{"label": a, "atom": a, "rule": None} for a in g.atoms],
        "edges": [{"source": s, "target": t, "sign": sign} for s, t, sign in g.edges],
    }
