"""
Seeded random program corpora for the test suites.

Every generator takes a ``numpy.random.Generator`` so corpora are
reproducible from a single seed.
"""

from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from program import Program, program_from_rules

# === CONFIGURATION ===
SEED = 1997
MAX_ATOMS = 10
MAX_RULES = 20
MAX_BODY = 3
MAX_KERNEL_VERTICES = 8

RuleSpec = Tuple[str, List[str], List[str]]


def _names(n: int, prefix: str = "x") -> List[str]:
    return [f"{prefix}{i}" for i in range(n)]


def random_program(rng: np.random.Generator, max_atoms: int = MAX_ATOMS,
                   max_rules: int = MAX_RULES, max_body: int = MAX_BODY) -> Program:
    """Uniformly random ground program with mixed positive/negative bodies."""
    names = _names(int(rng.integers(1, max_atoms + 1)))
    specs: List[RuleSpec] = []
    for _ in range(int(rng.integers(0, max_rules + 1))):
        head = names[int(rng.integers(len(names)))]
        size = min(int(rng.integers(0, max_body + 1)), len(names))
        body = [names[i] for i in rng.choice(len(names), size=size, replace=False)]
        positive = rng.random(size) < 0.5
        specs.append((head, [b for b, p in zip(body, positive) if p],
                      [b for b, p in zip(body, positive) if not p]))
    return program_from_rules(specs)


def random_kernel_program(rng: np.random.Generator,
                          max_vertices: int = MAX_KERNEL_VERTICES) -> Program:
    """Kernel program (negative bodies, every head in some body) with at most ``max_vertices`` rules."""
    n_atoms = int(rng.integers(1, max_vertices + 1))
    n_rules = int(rng.integers(n_atoms, max_vertices + 1))
    names = _names(n_atoms)
    heads = names + [names[int(i)] for i in rng.integers(n_atoms, size=n_rules - n_atoms)]
    bodies = []
    for _ in heads:
        size = int(rng.integers(1, min(2, n_atoms) + 1))
        bodies.append({names[i] for i in rng.choice(n_atoms, size=size, replace=False)})
    referenced = set().union(*bodies)
    for name in names:
        if name not in referenced:
            bodies[int(rng.integers(len(bodies)))].add(name)
    return program_from_rules([(h, [], sorted(b)) for h, b in zip(heads, bodies)])


def call_consistent_program(rng: np.random.Generator, max_atoms: int = MAX_ATOMS,
                            max_rules: int = MAX_RULES, max_body: int = MAX_BODY) -> Program:
    """
    Random program in which every dependency cycle has an even number of
    negative edges: atoms get a side, negative literals cross sides and
    positive literals stay on the head's side.
    """
    names = _names(int(rng.integers(1, max_atoms + 1)))
    side = {name: int(rng.integers(2)) for name in names}
    specs: List[RuleSpec] = []
    for _ in range(int(rng.integers(1, max_rules + 1))):
        head = names[int(rng.integers(len(names)))]
        pos, neg = [], []
        for i in rng.choice(len(names), size=min(int(rng.integers(0, max_body + 1)), len(names)),
                            replace=False):
            atom = names[int(i)]
            (pos if side[atom] == side[head] else neg).append(atom)
        specs.append((head, pos, neg))
    return program_from_rules(specs)


def ring(length: int, prefix: str = "r") -> List[RuleSpec]:
    """r0 :- not r1.  r1 :- not r2.  ...  r{n-1} :- not r0."""
    names = _names(length, prefix)
    return [(names[i], [], [names[(i + 1) % length]]) for i in range(length)]


def even_ring(n: int) -> Program:
    return program_from_rules(ring(2 * n))


def with_unconstrained_odd_ring(rng: np.random.Generator, max_length: int = 5, **kwargs) -> Program:
    """A random program plus a disjoint odd ring of fresh atoms (no arc enters the ring)."""
    base = random_program(rng, **kwargs)
    length = 2 * int(rng.integers(0, max_length // 2 + 1)) + 1
    specs = [(r.head.name, [a.name for a in r.pos], [a.name for a in r.neg]) for r in base.rules]
    return program_from_rules(specs + ring(length, prefix="ring"))


def corpus(generator: Callable[..., Program], count: int, seed: Optional[int] = None,
           **kwargs) -> Iterator[Program]:
    rng = np.random.default_rng(SEED if seed is None else seed)
    for _ in range(count):
        yield generator(rng, **kwargs)


# === FIXED PROGRAMS ===
# Three programs with the same dependency graph but different stable models.
OR_HANDLE_PROGRAM = """\
p :- not p, not e.
a :- not b.
b :- not a.
e :- not f.
f :- not h.
h :- not e.
h :- not a.
"""

AND_HANDLE_PROGRAM = """\
p :- not p.
p :- not e.
a :- not b.
b :- not a.
e :- not f.
f :- not h.
h :- not e, not a.
"""

NO_MODEL_PROGRAM = """\
p :- not p, not e.
a :- not b.
b :- not a.
e :- not f.
f :- not h.
h :- not e, not a.
"""

# Overlapping cycles joined by the chain w -> v -> q'
SIX_CYCLES_PROGRAM = """\
p :- not p, not q.
q :- not q, not p.
q :- not v.
v :- not w.
w :- not a.
a :- not b.
b :- not a.
z :- not z, not k.
k :- not l.
l :- not k.
"""

# Each odd cycle is satisfiable alone, but only under opposite values of a
INCONSISTENT_HANDLES_PROGRAM = """\
p :- not p, not a.
q :- not q.
q :- not a.
"""

TWO_MODEL_PROGRAM = """\
q :- not p, not c.
p :- not q.
p :- c.
"""

ODD_TRIANGLE_PROGRAM = """\
a :- not b.
b :- not c.
c :- not a.
"""

UNCONSTRAINED_SELF_LOOP_PROGRAM = """\
p :- not p.
a :- not b.
b :- not a.
"""
