"""
Data model for ground normal logic programs.

Atoms are interned per program (dense ids in first-occurrence order). Rules
keep their per-head ordinal, which becomes the EDG vertex index. Programs are
immutable once built.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

ATOM_PATTERN = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
RESERVED_WORDS = frozenset({"not"})


@dataclass(frozen=True, order=True)
class Atom:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Rule:
    head: Atom
    pos: FrozenSet[Atom]
    neg: FrozenSet[Atom]
    index: int = 0

    @property
    def is_fact(self) -> bool:
        return not self.pos and not self.neg

    @property
    def is_tautology_candidate(self) -> bool:
        """pos and neg share an atom, so the body can never hold."""
        return bool(self.pos & self.neg)

    def body_atoms(self) -> FrozenSet[Atom]:
        return self.pos | self.neg

    def literals(self) -> List[Tuple[Atom, bool]]:
        """Body literals as (atom, positive) pairs, ordered by atom id, positive first on ties."""
        lits = [(a, True) for a in self.pos] + [(a, False) for a in self.neg]
        return sorted(lits, key=lambda lit: (lit[0].id, not lit[1]))

    def to_text(self) -> str:
        if self.is_fact:
            return f"{self.head.name}."
        body = ", ".join(a.name if positive else f"not {a.name}" for a, positive in self.literals())
        return f"{self.head.name} :- {body}."

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Program:
    """Interned atoms plus rules in source order."""

    atoms: Tuple[Atom, ...] = ()
    rules: Tuple[Rule, ...] = ()
    _by_name: Dict[str, Atom] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {a.name: a for a in self.atoms})

    def atom(self, name: str) -> Atom:
        return self._by_name[name]

    @property
    def atom_names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.atoms)

    def heads(self) -> FrozenSet[Atom]:
        return frozenset(r.head for r in self.rules)

    def rules_for(self, atom: Atom) -> List[Rule]:
        return [r for r in self.rules if r.head == atom]

    def undefined_atoms(self) -> List[Atom]:
        """Atoms never appearing in a head, ordered by name."""
        heads = self.heads()
        return sorted((a for a in self.atoms if a not in heads), key=lambda a: a.name)

    def is_positive(self) -> bool:
        return all(not r.neg for r in self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


class ProgramBuilder:
    """Interns atoms by name and assigns per-head rule indices in insertion order."""

    def __init__(self, atom_order: Optional[Iterable[str]] = None):
        self._atoms: Dict[str, Atom] = {}
        self._rules: List[Rule] = []
        self._head_counts: Dict[str, int] = {}
        for name in atom_order or ():
            self.intern(name)

    def intern(self, name: str) -> Atom:
        atom = self._atoms.get(name)
        if atom is None:
            atom = Atom(len(self._atoms), name)
            self._atoms[name] = atom
        return atom

    def add_rule(self, head: str, pos: Iterable[str] = (), neg: Iterable[str] = ()) -> Rule:
        head_atom = self.intern(head)
        pos_atoms = frozenset(self.intern(n) for n in pos)
        neg_atoms = frozenset(self.intern(n) for n in neg)
        index = self._head_counts.get(head, 0)
        self._head_counts[head] = index + 1
        rule = Rule(head_atom, pos_atoms, neg_atoms, index)
        self._rules.append(rule)
        return rule

    def build(self, keep_only: Optional[Iterable[str]] = None) -> Program:
        """Finish the program. ``keep_only`` drops pre-interned atoms no rule mentions."""
        if keep_only is None:
            atoms = list(self._atoms.values())
            return Program(tuple(atoms), tuple(self._rules))
        used = {r.head.name for r in self._rules}
        for r in self._rules:
            used.update(a.name for a in r.body_atoms())
        used.update(keep_only)
        # renumber so ids stay dense
        renamed: Dict[str, Atom] = {}
        for name in self._atoms:
            if name in used:
                renamed[name] = Atom(len(renamed), name)
        rules = tuple(
            Rule(renamed[r.head.name],
                 frozenset(renamed[a.name] for a in r.pos),
                 frozenset(renamed[a.name] for a in r.neg),
                 r.index)
            for r in self._rules
        )
        return Program(tuple(renamed.values()), rules)


def program_from_rules(specs: Sequence[Tuple[str, Iterable[str], Iterable[str]]],
                       atom_order: Optional[Iterable[str]] = None) -> Program:
    """Build a program from (head, pos, neg) name triples."""
    builder = ProgramBuilder(atom_order)
    for head, pos, neg in specs:
        builder.add_rule(head, pos, neg)
    if atom_order is None:
        return builder.build()
    return builder.build(keep_only=())


def pretty_print(program: Program) -> str:
    """One rule per line, canonical literal order; parse_program round-trips it."""
    if not program.rules:
        return ""
    return "\n".join(r.to_text() for r in program.rules) + "\n"


@dataclass(frozen=True)
class Interpretation:
    """Two-valued interpretation: the set of true atom names."""

    true_atoms: FrozenSet[str] = frozenset()

    @classmethod
    def of(cls, names: Iterable[str]) -> "Interpretation":
        return cls(frozenset(names))

    def __contains__(self, name: str) -> bool:
        return name in self.true_atoms

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.true_atoms))

    def __len__(self) -> int:
        return len(self.true_atoms)

    def sorted_names(self) -> List[str]:
        return sorted(self.true_atoms)

    def sort_key(self) -> Tuple[int, Tuple[str, ...]]:
        return (len(self.true_atoms), tuple(sorted(self.true_atoms)))

    def __str__(self) -> str:
        return "{" + ", ".join(self.sorted_names()) + "}"


def sort_models(models: Iterable[Interpretation]) -> List[Interpretation]:
    """Deterministic model order: size first, then names."""
    return sorted(set(models), key=Interpretation.sort_key)
