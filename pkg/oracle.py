"""
Reference semantics: Gelfond-Lifschitz reduct, least models, stability check
and exhaustive enumeration. Kept deliberately naive; every other solver is
cross-checked against it.
"""

import logging
from itertools import combinations
from typing import List, Optional

from config import DEFAULT_ATOM_CAP
from errors import TooManyAtoms
from program import Interpretation, Program, Rule

logger = logging.getLogger(__name__)

# A Program without negative literals
PositiveProgram = Program


def gl_reduct(program: Program, s: Interpretation) -> PositiveProgram:
    """Delete rules with some 'not A', A in S; drop the remaining 'not' literals."""
    kept = tuple(
        Rule(rule.head, rule.pos, frozenset(), rule.index)
        for rule in program.rules
        if not any(a.name in s for a in rule.neg)
    )
    return Program(program.atoms, kept)


def minimal_model(program: PositiveProgram) -> Interpretation:
    """Least fixpoint of the immediate consequence operator."""
    if not program.is_positive():
        raise ValueError("minimal_model needs a positive program (no 'not' literals)")
    model = set()
    changed = True
    while changed:
        changed = False
        for rule in program.rules:
            if rule.head.name not in model and all(a.name in model for a in rule.pos):
                model.add(rule.head.name)
                changed = True
    return Interpretation(frozenset(model))


def is_stable(program: Program, s: Interpretation) -> bool:
    """S = a(Pi^S)."""
    return minimal_model(gl_reduct(program, s)) == s


def enumerate_stable_brute(program: Program, atom_cap: Optional[int] = None) -> List[Interpretation]:
    """
    All stable models, by checking every candidate set.

    Candidates are subsets of the head atoms (an atom with no rule is never in a
    least model), ordered by size then lexicographically by atom id.
    """
    atom_cap = DEFAULT_ATOM_CAP if atom_cap is None else atom_cap
    if len(program.atoms) > atom_cap:
        raise TooManyAtoms(
            f"⛔ TOO MANY ATOMS: brute force over {len(program.atoms)} atoms exceeds the cap of {atom_cap}",
            cap=atom_cap,
        )
    heads = sorted(program.heads())
    models = []
    for size in range(len(heads) + 1):
        for subset in combinations(heads, size):
            candidate = Interpretation(frozenset(a.name for a in subset))
            if is_stable(program, candidate):
                models.append(candidate)
    logger.info(f"Brute force found {len(models)} stable model(s) over {len(heads)} head atoms")
    return models
