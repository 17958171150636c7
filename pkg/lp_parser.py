"""
Parser for ground normal logic programs.

Concrete syntax::

    h :- b1, not b2, b3.     % rule
    c.                       % fact

Identifiers match ``[a-z][A-Za-z0-9_]*``; ``not`` is reserved. Uppercase-initial
identifiers (variables) and numbers belong to the non-ground language and are
rejected.
"""

import io
import logging
import sys
from typing import Optional, TextIO, Tuple, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken, VisitError

from errors import ConfigError, ProgramSyntaxError
from program import Program, ProgramBuilder

logger = logging.getLogger(__name__)

LP_GRAMMAR = r"""
    start: statement*

    statement: ATOM _DOT                 -> fact
             | ATOM _IF body _DOT        -> rule

    body: literal (_COMMA literal)*

    literal: ATOM                        -> pos_literal
           | NOT ATOM                    -> neg_literal

    NOT: "not"
    ATOM: /[a-z][A-Za-z0-9_]*/
    _IF: ":-"
    _DOT: "."
    _COMMA: ","
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

# Friendlier names for the terminals lark reports in "expected" sets
TOKEN_NAMES = {
    "ATOM": "atom",
    "NOT": "'not'",
    "_DOT": "'.'",
    "_COMMA": "','",
    "_IF": "':-'",
    "$END": "end of input",
}

_parser = Lark(LP_GRAMMAR, parser="lalr")


# === PARSE TREE VISITOR ===
class ProgramVisitor(Transformer):
    """Turns the lark tree into (head, [(name, positive), ...]) statements."""

    def start(self, children):
        return children

    def fact(self, children):
        return (self._head(children[0]), [])

    def rule(self, children):
        head, literals = children
        return (self._head(head), literals)

    @staticmethod
    def _head(token) -> str:
        # the head position lexes 'not' as a plain atom
        if str(token) == "not":
            raise ProgramSyntaxError("'not' is reserved and cannot be a rule head",
                                     token.line, token.column)
        return str(token)

    def body(self, children):
        return children

    def pos_literal(self, children):
        return (str(children[0]), True)

    def neg_literal(self, children):
        return (str(children[-1]), False)


# === SYNTAX ERROR LISTENER ===
class SyntaxErrorListener:
    """Turns lark parse failures into ProgramSyntaxError with line/column."""

    def __init__(self, text: str):
        self.text = text

    def syntaxError(self, exc: UnexpectedInput) -> ProgramSyntaxError:
        line, column = exc.line, exc.column
        if isinstance(exc, UnexpectedCharacters):
            char = exc.char
            if char.isupper() or char == "_":
                msg = (f"identifier starting with {char!r} looks like a variable; "
                       f"only ground programs with lowercase atoms are supported")
            elif char.isdigit():
                msg = f"numbers are not supported (found {char!r}); atoms must start with a lowercase letter"
            else:
                msg = f"unexpected character {char!r}"
        elif isinstance(exc, UnexpectedToken) and exc.token.type == "$END":
            msg = f"unexpected end of input, expected {self._expected(exc)} (missing final '.'?)"
            line, column = self._end_position()
        elif isinstance(exc, UnexpectedToken):
            token = exc.token
            if token.type == "_DOT" and {"ATOM", "NOT"} <= set(exc.expected):
                msg = "empty rule body; write a fact as 'h.'"
            elif token.type == "_IF":
                msg = "rule has an empty head"
            else:
                msg = f"unexpected {str(token)!r}, expected {self._expected(exc)}"
        else:
            msg = str(exc)
            line, column = self._end_position()
        return ProgramSyntaxError(msg, line, column)

    @staticmethod
    def _expected(exc: UnexpectedToken) -> str:
        expected = sorted(TOKEN_NAMES.get(t, t) for t in (exc.expected or ()))
        return " or ".join(expected) if expected else "more input"

    def _end_position(self) -> Tuple[int, int]:
        lines = self.text.split("\n")
        return len(lines), len(lines[-1]) + 1


def parse_program(text: Union[str, TextIO]) -> Program:
    """Parse program text into a Program whose rules mirror source order."""
    if not isinstance(text, str):
        text = text.read()
    listener = SyntaxErrorListener(text)
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as exc:
        raise listener.syntaxError(exc) from None
    try:
        statements = ProgramVisitor().transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, ProgramSyntaxError):
            raise exc.orig_exc from None
        raise

    builder = ProgramBuilder()
    for head, literals in statements:
        builder.intern(head)
        pos, neg = [], []
        for name, positive in literals:
            builder.intern(name)
            (pos if positive else neg).append(name)
        builder.add_rule(head, pos, neg)
    program = builder.build()
    logger.info(f"Parsed {len(program.rules)} rules over {len(program.atoms)} atoms")
    return program


def read_program_text(path: str, stdin: Optional[TextIO] = None) -> str:
    """Program source from a UTF-8 file; ``-`` reads standard input."""
    try:
        if path == "-":
            return (stdin or sys.stdin).read()
        with io.open(path, encoding="utf-8") as handle:
            return handle.read()
    except UnicodeDecodeError as e:
        raise ProgramSyntaxError(f"{path}: input is not valid UTF-8 (byte {e.start}: {e.reason})")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror or e}")


def parse_file(path: str, stdin: Optional[TextIO] = None) -> Program:
    return parse_program(read_program_text(path, stdin))
