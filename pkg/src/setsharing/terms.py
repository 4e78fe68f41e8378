"""First-order terms and substitutions over a variable universe.

Only ``vars(t)`` matters to the sharing operators, so a parsed
substitution is lowered to ``(var_index, vars_mask)`` pairs before it
reaches :func:`setsharing.shcore.amgu`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .shcore import ParseError
from .universe import UnknownVariable, VarUniverse


class SelfBinding(ParseError):
    pass


class DuplicateBinding(ParseError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({', '.join(str(a) for a in self.args)})"


Term = Var | Compound


@dataclass(frozen=True)
class Binding:
    lhs: str
    rhs: Term

    def __post_init__(self):
        if self.rhs == Var(self.lhs):
            raise SelfBinding(f"self-binding {self.lhs} -> {self.lhs} is not a binding")

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Substitution:
    universe: VarUniverse
    bindings: tuple = ()

    def __post_init__(self):
        seen = set()
        for b in self.bindings:
            self.universe.index(b.lhs)
            if b.lhs in seen:
                raise DuplicateBinding(f"variable {b.lhs!r} bound twice")
            seen.add(b.lhs)

    def __len__(self) -> int:
        return len(self.bindings)

    def __str__(self) -> str:
        return "{" + ", ".join(str(b) for b in self.bindings) + "}"

    def lowered(self) -> list[tuple[int, int]]:
        u = self.universe
        return [(u.index(b.lhs), term_vars(u, b.rhs)) for b in self.bindings]

    def apply(self, t: Term) -> Term:
        """One simultaneous application of the substitution to ``t``."""
        table = {b.lhs: b.rhs for b in self.bindings}

        def go(s):
            if isinstance(s, Var):
                return table.get(s.name, s)
            return Compound(s.functor, tuple(go(a) for a in s.args))

        return go(t)

    @property
    def idempotent(self) -> bool:
        return is_idempotent(self)


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<punct>[(),{}]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, u: VarUniverse, text: str):
        self.u = u
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, col = self.next()
        if val != value or kind == "eof":
            found = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", col)

    def term(self) -> Term:
        kind, val, col = self.next()
        if kind != "ident":
            found = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected a term, found {found}", col)
        if self.peek()[1] == "(" and self.peek()[0] == "punct":
            if val in self.u:
                raise ParseError(f"variable {val!r} used as a functor", col)
            self.next()
            if self.peek()[1] == ")":
                raise ParseError("empty argument list; write constants without parentheses",
                                 self.peek()[2])
            args = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return Compound(val, tuple(args))
        if val in self.u:
            return Var(val)
        return Compound(val, ())

    def binding(self) -> Binding:
        kind, val, col = self.next()
        if kind != "ident":
            found = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected a variable, found {found}", col)
        if val not in self.u:
            raise UnknownVariable(f"binding left-hand side {val!r} is not a variable of interest")
        self.expect("->")
        return Binding(val, self.term())

    def end(self):
        kind, val, col = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing input {val!r}", col)


def parse_term(u: VarUniverse, text: str) -> Term:
    """Parse ``Ident | Ident '(' Term (',' Term)* ')'``.

    An identifier naming a universe variable is a :class:`Var`; any other
    identifier is a functor (a constant when it has no arguments).
    """
    if not text.strip():
        raise ParseError("empty term", 0)
    p = _Parser(u, text)
    t = p.term()
    p.end()
    return t


def parse_subst(u: VarUniverse, text: str) -> Substitution:
    p = _Parser(u, text)
    p.expect("{")
    bindings = []
    if p.peek()[1] != "}":
        bindings.append(p.binding())
        while p.peek()[1] == ",":
            p.next()
            bindings.append(p.binding())
    p.expect("}")
    p.end()
    return Substitution(u, tuple(bindings))


def parse_subst_file(u: VarUniverse, text: str) -> Substitution:
    """Read a substitution from file contents.

    Either the brace form, or one ``x -> t`` binding per line between
    ``subst:`` marker lines (a missing closing marker ends at EOF).
    Lines starting with ``#`` and a ``vars:`` header are ignored.
    """
    lines = text.splitlines()
    markers = [i for i, ln in enumerate(lines) if ln.strip() == "subst:"]
    if not markers:
        body = "\n".join(ln for ln in lines
                         if not ln.strip().startswith(("#", "vars:")))
        return parse_subst(u, body)
    start = markers[0] + 1
    stop = markers[1] if len(markers) > 1 else len(lines)
    bindings = []
    for ln in lines[start:stop]:
        s = ln.strip().rstrip(",")
        if not s or s.startswith("#"):
            continue
        p = _Parser(u, s)
        bindings.append(p.binding())
        p.end()
    return Substitution(u, tuple(bindings))


def term_vars(u: VarUniverse, t: Term) -> int:
    """Mask of the universe variables occurring in ``t``."""
    if isinstance(t, Var):
        return 1 << u.index(t.name)
    m = 0
    for a in t.args:
        m |= term_vars(u, a)
    return m


def is_idempotent(s: Substitution) -> bool:
    """True iff applying ``s`` to each right-hand side changes nothing."""
    return all(s.apply(b.rhs) == b.rhs for b in s.bindings)


def ground_substitution(u: VarUniverse, variables: int, constant: str = "c0") -> Substitution:
    """Bind every variable in the mask to the same fresh constant."""
    if constant in u:
        raise ValueError(f"constant {constant!r} clashes with a variable name")
    c = Compound(constant, ())
    return Substitution(u, tuple(Binding(u.names[i], c)
                                 for i in range(u.n) if variables >> i & 1))
