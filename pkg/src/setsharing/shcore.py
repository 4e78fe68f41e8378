"""Set-sharing elements and the abstract operators on them.

A sharing group is an ``int`` bit mask over the universe (never zero); an
element of SH is an immutable set of such masks tied to its universe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .universe import UniverseMismatch, UnknownVariable, VarUniverse


class ParseError(ValueError):
    """Malformed textual input. ``col`` is a 0-based offset when known."""

    def __init__(self, message: str, col: int | None = None):
        super().__init__(message if col is None else f"{message} (col {col})")
        self.col = col


def group_key(g: int) -> tuple[int, int]:
    """Canonical group order: by cardinality, then bit pattern."""
    return (g.bit_count(), g)


@dataclass(frozen=True)
class ShElement:
    universe: VarUniverse
    groups: frozenset

    def __post_init__(self):
        groups = frozenset(self.groups)
        full = self.universe.full
        for g in groups:
            if not isinstance(g, int) or g <= 0 or g & ~full:
                raise ValueError(f"invalid sharing group {g!r} for n={self.universe.n}")
        object.__setattr__(self, "groups", groups)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted_groups())

    def __len__(self) -> int:
        return len(self.groups)

    def __contains__(self, g) -> bool:
        return g in self.groups

    def __le__(self, other: "ShElement") -> bool:
        return self.groups <= other.groups

    def __lt__(self, other: "ShElement") -> bool:
        return self.groups < other.groups

    def sorted_groups(self) -> list[int]:
        return sorted(self.groups, key=group_key)

    def __str__(self) -> str:
        return format_sh(self)

    def _new(self, groups) -> "ShElement":
        return ShElement(self.universe, frozenset(groups))


def sh(u: VarUniverse, groups: Iterable = ()) -> ShElement:
    """Build an element from masks or from group specs such as ``"xy"``."""
    masks = []
    for g in groups:
        m = u.mask(g)
        if m == 0:
            raise ValueError("sharing groups must be nonempty")
        masks.append(m)
    return ShElement(u, frozenset(masks))


def bottom(u: VarUniverse) -> ShElement:
    return ShElement(u, frozenset())


def top(u: VarUniverse) -> ShElement:
    """SG, every nonempty subset of the universe."""
    return ShElement(u, frozenset(range(1, u.full + 1)))


# -- text / JSON formats ---------------------------------------------------


def format_group(u: VarUniverse, g: int, sep: str = "") -> str:
    return sep.join(u.names_in(g))


def format_sh(x: ShElement) -> str:
    """Human text form, e.g. ``{x, xy}``; needs single-character names."""
    u = x.universe
    if not u.single_char:
        return json.dumps(to_json(x))
    return "{" + ", ".join(format_group(u, g) for g in x.sorted_groups()) + "}"


def to_json(x: ShElement) -> list[list[str]]:
    return [x.universe.names_in(g) for g in x.sorted_groups()]


def from_json(u: VarUniverse, data) -> ShElement:
    if not isinstance(data, list):
        raise ParseError("expected a JSON array of groups")
    masks = []
    for grp in data:
        if not isinstance(grp, list) or not grp:
            raise ParseError("each group must be a nonempty array of variable names")
        m = 0
        for name in grp:
            if not isinstance(name, str):
                raise ParseError(f"variable names must be strings, got {name!r}")
            m |= 1 << u.index(name)
        masks.append(m)
    return ShElement(u, frozenset(masks))


def parse_sh(u: VarUniverse, text: str) -> ShElement:
    """Parse either the brace text form or the JSON array form."""
    s = text.strip()
    if s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from None
        return from_json(u, data)
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("expected '{...}' or a JSON array", 0)
    if not u.single_char:
        raise ParseError("brace form needs single-character variable names; use JSON")
    body = s[1:-1]
    masks = []
    if body.strip():
        offset = text.index("{") + 1
        for part in body.split(","):
            tok = part.strip()
            if not tok:
                raise ParseError("empty sharing group", offset)
            m = 0
            for ch in tok:
                if ch not in u:
                    raise UnknownVariable(f"unknown variable: {ch!r}")
                bit = 1 << u.index(ch)
                if m & bit:
                    raise ParseError(f"repeated variable {ch!r} in group {tok!r}", offset)
                m |= bit
            masks.append(m)
            offset += len(part) + 1
    return ShElement(u, frozenset(masks))


# -- operators -------------------------------------------------------------


def _same(a: ShElement, b: ShElement) -> None:
    if a.universe is not b.universe and a.universe.names != b.universe.names:
        raise UniverseMismatch(
            f"universe mismatch: {list(a.universe.names)} vs {list(b.universe.names)}"
        )


def bin_groups(a: Iterable[int], b: Iterable[int]) -> frozenset:
    b = list(b)
    return frozenset(s1 | s2 for s1 in a for s2 in b)


def star_groups(groups: Iterable[int]) -> frozenset:
    """All unions of nonempty subsets of ``groups``.

    Computed as the fixpoint of pairwise union: each newly found union is
    combined with the original generators only.
    """
    gens = list(set(groups))
    seen = set(gens)
    todo = list(gens)
    while todo:
        s = todo.pop()
        for g in gens:
            t = s | g
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return frozenset(seen)


def self_union_groups(groups: Iterable[int], j: int) -> frozenset:
    gens = frozenset(groups)
    level = gens
    acc = set(gens)
    for _ in range(j - 1):
        nxt = {s | g for s in level for g in gens} - acc
        if not nxt:
            break
        acc |= nxt
        level = frozenset(nxt)
    return frozenset(acc)


def bin(sh1: ShElement, sh2: ShElement) -> ShElement:  # noqa: A001 - the operator's name
    """Binary union: pairwise unions of groups of ``sh1`` and ``sh2``."""
    _same(sh1, sh2)
    return sh1._new(bin_groups(sh1.groups, sh2.groups))


def star_union(x: ShElement) -> ShElement:
    return x._new(star_groups(x.groups))


def self_union(x: ShElement, j: int) -> ShElement:
    """Unions of at most ``j`` groups of ``x``."""
    if not isinstance(j, int) or j < 1:
        raise ValueError(f"self-union index must be a positive integer, got {j!r}")
    return x._new(self_union_groups(x.groups, j))


def rel(V, x: ShElement) -> ShElement:
    """Groups of ``x`` that meet the variable set ``V``."""
    v = x.universe.mask(V)
    return x._new(g for g in x.groups if g & v)


def proj(x: ShElement, V) -> ShElement:
    u = x.universe
    v = u.mask(V)
    kept = {g & v for g in x.groups if g & v}
    rest = u.full & ~v
    kept.update(1 << i for i in range(u.n) if rest >> i & 1)
    return x._new(kept)


def amgu_binding(x: ShElement, var, t_vars) -> ShElement:
    """Effect of a binding ``var -> t`` where ``t_vars`` = vars(t)."""
    u = x.universe
    vx = 1 << u.index(var) if isinstance(var, str) else u.mask(1 << var)
    vt = u.mask(t_vars)
    vxt = vx | vt
    rel_x = [g for g in x.groups if g & vx]
    rel_t = [g for g in x.groups if g & vt]
    out = {g for g in x.groups if not g & vxt}
    if rel_x and rel_t:
        out |= bin_groups(star_groups(rel_x), star_groups(rel_t))
    return x._new(out)


def lowered(sigma) -> list[tuple[int, int]]:
    """Normalise a substitution to ``(var_index, vars_mask)`` pairs.

    Accepts a :class:`setsharing.terms.Substitution` or any iterable of
    pairs.
    """
    if hasattr(sigma, "lowered"):
        return sigma.lowered()
    return [tuple(b) for b in sigma]


def amgu(x: ShElement, sigma) -> ShElement:
    """Fold :func:`amgu_binding` over the bindings of ``sigma`` in order."""
    out = x
    for var, vt in lowered(sigma):
        out = amgu_binding(out, var, vt)
    return out


def lub(sh1: ShElement, sh2: ShElement) -> ShElement:
    _same(sh1, sh2)
    return sh1._new(sh1.groups | sh2.groups)


def glb(sh1: ShElement, sh2: ShElement) -> ShElement:
    _same(sh1, sh2)
    return sh1._new(sh1.groups & sh2.groups)
