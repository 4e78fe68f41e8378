"""Finite lattices of SH elements: images, Moore completion, meet-irreducibles,
reduced product and complementation.

Inside a :class:`DomainImage` an element of SH is an int with bit ``g - 1``
set for each sharing group ``g`` (a (2^n - 1)-bit vector), so glb is ``&``
and inclusion is ``a & ~b == 0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .closures import ClosureId, apply_closure, parse_closure
from .shcore import ShElement, group_key
from .universe import ENUM_CAP, CapExceeded, VarUniverse

BRUTEFORCE_MAX = 10_000
VALIDATE_MAX = 4096


class NotSubdomain(ValueError):
    """The removed image is not contained in the reference image."""


# -- element encoding ------------------------------------------------------


def encode(x: ShElement) -> int:
    e = 0
    for g in x.groups:
        e |= 1 << (g - 1)
    return e


def decode(u: VarUniverse, e: int) -> ShElement:
    groups = []
    g = 1
    while e:
        if e & 1:
            groups.append(g)
        e >>= 1
        g += 1
    return ShElement(u, frozenset(groups))


def top_code(u: VarUniverse) -> int:
    return (1 << u.full) - 1


def group_code(g: int) -> int:
    return 1 << (g - 1)


def groups_of(e: int) -> list[int]:
    out = []
    g = 1
    while e:
        if e & 1:
            out.append(g)
        e >>= 1
        g += 1
    return sorted(out, key=group_key)


def element_key(e: int):
    """Canonical element order: fewer groups first, then group lists."""
    return (e.bit_count(), [group_key(g) for g in groups_of(e)])


def check_cap(u: VarUniverse, cap: int = ENUM_CAP, force: bool = False) -> None:
    if u.n > cap and not force:
        raise CapExceeded(
            f"lattice enumeration is capped at n <= {cap} (|SH| = 2^(2^n - 1)); got n = {u.n}"
        )


@dataclass(frozen=True)
class DomainImage:
    """A Moore family of SH elements (always contains the top SG)."""

    universe: VarUniverse
    elements: frozenset
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        if top_code(self.universe) not in self.elements:
            raise ValueError(f"image {self.label!r} does not contain the top element SG")
        if len(self.elements) <= VALIDATE_MAX and not is_meet_closed(self.elements):
            raise ValueError(f"image {self.label!r} is not closed under intersection")

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        if isinstance(x, ShElement):
            x = encode(x)
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted())

    @property
    def top(self) -> int:
        return top_code(self.universe)

    def sorted(self) -> list[int]:
        return sorted(self.elements, key=element_key)

    def sh_elements(self) -> list[ShElement]:
        return [decode(self.universe, e) for e in self.sorted()]

    def relabel(self, label: str) -> "DomainImage":
        return DomainImage(self.universe, self.elements, label)

    def filter(self, pred, label: str) -> "DomainImage":
        """Subset of elements satisfying ``pred`` (on encoded elements)."""
        return DomainImage(self.universe, frozenset(e for e in self.elements if pred(e)), label)


def is_meet_closed(elements: Iterable[int]) -> bool:
    a = _array(elements)
    for x in a.tolist():
        m = a & x
        idx = np.searchsorted(a, m).clip(max=len(a) - 1)
        if not np.array_equal(a[idx], m):
            return False
    return True


def _array(elements: Iterable[int]) -> np.ndarray:
    return np.fromiter(sorted(elements), dtype=np.int64)


# -- construction ----------------------------------------------------------


def enumerate_sh(u: VarUniverse, cap: int = ENUM_CAP, force: bool = False) -> DomainImage:
    """Every subset of SG."""
    check_cap(u, cap, force)
    return DomainImage(u, frozenset(range(1 << u.full)), "sh")


@lru_cache(maxsize=64)
def _image_codes(u: VarUniverse, c: ClosureId) -> frozenset:
    if c.kind == "Identity":
        return frozenset(range(1 << u.full))
    if c.kind == "Top":
        return frozenset({top_code(u)})
    return frozenset(encode(apply_closure(c, decode(u, e))) for e in range(1 << u.full))


def image_of(u: VarUniverse, c: ClosureId | str, cap: int = ENUM_CAP,
             force: bool = False) -> DomainImage:
    """The set of fixpoints of a closure, computed as ``{rho(sh) | sh in SH}``."""
    if isinstance(c, str):
        c = parse_closure(c)
    c.check(u.n)
    check_cap(u, cap, force)
    return DomainImage(u, _image_codes(u, c.normalized(u.n)), c.label)


def moore(u: VarUniverse, xs: Iterable, label: str = "moore") -> DomainImage:
    """Closure of ``xs`` under intersection, including the empty meet SG."""
    gens = {encode(x) if isinstance(x, ShElement) else x for x in xs}
    t = top_code(u)
    seen = {t}
    todo = [t]
    gens_list = sorted(gens)
    while todo:
        e = todo.pop()
        for g in gens_list:
            f = e & g
            if f not in seen:
                seen.add(f)
                todo.append(f)
    return DomainImage(u, frozenset(seen), label)


def reduced_product(d1: DomainImage, d2: DomainImage, label: str | None = None) -> DomainImage:
    """Moore completion of the union of two images.

    Both inputs are meet-closed and contain SG, so every meet of a subset
    of the union is ``a & b`` with ``a`` in ``d1`` and ``b`` in ``d2``.
    """
    d1.universe.check_same(d2.universe)
    a = _array(d1.elements)
    out: set[int] = set()
    for b in sorted(d2.elements):
        out.update((a & b).tolist())
    return DomainImage(d1.universe, frozenset(out), label or f"({d1.label} * {d2.label})")


# -- order-theoretic queries -----------------------------------------------


def dual_atoms(d: DomainImage) -> frozenset:
    """Elements below top with nothing strictly between them and top."""
    t = d.top
    a = _array(e for e in d.elements if e != t)
    out = []
    for x in a.tolist():
        above = (a & x) == x
        if int(above.sum()) == 1:  # only x itself
            out.append(x)
    return frozenset(out)


def upper_covers(d: DomainImage, x: int) -> list[int]:
    """Minimal elements of ``d`` strictly above ``x``."""
    a = _array(d.elements)
    sup = a[((a & x) == x) & (a != x)].tolist()
    sup.sort(key=int.bit_count)
    covers: list[int] = []
    for y in sup:
        if not any(c & y == c for c in covers):
            covers.append(y)
    return covers


def meet_irreducibles(d: DomainImage, method: str = "covers") -> frozenset:
    """Meet-irreducible elements (the top is always included).

    ``bruteforce`` marks ``y & z`` reducible for every pair with
    ``y & z`` distinct from both; ``covers`` keeps each ``x`` with exactly
    one upper cover, i.e. whose strict supersets in ``d`` have a meet
    different from ``x``.
    """
    if method not in ("bruteforce", "covers"):
        raise ValueError(f"unknown MI method {method!r}")
    return _mi_cached(d, method)


@lru_cache(maxsize=128)
def _mi_cached(d: DomainImage, method: str) -> frozenset:
    return _mi_bruteforce(d) if method == "bruteforce" else _mi_covers(d)


def _mi_bruteforce(d: DomainImage) -> frozenset:
    if len(d) > BRUTEFORCE_MAX:
        raise CapExceeded(f"bruteforce MI limited to {BRUTEFORCE_MAX} elements, got {len(d)}")
    a = _array(d.elements)
    reducible: set[int] = set()
    step = max(1, 2_000_000 // max(1, len(a)))
    for i in range(0, len(a), step):
        rows = a[i:i + step, None]
        m = rows & a[None, :]
        mask = (m != rows) & (m != a[None, :])
        reducible.update(np.unique(m[mask]).tolist())
    return frozenset(d.elements - reducible)


def _mi_covers(d: DomainImage) -> frozenset:
    t = d.top
    a = _array(d.elements)
    out = {t}
    for x in a.tolist():
        if x == t:
            continue
        strict = a[((a & x) == x) & (a != x)]
        if int(np.bitwise_and.reduce(strict)) != x:
            out.add(x)
    return frozenset(out)


@dataclass(frozen=True)
class MICounts:
    datoms: int
    m: int
    mi: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.datoms, self.m, self.mi)


def mi_counts(n: int, k: int) -> MICounts:
    """Closed-form sizes of dAtoms, M_k and MI for the TSD_k lattice."""
    return MICounts(
        datoms=sum(math.comb(n, j) for j in range(1, k + 1)),
        m=math.comb(n, k) * (2 ** (n - k) - 1),
        mi=sum(math.comb(n, j) for j in range(k)) + math.comb(n, k) * 2 ** (n - k),
    )


def mi_formula(u: VarUniverse, k: int) -> tuple[frozenset, MICounts]:
    """Meet-irreducibles of TSD_k built directly from their characterisation.

    Returns ``{SG} | dAtoms | M_k`` where the dual-atoms remove one group of
    size at most k and each member of ``M_k`` removes every group between a
    k-tuple ``T`` and a strictly larger group ``S``.
    """
    n = u.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    t = top_code(u)
    datoms = {t & ~group_code(s) for s in range(1, u.full + 1) if s.bit_count() <= k}
    m_k = set()
    for s in range(1, u.full + 1):
        if s.bit_count() <= k:
            continue
        for tup in range(1, u.full + 1):
            if tup.bit_count() == k and tup & ~s == 0:
                between = 0
                for g in range(1, u.full + 1):
                    if g & tup == tup and g & ~s == 0:
                        between |= group_code(g)
                m_k.add(t & ~between)
    return frozenset({t} | datoms | m_k), mi_counts(n, k)


# -- complementation -------------------------------------------------------


def complement(reference: DomainImage, abstraction: DomainImage,
               method: str = "covers", label: str | None = None) -> DomainImage:
    """Weak relative pseudo-complement ``reference ~ abstraction``.

    Computed as the Moore completion of the meet-irreducibles of the
    reference that are not in the abstraction.
    """
    reference.universe.check_same(abstraction.universe)
    if not abstraction.elements <= reference.elements:
        extra = len(abstraction.elements - reference.elements)
        raise NotSubdomain(
            f"{abstraction.label!r} is not a subdomain of {reference.label!r} "
            f"({extra} elements outside)"
        )
    mi = meet_irreducibles(reference, method)
    return moore(reference.universe, mi - abstraction.elements,
                 label or f"({reference.label} ~ {abstraction.label})")


# -- named subdomains ------------------------------------------------------


def _singletons(u: VarUniverse) -> int:
    e = 0
    for i in range(u.n):
        e |= group_code(1 << i)
    return e


def _small_groups(u: VarUniverse, j: int) -> int:
    e = 0
    for g in range(1, u.full + 1):
        if g.bit_count() <= j:
            e |= group_code(g)
    return e


SUBDOMAINS = ("sh_plus:<j>", "sh_plus_def", "sh_plus_psd", "psd_plus", "def_oplus",
              "psd_oplus", "psd_ddagger", "def_minus")


def named_subdomain(u: VarUniverse, name: str, cap: int = ENUM_CAP,
                    force: bool = False) -> DomainImage:
    """Subdomains defined by a membership predicate over a parent image."""
    key = name.strip().lower().replace("-", "_")
    vi = group_code(u.full)
    singles = _singletons(u)

    def has(mask):
        return lambda e: e & mask == mask

    if key.startswith("sh_plus:"):
        j = int(key.split(":", 1)[1])
        if not 1 <= j <= u.n:
            raise ValueError(f"sh_plus index {j} out of range 1..{u.n}")
        return enumerate_sh(u, cap, force).filter(has(_small_groups(u, j)), f"sh_plus:{j}")
    if key == "sh_plus_def":
        return enumerate_sh(u, cap, force).filter(has(_small_groups(u, 1)), "sh_plus_def")
    if key == "sh_plus_psd":
        return enumerate_sh(u, cap, force).filter(has(_small_groups(u, 2)), "sh_plus_psd")
    if key == "def_oplus":
        return image_of(u, "def", cap, force).filter(has(vi), "def_oplus")
    if key == "psd_oplus":
        return image_of(u, "psd", cap, force).filter(has(vi), "psd_oplus")
    if key == "psd_plus":
        return image_of(u, "psd", cap, force).filter(has(singles), "psd_plus")
    if key == "psd_ddagger":
        return image_of(u, "psd", cap, force).filter(has(singles | vi), "psd_ddagger")
    if key == "def_minus":
        return complement(image_of(u, "psd", cap, force),
                          named_subdomain(u, "psd_plus", cap, force), label="def_minus")
    raise ValueError(f"unknown subdomain {name!r}; expected one of {', '.join(SUBDOMAINS)}")


def resolve_domain(u: VarUniverse, name: str, cap: int = ENUM_CAP,
                   force: bool = False) -> DomainImage:
    """A closure name (``psd``, ``ts:3``...) or a named subdomain."""
    try:
        c = parse_closure(name)
    except ValueError:
        return named_subdomain(u, name, cap, force)
    return image_of(u, c, cap, force)


# -- serialisation ---------------------------------------------------------


def element_names(u: VarUniverse, e: int) -> list[list[str]]:
    return [u.names_in(g) for g in groups_of(e)]


def image_to_json(d: DomainImage) -> dict:
    return {
        "vars": list(d.universe.names),
        "label": d.label,
        "elements": [element_names(d.universe, e) for e in d.sorted()],
    }


def elements_to_json(u: VarUniverse, elements: Iterable[int]) -> list:
    return [element_names(u, e) for e in sorted(elements, key=element_key)]


def encode_names(u: VarUniverse, groups: list[list[str]]) -> int:
    e = 0
    for grp in groups:
        m = 0
        for name in grp:
            m |= 1 << u.index(name)
        if m == 0:
            raise ValueError("empty sharing group")
        e |= group_code(m)
    return e


def image_from_json(data: dict) -> DomainImage:
    u = VarUniverse(tuple(data["vars"]))
    return DomainImage(u, frozenset(encode_names(u, el) for el in data["elements"]),
                       data.get("label", ""))


def dumps_image(d: DomainImage) -> str:
    return json.dumps(image_to_json(d), indent=None, separators=(", ", ": "))
