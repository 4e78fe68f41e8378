"""Tuple-sharing closures and tuple-sharing dependency closures on SH.

Both families are evaluated through one primitive, ``tuple_set(S, m)``:
the set of ``m``-element subsets of a group ``S`` encoded as a bit set
indexed by subset mask.

* ``S`` is in ``rho_ts(sh, k)`` iff every k-subset of ``S`` lies inside
  some group of ``sh``.
* ``S`` is in ``rho_tsd(sh, k)`` iff every ``min(k, #S)``-subset of ``S``
  lies inside some group ``U`` of ``sh`` with ``U`` a subset of ``S``.

The second form is equivalent to the reconstruction condition quantified
over all ``T`` of size below ``k`` (including the empty set): take
``W = T | {x}`` for each ``x`` in ``S``. The literal quantifier form is
kept as an independent oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .shcore import ShElement, star_groups
from .universe import CapExceeded, submasks

#: closures enumerate candidate groups, so they are limited to this many variables
CLOSURE_MAX_VARS = 16


@lru_cache(maxsize=1 << 16)
def tuple_set(s: int, m: int) -> int:
    """Bit set (bit ``W``) of the ``m``-element submasks ``W`` of ``s``."""
    if m == 0:
        return 1
    out = 0
    for w in submasks(s):
        if w.bit_count() == m:
            out |= 1 << w
    return out


def _check(x: ShElement, k: int | None = None) -> None:
    n = x.universe.n
    if n > CLOSURE_MAX_VARS:
        raise CapExceeded(f"closure evaluation supports n <= {CLOSURE_MAX_VARS}, got {n}")
    if k is not None and (not isinstance(k, int) or not 1 <= k <= n):
        raise ValueError(f"tuple size k={k!r} out of range 1..{n}")


def tuples_k(x: ShElement, k: int) -> frozenset:
    """All k-element subsets of groups of ``x`` (as masks)."""
    _check(x, k)
    out = set()
    for g in x.groups:
        out.update(w for w in submasks(g) if w.bit_count() == k)
    return frozenset(out)


def pairs(x: ShElement) -> frozenset:
    return tuples_k(x, 2)


def rho_ts(x: ShElement, k: int) -> ShElement:
    """Tuple-sharing closure: groups whose k-tuples all occur in ``x``."""
    _check(x, k)
    covered = 0
    for g in x.groups:
        covered |= tuple_set(g, k)
    out = [s for s in range(1, x.universe.full + 1)
           if s.bit_count() < k or not tuple_set(s, k) & ~covered]
    return x._new(out)


def rho_tsd(x: ShElement, k: int) -> ShElement:
    """Tuple-sharing dependency closure."""
    _check(x, k)
    groups = list(x.groups)
    if k == 1:
        return x._new(star_groups(groups))
    union = 0
    for g in groups:
        union |= g
    out = []
    for s in submasks(union):
        m = min(k, s.bit_count())
        cov = 0
        for g in groups:
            if not g & ~s:
                cov |= tuple_set(g, m)
        if not tuple_set(s, m) & ~cov:
            out.append(s)
    return x._new(out)


def rho_con(x: ShElement) -> ShElement:
    return rho_ts(x, 1)


def rho_ps(x: ShElement) -> ShElement:
    return rho_ts(x, 2)


def rho_def(x: ShElement) -> ShElement:
    return rho_tsd(x, 1)


def rho_psd(x: ShElement) -> ShElement:
    return rho_tsd(x, 2)


def rho_ps_prime(x: ShElement) -> ShElement:
    """Pair-sharing closure that keeps the full group VI only if present."""
    vi = x.universe.full
    out = rho_ts(x, 2).groups
    if vi not in x.groups:
        out = out - {vi}
    return x._new(out)


def ground_equiv_classes(x: ShElement) -> list[int]:
    """Partition of the universe: x ~ y iff rel({x}) = rel({y}).

    Classes are masks, ordered by their lowest variable.
    """
    u = x.universe
    by_rel: dict[frozenset, int] = {}
    for i in range(u.n):
        key = frozenset(g for g in x.groups if g >> i & 1)
        by_rel[key] = by_rel.get(key, 0) | (1 << i)
    return sorted(by_rel.values(), key=lambda m: m & -m)


# -- named closures --------------------------------------------------------

KINDS = ("TS", "TSD", "PSPrime", "Identity", "Top")


@dataclass(frozen=True)
class ClosureId:
    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown closure kind {self.kind!r}")
        if self.kind in ("TS", "TSD"):
            if not isinstance(self.k, int) or self.k < 1:
                raise ValueError(f"{self.kind} needs a positive index k")
        elif self.k is not None:
            raise ValueError(f"{self.kind} takes no index")

    def check(self, n: int) -> None:
        if self.kind in ("TS", "TSD") and self.k > n:
            raise ValueError(f"{self.label} needs k <= n = {n}")
        if self.kind == "PSPrime" and n < 2:
            raise ValueError("ps-prime needs at least two variables")

    def normalized(self, n: int) -> "ClosureId":
        """Resolve TSD(n) to the identity."""
        if self.kind == "TSD" and self.k == n:
            return ClosureId("Identity")
        return self

    @property
    def label(self) -> str:
        if self.kind == "TS":
            return {1: "con", 2: "ps"}.get(self.k, f"ts:{self.k}")
        if self.kind == "TSD":
            return {1: "def", 2: "psd"}.get(self.k, f"tsd:{self.k}")
        return {"PSPrime": "ps-prime", "Identity": "sh", "Top": "top"}[self.kind]

    def __str__(self) -> str:
        return self.label

    def __call__(self, x: ShElement) -> ShElement:
        return apply_closure(self, x)


ALIASES = {
    "con": ClosureId("TS", 1),
    "ps": ClosureId("TS", 2),
    "def": ClosureId("TSD", 1),
    "psd": ClosureId("TSD", 2),
    "ps-prime": ClosureId("PSPrime"),
    "sh": ClosureId("Identity"),
    "top": ClosureId("Top"),
}


def parse_closure(name: str) -> ClosureId:
    """Parse ``con``, ``ps``, ``ts:<k>``, ``def``, ``psd``, ``tsd:<k>``, ``ps-prime``, ``sh``."""
    key = name.strip().lower()
    if key in ALIASES:
        return ALIASES[key]
    for prefix, kind in (("ts:", "TS"), ("tsd:", "TSD")):
        if key.startswith(prefix):
            digits = key[len(prefix):]
            if digits.isdigit() and int(digits) >= 1:
                return ClosureId(kind, int(digits))
    raise ValueError(f"unknown closure name {name!r}")


def apply_closure(c: ClosureId, x: ShElement) -> ShElement:
    c.check(x.universe.n)
    if c.kind == "TS":
        return rho_ts(x, c.k)
    if c.kind == "TSD":
        return rho_tsd(x, c.k)
    if c.kind == "PSPrime":
        return rho_ps_prime(x)
    if c.kind == "Identity":
        return x
    return x._new(range(1, x.universe.full + 1))


def is_fixpoint(c: ClosureId, x: ShElement) -> bool:
    """Domain membership: ``x`` is in the image of ``c``."""
    return apply_closure(c, x) == x
