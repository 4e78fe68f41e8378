"""The fixed set of variables of interest and its bit encoding."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

#: hard limit on the number of variables (groups are Python ints, but keep
#: masks machine-word sized)
MAX_VARS = 62
#: default limit for operations that enumerate all of SH
ENUM_CAP = 4


class UniverseError(ValueError):
    """Base class for universe construction and lookup errors."""


class DuplicateName(UniverseError):
    pass


class MalformedIdentifier(UniverseError):
    pass


class UnknownVariable(UniverseError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0] if self.args else "unknown variable"


class UniverseMismatch(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured size cap."""


@dataclass(frozen=True)
class VarUniverse:
    """An ordered, immutable set of variable names.

    Variable ``names[i]`` is encoded as bit ``i``; a set of variables is an
    int whose set bits index into ``names``.
    """

    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise UniverseError("universe must contain at least one variable")
        if len(names) > MAX_VARS:
            raise UniverseError(f"at most {MAX_VARS} variables supported, got {len(names)}")
        index = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not IDENT_RE.match(name):
                raise MalformedIdentifier(f"malformed identifier: {name!r}")
            if name in index:
                raise DuplicateName(f"duplicate variable name: {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        """Mask of the whole universe (the sharing group VI)."""
        return (1 << self.n) - 1

    @property
    def single_char(self) -> bool:
        return all(len(name) == 1 for name in self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable: {name!r}") from None

    def name_of(self, i: int) -> str:
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range for n={self.n}")
        return self.names[i]

    def __contains__(self, name) -> bool:
        return name in self._index

    def mask(self, names: Iterable[str] | str | int) -> int:
        """Encode a collection of variable names as a bit mask.

        An int is taken to already be a mask and is range-checked. A string
        is split on commas; for single-character universes an unseparated
        string such as ``"xy"`` is read letter by letter.
        """
        if isinstance(names, int):
            if names < 0 or names & ~self.full:
                raise UnknownVariable(f"mask {names:#x} has bits outside the universe")
            return names
        if isinstance(names, str):
            text = names.strip()
            if "," in text or not self.single_char:
                names = [p.strip() for p in text.split(",") if p.strip()]
            else:
                names = list(text)
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names_in(self, mask: int) -> list[str]:
        return [self.names[i] for i in range(self.n) if mask >> i & 1]

    def check_same(self, other: "VarUniverse") -> None:
        if self is not other and self.names != other.names:
            raise UniverseMismatch(
                f"universe mismatch: {list(self.names)} vs {list(other.names)}"
            )


def make_universe(names) -> VarUniverse:
    """Build a universe; ``names`` may be a list or a comma-separated string."""
    if isinstance(names, str):
        names = [p.strip() for p in names.split(",")]
    return VarUniverse(tuple(names))


def var_index(u: VarUniverse, name: str) -> int:
    return u.index(name)


def numbered_universe(n: int) -> VarUniverse:
    """Universe ``v1..vn`` for when names are irrelevant."""
    if n < 1:
        raise UniverseError("n must be at least 1")
    return VarUniverse(tuple(f"v{i}" for i in range(1, n + 1)))


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_of(mask: int):
    """Yield the single-bit masks of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask: int):
    """Yield all nonempty submasks of ``mask`` (descending)."""
    s = mask
    while s:
        yield s
        s = (s - 1) & mask
