"""Sequences over a finite group, stored as multiplicity vectors.

A sequence is an unordered multiset; orderings only appear in OrderedTuple
(used by certificates).  The text format is comma-separated labels with an
optional multiplicity bracket, e.g. ``x^[5],y^2,y^4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .groups import FiniteGroup, GroupMap


class SequenceFormatError(ValueError):
    pass


class GroupMismatchError(ValueError):
    pass


class SequenceStats(NamedTuple):
    length: int
    max_multiplicity: int
    support: tuple[int, ...]
    squarefree: bool


def _same_group(a: FiniteGroup, b: FiniteGroup) -> bool:
    return a is b or a == b


class Sequence:
    """Multiset of group elements as a fixed-width multiplicity vector."""

    __slots__ = ("group", "counts")

    def __init__(self, group: FiniteGroup, counts: Iterable[int]):
        counts = tuple(int(c) for c in counts)
        if len(counts) != group.order:
            raise ValueError("counts vector length must equal the group order")
        if any(c < 0 for c in counts):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "counts", counts)

    def __setattr__(self, name, value):  # immutability keeps hashing honest
        raise AttributeError("Sequence is immutable")

    @classmethod
    def empty(cls, group: FiniteGroup) -> "Sequence":
        return cls(group, (0,) * group.order)

    @classmethod
    def from_elements(cls, group: FiniteGroup, elements: Iterable[int]) -> "Sequence":
        counts = [0] * group.order
        for g in elements:
            counts[g] += 1
        return cls(group, counts)

    @classmethod
    def from_pairs(cls, group: FiniteGroup, pairs: Iterable[tuple[int, int]]) -> "Sequence":
        counts = [0] * group.order
        for g, mult in pairs:
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            counts[g] += mult
        return cls(group, counts)

    @classmethod
    def parse(cls, group: FiniteGroup, text: str) -> "Sequence":
        """Parse ``label`` or ``label^[mult]`` terms separated by commas."""
        counts = [0] * group.order
        text = text.strip()
        if not text:
            return cls(group, counts)
        for term in text.split(","):
            term = term.strip()
            if not term:
                raise SequenceFormatError("empty term in sequence text")
            mult = 1
            if term.endswith("]") and "^[" in term:
                base, _, brack = term.rpartition("^[")
                try:
                    mult = int(brack[:-1])
                except ValueError:
                    raise SequenceFormatError(f"bad multiplicity in {term!r}") from None
                if mult < 0:
                    raise SequenceFormatError(f"negative multiplicity in {term!r}")
                term = base
            try:
                g = group.element(term)
            except KeyError:
                raise SequenceFormatError(
                    f"unknown element {term!r} for {group.describe_short()}"
                ) from None
            counts[g] += mult
        return cls(group, counts)

    # -- basic queries ------------------------------------------------------

    @property
    def length(self) -> int:
        return sum(self.counts)

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return any(self.counts)

    def multiplicity(self, g: int) -> int:
        return self.counts[g]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(g for g, c in enumerate(self.counts) if c)

    @property
    def max_multiplicity(self) -> int:
        return max(self.counts) if self.counts else 0

    @property
    def is_squarefree(self) -> bool:
        return self.max_multiplicity <= 1

    def stats(self) -> SequenceStats:
        return SequenceStats(self.length, self.max_multiplicity, self.support, self.is_squarefree)

    def elements_list(self) -> list[int]:
        out: list[int] = []
        for g, c in enumerate(self.counts):
            out.extend([g] * c)
        return out

    # -- multiset algebra ---------------------------------------------------

    def _check_group(self, other: "Sequence") -> None:
        if not _same_group(self.group, other.group):
            raise GroupMismatchError("sequences live over different groups")

    def concat(self, other: "Sequence") -> "Sequence":
        self._check_group(other)
        return Sequence(self.group, (a + b for a, b in zip(self.counts, other.counts)))

    def subtract(self, other: "Sequence") -> "Sequence":
        """Truncated difference max{0, v(self) - v(other)}."""
        self._check_group(other)
        return Sequence(self.group, (max(0, a - b) for a, b in zip(self.counts, other.counts)))

    def intersect(self, other: "Sequence") -> "Sequence":
        self._check_group(other)
        return Sequence(self.group, (min(a, b) for a, b in zip(self.counts, other.counts)))

    def divides(self, other: "Sequence") -> bool:
        """True if self is a subsequence of other (componentwise <=)."""
        self._check_group(other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def with_added(self, g: int, mult: int = 1) -> "Sequence":
        counts = list(self.counts)
        counts[g] += mult
        return Sequence(self.group, counts)

    def with_removed(self, g: int, mult: int = 1) -> "Sequence":
        counts = list(self.counts)
        counts[g] -= mult
        if counts[g] < 0:
            raise ValueError(f"cannot remove {mult} copies of element {g}")
        return Sequence(self.group, counts)

    def coset_split(self) -> dict[int, "Sequence"]:
        """Partition by coset class; the parts concatenate back to self."""
        group = self.group
        parts = {c: [0] * group.order for c in range(group.num_cosets)}
        for g, v in enumerate(self.counts):
            if v:
                parts[group.coset_class(g)][g] = v
        return {c: Sequence(group, counts) for c, counts in parts.items()}

    def apply_map(self, gmap: GroupMap) -> "Sequence":
        if not _same_group(gmap.source, self.group):
            raise GroupMismatchError("map source does not match the sequence group")
        counts = [0] * gmap.target.order
        for g, v in enumerate(self.counts):
            if v:
                counts[gmap.image[g]] += v
        return Sequence(gmap.target, counts)

    # -- formatting ---------------------------------------------------------

    def to_text(self) -> str:
        terms = []
        for g, v in enumerate(self.counts):
            if v == 1:
                terms.append(self.group.label(g))
            elif v > 1:
                terms.append(f"{self.group.label(g)}^[{v}]")
        return ",".join(terms)

    def __repr__(self) -> str:
        return f"Sequence({self.to_text()!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Sequence)
            and self.counts == other.counts
            and _same_group(self.group, other.group)
        )

    def __hash__(self) -> int:
        return hash(self.counts)


@dataclass(frozen=True)
class OrderedTuple:
    """An ordered tuple of elements, optionally with signs in {+1, -1}."""

    elements: tuple[int, ...]
    signs: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.signs is not None:
            if len(self.signs) != len(self.elements):
                raise ValueError("signs and elements must have equal length")
            if any(s not in (1, -1) for s in self.signs):
                raise ValueError("signs must be +1 or -1")

    def __len__(self) -> int:
        return len(self.elements)

    def product(self, group: FiniteGroup) -> int:
        acc = group.identity
        if self.signs is None:
            for g in self.elements:
                acc = group.op(acc, g)
        else:
            for g, s in zip(self.elements, self.signs):
                acc = group.op(acc, g if s == 1 else group.inv[g])
        return acc

    def as_sequence(self, group: FiniteGroup) -> Sequence:
        return Sequence.from_elements(group, self.elements)


def enumerate_multisets(
    group: FiniteGroup,
    length: int,
    visitor: Callable[[Sequence], None],
    prune: Callable[[Sequence], bool] | None = None,
) -> int:
    """Depth-first enumeration of all multisets of the given length in
    nondecreasing element-index order.

    ``prune`` is called on every partial multiset as elements are added; when
    it returns True no extension of that prefix is visited.  Soundness of
    pruning is the caller's obligation (the predicate must be monotone).
    Returns the number of complete multisets visited.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    order = group.order
    counts = [0] * order
    visited = 0

    def rec(start: int, remaining: int) -> None:
        nonlocal visited
        if remaining == 0:
            visited += 1
            visitor(Sequence(group, counts))
            return
        for g in range(start, order):
            counts[g] += 1
            if prune is None or not prune(Sequence(group, counts)):
                rec(g, remaining - 1)
            counts[g] -= 1

    rec(0, length)
    return visited


def canonical_form(seq: Sequence, maps: Iterable[GroupMap]) -> Sequence:
    """Lexicographically minimal counts vector over the orbit of seq under the
    supplied automorphisms.  Idempotent and constant on orbits."""
    counts = seq.counts
    order = seq.group.order
    best = None
    for m in maps:
        img = m.image
        t = [0] * order
        for g, v in enumerate(counts):
            if v:
                t[img[g]] = v
        t = tuple(t)
        if best is None or t < best:
            best = t
    if best is None:
        return seq
    return Sequence(seq.group, best)
