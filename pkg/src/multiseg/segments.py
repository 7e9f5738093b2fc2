"""Segments on a fixed supercuspidal line, multisegments and supports.

The line is identified with the integers, so a segment is just an integer
interval ``[b, e]`` and a multisegment is a finite multiset of non-trivial
segments kept in canonical order (begin ascending, then end ascending).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, ResourceBoundError, UsageError

__all__ = [
    "Segment",
    "Multisegment",
    "SupportVector",
    "precedes",
    "linked",
    "contains",
    "preceq_prime",
    "support",
    "b_stat",
    "parse_multisegment",
    "parse_segment",
]


@dataclass(frozen=True, order=True)
class Segment:
    """Integer interval [begin, end].

    A trivial segment has end == begin - 1; it may exist transiently (as
    the empty output of a splitting operation) but is never stored inside
    a Multisegment.
    """

    begin: int
    end: int

    def __post_init__(self):
        if self.end < self.begin - 1:
            raise DomainError(f"invalid segment [{self.begin},{self.end}]")

    @property
    def is_trivial(self) -> bool:
        return self.end == self.begin - 1

    def __len__(self) -> int:
        return self.end - self.begin + 1

    def __contains__(self, point: int) -> bool:
        return self.begin <= point <= self.end

    def __str__(self) -> str:
        return f"[{self.begin},{self.end}]"


def precedes(d1: Segment, d2: Segment) -> bool:
    """True iff d1 precedes d2: begins/ends strictly increase and they
    touch or overlap, so that their union is again a segment.

    >>> precedes(Segment(0, 1), Segment(1, 2))
    True
    """
    return d1.begin <= d2.begin - 1 <= d1.end < d2.end


def linked(d1: Segment, d2: Segment) -> bool:
    """True iff one of the two segments precedes the other."""
    return precedes(d1, d2) or precedes(d2, d1)


def contains(d1: Segment, d2: Segment) -> bool:
    """True iff d2 is a subinterval of d1 (reflexive)."""
    return d1.begin <= d2.begin and d2.end <= d1.end


def preceq_prime(d1: Segment, d2: Segment) -> bool:
    """Partial order: both endpoints strictly increase, or equality.

    Two distinct segments are incomparable exactly when one contains the
    other.
    """
    return d1 == d2 or (d1.begin < d2.begin and d1.end < d2.end)


@dataclass(frozen=True)
class Multisegment:
    """A finite multiset of non-trivial segments in canonical order."""

    entries: tuple[Segment, ...]

    def __post_init__(self):
        for d in self.entries:
            if d.is_trivial:
                raise DomainError(f"trivial segment {d} in multisegment")
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def of(cls, *segs: Segment | tuple[int, int]) -> "Multisegment":
        fixed = [d if isinstance(d, Segment) else Segment(*d) for d in segs]
        return cls(tuple(fixed))

    @classmethod
    def empty(cls) -> "Multisegment":
        return cls(())

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __add__(self, other: "Multisegment") -> "Multisegment":
        return Multisegment(self.entries + other.entries)

    def __sub__(self, other: "Multisegment") -> "Multisegment":
        rest = list(self.entries)
        for d in other.entries:
            try:
                rest.remove(d)
            except ValueError:
                raise DomainError(f"{other} is not a sub-multiset of {self}")
        return Multisegment(tuple(rest))

    def __le__(self, other: "Multisegment") -> bool:
        rest = list(other.entries)
        for d in self.entries:
            if d in rest:
                rest.remove(d)
            else:
                return False
        return True

    def remove(self, seg: Segment) -> "Multisegment":
        return self - Multisegment((seg,))

    def multiplicity(self, seg: Segment) -> int:
        return self.entries.count(seg)

    def total_size(self) -> int:
        """Total number of line points covered, with multiplicity."""
        return sum(len(d) for d in self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return "+".join(str(d) for d in self.entries)


@dataclass(frozen=True)
class SupportVector:
    """Finitely supported map from line points to nonnegative counts."""

    items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        cleaned = tuple(sorted((x, c) for x, c in self.items if c != 0))
        for _, c in cleaned:
            if c < 0:
                raise DomainError("negative multiplicity in support vector")
        object.__setattr__(self, "items", cleaned)

    @classmethod
    def zero(cls) -> "SupportVector":
        return cls(())

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "SupportVector":
        return cls(tuple(counts.items()))

    def __getitem__(self, point: int) -> int:
        for x, c in self.items:
            if x == point:
                return c
        return 0

    def __bool__(self) -> bool:
        return bool(self.items)

    def __add__(self, other: "SupportVector") -> "SupportVector":
        counts = dict(self.items)
        for x, c in other.items:
            counts[x] = counts.get(x, 0) + c
        return SupportVector.from_counts(counts)

    def __sub__(self, other: "SupportVector") -> "SupportVector":
        counts = dict(self.items)
        for x, c in other.items:
            counts[x] = counts.get(x, 0) - c
        return SupportVector.from_counts(counts)

    def __le__(self, other: "SupportVector") -> bool:
        return all(c <= other[x] for x, c in self.items)

    def points(self) -> list[int]:
        return [x for x, _ in self.items]

    def total(self) -> int:
        return sum(c for _, c in self.items)

    def counts(self) -> dict[int, int]:
        return dict(self.items)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{x}:{c}" for x, c in self.items) + "}"


def support(m: Multisegment) -> SupportVector:
    """Supercuspidal support: how many segments of m cover each point."""
    counts: dict[int, int] = {}
    for d in m:
        for x in range(d.begin, d.end + 1):
            counts[x] = counts.get(x, 0) + 1
    return SupportVector.from_counts(counts)


def b_stat(s: SupportVector) -> tuple[int, int]:
    """Minimal point of the support and its multiplicity there."""
    if not s:
        raise DomainError("empty support")
    x, c = s.items[0]
    return x, c


_SEG_RE = re.compile(r"\[\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\]")


def parse_segment(text: str) -> Segment:
    m = _SEG_RE.fullmatch(text.strip())
    if m is None:
        raise UsageError(f"cannot parse segment: {text!r}")
    b, e = int(m.group(1)), int(m.group(2))
    if e < b:
        raise DomainError(f"segment end precedes begin in {text!r}")
    return Segment(b, e)


def parse_multisegment(text: str) -> Multisegment:
    """Parse the text grammar: "0" or "[b,e]" joined by "+"; spaces ignored.

    >>> str(parse_multisegment("[1,2] + [0,2]"))
    '[0,2]+[1,2]'
    """
    stripped = text.strip()
    if stripped == "0":
        return Multisegment.empty()
    if not stripped:
        raise UsageError("empty multisegment string (use '0' for the empty one)")
    parts = stripped.split("+")
    return Multisegment(tuple(parse_segment(p) for p in parts))


def render_multisegment(m: Multisegment) -> str:
    return str(m)


def multisegments_with_support(s: SupportVector, cap: int | None = None) -> list[Multisegment]:
    """All multisegments whose support is exactly s, in canonical order.

    Recursion over the minimal support point: every segment covering it
    must begin there, so pick a sorted tuple of ends for those copies and
    recurse on the remainder.  `cap` bounds the total support size.
    """
    if cap is not None and s.total() > cap:
        raise ResourceBoundError(f"support size {s.total()} exceeds bound {cap}")
    out: list[Multisegment] = []
    _enumerate_by_min(s.counts(), [], out)
    return sorted(out, key=lambda m: m.entries)


def _enumerate_by_min(counts: dict[int, int], acc: list[Segment], out: list[Multisegment]) -> None:
    counts = {x: c for x, c in counts.items() if c > 0}
    if not counts:
        out.append(Multisegment(tuple(acc)))
        return
    x = min(counts)
    c = counts[x]
    top = max(counts)
    # choose a sorted multiset of c end values for the segments starting at x
    def choose(ends: list[int], lo: int) -> None:
        if len(ends) == c:
            new_counts = dict(counts)
            for e in ends:
                for y in range(x, e + 1):
                    new_counts[y] = new_counts.get(y, 0) - 1
            if all(v >= 0 for v in new_counts.values()):
                _enumerate_by_min(new_counts, acc + [Segment(x, e) for e in ends], out)
            return
        for e in range(lo, top + 1):
            choose(ends + [e], e)

    choose([], x)
