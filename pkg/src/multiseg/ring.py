"""Formal ring elements over multisegments, in the standard or irreducible
basis, plus the linking-resolution operation and genericity tests."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, UsageError
from .segments import (
    Multisegment,
    Segment,
    linked,
    parse_multisegment,
    precedes,
)
from .width import width_chain

__all__ = [
    "Basis",
    "RingElement",
    "product_standard",
    "order_costandard",
    "is_generic",
    "resolve_linked",
    "element_width",
]


class Basis(str, Enum):
    STANDARD = "standard"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class RingElement:
    """Finite integer combination of multisegments tagged with a basis."""

    basis: Basis
    terms: tuple[tuple[Multisegment, int], ...]

    def __post_init__(self):
        merged: dict[Multisegment, int] = {}
        for m, c in self.terms:
            merged[m] = merged.get(m, 0) + c
        cleaned = tuple(
            sorted(((m, c) for m, c in merged.items() if c != 0), key=lambda t: t[0].entries)
        )
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def standard(cls, m: Multisegment, coeff: int = 1) -> "RingElement":
        return cls(Basis.STANDARD, ((m, coeff),))

    @classmethod
    def irreducible(cls, m: Multisegment, coeff: int = 1) -> "RingElement":
        return cls(Basis.IRREDUCIBLE, ((m, coeff),))

    @classmethod
    def zero(cls, basis: Basis) -> "RingElement":
        return cls(basis, ())

    def coeff(self, m: Multisegment) -> int:
        for n, c in self.terms:
            if n == m:
                return c
        return 0

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "RingElement") -> "RingElement":
        if self.basis != other.basis:
            raise UsageError("cannot add elements in different bases")
        return RingElement(self.basis, self.terms + other.terms)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + RingElement(other.basis, tuple((m, -c) for m, c in other.terms))

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.basis, tuple((m, k * c) for m, c in self.terms))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.value,
            "terms": [
                {"coeff": c, "multisegment": str(m)} for m, c in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RingElement":
        basis = Basis(data["basis"])
        terms = tuple(
            (parse_multisegment(t["multisegment"]), int(t["coeff"]))
            for t in data["terms"]
        )
        return cls(basis, terms)


def product_standard(x: RingElement, y: RingElement) -> RingElement:
    """Bilinear product in the standard basis: concatenation of parameters."""
    if x.basis != Basis.STANDARD or y.basis != Basis.STANDARD:
        raise UsageError("product_standard requires both factors in the standard basis")
    terms = []
    for m1, c1 in x.terms:
        for m2, c2 in y.terms:
            terms.append((m1 + m2, c1 * c2))
    return RingElement(Basis.STANDARD, tuple(terms))


def order_costandard(m: Multisegment) -> tuple[Segment, ...]:
    """An enumeration of m where no segment precedes an earlier one.

    Canonical order already works: a later segment has begin at least as
    large, while preceding would force it strictly smaller.
    """
    segs = m.entries
    for i, di in enumerate(segs):
        for dj in segs[i + 1 :]:
            assert not precedes(dj, di)
    return segs


def is_generic(m: Multisegment) -> bool:
    """True iff no two segments of m are linked."""
    segs = m.entries
    return not any(
        linked(segs[i], segs[j])
        for i in range(len(segs))
        for j in range(i + 1, len(segs))
    )


def resolve_linked(m: Multisegment) -> Multisegment:
    """Replace linked pairs by their union and intersection until generic.

    The intersection is dropped when trivial.  The result is the generic
    constituent's parameter; empirically it does not depend on the order
    in which linked pairs are reduced.
    """
    current = list(m.entries)
    while True:
        found = None
        for i in range(len(current)):
            for j in range(len(current)):
                if i != j and precedes(current[i], current[j]):
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            return Multisegment(tuple(current))
        i, j = found
        d1, d2 = current[i], current[j]
        rest = [d for k, d in enumerate(current) if k not in (i, j)]
        rest.append(Segment(d1.begin, d2.end))
        inter = Segment(d2.begin, d1.end)
        if not inter.is_trivial:
            rest.append(inter)
        current = sorted(rest)


def element_width(x: RingElement) -> int:
    """Width of an irreducible-basis element: max width over its terms."""
    if x.basis != Basis.IRREDUCIBLE:
        raise UsageError("element_width requires the irreducible basis")
    if not x:
        raise DomainError("width of the zero element is undefined")
    return max(width_chain(m) for m, _ in x.terms)
