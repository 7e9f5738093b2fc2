"""Combinatorial Jacquet restriction for ladder multisegments.

A two-block cut of a ladder picks one split point per segment, strictly
decreasing along the segments ordered by decreasing ends; the high parts
form the left factor and the low parts the right factor.  Products are
handled by the geometric-lemma expansion, and the j-invariant bound comes
from enumerating which support minima are reachable by middle pieces of
iterated cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .segments import Multisegment, Segment, SupportVector, support
from .width import is_ladder

__all__ = [
    "JacquetTerm",
    "jacquet_ladder",
    "geometric_lemma_cut",
    "component_supports",
    "j_upper_product",
    "reachable_min_points",
]


@dataclass(frozen=True)
class JacquetTerm:
    """One summand left (x) right of a two-block Jacquet restriction."""

    left: Multisegment
    right: Multisegment
    multiplicity: int = 1


def _check_ladder(m: Multisegment) -> None:
    if not is_ladder(m):
        raise DomainError(f"not a ladder multisegment: {m}")


def _desc_segments(m: Multisegment) -> list[Segment]:
    # ladder in canonical order reversed: ends strictly decreasing
    return list(reversed(m.entries))


def jacquet_ladder(m: Multisegment, d: int) -> tuple[JacquetTerm, ...]:
    """All two-block cuts of the ladder m with left part of size d.

    Each cut chooses c_j in [a_j, b_j + 1] per segment [a_j, b_j], with
    the c_j strictly decreasing along decreasing ends; the left factor is
    the sum of [c_j, b_j] and the right factor the sum of [a_j, c_j - 1],
    trivial pieces dropped.  Every term has multiplicity one.
    """
    _check_ladder(m)
    if d < 0 or d > m.total_size():
        raise DomainError(f"cut size {d} out of range for {m}")
    segs = _desc_segments(m)
    terms: list[JacquetTerm] = []

    def go(j: int, prev_c: int | None, left: list[Segment], size_left: int) -> None:
        if size_left > d:
            return
        if j == len(segs):
            if size_left == d:
                lefts = [s for s in left if not s.is_trivial]
                rights = [
                    Segment(s.begin, c - 1)
                    for s, c in zip(segs, cuts)
                    if c > s.begin
                ]
                terms.append(
                    JacquetTerm(
                        Multisegment(tuple(lefts)), Multisegment(tuple(rights))
                    )
                )
            return
        s = segs[j]
        hi = s.end + 1 if prev_c is None else min(s.end + 1, prev_c - 1)
        for c in range(s.begin, hi + 1):
            cuts.append(c)
            go(j + 1, c, left + [Segment(c, s.end)], size_left + (s.end - c + 1))
            cuts.pop()

    cuts: list[int] = []
    go(0, None, [], 0)
    return tuple(sorted(terms, key=lambda t: (t.left.entries, t.right.entries)))


def geometric_lemma_cut(
    m1: Multisegment, m2: Multisegment, d: int
) -> tuple[tuple[JacquetTerm, JacquetTerm], ...]:
    """All pairs of factor cuts whose left sizes sum to d."""
    _check_ladder(m1)
    _check_ladder(m2)
    total = m1.total_size() + m2.total_size()
    if d < 0 or d > total:
        raise DomainError(f"cut size {d} out of range for the product")
    pairs = []
    for d1 in range(0, min(d, m1.total_size()) + 1):
        d2 = d - d1
        if d2 > m2.total_size():
            continue
        for t1 in jacquet_ladder(m1, d1):
            for t2 in jacquet_ladder(m2, d2):
                pairs.append((t1, t2))
    return tuple(pairs)


def _splits(m: Multisegment, positions: int) -> set[tuple[Multisegment, ...]]:
    """Ordered splits of a ladder into `positions` pieces by iterated cuts."""
    if positions == 1:
        return {(m,)}
    out: set[tuple[Multisegment, ...]] = set()
    for d in range(m.total_size() + 1):
        for t in jacquet_ladder(m, d):
            for rest in _splits(t.right, positions - 1):
                out.add((t.left,) + rest)
    return out


def component_supports(
    ms: Sequence[Multisegment], positions: int
) -> set[tuple[SupportVector, ...]]:
    """All achievable tuples of per-position supports for a product of
    ladders split into `positions` blocks."""
    for m in ms:
        _check_ladder(m)
    if positions < 1:
        raise DomainError("positions must be at least 1")
    result: set[tuple[SupportVector, ...]] = set()

    def go(idx: int, acc: tuple[tuple[SupportVector, ...], ...]) -> None:
        if idx == len(ms):
            combined = tuple(
                _sum_supports(parts[p] for parts in acc)
                for p in range(positions)
            )
            result.add(combined)
            return
        for split in _splits(ms[idx], positions):
            go(idx + 1, acc + (tuple(support(piece) for piece in split),))

    go(0, ())
    return result


def _sum_supports(vs: Iterable[SupportVector]) -> SupportVector:
    total = SupportVector.zero()
    for v in vs:
        total = total + v
    return total


def reachable_min_points(m: Multisegment) -> set[int]:
    """Points that occur as the support minimum of some middle piece of an
    iterated cut of the ladder m.

    A middle piece is determined by two nested cut sequences c'_j <= c_j,
    each strictly decreasing where present; it collects [c'_j, c_j - 1].
    The forward scan keeps only (previous c, previous c', minimum so far),
    which makes the enumeration polynomial instead of exponential.
    """
    _check_ladder(m)
    segs = _desc_segments(m)
    if not segs:
        return set()
    # state: (prev_c, prev_cp, cur_min); None marks "no constraint yet"
    states: set[tuple[int | None, int | None, int | None]] = {(None, None, None)}
    for s in segs:
        nxt: set[tuple[int | None, int | None, int | None]] = set()
        for prev_c, prev_cp, cur_min in states:
            hi_c = s.end + 1 if prev_c is None else min(s.end + 1, prev_c - 1)
            for c in range(s.begin, hi_c + 1):
                if c == s.begin:
                    # segment absent from the low remainder: no c' constraint
                    nxt.add((c, prev_cp, cur_min))
                    continue
                hi_cp = c if prev_cp is None else min(c, prev_cp - 1)
                for cp in range(s.begin, hi_cp + 1):
                    new_min = cur_min
                    if cp < c:  # nonempty middle piece [cp, c-1]
                        new_min = cp if cur_min is None else min(cur_min, cp)
                    nxt.add((c, cp, new_min))
        states = nxt
    return {mn for _, _, mn in states if mn is not None}


def j_upper_product(ms: Sequence[Multisegment]) -> int:
    """Largest support multiplicity at a minimum over all Jacquet
    components of a product of ladders.

    Each ladder contributes at most one piece whose support minimum hits a
    given point, so the answer counts, over all points, how many ladders
    can reach that point; it never exceeds the number of ladders.
    """
    mins: list[set[int]] = []
    for m in ms:
        _check_ladder(m)
        if m:
            mins.append(reachable_min_points(m))
    if not mins:
        return 0
    candidates = set().union(*mins)
    return max(sum(1 for x_set in mins if x in x_set) for x in candidates)
