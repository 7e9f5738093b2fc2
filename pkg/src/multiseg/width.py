"""The width invariant: ladder detection, chain width, minimal ladder covers.

Three independent routes compute the same number (Dilworth's theorem for
the strict segment order): a longest-containment-chain dynamic program, a
minimum path cover via bipartite matching, and an exhaustive partition
search used as the oracle at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, InvariantViolation
from .segments import (
    Multisegment,
    Segment,
    b_stat,
    contains,
    precedes,
    preceq_prime,
    support,
)

__all__ = [
    "LadderCover",
    "is_ladder",
    "width_chain",
    "longest_containment_chain",
    "min_ladder_cover",
    "width_bruteforce",
    "chain_split",
    "witness_component",
]

BRUTE_FORCE_BOUND = 8


@dataclass(frozen=True)
class LadderCover:
    """A decomposition of a multisegment into ladder parts."""

    parts: tuple[Multisegment, ...]

    def covered(self) -> Multisegment:
        total = Multisegment.empty()
        for p in self.parts:
            total = total + p
        return total


def is_ladder(m: Multisegment) -> bool:
    """True iff begins and ends are strictly increasing in canonical order.

    The empty multisegment counts as a ladder (of width 0).
    """
    segs = m.entries
    return all(
        a.begin < b.begin and a.end < b.end for a, b in zip(segs, segs[1:])
    )


def _strictly_below(d1: Segment, d2: Segment) -> bool:
    # strict part of the ladder order: both endpoints strictly increase
    return d1.begin < d2.begin and d1.end < d2.end


def longest_containment_chain(m: Multisegment) -> list[Segment]:
    """A longest chain d_1 of nested segments inside m (repeats allowed),
    returned outermost first."""
    # copies sorted by length ascending so containment only looks backwards
    copies = sorted(m.entries, key=lambda d: (len(d), d.begin, d.end))
    n = len(copies)
    best = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            if contains(copies[i], copies[j]) and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
                prev[i] = j
    if n == 0:
        return []
    i = max(range(n), key=lambda k: best[k])
    chain = []
    while i != -1:
        chain.append(copies[i])
        i = prev[i]
    return chain  # outermost first, begins nondecreasing


def width_chain(m: Multisegment) -> int:
    """Maximal size of a sub-multiset forming a containment chain."""
    if not m:
        return 0
    return len(longest_containment_chain(m))


def min_ladder_cover(m: Multisegment) -> LadderCover:
    """A cover of m by the minimal number of ladder multisegments.

    Minimum chain cover of the strict ladder order on segment copies,
    computed by bipartite matching (a matched edge joins two consecutive
    segments of one ladder part).
    """
    copies = list(m.entries)
    n = len(copies)
    adj = [
        [j for j in range(n) if _strictly_below(copies[i], copies[j])]
        for i in range(n)
    ]
    succ = _max_matching(n, adj)
    has_pred = set(succ.values())
    parts = []
    for i in range(n):
        if i in has_pred:
            continue
        path = [copies[i]]
        j = i
        while j in succ:
            j = succ[j]
            path.append(copies[j])
        parts.append(Multisegment(tuple(path)))
    return LadderCover(tuple(parts))


def _max_matching(n: int, adj: list[list[int]]) -> dict[int, int]:
    """Maximum matching left->right on copies 0..n-1 (Kuhn's algorithm)."""
    match_right: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or try_augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in range(n):
        try_augment(u, set())
    return {u: v for v, u in match_right.items()}


def width_bruteforce(m: Multisegment, bound: int = BRUTE_FORCE_BOUND) -> int:
    """Minimal number of ladders over all partitions of m, by exhaustive
    search.  Only usable up to `bound` segments."""
    if len(m) > bound:
        raise DomainError(f"brute-force width limited to {bound} segments")
    segs = list(m.entries)  # canonical order: appending preserves ladders
    best = len(segs) if segs else 0

    def go(idx: int, parts: list[list[Segment]]) -> None:
        nonlocal best
        if len(parts) >= best:
            return
        if idx == len(segs):
            best = len(parts)
            return
        d = segs[idx]
        for p in parts:
            if _strictly_below(p[-1], d):
                p.append(d)
                go(idx + 1, parts)
                p.pop()
        parts.append([d])
        go(idx + 1, parts)
        parts.pop()

    go(0, [])
    return best


def chain_split(
    m: Multisegment, chain: Sequence[Segment]
) -> tuple[Multisegment, Multisegment]:
    """Split the complement of a containment chain by the ladder order.

    With S the upward closure of the chain under the ladder order, returns
    (m1, m2) where m1 is the part of m minus the chain lying in S and m2
    the rest.  No segment of m2 + chain precedes any segment of chain + m1,
    which is what makes the co-standard product rearrangement legal.
    """
    chain_ms = Multisegment(tuple(chain))
    if not chain_ms <= m:
        raise DomainError("chain is not contained in the multisegment")
    rest = m - chain_ms
    in_s = []
    out_s = []
    for d in rest:
        if any(preceq_prime(c, d) for c in chain):
            in_s.append(d)
        else:
            out_s.append(d)
    m1 = Multisegment(tuple(in_s))
    m2 = Multisegment(tuple(out_s))
    # the rearrangement guarantee, cheap enough to assert outright
    left = list(chain) + list(m1)
    right = list(chain) + list(m2)
    for d in left:
        for dp in right:
            if precedes(d, dp):
                raise InvariantViolation(
                    f"chain split rearrangement failed: {d} precedes {dp}",
                    repro={"multisegment": str(m), "chain": [str(c) for c in chain]},
                )
    return m1, m2


def witness_component(m: Multisegment) -> Multisegment:
    """The Jacquet component certifying that the support multiplicity
    bound is attained: all chain segments are cut down to start at the
    innermost begin point.

    Its support has multiplicity exactly width(m) at that point.
    """
    if not m:
        raise DomainError("empty multisegment has no witness component")
    chain = longest_containment_chain(m)  # outermost first
    a_k = chain[-1].begin  # innermost, largest begin
    return Multisegment(tuple(Segment(a_k, d.end) for d in chain))


def witness_b(m: Multisegment) -> tuple[int, int]:
    """(point, multiplicity) of the witness component's support minimum."""
    return b_stat(support(witness_component(m)))
