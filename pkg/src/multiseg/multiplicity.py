"""The multiplicity-one recursion for products of two ladders.

The recursion peels the two segments starting at the minimal support
point, matches them against products of left Jacquet factors (which pin
down a unique contributing cut), and recurses on the right factors.  The
same machinery yields a sound candidate filter for the composition series
of a ladder product and a scanner for interleaved-ladder instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError, InvariantViolation, ResourceBoundError
from .jacquet import geometric_lemma_cut
from .ring import is_generic, resolve_linked
from .segments import (
    Multisegment,
    Segment,
    multisegments_with_support,
    support,
)
from .width import is_ladder, width_chain

__all__ = [
    "PeelStep",
    "SigmaTensor",
    "sigma_tensor",
    "peel_min_begin",
    "classify_pair",
    "matches_lemma_pattern",
    "mult_in_jacquet",
    "composition_candidates",
    "conjecture_scan",
]


@dataclass(frozen=True)
class SigmaTensor:
    """Segments grouped by common begin point, begins strictly increasing."""

    factors: tuple[Multisegment, ...]


@dataclass(frozen=True)
class PeelStep:
    """The two minimal-begin segments split off by one recursion level."""

    delta: Segment
    delta_hat: Optional[Segment]
    remainder: Multisegment


def sigma_tensor(m: Multisegment) -> SigmaTensor:
    """Group the segments of m by their begin point."""
    groups: dict[int, list[Segment]] = {}
    for d in m:
        groups.setdefault(d.begin, []).append(d)
    factors = tuple(
        Multisegment(tuple(groups[x])) for x in sorted(groups)
    )
    return SigmaTensor(factors)


def peel_min_begin(m: Multisegment) -> PeelStep | None:
    """Split off the (at most two) segments starting at the minimal begin.

    Returns None when more than two segments start there, in which case
    the peeled multiplicity is zero for any ladder pair.
    """
    if not m:
        raise DomainError("cannot peel an empty multisegment")
    x = m.entries[0].begin
    starters = [d for d in m if d.begin == x]
    if len(starters) > 2:
        return None
    delta = max(starters, key=lambda d: d.end)
    if len(starters) == 2:
        delta_hat: Optional[Segment] = min(starters, key=lambda d: d.end)
    else:
        delta_hat = None
    rest = m.remove(delta)
    if delta_hat is not None:
        rest = rest.remove(delta_hat)
    return PeelStep(delta, delta_hat, rest)


def _pair_target(delta: Segment, delta_hat: Optional[Segment]) -> Multisegment:
    segs = [delta]
    if delta_hat is not None and not delta_hat.is_trivial:
        segs.append(delta_hat)
    return Multisegment(tuple(segs))


def _check_pair_preconditions(delta: Segment, delta_hat: Optional[Segment]) -> None:
    if delta_hat is not None:
        if delta_hat.begin != delta.begin:
            raise DomainError("delta_hat must share delta's begin point")
        if delta_hat.end > delta.end:
            raise DomainError("delta_hat must not extend past delta")


def classify_pair(
    delta: Segment,
    delta_hat: Optional[Segment],
    n1: Multisegment,
    n2: Multisegment,
) -> int:
    """Multiplicity of L(delta + delta_hat) in L(n1) x L(n2), for ladders.

    Decided by the generic-constituent criterion: both factors must be
    generic with the right combined support and resolve to the target
    pair.  A positive answer is cross-checked against the interleaving
    pattern; disagreement is a finding, not a fallback.
    """
    _check_pair_preconditions(delta, delta_hat)
    for n in (n1, n2):
        if not is_ladder(n):
            raise DomainError(f"classify_pair factor is not a ladder: {n}")
    target = _pair_target(delta, delta_hat)
    if support(n1) + support(n2) != support(target):
        return 0
    if not (is_generic(n1) and is_generic(n2)):
        return 0
    if resolve_linked(n1 + n2) != target:
        return 0
    if not matches_lemma_pattern(delta, delta_hat, n1, n2):
        raise InvariantViolation(
            "generic-constituent decision and interleaving pattern disagree",
            repro={
                "delta": str(delta),
                "delta_hat": str(delta_hat) if delta_hat else None,
                "n1": str(n1),
                "n2": str(n2),
            },
        )
    return 1


def matches_lemma_pattern(
    delta: Segment,
    delta_hat: Optional[Segment],
    n1: Multisegment,
    n2: Multisegment,
) -> bool:
    """The interleaving shape a multiplicity-one pair must have.

    One factor tiles [a, b] with segments at even alternation slots, the
    other holds [a, c] plus the odd slots, where c is delta_hat's end
    (c = a - 1 when delta_hat is trivial or absent) and the first slot
    boundary exceeds c + 1.
    """
    _check_pair_preconditions(delta, delta_hat)
    a, b = delta.begin, delta.end
    c = delta_hat.end if delta_hat is not None else a - 1
    target = _pair_target(delta, delta_hat)
    if support(n1) + support(n2) != support(target):
        return False
    if c == b:
        return n1 == n2 == Multisegment.of(delta)
    for r1, r2 in ((n1, n2), (n2, n1)):
        if c >= a:
            hat = Segment(a, c)
            if hat not in r2.entries:
                continue
            rest2 = r2.remove(hat)
        else:
            rest2 = r2
        if _tiles_alternating(a, b, r1, rest2, c):
            return True
    return False


def _tiles_alternating(
    a: int, b: int, even_part: Multisegment, odd_part: Multisegment, c: int
) -> bool:
    """Do the two parts tile [a, b] with alternating consecutive segments,
    starting with an even_part segment whose end is past c?"""
    evens = list(even_part.entries)
    odds = list(odd_part.entries)
    cursor = a
    take_even = True
    first = True
    while cursor <= b:
        pool = evens if take_even else odds
        seg = next((s for s in pool if s.begin == cursor), None)
        if seg is None or seg.end > b:
            return False
        if first:
            if seg.end < c + 1:  # a_1 = end + 1 must exceed c + 1
                return False
            first = False
        pool.remove(seg)
        cursor = seg.end + 1
        take_even = not take_even
    return cursor == b + 1 and not evens and not odds


_MULT_CACHE: dict[tuple[Multisegment, Multisegment, Multisegment], int] = {}


def mult_in_jacquet(n: Multisegment, m1: Multisegment, m2: Multisegment) -> int:
    """Multiplicity of the begin-grouped tensor factorization of L(n) in
    the corresponding Jacquet restriction of L(m1) x L(m2).

    Always 0 or 1 for ladder factors; a larger value or two contributing
    cuts at one level would contradict the multiplicity-one theorem and
    raises InvariantViolation.
    """
    for m in (m1, m2):
        if not is_ladder(m):
            raise DomainError(f"mult_in_jacquet factor is not a ladder: {m}")
    return _mult_rec(n, m1, m2)


def _mult_rec(n: Multisegment, m1: Multisegment, m2: Multisegment) -> int:
    key = (n, m1, m2)
    if key in _MULT_CACHE:
        return _MULT_CACHE[key]
    if support(n) != support(m1) + support(m2):
        result = 0
    elif not n:
        result = 1
    else:
        peel = peel_min_begin(n)
        if peel is None:
            result = 0
        else:
            delta, delta_hat = peel.delta, peel.delta_hat
            d = len(delta) + (len(delta_hat) if delta_hat is not None else 0)
            total = 0
            contributing = 0
            for t1, t2 in geometric_lemma_cut(m1, m2, d):
                here = classify_pair(delta, delta_hat, t1.left, t2.left)
                if here == 0:
                    continue
                rec = _mult_rec(peel.remainder, t1.right, t2.right)
                if rec:
                    contributing += 1
                total += here * rec
            if total > 1 or contributing > 1:
                raise InvariantViolation(
                    "multiplicity-one recursion exceeded 1",
                    repro={"n": str(n), "m1": str(m1), "m2": str(m2), "total": total},
                )
            result = total
    _MULT_CACHE[key] = result
    return result


def composition_candidates(
    m1: Multisegment,
    m2: Multisegment,
    width_cap: int | None = 2,
    support_cap: int = 24,
) -> list[Multisegment]:
    """Sound superset of the composition series of a two-ladder product:
    all parameters with the right support, width within the cap, and a
    nonzero Jacquet multiplicity.  Always contains the concatenation."""
    for m in (m1, m2):
        if not is_ladder(m):
            raise DomainError(f"composition_candidates factor is not a ladder: {m}")
    s = support(m1 + m2)
    if s.total() > support_cap:
        raise ResourceBoundError(
            f"candidate enumeration bounded at support size {support_cap}"
        )
    out = []
    for n in multisegments_with_support(s):
        if width_cap is not None and width_chain(n) > width_cap:
            continue
        if mult_in_jacquet(n, m1, m2) == 1:
            out.append(n)
    return out


def conjecture_scan(
    a: Sequence[int],
    b: Sequence[int],
    exact: bool = False,
    support_bound: int | None = None,
    cache_dir: str | None = None,
) -> dict:
    """Report on one interleaved-ladder instance: the candidate filter
    output and, when the exact oracle is requested and fits the size
    bound, the exact decomposition and a verdict."""
    a = list(a)
    b = list(b)
    if len(a) != len(b) or len(a) % 2 != 0 or not a:
        raise DomainError("need sequences a, b of equal even length")
    if any(x >= y for x, y in zip(a, a[1:])) or any(
        x >= y for x, y in zip(b, b[1:])
    ):
        raise DomainError("a and b must each be strictly increasing")
    if a[-1] >= b[0]:
        raise DomainError("interleaving requires max(a) < min(b)")
    k = len(a) // 2
    # 1-based indexing in the interleaving: evens make pi, odds make pi'
    m_pi = Multisegment.of(*((a[2 * i + 1], b[2 * i + 1]) for i in range(k)))
    m_pip = Multisegment.of(*((a[2 * i], b[2 * i]) for i in range(k)))
    m_lambda = m_pi + m_pip
    report: dict = {
        "k": k,
        "pi": str(m_pi),
        "pi_prime": str(m_pip),
        "lambda": str(m_lambda),
        "candidates": [str(n) for n in composition_candidates(m_pi, m_pip)],
        "exact": None,
        "verdict": "not checked (exact oracle not requested)",
    }
    if not exact:
        return report
    from . import kl

    oracle = kl.KLOracle(cache_dir=cache_dir, support_bound=support_bound)
    try:
        product = oracle.multiply_irreducibles(m_pi, m_pip)
        lam_constituents = oracle.standard_decomposition(m_lambda)
    except ResourceBoundError as exc:
        report["verdict"] = f"inconclusive: {exc}"
        return report
    finally:
        oracle.flush_cache()
    predicted = sorted(
        (n for n, coeff in lam_constituents.items() if coeff > 0 and width_chain(n) <= 2),
        key=lambda n: n.entries,
    )
    actual = {n: coeff for n, coeff in product.terms}
    report["exact"] = {
        "product": product.to_dict(),
        "width_le_2_subquotients_of_lambda": [str(n) for n in predicted],
    }
    holds = set(actual) == set(predicted) and all(
        coeff == 1 for coeff in actual.values()
    )
    report["verdict"] = "holds" if holds else "fails"
    return report
