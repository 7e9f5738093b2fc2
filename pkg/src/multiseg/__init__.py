"""Multisegment combinatorics for the representation theory of p-adic
general linear groups: segment linking, the width invariant, ladder
Jacquet restriction, the multiplicity-one recursion, and an exact
decomposition oracle (in the optional `multiseg.kl` module)."""

from .errors import (
    DomainError,
    InvariantViolation,
    MultisegError,
    ResourceBoundError,
    UsageError,
)
from .segments import (
    Multisegment,
    Segment,
    SupportVector,
    b_stat,
    contains,
    linked,
    multisegments_with_support,
    parse_multisegment,
    parse_segment,
    preceq_prime,
    precedes,
    support,
)
from .width import (
    LadderCover,
    chain_split,
    is_ladder,
    longest_containment_chain,
    min_ladder_cover,
    width_bruteforce,
    width_chain,
    witness_component,
)
from .ring import (
    Basis,
    RingElement,
    element_width,
    is_generic,
    order_costandard,
    product_standard,
    resolve_linked,
)
from .jacquet import (
    JacquetTerm,
    component_supports,
    geometric_lemma_cut,
    j_upper_product,
    jacquet_ladder,
    reachable_min_points,
)
from .multiplicity import (
    classify_pair,
    composition_candidates,
    conjecture_scan,
    matches_lemma_pattern,
    mult_in_jacquet,
    peel_min_begin,
    sigma_tensor,
)

__version__ = "0.1.0"
