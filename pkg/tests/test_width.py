import pytest
from hypothesis import given, settings, strategies as st

from multiseg import (
    DomainError,
    Multisegment,
    Segment,
    b_stat,
    chain_split,
    contains,
    is_ladder,
    longest_containment_chain,
    min_ladder_cover,
    precedes,
    support,
    width_bruteforce,
    width_chain,
    witness_component,
)

segments_small = st.builds(
    lambda b, l: Segment(b, b + l), st.integers(0, 4), st.integers(0, 4)
)
multisegments_small = st.lists(segments_small, max_size=6).map(
    lambda xs: Multisegment(tuple(xs))
)


class TestIsLadder:
    def test_examples(self):
        assert is_ladder(Multisegment.empty())
        assert is_ladder(Multisegment.of((0, 1)))
        assert is_ladder(Multisegment.of((0, 2), (1, 3)))
        assert not is_ladder(Multisegment.of((0, 3), (1, 2)))  # nested
        assert not is_ladder(Multisegment.of((0, 1), (0, 2)))  # equal begins
        assert not is_ladder(Multisegment.of((0, 1), (0, 1)))  # repeat

    @given(multisegments_small)
    def test_matches_width(self, m):
        assert is_ladder(m) == (width_chain(m) <= 1)


class TestWidthRoutes:
    def test_examples(self):
        assert width_chain(Multisegment.empty()) == 0
        assert width_chain(Multisegment.of((0, 3), (1, 2), (2, 2), (4, 5))) == 3
        assert width_bruteforce(Multisegment.of((0, 3), (1, 2), (2, 2), (4, 5))) == 3
        assert width_chain(Multisegment.of((0, 1), (0, 1))) == 2
        assert width_chain(Multisegment.of((0, 3), (1, 2))) == 2
        assert width_chain(Multisegment.of((0, 4), (1, 3), (2, 2))) == 3
        # a long antichain is one ladder
        assert width_chain(Multisegment.of((0, 0), (1, 1), (2, 2), (3, 3))) == 1

    @given(multisegments_small)
    @settings(max_examples=300)
    def test_three_routes_agree(self, m):
        w = width_chain(m)
        assert len(min_ladder_cover(m).parts) == w
        assert width_bruteforce(m) == w

    @given(multisegments_small)
    def test_cover_is_valid(self, m):
        cover = min_ladder_cover(m)
        assert cover.covered() == m
        for part in cover.parts:
            assert part and is_ladder(part)

    @given(multisegments_small)
    def test_chain_is_chain(self, m):
        chain = longest_containment_chain(m)
        assert len(chain) == width_chain(m)
        for outer, inner in zip(chain, chain[1:]):
            assert contains(outer, inner)
        # chain really is a sub-multiset
        assert Multisegment(tuple(chain)) <= m

    def test_bruteforce_bound(self):
        m = Multisegment.of(*[(i, i) for i in range(9)])
        with pytest.raises(DomainError):
            width_bruteforce(m)

    @given(multisegments_small, multisegments_small)
    def test_subadditive(self, a, b):
        assert width_chain(a + b) <= width_chain(a) + width_chain(b)


class TestChainSplit:
    def test_exhausted(self):
        m = Multisegment.of((0, 1))
        m1, m2 = chain_split(m, [Segment(0, 1)])
        assert m1 == Multisegment.empty() and m2 == Multisegment.empty()

    def test_upward_closure_side(self):
        m = Multisegment.of((0, 3), (1, 2), (4, 5))
        m1, m2 = chain_split(m, [Segment(0, 3), Segment(1, 2)])
        assert m1 == Multisegment.of((4, 5))
        assert m2 == Multisegment.empty()

    def test_complement_side(self):
        m = Multisegment.of((0, 3), (1, 2), (-2, -1))
        m1, m2 = chain_split(m, [Segment(0, 3), Segment(1, 2)])
        assert m1 == Multisegment.empty()
        assert m2 == Multisegment.of((-2, -1))

    def test_split_partitions(self):
        m = Multisegment.of((0, 3), (1, 2), (0, 1), (2, 4))
        chain = longest_containment_chain(m)
        m1, m2 = chain_split(m, chain)
        assert Multisegment(tuple(chain)) + m1 + m2 == m

    @given(multisegments_small)
    def test_split_never_violates(self, m):
        chain = longest_containment_chain(m)
        if not chain:
            return
        m1, m2 = chain_split(m, chain)
        # no precedence from the left block into the right block
        left = list(chain) + list(m1)
        right = list(chain) + list(m2)
        for d in left:
            for dp in right:
                assert not precedes(d, dp)

    def test_rejects_non_subchain(self):
        with pytest.raises(DomainError):
            chain_split(Multisegment.of((0, 1)), [Segment(2, 3)])


class TestWitness:
    def test_example(self):
        m = Multisegment.of((0, 4), (1, 3))
        w = witness_component(m)
        assert w == Multisegment.of((1, 4), (1, 3))
        assert b_stat(support(w)) == (1, 2)

    def test_pinned_examples(self):
        assert witness_component(Multisegment.of((0, 1))) == Multisegment.of((0, 1))
        assert witness_component(Multisegment.of((0, 3), (1, 2))) == (
            Multisegment.of((1, 3), (1, 2))
        )
        assert witness_component(Multisegment.of((0, 1), (0, 1))) == (
            Multisegment.of((0, 1), (0, 1))
        )

    @given(multisegments_small)
    def test_witness_attains_width(self, m):
        if not m:
            return
        w = witness_component(m)
        point, mult = b_stat(support(w))
        assert mult == width_chain(m)
        # and the witness support sits inside a one-point-cut remainder
        assert len(w) == width_chain(m)
