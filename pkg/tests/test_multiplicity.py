import itertools
import random

import pytest

from multiseg import (
    DomainError,
    Multisegment,
    Segment,
    classify_pair,
    composition_candidates,
    conjecture_scan,
    is_ladder,
    linked,
    matches_lemma_pattern,
    mult_in_jacquet,
    multisegments_with_support,
    peel_min_begin,
    resolve_linked,
    sigma_tensor,
    support,
)


def random_ladder(rng, max_segments=4, hi=7):
    while True:
        segs = []
        for _ in range(rng.randint(0, max_segments)):
            b = rng.randint(0, hi)
            e = rng.randint(b, hi)
            segs.append((b, e))
        m = Multisegment.of(*segs)
        if is_ladder(m):
            return m


class TestSigmaTensor:
    def test_grouping(self):
        m = Multisegment.of((0, 1), (0, 3), (2, 2))
        t = sigma_tensor(m)
        assert t.factors == (
            Multisegment.of((0, 1), (0, 3)),
            Multisegment.of((2, 2)),
        )

    def test_empty(self):
        assert sigma_tensor(Multisegment.empty()).factors == ()


class TestPeel:
    def test_two_starters(self):
        m = Multisegment.of((0, 1), (0, 3), (2, 2))
        step = peel_min_begin(m)
        assert step.delta == Segment(0, 3)
        assert step.delta_hat == Segment(0, 1)
        assert step.remainder == Multisegment.of((2, 2))

    def test_one_starter(self):
        step = peel_min_begin(Multisegment.of((0, 2), (1, 3)))
        assert step.delta == Segment(0, 2)
        assert step.delta_hat is None

    def test_three_starters_blocked(self):
        m = Multisegment.of((0, 0), (0, 1), (0, 2))
        assert peel_min_begin(m) is None

    def test_empty_raises(self):
        with pytest.raises(DomainError):
            peel_min_begin(Multisegment.empty())


class TestClassifyPair:
    def test_spec_single_segment(self):
        # delta = [0,3] alone: the pair must tile [0,3] alternately
        d = Segment(0, 3)
        assert classify_pair(d, None, Multisegment.of((0, 1)), Multisegment.of((2, 3))) == 1
        assert classify_pair(d, None, Multisegment.of((0, 0)), Multisegment.of((1, 3))) == 1
        assert classify_pair(d, None, Multisegment.of((0, 3)), Multisegment.empty()) == 1
        assert classify_pair(d, None, Multisegment.of((0, 2)), Multisegment.of((2, 3))) == 0

    def test_spec_with_hat(self):
        d, dh = Segment(0, 3), Segment(0, 0)
        n1 = Multisegment.of((0, 1))
        n2 = Multisegment.of((0, 0), (2, 3))
        assert classify_pair(d, dh, n1, n2) == 1
        assert classify_pair(d, dh, n2, n1) == 1  # symmetric in the factors

    def test_nested_hat(self):
        d, dh = Segment(0, 2), Segment(0, 1)
        assert classify_pair(d, dh, Multisegment.of(d), Multisegment.of(dh)) == 1

    def test_equal_pair_rejects_degenerate_factors(self):
        d = Segment(0, 1)
        n1 = Multisegment.of((0, 1))
        n2 = Multisegment.of((0, 0), (1, 1))
        assert classify_pair(d, d, n1, n2) == 0

    def test_equal_pair(self):
        d = Segment(0, 2)
        assert classify_pair(d, d, Multisegment.of(d), Multisegment.of(d)) == 1
        with pytest.raises(DomainError):
            classify_pair(d, d, Multisegment.of((0, 2), (0, 2)), Multisegment.empty())

    def test_rejects_non_ladder_factor(self):
        with pytest.raises(DomainError):
            classify_pair(
                Segment(0, 3),
                None,
                Multisegment.of((0, 2), (0, 3)),
                Multisegment.empty(),
            )

    def test_cross_validation_sweep(self):
        """Resolution-based decision vs the interleaving pattern, small sweep.

        classify_pair itself raises on disagreement in the positive
        direction; here both directions are compared explicitly.
        """
        window = [
            Segment(b, e) for b in range(0, 4) for e in range(b, 4)
        ]
        ladders = [Multisegment.empty()]
        ladders += [Multisegment.of(s) for s in window]
        for s1, s2 in itertools.combinations(window, 2):
            m = Multisegment.of(s1, s2)
            if is_ladder(m):
                ladders.append(m)
        checked = 0
        for delta in window:
            hats = [None] + [
                Segment(delta.begin, c) for c in range(delta.begin - 1, delta.end + 1)
            ]
            for delta_hat in hats:
                target_support = support(Multisegment.of(delta)) + (
                    support(Multisegment.of(delta_hat))
                    if delta_hat and not delta_hat.is_trivial
                    else support(Multisegment.empty())
                )
                for n1 in ladders:
                    for n2 in ladders:
                        if support(n1) + support(n2) != target_support:
                            continue
                        by_resolution = classify_pair(delta, delta_hat, n1, n2)
                        by_pattern = int(
                            matches_lemma_pattern(delta, delta_hat, n1, n2)
                        )
                        assert by_resolution == by_pattern, (
                            str(delta),
                            str(delta_hat),
                            str(n1),
                            str(n2),
                        )
                        checked += 1
        assert checked > 200


class TestMultRecursion:
    def test_spec_example(self):
        n = Multisegment.of((0, 2), (1, 1))
        m1 = Multisegment.of((0, 1))
        m2 = Multisegment.of((1, 2))
        assert mult_in_jacquet(n, m1, m2) == 1

    def test_concatenation_always_appears(self):
        rng = random.Random(21)
        for _ in range(100):
            m1 = random_ladder(rng)
            m2 = random_ladder(rng)
            assert mult_in_jacquet(m1 + m2, m1, m2) == 1

    def test_wrong_support_is_zero(self):
        assert (
            mult_in_jacquet(
                Multisegment.of((0, 5)),
                Multisegment.of((0, 1)),
                Multisegment.of((1, 2)),
            )
            == 0
        )

    def test_values_are_boolean(self):
        rng = random.Random(22)
        for _ in range(50):
            m1 = random_ladder(rng, max_segments=3, hi=5)
            m2 = random_ladder(rng, max_segments=3, hi=5)
            s = support(m1 + m2)
            if s.total() > 8:
                continue
            for n in multisegments_with_support(s):
                assert mult_in_jacquet(n, m1, m2) in (0, 1)

    def test_rejects_non_ladder(self):
        with pytest.raises(DomainError):
            mult_in_jacquet(
                Multisegment.of((0, 1)),
                Multisegment.of((0, 1), (0, 1)),
                Multisegment.empty(),
            )


class TestCandidates:
    def test_unlinked_single_segments(self):
        got = composition_candidates(
            Multisegment.of((0, 1)), Multisegment.of((3, 4))
        )
        assert got == [Multisegment.of((0, 1), (3, 4))]

    def test_linked_single_segments(self):
        got = set(
            composition_candidates(Multisegment.of((0, 1)), Multisegment.of((1, 2)))
        )
        assert got == {
            Multisegment.of((0, 1), (1, 2)),
            Multisegment.of((0, 2), (1, 1)),
        }

    def test_all_single_segment_pairs(self):
        window = [Segment(b, e) for b in range(6) for e in range(b, 6)]
        for s1 in window:
            for s2 in window:
                m1, m2 = Multisegment.of(s1), Multisegment.of(s2)
                got = set(composition_candidates(m1, m2))
                expected = {m1 + m2}
                if linked(s1, s2):
                    expected.add(resolve_linked(m1 + m2))
                assert got == expected, (str(s1), str(s2))

    def test_min_point_multiplicity_at_most_two(self):
        rng = random.Random(23)
        for _ in range(30):
            m1 = random_ladder(rng, max_segments=3, hi=5)
            m2 = random_ladder(rng, max_segments=3, hi=5)
            if not (m1 + m2) or support(m1 + m2).total() > 12:
                continue
            for n in composition_candidates(m1, m2):
                point = n.entries[0].begin
                starters = sum(1 for d in n if d.begin == point)
                assert starters <= 2

    def test_width_cap_respected(self):
        m1 = Multisegment.of((0, 1))
        m2 = Multisegment.of((0, 1))
        got = composition_candidates(m1, m2, width_cap=1)
        assert got == []  # the concatenation itself has width 2


class TestConjectureScan:
    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            conjecture_scan([0], [1])
        with pytest.raises(DomainError):
            conjecture_scan([0, 2], [1, 3])  # interleaving broken
        with pytest.raises(DomainError):
            conjecture_scan([1, 0], [2, 3])

    def test_k1_report_shape(self):
        r = conjecture_scan([0, 1], [2, 3])
        assert r["k"] == 1
        assert r["pi"] == "[1,3]"
        assert r["pi_prime"] == "[0,2]"
        assert r["lambda"] == "[0,2]+[1,3]"
        assert set(r["candidates"]) == {"[0,2]+[1,3]", "[0,3]+[1,2]"}
        assert r["exact"] is None
