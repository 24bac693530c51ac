"""Partial bijections of the naturals: construction, algebra, factorisation."""

import pytest

from ixm.cardinal import ALEPH0, ZERO, fin
from ixm.chart import (
    EMPTY_CHART,
    IDENTITY_CHART,
    Piece,
    apply_chart,
    bijection_between,
    chart_union,
    collapse_of,
    compose,
    defect_of,
    dom_set,
    extend_to_bijection,
    extend_to_permutation,
    identity_on,
    im_set,
    image_of_set,
    invert,
    is_partial_identity,
    is_permutation,
    is_total,
    make_chart,
    parse_chart,
    preimage_of_set,
    rank_of,
    render_chart,
    restrict,
    sandwich_factorize,
    stats,
    transposition,
)
from ixm.epset import (
    EMPTY,
    NATURALS,
    Prog,
    from_finite,
    residue_class,
)
from ixm.errors import InjectivityError, ParameterError, ParseError
from ixm.sampling import make_rng, random_chart, random_epset, random_mixed

EVENS = residue_class(0, 2)
ODDS = residue_class(1, 2)
MULT3 = residue_class(0, 3)
MULT6 = residue_class(0, 6)

DOUBLE = make_chart((), (Piece(Prog(0, 1), Prog(0, 2)),))  # x -> 2x
SHIFT = make_chart((), (Piece(Prog(0, 1), Prog(1, 1)),))  # x -> x + 1
ID_EVENS = identity_on(EVENS)


def members(s, hi=120):
    return {x for x in range(hi) if x in s}


def graph(c, hi=120):
    """Pointwise graph of a chart on a window, via apply only."""
    return {(x, apply_chart(c, x)) for x in range(hi) if apply_chart(c, x) is not None}


class TestMakeChart:
    def test_equality_is_extensional(self):
        # The identity split into two interleaved half-classes must come out
        # structurally equal to the one-piece identity.
        split = make_chart(
            (), (Piece(Prog(0, 2), Prog(0, 2)), Piece(Prog(1, 2), Prog(1, 2)))
        )
        assert split == IDENTITY_CHART

    def test_pairs_absorbed_into_piece(self):
        alias = make_chart(
            [(0, 0), (2, 2)], (Piece(Prog(4, 2), Prog(4, 2)),)
        )
        assert alias == ID_EVENS

    def test_duplicate_source_rejected(self):
        with pytest.raises(InjectivityError):
            make_chart([(0, 1), (0, 2)], ())

    def test_duplicate_target_rejected(self):
        with pytest.raises(InjectivityError):
            make_chart([(0, 1), (2, 1)], ())

    def test_pair_colliding_with_piece_rejected(self):
        with pytest.raises(InjectivityError):
            make_chart([(0, 5)], (Piece(Prog(0, 1), Prog(0, 2)),))

    def test_overlapping_piece_images_rejected(self):
        with pytest.raises(InjectivityError):
            make_chart(
                (), (Piece(Prog(0, 2), Prog(0, 1)), Piece(Prog(1, 2), Prog(0, 2)))
            )

    def test_negative_point_rejected(self):
        with pytest.raises(ParameterError):
            make_chart([(-1, 0)], ())


class TestApply:
    def test_piece_maps_by_index(self):
        p = Piece(Prog(3, 4), Prog(1, 5))
        assert p.apply(3) == 1 and p.apply(7) == 6 and p.apply(11) == 11

    def test_apply_chart(self):
        c = make_chart([(0, 9)], (Piece(Prog(1, 2), Prog(2, 2)),))
        assert apply_chart(c, 0) == 9
        assert apply_chart(c, 1) == 2 and apply_chart(c, 3) == 4
        assert apply_chart(c, 2) is None

    def test_empty_and_identity(self):
        assert apply_chart(EMPTY_CHART, 5) is None
        assert apply_chart(IDENTITY_CHART, 5) == 5


class TestCompose:
    def test_doubling_twice_quadruples(self):
        quad = make_chart((), (Piece(Prog(0, 1), Prog(0, 4)),))
        assert compose(DOUBLE, DOUBLE) == quad

    def test_disjoint_ranges_compose_to_empty(self):
        assert compose(DOUBLE, identity_on(ODDS)) == EMPTY_CHART

    def test_pair_chaining(self):
        f = make_chart([(0, 3)], ())
        g = make_chart([(3, 1)], ())
        assert compose(f, g) == make_chart([(0, 1)], ())
        # Left-to-right: the other order never connects.
        assert compose(g, f) == EMPTY_CHART

    def test_identity_is_neutral(self):
        rng = make_rng(2)
        for _ in range(50):
            c = random_chart(rng)
            assert compose(c, IDENTITY_CHART) == c
            assert compose(IDENTITY_CHART, c) == c

    def test_associative_pointwise(self):
        rng = make_rng(9)
        for _ in range(100):
            a, b, c = (random_chart(rng) for _ in range(3))
            assert compose(compose(a, b), c) == compose(a, compose(b, c))

    def test_matches_pointwise_oracle(self):
        rng = make_rng(17)
        for _ in range(150):
            a, b = random_chart(rng), random_chart(rng)
            ab = compose(a, b)
            for x in range(60):
                y = apply_chart(a, x)
                want = None if y is None else apply_chart(b, y)
                assert apply_chart(ab, x) == want


class TestInvert:
    def test_doubling(self):
        assert invert(DOUBLE) == make_chart((), (Piece(Prog(0, 2), Prog(0, 1)),))

    def test_partial_identity_is_self_inverse(self):
        assert invert(ID_EVENS) == ID_EVENS

    def test_pairs(self):
        c = make_chart([(0, 1), (1, 2)], ())
        assert invert(c) == make_chart([(1, 0), (2, 1)], ())

    def test_involutive_and_cancelling(self):
        rng = make_rng(4)
        for _ in range(100):
            c = random_chart(rng)
            assert invert(invert(c)) == c
            assert compose(c, invert(c)) == identity_on(dom_set(c))
            assert compose(invert(c), c) == identity_on(im_set(c))


class TestStats:
    def test_doubling(self):
        s = stats(DOUBLE)
        assert s.rank == ALEPH0
        assert s.collapse == fin(0)
        assert s.defect == ALEPH0
        assert s.im == EVENS

    def test_identity(self):
        s = stats(IDENTITY_CHART)
        assert s.rank == ALEPH0 and s.collapse == ZERO and s.defect == ZERO
        assert s.support == EMPTY

    def test_shift(self):
        s = stats(SHIFT)
        assert s.collapse == fin(0) and s.defect == fin(1)
        # Support is reported only for permutations; the shift misses 0.
        assert s.support is None

    def test_wrappers(self):
        assert rank_of(DOUBLE) == ALEPH0
        assert collapse_of(SHIFT) == ZERO
        assert defect_of(SHIFT) == fin(1)

    def test_support_of_transposition(self):
        s = stats(transposition(2, 5))
        assert members(s.support) == {2, 5}

    def test_support_excludes_fixed_point_of_affine_piece(self):
        # 2t -> 4t fixes exactly 0, so the support of any permutation built
        # around that piece must exclude 0 while containing 2.
        half = make_chart((), (Piece(Prog(0, 2), Prog(0, 4)),))
        f = chart_union(
            half,
            bijection_between(ODDS, NATURALS.difference(residue_class(0, 4))),
        )
        assert is_permutation(f)
        assert apply_chart(f, 0) == 0 and apply_chart(f, 2) == 4
        sup = stats(f).support
        assert 0 not in sup and 2 in sup

    def test_predicates(self):
        assert is_permutation(IDENTITY_CHART)
        assert not is_permutation(DOUBLE)
        assert is_total(DOUBLE) and is_total(SHIFT)
        assert not is_total(ID_EVENS)
        assert is_partial_identity(ID_EVENS) and is_partial_identity(EMPTY_CHART)
        assert not is_partial_identity(SHIFT)


class TestSetImages:
    def test_doubling_sends_mult3_to_mult6(self):
        assert image_of_set(DOUBLE, MULT3) == MULT6

    def test_disjoint_carrier_gives_empty(self):
        assert image_of_set(ID_EVENS, ODDS) == EMPTY

    def test_empty_set_stays_empty(self):
        rng = make_rng(13)
        for _ in range(20):
            assert image_of_set(random_chart(rng), EMPTY) == EMPTY

    def test_image_matches_inverse_oracle(self):
        rng = make_rng(29)
        for _ in range(150):
            f, s = random_chart(rng), random_epset(rng)
            img = image_of_set(f, s)
            finv = invert(f)
            for y in range(80):
                x = apply_chart(finv, y)
                assert (y in img) == (x is not None and x in s)

    def test_preimage_matches_forward_oracle(self):
        rng = make_rng(37)
        for _ in range(150):
            f, s = random_chart(rng), random_epset(rng)
            pre = preimage_of_set(f, s)
            for x in range(80):
                y = apply_chart(f, x)
                assert (x in pre) == (y is not None and y in s)

    def test_restrict(self):
        r = restrict(DOUBLE, MULT3)
        assert dom_set(r) == MULT3 and im_set(r) == MULT6
        rng = make_rng(41)
        for _ in range(100):
            f, s = random_chart(rng), random_epset(rng)
            r = restrict(f, s)
            assert dom_set(r) == dom_set(f).intersect(s)
            for x in range(60):
                want = apply_chart(f, x) if x in s else None
                assert apply_chart(r, x) == want


class TestChartUnion:
    def test_disjoint_union(self):
        c = chart_union(ID_EVENS, make_chart([(1, 3), (3, 1)], ()))
        assert apply_chart(c, 0) == 0 and apply_chart(c, 1) == 3

    def test_conflicting_sources_rejected(self):
        with pytest.raises(InjectivityError):
            chart_union(DOUBLE, SHIFT)

    def test_conflicting_targets_rejected(self):
        with pytest.raises(InjectivityError):
            chart_union(make_chart([(0, 5)], ()), make_chart([(1, 5)], ()))


class TestBijectionBetween:
    def test_evens_to_odds(self):
        b = bijection_between(EVENS, ODDS)
        assert b == make_chart((), (Piece(Prog(0, 2), Prog(1, 2)),))
        s = stats(b)
        assert s.dom == EVENS and s.im == ODDS

    def test_finite_blocks(self):
        b = bijection_between(from_finite([1, 2, 3]), from_finite([7, 8, 9]))
        assert b == make_chart([(1, 7), (2, 8), (3, 9)], ())

    def test_everything_to_evens(self):
        b = bijection_between(NATURALS, EVENS)
        s = stats(b)
        assert s.dom == NATURALS and s.im == EVENS

    def test_cardinality_mismatch_rejected(self):
        with pytest.raises(ParameterError):
            bijection_between(from_finite([0]), EVENS)
        with pytest.raises(ParameterError):
            bijection_between(from_finite([0, 1]), from_finite([5]))

    def test_random_carriers(self):
        rng = make_rng(53)
        built = 0
        while built < 120:
            a, b = random_epset(rng), random_epset(rng)
            if a.card() != b.card():
                continue
            built += 1
            c = bijection_between(a, b)
            assert dom_set(c) == a and im_set(c) == b


class TestExtend:
    def test_empty_to_full_permutation(self):
        q = extend_to_permutation(EMPTY_CHART, NATURALS)
        s = stats(q)
        assert s.dom == NATURALS and s.im == NATURALS

    def test_partial_shift_inside_evens(self):
        p = make_chart((), (Piece(Prog(0, 4), Prog(2, 4)),))  # 4t -> 4t+2
        q = extend_to_permutation(p, EVENS)
        assert restrict(q, residue_class(0, 4)) == p
        s = stats(q)
        assert s.dom == EVENS and s.im == EVENS

    def test_forced_singleton(self):
        p = make_chart([(0, 0)], ())
        assert extend_to_permutation(p, from_finite([0])) == p

    def test_extension_preserves_given_values(self):
        rng = make_rng(61)
        for _ in range(60):
            y = random_epset(rng)
            if y.card() != ALEPH0:
                continue
            half = y.split(2)[0]
            p = bijection_between(half, y.difference(half))
            q = extend_to_permutation(p, y)
            assert restrict(q, half) == p
            assert dom_set(q) == y and im_set(q) == y

    def test_domain_outside_carrier_rejected(self):
        with pytest.raises(ParameterError):
            extend_to_permutation(make_chart([(1, 1)], ()), EVENS)

    def test_leftover_mismatch_rejected(self):
        with pytest.raises(ParameterError):
            extend_to_bijection(
                EMPTY_CHART, from_finite([0, 1]), from_finite([4])
            )


class TestSandwich:
    # f maps everything into a moiety of the carrier, g maps another moiety
    # of the carrier back onto everything; the middle factor is a
    # permutation fixing everything off the carrier.
    F = make_chart((), (Piece(Prog(0, 1), Prog(0, 4)),))  # x -> 4x
    G = invert(make_chart((), (Piece(Prog(0, 1), Prog(2, 4)),)))  # 4x+2 -> x

    def _check(self, h):
        p = sandwich_factorize(h, self.F, self.G, EVENS)
        assert is_permutation(p)
        assert restrict(p, ODDS) == identity_on(ODDS)
        assert compose(compose(self.F, p), self.G) == h
        return p

    def test_identity_target(self):
        self._check(IDENTITY_CHART)

    def test_doubling_target(self):
        self._check(DOUBLE)

    def test_empty_target(self):
        self._check(EMPTY_CHART)

    def test_random_targets(self):
        rng = make_rng(71)
        for _ in range(40):
            self._check(random_mixed(rng))

    def test_bad_carrier_rejected(self):
        with pytest.raises(ParameterError):
            sandwich_factorize(IDENTITY_CHART, self.F, self.G, NATURALS)

    def test_partial_f_rejected(self):
        with pytest.raises(ParameterError):
            sandwich_factorize(
                IDENTITY_CHART, restrict(self.F, EVENS), self.G, EVENS
            )

    def test_non_surjective_g_rejected(self):
        with pytest.raises(ParameterError):
            sandwich_factorize(
                IDENTITY_CHART, self.F, restrict(self.G, residue_class(2, 8)), EVENS
            )


class TestText:
    def test_render_known_chart(self):
        c = make_chart([(0, 9)], (Piece(Prog(1, 2), Prog(2, 2)),))
        assert render_chart(c) == (
            "chart { pair 0 -> 9; piece (1 mod 2 from 0) -> (0 mod 2 from 1); }"
        )

    def test_render_constants(self):
        assert render_chart(EMPTY_CHART) == "chart { }"
        assert parse_chart(render_chart(IDENTITY_CHART)) == IDENTITY_CHART

    def test_round_trip(self):
        rng = make_rng(83)
        for _ in range(200):
            c = random_chart(rng)
            assert parse_chart(render_chart(c)) == c

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "chart {",
            "chart { pair 0 -> ; }",
            "chart { pair -1 -> 0; }",
            "chart { piece (2 mod 2 from 0) -> (0 mod 2 from 0); }",
            "chart { pear 0 -> 1; }",
        ],
    )
    def test_parse_rejects(self, bad):
        with pytest.raises((ParseError, ParameterError)):
            parse_chart(bad)

    def test_parse_rejects_non_injective(self):
        with pytest.raises(InjectivityError):
            parse_chart("chart { pair 0 -> 1; pair 0 -> 2; }")
