"""Arithmetic and ordering on the three cardinal tiers."""

import pytest

from ixm.cardinal import (
    ALEPH0,
    ALEPH1,
    ONE,
    ZERO,
    Card,
    card_add,
    card_cmp,
    fin,
    parse_card,
    render_card,
)
from ixm.errors import ParameterError, ParseError


class TestConstruction:
    def test_fin_round_trip(self):
        assert fin(5).value == 5
        assert fin(5).finite
        assert not fin(5).infinite

    def test_constants(self):
        assert ZERO == fin(0)
        assert ONE == fin(1)
        assert ALEPH0.infinite
        assert ALEPH1.infinite

    def test_negative_rejected(self):
        with pytest.raises(ParameterError):
            fin(-1)

    def test_bad_level_rejected(self):
        with pytest.raises(ParameterError):
            Card(7)

    def test_infinite_carries_no_value(self):
        with pytest.raises(ParameterError):
            Card(1, 3)


class TestAdd:
    def test_finite_addition(self):
        assert card_add(fin(2), fin(3)) == fin(5)

    def test_infinite_absorbs_finite(self):
        assert card_add(fin(7), ALEPH0) == ALEPH0
        assert card_add(ALEPH0, fin(7)) == ALEPH0

    def test_infinite_plus_infinite(self):
        # mu + mu = mu for the one infinite size that arises as a statistic.
        assert card_add(ALEPH0, ALEPH0) == ALEPH0

    def test_aleph1_operand_rejected(self):
        with pytest.raises(ParameterError):
            card_add(ALEPH1, fin(0))
        with pytest.raises(ParameterError):
            card_add(ALEPH0, ALEPH1)


class TestOrdering:
    def test_finite_vs_finite(self):
        assert card_cmp(fin(0), fin(1)) == -1

    def test_infinite_dominates_any_finite(self):
        assert card_cmp(ALEPH0, fin(10**9)) == 1

    def test_tiers_are_ordered(self):
        assert card_cmp(ALEPH0, ALEPH1) == -1
        assert fin(10**12) < ALEPH0 < ALEPH1

    def test_equal(self):
        assert card_cmp(fin(4), fin(4)) == 0
        assert card_cmp(ALEPH0, ALEPH0) == 0

    def test_sort_order_is_total(self):
        cards = [ALEPH1, fin(3), ALEPH0, fin(0), fin(3)]
        assert sorted(cards) == [fin(0), fin(3), fin(3), ALEPH0, ALEPH1]


class TestText:
    @pytest.mark.parametrize("c", [ZERO, ONE, fin(42), ALEPH0, ALEPH1])
    def test_round_trip(self, c):
        assert parse_card(render_card(c)) == c

    def test_render_forms(self):
        assert render_card(fin(3)) == "fin:3"
        assert render_card(ALEPH0) == "aleph0"
        assert render_card(ALEPH1) == "aleph1"

    def test_parse_whitespace(self):
        assert parse_card("  aleph0 ") == ALEPH0

    @pytest.mark.parametrize("bad", ["fin:", "fin:-3", "fin:x", "aleph2", ""])
    def test_parse_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_card(bad)
