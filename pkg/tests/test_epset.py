"""Eventually periodic subsets of the naturals: canonical form and algebra."""

import pytest

from ixm.cardinal import ALEPH0, fin
from ixm.epset import (
    EMPTY,
    NATURALS,
    EPSet,
    Prog,
    ep_boolean,
    from_finite,
    from_prog,
    make_epset,
    parse_epset,
    prog_from_parts,
    progs_intersect,
    render_epset,
    render_prog,
    residue_class,
    union_all,
)
from ixm.errors import ParameterError, ParseError
from ixm.sampling import make_rng, random_epset

EVENS = residue_class(0, 2)
ODDS = residue_class(1, 2)
MULT3 = residue_class(0, 3)
MULT6 = residue_class(0, 6)


def members(s: EPSet, hi: int = 120) -> set:
    """Membership oracle on a window, independent of the set algebra."""
    return {x for x in range(hi) if x in s}


class TestProg:
    def test_contains_and_value(self):
        p = Prog(3, 4)
        assert 3 in p and 7 in p and 11 in p
        assert 4 not in p and 1 not in p
        assert p.value(2) == 11
        assert p.index(11) == 2

    def test_index_off_progression(self):
        with pytest.raises(ParameterError):
            Prog(0, 2).index(3)

    def test_split_partitions(self):
        p = Prog(1, 3)
        parts = p.split(3)
        seen = [x for x in range(1, 100) if x in p]
        covered = sorted(x for q in parts for x in range(100) if x in q)
        assert covered == seen
        assert all(q.step == 9 for q in parts)

    def test_validation(self):
        with pytest.raises(ParameterError):
            Prog(0, 0)
        with pytest.raises(ParameterError):
            Prog(-1, 2)

    def test_render_and_parts_round_trip(self):
        p = Prog(first=2, step=2)
        assert render_prog(p) == "(0 mod 2 from 1)"
        assert prog_from_parts(0, 2, 1) == p

    def test_intersect_is_crt(self):
        a, b = Prog(0, 2), Prog(0, 3)
        c = progs_intersect(a, b)
        assert c == Prog(0, 6)
        assert progs_intersect(Prog(0, 2), Prog(1, 2)) is None

    def test_intersect_matches_pointwise(self):
        rng = make_rng(11)
        for _ in range(200):
            a = Prog(rng.randrange(10), rng.randrange(1, 9))
            b = Prog(rng.randrange(10), rng.randrange(1, 9))
            c = progs_intersect(a, b)
            window = {x for x in range(200) if x in a and x in b}
            if c is None:
                assert window == set()
            else:
                assert {x for x in range(200) if x in c} == window


class TestCanonicalForm:
    def test_equality_is_extensional(self):
        # The same set described with a doubled period and a shifted
        # threshold must come out structurally identical.
        a = make_epset(0, 2, (0,), ())
        b = make_epset(6, 4, (0, 2), {0, 2, 4})
        assert a == b
        assert a.period == 2 and a.threshold == 0

    def test_low_part_absorbed_into_tail(self):
        s = make_epset(5, 3, (0,), {0, 3})
        assert s == make_epset(0, 3, (0,), ())

    def test_threshold_is_tight(self):
        # 6 agrees with the tail pattern so it folds into the tail; the last
        # disagreement is the missing 3, pinning the threshold at 4.
        s = make_epset(9, 3, (0,), {1, 6})
        assert s.threshold == 4
        assert s.low == frozenset({1})
        assert members(s) == {1} | set(range(6, 120, 3))

    def test_finite_sets_have_period_one(self):
        s = make_epset(10, 6, (), {2, 9})
        assert s.period == 1 and s.residues == frozenset()
        assert s.card() == fin(2)

    def test_validation(self):
        with pytest.raises(ParameterError):
            make_epset(0, 0, (), ())
        with pytest.raises(ParameterError):
            make_epset(-1, 1, (), ())
        with pytest.raises(ParameterError):
            make_epset(3, 2, (), {5})  # low point at or past the threshold


class TestBooleanOps:
    def test_union_of_complementary_classes(self):
        assert EVENS.union(ODDS) == NATURALS

    def test_intersection_is_crt(self):
        assert EVENS.intersect(MULT3) == MULT6

    def test_complement_of_everything(self):
        assert NATURALS.complement() == EMPTY
        assert EMPTY.complement() == NATURALS

    def test_difference(self):
        assert NATURALS.difference(ODDS) == EVENS

    def test_ep_boolean_dispatch(self):
        assert ep_boolean("union", EVENS, ODDS) == NATURALS
        assert ep_boolean("intersection", EVENS, MULT3) == MULT6
        assert ep_boolean("difference", NATURALS, ODDS) == EVENS
        assert ep_boolean("complement", EVENS) == ODDS
        with pytest.raises(ParameterError):
            ep_boolean("xor", EVENS, ODDS)
        with pytest.raises(ParameterError):
            ep_boolean("union", EVENS)

    def test_ops_match_pointwise_oracle(self):
        rng = make_rng(23)
        for _ in range(300):
            a, b = random_epset(rng), random_epset(rng)
            hi = 3 * a.period * b.period + max(a.threshold, b.threshold) + 10
            ma, mb = members(a, hi), members(b, hi)
            assert members(a.union(b), hi) == ma | mb
            assert members(a.intersect(b), hi) == ma & mb
            assert members(a.difference(b), hi) == ma - mb
            assert members(a.complement(), hi) == set(range(hi)) - ma

    def test_subset(self):
        assert MULT6.is_subset(EVENS)
        assert not EVENS.is_subset(MULT6)
        assert EMPTY.is_subset(EMPTY)
        assert from_finite([4]).is_subset(EVENS)


class TestCardinality:
    def test_empty(self):
        assert EMPTY.card() == fin(0)

    def test_residue_class_is_infinite(self):
        assert EVENS.card() == ALEPH0

    def test_finite_prefix(self):
        assert make_epset(3, 1, (), {0, 1, 2}).card() == fin(3)


class TestDecompose:
    def test_single_class(self):
        progs, low = EVENS.decompose()
        assert progs == [Prog(0, 2)] and low == []

    def test_shifted_full_class(self):
        progs, low = NATURALS.difference(from_finite([0])).decompose()
        assert progs == [Prog(1, 1)] and low == []

    def test_mixed_set(self):
        s = from_finite([1]).union(make_epset(6, 3, (0,), ()))
        progs, low = s.decompose()
        assert progs == [Prog(6, 3)] and low == [1]
        # Cross-check the decomposition pointwise on a window.
        rebuilt = {x for x in range(100) if any(x in p for p in progs)} | set(low)
        assert rebuilt == members(s, 100)

    def test_decompose_rebuilds_everything(self):
        rng = make_rng(5)
        for _ in range(100):
            s = random_epset(rng)
            progs, low = s.decompose()
            hi = 2 * s.period + s.threshold + 20
            rebuilt = {x for x in range(hi) if any(x in p for p in progs)} | set(low)
            assert rebuilt == members(s, hi)


class TestMoiety:
    def test_half_of_everything(self):
        assert EVENS.is_moiety()

    def test_everything_is_not(self):
        assert not NATURALS.is_moiety()

    def test_finite_is_not(self):
        assert not from_finite([5]).is_moiety()

    def test_cofinite_is_not(self):
        assert not NATURALS.difference(from_finite([0, 1])).is_moiety()


class TestSplit:
    def test_split_partitions_the_set(self):
        rng = make_rng(31)
        for _ in range(60):
            s = random_epset(rng)
            if s.card() != ALEPH0:
                continue
            parts = s.split(3)
            assert len(parts) == 3
            assert all(p.card() == ALEPH0 for p in parts)
            assert union_all(parts) == s
            for i, p in enumerate(parts):
                for q in parts[i + 1:]:
                    assert p.intersect(q).is_empty()

    def test_split_one_is_identity(self):
        assert EVENS.split(1) == [EVENS]

    def test_split_finite_rejected(self):
        with pytest.raises(ParameterError):
            from_finite([1, 2]).split(2)
        with pytest.raises(ParameterError):
            EVENS.split(0)


class TestAccessors:
    def test_take_first(self):
        assert members(EVENS.take_first(3), 100) == {0, 2, 4}
        with pytest.raises(ParameterError):
            from_finite([1]).take_first(2)

    def test_min(self):
        assert EVENS.min() == 0
        assert make_epset(4, 3, (1,), {2}).min() == 2
        with pytest.raises(ParameterError):
            EMPTY.min()

    def test_iter_ascending(self):
        it = ODDS.iter_ascending()
        assert [next(it) for _ in range(4)] == [1, 3, 5, 7]

    def test_membership_protocol(self):
        assert 4 in EVENS and 5 not in EVENS


class TestUnionAll:
    def test_empty_family(self):
        assert union_all([]) == EMPTY
        assert union_all([EMPTY, EMPTY]) == EMPTY

    def test_matches_fold_pointwise(self):
        rng = make_rng(47)
        for _ in range(40):
            fam = [random_epset(rng) for _ in range(rng.randrange(1, 8))]
            got = union_all(fam)
            hi = max(s.threshold for s in fam) + 4 * got.period + 10
            want = set()
            for s in fam:
                want |= members(s, hi)
            assert members(got, hi) == want

    def test_split_family_recombines(self):
        # Pieces of a single class re-tile it exactly, keeping the period small.
        parts = [from_prog(p) for p in Prog(0, 2).split(5)]
        got = union_all(parts)
        assert got == EVENS
        assert got.period == 2


class TestText:
    def test_render_form(self):
        s = make_epset(4, 3, (0, 2), {1})
        assert render_epset(s) == "ep N=4 m=3 R={0,2} L={1}"

    def test_round_trip(self):
        rng = make_rng(3)
        for _ in range(200):
            s = random_epset(rng)
            assert parse_epset(render_epset(s)) == s

    def test_parse_normalises(self):
        assert parse_epset("ep N=6 m=4 R={0,2} L={0,2,4}") == EVENS

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "ep",
            "ep N=1 m=0 R={} L={}",
            "ep N=1 m=2 R={2} L={}",
            "ep N=1 m=2 R={0} L={3}",
            "set N=1 m=2 R={0} L={}",
        ],
    )
    def test_parse_rejects(self, bad):
        with pytest.raises((ParseError, ParameterError)):
            parse_epset(bad)
