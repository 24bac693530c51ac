"""Brute-force universe of partial injections on a finite ground set."""

import itertools

import pytest

from ixm.errors import ParameterError, ResourceGuardError
from ixm.finite_model import (
    all_fcharts,
    completeness_search,
    fchart_closure,
    fchart_collapse,
    fchart_compose,
    fchart_defect,
    fchart_dom,
    fchart_im,
    fchart_invert,
    fchart_rank,
    identity_fchart,
    injective_mutt_membership,
    is_closed,
    is_fchart,
    is_inverse_closed,
    is_maximal,
    is_transversal,
    low_rank_ideal,
    maximal_subgroups,
    minimal_extension,
    mutt_products,
    parse_fchart,
    partial_identities,
    predicted_finite_maximals,
    render_fchart,
    strict_ideal,
    sym_group,
)
from ixm.sampling import make_rng, random_fchart, random_nonempty_fchart


def sizes(families):
    return sorted(len(f.elements) for f in families)


class TestElementArithmetic:
    def test_compose_left_to_right(self):
        u = (1, None, 0)
        v = (2, 1, 0)
        assert fchart_compose(u, v) == (1, None, 2)

    def test_invert(self):
        assert fchart_invert((1, None, 0)) == (2, 0, None)
        assert fchart_invert((None, None)) == (None, None)

    def test_dom_im_rank(self):
        u = (2, None, 0)
        assert fchart_dom(u) == {0, 2}
        assert fchart_im(u) == {0, 2}
        assert fchart_rank(u) == 2
        assert fchart_collapse(u) == 1
        assert fchart_defect(u) == 1

    def test_is_fchart(self):
        assert is_fchart((1, None, 0))
        assert not is_fchart((1, 1, None))  # repeated image point
        assert not is_fchart((3, None, None))  # out of range
        assert not is_fchart([1, None])  # wrong container

    def test_compose_invert_gives_partial_identity(self):
        rng = make_rng(3)
        for _ in range(200):
            u = random_fchart(rng, 4)
            p = fchart_compose(u, fchart_invert(u))
            assert p == tuple(
                x if x in fchart_dom(u) else None for x in range(4)
            )


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(2, 7), (3, 34), (4, 209)])
    def test_universe_sizes(self, n, count):
        # |I_n| = sum over k of C(n,k)^2 k!
        assert len(all_fcharts(n)) == count
        assert len(set(all_fcharts(n))) == count
        assert all(is_fchart(u) and len(u) == n for u in all_fcharts(n))

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            all_fcharts(8)

    def test_sym_group(self):
        assert len(sym_group(3)) == 6
        assert identity_fchart(3) in sym_group(3)

    def test_ideals(self):
        assert low_rank_ideal(3, 1) == {
            u for u in all_fcharts(3) if fchart_rank(u) <= 1
        }
        assert strict_ideal(3) == set(all_fcharts(3)) - set(sym_group(3))

    def test_partial_identities(self):
        ids = partial_identities(3)
        assert len(ids) == 8
        assert all(fchart_compose(e, e) == e for e in ids)
        assert identity_fchart(3) in ids and (None, None, None) in ids

    def test_strict_ideal_is_an_ideal(self):
        # Exhaustive: products with a rank-deficient factor stay deficient.
        for n in (2, 3):
            ideal = strict_ideal(n)
            for f in all_fcharts(n):
                for g in ideal:
                    assert fchart_compose(f, g) in ideal
                    assert fchart_compose(g, f) in ideal


class TestClosure:
    def test_identity_alone(self):
        e = identity_fchart(3)
        assert fchart_closure([e]) == {e}

    def test_symmetric_group_from_two_generators(self):
        swap = (1, 0, 2)
        cycle = (1, 2, 0)
        assert fchart_closure([swap, cycle]) == set(sym_group(3))

    def test_permutations_plus_corank_one_generate_everything(self):
        gens = list(sym_group(3)) + [(1, 0, None)]
        assert len(fchart_closure(gens)) == 34

    def test_is_closed(self):
        assert is_closed(sym_group(3))
        assert not is_closed([(1, 0, 2), (1, 2, 0)])

    def test_is_inverse_closed(self):
        assert is_inverse_closed(sym_group(4))
        assert not is_inverse_closed([(1, None, None)])


class TestMinimalExtension:
    def test_forced_singleton_image(self):
        assert minimal_extension((1, None)) == (1, 1)

    def test_total_map_is_its_own_extension(self):
        rng = make_rng(7)
        for _ in range(100):
            u = random_fchart(rng, 4)
            if fchart_rank(u) == 4:
                assert minimal_extension(u) == u

    def test_forced_constant(self):
        assert minimal_extension((None, 0, None)) == (0, 0, 0)

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            minimal_extension((None, None))

    def test_statistics_preserved_and_domain_is_transversal(self):
        rng = make_rng(11)
        for _ in range(300):
            u = random_nonempty_fchart(rng, 5)
            v = minimal_extension(u)
            assert len(set(v)) == fchart_rank(u)
            assert set(v) == fchart_im(u)
            assert all(v[x] == u[x] for x in fchart_dom(u))
            assert is_transversal(v, fchart_dom(u))


class TestMuttProducts:
    def test_identity_with_full_transversal(self):
        e = identity_fchart(3)
        assert mutt_products([e], {e: frozenset({0, 1, 2})}, 3) == {e}

    def test_image_outside_transversal_blocks_chaining(self):
        v = (0, 0)
        # {1} is a transversal of v but does not contain im(v) = {0}.
        assert mutt_products([v], {v: frozenset({1})}, 3) == {v}

    def test_non_transversal_rejected(self):
        v = (0, 0)
        with pytest.raises(ParameterError):
            mutt_products([v], {v: frozenset({0, 1})}, 2)

    def test_matches_word_enumeration(self):
        # Independent oracle: enumerate all words up to the length bound and
        # apply the chained image-in-transversal constraint directly.
        rng = make_rng(13)
        for _ in range(30):
            vs = []
            assignment = {}
            while len(vs) < 3:
                u = random_nonempty_fchart(rng, 4)
                v = minimal_extension(u)
                if v in assignment:
                    continue
                vs.append(v)
                assignment[v] = frozenset(fchart_dom(u))
            maxlen = 3
            want = set()
            for k in range(1, maxlen + 1):
                for word in itertools.product(vs, repeat=k):
                    prod = word[0]
                    ok = True
                    for nxt in word[1:]:
                        if not set(prod) <= assignment[nxt]:
                            ok = False
                            break
                        prod = tuple(nxt[e] for e in prod)
                    if ok:
                        want.add(prod)
            assert mutt_products(vs, assignment, maxlen) == want


class TestInjectiveMuttMembership:
    def test_identity(self):
        ok, bad = injective_mutt_membership([identity_fchart(3)])
        assert ok and not bad

    def test_full_symmetric_group(self):
        ok, bad = injective_mutt_membership(list(sym_group(3)))
        assert ok and not bad

    def test_random_families(self):
        rng = make_rng(17)
        for _ in range(40):
            us = {random_nonempty_fchart(rng, 4) for _ in range(rng.randint(1, 4))}
            ok, bad = injective_mutt_membership(us, maxlen=3)
            assert ok, bad

    def test_rejects_empty_or_rankless(self):
        with pytest.raises(ParameterError):
            injective_mutt_membership([])
        with pytest.raises(ParameterError):
            injective_mutt_membership([(None, None)])


class TestMaximality:
    def test_permutations_plus_corank2_is_maximal(self):
        m = set(sym_group(3)) | low_rank_ideal(3, 1)
        assert is_maximal(m, 3)

    def test_small_group_plus_empty_is_not_maximal(self):
        m = set(sym_group(3)) | {(None, None, None)}
        assert not is_maximal(m, 3)

    def test_unclosed_candidate_rejected(self):
        m = set(all_fcharts(3)) - {identity_fchart(3)}
        with pytest.raises(ParameterError):
            is_maximal(m, 3)

    def test_whole_monoid_rejected(self):
        with pytest.raises(ParameterError):
            is_maximal(set(all_fcharts(2)), 2)

    def test_foreign_elements_rejected(self):
        with pytest.raises(ParameterError):
            is_maximal({(0, 1, 2, 3)}, 3)


class TestPredictions:
    def test_count_n2(self):
        fams = predicted_finite_maximals(2)
        assert len(fams) == 2
        assert {frozenset(f.elements) for f in fams} == {
            frozenset({(0, 1), (1, 0), (None, None)}),
            frozenset(all_fcharts(2)) - {(1, 0)},
        }

    def test_count_n3(self):
        # One corank family plus one per maximal subgroup (alternating group
        # and the three two-element groups).
        assert len(maximal_subgroups(3)) == 4
        assert len(predicted_finite_maximals(3)) == 5

    def test_count_n4(self):
        # Maximal subgroups of the degree-4 symmetric group: the alternating
        # group, three dihedral groups of order 8, four point stabilisers.
        groups = maximal_subgroups(4)
        assert sorted(len(g) for g in groups) == [6, 6, 6, 6, 8, 8, 8, 12]
        assert len(predicted_finite_maximals(4)) == 9

    def test_all_predictions_are_maximal(self):
        for n in (2, 3):
            for fam in predicted_finite_maximals(n):
                assert is_maximal(fam.elements, n), fam.label
                assert is_inverse_closed(fam.elements), fam.label

    def test_out_of_range(self):
        with pytest.raises(ParameterError):
            predicted_finite_maximals(1)
        with pytest.raises(ParameterError):
            predicted_finite_maximals(5)
        with pytest.raises(ResourceGuardError):
            maximal_subgroups(5)


class TestCompletenessSearch:
    def test_exhaustive_n2(self):
        res = completeness_search(2)
        assert res.complete
        predicted = {f.elements for f in predicted_finite_maximals(2)}
        assert {frozenset(m) for m in res.maximal} == predicted
        # On a finite ground set the inverse-closed maximal families
        # coincide with the plain ones.
        assert {frozenset(m) for m in res.maximal_inverse} == predicted

    def test_search_n3(self):
        res = completeness_search(3)
        assert res.complete
        predicted = {f.elements for f in predicted_finite_maximals(3)}
        assert {frozenset(m) for m in res.maximal} == predicted

    def test_budget_exhaustion_is_flagged(self):
        res = completeness_search(3, budget_ms=1)
        assert not res.complete
        assert "budget" in res.note

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            completeness_search(4)


class TestInverseIntersection:
    def test_intersection_with_inverses_is_largest_inverse_part(self):
        # For sampled closed families M, the two-sided intersection is a
        # composition- and inverse-closed subsemigroup containing every
        # inverse-closed subsemigroup of M.
        rng = make_rng(23)
        universe = all_fcharts(3)
        for _ in range(25):
            gens = [rng.choice(universe) for _ in range(rng.randint(1, 3))]
            m = fchart_closure(gens)
            w = m & {fchart_invert(u) for u in m}
            if w:
                assert is_closed(w)
                assert is_inverse_closed(w)
            for _ in range(10):
                sub = [u for u in m if rng.random() < 0.3]
                v = fchart_closure(sub + [fchart_invert(u) for u in sub]) if sub else set()
                if v and v <= m:
                    assert v <= w


class TestText:
    def test_render(self):
        assert render_fchart((1, None, 0)) == "[1,_,0]"
        assert render_fchart((None,)) == "[_]"

    def test_round_trip(self):
        rng = make_rng(29)
        for _ in range(100):
            u = random_fchart(rng, 5)
            assert parse_fchart(render_fchart(u)) == u

    def test_parse_rejects(self):
        from ixm.errors import ParseError

        for bad in ["", "[", "1,2", "[1,1]", "[2]", "[x]"]:
            with pytest.raises((ParseError, ParameterError)):
                parse_fchart(bad)
