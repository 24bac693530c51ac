"""Brute-force models over a finite ground set {0..n-1}.

Partial injections are tuples with None marking undefined points; total
maps are plain tuples.  Everything here is small enough to enumerate, so
this module doubles as the oracle layer for the symbolic side: claimed
identities about ranks, ideals, maximal subsemigroups and transversal
products are checked against exhaustive computation.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

from .errors import ParameterError, ParseError, ResourceGuardError

FChart = tuple  # entries: int | None, injective on defined points
FTrans = tuple  # entries: int, total


# -- Element arithmetic -----------------------------------------------------


def fchart_compose(u: FChart, v: FChart) -> FChart:
    return tuple(v[e] if e is not None else None for e in u)


def fchart_invert(u: FChart) -> FChart:
    n = len(u)
    out = [None] * n
    for x, y in enumerate(u):
        if y is not None:
            out[y] = x
    return tuple(out)


def fchart_dom(u: FChart) -> frozenset:
    return frozenset(x for x, y in enumerate(u) if y is not None)


def fchart_im(u: FChart) -> frozenset:
    return frozenset(y for y in u if y is not None)


def fchart_rank(u: FChart) -> int:
    return sum(1 for y in u if y is not None)


def fchart_collapse(u: FChart) -> int:
    """Points outside a transversal of the kernel; for injective maps the
    kernel is trivial so this is just the number of undefined points."""
    return len(u) - fchart_rank(u)


def fchart_defect(u: FChart) -> int:
    return len(u) - fchart_rank(u)


def is_fchart(u) -> bool:
    if not isinstance(u, tuple):
        return False
    seen = set()
    for y in u:
        if y is None:
            continue
        if not isinstance(y, int) or not 0 <= y < len(u) or y in seen:
            return False
        seen.add(y)
    return True


def ftrans_compose(u: FTrans, v: FTrans) -> FTrans:
    return tuple(v[e] for e in u)


def ftrans_rank(u: FTrans) -> int:
    return len(set(u))


def ftrans_collapse(u: FTrans) -> int:
    return len(u) - ftrans_rank(u)


def ftrans_defect(u: FTrans) -> int:
    return len(u) - ftrans_rank(u)


def is_injective_ftrans(u: FTrans) -> bool:
    return len(set(u)) == len(u)


# -- Enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def all_fcharts(n: int) -> tuple:
    """Every partial injection on n points."""
    if n > 7:
        raise ResourceGuardError(f"refusing to enumerate partial injections for n={n} > 7")
    out = []
    pts = range(n)
    for k in range(n + 1):
        for dom in combinations(pts, k):
            for img in combinations(pts, k):
                for arranged in permutations(img):
                    u = [None] * n
                    for x, y in zip(dom, arranged):
                        u[x] = y
                    out.append(tuple(u))
    return tuple(sorted(out, key=_fchart_key))


def _fchart_key(u: FChart):
    return tuple(-1 if y is None else y for y in u)


@lru_cache(maxsize=None)
def sym_group(n: int) -> tuple:
    return tuple(sorted(p for p in permutations(range(n))))


def identity_fchart(n: int) -> FChart:
    return tuple(range(n))


def low_rank_ideal(n: int, max_rank: int) -> frozenset:
    return frozenset(u for u in all_fcharts(n) if fchart_rank(u) <= max_rank)


def strict_ideal(n: int) -> frozenset:
    """Everything of non-maximal rank (the non-permutations)."""
    return frozenset(u for u in all_fcharts(n) if fchart_rank(u) < n)


def partial_identities(n: int) -> frozenset:
    out = []
    for mask in range(1 << n):
        out.append(tuple(x if mask >> x & 1 else None for x in range(n)))
    return frozenset(out)


# -- Generic closure ----------------------------------------------------------


def semigroup_closure(gens, mul) -> frozenset:
    elements = set(gens)
    frontier = set(gens)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in elements:
                for c in (mul(a, b), mul(b, a)):
                    if c not in elements and c not in fresh:
                        fresh.add(c)
        elements |= fresh
        frontier = fresh
    return frozenset(elements)


def fchart_closure(gens) -> frozenset:
    return semigroup_closure(gens, fchart_compose)


def is_closed(elements) -> bool:
    elements = set(elements)
    return all(fchart_compose(a, b) in elements for a in elements for b in elements)


def is_inverse_closed(elements) -> bool:
    elements = set(elements)
    return all(fchart_invert(a) in elements for a in elements)


# -- Minimal transformation extensions ----------------------------------------


def minimal_extension(u: FChart) -> FTrans:
    """Total map agreeing with u on dom(u) and with image exactly im(u).

    Undefined points are sent to the image of the least defined point,
    which makes the choice deterministic.
    """
    dom = sorted(fchart_dom(u))
    if not dom:
        raise ParameterError("the empty chart has no transformation extension")
    fill = u[dom[0]]
    return tuple(y if y is not None else fill for y in u)


def is_transversal(v: FTrans, t: frozenset) -> bool:
    if len(t) != ftrans_rank(v):
        return False
    return {v[x] for x in t} == set(v)


def mutt_products(vs, assignment: dict, maxlen: int) -> frozenset:
    """All products v0*...*vk (k < maxlen) where each intermediate image is
    contained in the assigned transversal of the next factor."""
    vs = list(vs)
    for v in vs:
        t = assignment.get(v)
        if t is None or not is_transversal(v, frozenset(t)):
            raise ParameterError(
                f"assignment for {render_fchart(v)} is not a transversal"
            )
    seen = set(vs)
    frontier = set(vs)
    for _ in range(maxlen - 1):
        fresh = set()
        for p in frontier:
            imp = set(p)
            for v in vs:
                if imp <= set(assignment[v]):
                    q = ftrans_compose(p, v)
                    if q not in seen:
                        fresh.add(q)
        seen |= fresh
        frontier = fresh
        if not frontier:
            break
    return frozenset(seen)


def injective_mutt_membership(us, maxlen: int = 3):
    """Check that injective chained-transversal products of the minimal
    extensions of us land in the semigroup generated by us.

    Returns (ok, counterexamples).
    """
    us = sorted(set(us), key=_fchart_key)
    if not us:
        raise ParameterError("need at least one chart")
    assignment: dict = {}
    for u in us:
        if fchart_rank(u) == 0:
            raise ParameterError("charts must be non-empty")
        v = minimal_extension(u)
        if v not in assignment:
            assignment[v] = frozenset(fchart_dom(u))
    products = mutt_products(list(assignment), assignment, maxlen)
    generated = fchart_closure(us)
    bad = []
    for p in products:
        if is_injective_ftrans(p):
            as_chart = tuple(p)
            if as_chart not in generated:
                bad.append(as_chart)
    return (not bad, bad)


# -- Maximal subsemigroups ------------------------------------------------------


def is_maximal(m, n: int) -> bool:
    universe = set(all_fcharts(n))
    mset = set(m)
    if not mset <= universe:
        raise ParameterError("candidate contains elements outside the monoid")
    if not is_closed(mset):
        raise ParameterError("candidate is not closed under composition")
    if mset == universe:
        raise ParameterError("candidate is the whole monoid, hence not proper")
    for x in universe - mset:
        if _closure_with(mset, x, len(universe)) != len(universe):
            return False
    return True


def _closure_with(closed: set, x, stop: int) -> int:
    elements = set(closed)
    elements.add(x)
    frontier = {x}
    while frontier:
        fresh = set()
        for a in frontier:
            for b in elements:
                for c in (fchart_compose(a, b), fchart_compose(b, a)):
                    if c not in elements and c not in fresh:
                        fresh.add(c)
        elements |= fresh
        frontier = fresh
        if len(elements) == stop:
            return stop
    return len(elements)


@dataclass(frozen=True)
class LabelledSet:
    label: str
    elements: frozenset


def maximal_subgroups(n: int) -> list[frozenset]:
    """Maximal subgroups of the symmetric group, by exhaustive closure of
    one- and two-element generating sets (complete for n <= 4, where every
    subgroup is generated by at most two elements)."""
    if n > 4:
        raise ResourceGuardError("subgroup enumeration is only supported for n <= 4")
    perms = sym_group(n)
    whole = frozenset(perms)
    subgroups = {frozenset({identity_fchart(n)})}
    for g in perms:
        subgroups.add(semigroup_closure({g}, ftrans_compose))
        for h in perms:
            subgroups.add(semigroup_closure({g, h}, ftrans_compose))
    proper = [s for s in subgroups if s != whole]
    maximal = [
        s
        for s in proper
        if not any(s < t for t in proper)
    ]
    return sorted(maximal, key=lambda s: (-len(s), sorted(s)))


def predicted_finite_maximals(n: int) -> list[LabelledSet]:
    """The expected maximal subsemigroups of the partial injection monoid:
    permutations plus everything of rank <= n-2, and one set per maximal
    subgroup of the permutation group."""
    if not 2 <= n <= 4:
        raise ParameterError("predictions are provided for 2 <= n <= 4 only")
    sym = frozenset(sym_group(n))
    non_perms = frozenset(all_fcharts(n)) - sym
    out = [
        LabelledSet(
            "permutations-plus-corank2",
            sym | low_rank_ideal(n, n - 2),
        )
    ]
    for i, g in enumerate(maximal_subgroups(n)):
        out.append(LabelledSet(f"subgroup-{i}-order-{len(g)}", frozenset(g) | non_perms))
    return out


# -- Exhaustive / budgeted search for all maximal subsemigroups -----------------


@dataclass
class SearchResult:
    n: int
    complete: bool
    maximal: list[frozenset] = field(default_factory=list)
    maximal_inverse: list[frozenset] = field(default_factory=list)
    note: str = ""


def default_budget_ms() -> int:
    raw = os.environ.get("IXM_BUDGET_MS", "")
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return 120_000


def completeness_search(n: int, budget_ms: int | None = None) -> SearchResult:
    if n == 2:
        return _complete_by_powerset(2)
    if n == 3:
        return _complete_by_minimal_complements(3, budget_ms or default_budget_ms())
    raise ResourceGuardError("completeness search supports n in {2, 3}")


def _complete_by_powerset(n: int) -> SearchResult:
    universe = list(all_fcharts(n))
    size = len(universe)
    closed_masks = []
    for mask in range(1 << size):
        subset = [universe[i] for i in range(size) if mask >> i & 1]
        sset = set(subset)
        if all(fchart_compose(a, b) in sset for a in subset for b in subset):
            closed_masks.append(mask)
    full = (1 << size) - 1
    proper = [m for m in closed_masks if m != full]
    maximal = [
        m for m in proper if not any(m != o and m & o == m for o in proper)
    ]
    sets = [
        frozenset(universe[i] for i in range(size) if m >> i & 1) for m in maximal
    ]
    inverse_closed = [s for s in _maximal_inverse_from_closed(universe, proper)]
    return SearchResult(n, True, sorted(sets, key=_set_key), inverse_closed)


def _maximal_inverse_from_closed(universe, proper_masks) -> list[frozenset]:
    size = len(universe)
    inv_masks = []
    for m in proper_masks:
        subset = [universe[i] for i in range(size) if m >> i & 1]
        if all(fchart_invert(u) in set(subset) for u in subset):
            inv_masks.append(m)
    maximal = [
        m for m in inv_masks if not any(m != o and m & o == m for o in inv_masks)
    ]
    return sorted(
        (
            frozenset(universe[i] for i in range(size) if m >> i & 1)
            for m in maximal
        ),
        key=_set_key,
    )


def _set_key(s: frozenset):
    return (-len(s), sorted(map(_fchart_key, s)))


class _ComplementSearch:
    """Exhaustive enumeration of maximal proper closed subsets.

    A subset M is closed exactly when its complement C satisfies: every
    factorisation of an element of C uses a factor from C.  Maximal closed
    sets correspond to minimal such complements, which a small DFS finds by
    branching only on uncovered factorisations.  Seeds are processed in
    order, each forbidding the earlier ones, so every minimal complement is
    reached exactly from its least element."""

    def __init__(self, n: int, deadline: float):
        self.universe = list(all_fcharts(n))
        self.size = len(self.universe)
        index = {u: i for i, u in enumerate(self.universe)}
        self.inv_of = [index[fchart_invert(u)] for u in self.universe]
        self.factors: list[list[tuple[int, int]]] = [[] for _ in range(self.size)]
        for a, ua in enumerate(self.universe):
            for b, ub in enumerate(self.universe):
                self.factors[index[fchart_compose(ua, ub)]].append((a, b))
        self.deadline = deadline
        self.timed_out = False
        self.found: list[int] = []

    def run(self) -> list[int]:
        forbid = 0
        for z in range(self.size):
            self._dfs(1 << z, forbid, set())
            forbid |= 1 << z
            if self.timed_out:
                break
        return [
            m
            for m in self.found
            if not any(o != m and o & ~m == 0 for o in self.found)
        ]

    def _dfs(self, cbits: int, forbid: int, visited: set) -> None:
        if self.timed_out or time.monotonic() > self.deadline:
            self.timed_out = True
            return
        if cbits in visited:
            return
        visited.add(cbits)
        for m in self.found:
            if m & ~cbits == 0:
                return
        branch = None
        for c in _bit_indices(cbits):
            for a, b in self.factors[c]:
                if cbits >> a & 1 or cbits >> b & 1:
                    continue
                a_open = not forbid >> a & 1
                b_open = not forbid >> b & 1
                if a_open and b_open and a != b:
                    if branch is None:
                        branch = (a, b)
                    continue
                if a_open:
                    self._dfs(cbits | 1 << a, forbid, visited)
                elif b_open:
                    self._dfs(cbits | 1 << b, forbid, visited)
                return
        if branch is None:
            self.found.append(cbits)
            return
        a, b = branch
        self._dfs(cbits | 1 << a, forbid, visited)
        self._dfs(cbits | 1 << b, forbid, visited)


def _bit_indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _complete_by_minimal_complements(n: int, budget_ms: int) -> SearchResult:
    deadline = time.monotonic() + budget_ms / 1000.0
    search = _ComplementSearch(n, deadline)
    minimal = search.run()
    universe = search.universe
    full = (1 << search.size) - 1
    sets = sorted(
        (
            frozenset(universe[i] for i in _bit_indices(full ^ m))
            for m in minimal
            if m != full
        ),
        key=_set_key,
    )
    # Maximal inverse-closed subsemigroups are the maximal elements among
    # the intersections of each maximal subsemigroup with its inverse.
    inv_candidates = set()
    for m in minimal:
        cinv = 0
        for i in _bit_indices(m):
            cinv |= 1 << search.inv_of[i]
        inv_candidates.add(full & ~(m | cinv))
    inv_masks = [
        v
        for v in inv_candidates
        if not any(o != v and v & ~o == 0 for o in inv_candidates)
    ]
    inverse = sorted(
        (frozenset(universe[i] for i in _bit_indices(v)) for v in inv_masks),
        key=_set_key,
    )
    note = "budget exhausted; results may be incomplete" if search.timed_out else ""
    return SearchResult(n, not search.timed_out, sets, inverse, note)




# -- Text format -----------------------------------------------------------------


def render_fchart(u) -> str:
    return "[" + ",".join("_" if y is None else str(y) for y in u) + "]"


def parse_fchart(text: str) -> FChart:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ParseError(f"finite chart literal needs brackets: {text!r}")
    body = t[1:-1].strip()
    if not body:
        raise ParseError("empty finite chart literal; use [_] style instead")
    entries = []
    for tok in body.split(","):
        tok = tok.strip()
        if tok == "_":
            entries.append(None)
        elif tok.isdigit():
            entries.append(int(tok))
        else:
            raise ParseError(f"bad entry {tok!r} in finite chart literal")
    u = tuple(entries)
    if not is_fchart(u):
        raise ParseError(f"not an injective partial map: {text!r}")
    return u
