"""Finite partitions of the naturals into infinite blocks, the induced
action of charts on blocks, and the constructions that steer it.

A chart f induces a binary relation on block indices: i relates to j
when infinitely many points of block i land in block j under f.  The
relation of a product is contained in the product of the relations, and
``padding_perm`` produces a block-preserving permutation a that makes
the containment an equality for a given pair: rel(f*a*g) = rel(f)rel(g).

``defect_spreader`` turns a total chart with missing points into one
whose missing points meet every block as much as possible, and
``block_evader`` combines everything to funnel the image of a total
chart into a single block using only block-respecting helpers plus two
supplied charts whose relations are not permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import gcd

from .cardinal import ALEPH0, Card, card_cmp, fin
from .chart import (
    Chart,
    bijection_between,
    chart_union,
    compose,
    defect_of,
    dom_set,
    extend_to_bijection,
    identity_on,
    im_set,
    image_of_set,
    is_total,
    preimage_of_set,
    stats,
)
from .epset import EPSet, NATURALS, residue_class, union_all
from .errors import ParameterError, ParseError, ResourceGuardError


# -- Partitions -------------------------------------------------------------------


@dataclass(frozen=True)
class FinPartition:
    """A partition of the naturals into finitely many infinite pieces, each
    eventually periodic.  ``modulus`` is set when the blocks are exactly the
    residue classes modulo n, which unlocks a fast arithmetic path."""

    blocks: tuple[EPSet, ...]
    modulus: int | None = None

    @property
    def n(self) -> int:
        return len(self.blocks)

    def block_of(self, x: int) -> int:
        if self.modulus is not None:
            return x % self.modulus
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise ParameterError(f"{x} lies in no block; partition is broken")


@lru_cache(maxsize=32)
def mod_partition(n: int) -> FinPartition:
    if n < 2:
        raise ParameterError("a block partition needs at least two blocks")
    return FinPartition(tuple(residue_class(i, n) for i in range(n)), n)


def make_partition(blocks) -> FinPartition:
    blocks = tuple(blocks)
    if len(blocks) < 2:
        raise ParameterError("a block partition needs at least two blocks")
    for i, b in enumerate(blocks):
        if not b.is_moiety():
            raise ParameterError(f"block {i} is not both infinite and co-infinite")
    for i, b in enumerate(blocks):
        for c in blocks[i + 1:]:
            if not b.intersect(c).is_empty():
                raise ParameterError("blocks overlap")
    if union_all(blocks) != NATURALS:
        raise ParameterError("blocks do not cover the naturals")
    n = len(blocks)
    if blocks == tuple(residue_class(i, n) for i in range(n)):
        return FinPartition(blocks, n)
    return FinPartition(blocks, None)


def render_partition(p: FinPartition) -> str:
    if p.modulus is not None:
        return f"part mod {p.modulus}"
    from .epset import render_epset

    return "part blocks " + " | ".join(render_epset(b) for b in p.blocks)


def parse_partition(text: str) -> FinPartition:
    t = text.strip()
    if not t.startswith("part "):
        raise ParseError(f"partition literal must start with 'part': {text!r}")
    body = t[5:].strip()
    if body.startswith("mod "):
        arg = body[4:].strip()
        if not arg.isdigit() or int(arg) < 2:
            raise ParseError(f"modulus must be an integer >= 2: {text!r}")
        return mod_partition(int(arg))
    if body.startswith("blocks "):
        from .epset import parse_epset

        parts = [parse_epset(chunk.strip()) for chunk in body[7:].split("|")]
        try:
            return make_partition(parts)
        except ParameterError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown partition form in {text!r}")


# -- Block relations ---------------------------------------------------------------


@dataclass(frozen=True)
class BinRel:
    """A binary relation on {0..n-1}, one bitmask row per left index."""

    n: int
    rows: tuple[int, ...]

    def pairs(self) -> frozenset:
        return frozenset(
            (i, j) for i in range(self.n) for j in range(self.n) if self.rows[i] >> j & 1
        )

    def __contains__(self, pair) -> bool:
        i, j = pair
        return 0 <= i < self.n and 0 <= j < self.n and bool(self.rows[i] >> j & 1)


def rel_from_pairs(n: int, pairs) -> BinRel:
    rows = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise ParameterError(f"pair ({i},{j}) out of range for n={n}")
        rows[i] |= 1 << j
    return BinRel(n, tuple(rows))


def rel_identity(n: int) -> BinRel:
    return BinRel(n, tuple(1 << i for i in range(n)))


def rel_full(n: int) -> BinRel:
    return BinRel(n, ((1 << n) - 1,) * n)


def rel_compose(r: BinRel, s: BinRel) -> BinRel:
    if r.n != s.n:
        raise ParameterError("relation sizes differ")
    rows = []
    for mask in r.rows:
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= s.rows[low.bit_length() - 1]
            m ^= low
        rows.append(out)
    return BinRel(r.n, tuple(rows))


def rel_converse(r: BinRel) -> BinRel:
    rows = [0] * r.n
    for i in range(r.n):
        for j in range(r.n):
            if r.rows[i] >> j & 1:
                rows[j] |= 1 << i
    return BinRel(r.n, tuple(rows))


def rel_dom_full(r: BinRel) -> bool:
    return all(row for row in r.rows)


def rel_im_full(r: BinRel) -> bool:
    acc = 0
    for row in r.rows:
        acc |= row
    return acc == (1 << r.n) - 1


def rel_is_perm(r: BinRel) -> bool:
    seen = 0
    for row in r.rows:
        if row == 0 or row & (row - 1):
            return False
        if seen & row:
            return False
        seen |= row
    return True


def perm_rel(pi) -> BinRel:
    return BinRel(len(pi), tuple(1 << pi[i] for i in range(len(pi))))


def render_rel(r: BinRel) -> str:
    inner = ",".join(f"({i},{j})" for i, j in sorted(r.pairs()))
    return f"rel n={r.n} {{{inner}}}"


def parse_rel(text: str) -> BinRel:
    t = text.strip()
    if not t.startswith("rel "):
        raise ParseError(f"relation literal must start with 'rel': {text!r}")
    body = t[4:].strip()
    if not body.startswith("n="):
        raise ParseError(f"relation literal needs n=<size>: {text!r}")
    head, _, rest = body.partition("{")
    n_text = head[2:].strip()
    if not n_text.isdigit() or int(n_text) < 1:
        raise ParseError(f"bad relation size in {text!r}")
    n = int(n_text)
    if not rest.endswith("}"):
        raise ParseError(f"relation literal needs braces: {text!r}")
    inner = rest[:-1].strip()
    pairs = []
    if inner:
        for chunk in inner.replace("(", " ").split(")"):
            chunk = chunk.strip().strip(",").strip()
            if not chunk:
                continue
            try:
                i, j = (int(v) for v in chunk.split(","))
            except ValueError as exc:
                raise ParseError(f"bad pair {chunk!r} in {text!r}") from exc
            pairs.append((i, j))
    try:
        return rel_from_pairs(n, pairs)
    except ParameterError as exc:
        raise ParseError(str(exc)) from exc


# -- The action ---------------------------------------------------------------------


@lru_cache(maxsize=65536)
def rho_of(p: FinPartition, f: Chart) -> BinRel:
    """The relation: block i touches block j when infinitely many points of
    block i are mapped into block j."""
    if p.modulus is not None:
        return _rho_mod(p.modulus, f)
    rows = [0] * p.n
    for i, b in enumerate(p.blocks):
        img = image_of_set(f, b)
        for j, c in enumerate(p.blocks):
            if img.intersect(c).card() == ALEPH0:
                rows[i] |= 1 << j
    return BinRel(p.n, tuple(rows))


def _rho_mod(n: int, f: Chart) -> BinRel:
    rows = [0] * n
    for piece in f.pieces:
        a, q = piece.src.first, piece.src.step
        b, q2 = piece.dst.first, piece.dst.step
        g = gcd(q, n)
        step_t = n // g
        inv = pow(q // g, -1, step_t) if step_t > 1 else 0
        for i in range(n):
            if (i - a) % g:
                continue
            t0 = ((i - a) // g % step_t) * inv % step_t if step_t > 1 else 0
            for u in range(n):
                j = (b + q2 * (t0 + step_t * u)) % n
                rows[i % n] |= 1 << j
    return BinRel(n, tuple(rows))


def block_stabilises(p: FinPartition, f: Chart) -> bool:
    """Does the permutation f map every block onto a block?"""
    from .chart import is_permutation

    if not is_permutation(f):
        return False
    targets = []
    for b in p.blocks:
        img = image_of_set(f, b)
        try:
            targets.append(p.blocks.index(img))
        except ValueError:
            return False
    return sorted(targets) == list(range(p.n))


def almost_block_stabilises(p: FinPartition, f: Chart) -> bool:
    """Does the permutation f map every block onto a block up to finitely
    many points?"""
    from .chart import is_permutation

    if not is_permutation(f):
        return False
    targets = []
    for b in p.blocks:
        img = image_of_set(f, b)
        hit = None
        for j, c in enumerate(p.blocks):
            if img.difference(c).union(c.difference(img)).card().finite:
                hit = j
                break
        if hit is None:
            return False
        targets.append(hit)
    return sorted(targets) == list(range(p.n))


def block_shuffle(p: FinPartition, pi) -> Chart:
    """The permutation sending block i onto block pi[i] monotonically."""
    if sorted(pi) != list(range(p.n)):
        raise ParameterError(f"{pi} is not a permutation of 0..{p.n - 1}")
    parts = [bijection_between(p.blocks[i], p.blocks[pi[i]]) for i in range(p.n)]
    return chart_union(*parts)


# -- Padding -----------------------------------------------------------------------


def padding_perm(p: FinPartition, f: Chart, g: Chart) -> Chart:
    """A block-preserving permutation a with rel(f*a*g) = rel(f)rel(g).

    Within each middle block m, a moiety of what f delivers from block j is
    rerouted into what g will carry on to block k, for every (j, k) that the
    composite relation requires; the remainder of the block is shuffled onto
    itself.  The identity rel(f*a*g) = rel(f)rel(g) is asserted before
    returning.
    """
    rf, rg = rho_of(p, f), rho_of(p, g)
    pieces = []
    for m in range(p.n):
        block = p.blocks[m]
        js = [j for j in range(p.n) if rf.rows[j] >> m & 1]
        ks = [k for k in range(p.n) if rg.rows[m] >> k & 1]
        used_src: list[EPSet] = []
        used_dst: list[EPSet] = []
        if js and ks:
            incoming = {
                j: image_of_set(f, p.blocks[j]).intersect(block).split(len(ks) + 1)
                for j in js
            }
            outgoing = {
                k: preimage_of_set(g, p.blocks[k]).intersect(block).split(len(js) + 1)
                for k in ks
            }
            for ji, j in enumerate(js):
                for ki, k in enumerate(ks):
                    src = incoming[j][ki]
                    dst = outgoing[k][ji]
                    pieces.append(bijection_between(src, dst))
                    used_src.append(src)
                    used_dst.append(dst)
        rest_src = block
        for s in used_src:
            rest_src = rest_src.difference(s)
        rest_dst = block
        for s in used_dst:
            rest_dst = rest_dst.difference(s)
        pieces.append(bijection_between(rest_src, rest_dst))
    a = chart_union(*pieces)
    want = rel_compose(rf, rg)
    got = rho_of(p, compose(compose(f, a), g))
    if got != want:
        raise ParameterError("internal error: padding permutation missed its target")
    return a


# -- Spreading defect --------------------------------------------------------------


@dataclass(frozen=True)
class FactoredChart:
    """A chart together with the word of factors that produced it."""

    chart: Chart
    word: tuple  # of (label, Chart)

    def replay(self) -> Chart:
        acc = None
        for _, c in self.word:
            acc = c if acc is None else compose(acc, c)
        return acc


def defect_spreader(p: FinPartition, f: Chart) -> FactoredChart:
    """From a total chart with missing points, build a word in f and
    block-preserving permutations whose value misses at least defect(f)
    points inside every block."""
    if not is_total(f):
        raise ParameterError("defect spreading needs a total chart")
    delta = defect_of(f)
    if delta == fin(0):
        raise ParameterError("the chart is surjective; there is nothing to spread")

    if delta.infinite:
        word = [("gen", f)]
    else:
        word = [("gen", f)] * p.n
    w = _replay(word)

    for i in range(p.n):
        if card_cmp(_missing_card(p, w, i), delta) >= 0:
            continue
        s = _donor_block(p, w, delta)
        pre_i = preimage_of_set(w, p.blocks[i])
        j = next(
            k for k in range(p.n)
            if pre_i.intersect(p.blocks[k]).card() == ALEPH0
        )
        src_pool = p.blocks[s].difference(im_set(w))
        dst_pool = pre_i.intersect(p.blocks[j])
        if delta.infinite:
            src_pts = src_pool.split(2)[0]
            dst_pts = dst_pool.split(2)[0]
        else:
            src_pts = src_pool.take_first(delta.value)
            dst_pts = dst_pool.take_first(delta.value)
        q = bijection_between(src_pts, dst_pts)
        if s == j:
            mover = extend_to_bijection(q, p.blocks[s], p.blocks[s])
            others = [identity_on(p.blocks[m]) for m in range(p.n) if m != s]
        else:
            back = bijection_between(p.blocks[j], p.blocks[s])
            mover = chart_union(
                extend_to_bijection(q, p.blocks[s], p.blocks[j]), back
            )
            others = [identity_on(p.blocks[m]) for m in range(p.n) if m not in (s, j)]
        a = chart_union(mover, *others)
        word = word + [("stab", a)] + word
        w = compose(compose(w, a), w)

    for i in range(p.n):
        if card_cmp(_missing_card(p, w, i), delta) < 0:
            raise ParameterError("internal error: spreading left a block short")
    return FactoredChart(w, tuple(word))


def _replay(word) -> Chart:
    acc = None
    for _, c in word:
        acc = c if acc is None else compose(acc, c)
    return acc


def _missing_card(p: FinPartition, w: Chart, i: int) -> Card:
    return p.blocks[i].difference(im_set(w)).card()


def _donor_block(p: FinPartition, w: Chart, delta: Card) -> int:
    for s in range(p.n):
        if card_cmp(_missing_card(p, w, s), delta) >= 0:
            return s
    raise ParameterError("internal error: no block holds enough missing points")


# -- Word search in the relation monoid ----------------------------------------------


def full_relation_word(n: int, rho: BinRel, sigma: BinRel):
    """A word over {rho, sigma} and the permutation relations whose product
    is the full relation, found by breadth-first search; None if the
    generated subsemigroup misses the full relation."""
    if n > 5:
        raise ResourceGuardError("relation word search supports n <= 5")
    gens: list[tuple] = [("g", rho), ("h", sigma)]
    for pi in permutations(range(n)):
        gens.append((("perm", pi), perm_rel(pi)))
    target = rel_full(n)
    start: dict[BinRel, tuple] = {}
    for label, r in gens:
        if r not in start:
            start[r] = (label,)
    frontier = dict(start)
    seen = dict(start)
    while frontier:
        if target in seen:
            break
        fresh: dict[BinRel, tuple] = {}
        for r, word in frontier.items():
            for label, gen in gens:
                nxt = rel_compose(r, gen)
                if nxt not in seen and nxt not in fresh:
                    fresh[nxt] = word + (label,)
        seen.update(fresh)
        frontier = fresh
    return seen.get(target)


def nxn_closure_check(n: int, rho: BinRel, sigma: BinRel) -> bool:
    """Does the semigroup generated by the permutation relations together
    with rho (full domain, not a permutation) and sigma (full image, not a
    permutation) contain the full relation?"""
    if not (rel_dom_full(rho) and not rel_is_perm(rho)):
        raise ParameterError("rho must have full domain and not be a permutation")
    if not (rel_im_full(sigma) and not rel_is_perm(sigma)):
        raise ParameterError("sigma must have full image and not be a permutation")
    return full_relation_word(n, rho, sigma) is not None


def all_relations(n: int) -> list[BinRel]:
    if n > 3:
        raise ResourceGuardError("relation enumeration supports n <= 3")
    out = []
    for code in range(1 << (n * n)):
        rows = tuple((code >> (n * i)) & ((1 << n) - 1) for i in range(n))
        out.append(BinRel(n, rows))
    return out


def canonical_rel(r: BinRel) -> BinRel:
    """Least representative of r under relabelling rows and columns by
    permutations (two-sided symmetric group action)."""
    best = None
    for pi in permutations(range(r.n)):
        permuted_cols = []
        for row in r.rows:
            out = 0
            for j in range(r.n):
                if row >> j & 1:
                    out |= 1 << pi[j]
            permuted_cols.append(out)
        for tau in permutations(range(r.n)):
            rows = tuple(permuted_cols[tau[i]] for i in range(r.n))
            if best is None or rows < best:
                best = rows
    return BinRel(r.n, best)


# -- Evading the block action ---------------------------------------------------------


def block_evader(p: FinPartition, f: Chart, g: Chart, h: Chart) -> FactoredChart:
    """A word in f, g, h and block-preserving permutations whose value is a
    total chart with image inside block 0.

    Requirements: f is total with infinitely many points missing from its
    image; rel(g) has full domain but is not a permutation; rel(h) has full
    image but is not a permutation.  The word is assembled in three moves:
    spread f's missing points across all blocks, realise a relation word
    whose product is the full relation by inserting padding permutations,
    then align the spread image with the full-relation chart.
    """
    if not is_total(f):
        raise ParameterError("f must be total")
    if defect_of(f) != ALEPH0:
        raise ParameterError(
            "f must miss infinitely many points: finite defect can never be "
            "funnelled into one block, since composing charts only adds defects"
        )
    rg, rh = rho_of(p, g), rho_of(p, h)
    if rel_is_perm(rg) or not rel_dom_full(rg):
        raise ParameterError(
            "g must act on blocks with full domain and not as a permutation"
        )
    if rel_is_perm(rh) or not rel_im_full(rh):
        raise ParameterError(
            "h must act on blocks with full image and not as a permutation"
        )

    spread = defect_spreader(p, f)

    tokens = full_relation_word(p.n, rg, rh)
    if tokens is None:
        raise ParameterError(
            "the block relations of g and h do not generate the full relation"
        )
    t, t_word = _realize_word(p, tokens, g, h)
    if rho_of(p, t) != rel_full(p.n):
        raise ParameterError("internal error: realised word misses the full relation")

    aligner = _image_aligner(p, spread.chart, t)
    result = compose(compose(spread.chart, aligner), t)
    word = spread.word + (("stab", aligner),) + t_word
    if not is_total(result):
        raise ParameterError("internal error: evader output is not total")
    if not im_set(result).is_subset(p.blocks[0]):
        raise ParameterError("internal error: evader image escapes block 0")
    return FactoredChart(result, word)


def _token_chart(p: FinPartition, token, g: Chart, h: Chart) -> tuple[str, Chart]:
    if token == "g":
        return ("g", g)
    if token == "h":
        return ("h", h)
    kind, pi = token
    if kind != "perm":
        raise ParameterError(f"unknown token {token!r}")
    return ("stab", block_shuffle(p, pi))


def _realize_word(p: FinPartition, tokens, g: Chart, h: Chart):
    label, chart = _token_chart(p, tokens[0], g, h)
    word = [(label, chart)]
    acc = chart
    acc_rel = rho_of(p, chart)
    for token in tokens[1:]:
        label, nxt = _token_chart(p, token, g, h)
        pad = padding_perm(p, acc, nxt)
        word.append(("stab", pad))
        word.append((label, nxt))
        acc = compose(compose(acc, pad), nxt)
        acc_rel = rel_compose(acc_rel, rho_of(p, nxt))
        if rho_of(p, acc) != acc_rel:
            raise ParameterError("internal error: padding lost the relation product")
    return acc, tuple(word)


def _image_aligner(p: FinPartition, w: Chart, t: Chart) -> Chart:
    """A block-preserving permutation carrying the image of w into the part
    of each block that t sends into block 0."""
    funnel = preimage_of_set(t, p.blocks[0])
    pieces = []
    for m in range(p.n):
        block = p.blocks[m]
        have = im_set(w).intersect(block)
        pool = funnel.intersect(block)
        if pool.card() != ALEPH0:
            raise ParameterError(
                "internal error: a block has no room to reach block 0"
            )
        if have.card() == ALEPH0:
            target = pool.split(2)[0]
        else:
            target = pool.take_first(len(have.low))
        pieces.append(
            extend_to_bijection(bijection_between(have, target), block, block)
        )
    return chart_union(*pieces)
