"""Ultrafilter oracles on the naturals, and the filter-stabiliser test.

Two decidable families are provided:

* ``Principal(x)`` — sets containing the point x.
* ``ResidueTower(choices)`` — the nonprincipal family determined by a
  compatible residue choice at every prime power.  A tower is described
  by finitely many constraints ``p**a = r`` (one prime may appear with
  several exponents as long as the residues agree); every unmentioned
  prime defaults to residue 0.  A periodic set is accepted when its
  residues modulo its own period contain the tower's residue at that
  period; since eventually periodic sets are closed under the boolean
  operations and exactly one of S, complement(S) is accepted, this is an
  ultrafilter on the periodic algebra.

``stabilises_filter`` decides whether a permutation maps accepted sets
to accepted sets, and on failure produces an explicit accepted set with
rejected image.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .chart import Chart, dom_set, im_set, image_of_set, is_permutation
from .epset import (
    EPSet,
    NATURALS,
    Prog,
    from_finite,
    from_prog,
    make_epset,
)
from .errors import ParameterError, ParseError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class Principal:
    """The ultrafilter of all sets containing a fixed point."""

    point: int

    def __post_init__(self):
        if self.point < 0:
            raise ParameterError("principal point must be a natural number")


@dataclass(frozen=True)
class ResidueTower:
    """A compatible residue choice at each prime power; finitely many
    primes are non-zero.  ``choices`` maps prime -> (exponent, residue)
    with 0 < residue < prime**exponent."""

    choices: tuple[tuple[int, int, int], ...]  # (prime, exponent, residue)

    def __post_init__(self):
        seen = set()
        for p, a, r in self.choices:
            if not _is_prime(p):
                raise ParameterError(f"{p} is not prime")
            if a < 1:
                raise ParameterError(f"exponent must be >= 1, got {a}")
            if not 0 < r < p**a:
                raise ParameterError(
                    f"residue {r} out of range for {p}**{a} (0 means: omit the entry)"
                )
            if p in seen:
                raise ParameterError(f"prime {p} listed twice")
            seen.add(p)

    def residue_at(self, m: int) -> int:
        """The tower's residue modulo m, via the Chinese remainder theorem."""
        if m < 1:
            raise ParameterError("modulus must be positive")
        rem, mod = 0, 1
        chosen = {p: (a, r) for p, a, r in self.choices}
        for p, k in _factorize(m).items():
            pk = p**k
            if p in chosen:
                a, r = chosen[p]
                local = r % pk if k <= a else _lift_residue(r, p, a, k)
            else:
                local = 0
            # combine rem (mod mod) with local (mod pk)
            inv = pow(mod, -1, pk)
            rem = rem + mod * ((local - rem) * inv % pk)
            mod *= pk
        return rem % mod

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _, _ in self.choices)


def _lift_residue(r: int, p: int, a: int, k: int) -> int:
    """Residue mod p**k for k > a: higher digits default to zero, i.e. the
    tower point is the literal integer r at this prime."""
    del p, a, k
    return r


def make_tower(entries) -> ResidueTower:
    """Build a tower from (prime, exponent, residue) triples, merging
    multiple mentions of one prime after checking compatibility."""
    by_prime: dict[int, tuple[int, int]] = {}
    for p, a, r in entries:
        if not _is_prime(p):
            raise ParameterError(f"{p} is not prime")
        if a < 1:
            raise ParameterError(f"exponent must be >= 1, got {a}")
        r %= p**a
        if p in by_prime:
            a0, r0 = by_prime[p]
            hi, lo = max((a, r), (a0, r0)), min((a, r), (a0, r0))
            if hi[1] % p ** lo[0] != lo[1] % p ** lo[0]:
                raise ParameterError(
                    f"incompatible residues for prime {p}: "
                    f"{r0} mod {p}**{a0} vs {r} mod {p}**{a}"
                )
            by_prime[p] = hi
        else:
            by_prime[p] = (a, r)
    triples = tuple(
        sorted((p, a, r) for p, (a, r) in by_prime.items() if r % p**a != 0)
    )
    return ResidueTower(triples)


ZERO_TOWER = ResidueTower(())


# -- Membership ------------------------------------------------------------------


def uf_contains(f, s: EPSet) -> bool:
    """Does the oracle accept s?"""
    if isinstance(f, Principal):
        return f.point in s
    if isinstance(f, ResidueTower):
        if not s.residues:
            return False
        return f.residue_at(s.period) in s.residues
    raise ParameterError(f"unknown ultrafilter oracle {f!r}")


def uf_min(f):
    """Least cardinality of an accepted set."""
    from .cardinal import ALEPH0, fin

    if isinstance(f, Principal):
        return fin(1)
    if isinstance(f, ResidueTower):
        return ALEPH0
    raise ParameterError(f"unknown ultrafilter oracle {f!r}")


def is_principal(f) -> bool:
    return isinstance(f, Principal)


# -- Stabilisation ---------------------------------------------------------------


def stabilises_filter(f, c: Chart, check_witness: bool = True) -> tuple[bool, EPSet | None]:
    """Does the chart c map every accepted set to an accepted set?

    Returns (True, None) or (False, witness) where the witness is an
    accepted set whose image is rejected.  Witnesses are re-verified
    through the generic set-image machinery unless their period is too
    large to materialise.  For permutations the condition is equivalent to
    membership in the stabiliser subgroup.
    """
    if isinstance(f, Principal):
        x = f.point
        if x in dom_set(c) and c.apply(x) == x:
            return (True, None)
        return (False, from_finite([x]))
    if not isinstance(f, ResidueTower):
        raise ParameterError(f"unknown ultrafilter oracle {f!r}")

    dom = dom_set(c)
    if not uf_contains(f, dom):
        return (False, dom.complement())
    im = im_set(c)
    if not uf_contains(f, im):
        witness = NATURALS if dom == NATURALS else dom
        return (False, _checked(f, c, witness, check_witness))

    piece = _accepted_piece(f, c)
    if piece is None:
        # The accepted residue class sits inside the finite pair part; with
        # infinitely many accepted points that cannot happen for a chart.
        raise ParameterError("no infinite accepted piece found in the permutation")
    a, q = piece.src.first, piece.src.step
    b, q2 = piece.dst.first, piece.dst.step
    if q == q2:
        ok = a == b
    else:
        ok = not f.choices and q2 * a == q * b
    if ok:
        return (True, None)
    witness = _piece_witness(f, piece)
    return (False, _checked(f, c, witness, check_witness))


def _accepted_piece(f: ResidueTower, c: Chart):
    for piece in c.pieces:
        q = piece.src.step
        if f.residue_at(q) == piece.src.first % q:
            return piece
    return None


def _piece_witness(f: ResidueTower, piece) -> EPSet:
    """An accepted progression inside the accepted piece's source whose
    image is rejected.  Scans arithmetically over candidate moduli."""
    a, q = piece.src.first, piece.src.step
    b, q2 = piece.dst.first, piece.dst.step
    primes = set(_SMALL_PRIMES) | set(f.primes)
    drift = abs(q2 * a - q * b)
    if q == q2:
        drift = abs(b - a)
    if drift:
        primes |= set(_factorize(drift))
    bases = [lcm(q, q2) * j for j in range(1, 49)]
    for p in sorted(primes):
        pk = p
        while pk <= 10**6:
            bases.append(lcm(q, q2) * pk)
            pk *= p
    for base in sorted(set(bases)):
        big = lcm(base, q)
        z = f.residue_at(big)
        # First source point >= a in the accepted class mod big.
        x0 = z % big
        if (x0 - a) % q:
            continue  # not inside the piece's source class
        while x0 < a:
            x0 += big
        step_im = q2 * (big // q)
        y0 = b + q2 * ((x0 - a) // q)
        if f.residue_at(step_im) != y0 % step_im:
            return from_prog(Prog(x0, big))
    raise ParameterError(
        "stabilisation fails but no witness modulus was found within bounds"
    )


def _checked(f, c: Chart, witness: EPSet, check: bool) -> EPSet:
    if check and witness.period <= 100_000:
        if not uf_contains(f, witness):
            raise ParameterError("internal error: witness is not accepted")
        if uf_contains(f, image_of_set(c, witness)):
            raise ParameterError("internal error: witness image is accepted")
    return witness


# -- Text format -----------------------------------------------------------------


def render_uf(f) -> str:
    if isinstance(f, Principal):
        return f"uf principal {f.point}"
    if isinstance(f, ResidueTower):
        if not f.choices:
            return "uf tower []"
        inner = ", ".join(f"{p}^{a}={r}" for p, a, r in f.choices)
        return f"uf tower [{inner}]"
    raise ParameterError(f"unknown ultrafilter oracle {f!r}")


def parse_uf(text: str):
    t = text.strip()
    if not t.startswith("uf "):
        raise ParseError(f"ultrafilter literal must start with 'uf': {text!r}")
    body = t[3:].strip()
    if body.startswith("principal"):
        arg = body[len("principal"):].strip()
        if not arg.isdigit():
            raise ParseError(f"principal point must be a natural number: {text!r}")
        return Principal(int(arg))
    if body.startswith("tower"):
        arg = body[len("tower"):].strip()
        if not (arg.startswith("[") and arg.endswith("]")):
            raise ParseError(f"tower constraints need brackets: {text!r}")
        inner = arg[1:-1].strip()
        if not inner:
            return ZERO_TOWER
        entries = []
        for part in inner.split(","):
            part = part.strip()
            try:
                power, residue = part.split("=")
                p, a = power.strip().split("^")
                entries.append((int(p), int(a), int(residue)))
            except ValueError as exc:
                raise ParseError(f"bad tower entry {part!r}") from exc
        try:
            return make_tower(entries)
        except ParameterError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown ultrafilter kind in {text!r}")
