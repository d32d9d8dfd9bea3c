"""Groebner-basis engine: the decision procedures behind the geometry.

Ideal membership, unit-ideal emptiness tests, elimination, saturation,
Krull dimension via leading-term independent sets, and subalgebra
membership all reduce to reduced Groebner bases computed by Buchberger's
algorithm with the product and chain pair-discarding criteria and the
normal selection strategy (smallest lcm first).  Output is deterministic
for fixed input and order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import (
    ParseError,
    ResourceCapError,
    RingMismatchError,
    UnitIdealError,
    ZeroPolynomialError,
)
from .poly import Polynomial, VarSet, fresh_names, grevlex_key, parse, scan_identifiers

# -- term orders ---------------------------------------------------------------


@dataclass(frozen=True)
class TermOrder:
    """Multiplication-compatible total order on monomials with 1 minimal.

    kind is one of "grevlex", "lex", "block"; a block(k) order compares
    the first k exponents grevlex-first (so it eliminates those
    variables), then the rest grevlex.
    """

    kind: str
    block_size: int = 0

    @staticmethod
    def grevlex() -> "TermOrder":
        return TermOrder("grevlex")

    @staticmethod
    def lex() -> "TermOrder":
        return TermOrder("lex")

    @staticmethod
    def block(k: int) -> "TermOrder":
        if k < 0:
            raise ValueError("block size must be nonnegative")
        return TermOrder("block", k)

    def key(self, exps):
        """Sort key: larger key means larger monomial."""
        if self.kind == "grevlex":
            return grevlex_key(exps)
        if self.kind == "lex":
            return exps
        k = self.block_size
        return (grevlex_key(exps[:k]), grevlex_key(exps[k:]))


# -- ideals and bases ----------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    """Finitely generated ideal; zero generators are dropped unless that
    would empty the list."""

    ring: VarSet
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        for g in gens:
            if g.ring != self.ring:
                raise RingMismatchError("generator ring differs from ideal ring")
        nonzero = tuple(g for g in gens if not g.is_zero())
        object.__setattr__(self, "generators", nonzero or (self.ring.zero(),))

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError("cannot sum ideals over different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced basis (monic, pairwise irreducible) of `source` under `order`."""

    order: TermOrder
    basis: tuple
    source: Ideal


@dataclass(frozen=True)
class ResourceCaps:
    """Budget converting runaway computations into clean errors."""

    max_pairs: int = 100_000
    max_degree: int = 60


DEFAULT_CAPS = ResourceCaps()


# -- low-level monomial helpers (dense exponent tuples) -------------------------


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _reduce_full(work: dict, basis: list, lms: list, key) -> dict:
    """Full normal form of the term dict `work` against monic `basis`."""
    remainder: dict = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for g, lm in zip(basis, lms):
            if _divides(lm, m):
                shift = _sub(m, lm)
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    t = _mul(shift, gm)
                    val = work.get(t, 0) - c * gc
                    if val:
                        work[t] = val
                    else:
                        work.pop(t, None)
                break
        else:
            remainder[m] = c
    return remainder


def _spoly(f: dict, lmf, g: dict, lmg) -> dict:
    """S-polynomial of two monic term dicts."""
    l = _lcm(lmf, lmg)
    sf, sg = _sub(l, lmf), _sub(l, lmg)
    terms: dict = {}
    for m, c in f.items():
        terms[_mul(sf, m)] = c
    for m, c in g.items():
        t = _mul(sg, m)
        val = terms.get(t, 0) - c
        if val:
            terms[t] = val
        else:
            del terms[t]
    return terms


def buchberger(ideal: Ideal, order: Optional[TermOrder] = None,
               caps: ResourceCaps = DEFAULT_CAPS) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal, deterministic for fixed input."""
    order = order or TermOrder.grevlex()
    key = order.key
    seeds = [g for g in ideal.generators if not g.is_zero()]
    if not seeds:
        return GroebnerBasis(order, (), ideal)

    basis: list = []
    lms: list = []

    def append(term_dict: dict):
        lm = max(term_dict, key=key)
        lc = term_dict[lm]
        basis.append({m: c / lc for m, c in term_dict.items()})
        lms.append(lm)

    heap: list = []
    pending = set()

    def push_pairs(j: int):
        for i in range(j):
            heapq.heappush(heap, (key(_lcm(lms[i], lms[j])), i, j))
            pending.add((i, j))

    for g in seeds:
        reduced = _reduce_full(dict(g.terms), basis, lms, key)
        if reduced:
            append(reduced)
            push_pairs(len(basis) - 1)

    processed = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        processed += 1
        if processed > caps.max_pairs:
            raise ResourceCapError(f"pair budget {caps.max_pairs} exhausted")
        l = _lcm(lms[i], lms[j])
        if l == _mul(lms[i], lms[j]):
            continue  # coprime leading terms: S-polynomial reduces to zero
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(lms[k], l):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True  # chain criterion: both companion pairs treated
                break
        if skip:
            continue
        reduced = _reduce_full(_spoly(basis[i], lms[i], basis[j], lms[j]), basis, lms, key)
        if not reduced:
            continue
        if max(sum(m) for m in reduced) > caps.max_degree:
            raise ResourceCapError(f"degree budget {caps.max_degree} exhausted")
        append(reduced)
        push_pairs(len(basis) - 1)

    # Minimalize: keep only elements whose leading monomial no other kept
    # leading monomial divides; process in ascending order for determinism.
    ordering = sorted(range(len(basis)), key=lambda t: (key(lms[t]), t))
    kept: list = []
    for idx in ordering:
        if not any(_divides(lms[k], lms[idx]) for k in kept):
            kept.append(idx)

    # Tail-reduce every survivor against the others; leading terms are
    # pairwise irreducible so monicity and leading monomials are preserved.
    final = []
    for idx in kept:
        others = [basis[k] for k in kept if k != idx]
        other_lms = [lms[k] for k in kept if k != idx]
        final.append((_reduce_full(dict(basis[idx]), others, other_lms, key), lms[idx]))
    final.sort(key=lambda pair: key(pair[1]))
    polys = tuple(Polynomial(ideal.ring, terms) for terms, _ in final)
    return GroebnerBasis(order, polys, ideal)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Unique remainder of f modulo the basis; zero iff f is a member."""
    if f.ring != gb.source.ring:
        raise RingMismatchError("polynomial ring differs from basis ring")
    key = gb.order.key
    basis = [dict(g.terms) for g in gb.basis]
    lms = [max(g.terms, key=key) for g in gb.basis]
    return Polynomial(f.ring, _reduce_full(dict(f.terms), basis, lms, key))


def ideal_membership(f: Polynomial, ideal: Ideal,
                     caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """True iff f lies in the ideal."""
    return normal_form(f, buchberger(ideal, caps=caps)).is_zero()


def is_unit_ideal(ideal: Ideal, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """True iff the reduced basis is [1], i.e. the vanishing set is empty."""
    gb = buchberger(ideal, caps=caps)
    return len(gb.basis) == 1 and gb.basis[0] == 1


def divide_exact(p: Polynomial, d: Polynomial) -> Optional[Polynomial]:
    """Quotient p/d when d divides p exactly (grevlex division), else None."""
    if d.is_zero():
        raise ZeroPolynomialError("division by the zero polynomial")
    key = grevlex_key
    dterms = d.terms
    dlm = max(dterms, key=key)
    dlc = dterms[dlm]
    work = dict(p.terms)
    quotient: dict = {}
    while work:
        m = max(work, key=key)
        if not _divides(dlm, m):
            return None
        c = work.pop(m) / dlc
        shift = _sub(m, dlm)
        quotient[shift] = c
        for gm, gc in dterms.items():
            if gm == dlm:
                continue
            t = _mul(shift, gm)
            val = work.get(t, 0) - c * gc
            if val:
                work[t] = val
            else:
                work.pop(t, None)
    return Polynomial(p.ring, quotient)


# -- elimination, saturation, dimension -----------------------------------------


def eliminate(ideal: Ideal, first_k: int,
              caps: ResourceCaps = DEFAULT_CAPS) -> Ideal:
    """Generators of the intersection with the subring dropping the first
    k variables, via a block-order basis."""
    if not 0 <= first_k <= len(ideal.ring):
        raise ValueError("elimination count out of range")
    gb = buchberger(ideal, TermOrder.block(first_k), caps=caps)
    small = ideal.ring.drop_first(first_k)
    kept = []
    for g in gb.basis:
        if all(all(e == 0 for e in exps[:first_k]) for exps in g.terms):
            kept.append(Polynomial(small, {exps[first_k:]: c for exps, c in g.terms.items()}))
    if not kept:
        kept = [small.zero()]
    return Ideal(small, tuple(kept))


def saturate(ideal: Ideal, f: Polynomial,
             caps: ResourceCaps = DEFAULT_CAPS) -> Ideal:
    """The saturation (ideal : f^infinity) by the tag-variable trick:
    adjoin y, add 1 - y*f, eliminate y."""
    if f.is_zero():
        raise ZeroPolynomialError("cannot saturate by the zero polynomial")
    if f.ring != ideal.ring:
        raise RingMismatchError("saturating polynomial over the wrong ring")
    tag = fresh_names("y", 1, ideal.ring.names)[0]
    big = VarSet((tag,) + ideal.ring.names)
    gens = [g.embed(big) for g in ideal.generators]
    gens.append(big.one() - big.var(tag) * f.embed(big))
    return eliminate(Ideal(big, tuple(gens)), 1, caps=caps)


def krull_dimension(ideal: Ideal, caps: ResourceCaps = DEFAULT_CAPS) -> int:
    """Dimension of the vanishing set by the standard independent-set
    criterion on the leading-term ideal."""
    gb = buchberger(ideal, caps=caps)
    if len(gb.basis) == 1 and gb.basis[0] == 1:
        raise UnitIdealError("the empty set has no dimension")
    n = len(ideal.ring)
    key = gb.order.key
    supports = []
    for g in gb.basis:
        lm = max(g.terms, key=key)
        supports.append(frozenset(i for i, e in enumerate(lm) if e))
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if all(not support <= chosen for support in supports):
                return size
    raise AssertionError("unreachable: the empty set is always independent")


def subalgebra_membership(f: Polynomial, gens: Sequence[Polynomial],
                          caps: ResourceCaps = DEFAULT_CAPS):
    """Decide membership in the subalgebra generated by `gens`.

    Tag variables y_i are adjoined with relations y_i - gens_i; under a
    block order eliminating the original variables the normal form of f
    mentions only tags exactly when f is a member.  Returns (flag,
    witness) where the witness is that tag polynomial over y1..ym.
    """
    ring = f.ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("subalgebra generators over the wrong ring")
    internal = fresh_names("y", len(gens), ring.names)
    big = ring.extend(internal)
    n = len(ring)
    relations = [big.var(t) - g.embed(big) for t, g in zip(internal, gens)]
    witness_ring = VarSet(tuple(f"y{i}" for i in range(1, len(gens) + 1)))
    if relations:
        gb = buchberger(Ideal(big, tuple(relations)), TermOrder.block(n), caps=caps)
        nf = normal_form(f.embed(big), gb)
    else:
        nf = f.embed(big)
    if any(any(e != 0 for e in exps[:n]) for exps in nf.terms):
        return False, None
    witness = Polynomial(witness_ring, {exps[n:]: c for exps, c in nf.terms.items()})
    return True, witness


# -- ideal files -----------------------------------------------------------------
#
# One polynomial per line; '#' starts a comment; the first non-comment line
# may be "vars: w1 w2 ..." declaring the ring, otherwise variables are
# inferred in order of first appearance.


def load_ideal_file(path: Union[str, Path]) -> Ideal:
    text = Path(path).read_text(encoding="utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("ideal file contains no polynomials", 0)
    if lines[0].startswith("vars:"):
        names = tuple(lines[0][len("vars:"):].split())
        lines = lines[1:]
    else:
        seen = []
        for line in lines:
            for name in scan_identifiers(line):
                if name not in seen:
                    seen.append(name)
        names = tuple(seen)
    ring = VarSet(names)
    if not lines:
        raise ParseError("ideal file declares variables but no polynomials", 0)
    return Ideal(ring, tuple(parse(line, ring) for line in lines))
