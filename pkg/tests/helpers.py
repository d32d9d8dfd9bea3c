"""Shared test utilities: random inputs and independent oracles.

The oracles deliberately take different routes from the library code:
univariate gcd by list-based Euclid, ideal membership by a bounded-degree
linear solve, Groebner bases and resultants via sympy.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from gaquot import Polynomial, VarSet


def random_exponents(rng, nvars, max_degree):
    budget = rng.randint(0, max_degree)
    exps = [0] * nvars
    for _ in range(budget):
        exps[rng.randrange(nvars)] += 1
    return tuple(exps)


def random_poly(rng, ring, max_degree=3, max_terms=4, coeff_bound=5,
                allow_zero=True, nonconstant=False):
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(-coeff_bound, coeff_bound)
        terms[random_exponents(rng, len(ring), max_degree)] = Fraction(coeff)
    poly = Polynomial(ring, terms)
    if not allow_zero and poly.is_zero():
        return ring.one()
    if nonconstant and poly.is_constant():
        return poly + ring.var(ring.names[rng.randrange(len(ring))])
    return poly


# -- sympy bridge -------------------------------------------------------------


def sympy_symbols(ring: VarSet):
    return sp.symbols(list(ring.names))


def to_sympy(p: Polynomial, syms=None):
    syms = syms or sympy_symbols(p.ring)
    expr = sp.Integer(0)
    for exps, coeff in p.terms.items():
        term = sp.Rational(coeff.numerator, coeff.denominator)
        for sym, e in zip(syms, exps):
            if e:
                term *= sym ** e
        expr += term
    return expr


def from_sympy(expr, ring: VarSet) -> Polynomial:
    syms = sympy_symbols(ring)
    poly = sp.Poly(expr, *syms, domain="QQ")
    terms = {}
    for exps, coeff in poly.terms():
        q = sp.Rational(coeff)
        terms[tuple(exps)] = Fraction(int(q.p), int(q.q))
    return Polynomial(ring, terms)


def sympy_reduced_gb(gens, ring: VarSet, order: str):
    """Reduced Groebner basis via sympy, as library polynomials."""
    syms = sympy_symbols(ring)
    exprs = [to_sympy(g, syms) for g in gens if not g.is_zero()]
    basis = sp.groebner(exprs, *syms, order=order, domain="QQ")
    return [from_sympy(b, ring) for b in basis.exprs]


def sympy_resultant(p: Polynomial, q: Polynomial, var: str,
                    target: VarSet) -> Polynomial:
    syms = sympy_symbols(p.ring)
    lookup = dict(zip(p.ring.names, syms))
    res = sp.resultant(to_sympy(p, syms), to_sympy(q, syms), lookup[var])
    return from_sympy(sp.expand(res), target)


def brute_ideal_membership(f: Polynomial, gens, degree_bound: int) -> bool:
    """Does f = sum h_i g_i admit a solution with deg(h_i g_i) <= bound?

    Solved as an exact linear system over the monomial coefficients of
    the h_i, a route independent of any normal-form computation: one
    column per (generator, cofactor monomial), one row per product
    monomial, solvable iff augmenting with f keeps the rank.
    """
    from sympy.polys.monomials import itermonomials

    ring = f.ring
    syms = sympy_symbols(ring)
    columns = []
    for g in gens:
        room = degree_bound - max(g.total_degree(), 0)
        if room < 0:
            continue
        gexpr = to_sympy(g, syms)
        for mono in sorted(itermonomials(syms, room), key=sp.default_sort_key):
            prod = sp.Poly(sp.expand(mono * gexpr), *syms, domain="QQ")
            columns.append({tuple(e): sp.Rational(c) for e, c in prod.terms()})
    if not columns:
        return f.is_zero()
    target = {e: sp.Rational(c.numerator, c.denominator) for e, c in f.terms.items()}
    rows = sorted(set().union(*[set(c) for c in columns]) | set(target))
    matrix = sp.Matrix([[col.get(r, sp.Integer(0)) for col in columns] for r in rows])
    rhs = sp.Matrix([[target.get(r, sp.Integer(0))] for r in rows])
    return matrix.rank() == matrix.row_join(rhs).rank()


def euclid_gcd_coeffs(a, b):
    """Monic gcd of univariate coefficient lists (ascending), by Euclid."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = trim(a), trim(b)
    while b:
        r = list(a)
        while len(trim(r)) >= len(b):
            r = trim(r)
            shift = len(r) - len(b)
            factor = r[-1] / b[-1]
            for i, c in enumerate(b):
                r[shift + i] -= factor * c
            r = trim(r)
            if not r:
                break
        a, b = b, trim(r)
    return [c / a[-1] for c in a] if a else []


def coeff_list(p: Polynomial, var: str):
    """Ascending coefficient list of a univariate polynomial."""
    deg = p.degree_in(var)
    out = [Fraction(0)] * (deg + 1)
    idx = p.ring.index(var)
    for exps, coeff in p.terms.items():
        out[exps[idx]] = coeff
    return out


def assert_same_subalgebra(gens_a, gens_b, caps=None):
    """Mutual subalgebra membership in both directions."""
    from gaquot import DEFAULT_CAPS, subalgebra_membership

    caps = caps or DEFAULT_CAPS
    for g in gens_a:
        member, _ = subalgebra_membership(g, list(gens_b), caps=caps)
        assert member, f"{g} not generated by {[str(x) for x in gens_b]}"
    for g in gens_b:
        member, _ = subalgebra_membership(g, list(gens_a), caps=caps)
        assert member, f"{g} not generated by {[str(x) for x in gens_a]}"
