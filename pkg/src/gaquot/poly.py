"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero Fraction
coefficients, tied to an ordered variable set.  All arithmetic is exact;
no floating point appears anywhere.  Values are immutable after
construction and safe to share between threads.

Canonical form: zero coefficients are never stored, the zero polynomial
has an empty term map, and printing lists terms in descending
graded-reverse-lexicographic order, so equal polynomials print equally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    MissingAssignmentError,
    NotUnivariateError,
    ParseError,
    RingMismatchError,
    UnknownVariableError,
    ZeroPolynomialError,
)

# Exponent tuple, one entry per ring variable.  The abstract contract is
# "variable index -> positive exponent, absent = 0"; a dense tuple is the
# canonical realization of that map for the small rings used here.
Exponents = tuple

Scalar = Union[int, Fraction]

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def grevlex_key(exps: Exponents):
    """Sort key under which larger means grevlex-greater."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class VarSet:
    """Ordered, immutable collection of distinct variable names."""

    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _IDENT_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"variable {name!r} not in ring {self.names}") from None

    def var(self, name: str) -> "Polynomial":
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def const(self, value: Scalar) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self.names): Fraction(value)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def extend(self, extra: Iterable[str]) -> "VarSet":
        return VarSet(self.names + tuple(extra))

    def drop_first(self, k: int) -> "VarSet":
        return VarSet(self.names[k:])


def fresh_names(base: str, count: int, taken: Iterable[str]) -> tuple:
    """Deterministic batch of identifiers base1..baseN avoiding `taken`."""
    taken = set(taken)
    stem = base
    while True:
        names = tuple(f"{stem}{i}" for i in range(1, count + 1))
        if not any(n in taken for n in names):
            return names
        stem += base


class Polynomial:
    """Immutable sparse polynomial over a fixed VarSet."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: VarSet, terms: Mapping[Exponents, Scalar]):
        clean = {}
        width = len(ring)
        for exps, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if len(exps) != width:
                raise ValueError(f"exponent tuple {exps} has wrong arity for ring {ring.names}")
            clean[exps] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables(self) -> tuple:
        """Names of the variables actually occurring, in ring order."""
        used = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(i)
        return tuple(self.ring.names[i] for i in sorted(used))

    # -- ring arithmetic --------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"rings differ: {self.ring.names} vs {other.ring.names}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            val = terms.get(exps, 0) + coeff
            if val:
                terms[exps] = val
            else:
                terms.pop(exps, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                val = terms.get(key, 0) + c1 * c2
                if val:
                    terms[key] = val
                else:
                    del terms[key]
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    # -- calculus and substitution ----------------------------------------

    def partial(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to one ring variable."""
        i = self.ring.index(name)
        terms = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            key = exps[:i] + (e - 1,) + exps[i + 1 :]
            terms[key] = terms.get(key, 0) + coeff * e
        return Polynomial(self.ring, terms)

    def substitute(self, assignment: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Ring-homomorphism image under variable -> polynomial.

        Every variable occurring in self must be assigned; all images must
        share one target ring.
        """
        target = None
        for name in sorted(assignment, key=self.ring.index):  # rejects unknown keys
            image = assignment[name]
            if target is None:
                target = image.ring
            elif image.ring != target:
                raise RingMismatchError("substitution images live over different rings")
        occurring = self.variables()
        for name in occurring:
            if name not in assignment:
                raise MissingAssignmentError(f"no image for variable {name!r}")
        if target is None:
            target = self.ring  # empty assignment on a constant
        powers = {name: {0: target.one()} for name in occurring}

        def power(name: str, e: int) -> Polynomial:
            cache = powers[name]
            if e not in cache:
                cache[e] = assignment[name] ** e
            return cache[e]

        result = target.zero()
        for exps, coeff in self.terms.items():
            term = target.const(coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(self.ring.names[i], e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a rational point covering all occurring variables."""
        for name in point:
            self.ring.index(name)
        values = {}
        for name in self.variables():
            if name not in point:
                raise MissingAssignmentError(f"no value for variable {name!r}")
            values[self.ring.index(name)] = Fraction(point[name])
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            val = coeff
            for i, e in enumerate(exps):
                if e:
                    val *= values[i] ** e
            total += val
        return total

    def embed(self, target: VarSet) -> "Polynomial":
        """Image in a larger (or reordered) ring, matching variables by name."""
        if target == self.ring:
            return self
        missing = [n for n in self.variables() if n not in target]
        if missing:
            raise UnknownVariableError(f"target ring lacks variables {missing}")
        lookup = {}
        for i, name in enumerate(self.ring.names):
            if name in target:
                lookup[i] = target.index(name)
        width = len(target)
        terms = {}
        for exps, coeff in self.terms.items():
            out = [0] * width
            for i, e in enumerate(exps):
                if e:
                    out[lookup[i]] = e
            terms[tuple(out)] = coeff
        return Polynomial(target, terms)

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        chunks = []
        items = sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)
        for pos, (exps, coeff) in enumerate(items):
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if pos == 0:
                chunks.append(f"-{body}" if coeff < 0 else body)
            else:
                chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(chunks)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, ring={self.ring.names})"


# -- parsing ---------------------------------------------------------------
#
# expr     := ("-")? term (("+"|"-") term)*
# term     := factor ("*" factor)*
# factor   := base ("^" natural)?
# base     := rational | identifier | "(" expr ")"
# rational := digits ("/" nonzero-digits)?
#
# No implicit multiplication: "2s" is a syntax error, write "2*s".

_TOKEN_RE = re.compile(r"(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()/])")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, ring: VarSet):
        self.tokens = tokens
        self.ring = ring
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != symbol:
            raise ParseError(f"expected {symbol!r}", pos)
        return self.advance()

    def expr(self) -> Polynomial:
        negate = False
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            negate = True
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Polynomial:
        base = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.peek()
            if kind != "num":
                raise ParseError("expected natural number after '^'", pos)
            self.advance()
            return base ** int(value)
        return base

    def base(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "num":
            numerator = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == "op" and value2 == "/":
                self.advance()
                kind3, value3, pos3 = self.peek()
                if kind3 != "num":
                    raise ParseError("expected digits after '/'", pos3)
                self.advance()
                if int(value3) == 0:
                    raise ParseError("zero denominator", pos3)
                return self.ring.const(Fraction(numerator, int(value3)))
            return self.ring.const(numerator)
        if kind == "ident":
            if value not in self.ring:
                raise UnknownVariableError(f"variable {value!r} not in ring {self.ring.names}")
            return self.ring.var(value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", pos)


def parse(text: str, ring: VarSet) -> Polynomial:
    """Parse polynomial text over the given ring into canonical form."""
    parser = _Parser(_tokenize(text), ring)
    result = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", pos)
    return result


def scan_identifiers(text: str) -> list:
    """All identifiers in the text, in order of first appearance."""
    seen = []
    for kind, value, _ in _tokenize(text):
        if kind == "ident" and value not in seen:
            seen.append(value)
    return seen


def monic(p: Polynomial) -> Polynomial:
    """Rescale so the grevlex-leading coefficient is 1."""
    if p.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no leading coefficient")
    lead = max(p.terms, key=grevlex_key)
    lc = p.terms[lead]
    return Polynomial(p.ring, {m: c / lc for m, c in p.terms.items()})


# -- matrix of partials ------------------------------------------------------


def jacobian(polys: Sequence[Polynomial], names: Sequence[str]) -> list:
    """Matrix with entry (i, j) = partial of polys[i] by names[j]."""
    if not polys:
        return []
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring != ring:
            raise RingMismatchError("jacobian rows live over different rings")
    return [[p.partial(name) for name in names] for p in polys]


# -- univariate helpers -------------------------------------------------------


def _single_variable(*polys: Polynomial) -> Union[str, None]:
    """The unique variable the polynomials involve, or None if constant."""
    used = set()
    for p in polys:
        used.update(p.variables())
    if len(used) > 1:
        raise NotUnivariateError(f"polynomials involve several variables: {sorted(used)}")
    return next(iter(used)) if used else None


def _to_coeffs(p: Polynomial, index: int) -> list:
    coeffs = [Fraction(0)] * (p.degree_in(p.ring.names[index]) + 1)
    for exps, coeff in p.terms.items():
        coeffs[exps[index]] = coeff
    return coeffs


def _from_coeffs(coeffs: Sequence[Fraction], ring: VarSet, index: int) -> Polynomial:
    width = len(ring)
    terms = {}
    for e, c in enumerate(coeffs):
        if c:
            key = [0] * width
            key[index] = e
            terms[tuple(key)] = c
    return Polynomial(ring, terms)


def _coeff_divmod(num: list, den: list):
    num = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        quot[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def gcd_univariate(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd of two polynomials in a single common variable.

    gcd(p, 0) is the monic scaling of p; gcd(0, 0) is 0.
    """
    if p.ring != q.ring:
        raise RingMismatchError("gcd operands live over different rings")
    name = _single_variable(p, q)
    if p.is_zero() and q.is_zero():
        return p.ring.zero()
    if name is None:
        return p.ring.one()  # both constants, not both zero
    index = p.ring.index(name)
    a = _to_coeffs(p, index) if not p.is_zero() else []
    b = _to_coeffs(q, index) if not q.is_zero() else []
    while b:
        _, r = _coeff_divmod(a, b)
        a, b = b, r
    monic = [c / a[-1] for c in a]
    return _from_coeffs(monic, p.ring, index)


def is_squarefree(p: Polynomial) -> bool:
    """True iff a nonzero univariate polynomial has no repeated roots.

    Over the rationals this is exactly gcd(p, p') being constant, which
    certifies distinct roots over the algebraic closure.
    """
    if p.is_zero():
        raise ZeroPolynomialError("squarefreeness is undefined for 0")
    name = _single_variable(p)
    if name is None:
        return True  # nonzero constants have no roots at all
    return gcd_univariate(p, p.partial(name)).is_constant()
