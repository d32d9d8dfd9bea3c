"""Locally nilpotent derivations: the infinitesimal form of an additive
group action on affine space.

A derivation is stored by its images on the ring variables and extended
everywhere by linearity and Leibniz.  Exponentiating a locally nilpotent
derivation (the series is finite) recovers the group action; kernels are
the rings of invariant functions and are computed either by an exact
degree-bounded linear solve or by a slice/saturation cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Optional, Sequence, Union

from .errors import (
    IterationCapError,
    NotLocallyNilpotentError,
    ParseError,
    ResourceCapError,
    RingMismatchError,
    RoundCapError,
)
from .groebner import (
    DEFAULT_CAPS,
    Ideal,
    ResourceCaps,
    divide_exact,
    eliminate,
    subalgebra_membership,
)
from .linalg import nullspace
from .poly import (
    Polynomial,
    VarSet,
    fresh_names,
    grevlex_key,
    monic,
    parse,
    scan_identifiers,
)

# Iteration budget used when certifying that applying a derivation to a
# concrete element eventually gives zero.
NILPOTENCY_STEP_CAP = 256


@dataclass(frozen=True)
class Derivation:
    """Derivation of a polynomial ring, given by images of the variables.

    Variables missing from the image map are sent to zero.
    """

    ring: VarSet
    images: Mapping[str, Polynomial]

    def __post_init__(self):
        complete = {}
        for name in self.ring.names:
            image = self.images.get(name, self.ring.zero())
            if image.ring != self.ring:
                raise RingMismatchError(f"image of {name!r} lives over the wrong ring")
            complete[name] = image
        for name in self.images:
            self.ring.index(name)
        object.__setattr__(self, "images", MappingProxyType(complete))

    def apply(self, f: Polynomial) -> Polynomial:
        """Leibniz extension: sum of images[x] * df/dx."""
        if f.ring != self.ring:
            raise RingMismatchError("polynomial ring differs from derivation ring")
        result = self.ring.zero()
        for name in f.variables():
            image = self.images[name]
            if not image.is_zero():
                result = result + image * f.partial(name)
        return result

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images.values())


@dataclass(frozen=True)
class SliceData:
    """A local slice: a variable s with a = D(s) nonzero and D(a) = 0."""

    var: str
    value: Polynomial  # a = D(s)


def make_slice(derivation: Derivation, var: str) -> SliceData:
    value = derivation.apply(derivation.ring.var(var))
    data = SliceData(var, value)
    _check_slice(derivation, data)
    return data


def _check_slice(derivation: Derivation, data: SliceData):
    a = data.value
    if a.is_zero():
        raise ValueError(f"D({data.var}) vanishes; not a slice")
    if derivation.apply(derivation.ring.var(data.var)) != a:
        raise ValueError("slice value is not the image of the slice variable")
    if not derivation.apply(a).is_zero():
        raise ValueError("slice image is not in the kernel")


def lower_triangular_derivation(copies_v: int, trivial: int = 0) -> Derivation:
    """Infinitesimal generator of the additive group acting through lower
    triangular 2x2 matrices on copies_v two-dimensional blocks, plus
    `trivial` fixed coordinates.

    Per block (w_{2i-1}, w_{2i}): the odd coordinate maps to zero and the
    even one to its odd partner (differentiate (u, v) -> (u, t*u + v) at
    t = 0).
    """
    if copies_v < 1:
        raise ValueError("need at least one two-dimensional block")
    names = tuple(f"w{i}" for i in range(1, 2 * copies_v + 1))
    names += tuple(f"e{i}" for i in range(1, trivial + 1))
    ring = VarSet(names)
    images = {}
    for i in range(1, copies_v + 1):
        images[f"w{2 * i}"] = ring.var(f"w{2 * i - 1}")
    return Derivation(ring, images)


def is_locally_nilpotent(derivation: Derivation, max_iter: int) -> bool:
    """True iff every variable dies within max_iter applications.

    Raises IterationCapError when the budget runs out with a nonzero
    iterate; that outcome means "unknown", not "false".
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    for name in derivation.ring.names:
        g = derivation.ring.var(name)
        for _ in range(max_iter):
            g = derivation.apply(g)
            if g.is_zero():
                break
        else:
            raise IterationCapError(
                f"{name!r} not annihilated within {max_iter} iterations"
            )
    return True


def _iterates(derivation: Derivation, f: Polynomial, cap: int = NILPOTENCY_STEP_CAP):
    """[f, D(f), D^2(f), ...] down to (and excluding) the first zero."""
    chain = [f]
    g = f
    for _ in range(cap):
        g = derivation.apply(g)
        if g.is_zero():
            return chain
        chain.append(g)
    raise NotLocallyNilpotentError(
        f"derivation failed to annihilate within {cap} steps"
    )


def exp_action(derivation: Derivation, f: Polynomial,
               parameter: str = "t") -> Polynomial:
    """Group action on f: the finite sum of t^i D^i(f) / i! over the ring
    extended by the flow parameter."""
    if f.ring != derivation.ring:
        raise RingMismatchError("polynomial ring differs from derivation ring")
    if parameter in derivation.ring:
        raise ValueError(f"parameter {parameter!r} collides with a ring variable")
    chain = _iterates(derivation, f)
    extended = derivation.ring.extend((parameter,))
    t = extended.var(parameter)
    result = extended.zero()
    for i, g in enumerate(chain):
        result = result + g.embed(extended) * t ** i * Fraction(1, factorial(i))
    return result


def is_invariant(derivation: Derivation, f: Polynomial) -> bool:
    """True iff D(f) = 0, equivalently the group action fixes f."""
    return derivation.apply(f).is_zero()


def fixed_point_ideal(derivation: Derivation) -> Ideal:
    """Ideal of the zero locus of the fundamental vector field, generated
    by the variable images."""
    gens = tuple(derivation.images[name] for name in derivation.ring.names)
    return Ideal(derivation.ring, gens)


# -- kernel computation ----------------------------------------------------------


def _monomials_up_to(ring: VarSet, max_degree: int):
    """All exponent tuples of total degree <= max_degree, ascending grevlex."""
    n = len(ring)
    monos = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            monos.append(tuple(exps))
    monos.sort(key=grevlex_key)
    return monos


def _sorted_gens(polys):
    return sorted(polys, key=lambda p: (p.total_degree(), str(p)))


def kernel_linear(derivation: Derivation, max_degree: int,
                  max_dimension: int = 5000,
                  caps: ResourceCaps = DEFAULT_CAPS):
    """Minimal generating set of the degree-bounded kernel.

    Solves the exact linear system D(f) = 0 over the coefficient space of
    polynomials of total degree <= max_degree, then removes solutions
    already generated by the lower ones (subalgebra membership).
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    ring = derivation.ring
    monos = _monomials_up_to(ring, max_degree)
    if len(monos) > max_dimension:
        raise ResourceCapError(
            f"coefficient space of dimension {len(monos)} exceeds {max_dimension}"
        )
    images = [derivation.apply(Polynomial(ring, {m: Fraction(1)})) for m in monos]
    row_monos = sorted({m for img in images for m in img.terms}, key=grevlex_key)
    row_index = {m: i for i, m in enumerate(row_monos)}
    matrix = [[Fraction(0)] * len(monos) for _ in row_monos]
    for col, img in enumerate(images):
        for m, c in img.terms.items():
            matrix[row_index[m]][col] = c
    solutions = []
    for vec in nullspace(matrix, len(monos)):
        terms = {m: c for m, c in zip(monos, vec) if c}
        solutions.append(monic(Polynomial(ring, terms)))
    generators = []
    for p in _sorted_gens(solutions):
        if p.is_constant():
            continue
        member, _ = subalgebra_membership(p, generators, caps=caps)
        if not member:
            generators.append(p)
    return generators


def _dixmier_cleared(derivation: Derivation, data: SliceData, f: Polynomial) -> Polynomial:
    """Slice projection of f with denominators cleared by powers of a.

    The alternating sum of D^i(f) s^i / (i! a^i) lands in the kernel of
    the localized ring; multiplying by a^N returns it to the polynomial
    ring without leaving the kernel (a itself is invariant).
    """
    chain = _iterates(derivation, f)
    n = len(chain) - 1
    s = derivation.ring.var(data.var)
    a = data.value
    result = derivation.ring.zero()
    for i, g in enumerate(chain):
        sign = -1 if i % 2 else 1
        result = result + g * s ** i * a ** (n - i) * Fraction(sign, factorial(i))
    return result


def kernel_saturation(derivation: Derivation, data: SliceData, max_rounds: int,
                      caps: ResourceCaps = DEFAULT_CAPS):
    """Kernel generators by the local-slice method.

    Seeds with the cleared slice projections of the variables, then
    repeatedly adjoins kernel elements h with a*h inside the current
    subalgebra.  Stops when a round adds nothing.  With max_rounds = 0
    the seed generators are returned unverified; exhausting a positive
    round budget without stabilizing raises RoundCapError (the invariant
    ring need not be finitely generated, so silent truncation is never
    acceptable).
    """
    _check_slice(derivation, data)
    ring = derivation.ring
    seeds = []
    for name in ring.names:
        cleared = _dixmier_cleared(derivation, data, ring.var(name))
        if cleared.is_zero() or cleared.is_constant():
            continue
        cleared = monic(cleared)
        if cleared not in seeds:
            seeds.append(cleared)
    generators = _sorted_gens(seeds)
    a = data.value
    for _ in range(max_rounds):
        new = _saturation_round(derivation, a, generators, caps)
        if not new:
            return generators
        generators = _sorted_gens(generators + new)
    if max_rounds == 0:
        return generators
    raise RoundCapError(f"kernel not stabilized within {max_rounds} rounds")


def _saturation_round(derivation: Derivation, a: Polynomial,
                      generators, caps: ResourceCaps):
    """Kernel elements h with a*h in the current subalgebra but h outside.

    Tag polynomials p with p(gens) divisible by a are exactly the
    elimination ideal of (a) + (y_i - gens_i); each quotient p(gens)/a is
    automatically a kernel element.
    """
    ring = derivation.ring
    tags = fresh_names("y", len(generators), ring.names)
    big = ring.extend(tags)
    gens_big = [big.var(t) - g.embed(big) for t, g in zip(tags, generators)]
    ideal = Ideal(big, (a.embed(big),) + tuple(gens_big))
    relations = eliminate(ideal, len(ring), caps=caps)
    assignment = {t: g for t, g in zip(tags, generators)}
    new = []
    for p in relations.generators:
        if p.is_zero():
            continue
        b = p.substitute(assignment) if p.variables() else ring.const(p.constant_term())
        if b.is_zero():
            continue
        h = divide_exact(b, a)
        if h is None or h.is_zero() or h.is_constant():
            continue
        h = monic(h)
        if h in new:
            continue
        member, _ = subalgebra_membership(h, generators, caps=caps)
        if not member:
            new.append(h)
    return _sorted_gens(new)


# -- derivation files --------------------------------------------------------------
#
# Optional "vars: ..." line, then lines "x -> polynomial"; variables not
# listed on any left-hand side map to zero.


def load_derivation_file(path: Union[str, Path]) -> Derivation:
    text = Path(path).read_text(encoding="utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    declared: Optional[tuple] = None
    if lines and lines[0].startswith("vars:"):
        declared = tuple(lines[0][len("vars:"):].split())
        lines = lines[1:]
    entries = []
    for line in lines:
        if "->" not in line:
            raise ParseError(f"expected 'x -> polynomial' in line {line!r}", 0)
        lhs, rhs = line.split("->", 1)
        entries.append((lhs.strip(), rhs.strip()))
    if declared is None:
        seen = []
        for lhs, rhs in entries:
            for name in [lhs] + scan_identifiers(rhs):
                if name not in seen:
                    seen.append(name)
        declared = tuple(seen)
    ring = VarSet(declared)
    images = {lhs: parse(rhs, ring) for lhs, rhs in entries}
    return Derivation(ring, images)
