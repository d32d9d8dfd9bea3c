"""Construction and verification of the two quotient families.

A family instance is a hypersurface X inside a linear representation W of
the additive group (three or four two-dimensional blocks plus optional
trivial summands), cut out by w1 = 1 + f applied to the quadratic
invariants.  The battery certifies, by exact ideal computations:

  * the defining equation and the quadratic forms are invariant,
  * X is a coordinate graph, hence affine space,
  * X avoids the non-stable locus (unit ideal test),
  * the fundamental vector field has no zeros on X (free action),
  * the closure Ybar and the boundary B are smooth (Jacobian criterion),
  * the boundary has codimension 2, with one component per root of f + 1,

and derives the forced ranks of the K-theory groups from the component
count, plus a presentation of the invariant ring by tag-variable
elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .derivations import Derivation, fixed_point_ideal, kernel_linear
from .errors import (
    NonzeroConstantError,
    NotHypersurfaceError,
    RepeatedRootsError,
    UnitIdealError,
)
from .groebner import (
    DEFAULT_CAPS,
    Ideal,
    ResourceCaps,
    eliminate,
    is_unit_ideal,
    krull_dimension,
    subalgebra_membership,
)
from .poly import Polynomial, VarSet, fresh_names, is_squarefree, monic

FAMILY_BLOCKS = {"v3": 3, "v4": 4}


@dataclass(frozen=True)
class FamilySpec:
    """Construction parameters: which family, the shape polynomial f
    (one variable for v3, three for v4), and extra trivial summands."""

    family: str
    f: Polynomial
    trivial_summands: int = 0

    def __post_init__(self):
        if self.family not in FAMILY_BLOCKS:
            raise ValueError(f"unknown family {self.family!r}")
        arity = 1 if self.family == "v3" else 3
        if len(self.f.ring) != arity:
            raise ValueError(
                f"family {self.family} needs f in {arity} variable(s), "
                f"got ring {self.f.ring.names}"
            )
        if self.trivial_summands < 0:
            raise ValueError("trivial summand count must be nonnegative")


@dataclass(frozen=True)
class ConstructionArtifacts:
    """Everything the checks consume.

    The derivation acts on the full ambient ring (u, v, blocks, trivial
    coordinates) with u fixed and v flowing to u; X lives in the subring
    without (u, v).
    """

    spec: FamilySpec
    ambient_ring: VarSet
    w_ring: VarSet
    derivation: Derivation
    x_ideal: Ideal
    ybar_ideal: Ideal
    b_ideal: Ideal
    quad_invariants: tuple


def validate_family_spec(spec: FamilySpec):
    """Reject f with nonzero constant term, and for v3 a repeated root of
    f + 1 (that would make the boundary singular)."""
    origin = {name: 0 for name in spec.f.ring.names}
    if spec.f.evaluate(origin) != 0:
        raise NonzeroConstantError("f must vanish at the origin")
    if spec.family == "v3":
        if not is_squarefree(spec.f + 1):
            raise RepeatedRootsError("f + 1 has a repeated root")


def _quadratic_invariants(w_ring: VarSet, blocks: int):
    """Pairwise 2x2 determinants of the non-leading blocks."""
    def det(i: int, j: int) -> Polynomial:
        a, b = w_ring.var(f"w{2 * i - 1}"), w_ring.var(f"w{2 * i}")
        c, d = w_ring.var(f"w{2 * j - 1}"), w_ring.var(f"w{2 * j}")
        return a * d - b * c

    if blocks == 3:
        return (det(2, 3),)
    return (det(2, 3), det(2, 4), det(3, 4))


def build_family(spec: FamilySpec, validate: bool = True) -> ConstructionArtifacts:
    """Assemble rings, derivation, and the defining ideals.

    validate=False is a test hook that skips the spec invariants so the
    battery's failure paths can be exercised.
    """
    if validate:
        validate_family_spec(spec)
    blocks = FAMILY_BLOCKS[spec.family]
    w_names = tuple(f"w{i}" for i in range(1, 2 * blocks + 1))
    e_names = tuple(f"e{i}" for i in range(1, spec.trivial_summands + 1))
    w_ring = VarSet(w_names + e_names)
    ambient = VarSet(("u", "v") + w_ring.names)

    quads = _quadratic_invariants(w_ring, blocks)
    f_of_q = spec.f.substitute(
        {name: q for name, q in zip(spec.f.ring.names, quads)}
    ) if not spec.f.is_zero() else w_ring.zero()

    x_gen = w_ring.var("w1") - 1 - f_of_q
    x_ideal = Ideal(w_ring, (x_gen,))

    ybar_gen = (ambient.var("u") * ambient.var("w2")
                - ambient.var("v") * ambient.var("w1")
                - 1 - f_of_q.embed(ambient))
    ybar_ideal = Ideal(ambient, (ybar_gen,))
    b_ideal = ybar_ideal + Ideal(ambient, (ambient.var("u"), ambient.var("v")))

    images = {"v": ambient.var("u")}
    for i in range(1, blocks + 1):
        images[f"w{2 * i}"] = ambient.var(f"w{2 * i - 1}")
    derivation = Derivation(ambient, images)

    return ConstructionArtifacts(
        spec=spec,
        ambient_ring=ambient,
        w_ring=w_ring,
        derivation=derivation,
        x_ideal=x_ideal,
        ybar_ideal=ybar_ideal,
        b_ideal=b_ideal,
        quad_invariants=quads,
    )


def w_restriction(art: ConstructionArtifacts) -> Derivation:
    """The derivation restricted to the representation coordinates."""
    images = {
        name: art.derivation.images[name].embed(art.w_ring)
        for name in art.w_ring.names
    }
    return Derivation(art.w_ring, images)


def nonstable_ideal(art: ConstructionArtifacts) -> Ideal:
    """Vanishing ideal of the non-stable locus: the odd block coordinates."""
    blocks = FAMILY_BLOCKS[art.spec.family]
    gens = tuple(art.w_ring.var(f"w{2 * i - 1}") for i in range(1, blocks + 1))
    return Ideal(art.w_ring, gens)


# -- the individual checks --------------------------------------------------------


def check_affine_space(art: ConstructionArtifacts) -> bool:
    """X is a graph over the remaining coordinates: its equation must be
    w1 minus a polynomial not involving w1."""
    gens = art.x_ideal.generators
    if len(gens) != 1:
        return False
    residual = art.w_ring.var("w1") - gens[0]
    return "w1" not in residual.variables()


def check_invariance(art: ConstructionArtifacts) -> bool:
    """The defining equation and every quadratic invariant must be killed
    by the derivation."""
    dw = w_restriction(art)
    if not all(dw.apply(q).is_zero() for q in art.quad_invariants):
        return False
    return all(dw.apply(g).is_zero() for g in art.x_ideal.generators)


def check_stability(art: ConstructionArtifacts,
                    caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """X misses the non-stable locus iff their combined ideal is the unit
    ideal (the equation forces 1 = 0 on the intersection)."""
    return is_unit_ideal(art.x_ideal + nonstable_ideal(art), caps=caps)


def check_freeness(art: ConstructionArtifacts,
                   caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """No zeros of the fundamental vector field on X.

    In characteristic zero unipotent stabilizers are connected, so an
    empty fixed locus on X certifies a scheme-theoretically free action.
    """
    fixed = fixed_point_ideal(w_restriction(art))
    if fixed.is_zero():
        return False  # everything is fixed; degenerate derivation
    return is_unit_ideal(art.x_ideal + fixed, caps=caps)


def _split_hypersurface(ideal: Ideal):
    """Separate coordinate-cutting generators from the hypersurface
    equation, substituting zero for the cut coordinates."""
    ring = ideal.ring
    cut = []
    rest = []
    for g in ideal.generators:
        if len(g.terms) == 1:
            (exps, _), = g.terms.items()
            if sum(exps) == 1:
                name = ring.names[exps.index(1)]
                if name not in cut:
                    cut.append(name)
                continue
        rest.append(g)
    if cut:
        zeros = {name: ring.zero() for name in cut}
        substituted = []
        for g in rest:
            assignment = dict(zeros)
            for name in g.variables():
                if name not in assignment:
                    assignment[name] = ring.var(name)
            substituted.append(g.substitute(assignment))
        rest = [g for g in substituted if not g.is_zero()]
    if len(rest) != 1:
        raise NotHypersurfaceError(
            f"{len(rest)} equations remain after cutting coordinates"
        )
    keep = [n for n in ring.names if n not in cut]
    return rest[0], keep


def check_smooth(ideal: Ideal, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """Jacobian criterion for a hypersurface (possibly inside a coordinate
    subspace): smooth iff the equation and its partials generate the unit
    ideal, i.e. the singular locus is empty."""
    equation, names = _split_hypersurface(ideal)
    gens = [equation] + [equation.partial(n) for n in names]
    return is_unit_ideal(Ideal(ideal.ring, tuple(gens)), caps=caps)


def boundary_analysis(art: ConstructionArtifacts,
                      caps: ResourceCaps = DEFAULT_CAPS):
    """Boundary codimension inside the closure, and for v3 the component
    count m = deg f (valid over the algebraic closure because f + 1 is
    squarefree, so components biject with its roots)."""
    dim_ybar = krull_dimension(art.ybar_ideal, caps=caps)
    try:
        dim_b = krull_dimension(art.b_ideal, caps=caps)
    except UnitIdealError:
        raise UnitIdealError(
            "empty boundary: the rank bookkeeping needs a nonempty complement"
        ) from None
    codim = dim_ybar - dim_b
    m = art.spec.f.total_degree() if art.spec.family == "v3" else None
    return codim, m


@dataclass(frozen=True)
class KTheoryRanks:
    """Ranks forced by the split short exact localization sequence."""

    m: int
    rank_z: int
    rank_closure: int
    rank_quotient: int = 1


def k_theory_ranks(m: int) -> KTheoryRanks:
    """rank K0 = m on the boundary, m + 1 on the closure, 1 on the open
    part; the localization sequence of free abelian groups splits."""
    if m < 1:
        raise ValueError("the boundary must be nonempty (m >= 1)")
    return KTheoryRanks(m=m, rank_z=m, rank_closure=m + 1)


def invariant_presentation(art: ConstructionArtifacts,
                           kernel_gens: Sequence[Polynomial],
                           caps: ResourceCaps = DEFAULT_CAPS):
    """Present the invariant ring of X by generators and relations.

    Restricts the kernel generators along the graph equation, rewriting
    everything in affine coordinates z1, z2, ... (the closed immersion of
    X), drops generators lying in the subalgebra of the others, and
    eliminates the ambient coordinates from the tag-variable graph ideal.
    Returns (restricted generators, relation ideal in tags).
    """
    if art.spec.family != "v3":
        raise ValueError("presentation implemented for the v3 family only")
    w_ring = art.w_ring
    z_ring = VarSet(tuple(f"z{i}" for i in range(1, len(w_ring))))
    substitution = {}
    for i, name in enumerate(w_ring.names[1:], start=1):
        substitution[name] = z_ring.var(f"z{i}")
    graph = w_ring.var("w1") - art.x_ideal.generators[0]  # 1 + f(quads)
    substitution["w1"] = graph.substitute(
        {n: substitution[n] for n in graph.variables()}
    )

    restricted = []
    for g in kernel_gens:
        image = g.embed(w_ring).substitute(
            {n: substitution[n] for n in g.variables()}
        ) if g.variables() else z_ring.const(g.constant_term())
        image = image - image.constant_term()  # constants never matter
        if image.is_zero():
            continue
        image = monic(image)
        if image not in restricted:
            restricted.append(image)
    restricted.sort(key=lambda p: (p.total_degree(), str(p)))

    survivors = []
    for g in restricted:
        member, _ = subalgebra_membership(g, survivors, caps=caps)
        if not member:
            survivors.append(g)

    tags = fresh_names("y", len(survivors), z_ring.names)
    big = z_ring.extend(tags)
    graph_ideal = Ideal(
        big, tuple(big.var(t) - g.embed(big) for t, g in zip(tags, survivors))
    )
    relations = eliminate(graph_ideal, len(z_ring), caps=caps)
    return tuple(survivors), relations


@dataclass(frozen=True)
class Dims:
    """Dimensions of X, the quotient, the closure, and the boundary."""

    x: int
    quotient: int
    ybar: int
    b: int


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the full battery for one family instance."""

    spec: FamilySpec
    dims: Dims
    checks: dict
    boundary_codim: int
    m: Optional[int]
    ranks: Optional[KTheoryRanks]
    presentation: Optional[tuple]
    passed: bool


def run_battery(spec: FamilySpec, caps: ResourceCaps = DEFAULT_CAPS,
                kernel_degree: int = 2) -> VerificationReport:
    """Build the instance and run every check; individual check failures
    are recorded in the report, construction errors propagate."""
    art = build_family(spec)
    checks = {
        "invariant": check_invariance(art),
        "affineSpace": check_affine_space(art),
        "stable": check_stability(art, caps=caps),
        "free": check_freeness(art, caps=caps),
        "ybarSmooth": check_smooth(art.ybar_ideal, caps=caps),
        "boundarySmooth": check_smooth(art.b_ideal, caps=caps),
    }
    dim_x = krull_dimension(art.x_ideal, caps=caps)
    codim, m = boundary_analysis(art, caps=caps)
    dim_ybar = krull_dimension(art.ybar_ideal, caps=caps)
    dims = Dims(
        x=dim_x,
        quotient=dim_x - 1,  # the group is one-dimensional and acts freely
        ybar=dim_ybar,
        b=dim_ybar - codim,
    )
    if spec.family == "v3":
        ranks = k_theory_ranks(m)
        kernel = kernel_linear(w_restriction(art), kernel_degree, caps=caps)
        presentation = invariant_presentation(art, kernel, caps=caps)
    else:
        ranks = None
        presentation = None
    passed = all(checks.values()) and codim == 2
    return VerificationReport(
        spec=spec,
        dims=dims,
        checks=checks,
        boundary_codim=codim,
        m=m,
        ranks=ranks,
        presentation=presentation,
        passed=passed,
    )
