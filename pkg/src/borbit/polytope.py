"""
Weight-polytope model of the orbit set

Every orbit (w, I) is sent to the face-like subpolytope conv(wW_Iλ) of the
weight polytope P = conv(Wλ). Weights are exact `Fraction` tuples in
fundamental-weight coordinates; since λ is regular, a vertex is named by the
Weyl element producing it.
"""
import json
import logging
import itertools
from fractions import Fraction
from typing import Tuple
from dataclasses import dataclass

import sympy

from . import config as _config
from .rootsys import (
    WeylElement,
    enumerate_weyl,
    reflection_group,
    weyl_order,
)
from .activeroots import as_mask
from .orbits import (
    OrbitId,
    orbit_space,
    enumerate_orbits,
    closure_leq_sufficient,
    format_orbit,
    _require_reduced,
    _fan_out,
)
from .exceptions import BudgetError, InconsistentSpecError, WeightError

log = logging.getLogger("borbit")


__all__ = (
    "Subpolytope",
    "EmbeddingReport",

    "rho",
    "check_lambda",
    "parse_lambda",
    "format_rational",
    "weight_of",
    "root_weight",
    "dominance_leq",
    "subpolytope",
    "cone_check",
    "embedding_check",
    "face_count",
    "face_census",
    "bruhat_hint",
    "minimal_vertex",
    "export_json",
)


@dataclass(frozen=True)
class Subpolytope:
    """conv(wW_Iλ) as its vertex Weyl elements and their weights"""
    __slots__ = "orbit", "vertices", "points", "dim"
    orbit: OrbitId
    vertices: Tuple[WeylElement, ...]
    points: Tuple[Tuple[Fraction, ...], ...]
    dim: int

    @property
    def vertex_set(self):
        return frozenset(self.vertices)


@dataclass(frozen=True)
class EmbeddingReport:
    __slots__ = "count", "injective", "equivariant", "collisions", \
        "asymmetries"
    count: int
    injective: bool
    equivariant: bool
    collisions: tuple
    asymmetries: tuple

    @property
    def ok(self):
        return self.injective and self.equivariant


# weights

def rho(rs):
    return tuple(Fraction(1) for _ in range(rs.rank))


def check_lambda(rs, lam=None):
    """Normalize λ to a Fraction tuple, ρ when omitted

    :raises WeightError: Wrong length or not regular dominant.
    """
    if lam is None:
        return rho(rs)
    lam = tuple(Fraction(c) for c in lam)
    if len(lam) != rs.rank:
        raise WeightError("λ has %d coordinates, %s needs %d"
                          % (len(lam), rs.label, rs.rank))
    if any(c <= 0 for c in lam):
        raise WeightError("λ = (%s) is not regular dominant"
                          % ", ".join(format_rational(c) for c in lam))
    return lam


def parse_lambda(text):
    """``"1,2/3,5"`` -> Fraction tuple

    :raises WeightError: Unparsable coordinate.
    """
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise WeightError("Malformed weight %r" % text)


def format_rational(value):
    """Lowest-terms ``"p/q"`` with q > 0, integers included"""
    value = Fraction(value)
    return "%d/%d" % (value.numerator, value.denominator)


def weight_of(rs, w, lam=None):
    """wλ in fundamental-weight coordinates"""
    return w.act_weight(check_lambda(rs, lam))


def root_weight(rs, beta):
    """A root in fundamental-weight coordinates (a Cartan column combination)"""
    return tuple(Fraction(c) for c in rs.root_to_weight(beta))


def _rational(c):
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def _solve(columns, target):
    """Exact solution x of Σ x_k columns[k] = target, None when infeasible

    Columns must be linearly independent.
    """
    if not columns:
        return () if not any(target) else None
    matrix = sympy.Matrix([[_rational(col[j]) for col in columns]
                           for j in range(len(target))])
    rhs = sympy.Matrix([_rational(c) for c in target])
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    assert not params, "dependent cone generators"
    return tuple(Fraction(int(c.p), int(c.q)) for c in solution)


def dominance_leq(rs, mu, nu):
    """μ ≤ ν in dominance order: ν - μ is a nonnegative combination of Δ"""
    diff = tuple(Fraction(b) - Fraction(a) for a, b in zip(mu, nu))
    simple = [root_weight(rs, alpha) for alpha in rs.simple_roots]
    coeffs = _solve(simple, diff)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def _affine_rank(points):
    if len(points) < 2:
        return 0
    base = points[0]
    rows = [[_rational(a - b) for a, b in zip(p, base)] for p in points[1:]]
    return sympy.Matrix(rows).rank()


# subpolytopes

def _coset(space, w, mask):
    group = reflection_group(space.rs, space.table.phi(mask).basis)
    return sorted({w * u for u in group}, key=WeylElement.sort_key)


def subpolytope(spec, orbit, lam=None):
    """𝒮_{w,I} = conv(wW_Iλ) of a reduced pair

    :rtype: Subpolytope
    :raises WeightError: λ not regular dominant.
    :raises InconsistentSpecError: dim 𝒮_{w,I} differs from rk Φ_I.
    """
    space = orbit_space(spec)
    lam = check_lambda(space.rs, lam)
    w, mask = orbit.w, as_mask(orbit.I)
    _require_reduced(space, w, mask)

    vertices = _coset(space, w, mask)
    points = tuple(v.act_weight(lam) for v in vertices)
    dim = _affine_rank(points)
    expected = space.table.phi(mask).rank
    if dim != expected:
        raise InconsistentSpecError(
            "dim 𝒮 of %s is %d, rk Φ_I is %d"
            % (format_orbit(orbit), dim, expected))
    return Subpolytope(orbit, tuple(vertices), points, dim)


def cone_check(spec, orbit, lam=None):
    """Whether conv(wW_Iλ) = P ∩ (wλ + ℚ≥0·w(Φ⁻_I)) on vertices

    w(-Δ_I) generates the cone and is linearly independent, so membership
    is one exact solve per vertex of P.
    """
    space = orbit_space(spec)
    rs = space.rs
    lam = check_lambda(rs, lam)
    w, mask = orbit.w, as_mask(orbit.I)
    _require_reduced(space, w, mask)

    apex = w.act_weight(lam)
    generators = [root_weight(rs, tuple(-c for c in w.act(gamma)))
                  for gamma in space.table.phi(mask).basis]
    inside = set()
    for v in enumerate_weyl(rs):
        offset = tuple(a - b for a, b in zip(v.act_weight(lam), apex))
        coeffs = _solve(generators, offset)
        if coeffs is not None and all(c >= 0 for c in coeffs):
            inside.add(v)
    return inside == set(_coset(space, w, mask))


def embedding_check(spec, lam=None, config=None):
    """Injectivity and simple-reflection equivariance of (w, I) ↦ 𝒮_{w,I}

    :rtype: EmbeddingReport
    """
    space = orbit_space(spec, config)
    rs = space.rs
    lam = check_lambda(rs, lam)
    records = enumerate_orbits(spec, config)
    polytopes = _fan_out(lambda r: subpolytope(spec, r.id, lam),
                         records, config)
    by_orbit = {p.orbit: p.vertex_set for p in polytopes}

    seen = {}
    collisions = []
    for p in polytopes:
        other = seen.setdefault(p.vertex_set, p.orbit)
        if other != p.orbit:
            collisions.append((other, p.orbit))

    asymmetries = []
    for p in polytopes:
        w, mask = p.orbit.w, as_mask(p.orbit.I)
        for i in range(rs.rank):
            u, _ = space.simple_act(i, w, mask)
            image = OrbitId(u, p.orbit.I)
            s = WeylElement.simple(rs, i)
            if by_orbit[image] != frozenset(s * v for v in p.vertex_set):
                asymmetries.append((p.orbit, i + 1))

    report = EmbeddingReport(len(polytopes), not collisions,
                             not asymmetries, tuple(collisions),
                             tuple(asymmetries))
    log.debug("Embedding check of %r: %d subpolytopes, %d collision(s), "
              "%d asymmetry(ies)", spec, report.count, len(collisions),
              len(asymmetries))
    return report


# faces of P

def face_count(rs, config=None):
    """Σ_{J ⊆ Δ} |W| / |W_J|, the face count of P including P itself

    :raises BudgetError: |W| above the cap.
    """
    cap = _config.get("max_weyl", config)
    order = weyl_order(rs.label)
    if order > cap:
        raise BudgetError("|W(%s)| = %d exceeds the cap %d"
                          % (rs.label, order, cap))
    total = 0
    for size in range(rs.rank + 1):
        for J in itertools.combinations(rs.simple_roots, size):
            total += order // len(reflection_group(rs, J))
    return total


def _normal(points):
    # normal of the affine hyperplane through rank-many points
    if len(points) == 1:
        return (sympy.Integer(1),)
    base = points[0]
    rows = [[_rational(a - b) for a, b in zip(p, base)] for p in points[1:]]
    null = sympy.Matrix(rows).nullspace()
    if len(null) != 1:
        return None
    return tuple(null[0])


def face_census(rs, lam=None, config=None):
    """Nonempty faces of P = conv(Wλ) as vertex sets, by brute force

    Facets come from exact supporting hyperplanes through rank-many
    vertices; the other proper faces are their intersections.

    :rtype: set[frozenset[WeylElement]]
    :raises BudgetError: Rank above 3.
    """
    if rs.rank > 3:
        raise BudgetError("face census is limited to rank 3, %s has rank %d"
                          % (rs.label, rs.rank))
    lam = check_lambda(rs, lam)
    elements = enumerate_weyl(rs, config)
    points = {w: tuple(_rational(c) for c in w.act_weight(lam))
              for w in elements}

    facets = set()
    for chosen in itertools.combinations(elements, rs.rank):
        normal = _normal([points[w] for w in chosen])
        if normal is None:
            continue
        level = sum(n * c for n, c in zip(normal, points[chosen[0]]))
        values = {w: sum(n * c for n, c in zip(normal, p)) - level
                  for w, p in points.items()}
        if all(v <= 0 for v in values.values()) or \
                all(v >= 0 for v in values.values()):
            facets.add(frozenset(w for w, v in values.items() if v == 0))

    faces = set(facets)
    frontier = set(facets)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in facets:
                meet = a & b
                if meet and meet not in faces:
                    fresh.add(meet)
        faces |= fresh
        frontier = fresh
    faces.add(frozenset(elements))
    log.debug("Face census of %s: %d facets, %d faces",
              rs.label, len(facets), len(faces))
    return faces


# orders

def bruhat_hint(spec, a, b, lam=None):
    """Whether 𝒮_a ⊆ 𝒮_b, which forces 𝒪_a ⊆ closure(𝒪_b)

    :raises InconsistentSpecError: Containment without the coset criterion.
    """
    inside = subpolytope(spec, a, lam).vertex_set <= \
        subpolytope(spec, b, lam).vertex_set
    if inside and not closure_leq_sufficient(spec, a, b):
        raise InconsistentSpecError(
            "𝒮 of %s lies in 𝒮 of %s but the coset criterion fails"
            % (format_orbit(a), format_orbit(b)))
    return inside


def minimal_vertex(spec, orbit, lam=None):
    """The dominance-minimal vertex of 𝒮_{w,I}; it is w itself

    :raises InconsistentSpecError: No unique minimum, or a minimum other
        than w.
    """
    poly = subpolytope(spec, orbit, lam)
    rs = spec.rs
    minima = [
        v for v, p in zip(poly.vertices, poly.points)
        if all(dominance_leq(rs, p, q) for q in poly.points)
    ]
    if minima != [orbit.w]:
        raise InconsistentSpecError(
            "dominance minima of %s are %s"
            % (format_orbit(orbit), [v.format_word() for v in minima]))
    return orbit.w


# export

def export_json(spec, lam=None, config=None):
    """JSON document of every subpolytope, rationals as ``"p/q"``"""
    lam = check_lambda(spec.rs, lam)
    records = enumerate_orbits(spec, config)
    doc = {
        "lambda": [format_rational(c) for c in lam],
        "subpolytopes": [],
    }
    for record in records:
        poly = subpolytope(spec, record.id, lam)
        doc["subpolytopes"].append({
            "orbit": format_orbit(record.id),
            "vertices": [[format_rational(c) for c in p]
                         for p in poly.points],
            "dim": poly.dim,
        })
    return json.dumps(doc, indent=2)
