"""
Orbit-count bounds

The orbit count of a spec is bounded by that of its max-rank reduction,
which is in turn bounded by the count of TU′, the face count of the weight
polytope.
"""
import logging
import warnings
import itertools
from typing import FrozenSet, Tuple
from dataclasses import dataclass

from .rootsys import reflection_group, weyl_order
from .activeroots import (
    ActiveRootSpec,
    require_valid,
    family,
    pi,
    tu_prime,
    as_mask,
    mask_labels,
)
from .orbits import orbit_space
from .exceptions import (
    ClassOrderWarning,
    InconsistentSpecError,
    NotMaxRankError,
    RootError,
)

log = logging.getLogger("borbit")


__all__ = (
    "BoundReport",
    "PiSubsystem",

    "orbit_count",
    "class_preorder",
    "maximal_classes",
    "max_rank_reduction",
    "knop_check",
    "pi_subsystem",
)


def _warn(message, category):
    warnings.warn(message, category, stacklevel=2)


@dataclass(frozen=True)
class BoundReport:
    __slots__ = "count_h", "count_tu", "satisfied", "reduction_spec", \
        "count_reduction"
    count_h: int
    count_tu: int
    satisfied: bool
    reduction_spec: ActiveRootSpec
    count_reduction: int

    @property
    def chain_holds(self):
        return self.count_h <= self.count_reduction <= self.count_tu

    def format(self):
        return "count=%d reduction=%d tu-prime=%d %s" % (
            self.count_h, self.count_reduction, self.count_tu,
            "ok" if self.satisfied and self.chain_holds else "VIOLATED")


@dataclass(frozen=True)
class PiSubsystem:
    """Standard subsystem Φ′_I spanned by π(Ψ_I), compared with Φ_I"""
    __slots__ = "I", "basis", "weyl_order", "phi_order", \
        "isomorphic_expected"
    I: FrozenSet[int]
    basis: Tuple[Tuple[int, ...], ...]
    weyl_order: int
    phi_order: int
    isomorphic_expected: bool

    @property
    def holds(self):
        if self.isomorphic_expected:
            return self.weyl_order == self.phi_order
        return self.weyl_order <= self.phi_order


def orbit_count(spec, config=None):
    """Σ_{I ⊆ 𝒟*} |W| / |W_I|

    :raises BudgetError: |W| above the cap.
    """
    space = orbit_space(spec, config)
    order = weyl_order(spec.rs.label)
    return sum(order // space.table.phi(mask).weyl_order
               for mask in range(space.full + 1))


# class order

def class_preorder(spec):
    """Pairs (D, E) with D ≼ E, the transitive closure of
    "some β ∈ Ψ_D lies below some β′ ∈ Ψ_E"

    :rtype: frozenset[tuple[int, int]]
    """
    rs = spec.rs
    labels = spec.class_labels
    above = {D: {D} for D in labels}
    for D, E in itertools.product(labels, repeat=2):
        if any(rs.dominates(b2, b1)
               for b1 in spec.members(D) for b2 in spec.members(E)):
            above[D].add(E)

    changed = True
    while changed:
        changed = False
        for D in labels:
            reach = set(above[D])
            for E in above[D]:
                reach |= above[E]
            if reach != above[D]:
                above[D] = reach
                changed = True
    return frozenset((D, E) for D in labels for E in above[D])


def maximal_classes(spec):
    """Maximal blocks of equivalent classes under the class preorder

    A block with several classes is reported with ClassOrderWarning.

    :rtype: tuple[tuple[int, ...], ...]
    """
    order = class_preorder(spec)
    labels = spec.class_labels
    blocks = []
    for D in labels:
        if any((D, E) in order and (E, D) not in order for E in labels):
            continue
        block = tuple(E for E in labels if (D, E) in order
                      and (E, D) in order)
        if block not in blocks:
            blocks.append(block)
    for block in blocks:
        if len(block) > 1:
            _warn("Classes %s of %r are equivalent under the class order"
                  % (list(block), spec), ClassOrderWarning)
    return tuple(blocks)


def max_rank_reduction(spec, representatives=None):
    """The max-rank spec on Ψ′ = ⋃ F(β_D) over maximal classes D

    Each maximal class D is represented by its lexicographically least root
    whose family meets every class below D, unless ``representatives`` maps
    the label to a member. The result has one singleton class per original
    class, same labels.

    :rtype: ActiveRootSpec
    :raises RootError: A representative outside its class.
    :raises InconsistentSpecError: δ restricted to Ψ′ is not bijective.
    """
    require_valid(spec)
    representatives = dict(representatives or {})
    order = class_preorder(spec)
    chosen = []
    for block in maximal_classes(spec):
        for D in block:
            members = spec.members(D)
            if D in representatives:
                beta = tuple(representatives[D])
                if beta not in members:
                    raise RootError("%r is not in class %d" % (beta, D))
            else:
                below = {E for E, top in order if top == D}
                covering = [b for b in sorted(members) if below <= {
                    spec.delta(g) for g in family(spec, b)}]
                beta = covering[0] if covering else min(members)
            chosen.append(beta)

    reduced = set()
    for beta in chosen:
        reduced |= family(spec, beta)

    by_label = {}
    for beta in reduced:
        by_label.setdefault(spec.delta(beta), []).append(beta)
    if sorted(by_label) != list(spec.class_labels) or \
            any(len(roots) != 1 for roots in by_label.values()):
        raise InconsistentSpecError(
            "δ on Ψ′ = %s is not bijective" % sorted(reduced))

    psi = [by_label[D][0] for D in spec.class_labels]
    out = ActiveRootSpec.create(
        spec.rs, psi, [[D] for D in spec.class_labels], torus_corank=0,
        name="reduction of %s" % (spec.name or spec.rs.label))
    log.debug("Max-rank reduction of %r: %r", spec, out)
    return out


def knop_check(spec, config=None):
    """Compare the orbit count with the reduction and TU′ counts

    :rtype: BoundReport
    """
    count_h = orbit_count(spec, config)
    reduction = max_rank_reduction(spec)
    count_reduction = orbit_count(reduction, config)
    count_tu = orbit_count(tu_prime(spec.rs), config)
    report = BoundReport(count_h, count_tu, count_h <= count_tu,
                         reduction, count_reduction)
    if not (report.satisfied and report.chain_holds):
        log.error("Orbit-count bound violated for %r: %s",
                  spec, report.format())
    return report


def pi_subsystem(spec, I):
    """Φ′_I generated by π(Ψ_I) against Φ_I of a max-rank spec

    :rtype: PiSubsystem
    :raises NotMaxRankError: Some class is not a singleton.
    :raises InconsistentSpecError: |W′_I| and |W_I| break the expected
        relation.
    """
    if not spec.is_max_rank:
        raise NotMaxRankError("%r has a class with several roots" % (spec,))
    space = orbit_space(spec)
    rs = spec.rs
    mask = as_mask(I)
    basis = tuple(sorted({pi(spec, beta) for beta in spec.psi_of(mask)},
                         key=rs.index_of))
    indices = [rs.index_of(alpha) for alpha in basis]

    expected = False
    if basis and rs.is_connected(indices):
        comp = rs.component_of(basis[0])
        laced = all(rs.cartan[i][j] in (0, -1)
                    for i in comp for j in comp if i != j)
        lengths = {rs.is_long(alpha) for alpha in basis}
        expected = laced or len(lengths) == 2

    result = PiSubsystem(
        I=mask_labels(mask),
        basis=basis,
        weyl_order=len(reflection_group(rs, basis)),
        phi_order=space.table.phi(mask).weyl_order,
        isomorphic_expected=expected,
    )
    if not result.holds:
        raise InconsistentSpecError(
            "|W′_I| = %d against |W_I| = %d for I = %s"
            % (result.weyl_order, result.phi_order, sorted(result.I)))
    return result
