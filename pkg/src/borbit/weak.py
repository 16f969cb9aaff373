"""
Weakly active roots and the per-I root subsystems

Every set computed here has two independent descriptions (difference sets
and valuation inequalities); both are computed and must agree, otherwise
InconsistentSpecError is raised.
"""
import logging
import functools
import itertools
from typing import FrozenSet, Tuple
from dataclasses import dataclass

from .rootsys import subsystem_closure
from .lattice import IntegerLattice
from .activeroots import (
    require_valid,
    pi_vector,
    eval_vector,
    as_mask,
    mask_labels,
)
from .exceptions import InconsistentSpecError, RootError

log = logging.getLogger("borbit")


__all__ = (
    "WeakRootTable",
    "SubsystemI",
    "TorbitAction",

    "weakly_active",
    "activated",
    "stabilizing",
    "phi_I",
    "delta_basis_formula",
    "torbit_root_action",
    "psi_alpha",
    "in_monoid",
)


class TorbitAction(object):
    """Effect of U_α on the T-orbit 𝒰_I"""
    STABLE = "stable"
    RAISES = "raises"
    LOWERS = "lowers"

    __slots__ = "kind", "target"

    def __init__(self, kind, target=None):
        self.kind = kind
        self.target = target

    def __eq__(self, other):
        return isinstance(other, TorbitAction) and \
            (other.kind, other.target) == (self.kind, self.target)

    def __hash__(self):
        return hash((self.kind, self.target))

    def __repr__(self):
        if self.kind == self.STABLE:
            return "Stable"
        return "%s(%s)" % (self.kind.capitalize(), sorted(self.target))


@dataclass(frozen=True)
class SubsystemI:
    __slots__ = "I", "phi_plus", "basis", "weyl_order", "parabolic"
    I: FrozenSet[int]
    phi_plus: FrozenSet[Tuple[int, ...]]
    basis: Tuple[Tuple[int, ...], ...]
    weyl_order: int
    parabolic: bool

    @property
    def rank(self):
        return len(self.basis)


def in_monoid(x, generators):
    """Whether x is an ℕ-combination of the generators (all in ℕΔ)"""
    return _in_monoid(tuple(x), frozenset(generators))


@functools.lru_cache(maxsize=65536)
def _in_monoid(x, generators):
    if not any(x):
        return True
    if any(c < 0 for c in x):
        return False
    for g in generators:
        rest = tuple(a - b for a, b in zip(x, g))
        if all(c >= 0 for c in rest) and _in_monoid(rest, generators):
            return True
    return False


def _monoid_below(bound, generators):
    """ℕ-combinations of generators that are ≤ bound, zero included"""
    zero = tuple(0 for _ in bound)
    seen = {zero}
    stack = [zero]
    while stack:
        x = stack.pop()
        for g in generators:
            y = tuple(a + b for a, b in zip(x, g))
            if y not in seen and all(a <= b for a, b in zip(y, bound)):
                seen.add(y)
                stack.append(y)
    return seen


class WeakRootTable(object):
    """Ψ♯, the extension of δ to it, and memoized per-I sets

    Per-I caches are keyed by class bitmask; writes are idempotent so
    concurrent readers may fill them.
    """

    def __init__(self, spec):
        self.spec = spec
        self.rs = rs = spec.rs
        self.psi = frozenset(spec.psi)

        # Φ⁺(α) ∩ Ψ ≠ ∅
        sharp = frozenset(
            alpha for alpha in rs.positive_roots
            if any(rs.dominates(beta, alpha) for beta in spec.psi)
        )

        delta_ext = {}
        for alpha in rs.positive_roots:
            fibre = self.psi_alpha(alpha)
            if bool(fibre) != (alpha in sharp):
                raise InconsistentSpecError(
                    "weak activity of %r: Φ⁺(α) and Ψ(α) disagree"
                    % (alpha,))
            labels = {spec.delta(beta) for beta in fibre}
            if len(labels) > 1:
                raise InconsistentSpecError(
                    "δ is not constant on Ψ(%r)" % (alpha,))
            if labels:
                delta_ext[alpha] = labels.pop()

        self.sharp = sharp
        self.delta_ext = delta_ext
        self.evals = {alpha: eval_vector(spec, alpha) for alpha in sharp}
        for alpha in sharp:
            value = self.evals[alpha][delta_ext[alpha]]
            if value != -1:
                raise InconsistentSpecError(
                    "eval(δ(α), α) = %s for α = %r" % (value, alpha))

        self._activated = {}
        self._stabilizing = {}
        self._phi = {}
        self._masks = {}
        log.debug("Weak table for %r: |Ψ♯| = %d", spec, len(sharp))

    def psi_alpha(self, alpha):
        """Ψ(α) = (α + ℕΨ) ∩ Ψ"""
        gens = self.spec.psi
        out = []
        for beta in gens:
            diff = tuple(b - a for b, a in zip(beta, alpha))
            if all(c >= 0 for c in diff) and in_monoid(diff, gens):
                out.append(beta)
        return frozenset(out)

    def _differences(self, tops, mask):
        gens = self.spec.psi_of(mask)
        out = set()
        for alpha in tops:
            for beta in _monoid_below(alpha, gens):
                if beta == alpha:
                    continue
                diff = tuple(a - b for a, b in zip(alpha, beta))
                if self.rs.index_of(diff) is None:
                    raise InconsistentSpecError(
                        "%r - %r is not a positive root" % (alpha, beta))
                out.add(diff)
        return frozenset(out)

    def activated(self, I):
        """Ψ♯(I)"""
        mask = as_mask(I)
        cached = self._activated.get(mask)
        if cached is not None:
            return cached

        diffs = self._differences(self.spec.psi, mask)
        outside = [D for D in range(self.spec.class_count)
                   if not mask >> D & 1]
        by_eval = frozenset(
            alpha for alpha in self.sharp
            if all(self.evals[alpha][D] <= 0 for D in outside)
        )
        if diffs != by_eval:
            raise InconsistentSpecError(
                "activated roots disagree: differences %s, valuations %s"
                % (sorted(diffs), sorted(by_eval)))
        self._activated[mask] = diffs
        return diffs

    def stabilizing(self, I):
        """Ψ♯_I"""
        mask = as_mask(I)
        cached = self._stabilizing.get(mask)
        if cached is not None:
            return cached

        diffs = self._differences(self.spec.psi_of(mask), mask)
        outside = [D for D in range(self.spec.class_count)
                   if not mask >> D & 1]
        by_eval = frozenset(
            alpha for alpha in self.sharp
            if all(self.evals[alpha][D] == 0 for D in outside)
        )
        by_delta = frozenset(
            alpha for alpha in self.activated(mask)
            if mask >> self.delta_ext[alpha] & 1
        )
        if not diffs == by_eval == by_delta:
            raise InconsistentSpecError(
                "stabilizing roots disagree: differences %s, valuations %s,"
                " δ-fibres %s" % (sorted(diffs), sorted(by_eval),
                                  sorted(by_delta)))
        self._stabilizing[mask] = diffs
        return diffs

    def phi(self, I):
        mask = as_mask(I)
        cached = self._phi.get(mask)
        if cached is not None:
            return cached

        closed = subsystem_closure(self.rs, self.spec.psi_of(mask))
        sub = SubsystemI(mask_labels(mask), closed.roots, closed.basis,
                         closed.weyl_order, closed.parabolic)
        self._phi[mask] = sub
        return sub

    def delta_basis(self, I):
        """{β♯_I : β ∈ Ψ_I}"""
        mask = as_mask(I)
        within = frozenset(self.spec.psi_of(mask))
        return frozenset(pi_vector(self.spec, beta, within=within)
                         for beta in within)

    def mask(self, kind, I):
        """Positive-root bitmask of one of the per-I sets"""
        mask = as_mask(I)
        key = kind, mask
        cached = self._masks.get(key)
        if cached is not None:
            return cached
        if kind == "activated":
            roots = self.activated(mask)
        elif kind == "stabilizing":
            roots = self.stabilizing(mask)
        elif kind == "phi":
            roots = self.phi(mask).phi_plus
        else:
            raise ValueError("Unknown root set %r" % kind)
        bits = 0
        for beta in roots:
            bits |= 1 << self.rs.index_of(beta)
        self._masks[key] = bits
        return bits

    def check(self, I):
        """Run every per-I cross-check

        :raises InconsistentSpecError: On the first failing check.
        """
        mask = as_mask(I)
        activated = self.activated(mask)
        stable = self.stabilizing(mask)
        sub = self.phi(mask)

        if not sub.parabolic:
            raise InconsistentSpecError("Φ_I is not parabolic")
        if sub.phi_plus & self.sharp != stable:
            raise InconsistentSpecError("Φ⁺_I ∩ Ψ♯ differs from Ψ♯_I")
        if not set(sub.basis) <= stable:
            raise InconsistentSpecError("Δ_I is not contained in Ψ♯_I")
        formula = self.delta_basis(mask)
        if formula != frozenset(sub.basis):
            raise InconsistentSpecError(
                "β♯_I formula %s differs from basis %s"
                % (sorted(formula), sorted(sub.basis)))
        recovered = {self.delta_ext[a] for a in sub.phi_plus & self.sharp}
        if recovered != set(mask_labels(mask)):
            raise InconsistentSpecError("δ(Φ⁺_I ∩ Ψ♯) is not I")
        size = len(mask_labels(mask))
        if sub.rank < size:
            raise InconsistentSpecError("rk Φ_I < |I|")
        corank = self.spec.torus_corank
        if corank is not None and sub.rank > corank + size:
            raise InconsistentSpecError("rk Φ_I > torus_corank + |I|")
        if not stable <= activated:
            raise InconsistentSpecError("Ψ♯_I is not inside Ψ♯(I)")
        return True

    def torbit_action(self, alpha, I):
        alpha = tuple(alpha)
        if self.rs.index_of(alpha) is None:
            raise RootError("%r is not a positive root" % (alpha,))
        mask = as_mask(I)
        if alpha not in self.activated(mask):
            return TorbitAction(TorbitAction.STABLE)
        D = self.delta_ext[alpha]
        if alpha in self.stabilizing(mask):
            return TorbitAction(TorbitAction.LOWERS,
                                mask_labels(mask & ~(1 << D)))
        return TorbitAction(TorbitAction.RAISES, mask_labels(mask | 1 << D))

    def sum_lemma_failures(self):
        """Pairs α, β ∈ Ψ♯ with eval(δ(β), α) > 0 breaking the sum rule"""
        failures = []
        for alpha, beta in itertools.product(sorted(self.sharp), repeat=2):
            if self.evals[alpha][self.delta_ext[beta]] <= 0:
                continue
            total = tuple(a + b for a, b in zip(alpha, beta))
            if total not in self.sharp or \
                    self.delta_ext[total] != self.delta_ext[alpha]:
                failures.append((alpha, beta))
        return failures

    def saturation_failures(self, I):
        """x ∈ ℤΨ_I ∩ ℕΔ up to twice the top height not in ℕΨ♯_I"""
        mask = as_mask(I)
        lattice = IntegerLattice(self.rs.rank, self.spec.psi_of(mask))
        stable = self.stabilizing(mask)
        top = 2 * max(sum(r) for r in self.rs.positive_roots)
        failures = []
        for x in _nonnegative_vectors(self.rs.rank, top):
            if x in lattice and not in_monoid(x, stable):
                failures.append(x)
        return failures


def _nonnegative_vectors(rank, height):
    for h in range(1, height + 1):
        for cut in itertools.combinations(range(h + rank - 1), rank - 1):
            bounds = (-1,) + cut + (h + rank - 1,)
            yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(rank))


@functools.lru_cache(maxsize=256)
def weakly_active(spec):
    """Weak-root table of a validated spec

    :raises ValidationError: Spec fails validation.
    """
    require_valid(spec)
    return WeakRootTable(spec)


def activated(spec, I):
    return weakly_active(spec).activated(I)


def stabilizing(spec, I):
    return weakly_active(spec).stabilizing(I)


def phi_I(spec, I):
    table = weakly_active(spec)
    table.check(I)
    return table.phi(I)


def delta_basis_formula(spec, I):
    table = weakly_active(spec)
    formula = table.delta_basis(I)
    if formula != frozenset(table.phi(I).basis):
        raise InconsistentSpecError("β♯_I formula differs from Δ_I")
    return formula


def torbit_root_action(spec, alpha, I):
    return weakly_active(spec).torbit_action(alpha, I)


def psi_alpha(spec, alpha):
    return weakly_active(spec).psi_alpha(tuple(alpha))
