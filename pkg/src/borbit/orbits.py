"""
B-orbits on G/H as reduced and extended pairs (w, I)

A pair names the orbit B w 𝒰_I. The reduced pair (minimal I) is the
canonical name, the extended pair (maximal I) is kept alongside because the
monoid action is stated on it.
"""
import re
import logging
import functools
from typing import FrozenSet, Optional, Tuple
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

from . import config as _config
from .rootsys import (
    WeylElement,
    enumerate_weyl,
    reflection_group,
)
from .activeroots import require_valid, as_mask, mask_labels
from .weak import weakly_active
from .exceptions import InconsistentSpecError, OrbitStringError

log = logging.getLogger("borbit")


__all__ = (
    "OrbitId",
    "ExtendedPair",
    "OrbitRecord",
    "PalphaDecomposition",
    "OrbitSpace",

    "orbit_space",
    "shift_set",
    "reduce_pair",
    "extend_pair",
    "is_reduced",
    "is_extended",
    "enumerate_orbits",
    "orbit_record",
    "is_closed",
    "closed_orbits",
    "open_orbit",
    "weyl_action",
    "weyl_action_coset",
    "monoid_action",
    "stabilizer",
    "w_orbit",
    "w_orbit_decomposition",
    "palpha_decompose",
    "closure_leq_sufficient",
    "orbit_of_sharp",
    "weak_order_edges",
    "weak_order_dot",
    "minimal_orbits",
    "brute_count",
    "format_orbit",
    "parse_orbit",
)


@dataclass(frozen=True)
class OrbitId:
    __slots__ = "w", "I"
    w: WeylElement
    I: FrozenSet[int]

    def sort_key(self):
        return as_mask(self.I), self.w.sort_key()

    def __str__(self):
        return format_orbit(self)


@dataclass(frozen=True)
class ExtendedPair:
    __slots__ = "w", "I"
    w: WeylElement
    I: FrozenSet[int]

    def __str__(self):
        return format_orbit(self)


@dataclass(frozen=True)
class OrbitRecord:
    __slots__ = "id", "extended", "interval", "rank_offset", "dim_offset", \
        "codim", "closed", "stabilizer_order", "rank", "dim"
    id: OrbitId
    extended: ExtendedPair
    interval: Tuple[FrozenSet[int], FrozenSet[int]]
    rank_offset: int
    dim_offset: int
    codim: int
    closed: bool
    stabilizer_order: int
    rank: Optional[int]
    dim: Optional[int]

    def as_dict(self):
        m, M = self.interval
        doc = {
            "orbit": format_orbit(self.id),
            "extended": format_orbit(self.extended),
            "m": sorted(m),
            "M": sorted(M),
            "rank_offset": self.rank_offset,
            "dim_offset": self.dim_offset,
            "codim": self.codim,
            "closed": self.closed,
            "stabilizer_order": self.stabilizer_order,
        }
        if self.rank is not None:
            doc["rank"] = self.rank
            doc["dim"] = self.dim
        return doc


@dataclass(frozen=True)
class PalphaDecomposition:
    __slots__ = "case", "open", "others"
    case: str
    open: OrbitId
    others: Tuple[OrbitId, ...]

    @property
    def constituents(self):
        return (self.open,) + self.others


def _popcount(mask):
    return bin(mask).count("1")


class OrbitSpace(object):
    """Orbit engine of one validated spec"""

    def __init__(self, spec):
        self.spec = spec
        self.rs = spec.rs
        self.table = weakly_active(spec)
        self.full = spec.full_mask
        self.w0 = WeylElement.longest(self.rs)
        # class bit of δ(β_k) for weakly active positive roots
        self._class_bit = {}
        for alpha, label in self.table.delta_ext.items():
            self._class_bit[self.rs.index_of(alpha)] = 1 << label

    # pair calculus

    def shift(self, w, mask):
        """I(w) = δ(Ψ♯(I) ∖ Φ⁺(w)) as a class bitmask"""
        bits = self.table.mask("activated", mask) & ~w.inversion_mask
        out = 0
        k = 0
        while bits:
            if bits & 1:
                out |= self._class_bit[k]
            bits >>= 1
            k += 1
        return out

    def reduce(self, w, mask):
        return mask & ~self.shift(w, mask)

    def extend(self, w, mask):
        return mask | self.shift(w, mask)

    def is_reduced(self, w, mask):
        return not self.table.mask("phi", mask) & ~w.inversion_mask

    def is_extended(self, w, mask):
        moving = self.table.mask("activated", mask) \
            & ~self.table.mask("stabilizing", mask)
        return not moving & ~w.inversion_mask

    def _beta(self, w, i):
        """Signed index of β = -w⁻¹(α_i)"""
        for k, x in enumerate(w.images):
            if abs(x) == i + 1:
                return -(k + 1) if x > 0 else (k + 1)
        raise AssertionError("α_%d has no preimage" % (i + 1))

    def _in_set(self, kind, mask, signed):
        return signed > 0 and bool(
            self.table.mask(kind, mask) >> (signed - 1) & 1)

    def is_closed(self, w, mask):
        if mask:
            return False
        inverted = [self.rs.positive_roots[k]
                    for k in range(self.rs.size) if w.inverts(k)]
        psi = self.table.psi
        if not all(beta in psi for beta in inverted):
            return False
        labels = [self.spec.delta(beta) for beta in inverted]
        if len(set(labels)) != len(labels):
            return False
        return set(self.spec.psi_of(as_mask(labels))) == set(inverted)

    def record(self, w, mask):
        if not self.is_reduced(w, mask):
            raise OrbitStringError("(%s, %s) is not a reduced pair"
                                   % (w.format_word(),
                                      sorted(mask_labels(mask))))
        upper = self.extend(w, mask)
        size = self.spec.class_count
        dim_offset = w.length - (size - _popcount(upper))
        closed = self.is_closed(w, mask)
        if closed != (mask == 0 and dim_offset == 0):
            raise InconsistentSpecError(
                "closed-orbit tests disagree on %s" % w.format_word())

        corank = self.spec.torus_corank
        rank = dim = None
        if corank is not None:
            rank = corank + _popcount(mask)
            dim = corank + size + dim_offset
        return OrbitRecord(
            id=OrbitId(w, mask_labels(mask)),
            extended=ExtendedPair(w, mask_labels(upper)),
            interval=(mask_labels(mask), mask_labels(upper)),
            rank_offset=_popcount(mask),
            dim_offset=dim_offset,
            codim=size - _popcount(upper) + self.w0.length - w.length,
            closed=closed,
            stabilizer_order=self.table.phi(mask).weyl_order,
            rank=rank,
            dim=dim,
        )

    # actions

    def simple_act(self, i, w, mask):
        """s_i on a reduced pair"""
        # w⁻¹(α_i) ∈ Φ_I fixes the coset wW_I
        if self._in_set("phi", mask, self._beta(w, i)):
            return w, mask
        return w.left(i), mask

    def act(self, v, w, mask):
        for i in reversed(v.word):
            w, mask = self.simple_act(i, w, mask)
        return w, mask

    def coset_rep(self, u, mask):
        """The element of u·W_I inverting all of Φ⁺_I"""
        basis = self.table.phi(mask).basis
        while True:
            for gamma in basis:
                if self.rs.is_positive(u.act(gamma)):
                    u = u * WeylElement.reflection(self.rs, gamma)
                    break
            else:
                return u

    def monoid_step(self, i, w, mask):
        """m(s_i) on an extended pair"""
        signed = self._beta(w, i)
        if signed < 0:
            result = w.left(i), mask
        elif self._in_set("activated", mask, signed):
            label_bit = self._class_bit[signed - 1]
            result = w, mask | label_bit
        else:
            result = w, mask
        if not self.is_extended(*result):
            raise InconsistentSpecError(
                "m(s_%d) left the extended pairs at %s"
                % (i + 1, result[0].format_word()))
        return result

    def palpha(self, i, w, mask):
        signed = self._beta(w, i)
        v = w.left(i)
        upper = self.extend(w, mask)

        def named(u, m):
            return OrbitId(u, mask_labels(self.reduce(u, m)))

        if signed > 0:
            bit = self._class_bit.get(signed - 1, 0)
            if self._in_set("stabilizing", mask, signed):
                case = "T1"
                top = named(w, mask)
                others = (named(v, mask), named(w, mask & ~bit))
            elif self._in_set("activated", mask, signed) and \
                    not self._in_set("stabilizing", upper, signed):
                case = "T2"
                top = named(w, mask | bit)
                others = (named(v, mask), named(w, mask))
            else:
                case = "U"
                top = named(w, mask)
                others = (named(v, mask),)
        else:
            positive = -signed
            bit = self._class_bit.get(positive - 1, 0)
            upper_v = self.extend(v, mask)
            if self._in_set("activated", mask, positive) and \
                    not self._in_set("stabilizing", upper_v, positive):
                case = "T-neg"
                top = named(v, mask | bit)
                others = (named(w, mask), named(v, mask))
            else:
                case = "U"
                top = named(v, mask)
                others = (named(w, mask),)

        everything = (top,) + others
        if len(set(everything)) != len(everything):
            raise InconsistentSpecError(
                "P_α decomposition of %s collapsed: %s"
                % (w.format_word(), [str(o) for o in everything]))
        ext = self.monoid_step(i, w, upper)
        if self.reduce(*ext) != as_mask(top.I) or ext[0] != top.w:
            raise InconsistentSpecError(
                "open orbit of P_α%s disagrees with m(s_%d)"
                % (w.format_word(), i + 1))
        return PalphaDecomposition(case, top, others)

    # enumeration

    def block(self, mask):
        phi_bits = self.table.mask("phi", mask)
        return [w for w in enumerate_weyl(self.rs)
                if not phi_bits & ~w.inversion_mask]

    def reduced_image(self, mask):
        return {(w, self.reduce(w, mask)) for w in enumerate_weyl(self.rs)}


def _fan_out(fn, items, config=None):
    """Map over items, serially or on worker threads, keeping order"""
    workers = _config.get("workers", config)
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    log.debug("Fanning out %d blocks over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@functools.lru_cache(maxsize=128)
def _space(spec):
    return OrbitSpace(spec)


def orbit_space(spec, config=None):
    """Orbit engine for a spec, validating it and checking the |W| budget"""
    require_valid(spec, config)
    enumerate_weyl(spec.rs, config)
    return _space(spec)


def _pair(pair):
    return pair.w, as_mask(pair.I)


def shift_set(spec, w, I):
    """I(w) = δ(Ψ♯(I) ∖ Φ⁺(w))"""
    return mask_labels(orbit_space(spec).shift(w, as_mask(I)))


def reduce_pair(spec, w, I):
    space = orbit_space(spec)
    return OrbitId(w, mask_labels(space.reduce(w, as_mask(I))))


def extend_pair(spec, w, I):
    space = orbit_space(spec)
    return ExtendedPair(w, mask_labels(space.extend(w, as_mask(I))))


def is_reduced(spec, w, I):
    return orbit_space(spec).is_reduced(w, as_mask(I))


def is_extended(spec, w, I):
    return orbit_space(spec).is_extended(w, as_mask(I))


def orbit_record(spec, orbit):
    return orbit_space(spec).record(*_pair(orbit))


def enumerate_orbits(spec, config=None):
    """Every orbit, ordered by I bitmask then canonical Weyl order

    :rtype: list[OrbitRecord]
    :raises BudgetError: |W| above the cap.
    """
    space = orbit_space(spec, config)

    def records(mask):
        return [space.record(w, mask) for w in space.block(mask)]

    blocks = _fan_out(records, range(space.full + 1), config)
    out = [r for block in blocks for r in block]
    log.debug("Enumerated %d orbits of %r", len(out), spec)
    return out


def brute_count(spec, config=None):
    """Distinct reduced pairs over all of W × 2^𝒟*"""
    space = orbit_space(spec, config)
    images = _fan_out(space.reduced_image, range(space.full + 1), config)
    return len(set().union(*images))


def is_closed(spec, orbit):
    return orbit_space(spec).is_closed(*_pair(orbit))


def closed_orbits(spec, config=None):
    return [r.id for r in enumerate_orbits(spec, config) if r.closed]


def open_orbit(spec):
    space = orbit_space(spec)
    return OrbitId(space.w0, mask_labels(space.reduce(space.w0, space.full)))


def _require_reduced(space, w, mask):
    if not space.is_reduced(w, mask):
        raise OrbitStringError("(%s, %s) is not a reduced pair"
                               % (w.format_word(), sorted(mask_labels(mask))))


def weyl_action(spec, v, orbit):
    """v · 𝒪_{w,I}, applied letter by letter and checked against the coset
    representative of v·w·W_I
    """
    space = orbit_space(spec)
    w, mask = _pair(orbit)
    _require_reduced(space, w, mask)
    u, mask = space.act(v, w, mask)
    coset = space.coset_rep(v * w, mask)
    if coset != u:
        raise InconsistentSpecError(
            "letterwise action %s differs from coset representative %s"
            % (u.format_word(), coset.format_word()))
    return OrbitId(u, orbit.I)


def weyl_action_coset(spec, v, orbit):
    space = orbit_space(spec)
    w, mask = _pair(orbit)
    _require_reduced(space, w, mask)
    return OrbitId(space.coset_rep(v * w, mask), orbit.I)


def monoid_action(spec, v, pair):
    """m(v) on an extended pair, folding the canonical word of v"""
    space = orbit_space(spec)
    w, mask = _pair(pair)
    if not space.is_extended(w, mask):
        raise OrbitStringError("(%s, %s) is not an extended pair"
                               % (w.format_word(), sorted(pair.I)))
    for i in reversed(v.word):
        w, mask = space.monoid_step(i, w, mask)
    return ExtendedPair(w, mask_labels(mask))


def stabilizer(spec, orbit):
    """(|W_I|, reflection roots w(Δ_I)) of Stab_W(𝒪_{w,I}) = wW_Iw⁻¹"""
    space = orbit_space(spec)
    w, mask = _pair(orbit)
    _require_reduced(space, w, mask)
    sub = space.table.phi(mask)
    roots = set()
    for gamma in sub.basis:
        image = w.act(gamma)
        if not space.rs.is_positive(image):
            image = tuple(-c for c in image)
        roots.add(image)
    return sub.weyl_order, frozenset(roots)


def w_orbit(spec, orbit):
    """W-orbit of an orbit, by closure under simple reflections"""
    space = orbit_space(spec)
    start = _pair(orbit)
    seen = {start}
    stack = [start]
    while stack:
        w, mask = stack.pop()
        for i in range(space.rs.rank):
            nxt = space.simple_act(i, w, mask)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return sorted((OrbitId(w, mask_labels(m)) for w, m in seen),
                  key=OrbitId.sort_key)


def w_orbit_decomposition(spec, config=None):
    """I ↦ orbits with reduced index I, each block a single W-orbit"""
    out = {}
    for record in enumerate_orbits(spec, config):
        out.setdefault(record.id.I, []).append(record.id)
    return out


def palpha_decompose(spec, i, orbit):
    """Orbits of P_α𝒪 for the simple root α_i (0-based i)

    :return: Case tag among U, T1, T2, T-neg with the open orbit first.
    :rtype: PalphaDecomposition
    """
    space = orbit_space(spec)
    w, mask = _pair(orbit)
    _require_reduced(space, w, mask)
    return space.palpha(i, w, mask)


def closure_leq_sufficient(spec, a, b):
    """v ∈ wW_I and J ⊆ M_{w,I}; implies 𝒪_a ⊆ closure(𝒪_b)"""
    space = orbit_space(spec)
    v, J = _pair(a)
    w, I = _pair(b)
    _require_reduced(space, v, J)
    _require_reduced(space, w, I)
    if space.coset_rep(v, I) != w:
        return False
    return not J & ~space.extend(w, I)


def orbit_of_sharp(spec, I):
    """𝒪_I♯ = (w_I, I) with w_I the longest element of W_I"""
    space = orbit_space(spec)
    mask = as_mask(I)
    group = reflection_group(space.rs, space.table.phi(mask).basis)
    w_I = group[-1]
    _require_reduced(space, w_I, mask)
    return OrbitId(w_I, mask_labels(mask))


# weak order

def weak_order_edges(spec, config=None):
    """(source, target, 1-based simple index) with target = m(s_i)·source"""
    space = orbit_space(spec, config)
    edges = []
    for record in enumerate_orbits(spec, config):
        w, mask = _pair(record.extended)
        for i in range(space.rs.rank):
            u, upper = space.monoid_step(i, w, mask)
            target = OrbitId(u, mask_labels(space.reduce(u, upper)))
            if target != record.id:
                edges.append((record.id, target, i + 1))
    return edges


def minimal_orbits(spec, config=None):
    """Extended pairs with w⁻¹(Δ⁻) ∩ Φ⁺ ⊆ Ψ♯(I) ∖ Ψ♯_I"""
    space = orbit_space(spec, config)
    out = []
    for record in enumerate_orbits(spec, config):
        w, mask = _pair(record.extended)
        moving = space.table.mask("activated", mask) \
            & ~space.table.mask("stabilizing", mask)
        descents = 0
        for i in range(space.rs.rank):
            signed = space._beta(w, i)
            if signed > 0:
                descents |= 1 << (signed - 1)
        if not descents & ~moving:
            out.append(record.id)
    return out


def weak_order_dot(spec, config=None):
    """DOT digraph of the weak order, edges labelled by simple index"""
    records = enumerate_orbits(spec, config)
    edges = weak_order_edges(spec, config)
    lines = ["digraph weak_order {", "rankdir=BT;"]
    append = lines.append

    def node(orbit):
        return '"{}"'.format(format_orbit(orbit))

    append("node [shape=box fontname=Courier]")
    for record in records:
        attrs = []
        if record.codim == 0:
            attrs.append("peripheries=2")
        if record.closed:
            attrs.append("style=bold")
        append(node(record.id) + (" [%s]" % " ".join(attrs) if attrs else ""))
    for source, target, i in edges:
        append("{} -> {} [label={}]".format(node(source), node(target), i))
    append("}")
    return "\n".join(lines)


# naming

_orbit_re = re.compile(r"^\s*w=([^;]*);\s*I=(.*?)\s*$")


def format_orbit(pair):
    """``w=<1-based word>;I=<labels>``, ``e`` and ``-`` when empty"""
    labels = ",".join(str(i) for i in sorted(pair.I)) or "-"
    return "w=%s;I=%s" % (pair.w.format_word(), labels)


def parse_orbit(spec, text, reduce=False):
    """Parse an orbit naming string

    :param bool reduce: Reduce the pair instead of rejecting non-reduced
        pairs.
    :rtype: OrbitId
    :raises OrbitStringError: On malformed strings or non-reduced pairs.
    """
    match = _orbit_re.match(text or "")
    if match is None:
        raise OrbitStringError("Malformed orbit string %r" % text)
    word_text, labels_text = match.group(1).strip(), match.group(2).strip()

    rs = spec.rs
    if word_text in ("e", ""):
        word = ()
    else:
        try:
            word = tuple(int(t) - 1 for t in word_text.split(","))
        except ValueError:
            raise OrbitStringError("Malformed word %r" % word_text)
        if any(not 0 <= i < rs.rank for i in word):
            raise OrbitStringError("Word letters must be in 1..%d"
                                   % rs.rank)

    if labels_text in ("-", ""):
        labels = frozenset()
    else:
        try:
            labels = frozenset(int(t) for t in labels_text.split(","))
        except ValueError:
            raise OrbitStringError("Malformed class labels %r" % labels_text)
        if any(not 0 <= D < spec.class_count for D in labels):
            raise OrbitStringError("Class labels must be in 0..%d"
                                   % (spec.class_count - 1))

    w = WeylElement.from_word(rs, word)
    space = orbit_space(spec)
    mask = as_mask(labels)
    if reduce:
        mask = space.reduce(w, mask)
    else:
        _require_reduced(space, w, mask)
    return OrbitId(w, mask_labels(mask))
