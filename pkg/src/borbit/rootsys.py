"""
Exact root systems and Weyl groups

Roots are integer coefficient tuples over the simple roots, negative roots
are negated tuples. Cartan convention: ``cartan[i][j] = <α_j, α_i∨>``, so
``<β, α_i∨> = Σ_j cartan[i][j]·β_j`` and simple roots are numbered as in
Bourbaki. Weyl elements are stored as the signed image of every positive
root.
"""
import re
import math
import logging
import functools
from fractions import Fraction
from collections import deque

import numpy as np
import sympy

from . import config as _config
from .lattice import IntegerLattice
from .exceptions import RootSystemError, BudgetError, RootError

log = logging.getLogger("borbit")


__all__ = (
    "RootSystem",
    "WeylElement",
    "ClosedSubsystem",

    "parse_label",
    "cartan_matrix",
    "weyl_order",
    "positive_root_count",
    "build_root_system",
    "weyl_act",
    "inversion_set",
    "enumerate_weyl",
    "demazure_product",
    "subsystem_closure",
    "reflection_group",
    "rational_rank",
)


_token = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def parse_label(label):
    """Split a Cartan type label like ``"A1xG2"`` into its factors

    :param str label: Type label, factors joined by ``x``.
    :return: List of (letter, rank) pairs
    :rtype: list[tuple[str, int]]
    :raises RootSystemError: On unknown letters or invalid ranks.
    """
    if not isinstance(label, str) or not label.strip():
        raise RootSystemError("Empty root system label")

    factors = []
    for token in label.split("x"):
        match = _token.match(token)
        if match is None:
            raise RootSystemError("Unknown type token %r in %r"
                                  % (token, label))
        letter, rank = match.group(1).upper(), int(match.group(2))
        minimum = {"A": 1, "B": 2, "C": 2, "D": 4}.get(letter)
        if minimum is not None and rank < minimum:
            raise RootSystemError("%s%d: rank must be >= %d"
                                  % (letter, rank, minimum))
        if letter == "E" and rank not in (6, 7, 8):
            raise RootSystemError("E%d does not exist" % rank)
        if letter == "F" and rank != 4:
            raise RootSystemError("F%d does not exist" % rank)
        if letter == "G" and rank != 2:
            raise RootSystemError("G%d does not exist" % rank)
        factors.append((letter, rank))
    return factors


def cartan_matrix(letter, rank):
    """Cartan matrix of an irreducible type, Bourbaki numbering"""
    A = 2 * np.eye(rank, dtype=int)
    chain = range(rank - 1)
    if letter == "A":
        A[chain, range(1, rank)] = -1
        A[range(1, rank), chain] = -1
    elif letter == "B":
        A[range(rank - 1), range(1, rank)] = -1
        A[range(1, rank), range(rank - 1)] = -1
        # last root short
        A[-1, -2] = -2
    elif letter == "C":
        A[range(rank - 1), range(1, rank)] = -1
        A[range(1, rank), range(rank - 1)] = -1
        # last root long
        A[-2, -1] = -2
    elif letter == "D":
        A[range(rank - 2), range(1, rank - 1)] = -1
        A[range(1, rank - 1), range(rank - 2)] = -1
        A[-3, -1] = -1
        A[-1, -3] = -1
    elif letter == "E":
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, rank - 1)]
        for i, j in edges:
            A[i, j] = A[j, i] = -1
    elif letter == "F":
        A[0, 1] = A[1, 0] = -1
        A[1, 2] = -1
        A[2, 1] = -2
        A[2, 3] = A[3, 2] = -1
    elif letter == "G":
        A[0, 1] = -3
        A[1, 0] = -1
    else:
        raise RootSystemError("Unknown type letter %r" % letter)
    return A


def _factor_weyl_order(letter, rank):
    if letter == "A":
        return math.factorial(rank + 1)
    if letter in "BC":
        return 2 ** rank * math.factorial(rank)
    if letter == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(letter, rank)]


def _factor_root_count(letter, rank):
    if letter == "A":
        return rank * (rank + 1) // 2
    if letter in "BC":
        return rank * rank
    if letter == "D":
        return rank * (rank - 1)
    return {("E", 6): 36, ("E", 7): 63, ("E", 8): 120,
            ("F", 4): 24, ("G", 2): 6}[(letter, rank)]


def weyl_order(label):
    """|W| from the product formula, without enumerating"""
    order = 1
    for letter, rank in parse_label(label):
        order *= _factor_weyl_order(letter, rank)
    return order


def positive_root_count(label):
    return sum(_factor_root_count(*f) for f in parse_label(label))


class RootSystem(object):
    """Finite crystallographic root system given by its Cartan matrix

    Equality and hashing go through the normalized label, so instances can
    key caches.
    """

    __slots__ = ("label", "rank", "cartan", "factors", "components",
                 "positive_roots", "symmetrizer", "_index", "_simple_images",
                 "__weakref__")

    def __init__(self, label, cartan, factors, components):
        self.label = label
        self.rank = len(cartan)
        self.cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        self.factors = tuple(factors)
        self.components = tuple(tuple(c) for c in components)
        self.symmetrizer = self._symmetrize()
        self.positive_roots = self._generate_roots()
        self._index = {r: k for k, r in enumerate(self.positive_roots)}
        self._simple_images = tuple(
            tuple(self._signed_index(self.reflect(beta, i))
                  for beta in self.positive_roots)
            for i in range(self.rank)
        )

    def __repr__(self):
        return "RootSystem(%r)" % self.label

    def __eq__(self, other):
        return isinstance(other, RootSystem) and other.label == self.label

    def __hash__(self):
        return hash(("RootSystem", self.label))

    @property
    def simple_roots(self):
        return self.positive_roots[:self.rank]

    @property
    def size(self):
        return len(self.positive_roots)

    def _symmetrize(self):
        # d_i = (α_i, α_i) / 2, normalized to 1 on the first node of each
        # component
        d = [None] * self.rank
        for comp in self.components:
            d[comp[0]] = Fraction(1)
            queue = deque([comp[0]])
            while queue:
                i = queue.popleft()
                for j in comp:
                    if d[j] is None and self.cartan[i][j]:
                        d[j] = d[i] * self.cartan[i][j] / self.cartan[j][i]
                        queue.append(j)
        return tuple(d)

    def _generate_roots(self):
        rank = self.rank
        simple = [tuple(int(i == j) for j in range(rank))
                  for i in range(rank)]
        found = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for j in range(rank):
                    if beta == simple[j]:
                        continue
                    # α_j-string through β: β - pα_j, ..., β + qα_j
                    p = 0
                    lower = list(beta)
                    while True:
                        lower[j] -= 1
                        if tuple(lower) not in found:
                            break
                        p += 1
                    q = p - self.pairing(beta, j)
                    if q > 0:
                        upper = list(beta)
                        upper[j] += 1
                        upper = tuple(upper)
                        if upper not in found:
                            found.add(upper)
                            nxt.append(upper)
            layer = nxt
        return tuple(sorted(found, key=lambda r: (sum(r),
                                                  tuple(-c for c in r))))

    # roots

    def pairing(self, beta, i):
        """<β, α_i∨>"""
        row = self.cartan[i]
        return sum(row[j] * beta[j] for j in range(self.rank) if beta[j])

    def reflect(self, beta, i):
        """s_i(β) = β - <β, α_i∨>α_i"""
        c = self.pairing(beta, i)
        if not c:
            return tuple(beta)
        out = list(beta)
        out[i] -= c
        return tuple(out)

    def inner(self, x, y):
        """W-invariant form with (α_i, α_i) = 2 d_i"""
        total = Fraction(0)
        for i in range(self.rank):
            if not x[i]:
                continue
            for j in range(self.rank):
                if y[j] and self.cartan[i][j]:
                    total += x[i] * y[j] * self.symmetrizer[i] \
                        * self.cartan[i][j]
        return total

    def coroot_pairing(self, beta, gamma):
        """<β, γ∨> for a root γ"""
        value = 2 * self.inner(beta, gamma) / self.inner(gamma, gamma)
        assert value.denominator == 1
        return int(value)

    def reflect_in(self, gamma, beta):
        """s_γ(β) = β - <β, γ∨>γ"""
        c = self.coroot_pairing(beta, gamma)
        return tuple(b - c * g for b, g in zip(beta, gamma))

    def is_long(self, beta):
        top = max(self.symmetrizer[i] for i in self.component_of(beta))
        return self.inner(beta, beta) == 2 * top

    def is_simply_laced(self):
        return all(x in (0, -1) for i, row in enumerate(self.cartan)
                   for j, x in enumerate(row) if i != j)

    def index_of(self, beta):
        """Index of a positive root, None when β is not one"""
        return self._index.get(tuple(beta))

    def is_root(self, beta):
        beta = tuple(beta)
        return beta in self._index or tuple(-c for c in beta) in self._index

    def is_positive(self, beta):
        return any(c > 0 for c in beta)

    def _signed_index(self, beta):
        k = self._index.get(beta)
        if k is not None:
            return k + 1
        k = self._index.get(tuple(-c for c in beta))
        if k is None:
            raise RootError("%r is not a root of %s" % (beta, self.label))
        return -(k + 1)

    def _from_signed(self, signed):
        root = self.positive_roots[abs(signed) - 1]
        return root if signed > 0 else tuple(-c for c in root)

    def height(self, beta):
        return sum(beta)

    def support(self, beta):
        """Simple root indices with nonzero coefficient in β"""
        return frozenset(i for i, c in enumerate(beta) if c)

    def component_of(self, beta):
        supp = self.support(beta)
        return next(c for c in self.components if supp & set(c))

    def highest_roots(self):
        """Highest root of every irreducible component"""
        out = []
        for comp in self.components:
            roots = [r for r in self.positive_roots
                     if self.support(r) <= set(comp)]
            out.append(max(roots, key=sum))
        return out

    def dominates(self, beta, gamma):
        """γ ≤ β in dominance order, i.e. β - γ ∈ ℕΔ"""
        return all(b >= g for b, g in zip(beta, gamma))

    def is_connected(self, indices):
        """Whether a set of simple roots spans a connected Dynkin subgraph"""
        indices = set(indices)
        if not indices:
            return False
        start = next(iter(indices))
        seen = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in indices:
                if j not in seen and self.cartan[i][j]:
                    seen.add(j)
                    queue.append(j)
        return seen == indices

    def root_to_weight(self, beta):
        """Coordinates of a root in the fundamental weight basis"""
        return tuple(self.pairing(beta, j) for j in range(self.rank))


class WeylElement(object):
    """Weyl group element as the signed image of every positive root

    ``images[k] = ±(m + 1)`` records ``w(β_k) = ±β_m``.
    """

    __slots__ = "rs", "images", "_word", "_length", "_mask"

    def __init__(self, rs, images):
        self.rs = rs
        self.images = tuple(images)
        self._word = None
        self._length = None
        self._mask = None

    @classmethod
    def identity(cls, rs):
        return cls(rs, range(1, rs.size + 1))

    @classmethod
    def simple(cls, rs, i):
        return cls(rs, rs._simple_images[i])

    @classmethod
    def from_word(cls, rs, word):
        """Product s_{i1}⋯s_{ik} of 0-based letters"""
        w = cls.identity(rs)
        for i in reversed(tuple(word)):
            if not 0 <= i < rs.rank:
                raise RootError("Simple index %d out of range for %s"
                                % (i + 1, rs.label))
            w = w.left(i)
        return w

    @classmethod
    def reflection(cls, rs, gamma):
        """Reflection s_γ in a root γ"""
        return cls(rs, (rs._signed_index(rs.reflect_in(gamma, beta))
                        for beta in rs.positive_roots))

    @classmethod
    def longest(cls, rs):
        w = cls.identity(rs)
        while True:
            ascents = [i for i in range(rs.rank) if w.images[i] > 0]
            if not ascents:
                return w
            w = w.right(ascents[0])

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.images == self.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "WeylElement(%s)" % self.format_word()

    def __mul__(self, other):
        """Group product"""
        u = self.images
        return WeylElement(self.rs, (u[x - 1] if x > 0 else -u[-x - 1]
                                     for x in other.images))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return self.length, self.word

    def act(self, beta):
        """w(β) for ± a root β"""
        signed = self.rs._signed_index(tuple(beta))
        x = self.images[abs(signed) - 1]
        return self.rs._from_signed(x if signed > 0 else -x)

    def act_index(self, k):
        """Signed index of w(β_k)"""
        return self.images[k]

    def left(self, i):
        """s_i · w"""
        s = self.rs._simple_images[i]
        return WeylElement(self.rs, (s[x - 1] if x > 0 else -s[-x - 1]
                                     for x in self.images))

    def right(self, i):
        """w · s_i"""
        return self * WeylElement.simple(self.rs, i)

    def inverse(self):
        inv = [0] * len(self.images)
        for k, x in enumerate(self.images):
            inv[abs(x) - 1] = (k + 1) if x > 0 else -(k + 1)
        return WeylElement(self.rs, inv)

    @property
    def length(self):
        if self._length is None:
            self._length = sum(1 for x in self.images if x < 0)
        return self._length

    @property
    def inversion_mask(self):
        """Bitmask of Φ⁺(w) over positive-root indices"""
        if self._mask is None:
            mask = 0
            for k, x in enumerate(self.images):
                if x < 0:
                    mask |= 1 << k
            self._mask = mask
        return self._mask

    def inverts(self, k):
        return self.images[k] < 0

    def left_descents(self):
        """i with l(s_i w) < l(w), i.e. w⁻¹(α_i) < 0"""
        rank = self.rs.rank
        return sorted(-x - 1 for x in self.images if -rank <= x < 0)

    def right_descents(self):
        return [i for i in range(self.rs.rank) if self.images[i] < 0]

    @property
    def word(self):
        """Lexicographically least reduced word, 0-based letters"""
        if self._word is None:
            word = []
            w = self
            while w.length:
                i = w.left_descents()[0]
                word.append(i)
                w = w.left(i)
            self._word = tuple(word)
        return self._word

    def format_word(self):
        return ",".join(str(i + 1) for i in self.word) or "e"

    def reduced_words(self):
        """Every reduced word of w"""
        return _reduced_words(self)

    def act_weight(self, mu):
        """w(μ) for μ in fundamental weight coordinates"""
        cartan = self.rs.cartan
        mu = list(mu)
        for i in reversed(self.word):
            c = mu[i]
            if c:
                for j in range(self.rs.rank):
                    mu[j] -= c * cartan[j][i]
        return tuple(mu)


@functools.lru_cache(maxsize=None)
def _reduced_words(w):
    if not w.length:
        return ((),)
    words = []
    for i in w.left_descents():
        for tail in _reduced_words(w.left(i)):
            words.append((i,) + tail)
    return tuple(sorted(words))


def build_root_system(label, config=None):
    """Build the root system of a Cartan type label

    :param str label: e.g. ``"A2"``, ``"B3"``, ``"A1xG2"``.
    :param config: Settings dict, the active settings when omitted.
    :type config: dict or None
    :rtype: RootSystem
    :raises RootSystemError: Unknown type token.
    :raises BudgetError: More positive roots than allowed.
    """
    factors = parse_label(label)
    normal = "x".join("%s%d" % f for f in factors)
    return _build(normal, _config.get("max_positive_roots", config))


@functools.lru_cache(maxsize=64)
def _build(label, max_roots):
    count = positive_root_count(label)
    if count > max_roots:
        raise BudgetError("%s has %d positive roots, cap is %d"
                          % (label, count, max_roots))

    factors = parse_label(label)
    rank = sum(r for _, r in factors)
    cartan = np.zeros((rank, rank), dtype=int)
    components = []
    offset = 0
    for letter, r in factors:
        cartan[offset:offset + r, offset:offset + r] = cartan_matrix(letter, r)
        components.append(range(offset, offset + r))
        offset += r

    rs = RootSystem(label, cartan.tolist(), factors, components)
    assert rs.size == count, (label, rs.size, count)
    log.debug("Built %s: rank %d, %d positive roots",
              label, rs.rank, rs.size)
    return rs


def weyl_act(w, beta):
    """w(β); raises RootError when β is not ± a root"""
    return w.act(beta)


def inversion_set(w):
    """Φ⁺(w) = {α ∈ Φ⁺ : w(α) < 0}"""
    roots = w.rs.positive_roots
    return frozenset(roots[k] for k, x in enumerate(w.images) if x < 0)


def enumerate_weyl(rs, config=None):
    """Every element of W, sorted by (length, canonical word)

    :raises BudgetError: |W| above the configured cap.
    """
    cap = _config.get("max_weyl", config)
    order = weyl_order(rs.label)
    if order > cap:
        raise BudgetError("|W(%s)| = %d exceeds the cap %d"
                          % (rs.label, order, cap))
    return _enumerate(rs)


@functools.lru_cache(maxsize=32)
def _enumerate(rs):
    layer = [WeylElement.identity(rs)]
    seen = set(layer)
    elements = list(layer)
    while layer:
        nxt = []
        for w in layer:
            descents = set(w.left_descents())
            for i in range(rs.rank):
                if i in descents:
                    continue
                u = w.left(i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        elements.extend(nxt)
        layer = nxt
    elements.sort(key=WeylElement.sort_key)
    assert len(elements) == weyl_order(rs.label)
    log.debug("Enumerated W(%s): %d elements", rs.label, len(elements))
    return tuple(elements)


def demazure_product(v, w):
    """v * w in the 0-Hecke monoid"""
    result = w
    for i in reversed(v.word):
        u = result.left(i)
        if u.length > result.length:
            result = u
    return result


class ClosedSubsystem(object):
    """Φ_S = ℤS ∩ Φ with its positive part, basis and Weyl group order"""

    __slots__ = "rs", "generators", "roots", "basis", "parabolic", \
        "_weyl_order"

    def __init__(self, rs, generators, roots, basis, parabolic):
        self.rs = rs
        self.generators = generators
        self.roots = roots          # positive part, frozenset
        self.basis = basis          # sorted tuple
        self.parabolic = parabolic
        self._weyl_order = None

    @property
    def rank(self):
        return len(self.basis)

    @property
    def weyl_order(self):
        if self._weyl_order is None:
            self._weyl_order = len(reflection_group(self.rs, self.basis))
        return self._weyl_order

    @property
    def mask(self):
        mask = 0
        for beta in self.roots:
            mask |= 1 << self.rs.index_of(beta)
        return mask

    def __eq__(self, other):
        return isinstance(other, ClosedSubsystem) and \
            other.rs == self.rs and other.roots == self.roots

    def __hash__(self):
        return hash((self.rs, self.roots))

    def __repr__(self):
        return "ClosedSubsystem(%s, basis=%r)" % (self.rs.label,
                                                   list(self.basis))


def rational_rank(vectors):
    """Rank over ℚ of integer vectors"""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    return sympy.Matrix(vectors).rank()


def subsystem_closure(rs, roots):
    """ℤS ∩ Φ for S ⊆ Φ⁺

    :param RootSystem rs: Ambient system.
    :param roots: Positive roots S.
    :rtype: ClosedSubsystem
    """
    return _closure(rs, frozenset(tuple(r) for r in roots))


@functools.lru_cache(maxsize=4096)
def _closure(rs, generators):
    for beta in generators:
        if rs.index_of(beta) is None:
            raise RootError("%r is not a positive root of %s"
                            % (beta, rs.label))

    lattice = IntegerLattice(rs.rank, generators)
    positive = frozenset(r for r in rs.positive_roots if r in lattice)

    span = rational_rank(generators)
    rational = frozenset(r for r in rs.positive_roots
                         if rational_rank(list(generators) + [r]) == span)

    basis = []
    for beta in sorted(positive, key=rs.index_of):
        decomposable = any(
            tuple(b - g for b, g in zip(beta, gamma)) in positive
            for gamma in positive if gamma != beta
        )
        if not decomposable:
            basis.append(beta)

    return ClosedSubsystem(rs, generators, positive, tuple(basis),
                           positive == rational)


def reflection_group(rs, roots):
    """Elements of the subgroup of W generated by s_γ, γ in roots"""
    return _group(rs, frozenset(tuple(r) for r in roots))


@functools.lru_cache(maxsize=1024)
def _group(rs, roots):
    gens = [WeylElement.reflection(rs, g) for g in sorted(roots)]
    identity = WeylElement.identity(rs)
    seen = {identity}
    queue = deque([identity])
    while queue:
        w = queue.popleft()
        for s in gens:
            u = w * s
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return tuple(sorted(seen, key=WeylElement.sort_key))
