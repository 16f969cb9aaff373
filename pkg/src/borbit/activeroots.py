"""
Active-root data (Ψ, δ-partition) of a strongly solvable spherical subgroup

The δ-fibers of Ψ are the input; everything downstream is computed from them.
Validation checks necessary realizability conditions only.
"""
import json
import logging
import functools
import itertools
from fractions import Fraction
from typing import Optional, Tuple
from dataclasses import dataclass, field

import sympy

from . import config as _config
from .rootsys import (
    RootSystem,
    WeylElement,
    build_root_system,
    cartan_matrix,
    rational_rank,
)
from .exceptions import (
    BudgetError,
    RootError,
    SpecFormatError,
    ValidationError,
    InconsistentSpecError,
    NotInSpanError,
)

log = logging.getLogger("borbit")


__all__ = (
    "ActiveRootSpec",
    "ValidationReport",
    "Violation",

    "family",
    "pi",
    "classify_root_type",
    "validate",
    "require_valid",
    "tu_prime",
    "h_spec",
    "fixtures",
    "eval_pairing",
    "eval_vector",
    "spherical_roots",
    "connected_coconnected",

    "loads_spec",
    "load_spec",
    "dumps_spec",
    "random_specs",
    "as_mask",
    "mask_labels",
)


@dataclass(frozen=True)
class ActiveRootSpec:
    rs: RootSystem
    psi: Tuple[Tuple[int, ...], ...]
    classes: Tuple[Tuple[int, ...], ...]
    torus_corank: Optional[int] = None
    name: str = field(default="", compare=False)

    @classmethod
    def create(cls, rs, psi, classes, torus_corank=None, name=""):
        return cls(rs,
                   tuple(tuple(int(c) for c in beta) for beta in psi),
                   tuple(tuple(int(k) for k in block) for block in classes),
                   torus_corank,
                   name)

    def __repr__(self):
        return "ActiveRootSpec(%s, psi=%r, classes=%r)" % (
            self.name or self.rs.label, list(self.psi), list(self.classes))

    @property
    def class_count(self):
        return len(self.classes)

    @property
    def class_labels(self):
        return tuple(range(len(self.classes)))

    @property
    def full_mask(self):
        return (1 << len(self.classes)) - 1

    @functools.cached_property
    def delta_map(self):
        """Active root -> class label"""
        out = {}
        for label, block in enumerate(self.classes):
            for k in block:
                out[self.psi[k]] = label
        return out

    def delta(self, beta):
        try:
            return self.delta_map[tuple(beta)]
        except KeyError:
            raise RootError("%r is not an active root" % (beta,))

    def members(self, label):
        """The δ-fiber Ψ_D"""
        return tuple(self.psi[k] for k in self.classes[label])

    def psi_of(self, mask):
        """Ψ_I for a class bitmask I"""
        return tuple(beta for beta in self.psi
                     if mask >> self.delta_map[beta] & 1)

    @property
    def is_max_rank(self):
        return all(len(block) == 1 for block in self.classes)


def as_mask(I):
    """Class subset as int bitmask; accepts a bitmask or iterable labels"""
    if isinstance(I, int):
        return I
    mask = 0
    for label in I:
        mask |= 1 << label
    return mask


def mask_labels(mask):
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


# families, π and root types

def family(spec, beta):
    """F(β) = {β' ∈ Ψ : β' ≤ β}

    :raises RootError: When β is not active.
    """
    beta = tuple(beta)
    if beta not in spec.delta_map:
        raise RootError("%r is not an active root" % (beta,))
    return frozenset(b for b in spec.psi if spec.rs.dominates(beta, b))


def _max_multiple(beta, gamma):
    # largest a with aγ < β
    a = min(b // g for b, g in zip(beta, gamma) if g)
    while a and all(a * g == b for b, g in zip(beta, gamma)):
        a -= 1
    return a


def maximal_elements(rs, roots):
    roots = list(roots)
    return [b for b in roots
            if not any(c != b and rs.dominates(c, b) for c in roots)]


def pi_vector(spec, beta, within=None):
    """β - Σ a_γ γ over the maximal elements of F(β) ∖ {β}

    ``within`` restricts the family to a subset of Ψ (used for β♯_I).
    """
    beta = tuple(beta)
    rest = [b for b in family(spec, beta) if b != beta]
    if within is not None:
        rest = [b for b in rest if b in within]
    out = list(beta)
    for gamma in maximal_elements(spec.rs, rest):
        a = _max_multiple(beta, gamma)
        for i, g in enumerate(gamma):
            out[i] -= a * g
    return tuple(out)


def _simple_index(vec):
    if sum(vec) == 1 and all(c in (0, 1) for c in vec):
        return vec.index(1)
    return None


def pi(spec, beta):
    """The simple root π(β)

    :raises InconsistentSpecError: When the formula does not give a simple
        root with coefficient 1 in β.
    """
    vec = pi_vector(spec, beta)
    i = _simple_index(vec)
    if i is None or beta[i] != 1:
        raise InconsistentSpecError("π(%r) = %r is not a simple root "
                                    "of coefficient 1" % (beta, vec))
    return vec


def _path_order(rs, support):
    support = sorted(support)
    degree = {i: sum(1 for j in support if j != i and rs.cartan[i][j])
              for i in support}
    if any(d > 2 for d in degree.values()):
        return None
    ends = [i for i in support if degree[i] <= 1]
    if not ends:
        return None
    path = [ends[0]]
    while len(path) < len(support):
        nxt = [j for j in support
               if j not in path and rs.cartan[path[-1]][j]]
        if len(nxt) != 1:
            return None
        path.append(nxt[0])
    return path


def _root_type_row(rs, beta):
    support = sorted(rs.support(beta))
    if all(beta[i] == 1 for i in support):
        return 1
    path = _path_order(rs, support)
    if path is None:
        return None

    k = len(path)
    rows = []
    for orient in (path, path[::-1]):
        sub = [[rs.cartan[i][j] for j in orient] for i in orient]
        coeffs = tuple(beta[i] for i in orient)
        rows.append((sub, coeffs))

    def matches(letter, expected):
        if letter in "BC" and k < 2:
            return False
        if letter == "F" and k != 4 or letter == "G" and k != 2:
            return False
        target = cartan_matrix(letter, k).tolist()
        return any(sub == target and coeffs == expected
                   for sub, coeffs in rows)

    if matches("B", (1,) * (k - 1) + (2,)):
        return 2
    if matches("C", (2,) * (k - 1) + (1,)):
        return 3
    if matches("F", (1, 1, 2, 2)):
        return 4
    if matches("G", (2, 1)):
        return 5
    if matches("G", (3, 1)):
        return 6
    return None


def classify_root_type(spec, beta):
    """Active-root type 1..6 of β, read off its support shape

    :raises InconsistentSpecError: When no type matches.
    """
    family(spec, beta)
    row = _root_type_row(spec.rs, tuple(beta))
    if row is None:
        raise InconsistentSpecError("%r matches no active-root type"
                                    % (beta,))
    return row


def connected_coconnected(rs, support, avoid):
    """Nonempty A ⊆ support, connected, with support ∖ A connected, avoid ∉ A"""
    candidates = sorted(set(support) - {avoid})
    out = []
    for r in range(1, len(candidates) + 1):
        for subset in itertools.combinations(candidates, r):
            rest = set(support) - set(subset)
            if rs.is_connected(subset) and rs.is_connected(rest):
                out.append(frozenset(subset))
    return out


# validation

@dataclass
class Violation:
    __slots__ = "axiom", "message", "roots"
    axiom: str
    message: str
    roots: tuple


@dataclass
class ValidationReport:
    __slots__ = "violations",
    violations: list

    @property
    def ok(self):
        return not self.violations

    def format(self):
        if self.ok:
            return "ok"
        lines = ["%d violation(s):" % len(self.violations)]
        for v in self.violations:
            roots = ", ".join(str(list(r)) for r in v.roots)
            lines.append("  %s: %s%s" % (v.axiom, v.message,
                                         " [%s]" % roots if roots else ""))
        return "\n".join(lines)

    def raise_for_violations(self):
        if not self.ok:
            raise ValidationError(self)

    def as_dict(self):
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v.axiom,
                 "message": v.message,
                 "roots": [list(r) for r in v.roots]}
                for v in self.violations
            ],
        }


def _check_structure(spec, add):
    rs = spec.rs
    for k, beta in enumerate(spec.psi):
        if len(beta) != rs.rank or rs.index_of(beta) is None:
            add("A1", "active root #%d is not a positive root of %s"
                % (k, rs.label), (beta,))
    if len(set(spec.psi)) != len(spec.psi):
        add("A1", "duplicate active roots", ())
    flat = sorted(k for block in spec.classes for k in block)
    if flat != list(range(len(spec.psi))):
        add("A1", "classes do not partition the active-root indices", ())
    if any(not block for block in spec.classes):
        add("A1", "empty class", ())
    if spec.torus_corank is not None and (
            not isinstance(spec.torus_corank, int) or spec.torus_corank < 0):
        add("A1", "torus_corank must be a nonnegative integer", ())


def _check_axioms(spec, add):
    rs = spec.rs
    psi = spec.psi
    families = {beta: family(spec, beta) for beta in psi}
    pis = {}

    for beta in psi:
        row = _root_type_row(rs, beta)
        vec = pi_vector(spec, beta)
        i = _simple_index(vec)
        if row is None:
            add("A2", "matches no active-root type", (beta,))
        if i is None or beta[i] != 1:
            add("A2", "π(β) = %r is not a simple root of coefficient 1"
                % (list(vec),), (beta,))
        else:
            pis[beta] = i

    for beta in psi:
        fam = families[beta]
        images = [pis.get(b) for b in fam]
        if None in images or len(set(images)) != len(fam) \
                or set(images) != set(rs.support(beta)):
            add("A3", "π does not map F(β) bijectively onto supp(β)",
                (beta,))

        if rational_rank(fam) != len(fam):
            add("A4", "F(β) is linearly dependent", (beta,))
        if len({spec.delta(b) for b in fam}) != len(fam):
            add("A4", "δ is not injective on F(β)", (beta,))

        for b in fam:
            if b == beta:
                continue
            diff = tuple(x - y for x, y in zip(beta, b))
            if rs.index_of(diff) is None:
                add("A7", "β - β' is not a positive root", (beta, b))

        if beta in pis:
            supports = {rs.support(b) for b in fam if b != beta}
            for subset in connected_coconnected(rs, rs.support(beta),
                                                pis[beta]):
                if subset not in supports:
                    add("A8", "support %s has no family member"
                        % sorted(i + 1 for i in subset), (beta,))

        for b in psi:
            inside = rs.support(b) <= rs.support(beta)
            if inside != (b in fam):
                add("A9", "family membership disagrees with support "
                    "inclusion", (beta, b))

    for b1, b2 in itertools.combinations(psi, 2):
        if b1 in pis and b2 in pis and pis[b1] == pis[b2] \
                and spec.delta(b1) != spec.delta(b2):
            add("A5", "equal π but different δ", (b1, b2))

    if psi:
        matrix = sympy.Matrix([list(beta) for beta in psi]).T
        for null in matrix.nullspace():
            for label, block in enumerate(spec.classes):
                if sum(null[k] for k in block) != 0:
                    add("A6", "eval(D%d, ·) does not extend linearly"
                        % label, spec.members(label))

    diffs = [tuple(x - y for x, y in zip(b1, b2))
             for block in spec.classes
             for b1, b2 in itertools.combinations(
                 [psi[k] for k in block], 2)]
    kernel = rational_rank(diffs)
    m = spec.class_count
    if m + kernel > rs.rank:
        add("A10", "%d classes and %d-dimensional fiber differences exceed "
            "rank %d" % (m, kernel, rs.rank), ())
    # a central torus puts no upper bound on the corank
    if spec.torus_corank is not None and spec.torus_corank < kernel:
        add("A10", "torus_corank %d below fiber difference rank %d"
            % (spec.torus_corank, kernel), ())


def _check_weak(spec, add):
    from .weak import WeakRootTable
    try:
        table = WeakRootTable(spec)
    except InconsistentSpecError as e:
        add("A11", str(e), ())
        return
    for mask in range(spec.full_mask + 1):
        try:
            table.check(mask)
        except InconsistentSpecError as e:
            add("A11", "I = %s: %s" % (sorted(mask_labels(mask)), e), ())


@functools.lru_cache(maxsize=1024)
def validate(spec):
    """Check the necessary realizability axioms A1-A11

    :type spec: ActiveRootSpec
    :rtype: ValidationReport
    """
    violations = []

    def add(axiom, message, roots):
        violations.append(Violation(axiom, message, tuple(roots)))

    _check_structure(spec, add)
    if violations:
        return ValidationReport(violations)

    _check_axioms(spec, add)
    if not violations:
        _check_weak(spec, add)

    log.debug("Validated %r: %d violation(s)", spec, len(violations))
    return ValidationReport(violations)


def require_valid(spec, config=None):
    """Raise unless the spec validates and fits the class budget"""
    cap = _config.get("max_classes", config)
    if spec.class_count > cap:
        raise BudgetError("%d classes exceed the cap %d"
                          % (spec.class_count, cap))
    validate(spec).raise_for_violations()
    return spec


# fixtures

def tu_prime(rs):
    """Ψ = Δ with singleton classes"""
    return ActiveRootSpec.create(
        rs, rs.simple_roots, [[i] for i in range(rs.rank)],
        torus_corank=0, name="TU'(%s)" % rs.label)


def h_spec():
    rs = build_root_system("A2")
    return ActiveRootSpec.create(rs, [(0, 1), (1, 1)], [[0], [1]],
                                 torus_corank=0, name="h-spec")


def fixtures():
    """Named fixture specs"""
    out = {"h-spec": h_spec()}
    for label in ("A1", "A2", "B2", "G2", "A3"):
        spec = tu_prime(build_root_system(label))
        out[spec.name] = spec
    return out


# valuations

@functools.lru_cache(maxsize=8192)
def _coordinates(spec, x):
    if not spec.psi:
        if any(x):
            raise NotInSpanError("%r is not in the span of Ψ = ∅" % (x,))
        return ()
    matrix = sympy.Matrix([list(beta) for beta in spec.psi]).T
    rhs = sympy.Matrix(list(x))
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        raise NotInSpanError("%r is not in the rational span of Ψ" % (x,))
    solution = solution.subs({p: 0 for p in params})
    return tuple(Fraction(int(c.p), int(c.q)) for c in solution)


def eval_vector(spec, x):
    """(eval(D, x))_D for every class label D"""
    coords = _coordinates(spec, tuple(int(c) for c in x))
    return tuple(-sum((coords[k] for k in block), Fraction(0))
                 for block in spec.classes)


def eval_pairing(spec, D, x):
    """Value of the valuation functional w₀ρ(D) on x ∈ ℚΨ

    :raises NotInSpanError: x is outside ℚΨ.
    """
    return eval_vector(spec, x)[D]


def spherical_roots(spec):
    """-w₀(Σ) with Σ the union of the supports of Ψ"""
    rs = spec.rs
    w0 = WeylElement.longest(rs)
    sigma = set()
    for beta in spec.psi:
        sigma |= rs.support(beta)
    out = set()
    for i in sigma:
        image = w0.act(rs.simple_roots[i])
        out.add(tuple(-c for c in image))
    return frozenset(out)


# spec documents

_keys = {"root_system", "active_roots", "classes", "torus_corank"}


def loads_spec(text, config=None):
    """Parse a JSON spec document

    Structural problems of the data (non-roots, bad partitions) are left to
    `validate`; only malformed documents raise.

    :raises SpecFormatError: Unreadable document or wrong field types.
    """
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise SpecFormatError("Invalid JSON: %s" % e)
    if not isinstance(doc, dict):
        raise SpecFormatError("Spec document must be a JSON object")
    unknown = set(doc) - _keys
    if unknown:
        raise SpecFormatError("Unknown spec field(s): %s"
                              % ", ".join(sorted(unknown)))
    for key in ("root_system", "active_roots", "classes"):
        if key not in doc:
            raise SpecFormatError("Missing spec field %r" % key)

    label = doc["root_system"]
    if not isinstance(label, str):
        raise SpecFormatError("root_system must be a string")

    def int_rows(key):
        rows = doc[key]
        if not isinstance(rows, list) or not all(
                isinstance(row, list) and all(
                    isinstance(c, int) and not isinstance(c, bool)
                    for c in row)
                for row in rows):
            raise SpecFormatError("%s must be a list of integer lists" % key)
        return rows

    psi = int_rows("active_roots")
    classes = int_rows("classes")
    corank = doc.get("torus_corank")
    if corank is not None and (not isinstance(corank, int)
                               or isinstance(corank, bool)):
        raise SpecFormatError("torus_corank must be an integer")

    rs = build_root_system(label, config)
    return ActiveRootSpec.create(rs, psi, classes, corank)


def load_spec(path, config=None):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SpecFormatError("Cannot read %s: %s" % (path, e))
    spec = loads_spec(text, config)
    return ActiveRootSpec.create(spec.rs, spec.psi, spec.classes,
                                 spec.torus_corank, name=str(path))


def dumps_spec(spec):
    doc = {
        "root_system": spec.rs.label,
        "active_roots": [list(beta) for beta in spec.psi],
        "classes": [list(block) for block in spec.classes],
    }
    if spec.torus_corank is not None:
        doc["torus_corank"] = spec.torus_corank
    return json.dumps(doc, indent=2)


# randomized specs

def _random_partition(rng, n):
    labels = [rng.randrange(n) for _ in range(n)]
    blocks = {}
    for k, label in enumerate(labels):
        blocks.setdefault(label, []).append(k)
    return sorted(blocks.values())


def random_specs(rng, count, labels=("A1", "A2", "A3", "B2", "G2"),
                 attempts=None):
    """Randomized specs passing `validate`

    Alternates between random subsets of Φ⁺ with random partitions, kept only
    when valid, and subsets of Δ with any partition.

    :param random.Random rng: Seeded generator.
    :param int count: Number of specs returned.
    :rtype: list[ActiveRootSpec]
    """
    attempts = attempts or count * 50
    out = []
    for n in range(attempts):
        if len(out) >= count:
            break
        rs = build_root_system(rng.choice(labels))
        if n % 2:
            psi = [beta for beta in rs.simple_roots if rng.random() < 0.6]
        else:
            psi = [beta for beta in rs.positive_roots if rng.random() < 0.4]
        rng.shuffle(psi)
        classes = _random_partition(rng, len(psi)) if psi else []
        spec = ActiveRootSpec.create(rs, psi, classes,
                                     name="random-%d" % n)
        if validate(spec).ok:
            out.append(spec)
    log.debug("Random specs: %d valid out of %d drawn", len(out), n + 1)
    return out
