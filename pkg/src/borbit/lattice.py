"""
Integer lattices through their Hermite normal form

Generators are collected as given; the basis is the column HNF computed by
sympy on first use. Membership reduces a vector against the HNF columns,
lowest pivot first. Used for ℤS ∩ Φ.
"""
import sympy
from sympy.matrices.normalforms import hermite_normal_form

__all__ = (
    "IntegerLattice",
)


class IntegerLattice(object):
    """Sublattice of ℤ^N spanned by added vectors"""

    __slots__ = "dimension", "generators", "_basis", "_pivots"

    def __init__(self, dimension, generators=()):
        self.dimension = dimension
        self.generators = []
        self._basis = None
        self._pivots = None
        for vec in generators:
            self.add_vector(vec)

    def add_vector(self, vec):
        vec = tuple(int(c) for c in vec)
        if len(vec) != self.dimension:
            raise ValueError("Expected %d coordinates, got %r"
                             % (self.dimension, vec))
        if any(vec):
            self.generators.append(vec)
            self._basis = None

    @property
    def basis(self):
        """HNF columns, each zero below its pivot row"""
        if self._basis is None:
            self._basis, self._pivots = _hnf_columns(self.generators,
                                                     self.dimension)
        return self._basis

    @property
    def rank(self):
        return len(self.basis)

    def __contains__(self, vec):
        vec = [int(c) for c in vec]
        if len(vec) != self.dimension:
            return False
        basis = self.basis
        # lowest pivot row first
        for column, p in sorted(zip(basis, self._pivots),
                                key=lambda item: -item[1]):
            if any(vec[p + 1:]):
                return False
            q, r = divmod(vec[p], column[p])
            if r:
                return False
            if q:
                vec = [x - q * c for x, c in zip(vec, column)]
        return not any(vec)


def _hnf_columns(generators, dimension):
    if not generators:
        return (), ()
    matrix = sympy.Matrix(generators).T
    hnf = hermite_normal_form(matrix)
    columns, pivots = [], []
    for j in range(hnf.cols):
        column = tuple(int(x) for x in hnf[:, j])
        nonzero = [i for i in range(dimension) if column[i]]
        if nonzero:
            columns.append(column)
            pivots.append(nonzero[-1])
    return tuple(columns), tuple(pivots)
