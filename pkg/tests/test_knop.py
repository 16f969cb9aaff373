from borbit.knop import (
    BoundReport,
    orbit_count,
    class_preorder,
    maximal_classes,
    max_rank_reduction,
    knop_check,
    pi_subsystem,
)
from borbit.exceptions import (
    ClassOrderWarning,
    InconsistentSpecError,
    NotMaxRankError,
    RootError,
    ValidationError,
)
from .util import TestBase, spec, tu, h_spec, all_fixtures, randomized


def split_a3():
    """A3 with classes {α1+α2, α3} and {α1}"""
    return spec("A3", [(1, 0, 0), (1, 1, 0), (0, 0, 1)], [[1, 2], [0]],
                name="split-a3")


class TestClassOrder(TestBase):

    def test_h_spec_order(self):
        s = h_spec()
        self.assertEqual(frozenset([(0, 0), (1, 1), (0, 1)]),
                         class_preorder(s))
        self.assertEqual(((1,),), maximal_classes(s))

    def test_incomparable(self):
        self.assertEqual(((0,), (1,)), maximal_classes(tu("A2")))

    def test_transitive(self):
        s = spec("A3", [(1, 0, 0), (1, 1, 0), (1, 1, 1)], [[0], [1], [2]])
        self.assertIn((0, 2), class_preorder(s))
        self.assertEqual(((2,),), maximal_classes(s))

    def test_equivalent_classes(self):
        # α1 ≤ α1+α2 and α3 ≤ α2+α3 across the two classes
        s = spec("A3", [(1, 0, 0), (0, 1, 1), (1, 1, 0), (0, 0, 1)],
                 [[0, 1], [2, 3]])
        with self.assertWarns(ClassOrderWarning):
            blocks = maximal_classes(s)
        self.assertEqual(((0, 1),), blocks)


class TestReduction(TestBase):

    def test_h_spec_unchanged(self):
        s = h_spec()
        reduced = max_rank_reduction(s)
        self.assertEqual(s, reduced)
        self.assertEqual("reduction of h-spec", reduced.name)
        self.assertTrue(reduced.is_max_rank)

    def test_covering_representative(self):
        s = split_a3()
        reduced = max_rank_reduction(s)
        self.assertEqual(((1, 1, 0), (1, 0, 0)), reduced.psi)
        self.assertEqual(((0,), (1,)), reduced.classes)
        self.assertEqual(0, reduced.torus_corank)

    def test_explicit_representative(self):
        s = split_a3()
        self.assertEqual(max_rank_reduction(s),
                         max_rank_reduction(s, {0: (1, 1, 0)}))
        # F(α3) misses the class of α1
        with self.assertRaises(InconsistentSpecError):
            max_rank_reduction(s, {0: (0, 0, 1)})
        with self.assertRaises(RootError):
            max_rank_reduction(s, {0: (1, 0, 0)})

    def test_representatives_in_rank_two(self):
        for s in randomized():
            if s.rs.rank > 2 or not s.psi:
                continue
            for block in maximal_classes(s):
                for D in block:
                    counts = set()
                    for beta in s.members(D):
                        try:
                            reduced = max_rank_reduction(s, {D: beta})
                            counts.add(orbit_count(reduced))
                        except (InconsistentSpecError, ValidationError):
                            continue
                    self.assertLessEqual(len(counts), 1, repr(s))


class TestBounds(TestBase):

    def test_h_spec(self):
        report = knop_check(h_spec())
        self.assertEqual((13, 13, True),
                         (report.count_h, report.count_tu, report.satisfied))
        self.assertEqual(h_spec(), report.reduction_spec)
        self.assertEqual("count=13 reduction=13 tu-prime=13 ok",
                         report.format())

    def test_tu_prime_equality(self):
        for name, s in all_fixtures():
            report = knop_check(s)
            self.assertTrue(report.chain_holds, name)
            if name.startswith("TU'"):
                self.assertEqual(report.count_tu, report.count_h)

    def test_split_a3_chain(self):
        report = knop_check(split_a3())
        self.assertEqual((41, 52, 75), (report.count_h,
                                        report.count_reduction,
                                        report.count_tu))
        self.assertTrue(report.satisfied)

    def test_empty_psi(self):
        self.assertEqual(6, orbit_count(spec("A2", [], [])))
        self.assertEqual(8, orbit_count(spec("B2", [], [])))

    def test_random_chain(self):
        for s in randomized():
            report = knop_check(s)
            self.assertTrue(report.satisfied and report.chain_holds,
                            "%r: %s" % (s, report.format()))

    def test_violated_format(self):
        report = BoundReport(14, 13, False, h_spec(), 13)
        self.assertFalse(report.chain_holds)
        self.assertTrue(report.format().endswith("VIOLATED"))


class TestPiSubsystem(TestBase):

    def test_full(self):
        result = pi_subsystem(h_spec(), [0, 1])
        self.assertEqual(((1, 0), (0, 1)), result.basis)
        self.assertEqual(6, result.weyl_order)
        self.assertEqual(6, result.phi_order)
        self.assertTrue(result.isomorphic_expected)
        self.assertTrue(result.holds)

    def test_single_class(self):
        result = pi_subsystem(h_spec(), [1])
        self.assertEqual(frozenset([1]), result.I)
        self.assertEqual(((1, 0),), result.basis)
        self.assertEqual((2, 2), (result.weyl_order, result.phi_order))

    def test_empty(self):
        result = pi_subsystem(tu("B2"), [])
        self.assertEqual((), result.basis)
        self.assertEqual(1, result.weyl_order)
        self.assertFalse(result.isomorphic_expected)

    def test_tu_prime(self):
        for name, s in all_fixtures():
            full = s.full_mask
            result = pi_subsystem(s, full)
            self.assertEqual(result.phi_order, result.weyl_order, name)

    def test_not_max_rank(self):
        with self.assertRaises(NotMaxRankError):
            pi_subsystem(split_a3(), [0])
