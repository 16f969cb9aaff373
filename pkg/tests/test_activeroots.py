import os
import json
from fractions import Fraction

from borbit.rootsys import build_root_system
from borbit.activeroots import (
    family,
    pi,
    classify_root_type,
    validate,
    require_valid,
    tu_prime,
    eval_pairing,
    eval_vector,
    spherical_roots,
    connected_coconnected,
    loads_spec,
    load_spec,
    dumps_spec,
    as_mask,
    mask_labels,
)
from borbit.exceptions import (
    RootError,
    SpecFormatError,
    ValidationError,
    InconsistentSpecError,
    NotInSpanError,
    RootSystemError,
)
from .util import TestBase, spec, tu, h_spec, all_fixtures, randomized


class TestSpec(TestBase):

    def test_tu_prime(self):
        for label, size in (("A1", 1), ("A2", 2), ("B2", 2), ("A3", 3)):
            s = tu(label)
            self.assertEqual(size, len(s.psi))
            self.assertEqual(size, s.class_count)
            self.assertEqual(0, s.torus_corank)
            self.assertTrue(s.is_max_rank)

    def test_class_access(self):
        s = h_spec()
        self.assertEqual((0, 1), s.class_labels)
        self.assertEqual(3, s.full_mask)
        self.assertEqual(1, s.delta((1, 1)))
        self.assertEqual(((0, 1),), s.members(0))
        self.assertEqual(((1, 1),), s.psi_of(0b10))
        with self.assertRaises(RootError):
            s.delta((1, 0))

    def test_masks(self):
        self.assertEqual(0b101, as_mask([0, 2]))
        self.assertEqual(0b101, as_mask(0b101))
        self.assertEqual(frozenset([0, 2]), mask_labels(0b101))
        self.assertEqual(frozenset(), mask_labels(0))

    def test_family(self):
        s = h_spec()
        self.assertEqual(frozenset([(0, 1), (1, 1)]), family(s, (1, 1)))
        self.assertEqual(frozenset([(0, 1)]), family(s, (0, 1)))
        self.assertEqual(frozenset([(1, 0)]), family(tu("A2"), (1, 0)))
        with self.assertRaises(RootError):
            family(s, (1, 0))

    def test_pi(self):
        s = h_spec()
        self.assertEqual((1, 0), pi(s, (1, 1)))
        self.assertEqual((0, 1), pi(s, (0, 1)))
        self.assertEqual((1, 0), pi(tu("A2"), (1, 0)))

    def test_pi_not_simple(self):
        s = spec("A2", [(1, 1)], [[0]])
        with self.assertRaises(InconsistentSpecError):
            pi(s, (1, 1))

    def test_root_types(self):
        self.assertEqual(1, classify_root_type(tu("A2"), (0, 1)))
        self.assertEqual(1, classify_root_type(h_spec(), (1, 1)))
        self.assertEqual(2, classify_root_type(spec("B2", [(1, 2)], [[0]]),
                                            (1, 2)))
        self.assertEqual(5, classify_root_type(spec("G2", [(2, 1)], [[0]]),
                                            (2, 1)))
        self.assertEqual(6, classify_root_type(spec("G2", [(3, 1)], [[0]]),
                                            (3, 1)))
        with self.assertRaises(InconsistentSpecError):
            classify_root_type(spec("G2", [(3, 2)], [[0]]), (3, 2))

    def test_connected_coconnected(self):
        rs = build_root_system("A3")
        self.assertEqual([frozenset([2]), frozenset([1, 2])],
                         connected_coconnected(rs, {0, 1, 2}, 0))
        self.assertEqual([], connected_coconnected(rs, {1}, 1))


class TestValidate(TestBase):

    def test_fixtures_validate(self):
        for name, s in all_fixtures():
            report = validate(s)
            self.assertTrue(report.ok, "%s: %s" % (name, report.format()))
            self.assertEqual("ok", report.format())

    def test_empty_psi(self):
        s = spec("A2", [], [])
        self.assertTrue(validate(s).ok)
        self.assertEqual(0, s.full_mask)

    def test_non_root(self):
        report = validate(spec("A1", [(2,)], [[0]]))
        self.assertFalse(report.ok)
        self.assertEqual(["A1"], [v.axiom for v in report.violations])
        self.assertEqual([(2,)], list(report.violations[0].roots))

    def test_bad_partition(self):
        report = validate(spec("A2", [(1, 0), (0, 1)], [[0]]))
        self.assertIn("A1", {v.axiom for v in report.violations})
        report = validate(spec("A2", [(1, 0)], [[0], []]))
        self.assertIn("A1", {v.axiom for v in report.violations})

    def test_lonely_sum(self):
        # F(α1+α2) has one member but the support has two
        report = validate(spec("A2", [(1, 1)], [[0]]))
        axioms = {v.axiom for v in report.violations}
        self.assertIn("A3", axioms)
        self.assertIn("A2", axioms)

    def test_torus_corank_lower_bound(self):
        # α1+α2 and α3 share a class, their difference spans one dimension
        psi = [(1, 0, 0), (1, 1, 0), (0, 0, 1)]
        s = spec("A3", psi, [[1, 2], [0]], torus_corank=0)
        axioms = {v.axiom for v in validate(s).violations}
        self.assertEqual({"A10"}, axioms)
        for corank in (1, 4):
            report = validate(spec("A3", psi, [[1, 2], [0]],
                                   torus_corank=corank))
            self.assertNotIn("A10", {v.axiom for v in report.violations})

    def test_central_torus(self):
        # GL2 / U: the corank exceeds the semisimple rank
        self.assertTrue(validate(spec("A1", [], [], torus_corank=2)).ok)
        s = spec("A2", [(0, 1), (1, 1)], [[0], [1]], torus_corank=1)
        self.assertTrue(validate(s).ok)

    def test_require_valid(self):
        with self.assertRaises(ValidationError) as ctx:
            require_valid(spec("A2", [(1, 1)], [[0]]))
        self.assertFalse(ctx.exception.report.ok)
        self.assertEqual(h_spec(), require_valid(h_spec()))

    def test_report_dict(self):
        doc = validate(spec("A1", [(2,)], [[0]])).as_dict()
        self.assertFalse(doc["ok"])
        self.assertEqual("A1", doc["violations"][0]["axiom"])
        self.assertEqual([[2]], doc["violations"][0]["roots"])

    def test_random_specs(self):
        specs = randomized()
        self.assertEqual(100, len(specs))
        labels = {s.rs.label for s in specs}
        self.assertGreater(len(labels), 2)
        for s in specs:
            self.assertTrue(validate(s).ok, repr(s))


class TestValuations(TestBase):

    def test_eval_on_psi(self):
        for name, s in all_fixtures():
            for beta in s.psi:
                values = eval_vector(s, beta)
                for D in s.class_labels:
                    expected = -1 if D == s.delta(beta) else 0
                    self.assertEqual(expected, values[D], name)

    def test_eval_linear_extension(self):
        s = h_spec()
        # α1 = θ - α2
        self.assertEqual(Fraction(-1), eval_pairing(s, 1, (1, 0)))
        self.assertEqual(Fraction(1), eval_pairing(s, 0, (1, 0)))

    def test_eval_outside_span(self):
        with self.assertRaises(NotInSpanError):
            eval_vector(spec("A2", [(1, 0)], [[0]]), (0, 1))
        with self.assertRaises(NotInSpanError):
            eval_vector(spec("A2", [], []), (1, 0))
        self.assertEqual((), eval_vector(spec("A2", [], []), (0, 0)))

    def test_spherical_roots(self):
        self.assertEqual(frozenset([(1, 0), (0, 1)]),
                         spherical_roots(tu("A2")))
        self.assertEqual(frozenset([(1, 0), (0, 1)]),
                         spherical_roots(h_spec()))
        self.assertEqual(frozenset([(1,)]), spherical_roots(tu("A1")))
        # -w0 swaps the ends of A3
        self.assertEqual(frozenset([(0, 0, 1)]),
                         spherical_roots(spec("A3", [(1, 0, 0)], [[0]])))


class TestSpecDocuments(TestBase):

    def test_round_trip(self):
        s = h_spec()
        loaded = loads_spec(dumps_spec(s))
        self.assertEqual(s, loaded)
        doc = json.loads(dumps_spec(s))
        self.assertEqual({"root_system": "A2",
                          "active_roots": [[0, 1], [1, 1]],
                          "classes": [[0], [1]],
                          "torus_corank": 0}, doc)

    def test_optional_corank(self):
        s = loads_spec('{"root_system": "B2", "active_roots": [[1, 0]], '
                       '"classes": [[0]]}')
        self.assertIsNone(s.torus_corank)
        self.assertNotIn("torus_corank", json.loads(dumps_spec(s)))

    def test_malformed_documents(self):
        bad = [
            "{",
            "[]",
            '{"root_system": "A2", "active_roots": [], "classes": [], '
            '"extra": 1}',
            '{"root_system": "A2", "classes": []}',
            '{"root_system": 2, "active_roots": [], "classes": []}',
            '{"root_system": "A2", "active_roots": [[1, "0"]], '
            '"classes": [[0]]}',
            '{"root_system": "A2", "active_roots": [[true, 0]], '
            '"classes": [[0]]}',
            '{"root_system": "A2", "active_roots": [], "classes": [], '
            '"torus_corank": true}',
        ]
        for text in bad:
            with self.assertRaises(SpecFormatError, msg=text):
                loads_spec(text)

    def test_unknown_type(self):
        with self.assertRaises(RootSystemError):
            loads_spec('{"root_system": "Q2", "active_roots": [], '
                       '"classes": []}')

    def test_load_file(self):
        path = os.path.join(self.make_tempdir(), "h.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(dumps_spec(h_spec()))
        s = load_spec(path)
        self.assertEqual(h_spec(), s)
        self.assertEqual(path, s.name)

        with self.assertRaises(SpecFormatError):
            load_spec(os.path.join(self._tempdir, "missing.json"))
