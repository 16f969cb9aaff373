from borbit import config
from borbit.rootsys import WeylElement, enumerate_weyl, weyl_order
from borbit.orbits import (
    OrbitId,
    ExtendedPair,
    orbit_space,
    shift_set,
    reduce_pair,
    extend_pair,
    is_reduced,
    is_extended,
    enumerate_orbits,
    brute_count,
    closed_orbits,
    open_orbit,
    weyl_action,
    weyl_action_coset,
    monoid_action,
    stabilizer,
    w_orbit,
    w_orbit_decomposition,
    palpha_decompose,
    closure_leq_sufficient,
    orbit_of_sharp,
    weak_order_edges,
    weak_order_dot,
    minimal_orbits,
    format_orbit,
    parse_orbit,
)
from borbit.knop import orbit_count
from borbit.exceptions import BudgetError, OrbitStringError
from .util import (
    TestBase,
    spec,
    tu,
    h_spec,
    all_fixtures,
    small_fixtures,
    randomized,
)


def word(rs, *letters):
    """Weyl element of a 1-based word"""
    return WeylElement.from_word(rs, [i - 1 for i in letters])


class TestPairs(TestBase):

    def test_shift(self):
        s = h_spec()
        rs = s.rs
        self.assertEqual(frozenset(), shift_set(s, word(rs, 1, 2), []))
        self.assertEqual(frozenset([0, 1]),
                         shift_set(s, WeylElement.identity(rs), []))

    def test_extend(self):
        s = h_spec()
        e = WeylElement.identity(s.rs)
        self.assertEqual(ExtendedPair(e, frozenset([0, 1])),
                         extend_pair(s, e, []))
        self.assertTrue(is_extended(s, e, [0, 1]))
        self.assertFalse(is_extended(s, e, []))

    def test_reduce(self):
        s = h_spec()
        w = word(s.rs, 1, 2)
        self.assertFalse(is_reduced(s, w, [0, 1]))
        self.assertEqual(OrbitId(w, frozenset([0])),
                         reduce_pair(s, w, [0, 1]))
        self.assertTrue(is_reduced(s, w, [0]))

    def test_reduce_extend_interval(self):
        for _, s in small_fixtures():
            space = orbit_space(s)
            for record in enumerate_orbits(s):
                w = record.id.w
                low, high = (sum(1 << D for D in I) for I in record.interval)
                self.assertEqual(0, low & ~high)
                self.assertEqual(low, space.reduce(w, low))
                self.assertEqual(low, space.reduce(w, high))
                self.assertTrue(space.is_extended(w, high))


class TestCounts(TestBase):

    def test_fixture_counts(self):
        expected = {"TU'(A1)": 3, "TU'(A2)": 13, "TU'(B2)": 17,
                    "TU'(G2)": 25, "TU'(A3)": 75, "h-spec": 13}
        for name, s in all_fixtures():
            self.assertEqual(expected[name], orbit_count(s), name)
            self.assertEqual(expected[name], brute_count(s), name)
            self.assertEqual(expected[name], len(enumerate_orbits(s)), name)

    def test_empty_psi(self):
        for label in ("A1", "A2", "B2"):
            s = spec(label, [], [])
            self.assertEqual(weyl_order(label), orbit_count(s))
            self.assertEqual(weyl_order(label), brute_count(s))

    def test_random_counts(self):
        for s in randomized():
            self.assertEqual(orbit_count(s), brute_count(s), repr(s))

    def test_budget(self):
        settings = config.load_config({"max_weyl": 5}, environ={})
        with self.assertRaises(BudgetError):
            enumerate_orbits(h_spec(), settings)

    def test_workers(self):
        s = tu("A3")
        serial = enumerate_orbits(s)
        settings = config.load_config({"workers": 4}, environ={})
        self.assertEqual(serial, enumerate_orbits(s, settings))
        self.assertEqual(75, brute_count(s, settings))


class TestRecords(TestBase):

    def test_ordering(self):
        records = enumerate_orbits(h_spec())
        keys = [r.id.sort_key() for r in records]
        self.assertEqual(sorted(keys), keys)
        self.assertEqual("w=e;I=-", format_orbit(records[0].id))

    def test_closed(self):
        s = h_spec()
        names = {format_orbit(o) for o in closed_orbits(s)}
        self.assertEqual({"w=e;I=-", "w=2;I=-", "w=1,2;I=-"}, names)
        for r in enumerate_orbits(s):
            if r.closed:
                self.assertEqual((0, 0), (r.rank_offset, r.dim_offset))

    def test_open(self):
        s = h_spec()
        self.assertEqual("w=1,2,1;I=0,1", format_orbit(open_orbit(s)))
        top = [r for r in enumerate_orbits(s) if r.codim == 0]
        self.assertEqual([open_orbit(s)], [r.id for r in top])
        # dim B for SL3
        self.assertEqual(5, top[0].dim)

    def test_tu_prime_closed(self):
        names = [format_orbit(o) for o in closed_orbits(tu("A1"))]
        self.assertEqual(["w=e;I=-", "w=1;I=-"], names)

    def test_as_dict(self):
        record = enumerate_orbits(h_spec())[-1]
        doc = record.as_dict()
        self.assertEqual("w=1,2,1;I=0,1", doc["orbit"])
        self.assertEqual([0, 1], doc["M"])
        self.assertEqual(6, doc["stabilizer_order"])
        self.assertIn("dim", doc)

    def test_offsets_without_corank(self):
        s = spec("A2", [(0, 1), (1, 1)], [[0], [1]])
        for r in enumerate_orbits(s):
            self.assertIsNone(r.dim)
            self.assertNotIn("dim", r.as_dict())


class TestActions(TestBase):

    def test_weyl_examples(self):
        s = h_spec()
        rs = s.rs
        w0 = WeylElement.longest(rs)
        orbit = OrbitId(w0, frozenset([0]))
        self.assertEqual(orbit, weyl_action(s, word(rs, 1), orbit))
        self.assertEqual(OrbitId(word(rs, 1, 2), frozenset([0])),
                         weyl_action(s, word(rs, 2), orbit))

    def test_trivial_stabilizer_block(self):
        s = h_spec()
        rs = s.rs
        for v in enumerate_weyl(rs):
            for w in enumerate_weyl(rs):
                self.assertEqual(
                    OrbitId(v * w, frozenset()),
                    weyl_action(s, v, OrbitId(w, frozenset())))

    def test_reduced_words_agree(self):
        for _, s in small_fixtures():
            space = orbit_space(s)
            for record in enumerate_orbits(s):
                w, mask = record.id.w, sum(1 << D for D in record.id.I)
                for v in enumerate_weyl(s.rs):
                    results = set()
                    for letters in v.reduced_words():
                        u, m = w, mask
                        for i in reversed(letters):
                            u, m = space.simple_act(i, u, m)
                        results.add(u)
                    self.assertEqual(1, len(results))
                    self.assertEqual(
                        weyl_action_coset(s, v, record.id),
                        weyl_action(s, v, record.id))

    def test_group_action(self):
        s = h_spec()
        elements = enumerate_weyl(s.rs)
        for record in enumerate_orbits(s):
            for u in elements:
                inner = weyl_action(s, u, record.id)
                for v in elements:
                    self.assertEqual(weyl_action(s, v * u, record.id),
                                     weyl_action(s, v, inner))

    def test_w_orbits(self):
        for _, s in all_fixtures():
            blocks = w_orbit_decomposition(s)
            self.assertEqual(2 ** s.class_count, len(blocks))
            order = weyl_order(s.rs.label)
            for I, members in blocks.items():
                self.assertEqual(sorted(members, key=OrbitId.sort_key),
                                 w_orbit(s, members[0]))
                size, _ = stabilizer(s, members[0])
                self.assertEqual(order // len(members), size)

    def test_stabilizer(self):
        s = h_spec()
        w0 = WeylElement.longest(s.rs)
        self.assertEqual((2, frozenset([(1, 0)])),
                         stabilizer(s, OrbitId(w0, frozenset([0]))))
        self.assertEqual(6, stabilizer(s, OrbitId(w0, frozenset([0, 1])))[0])

    def test_rejects_non_reduced(self):
        s = h_spec()
        with self.assertRaises(OrbitStringError):
            weyl_action(s, word(s.rs, 1),
                        OrbitId(word(s.rs, 1, 2), frozenset([0, 1])))


class TestMonoid(TestBase):

    def test_example(self):
        s = h_spec()
        e = WeylElement.identity(s.rs)
        pair = ExtendedPair(e, frozenset([0, 1]))
        self.assertEqual(ExtendedPair(word(s.rs, 1), frozenset([0, 1])),
                         monoid_action(s, word(s.rs, 1), pair))

    def test_idempotent_and_longest(self):
        for _, s in small_fixtures():
            rs = s.rs
            w0 = WeylElement.longest(rs)
            top = ExtendedPair(w0, frozenset(s.class_labels))
            for record in enumerate_orbits(s):
                pair = record.extended
                for i in range(rs.rank):
                    si = WeylElement.simple(rs, i)
                    once = monoid_action(s, si, pair)
                    self.assertEqual(once, monoid_action(s, si, once))
                self.assertEqual(top, monoid_action(s, w0, pair))

    def test_rejects_non_extended(self):
        s = h_spec()
        e = WeylElement.identity(s.rs)
        with self.assertRaises(OrbitStringError):
            monoid_action(s, e, ExtendedPair(e, frozenset()))


class TestParabolics(TestBase):

    def test_decompositions(self):
        for _, s in small_fixtures():
            for record in enumerate_orbits(s):
                for i in range(s.rs.rank):
                    parts = palpha_decompose(s, i, record.id)
                    self.assertIn(parts.case, ("U", "T1", "T2", "T-neg"))
                    expected = 2 if parts.case == "U" else 3
                    self.assertEqual(expected, len(set(parts.constituents)))
                    self.assertIn(record.id, parts.constituents)

    def test_rank_one(self):
        s = tu("A1")
        e = WeylElement.identity(s.rs)
        parts = palpha_decompose(s, 0, OrbitId(e, frozenset()))
        self.assertEqual("T-neg", parts.case)
        self.assertEqual("w=1;I=0", format_orbit(parts.open))

    def test_closure_sufficient(self):
        s = h_spec()
        rs = s.rs
        w0 = WeylElement.longest(rs)
        self.assertTrue(closure_leq_sufficient(
            s, OrbitId(word(rs, 1, 2), frozenset()),
            OrbitId(w0, frozenset([0, 1]))))
        self.assertFalse(closure_leq_sufficient(
            s, OrbitId(word(rs, 1), frozenset()),
            OrbitId(word(rs, 2), frozenset([0]))))

    def test_orbit_of_sharp(self):
        s = h_spec()
        self.assertEqual("w=1,2,1;I=0,1",
                         format_orbit(orbit_of_sharp(s, [0, 1])))
        # s_θ is the longest element of A2
        self.assertEqual("w=1,2,1;I=1", format_orbit(orbit_of_sharp(s, [1])))
        self.assertEqual("w=2;I=0", format_orbit(orbit_of_sharp(s, [0])))
        self.assertEqual("w=e;I=-", format_orbit(orbit_of_sharp(s, [])))


class TestWeakOrder(TestBase):

    def test_unique_sink(self):
        for _, s in all_fixtures():
            edges = weak_order_edges(s)
            sources = {a for a, _, _ in edges}
            sinks = [r.id for r in enumerate_orbits(s)
                     if r.id not in sources]
            self.assertEqual([open_orbit(s)], sinks)

    def test_minimal_is_in_degree_zero(self):
        specs = [s for _, s in all_fixtures()] + randomized()[:30]
        for s in specs:
            targets = {b for _, b, _ in weak_order_edges(s)}
            expected = [r.id for r in enumerate_orbits(s)
                        if r.id not in targets]
            minimal = minimal_orbits(s)
            self.assertEqual(expected, minimal, repr(s))
            for orbit in closed_orbits(s):
                self.assertIn(orbit, minimal)

    def test_dot(self):
        dot = weak_order_dot(h_spec())
        lines = dot.splitlines()
        self.assertEqual("digraph weak_order {", lines[0])
        self.assertEqual("}", lines[-1])
        self.assertIn('"w=1,2,1;I=0,1" [peripheries=2]', lines)
        self.assertIn('"w=e;I=-" [style=bold]', lines)
        edges = [line for line in lines if "->" in line]
        self.assertEqual(len(weak_order_edges(h_spec())), len(edges))


class TestNaming(TestBase):

    def test_parse(self):
        s = h_spec()
        orbit = parse_orbit(s, "w=1,2,1;I=0")
        self.assertEqual(OrbitId(WeylElement.longest(s.rs), frozenset([0])),
                         orbit)
        self.assertEqual("w=1,2,1;I=0", format_orbit(orbit))
        self.assertEqual("w=2,1;I=-",
                         format_orbit(parse_orbit(s, " w=2,1 ; I=- ")))
        self.assertEqual("w=e;I=-", str(parse_orbit(s, "w=e;I=")))

    def test_parse_noncanonical_word(self):
        s = h_spec()
        self.assertEqual("w=1,2,1;I=1",
                         format_orbit(parse_orbit(s, "w=2,1,2;I=1")))

    def test_parse_reduce(self):
        s = h_spec()
        self.assertEqual("w=1,2;I=0",
                         format_orbit(parse_orbit(s, "w=1,2;I=0,1",
                                                  reduce=True)))
        with self.assertRaises(OrbitStringError):
            parse_orbit(s, "w=1,2;I=0,1")

    def test_malformed(self):
        s = h_spec()
        for text in ("", "x", "w=1", "w=3;I=-", "w=a;I=-", "w=1;I=5",
                     "w=1;I=x", "I=0;w=1"):
            with self.assertRaises(OrbitStringError, msg=text):
                parse_orbit(s, text)
