"""
Command line front end

    $ borbit count spec.json
    $ borbit act h-spec --orbit "w=1,2,1;I=0" --word 1
    $ borbit weak-order "TU'(A2)" --dot > weak.dot

Exit codes: 0 ok, 1 validation failure, 2 usage error, 3 budget exceeded.
"""
import os
import sys
import json
import logging
import argparse

from . import config, report
from .rootsys import WeylElement, build_root_system
from .activeroots import (
    fixtures,
    load_spec,
    dumps_spec,
    tu_prime,
    validate,
    require_valid,
)
from .exceptions import (
    BorbitError,
    BudgetError,
    ValidationError,
    InconsistentSpecError,
    OrbitStringError,
)

log = logging.getLogger("borbit")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def main(argv=None):
    parser = argparse.ArgumentParser(
        "borbit", description="B-orbit combinatorics of strongly solvable "
                              "spherical subgroups")
    setup_parser(parser)
    try:
        opts = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    return command(opts, parser)


def setup_parser(parser):
    parser.add_argument("--version", action="store_true",
                        help="Print out version of this package.")
    parser.add_argument("--debug", action="store_true",
                        help="Print debug messages.")
    parser.add_argument("--max-weyl", type=int, metavar="N",
                        help="Largest Weyl group order to enumerate.")
    parser.add_argument("--workers", type=int, metavar="N",
                        help="Worker threads for per-I fan-out.")

    verbs = parser.add_subparsers(dest="verb", metavar="VERB")

    def verb(name, func, help_, spec=True):
        sub = verbs.add_parser(name, help=help_)
        if spec:
            sub.add_argument("spec", help="Spec JSON file or bundled fixture "
                                          "name, e.g. h-spec or TU'(A2).")
        sub.set_defaults(func=func)
        return sub

    verb("validate", _validate, "Check the realizability axioms.")
    verb("count", _count, "Orbit count by formula and brute force.")

    sub = verb("orbits", _orbits, "List every orbit.")
    sub.add_argument("--closed", action="store_true",
                     help="Only closed orbits.")
    sub.add_argument("--format", choices=("table", "json"), default="table")

    for name, func, help_ in (
            ("act", _act, "Weyl group action on an orbit."),
            ("mact", _mact, "Monoid action on an orbit.")):
        sub = verb(name, func, help_)
        sub.add_argument("--orbit", required=True,
                         help='Orbit string, e.g. "w=1,2;I=0".')
        sub.add_argument("--word", required=True,
                         help="1-based simple indices, rightmost acts "
                              "first; 'e' for the identity.")

    sub = verb("stab", _stab, "Stabilizer of an orbit in W.")
    sub.add_argument("--orbit", required=True)

    sub = verb("polytope", _polytope, "Export every subpolytope as JSON.")
    sub.add_argument("--lambda", dest="lam", metavar="C1,..,CN",
                     help="Regular dominant weight, rho when omitted.")
    sub.add_argument("--output", metavar="PATH")

    sub = verb("weak-order", _weak_order, "Weak order of the orbits.")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--dot", action="store_true",
                       help="DOT digraph (default).")
    group.add_argument("--minimal", action="store_true",
                       help="List the minimal orbits.")

    verb("knop", _knop, "Orbit-count bound against TU'.")

    sub = verb("tu-prime", _tu_prime, "Write the TU' spec of a type.",
               spec=False)
    sub.add_argument("--type", dest="label", required=True,
                     help="Cartan type label, e.g. A2.")
    sub.add_argument("--output", metavar="PATH")


def command(opts, parser=None):
    handler = report.init_logging()

    if opts.debug:
        handler.setLevel(logging.DEBUG)

    if opts.version:
        from ._version import print_info
        print_info()
        return EXIT_OK

    if not opts.verb:
        if parser is not None:
            parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        settings = config.load_config({"max_weyl": opts.max_weyl,
                                       "workers": opts.workers})
    except BorbitError as e:
        log.error(str(e))
        return EXIT_USAGE

    previous = config.swap(settings)
    try:
        return opts.func(opts) or EXIT_OK
    except ValidationError as e:
        print(e.report.format(), file=sys.stderr)
        return EXIT_INVALID
    except InconsistentSpecError as e:
        log.error(str(e))
        return EXIT_INVALID
    except BudgetError as e:
        log.error(str(e))
        return EXIT_BUDGET
    except BorbitError as e:
        log.error(str(e))
        return EXIT_USAGE
    finally:
        config.swap(previous)


# helpers

def _load(opts, checked=True):
    bundled = fixtures()
    if opts.spec in bundled and not os.path.exists(opts.spec):
        spec = bundled[opts.spec]
    else:
        spec = load_spec(opts.spec)
    if checked:
        require_valid(spec)
    return spec


def _word(spec, text):
    text = text.strip()
    if text in ("", "e"):
        return WeylElement.identity(spec.rs)
    try:
        letters = [int(t) - 1 for t in text.split(",")]
    except ValueError:
        raise OrbitStringError("Malformed word %r" % text)
    if any(not 0 <= i < spec.rs.rank for i in letters):
        raise OrbitStringError("Word letters must be in 1..%d"
                               % spec.rs.rank)
    return WeylElement.from_word(spec.rs, letters)


def _write(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        log.info("Wrote %s", path)
    else:
        print(text)


# verbs

def _validate(opts):
    spec = _load(opts, checked=False)
    result = validate(spec)
    print(result.format())
    return EXIT_OK if result.ok else EXIT_INVALID


def _count(opts):
    from .knop import orbit_count
    from .orbits import brute_count

    spec = _load(opts)
    formula = orbit_count(spec)
    if not config.get("brute_force"):
        print("formula=%d" % formula)
        return EXIT_OK
    brute = brute_count(spec)
    agree = formula == brute
    print("formula=%d brute=%d %s" % (formula, brute,
                                      "ok" if agree else "MISMATCH"))
    return EXIT_OK if agree else EXIT_INVALID


def _orbits(opts):
    from .orbits import enumerate_orbits, format_orbit

    spec = _load(opts)
    records = [r for r in enumerate_orbits(spec)
               if r.closed or not opts.closed]
    if opts.format == "json":
        print(json.dumps([r.as_dict() for r in records], indent=2,
                         sort_keys=True))
        return

    rows = [("orbit", "extended", "rank_offset", "dim_offset", "codim",
             "closed")]
    for r in records:
        rows.append((format_orbit(r.id), format_orbit(r.extended),
                     str(r.rank_offset), str(r.dim_offset), str(r.codim),
                     "yes" if r.closed else ""))
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    for row in rows:
        print("  ".join(c.ljust(n) for c, n in zip(row, widths)).rstrip())


def _act(opts):
    from .orbits import parse_orbit, weyl_action, format_orbit

    spec = _load(opts)
    orbit = parse_orbit(spec, opts.orbit)
    print(format_orbit(weyl_action(spec, _word(spec, opts.word), orbit)))


def _mact(opts):
    from .orbits import (
        parse_orbit,
        extend_pair,
        monoid_action,
        reduce_pair,
        format_orbit,
    )

    spec = _load(opts)
    orbit = parse_orbit(spec, opts.orbit)
    pair = monoid_action(spec, _word(spec, opts.word),
                         extend_pair(spec, orbit.w, orbit.I))
    print(format_orbit(reduce_pair(spec, pair.w, pair.I)))


def _stab(opts):
    from .orbits import parse_orbit, stabilizer

    spec = _load(opts)
    order, roots = stabilizer(spec, parse_orbit(spec, opts.orbit))
    print("order=%d" % order)
    for beta in sorted(roots, key=spec.rs.index_of):
        print("reflection %s" % ",".join(str(c) for c in beta))


def _polytope(opts):
    from .polytope import export_json, parse_lambda

    spec = _load(opts)
    lam = parse_lambda(opts.lam) if opts.lam else None
    _write(export_json(spec, lam), opts.output)


def _weak_order(opts):
    from .orbits import weak_order_dot, minimal_orbits, format_orbit

    spec = _load(opts)
    if opts.minimal:
        for orbit in minimal_orbits(spec):
            print(format_orbit(orbit))
    else:
        print(weak_order_dot(spec))


def _knop(opts):
    from .knop import knop_check

    spec = _load(opts)
    result = knop_check(spec)
    print(result.format())
    return EXIT_OK if result.satisfied and result.chain_holds \
        else EXIT_INVALID


def _tu_prime(opts):
    spec = tu_prime(build_root_system(opts.label))
    _write(dumps_spec(spec), opts.output)
