import os
import time
import random
import shutil
import unittest
import tempfile

from borbit import config
from borbit.rootsys import build_root_system
from borbit.activeroots import (
    ActiveRootSpec,
    fixtures,
    h_spec,
    tu_prime,
    random_specs,
)


class TestBase(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls._tempdir = None
        cls.settings = dict()

    def setUp(self):
        self.setup_config()

    def tearDown(self):
        self.teardown_config()
        self.teardown_tempdir()

    def setup_config(self):
        settings = config.load_config(self.settings, environ={})
        self._config = config.swap(settings)

    def teardown_config(self):
        config.swap(self._config)
        self._config = None

    def teardown_tempdir(self):
        if not self._tempdir:
            return
        # cleanup tempdir
        retries = 5
        if os.path.exists(self._tempdir):
            for i in range(retries):
                try:
                    shutil.rmtree(self._tempdir)
                    break
                except Exception:
                    if i < (retries - 1):
                        time.sleep(0.2)
        self._tempdir = None

    def make_tempdir(self):
        self._tempdir = tempfile.mkdtemp(prefix="borbit_test_")
        return self._tempdir


def tu(label):
    return tu_prime(build_root_system(label))


def spec(label, psi, classes, torus_corank=None, name=""):
    return ActiveRootSpec.create(build_root_system(label), psi, classes,
                                 torus_corank, name=name)


def all_fixtures():
    """Bundled fixtures, name -> spec, in a stable order"""
    bundled = fixtures()
    return [(name, bundled[name]) for name in sorted(bundled)]


def small_fixtures():
    """Fixtures with |W| small enough for per-orbit polytope work"""
    return [(name, s) for name, s in all_fixtures()
            if s.rs.label in ("A1", "A2", "B2", "G2")]


_random_cache = {}


def randomized(count=100, seed=20241017):
    """Validated random specs over A1-A3, B2 and G2, drawn once per session"""
    key = count, seed
    if key not in _random_cache:
        _random_cache[key] = random_specs(random.Random(seed), count,
                                          attempts=count * 200)
    return _random_cache[key]


__all__ = (
    "TestBase",
    "tu",
    "spec",
    "h_spec",
    "all_fixtures",
    "small_fixtures",
    "randomized",
)
