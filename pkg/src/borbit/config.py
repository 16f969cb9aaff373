"""
Package settings, overridable from environment and command line
"""
import os
import logging

from .exceptions import BorbitError

log = logging.getLogger("borbit")


borbit = {
    # largest Weyl group order enumerated (E6 fits)
    "max_weyl": 51840,

    # largest number of positive roots accepted by build_root_system
    "max_positive_roots": 40,

    # largest number of δ-classes; class subsets are int bitmasks
    "max_classes": 32,

    # thread workers for per-I fan-out, 1 means serial
    "workers": 1,

    # also run the independent brute-force orbit count in `count`
    "brute_force": True,
}

schema_dict = {
    "max_weyl": int,
    "max_positive_roots": int,
    "max_classes": int,
    "workers": int,
    "brute_force": bool,
}

environ_keys = {
    "BORBIT_MAX_WEYL": "max_weyl",
    "BORBIT_WORKERS": "workers",
}


def load_config(overrides=None, environ=None):
    """Return a fresh settings dict

    Defaults are overridden by `BORBIT_*` environment variables, which are
    in turn overridden by `overrides`.

    :param overrides: Explicit settings, e.g. parsed command line flags.
    :type overrides: dict or None
    :param environ: Environment mapping, `os.environ` when not given.
    :type environ: dict or None
    :return: Type-checked settings
    :rtype: dict
    :raises BorbitError: On unknown keys or wrongly typed values.
    """
    environ = os.environ if environ is None else environ
    settings = dict(borbit)

    for env_key, key in environ_keys.items():
        value = environ.get(env_key)
        if value is None or value == "":
            continue
        try:
            settings[key] = schema_dict[key](value)
        except ValueError:
            raise BorbitError("%s=%r is not a valid %s"
                              % (env_key, value, schema_dict[key].__name__))

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        settings[key] = value

    _check(settings)
    return settings


def _check(settings):
    for key, value in settings.items():
        if key not in schema_dict:
            raise BorbitError("Unknown setting %r" % key)
        expected = schema_dict[key]
        # bool is an int subclass
        if not isinstance(value, expected) or (
                expected is int and isinstance(value, bool)):
            raise BorbitError("Setting %r expects %s, got %r"
                              % (key, expected.__name__, value))
        if expected is int and value < 1:
            raise BorbitError("Setting %r must be positive, got %r"
                              % (key, value))


_active = None


def settings():
    """Return the active settings, loading them on first use"""
    global _active
    if _active is None:
        _active = load_config()
    return _active


def swap(new_settings):
    """Replace the active settings and return the previous ones

    :param new_settings: Settings dict, or None to reload on next access.
    :type new_settings: dict or None
    :rtype: dict or None
    """
    global _active
    previous = _active
    if new_settings is not None:
        _check(new_settings)
    _active = new_settings
    log.debug("Active settings swapped: %s", new_settings)
    return previous


def get(key, config=None):
    return (config or settings())[key]
