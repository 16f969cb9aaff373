
__version__ = "0.1.0"


def package_info():
    """Package location plus the versions of the exact-arithmetic stack"""
    import numpy
    import sympy
    import borbit
    return dict(
        name=borbit.__package__,
        version=__version__,
        path=borbit.__path__[0],
        numpy=numpy.__version__,
        sympy=sympy.__version__,
    )


def print_info():
    import sys
    info = package_info()
    py = sys.version_info
    print("{name} {version} from {path}".format(**info))
    print("python {x}.{y}, numpy {numpy}, sympy {sympy}".format(
        x=py.major, y=py.minor, **info))
