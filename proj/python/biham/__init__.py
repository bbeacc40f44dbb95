"""Symbolic verification of bihamiltonian systems of hydrodynamic type
under linear reciprocal transformations."""

try:
    from ._biham import *  # noqa: F401,F403  (installed layout)
    from ._biham import __doc__ as _doc
except ImportError:  # build-tree layout: _biham.so next to the package
    from _biham import *  # noqa: F401,F403
    from _biham import __doc__ as _doc

__doc__ = _doc
