"""Exact finite models of Steinberg algebras, Leavitt path algebras and their centralisers.

Modules:

* :mod:`steinberg.scalars` -- coefficient rings (integers, rationals, integers mod n)
* :mod:`steinberg.groupoid` -- finite groupoids, convolution algebras, centralisers
* :mod:`steinberg.graph` -- directed graphs, paths and cycles
* :mod:`steinberg.lpa` -- Leavitt path algebra normal forms, diagonal and core
* :mod:`steinberg.bridge` -- acyclic graphs as finite groupoids
* :mod:`steinberg.cli` -- the ``steinberg`` command
"""

from .scalars import INTEGERS, RATIONALS, RingError, RingSpec, Scalar, integers_mod

__all__ = ["INTEGERS", "RATIONALS", "RingError", "RingSpec", "Scalar", "integers_mod"]
__version__ = "0.1.0"
