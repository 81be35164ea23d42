"""Census of Lame equations with finite cyclic monodromy.

Three independent counting routes, reconciled exactly:

* `census`: the closed-form counting formulas, kept as exact rationals,
  with switchable variants absorbing suspected misprints;
* `torus`: a first-principles Burnside count over spherical-torus
  configurations (the oracle the formulas are checked against);
* `weier` + `solver`: desk-scale analytic verification that individual
  monodromy classes really come from unitary Lame equations, via Hecke
  zeros, monodromy contour integrals and ODE residuals.

`dessin` builds the companion combinatorial dessins, `cli` is the batch
front end.
"""

from . import arith, census, dessin, solver, torus, weier
from .errors import (
    DegenerateParameterError,
    DomainError,
    NumericError,
    PoleError,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateParameterError",
    "DomainError",
    "NumericError",
    "PoleError",
    "arith",
    "census",
    "dessin",
    "solver",
    "torus",
    "weier",
]
