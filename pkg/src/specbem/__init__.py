"""Spectral Galerkin boundary integral solver for Helmholtz transmission
through two concentric circles.

Modules
-------
specfun
    Bessel and Hankel functions of integer order in scaled arithmetic.
operators
    Diagonal Galerkin entries of the layer operators on circles.
analytic
    Mode-by-mode exact solution.
galerkin
    Per-mode 4x4 systems, data expansion, trace errors and rate fits.
resonance
    Complex resonance wavenumbers of a single mode.
field
    Field reconstruction from the traces.
bounds
    Executable checks of the Bessel and decay inequalities.
cli
    Command-line front end.
"""

from .operators import EQUAL_MEDIA, EXAMPLE_1, EXAMPLE_2, GENERIC, ConfigError, MediumConfig
from .scaled import ScaledComplex

__all__ = ["MediumConfig", "ConfigError", "ScaledComplex",
           "EXAMPLE_1", "EXAMPLE_2", "EQUAL_MEDIA", "GENERIC"]
__version__ = "0.1.0"
