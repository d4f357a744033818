"""Proper-time localization toolkit for a spinless relativistic particle.

Library layout:

* :mod:`ptloc.core`        momentum charts, measures, quadrature
* :mod:`ptloc.specfun`     conical functions, csinc, |Gamma|, harmonics
* :mod:`ptloc.classical`   constraint algebra and bracket verification
* :mod:`ptloc.operators`   grid states and differential acting rules
* :mod:`ptloc.extensions`  deficiency spaces, extension spectra, domains
* :mod:`ptloc.povm`        time/position POVM densities and diagnostics
* :mod:`ptloc.cli`         figure datasets, verification reports, plots
"""

from .core import (
    CartesianMomentum,
    HyperbolicMomentum,
    Measure,
    ModelParams,
    SphericalMomentum,
    Lambda_to_lambda,
    from_hyperbolic,
    from_spherical,
    integrate_measure,
    lambda_to_Lambda,
    to_hyperbolic,
    to_spherical,
)
from .errors import (
    AccuracyLoss,
    ConfigError,
    DomainError,
    DomainViolation,
    GridMismatch,
    InsufficientResolution,
    NonConvergence,
    PtlocError,
    ResolutionWarning,
    TruncationWarning,
)

__version__ = "0.1.0"
