"""Analysis on the Sierpinski arrowhead curve.

Builds the level-m chain graphs of the arrowhead curve, a self-similar
measure on its trapeze cells, energy forms under three conductance
schemes, the pointwise Laplacian estimator and the Dirichlet spectrum
with its decimation maps.
"""

from . import curve, energy, export, laplacian, measure, spectral
from .curve import build_level, trapeze_decomposition
from .energy import energy as energy_form, harmonic_extension
from .errors import ArrowheadError
from .kernels import BACKEND
from .laplacian import pointwise_laplacian
from .measure import MeasureModel
from .spectral import decimate_down, decimate_up, dirichlet_spectrum_numeric

__version__ = "0.1.0"

__all__ = [
    "ArrowheadError", "BACKEND", "MeasureModel", "build_level", "curve", "decimate_down",
    "decimate_up", "dirichlet_spectrum_numeric", "energy", "energy_form", "export",
    "harmonic_extension", "laplacian", "measure", "pointwise_laplacian", "spectral",
    "trapeze_decomposition",
]
