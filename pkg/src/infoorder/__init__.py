"""Information measures, partial orderings and projection pursuit for
univariate densities and their location/scale-free transforms."""

from . import dist, ica, majorization, measures, quadrature, transforms
from .dist import GridDensity, make_density, parse_spec, parse_spec_list
from .kernels import BACKEND
from .measures import MeasureReport, entropy, entropy_power, fisher_info, h_mode, h_star, report
from .transforms import check_ordering, f_colon_g, f_tilde, info_order, pdq

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GridDensity",
    "MeasureReport",
    "check_ordering",
    "dist",
    "entropy",
    "entropy_power",
    "f_colon_g",
    "f_tilde",
    "fisher_info",
    "h_mode",
    "h_star",
    "ica",
    "info_order",
    "majorization",
    "make_density",
    "measures",
    "parse_spec",
    "parse_spec_list",
    "pdq",
    "quadrature",
    "report",
    "transforms",
]
