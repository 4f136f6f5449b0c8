"""Target problems: thin-film photonics and a synthetic suite"""

from .photonics import (
    make_bragg_problem,
    make_ellipsometry_problem,
    make_photovoltaic_problem,
    quarter_wave_thicknesses,
    solution_spectrum,
)
from .registry import ProblemEntry, ProblemRegistry, get_problem
from .synthetic import FUNCTION_IDS, SyntheticInstance, make_instance, synthetic
from .thin_film import LayerStack, quarter_wave_reflectance, tmm_reflectance, tmm_spectrum

__all__ = [
    "FUNCTION_IDS",
    "LayerStack",
    "ProblemEntry",
    "ProblemRegistry",
    "SyntheticInstance",
    "get_problem",
    "make_bragg_problem",
    "make_ellipsometry_problem",
    "make_instance",
    "make_photovoltaic_problem",
    "quarter_wave_reflectance",
    "quarter_wave_thicknesses",
    "solution_spectrum",
    "synthetic",
    "tmm_reflectance",
    "tmm_spectrum",
]
