"""Thin-film photonic design problems

Desk-scale versions of three layered-optics tasks: a Bragg mirror
(maximize reflectance at 600 nm), an ellipsometry-style inverse problem
(recover one layer's thickness and permittivity from its reflectance
spectrum) and a photovoltaic anti-reflection coating (maximize mean
absorption in a lossy slab over 375-750 nm).
"""

import math
from typing import Optional

import numpy as np

from ..core.problem import ProblemSpec
from ..core.rng import RandomStream
from .thin_film import LayerStack, batch_spectrum, tmm_spectrum

SPECTRUM_POINTS = 100

# Bragg mirror: permittivities 1.96 / 3.24, lower index on top
BRAGG_WAVELENGTH_NM = 600.0
BRAGG_THICKNESS_BOUNDS = (0.0, 218.0)
BRAGG_INDEX_LOW = math.sqrt(1.96)
BRAGG_INDEX_HIGH = math.sqrt(3.24)
BRAGG_SUBSTRATE = 1.5

# Ellipsometry: one layer on a silicon-like substrate
ELLIPSOMETRY_THICKNESS_BOUNDS = (50.0, 150.0)
ELLIPSOMETRY_PERMITTIVITY_BOUNDS = (1.1, 3.0)
ELLIPSOMETRY_SUBSTRATE = 3.5
ELLIPSOMETRY_WAVELENGTHS = (400.0, 800.0)
ELLIPSOMETRY_TRUTH_SEED = 2024

# Photovoltaic: ten-layer coating over a lossy absorber slab
PV_LAYERS = 10
PV_THICKNESS_BOUNDS = (30.0, 250.0)
PV_INDEX_TOP = math.sqrt(2.0)
PV_INDEX_BOTTOM = math.sqrt(3.0)
PV_ABSORBER_INDEX = 3.5 + 0.1j
PV_ABSORBER_THICKNESS = 500.0
PV_BACKING = 1.5
PV_WAVELENGTHS = (375.0, 750.0)


def alternating_indices(n_layers: int, top: float, bottom: float) -> np.ndarray:
    """Indices alternating top, bottom, top, ... for n_layers layers"""
    return np.array([top if i % 2 == 0 else bottom for i in range(n_layers)], dtype=float)


def bragg_stack(thicknesses: np.ndarray) -> LayerStack:
    """Bragg mirror stack for the given thicknesses"""
    thicknesses = np.asarray(thicknesses, dtype=float).reshape(-1)
    return LayerStack(
        thicknesses,
        alternating_indices(thicknesses.size, BRAGG_INDEX_LOW, BRAGG_INDEX_HIGH),
        ambient_index=1.0,
        substrate_index=BRAGG_SUBSTRATE,
    )


def quarter_wave_thicknesses(n_layers: int, wavelength_nm: float = BRAGG_WAVELENGTH_NM) -> np.ndarray:
    """Quarter-wave thicknesses lambda / (4 n) of the Bragg materials"""
    indices = alternating_indices(n_layers, BRAGG_INDEX_LOW, BRAGG_INDEX_HIGH)
    return wavelength_nm / (4.0 * indices)


def make_bragg_problem(n_layers: int = 10) -> ProblemSpec:
    """Bragg mirror with 10 (mini-bragg) or 20 (bragg) layers

    Args:
        n_layers: Number of layers, 10 or 20

    Returns:
        ProblemSpec maximizing R(600 nm)
    """
    if n_layers not in (10, 20):
        raise ValueError(f"Bragg problem supports 10 or 20 layers, got {n_layers}")
    indices = alternating_indices(n_layers, BRAGG_INDEX_LOW, BRAGG_INDEX_HIGH)
    wavelengths = np.array([BRAGG_WAVELENGTH_NM])

    def reflectance(X: np.ndarray) -> np.ndarray:
        R, _ = batch_spectrum(X, indices, wavelengths, 1.0, BRAGG_SUBSTRATE)
        return R[:, 0]

    return ProblemSpec(
        name="mini-bragg" if n_layers == 10 else "bragg",
        dim=n_layers,
        lower_bounds=np.full(n_layers, BRAGG_THICKNESS_BOUNDS[0]),
        upper_bounds=np.full(n_layers, BRAGG_THICKNESS_BOUNDS[1]),
        function=reflectance,
        maximize=True,
        metadata={
            "wavelength_nm": BRAGG_WAVELENGTH_NM,
            "indices": indices.tolist(),
            "substrate_index": BRAGG_SUBSTRATE,
        },
    )


def ellipsometry_wavelengths() -> np.ndarray:
    return np.linspace(*ELLIPSOMETRY_WAVELENGTHS, SPECTRUM_POINTS)


def ellipsometry_ground_truth(seed: int = ELLIPSOMETRY_TRUTH_SEED) -> np.ndarray:
    """Hidden (thickness, permittivity) of the reference layer"""
    stream = RandomStream(seed)
    thickness = stream.draw_uniform(*ELLIPSOMETRY_THICKNESS_BOUNDS)
    permittivity = stream.draw_uniform(*ELLIPSOMETRY_PERMITTIVITY_BOUNDS)
    return np.array([thickness, permittivity], dtype=float)


def _ellipsometry_spectra(X: np.ndarray, wavelengths: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    thicknesses = X[:, :1]
    indices = np.sqrt(X[:, 1:2]).astype(complex)
    R, _ = batch_spectrum(thicknesses, indices, wavelengths, 1.0, ELLIPSOMETRY_SUBSTRATE)
    return R


def make_ellipsometry_problem(truth_seed: Optional[int] = None) -> ProblemSpec:
    """Single-layer inverse problem: match a hidden layer's reflectance spectrum

    The decision vector is (thickness nm, permittivity). The objective is
    the RMS difference between the candidate and reference spectra over
    400-800 nm; it is exactly 0 at the hidden ground truth.
    """
    seed = ELLIPSOMETRY_TRUTH_SEED if truth_seed is None else truth_seed
    truth = ellipsometry_ground_truth(seed)
    wavelengths = ellipsometry_wavelengths()
    reference = _ellipsometry_spectra(truth.reshape(1, -1), wavelengths)[0]

    def mismatch(X: np.ndarray) -> np.ndarray:
        spectra = _ellipsometry_spectra(X, wavelengths)
        return np.sqrt(np.mean((spectra - reference[None, :]) ** 2, axis=1))

    return ProblemSpec(
        name="ellipsometry",
        dim=2,
        lower_bounds=np.array([ELLIPSOMETRY_THICKNESS_BOUNDS[0], ELLIPSOMETRY_PERMITTIVITY_BOUNDS[0]]),
        upper_bounds=np.array([ELLIPSOMETRY_THICKNESS_BOUNDS[1], ELLIPSOMETRY_PERMITTIVITY_BOUNDS[1]]),
        function=mismatch,
        maximize=False,
        known_optimum=0.0,
        metadata={
            "substrate_index": ELLIPSOMETRY_SUBSTRATE,
            "wavelength_range_nm": list(ELLIPSOMETRY_WAVELENGTHS),
            "truth_seed": seed,
            "ground_truth": truth.tolist(),
        },
    )


def photovoltaic_wavelengths() -> np.ndarray:
    return np.linspace(*PV_WAVELENGTHS, SPECTRUM_POINTS)


def photovoltaic_indices(n_layers: int = PV_LAYERS) -> np.ndarray:
    """Coating indices followed by the absorber slab"""
    coating = alternating_indices(n_layers, PV_INDEX_TOP, PV_INDEX_BOTTOM).astype(complex)
    return np.append(coating, PV_ABSORBER_INDEX)


def photovoltaic_stack(thicknesses: np.ndarray) -> LayerStack:
    thicknesses = np.asarray(thicknesses, dtype=float).reshape(-1)
    return LayerStack(
        np.append(thicknesses, PV_ABSORBER_THICKNESS),
        photovoltaic_indices(thicknesses.size),
        ambient_index=1.0,
        substrate_index=PV_BACKING,
    )


def make_photovoltaic_problem() -> ProblemSpec:
    """Anti-reflection coating over a lossy absorber, maximizing mean absorption"""
    indices = photovoltaic_indices()
    wavelengths = photovoltaic_wavelengths()

    def mean_absorption(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        slab = np.full((X.shape[0], 1), PV_ABSORBER_THICKNESS)
        R, T = batch_spectrum(np.hstack([X, slab]), indices, wavelengths, 1.0, PV_BACKING)
        return np.clip(np.mean(1.0 - R - T, axis=1), 0.0, 1.0)

    return ProblemSpec(
        name="photovoltaic",
        dim=PV_LAYERS,
        lower_bounds=np.full(PV_LAYERS, PV_THICKNESS_BOUNDS[0]),
        upper_bounds=np.full(PV_LAYERS, PV_THICKNESS_BOUNDS[1]),
        function=mean_absorption,
        maximize=True,
        metadata={
            "absorber_index": [PV_ABSORBER_INDEX.real, PV_ABSORBER_INDEX.imag],
            "absorber_thickness_nm": PV_ABSORBER_THICKNESS,
            "backing_index": PV_BACKING,
            "wavelength_range_nm": list(PV_WAVELENGTHS),
        },
    )


def solution_spectrum(problem: ProblemSpec, x: np.ndarray):
    """Spectrum of a layer-stack solution as (wavelengths, R, T), or None

    Returns None for problems that are not layer stacks.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if problem.name in ("mini-bragg", "bragg"):
        wavelengths = np.linspace(400.0, 800.0, SPECTRUM_POINTS)
        stack = bragg_stack(x)
    elif problem.name == "photovoltaic":
        wavelengths = photovoltaic_wavelengths()
        stack = photovoltaic_stack(x)
    elif problem.name == "ellipsometry":
        wavelengths = ellipsometry_wavelengths()
        stack = LayerStack(x[:1], np.sqrt(x[1:2]), substrate_index=ELLIPSOMETRY_SUBSTRATE)
    else:
        return None
    R, T = tmm_spectrum(stack, wavelengths)
    return wavelengths, R, T
