"""Transfer-matrix engine for layered thin films at normal incidence

Indices are given as n + ik with k >= 0 the extinction coefficient. The
characteristic matrices use the N = n - ik sign convention, so absorbing
layers attenuate the forward wave. Matrices are multiplied in light
propagation order, from the ambient side to the substrate.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..core.errors import NonPhysical

IndexLike = Union[float, complex]


@dataclass(frozen=True)
class LayerStack:
    """A stack of homogeneous layers between an ambient medium and a substrate

    Attributes:
        thicknesses: Layer thicknesses in nanometers, top layer first
        refractive_indices: Layer indices n + ik, same length as thicknesses
        ambient_index: Index of the incidence medium
        substrate_index: Index of the exit medium
    """

    thicknesses: np.ndarray
    refractive_indices: np.ndarray
    ambient_index: float = 1.0
    substrate_index: IndexLike = 1.5

    def __post_init__(self) -> None:
        thicknesses = np.asarray(self.thicknesses, dtype=float).reshape(-1)
        indices = np.asarray(self.refractive_indices, dtype=complex).reshape(-1)
        if thicknesses.shape != indices.shape:
            raise NonPhysical(
                f"Stack has {thicknesses.size} thicknesses but {indices.size} indices"
            )
        if np.any(thicknesses < 0):
            raise NonPhysical("Layer thicknesses must be non-negative")
        check_indices(np.append(indices, [self.ambient_index, self.substrate_index]))
        object.__setattr__(self, "thicknesses", thicknesses)
        object.__setattr__(self, "refractive_indices", indices)

    @property
    def n_layers(self) -> int:
        return int(self.thicknesses.size)

    def reversed(self) -> "LayerStack":
        """The same layers traversed from the substrate side"""
        return LayerStack(
            self.thicknesses[::-1],
            self.refractive_indices[::-1],
            ambient_index=self.substrate_index,
            substrate_index=self.ambient_index,
        )


def check_indices(indices: np.ndarray) -> None:
    """Raise NonPhysical unless every index has real part >= 1 and k >= 0"""
    indices = np.asarray(indices, dtype=complex)
    if np.any(indices.real < 1.0) or np.any(indices.imag < 0.0):
        raise NonPhysical("Refractive indices need real part >= 1 and extinction >= 0")


def characteristic_matrices(
    thicknesses: np.ndarray,
    indices: np.ndarray,
    wavelengths_nm: np.ndarray,
) -> np.ndarray:
    """Product of per-layer characteristic matrices

    Args:
        thicknesses: Thicknesses, shape (N, L)
        indices: Indices n + ik, broadcastable to (N, L)
        wavelengths_nm: Wavelengths, shape (W,)

    Returns:
        Complex array of shape (N, W, 2, 2)
    """
    thicknesses = np.atleast_2d(np.asarray(thicknesses, dtype=float))
    n_rows, n_layers = thicknesses.shape
    indices = np.broadcast_to(np.conj(np.asarray(indices, dtype=complex)), (n_rows, n_layers))
    wavelengths = np.asarray(wavelengths_nm, dtype=float).reshape(-1)

    total = np.zeros((n_rows, wavelengths.size, 2, 2), dtype=complex)
    total[..., 0, 0] = 1.0
    total[..., 1, 1] = 1.0
    for layer in range(n_layers):
        n = indices[:, layer][:, None]
        delta = 2.0 * np.pi * n * thicknesses[:, layer][:, None] / wavelengths[None, :]
        cos_d, sin_d = np.cos(delta), np.sin(delta)
        layer_matrix = np.empty_like(total)
        layer_matrix[..., 0, 0] = cos_d
        layer_matrix[..., 0, 1] = 1j * sin_d / n
        layer_matrix[..., 1, 0] = 1j * n * sin_d
        layer_matrix[..., 1, 1] = cos_d
        total = total @ layer_matrix
    return total


def batch_spectrum(
    thicknesses: np.ndarray,
    indices: np.ndarray,
    wavelengths_nm: np.ndarray,
    ambient_index: float = 1.0,
    substrate_index: IndexLike = 1.5,
) -> Tuple[np.ndarray, np.ndarray]:
    """Reflectance and transmittance for many stacks at once

    Args:
        thicknesses: Thicknesses, shape (N, L)
        indices: Indices n + ik, broadcastable to (N, L)
        wavelengths_nm: Wavelengths, shape (W,), all positive
        ambient_index: Incidence medium index (real)
        substrate_index: Exit medium index n + ik

    Returns:
        Tuple (R, T), each of shape (N, W)
    """
    wavelengths = np.asarray(wavelengths_nm, dtype=float).reshape(-1)
    if np.any(wavelengths <= 0):
        raise ValueError("Wavelengths must be positive")
    matrices = characteristic_matrices(thicknesses, indices, wavelengths)
    n0 = float(np.real(ambient_index))
    ns = np.conj(complex(substrate_index))
    b = matrices[..., 0, 0] + matrices[..., 0, 1] * ns
    c = matrices[..., 1, 0] + matrices[..., 1, 1] * ns
    denominator = n0 * b + c
    r = (n0 * b - c) / denominator
    reflectance = np.abs(r) ** 2
    transmittance = 4.0 * n0 * ns.real / np.abs(denominator) ** 2
    return np.clip(reflectance, 0.0, 1.0), np.clip(transmittance, 0.0, 1.0)


def tmm_spectrum(stack: LayerStack, wavelengths_nm: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reflectance and transmittance spectra of one stack, each of shape (W,)"""
    thicknesses = stack.thicknesses.reshape(1, -1)
    indices = stack.refractive_indices.reshape(1, -1)
    reflectance, transmittance = batch_spectrum(
        thicknesses, indices, wavelengths_nm, stack.ambient_index, stack.substrate_index
    )
    return reflectance[0], transmittance[0]


def tmm_reflectance(stack: LayerStack, wavelength_nm: float) -> float:
    """Reflectance of a stack at one wavelength

    Args:
        stack: Layer stack
        wavelength_nm: Wavelength in nanometers, > 0

    Returns:
        R in [0, 1]
    """
    if wavelength_nm <= 0:
        raise ValueError(f"Wavelength must be positive, got {wavelength_nm}")
    reflectance, _ = tmm_spectrum(stack, np.array([wavelength_nm]))
    return float(reflectance[0])


def quarter_wave_reflectance(
    n_low: float, n_high: float, n_pairs: int, ambient_index: float = 1.0, substrate_index: float = 1.5
) -> float:
    """Closed-form reflectance of a (LH)^N quarter-wave mirror at its design wavelength"""
    rho = (substrate_index / ambient_index) * (n_low / n_high) ** (2 * n_pairs)
    return ((1.0 - rho) / (1.0 + rho)) ** 2
