"""
Near-field channel synthesis and Gram matrices.

The line-of-sight response between two points is h = e^{jκr}/r. The NLoS
part sums single-bounce paths through point scatterers, and the Rician
channel mixes the two with factor K. Three Gram forms are provided: the discrete
(1/M)HHᴴ, its continuous counterpart for a sampled density, and the Toeplitz
surrogate that follows from the Fresnel expansion.
"""
from dataclasses import dataclass
from enum import Enum
import logging

import numpy as np
from scipy.linalg import toeplitz

from adf.exceptions import InvalidArgumentError, OutOfRegimeError, SingularGeometryError
from adf.utils.closedform import weighted_adf
from adf.utils.geometry import antenna_coordinates, linear_coordinates, receive_coordinates
from adf.utils.quadrature import fourier_weights

logger = logging.getLogger(__name__)

MIN_DISTANCE = 1e-9
HERMITIAN_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-10


class Variant(str, Enum):
    LOS = 'los'
    NLOS = 'nlos'
    RICIAN = 'rician'


class Normalization(str, Enum):
    RAW = 'raw'
    CENTROID = 'centroid'


@dataclass(frozen=True)
class Scatterer:
    position: tuple

    def __post_init__(self):
        position = tuple(float(v) for v in self.position)
        if len(position) != 3 or not all(np.isfinite(position)):
            raise InvalidArgumentError(f'scatterer position must be a finite 3D point, got {self.position!r}')
        object.__setattr__(self, 'position', position)


@dataclass(frozen=True)
class ChannelScenario:
    variant: Variant
    wavelength: float
    scatterers: tuple = ()
    k_linear: float = 0.0
    normalization: Normalization = Normalization.RAW

    def __post_init__(self):
        object.__setattr__(self, 'variant', Variant(self.variant))
        object.__setattr__(self, 'normalization', Normalization(self.normalization))
        object.__setattr__(self, 'scatterers', tuple(self.scatterers))
        if not self.wavelength > 0:
            raise InvalidArgumentError(f'wavelength must be positive, got {self.wavelength!r}')
        if not self.k_linear >= 0:
            raise InvalidArgumentError(f'Rician factor must be non-negative, got {self.k_linear!r}')
        if self.variant != Variant.LOS and not self.scatterers:
            raise InvalidArgumentError(f'{self.variant.value} channel needs at least one scatterer')

    @classmethod
    def los(cls, wavelength, normalization=Normalization.RAW):
        return cls(Variant.LOS, wavelength, normalization=normalization)

    @classmethod
    def nlos(cls, wavelength, scatterers, normalization=Normalization.RAW):
        return cls(Variant.NLOS, wavelength, scatterers=scatterers, normalization=normalization)

    @classmethod
    def rician(cls, wavelength, k_linear, scatterers, normalization=Normalization.RAW):
        return cls(Variant.RICIAN, wavelength, scatterers=scatterers, k_linear=k_linear,
                   normalization=normalization)

    @property
    def wavenumber(self):
        return 2.0 * np.pi / self.wavelength

    @property
    def scatterer_points(self):
        return np.array([s.position for s in self.scatterers], dtype=float).reshape(-1, 3)


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """N×M complex channel; entry (n, m) couples receive antenna n and transmit antenna m."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise InvalidArgumentError('a channel matrix must be two-dimensional')
        if not np.all(np.isfinite(entries)):
            raise InvalidArgumentError('channel matrix has non-finite entries')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def shape(self):
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian positive semi-definite N×N matrix."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidArgumentError('a Gram matrix must be square')
        if not np.all(np.isfinite(entries)):
            raise InvalidArgumentError('Gram matrix has non-finite entries')
        scale = max(np.abs(entries).max(initial=0.0), 1e-300)
        if np.abs(entries - entries.conj().T).max(initial=0.0) > HERMITIAN_TOLERANCE * scale:
            raise InvalidArgumentError('Gram matrix is not Hermitian')
        entries = 0.5 * (entries + entries.conj().T)
        eigenvalues = np.linalg.eigvalsh(entries)
        if eigenvalues.size and eigenvalues[0] < -PSD_TOLERANCE * max(eigenvalues[-1], 0.0) - 1e-300:
            raise InvalidArgumentError(f'Gram matrix is not positive semi-definite (min eigenvalue {eigenvalues[0]:.3e})')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def size(self):
        return self.entries.shape[0]

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)


def _distances(points_a, points_b):
    diff = points_a[:, None, :] - points_b[None, :, :]
    distance = np.sqrt(np.einsum('ijk,ijk->ij', diff, diff))
    if distance.size and distance.min() <= MIN_DISTANCE:
        raise SingularGeometryError('two points of a propagation path coincide')
    return distance


def _free_space(points_a, points_b, kappa):
    distance = _distances(points_a, points_b)
    return np.exp(1j * kappa * distance) / distance


def los_response(r_t, r_r, kappa):
    """e^{jκr}/r with r = ‖r_T − r_R‖."""
    block = _free_space(np.atleast_2d(np.asarray(r_r, dtype=float)),
                        np.atleast_2d(np.asarray(r_t, dtype=float)), kappa)
    return complex(block[0, 0])


def nlos_response(r_t, r_r, scatterers, kappa):
    """Σ_ℓ h(r_S, r_R)·conj(h(r_T, r_S)) over single-bounce scatterers."""
    points = np.array([s.position for s in scatterers], dtype=float).reshape(-1, 3)
    if points.shape[0] == 0:
        return 0j
    block = _nlos_block(np.atleast_2d(np.asarray(r_r, dtype=float)),
                        np.atleast_2d(np.asarray(r_t, dtype=float)), points, kappa)
    return complex(block[0, 0])


def _nlos_block(rx_points, tx_points, scatter_points, kappa):
    down = _free_space(rx_points, scatter_points, kappa)   # N×L
    up = _free_space(tx_points, scatter_points, kappa)     # P×L
    return down @ up.conj().T


def response_block(rx_points, tx_points, scenario, z0):
    """Responses between every receive point (rows) and transmit point (columns)."""
    kappa = scenario.wavenumber
    if scenario.variant == Variant.LOS:
        block = _free_space(rx_points, tx_points, kappa)
    elif scenario.variant == Variant.NLOS:
        block = _nlos_block(rx_points, tx_points, scenario.scatterer_points, kappa)
    else:
        k = scenario.k_linear
        block = (np.sqrt(k / (1.0 + k)) * _free_space(rx_points, tx_points, kappa)
                 + np.sqrt(1.0 / (1.0 + k)) * _nlos_block(rx_points, tx_points, scenario.scatterer_points, kappa))
    if scenario.normalization == Normalization.CENTROID:
        block = block * z0
    return block


def channel_matrix(placement, tx, rx, scenario):
    block = response_block(receive_coordinates(rx), antenna_coordinates(placement, tx), scenario, rx.z0)
    return ChannelMatrix(block)


def gram_discrete(H):
    """K_f = (1/M)·H·Hᴴ."""
    entries = H.entries if isinstance(H, ChannelMatrix) else np.asarray(H, dtype=complex)
    M = entries.shape[1]
    return GramMatrix(entries @ entries.conj().T / M)


def continuous_responses(w, tx, rx, scenario):
    """Response block at the density's grid nodes (N×P)."""
    return response_block(receive_coordinates(rx), linear_coordinates(w.grid, tx), scenario, rx.z0)


def gram_from_responses(responses, w, M):
    """(1/M) Σ_i W_i u_i h(p_i) h(p_i)ᴴ for precomputed responses."""
    mass = w.weights * w.values
    entries = (responses * mass[None, :]) @ responses.conj().T / M
    return GramMatrix(0.5 * (entries + entries.conj().T))


def gram_continuous(w, tx, rx, scenario):
    """Continuous Gram (1/M)∫ w(p) h(p) h(p)ᴴ dp on the density's own grid."""
    return gram_from_responses(continuous_responses(w, tx, rx, scenario), w, tx.M)


def gram_toeplitz(w, factors, N, M=None):
    """Toeplitz surrogate K̄[n, n'] = (1/z0²) ∫ w̃(p) e^{−jβ(n−n')p} dp.

    With ``M`` given the result carries the same 1/M as the other Gram forms.
    """
    if factors.beta >= np.pi:
        raise OutOfRegimeError(f'beta={factors.beta:.6g} >= pi')
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f'N must be a positive integer, got {N!r}')
    wadf = weighted_adf(w, factors.tau)
    column = np.array([
        fourier_weights(wadf.size, wadf.edge_order, factors.beta * lag) @ wadf.values
        for lag in range(int(N))
    ])
    column[0] = column[0].real
    entries = toeplitz(column, column.conj()) / factors.z0 ** 2
    if M is not None:
        entries = entries / M
    return GramMatrix(entries)


def spectral_gap(first, second, relative_to='largest'):
    """Largest gap between the sorted eigenvalues of two Gram matrices.

    relative_to='largest' divides every gap by the largest eigenvalue of
    either matrix, so small eigenvalues only count at the scale of the
    dominant one. relative_to='each' divides the i-th gap by the i-th
    eigenvalue of `second` and is the stricter per-eigenvalue measure.
    """
    a = np.sort(first.eigenvalues())
    b = np.sort(second.eigenvalues())
    if relative_to == 'largest':
        scale = max(abs(a[-1]), abs(b[-1]), 1e-300)
    elif relative_to == 'each':
        scale = np.maximum(np.abs(b), 1e-300)
    else:
        raise InvalidArgumentError(f"relative_to must be 'largest' or 'each', got {relative_to!r}")
    return float(np.max(np.abs(a - b) / scale))


def channel_rows(H):
    """(n, m, re, im) rows, 1-based indices."""
    entries = H.entries
    for n in range(entries.shape[0]):
        for m in range(entries.shape[1]):
            value = entries[n, m]
            yield n + 1, m + 1, float(value.real), float(value.imag)
