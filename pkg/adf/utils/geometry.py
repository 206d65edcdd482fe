"""
Array geometry, antenna position/density functions and the flexible curve.

Positions on the transmit array are normalized p ∈ [−1, 1] along a line of
aperture A_T through the origin. An antenna density function (ADF) w(p)
counts antennas per unit of p and integrates to M − 1; its cumulative form
maps antenna index to position.
"""
from dataclasses import dataclass, field
from functools import cached_property
import logging

import numpy as np
from scipy import integrate

from adf.exceptions import DegenerateDensityError, InvalidArgumentError
from adf.utils import quadrature
from adf.utils.specfun import complete_beta, incomplete_beta, inverse_incomplete_beta

logger = logging.getLogger(__name__)


def _direction(theta, phi):
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


@dataclass(frozen=True)
class TransmitArray:
    """Base-station array: M movable antennas on a segment of aperture (M−1)·d."""
    M: int
    d: float
    theta: float = np.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise InvalidArgumentError(f'transmit array needs M >= 2, got {self.M!r}')
        if not self.d > 0:
            raise InvalidArgumentError(f'antenna spacing must be positive, got {self.d!r}')
        if not 0.0 <= self.theta <= np.pi:
            raise InvalidArgumentError(f'theta_T must lie in [0, pi], got {self.theta!r}')
        if not -np.pi <= self.phi < np.pi:
            raise InvalidArgumentError(f'phi_T must lie in [-pi, pi), got {self.phi!r}')

    @property
    def aperture(self):
        return (self.M - 1) * self.d

    @property
    def axis(self):
        return _direction(self.theta, self.phi)


@dataclass(frozen=True)
class ReceiveArray:
    """User-side fixed ULA of N antennas centered at (0, 0, z0)."""
    N: int
    d: float
    z0: float
    theta: float = np.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidArgumentError(f'receive array needs N >= 1, got {self.N!r}')
        if not self.d > 0:
            raise InvalidArgumentError(f'receive spacing must be positive, got {self.d!r}')
        if not self.z0 > 0:
            raise InvalidArgumentError(f'centroid distance z0 must be positive, got {self.z0!r}')

    @property
    def aperture(self):
        return (self.N - 1) * self.d

    @property
    def axis(self):
        return _direction(self.theta, self.phi)


@dataclass(frozen=True, eq=False)
class Placement:
    """Strictly increasing normalized positions p_1 < ... < p_M in [−1, 1]."""
    positions: np.ndarray
    endpoint_pinned: bool = True

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float).ravel()
        positions.setflags(write=False)
        object.__setattr__(self, 'positions', positions)
        if positions.size < 1:
            raise InvalidArgumentError('a placement needs at least one position')
        if not np.all(np.isfinite(positions)) or positions.min() < -1.0 or positions.max() > 1.0:
            raise InvalidArgumentError('placement positions must lie in [-1, 1]')
        if np.any(np.diff(positions) <= 0.0):
            raise InvalidArgumentError('placement positions must be strictly increasing')
        if self.endpoint_pinned and (positions[0] != -1.0 or positions[-1] != 1.0):
            raise InvalidArgumentError('a pinned placement must start at -1 and end at 1')

    def __len__(self):
        return self.positions.size

    def __eq__(self, other):
        if not isinstance(other, Placement):
            return NotImplemented
        return self.endpoint_pinned == other.endpoint_pinned and np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash((self.positions.tobytes(), self.endpoint_pinned))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Non-negative density on the uniform grid over [−1, 1].

    ``values`` holds the smooth factor u at the grid nodes; the represented
    density is w(p) = (1 − p²)^{2·edge_order}·u(p), so edge_order = 0 is a
    plain sampled function and edge_order < 0 carries integrable poles at ±1.
    """
    values: np.ndarray
    edge_order: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'edge_order', float(self.edge_order))
        if values.size < 2:
            raise InvalidArgumentError('a sampled function needs at least two grid points')
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise InvalidArgumentError('sampled density values must be finite and non-negative')
        if not -0.5 < self.edge_order <= 0.0:
            raise InvalidArgumentError(f'edge order must lie in (-0.5, 0], got {self.edge_order!r}')

    @classmethod
    def constant(cls, value, size, edge_order=0.0):
        return cls(np.full(int(size), float(value)), edge_order)

    @property
    def size(self):
        return self.values.size

    @cached_property
    def grid(self):
        return quadrature.uniform_grid(self.size)

    @cached_property
    def weights(self):
        return quadrature.product_weights(self.size, self.edge_order)

    @cached_property
    def edge_factor(self):
        with np.errstate(divide='ignore'):
            return (1.0 - self.grid ** 2) ** (2.0 * self.edge_order)

    def integral(self):
        return float(self.weights @ self.values)

    def density(self):
        """w at the grid nodes (infinite at ±1 when edge_order < 0 and u(±1) > 0)."""
        with np.errstate(invalid='ignore'):
            dense = self.edge_factor * self.values
        return np.where(self.values == 0.0, 0.0, dense)

    def evaluate(self, p):
        """w at arbitrary points inside (−1, 1) by linear interpolation of u."""
        p = np.asarray(p, dtype=float)
        u = np.interp(p, self.grid, self.values)
        with np.errstate(divide='ignore', invalid='ignore'):
            value = u * (1.0 - p * p) ** (2.0 * self.edge_order)
        return np.where(u == 0.0, 0.0, value)

    def cumulative(self):
        return quadrature.cumulative(self.values, self.edge_order)

    def scaled(self, factor):
        return SampledFunction(self.values * float(factor), self.edge_order)

    def with_values(self, values):
        return SampledFunction(values, self.edge_order)


@dataclass(frozen=True, eq=False)
class FlexibleCurve:
    """Curve (x, y(x)) whose equal-arc-length points project onto the ADF shape."""
    alpha: float
    radius: float
    x: np.ndarray
    y: np.ndarray
    arc: np.ndarray = field(repr=False)

    @property
    def samples(self):
        return np.column_stack((self.x, self.y))

    @property
    def length(self):
        return float(self.arc[-1])


def uniform_apf(M):
    """Positions of the uniform linear array: p_m = 2(m − (M+1)/2)/(M − 1)."""
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f'uniform_apf needs M >= 2, got {M!r}')
    m = np.arange(1, M + 1, dtype=float)
    positions = 2.0 / (M - 1) * (m - (M + 1) / 2.0)
    positions[0], positions[-1] = -1.0, 1.0
    return Placement(positions, endpoint_pinned=True)


def linear_coordinates(p, tx):
    """3D points (A_T/2)·p·axis for normalized positions p on the transmit line."""
    p = np.asarray(p, dtype=float).ravel()
    return 0.5 * tx.aperture * p[:, None] * tx.axis[None, :]


def antenna_coordinates(placement, tx):
    if len(placement) != tx.M:
        raise InvalidArgumentError(f'placement has {len(placement)} positions but the array has M={tx.M}')
    return linear_coordinates(placement.positions, tx)


def receive_coordinates(rx):
    if rx.N == 1:
        offsets = np.zeros(1)
    else:
        offsets = uniform_apf(rx.N).positions
    points = 0.5 * rx.aperture * offsets[:, None] * rx.axis[None, :]
    points[:, 2] += rx.z0
    return points


def rayleigh_distance(aperture, wavelength):
    return 2.0 * aperture ** 2 / wavelength


def minimum_spacing(placement, tx):
    """Smallest physical gap between neighbouring antennas, in meters."""
    if len(placement) < 2:
        return float('inf')
    return float(np.min(np.diff(placement.positions)) * tx.aperture / 2.0)


def empirical_adf(placement, bins):
    """Histogram density of a placement on a ``bins``-point grid.

    Each node counts the antennas in its dual cell (half-width cells at ±1),
    so the trapezoid integral of the result is exactly M − 1.
    """
    if int(bins) != bins or bins < 2:
        raise InvalidArgumentError(f'empirical_adf needs bins >= 2, got {bins!r}')
    M = len(placement)
    grid = quadrature.uniform_grid(bins)
    h = grid[1] - grid[0]
    edges = np.concatenate(([-1.0], grid[:-1] + 0.5 * h, [1.0]))
    counts, _ = np.histogram(placement.positions, bins=edges)
    values = (M - 1) / M * counts / np.diff(edges)
    return SampledFunction(values)


def discretize_adf(w, M):
    """Positions solving Φ(p_m) = m with Φ(−1) = 1 and Φ(1) = M."""
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f'discretize_adf needs M >= 2, got {M!r}')
    raw = w.cumulative()
    total = raw[-1]
    if total <= 0.0:
        raise DegenerateDensityError('cannot discretize an identically zero density')
    levels = 1.0 + (M - 1) * raw / total
    interior = quadrature.inverse_cumulative(w.values, w.edge_order, levels, np.arange(2, M, dtype=float))
    positions = np.concatenate(([-1.0], interior, [1.0]))
    if np.any(np.diff(positions) <= 0.0):
        raise DegenerateDensityError(f'density too concentrated to separate {M} antennas on this grid')
    return Placement(positions, endpoint_pinned=True)


def _height_integrand(alpha):
    exponent = 8.0 * alpha + 2.0

    def integrand(t):
        c = np.cos(t)
        if c <= 0.0:
            return 0.0
        return float(np.sqrt(max(c ** exponent - c * c, 0.0)))

    return integrand


def _check_curve_alpha(alpha):
    if not -0.5 < alpha <= 0.0:
        raise InvalidArgumentError(f'flexible curve order must lie in (-0.5, 0], got {alpha!r}')


def curve_height(t, alpha, radius):
    """y at x = R·sin t, from y(x) = −R ∫_{|t|}^{π/2} sqrt(cos^{8α+2}u − cos²u) du."""
    _check_curve_alpha(alpha)
    if alpha == 0.0:
        return 0.0
    value, _ = integrate.quad(_height_integrand(alpha), abs(t), np.pi / 2, epsabs=1e-13, epsrel=1e-12, limit=200)
    return -radius * value


def _arc_length(t, alpha, radius):
    # s(t) = R [B(1/2, 1+2α) + sign(t)·B(sin²t; 1/2, 1+2α)] / 2
    b = 1.0 + 2.0 * alpha
    full = complete_beta(0.5, b)
    partial = np.asarray(incomplete_beta(np.sin(t) ** 2, 0.5, b))
    return 0.5 * radius * (full + np.sign(t) * partial)


def flexible_curve(alpha, R, samples=1025):
    """Sample the curve with slope sign(x)·sqrt(((R²−x²)/R²)^{4α} − 1) and y(±R) = 0.

    Uses x = R sin t; ``samples`` is rounded up to an odd count so that x = 0
    is a sample.
    """
    _check_curve_alpha(alpha)
    if not R > 0:
        raise InvalidArgumentError(f'curve half-aperture must be positive, got {R!r}')
    if samples < 3:
        raise InvalidArgumentError('a flexible curve needs at least 3 samples')
    half = int(samples) // 2
    t_half = np.linspace(0.0, np.pi / 2, half + 1)

    if alpha == 0.0:
        depth = np.zeros(half + 1)
    else:
        integrand = _height_integrand(alpha)
        segments = np.array([
            integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
            for lo, hi in zip(t_half[:-1], t_half[1:])
        ])
        # depth_k = ∫_{t_k}^{π/2}
        depth = np.concatenate((np.cumsum(segments[::-1])[::-1], [0.0]))

    t = np.concatenate((-t_half[:0:-1], t_half))
    y_half = -R * depth
    y = np.concatenate((y_half[:0:-1], y_half))
    x = R * np.sin(t)
    x[0], x[-1] = -R, R
    arc = _arc_length(t, alpha, R)
    logger.debug('flexible curve alpha=%s R=%s length=%.9f', alpha, R, arc[-1])
    return FlexibleCurve(alpha=float(alpha), radius=float(R), x=x, y=y, arc=arc)


def place_on_curve(curve, M):
    """M points at equal arc length along the curve, both endpoints included."""
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f'place_on_curve needs M >= 2, got {M!r}')
    b = 1.0 + 2.0 * curve.alpha
    full = complete_beta(0.5, b)
    points = np.empty((M, 2))
    for index in range(M):
        # 2s/R − B(1/2, b) = sign(t)·B(sin²t; 1/2, b)
        signed = 2.0 * index / (M - 1) * full - full
        sin_sq = inverse_incomplete_beta(min(abs(signed), full), 0.5, b)
        t = np.sign(signed) * np.arcsin(np.sqrt(sin_sq))
        points[index, 0] = curve.radius * np.sin(t)
        points[index, 1] = curve_height(t, curve.alpha, curve.radius)
    points[0] = (-curve.radius, 0.0)
    points[-1] = (curve.radius, 0.0)
    return points
