"""
Closed-form antenna densities for the near-field line-of-sight channel.

The optimal family is

    w(p; α) = (γ_α (1 − p²)^{2α} − β z0² / (2πρ)) (1 − τp)²,   −0.5 < α < 0
    w(p; 0) = 3(M − 1)/(6 + 2τ²) (1 − τp)²

and in the far part of the near field (z0 ≫ A_T) it degenerates to
γ_α (1 − p²)^{2α}, whose cumulative count is an incomplete Beta function.
"""
from dataclasses import dataclass
import logging

import numpy as np
from scipy import integrate

from adf.conf import default_grid_size
from adf.exceptions import DomainError, InfeasibleParametersError, InvalidArgumentError, OutOfRegimeError
from adf.utils.geometry import Placement, SampledFunction
from adf.utils.quadrature import uniform_grid
from adf.utils.specfun import complete_beta, incomplete_beta, inverse_incomplete_beta, log_gamma

logger = logging.getLogger(__name__)

GAMMA_TOLERANCE = 1e-6
CONVENTIONS = ('printed', 'fresnel')


@dataclass(frozen=True)
class NearFieldFactors:
    """τ and β couple aperture, distance, angles and wavenumber; ρ is the linear SNR."""
    tau: float
    beta: float
    z0: float
    rho: float

    def __post_init__(self):
        if not abs(self.tau) < 1.0:
            raise InvalidArgumentError(f'|tau| must be below 1, got {self.tau!r}')
        if not self.beta > 0.0:
            raise InvalidArgumentError(f'beta must be positive, got {self.beta!r}')
        if self.beta >= np.pi:
            raise OutOfRegimeError(f'beta={self.beta:.6g} >= pi: outside the near-field Toeplitz regime')
        if not self.z0 > 0.0 or not self.rho > 0.0:
            raise InvalidArgumentError('z0 and rho must be positive')

    @property
    def bias(self):
        """β z0² / (2πρ), the constant subtracted by the singular optimal family."""
        return self.beta * self.z0 ** 2 / (2.0 * np.pi * self.rho)

    @property
    def symbol_scale(self):
        """2πρ / (β z0²), the factor in front of the WADF inside the generating function."""
        return 2.0 * np.pi * self.rho / (self.beta * self.z0 ** 2)


@dataclass(frozen=True)
class AdfFamilyParams:
    alpha: float
    M: int
    factors: NearFieldFactors
    gamma: float | None = None

    def __post_init__(self):
        _check_alpha(self.alpha, allow_zero=True)
        if int(self.M) != self.M or self.M < 2:
            raise InvalidArgumentError(f'M must be an integer >= 2, got {self.M!r}')

    def resolved_gamma(self):
        if self.gamma is not None:
            return float(self.gamma)
        if self.alpha == 0.0:
            return 3.0 * (self.M - 1) / (6.0 + 2.0 * self.factors.tau ** 2)
        return gamma_norm(self.alpha, self.M, self.factors)


def _check_alpha(alpha, allow_zero):
    upper_ok = alpha <= 0.0 if allow_zero else alpha < 0.0
    if not (-0.5 < alpha and upper_ok):
        bound = '(-0.5, 0]' if allow_zero else '(-0.5, 0)'
        raise InvalidArgumentError(f'alpha must lie in {bound}, got {alpha!r}')


def nearfield_factors(tx, rx, wavelength, rho, convention='printed'):
    """τ = A_T cosθ_T / (2 z0) and β = κ A_T d_R sinθ_T sinθ_R cos(φ_T − φ_R) / z0.

    ``convention='fresnel'`` halves β: that is the phase slope the second-order
    distance expansion of this geometry actually produces, and the one under
    which the Toeplitz Gram surrogate reproduces the exact continuous Gram.
    """
    if convention not in CONVENTIONS:
        raise InvalidArgumentError(f'unknown beta convention {convention!r}')
    if not wavelength > 0:
        raise InvalidArgumentError(f'wavelength must be positive, got {wavelength!r}')
    kappa = 2.0 * np.pi / wavelength
    tau = tx.aperture * np.cos(tx.theta) / (2.0 * rx.z0)
    beta = (kappa * tx.aperture * rx.d * np.sin(tx.theta) * np.sin(rx.theta)
            * np.cos(tx.phi - rx.phi) / rx.z0)
    if convention == 'fresnel':
        beta *= 0.5
    if beta >= np.pi:
        raise OutOfRegimeError(
            f'beta={beta:.6g} >= pi for A_T={tx.aperture:.4g} m at z0={rx.z0:.4g} m; '
            'move the receiver further than the aperture'
        )
    return NearFieldFactors(tau=float(tau), beta=float(beta), z0=float(rx.z0), rho=float(rho))


def weighted_adf(w, tau):
    """w̃(p) = w(p) / (1 − τp)²."""
    grid = uniform_grid(w.size)
    return w.with_values(w.values / (1.0 - tau * grid) ** 2)


def _edge_moment(alpha, tau):
    # ∫ (1 − p²)^{2α} (1 − τp)² dp with the endpoint singularities handled by the algebraic weight
    value, _ = integrate.quad(
        lambda p: (1.0 - tau * p) ** 2, -1.0, 1.0,
        weight='alg', wvar=(2.0 * alpha, 2.0 * alpha), epsabs=1e-14, epsrel=1e-13,
    )
    return value


def gamma_norm(alpha, M, factors):
    """Normalization γ_α making the singular optimal family integrate to M − 1.

    The Γ/sin closed form is evaluated first and checked against the
    normalization integral; if they disagree the numeric value is used.
    """
    _check_alpha(alpha, allow_zero=False)
    tau, bias = factors.tau, factors.bias
    flat_moment = 2.0 + 2.0 * tau ** 2 / 3.0
    lead = M - 1 + factors.beta * factors.z0 ** 2 * (3.0 + tau ** 2) / (3.0 * np.pi * factors.rho)
    printed = (
        lead
        * np.exp(log_gamma(1.0 - 2.0 * alpha) + log_gamma(2.5 + 2.0 * alpha))
        * np.sin(2.0 * alpha * np.pi)
        / (alpha * np.pi ** 1.5 * (3.0 + 4.0 * alpha + tau ** 2))
    )
    edge_moment = _edge_moment(alpha, tau)
    mass = printed * edge_moment - bias * flat_moment
    if np.isfinite(printed) and abs(mass - (M - 1)) <= GAMMA_TOLERANCE:
        return float(printed)
    numeric = (M - 1 + bias * flat_moment) / edge_moment
    logger.warning(
        'closed-form gamma for alpha=%s gives mass %.9g instead of %s; using numeric normalization %.12g',
        alpha, mass, M - 1, numeric,
    )
    return float(numeric)


def _normalized(values, edge_order, M):
    w = SampledFunction(values, edge_order)
    total = w.integral()
    if total <= 0.0:
        raise InfeasibleParametersError('closed-form density has no positive mass')
    return w.scaled((M - 1) / total)


def optimal_adf(params, size=None):
    """Sample the optimal density family on a P-point grid (default P = χM)."""
    M, alpha, factors = params.M, params.alpha, params.factors
    size = size or default_grid_size(M)
    grid = uniform_grid(size)
    envelope = (1.0 - factors.tau * grid) ** 2
    if alpha == 0.0:
        return _normalized(3.0 * (M - 1) / (6.0 + 2.0 * factors.tau ** 2) * envelope, 0.0, M)

    gamma = params.resolved_gamma()
    bias = factors.bias
    if gamma < bias:
        raise InfeasibleParametersError(
            f'optimal density turns negative: gamma={gamma:.6g} < bias={bias:.6g} '
            f'(z0={factors.z0}, rho={factors.rho})'
        )
    # smooth factor u = (γ − bias·(1 − p²)^{−2α})(1 − τp)², so that w = (1 − p²)^{2α}·u
    smooth = (gamma - bias * (1.0 - grid ** 2) ** (-2.0 * alpha)) * envelope
    return _normalized(np.clip(smooth, 0.0, None), alpha, M)


def feasibility_margin(params):
    """γ_α − βz0²/(2πρ); the singular family is non-negative iff this is ≥ 0."""
    if params.alpha == 0.0:
        return float('inf')
    return params.resolved_gamma() - params.factors.bias


def simplified_gamma(alpha, M):
    return (M - 1) / complete_beta(0.5, 1.0 + 2.0 * alpha)


def simplified_adf(alpha, M, size=None):
    """γ_α (1 − p²)^{2α}, the τ = 0, zero-bias member of the family."""
    _check_alpha(alpha, allow_zero=True)
    size = size or default_grid_size(M)
    return SampledFunction.constant(simplified_gamma(alpha, M), size, alpha)


def cadf_closed(p, alpha, M):
    """Φ(p) = (M + 1)/2 + sign(p)·(γ_α/2)·B(p²; 1/2, 1 + 2α)."""
    _check_alpha(alpha, allow_zero=True)
    p = np.asarray(p, dtype=float)
    if np.any(np.abs(p) > 1.0):
        raise DomainError('cadf_closed is defined on [-1, 1]')
    gamma = simplified_gamma(alpha, M)
    value = (M + 1) / 2.0 + np.sign(p) * 0.5 * gamma * np.asarray(incomplete_beta(p * p, 0.5, 1.0 + 2.0 * alpha))
    return float(value) if value.ndim == 0 else value


def positions_closed(m, alpha, M):
    """p(m) = sign(2m − M − 1)·sqrt(B^{−1}(|2m − (M + 1)|/γ_α; 1/2, 1 + 2α))."""
    _check_alpha(alpha, allow_zero=True)
    if not 1 <= m <= M:
        raise DomainError(f'antenna index must lie in [1, {M}], got {m!r}')
    b = 1.0 + 2.0 * alpha
    offset = 2.0 * m - (M + 1)
    level = min(abs(offset) / simplified_gamma(alpha, M), complete_beta(0.5, b))
    return float(np.sign(offset) * np.sqrt(inverse_incomplete_beta(level, 0.5, b)))


def closed_form_placement(alpha, M):
    positions = np.array([positions_closed(m, alpha, M) for m in range(1, M + 1)])
    positions[0], positions[-1] = -1.0, 1.0
    return Placement(positions, endpoint_pinned=True)
