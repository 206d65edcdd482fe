"""
Projected functional gradient ascent on the antenna density.

Starting from the uniform density (M − 1)/2, each iteration moves w along
the functional derivative of the rate, clips negatives, optionally caps the
density at M − 1, and rescales to ∫w = M − 1. The best-rate iterate is
returned, since the projection makes the ascent non-monotone.
"""
from dataclasses import dataclass
import logging

import numpy as np
from scipy import linalg

from adf.conf import default_grid_size, simulator_setting
from adf.exceptions import DegenerateDensityError, IllConditionedError, InvalidArgumentError
from adf.utils.channel import continuous_responses, gram_from_responses
from adf.utils.geometry import SampledFunction
from adf.utils.rate import rate_functional

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12
STEP_UNITS = ('unit-mass', 'raw')


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the ascent.

    ``step_units='unit-mass'`` applies the step to the unit-mass density
    w/(M − 1), i.e. w moves by η·(M − 1)²·∇; ``'raw'`` moves w by η·∇.
    """
    max_iterations: int = 50
    step_size: float = 1e-3
    threshold: float | None = None
    grid_multiplier: int | None = None
    snr: float = 10.0
    density_cap: bool = False
    step_units: str = 'unit-mass'

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InvalidArgumentError(f'max_iterations must be >= 1, got {self.max_iterations!r}')
        if not self.step_size >= 0.0:
            raise InvalidArgumentError(f'step size must be non-negative, got {self.step_size!r}')
        if self.threshold is not None and not self.threshold >= 0.0:
            raise InvalidArgumentError(f'stopping threshold must be non-negative, got {self.threshold!r}')
        if self.grid_multiplier is not None and self.grid_multiplier < 1:
            raise InvalidArgumentError(f'grid multiplier must be >= 1, got {self.grid_multiplier!r}')
        if not self.snr > 0.0:
            raise InvalidArgumentError(f'SNR must be positive, got {self.snr!r}')
        if self.step_units not in STEP_UNITS:
            raise InvalidArgumentError(f'step units must be one of {STEP_UNITS}, got {self.step_units!r}')

    @property
    def multiplier(self):
        return self.grid_multiplier or simulator_setting('GRID_MULTIPLIER')

    def threshold_for(self, M):
        return self.threshold if self.threshold is not None else 1e-6 * (M - 1)

    def step_for(self, M):
        if self.step_units == 'unit-mass':
            return self.step_size * (M - 1) ** 2
        return self.step_size


@dataclass(frozen=True, eq=False)
class OptimizerTrace:
    rates: tuple
    deltas: tuple
    final_adf: SampledFunction
    iterations: int
    converged: bool
    best_iteration: int

    @property
    def best_rate(self):
        return self.rates[self.best_iteration]

    @property
    def initial_rate(self):
        return self.rates[0]

    def rows(self):
        """(iteration, rate, delta_norm) per recorded iterate."""
        return [(i, rate, delta) for i, (rate, delta) in enumerate(zip(self.rates, self.deltas))]


def gradient_from_responses(responses, gram, rho, M):
    """Functional derivative from precomputed grid responses and their Gram matrix."""
    N = gram.size
    system = np.eye(N) + rho * gram.entries
    condition = np.linalg.cond(system)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise IllConditionedError(f'I + rho*K has condition number {condition:.3e}')
    inverse = linalg.inv(system)
    # hᴴ(p) G h(p) at every grid point
    form = np.einsum('np,nk,kp->p', responses.conj(), inverse, responses)
    real = form.real
    residue = np.abs(form.imag).max(initial=0.0) / max(np.abs(real).max(initial=0.0), 1e-300)
    if residue > 1e-10:
        logger.warning('gradient quadratic form has imaginary residue %.3e', residue)
    return rho / (M * np.log(2.0)) * real


def functional_gradient(w, tx, rx, scenario, rho):
    """δC/δw(p) = ρ/(M ln 2) · h(p)ᴴ (I + ρK̃_w)^{−1} h(p) on w's grid."""
    responses = continuous_responses(w, tx, rx, scenario)
    gram = gram_from_responses(responses, w, tx.M)
    return gradient_from_responses(responses, gram, rho, tx.M)


def project_constraints(w_raw, M, cap=False, edge_order=0.0):
    """Clip to w ≥ 0, optionally cap at M − 1, then rescale to ∫w = M − 1."""
    if isinstance(w_raw, SampledFunction):
        values, edge_order = w_raw.values, w_raw.edge_order
    else:
        values = np.asarray(w_raw, dtype=float)
    clipped = np.maximum(values, 0.0)
    if cap:
        clipped = np.minimum(clipped, M - 1)
    w = SampledFunction(clipped, edge_order)
    total = w.integral()
    if total <= 0.0:
        raise DegenerateDensityError('density vanishes everywhere after clipping')
    return w.scaled((M - 1) / total)


def _grid_norm(w, delta):
    return float(np.sqrt(w.weights @ (delta * delta)))


def optimize_adf(config, tx, rx, scenario):
    M = tx.M
    rho = config.snr
    size = default_grid_size(M, config.multiplier)
    w = SampledFunction.constant((M - 1) / 2.0, size)
    responses = continuous_responses(w, tx, rx, scenario)
    gram = gram_from_responses(responses, w, M)
    rate = rate_functional(gram, rho)

    step = config.step_for(M)
    threshold = config.threshold_for(M)
    rates, deltas = [rate], [0.0]
    best_rate, best_w, best_iteration = rate, w, 0
    converged = False
    iterations = 0

    for iteration in range(1, config.max_iterations + 1):
        gradient = gradient_from_responses(responses, gram, rho, M)
        candidate = project_constraints(w.values + step * gradient, M, cap=config.density_cap)
        delta = _grid_norm(w, candidate.values - w.values)
        w = candidate
        gram = gram_from_responses(responses, w, M)
        rate = rate_functional(gram, rho)
        rates.append(rate)
        deltas.append(delta)
        iterations = iteration
        logger.debug('iteration %d: rate=%.9f delta=%.3e', iteration, rate, delta)
        if rate > best_rate:
            best_rate, best_w, best_iteration = rate, w, iteration
        if delta <= threshold:
            converged = True
            break

    logger.info(
        'variational ascent: M=%d, %d iterations, converged=%s, rate %.6f -> best %.6f bits',
        M, iterations, converged, rates[0], best_rate,
    )
    return OptimizerTrace(
        rates=tuple(rates), deltas=tuple(deltas), final_adf=best_w,
        iterations=iterations, converged=converged, best_iteration=best_iteration,
    )
