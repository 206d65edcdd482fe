"""Reference placements: uniform array, greedy antenna selection and random draws."""
from dataclasses import dataclass
import logging

import numpy as np
from scipy import linalg

from adf.exceptions import InvalidArgumentError
from adf.utils.channel import response_block
from adf.utils.geometry import Placement, linear_coordinates, receive_coordinates, uniform_apf
from adf.utils.quadrature import uniform_grid

logger = logging.getLogger(__name__)

SCHEMES = ('ULA', 'AS', 'MC')
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BaselineConfig:
    scheme: str
    p_as: int | None = None
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f'baseline scheme must be one of {SCHEMES}, got {self.scheme!r}')
        if self.scheme == 'MC' and self.trials < 1:
            raise InvalidArgumentError(f'Monte-Carlo baseline needs trials >= 1, got {self.trials!r}')
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgumentError(f'seed must be an unsigned 64-bit integer, got {self.seed!r}')

    def grid_size(self, M):
        """Candidate grid size, 2M unless configured."""
        size = self.p_as or 2 * M
        if size < M:
            raise InvalidArgumentError(f'P_AS={size} is smaller than M={M}')
        return size


def ula_placement(M):
    return uniform_apf(M)


def _selection_scores(candidates, selected, rho, M):
    # det(I + ρK + ρhhᴴ/M) = det(I + ρK)·(1 + ρ hᴴ(I + ρK)^{−1}h / M)
    N = candidates.shape[0]
    system = np.eye(N, dtype=complex)
    if selected.shape[1]:
        system += rho * (selected @ selected.conj().T) / M
    inverse = linalg.inv(system)
    return np.einsum('np,nk,kp->p', candidates.conj(), inverse, candidates).real


def antenna_selection_greedy(tx, rx, scenario, M, p_as, rho):
    """Forward greedy selection of M of the P_AS uniform grid points.

    Each step adds the candidate with the largest rate increase; ties within
    a relative 1e-12 go to the smaller position.
    """
    if int(M) != M or M < 1:
        raise InvalidArgumentError(f'M must be a positive integer, got {M!r}')
    if int(p_as) != p_as or p_as < M:
        raise InvalidArgumentError(f'P_AS={p_as!r} must be an integer >= M={M}')
    grid = uniform_grid(p_as) if p_as > 1 else np.zeros(1)
    responses = response_block(receive_coordinates(rx), linear_coordinates(grid, tx), scenario, rx.z0)

    available = np.ones(grid.size, dtype=bool)
    chosen = []
    for _ in range(int(M)):
        scores = _selection_scores(responses, responses[:, chosen], rho, M)
        scores[~available] = -np.inf
        best = scores.max()
        pick = int(np.nonzero(scores >= best - TIE_TOLERANCE * abs(best))[0][0])
        chosen.append(pick)
        available[pick] = False

    positions = np.sort(grid[chosen])
    pinned = positions[0] == -1.0 and positions[-1] == 1.0
    logger.debug('greedy selection of %d from %d grid points', M, p_as)
    return Placement(positions, endpoint_pinned=bool(pinned))


def trial_generator(seed, trial, stream=0):
    """Independent counter-based stream for ``trial`` under ``seed``.

    Stream 0 draws random placements; other streams key auxiliary draws.
    """
    spawn_key = (int(trial),) if stream == 0 else (int(trial), int(stream))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


def random_placement(M, seed, trial):
    rng = trial_generator(seed, trial)
    while True:
        interior = np.sort(rng.uniform(-1.0, 1.0, int(M) - 2))
        positions = np.concatenate(([-1.0], interior, [1.0]))
        if np.all(np.diff(positions) > 0.0):
            return Placement(positions, endpoint_pinned=True)


def random_placements(M, trials, seed):
    """``trials`` placements with pinned ends and uniform sorted interior points."""
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f'random placements need M >= 2, got {M!r}')
    if int(trials) != trials or trials < 1:
        raise InvalidArgumentError(f'trials must be >= 1, got {trials!r}')
    return [random_placement(M, seed, trial) for trial in range(int(trials))]


def greedy_multiplication_count(M, N, p_as):
    """P_AS(N + MN²) + MN³."""
    return p_as * (N + M * N ** 2) + M * N ** 3


def variational_multiplication_count(iterations, M, N, multiplier):
    """I(χMN² + N³)."""
    return iterations * (multiplier * M * N ** 2 + N ** 3)
