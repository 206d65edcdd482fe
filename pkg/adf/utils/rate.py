"""Achievable rate of a placement and the continuous rate functional, in bits."""
from dataclasses import dataclass

import numpy as np

from adf.exceptions import InvalidArgumentError
from adf.utils.channel import ChannelMatrix, GramMatrix, gram_discrete


@dataclass(frozen=True)
class RatePoint:
    rate: float
    snr: float
    scheme: str = ''
    scenario: str = ''

    def __post_init__(self):
        if not self.rate >= 0.0:
            raise InvalidArgumentError(f'rate must be non-negative, got {self.rate!r}')
        if not self.snr > 0.0:
            raise InvalidArgumentError(f'SNR must be positive, got {self.snr!r}')


def _check_snr(rho):
    if not np.isfinite(rho) or rho <= 0.0:
        raise InvalidArgumentError(f'SNR must be a positive linear power ratio, got {rho!r}')


def log_det_rate(eigenvalues, rho):
    """Σ log2(1 + ρλ) with round-off negatives clipped to zero."""
    return float(np.sum(np.log2(1.0 + rho * np.clip(eigenvalues, 0.0, None))))


def rate_functional(Kw, rho):
    """log2 det(I + ρK) from the eigenvalues of a Hermitian PSD Gram matrix."""
    _check_snr(rho)
    if not isinstance(Kw, GramMatrix):
        Kw = GramMatrix(Kw)
    return log_det_rate(Kw.eigenvalues(), rho)


def achievable_rate_discrete(H, rho):
    """Σ_i log2(1 + ρ·λ_i(K_f)) with K_f = (1/M)HHᴴ."""
    _check_snr(rho)
    if not isinstance(H, ChannelMatrix):
        H = ChannelMatrix(H)
    return rate_functional(gram_discrete(H), rho)
