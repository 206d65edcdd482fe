"""
Special functions for the closed-form densities and the Toeplitz asymptotics.

Gamma, digamma and the incomplete Beta function are thin, domain-checked
wrappers over ``scipy.special``. The Barnes G-function is not in SciPy and is
evaluated from its Maclaurin series around 1 plus the functional equation.
"""
import logging

import numpy as np
from scipy import special
from scipy.optimize import brentq

from adf.exceptions import DomainError

logger = logging.getLogger(__name__)

LOG_TWO_PI = float(np.log(2.0 * np.pi))
EULER_GAMMA = float(np.euler_gamma)

# zeta(k) for k = 2, 3, ...
_ZETA = special.zeta(np.arange(2, 130, dtype=float), 1.0)
_SERIES_TOL = 1e-14
_NEWTON_STEPS = 4


def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f'{name} is defined for positive arguments only, got {x!r}')
    return arr


def _like(result, x):
    return float(result) if np.ndim(x) == 0 else result


def log_gamma(x):
    """log Γ(x) for x > 0 (scalar or array)."""
    return _like(special.gammaln(_positive(x, 'log_gamma')), x)


def digamma(x):
    """ψ(x) = d/dx log Γ(x) for x > 0 (scalar or array)."""
    return _like(special.psi(_positive(x, 'digamma')), x)


def _log_g_series(z):
    # log G(1+z) = (z/2) log 2π − (z + (1+γ) z²)/2 + Σ_{k≥2} (−1)^k ζ(k) z^{k+1}/(k+1)
    total = 0.5 * z * LOG_TWO_PI - 0.5 * (z + (1.0 + EULER_GAMMA) * z * z)
    power = z * z
    for offset, zeta_k in enumerate(_ZETA):
        k = offset + 2
        power *= z
        term = (-1) ** k * zeta_k * power / (k + 1)
        total += term
        if abs(term) < _SERIES_TOL:
            break
    return total


def log_barnes_g(x):
    """log G(x) for real x > 0.

    The argument is shifted into [0.5, 1.5] with G(x+1) = Γ(x)·G(x), where
    the series in z = x − 1 converges geometrically.
    """
    value = float(_positive(x, 'log_barnes_g'))
    shift = 0.0
    while value > 1.5:
        value -= 1.0
        shift += float(special.gammaln(value))
    while value < 0.5:
        shift -= float(special.gammaln(value))
        value += 1.0
    return _log_g_series(value - 1.0) + shift


def _check_beta_params(a, b):
    if not (np.isfinite(a) and np.isfinite(b)) or a <= 0 or b <= 0:
        raise DomainError(f'Beta parameters must be positive, got a={a!r}, b={b!r}')


def complete_beta(a, b):
    """B(a, b) = Γ(a)Γ(b)/Γ(a+b)."""
    _check_beta_params(a, b)
    return float(special.beta(a, b))


def incomplete_beta(x, a, b):
    """Unnormalized incomplete Beta ∫_0^x t^{a−1}(1−t)^{b−1} dt.

    ``x`` may be an array; every entry must lie in [0, 1].
    """
    _check_beta_params(a, b)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f'incomplete_beta needs x in [0, 1], got {x!r}')
    return _like(special.betainc(a, b, arr) * special.beta(a, b), x)


def inverse_incomplete_beta(y, a, b):
    """Solve incomplete_beta(x, a, b) = y for x in [0, 1].

    Bracketed root finding on [0, 1] followed by a few Newton steps on the
    unnormalized function; a Newton step is kept only if it reduces the residual.
    """
    _check_beta_params(a, b)
    total = float(special.beta(a, b))
    y = float(y)
    slack = 1e-13 * total
    if not np.isfinite(y) or y < -slack or y > total + slack:
        raise DomainError(f'inverse_incomplete_beta needs y in [0, {total}], got {y!r}')
    if y <= 0.0:
        return 0.0
    if y >= total:
        return 1.0

    def residual(t):
        return float(special.betainc(a, b, t)) * total - y

    x = brentq(residual, 0.0, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    best = abs(residual(x))
    for _ in range(_NEWTON_STEPS):
        if best == 0.0 or x <= 0.0 or x >= 1.0:
            break
        slope = np.exp((a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x))
        candidate = x - residual(x) / slope
        if not 0.0 < candidate < 1.0:
            break
        err = abs(residual(candidate))
        if err >= best:
            break
        x, best = candidate, err
    return float(x)
