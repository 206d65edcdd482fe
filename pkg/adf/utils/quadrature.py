"""
Quadrature on the uniform ADF grid.

A sampled density is stored as w(p) = (1 − p²)^{2α}·u(p) with u piecewise
linear between grid nodes. Integrals of w against smooth kernels use
product-integration weights: the hat functions of u are integrated exactly
against the edge factor, through its primitives

    F0(p) = ∫_0^p (1 − t²)^a dt = sign(p)·B(p²; 1/2, a + 1)/2
    F1(p) = ∫_0^p t(1 − t²)^a dt = (1 − (1 − p²)^{a+1}) / (2(a + 1))

with a = 2α. For α = 0 the weights reduce to the composite trapezoid rule.
"""
import numpy as np
from scipy.optimize import brentq

from adf.exceptions import DegenerateDensityError
from adf.utils.specfun import incomplete_beta

# |ω| above which Fourier weights switch from sampled kernels to Filon cells
FILON_THRESHOLD = 10.0


def uniform_grid(size):
    return np.linspace(-1.0, 1.0, int(size))


def edge_primitives(p, edge_order):
    """Return (F0(p), F1(p)) for the edge factor (1 − p²)^{2·edge_order}."""
    p = np.asarray(p, dtype=float)
    a = 2.0 * edge_order
    sq = np.clip(p * p, 0.0, 1.0)
    f0 = np.sign(p) * 0.5 * np.asarray(incomplete_beta(sq, 0.5, a + 1.0))
    f1 = (1.0 - (1.0 - sq) ** (a + 1.0)) / (2.0 * (a + 1.0))
    return f0, f1


def _cell_moments(size, edge_order):
    grid = uniform_grid(size)
    f0, f1 = edge_primitives(grid, edge_order)
    m0 = np.diff(f0)
    m1 = np.diff(f1)
    h = grid[1] - grid[0]
    left = (grid[1:] * m0 - m1) / h
    right = (m1 - grid[:-1] * m0) / h
    return left, right


def product_weights(size, edge_order=0.0):
    """Weights W with ∫ (1 − p²)^{2α} u(p) dp = Σ W_i u_i for piecewise-linear u."""
    size = int(size)
    if edge_order == 0.0:
        h = 2.0 / (size - 1)
        weights = np.full(size, h)
        weights[0] = weights[-1] = 0.5 * h
        return weights
    left, right = _cell_moments(size, edge_order)
    weights = np.zeros(size)
    weights[:-1] += left
    weights[1:] += right
    return weights


def cell_integrals(values, edge_order=0.0):
    """Integral of the sampled density over each grid cell."""
    values = np.asarray(values, dtype=float)
    size = values.size
    if edge_order == 0.0:
        h = 2.0 / (size - 1)
        return 0.5 * h * (values[:-1] + values[1:])
    left, right = _cell_moments(size, edge_order)
    return left * values[:-1] + right * values[1:]


def cumulative(values, edge_order=0.0):
    """Running integral ∫_{−1}^{p_k} w at every grid node (starts at 0)."""
    return np.concatenate(([0.0], np.cumsum(cell_integrals(values, edge_order))))


def inverse_cumulative(values, edge_order, levels, targets):
    """Left-most p with level(p) = target for each target.

    ``levels`` is an affine rescaling c0 + c1·cumulative(values) evaluated at the
    nodes. Inside a cell the exact primitive of the piecewise-linear density
    is inverted, so the result is exact up to the root-finder tolerance.
    """
    values = np.asarray(values, dtype=float)
    levels = np.asarray(levels, dtype=float)
    grid = uniform_grid(values.size)
    h = grid[1] - grid[0]
    raw = cumulative(values, edge_order)
    if raw[-1] <= 0.0:
        raise DegenerateDensityError('density has zero total mass')
    scale = (levels[-1] - levels[0]) / raw[-1]
    f0_nodes, f1_nodes = edge_primitives(grid, edge_order)

    positions = np.empty(len(targets))
    for i, target in enumerate(targets):
        k = int(np.searchsorted(levels, target, side='left'))
        if k == 0:
            positions[i] = grid[0]
            continue
        if k >= grid.size:
            positions[i] = grid[-1]
            continue
        if levels[k] == target:
            positions[i] = grid[k]
            continue
        a, base = grid[k - 1], levels[k - 1]
        u_a = values[k - 1]
        slope = (values[k] - values[k - 1]) / h
        f0_a, f1_a = f0_nodes[k - 1], f1_nodes[k - 1]

        def gap(p, a=a, base=base, u_a=u_a, slope=slope, f0_a=f0_a, f1_a=f1_a, target=target):
            f0, f1 = edge_primitives(p, edge_order)
            d0 = float(f0) - f0_a
            d1 = float(f1) - f1_a
            return base + scale * (u_a * d0 + slope * (d1 - a * d0)) - target

        positions[i] = brentq(gap, a, grid[k], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return positions


def _filon_cells(grid, omega):
    a, b = grid[:-1], grid[1:]
    h = b - a
    ea = np.exp(-1j * omega * a)
    eb = np.exp(-1j * omega * b)
    i0 = (ea - eb) / (1j * omega)
    i1 = h * eb / (-1j * omega) + i0 / (1j * omega)
    right = i1 / h
    left = i0 - right
    return left, right


def fourier_weights(size, edge_order, omega):
    """Complex weights W with ∫ w(p) e^{−jωp} dp ≈ Σ W_i u_i.

    For |ω| ≤ FILON_THRESHOLD the kernel is sampled at the nodes on top of the
    product weights. Beyond it, cells are integrated analytically against the
    exponential (Filon) with the edge factor folded into the nodal values; the
    two end cells keep sampled kernels when the density has an edge singularity.
    """
    size = int(size)
    grid = uniform_grid(size)
    base = product_weights(size, edge_order)
    if abs(omega) <= FILON_THRESHOLD:
        return base * np.exp(-1j * omega * grid)

    left, right = _filon_cells(grid, omega)
    if edge_order == 0.0:
        weights = np.zeros(size, dtype=complex)
        weights[:-1] += left
        weights[1:] += right
        return weights

    factor = np.zeros(size)
    inner = slice(1, size - 1)
    factor[inner] = (1.0 - grid[inner] ** 2) ** (2.0 * edge_order)
    weights = np.zeros(size, dtype=complex)
    weights[1:size - 2] += left[1:-1] * factor[1:size - 2]
    weights[2:size - 1] += right[1:-1] * factor[2:size - 1]

    end_left, end_right = _cell_moments(size, edge_order)
    kernel = np.exp(-1j * omega * grid)
    weights[0] += end_left[0] * kernel[0]
    weights[1] += end_right[0] * kernel[1]
    weights[-2] += end_left[-1] * kernel[-2]
    weights[-1] += end_right[-1] * kernel[-1]
    return weights
