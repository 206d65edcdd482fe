"""
Graph utilities for emitted results.

Renders CDF curves, rate sweeps, densities and optimizer traces from the
harness tables to PNG files. Plotting failures are logged and reported as
``None`` so a broken figure never aborts a run.
"""
from collections import defaultdict
import logging
from pathlib import Path

import matplotlib
matplotlib.use('Agg')  # Use non-interactive backend
import matplotlib.pyplot as plt
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

FIGSIZE = (6, 4.5)
DPI = 120


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format='png', dpi=DPI, bbox_inches='tight')
    plt.close(fig)
    return path


def _axes(title, xlabel, ylabel):
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot(111)
    ax.set_title(title, fontsize=10, fontweight='bold')
    ax.set_xlabel(xlabel, fontsize=9)
    ax.set_ylabel(ylabel, fontsize=9)
    ax.grid(True, alpha=0.3)
    return fig, ax


def generate_cdf_graph(table, path, title='Achievable rate CDF'):
    """Step plot of an ``aggregate_cdf`` table, one curve per group."""
    try:
        if not table:
            return None
        fig, ax = _axes(title, 'Achievable rate (bits/s/Hz)', 'CDF')
        for group, steps in table.items():
            rates = [rate for rate, _ in steps]
            fractions = [fraction for _, fraction in steps]
            ax.step(rates, fractions, where='post', linewidth=1.5, label=str(group))
        ax.set_ylim(0.0, 1.0)
        ax.legend(fontsize=7, loc='best')
        return _save(fig, path)
    except Exception as exc:
        logger.error('could not render CDF graph %s: %s', path, exc)
        return None


def generate_sweep_graph(records, path, axis='M', title=None):
    """Mean rate against ``axis`` ('M' or 'z0'), one line per scheme."""
    try:
        if not records:
            return None
        series = defaultdict(lambda: defaultdict(list))
        for record in records:
            series[record.scheme][getattr(record, axis)].append(record.rate_bits)
        xlabel = 'Number of antennas M' if axis == 'M' else 'Distance z0 (m)'
        fig, ax = _axes(title or f'Rate versus {axis}', xlabel, 'Achievable rate (bits/s/Hz)')
        for scheme in sorted(series):
            points = sorted(series[scheme].items())
            xs = [x for x, _ in points]
            ys = [sum(rates) / len(rates) for _, rates in points]
            ax.plot(xs, ys, marker='o', markersize=4, linewidth=1.5, label=scheme)
        if axis == 'M':
            ax.set_xscale('log', base=2)
        ax.legend(fontsize=7, loc='best')
        return _save(fig, path)
    except Exception as exc:
        logger.error('could not render sweep graph %s: %s', path, exc)
        return None


def generate_adf_graph(grid, density, path, positions=None, title='Antenna density'):
    """Density curve with the discrete positions as a rug underneath."""
    try:
        fig, ax = _axes(title, 'Normalized position p', 'w(p)')
        ax.plot(grid, density, 'b-', linewidth=1.5, label='ADF')
        if positions is not None and len(positions):
            ax.plot(positions, [0.0] * len(positions), '|', color='k', markersize=10, label='antennas')
        ax.set_xlim(-1.0, 1.0)
        ax.legend(fontsize=7, loc='best')
        return _save(fig, path)
    except Exception as exc:
        logger.error('could not render density graph %s: %s', path, exc)
        return None


def generate_trace_graph(rows, path, title='Variational ascent'):
    """Rate per iteration from ``OptimizerTrace.rows()``-shaped rows."""
    try:
        if not rows:
            return None
        fig, ax = _axes(title, 'Iteration', 'Rate (bits/s/Hz)')
        ax.plot([row[0] for row in rows], [row[1] for row in rows], 'b-', marker='o', markersize=3)
        return _save(fig, path)
    except Exception as exc:
        logger.error('could not render trace graph %s: %s', path, exc)
        return None


def generate_asymptotics_graph(rows, path, title='Toeplitz log-determinant'):
    """Exact against Fisher–Hartwig log-determinants from (N, exact, asymptotic, ...) rows."""
    try:
        if not rows:
            return None
        fig, ax = _axes(title, 'N', 'log det (nats)')
        sizes = [row[0] for row in rows]
        ax.plot(sizes, [row[1] for row in rows], 'ko', label='exact')
        ax.plot(sizes, [row[2] for row in rows], 'r-', linewidth=1.5, label='asymptotic')
        ax.set_xscale('log', base=2)
        ax.legend(fontsize=7, loc='best')
        return _save(fig, path)
    except Exception as exc:
        logger.error('could not render asymptotics graph %s: %s', path, exc)
        return None
