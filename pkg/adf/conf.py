"""Simulator settings with defaults, read from ``settings.ADF_SETTINGS``."""
from django.conf import settings

DEFAULTS = {
    'GRID_MULTIPLIER': 8,
    'FH_VARIANT': 'log',
    'THREADS': 1,
    'OUTPUT_DIR': 'results',
    'SPEED_OF_LIGHT': 299792458.0,
    'RUN_TIMING_TESTS': False,
}


def simulator_setting(name):
    overrides = getattr(settings, 'ADF_SETTINGS', {}) if settings.configured else {}
    return overrides.get(name, DEFAULTS[name])


def default_grid_size(M, multiplier=None):
    """P = χ·M grid points for an M-antenna density."""
    if multiplier is None:
        multiplier = simulator_setting('GRID_MULTIPLIER')
    return max(int(multiplier) * int(M), 2)
