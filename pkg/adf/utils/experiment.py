"""Validated experiment configuration, as produced by ``adf.serializers``."""
from dataclasses import dataclass, field, replace

import numpy as np

from adf.utils.channel import ChannelScenario, Normalization, Scatterer, Variant
from adf.utils.geometry import ReceiveArray, TransmitArray
from adf.utils.variational import OptimizerConfig

SCHEME_NAMES = ('ULA', 'AS', 'MC', 'closed_form', 'variational')
RANDOM_SCHEMES = ('MC',)


@dataclass(frozen=True)
class ScenarioConfig:
    carrier_frequency: float
    wavelength: float
    N: int
    d_r: float
    d_t: float
    theta_t: float = np.pi / 2
    phi_t: float = 0.0
    theta_r: float = np.pi / 2
    phi_r: float = 0.0
    rho_db: float = 10.0

    @property
    def rho(self):
        return 10.0 ** (self.rho_db / 10.0)


@dataclass(frozen=True)
class ScattererArc:
    count: int
    radius: float
    angle_min: float
    angle_max: float
    seed: int | None = None


@dataclass(frozen=True)
class ChannelConfig:
    variant: Variant = Variant.LOS
    k_db: float | None = None
    normalization: Normalization = Normalization.RAW
    arc: ScattererArc | None = None

    @property
    def k_linear(self):
        return 0.0 if self.k_db is None else 10.0 ** (self.k_db / 10.0)


@dataclass(frozen=True)
class SchemeConfig:
    name: str
    label: str = ''
    alpha: float | None = None
    form: str = 'simplified'
    p_as: int | None = None
    optimizer: OptimizerConfig | None = None

    @property
    def key(self):
        return self.label or self.name

    @property
    def randomized(self):
        return self.name in RANDOM_SCHEMES


@dataclass(frozen=True)
class SweepConfig:
    M: tuple = (64,)
    z0: tuple = (3.0,)
    alpha: tuple = ()


@dataclass(frozen=True)
class RunConfig:
    trials: int = 0
    seed: int = 0
    output: str = ''
    threads: int = 1
    timing: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig
    channel: ChannelConfig = ChannelConfig()
    schemes: tuple = ()
    sweep: SweepConfig = SweepConfig()
    run: RunConfig = RunConfig()
    source: dict = field(default_factory=dict, compare=False, repr=False)

    def transmit(self, M):
        s = self.scenario
        return TransmitArray(M=int(M), d=s.d_t, theta=s.theta_t, phi=s.phi_t)

    def receive(self, z0):
        s = self.scenario
        return ReceiveArray(N=s.N, d=s.d_r, z0=float(z0), theta=s.theta_r, phi=s.phi_r)

    def channel_for(self, scatterers=()):
        c = self.channel
        wavelength = self.scenario.wavelength
        if c.variant == Variant.LOS:
            return ChannelScenario.los(wavelength, c.normalization)
        scatterers = tuple(Scatterer(p) for p in scatterers)
        if c.variant == Variant.NLOS:
            return ChannelScenario.nlos(wavelength, scatterers, c.normalization)
        return ChannelScenario.rician(wavelength, c.k_linear, scatterers, c.normalization)

    def expanded_schemes(self):
        """Schemes with closed-form entries repeated over the α sweep when one is given."""
        expanded = []
        for scheme in self.schemes:
            if scheme.name == 'closed_form' and self.sweep.alpha:
                expanded.extend(replace(scheme, alpha=float(a)) for a in self.sweep.alpha)
            else:
                expanded.append(scheme)
        return tuple(expanded)

    def with_overrides(self, seed=None, output=None, threads=None):
        run = self.run
        if seed is not None:
            run = replace(run, seed=int(seed))
        if output is not None:
            run = replace(run, output=str(output))
        if threads is not None:
            run = replace(run, threads=int(threads))
        return replace(self, run=run)


def format_number(value):
    """Floats as written to result tables: 12 significant digits."""
    return format(float(value), '.12g')


@dataclass(frozen=True)
class ResultRecord:
    scheme: str
    M: int
    z0: float
    alpha: float | None
    trial: int
    rate_bits: float
    wall_time_ms: float
    seed: int

    @property
    def key(self):
        return (self.scheme, self.M, self.z0, -np.inf if self.alpha is None else self.alpha, self.trial)

    def row(self):
        return (
            self.scheme, str(self.M), format_number(self.z0),
            '' if self.alpha is None else format_number(self.alpha),
            str(self.trial), format_number(self.rate_bits), format_number(self.wall_time_ms), str(self.seed),
        )
