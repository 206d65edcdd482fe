"""
Experiment execution: configs in, result records and CSV out.

Every (scheme, M, z0, α, trial) point is an independent task. Tasks run on a
thread pool and the records are sorted by key afterwards, so the output bytes
do not depend on the number of threads. Random draws (scatterer arcs and
random placements) come from per-trial counter-based streams.
"""
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import logging
from pathlib import Path
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from adf.conf import default_grid_size, simulator_setting
from adf.exceptions import AdfError, ConfigError, InvalidArgumentError
from adf.serializers import ExperimentSerializer, flatten_errors
from adf.utils.baselines import (
    BaselineConfig, antenna_selection_greedy, greedy_multiplication_count, random_placement, trial_generator,
    ula_placement, variational_multiplication_count,
)
from adf.utils.channel import ChannelScenario, Scatterer, Variant, channel_matrix, continuous_responses, gram_from_responses
from adf.utils.closedform import AdfFamilyParams, closed_form_placement, nearfield_factors, optimal_adf
from adf.utils.geometry import ReceiveArray, SampledFunction, TransmitArray, discretize_adf
from adf.utils.rate import achievable_rate_discrete
from adf.utils.experiment import ResultRecord, format_number
from adf.utils.variational import OptimizerConfig, gradient_from_responses, optimize_adf

logger = logging.getLogger(__name__)

RECORD_HEADER = ('scheme', 'M', 'z0', 'alpha', 'trial', 'rate_bits', 'wall_time_ms', 'seed')
CDF_HEADER = ('group', 'rate_bits', 'fraction')
SCATTERER_STREAM = 1


def parse_config(text):
    """Parse and validate a TOML experiment document.

    Raises ``ConfigError`` carrying every problem found, not just the first.
    """
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f'TOML syntax: {exc}']) from exc
    serializer = ExperimentSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigError(flatten_errors(serializer.errors))
    return serializer.save()


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigError([f'{path}: {exc.strerror or exc}']) from exc
    return parse_config(text)


def scatterer_arc(count, radius, angle_range, seed, trial=0):
    """``count`` scatterers at ``radius`` from the origin in the x–z plane.

    Angles are i.i.d. uniform over ``angle_range``; the draw is fixed by
    (seed, trial).
    """
    if int(count) != count or count < 1:
        raise InvalidArgumentError(f'need at least one scatterer, got {count!r}')
    low, high = angle_range
    rng = trial_generator(seed, trial, SCATTERER_STREAM)
    angles = rng.uniform(low, high, int(count))
    return [Scatterer((radius * np.cos(a), 0.0, radius * np.sin(a))) for a in angles]


@dataclass(frozen=True)
class _Task:
    scheme: object
    M: int
    z0: float
    trial: int


def _scheme_label(scheme):
    if scheme.label:
        return scheme.label
    if scheme.name == 'closed_form' and scheme.form == 'nearfield':
        return 'closed_form_nearfield'
    return scheme.name


def trial_channel(config, trial=0):
    """Channel scenario of one trial; scatterer arcs are redrawn per trial."""
    arc = config.channel.arc
    if config.channel.variant == Variant.LOS:
        return config.channel_for()
    seed = config.run.seed if arc.seed is None else arc.seed
    points = scatterer_arc(arc.count, arc.radius, (arc.angle_min, arc.angle_max), seed, trial)
    return config.channel_for(s.position for s in points)


def build_placement(scheme, config, tx, rx, scenario, trial):
    """Placement of one scheme for one sweep point and trial."""
    M = tx.M
    if scheme.name == 'ULA':
        return ula_placement(M)
    if scheme.name == 'closed_form':
        if scheme.form == 'simplified':
            return closed_form_placement(scheme.alpha, M)
        factors = nearfield_factors(tx, rx, config.scenario.wavelength, config.scenario.rho)
        return discretize_adf(optimal_adf(AdfFamilyParams(scheme.alpha, M, factors)), M)
    if scheme.name == 'variational':
        optimizer = scheme.optimizer or OptimizerConfig(snr=config.scenario.rho)
        trace = optimize_adf(optimizer, tx, rx, scenario)
        return discretize_adf(trace.final_adf, M)
    if scheme.name == 'AS':
        p_as = BaselineConfig('AS', p_as=scheme.p_as).grid_size(M)
        return antenna_selection_greedy(tx, rx, scenario, M, p_as, config.scenario.rho)
    if scheme.name == 'MC':
        return random_placement(M, config.run.seed, trial)
    raise InvalidArgumentError(f'unknown scheme {scheme.name!r}')


def _annotate(exc, context):
    if isinstance(exc, AdfError) and not isinstance(exc, ConfigError):
        return type(exc)(f'{context}: {exc}')
    return AdfError(f'{context}: {exc}')


def _run_task(config, task):
    scheme = task.scheme
    label = _scheme_label(scheme)
    context = f'scheme={label} M={task.M} z0={task.z0} alpha={scheme.alpha} trial={task.trial}'
    try:
        tx = config.transmit(task.M)
        rx = config.receive(task.z0)
        scenario = trial_channel(config, task.trial)
        start = time.perf_counter()
        placement = build_placement(scheme, config, tx, rx, scenario, task.trial)
        rate = achievable_rate_discrete(channel_matrix(placement, tx, rx, scenario), config.scenario.rho)
        elapsed = (time.perf_counter() - start) * 1e3 if config.run.timing else 0.0
    except Exception as exc:
        raise _annotate(exc, context) from exc
    logger.debug('%s: %.6f bits', context, rate)
    return ResultRecord(
        scheme=label, M=task.M, z0=float(task.z0),
        alpha=None if scheme.alpha is None else float(scheme.alpha),
        trial=task.trial, rate_bits=rate, wall_time_ms=elapsed, seed=config.run.seed,
    )


def _tasks(config):
    trials = max(config.run.trials, 1)
    for M in config.sweep.M:
        for z0 in config.sweep.z0:
            for scheme in config.expanded_schemes():
                for trial in range(trials):
                    yield _Task(scheme, int(M), float(z0), trial)


def run_scenario(config, threads=None):
    """Evaluate every scheme at every sweep point and trial; records sorted by key."""
    if not config.schemes:
        raise InvalidArgumentError('experiment has no schemes to run')
    threads = threads or config.run.threads or simulator_setting('THREADS')
    tasks = list(_tasks(config))
    logger.info('running %d tasks on %d thread(s)', len(tasks), threads)
    if threads == 1:
        records = [_run_task(config, task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda task: _run_task(config, task), tasks))
    records.sort(key=lambda r: r.key)
    keys = {r.key for r in records}
    if len(keys) != len(records):
        raise InvalidArgumentError('duplicate result keys; give schemes distinct labels')
    logger.info('finished %d records', len(records))
    return records


def aggregate_cdf(records, key='scheme'):
    """Empirical CDF per group: sorted (rate, fraction ≤ rate) pairs.

    ``key`` is a record attribute name or a callable on records.
    """
    if not records:
        raise InvalidArgumentError('cannot build a CDF from zero records')
    group_of = key if callable(key) else (lambda r: getattr(r, key))
    groups = {}
    for record in records:
        groups.setdefault(group_of(record), []).append(record.rate_bits)
    table = {}
    for group, rates in sorted(groups.items(), key=lambda item: str(item[0])):
        rates = sorted(rates)
        count = len(rates)
        table[group] = [(rate, (i + 1) / count) for i, rate in enumerate(rates)]
    return table


def cdf_quantile(steps, fraction):
    """Smallest rate whose CDF value reaches ``fraction``."""
    if not steps:
        raise InvalidArgumentError('empty CDF')
    for rate, level in steps:
        if level >= fraction - 1e-12:
            return rate
    return steps[-1][0]


def _write_rows(path, header, rows):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8', newline='') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise AdfError(f'cannot write {path}: {exc.strerror or exc}') from exc
    return path


def emit_records(records, path):
    return _write_rows(path, RECORD_HEADER, (r.row() for r in records))


def emit_cdf(table, path):
    rows = ((str(group), format_number(rate), format_number(fraction))
            for group, steps in table.items() for rate, fraction in steps)
    return _write_rows(path, CDF_HEADER, rows)


def emit_rows(path, header, rows):
    """Plain table emission for traces, positions and asymptotic tables."""
    formatted = ([format_number(v) if isinstance(v, (float, np.floating)) else str(v) for v in row] for row in rows)
    return _write_rows(path, header, formatted)


def read_records(path):
    path = Path(path)
    try:
        with path.open('r', encoding='utf-8', newline='') as handle:
            reader = csv.reader(handle)
            header = tuple(next(reader, ()))
            if header != RECORD_HEADER:
                raise AdfError(f'{path}: unexpected header {",".join(header)!r}')
            return [
                ResultRecord(
                    scheme=row[0], M=int(row[1]), z0=float(row[2]),
                    alpha=None if row[3] == '' else float(row[3]),
                    trial=int(row[4]), rate_bits=float(row[5]),
                    wall_time_ms=float(row[6]), seed=int(row[7]),
                )
                for row in reader
            ]
    except OSError as exc:
        raise AdfError(f'cannot read {path}: {exc.strerror or exc}') from exc


@dataclass(frozen=True)
class ComplexityProfile:
    sizes: tuple
    gradient_ms: tuple
    greedy_ms: tuple
    gradient_multiplications: tuple
    greedy_multiplications: tuple

    @staticmethod
    def _exponent(sizes, times):
        slope, _ = np.polyfit(np.log(sizes), np.log(np.maximum(times, 1e-9)), 1)
        return float(slope)

    @property
    def gradient_exponent(self):
        return self._exponent(self.sizes, self.gradient_ms)

    @property
    def greedy_exponent(self):
        return self._exponent(self.sizes, self.greedy_ms)

    def rows(self):
        return list(zip(self.sizes, self.gradient_ms, self.greedy_ms,
                        self.gradient_multiplications, self.greedy_multiplications))


def _best_of(repeats, work):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        work()
        best = min(best, time.perf_counter() - start)
    return best * 1e3


def complexity_profile(sizes=(64, 128, 256, 512), N=4, z0=3.0, wavelength=0.0299792458,
                       rho=10.0, repeats=3, multiplier=None):
    """Wall time of one gradient evaluation and one greedy selection per M."""
    multiplier = multiplier or simulator_setting('GRID_MULTIPLIER')
    scenario = ChannelScenario.los(wavelength)
    gradient_ms, greedy_ms, gradient_counts, greedy_counts = [], [], [], []
    for M in sizes:
        tx = TransmitArray(M=int(M), d=wavelength / 2)
        rx = ReceiveArray(N=N, d=wavelength / 2, z0=z0)
        w = SampledFunction.constant((M - 1) / 2.0, default_grid_size(M, multiplier))

        def gradient():
            responses = continuous_responses(w, tx, rx, scenario)
            gradient_from_responses(responses, gram_from_responses(responses, w, M), rho, M)

        gradient_ms.append(_best_of(repeats, gradient))
        greedy_ms.append(_best_of(1, lambda: antenna_selection_greedy(tx, rx, scenario, M, 2 * M, rho)))
        gradient_counts.append(variational_multiplication_count(1, M, N, multiplier))
        greedy_counts.append(greedy_multiplication_count(M, N, 2 * M))
        logger.info('M=%d: gradient %.3f ms, greedy %.3f ms', M, gradient_ms[-1], greedy_ms[-1])
    return ComplexityProfile(tuple(int(m) for m in sizes), tuple(gradient_ms), tuple(greedy_ms),
                             tuple(gradient_counts), tuple(greedy_counts))
