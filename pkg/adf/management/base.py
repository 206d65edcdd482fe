from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from adf.conf import simulator_setting
from adf.exceptions import AdfError, ConfigError
from adf.utils.harness import load_config, parse_config

# Desk-scale defaults: 10 GHz carrier, four receive antennas, 10 dB SNR, LoS at 3 m.
DEFAULT_CONFIG = """
[scenario]
f_c = 10e9
N = 4
rho_db = 10.0

[channel]
variant = "los"

[[schemes]]
name = "variational"

[sweep]
M = [64]
z0 = [3.0]
"""


def parse_int_list(value):
    return [int(item) for item in value.split(',') if item.strip()]


def parse_float_list(value):
    return [float(item) for item in value.split(',') if item.strip()]


class SimulationCommand(BaseCommand):
    """Shared flags and error handling for every simulator command.

    Subclasses implement ``run(**options)``; simulator errors become a
    ``CommandError`` so the process exits non-zero with a one-line message.
    """
    default_output = 'output.csv'
    supports_store = False

    def add_arguments(self, parser):
        parser.add_argument('--config', help='TOML experiment file')
        parser.add_argument('--seed', type=int, help='Unsigned 64-bit seed (overrides [run].seed)')
        parser.add_argument('--out', help='Output CSV path')
        parser.add_argument('--threads', type=int, help='Worker threads (overrides [run].threads)')
        if self.supports_store:
            parser.add_argument('--store', action='store_true', help='Also store the records in the database')

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except ConfigError as exc:
            raise CommandError('invalid configuration:\n  ' + '\n  '.join(exc.errors)) from exc
        except AdfError as exc:
            raise CommandError(str(exc)) from exc

    def run(self, **options):
        raise NotImplementedError('subclasses of SimulationCommand must provide a run() method')

    def load_experiment(self, options):
        path = options.get('config')
        config = load_config(path) if path else parse_config(DEFAULT_CONFIG)
        seed = options.get('seed')
        if seed is not None and not 0 <= seed < 2 ** 64:
            raise ConfigError([f'--seed: {seed} is not an unsigned 64-bit integer'])
        threads = options.get('threads')
        if threads is not None and threads < 1:
            raise ConfigError([f'--threads: must be >= 1, got {threads}'])
        return config.with_overrides(seed=seed, output=options.get('out'), threads=threads)

    def output_path(self, options, config=None):
        out = options.get('out') or (config.run.output if config is not None else '')
        if out:
            return Path(out)
        return Path(simulator_setting('OUTPUT_DIR')) / self.default_output

    def report(self, message):
        self.stdout.write(self.style.SUCCESS(message))

    def warn(self, message):
        self.stdout.write(self.style.WARNING(message))
