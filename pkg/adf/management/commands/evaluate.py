import numpy as np

from adf.exceptions import ConfigError
from adf.management.base import SimulationCommand, parse_float_list
from adf.utils.channel import channel_matrix, channel_rows
from adf.utils.geometry import Placement
from adf.utils.harness import emit_rows, trial_channel
from adf.utils.rate import achievable_rate_discrete


class Command(SimulationCommand):
    help = 'Achievable rate of a given placement'
    default_output = 'evaluate.csv'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument('--positions', help='Comma-separated normalized positions in [-1, 1]')
        group.add_argument('--positions-file', help='CSV with a p column (or positions in the last column)')
        parser.add_argument('--z0', type=float, help='Receiver distance (default: first [sweep].z0)')
        parser.add_argument('--channel-out', help='Write the channel matrix rows (n, m, re, im) here')

    def _positions(self, options):
        if options.get('positions'):
            return parse_float_list(options['positions'])
        path = options['positions_file']
        try:
            with open(path, encoding='utf-8') as handle:
                header = handle.readline().strip().split(',')
            column = header.index('p') if 'p' in header else len(header) - 1
            return np.loadtxt(path, delimiter=',', skiprows=1, usecols=column, ndmin=1)
        except (OSError, ValueError) as exc:
            raise ConfigError([f'--positions-file: {exc}']) from exc

    def run(self, **options):
        config = self.load_experiment(options)
        positions = np.asarray(self._positions(options), dtype=float)
        placement = Placement(positions, endpoint_pinned=False)
        z0 = options.get('z0') or config.sweep.z0[0]
        tx, rx = config.transmit(len(placement)), config.receive(z0)
        H = channel_matrix(placement, tx, rx, trial_channel(config))
        rate = achievable_rate_discrete(H, config.scenario.rho)

        path = emit_rows(self.output_path(options, config), ('M', 'z0', 'rate_bits'), [(len(placement), float(z0), rate)])
        if options.get('channel_out'):
            emit_rows(options['channel_out'], ('n', 'm', 're', 'im'), channel_rows(H))
        self.report(f'Rate {rate:.6f} bits for M={len(placement)} at z0={z0} m ({path})')
