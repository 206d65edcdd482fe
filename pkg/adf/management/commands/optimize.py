from dataclasses import replace

from adf.management.base import SimulationCommand
from adf.models import SimulationRun
from adf.utils.channel import channel_matrix
from adf.utils.experiment import ResultRecord
from adf.utils.geometry import discretize_adf
from adf.utils.harness import emit_rows, trial_channel
from adf.utils.rate import achievable_rate_discrete
from adf.utils.variational import OptimizerConfig, optimize_adf


class Command(SimulationCommand):
    help = 'Run the variational ADF ascent and write its trace'
    default_output = 'optimize_trace.csv'
    supports_store = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--M', type=int, help='Number of transmit antennas (default: first [sweep].M)')
        parser.add_argument('--z0', type=float, help='Receiver distance in meters (default: first [sweep].z0)')
        parser.add_argument('--iterations', type=int, help='Maximum iterations I')
        parser.add_argument('--step-size', type=float, help='Step size eta')
        parser.add_argument('--adf-out', help='Write the optimized density (p, w) here')
        parser.add_argument('--positions-out', help='Write the discretized positions (m, p) here')

    def _optimizer(self, config, options):
        optimizer = next((s.optimizer for s in config.schemes if s.optimizer is not None), None)
        optimizer = optimizer or OptimizerConfig(snr=config.scenario.rho)
        if options.get('iterations') is not None:
            optimizer = replace(optimizer, max_iterations=options['iterations'])
        if options.get('step_size') is not None:
            optimizer = replace(optimizer, step_size=options['step_size'])
        return optimizer

    def run(self, **options):
        config = self.load_experiment(options)
        M = options.get('M') or config.sweep.M[0]
        z0 = options.get('z0') or config.sweep.z0[0]
        tx, rx = config.transmit(M), config.receive(z0)
        scenario = trial_channel(config)

        trace = optimize_adf(self._optimizer(config, options), tx, rx, scenario)
        path = emit_rows(self.output_path(options, config), ('iteration', 'rate_bits', 'delta_norm'), trace.rows())
        verdict = 'converged' if trace.converged else 'stopped at the iteration cap'
        self.report(f'{verdict} after {trace.iterations} iterations; best rate {trace.best_rate:.6f} bits '
                    f'(iteration {trace.best_iteration}); trace in {path}')

        w = trace.final_adf
        placement = discretize_adf(w, M)
        if options.get('adf_out'):
            emit_rows(options['adf_out'], ('p', 'w'), zip(w.grid, w.density()))
        if options.get('positions_out'):
            emit_rows(options['positions_out'], ('m', 'p'), enumerate(placement.positions, start=1))

        rate = achievable_rate_discrete(channel_matrix(placement, tx, rx, scenario), config.scenario.rho)
        self.stdout.write(f'Discretized placement rate: {rate:.6f} bits')
        if options.get('store'):
            record = ResultRecord(scheme='variational', M=M, z0=float(z0), alpha=None, trial=0,
                                  rate_bits=rate, wall_time_ms=0.0, seed=config.run.seed)
            run = SimulationRun.store('optimize', config.source, config.run.seed, [record], path)
            self.report(f'Stored run #{run.pk}')
