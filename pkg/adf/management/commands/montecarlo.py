from dataclasses import replace

from adf.management.base import SimulationCommand
from adf.models import SimulationRun
from adf.utils.harness import aggregate_cdf, cdf_quantile, emit_cdf, emit_records, run_scenario


class Command(SimulationCommand):
    help = 'Monte-Carlo rate CDFs over random channels and random placements'
    default_output = 'montecarlo.csv'
    supports_store = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--trials', type=int, help='Number of trials (overrides [run].trials)')
        parser.add_argument('--cdf-out', help='CDF table path (default: <out>_cdf.csv)')

    def run(self, **options):
        config = self.load_experiment(options)
        if options.get('trials') is not None:
            config = replace(config, run=replace(config.run, trials=max(options['trials'], 0)))
        if config.run.trials < 1:
            self.warn('trials = 0: every scheme is evaluated once per sweep point')

        records = run_scenario(config)
        path = emit_records(records, self.output_path(options, config))
        table = aggregate_cdf(records, key=lambda r: (r.scheme, r.M, r.z0))
        cdf_path = options.get('cdf_out') or path.with_name(f'{path.stem}_cdf.csv')
        emit_cdf({f'{scheme}|M={M}|z0={z0:g}': steps for (scheme, M, z0), steps in table.items()}, cdf_path)

        for (scheme, M, z0), steps in table.items():
            self.stdout.write(f'{scheme:>24s}  M={M:<4d} z0={z0:<6g} median {cdf_quantile(steps, 0.5):.4f} bits')
        self.report(f'Wrote {len(records)} records to {path} and the CDF table to {cdf_path}')

        if options.get('store'):
            run = SimulationRun.store('montecarlo', config.source, config.run.seed, records, path)
            self.report(f'Stored run #{run.pk}')
