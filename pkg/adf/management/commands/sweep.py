from adf.management.base import SimulationCommand
from adf.models import SimulationRun
from adf.utils.harness import emit_records, run_scenario


class Command(SimulationCommand):
    help = 'Rate of every configured scheme over the M / z0 / alpha sweep grid'
    default_output = 'sweep.csv'
    supports_store = True

    def run(self, **options):
        config = self.load_experiment(options)
        records = run_scenario(config)
        path = emit_records(records, self.output_path(options, config))
        self.report(f'Wrote {len(records)} records to {path}')

        if options.get('store'):
            run = SimulationRun.store('sweep', config.source, config.run.seed, records, path)
            self.report(f'Stored run #{run.pk}')
