import csv
from pathlib import Path

from django.core.management.base import CommandError

from adf.management.base import SimulationCommand
from adf.utils import graph_utils
from adf.utils.harness import aggregate_cdf, read_records


class Command(SimulationCommand):
    help = 'Render emitted CSV tables to PNG figures'

    def add_arguments(self, parser):
        parser.add_argument('source', help='CSV file written by another simulator command')
        parser.add_argument('--kind', choices=['sweep', 'cdf', 'trace', 'asymptotics', 'adf'], default='sweep')
        parser.add_argument('--axis', choices=['M', 'z0'], default='M', help='Sweep axis for --kind sweep')
        parser.add_argument('--out', help='PNG path (default: next to the source)')

    def _table(self, source):
        with Path(source).open(encoding='utf-8', newline='') as handle:
            reader = csv.reader(handle)
            next(reader, None)
            return [[float(value) for value in row] for row in reader]

    def run(self, **options):
        source = Path(options['source'])
        out = Path(options.get('out') or source.with_suffix('.png'))
        kind = options['kind']
        if kind in ('sweep', 'cdf'):
            records = read_records(source)
            if kind == 'sweep':
                result = graph_utils.generate_sweep_graph(records, out, axis=options['axis'])
            else:
                result = graph_utils.generate_cdf_graph(aggregate_cdf(records), out)
        else:
            try:
                rows = self._table(source)
            except (OSError, ValueError) as exc:
                raise CommandError(f'cannot read {source}: {exc}') from exc
            if kind == 'trace':
                result = graph_utils.generate_trace_graph(rows, out)
            elif kind == 'asymptotics':
                result = graph_utils.generate_asymptotics_graph(rows, out)
            else:
                result = graph_utils.generate_adf_graph([r[0] for r in rows], [r[1] for r in rows], out)
        if result is None:
            raise CommandError(f'could not render {kind} figure from {source}')
        self.report(f'Wrote {result}')
