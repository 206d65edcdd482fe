from adf.management.base import SimulationCommand
from adf.utils.closedform import (
    AdfFamilyParams, cadf_closed, closed_form_placement, nearfield_factors, optimal_adf, simplified_adf,
)
from adf.utils.geometry import discretize_adf
from adf.utils.harness import emit_rows


class Command(SimulationCommand):
    help = 'Emit closed-form antenna positions (and optionally the density) for an edge order alpha'
    default_output = 'closed_form_positions.csv'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--alpha', type=float, required=True, help='Edge singularity order in (-0.5, 0]')
        parser.add_argument('--M', type=int, help='Number of antennas (default: first [sweep].M)')
        parser.add_argument('--z0', type=float, help='Receiver distance for --form nearfield')
        parser.add_argument('--form', choices=['simplified', 'nearfield'], default='simplified')
        parser.add_argument('--adf-out', help='Write the density samples (p, w) here')

    def run(self, **options):
        config = self.load_experiment(options)
        alpha = options['alpha']
        M = options.get('M') or config.sweep.M[0]

        if options['form'] == 'simplified':
            placement = closed_form_placement(alpha, M)
            w = simplified_adf(alpha, M)
            rows = [(m, p, cadf_closed(p, alpha, M)) for m, p in enumerate(placement.positions, start=1)]
        else:
            z0 = options.get('z0') or config.sweep.z0[0]
            tx, rx = config.transmit(M), config.receive(z0)
            factors = nearfield_factors(tx, rx, config.scenario.wavelength, config.scenario.rho)
            w = optimal_adf(AdfFamilyParams(alpha, M, factors))
            placement = discretize_adf(w, M)
            rows = [(m, p, '') for m, p in enumerate(placement.positions, start=1)]

        path = emit_rows(self.output_path(options, config), ('m', 'p', 'cadf'), rows)
        if options.get('adf_out'):
            interior = slice(1, -1) if w.edge_order < 0.0 else slice(None)
            emit_rows(options['adf_out'], ('p', 'w'), zip(w.grid[interior], w.density()[interior]))
        self.report(f'Wrote {M} {options["form"]} positions for alpha={alpha} to {path}')
