import numpy as np

from adf.management.base import SimulationCommand, parse_int_list
from adf.utils.asymptotics import calibrate_fh_variant, exact_vs_asymptotic_table
from adf.utils.harness import emit_rows


class Command(SimulationCommand):
    help = 'Exact Toeplitz log-determinants against the Fisher-Hartwig asymptotics'
    default_output = 'asymptotics.csv'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--alpha', type=float, default=-0.25, help='Exponent at both singularities')
        parser.add_argument('--beta', type=float, default=np.pi / 2, help='Singularities sit at -beta and +beta')
        parser.add_argument('--b', type=float, default=2.0, help='Constant smooth part of the symbol')
        parser.add_argument('--sizes', type=parse_int_list, default=[8, 16, 32, 64])
        parser.add_argument('--variant', choices=['log', 'printed'], help='Fisher-Hartwig variant (default: setting)')
        parser.add_argument('--calibrate', action='store_true', help='Report which variant tracks the exact values')

    def run(self, **options):
        alpha, beta, b = options['alpha'], options['beta'], options['b']
        if options['calibrate']:
            calibration = calibrate_fh_variant(alpha, beta, b, options['sizes'])
            for variant, errors in calibration.errors.items():
                trend = 'decreasing' if calibration.monotone(variant) else 'not monotone'
                self.stdout.write(f'{variant:>8s}: ' + ', '.join(f'{e:.3e}' for e in errors) + f' ({trend})')
            self.report(f'Selected variant: {calibration.selected}')

        rows = exact_vs_asymptotic_table(alpha, alpha, beta, options['sizes'], b, options.get('variant'))
        path = emit_rows(self.output_path(options), ('N', 'exact_logdet', 'fh_logdet', 'abs_error'),
                         ((r.N, r.exact, r.asymptotic, r.abs_error) for r in rows))
        self.report(f'Wrote {len(rows)} rows to {path}')
