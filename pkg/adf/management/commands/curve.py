from adf.management.base import SimulationCommand
from adf.utils.geometry import flexible_curve, place_on_curve
from adf.utils.harness import emit_rows


class Command(SimulationCommand):
    help = 'Flexible-array curve for an edge order alpha and the antenna points on it'
    default_output = 'curve.csv'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--alpha', type=float, default=-0.25, help='Edge singularity order in (-0.5, 0]')
        parser.add_argument('--radius', type=float, default=1.0, help='Curve radius R in meters')
        parser.add_argument('--M', type=int, default=16, help='Antennas placed at equal arc length')
        parser.add_argument('--samples', type=int, default=1025, help='Curve samples (odd)')
        parser.add_argument('--antennas-out', help='Write the antenna points (m, x, y) here')

    def run(self, **options):
        curve = flexible_curve(options['alpha'], options['radius'], options['samples'])
        path = emit_rows(self.output_path(options), ('x', 'y', 'arc_length'), zip(curve.x, curve.y, curve.arc))
        points = place_on_curve(curve, options['M'])
        if options.get('antennas_out'):
            emit_rows(options['antennas_out'], ('m', 'x', 'y'),
                      ((m, x, y) for m, (x, y) in enumerate(points, start=1)))
        self.report(f'Curve of length {curve.length:.6f} m with {len(points)} antennas; samples in {path}')
