from adf.management.base import SimulationCommand, parse_int_list
from adf.utils.harness import complexity_profile, emit_rows


class Command(SimulationCommand):
    help = 'Wall-time and multiplication-count trends of the gradient step and greedy selection'
    default_output = 'complexity.csv'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--sizes', type=parse_int_list, default=[64, 128, 256, 512])
        parser.add_argument('--repeats', type=int, default=3)

    def run(self, **options):
        config = self.load_experiment(options)
        profile = complexity_profile(
            sizes=options['sizes'], N=config.scenario.N, z0=config.sweep.z0[0],
            wavelength=config.scenario.wavelength, rho=config.scenario.rho, repeats=options['repeats'],
        )
        path = emit_rows(self.output_path(options, config),
                         ('M', 'gradient_ms', 'greedy_ms', 'gradient_mults', 'greedy_mults'), profile.rows())
        self.stdout.write(f'gradient time ~ M^{profile.gradient_exponent:.2f}, '
                          f'greedy time ~ M^{profile.greedy_exponent:.2f}')
        self.report(f'Wrote {len(profile.sizes)} rows to {path}')
