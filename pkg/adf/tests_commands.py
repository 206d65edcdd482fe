from io import StringIO
from pathlib import Path
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from adf.models import RateRecord, SimulationRun
from adf.utils.harness import read_records

SMALL_CONFIG = """
[scenario]
f_c = 10e9
N = 4

[channel]
variant = "rician"
k_db = 10.0

[channel.scatterers]
count = 10
radius = 3.0
angle_min = "pi/6"
angle_max = "5*pi/6"

[[schemes]]
name = "ULA"

[[schemes]]
name = "MC"

[[schemes]]
name = "closed_form"
alpha = -0.25

[sweep]
M = [8, 16]
z0 = [3.0]

[run]
trials = 3
seed = 11
"""


class CommandTestMixin:
    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.config = self.tmp / 'experiment.toml'
        self.config.write_text(SMALL_CONFIG, encoding='utf-8')

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def call(self, name, *args, **options):
        out = StringIO()
        call_command(name, *args, stdout=out, **options)
        return out.getvalue()

    def lines(self, path):
        return Path(path).read_text(encoding='utf-8').splitlines()


class SweepCommandTest(CommandTestMixin, SimpleTestCase):
    def test_sweep_writes_records(self):
        """Test the sweep writes one row per scheme, M and trial."""
        out = self.tmp / 'sweep.csv'
        output = self.call('sweep', config=str(self.config), out=str(out))
        self.assertIn('Wrote 18 records', output)
        self.assertEqual(len(read_records(out)), 18)

    def test_seed_override_and_threads(self):
        """Test --seed changes the seed column and --threads leaves the bytes alone."""
        single = self.tmp / 'single.csv'
        threaded = self.tmp / 'threaded.csv'
        self.call('sweep', config=str(self.config), out=str(single), seed=7, threads=1)
        self.call('sweep', config=str(self.config), out=str(threaded), seed=7, threads=3)
        self.assertEqual(single.read_bytes(), threaded.read_bytes())
        self.assertTrue(all(r.seed == 7 for r in read_records(single)))

    def test_invalid_config(self):
        """Test configuration problems surface as one CommandError listing each of them."""
        self.config.write_text('[scenario]\nf_c = 10e9\ncolour = "red"\n', encoding='utf-8')
        with self.assertRaises(CommandError) as raised:
            self.call('sweep', config=str(self.config), out=str(self.tmp / 'never.csv'))
        self.assertIn('scenario.colour: Unknown field.', str(raised.exception))
        self.assertIn('scenario.N', str(raised.exception))
        self.assertFalse((self.tmp / 'never.csv').exists())

    def test_missing_config_file(self):
        """Test an unreadable config path is reported."""
        with self.assertRaises(CommandError):
            self.call('sweep', config=str(self.tmp / 'absent.toml'), out=str(self.tmp / 'never.csv'))

    def test_seed_range(self):
        """Test --seed must be an unsigned 64-bit integer."""
        with self.assertRaises(CommandError):
            self.call('sweep', config=str(self.config), out=str(self.tmp / 'never.csv'), seed=-1)


class MonteCarloCommandTest(CommandTestMixin, SimpleTestCase):
    def test_records_and_cdf(self):
        """Test the Monte-Carlo command writes records and a CDF table next to them."""
        out = self.tmp / 'mc.csv'
        output = self.call('montecarlo', config=str(self.config), out=str(out), trials=4)
        self.assertEqual(len(read_records(out)), 3 * 2 * 4)
        cdf = self.lines(self.tmp / 'mc_cdf.csv')
        self.assertEqual(cdf[0], 'group,rate_bits,fraction')
        self.assertEqual(len(cdf) - 1, 3 * 2 * 4)
        self.assertIn('median', output)


class OptimizeCommandTest(CommandTestMixin, SimpleTestCase):
    def test_trace_and_outputs(self):
        """Test the optimizer trace, density and position files."""
        trace = self.tmp / 'trace.csv'
        positions = self.tmp / 'positions.csv'
        adf = self.tmp / 'adf.csv'
        output = self.call('optimize', out=str(trace), M=16, iterations=3,
                           positions_out=str(positions), adf_out=str(adf))
        rows = self.lines(trace)
        self.assertEqual(rows[0], 'iteration,rate_bits,delta_norm')
        self.assertTrue(2 <= len(rows) - 1 <= 4)
        self.assertEqual(len(self.lines(positions)), 17)
        self.assertEqual(self.lines(adf)[0], 'p,w')
        self.assertIn('Discretized placement rate', output)


class ClosedFormCommandTest(CommandTestMixin, SimpleTestCase):
    def test_simplified_positions(self):
        """Test the α = −0.25 positions follow the arcsine law."""
        out = self.tmp / 'positions.csv'
        self.call('closed_form', alpha=-0.25, M=16, out=str(out))
        rows = [line.split(',') for line in self.lines(out)[1:]]
        self.assertEqual(len(rows), 16)
        self.assertEqual(rows[11][0], '12')
        self.assertAlmostEqual(float(rows[11][1]), 0.6691, places=4)
        self.assertEqual(float(rows[0][1]), -1.0)
        self.assertEqual(float(rows[-1][1]), 1.0)

    def test_nearfield_form(self):
        """Test the near-field form writes positions and density samples."""
        out = self.tmp / 'nearfield.csv'
        adf = self.tmp / 'nearfield_adf.csv'
        self.call('closed_form', alpha=-0.25, M=16, form='nearfield', out=str(out), adf_out=str(adf))
        self.assertEqual(len(self.lines(out)), 17)
        self.assertEqual(self.lines(adf)[0], 'p,w')

    def test_alpha_out_of_range(self):
        """Test α outside (−0.5, 0] is rejected."""
        with self.assertRaises(CommandError):
            self.call('closed_form', alpha=-0.5, M=16, out=str(self.tmp / 'never.csv'))


class EvaluateCommandTest(CommandTestMixin, SimpleTestCase):
    def test_positions_list(self):
        """Test a rate for explicit positions, with the channel written out."""
        out = self.tmp / 'rate.csv'
        channel = self.tmp / 'channel.csv'
        self.call('evaluate', positions='-1,-0.2,0.5,1', out=str(out), channel_out=str(channel))
        header, row = self.lines(out)
        self.assertEqual(header, 'M,z0,rate_bits')
        self.assertTrue(row.startswith('4,3,'))
        self.assertGreater(float(row.split(',')[2]), 0.0)
        self.assertEqual(len(self.lines(channel)), 1 + 4 * 4)

    def test_positions_file(self):
        """Test positions read from the last column of a closed_form table."""
        positions = self.tmp / 'positions.csv'
        self.call('closed_form', alpha=-0.25, M=8, out=str(positions))
        out = self.tmp / 'rate.csv'
        self.call('evaluate', positions_file=str(positions), out=str(out))
        self.assertTrue(self.lines(out)[1].startswith('8,'))

    def test_unsorted_positions(self):
        """Test positions must be strictly increasing."""
        with self.assertRaises(CommandError):
            self.call('evaluate', positions='0.5,-0.5', out=str(self.tmp / 'never.csv'))


class AuxiliaryCommandTest(CommandTestMixin, SimpleTestCase):
    def test_asymptotics_table(self):
        """Test one exact / asymptotic row per matrix size."""
        out = self.tmp / 'asymptotics.csv'
        self.call('asymptotics', sizes=[8, 16], out=str(out))
        rows = self.lines(out)
        self.assertEqual(rows[0], 'N,exact_logdet,fh_logdet,abs_error')
        self.assertEqual([row.split(',')[0] for row in rows[1:]], ['8', '16'])

    def test_curve(self):
        """Test the flexible curve samples and antenna points."""
        out = self.tmp / 'curve.csv'
        antennas = self.tmp / 'antennas.csv'
        self.call('curve', alpha=-0.25, radius=1.0, M=8, samples=65, out=str(out), antennas_out=str(antennas))
        self.assertEqual(len(self.lines(out)), 66)
        self.assertEqual(len(self.lines(antennas)), 9)

    def test_complexity(self):
        """Test the complexity table at small sizes."""
        out = self.tmp / 'complexity.csv'
        output = self.call('complexity', sizes=[8, 16], repeats=1, out=str(out))
        self.assertEqual(len(self.lines(out)), 3)
        self.assertIn('greedy time ~ M^', output)

    def test_plots(self):
        """Test sweep, CDF and trace figures render to PNG."""
        records = self.tmp / 'sweep.csv'
        self.call('sweep', config=str(self.config), out=str(records))
        trace = self.tmp / 'trace.csv'
        self.call('optimize', out=str(trace), M=8, iterations=2)
        for kind, source in (('sweep', records), ('cdf', records), ('trace', trace)):
            target = self.tmp / f'{kind}.png'
            self.call('plot_results', str(source), kind=kind, out=str(target))
            self.assertTrue(target.read_bytes().startswith(b'\x89PNG'))

    def test_plot_wrong_table(self):
        """Test a record plot of a non-record table fails cleanly."""
        trace = self.tmp / 'trace.csv'
        self.call('optimize', out=str(trace), M=8, iterations=2)
        with self.assertRaises(CommandError):
            self.call('plot_results', str(trace), kind='sweep', out=str(self.tmp / 'never.png'))


class StoreTest(CommandTestMixin, TestCase):
    def test_sweep_store(self):
        """Test --store keeps the run and every record in the database."""
        out = self.tmp / 'sweep.csv'
        self.call('sweep', config=str(self.config), out=str(out), store=True)
        run = SimulationRun.objects.get()
        self.assertEqual(run.command, 'sweep')
        self.assertEqual(run.seed, '11')
        self.assertEqual(run.record_count, 18)
        self.assertEqual(RateRecord.objects.filter(run=run).count(), 18)
        self.assertEqual(run.config['run']['trials'], 3)
        stored = sorted(run.results(), key=lambda r: r.key)
        written = read_records(out)
        self.assertEqual([r.key for r in stored], [r.key for r in written])
        for db_record, csv_record in zip(stored, written):
            self.assertAlmostEqual(db_record.rate_bits, csv_record.rate_bits, delta=1e-9 * csv_record.rate_bits)

    def test_without_store(self):
        """Test nothing is stored by default."""
        self.call('sweep', config=str(self.config), out=str(self.tmp / 'sweep.csv'))
        self.assertFalse(SimulationRun.objects.exists())

    def test_optimize_store(self):
        """Test the optimizer stores its discretized rate."""
        self.call('optimize', out=str(self.tmp / 'trace.csv'), M=8, iterations=2, store=True)
        record = SimulationRun.objects.get(command='optimize').records.get()
        self.assertEqual(record.scheme, 'variational')
        self.assertEqual(record.M, 8)
