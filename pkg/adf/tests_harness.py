from pathlib import Path
import tempfile
from unittest import skipUnless

import numpy as np
from django.test import SimpleTestCase

from adf.conf import simulator_setting
from adf.exceptions import ConfigError, InvalidArgumentError
from adf.utils.channel import Variant
from adf.utils.experiment import ResultRecord
from adf.utils.harness import (
    RECORD_HEADER, aggregate_cdf, cdf_quantile, complexity_profile, emit_cdf, emit_records, parse_config,
    read_records, run_scenario, scatterer_arc, trial_channel,
)

BASE = """
[scenario]
f_c = 10e9
N = 4
rho_db = 10.0
"""

SMALL_RUN = BASE + """
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
seed = 99
"""

RICIAN = BASE + """
[channel]
variant = "rician"
k_db = 10.0

[channel.scatterers]
count = 20
radius = 3.0
angle_min = "pi/6"
angle_max = "5*pi/6"

[[schemes]]
name = "ULA"

[[schemes]]
name = "MC"

[sweep]
M = [16]
z0 = [3.0]

[run]
trials = 4
seed = 5
"""


def config_errors(text):
    try:
        parse_config(text)
    except ConfigError as exc:
        return exc.errors
    return []


def has_error(errors, prefix):
    return any(error.startswith(prefix) for error in errors)


class ConfigParsingTest(SimpleTestCase):
    def test_minimal_document(self):
        """Test wavelength, spacings and SNR are derived from the scenario."""
        config = parse_config(BASE)
        self.assertAlmostEqual(config.scenario.wavelength, 0.0299792458, places=15)
        self.assertAlmostEqual(config.scenario.d_r, 0.0149896229, places=12)
        self.assertAlmostEqual(config.scenario.d_t, 0.0149896229, places=12)
        self.assertAlmostEqual(config.scenario.rho, 10.0, places=12)
        self.assertEqual(config.channel.variant, Variant.LOS)
        self.assertEqual(config.sweep.M, (64,))

    def test_angles_and_spacings_as_expressions(self):
        """Test "k*pi/n" angles and "k*lambda/n" spacings."""
        config = parse_config("""
[scenario]
wavelength = 0.03
N = 2
d_r = "lambda"
d_t = 0.01
theta_t = "pi/3"
phi_r = "-pi/2"
""")
        self.assertAlmostEqual(config.scenario.carrier_frequency, 299792458.0 / 0.03, places=3)
        self.assertAlmostEqual(config.scenario.d_r, 0.03, places=15)
        self.assertAlmostEqual(config.scenario.d_t, 0.01, places=15)
        self.assertAlmostEqual(config.scenario.theta_t, np.pi / 3, places=15)
        self.assertAlmostEqual(config.scenario.phi_r, -np.pi / 2, places=15)

    def test_all_errors_are_reported(self):
        """Test unknown keys and missing fields come back together."""
        errors = config_errors("""
[scenario]
f_c = 10e9
bogus = 1

[run]
seed = -1
""")
        self.assertTrue(has_error(errors, 'scenario.bogus'))
        self.assertTrue(has_error(errors, 'scenario.N'))
        self.assertTrue(has_error(errors, 'run.seed'))

    def test_wavelength_must_match_the_carrier(self):
        """Test f_c and wavelength must agree to 1e-9 relative."""
        errors = config_errors("[scenario]\nf_c = 10e9\nwavelength = 0.031\nN = 4\n")
        self.assertTrue(has_error(errors, 'scenario.wavelength'))
        self.assertEqual(config_errors("[scenario]\nf_c = 10e9\nwavelength = 0.0299792458\nN = 4\n"), [])

    def test_channel_requirements(self):
        """Test Rician needs k_db and scatterers; NLoS needs scatterers."""
        errors = config_errors(BASE + '[channel]\nvariant = "rician"\n')
        self.assertTrue(has_error(errors, 'channel.k_db'))
        self.assertTrue(has_error(errors, 'channel.scatterers'))
        self.assertTrue(has_error(config_errors(BASE + '[channel]\nvariant = "nlos"\n'), 'channel.scatterers'))

    def test_closed_form_needs_an_order(self):
        """Test closed_form without α here or in the sweep is rejected."""
        errors = config_errors(BASE + '[[schemes]]\nname = "closed_form"\n')
        self.assertTrue(has_error(errors, 'schemes[0].alpha'))

    def test_angle_ranges(self):
        """Test polar angles outside [0, π] are rejected."""
        self.assertTrue(has_error(config_errors(BASE.replace('N = 4', 'N = 4\ntheta_t = 4.0')), 'scenario.theta_t'))

    def test_toml_syntax(self):
        """Test malformed TOML is a configuration error."""
        self.assertTrue(has_error(config_errors('[scenario\nN = 4'), 'TOML syntax'))

    def test_rician_decibels(self):
        """Test K in dB becomes a linear factor."""
        self.assertAlmostEqual(parse_config(RICIAN).channel.k_linear, 10.0, places=12)


class ScattererTest(SimpleTestCase):
    def test_arc_geometry(self):
        """Test scatterers lie on the arc in the x–z plane."""
        points = np.array([s.position for s in scatterer_arc(20, 3.0, (np.pi / 6, 5 * np.pi / 6), seed=1)])
        np.testing.assert_allclose(np.hypot(points[:, 0], points[:, 2]), 3.0)
        np.testing.assert_array_equal(points[:, 1], 0.0)
        angles = np.arctan2(points[:, 2], points[:, 0])
        self.assertTrue(np.all((angles >= np.pi / 6) & (angles <= 5 * np.pi / 6)))

    def test_trials_redraw_the_arc(self):
        """Test each trial gets its own fixed draw."""
        first = scatterer_arc(5, 3.0, (0.5, 2.5), seed=1, trial=0)
        self.assertEqual(first, scatterer_arc(5, 3.0, (0.5, 2.5), seed=1, trial=0))
        self.assertNotEqual(first, scatterer_arc(5, 3.0, (0.5, 2.5), seed=1, trial=1))

    def test_trial_channel(self):
        """Test LoS configs ignore trials and Rician configs carry the arc."""
        self.assertEqual(trial_channel(parse_config(BASE)).variant, Variant.LOS)
        scenario = trial_channel(parse_config(RICIAN), trial=2)
        self.assertEqual(scenario.variant, Variant.RICIAN)
        self.assertEqual(len(scenario.scatterers), 20)


class RunScenarioTest(SimpleTestCase):
    def test_record_count_and_order(self):
        """Test one record per scheme, sweep point and trial, sorted by key."""
        records = run_scenario(parse_config(SMALL_RUN))
        self.assertEqual(len(records), 3 * 2 * 3)
        self.assertEqual(records, sorted(records, key=lambda r: r.key))
        self.assertTrue(all(r.wall_time_ms == 0.0 and r.seed == 99 for r in records))

    def test_deterministic_scheme_is_trial_invariant(self):
        """Test the ULA rate does not change across trials of a LoS run."""
        records = [r for r in run_scenario(parse_config(SMALL_RUN)) if r.scheme == 'ULA' and r.M == 8]
        self.assertEqual(len({r.rate_bits for r in records}), 1)

    def test_output_is_byte_identical(self):
        """Test repeated runs and different thread counts write the same bytes."""
        config = parse_config(RICIAN)
        with tempfile.TemporaryDirectory() as tmp:
            first = emit_records(run_scenario(config), Path(tmp) / 'first.csv')
            second = emit_records(run_scenario(config), Path(tmp) / 'second.csv')
            threaded = emit_records(run_scenario(config, threads=3), Path(tmp) / 'threaded.csv')
            self.assertEqual(first.read_bytes(), second.read_bytes())
            self.assertEqual(first.read_bytes(), threaded.read_bytes())
            self.assertTrue(first.read_bytes().startswith((','.join(RECORD_HEADER) + '\n').encode('utf-8')))
            self.assertNotIn(b'\r', first.read_bytes())

    def test_records_read_back(self):
        """Test the record table parses back into the same records."""
        records = run_scenario(parse_config(SMALL_RUN))
        with tempfile.TemporaryDirectory() as tmp:
            path = emit_records(records, Path(tmp) / 'records.csv')
            loaded = read_records(path)
        self.assertEqual([r.key[:2] for r in loaded], [r.key[:2] for r in records])
        for original, parsed in zip(records, loaded):
            self.assertAlmostEqual(parsed.rate_bits, original.rate_bits, delta=1e-9 * original.rate_bits)

    def test_alpha_sweep_expands_closed_form(self):
        """Test sweep α values fan out a closed_form scheme without its own α."""
        config = parse_config(BASE + """
[[schemes]]
name = "closed_form"

[sweep]
M = [16]
z0 = [3.0]
alpha = [-0.3, -0.1]
""")
        self.assertEqual(sorted(r.alpha for r in run_scenario(config)), [-0.3, -0.1])

    def test_duplicate_labels(self):
        """Test two schemes with the same key are rejected."""
        config = parse_config(BASE + '[[schemes]]\nname = "ULA"\n\n[[schemes]]\nname = "ULA"\n\n'
                                     '[sweep]\nM = [8]\nz0 = [3.0]\n')
        with self.assertRaises(InvalidArgumentError):
            run_scenario(config)

    def test_edge_orders_beat_the_uniform_array(self):
        """Test rate(α = −0.375) ≥ rate(α = −0.25) ≥ rate(ULA) − 1e−3 over M and z0."""
        config = parse_config(BASE + """
[[schemes]]
name = "closed_form"

[[schemes]]
name = "ULA"

[sweep]
M = [16, 32, 64, 128]
z0 = [3.0, 5.0]
alpha = [-0.375, -0.25]
""")
        rates = {(r.scheme, r.alpha, r.M, r.z0): r.rate_bits for r in run_scenario(config)}
        for M in (16, 32, 64, 128):
            for z0 in (3.0, 5.0):
                strong = rates[('closed_form', -0.375, M, z0)]
                mild = rates[('closed_form', -0.25, M, z0)]
                self.assertGreaterEqual(strong, mild)
                self.assertGreaterEqual(mild, rates[('ULA', None, M, z0)] - 1e-3)


class CdfTest(SimpleTestCase):
    def records(self):
        return [
            ResultRecord('A', 8, 3.0, None, trial, rate, 0.0, 0)
            for trial, rate in enumerate((3.0, 1.0, 2.0))
        ] + [ResultRecord('B', 8, 3.0, None, 0, 5.0, 0.0, 0)]

    def test_empirical_cdf(self):
        """Test sorted rates with fractions i/n per group."""
        table = aggregate_cdf(self.records())
        self.assertEqual(table['A'], [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)])
        self.assertEqual(table['B'], [(5.0, 1.0)])
        self.assertEqual(cdf_quantile(table['A'], 0.5), 2.0)

    def test_callable_key(self):
        """Test grouping by a derived key."""
        table = aggregate_cdf(self.records(), key=lambda r: (r.scheme, r.M))
        self.assertEqual(set(table), {('A', 8), ('B', 8)})

    def test_cdf_table_format(self):
        """Test the CDF table header and number format."""
        with tempfile.TemporaryDirectory() as tmp:
            path = emit_cdf(aggregate_cdf(self.records()), Path(tmp) / 'cdf.csv')
            lines = path.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[0], 'group,rate_bits,fraction')
        self.assertEqual(lines[1], 'A,1,0.333333333333')

    def test_empty(self):
        """Test a CDF needs records."""
        with self.assertRaises(InvalidArgumentError):
            aggregate_cdf([])


@skipUnless(simulator_setting('RUN_TIMING_TESTS'), 'set ADF_RUN_TIMING_TESTS=true for long-running trend checks')
class LongRunningTrendTest(SimpleTestCase):
    def test_complexity_exponents(self):
        """Test the gradient cost is near-linear in M while greedy selection grows faster."""
        profile = complexity_profile(sizes=(64, 128, 256, 512))
        self.assertTrue(0.8 <= profile.gradient_exponent <= 1.3)
        self.assertGreater(profile.greedy_exponent, 1.0)

    def test_mixed_channel_cdf(self):
        """Test the variational median against the α = −0.25 closed form over 200 Rician trials."""
        config = parse_config(BASE + """
[channel]
variant = "rician"
k_db = 10.0

[channel.scatterers]
count = 20
radius = 3.0
angle_min = "pi/6"
angle_max = "5*pi/6"

[[schemes]]
name = "closed_form"
alpha = -0.25

[[schemes]]
name = "variational"

[sweep]
M = [64]
z0 = [3.0]

[run]
trials = 200
seed = 2024
threads = 4
""")
        table = aggregate_cdf(run_scenario(config))
        self.assertGreaterEqual(cdf_quantile(table['variational'], 0.5),
                                cdf_quantile(table['closed_form'], 0.5) - 0.05)
