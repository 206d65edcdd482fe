import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import InvalidArgumentError, OutOfRegimeError, SingularGeometryError
from adf.utils.channel import (
    ChannelMatrix, ChannelScenario, GramMatrix, Normalization, Scatterer, channel_matrix, channel_rows,
    gram_continuous, gram_discrete, gram_toeplitz, los_response, nlos_response, spectral_gap,
)
from adf.utils.closedform import nearfield_factors
from adf.utils.geometry import ReceiveArray, SampledFunction, TransmitArray, uniform_apf

WAVELENGTH = 0.03
KAPPA = 2.0 * np.pi / WAVELENGTH


class ResponseTest(SimpleTestCase):
    def test_los_response_is_a_spherical_wave(self):
        """Test h = e^{jκr}/r."""
        value = los_response((0.0, 0.0, 0.0), (0.0, 0.0, 3.0), KAPPA)
        self.assertAlmostEqual(abs(value), 1.0 / 3.0, places=14)
        self.assertAlmostEqual(np.angle(value), np.angle(np.exp(1j * KAPPA * 3.0)), places=9)

    def test_coincident_points_are_singular(self):
        """Test a zero-length path raises."""
        with self.assertRaises(SingularGeometryError):
            los_response((0.1, 0.0, 0.0), (0.1, 0.0, 0.0), KAPPA)

    def test_nlos_single_bounce(self):
        """Test one scatterer gives h(r_S, r_R)·conj(h(r_T, r_S))."""
        r_t, r_r, r_s = (0.2, 0.0, 0.0), (0.0, 0.0, 3.0), (1.0, 0.0, 2.0)
        expected = los_response(r_s, r_r, KAPPA) * np.conj(los_response(r_t, r_s, KAPPA))
        self.assertAlmostEqual(abs(nlos_response(r_t, r_r, [Scatterer(r_s)], KAPPA) - expected), 0.0, places=14)

    def test_nlos_without_scatterers_is_zero(self):
        """Test the empty scatterer set contributes nothing."""
        self.assertEqual(nlos_response((0.0, 0.0, 0.0), (0.0, 0.0, 3.0), [], KAPPA), 0j)


class ChannelMatrixTest(SimpleTestCase):
    def setUp(self):
        self.tx = TransmitArray(M=16, d=WAVELENGTH / 2)
        self.rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        self.placement = uniform_apf(16)
        self.scatterers = (Scatterer((1.5, 0.0, 2.6)), Scatterer((-2.0, 0.0, 2.2)))

    def test_shape_and_entries(self):
        """Test H is N×M with LoS entries of modulus ≈ 1/z0."""
        H = channel_matrix(self.placement, self.tx, self.rx, ChannelScenario.los(WAVELENGTH))
        self.assertEqual(H.shape, (4, 16))
        self.assertTrue(np.allclose(np.abs(H.entries), 1.0 / 3.0, rtol=0.01))

    def test_rician_mixes_los_and_nlos(self):
        """Test H = √(K/(1+K))·H_LoS + √(1/(1+K))·H_NLoS."""
        k = 10.0
        los = channel_matrix(self.placement, self.tx, self.rx, ChannelScenario.los(WAVELENGTH))
        nlos = channel_matrix(self.placement, self.tx, self.rx, ChannelScenario.nlos(WAVELENGTH, self.scatterers))
        mixed = channel_matrix(self.placement, self.tx, self.rx,
                               ChannelScenario.rician(WAVELENGTH, k, self.scatterers))
        expected = np.sqrt(k / (1 + k)) * los.entries + np.sqrt(1 / (1 + k)) * nlos.entries
        np.testing.assert_allclose(mixed.entries, expected, rtol=1e-12, atol=1e-15)

    def test_centroid_normalization_scales_by_z0(self):
        """Test the centroid normalization multiplies responses by z0."""
        raw = channel_matrix(self.placement, self.tx, self.rx, ChannelScenario.los(WAVELENGTH))
        scaled = channel_matrix(self.placement, self.tx, self.rx,
                                ChannelScenario.los(WAVELENGTH, Normalization.CENTROID))
        np.testing.assert_allclose(scaled.entries, 3.0 * raw.entries, rtol=1e-13)

    def test_non_los_needs_scatterers(self):
        """Test NLoS and Rician scenarios require at least one scatterer."""
        with self.assertRaises(InvalidArgumentError):
            ChannelScenario.nlos(WAVELENGTH, ())
        with self.assertRaises(InvalidArgumentError):
            ChannelScenario.rician(WAVELENGTH, -1.0, self.scatterers)

    def test_channel_rows_are_one_based(self):
        """Test the (n, m, re, im) export."""
        rows = list(channel_rows(ChannelMatrix([[1 + 2j, 3.0], [0.0, -1j]])))
        self.assertEqual(rows[0], (1, 1, 1.0, 2.0))
        self.assertEqual(rows[-1], (2, 2, 0.0, -1.0))


class GramMatrixTest(SimpleTestCase):
    def setUp(self):
        self.tx = TransmitArray(M=64, d=WAVELENGTH / 2)
        self.rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        self.scenario = ChannelScenario.los(WAVELENGTH)

    def test_discrete_gram_is_hermitian_psd(self):
        """Test K_f = (1/M)HHᴴ is Hermitian with trace ‖H‖²/M."""
        H = channel_matrix(uniform_apf(64), self.tx, self.rx, self.scenario)
        K = gram_discrete(H)
        np.testing.assert_allclose(K.entries, K.entries.conj().T)
        self.assertGreaterEqual(K.eigenvalues().min(), -1e-12)
        self.assertAlmostEqual(np.trace(K.entries).real, np.sum(np.abs(H.entries) ** 2) / 64, places=12)

    def test_rejects_non_hermitian(self):
        """Test the Hermitian check."""
        with self.assertRaises(InvalidArgumentError):
            GramMatrix([[1.0, 1.0], [0.0, 1.0]])

    def test_continuous_gram_tracks_the_ula(self):
        """Test a flat density's Gram matches the ULA's discrete Gram."""
        w = SampledFunction.constant(63 / 2.0, 512)
        continuous = gram_continuous(w, self.tx, self.rx, self.scenario)
        discrete = gram_discrete(channel_matrix(uniform_apf(64), self.tx, self.rx, self.scenario))
        self.assertLess(spectral_gap(continuous, discrete), 0.05)

    def test_toeplitz_surrogate_matches_continuous_gram(self):
        """Test the Fresnel Toeplitz Gram has the spectrum of the exact continuous Gram."""
        w = SampledFunction.constant(63 / 2.0, 512)
        factors = nearfield_factors(self.tx, self.rx, WAVELENGTH, 10.0, convention='fresnel')
        surrogate = gram_toeplitz(w, factors, 4, M=64)
        exact = gram_continuous(w, self.tx, self.rx, self.scenario)
        self.assertLess(spectral_gap(surrogate, exact), 0.05)

    def test_toeplitz_spectrum_far_from_the_aperture(self):
        """Test the Fresnel surrogate is within 2% of the exact spectrum at ten apertures."""
        tx = TransmitArray(M=16, d=WAVELENGTH / 2)
        w = SampledFunction.constant(15 / 2.0, 512)
        z0 = 10.0 * tx.aperture
        # β uses the Fresnel half-factor κ·A_T·d_R / (2·z0); the printed factor doubles it
        for N, relative_to in ((4, 'largest'), (2, 'each')):
            with self.subTest(N=N, relative_to=relative_to):
                rx = ReceiveArray(N=N, d=WAVELENGTH / 2, z0=z0)
                factors = nearfield_factors(tx, rx, WAVELENGTH, 10.0, convention='fresnel')
                self.assertAlmostEqual(factors.beta, KAPPA * tx.aperture * rx.d / (2.0 * z0), places=12)
                surrogate = gram_toeplitz(w, factors, N, M=16)
                exact = gram_continuous(w, tx, rx, self.scenario)
                self.assertLess(spectral_gap(surrogate, exact, relative_to=relative_to), 0.02)

    def test_printed_factor_misses_the_spectrum(self):
        """Test the doubled β of the printed convention does not reproduce the exact spectrum."""
        tx = TransmitArray(M=16, d=WAVELENGTH / 2)
        rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=10.0 * tx.aperture)
        w = SampledFunction.constant(15 / 2.0, 512)
        exact = gram_continuous(w, tx, rx, self.scenario)
        printed = gram_toeplitz(w, nearfield_factors(tx, rx, WAVELENGTH, 10.0, convention='printed'), 4, M=16)
        fresnel = gram_toeplitz(w, nearfield_factors(tx, rx, WAVELENGTH, 10.0, convention='fresnel'), 4, M=16)
        self.assertGreater(spectral_gap(printed, exact), 0.02)
        self.assertLess(spectral_gap(fresnel, exact), spectral_gap(printed, exact))

    def test_spectral_gap_modes(self):
        """Test the per-eigenvalue gap sees errors the largest-eigenvalue gap hides."""
        first = GramMatrix(np.diag([1.0, 0.01]))
        second = GramMatrix(np.diag([1.0, 0.011]))
        self.assertAlmostEqual(spectral_gap(first, second), 0.001, places=12)
        self.assertAlmostEqual(spectral_gap(first, second, relative_to='each'), 1.0 / 11.0, places=12)
        with self.assertRaises(InvalidArgumentError):
            spectral_gap(first, second, relative_to='smallest')

    def test_toeplitz_structure(self):
        """Test the surrogate is constant along diagonals."""
        w = SampledFunction(np.linspace(5.0, 30.0, 256), -0.2)
        factors = nearfield_factors(self.tx, self.rx, WAVELENGTH, 10.0)
        K = gram_toeplitz(w, factors, 4).entries
        for offset in range(1, 4):
            diagonal = np.diagonal(K, offset)
            np.testing.assert_allclose(diagonal, diagonal[0], rtol=1e-12, atol=1e-15)

    def test_toeplitz_needs_the_near_field_regime(self):
        """Test a receiver closer than the aperture is outside the regime."""
        close = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=0.5)
        with self.assertRaises(OutOfRegimeError):
            nearfield_factors(self.tx, close, WAVELENGTH, 10.0)
