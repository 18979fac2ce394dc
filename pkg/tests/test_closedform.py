"""Tests for the analytic output states and spectra."""

import math

import numpy as np
import pytest

from qumem.core.channel import apply_two_use
from qumem.core.closedform import (
    entangled_spectrum, input_spectrum, mutual_information, output_matrix, product_spectrum,
    single_use_information, structured_output,
)
from qumem.core.errata import probe_state
from qumem.core.linalg import hermitian_spectrum
from qumem.core.states import ansatz_spec, build_state, density
from qumem.exceptions import DimensionMismatchError, InvalidParameterError
from qumem.models.channel import ChannelSpec, Family, InputKind, SchmidtSpec
from qumem.models.results import Spectrum

SPECTRUM_TOL = 1e-10

# -sum(l log2 l) of the memoryless QCD d = 2, eta = 0.4 product output
NOISY_ENTROPY = -sum(x * math.log2(x) for x in (0.09, 0.21, 0.21, 0.49))


def oracle_spectrum(spec: ChannelSpec, s: SchmidtSpec) -> np.ndarray:
    out = apply_two_use(spec, density(build_state(s)))
    return np.array(hermitian_spectrum(out, method="lapack").values)


def input_state(kind: InputKind, d: int) -> SchmidtSpec:
    if kind == InputKind.PRODUCT:
        return SchmidtSpec.product(d)
    return SchmidtSpec.maximally_entangled(d)


class TestSpectra:
    """Test closed-form spectra."""

    def test_qcd_product_memoryless(self):
        """Test the QCD d = 2 memoryless product spectrum."""
        spec = ChannelSpec(family=Family.QCD, d=2, eta=0.4)
        assert product_spectrum(spec).values == pytest.approx([0.09, 0.21, 0.21, 0.49], abs=1e-15)

    def test_noiseless_product(self):
        """Test that a noiseless channel keeps |00> pure."""
        for mu in (0.0, 0.4, 1.0):
            spec = ChannelSpec(family=Family.QD, d=2, eta=1.0, mu=mu)
            assert product_spectrum(spec).values == pytest.approx([0.0, 0.0, 0.0, 1.0], abs=1e-15)

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    @pytest.mark.parametrize("kind", [InputKind.PRODUCT, InputKind.ENTANGLED])
    def test_matches_oracle(self, family, d, kind):
        """Test sorted closed-form spectra against the brute-force channel."""
        for eta in (0.2, 0.8):
            for mu, nu in ((0.0, 0.0), (0.3, 1.0), (0.7, 0.5), (1.0, 0.0)):
                spec = ChannelSpec(family=family, d=d, eta=eta, mu=mu, nu=nu)
                closed = np.array(input_spectrum(spec, kind).values)
                np.testing.assert_allclose(
                    closed, oracle_spectrum(spec, input_state(kind, d)), atol=SPECTRUM_TOL
                )

    @pytest.mark.parametrize("family,eta", [(Family.QD, -0.05), (Family.QCD, -0.3)])
    def test_matches_oracle_negative_eta(self, family, eta):
        """Test the closed forms below eta = 0."""
        spec = ChannelSpec(family=family, d=3, eta=eta, mu=0.6, nu=0.5)
        for kind in (InputKind.PRODUCT, InputKind.ENTANGLED):
            np.testing.assert_allclose(
                input_spectrum(spec, kind).values,
                oracle_spectrum(spec, input_state(kind, 3)),
                atol=SPECTRUM_TOL,
            )

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    def test_spectra_are_densities(self, family):
        """Test d^2 values summing to one."""
        for d in (2, 3, 6):
            spec = ChannelSpec(family=family, d=d, eta=0.5, mu=0.3, nu=0.5)
            for s in (product_spectrum(spec), entangled_spectrum(spec)):
                assert s.dimension == d * d
                assert math.fsum(s.values) == pytest.approx(1.0, abs=1e-12)
                s.check_density()

    def test_product_ignores_phase_type(self):
        """Test that product spectra are identical across nu."""
        for family in (Family.QD, Family.QCD):
            spec = ChannelSpec(family=family, d=4, eta=0.8, mu=0.7)
            reference = product_spectrum(spec).values
            for nu in (0.5, 1.0):
                assert product_spectrum(spec.with_nu(nu)).values == reference

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    def test_two_dimensions_ignore_phase_type(self, family):
        """Test that d = 2 information does not depend on nu."""
        for kind in (InputKind.PRODUCT, InputKind.ENTANGLED):
            for mu in (0.0, 0.5, 1.0):
                spec = ChannelSpec(family=family, d=2, eta=0.4, mu=mu)
                a = mutual_information(2, input_spectrum(spec.with_nu(0.0), kind))
                b = mutual_information(2, input_spectrum(spec.with_nu(1.0), kind))
                assert abs(a - b) <= 1e-12

    @pytest.mark.parametrize("d", range(2, 11))
    def test_perfect_transmission(self, d):
        """Test that full memory with anti-correlated phases keeps the entangled input pure."""
        for eta in (0.2, 0.8):
            spec = ChannelSpec(family=Family.QD, d=d, eta=eta, mu=1.0, nu=1.0)
            info = mutual_information(d, entangled_spectrum(spec))
            assert info == pytest.approx(2 * math.log2(d), abs=1e-12)

    def test_no_closed_form_for_ansatz(self):
        """Test that only product and entangled inputs have closed spectra."""
        spec = ChannelSpec(family=Family.QD, d=2, eta=0.5)
        with pytest.raises(InvalidParameterError):
            input_spectrum(spec, InputKind.ANSATZ)


class TestStructuredOutput:
    """Test the assembled output matrix."""

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_oracle(self, family, d):
        """Test entrywise agreement on a state with unequal amplitudes and phases."""
        s = probe_state(d)
        for mu, nu in ((0.0, 0.0), (0.5, 1.0), (0.8, 0.3)):
            spec = ChannelSpec(family=family, d=d, eta=0.4, mu=mu, nu=nu)
            truth = apply_two_use(spec, density(build_state(s)))
            assert np.max(np.abs(structured_output(spec, s).matrix - truth)) <= 1e-10

    def test_entangled_qd_example(self):
        """Test QD d = 2 with full phase anti-correlation."""
        spec = ChannelSpec(family=Family.QD, d=2, eta=0.4, mu=0.5, nu=1.0)
        s = SchmidtSpec.maximally_entangled(2)
        truth = apply_two_use(spec, density(build_state(s)))
        np.testing.assert_allclose(structured_output(spec, s).matrix, truth, atol=1e-10)

    def test_memoryless_product_is_diagonal(self):
        """Test that only factor A survives at mu = 0."""
        spec = ChannelSpec(family=Family.QD, d=3, eta=0.6)
        matrix = structured_output(spec, SchmidtSpec.product(3)).matrix
        np.testing.assert_allclose(matrix, np.diag(np.diag(matrix)), atol=0)

    def test_ansatz_matches_oracle(self):
        """Test the interpolating family at an interior angle."""
        s = ansatz_spec(3, 0.4)
        spec = ChannelSpec(family=Family.QCD, d=3, eta=0.4, mu=0.6, nu=1.0)
        truth = apply_two_use(spec, density(build_state(s)))
        np.testing.assert_allclose(structured_output(spec, s).matrix, truth, atol=1e-10)

    def test_rejects_offset_and_mismatch(self):
        """Test that offset states and foreign dimensions are refused."""
        spec = ChannelSpec(family=Family.QD, d=2, eta=0.5)
        with pytest.raises(InvalidParameterError, match="offset"):
            output_matrix(spec, SchmidtSpec(d=2, amplitudes=(1.0, 0.0), offset=1))
        with pytest.raises(DimensionMismatchError):
            output_matrix(spec, SchmidtSpec.product(3))


class TestMutualInformation:
    """Test mutual_information and the memoryless baseline."""

    def test_bounds(self):
        """Test pure and maximally mixed outputs."""
        pure = Spectrum(values=(0.0,) * 8 + (1.0,), dimension=9)
        assert mutual_information(3, pure) == pytest.approx(2 * math.log2(3))
        assert mutual_information(3, Spectrum(values=(1 / 9,) * 9, dimension=9)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_qcd_product_value(self):
        """Test the QCD d = 2 memoryless product information."""
        spec = ChannelSpec(family=Family.QCD, d=2, eta=0.4)
        info = mutual_information(2, product_spectrum(spec))
        assert info == pytest.approx(2.0 - NOISY_ENTROPY, abs=1e-12)

    def test_dimension_check(self):
        """Test that the spectrum must have d^2 values."""
        with pytest.raises(DimensionMismatchError):
            mutual_information(3, Spectrum(values=(0.25,) * 4, dimension=4))

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    def test_memoryless_product_is_additive(self, family):
        """Test that at mu = 0 a product input carries twice the single-use value."""
        for d in (2, 3, 5):
            spec = ChannelSpec(family=family, d=d, eta=0.6)
            two_use = mutual_information(d, product_spectrum(spec))
            assert two_use == pytest.approx(2 * single_use_information(family, d, 0.6), abs=1e-12)
