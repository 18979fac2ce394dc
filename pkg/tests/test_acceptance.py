"""End-to-end acceptance checks against the brute-force oracle."""

import math
from itertools import product

import numpy as np
import pytest

from qumem.analysis.crossover import crossover_mu, delta_curve
from qumem.analysis.curves import alpha_sweep, curve_crossings, mi_vs_mu
from qumem.core.channel import apply_two_use, oracle_output, phase_average
from qumem.core.closedform import input_spectrum, mutual_information
from qumem.core.errata import errata_ledger
from qumem.core.linalg import hermitian_spectrum
from qumem.core.states import max_entangled_alpha
from qumem.core.weyl import conjugate_pair, weyl_indices
from qumem.models.channel import (
    ChannelSpec, Family, InputKind, InputSelector, SchmidtSpec, eta_range,
)
from qumem.models.results import CrossoverStatus, Method, Numerics

pytestmark = pytest.mark.slow

SPECTRUM_TOL = 1e-10
MUS = (0.0, 0.3, 0.7, 1.0)
NUS = (0.0, 0.5, 1.0)
KINDS = (InputKind.PRODUCT, InputKind.ENTANGLED)


def etas(family: Family, d: int):
    return (0.2, 0.8, eta_range(family, d)[0] / 2)


def schmidt(kind: InputKind, d: int) -> SchmidtSpec:
    if kind == InputKind.PRODUCT:
        return SchmidtSpec.product(d)
    return SchmidtSpec.maximally_entangled(d)


def oracle(spec: ChannelSpec, kind: InputKind) -> np.ndarray:
    return oracle_output(spec, schmidt(kind, spec.d), Numerics(workers=1))


def grid_points(d: int):
    for family in (Family.QD, Family.QCD):
        for eta, mu, nu in product(etas(family, d), MUS, NUS):
            yield ChannelSpec(family=family, d=d, eta=eta, mu=mu, nu=nu)


class TestOracleEquivalence:
    """Closed-form spectra against the oracle and channel sanity on the same grid."""

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
    def test_spectra_and_sanity(self, d):
        """Test sorted spectra to 1e-10, unit trace and positivity."""
        for spec in grid_points(d):
            for kind in KINDS:
                out = oracle(spec, kind)
                truth = hermitian_spectrum(out, method="lapack").values
                closed = input_spectrum(spec, kind).values

                np.testing.assert_allclose(closed, truth, atol=SPECTRUM_TOL, err_msg=str(spec))
                assert abs(np.trace(out).real - 1.0) <= 1e-10
                assert truth[0] >= -1e-10

    @pytest.mark.parametrize("d", [2, 3])
    def test_covariance(self, d, make_density):
        """Test displacement covariance on random mixed inputs."""
        for family in (Family.QD, Family.QCD):
            spec = ChannelSpec(family=family, d=d, eta=0.2, mu=0.7, nu=0.5)
            for _ in range(10):
                rho = make_density(d)
                out = apply_two_use(spec, rho)
                for a, b in product(list(weyl_indices(d)), repeat=2):
                    np.testing.assert_allclose(
                        apply_two_use(spec, conjugate_pair(rho, d, a, b)),
                        conjugate_pair(out, d, a, b),
                        atol=1e-10,
                    )


class TestPhaseStructure:
    """ν degeneracy, ν independence and perfect transmission."""

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    def test_two_dimensions(self, family):
        """Test |I(nu = 0) - I(nu = 1)| <= 1e-12 at d = 2."""
        for kind in KINDS:
            for mu in (0.0, 0.5, 1.0):
                spec = ChannelSpec(family=family, d=2, eta=0.4, mu=mu)
                a = mutual_information(2, input_spectrum(spec.with_nu(0.0), kind))
                b = mutual_information(2, input_spectrum(spec.with_nu(1.0), kind))
                assert abs(a - b) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
    def test_product_spectra_bitwise(self, d):
        """Test that product spectra do not move with nu."""
        for family in (Family.QD, Family.QCD):
            for eta, mu in product(etas(family, d), MUS):
                spec = ChannelSpec(family=family, d=d, eta=eta, mu=mu)
                reference = input_spectrum(spec, InputKind.PRODUCT).values
                for nu in NUS:
                    assert input_spectrum(spec.with_nu(nu), InputKind.PRODUCT).values == reference

    @pytest.mark.parametrize("d", range(2, 11))
    def test_perfect_transmission(self, d):
        """Test I = 2 log2 d for QD at full memory with anti-correlated phases."""
        for eta in (0.2, 0.8):
            spec = ChannelSpec(family=Family.QD, d=d, eta=eta, mu=1.0, nu=1.0)
            info = mutual_information(d, input_spectrum(spec, InputKind.ENTANGLED))
            assert abs(info - 2 * math.log2(d)) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_phase_averaging(self, d, make_density):
        """Test E(F(rho)) = E(rho) for QCD without phase anti-correlation and F idempotent."""
        spec = ChannelSpec(family=Family.QCD, d=d, eta=0.4, mu=0.6, nu=0.0)
        for _ in range(10):
            rho = make_density(d)
            averaged = phase_average(rho, d)
            np.testing.assert_allclose(
                apply_two_use(spec, averaged), apply_two_use(spec, rho), atol=1e-10
            )
            np.testing.assert_allclose(phase_average(averaged, d), averaged, atol=1e-12)


class TestCrossoverFigures:
    """Crossover behaviour behind the figures."""

    def test_qcd_two_dimensions(self):
        """Test a single sign change of Delta I bisected to width 1e-8."""
        spec = ChannelSpec(family=Family.QCD, d=2, eta=0.4)
        _, deltas = delta_curve(spec, 1001)
        assert deltas[0] < 0 < deltas[-1]

        report = crossover_mu(spec, tol=1e-8)
        assert report.status == CrossoverStatus.CROSSING
        assert report.delta_sign_changes == 1
        assert report.width <= 1e-8

    def test_even_dimension_trends(self):
        """Test that mu_c falls with d for nu = 1 and rises for nu = 0."""
        def mu_c(d, nu):
            return crossover_mu(ChannelSpec(family=Family.QD, d=d, eta=0.8, nu=nu)).mu_c

        assert mu_c(4, 1.0) < mu_c(2, 1.0)
        assert mu_c(4, 0.0) > mu_c(2, 0.0)

    @pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
    def test_odd_dimensions_never_cross(self, d):
        """Test Delta I <= 1e-12 on the whole grid and status none."""
        spec = ChannelSpec(family=Family.QD, d=d, eta=0.8, nu=0.0)
        _, deltas = delta_curve(spec, 1001)
        assert float(np.max(deltas)) <= 1e-12
        assert crossover_mu(spec).status == CrossoverStatus.NONE

    @pytest.mark.parametrize("nu", [0.0, 1.0])
    def test_ansatz_crossing_shared_in_two_dimensions(self, nu):
        """Test that at d = 2 every pair of ansatz curves crosses at the product/entangled mu_c."""
        alphas = [0.0, math.pi / 8, math.pi / 4, max_entangled_alpha(2)]
        curves = alpha_sweep(Family.QCD, 2, 0.4, nu, alphas, grid_size=101)
        mu_c = crossover_mu(ChannelSpec(family=Family.QCD, d=2, eta=0.4, nu=nu)).mu_c

        crossings = []
        for left, right in zip(curves, curves[1:]):
            found = curve_crossings(left, right)
            assert len(found) == 1
            crossings.append(found[0].mu)
        assert max(crossings) - min(crossings) <= 1e-5
        assert all(abs(mu - mu_c) <= 1e-3 for mu in crossings)

    def test_ansatz_family(self):
        """Test that intermediate angles stay between the endpoints and cross once each.

        Above d = 2 the adjacent crossings drift apart as the angle grows;
        at d = 3, eta = 0.4, nu = 1 they span about 0.35 to 0.40.
        """
        d = 3
        alphas = [0.0, math.pi / 8, math.pi / 4, max_entangled_alpha(d)]
        curves = alpha_sweep(Family.QCD, d, 0.4, 1.0, alphas, grid_size=101)

        first, last = curves[0], curves[-1]
        for curve in curves[1:-1]:
            for index in (0, -1):
                lo = min(first.values[index], last.values[index])
                hi = max(first.values[index], last.values[index])
                assert lo - 1e-12 <= curve.values[index] <= hi + 1e-12

        crossings = []
        for left, right in zip(curves, curves[1:]):
            found = curve_crossings(left, right)
            assert len(found) == 1
            crossings.append(found[0].mu)
        assert 0.02 < crossings[0] - crossings[-1] <= 0.06

    def test_ansatz_endpoints(self):
        """Test that the angle endpoints reproduce the closed-form curves."""
        spec = ChannelSpec(family=Family.QCD, d=3, eta=0.4, nu=1.0)
        ends = alpha_sweep(Family.QCD, 3, 0.4, 1.0, [0.0, max_entangled_alpha(3)], grid_size=21)
        product_curve = mi_vs_mu(spec, InputSelector.product(), 21, Method.CLOSED)
        entangled_curve = mi_vs_mu(spec, InputSelector.entangled(), 21, Method.CLOSED)

        np.testing.assert_allclose(ends[0].values, product_curve.values, atol=1e-10)
        np.testing.assert_allclose(ends[1].values, entangled_curve.values, atol=1e-10)


class TestErrataPostCorrection:
    """Every recorded clause is fixed, on the whole grid."""

    @pytest.mark.parametrize("family", [Family.QD, Family.QCD])
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_ledger_closes(self, family, d):
        """Test that each record's corrected form meets the oracle to 1e-10."""
        for eta, mu, nu in product((0.2, 0.8), (0.3, 0.7), (0.5, 1.0)):
            spec = ChannelSpec(family=family, d=d, eta=eta, mu=mu, nu=nu)
            for record in errata_ledger(spec, SchmidtSpec.maximally_entangled(d)):
                assert record.max_deviation_after <= 1e-10
                assert record.max_deviation_before > 1e-10
