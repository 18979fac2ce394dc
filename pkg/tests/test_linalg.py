"""Tests for the dense linear algebra layer."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import bisect

from qumem.exceptions import DimensionMismatchError, NegativeEigenvalueError, NotHermitianError
from qumem.core.linalg import (
    entropy_bits, hermitian_eigh, hermitian_spectrum, jacobi_eigh, kron,
)
from qumem.models.results import Spectrum

MATRIX_DIMENSION = 6
ELEMENT = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)

# -sum(l log2 l) of the memoryless QCD d = 2, eta = 0.4 product output
NOISY_ENTROPY = -sum(x * math.log2(x) for x in (0.09, 0.21, 0.21, 0.49))


def hermitian_from(real: np.ndarray, imag: np.ndarray) -> np.ndarray:
    g = real + 1j * imag
    return 0.5 * (g + g.conj().T)


class TestKron:
    """Test kron."""

    def test_identity_and_diagonal(self):
        """Test identity and diagonal cases."""
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
        np.testing.assert_array_equal(
            kron(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])), np.diag([3.0, 4.0, 6.0, 8.0])
        )

    def test_index_formula(self):
        """Test (a (x) b)[2i + k, 2j + l] = a[i, j] b[k, l] for X (x) Z."""
        x = np.array([[0, 1], [1, 0]])
        z = np.array([[1, 0], [0, -1]])
        out = kron(x, z)
        for i, j, k, l in np.ndindex(2, 2, 2, 2):
            assert out[2 * i + k, 2 * j + l] == x[i, j] * z[k, l]

    def test_rejects_vectors(self):
        """Test that kron wants matrices."""
        with pytest.raises(DimensionMismatchError):
            kron(np.ones(2), np.eye(2))


class TestHermitianSpectrum:
    """Test the eigensolvers."""

    def test_simple_cases(self):
        """Test identity and diagonal inputs."""
        assert hermitian_spectrum(np.eye(4) / 4).values == pytest.approx([0.25] * 4, abs=1e-15)
        assert hermitian_spectrum(np.diag([0.7, 0.3])).values == pytest.approx([0.3, 0.7])

    def test_rejects_non_hermitian(self):
        """Test that asymmetric input reports its asymmetry."""
        h = np.array([[1.0, 0.5], [0.0, 1.0]])
        with pytest.raises(NotHermitianError) as excinfo:
            hermitian_spectrum(h)
        assert excinfo.value.asymmetry == pytest.approx(0.5)

    def test_rejects_non_square(self):
        """Test shape check."""
        with pytest.raises(DimensionMismatchError):
            hermitian_spectrum(np.ones((2, 3)))

    def test_unknown_method(self):
        """Test that only jacobi and lapack are accepted."""
        with pytest.raises(ValueError, match="unknown eigensolver"):
            hermitian_eigh(np.eye(2), method="qr")

    def test_characteristic_polynomial_roots(self, rng):
        """Test a 3x3 Hermitian against roots of its characteristic polynomial."""
        h = hermitian_from(rng.normal(size=(3, 3)), rng.normal(size=(3, 3)))
        coefficients = np.real(np.poly(h))

        def char(x: float) -> float:
            return float(np.polyval(coefficients, x))

        bound = float(np.sum(np.abs(h))) + 1.0
        found = hermitian_spectrum(h).values
        # roots are separated by the eigenvalues' midpoints
        edges = [-bound, 0.5 * (found[0] + found[1]), 0.5 * (found[1] + found[2]), bound]
        roots = [bisect(char, lo, hi, xtol=1e-13) for lo, hi in zip(edges, edges[1:])]
        assert found == pytest.approx(roots, abs=1e-9)

    def test_reconstruction(self, rng):
        """Test that V diag(l) V^dagger reproduces the input."""
        n = 9
        h = hermitian_from(rng.normal(size=(n, n)), rng.normal(size=(n, n)))
        values, vectors = jacobi_eigh(h)

        assert np.max(np.abs(vectors @ np.diag(values) @ vectors.conj().T - h)) <= 1e-10
        assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(n))) <= 1e-12
        assert list(values) == sorted(values)

    @seed(1)
    @settings(max_examples=40, deadline=None)
    @given(
        real=arrays(np.float64, (MATRIX_DIMENSION, MATRIX_DIMENSION), elements=ELEMENT),
        imag=arrays(np.float64, (MATRIX_DIMENSION, MATRIX_DIMENSION), elements=ELEMENT),
    )
    def test_jacobi_matches_lapack(self, real, imag):
        """Test trace, Frobenius norm and LAPACK agreement."""
        h = hermitian_from(real, imag)
        values = np.array(hermitian_spectrum(h, method="jacobi").values)
        reference = np.array(hermitian_spectrum(h, method="lapack").values)
        scale = max(1.0, float(np.linalg.norm(h)))

        assert abs(values.sum() - np.trace(h).real) <= 1e-10 * scale
        assert abs(np.sum(values ** 2) - np.linalg.norm(h) ** 2) <= 1e-9 * scale ** 2
        np.testing.assert_allclose(values, reference, atol=1e-10 * scale)


class TestEntropy:
    """Test entropy_bits."""

    def test_known_values(self):
        """Test pure, maximally mixed and a noisy spectrum."""
        assert entropy_bits(Spectrum(values=(0.0, 0.0, 0.0, 1.0), dimension=4)) == 0.0
        assert entropy_bits(Spectrum(values=(0.25,) * 4, dimension=4)) == pytest.approx(2.0)
        assert entropy_bits(
            Spectrum(values=(0.09, 0.21, 0.21, 0.49), dimension=4)
        ) == pytest.approx(NOISY_ENTROPY, abs=1e-12)

    def test_clipping(self):
        """Test that tiny negatives count as zero and larger ones are errors."""
        assert entropy_bits(Spectrum(values=(-1e-13, 1.0), dimension=2)) == 0.0
        with pytest.raises(NegativeEigenvalueError):
            entropy_bits(Spectrum(values=(-1e-9, 1.0), dimension=2))

    @seed(1)
    @given(
        weights=arrays(
            np.float64, (8,),
            elements=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        ),
        shift=st.integers(min_value=0, max_value=7),
    )
    def test_bounds_and_permutation(self, weights, shift):
        """Test 0 <= S <= log2(n) and invariance under reordering."""
        if weights.sum() == 0.0:
            weights = np.ones_like(weights)
        values = weights / weights.sum()
        s = entropy_bits(Spectrum(values=tuple(values), dimension=8))
        rolled = entropy_bits(Spectrum(values=tuple(np.roll(values, shift)), dimension=8))

        assert 0.0 <= s <= math.log2(8) + 1e-12
        assert rolled == pytest.approx(s, abs=1e-12)
