"""Pytest configuration and fixtures for qumem tests."""

import os
import tempfile
from pathlib import Path

import numpy as np
import pytest

from qumem.core.config import Config
from qumem.models.channel import ChannelSpec, Family
from qumem.models.results import Numerics


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def numerics():
    """Default solver settings with a single worker."""
    return Numerics()


@pytest.fixture
def lapack_numerics():
    """Solver settings that use LAPACK instead of Jacobi."""
    return Numerics(eigensolver="lapack")


@pytest.fixture
def qd_spec():
    """QD channel at an interior point, even d."""
    return ChannelSpec(family=Family.QD, d=4, eta=0.8, mu=0.3, nu=0.5)


@pytest.fixture
def qcd_spec():
    """QCD channel at an interior point, odd d."""
    return ChannelSpec(family=Family.QCD, d=3, eta=0.4, mu=0.7, nu=0.3)


def random_density(d: int, rng: np.random.Generator, rank: int = 0) -> np.ndarray:
    """Random d^2 x d^2 density matrix; full rank unless rank is given."""
    n = d * d
    k = rank or n
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240601)


@pytest.fixture
def make_density(rng):
    """Factory for seeded random density matrices."""
    def make(d: int, rank: int = 0) -> np.ndarray:
        return random_density(d, rng, rank)
    return make


@pytest.fixture
def test_config(temp_dir):
    """Config isolated from any config file on the machine."""
    return Config(config_file=temp_dir / "qumem.toml")


@pytest.fixture(autouse=True)
def clean_environment():
    """Clean environment variables before each test."""
    # Store original values
    original_env = {}
    qumem_env_vars = [var for var in os.environ if var.startswith('QUMEM_')]

    for var in qumem_env_vars:
        original_env[var] = os.environ[var]
        del os.environ[var]

    yield

    # Restore original values
    for var in [v for v in os.environ if v.startswith('QUMEM_')]:
        del os.environ[var]
    for var, value in original_env.items():
        os.environ[var] = value
