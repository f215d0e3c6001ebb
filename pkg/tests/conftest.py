import numpy as np
import pytest

from coldplasma import (
    build_spiral,
    gaussian_profile,
    optimize_thresholds,
    run_characteristic,
)


@pytest.fixture(scope="session")
def thresholds():
    return optimize_thresholds()


@pytest.fixture(scope="session")
def gauss_k01():
    return gaussian_profile(0.1)


@pytest.fixture(scope="session")
def center_run_k01(gauss_k01):
    """High-accuracy center characteristic of the K=0.1 pulse."""
    return run_characteristic(gauss_k01, 0.0, 25.0, tol=1e-12)


@pytest.fixture(scope="session")
def spirals_default_k01():
    """Spec-default spiral pair for K=0.1: start (2K, 0), crossing-refreshed F+."""
    outer = build_spiral("outer", (0.2, 0.0))
    inner = build_spiral("inner", (0.2, 0.0))
    return inner, outer


@pytest.fixture(scope="session")
def spirals_figure_k01():
    """Figure-literal spiral pair for K=0.1: start (K, 0)."""
    outer = build_spiral("outer", (0.1, 0.0))
    inner = build_spiral("inner", (0.1, 0.0))
    return inner, outer


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
