import numpy as np
import pytest

from savgol_ci.keeling.data import load_snapshot


@pytest.fixture(scope="session")
def keeling():
    return load_snapshot()


@pytest.fixture(scope="session")
def keeling_y(keeling):
    return keeling.values


def synthetic_cubic(q=500, sigma=1.0, seed=0):
    """Known cubic signal plus seeded white noise; returns (y, signal, noise)."""
    t = np.linspace(-1.0, 1.0, q)
    signal = 40.0 * t**3 - 25.0 * t + 6.0 * t**2 + 100.0
    noise = sigma * np.random.default_rng(seed).standard_normal(q)
    return signal + noise, signal, noise


@pytest.fixture(scope="session")
def bundle(keeling):
    from savgol_ci.keeling.analysis import run_pipeline

    return run_pipeline(keeling, n_candidates=(3, 5, 7), p=25, seed=0, trials=1000)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k}: {detail}")
