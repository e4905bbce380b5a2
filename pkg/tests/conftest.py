import numpy as np
import pytest

from zrblab.grid import Grid, SimState
from zrblab.model import ModelParams


@pytest.fixture(scope="session")
def std_params() -> ModelParams:
    # default desk parameter set: upsilon_+ = 2.0, upsilon_- = -1.2, q = 0.9
    return ModelParams(omega=1.0, alpha=0.25, beta=1.0, gamma=1.0, theta=0.625)


@pytest.fixture(scope="session")
def small_grid() -> Grid:
    return Grid(30.0, 1024)


@pytest.fixture()
def gaussian_state(small_grid) -> SimState:
    x = small_grid.x
    psi = 0.5 * np.exp(-(x**2) / 8.0) * np.exp(0.15j * x)
    rho = 0.2 * np.exp(-(x**2) / 6.0)
    eta = -0.15 * np.exp(-((x - 1.0) ** 2) / 5.0)
    return SimState(0.0, psi, rho, eta)


def make_smooth_random_state(grid: Grid, rng, amplitude=0.3, corr=3.0, envelope=8.0):
    """Seeded smooth random fields with a localizing envelope."""
    env = np.exp(-(grid.x**2) / (2.0 * envelope**2))

    def noise(complex_field):
        raw = rng.standard_normal(grid.n_points)
        if complex_field:
            raw = raw + 1j * rng.standard_normal(grid.n_points)
        fh = np.fft.fft(raw)
        fh *= np.exp(-0.5 * (grid.k * corr) ** 2)
        out = np.fft.ifft(fh)
        return out if complex_field else out.real

    return SimState(
        0.0,
        amplitude * env * noise(True),
        amplitude * env * noise(False),
        amplitude * env * noise(False),
    )
