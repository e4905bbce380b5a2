"""Conserved quantities and norm monitors.

Sign conventions fixed here and reused by every other module:

    mass      M = integral |psi|^2
    momentum  P = Im integral psi conj(psi_x)  -  theta integral rho eta
    energy    E = integral ( omega |psi_x|^2 + gamma q / 2 |psi|^4
                             + beta/2 rho^2 + 1/2 eta^2
                             + gamma/2 (2 eta - alpha rho) |psi|^2
                             - alpha rho eta )

The momentum integrand is psi times the conjugate of psi_x (not the other
order); ``im_psi_conj_dpsi`` is the single place that choice lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, SimState, h_s_norm, quadrature, spectral_derivative
from .model import ModelParams


def im_psi_conj_dpsi(psi: np.ndarray, psi_x: np.ndarray) -> np.ndarray:
    """Pointwise Im(psi * conj(psi_x)); the momentum density of the psi field."""
    return np.imag(psi * np.conj(psi_x))


@dataclass(frozen=True)
class ConservedTriple:
    mass: float
    momentum: float
    energy: float


def mass(grid: Grid, state: SimState) -> float:
    return quadrature(grid, np.abs(state.psi) ** 2)


def momentum(grid: Grid, state: SimState, params: ModelParams) -> float:
    psi_x = spectral_derivative(grid, state.psi)
    kinetic = quadrature(grid, im_psi_conj_dpsi(state.psi, psi_x))
    return kinetic - params.theta * quadrature(grid, state.rho * state.eta)


def energy(grid: Grid, state: SimState, params: ModelParams) -> float:
    psi_x = spectral_derivative(grid, state.psi)
    intensity = np.abs(state.psi) ** 2
    density = (
        params.omega * np.abs(psi_x) ** 2
        + 0.5 * params.gamma * params.q * intensity**2
        + 0.5 * params.beta * state.rho**2
        + 0.5 * state.eta**2
        + 0.5 * params.gamma * (2.0 * state.eta - params.alpha * state.rho) * intensity
        - params.alpha * state.rho * state.eta
    )
    return quadrature(grid, density)


def conserved_triple(grid: Grid, state: SimState, params: ModelParams) -> ConservedTriple:
    return ConservedTriple(
        mass(grid, state), momentum(grid, state, params), energy(grid, state, params)
    )


def relative_drift(series: np.ndarray, initial: float | None = None) -> float:
    """Max |Q(t) - Q(0)| / max(1, |Q(0)|); the floor avoids near-zero blowups."""
    series = np.asarray(series, dtype=float)
    q0 = series[0] if initial is None else initial
    return float(np.max(np.abs(series - q0)) / max(1.0, abs(q0)))


def coercive_lower_bound(grid: Grid, state: SimState, params: ModelParams) -> dict:
    """Quadratic acoustic part of the energy and its coercive minorant.

    The valid Young split of the cross term alpha rho eta (with parameter
    (beta+alpha^2)/4 on rho^2) leaves

        beta/2 |rho|^2 + 1/2 |eta|^2 - alpha rho eta
            >= (beta - alpha^2)/4 |rho|^2
               + (beta - alpha^2) / (2 (beta + alpha^2)) |eta|^2,

    sharp along eta = 2 alpha rho / (beta + alpha^2) * ... (equality ray).
    A commonly quoted variant puts beta instead of (beta - alpha^2) in the
    eta^2 numerator; that form fails for alpha /= 0 and is reported under
    ``minorant_noncoercive_variant`` for comparison only.
    """
    a, b = params.alpha, params.beta
    rho2 = quadrature(grid, state.rho**2)
    eta2 = quadrature(grid, state.eta**2)
    cross = quadrature(grid, state.rho * state.eta)
    quadratic = 0.5 * b * rho2 + 0.5 * eta2 - a * cross
    minorant = (b - a**2) / 4.0 * rho2 + (b - a**2) / (2.0 * (b + a**2)) * eta2
    variant = (b - a**2) / 4.0 * rho2 + b / (2.0 * (b + a**2)) * eta2
    return {
        "quadratic_part": quadratic,
        "minorant": minorant,
        "minorant_noncoercive_variant": variant,
        "margin": quadratic - minorant,
    }


def h2_growth_monitor(grid: Grid, times: np.ndarray, states: list) -> dict:
    """Least-squares exponent p with ||psi(t)||_{H^2} ~ C (1+t)^p.

    Informational only: desk horizons are short, so no pass/fail is attached.
    Requires at least 10 samples spanning a decade of 1 + t.
    """
    times = np.asarray(times, dtype=float)
    if len(times) < 10:
        raise ValueError("need >= 10 samples")
    if (1.0 + times[-1]) / (1.0 + times[0]) < 10.0:
        raise ValueError("samples must span a decade of 1 + t")
    norms = np.array([h_s_norm(grid, s.psi, 2.0) for s in states])
    slope, intercept = np.polyfit(np.log1p(times), np.log(norms), 1)
    return {
        "exponent": float(slope),
        "prefactor": float(math.exp(intercept)),
        "h2_norms": norms,
    }
