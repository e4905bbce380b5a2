"""Solitary-wave construction and the small-theta (adiabatic) reference flow.

Traveling ansatz

    psi = exp(i lambda_freq t) exp(i c x / (2 omega)) R(x - c t),
    rho = rho_coeff R^2,   eta = eta_coeff R^2,

with R the positive even decaying profile.  Substituting into the acoustic
pair gives the linear system

    rho_coeff (c theta + alpha) - eta_coeff = gamma
    beta rho_coeff - eta_coeff (c theta + alpha) = alpha gamma / 2

whose solution is, with s = c theta + alpha and D = beta - s^2,

    rho_coeff = -gamma (c theta + alpha/2) / D,
    eta_coeff = -gamma (beta - alpha s / 2) / D.

(The widely quoted formulas name these b(c) and a(c) respectively; note the
pairing: the *a*-formula slaves eta, the *b*-formula slaves rho, which the
theta -> 0 limit confirms.)  The psi equation then reduces to the profile ODE

    omega R'' = sigma_profile R + g_profile R^3,
    sigma_profile = lambda_freq + c^2/(4 omega)   (Galilean boost bookkeeping),
    g_profile = gamma (eta_coeff - alpha/2 rho_coeff + q),

solved by R = A sech(kappa x) with kappa = sqrt(sigma_profile/omega) and
A^2 = -2 sigma_profile / g_profile whenever g_profile < 0.  Existence flags:

    flag1: a(c) - alpha/2 b(c) + q < 0   (equivalent to g_profile < 0)
    flag2: c^2/(4 omega) - lambda_freq < 0,

and construction requires both.  For alpha = 0, c = 0 the cubic coefficient
vanishes (flag1 fails) and the builder refuses: no standing wave there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .grid import Grid, SimState, quadrature, spectral_derivative
from .model import ModelParams

DENOMINATOR_FLOOR = 1e-10
RESIDUAL_GATE = 1e-8


class SolitonError(ValueError):
    pass


@dataclass(frozen=True)
class SolitonCoefficients:
    a_of_c: float            # -gamma (beta - alpha/2 (c theta + alpha)) / D
    b_of_c: float            # -gamma (c theta + alpha/2) / D
    rho_coeff: float         # slaves rho: equals b_of_c
    eta_coeff: float         # slaves eta: equals a_of_c
    flag1: bool              # a - alpha/2 b + q < 0
    flag1_alternative: bool  # b - alpha/2 a + q < 0 (swapped combination, reported)
    denominator: float


def soliton_coefficients(params: ModelParams, c: float) -> SolitonCoefficients:
    s = c * params.theta + params.alpha
    D = params.beta - s**2
    if abs(D) < DENOMINATOR_FLOOR:
        raise SolitonError(f"degenerate denominator beta - (c theta + alpha)^2 = {D:.3e}")
    g = params.gamma
    a_of_c = -g * (params.beta - 0.5 * params.alpha * s) / D
    b_of_c = -g * (s - 0.5 * params.alpha) / D
    q = params.q
    return SolitonCoefficients(
        a_of_c=a_of_c,
        b_of_c=b_of_c,
        rho_coeff=b_of_c,
        eta_coeff=a_of_c,
        flag1=a_of_c - 0.5 * params.alpha * b_of_c + q < 0.0,
        flag1_alternative=b_of_c - 0.5 * params.alpha * a_of_c + q < 0.0,
        denominator=D,
    )


def profile_cubic_coefficient(params: ModelParams, coeffs: SolitonCoefficients) -> float:
    """g_profile = gamma (eta_coeff - alpha/2 rho_coeff + q); focusing iff < 0."""
    return params.gamma * (
        coeffs.eta_coeff - 0.5 * params.alpha * coeffs.rho_coeff + params.q
    )


def sech_profile(grid: Grid, sigma: float, g_profile: float, omega: float) -> np.ndarray:
    if sigma <= 0 or g_profile >= 0:
        raise SolitonError("closed profile requires sigma > 0 and g_profile < 0")
    kappa = math.sqrt(sigma / omega)
    amplitude = math.sqrt(-2.0 * sigma / g_profile)
    return amplitude / np.cosh(kappa * grid.x)


def shooting_profile(
    grid: Grid,
    sigma: float,
    g_profile: float,
    omega: float,
) -> np.ndarray:
    """ODE fallback for omega R'' = sigma R + g R^3 on the half line.

    The decaying even solution is the homoclinic orbit, whose first integral
    omega R'^2 = sigma R^2 + g/2 R^4 pins the shot amplitude at
    R(0) = sqrt(-2 sigma / g) exactly and reduces the outward march to the
    stable first-order decay R' = -R sqrt((sigma + g R^2 / 2)/omega); far
    tails are continued exponentially.
    """
    if sigma <= 0 or g_profile >= 0:
        raise SolitonError("profile requires sigma > 0 and g_profile < 0")
    kappa = math.sqrt(sigma / omega)
    amplitude = math.sqrt(-2.0 * sigma / g_profile)
    x_max = min(grid.half_length, 30.0 / kappa)
    # leave the turning point with a quartic Taylor step; the quartic term
    # keeps the induced profile shift below solver tolerance, which matters
    # because a shifted even reflection would kink at the origin
    delta = 1e-2 / kappa
    kd2 = (kappa * delta) ** 2
    r_start = amplitude * (1.0 - 0.5 * kd2 + 5.0 / 24.0 * kd2**2)

    def rhs(x, y):
        slope2 = (sigma + 0.5 * g_profile * y[0] ** 2) / omega
        return [-y[0] * math.sqrt(max(slope2, 0.0))]

    sol = solve_ivp(
        rhs,
        (delta, x_max),
        [r_start],
        method="DOP853",
        rtol=1e-13,
        atol=1e-16,
        max_step=0.1 / kappa,
        dense_output=True,
    )
    r_edge = float(sol.sol(x_max)[0])
    ax = np.abs(grid.x)
    profile = np.empty_like(ax)
    near = ax < delta
    mid = (ax >= delta) & (ax <= x_max)
    far = ax > x_max
    kx2 = (kappa * ax[near]) ** 2
    profile[near] = amplitude * (1.0 - 0.5 * kx2 + 5.0 / 24.0 * kx2**2)
    profile[mid] = sol.sol(ax[mid])[0]
    profile[far] = r_edge * np.exp(-kappa * (ax[far] - x_max))
    return profile


@dataclass(frozen=True)
class SolitonReport:
    c: float
    lambda_freq: float
    sigma_flag: float        # lambda_freq - c^2/(4 omega): the existence quantity
    sigma_profile: float     # lambda_freq + c^2/(4 omega): the profile ODE coefficient
    g_profile: float
    amplitude: float
    kappa: float
    coefficients: SolitonCoefficients
    residual_psi: float
    residual_rho: float
    residual_eta: float

    @property
    def max_residual(self) -> float:
        return max(self.residual_psi, self.residual_rho, self.residual_eta)


def ansatz_residuals(
    grid: Grid, params: ModelParams, state: SimState, c: float, lambda_freq: float
) -> tuple:
    """Max-norm residuals of the three equations under the traveling ansatz.

    Time derivatives are eliminated through the ansatz:
    psi_t = i lambda psi - c (psi_x - i c/(2 omega) psi), rho_t = -c rho_x,
    eta_t = -c eta_x; space derivatives are spectral, so this directly
    substitutes the discrete fields into the discrete operators.
    """
    w, a, b, g, th = params.omega, params.alpha, params.beta, params.gamma, params.theta
    psi, rho, eta = state.psi, state.rho, state.eta
    psi_x = spectral_derivative(grid, psi)
    psi_xx = spectral_derivative(grid, psi, 2)
    intensity = np.abs(psi) ** 2
    intensity_x = spectral_derivative(grid, intensity)
    psi_t = 1j * lambda_freq * psi - c * (psi_x - 1j * c / (2.0 * w) * psi)
    res_psi = (
        1j * psi_t
        + w * psi_xx
        - g * (eta - 0.5 * a * rho + params.q * intensity) * psi
    )
    res_rho = (
        th * (-c * spectral_derivative(grid, rho))
        + spectral_derivative(grid, eta - a * rho)
        + g * intensity_x
    )
    res_eta = (
        th * (-c * spectral_derivative(grid, eta))
        + spectral_derivative(grid, b * rho - a * eta)
        - 0.5 * a * g * intensity_x
    )
    return (
        float(np.max(np.abs(res_psi))),
        float(np.max(np.abs(res_rho))),
        float(np.max(np.abs(res_eta))),
    )


def build_soliton_state(
    grid: Grid,
    params: ModelParams,
    c: float,
    lambda_freq: float,
    use_shooting: bool = False,
    residual_gate: float = RESIDUAL_GATE,
) -> tuple:
    """Construct the solitary-wave snapshot at t = 0 and its residual report.

    Refuses (SolitonError) when either existence flag fails or the residual
    gate is exceeded.
    """
    coeffs = soliton_coefficients(params, c)
    g_profile = profile_cubic_coefficient(params, coeffs)
    sigma_flag = lambda_freq - c**2 / (4.0 * params.omega)
    sigma_profile = lambda_freq + c**2 / (4.0 * params.omega)
    if not coeffs.flag1 or g_profile >= 0.0:
        raise SolitonError(
            "existence condition a(c) - alpha/2 b(c) + q < 0 fails: "
            "no focusing profile (for alpha = 0, c = 0 no standing wave exists)"
        )
    if sigma_flag <= 0.0:
        raise SolitonError("existence condition c^2/(4 omega) - lambda < 0 fails")
    if use_shooting:
        profile = shooting_profile(grid, sigma_profile, g_profile, params.omega)
    else:
        profile = sech_profile(grid, sigma_profile, g_profile, params.omega)
    psi = np.exp(1j * c * grid.x / (2.0 * params.omega)) * profile
    state = SimState(
        0.0,
        psi,
        coeffs.rho_coeff * profile**2,
        coeffs.eta_coeff * profile**2,
    )
    res = ansatz_residuals(grid, params, state, c, lambda_freq)
    report = SolitonReport(
        c=c,
        lambda_freq=lambda_freq,
        sigma_flag=sigma_flag,
        sigma_profile=sigma_profile,
        g_profile=g_profile,
        amplitude=float(np.max(profile)),
        kappa=math.sqrt(sigma_profile / params.omega),
        coefficients=coeffs,
        residual_psi=res[0],
        residual_rho=res[1],
        residual_eta=res[2],
    )
    if report.max_residual > residual_gate:
        raise SolitonError(
            f"ansatz residual {report.max_residual:.3e} exceeds gate {residual_gate:.1e}"
        )
    return state, report


def center_of_mass(grid: Grid, state: SimState) -> float:
    intensity = np.abs(state.psi) ** 2
    total = quadrature(grid, intensity)
    return quadrature(grid, grid.x * intensity) / total


# --- adiabatic (theta -> 0) limit ------------------------------------------------


def adiabatic_slaved_fields(psi: np.ndarray, params: ModelParams) -> tuple:
    """The theta -> 0 slaved acoustic fields rho, eta as functions of |psi|^2."""
    a, b, g = params.alpha, params.beta, params.gamma
    intensity = np.abs(psi) ** 2
    rho = -g * a / (2.0 * (b - a**2)) * intensity
    eta = -g * (b - 0.5 * a**2) / (b - a**2) * intensity
    return rho, eta


def adiabatic_cubic_coefficient(params: ModelParams) -> dict:
    """Effective NLS coefficient from substituting the slaved fields.

    g_eff = gamma (eta_coef - alpha/2 rho_coef + q)
          = alpha gamma (alpha gamma - 2) / (4 (beta - alpha^2)).

    The frequently quoted closed form -alpha gamma / (3 (beta - alpha^2))
    differs (they agree only when alpha gamma = 2/3) and is reported for
    comparison.
    """
    a, b, g = params.alpha, params.beta, params.gamma
    rho_coef = -g * a / (2.0 * (b - a**2))
    eta_coef = -g * (b - 0.5 * a**2) / (b - a**2)
    g_eff = g * (eta_coef - 0.5 * a * rho_coef + params.q)
    return {
        "g_eff": g_eff,
        "closed_form": a * g * (a * g - 2.0) / (4.0 * (b - a**2)),
        "quoted": -a * g / (3.0 * (b - a**2)),
    }


class NlsReferenceStepper:
    """Strang stepper for i psi_t + omega psi_xx = g_eff |psi|^2 psi."""

    def __init__(self, grid: Grid, omega: float, g_eff: float, dt: float):
        self.grid = grid
        self.omega = omega
        self.g_eff = g_eff
        self.dt = dt
        self._free_phase = np.exp(-1j * omega * grid.k**2 * dt)

    def _potential(self, psi: np.ndarray, tau: float) -> np.ndarray:
        return psi * np.exp(-1j * self.g_eff * np.abs(psi) ** 2 * tau)

    def step(self, psi: np.ndarray) -> np.ndarray:
        psi = self._potential(psi, self.dt / 2)
        psi = np.fft.ifft(np.fft.fft(psi) * self._free_phase)
        return self._potential(psi, self.dt / 2)


def nls_reference_step(
    grid: Grid, psi: np.ndarray, tau: float, omega: float, g_eff: float
) -> np.ndarray:
    """One Strang step of the limiting cubic Schrodinger equation."""
    return NlsReferenceStepper(grid, omega, g_eff, tau).step(psi)
