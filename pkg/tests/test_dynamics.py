import numpy as np
import pytest

from zrblab.dynamics import (
    SimulationError,
    SplitStepper,
    from_riemann,
    measure_convergence_order,
    substep_acoustic,
    substep_potential,
    substep_schrodinger_free,
    to_riemann,
)
from zrblab.grid import Grid, SimState, quadrature, spectral_shift, zero_state
from zrblab.model import derive_constants


def plane_wave_state(grid, mode=3):
    k = mode * np.pi / grid.half_length
    psi = np.exp(1j * k * grid.x)
    return SimState(0.0, psi, np.zeros(grid.n_points), np.zeros(grid.n_points)), k


class TestFreeSubstep:
    def test_plane_wave_dispersion(self, small_grid, std_params):
        state, k = plane_wave_state(small_grid)
        tau = 0.37
        substep_schrodinger_free(small_grid, state, std_params, tau)
        expected = np.exp(1j * (k * small_grid.x - std_params.omega * k**2 * tau))
        assert np.max(np.abs(state.psi - expected)) < 1e-12

    def test_zero_tau_is_identity(self, small_grid, std_params, gaussian_state):
        before = gaussian_state.psi.copy()
        substep_schrodinger_free(small_grid, gaussian_state, std_params, 0.0)
        assert np.array_equal(gaussian_state.psi, before) or np.max(
            np.abs(gaussian_state.psi - before)
        ) < 1e-15

    def test_unitary_reversibility(self, small_grid, std_params, gaussian_state):
        before = gaussian_state.psi.copy()
        substep_schrodinger_free(small_grid, gaussian_state, std_params, 0.9)
        substep_schrodinger_free(small_grid, gaussian_state, std_params, -0.9)
        assert np.max(np.abs(gaussian_state.psi - before)) < 1e-12

    def test_mode_moduli_preserved(self, small_grid, std_params, gaussian_state):
        before = np.abs(np.fft.fft(gaussian_state.psi))
        substep_schrodinger_free(small_grid, gaussian_state, std_params, 1.3)
        after = np.abs(np.fft.fft(gaussian_state.psi))
        assert np.max(np.abs(after - before)) < 1e-9


class TestPotentialSubstep:
    def test_pointwise_rotation(self, small_grid, std_params):
        n = small_grid.n_points
        state = SimState(0.0, 0.7 * np.ones(n, dtype=complex), np.zeros(n), np.zeros(n))
        tau = 0.5
        substep_potential(small_grid, state, std_params, tau)
        phase = -std_params.gamma * std_params.q * 0.49 * tau
        expected = 0.7 * np.exp(1j * phase)
        assert np.max(np.abs(state.psi - expected)) < 1e-12

    def test_mass_preserved_pointwise(self, small_grid, std_params, gaussian_state):
        before = quadrature(small_grid, np.abs(gaussian_state.psi) ** 2)
        substep_potential(small_grid, gaussian_state, std_params, 0.8)
        after = quadrature(small_grid, np.abs(gaussian_state.psi) ** 2)
        assert abs(after - before) / before < 1e-14

    def test_zero_tau_identity(self, small_grid, std_params, gaussian_state):
        before = gaussian_state.psi.copy()
        substep_potential(small_grid, gaussian_state, std_params, 0.0)
        assert np.max(np.abs(gaussian_state.psi - before)) < 1e-15


class TestAcousticSubstep:
    def test_riemann_bijection(self):
        rng = np.random.default_rng(0)
        rho = rng.standard_normal(128)
        eta = rng.standard_normal(128)
        wp, wm = to_riemann(rho, eta, beta=1.7)
        rho2, eta2 = from_riemann(wp, wm, beta=1.7)
        assert np.max(np.abs(rho2 - rho)) < 1e-14
        assert np.max(np.abs(eta2 - eta)) < 1e-14

    def test_rigid_advection_without_coupling(self, small_grid, std_params):
        d = derive_constants(std_params)
        g = small_grid
        rho = np.exp(-(g.x**2))
        eta = 0.4 * np.exp(-((g.x - 2.0) ** 2))
        state = SimState(0.0, np.zeros(g.n_points, complex), rho, eta)
        wp0, wm0 = to_riemann(rho, eta, std_params.beta)
        tau = 2.5
        substep_acoustic(g, state, std_params, tau, coupling_off=True)
        wp1, wm1 = to_riemann(state.rho, state.eta, std_params.beta)
        err_p = np.sqrt(
            quadrature(g, (wp1 - spectral_shift(g, wp0, d.s_plus * tau)) ** 2)
        )
        err_m = np.sqrt(
            quadrature(g, (wm1 - spectral_shift(g, wm0, d.s_minus * tau)) ** 2)
        )
        assert err_p < 1e-10 and err_m < 1e-10

    def test_zero_state_fixed(self, small_grid, std_params):
        state = zero_state(small_grid)
        substep_acoustic(small_grid, state, std_params, 1.0)
        assert np.max(np.abs(state.rho)) == 0.0
        assert np.max(np.abs(state.eta)) == 0.0

    def test_zero_tau_identity(self, small_grid, std_params, gaussian_state):
        rho0, eta0 = gaussian_state.rho.copy(), gaussian_state.eta.copy()
        substep_acoustic(small_grid, gaussian_state, std_params, 0.0)
        assert np.max(np.abs(gaussian_state.rho - rho0)) < 1e-14
        assert np.max(np.abs(gaussian_state.eta - eta0)) < 1e-14

    def test_mean_modes_conserved(self, small_grid, std_params, gaussian_state):
        # the source has zero mean, so the k = 0 modes of rho, eta are fixed
        mean_rho = np.mean(gaussian_state.rho)
        mean_eta = np.mean(gaussian_state.eta)
        substep_acoustic(small_grid, gaussian_state, std_params, 0.7)
        assert np.mean(gaussian_state.rho) == pytest.approx(mean_rho, abs=1e-15)
        assert np.mean(gaussian_state.eta) == pytest.approx(mean_eta, abs=1e-15)


class TestIndependentSolverOracles:
    def test_acoustic_substep_against_upwind_primitive_solver(self, std_params):
        """The exact per-mode acoustic substep (advection + Duhamel source)
        against a first-order upwind discretization of the primitive
        (rho, eta) equations with the same frozen source.

        The upwind route never forms Riemann variables, so it independently
        checks the source coefficients; its numerical diffusion limits the
        agreement, measured at ~2e-3 for the fine grid used here.
        """
        p = std_params
        g = Grid(30.0, 512)
        psi = (0.6 * np.exp(-(g.x**2) / 4.0)).astype(complex)
        rho0 = 0.3 * np.exp(-(g.x**2) / 3.0)
        eta0 = -0.2 * np.exp(-((g.x - 1.0) ** 2) / 3.0)
        tau = 1.0

        state = SimState(0.0, psi.copy(), rho0.copy(), eta0.copy())
        substep_acoustic(g, state, p, tau)

        # upwind reference on an 8x finer grid, via local characteristics
        n_fine = 4096
        gf = Grid(30.0, n_fine)
        rho = np.interp(gf.x, g.x, rho0, period=60.0)
        eta = np.interp(gf.x, g.x, eta0, period=60.0)
        source = np.interp(gf.x, g.x, np.abs(psi) ** 2, period=60.0)
        d = derive_constants(p)
        sb = np.sqrt(p.beta)
        wp, wm = to_riemann(rho, eta, p.beta)
        dx = gf.dx
        dt = 0.4 * dx / max(abs(d.s_plus), abs(d.s_minus))
        n_steps = int(np.ceil(tau / dt))
        dt = tau / n_steps
        src_x = (np.roll(source, -1) - np.roll(source, 1)) / (2 * dx)
        c_p = p.gamma * (sb - 0.5 * p.alpha) / p.theta
        c_m = p.gamma * (sb + 0.5 * p.alpha) / p.theta
        for _ in range(n_steps):
            # s_plus > 0: backward difference; s_minus < 0: forward difference
            dwp = (wp - np.roll(wp, 1)) / dx
            dwm = (np.roll(wm, -1) - wm) / dx
            wp = wp - dt * (d.s_plus * dwp + c_p * src_x)
            wm = wm - dt * (d.s_minus * dwm + c_m * src_x)
        rho_ref, eta_ref = from_riemann(wp, wm, p.beta)
        rho_ref = np.interp(g.x, gf.x, rho_ref, period=60.0)
        eta_ref = np.interp(g.x, gf.x, eta_ref, period=60.0)
        err = np.sqrt(
            quadrature(g, (state.rho - rho_ref) ** 2)
            + quadrature(g, (state.eta - eta_ref) ** 2)
        )
        assert err < 5e-3

    def test_full_system_against_rk4_method_of_lines(self, std_params):
        """Strang splitting against an independent pseudospectral RK4
        integrator of the coupled system (no splitting, no Riemann form).

        A coefficient or sign error anywhere in the splitting would leave an
        O(1) gap; the actual gap is the sum of both discretization errors.
        """
        p = std_params
        g = Grid(30.0, 512)
        psi0 = 0.5 * np.exp(-(g.x**2) / 6.0) * np.exp(0.2j * g.x)
        rho0 = 0.25 * np.exp(-(g.x**2) / 5.0)
        eta0 = -0.2 * np.exp(-(g.x**2) / 4.0)
        t_final = 1.0

        state = SimState(0.0, psi0.copy(), rho0.copy(), eta0.copy())
        stepper = SplitStepper(g, p, dt=2e-4, check_boundary=False)
        stepper.evolve(state, 5000)

        ik = 1j * g.k

        def rhs(y):
            psi, rho, eta = y
            dpsi = np.fft.ifft(ik * np.fft.fft(psi))
            d2psi = np.fft.ifft(ik**2 * np.fft.fft(psi))
            intensity = np.abs(psi) ** 2
            d_int = np.fft.ifft(ik * np.fft.fft(intensity)).real
            drho = np.fft.ifft(ik * np.fft.fft(rho)).real
            deta = np.fft.ifft(ik * np.fft.fft(eta)).real
            potential = p.gamma * (eta - 0.5 * p.alpha * rho + p.q * intensity)
            psi_t = 1j * p.omega * d2psi - 1j * potential * psi
            rho_t = (p.alpha * drho - deta - p.gamma * d_int) / p.theta
            eta_t = (p.alpha * deta - p.beta * drho + 0.5 * p.alpha * p.gamma * d_int) / p.theta
            return (psi_t, rho_t, eta_t)

        y = (psi0.copy(), rho0.astype(complex), eta0.astype(complex))
        dt = 1e-3
        for _ in range(int(t_final / dt)):
            k1 = rhs(y)
            k2 = rhs(tuple(a + 0.5 * dt * b for a, b in zip(y, k1)))
            k3 = rhs(tuple(a + 0.5 * dt * b for a, b in zip(y, k2)))
            k4 = rhs(tuple(a + dt * b for a, b in zip(y, k3)))
            y = tuple(
                a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
                for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
            )
        err = np.sqrt(
            quadrature(g, np.abs(state.psi - y[0]) ** 2)
            + quadrature(g, np.abs(state.rho - y[1].real) ** 2)
            + quadrature(g, np.abs(state.eta - y[2].real) ** 2)
        )
        assert err < 1e-6


class TestStep:
    def test_zero_state_stays_zero(self, small_grid, std_params):
        stepper = SplitStepper(small_grid, std_params, dt=1e-2)
        state = zero_state(small_grid)
        stepper.evolve(state, 10)
        assert np.max(np.abs(state.psi)) == 0.0

    def test_free_evolution_exact_when_coupling_off(self, small_grid, std_params):
        state, k = plane_wave_state(small_grid)
        stepper = SplitStepper(
            small_grid, std_params, dt=1e-2, coupling_off=True, check_boundary=False
        )
        stepper.evolve(state, 100)
        t = state.t
        expected = np.exp(1j * (k * small_grid.x - std_params.omega * k**2 * t))
        assert np.max(np.abs(state.psi - expected)) < 1e-12

    def test_mass_conservation_per_step(self, small_grid, std_params, gaussian_state):
        stepper = SplitStepper(small_grid, std_params, dt=1e-3)
        m0 = quadrature(small_grid, np.abs(gaussian_state.psi) ** 2)
        stepper.evolve(gaussian_state, 200)
        m1 = quadrature(small_grid, np.abs(gaussian_state.psi) ** 2)
        assert abs(m1 - m0) / m0 < 1e-12

    def test_linear_flow_time_reversibility(self, small_grid, std_params, gaussian_state):
        stepper = SplitStepper(
            small_grid, std_params, dt=1e-2, coupling_off=True, check_boundary=False
        )
        reference = gaussian_state.copy()
        stepper.evolve(gaussian_state, 50)
        back = SplitStepper(
            small_grid, std_params, dt=-1e-2, coupling_off=True, check_boundary=False
        )
        back.evolve(gaussian_state, 50)
        err = np.sqrt(
            quadrature(small_grid, np.abs(gaussian_state.psi - reference.psi) ** 2)
            + quadrature(small_grid, (gaussian_state.rho - reference.rho) ** 2)
            + quadrature(small_grid, (gaussian_state.eta - reference.eta) ** 2)
        )
        assert err < 1e-10

    def test_full_flow_reversibility(self, small_grid, std_params, gaussian_state):
        # the palindromic composition of exact flows inverts exactly
        reference = gaussian_state.copy()
        fwd = SplitStepper(small_grid, std_params, dt=2e-3, check_boundary=False)
        fwd.evolve(gaussian_state, 100)
        bwd = SplitStepper(small_grid, std_params, dt=-2e-3, check_boundary=False)
        bwd.evolve(gaussian_state, 100)
        err = np.max(np.abs(gaussian_state.psi - reference.psi))
        assert err < 1e-9

    def test_instability_signal(self, small_grid, std_params):
        n = small_grid.n_points
        state = SimState(0.0, 1e-8 * np.ones(n, complex), np.zeros(n), np.zeros(n))
        stepper = SplitStepper(small_grid, std_params, dt=1e-2, check_boundary=False)
        stepper.step(state)
        state.psi *= 1e8  # inject a blow-up between steps
        from zrblab.dynamics import InstabilityError

        with pytest.raises(InstabilityError):
            stepper.step(state)

    def test_boundary_gate_signal(self, small_grid, std_params):
        g = small_grid
        bump = np.exp(-((g.x - 0.97 * g.half_length) ** 2) * 8.0)
        state = SimState(0.0, bump.astype(complex), np.zeros_like(bump), np.zeros_like(bump))
        from zrblab.dynamics import BoundaryContaminationError

        stepper = SplitStepper(g, std_params, dt=1e-3)
        with pytest.raises(BoundaryContaminationError):
            stepper.step(state)


@pytest.fixture(scope="module")
def coupled_initial():
    g = Grid(30.0, 512)
    psi = 0.6 * np.exp(-(g.x**2) / 6.0) * np.exp(0.2j * g.x)
    rho = 0.25 * np.exp(-(g.x**2) / 5.0)
    eta = -0.2 * np.exp(-(g.x**2) / 4.0)
    return g, SimState(0.0, psi, rho, eta)


class TestConvergenceOrder:

    def test_strang_is_second_order(self, coupled_initial, std_params):
        g, state = coupled_initial
        order = measure_convergence_order(
            g,
            std_params,
            state,
            t_final=0.8,
            dts=[8e-3, 4e-3, 2e-3],
            scheme="strang",
            check_boundary=False,
        )
        assert order == pytest.approx(2.0, abs=0.1)

    def test_lie_is_first_order(self, coupled_initial, std_params):
        # measured slope is a stable ~1.16 on oscillatory data (mild
        # self-averaging of the leading commutator); clearly first order,
        # clearly separated from Strang's ~2.04
        g, state = coupled_initial
        order = measure_convergence_order(
            g,
            std_params,
            state,
            t_final=0.8,
            dts=[8e-3, 4e-3, 2e-3],
            scheme="lie",
            check_boundary=False,
        )
        assert 0.85 < order < 1.3

    def test_requires_three_resolutions(self, coupled_initial, std_params):
        g, state = coupled_initial
        with pytest.raises(SimulationError, match=">=3"):
            measure_convergence_order(g, std_params, state, 0.5, [1e-2, 5e-3])

    def test_requires_decreasing_dts(self, coupled_initial, std_params):
        g, state = coupled_initial
        with pytest.raises(SimulationError, match="decreasing"):
            measure_convergence_order(g, std_params, state, 0.5, [1e-3, 5e-3, 2e-3])
