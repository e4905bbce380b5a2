#!/usr/bin/env python3
"""Split-step integration basics: conserved quantities and convergence order.

Evolves a chirped gaussian wave packet coupled to a pair of gaussian
acoustic pulses, tracks the mass / momentum / energy drift, and measures the
self-convergence order of the Strang and Lie compositions.
"""

import numpy as np

from zrblab import (
    Grid,
    ModelParams,
    SimState,
    SplitStepper,
    conserved_triple,
    measure_convergence_order,
    validate_params,
)

params = validate_params(ModelParams(omega=1.0, alpha=0.25, beta=1.0, gamma=1.0, theta=0.625))
grid = Grid(half_length=50.0, n_points=1024)

psi0 = 0.5 * np.exp(-(grid.x**2) / 8.0) * np.exp(0.3j * grid.x / 2.0)
rho0 = 0.2 * np.exp(-(grid.x**2) / 6.0)
eta0 = -0.15 * np.exp(-((grid.x - 1.0) ** 2) / 5.0)
state = SimState(0.0, psi0, rho0, eta0)

c0 = conserved_triple(grid, state, params)
print(f"t = 0    : M = {c0.mass:.12f}  P = {c0.momentum:+.12f}  E = {c0.energy:+.12f}")

stepper = SplitStepper(grid, params, dt=1e-3)
for _ in range(4):
    stepper.evolve(state, 1250)
    c = conserved_triple(grid, state, params)
    print(
        f"t = {state.t:4.2f} : dM/M = {abs(c.mass - c0.mass) / c0.mass:.2e}  "
        f"dP = {abs(c.momentum - c0.momentum):.2e}  dE = {abs(c.energy - c0.energy):.2e}"
    )

print("\nself-convergence order (errors against a 4x finer reference):")
initial = SimState(0.0, psi0, rho0, eta0)
for scheme in ("strang", "lie"):
    order = measure_convergence_order(
        grid, params, initial.copy(), t_final=0.8, dts=[8e-3, 4e-3, 2e-3],
        scheme=scheme, check_boundary=False,
    )
    print(f"  {scheme:7s}: slope {order:.3f}")
