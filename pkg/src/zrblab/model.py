"""Physical parameters of the 1-D Schrodinger/acoustic coupled system.

The model couples a complex amplitude psi to a real acoustic pair (rho, eta):

    i psi_t + omega psi_xx = gamma (eta - alpha/2 rho + q |psi|^2) psi
    theta rho_t + (eta - alpha rho)_x = -gamma (|psi|^2)_x
    theta eta_t + (beta rho - alpha eta)_x = alpha gamma / 2 (|psi|^2)_x

All admissible parameter sets satisfy omega > 0, beta > 0, gamma > 0,
beta - alpha^2 > 0 and 0 < theta < 1, with the induced cubic coefficient

    q = gamma + alpha (alpha gamma - 1) / (2 (beta - alpha^2)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

#: below this value of beta - alpha^2 the solitary-wave coefficient
#: denominators are considered ill-conditioned
CONDITIONING_FLOOR = 1e-12


class ParameterError(ValueError):
    """A parameter set violates one of the standing sign constraints."""


@dataclass(frozen=True)
class ModelParams:
    """The five model constants (immutable, freely shareable)."""

    omega: float
    alpha: float
    beta: float
    gamma: float
    theta: float

    @property
    def q(self) -> float:
        return self.gamma + self.alpha * (self.alpha * self.gamma - 1.0) / (
            2.0 * (self.beta - self.alpha**2)
        )


@dataclass(frozen=True)
class DerivedConstants:
    """Closed-form constants induced by a valid parameter set.

    ``upsilon_minus``/``upsilon_plus`` are the characteristic window speeds
    -+theta^-1 (sqrt(beta) -+ alpha); ``s_plus``/``s_minus`` are the advection
    speeds of the Riemann invariants w+ = sqrt(beta) rho + eta and
    w- = sqrt(beta) rho - eta.  Algebraically s_plus = -upsilon_minus and
    s_minus = -upsilon_plus, with s_plus > 0 > s_minus whenever
    beta - alpha^2 > 0.
    """

    q: float
    upsilon_minus: float
    upsilon_plus: float
    s_plus: float
    s_minus: float


def validate_params(p: ModelParams, relax_theta: bool = False) -> ModelParams:
    """Return ``p`` unchanged iff every standing assumption holds.

    ``relax_theta`` widens the admissible acoustic time scale to theta in
    (0, inf).  That regime is outside the analytical assumptions and exists
    only so test fixtures can use integer characteristic speeds.

    Raises ``ParameterError`` naming the first violated constraint.
    """
    if not (p.omega > 0.0):
        raise ParameterError("omega <= 0")
    if not (p.beta > 0.0):
        raise ParameterError("beta <= 0")
    if not (p.gamma > 0.0):
        raise ParameterError("gamma <= 0")
    if not (p.beta - p.alpha**2 > 0.0):
        raise ParameterError("beta - alpha^2 <= 0")
    if relax_theta:
        if not (p.theta > 0.0):
            raise ParameterError("theta <= 0")
    elif not (0.0 < p.theta < 1.0):
        raise ParameterError("theta not in (0,1)")
    if p.beta - p.alpha**2 < CONDITIONING_FLOOR:
        warnings.warn(
            "beta - alpha^2 < %g: solitary-wave coefficient denominators "
            "are ill-conditioned" % CONDITIONING_FLOOR,
            stacklevel=2,
        )
    return p


def derive_constants(p: ModelParams) -> DerivedConstants:
    """Compute all derived constants of a valid parameter set."""
    sb = math.sqrt(p.beta)
    upsilon_minus = -(sb - p.alpha) / p.theta
    upsilon_plus = (sb + p.alpha) / p.theta
    return DerivedConstants(
        q=p.q,
        upsilon_minus=upsilon_minus,
        upsilon_plus=upsilon_plus,
        s_plus=-upsilon_minus,
        s_minus=-upsilon_plus,
    )
