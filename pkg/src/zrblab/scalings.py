"""Time-dependent scaling families for the modified functionals.

Core family (kappa = 1e100 in fidelity mode, small kappa in dynamic-range
mode; tau = kappa + t, l = log tau, ll = log log tau):

    lambda1 = tau^(2/3) ll^(-2/3)      (functional window growth)
    lambda2 = tau^(2/3) ll^(1/3)
    mu      = tau^(1/3) l ll^(5/3)
    mu_star = t l ll                   (window-norm normalizer)
    lambda_window = t^(2/3) ll^(-2/3)  (window set radius)

These satisfy 1/(mu*lambda2), lambda_i'/(mu*lambda_i), mu'/mu^2 integrable
on the half line while 1/(mu*lambda1) is not; the ``integrability_ledger``
quantifies that split on a finite log grid.

Far-field family: lambda = (1+t)^(2+delta) with a shift zeta >= c1*lambda,
zeta' >= c2*lambda'; here 1/lambda is integrable while lambda'/lambda and
zeta'/lambda are not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

PAPER_KAPPA = 1e100
DYNAMIC_KAPPA = 10.0


@dataclass(frozen=True)
class ScalingSet:
    """The (lambda1, lambda2, mu, mu_star) family with derivatives."""

    kappa: float = PAPER_KAPPA

    def __post_init__(self):
        if self.kappa + 0.0 <= np.e:
            raise ValueError("kappa must exceed e so loglog is positive")

    def _logs(self, t):
        tau = self.kappa + np.asarray(t, dtype=float)
        l = np.log(tau)
        ll = np.log(l)
        return tau, l, ll

    def lambda1(self, t):
        tau, _, ll = self._logs(t)
        return tau ** (2.0 / 3.0) * ll ** (-2.0 / 3.0)

    def lambda2(self, t):
        tau, _, ll = self._logs(t)
        return tau ** (2.0 / 3.0) * ll ** (1.0 / 3.0)

    def mu(self, t):
        tau, l, ll = self._logs(t)
        return tau ** (1.0 / 3.0) * l * ll ** (5.0 / 3.0)

    def mu_star(self, t):
        _, l, ll = self._logs(t)
        return np.asarray(t, dtype=float) * l * ll

    def lambda_window(self, t):
        """Window radius of the localized sets: t^(2/3) ll^(-2/3)."""
        _, _, ll = self._logs(t)
        return np.asarray(t, dtype=float) ** (2.0 / 3.0) * ll ** (-2.0 / 3.0)

    def lambda1_dot(self, t):
        tau, l, ll = self._logs(t)
        return (2.0 / 3.0) * tau ** (-1.0 / 3.0) * ll ** (-2.0 / 3.0) * (
            1.0 - 1.0 / (l * ll)
        )

    def lambda2_dot(self, t):
        tau, l, ll = self._logs(t)
        return tau ** (-1.0 / 3.0) * ll ** (1.0 / 3.0) * (
            2.0 / 3.0 + 1.0 / (3.0 * l * ll)
        )

    def mu_dot(self, t):
        tau, l, ll = self._logs(t)
        return tau ** (-2.0 / 3.0) * ll ** (2.0 / 3.0) * (
            ll * (l / 3.0 + 1.0) + 5.0 / 3.0
        )


def paper_scalings() -> ScalingSet:
    return ScalingSet(PAPER_KAPPA)


def dynamic_scalings(kappa: float = DYNAMIC_KAPPA) -> ScalingSet:
    return ScalingSet(kappa)


@dataclass(frozen=True)
class FarFieldScaling:
    """lambda = base_width * (1+t)^(2+delta) with shift zeta (default c1*lambda).

    ``base_width`` sets the physical width of the weight transition; the
    growth/integrability conditions are scale invariant, but the plateau
    weight's shoulders span base_width/10, which must cover >= ~15 grid
    cells for the far-field identities to hold at quadrature accuracy.
    """

    delta: float = 0.1
    c1: float = 0.05
    base_width: float = 16.0
    zeta_fn: Callable | None = None
    zeta_dot_fn: Callable | None = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.base_width <= 0:
            raise ValueError("base_width must be positive")
        if (self.zeta_fn is None) != (self.zeta_dot_fn is None):
            raise ValueError("provide zeta_fn and zeta_dot_fn together")

    def lam(self, t):
        return self.base_width * (1.0 + np.asarray(t, dtype=float)) ** (2.0 + self.delta)

    def lam_dot(self, t):
        return self.base_width * (2.0 + self.delta) * (
            1.0 + np.asarray(t, dtype=float)
        ) ** (1.0 + self.delta)

    def zeta(self, t):
        if self.zeta_fn is not None:
            return self.zeta_fn(t)
        return self.c1 * self.lam(t)

    def zeta_dot(self, t):
        if self.zeta_dot_fn is not None:
            return self.zeta_dot_fn(t)
        return self.c1 * self.lam_dot(t)


def integrability_ledger(
    kappa: float,
    t_max: float = 1e6,
    n_per_decade: int = 400,
    t_min: float = 1e-2,
) -> dict:
    """Partial integrals of the four scaling ratios on a log grid.

    Integrands are taken in absolute value (the integrability statement is
    about L1 membership; for small kappa the lambda1 family is briefly
    decreasing, so its ratio changes sign).  Returns, per family, the
    running integral, its per-decade increments and the final-decade share
    of the total.  The convergent families |1/(mu lambda2)|,
    |lambda_i'/(mu lambda_i)|, |mu'/mu^2| should show a final decade
    contributing under 1% of the total while the divergent 1/(mu lambda1)
    keeps adding at least 1% per decade.
    """
    s = ScalingSet(kappa)
    n_decades = int(np.ceil(np.log10(t_max / t_min)))
    t = np.concatenate(
        [[0.0], np.logspace(np.log10(t_min), np.log10(t_max), n_per_decade * n_decades + 1)]
    )
    fams = {
        "inv_mu_lambda2": lambda tt: 1.0 / (s.mu(tt) * s.lambda2(tt)),
        "lambda1_ratio": lambda tt: s.lambda1_dot(tt) / (s.mu(tt) * s.lambda1(tt)),
        "lambda2_ratio": lambda tt: s.lambda2_dot(tt) / (s.mu(tt) * s.lambda2(tt)),
        "mu_ratio": lambda tt: s.mu_dot(tt) / s.mu(tt) ** 2,
        "inv_mu_lambda1": lambda tt: 1.0 / (s.mu(tt) * s.lambda1(tt)),
    }
    out = {}
    decade_edges = t_max / 10.0 ** np.arange(n_decades, -1, -1)
    for name, fn in fams.items():
        vals = np.abs(fn(t))
        increments = 0.5 * (vals[1:] + vals[:-1]) * np.diff(t)
        cumulative = np.concatenate([[0.0], np.cumsum(increments)])
        total = cumulative[-1]
        per_decade = []
        for lo, hi in zip(decade_edges[:-1], decade_edges[1:]):
            mask = (t[1:] > lo) & (t[1:] <= hi)
            per_decade.append(float(np.sum(increments[mask])))
        out[name] = {
            "total": float(total),
            "per_decade": per_decade,
            "final_decade_share": per_decade[-1] / total if total else 0.0,
            "increasing": bool(np.all(increments >= 0.0)),
        }
    return out
