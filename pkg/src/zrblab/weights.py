"""Weight families used by the modified functionals.

Three families:

* ``TanhCore`` -- Phi = tanh with sech^2 derivative; drives the growing
  window functionals.
* ``FarFieldPlateau`` -- a smooth non-increasing step with Phi(s)=1 for
  s <= -1, Phi(s)=0 for s >= 0 and Phi' identically -1 on [-9/10, -1/10].
* ``ProbePsi`` -- a non-negative C-infinity bump supported in [-3/4, -1/4],
  identically 1 on [-3/5, -2/5], comparable to |Phi'| of the plateau.

The plateau and probe are assembled from the classical C-infinity step
h(t) = 1 / (1 + exp(1/t - 1/(1-t))), which climbs 0 -> 1 on [0, 1] with all
derivatives vanishing at both ends.  Writing the left transition of the
plateau as Phi(s) = 1 - (1/10) t h(t) with t = 10(s+1) makes every plateau
value (1, 0.9, 0.1, 0) exact and keeps Phi' = -(h + t h') <= 0 in closed
form, so no quadrature or tabulation is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# --- C-infinity step h and derivatives --------------------------------------
# h(t) = logistic(-(1/t - 1/(1-t))); flat to all orders at t=0 and t=1.

_U_OVERFLOW = 500.0  # |u| beyond which logistic saturates at double precision


def _u(t):
    return 1.0 / t - 1.0 / (1.0 - t)


def _with_interior(t, fn, left, right):
    """Evaluate fn on the open interval, constants outside (vectorized)."""
    t = np.asarray(t, dtype=float)
    out = np.where(t <= 0.0, left, right)
    inside = (t > 0.0) & (t < 1.0)
    if np.any(inside):
        ti = t[inside]
        vals = fn(ti)
        out = np.array(out, dtype=float)
        out[inside] = vals
    return out if out.ndim else float(out)


def smooth_step(t):
    """C-infinity step: 0 for t<=0, 1 for t>=1, strictly increasing between."""

    def fn(ti):
        ui = _u(ti)
        ui = np.clip(ui, -_U_OVERFLOW, _U_OVERFLOW)
        return 1.0 / (1.0 + np.exp(ui))

    return _with_interior(t, fn, 0.0, 1.0)


def _h_parts(ti):
    ui = _u(ti)
    ui = np.clip(ui, -_U_OVERFLOW, _U_OVERFLOW)
    h = 1.0 / (1.0 + np.exp(ui))
    u1 = -1.0 / ti**2 - 1.0 / (1.0 - ti) ** 2
    u2 = 2.0 / ti**3 - 2.0 / (1.0 - ti) ** 3
    u3 = -6.0 / ti**4 - 6.0 / (1.0 - ti) ** 4
    p = h * (1.0 - h)
    h1 = -u1 * p
    h2 = -u2 * p + u1**2 * p * (1.0 - 2.0 * h)
    h3 = (
        -u3 * p
        - u2 * h1 * (1.0 - 2.0 * h)
        + 2.0 * u1 * u2 * p * (1.0 - 2.0 * h)
        + u1**2 * (h1 * (1.0 - 2.0 * h) ** 2 - 2.0 * p * h1)
    )
    return h, h1, h2, h3


def smooth_step_derivative(t, order: int):
    if order == 0:
        return smooth_step(t)
    if order not in (1, 2, 3):
        raise ValueError("smooth_step derivatives available up to order 3")
    return _with_interior(t, lambda ti: _h_parts(ti)[order], 0.0, 0.0)


# --- weight families ---------------------------------------------------------


@dataclass(frozen=True)
class WeightFamily:
    """A weight with derivatives up to third order."""

    kind: str
    _fns: tuple = field(repr=False)

    def __call__(self, s):
        return self._fns[0](s)

    def derivative(self, s, order: int = 1):
        if not 0 <= order <= 3:
            raise ValueError("derivative order must be 0..3")
        return self._fns[order](s)


def tanh_core() -> WeightFamily:
    """Phi = tanh; Phi' = sech^2; Phi'' = -2 sech^2 tanh; Phi''' = 2 sech^2 (2 - 3 sech^2)."""

    def d0(s):
        return np.tanh(s)

    def d1(s):
        return 1.0 / np.cosh(s) ** 2

    def d2(s):
        c = 1.0 / np.cosh(s) ** 2
        return -2.0 * c * np.tanh(s)

    def d3(s):
        c = 1.0 / np.cosh(s) ** 2
        return 2.0 * c * (2.0 - 3.0 * c)

    return WeightFamily("TanhCore", (d0, d1, d2, d3))


def _plateau_value(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    out[s <= -1.0] = 1.0
    left = (s > -1.0) & (s < -0.9)
    mid = (s >= -0.9) & (s <= -0.1)
    right = (s > -0.1) & (s < 0.0)
    if np.any(left):
        t = 10.0 * (s[left] + 1.0)
        out[left] = 1.0 - 0.1 * t * smooth_step(t)
    out[mid] = -s[mid]
    if np.any(right):
        t = -10.0 * s[right]
        out[right] = 0.1 * t * smooth_step(t)
    return out if out.ndim else float(out)


def _plateau_derivative(s, order):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    left = (s > -1.0) & (s < -0.9)
    mid = (s >= -0.9) & (s <= -0.1)
    right = (s > -0.1) & (s < 0.0)
    if order == 1:
        out[mid] = -1.0
    if np.any(left):
        t = 10.0 * (s[left] + 1.0)
        # d^m/ds^m [1 - 0.1 t h(t)], ds = dt/10
        h = [smooth_step_derivative(t, m) for m in range(order + 1)]
        if order == 1:
            out[left] = -(h[0] + t * h[1])
        elif order == 2:
            out[left] = -10.0 * (2.0 * h[1] + t * h[2])
        elif order == 3:
            out[left] = -100.0 * (3.0 * h[2] + t * h[3])
    if np.any(right):
        t = -10.0 * s[right]
        h = [smooth_step_derivative(t, m) for m in range(order + 1)]
        if order == 1:
            out[right] = -(h[0] + t * h[1])
        elif order == 2:
            out[right] = 10.0 * (2.0 * h[1] + t * h[2])
        elif order == 3:
            out[right] = -100.0 * (3.0 * h[2] + t * h[3])
    return out if out.ndim else float(out)


def farfield_plateau() -> WeightFamily:
    fns = (
        _plateau_value,
        lambda s: _plateau_derivative(s, 1),
        lambda s: _plateau_derivative(s, 2),
        lambda s: _plateau_derivative(s, 3),
    )
    return WeightFamily("FarFieldPlateau", fns)


_PROBE_SUPPORT = (-0.75, -0.25)
_PROBE_FLAT = (-0.6, -0.4)
_PROBE_SCALE = 1.0 / (_PROBE_FLAT[0] - _PROBE_SUPPORT[0])  # transition width 0.15


def _probe_pieces(s):
    """Arguments of the two smooth steps forming the probe bump."""
    tl = (np.asarray(s, dtype=float) - _PROBE_SUPPORT[0]) * _PROBE_SCALE
    tr = (_PROBE_SUPPORT[1] - np.asarray(s, dtype=float)) * _PROBE_SCALE
    return tl, tr


def _probe_value(s):
    tl, tr = _probe_pieces(s)
    return smooth_step(tl) * smooth_step(tr)


def _probe_derivative(s, order):
    tl, tr = _probe_pieces(s)
    c = _PROBE_SCALE
    hl = [smooth_step_derivative(tl, m) for m in range(order + 1)]
    hr = [smooth_step_derivative(tr, m) for m in range(order + 1)]
    if order == 1:
        return c * (hl[1] * hr[0] - hl[0] * hr[1])
    if order == 2:
        return c**2 * (hl[2] * hr[0] - 2.0 * hl[1] * hr[1] + hl[0] * hr[2])
    if order == 3:
        return c**3 * (
            hl[3] * hr[0] - 3.0 * hl[2] * hr[1] + 3.0 * hl[1] * hr[2] - hl[0] * hr[3]
        )
    raise ValueError("order must be 1..3")


def probe_psi() -> WeightFamily:
    fns = (
        _probe_value,
        lambda s: _probe_derivative(s, 1),
        lambda s: _probe_derivative(s, 2),
        lambda s: _probe_derivative(s, 3),
    )
    return WeightFamily("ProbePsi", fns)


@lru_cache(maxsize=None)
def probe_comparability_constant(n_samples: int = 20001) -> dict:
    """Dense-grid constants C with Psi <= C |Phi'| and |Psi'| <= C |Phi'|.

    The probe support sits inside the plateau stretch where Phi' = -1, so
    both ratios are finite; they are evaluated once and cached.
    """
    s = np.linspace(_PROBE_SUPPORT[0], _PROBE_SUPPORT[1], n_samples)
    plateau = farfield_plateau()
    phi1 = np.abs(plateau.derivative(s, 1))
    psi = _probe_value(s)
    psi1 = np.abs(_probe_derivative(s, 1))
    return {
        "value_over_phi_prime": float(np.max(psi / phi1)),
        "slope_over_phi_prime": float(np.max(psi1 / phi1)),
    }
