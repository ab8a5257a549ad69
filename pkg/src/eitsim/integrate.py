"""Classic fixed-step fourth-order Runge–Kutta."""

from __future__ import annotations

import numpy as np


def rk4_step(f, t, y, dt):
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_linear_step_matrix(generator: np.ndarray, dt: float) -> np.ndarray:
    """One RK4 step for ``y' = G y`` with constant ``G``.

    For a linear autonomous system the four stages collapse to the truncated
    Taylor polynomial ``I + hG + (hG)^2/2 + (hG)^3/6 + (hG)^4/24``, so applying
    this matrix is the same RK4 update, just without re-evaluating stages.
    """
    m = dt * np.asarray(generator)
    eye = np.eye(m.shape[0], dtype=m.dtype)
    # Horner form
    return eye + m @ (eye + m @ (eye + m @ (eye + m / 4.0) / 3.0) / 2.0)


def steps_between(span: float, dt: float) -> int:
    """Integer number of ``dt`` steps in ``span``; raises if they do not tile it."""
    n = round(span / dt)
    if n < 0 or abs(n * dt - span) > 1e-9 * max(1.0, abs(span)):
        raise ValueError(f"interval {span} is not an integer multiple of dt={dt}")
    return int(n)
