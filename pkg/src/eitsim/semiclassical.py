"""Closed-form steady state and linear probe susceptibility.

Three analytic routes are provided:

* :func:`chi1_full` -- the complete linear-response expression with the
  auxiliaries ``A``, ``B``, ``C`` built on the zeroth-order steady state;
* :func:`chi1_eff` -- the dressed-state (three-level) approximation with
  coupling ``Omega_c`` and shift ``Delta_s``;
* :func:`chi1_eff_resonant` -- the latter with the shift compensated.

All susceptibilities are dimensionless and normalised so that
``chi = Gamma_f * <sigma_->^+ / Omega_pr``.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .hamiltonians import ParameterError, SystemParams, resonant_detuning

log = logging.getLogger(__name__)

SINGULAR_ATOL = 1e-14


class SteadyMode(str, enum.Enum):
    # Frequency in the shift term of the population cubic: delta_sig taken literally, or omega.
    LITERAL = "literal"
    CORRECTED_OMEGA = "corrected_omega"


class Route(str, enum.Enum):
    FULL = "full"
    EFFECTIVE = "effective"
    RESONANT = "resonant"
    ODE_ORACLE = "ode_oracle"


class Numerator(str, enum.Enum):
    GAMMA_D = "gamma_d"
    GAMMA_F = "gamma_f"


class SteadyStateError(ArithmeticError):
    """No physical root of the population cubic."""

    def __init__(self, msg, roots=()):
        super().__init__(msg)
        self.roots = tuple(roots)


class SingularityError(ArithmeticError):
    """A denominator of the susceptibility vanished."""

    def __init__(self, factor, A=None, B=None, C=None):
        super().__init__(f"vanishing denominator {factor} (A={A}, B={B}, C={C})")
        self.factor = factor
        self.A, self.B, self.C = A, B, C


class MultipleRootsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SteadyState:
    sigma_z0: float
    x0: float
    sigma_m0: complex


@dataclass(frozen=True)
class SusceptibilityPoint:
    delta_sig: float
    chi: complex
    route: Route


def _shift_frequency(params: SystemParams, delta_sig: float, mode: SteadyMode) -> float:
    mode = SteadyMode(mode)
    nu = delta_sig if mode is SteadyMode.LITERAL else params.omega
    if nu == 0:
        raise ParameterError(f"shift frequency is zero in mode {mode.value}")
    return nu


def population_cubic(params: SystemParams, delta_sig: float = 0.0,
                     mode: SteadyMode = SteadyMode.CORRECTED_OMEGA) -> np.ndarray:
    """Coefficients (highest power first) of the steady-state polynomial in sigma_z0.

    Gd (s+1) [(Delta - k s)^2 + Gf^2] + 4 Gf Opu^2 s with k = 4 g^2 / nu.
    """
    k = 4.0 * params.g**2 / _shift_frequency(params, delta_sig, mode)
    d, gd, gf = params.delta, params.gamma_d, params.gamma_f
    q = d * d + gf * gf
    return np.array([
        gd * k * k,
        gd * (k * k - 2.0 * d * k),
        gd * (q - 2.0 * d * k) + 4.0 * gf * params.omega_pu**2,
        gd * q,
    ])


def solve_population_inversion(params: SystemParams, delta_sig: float = 0.0,
                               mode: SteadyMode = SteadyMode.CORRECTED_OMEGA) -> float:
    """Physical root in [-1, 0] of the population cubic.

    Roots come from the companion matrix and are polished by Newton steps.
    When several roots lie in [-1, 0] the one closest to -1 is returned and a
    :class:`MultipleRootsWarning` is emitted.
    """
    if params.omega_pu == 0:
        return -1.0
    if params.gamma_d <= 0:
        raise ParameterError("gamma_d must be > 0 for a driven steady state")
    coeffs = population_cubic(params, delta_sig, mode)
    poly = np.polynomial.Polynomial(coeffs[::-1])
    dpoly = poly.deriv()
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    candidates = []
    for r in roots:
        if abs(r.imag) > 1e-7 * scale:
            continue
        s = float(r.real)
        for _ in range(8):
            dp = dpoly(s)
            if dp == 0:
                break
            step = poly(s) / dp
            s -= step
            if abs(step) <= 1e-16 * max(1.0, abs(s)):
                break
        if -1.0 - 1e-12 <= s <= 1e-12:
            candidates.append(min(0.0, max(-1.0, float(s))))
    if not candidates:
        raise SteadyStateError(f"no real root of the population cubic in [-1, 0]; roots={roots}", roots)
    candidates.sort()
    if len(candidates) > 1 and candidates[-1] - candidates[0] > 1e-9:
        log.info("multiple physical roots %s; choosing %s", candidates, candidates[0])
        warnings.warn(f"multiple roots in [-1, 0]: {candidates}", MultipleRootsWarning, stacklevel=2)
    return candidates[0]


def steady_state(params: SystemParams, delta_sig: float = 0.0,
                 mode: SteadyMode = SteadyMode.CORRECTED_OMEGA) -> SteadyState:
    s = solve_population_inversion(params, delta_sig, mode)
    x0 = -2.0 * params.g * s / params.omega
    denom = (params.delta + 2.0 * params.g * x0) - 1j * params.gamma_f
    if abs(denom) < SINGULAR_ATOL:
        raise SingularityError("steady coherence denominator")
    sm0 = -params.omega_pu * s / denom
    return SteadyState(sigma_z0=float(s), x0=float(x0), sigma_m0=complex(sm0))


def chi1_full(params: SystemParams, delta_sig: float,
              mode: SteadyMode = SteadyMode.CORRECTED_OMEGA,
              steady: SteadyState | None = None) -> SusceptibilityPoint:
    """Full semiclassical linear susceptibility at signal–pump detuning ``delta_sig``.

    ``steady`` may be passed to reuse a precomputed zeroth-order state; it
    must correspond to ``(params, delta_sig, mode)``.
    """
    st = steady if steady is not None else steady_state(params, delta_sig, mode)
    s, x0, sm0 = st.sigma_z0, st.x0, st.sigma_m0
    g, opu, gf, d = params.g, params.omega_pu, params.gamma_f, params.delta
    w = params.omega
    A = 1j * delta_sig - gf - 1j * d - 2j * g * x0
    B = gf - 1j * delta_sig - 1j * d - 2j * g * x0
    c_den = w * w - delta_sig * delta_sig - 1j * params.gamma_r * delta_sig
    if abs(A) < SINGULAR_ATOL:
        raise SingularityError("A", A, B)
    if abs(B) < SINGULAR_ATOL:
        raise SingularityError("B", A, B)
    if abs(c_den) < SINGULAR_ATOL:
        raise SingularityError("C denominator", A, B)
    C = -2.0 * w * g / c_den
    smc = np.conj(sm0)
    nested = (params.gamma_d - 1j * delta_sig
              - 2j * opu * (1j * opu * (1 / B - 1 / A) + 2j * g * C * (smc / B - sm0 / A)))
    if abs(nested) < SINGULAR_ATOL:
        raise SingularityError("nested denominator", A, B, C)
    inner = (2.0 * opu * s / A + 2j * smc) / nested
    chi = 1j * gf * ((opu + 2.0 * g * sm0 * C) * inner + s) / A
    return SusceptibilityPoint(delta_sig, complex(chi), Route.FULL)


def chi1_eff(params: SystemParams, delta_sig: float,
             numerator: Numerator = Numerator.GAMMA_F) -> SusceptibilityPoint:
    """Dressed three-level susceptibility

    chi = i Gx / (Gf - i[delta - (Delta + Delta_s)] + Omega_c^2 / (gamma/2 - i(delta - omega)))
    """
    if params.delta == 0:
        raise ParameterError("delta must be nonzero")
    num = params.gamma_d if Numerator(numerator) is Numerator.GAMMA_D else params.gamma_f
    oc = params.effective_coupling
    two_photon = 0.5 * params.gamma_r - 1j * (delta_sig - params.omega)
    if oc != 0 and abs(two_photon) < SINGULAR_ATOL:
        raise SingularityError("two-photon denominator")
    coupling = oc * oc / two_photon if oc != 0 else 0.0
    den = params.gamma_f - 1j * (delta_sig - (params.delta + params.energy_shift)) + coupling
    if abs(den) < SINGULAR_ATOL:
        raise SingularityError("effective denominator")
    return SusceptibilityPoint(delta_sig, complex(1j * num / den), Route.EFFECTIVE)


def chi1_eff_resonant(params: SystemParams, delta_sig: float, atol: float = 1e-9) -> SusceptibilityPoint:
    """Shift-compensated form, valid when Delta + Delta_s = omega."""
    mismatch = params.delta + params.energy_shift - params.omega
    if abs(mismatch) > atol:
        raise ParameterError(
            f"resonant form requires delta = omega - Delta_s (={resonant_detuning(params)}); "
            f"got delta={params.delta}"
        )
    oc = params.effective_coupling
    x = delta_sig - params.omega
    den = params.gamma_f - 1j * x + oc * oc / (0.5 * params.gamma_r - 1j * x)
    return SusceptibilityPoint(delta_sig, complex(1j * params.gamma_f / den), Route.RESONANT)


def scale_susceptibility(chi: complex, params: SystemParams) -> complex:
    """Dimensionful susceptibility (mu^2 / Gamma_f) chi."""
    if params.mu is None:
        raise ParameterError("mu is required to scale the susceptibility")
    if params.gamma_f == 0:
        raise ParameterError("gamma_f must be nonzero to scale the susceptibility")
    return params.mu**2 / params.gamma_f * chi


def spectrum(params: SystemParams, deltas, route: Route = Route.FULL,
             mode: SteadyMode = SteadyMode.CORRECTED_OMEGA,
             numerator: Numerator = Numerator.GAMMA_F) -> np.ndarray:
    """Complex susceptibility on a grid of detunings for one analytic route."""
    route = Route(route)
    deltas = np.asarray(deltas, dtype=float)
    out = np.empty(deltas.shape, dtype=complex)
    st = None
    if route is Route.FULL and SteadyMode(mode) is SteadyMode.CORRECTED_OMEGA:
        st = steady_state(params, 0.0, mode)
    for i, d in enumerate(deltas.flat):
        if route is Route.FULL:
            out.flat[i] = chi1_full(params, d, mode, steady=st).chi
        elif route is Route.EFFECTIVE:
            out.flat[i] = chi1_eff(params, d, numerator).chi
        elif route is Route.RESONANT:
            out.flat[i] = chi1_eff_resonant(params, d).chi
        else:
            raise ValueError("the ODE route is evaluated by eitsim.bloch_oracle")
    return out
