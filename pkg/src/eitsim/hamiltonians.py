"""Rotating-frame Hamiltonians of the pumped qubit–LC-resonator system.

Units: angular frequencies in GHz with hbar = 1, times in ns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import operators as ops
from .operators import HilbertSpace, Operator


class ParameterError(ValueError):
    pass


class PerturbativeRegimeWarning(UserWarning):
    """A parameter set sits outside the regime an approximate route assumes."""


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and detunings, all in GHz (angular).

    ``delta`` is the pump–qubit detuning, ``omega`` the resonator frequency,
    ``gamma_r`` the resonator energy decay rate. ``q_factor`` and ``mu`` are
    optional; when ``q_factor`` is given it must agree with ``omega / gamma_r``.
    """

    delta: float
    omega: float
    g: float
    omega_pu: float
    omega_pr: float = 0.0
    gamma_d: float = 0.0
    gamma_f: float = 0.0
    gamma_r: float = 0.0
    q_factor: Optional[float] = None
    mu: Optional[float] = None

    def __post_init__(self):
        errors = self.validation_errors()
        if errors:
            raise ParameterError("; ".join(errors))

    def validation_errors(self) -> list[str]:
        errors = []
        values = {
            "delta": self.delta, "omega": self.omega, "g": self.g,
            "omega_pu": self.omega_pu, "omega_pr": self.omega_pr,
            "gamma_d": self.gamma_d, "gamma_f": self.gamma_f, "gamma_r": self.gamma_r,
        }
        for key, v in values.items():
            if not math.isfinite(v):
                errors.append(f"{key} must be finite, got {v!r}")
        for key in ("g", "omega_pu", "omega_pr", "gamma_d", "gamma_f", "gamma_r"):
            if values[key] < 0:
                errors.append(f"{key} must be >= 0, got {values[key]!r}")
        if not self.omega > 0:
            errors.append(f"omega must be > 0, got {self.omega!r}")
        if self.q_factor is not None:
            if not self.q_factor > 0:
                errors.append(f"q_factor must be > 0, got {self.q_factor!r}")
            elif self.gamma_r <= 0 or abs(self.gamma_r - self.omega / self.q_factor) / self.gamma_r > 1e-6:
                errors.append(
                    f"gamma_r={self.gamma_r!r} inconsistent with omega/q_factor="
                    f"{self.omega / self.q_factor!r}"
                )
        return errors

    def replace(self, **changes) -> "SystemParams":
        if "gamma_r" in changes or "omega" in changes:
            changes.setdefault("q_factor", None)
        return replace(self, **changes)

    @property
    def effective_coupling(self) -> float:
        """Second-order transfer rate between |g,1> and |e,0>: 2 g Omega_pu / Delta."""
        if self.delta == 0:
            raise ParameterError("effective coupling undefined for delta = 0")
        return 2.0 * self.g * self.omega_pu / self.delta

    @property
    def energy_shift(self) -> float:
        """Resonator-induced plus pump-induced shift, 4 g^2 / omega + 2 Omega_pu^2 / Delta."""
        if self.delta == 0:
            raise ParameterError("energy shift undefined for delta = 0")
        return 4.0 * self.g**2 / self.omega + 2.0 * self.omega_pu**2 / self.delta

    def check_weak_probe(self, strict: bool = False) -> None:
        if self.omega_pr > 0.1 * self.omega_pu:
            msg = (f"probe omega_pr={self.omega_pr} exceeds 0.1*omega_pu={0.1 * self.omega_pu}; "
                   "linear-response routes may be inaccurate")
            if strict:
                raise ParameterError(msg)
            warnings.warn(msg, PerturbativeRegimeWarning, stacklevel=2)

    def check_effective_regime(self, strict: bool = False) -> None:
        """The dressed-state reduction assumes the pump sits near the resonator frequency."""
        if abs(self.delta - self.omega) / self.omega > 0.1:
            msg = f"effective Hamiltonian assumes delta ~ omega; got delta={self.delta}, omega={self.omega}"
            if strict:
                raise ParameterError(msg)
            warnings.warn(msg, PerturbativeRegimeWarning, stacklevel=3)


def reference_params(**overrides) -> SystemParams:
    """Reference set: omega = Delta = 1 GHz, g = 80 MHz, Omega_pu = 50 MHz,
    Gamma_d = 60 MHz, Gamma_f = 30 MHz, Q = 1e4 (gamma = 0.1 MHz), probe = Omega_pu/100."""
    base = dict(
        delta=1.0, omega=1.0, g=0.08, omega_pu=0.05, omega_pr=0.0005,
        gamma_d=0.06, gamma_f=0.03, gamma_r=1e-4, q_factor=1e4,
    )
    if "gamma_r" in overrides or "omega" in overrides:
        base["q_factor"] = None
    base.update(overrides)
    return SystemParams(**base)


def resonant_detuning(params: SystemParams) -> float:
    """Pump detuning that cancels the energy shift: the root near omega of
    Delta + 4 g^2/omega + 2 Omega_pu^2/Delta = omega.

    The shift depends on Delta itself, so the compensated value is solved
    self-consistently rather than evaluated at Delta = omega.
    """
    w = params.omega
    b = w - 4.0 * params.g**2 / w
    disc = b * b - 8.0 * params.omega_pu**2
    if b <= 0 or disc < 0:
        raise ParameterError("no real detuning compensates the energy shift for these parameters")
    return 0.5 * (b + math.sqrt(disc))


def with_detuning_preset(params: SystemParams, preset: str) -> SystemParams:
    """Apply ``delta_eq_omega``, ``delta_eq_omega_minus_shift`` or ``explicit``."""
    if preset == "delta_eq_omega":
        return params.replace(delta=params.omega)
    if preset == "delta_eq_omega_minus_shift":
        return params.replace(delta=resonant_detuning(params))
    if preset == "explicit":
        return params
    raise ValueError(f"unknown detuning preset {preset!r}")


def build_h_sys_prime(params: SystemParams, n_cutoff: int) -> Operator:
    """Pumped Hamiltonian without the probe:
    Delta/2 sz + omega b†b + g (b† + b) sz - Omega_pu (s+ + s-)."""
    space = HilbertSpace(n_cutoff)
    b = ops.destroy(space)
    s_z = ops.sz(space)
    x = b + b.dag()
    return (0.5 * params.delta * s_z
            + params.omega * (b.dag() @ b)
            + params.g * (x @ s_z)
            - params.omega_pu * (ops.sp(space) + ops.sm(space)))


def build_h_eff(params: SystemParams, n_cutoff: int, check_regime: bool = True) -> Operator:
    """Dressed-state effective Hamiltonian:
    (Omega_pu^2/Delta) sz + (2 g Omega_pu/Delta)(b† s- + b s+)."""
    if params.delta == 0:
        raise ParameterError("effective Hamiltonian requires delta != 0")
    if check_regime:
        params.check_effective_regime()
    space = HilbertSpace(n_cutoff)
    b = ops.destroy(space)
    stark = params.omega_pu**2 / params.delta
    return (stark * ops.sz(space)
            + params.effective_coupling * (b.dag() @ ops.sm(space) + b @ ops.sp(space)))


def build_h_probe_term(params: SystemParams, n_cutoff: int, delta_sig: float, t: float) -> Operator:
    """Probe drive at time ``t`` in the pump frame: -Omega_pr (s+ e^{-i delta t} + s- e^{+i delta t})."""
    space = HilbertSpace(n_cutoff)
    phase = np.exp(-1j * delta_sig * t)
    return -params.omega_pr * (phase * ops.sp(space) + np.conj(phase) * ops.sm(space))


def excitation_number(n_cutoff: int) -> Operator:
    """s+ s- + b†b, conserved by the effective Hamiltonian."""
    space = HilbertSpace(n_cutoff)
    return ops.sp(space) @ ops.sm(space) + ops.number(space)
