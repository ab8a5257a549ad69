"""Lindblad master-equation evolution for the qubit–resonator system.

    drho/dt = -i[H, rho] + sum_k r_k (A_k rho A_k† - {A_k† A_k, rho}/2)

Density matrices are evolved as row-major vectors under the Liouvillian
superoperator with fixed-step RK4. Trace is never renormalised; drift is
reported on the returned :class:`Trajectory`.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .hamiltonians import SystemParams, build_h_eff, build_h_sys_prime
from .integrate import rk4_linear_step_matrix, steps_between
from .operators import DimensionError, HilbertSpace, Operator

log = logging.getLogger(__name__)

POPULATIONS = ("P_e0", "P_g1", "P_g0")
TRACE_DRIFT_LIMIT = 1e-6
TRUNCATION_LIMIT = 1e-4


class TraceDriftError(RuntimeError):
    pass


class TruncationError(RuntimeError):
    pass


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise DimensionError(f"density matrix shape {m.shape} != ({d}, {d})")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("density matrix is not hermitian")
        if abs(np.trace(m) - 1.0) > 1e-9:
            raise ValueError(f"density matrix trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -1e-8:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_ket(cls, space: HilbertSpace, ket) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(space, np.outer(v, v.conj()))

    @classmethod
    def basis(cls, space: HilbertSpace, qubit: str, n: int) -> "DensityMatrix":
        return cls.from_ket(space, ops.basis_ket(space, qubit, n))


@dataclass(frozen=True)
class Dissipator:
    op: Operator
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"dissipator rate must be >= 0, got {self.rate}")


@dataclass
class Trajectory:
    times: np.ndarray
    populations: dict
    expectations: dict = field(default_factory=dict)
    trace_drift: float = 0.0
    hermiticity_error: float = 0.0
    min_eigenvalue: float = 0.0
    truncation_flag: bool = False
    top_level_population: float = 0.0
    final_rho: np.ndarray | None = None


def _check_space(h: Operator, dissipators, rho_space: HilbertSpace) -> None:
    if h.space != rho_space:
        raise DimensionError(f"Hamiltonian space {h.space} != state space {rho_space}")
    for d in dissipators:
        if d.op.space != rho_space:
            raise DimensionError(f"dissipator space {d.op.space} != state space {rho_space}")


def lindblad_rhs(h: Operator, dissipators, rho) -> np.ndarray:
    """Right-hand side of the master equation for a single density matrix."""
    space = rho.space if isinstance(rho, DensityMatrix) else h.space
    _check_space(h, dissipators, space)
    r = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    H = h.matrix
    out = -1j * (H @ r - r @ H)
    for d in dissipators:
        A = d.op.matrix
        Ad = A.conj().T
        AdA = Ad @ A
        out += d.rate * (A @ r @ Ad - 0.5 * (AdA @ r + r @ AdA))
    return out


def liouvillian(h: Operator, dissipators) -> np.ndarray:
    """Superoperator acting on row-major ``rho.ravel()``.

    Uses vec(X rho Y) = (X ⊗ Y^T) vec(rho) for row-major flattening.
    """
    _check_space(h, dissipators, h.space)
    H = h.matrix
    eye = np.eye(H.shape[0])
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for d in dissipators:
        A = d.op.matrix
        AdA = A.conj().T @ A
        L += d.rate * (np.kron(A, A.conj()) - 0.5 * np.kron(AdA, eye) - 0.5 * np.kron(eye, AdA.T))
    return L


def master_dissipators(params: SystemParams, space: HilbertSpace,
                       dephasing_rate: float = 0.0) -> list[Dissipator]:
    """Qubit decay D[s-, Gamma_f] and resonator decay D[b, gamma];
    optionally a pure-dephasing channel D[sz, dephasing_rate] (off by default)."""
    out = [Dissipator(ops.sm(space), params.gamma_f), Dissipator(ops.destroy(space), params.gamma_r)]
    if dephasing_rate:
        out.append(Dissipator(ops.sz(space), dephasing_rate))
    return out


def population_projectors(space: HilbertSpace) -> dict:
    return {
        "P_e0": ops.projector(space, "e", 0),
        "P_g1": ops.projector(space, "g", 1),
        "P_g0": ops.projector(space, "g", 0),
    }


def evolve(h: Operator, dissipators, rho0: DensityMatrix, t_end: float, dt: float = 0.001,
           observables=None, stride: float = 0.5, strict: bool = False) -> Trajectory:
    """Integrate the master equation from ``rho0`` to ``t_end`` (ns).

    Populations of |e,0>, |g,1>, |g,0> are always recorded; extra
    ``observables`` (a name -> Operator mapping or a list) are recorded as
    complex expectation values. Samples are taken every ``stride`` ns and at
    ``t_end``.
    """
    space = rho0.space
    _check_space(h, dissipators, space)
    hmax = float(np.max(np.abs(h.matrix)))
    if hmax > 0 and dt > 0.01 / hmax * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds stability bound 0.01/|H|_max = {0.01 / hmax}")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    n_total = steps_between(t_end, dt)
    n_stride = max(1, steps_between(stride, dt))

    if observables is None:
        observables = {}
    elif not isinstance(observables, dict):
        observables = {f"O{i}": o for i, o in enumerate(observables)}
    pops = population_projectors(space)
    top = ops.mode_op(space, np.diag(np.eye(space.fock_dim)[-1]))

    d = space.total_dim
    step = rk4_linear_step_matrix(liouvillian(h, dissipators), dt)
    jump = np.linalg.matrix_power(step, n_stride)

    sample_steps = list(range(0, n_total + 1, n_stride))
    if sample_steps[-1] != n_total:
        sample_steps.append(n_total)

    times = np.array(sample_steps, dtype=float) * dt
    pop_series = {k: np.empty(len(times)) for k in POPULATIONS}
    obs_series = {k: np.empty(len(times), dtype=complex) for k in observables}
    drift = herm = top_pop = 0.0
    min_eig = np.inf

    vec = np.array(rho0.matrix, dtype=complex).ravel()
    current = 0
    for i, n in enumerate(sample_steps):
        gap = n - current
        if gap == n_stride:
            vec = jump @ vec
        elif gap:
            vec = np.linalg.matrix_power(step, gap) @ vec
        current = n
        rho = vec.reshape(d, d)
        tr = np.trace(rho)
        drift = max(drift, abs(tr - 1.0))
        if drift > TRACE_DRIFT_LIMIT:
            raise TraceDriftError(
                f"trace drift {drift:.3g} at t={times[i]} ns; reduce dt (currently {dt})"
            )
        herm = max(herm, float(np.max(np.abs(rho - rho.conj().T))))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()))
        top_pop = max(top_pop, float(np.sum(rho * top.matrix.T).real))
        for k, p in pops.items():
            pop_series[k][i] = np.sum(rho * p.matrix.T).real
        for k, o in observables.items():
            obs_series[k][i] = np.sum(rho * o.matrix.T)

    flag = top_pop > TRUNCATION_LIMIT
    if flag:
        msg = f"top Fock level population {top_pop:.3g} exceeds {TRUNCATION_LIMIT}; raise fock_cutoff"
        if strict:
            raise TruncationError(msg)
        log.warning(msg)
    return Trajectory(
        times=times, populations=pop_series, expectations=obs_series,
        trace_drift=float(drift), hermiticity_error=herm, min_eigenvalue=min_eig,
        truncation_flag=flag, top_level_population=top_pop,
        final_rho=vec.reshape(d, d).copy(),
    )


@dataclass
class Comparison:
    full: Trajectory
    effective: Trajectory
    max_deviation: dict
    truncation_change: float | None = None


def _max_deviation(a: Trajectory, b: Trajectory) -> dict:
    return {k: float(np.max(np.abs(a.populations[k] - b.populations[k]))) for k in POPULATIONS}


def compare_full_vs_effective(params: SystemParams, damped: bool, t_end: float = 400.0,
                              dt: float = 0.001, n_cutoff: int = 5, stride: float = 0.5,
                              dephasing_rate: float = 0.0, check_truncation: bool = True,
                              strict: bool = False) -> Comparison:
    """Evolve |g,1> under the pumped and the effective Hamiltonians with identical dissipators.

    With ``check_truncation`` both runs are repeated at twice the cutoff and
    the largest population change is stored on ``truncation_change``.
    """

    def run(n):
        space = HilbertSpace(n)
        h_full = build_h_sys_prime(params, n)
        # the doubled cutoff raises |H|_max; subdivide dt to stay inside the stability bound
        step = dt
        hmax = float(np.max(np.abs(h_full.matrix)))
        if hmax > 0 and dt > 0.01 / hmax:
            step = dt / math.ceil(dt * hmax / 0.01)
        rho0 = DensityMatrix.basis(space, "g", 1)
        diss = master_dissipators(params, space, dephasing_rate) if damped else []
        h_eff = build_h_eff(params, n, check_regime=False)
        full = evolve(h_full, diss, rho0, t_end, step, stride=stride, strict=strict)
        eff = evolve(h_eff, diss, rho0, t_end, step, stride=stride, strict=strict)
        return full, eff

    params.check_effective_regime(strict)
    full, eff = run(n_cutoff)
    result = Comparison(full, eff, _max_deviation(full, eff))
    if check_truncation:
        full2, eff2 = run(2 * n_cutoff)
        change = max(max(_max_deviation(full, full2).values()), max(_max_deviation(eff, eff2).values()))
        result.truncation_change = change
        if change > TRUNCATION_LIMIT:
            msg = f"doubling fock_cutoff changed populations by {change:.3g}"
            if strict:
                raise TruncationError(msg)
            warnings.warn(msg, TruncationWarning, stacklevel=2)
    return result
