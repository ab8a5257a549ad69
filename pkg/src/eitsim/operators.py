"""Dense operator algebra for a qubit coupled to a truncated harmonic mode.

Composite states are ordered qubit ⊗ resonator, so the basis index of
``|q, n>`` is ``q * (N + 1) + n`` with the qubit index ``e = 0``, ``g = 1``.
Under that convention ``sigma_z = diag(+1, -1)`` and ``sigma_plus = |e><g|``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUBIT_DIM = 2
EXCITED = 0
GROUND = 1

_QUBIT_INDEX = {"e": EXCITED, "g": GROUND}


class DimensionError(ValueError):
    """Raised when operands live on incompatible spaces."""


@dataclass(frozen=True)
class HilbertSpace:
    fock_cutoff: int

    def __post_init__(self):
        if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 1:
            raise ValueError(f"fock_cutoff must be an integer >= 1, got {self.fock_cutoff!r}")

    @property
    def qubit_dim(self) -> int:
        return QUBIT_DIM

    @property
    def fock_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def total_dim(self) -> int:
        return QUBIT_DIM * self.fock_dim

    def index(self, qubit: str, n: int) -> int:
        """Basis index of ``|qubit, n>`` where ``qubit`` is ``"e"`` or ``"g"``."""
        if not 0 <= n <= self.fock_cutoff:
            raise ValueError(f"Fock level {n} outside 0..{self.fock_cutoff}")
        return _QUBIT_INDEX[qubit] * self.fock_dim + n


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense complex matrix tagged with the space it acts on."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise DimensionError(f"matrix shape {m.shape} does not match total_dim {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "Operator") -> None:
        if self.space != other.space:
            raise DimensionError(f"space mismatch: {self.space} vs {other.space}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, scalar * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.hermiticity_error() <= atol

    def allclose(self, other: "Operator", atol: float = 1e-14) -> bool:
        self._check(other)
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two dense matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def annihilation(n_cutoff: int) -> np.ndarray:
    """Truncated bosonic lowering operator on ``|0>..|N>``: ``a|n> = sqrt(n)|n-1>``."""
    if int(n_cutoff) != n_cutoff or n_cutoff < 1:
        raise ValueError(f"Fock cutoff must be an integer >= 1, got {n_cutoff!r}")
    return np.diag(np.sqrt(np.arange(1, n_cutoff + 1, dtype=float)), 1).astype(complex)


def sigma_z() -> np.ndarray:
    return np.diag([1.0, -1.0]).astype(complex)


def sigma_plus() -> np.ndarray:
    m = np.zeros((2, 2), dtype=complex)
    m[EXCITED, GROUND] = 1.0
    return m


def sigma_minus() -> np.ndarray:
    return sigma_plus().T.copy()


def qubit_op(space: HilbertSpace, m) -> Operator:
    """Embed a 2x2 qubit matrix as ``m ⊗ I``."""
    return Operator(space, kron(m, np.eye(space.fock_dim)))


def mode_op(space: HilbertSpace, m) -> Operator:
    """Embed an (N+1)x(N+1) resonator matrix as ``I ⊗ m``."""
    return Operator(space, kron(np.eye(QUBIT_DIM), m))


def identity(space: HilbertSpace) -> Operator:
    return Operator(space, np.eye(space.total_dim))


def destroy(space: HilbertSpace) -> Operator:
    return mode_op(space, annihilation(space.fock_cutoff))


def number(space: HilbertSpace) -> Operator:
    # exact integers; b†b built from sqrt(n) entries carries rounding
    return mode_op(space, np.diag(np.arange(space.fock_dim, dtype=float)))


def sz(space: HilbertSpace) -> Operator:
    return qubit_op(space, sigma_z())


def sp(space: HilbertSpace) -> Operator:
    return qubit_op(space, sigma_plus())


def sm(space: HilbertSpace) -> Operator:
    return qubit_op(space, sigma_minus())


def basis_ket(space: HilbertSpace, qubit: str, n: int) -> np.ndarray:
    v = np.zeros(space.total_dim, dtype=complex)
    v[space.index(qubit, n)] = 1.0
    return v


def projector(space: HilbertSpace, qubit: str, n: int) -> Operator:
    v = basis_ket(space, qubit, n)
    return Operator(space, np.outer(v, v.conj()))


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def expectation(rho, op: Operator, atol: float = 1e-9) -> complex:
    """``Tr(rho op)`` for a density matrix given as an array or an object with ``.matrix``."""
    r = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    if r.shape != op.matrix.shape:
        raise DimensionError(f"rho shape {r.shape} does not match operator {op.matrix.shape}")
    if np.max(np.abs(r - r.conj().T)) > atol:
        raise ValueError("rho is not hermitian")
    if abs(np.trace(r) - 1.0) > atol:
        raise ValueError(f"rho has trace {np.trace(r)}, expected 1")
    # Tr(AB) = sum_ij A_ij B_ji
    return complex(np.sum(r * op.matrix.T))
