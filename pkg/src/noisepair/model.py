"""Hamiltonians and Liouvillian superoperators for two atoms in a cavity.

Basis conventions, fixed once for the whole package:

* single atom: excited state ``|1>`` first, ground state ``|0>`` second;
* atom pair: index 0 = ``|11>``, 1 = ``|10>``, 2 = ``|01>``, 3 = ``|00>``,
  with atom 1 the left tensor factor;
* atoms + cavity: atoms are the left factor, cavity Fock states 0..n_max
  the right one, so the full dimension is 4*(n_max+1);
* vectorization is column-stacking, i.e. vec(A rho B) = (B^T kron A) vec(rho).

Two families of generators are built here: the reduced two-atom master
equation obtained after the cavity has been adiabatically eliminated (an
effective flip-flop coupling of strength ``omega_eff = g^2/detuning`` plus
independent thermal dissipators per atom), and the full atoms+cavity master
equation used to validate that elimination.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# Single-qubit operators in the (|1>, |0>) ordering.
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
LOWER = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # |0><1|
RAISE = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |1><0|
EXCITED_PROJ = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

# Indices of the two-atom standard basis.
KET_11, KET_10, KET_01, KET_00 = 0, 1, 2, 3
BASIS_LABELS = ("11", "10", "01", "00")


def vec(rho) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def atom_op(op, atom: int) -> np.ndarray:
    """Embed a single-qubit operator on atom 1 (left factor) or atom 2 (right)."""
    if atom == 1:
        return np.kron(op, I2)
    if atom == 2:
        return np.kron(I2, op)
    raise ValueError(f"atom index must be 1 or 2, got {atom}")


def product_state(label: str) -> np.ndarray:
    """Projector onto one of the product basis states '11', '10', '01', '00'."""
    try:
        idx = BASIS_LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown basis label {label!r}; expected one of {BASIS_LABELS}") from None
    rho = np.zeros((4, 4), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def _check_rate_pair(value, name: str) -> tuple[float, float]:
    pair = tuple(float(x) for x in value)
    if len(pair) != 2:
        raise ValueError(f"{name} must hold one value per atom, got {value!r}")
    for x in pair:
        if not math.isfinite(x) or x < 0.0:
            raise ValueError(f"{name} entries must be finite and >= 0, got {value!r}")
    return pair


@dataclass(frozen=True)
class EffectiveParams:
    """Rates of the reduced two-atom master equation.

    omega_eff: cavity-mediated flip-flop rate g^2/detuning.
    gamma: thermal coupling strength, one entry per atom.
    n_t: effective photon number of the driving field, one entry per atom.
    eta: extra spontaneous-emission rate on atom 2 (single-drive scenario).
    """

    omega_eff: float
    gamma: tuple[float, float]
    n_t: tuple[float, float]
    eta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega_eff", float(self.omega_eff))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "gamma", _check_rate_pair(self.gamma, "gamma"))
        object.__setattr__(self, "n_t", _check_rate_pair(self.n_t, "n_t"))
        if not math.isfinite(self.omega_eff) or self.omega_eff < 0.0:
            raise ValueError(f"omega_eff must be finite and >= 0, got {self.omega_eff!r}")
        if not math.isfinite(self.eta) or self.eta < 0.0:
            raise ValueError(f"eta must be finite and >= 0, got {self.eta!r}")

    @classmethod
    def symmetric(cls, omega_eff: float, gamma: float, n_t: float) -> "EffectiveParams":
        """Both atoms driven with equal strength; no extra decay channel."""
        return cls(omega_eff, (gamma, gamma), (n_t, n_t), 0.0)

    @classmethod
    def single_drive(cls, omega_eff: float, gamma: float, n_t: float, eta: float) -> "EffectiveParams":
        """Only atom 1 sees the noise field; atom 2 decays spontaneously at rate eta."""
        return cls(omega_eff, (gamma, 0.0), (n_t, 0.0), eta)

    @property
    def is_symmetric(self) -> bool:
        return self.eta == 0.0 and self.gamma[0] == self.gamma[1] and self.n_t[0] == self.n_t[1]

    @property
    def is_single_drive(self) -> bool:
        return self.gamma[1] == 0.0


@dataclass(frozen=True)
class FullModelParams:
    """Parameters of the full atoms+cavity model.

    The cavity is kept explicitly (Fock cutoff ``n_max``); ``kappa`` is the
    cavity field-decay rate and the dispersive-regime quality is measured by
    ``detuning_ratio`` = (omega_atom - omega_cavity) / (g * sqrt(n_max + 1)).
    """

    omega_cavity: float
    omega_atom: float
    g: float
    kappa: float
    n_max: int
    gamma: tuple[float, float]
    n_t: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "gamma", _check_rate_pair(self.gamma, "gamma"))
        object.__setattr__(self, "n_t", _check_rate_pair(self.n_t, "n_t"))
        if int(self.n_max) < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa!r}")
        if self.g < 0.0:
            raise ValueError(f"g must be >= 0, got {self.g!r}")

    @property
    def detuning(self) -> float:
        return self.omega_atom - self.omega_cavity

    @property
    def dim(self) -> int:
        return 4 * (self.n_max + 1)

    def detuning_ratio(self) -> float:
        """detuning / (g * sqrt(n_max+1)); >= 10 is the dispersive-regime check."""
        if self.g == 0.0:
            return math.inf
        return self.detuning / (self.g * math.sqrt(self.n_max + 1))

    def check_detuning(self) -> float:
        ratio = self.detuning_ratio()
        if ratio < 10.0:
            warnings.warn(
                f"detuning ratio {ratio:.3g} < 10; adiabatic elimination may be inaccurate",
                stacklevel=2,
            )
        return ratio


@dataclass(frozen=True)
class Liouvillian:
    """Master-equation generator as a dim^2 x dim^2 matrix on vec(rho)."""

    dim: int
    matrix: np.ndarray

    def trace_residual(self) -> float:
        """max |vec(I)^dag L|; zero for a trace-preserving generator."""
        return float(np.max(np.abs(vec(np.eye(self.dim)).conj() @ self.matrix)))


def hamiltonian_superop(h) -> np.ndarray:
    """Superoperator matrix of the commutator part -i[h, .]."""
    h = np.asarray(h, dtype=complex)
    ident = np.eye(h.shape[0], dtype=complex)
    return -1.0j * (np.kron(ident, h) - np.kron(h.T, ident))


def dissipator(op, rate: float) -> Liouvillian:
    """Superoperator of rate * (2 A rho A^dag - A^dag A rho - rho A^dag A)."""
    if rate < 0.0:
        raise ValueError(f"dissipator rate must be >= 0, got {rate!r}")
    a = np.asarray(op, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"dissipator operator must be square, got shape {a.shape}")
    dim = a.shape[0]
    adag_a = a.conj().T @ a
    ident = np.eye(dim, dtype=complex)
    mat = rate * (
        2.0 * np.kron(a.conj(), a)
        - np.kron(ident, adag_a)
        - np.kron(adag_a.T, ident)
    )
    return Liouvillian(dim, mat)


def effective_hamiltonian(p: EffectiveParams) -> np.ndarray:
    """Dispersive two-atom Hamiltonian: Stark shifts plus the flip-flop coupling.

    omega_eff * (|1><1|_1 + |1><1|_2 + |10><01| + |01><10|) in the standard basis.
    """
    w = p.omega_eff
    h = w * (atom_op(EXCITED_PROJ, 1) + atom_op(EXCITED_PROJ, 2))
    h[KET_10, KET_01] += w
    h[KET_01, KET_10] += w
    return h


def build_effective_liouvillian(p: EffectiveParams) -> Liouvillian:
    """16x16 generator of the reduced two-atom master equation.

    Each atom j carries a downward channel at rate (n_t[j]+1)*gamma[j]
    (plus eta on atom 2) and an upward channel at rate n_t[j]*gamma[j].
    The symmetric and single-drive scenarios are both special cases.
    """
    mat = hamiltonian_superop(effective_hamiltonian(p))
    for atom in (1, 2):
        j = atom - 1
        down = (p.n_t[j] + 1.0) * p.gamma[j] + (p.eta if atom == 2 else 0.0)
        up = p.n_t[j] * p.gamma[j]
        mat = mat + dissipator(atom_op(LOWER, atom), down).matrix
        mat = mat + dissipator(atom_op(RAISE, atom), up).matrix
    return Liouvillian(4, mat)


def destroy(dim: int) -> np.ndarray:
    """Truncated annihilation operator on a dim-level Fock space."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def full_hamiltonian(p: FullModelParams) -> np.ndarray:
    """Atoms+cavity Hamiltonian on the 4*(n_max+1)-dimensional product space.

    omega_cavity * a^dag a + (omega_atom/2) * sum_j sigma_z^j
    + g * sum_j (a^dag |0><1|_j + a |1><0|_j).
    """
    nc = p.n_max + 1
    a = destroy(nc)
    ic = np.eye(nc, dtype=complex)
    h = p.omega_cavity * np.kron(I4, a.conj().T @ a)
    for atom in (1, 2):
        h = h + 0.5 * p.omega_atom * np.kron(atom_op(SIGMA_Z, atom), ic)
        h = h + p.g * (
            np.kron(atom_op(LOWER, atom), a.conj().T)
            + np.kron(atom_op(RAISE, atom), a)
        )
    return h


def total_excitation(n_max: int) -> np.ndarray:
    """a^dag a + sum_j |1><1|_j; commutes with the coupled Hamiltonian."""
    nc = n_max + 1
    a = destroy(nc)
    ic = np.eye(nc, dtype=complex)
    num = np.kron(I4, a.conj().T @ a)
    for atom in (1, 2):
        num = num + np.kron(atom_op(EXCITED_PROJ, atom), ic)
    return num


def build_full_liouvillian(p: FullModelParams) -> Liouvillian:
    """Generator of the full master equation: coherent part, cavity decay, thermal drives."""
    nc = p.n_max + 1
    ic = np.eye(nc, dtype=complex)
    mat = hamiltonian_superop(full_hamiltonian(p))
    mat = mat + dissipator(np.kron(I4, destroy(nc)), p.kappa).matrix
    for atom in (1, 2):
        j = atom - 1
        mat = mat + dissipator(np.kron(atom_op(LOWER, atom), ic), (p.n_t[j] + 1.0) * p.gamma[j]).matrix
        mat = mat + dissipator(np.kron(atom_op(RAISE, atom), ic), p.n_t[j] * p.gamma[j]).matrix
    return Liouvillian(4 * nc, mat)


def partial_trace_cavity(rho_full, n_max: int) -> np.ndarray:
    """Reduce an atoms+cavity state to the 4x4 two-atom state."""
    nc = n_max + 1
    r = np.asarray(rho_full, dtype=complex)
    if r.shape != (4 * nc, 4 * nc):
        raise ValueError(f"expected shape {(4 * nc, 4 * nc)}, got {r.shape}")
    return np.einsum("injn->ij", r.reshape(4, nc, 4, nc))


def atoms_with_vacuum(rho_atoms, n_max: int) -> np.ndarray:
    """Embed a two-atom state into the full space with the cavity in vacuum."""
    nc = n_max + 1
    vac = np.zeros((nc, nc), dtype=complex)
    vac[0, 0] = 1.0
    return np.kron(np.asarray(rho_atoms, dtype=complex), vac)


def atoms_rotating_frame(rho_atoms, omega_atom: float, t: float) -> np.ndarray:
    """Conjugate a two-atom state by exp(+i * omega_atom * t * sum_j sigma_z^j / 2).

    Maps lab-frame reduced states into the frame in which the dispersive
    two-atom model is written.  Diagonal entries and the |10><01| coherence
    are unaffected; only coherences between sectors of different total
    excitation pick up phases.
    """
    phase = np.exp(1.0j * omega_atom * t)
    u = np.diag([phase, 1.0, 1.0, np.conj(phase)])
    return u @ np.asarray(rho_atoms, dtype=complex) @ u.conj().T
