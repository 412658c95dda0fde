"""Entanglement and nonlocality functionals for two-qubit states.

Concurrence follows the spin-flip construction: the square roots of the
eigenvalues of sqrt(rho) * rho_tilde * sqrt(rho), with rho_tilde =
(sigma_y kron sigma_y) conj(rho) (sigma_y kron sigma_y).  That Hermitian
product shares its spectrum with the usual non-Hermitian rho * rho_tilde,
so only Hermitian machinery is needed.

The maximal CHSH expectation of a state is 2*sqrt(l1 + l2) with l1, l2 the
two largest eigenvalues of T T^dag, where T is the 3x3 Pauli correlation
matrix T[n, m] = Tr(rho sigma_n kron sigma_m).

States produced by the two-atom dynamics carry coherence only between
|10> and |01>; for that family both functionals reduce to short closed
forms (`concurrence_x`, `bell_max_xform`) used as fast paths and as
independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numkit
from .dynamics import StateError, validate_density
from .model import SIGMA_X, SIGMA_Y, SIGMA_Z

X_ATOL = 1e-10             # weight allowed outside the diagonal + inner coherence
SPINFLIP_EIG_FLOOR = -1e-12

SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)
# Transposed Pauli products, so that Tr(rho sigma_n kron sigma_m) = sum(rho * _PAULI_PAIRS_T[n, m]).
_PAULI_PAIRS_T = np.array([[np.kron(sn, sm).T for sm in PAULI] for sn in PAULI])
_X_MASK = np.ones((4, 4), dtype=bool)
for _i in range(4):
    _X_MASK[_i, _i] = False
_X_MASK[1, 2] = _X_MASK[2, 1] = False

MAX_BELL = 2.0 * math.sqrt(2.0)


class NotXStateError(StateError):
    """State has weight outside the diagonal and the |10><01| coherence."""


def spin_flipped(rho) -> np.ndarray:
    """(sigma_y kron sigma_y) conj(rho) (sigma_y kron sigma_y)."""
    r = np.asarray(rho, dtype=complex)
    return SPIN_FLIP @ r.conj() @ SPIN_FLIP


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix, in [0, 1]."""
    r = validate_density(rho, dim=4)
    s = numkit.herm_sqrt(r)
    w = numkit.herm_eigs(s @ spin_flipped(r) @ s).eigenvalues
    if w[0] < SPINFLIP_EIG_FLOOR:
        raise StateError(f"spin-flip spectrum has eigenvalue {w[0]:.3e} beyond round-off")
    lam = np.sqrt(np.where(w < 0.0, 0.0, w))[::-1]
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def _require_x(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise StateError(f"expected a 4x4 state, got shape {r.shape}")
    worst = np.max(np.abs(r[_X_MASK]))
    if worst > X_ATOL:
        raise NotXStateError(f"off-family weight {worst:.3e} exceeds {X_ATOL:g}")
    return r


def concurrence_x(rho) -> float:
    """Concurrence of a diagonal + inner-coherence state: 2*max(0, |rho_23| - sqrt(rho_11 rho_44))."""
    r = _require_x(rho)
    p11 = r[0, 0].real
    p44 = r[3, 3].real
    return float(2.0 * max(0.0, abs(r[1, 2]) - math.sqrt(max(p11 * p44, 0.0))))


def correlation_matrix(rho) -> np.ndarray:
    """3x3 Pauli correlation matrix T[n, m] = Tr(rho sigma_n kron sigma_m)."""
    r = validate_density(rho, dim=4)
    t = np.einsum("nmij,ij->nm", _PAULI_PAIRS_T, r)
    if np.max(np.abs(t.imag)) > 1e-10:
        raise StateError(f"correlation matrix has imaginary residue {np.max(np.abs(t.imag)):.3e}")
    return t.real


def bell_max(rho) -> float:
    """Maximal CHSH expectation over all measurement settings; > 2 means violation."""
    t = correlation_matrix(rho)
    w = numkit.herm_eigs(t @ t.T).eigenvalues
    pair = max(w[-1] + w[-2], 0.0)
    return float(2.0 * math.sqrt(pair))


def bell_max_xform(rho) -> float:
    """Closed-form `bell_max` for diagonal + inner-coherence states."""
    r = _require_x(rho)
    c2 = 4.0 * abs(r[1, 2]) ** 2
    d = (r[0, 0] + r[3, 3] - r[1, 1] - r[2, 2]).real
    return float(2.0 * math.sqrt(c2 + max(c2, d * d)))


def _check_rates(**rates: float) -> None:
    for name, value in rates.items():
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


def omega_threshold(gamma: float, eta: float, n_t: float) -> float | None:
    """Largest flip-flop rate with an entangled steady state, or None if no window.

    (gamma + eta + 2 n_t gamma) * sqrt(eta^2 - gamma*eta - n_t*gamma*eta)
    / (gamma + eta + n_t gamma), defined while the radicand is nonnegative.
    A relative round-off guard keeps the exact closing point (radicand 0,
    threshold 0) on the defined side.
    """
    _check_rates(gamma=gamma, eta=eta, n_t=n_t)
    rad = eta * eta - gamma * eta - n_t * gamma * eta
    guard = 1e-12 * (eta * eta + gamma * eta + n_t * gamma * eta)
    if rad < -guard:
        return None
    den = gamma + eta + n_t * gamma
    if den == 0.0:
        return None
    return (gamma + eta + 2.0 * n_t * gamma) * math.sqrt(max(rad, 0.0)) / den


def nt_threshold(gamma: float, eta: float) -> float:
    """Noise intensity above which the steady state is separable: eta/gamma - 1.

    Negative values mean the entangled window is empty at any noise level.
    """
    _check_rates(gamma=gamma, eta=eta)
    if gamma == 0.0:
        raise ValueError("gamma must be > 0 for a noise-intensity threshold")
    return eta / gamma - 1.0


def verstraete_bounds(c: float) -> tuple[float, float | None]:
    """CHSH bounds at fixed concurrence: upper 2*sqrt(1+c^2); lower 2*sqrt(2)*c for c > sqrt(2)/2."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"concurrence must lie in [0, 1], got {c!r}")
    upper = 2.0 * math.sqrt(1.0 + c * c)
    lower = 2.0 * math.sqrt(2.0) * c if c > math.sqrt(2.0) / 2.0 else None
    return upper, lower


@dataclass(frozen=True)
class MeasureReport:
    """Entanglement/nonlocality summary of one state."""

    concurrence: float
    bell_max: float
    lambdas: np.ndarray    # descending spin-flip square-rooted eigenvalues
    t_matrix: np.ndarray   # 3x3 Pauli correlation matrix
    tt_eigs: np.ndarray    # descending eigenvalues of T T^dag


def measure_state(rho) -> MeasureReport:
    """Evaluate concurrence, maximal CHSH value and their diagnostics."""
    r = validate_density(rho, dim=4)

    s = numkit.herm_sqrt(r)
    w = numkit.herm_eigs(s @ spin_flipped(r) @ s).eigenvalues
    if w[0] < SPINFLIP_EIG_FLOOR:
        raise StateError(f"spin-flip spectrum has eigenvalue {w[0]:.3e} beyond round-off")
    lam = np.sqrt(np.where(w < 0.0, 0.0, w))[::-1]

    t = correlation_matrix(r)
    tt = numkit.herm_eigs(t @ t.T).eigenvalues[::-1]
    tt = np.where(tt < 0.0, 0.0, tt)

    return MeasureReport(
        concurrence=float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0)),
        bell_max=float(2.0 * math.sqrt(tt[0] + tt[1])),
        lambdas=lam,
        t_matrix=t,
        tt_eigs=tt,
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Entanglement-window summary for one parameter point of the single-drive model."""

    omega_c: float | None
    n_tc: float | None
    entangled: bool


def threshold_report(gamma: float, eta: float, n_t: float, omega: float) -> ThresholdReport:
    """Evaluate the entangled-region predicate 0 < omega < omega_c and 0 < n_t < n_tc."""
    _check_rates(gamma=gamma, eta=eta, n_t=n_t, omega=omega)
    n_tc = eta / gamma - 1.0 if gamma > 0.0 else None
    omega_c = omega_threshold(gamma, eta, n_t)
    entangled = (
        omega_c is not None
        and n_tc is not None
        and 0.0 < omega < omega_c
        and 0.0 < n_t < n_tc
    )
    return ThresholdReport(omega_c=omega_c, n_tc=n_tc, entangled=bool(entangled))
