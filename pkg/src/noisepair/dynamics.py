"""Time evolution and steady states of the two-atom models.

Two genuinely independent engines live here.  The closed-form expressions
(`analytic_state_symmetric`, `analytic_steady_asymmetric`) are literal
transcriptions of the solved master equations; the numeric engine
(`propagate`, `trajectory`, `numeric_steady`) works for any generator via
the matrix exponential and the superoperator kernel.  The two routes
cross-validate each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numkit
from .model import EffectiveParams, Liouvillian, unvec, vec

TRACE_ATOL = 1e-10
HERM_ATOL = 1e-10
STATE_EIG_FLOOR = -1e-9    # smallest eigenvalue tolerated in a valid state
PROP_EIG_FLOOR = -1e-8     # beyond this, propagation is considered broken


class StateError(ValueError):
    """Input violates the density-matrix invariants."""


class ModeError(ValueError):
    """Closed-form solution requested outside its parameter regime."""


class DegenerateSteadyStateError(ValueError):
    """The closed-form steady state is undefined (vanishing denominator)."""


class PropagationError(RuntimeError):
    """Numeric evolution lost trace or positivity beyond tolerance."""


def validate_density(rho, dim: int | None = None) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the array.

    Raises :class:`StateError` on any violation.
    """
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise StateError(f"density matrix must be square, got shape {r.shape}")
    if dim is not None and r.shape[0] != dim:
        raise StateError(f"expected a {dim}x{dim} density matrix, got {r.shape}")
    if not np.all(np.isfinite(r)):
        raise StateError("density matrix contains non-finite entries")
    if np.max(np.abs(r - r.conj().T)) > HERM_ATOL:
        raise StateError("density matrix is not Hermitian within 1e-10 per entry")
    if abs(np.trace(r) - 1.0) > TRACE_ATOL:
        raise StateError(f"trace {np.trace(r):.12g} differs from 1 beyond 1e-10")
    w = numkit.herm_eigs((r + r.conj().T) / 2.0).eigenvalues
    if w[0] < STATE_EIG_FLOOR:
        raise StateError(f"negative eigenvalue {w[0]:.3e} below {STATE_EIG_FLOOR:g}")
    return r


@dataclass(frozen=True)
class Trajectory:
    """States sampled along an ascending time grid."""

    times: np.ndarray
    states: np.ndarray     # shape (len(times), dim, dim)


def analytic_state_symmetric(p: EffectiveParams, t: float) -> np.ndarray:
    """Closed-form state of the equal-drive model at time t, starting from |10>.

    Only the four populations and the |10><01| coherence are ever nonzero.
    Populations relax with exponents (4 n_t + 2) gamma and (8 n_t + 4) gamma
    while the coherence oscillates at twice the flip-flop rate.
    """
    if not p.is_symmetric:
        raise ModeError("closed-form evolution requires equal drives on both atoms and eta == 0")
    t = float(t)
    if t < 0.0 or not math.isfinite(t):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    n = p.n_t[0]
    g = p.gamma[0]
    q = (2.0 * n + 1.0) ** 2
    e1 = math.exp(-(4.0 * n + 2.0) * g * t)
    e2 = math.exp(-(8.0 * n + 4.0) * g * t)
    c = math.cos(2.0 * p.omega_eff * t)
    s = math.sin(2.0 * p.omega_eff * t)

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = n * (n + e1 - (n + 1.0) * e2) / q
    rho[1, 1] = (n * n + n) * (1.0 + e2) / q + 0.5 * (1.0 / q + c) * e1
    rho[2, 2] = (n * n + n) * (1.0 + e2) / q + 0.5 * (1.0 / q - c) * e1
    rho[3, 3] = (n + 1.0) * (n + 1.0 - e1 - n * e2) / q
    rho[1, 2] = 0.5j * e1 * s
    rho[2, 1] = -0.5j * e1 * s
    return rho


def analytic_steady_asymmetric(p: EffectiveParams) -> np.ndarray:
    """Closed-form steady state of the single-drive model.

    Valid when only atom 1 is thermally driven (gamma[1] == 0).  The trace
    is 1 identically; the only coherence is i * n_t * omega * gamma * eta
    over its normalization, between |10> and |01>.
    """
    if not p.is_single_drive:
        raise ModeError("closed-form steady state requires gamma[1] == 0 (only atom 1 driven)")
    n = p.n_t[0]
    g = p.gamma[0]
    w = p.omega_eff
    eta = p.eta

    den1 = g + eta + 2.0 * n * g
    dd = w * w + g * eta + 2.0 * n * g * eta
    if dd == 0.0 or den1 == 0.0:
        raise DegenerateSteadyStateError(
            "steady state undefined: no dissipation selects a unique state "
            f"(omega_eff={w!r}, gamma={g!r}, eta={eta!r})"
        )
    d2 = den1 * den1
    mid = g + eta + n * g

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = w * w * g * g * n * n / (d2 * dd)
    rho[1, 1] = n * g * (eta * d2 + w * w * mid) / (d2 * dd)
    rho[2, 2] = w * w * n * g * mid / (d2 * dd)
    rho[3, 3] = (g * eta * (1.0 + n) * d2 + w * w * mid * mid) / (d2 * dd)
    rho[1, 2] = 1.0j * n * w * g * eta / (den1 * dd)
    rho[2, 1] = -1.0j * n * w * g * eta / (den1 * dd)
    return rho


def _finish_state(out: np.ndarray, expected_trace: complex) -> np.ndarray:
    tr = np.trace(out)
    if abs(tr - expected_trace) > TRACE_ATOL:
        raise PropagationError(f"trace drifted to {tr:.12g} (expected {expected_trace:.12g})")
    out = (out + out.conj().T) / 2.0
    w_min = numkit.herm_eigs(out).eigenvalues[0]
    if w_min < PROP_EIG_FLOOR:
        raise PropagationError(f"eigenvalue {w_min:.3e} below {PROP_EIG_FLOOR:g}; generator is not CP")
    return out


def propagate(liouv: Liouvillian, rho0, t: float) -> np.ndarray:
    """Evolve rho0 for a time t >= 0 via the exact propagator exp(L t)."""
    t = float(t)
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t!r}")
    r0 = np.asarray(rho0, dtype=complex)
    if r0.shape != (liouv.dim, liouv.dim):
        raise ValueError(f"state shape {r0.shape} does not match dimension {liouv.dim}")
    out = unvec(numkit.expm(liouv.matrix, t) @ vec(r0), liouv.dim)
    return _finish_state(out, np.trace(r0))


def trajectory(liouv: Liouvillian, rho0, t_grid) -> Trajectory:
    """Sample the evolution on an ascending grid, stepping incrementally.

    One propagator per distinct grid spacing is built and reused, so uniform
    grids cost a single matrix exponential.
    """
    ts = np.asarray(t_grid, dtype=float).reshape(-1)
    if ts.size == 0:
        raise ValueError("time grid is empty")
    if ts[0] < 0.0:
        raise ValueError(f"time grid must start at >= 0, got {ts[0]!r}")
    if np.any(np.diff(ts) < 0.0):
        raise ValueError("time grid must be ascending")
    r0 = np.asarray(rho0, dtype=complex)
    if r0.shape != (liouv.dim, liouv.dim):
        raise ValueError(f"state shape {r0.shape} does not match dimension {liouv.dim}")

    expected_trace = np.trace(r0)
    propagators: dict[float, np.ndarray] = {}
    states = np.empty((ts.size, liouv.dim, liouv.dim), dtype=complex)
    x = vec(r0)
    prev = 0.0
    for i, t in enumerate(ts):
        dt = float(t - prev)
        step = propagators.get(dt)
        if step is None:
            step = numkit.expm(liouv.matrix, dt)
            propagators[dt] = step
        x = step @ x
        states[i] = _finish_state(unvec(x, liouv.dim), expected_trace)
        prev = float(t)
    return Trajectory(ts, states)


def numeric_steady(liouv: Liouvillian) -> np.ndarray:
    """Steady state from the one-dimensional kernel of the generator.

    Raises :class:`numkit.AmbiguousKernelError` when the kernel is degenerate
    (e.g. fully decoupled sectors) and :class:`StateError` when the kernel
    vector is not a physical state.
    """
    trace_row = vec(np.eye(liouv.dim)).conj()
    x = numkit.null_vector(liouv.matrix, trace_row, 1.0)
    rho = unvec(x, liouv.dim)
    rho = (rho + rho.conj().T) / 2.0
    w_min = numkit.herm_eigs(rho).eigenvalues[0]
    if w_min < STATE_EIG_FLOOR:
        raise StateError(f"steady-state kernel has eigenvalue {w_min:.3e} below {STATE_EIG_FLOOR:g}")
    return rho
