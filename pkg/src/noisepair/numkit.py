"""Dense complex linear-algebra helpers for small open-system problems.

Everything operates on plain ``numpy`` complex arrays.  Matrices stay dense;
the intended sizes are 4x4 two-qubit states and superoperators up to a few
hundred rows, so no sparse formats and no cleverness beyond what LAPACK
already does well.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

# Tolerances separating round-off from genuine violations.
HERMITICITY_ATOL = 1e-10   # max per-entry asymmetry accepted as "Hermitian"
PSD_REJECT = -1e-8         # eigenvalues below this mean a genuinely indefinite input
KERNEL_RTOL = 1e-10        # singular values below rtol * s_max count as kernel


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite is genuinely indefinite."""


class NoKernelError(RuntimeError):
    """The matrix has no null space within tolerance."""


class AmbiguousKernelError(RuntimeError):
    """The null space has dimension > 1, so a constrained kernel vector is not unique."""

    def __init__(self, kernel_dim: int, singular_values: np.ndarray):
        self.kernel_dim = kernel_dim
        self.singular_values = np.asarray(singular_values)
        super().__init__(
            f"kernel dimension {kernel_dim} > 1; "
            f"smallest singular values: {self.singular_values[-min(4, len(self.singular_values)):]}"
        )


class HermEig(NamedTuple):
    """Hermitian eigendecomposition: ascending eigenvalues, unitary column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def herm_eigs(h) -> HermEig:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (H + H^dag)/2 before the solve; inputs that
    deviate from Hermiticity by more than ``HERMITICITY_ATOL`` per entry are
    rejected.
    """
    a = _as_square(h)
    if np.max(np.abs(a - a.conj().T)) > HERMITICITY_ATOL:
        raise ValueError("matrix is not Hermitian within 1e-10 per entry")
    a = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(a)
    return HermEig(w, v)


def herm_sqrt(h) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [PSD_REJECT, 0) are clamped to zero (round-off);
    anything below PSD_REJECT raises :class:`NotPSDError`.
    """
    w, v = herm_eigs(h)
    if w[0] < PSD_REJECT:
        raise NotPSDError(f"eigenvalue {w[0]:.3e} below {PSD_REJECT:g}; input is not PSD")
    w = np.where(w < 0.0, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def expm(m, s: float = 1.0) -> np.ndarray:
    """Matrix exponential exp(m*s), scaling-and-squaring with a Pade kernel."""
    a = _as_square(m)
    s = float(s)
    if not np.isfinite(s):
        raise ValueError("scale must be finite")
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(a * s)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed; ||m*s|| is too extreme")
    return out


def null_vector(m, constraint, target) -> np.ndarray:
    """Kernel vector of ``m`` normalized so that ``constraint @ x == target``.

    The kernel must be one-dimensional (checked via the singular spectrum);
    the vector is obtained from the bordered system [m; constraint] x =
    [0; target] in the least-squares sense, then rescaled so the constraint
    holds exactly.

    Raises :class:`NoKernelError` when no singular value is small enough,
    :class:`AmbiguousKernelError` when more than one is.
    """
    a = _as_square(m)
    c = np.asarray(constraint, dtype=complex).reshape(-1)
    if c.size != a.shape[1]:
        raise ValueError(f"constraint length {c.size} != matrix dimension {a.shape[1]}")

    _, sv, vh = np.linalg.svd(a)
    s_max = sv[0]
    kernel_dim = int(np.count_nonzero(sv <= KERNEL_RTOL * s_max))
    if kernel_dim == 0:
        raise NoKernelError(f"no kernel within tolerance; smallest singular value {sv[-1]:.3e}")
    if kernel_dim > 1:
        raise AmbiguousKernelError(kernel_dim, sv)
    kernel_vec = vh[-1].conj()
    if abs(c @ kernel_vec) <= 1e-12 * np.linalg.norm(c):
        raise ValueError("constraint is degenerate on the kernel")

    bordered = np.vstack([a, c[None, :]])
    rhs = np.zeros(a.shape[0] + 1, dtype=complex)
    rhs[-1] = target
    x = np.linalg.lstsq(bordered, rhs, rcond=None)[0]
    x = x * (target / (c @ x))

    residual = np.linalg.norm(a @ x)
    scale = np.max(np.abs(a))
    if residual > 1e-10 * scale:
        raise NoKernelError(f"kernel residual {residual:.3e} exceeds 1e-10 * {scale:.3e}")
    return x
