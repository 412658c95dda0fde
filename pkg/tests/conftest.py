"""Shared fixtures and random-state helpers.

All randomized checks use fixed seeds so failures reproduce exactly:
SEED (general sampling) and per-test offsets derived from it.
"""

import numpy as np
import pytest

SEED = 20260809


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_density(rng, dim=4):
    """Normalized G G^dag for complex Gaussian G: a generic full-rank state."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim=2):
    """Haar-ish unitary from the QR decomposition of a complex Gaussian."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_x_state(rng):
    """Random state supported on the diagonal plus the |10><01| coherence."""
    pops = rng.uniform(0.05, 1.0, size=4)
    pops = pops / pops.sum()
    # keep the 2x2 inner block PSD: |c| <= sqrt(p2 p3)
    mag = rng.uniform(0.0, 1.0) * np.sqrt(pops[1] * pops[2])
    phase = np.exp(2j * np.pi * rng.uniform())
    rho = np.diag(pops).astype(complex)
    rho[1, 2] = mag * phase
    rho[2, 1] = np.conj(rho[1, 2])
    return rho
