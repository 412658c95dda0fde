"""Tests for the analytic and numeric evolution engines and their cross-checks."""

import math

import numpy as np
import pytest

from noisepair import numkit
from noisepair.dynamics import (
    DegenerateSteadyStateError,
    ModeError,
    PropagationError,
    StateError,
    analytic_state_symmetric,
    analytic_steady_asymmetric,
    numeric_steady,
    propagate,
    trajectory,
    validate_density,
)
from noisepair.model import (
    LOWER,
    EffectiveParams,
    Liouvillian,
    build_effective_liouvillian,
    dissipator,
    product_state,
)

from test_numkit import STEADY_FROZEN

X_POSITIONS = {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)}

EQUAL_DRIVE = EffectiveParams.symmetric(0.2, 0.01, 0.0)
ASYM = EffectiveParams.single_drive(0.2, 0.1, 2.0, 0.5)


# ---------------------------------------------------------------------------
# validate_density
# ---------------------------------------------------------------------------


def test_validate_density_accepts_valid(rng):
    from conftest import random_density

    validate_density(random_density(rng))


def test_validate_density_rejects_bad_trace():
    with pytest.raises(StateError, match="trace"):
        validate_density(np.eye(4) / 2.0)


def test_validate_density_rejects_non_hermitian():
    rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    rho[0, 1] = 1e-3
    with pytest.raises(StateError, match="Hermitian"):
        validate_density(rho)


def test_validate_density_rejects_negative_eigenvalue():
    rho = np.diag([1.1, -0.1, 0.0, 0.0])
    with pytest.raises(StateError, match="eigenvalue"):
        validate_density(rho)


# ---------------------------------------------------------------------------
# closed-form evolution (equal drives, |10> start)
# ---------------------------------------------------------------------------


def test_analytic_state_initial_projector():
    for nt, gamma, omega in ((0.0, 0.01, 0.2), (1.0, 0.1, 0.5), (2.5, 0.3, 0.0)):
        rho = analytic_state_symmetric(EffectiveParams.symmetric(omega, gamma, nt), 0.0)
        assert np.max(np.abs(rho - product_state("10"))) <= 1e-12


def test_analytic_state_quarter_period_coherence():
    # at 2*omega*t = pi/2 the coherence is i/2 times the decay envelope
    t = math.pi / (4.0 * 0.2)
    rho = analytic_state_symmetric(EQUAL_DRIVE, t)
    expected = 0.5 * math.exp(-2.0 * 0.01 * t)
    assert abs(expected - 0.4622326251881279) <= 1e-12
    assert abs(rho[1, 2] - 1j * expected) <= 1e-12
    assert abs(rho[1, 2] - 0.4622j) <= 1e-4
    assert rho[0, 0] == 0.0


def test_analytic_state_long_time_limit():
    rho = analytic_state_symmetric(EffectiveParams.symmetric(0.2, 0.01, 1.0), 1e6)
    assert np.max(np.abs(rho - np.diag([1, 2, 2, 4]) / 9.0)) <= 1e-12


def test_analytic_state_invariants_hold():
    for nt in (0.0, 0.3, 1.0):
        p = EffectiveParams.symmetric(0.2, 0.01, nt)
        for t in np.linspace(0.0, 200.0, 41):
            rho = analytic_state_symmetric(p, t)
            assert abs(np.trace(rho) - 1.0) <= 1e-12
            validate_density(rho)


def test_analytic_state_rejects_asymmetric():
    with pytest.raises(ModeError):
        analytic_state_symmetric(ASYM, 1.0)


def test_analytic_state_rejects_negative_time():
    with pytest.raises(ValueError):
        analytic_state_symmetric(EQUAL_DRIVE, -1.0)


# ---------------------------------------------------------------------------
# closed-form steady state (single drive)
# ---------------------------------------------------------------------------


def test_steady_zero_noise_is_ground_state():
    rho = analytic_steady_asymmetric(EffectiveParams.single_drive(0.2, 0.1, 0.0, 0.5))
    assert np.max(np.abs(rho - product_state("00"))) <= 1e-15


def test_steady_matches_direct_substitution():
    rho = analytic_steady_asymmetric(ASYM)
    assert np.max(np.abs(rho - STEADY_FROZEN)) <= 1e-15
    assert abs(np.trace(rho) - 1.0) <= 1e-12


def test_steady_matches_numeric_kernel():
    for omega, gamma, nt, eta in (
        (0.2, 0.1, 2.0, 0.5),
        (0.5, 0.01, 4.0, 1.5),
        (0.2, 0.1, 1.0, 0.0),    # eta = 0 handled as a limit
        (0.0, 0.1, 2.0, 0.5),    # omega = 0
    ):
        p = EffectiveParams.single_drive(omega, gamma, nt, eta)
        rho_cf = analytic_steady_asymmetric(p)
        rho_nk = numeric_steady(build_effective_liouvillian(p))
        assert np.max(np.abs(rho_cf - rho_nk)) <= 1e-9


def test_steady_rejects_symmetric_mode():
    with pytest.raises(ModeError):
        analytic_steady_asymmetric(EffectiveParams.symmetric(0.2, 0.1, 1.0))


def test_steady_degenerate_error():
    with pytest.raises(DegenerateSteadyStateError):
        analytic_steady_asymmetric(EffectiveParams.single_drive(0.0, 0.1, 2.0, 0.0))
    with pytest.raises(DegenerateSteadyStateError):
        analytic_steady_asymmetric(EffectiveParams.single_drive(0.3, 0.0, 1.0, 0.0))


# ---------------------------------------------------------------------------
# numeric propagation
# ---------------------------------------------------------------------------


def test_propagate_zero_time():
    rho0 = product_state("10")
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    assert np.max(np.abs(propagate(liouv, rho0, 0.0) - rho0)) <= 1e-14


def test_propagate_zero_generator():
    rho0 = product_state("01")
    liouv = Liouvillian(4, np.zeros((16, 16), dtype=complex))
    assert np.max(np.abs(propagate(liouv, rho0, 7.0) - rho0)) <= 1e-14


def test_propagate_matches_analytic():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    rho = propagate(liouv, product_state("10"), 10.0)
    assert np.max(np.abs(rho - analytic_state_symmetric(EQUAL_DRIVE, 10.0))) <= 1e-8


def test_propagate_semigroup(rng):
    from conftest import random_density

    liouv = build_effective_liouvillian(ASYM)
    rho0 = random_density(rng)
    two_steps = propagate(liouv, propagate(liouv, rho0, 3.0), 4.5)
    one_shot = propagate(liouv, rho0, 7.5)
    assert np.max(np.abs(two_steps - one_shot)) <= 1e-9


def test_propagate_rejects_negative_time():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    with pytest.raises(ValueError):
        propagate(liouv, product_state("10"), -1.0)


def test_propagate_flags_positivity_violation():
    # time-reversed decay is trace preserving but not completely positive
    bad = Liouvillian(2, -dissipator(LOWER, 0.5).matrix)
    with pytest.raises(PropagationError):
        propagate(bad, np.diag([1.0, 0.0]).astype(complex), 5.0)


# ---------------------------------------------------------------------------
# trajectory
# ---------------------------------------------------------------------------


def test_trajectory_singleton_grid():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    traj = trajectory(liouv, product_state("10"), [0.0])
    assert traj.states.shape == (1, 4, 4)
    assert np.max(np.abs(traj.states[0] - product_state("10"))) <= 1e-14


def test_trajectory_repeated_times():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    traj = trajectory(liouv, product_state("10"), [2.0, 2.0])
    assert np.max(np.abs(traj.states[0] - traj.states[1])) <= 1e-12


def test_trajectory_matches_analytic_pointwise():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    ts = np.arange(0.0, 100.5, 0.5)
    traj = trajectory(liouv, product_state("10"), ts)
    for i, t in enumerate(ts):
        assert np.max(np.abs(traj.states[i] - analytic_state_symmetric(EQUAL_DRIVE, t))) <= 1e-8


def test_trajectory_endpoint_matches_single_shot():
    liouv = build_effective_liouvillian(ASYM)
    ts = np.linspace(0.0, 30.0, 97)
    traj = trajectory(liouv, product_state("10"), ts)
    assert np.max(np.abs(traj.states[-1] - propagate(liouv, product_state("10"), 30.0))) <= 1e-8


def test_trajectory_rejects_bad_grids():
    liouv = build_effective_liouvillian(EQUAL_DRIVE)
    with pytest.raises(ValueError):
        trajectory(liouv, product_state("10"), [])
    with pytest.raises(ValueError):
        trajectory(liouv, product_state("10"), [1.0, 0.5])
    with pytest.raises(ValueError):
        trajectory(liouv, product_state("10"), [-1.0, 1.0])


# ---------------------------------------------------------------------------
# numeric steady state
# ---------------------------------------------------------------------------


def test_numeric_steady_matches_frozen():
    rho = numeric_steady(build_effective_liouvillian(ASYM))
    assert np.max(np.abs(rho - STEADY_FROZEN)) <= 1e-9


def test_numeric_steady_symmetric_long_time_limit():
    rho = numeric_steady(build_effective_liouvillian(EffectiveParams.symmetric(0.2, 0.1, 1.0)))
    assert np.max(np.abs(rho - np.diag([1, 2, 2, 4]) / 9.0)) <= 1e-10


def test_numeric_steady_decoupled_sector_is_ambiguous():
    # atom 2 carries no channel at all: its state is arbitrary in the kernel
    p = EffectiveParams(0.0, (0.1, 0.0), (0.0, 0.0), eta=0.0)
    with pytest.raises(numkit.AmbiguousKernelError):
        numeric_steady(build_effective_liouvillian(p))


def test_numeric_steady_decoupled_sector_with_eta_unique():
    p = EffectiveParams(0.0, (0.1, 0.0), (0.0, 0.0), eta=0.5)
    rho = numeric_steady(build_effective_liouvillian(p))
    assert np.max(np.abs(rho - product_state("00"))) <= 1e-10


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------


def test_long_time_convergence_to_steady():
    liouv = build_effective_liouvillian(ASYM)
    gap = min(
        abs(x) for x in np.real(np.linalg.eigvals(liouv.matrix)) if abs(x) > 1e-8
    )
    t_relax = 50.0 / gap
    final = propagate(liouv, product_state("10"), t_relax)
    assert np.max(np.abs(final - numeric_steady(liouv))) <= 1e-6


@pytest.mark.parametrize("initial", ["00", "10", "01"])
def test_coherence_structure_preserved(initial):
    liouv = build_effective_liouvillian(ASYM)
    traj = trajectory(liouv, product_state(initial), np.linspace(0.0, 40.0, 41))
    for state in traj.states:
        for i in range(4):
            for j in range(4):
                if (i, j) not in X_POSITIONS:
                    assert abs(state[i, j]) <= 1e-12
