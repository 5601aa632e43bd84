import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unit_vectors
from splaylab.numkernel import DimensionError, ValidationError
from splaylab.states import (
    KET_MINUS,
    KET_PLUS,
    KET_X,
    KET_Y,
    DensityOperator,
    Ensemble,
    OutOfSphereError,
    Povm,
    angles_to_bloch,
    bloch_to_density,
    density_to_bloch,
    maximally_mixed,
    outcome_probabilities,
    pure_from_angles,
    pure_state,
    trine_povm,
    validate_povm,
)

SQ3 = math.sqrt(3)


def test_bloch_to_density_examples():
    np.testing.assert_allclose(bloch_to_density([0, 0, 0]).mat, np.eye(2) / 2)
    np.testing.assert_allclose(bloch_to_density([1, 0, 0]).mat, np.outer(KET_X, KET_X))


def test_bloch_round_trip_interior(rng):
    r = random_unit_vectors(rng, 1000) * rng.uniform(0, 1, size=(1000, 1)) ** (1 / 3)
    for v in r:
        assert np.max(np.abs(density_to_bloch(bloch_to_density(v)) - v)) <= 1e-12


def test_purity_iff_unit_length(rng):
    for v in random_unit_vectors(rng, 50):
        assert bloch_to_density(v).is_pure()
        assert not bloch_to_density(0.99 * v).is_pure()


def test_out_of_sphere_rejected():
    with pytest.raises(OutOfSphereError):
        bloch_to_density([1.0, 0.1, 0.0])
    bloch_to_density([1 + 5e-10, 0, 0])


def test_density_to_bloch_examples():
    np.testing.assert_allclose(density_to_bloch(maximally_mixed()), [0, 0, 0])
    np.testing.assert_allclose(density_to_bloch(pure_state(KET_Y)), [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(density_to_bloch(pure_state(KET_PLUS)), [-0.5, SQ3 / 2, 0], atol=1e-15)
    np.testing.assert_allclose(density_to_bloch(pure_state(KET_MINUS)), [-0.5, -SQ3 / 2, 0], atol=1e-15)
    with pytest.raises(DimensionError):
        density_to_bloch(maximally_mixed(4))


def test_density_round_trip_from_matrices(rng):
    for _ in range(100):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = DensityOperator(g @ g.conj().T / np.trace(g @ g.conj().T))
        back = bloch_to_density(density_to_bloch(rho))
        assert np.max(np.abs(back.mat - rho.mat)) <= 1e-12


def test_angles_to_bloch():
    np.testing.assert_allclose(angles_to_bloch(0, math.pi / 2), [1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(angles_to_bloch(math.pi / 2, math.pi / 2), [0, 1, 0], atol=1e-16)
    for alpha in (0.0, 1.0, 4.0):
        np.testing.assert_array_equal(angles_to_bloch(alpha, 0.0), [0, 0, 1])


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, math.pi))
def test_angle_states_are_pure(alpha, beta):
    assert abs(np.linalg.norm(angles_to_bloch(alpha, beta)) - 1) <= 1e-12
    np.testing.assert_allclose(pure_from_angles(alpha, beta).eigenvalues, [0, 1], atol=1e-10)


def test_density_operator_validation():
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        DensityOperator([[0.5, 0.5], [0, 0.5]])


def test_density_operator_does_not_freeze_caller_array():
    mat = np.eye(2, dtype=complex) / 2
    rho = DensityOperator(mat)
    mat[0, 0] = 7
    assert rho.mat[0, 0] == 0.5


def test_ensemble_invariants():
    a, b = bloch_to_density([1, 0, 0]), bloch_to_density([-1, 0, 0])
    Ensemble((0.5, 0.5), (a, b))
    with pytest.raises(ValidationError):
        Ensemble((0.7, 0.7), (a, b))
    with pytest.raises(ValidationError):
        Ensemble((0.2,) * 5, (a,) * 5)
    with pytest.raises(DimensionError):
        Ensemble((0.5, 0.5), (a, maximally_mixed(4)))


def test_trine_povm():
    p = trine_povm()
    assert validate_povm(p).ok
    np.testing.assert_allclose(sum(p.elements), np.eye(2), atol=1e-12)
    axes = [density_to_bloch(DensityOperator(e * 1.5)) for e in p.elements]
    for i in range(3):
        assert abs(np.linalg.norm(axes[i]) - 1) < 1e-12
        assert abs(axes[i][2]) < 1e-15
        assert abs(axes[i] @ axes[(i + 1) % 3] + 0.5) < 1e-12
    for e, ket in zip(p.elements, (KET_X, KET_PLUS, KET_MINUS)):
        np.testing.assert_allclose(e, 2 / 3 * np.outer(ket, ket.conj()), atol=1e-15)


def test_validate_povm_reports():
    assert validate_povm(Povm((np.eye(2),))).ok
    report = validate_povm(Povm((np.eye(2) / 2,)))
    assert not report.ok
    assert report.violations[0].deviation == pytest.approx(0.5)
    bad = validate_povm(Povm((np.diag([1.5, 1.0]), np.diag([-0.5, 0.0]))))
    assert any("positive" in v.what for v in bad.violations)


def test_outcome_probabilities_trine():
    p = trine_povm()
    np.testing.assert_allclose(outcome_probabilities(maximally_mixed(), p), [1 / 3] * 3)
    for alpha, beta in [(0.3, 1.1), (2.0, 0.4), (5.0, 2.9)]:
        u, v = math.cos(alpha) * math.sin(beta), math.sin(alpha) * math.sin(beta)
        expected = [(1 + u) / 3, (2 - u + SQ3 * v) / 6, (2 - u - SQ3 * v) / 6]
        np.testing.assert_allclose(outcome_probabilities(pure_from_angles(alpha, beta), p), expected, atol=1e-14)


def test_outcome_probabilities_dimension_mismatch():
    with pytest.raises(DimensionError):
        outcome_probabilities(maximally_mixed(4), trine_povm())


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, math.pi))
def test_trine_rotation_permutes_outcomes(alpha, beta):
    # rotating by 120 degrees about axis 3 advances the outcome labels by one
    p = trine_povm()
    before = outcome_probabilities(pure_from_angles(alpha, beta), p)
    after = outcome_probabilities(pure_from_angles(alpha + 2 * math.pi / 3, beta), p)
    np.testing.assert_allclose(after, np.roll(before, 1), atol=1e-10)
    assert abs(before.sum() - 1) <= 1e-10
