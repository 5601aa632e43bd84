"""Qubit states, ensembles and measurements.

Matrix basis is ``{|x>, |xbar>}`` = the standard basis, and the Bloch axes
are tied to the Pauli matrices as

    axis 1 -> diag(1, -1)
    axis 2 -> [[0, 1], [1, 0]]
    axis 3 -> [[0, -i], [i, 0]]

This is a cyclic relabeling of the usual (X, Y, Z) assignment, so the algebra
stays right-handed, and real superpositions ``cos(t/2)|x> + sin(t/2)|xbar>``
land on ``(cos t, sin t, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .numkernel import (
    HERMITIAN_TOL,
    DimensionError,
    ValidationError,
    as_matrix,
    frozen,
    hermitian_eigenvalues,
    hermiticity_deviation,
)

SPHERE_TOL = 1e-9
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
PROB_CLAMP = 1e-12
COMPLETENESS_TOL = 1e-9

PAULI = (
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)

KET_X = np.array([1.0, 0.0], dtype=complex)
KET_XBAR = np.array([0.0, 1.0], dtype=complex)
KET_Y = (KET_X + KET_XBAR) / math.sqrt(2)
KET_YBAR = (KET_X - KET_XBAR) / math.sqrt(2)
KET_PLUS = 0.5 * KET_X + (math.sqrt(3) / 2) * KET_XBAR
KET_MINUS = 0.5 * KET_X - (math.sqrt(3) / 2) * KET_XBAR

TRINE_AXES = (
    np.array([1.0, 0.0, 0.0]),
    np.array([-0.5, math.sqrt(3) / 2, 0.0]),
    np.array([-0.5, -math.sqrt(3) / 2, 0.0]),
)


class OutOfSphereError(ValueError):
    """Bloch vector lies outside the unit ball."""


def projector(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    return np.outer(ket, ket.conj())


def bloch_vector(r) -> np.ndarray:
    """Validate and return ``r`` as a real 3-vector inside the Bloch ball."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise DimensionError(f"Bloch vector must have 3 components, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValidationError("Bloch vector has non-finite components")
    norm = float(np.linalg.norm(r))
    if norm > 1 + SPHERE_TOL:
        raise OutOfSphereError(f"|r| = {norm:.12g} exceeds 1")
    return r


def bloch_matrix(r) -> np.ndarray:
    """``(I + r.sigma)/2`` without validation, for internal hot paths."""
    r1, r2, r3 = r
    return 0.5 * np.array([[1 + r1, r2 - 1j * r3], [r2 + 1j * r3, 1 - r1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive semidefinite Hermitian matrix.

    Validation runs on construction unless ``check=False``; callers that
    pass ``check=False`` are responsible for the invariants.
    """

    mat: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        mat = frozen(self.mat)
        object.__setattr__(self, "mat", mat)
        if self.check:
            problems = density_problems(mat, self.eigenvalues)
            if problems:
                raise ValidationError("invalid density operator: " + "; ".join(problems))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.mat)

    def is_pure(self, tol: float = SPHERE_TOL) -> bool:
        return abs(self.eigenvalues[-1] - 1.0) <= tol


def density_problems(mat: np.ndarray, eigenvalues=None) -> list[str]:
    problems = []
    herm = hermiticity_deviation(mat)
    if herm > HERMITIAN_TOL:
        return [f"not Hermitian (deviation {herm:.3g})"]
    tr = complex(np.trace(mat))
    if abs(tr - 1) > TRACE_TOL:
        problems.append(f"trace {tr.real:.12g} != 1")
    ev = hermitian_eigenvalues(mat) if eigenvalues is None else eigenvalues
    if ev[0] < -PSD_TOL:
        problems.append(f"negative eigenvalue {ev[0]:.3g}")
    return problems


def maximally_mixed(d: int = 2) -> DensityOperator:
    return DensityOperator(np.eye(d, dtype=complex) / d)


def pure_state(ket) -> DensityOperator:
    return DensityOperator(projector(ket))


def bloch_to_density(r) -> DensityOperator:
    return DensityOperator(bloch_matrix(bloch_vector(r)))


def density_to_bloch(rho: DensityOperator) -> np.ndarray:
    mat = rho.mat if isinstance(rho, DensityOperator) else as_matrix(rho)
    if mat.shape != (2, 2):
        raise DimensionError(f"Bloch view needs a qubit state, got dimension {mat.shape[0]}")
    return np.array([
        (mat[0, 0] - mat[1, 1]).real,
        2.0 * mat[1, 0].real,
        2.0 * mat[1, 0].imag,
    ])


def angles_to_bloch(alpha: float, beta: float) -> np.ndarray:
    """Unit vector ``(cos a sin b, sin a sin b, cos b)``."""
    sb = math.sin(beta)
    return np.array([math.cos(alpha) * sb, math.sin(alpha) * sb, math.cos(beta)])


def pure_from_angles(alpha: float, beta: float) -> DensityOperator:
    return DensityOperator(bloch_matrix(angles_to_bloch(alpha, beta)), check=False)


def overlap(a: DensityOperator, b: DensityOperator) -> float:
    """Born overlap ``tr(a b)``."""
    return float(np.real(np.trace(a.mat @ b.mat)))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Prior probabilities paired with states of a common dimension."""

    priors: tuple[float, ...]
    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        priors = tuple(float(p) for p in self.priors)
        states = tuple(self.states)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)
        if len(priors) != len(states):
            raise ValidationError("prior and state counts differ")
        if not states:
            raise ValidationError("ensemble is empty")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionError(f"ensemble mixes dimensions {sorted(dims)}")
        d = dims.pop()
        if len(states) > d * d:
            raise ValidationError(f"{len(states)} members exceeds the d^2 = {d * d} bound")
        if min(priors) < 0 or abs(sum(priors) - 1) > TRACE_TOL:
            raise ValidationError(f"priors {priors} are not a probability vector")

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def average(self) -> DensityOperator:
        mat = sum(p * s.mat for p, s in zip(self.priors, self.states))
        return DensityOperator(mat, check=False)


@dataclass(frozen=True)
class Violation:
    what: str
    deviation: float


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation; empty ``violations`` means valid."""

    violations: tuple[Violation, ...] = ()
    deviation: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        elements = tuple(frozen(e) for e in self.elements)
        if not elements:
            raise ValidationError("POVM has no elements")
        if len({e.shape for e in elements}) != 1:
            raise DimensionError("POVM elements differ in dimension")
        object.__setattr__(self, "elements", elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)


def validate_povm(p: Povm) -> ValidationReport:
    violations = []
    for i, e in enumerate(p.elements):
        herm = hermiticity_deviation(e)
        if herm > HERMITIAN_TOL:
            violations.append(Violation(f"element {i} not Hermitian", herm))
            continue
        low = float(hermitian_eigenvalues(e)[0])
        if low < -PSD_TOL:
            violations.append(Violation(f"element {i} not positive", -low))
    total = sum(p.elements)
    dev = float(np.max(np.abs(total - np.eye(p.dim))))
    if dev > COMPLETENESS_TOL:
        violations.append(Violation("elements do not sum to identity", dev))
    return ValidationReport(tuple(violations), dev)


def trine_povm() -> Povm:
    return Povm(tuple((np.eye(2) + sum(n[k] * PAULI[k] for k in range(3))) / 3 for n in TRINE_AXES))


def outcome_probabilities(rho: DensityOperator, p: Povm) -> np.ndarray:
    if rho.dim != p.dim:
        raise DimensionError(f"state dimension {rho.dim} != POVM dimension {p.dim}")
    probs = np.array([np.real(np.trace(rho.mat @ e)) for e in p.elements])
    if probs.min() < -PROB_CLAMP:
        raise ValidationError(f"negative outcome probability {probs.min():.3g}")
    return np.clip(probs, 0.0, None)
