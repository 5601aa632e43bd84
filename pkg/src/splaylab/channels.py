"""Qubit channel representations and the constructors used in this package.

Three interchangeable forms are supported: Kraus operators, measure-and-
prepare (a POVM plus one resend state per outcome), and the affine action
``r -> M r + e`` on Bloch vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .numkernel import DimensionError, ValidationError, frozen, kronecker
from .states import (
    KET_MINUS,
    KET_PLUS,
    KET_X,
    KET_Y,
    KET_YBAR,
    SPHERE_TOL,
    DensityOperator,
    Povm,
    ValidationReport,
    Violation,
    bloch_matrix,
    bloch_to_density,
    bloch_vector,
    density_to_bloch,
    maximally_mixed,
    trine_povm,
    validate_povm,
)

KRAUS_TOL = 1e-9
MAX_KRAUS_OPS = 64  # d^2 at the largest supported dimension
MAX_PRODUCT_COPIES = 3


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(frozen(a) for a in self.kraus_ops)
        if not 1 <= len(ops) <= MAX_KRAUS_OPS:
            raise ValidationError(f"need 1..{MAX_KRAUS_OPS} Kraus operators, got {len(ops)}")
        if len({a.shape for a in ops}) != 1:
            raise DimensionError("Kraus operators differ in dimension")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    @cached_property
    def report(self) -> ValidationReport:
        return validate_kraus(self)

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return apply_kraus(self, rho)


@dataclass(frozen=True, eq=False)
class MeasurePrepareChannel:
    measurement: Povm
    resend: tuple[DensityOperator, ...]

    def __post_init__(self):
        object.__setattr__(self, "resend", tuple(self.resend))
        if len(self.resend) != len(self.measurement):
            raise ValidationError("need exactly one resend state per POVM element")

    @property
    def dim(self) -> int:
        return self.measurement.dim

    @cached_property
    def report(self) -> ValidationReport:
        return validate_povm(self.measurement)

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return apply_measure_prepare(self, rho)


@dataclass(frozen=True, eq=False)
class AffineBlochMap:
    """Action ``r -> m @ r + e`` of a qubit channel on Bloch vectors."""

    m: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        e = np.array(self.e, dtype=float)
        if m.shape != (3, 3) or e.shape != (3,):
            raise DimensionError("affine map needs a 3x3 matrix and a 3-vector")
        m.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", e)

    dim = 2

    def max_image_norm(self, samples: int = 1000, seed: int = 0) -> float:
        """Largest ``|M r + e|`` over a seeded sample of unit vectors."""
        rng = np.random.default_rng(seed)
        r = rng.normal(size=(samples, 3))
        r /= np.linalg.norm(r, axis=1, keepdims=True)
        return float(np.max(np.linalg.norm(r @ self.m.T + self.e, axis=1)))

    def is_contractive(self, samples: int = 1000, seed: int = 0) -> bool:
        return self.max_image_norm(samples, seed) <= 1 + SPHERE_TOL

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return DensityOperator(bloch_matrix(self.m @ density_to_bloch(rho) + self.e))


Channel = Union[KrausChannel, MeasurePrepareChannel, AffineBlochMap]


def validate_kraus(c: KrausChannel) -> ValidationReport:
    total = sum(a.conj().T @ a for a in c.kraus_ops)
    dev = float(np.max(np.abs(total - np.eye(c.dim))))
    if dev > KRAUS_TOL:
        return ValidationReport((Violation("sum of A^dagger A is not the identity", dev),), dev)
    return ValidationReport((), dev)


def _check_input(c, rho: DensityOperator):
    if rho.dim != c.dim:
        raise DimensionError(f"channel dimension {c.dim} != state dimension {rho.dim}")
    if not c.report.ok:
        raise ValidationError(f"invalid channel: {c.report.violations[0].what}")


def apply_kraus(c: KrausChannel, rho: DensityOperator) -> DensityOperator:
    _check_input(c, rho)
    out = sum(a @ rho.mat @ a.conj().T for a in c.kraus_ops)
    return DensityOperator(out)


def apply_measure_prepare(c: MeasurePrepareChannel, rho: DensityOperator) -> DensityOperator:
    _check_input(c, rho)
    weights = [np.real(np.trace(rho.mat @ e)) for e in c.measurement.elements]
    out = sum(w * eta.mat for w, eta in zip(weights, c.resend))
    return DensityOperator(out)


def apply_channel(c: Channel, rho: DensityOperator) -> DensityOperator:
    return c(rho)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),))


def splaying_kraus() -> KrausChannel:
    k = math.sqrt(2 / 3)
    return KrausChannel((
        k * np.outer(KET_X, KET_X.conj()),
        k * np.outer(KET_Y, KET_PLUS.conj()),
        k * np.outer(KET_YBAR, KET_MINUS.conj()),
    ))


def splaying_measure_prepare() -> MeasurePrepareChannel:
    resend = tuple(bloch_to_density(r) for r in ((1, 0, 0), (0, 1, 0), (0, -1, 0)))
    return MeasurePrepareChannel(trine_povm(), resend)


def amplitude_damping(gamma: float) -> KrausChannel:
    """Amplitude damping toward ``|x>`` (Bloch axis 1) with strength ``gamma``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping strength must lie in [0, 1], got {gamma}")
    a0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    a1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((a0, a1))


def affine_of_channel(c: Channel) -> AffineBlochMap:
    """Read off ``(M, e)``: ``e`` is the image of the maximally mixed state and
    column ``k`` of ``M`` is the image of the k-th axis minus ``e``."""
    if isinstance(c, AffineBlochMap):
        return c
    if c.dim != 2:
        raise DimensionError(f"affine form exists only for qubit channels, got dimension {c.dim}")
    e = density_to_bloch(c(maximally_mixed(2)))
    cols = [density_to_bloch(c(bloch_to_density(axis))) - e for axis in np.eye(3)]
    return AffineBlochMap(np.column_stack(cols), e)


def apply_affine(bmap: AffineBlochMap, r) -> np.ndarray:
    return bmap.m @ bloch_vector(r) + bmap.e


def random_contractive_map(rng: np.random.Generator, margin: float = 0.05) -> AffineBlochMap:
    """Random ``(M, e)`` with ``max|M r + e| <= 1 - margin`` on the unit ball.

    ``M = U diag(s) V`` with Haar-random rotations and singular values below
    ``0.9``; ``e`` gets whatever length is left over.
    """
    u, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    v, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    s = rng.uniform(0.0, 0.9, size=3)
    room = max(0.0, 1.0 - margin - float(s.max()))
    direction = rng.normal(size=3)
    e = direction / np.linalg.norm(direction) * rng.uniform(0.0, room)
    return AffineBlochMap(u @ np.diag(s) @ v, e)


def product_extend(c: KrausChannel, n: int) -> KrausChannel:
    """Memoryless ``n``-fold tensor power with Kraus set ``A_i1 x ... x A_in``."""
    if c.dim != 2:
        raise DimensionError("tensor powers are supported for qubit channels only")
    if not 1 <= n <= MAX_PRODUCT_COPIES:
        raise ValueError(f"copies must be in 1..{MAX_PRODUCT_COPIES}, got {n}")
    if not c.report.ok:
        raise ValidationError(f"invalid channel: {c.report.violations[0].what}")
    ops = []
    for combo in itertools.product(c.kraus_ops, repeat=n):
        op = combo[0]
        for a in combo[1:]:
            op = kronecker(op, a)
        ops.append(op)
    if len(ops) > MAX_KRAUS_OPS:
        raise ValidationError(f"{len(ops)} Kraus operators exceeds {MAX_KRAUS_OPS}")
    return KrausChannel(tuple(ops))
