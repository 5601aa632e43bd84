"""Entropies, the Holevo quantity and binary mutual-information functionals.

All logarithms are base 2 and every information quantity is in bits.

The helper ``h`` used throughout is

    2 h(z) = (1 + z) log(1 + z) + (1 - z) log(1 - z),

so that ``h(z) = 1 - H2((1 + z)/2)`` with ``H2`` the binary entropy.  A qubit
state with Bloch length ``r`` has von Neumann entropy ``1 - h(r)``, and a
projective measurement along ``+-n`` on Bloch vector ``r`` has outcome entropy
``1 - h(r . n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import AffineBlochMap, Channel
from .numkernel import ValidationError
from .states import (
    PROB_CLAMP,
    SPHERE_TOL,
    DensityOperator,
    Ensemble,
    bloch_vector,
    density_problems,
)

DOMAIN_SLACK = 1e-12
STATIONARY_TOL = 1e-8


class SingularConfigurationError(ArithmeticError):
    """A logarithm argument in the stationarity conditions is not positive."""


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("distribution must be a nonempty 1-D sequence")
    if p.min() < -PROB_CLAMP or abs(p.sum() - 1) > 1e-9:
        raise ValidationError(f"not a probability distribution: {p}")
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def binary_entropy(q: float) -> float:
    return shannon_entropy([q, 1 - q])


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def h_fuchs(z: float) -> float:
    """``h(z)`` on ``[-1, 1]``; ``h`` is even so negative arguments are folded.

    Arguments within ``DOMAIN_SLACK`` of the interval are clamped; anything
    further out raises ``ValueError``.
    """
    if not math.isfinite(z) or abs(z) > 1 + DOMAIN_SLACK:
        raise ValueError(f"h(z) needs |z| <= 1, got {z!r}")
    z = min(abs(z), 1.0)
    return max(0.0, 0.5 * (_xlog2x(1 + z) + _xlog2x(1 - z)))


def phi(x: float) -> float:
    """``-h(sqrt(x)/3)`` for ``x`` in ``[0, 9]``."""
    if not math.isfinite(x) or x < -1e-9 or x > 9 + 1e-9:
        raise ValueError(f"phi(x) needs x in [0, 9], got {x!r}")
    return -h_fuchs(min(math.sqrt(max(x, 0.0)) / 3, 1.0))


def von_neumann_entropy(rho: DensityOperator) -> float:
    if not rho.check:
        problems = density_problems(rho.mat, rho.eigenvalues)
        if problems:
            raise ValidationError("invalid density operator: " + "; ".join(problems))
    return float(max(0.0, -sum(_xlog2x(lam) for lam in rho.eigenvalues if lam > 0)))


def holevo_quantity(e: Ensemble, c: Channel) -> float:
    """``S(sum p_i Phi(rho_i)) - sum p_i S(Phi(rho_i))`` in bits."""
    outputs = [c(s) for s in e.states]
    avg = DensityOperator(sum(p * o.mat for p, o in zip(e.priors, outputs)))
    return von_neumann_entropy(avg) - sum(
        p * von_neumann_entropy(o) for p, o in zip(e.priors, outputs) if p > 0
    )


def holevo_orthogonal_closed_form(alpha: float, beta: float, t: float) -> float:
    """Holevo quantity of the splaying channel for an antipodal input pair.

    The state at angles ``(alpha, beta)`` has prior ``t`` and its antipode
    has prior ``1 - t``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"prior must lie in [0, 1], got {t}")
    u = math.cos(alpha) * math.sin(beta)
    v = math.sin(alpha) * math.sin(beta)
    k = 2 * t - 1
    return (
        phi((1 + k * u) ** 2 + 3 * (k * v) ** 2)
        - t * phi((1 + u) ** 2 + 3 * v ** 2)
        - (1 - t) * phi((1 - u) ** 2 + 3 * v ** 2)
    )


def holevo_symmetric_pair(alpha: float) -> float:
    """Holevo quantity of the splaying channel for the equiprobable in-plane
    pair at azimuths ``+alpha`` and ``-alpha``."""
    c = 1 + math.cos(alpha)
    return phi(c * c) - phi(c * c + 3 * math.sin(alpha) ** 2)


@dataclass(frozen=True)
class BinaryEnsembleSpec:
    """Two input Bloch vectors; ``b`` has prior ``t`` and ``a`` has ``1 - t``."""

    a: np.ndarray
    b: np.ndarray
    t: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "a", bloch_vector(self.a))
        object.__setattr__(self, "b", bloch_vector(self.b))
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"prior must lie in [0, 1], got {self.t}")

    @property
    def c(self) -> np.ndarray:
        return (1 - self.t) * self.a + self.t * self.b


def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(float(np.linalg.norm(n)) - 1) > SPHERE_TOL:
        raise ValueError(f"measurement axis must be a unit 3-vector, got {n}")
    return n


def _binary_jensen_gap(xa: float, xb: float, t: float) -> float:
    xc = (1 - t) * xa + t * xb
    return -h_fuchs(xc) + (1 - t) * h_fuchs(xa) + t * h_fuchs(xb)


def mutual_info_fixed_measurement(spec: BinaryEnsembleSpec, bmap: AffineBlochMap, n) -> float:
    """Input/output mutual information for the projective measurement ``+-n``.

    Evaluated through ``ntilde = M^T n`` and ``w = e . n`` so the input
    vectors never have to be pushed through the channel.
    """
    n = _unit(n)
    nt = bmap.m.T @ n
    w = float(bmap.e @ n)
    return _binary_jensen_gap(w + float(spec.a @ nt), w + float(spec.b @ nt), spec.t)


def mutual_info_pushed(spec: BinaryEnsembleSpec, bmap: AffineBlochMap, n) -> float:
    """Same quantity as :func:`mutual_info_fixed_measurement`, computed by
    mapping the inputs to output Bloch vectors first."""
    n = _unit(n)
    a_out = bmap.m @ spec.a + bmap.e
    b_out = bmap.m @ spec.b + bmap.e
    return _binary_jensen_gap(float(a_out @ n), float(b_out @ n), spec.t)


def accessible_info_binary_symmetric(a, b) -> float:
    """Accessible information of two equiprobable qubit states whose Bloch
    vectors ``a`` and ``b`` have equal length.

    The optimal measurement is along ``d = a - b`` and the value is
    ``-phi(9 a.d / 2)``.
    """
    a, b = bloch_vector(a), bloch_vector(b)
    if abs(np.linalg.norm(a) - np.linalg.norm(b)) > SPHERE_TOL:
        raise ValueError("closed form needs Bloch vectors of equal length")
    d = a - b
    return -phi(4.5 * float(a @ d))


def variational_residuals(spec: BinaryEnsembleSpec, bmap: AffineBlochMap, n):
    """Stationarity residuals ``(R_a, R_b)`` of the fixed-measurement mutual
    information with respect to pure inputs.

    ``R_a = log2[(1 - w - c.nt)(1 + w + a.nt) / ((1 + w + c.nt)(1 - w - a.nt))] n_a``
    with ``n_a = nt - (nt.a) a``, and likewise for ``b``.  The tangent-space
    gradients of the mutual information are ``(1 - t)/2 * R_a`` and
    ``t/2 * R_b``.
    """
    for v in (spec.a, spec.b):
        if abs(float(np.linalg.norm(v)) - 1) > SPHERE_TOL:
            raise ValueError("stationarity conditions are stated for pure inputs")
    n = _unit(n)
    nt = bmap.m.T @ n
    w = float(bmap.e @ n)
    xc = w + float(spec.c @ nt)

    def residual(v):
        xv = w + float(v @ nt)
        factors = (1 - xc, 1 + xv, 1 + xc, 1 - xv)
        if min(factors) <= 0:
            raise SingularConfigurationError("measurement outcome is deterministic for some input")
        ratio = (factors[0] * factors[1]) / (factors[2] * factors[3])
        return math.log2(ratio) * (nt - float(nt @ v) * v)

    return residual(spec.a), residual(spec.b)


def is_stationary(residuals, tol: float = STATIONARY_TOL) -> bool:
    return max(float(np.max(np.abs(r))) for r in residuals) <= tol
