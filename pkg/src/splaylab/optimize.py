"""Deterministic derivative-free maximization and the capacity searches.

``maximize_1d`` is a coarse grid scan followed by golden-section refinement.
``maximize_simplex`` is a bounded Nelder-Mead run from seeded quasi-random
starting points; restarts are reduced in index order, so the result does not
depend on scheduling.

Pure input states are parameterized by angles ``(alpha, beta)`` so every
iterate stays on the Bloch sphere, and priors by stick-breaking coordinates in
``[0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

from .channels import AffineBlochMap, Channel
from .infotheory import (
    BinaryEnsembleSpec,
    SingularConfigurationError,
    holevo_quantity,
    mutual_info_fixed_measurement,
    variational_residuals,
)
from .states import Ensemble, angles_to_bloch, overlap, pure_from_angles

TWO_PI = 2 * math.pi
ANGLE_BOUNDS = ((0.0, TWO_PI), (0.0, math.pi))
PRIOR_BOUNDS = ((0.0, 1.0),)

DEFAULT_RESTARTS = 16
DEFAULT_SEED = 7
SIMPLEX_XATOL = 1e-9
TIE_TOL = 1e-12
GOLDEN = (math.sqrt(5) - 1) / 2
SCAN_POINTS = 64

FAMILIES = ("orthogonal-pair", "symmetric-pair", "binary-general", "k-state")


class NonFiniteObjectiveError(FloatingPointError):
    pass


class DegenerateMeasurementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OptResult:
    value: float
    argument: np.ndarray
    restarts_used: int
    seed: int
    converged: bool
    evaluations: int = 0
    ensemble: Ensemble | None = None
    axis: np.ndarray | None = None

    @property
    def overlaps(self) -> tuple[float, ...]:
        """Born overlaps ``tr(P_i P_j)`` of all member pairs, in index order."""
        if self.ensemble is None:
            return ()
        return tuple(overlap(a, b) for a, b in combinations(self.ensemble.states, 2))

    @property
    def overlap(self) -> float | None:
        ov = self.overlaps
        return ov[0] if len(ov) == 1 else None


def _finite(value, x) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(f"objective returned {value} at {x}")
    return value


def maximize_1d(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> OptResult:
    """Maximize a scalar function on ``[lo, hi]``.

    A 64-point scan picks the best grid cell and golden-section search
    refines it to argument width ``tol``.  The best point evaluated anywhere
    is returned, so a monotone ``f`` yields the boundary exactly.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, SCAN_POINTS)
    fs = [_finite(f(x), x) for x in xs]
    evals = len(fs)
    i = int(np.argmax(fs))
    best_x, best_f = float(xs[i]), fs[i]
    a, b = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, SCAN_POINTS - 1)])

    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = _finite(f(c), c), _finite(f(d), d)
    evals += 2
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = _finite(f(c), c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = _finite(f(d), d)
            if fd > best_f:
                best_x, best_f = d, fd
        evals += 1
    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = x, fx
    return OptResult(best_f, np.array([best_x]), 1, 0, True, evals)


@dataclass
class _Run:
    x: np.ndarray
    value: float
    evals: int
    converged: bool


def _nelder_mead(f, x0, lo, hi, xatol, max_evals) -> _Run:
    """Maximize ``f`` from ``x0`` inside the box ``[lo, hi]``."""
    n = x0.size
    # adaptive coefficients for higher dimensions, standard ones for n <= 2
    m = max(n, 2)
    rho, chi, psi, sigma = 1.0, 1 + 2 / m, 0.75 - 1 / (2 * m), 1 - 1 / m
    width = hi - lo

    def clamp(x):
        return np.minimum(np.maximum(x, lo), hi)

    def build(center, frac):
        pts = [center]
        for k in range(n):
            step = frac * width[k]
            x = center.copy()
            x[k] = x[k] + step if x[k] + step <= hi[k] else x[k] - step
            pts.append(x)
        return pts

    evals = 0

    def value(x):
        nonlocal evals
        evals += 1
        return _finite(f(x), x)

    def search(center, frac):
        pts = build(center, frac)
        vals = [value(x) for x in pts]
        while True:
            order = sorted(range(n + 1), key=lambda j: -vals[j])
            pts = [pts[j] for j in order]
            vals = [vals[j] for j in order]
            diameter = max(float(np.max(np.abs(p - pts[0]))) for p in pts[1:])
            if diameter <= xatol:
                return pts[0], vals[0], True
            if evals >= max_evals:
                return pts[0], vals[0], False
            centroid = np.mean(pts[:-1], axis=0)
            xr = clamp(centroid + rho * (centroid - pts[-1]))
            fr = value(xr)
            if fr > vals[0]:
                xe = clamp(centroid + chi * (xr - centroid))
                fe = value(xe)
                if fe > fr:
                    pts[-1], vals[-1] = xe, fe
                else:
                    pts[-1], vals[-1] = xr, fr
                continue
            if fr > vals[-2]:
                pts[-1], vals[-1] = xr, fr
                continue
            if fr > vals[-1]:
                xc = clamp(centroid + psi * (xr - centroid))
                fc = value(xc)
                if fc >= fr:
                    pts[-1], vals[-1] = xc, fc
                    continue
            else:
                xc = clamp(centroid - psi * (centroid - pts[-1]))
                fc = value(xc)
                if fc > vals[-1]:
                    pts[-1], vals[-1] = xc, fc
                    continue
            for j in range(1, n + 1):
                pts[j] = clamp(pts[0] + sigma * (pts[j] - pts[0]))
                vals[j] = value(pts[j])

    x, fx, ok = search(clamp(np.asarray(x0, dtype=float)), 0.1)
    # re-seed a fresh simplex at the converged point to guard against collapse
    for _ in range(2):
        if not ok:
            break
        x2, f2, ok = search(x, 1e-3)
        improved = f2 > fx + TIE_TOL
        if f2 >= fx:
            x, fx = x2, f2
        if not improved:
            break
    return _Run(x, fx, evals, ok)


def maximize_simplex(
    f: Callable[[np.ndarray], float],
    bounds: Sequence[tuple[float, float]],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    *,
    initial_points: Sequence[Sequence[float]] = (),
    xatol: float = SIMPLEX_XATOL,
    max_evals: int | None = None,
) -> OptResult:
    """Multistart bounded Nelder-Mead maximization.

    Starting points come from a scrambled Halton sequence seeded with
    ``seed`` and mapped into the interior of the box; ``initial_points`` are
    appended after them.  The best value over restarts wins, with ties
    (within 1e-12) going to the lowest restart index.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    box = np.asarray(bounds, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2 or np.any(box[:, 0] >= box[:, 1]):
        raise ValueError(f"bad bounds {bounds}")
    lo, hi = box[:, 0], box[:, 1]
    dim = len(box)
    if max_evals is None:
        max_evals = 2000 * dim + 4000

    unit = qmc.Halton(d=dim, scramble=True, seed=seed).random(restarts)
    starts = [lo + (hi - lo) * (0.05 + 0.9 * u) for u in unit]
    starts += [np.asarray(p, dtype=float) for p in initial_points]

    best: _Run | None = None
    total = 0
    for x0 in starts:
        run = _nelder_mead(f, x0, lo, hi, xatol, max_evals)
        total += run.evals
        if best is None or run.value > best.value + TIE_TOL:
            best = run
    return OptResult(best.value, best.x, len(starts), seed, best.converged, total)


# ---------------------------------------------------------------------------
# ensemble families
# ---------------------------------------------------------------------------


def stick_breaking(u: Sequence[float]) -> np.ndarray:
    """Map ``k - 1`` coordinates in ``[0, 1]`` onto the ``k``-simplex."""
    priors = []
    rest = 1.0
    for ui in u:
        priors.append(rest * ui)
        rest -= rest * ui
    priors.append(rest)
    return np.clip(np.array(priors), 0.0, 1.0)


def orthogonal_pair(params) -> Ensemble:
    """State at ``(alpha, beta)`` with prior ``t`` and its antipode with ``1 - t``."""
    alpha, beta, t = params
    return Ensemble((t, 1 - t), (pure_from_angles(alpha, beta), pure_from_angles(alpha + math.pi, math.pi - beta)))


def symmetric_pair(alpha: float) -> Ensemble:
    """Equiprobable in-plane states at azimuths ``+alpha`` and ``-alpha``."""
    half = math.pi / 2
    return Ensemble((0.5, 0.5), (pure_from_angles(alpha, half), pure_from_angles(-alpha, half)))


def binary_general(params) -> Ensemble:
    """First state has prior ``1 - t``, second has ``t``."""
    a1, b1, a2, b2, t = params
    return Ensemble((1 - t, t), (pure_from_angles(a1, b1), pure_from_angles(a2, b2)))


def k_state(params, k: int) -> Ensemble:
    angles = params[: 2 * k]
    priors = stick_breaking(params[2 * k:])
    states = tuple(pure_from_angles(angles[2 * i], angles[2 * i + 1]) for i in range(k))
    return Ensemble(tuple(priors / priors.sum()), states)


def family_bounds(kind: str, k: int = 2) -> list[tuple[float, float]]:
    if kind == "orthogonal-pair":
        return list(ANGLE_BOUNDS + PRIOR_BOUNDS)
    if kind == "symmetric-pair":
        return [(0.0, math.pi)]
    if kind == "binary-general":
        return list(ANGLE_BOUNDS * 2 + PRIOR_BOUNDS)
    if kind == "k-state":
        if not 1 <= k <= 4:
            raise ValueError(f"k-state family needs 1 <= k <= 4, got {k}")
        return list(ANGLE_BOUNDS * k + PRIOR_BOUNDS * (k - 1))
    raise ValueError(f"unknown ensemble family {kind!r}; expected one of {FAMILIES}")


def _require_qubit(c: Channel):
    if c.dim != 2:
        raise ValueError(f"capacity searches need a qubit channel, got dimension {c.dim}")


def _with_ensemble(res: OptResult, ensemble: Ensemble, **extra) -> OptResult:
    return OptResult(
        res.value, res.argument, res.restarts_used, res.seed, res.converged, res.evaluations, ensemble, **extra
    )


def best_orthogonal_capacity(c: Channel, restarts: int = DEFAULT_RESTARTS, seed: int = DEFAULT_SEED) -> OptResult:
    """Largest Holevo quantity over antipodal pure pairs with arbitrary prior."""
    _require_qubit(c)
    res = maximize_simplex(
        lambda p: holevo_quantity(orthogonal_pair(p), c), family_bounds("orthogonal-pair"), restarts, seed
    )
    return _with_ensemble(res, orthogonal_pair(res.argument))


def best_symmetric_pair(c: Channel, tol: float = 1e-10) -> OptResult:
    _require_qubit(c)
    res = maximize_1d(lambda a: holevo_quantity(symmetric_pair(a), c), 0.0, math.pi, tol)
    return _with_ensemble(res, symmetric_pair(res.argument[0]))


def best_binary_ensemble(c: Channel, restarts: int = DEFAULT_RESTARTS, seed: int = DEFAULT_SEED) -> OptResult:
    """Largest Holevo quantity over two pure states with arbitrary prior.

    The result's ``overlap`` is the Born overlap of the optimal pair.
    """
    _require_qubit(c)
    res = maximize_simplex(
        lambda p: holevo_quantity(binary_general(p), c), family_bounds("binary-general"), restarts, seed
    )
    return _with_ensemble(res, binary_general(res.argument))


def best_k_state_ensemble(
    c: Channel, k: int, restarts: int = DEFAULT_RESTARTS, seed: int = DEFAULT_SEED
) -> OptResult:
    """Largest Holevo quantity over ``k <= 4`` pure states.

    The ``k - 1`` optimum, padded with a zero-prior member, is added as an
    extra starting point, which makes the value non-decreasing in ``k``.
    """
    _require_qubit(c)
    bounds = family_bounds("k-state", k)
    extra = []
    if k > 1:
        prev = best_k_state_ensemble(c, k - 1, restarts, seed)
        p = prev.argument
        angles, sticks = p[: 2 * (k - 1)], p[2 * (k - 1):]
        extra.append(np.concatenate([angles, [0.0, 0.0], sticks, [1.0]]))
    res = maximize_simplex(
        lambda p: holevo_quantity(k_state(p, k), c), bounds, restarts, seed, initial_points=extra
    )
    return _with_ensemble(res, k_state(res.argument, k))


def best_individual_measurement_info(
    spec: BinaryEnsembleSpec, bmap: AffineBlochMap, restarts: int = DEFAULT_RESTARTS, seed: int = DEFAULT_SEED
) -> OptResult:
    """Maximize the fixed-measurement mutual information over the axis ``n``."""
    res = maximize_simplex(
        lambda p: mutual_info_fixed_measurement(spec, bmap, angles_to_bloch(*p)), list(ANGLE_BOUNDS), restarts, seed
    )
    return OptResult(
        res.value, res.argument, res.restarts_used, res.seed, res.converged, res.evaluations,
        axis=angles_to_bloch(*res.argument),
    )


@dataclass(frozen=True)
class AntipodalReport:
    antipodal: bool
    angle_error: float
    residual_norm: float
    value: float
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    singular: bool = False

    @property
    def ok(self) -> bool:
        # singular: outputs are deterministic at the maximizer, residual undefined
        return self.antipodal and (self.singular or self.residual_norm <= RESIDUAL_TOL)


ANTIPODAL_ANGLE_TOL = 1e-3
RESIDUAL_TOL = 1e-6
DEGENERATE_TOL = 1e-9


def _frame_with_second_axis(u: np.ndarray) -> np.ndarray:
    """Rotation matrix whose second column is the unit vector ``u``."""
    helper = np.eye(3)[int(np.argmin(np.abs(u)))]
    e1 = np.cross(u, helper)
    e1 /= np.linalg.norm(e1)
    return np.column_stack([e1, u, np.cross(e1, u)])


def _angle(u, v) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(u @ v))


def verify_antipodal_optimality(
    bmap: AffineBlochMap, n, t: float, trials: int = 8, seed: int = DEFAULT_SEED
) -> AntipodalReport:
    """Maximize the fixed-measurement mutual information over pure input
    pairs and check that the maximizer is the antipodal pair along
    ``+-M^T n``.

    ``trials`` is the number of multistart restarts.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"prior must lie strictly inside (0, 1), got {t}")
    n = np.asarray(n, dtype=float)
    nt = bmap.m.T @ n
    if np.linalg.norm(nt) < DEGENERATE_TOL:
        raise DegenerateMeasurementError("M^T n vanishes; every input gives the same statistics")
    direction = nt / np.linalg.norm(nt)
    # Chart whose poles are perpendicular to M^T n: a clamped simplex stalls
    # at a pole, so keep the candidate pair at interior points (pi/2, pi/2)
    # and (3 pi/2, pi/2).  The chart still covers the whole sphere.
    frame = _frame_with_second_axis(direction)

    def to_bloch(alpha, beta):
        return frame @ angles_to_bloch(alpha, beta)

    def objective(p):
        spec = BinaryEnsembleSpec(to_bloch(p[0], p[1]), to_bloch(p[2], p[3]), t)
        return mutual_info_fixed_measurement(spec, bmap, n)

    res = maximize_simplex(objective, list(ANGLE_BOUNDS * 2), trials, seed)
    a = to_bloch(*res.argument[:2])
    b = to_bloch(*res.argument[2:])
    sign = 1.0 if a @ direction >= 0 else -1.0
    err = max(_angle(a, sign * direction), _angle(b, -sign * direction))
    try:
        ra, rb = variational_residuals(BinaryEnsembleSpec(a, b, t), bmap, n)
    except SingularConfigurationError:
        return AntipodalReport(err <= ANTIPODAL_ANGLE_TOL, err, math.nan, res.value, a, b, singular=True)
    residual = float(max(np.linalg.norm(ra), np.linalg.norm(rb)))
    return AntipodalReport(err <= ANTIPODAL_ANGLE_TOL, err, residual, res.value, a, b)
