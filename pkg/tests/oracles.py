"""Brute-force grid oracles, independent of the Kraus/eigensolver pipeline.

Entropies come from Bloch lengths (S = 1 - h(|r|)) pushed through the
affine map with vectorized numpy.
"""

import numpy as np


def h_vec(z):
    z = np.clip(np.abs(z), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        minus = np.where(z < 1, (1 - z) * np.log2(np.where(z < 1, 1 - z, 1.0)), 0.0)
    return 0.5 * ((1 + z) * np.log2(1 + z) + minus)


def amplitude_damping_map(gamma):
    s = np.sqrt(1 - gamma)
    return np.diag([1 - gamma, s, s]), np.array([gamma, 0.0, 0.0])


def binary_grid_max(m, e, step, prior_step):
    """Best binary Holevo value over pure pairs in the plane of axes 1 and 2.

    For channels symmetric about axis 1 (amplitude damping) every pair can be
    rotated into this plane without changing the value.
    """
    th = np.arange(0, 2 * np.pi, step)
    t = np.arange(0, 1 + 1e-12, prior_step)
    out = np.stack([np.cos(th), np.sin(th), 0 * th], 1) @ m.T + e
    hs = h_vec(np.linalg.norm(out, axis=1))
    best, where = -1.0, None
    for i in range(len(th)):
        c = (1 - t)[:, None, None] * out[i] + t[:, None, None] * out[None, :, :]
        val = -h_vec(np.linalg.norm(c, axis=2)) + (1 - t)[:, None] * hs[i] + t[:, None] * hs[None, :]
        k = np.unravel_index(np.argmax(val), val.shape)
        if val[k] > best:
            best, where = float(val[k]), (th[i], th[k[1]], t[k[0]])
    return best, where


def orthogonal_grid_max(m, e, step, prior_step):
    """Best Holevo value over antipodal pure pairs on a full (alpha, beta) grid."""
    al = np.arange(0, 2 * np.pi, step)
    be = np.arange(0, np.pi + 1e-12, step)
    a, b = np.meshgrid(al, be, indexing="ij")
    s = np.stack([np.cos(a) * np.sin(b), np.sin(a) * np.sin(b), np.cos(b)], -1)
    oa, ob = s @ m.T + e, -s @ m.T + e
    ha, hb = h_vec(np.linalg.norm(oa, axis=-1)), h_vec(np.linalg.norm(ob, axis=-1))
    best = -1.0
    for t in np.arange(0, 1 + 1e-12, prior_step):
        c = t * oa + (1 - t) * ob
        best = max(best, float(np.max(-h_vec(np.linalg.norm(c, axis=-1)) + t * ha + (1 - t) * hb)))
    return best
