import math

import numpy as np
import pytest

from conftest import random_unit_vectors
from splaylab.channels import (
    AffineBlochMap,
    KrausChannel,
    MeasurePrepareChannel,
    affine_of_channel,
    amplitude_damping,
    apply_affine,
    apply_kraus,
    apply_measure_prepare,
    identity_channel,
    product_extend,
    random_contractive_map,
    validate_kraus,
)
from splaylab.numkernel import DimensionError, ValidationError, kronecker
from splaylab.states import (
    DensityOperator,
    OutOfSphereError,
    Povm,
    bloch_to_density,
    density_to_bloch,
    maximally_mixed,
    overlap,
)

SQ3 = math.sqrt(3)


def random_states(rng, n, d=2):
    out = []
    for _ in range(n):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = g @ g.conj().T
        out.append(DensityOperator(rho / np.trace(rho)))
    return out


def test_validate_kraus(splay):
    assert validate_kraus(identity_channel()).ok
    report = validate_kraus(splay)
    assert report.ok and report.deviation <= 1e-12
    bad = validate_kraus(KrausChannel((math.sqrt(0.5) * np.eye(2),)))
    assert not bad.ok
    assert bad.deviation == pytest.approx(0.5)


def test_invalid_channel_refuses_to_apply():
    bad = KrausChannel((math.sqrt(0.5) * np.eye(2),))
    with pytest.raises(ValidationError):
        apply_kraus(bad, maximally_mixed())


def test_apply_kraus_examples(splay, rng):
    for rho in random_states(rng, 5):
        np.testing.assert_allclose(apply_kraus(identity_channel(), rho).mat, rho.mat)
    np.testing.assert_allclose(density_to_bloch(splay(bloch_to_density([1, 0, 0]))), [2 / 3, 0, 0], atol=1e-15)
    np.testing.assert_allclose(
        density_to_bloch(splay(bloch_to_density([0, 1, 0]))), [1 / 3, 1 / SQ3, 0], atol=1e-15
    )
    with pytest.raises(DimensionError):
        apply_kraus(splay, maximally_mixed(4))


def test_apply_measure_prepare_examples(splay_mp, rng):
    eta = random_states(rng, 1)[0]
    trivial = MeasurePrepareChannel(Povm((np.eye(2),)), (eta,))
    for rho in random_states(rng, 3):
        np.testing.assert_allclose(apply_measure_prepare(trivial, rho).mat, eta.mat, atol=1e-15)
    np.testing.assert_allclose(density_to_bloch(splay_mp(bloch_to_density([1, 0, 0]))), [2 / 3, 0, 0], atol=1e-15)
    np.testing.assert_allclose(density_to_bloch(splay_mp(maximally_mixed())), [1 / 3, 0, 0], atol=1e-15)


def test_splaying_resend_geometry(splay_mp):
    eta_x, eta_p, eta_m = splay_mp.resend
    assert all(s.is_pure() for s in splay_mp.resend)
    assert abs(overlap(eta_p, eta_m)) < 1e-15
    assert overlap(eta_x, eta_p) == pytest.approx(0.5)
    assert overlap(eta_x, eta_m) == pytest.approx(0.5)


def test_plus_outcome_resends_orthogonal_to_minus(splay_mp):
    # the "+" outcome is forwarded as the state orthogonal to the "-" resend
    np.testing.assert_allclose(density_to_bloch(splay_mp.resend[1]), -density_to_bloch(splay_mp.resend[2]))


def test_kraus_and_measure_prepare_agree(splay, splay_mp, rng):
    for r in random_unit_vectors(rng, 1000):
        rho = bloch_to_density(r)
        assert np.max(np.abs(splay(rho).mat - splay_mp(rho).mat)) <= 1e-12


@pytest.mark.parametrize("make", [identity_channel, lambda: amplitude_damping(0.3), lambda: amplitude_damping(1.0)])
def test_trace_and_positivity_preserved(make, splay, rng):
    for channel in (make(), splay, product_extend(amplitude_damping(0.4), 2)):
        for rho in random_states(rng, 200, channel.dim):
            out = channel(rho)
            assert abs(np.trace(out.mat) - 1) <= 1e-10
            assert out.eigenvalues[0] >= -1e-9


def test_affine_examples(splay, splay_mp):
    ident = affine_of_channel(identity_channel())
    np.testing.assert_allclose(ident.m, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(ident.e, 0, atol=1e-15)
    for c in (splay, splay_mp):
        bmap = affine_of_channel(c)
        np.testing.assert_allclose(bmap.m, np.diag([1 / 3, 1 / SQ3, 0]), atol=1e-15)
        np.testing.assert_allclose(bmap.e, [1 / 3, 0, 0], atol=1e-15)
    full = affine_of_channel(amplitude_damping(1.0))
    np.testing.assert_allclose(full.m, 0, atol=1e-15)
    np.testing.assert_allclose(full.e, [1, 0, 0], atol=1e-15)


def test_amplitude_damping_half_by_hand():
    # |x> fixed, r1 -> (1 - g) r1 + g, transverse components scaled by sqrt(1 - g)
    bmap = affine_of_channel(amplitude_damping(0.5))
    np.testing.assert_allclose(bmap.m, np.diag([0.5, math.sqrt(0.5), math.sqrt(0.5)]), atol=1e-15)
    np.testing.assert_allclose(bmap.e, [0.5, 0, 0], atol=1e-15)


def test_amplitude_damping_limits(rng):
    zero = amplitude_damping(0.0)
    for rho in random_states(rng, 5):
        np.testing.assert_allclose(zero(rho).mat, rho.mat, atol=1e-15)
        np.testing.assert_allclose(amplitude_damping(1.0)(rho).mat, np.diag([1, 0]), atol=1e-15)
    with pytest.raises(ValueError):
        amplitude_damping(1.2)


@pytest.mark.parametrize("make", [identity_channel, lambda: amplitude_damping(0.75)])
def test_affine_reproduces_channel(make, splay, rng):
    for channel in (make(), splay):
        bmap = affine_of_channel(channel)
        for r in random_unit_vectors(rng, 100) * rng.uniform(0, 1, size=(100, 1)):
            expected = density_to_bloch(channel(bloch_to_density(r)))
            assert np.max(np.abs(apply_affine(bmap, r) - expected)) <= 1e-10
        assert bmap.is_contractive()


def test_apply_affine(splay):
    bmap = affine_of_channel(splay)
    np.testing.assert_allclose(apply_affine(bmap, [0, 0, 1]), [1 / 3, 0, 0], atol=1e-15)
    for alpha in np.linspace(0, 2 * math.pi, 7):
        r = [math.cos(alpha), math.sin(alpha), 0]
        np.testing.assert_allclose(
            apply_affine(bmap, r), [(1 + math.cos(alpha)) / 3, math.sin(alpha) / SQ3, 0], atol=1e-15
        )
    with pytest.raises(OutOfSphereError):
        apply_affine(bmap, [2, 0, 0])


def test_random_contractive_map(rng):
    for _ in range(20):
        bmap = random_contractive_map(rng)
        assert bmap.max_image_norm() <= 0.95 + 1e-12


def test_not_contractive_detected():
    assert not AffineBlochMap(np.eye(3), [0.1, 0, 0]).is_contractive()


def test_product_extend(splay, rng):
    ident2 = product_extend(identity_channel(), 2)
    assert ident2.dim == 4 and len(ident2.kraus_ops) == 1
    np.testing.assert_allclose(ident2.kraus_ops[0], np.eye(4))
    sq = product_extend(splay, 2)
    assert len(sq.kraus_ops) == 9
    assert validate_kraus(sq).ok
    for rho, tau in zip(random_states(rng, 10), random_states(rng, 10)):
        joint = sq(DensityOperator(kronecker(rho.mat, tau.mat)))
        np.testing.assert_allclose(joint.mat, kronecker(splay(rho).mat, splay(tau).mat), atol=1e-10)


def test_product_extend_three_copies(splay, rng):
    cube = product_extend(splay, 3)
    assert cube.dim == 8 and len(cube.kraus_ops) == 27
    assert validate_kraus(cube).ok
    a, b, c = random_states(rng, 3)
    joint = cube(DensityOperator(kronecker(kronecker(a.mat, b.mat), c.mat)))
    expected = kronecker(kronecker(splay(a).mat, splay(b).mat), splay(c).mat)
    np.testing.assert_allclose(joint.mat, expected, atol=1e-10)


def test_product_extend_limits(splay):
    with pytest.raises(ValueError):
        product_extend(splay, 4)
    with pytest.raises(ValidationError):
        product_extend(KrausChannel((0.5 * np.eye(2),)), 2)
