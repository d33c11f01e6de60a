import numpy as np
import pytest

from berezin.bergman import (SpaceParams, inner_product, kernel_gram,
                             min_eig_rel, normalization_c, project,
                             schur_power_matrix, schur_power_psd)
from berezin.geometry import DISK, HALF_PLANE, cayley
from berezin.quadrature import disk_domain, kernel_window


def test_normalization_closed_forms():
    assert normalization_c(2.0, DISK) == pytest.approx(1 / np.pi)
    assert normalization_c(3.0, DISK) == pytest.approx(2 / np.pi)
    assert normalization_c(4.0, HALF_PLANE) == pytest.approx(3 / (4 * np.pi))


def test_small_weight_rejected():
    with pytest.raises(ValueError):
        SpaceParams(1.0, DISK)
    with pytest.raises(ValueError):
        normalization_c(0.5, HALF_PLANE)


def test_eval_vector_norm_and_reproducing():
    p = SpaceParams(3.0, HALF_PLANE)
    assert p.eval_norm_sq(1j) == pytest.approx(p.c)
    assert p.eval_norm_sq(2j) == pytest.approx(p.c * 2.0**-3)
    # <e_w, e_z> = e_w(z) is definitional; check against quadrature once
    z, w = 0.4 + 1.3j, -0.6 + 0.8j
    dom = kernel_window([z, w], p.r, 1e-11, measure_weight=p.r)
    val = inner_product(p, p.eval_vector(w), p.eval_vector(z), tol=1e-9,
                        domain=dom)
    assert val == pytest.approx(p.kernel(z, w), rel=1e-7)


def test_reproducing_identity_disk_polynomials():
    p = SpaceParams(2.5, DISK)
    z0 = 0.3 - 0.2j
    for f in (lambda z: np.ones_like(z), lambda z: z**2,
              lambda z: 1 / (1 - 0.5 * z)):
        val = inner_product(p, f, p.eval_vector(z0), tol=1e-9)
        assert val == pytest.approx(complex(f(np.asarray(z0))), rel=1e-6, abs=1e-9)


def test_kernel_gram_psd():
    rng = np.random.default_rng(10)
    p = SpaceParams(2.5, HALF_PLANE)
    one = kernel_gram([1j], p)
    assert one[0, 0].real > 0
    pts = rng.normal(0, 1.5, 20) + 1j * np.exp(rng.normal(0, 0.8, 20))
    assert min_eig_rel(kernel_gram(pts, p)) >= -1e-10


def test_gram_sandwich_for_positive_operator():
    # Lemma-2.1-type two-sided test: for positive finite-rank A the
    # symbol-weighted matrix stays between 0 and ||A|| times the gram
    from berezin.symbols import FiniteRankOp

    rng = np.random.default_rng(11)
    p = SpaceParams(4.0, HALF_PLANE)
    base = [0.2 + 1.0j, -0.3 + 1.4j, 0.5 + 0.8j]
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    coef = c @ c.conj().T
    op = FiniteRankOp.from_matrix(p, base, coef)
    pts = rng.normal(0, 1, 12) + 1j * np.exp(rng.normal(0, 0.6, 12))
    m = op.kernel(pts[:, None], pts[None, :])
    k = kernel_gram(pts, p)
    assert min_eig_rel(m) >= -1e-10
    norm = op.norm_inf()
    assert min_eig_rel(norm * k - m) >= -1e-9


def test_schur_power_psd():
    rng = np.random.default_rng(12)
    p = SpaceParams(2.0, HALF_PLANE)
    pts = rng.normal(0, 2, 15) + 1j * np.exp(rng.normal(0, 1, 15))
    ones = schur_power_matrix(pts, 0.0, p)
    assert np.allclose(ones, 1.0)
    assert schur_power_psd(pts, 1.3, p)
    with pytest.raises(ValueError):
        schur_power_matrix(pts, -0.5, p)


def test_projection_fixes_analytic_and_kills_antianalytic():
    p = SpaceParams(3.0, DISK)
    vals = project(p, lambda z: z**2, [0.2 + 0.1j], tol=1e-8)
    assert vals[0] == pytest.approx((0.2 + 0.1j) ** 2, abs=1e-7)
    vals = project(p, lambda z: np.conj(z), [0j], tol=1e-8)
    assert abs(vals[0]) < 1e-7
    w = 0.3 - 0.25j
    vals = project(p, p.eval_vector(w), [0.1 + 0.2j], tol=1e-8)
    assert vals[0] == pytest.approx(p.kernel(0.1 + 0.2j, w), rel=1e-6)


def test_model_transport_of_gram():
    # |k(z, w)| h(z)^(r/2) h(w)^(r/2) = c_r |d|^r in both models, so the
    # height-normalized gram entries differ by the constant c ratio alone
    rng = np.random.default_rng(13)
    r = 3.5
    ph, pd = SpaceParams(r, HALF_PLANE), SpaceParams(r, DISK)
    z = rng.normal(0, 1, 8) + 1j * np.exp(rng.normal(0, 0.5, 8))
    w = cayley(z)
    from berezin.geometry import height

    gh = np.abs(ph.kernel(z[:, None], z[None, :])) * np.sqrt(
        np.outer(height(z), height(z))) ** r
    gd = np.abs(pd.kernel(w[:, None], w[None, :])) * np.sqrt(
        np.outer(height(w, DISK), height(w, DISK))) ** r
    ratio = gh / gd
    assert np.max(np.abs(ratio - ph.c / pd.c)) < 1e-10
