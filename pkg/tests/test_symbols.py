import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berezin.bergman import SpaceParams, inner_product, min_eig_rel
from berezin.geometry import DISK, HALF_PLANE, d_invariant
from berezin.quadrature import kernel_window
from berezin.symbols import (EmbeddedOp, FiniteRankOp, ProductSymbol, br_apply,
                             br_eigenvalue_gamma, br_eigenvalue_product,
                             br_eigenvalue_quad, br_spectral_check,
                             bump_pair_symbol, commutator_limit, embed_j,
                             hs_norm_quad, lambda_norm, m_bound,
                             poisson_bracket, positive_diag_bound_check,
                             star_product, toeplitz_symbol, trace_duality,
                             uniform_norm_bound_checks)


@pytest.fixture(scope="module")
def p4():
    return SpaceParams(4.0, HALF_PLANE)


@pytest.fixture(scope="module")
def ops(p4):
    a = FiniteRankOp.rank_one(p4, 0.7 - 0.2j, 0.5 + 1.5j, -0.3 + 0.8j)
    b = FiniteRankOp.rank_one(p4, 1.1, -1 + 2j, 1.2 + 0.6j)
    return a, b


def test_symbol_trivials(p4):
    z = 0.4 + 1.2j
    a = FiniteRankOp.rank_one(p4, 1.0 / p4.eval_norm_sq(z), z, z)
    assert a.diagonal(np.asarray(z)) == pytest.approx(1.0)
    zero = FiniteRankOp(p4, ())
    assert zero.symbol(np.asarray(z), np.asarray(2j)) == 0


def test_symbol_against_quadrature(p4, ops):
    # <A e_w, e_z> by honest quadrature of the applied operator
    a, _ = ops
    z, w = 0.3 + 1.1j, -0.2 + 0.9j
    dom = kernel_window(a.centers() + [w], p4.r, 1e-11, measure_weight=p4.r)
    lhs = inner_product(p4, lambda q: _apply_op(a, p4, q, w),
                        p4.eval_vector(z), tol=1e-9, domain=dom)
    assert lhs == pytest.approx(complex(a.kernel(np.asarray(z), np.asarray(w))),
                                rel=1e-6)


def _apply_op(a, p, q, w):
    # (A e_w)(q) for a finite-rank operator, the honest function route
    out = np.zeros_like(np.asarray(q, dtype=complex))
    for coef, out_pt, in_pt in a.terms:
        bridge = p.c * p.pf(in_pt, w) ** -p.r  # <e_w, e_in> = e_w(in)
        out = out + coef * bridge * p.c * p.pf(q, out_pt) ** -p.r
    return out


def test_compose_bridge_and_associativity(p4, ops):
    a, b = ops
    ab = a.compose(b)
    (coef, out, in_), = ab.terms
    bridge = p4.c * p4.pf(-0.3 + 0.8j, -1 + 2j) ** -p4.r
    assert coef == pytest.approx((0.7 - 0.2j) * 1.1 * bridge)
    assert (out, in_) == (0.5 + 1.5j, 1.2 + 0.6j)
    c = FiniteRankOp.rank_one(p4, 0.4 + 0.9j, 0.8 + 1.1j, 0.2 + 1.6j)
    zs = np.array([0.2 + 1.2j, -0.5 + 0.7j])
    lhs = (a.compose(b)).compose(c).symbol(zs, zs[::-1])
    rhs = a.compose(b.compose(c)).symbol(zs, zs[::-1])
    assert np.max(np.abs(lhs - rhs)) < 1e-14 * np.max(np.abs(lhs))
    zero = FiniteRankOp(p4, ())
    assert a.compose(zero).is_zero


def test_star_unit(p4, ops):
    _, b = ops
    one = ProductSymbol(p4, lambda z: np.ones_like(z), lambda z: np.ones_like(z),
                        (1j,))
    st = star_product(one, b, p4, tol=1e-9)
    z, w = 0.4 + 1.0j, -0.1 + 1.5j
    assert st.symbol(z, w) == pytest.approx(
        complex(b.symbol(np.asarray(z), np.asarray(w))), rel=1e-7)


def test_star_matches_exact_and_adjoint_law(p4, ops):
    a, b = ops
    st = star_product(a, b, p4, tol=1e-8)
    ex = a.compose(b)
    z, w = 0.3 + 1.0j, -0.2 + 1.4j
    assert st.symbol(z, w) == pytest.approx(
        complex(ex.symbol(np.asarray(z), np.asarray(w))), rel=1e-6)
    st_adj = star_product(b.adjoint(), a.adjoint(), p4, tol=1e-8)
    assert np.conj(st.symbol(w, z)) == pytest.approx(st_adj.symbol(z, w),
                                                     rel=1e-6)


def test_toeplitz_unit_and_positivity(p4):
    tp = toeplitz_symbol(lambda a: np.ones_like(np.real(a)), p4, tol=1e-8,
                         support_centers=(1j,))
    z = 0.2 + 1.1j
    assert tp.symbol(z, z) == pytest.approx(1.0, rel=1e-6)

    def f(a):
        return np.exp(-np.abs(a - 1j) ** 2)

    tpos = toeplitz_symbol(f, p4, tol=1e-8, support_centers=(1j,))
    diag = tpos.symbol(z, z)
    assert np.real(diag) > 0 and abs(np.imag(diag)) < 1e-7
    br = br_apply(f, p4, z, tol=1e-9)
    assert diag == pytest.approx(complex(br.value), rel=1e-6)


def test_br_unit_and_positivity(p4):
    res = br_apply(lambda a: np.ones_like(np.real(a)), p4, -0.7 + 0.6j, tol=1e-9)
    assert np.real(res.value) == pytest.approx(1.0, abs=1e-7)

    res2 = br_apply(lambda a: np.exp(-np.abs(a - 1j) ** 2), p4, 1j, tol=1e-9)
    assert np.real(res2.value) > 0


def test_br_eigenfunction_and_readings(p4):
    lam, spread = br_eigenvalue_quad(p4, 0.5, tol=1e-8)
    assert spread < 1e-8
    gamma_val = br_eigenvalue_gamma(4.0, 0.5)
    assert np.real(lam) == pytest.approx(gamma_val, rel=1e-8)
    rep = br_spectral_check(4.0, 0.5, tol=1e-4, params=p4)
    assert rep.matched == "r"
    v1, t1 = br_eigenvalue_product(4.0, 0.5, n_terms=2000)
    v2, t2 = br_eigenvalue_product(4.0, 0.5, n_terms=4000)
    assert abs(v1 - v2) <= t1 + t2
    bad, _ = br_eigenvalue_product(1.0 / 4.0, 0.5)
    assert np.isnan(bad)


def test_spectral_check_critical_line(p4):
    rep = br_spectral_check(4.0, 0.5 + 0.7j, tol=1e-4, params=p4)
    assert rep.matched == "r"


def test_m_bound_examples():
    assert m_bound(1j, 1j, 1j) == pytest.approx(1.0)
    rng = np.random.default_rng(3)
    z = np.sqrt(rng.uniform(0, 0.98, 500)) * np.exp(2j * np.pi * rng.uniform(0, 1, 500))
    w = np.sqrt(rng.uniform(0, 0.98, 500)) * np.exp(2j * np.pi * rng.uniform(0, 1, 500))
    lhs = m_bound(z, np.zeros(500, dtype=complex), w, model=DISK)
    assert np.allclose(lhs, np.abs(1 - z * np.conj(w)), atol=1e-12)


@settings(max_examples=300, deadline=None)
@given(*(st.tuples(st.floats(-30, 30), st.floats(-12, 5)) for _ in range(3)))
def test_m_bound_two_sided(tz, te, tq):
    pts = [x + 1j * np.exp(y) for x, y in (tz, te, tq)]
    val = float(m_bound(*pts))
    assert 0.0 <= val <= 2.0 + 1e-12


def test_lambda_norm_basics(p4):
    zero = FiniteRankOp(p4, ())
    val, _ = lambda_norm(zero, p4, [1j, 0.5 + 0.8j], tol=1e-6)
    assert val == 0.0
    a = FiniteRankOp.rank_one(p4, 1.0, 1j, 1j)
    grid = [1j, 0.2 + 0.9j, -0.3 + 1.2j]
    v1, rep = lambda_norm(a, p4, grid, tol=1e-6)
    assert np.isfinite(v1) and v1 > 0
    v2, _ = lambda_norm(a, p4, grid + [0.1 + 1.05j], tol=1e-7)
    assert v2 >= v1 * (1 - 1e-3)
    assert rep["is_lower_bound"]


def test_lambda_product_bound(p4, ops):
    # the Banach bound at s = r: lambda(A x B) <= 2^0 (c_r/c_r) la la
    a, b = ops
    grid = [0.5 + 1.5j, -1 + 2j, -0.3 + 0.8j, 1.2 + 0.6j, 0.2 + 1.1j]
    la, _ = lambda_norm(a, p4, grid, tol=1e-6)
    lb, _ = lambda_norm(b, p4, grid, tol=1e-6)
    lab, _ = lambda_norm(a.compose(b), p4, grid, tol=1e-6)
    assert lab <= la * lb * (1 + 1e-6)


def test_uniform_norm_bounds(p4, ops):
    a, _ = ops
    rep = uniform_norm_bound_checks(a)
    assert rep["diag_ok"] and rep["weighted_ok"] and rep["hermitian_weighted_ok"]
    base = [0.2 + 1.0j, -0.3 + 1.4j]
    rng = np.random.default_rng(4)
    c = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    pos = FiniteRankOp.from_matrix(p4, base, c @ c.conj().T)
    grid = rng.normal(0, 1.5, 60) + 1j * np.exp(rng.normal(0, 0.8, 60))
    assert positive_diag_bound_check(pos, grid)


def test_norm_inf_vs_lambda(p4):
    a = FiniteRankOp.rank_one(p4, 1.0, 1j, 1j)
    grid = [1j, 0.15 + 0.95j, -0.15 + 1.05j, 0.3 + 1.2j]
    lam, _ = lambda_norm(a, p4, grid, tol=1e-7)
    assert a.norm_inf() <= lam * 1.02


def test_trace_duality(p4, ops):
    a, _ = ops

    def f(z):
        return np.exp(-np.abs(z - 1j) ** 2 / 1.2)

    lhs, rhs = trace_duality(a, f, tol=1e-6, f_centers=(1j,))
    assert lhs == pytest.approx(rhs, rel=2e-5)
    lhs0, rhs0 = trace_duality(a, lambda z: np.zeros_like(np.real(z)), tol=1e-5)
    assert abs(lhs0) < 1e-12 and abs(rhs0) < 1e-12


def test_embed(p4):
    rng = np.random.default_rng(5)
    base = [0.2 + 1.0j, -0.4 + 1.3j, 0.6 + 0.9j]
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    pos = FiniteRankOp.from_matrix(p4, base, c @ c.conj().T)
    with pytest.raises(ValueError):
        embed_j(pos, 3.0)
    emb = embed_j(pos, 6.5)
    pts = rng.normal(0, 1, 10) + 1j * np.exp(rng.normal(0, 0.5, 10))
    assert min_eig_rel(emb.lemma21_matrix(pts)) >= -1e-10
    assert emb.norm_lower_bound(pts) <= 4 * pos.norm_inf() * (1 + 1e-9)
    same = embed_j(pos, 4.0)
    assert np.allclose(same.symbol(pts[:2], pts[2:4]),
                       pos.symbol(pts[:2], pts[2:4]))


def test_hs_norm(p4, ops):
    a, _ = ops
    direct = np.sqrt(np.real(a.adjoint().compose(a).trace()))
    assert hs_norm_quad(a) == pytest.approx(direct)


def test_poisson_bracket_against_analytic():
    # f = |pf(z, a)|^(-2p): dz f and dzbar f have closed forms
    a, pwr = 1j, 2.0

    def f(z):
        return np.abs((z - np.conj(a)) / 2j) ** (-2 * pwr)

    def g(z):
        return np.real(z) * np.imag(z) ** 2

    z0 = 0.3 + 1.2j
    num, err = poisson_bracket(f, z0, g)
    pf = (z0 - np.conj(a)) / 2j
    dzf = -pwr * f(z0) / pf / 2j
    dbf = np.conj(dzf)
    dzg = 0.5 * np.imag(z0) ** 2 + np.real(z0) * np.imag(z0) / 1j * 0.5 * 2 / 2
    # dz g for g = x y^2: (gx - i gy)/2 = (y^2 - 2ixy)/2
    dzg = (np.imag(z0) ** 2 - 2j * np.real(z0) * np.imag(z0)) / 2
    dbg = np.conj(dzg)
    want = np.imag(z0) ** 2 * (dzf * dbg - dzg * dbf)
    assert num == pytest.approx(want, rel=1e-7)


def test_self_commutator_vanishes(p4):
    fa = bump_pair_symbol(p4, 1j, 2.0)
    f = lambda z: fa.diagonal(z)
    lim, _ = commutator_limit(f, f, 0.2 + 1.1j)
    assert abs(lim) < 1e-10


def test_semiclassical_smoke():
    from berezin.symbols import semiclassical_limit

    base = SpaceParams(16.0, HALF_PLANE)
    fa = bump_pair_symbol(base, 0.0 + 1.0j, 2.0)
    gb = bump_pair_symbol(base, 0.3 + 1.2j, 3.0)
    table = semiclassical_limit(fa, gb, [8.0, 16.0], [0.1 + 1.05j], tol=1e-9)
    assert table["E0_decreasing"] and table["E1_decreasing"]


def test_separated_supports_products_shrink():
    # well separated bumps: the product localizes and decays with r
    base = SpaceParams(16.0, HALF_PLANE)
    fa = bump_pair_symbol(base, -3.0 + 1.0j, 4.0)
    gb = bump_pair_symbol(base, 3.0 + 1.0j, 4.0)
    pt = np.asarray(0.0 + 1.0j)
    fg = abs(fa.diagonal(pt)) * abs(gb.diagonal(pt))
    devs, vals = [], []
    for r in (8.0, 16.0, 32.0):
        p = SpaceParams(r, HALF_PLANE)
        st = star_product(ProductSymbol(p, fa.p, fa.q, fa.center_list),
                          ProductSymbol(p, gb.p, gb.q, gb.center_list), p,
                          tol=1e-10)
        val = st.symbol(complex(pt), complex(pt))
        vals.append(abs(val))
        devs.append(abs(val - fg))
    # the kernel localizes: the value sits at the (tiny) pointwise product,
    # far below the sup norms (both bumps peak at 1), and converges to it
    assert devs[2] < devs[1] < devs[0]
    assert max(vals) < 1e-3
