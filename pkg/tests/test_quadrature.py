import numpy as np
import pytest

from berezin.quadrature import (AccuracyError, cusp_tail_bound, disk_domain,
                                fundamental_domain, grid_rule, half_plane_rect,
                                integrate2d, integrate_iterated,
                                invariant_ball_tail, kernel_window)


def one(z):
    return np.ones_like(np.real(z))


def test_disk_weighted_area():
    res = integrate2d(one, disk_domain(measure_weight=3.0), tol=1e-10)
    assert res.value == pytest.approx(np.pi / 2, rel=1e-9)


def test_covolume_two_heights():
    vals = []
    for Y in (50.0, 200.0):
        res = integrate2d(one, fundamental_domain(cusp_height=Y), tol=1e-9)
        vals.append(float(res) + 1.0 / Y)
    assert vals[0] == pytest.approx(np.pi / 3, rel=1e-8)
    assert vals[0] == pytest.approx(vals[1], rel=1e-8)


def test_odd_function_vanishes():
    dom = half_plane_rect(-2.0, 2.0, 0.5, 2.0, measure_weight=2.0)

    def odd(z):
        return np.real(z) ** 3

    res = integrate2d(odd, dom, tol=1e-9, abs_floor=1e-10)
    assert abs(complex(res.value)) < 1e-10


def test_iterated_separable_product():
    dom1 = half_plane_rect(0.0, 1.0, 1.0, 2.0, measure_weight=2.0)
    dom2 = half_plane_rect(-1.0, 1.0, 0.5, 1.5, measure_weight=2.0)

    f1 = integrate2d(lambda z: np.real(z) + np.imag(z), dom1, tol=1e-10)
    f2 = integrate2d(lambda z: np.imag(z) ** 2, dom2, tol=1e-10)

    def f(z1, z2):
        return (np.real(z1) + np.imag(z1)) * np.imag(z2) ** 2

    res = integrate_iterated(f, [dom1, dom2], [1e-7, 1e-9])
    assert res.value == pytest.approx(complex(f1.value) * complex(f2.value),
                                      rel=1e-6)


def test_iterated_rejects_loose_inner_tolerance():
    dom = half_plane_rect(0.0, 1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        integrate_iterated(lambda a, b: np.real(b), [dom, dom], [1e-8, 1e-6])


def test_cusp_tail_bounds():
    assert cusp_tail_bound("exponential", 10.0, rate=2 * np.pi) < 1e-20
    assert cusp_tail_bound("power", 100.0, constant=1.0, rate=2.0) == pytest.approx(0.01)
    with pytest.raises(ValueError):
        cusp_tail_bound("unknown", 10.0)
    with pytest.raises(ValueError):
        cusp_tail_bound("power", 10.0, rate=1.0)  # non-integrable tail


def test_kernel_window_captures_invariant_mass():
    # integral of rho^r over nu_0 is 4 pi / (r - 1)
    for r in (3.0, 5.0):
        dom = kernel_window([0.4 + 1.7j], r, eps_mass=1e-12)

        def f(z, r=r):
            from berezin.geometry import d_invariant

            return np.abs(d_invariant(0.4 + 1.7j, z)) ** (2 * r)

        res = integrate2d(f, dom, tol=1e-10)
        assert res.value == pytest.approx(4 * np.pi / (r - 1), rel=1e-8)


def test_invariant_ball_tail_monotone():
    assert invariant_ball_tail(4.0, 1e-4) < invariant_ball_tail(4.0, 1e-2)
    assert invariant_ball_tail(1.0, 0.1) == np.inf


def test_monotone_refinement_on_corpus():
    dom = disk_domain(measure_weight=3.0)

    def bump(z):
        return np.exp(-6 * np.abs(z - 0.3) ** 2)

    errs = []
    for budget in (30, 120):
        res = integrate2d(bump, dom, tol=1e-14, max_panels=budget, strict=False)
        ref = integrate2d(bump, dom, tol=1e-12, max_panels=4000)
        errs.append(abs(complex(res.value) - complex(ref.value)))
    assert errs[1] <= errs[0]


def test_determinism_bit_stable():
    dom = fundamental_domain(cusp_height=20.0)

    def f(z):
        return np.imag(z) ** -1.5

    a = integrate2d(f, dom, tol=1e-9)
    b = integrate2d(f, dom, tol=1e-9)
    assert repr(a.value) == repr(b.value)
    assert a.evaluations == b.evaluations


def test_strict_accuracy_error_carries_partial():
    dom = half_plane_rect(-1.0, 1.0, 0.1, 10.0)

    def rough(z):
        return np.abs(np.sin(80 * np.real(z))) / np.imag(z)

    with pytest.raises(AccuracyError) as err:
        integrate2d(rough, dom, tol=1e-13, max_panels=8)
    assert err.value.partial is not None


def test_grid_rule_weights_sum():
    dom = fundamental_domain(cusp_height=30.0)
    z, w = grid_rule(dom, level=24)
    assert np.sum(np.real(w)) + 1 / 30.0 == pytest.approx(np.pi / 3, rel=1e-6)
