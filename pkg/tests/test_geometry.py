import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berezin.geometry import (DISK, HALF_PLANE, Measure, ModelMismatchError,
                              Point, cayley, cayley_inverse, d_invariant,
                              measure_density, mobius_act, pair_factor, rho)
from berezin.groups import sl2r_random


def hp_points(rng, n):
    return rng.normal(0, 2, n) + 1j * np.exp(rng.normal(0, 1, n))


def test_pair_factor_values():
    assert pair_factor(1j, 1j) == pytest.approx(1.0)
    assert pair_factor(Point(0j, DISK), Point(0j, DISK)) == pytest.approx(1.0)
    assert pair_factor(1j, 2j) == pytest.approx(1.5)


def test_pair_factor_positive_real_part():
    rng = np.random.default_rng(0)
    z, w = hp_points(rng, 500), hp_points(rng, 500)
    assert np.all(np.real(pair_factor(z, w)) > 0)


def test_model_mismatch_fails_loudly():
    with pytest.raises(ModelMismatchError):
        pair_factor(Point(1j, HALF_PLANE), Point(0.2 + 0j, DISK))


def test_d_invariant_values():
    assert d_invariant(1j, 1j) == pytest.approx(1.0)
    assert abs(d_invariant(1j, 2j)) == pytest.approx(np.sqrt(8) / 3)


def test_d_invariance_under_mobius():
    rng = np.random.default_rng(1)
    for _ in range(100):
        g = sl2r_random(rng)
        z, w = complex(hp_points(rng, 1)[0]), complex(hp_points(rng, 1)[0])
        lhs = abs(d_invariant(mobius_act(g, z), mobius_act(g, w)))
        assert lhs == pytest.approx(abs(d_invariant(z, w)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(min_magnitude=0, max_magnitude=50),
       st.complex_numbers(min_magnitude=0, max_magnitude=50))
def test_d_modulus_at_most_one(u, v):
    z = u.real + 1j * (abs(u.imag) + 1e-3)
    w = v.real + 1j * (abs(v.imag) + 1e-3)
    val = abs(d_invariant(z, w))
    assert val <= 1 + 1e-12
    if abs(z - w) > 1e-6 * (1 + abs(z) + abs(w)):
        assert val < 1


def test_rho_symmetric_and_decreasing_along_ray():
    z = 0.3 + 1.0j
    ys = np.linspace(1.0, 6.0, 12)
    vals = [rho(z, 0.3 + 1j * y) for y in ys]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert rho(z, 2j) == pytest.approx(rho(2j, z))


def test_cayley_roundtrip_and_normalization():
    assert cayley(1j) == pytest.approx(0j, abs=1e-15)
    assert cayley_inverse(0j) == pytest.approx(1j, abs=1e-15)
    rng = np.random.default_rng(2)
    z = hp_points(rng, 100)
    assert np.max(np.abs(cayley_inverse(cayley(z)) - z)) < 1e-13 * np.max(np.abs(z))


def test_cayley_preserves_d():
    rng = np.random.default_rng(3)
    z, w = hp_points(rng, 100), hp_points(rng, 100)
    lhs = np.abs(d_invariant(cayley(z), cayley(w), DISK))
    rhs = np.abs(d_invariant(z, w, HALF_PLANE))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_measure_density_values():
    nu0 = Measure(0.0, HALF_PLANE)
    assert measure_density(nu0, 1j) == pytest.approx(1.0)
    assert measure_density(nu0, 2j) == pytest.approx(0.25)
    for r in (2.0, 3.7):
        assert measure_density(Measure(r, HALF_PLANE), 1j) == pytest.approx(1.0)


def test_mobius_actions():
    from berezin.groups import S, T, GroupElement

    assert mobius_act(GroupElement.identity(), 0.3 + 0.9j) == pytest.approx(0.3 + 0.9j)
    assert mobius_act(S, 1j) == pytest.approx(1j)
    assert mobius_act(T, 1j) == pytest.approx(1 + 1j)


def test_point_invariants():
    with pytest.raises(ValueError):
        Point(1.0 - 0.5j, HALF_PLANE)
    with pytest.raises(ValueError):
        Point(1.5 + 0j, DISK)
