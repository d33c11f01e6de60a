from fractions import Fraction

import numpy as np
import pytest

from berezin.groups import S, T, modular_random, t_power
from berezin.modular import (ModularForm, arg_delta, coboundary_residual,
                             cusp_sup_constant, dedekind_sum, delta, delta_form,
                             eisenstein, eta, eval_form_reduced, ln_delta,
                             ln_delta_reduced, log_branch_count,
                             log_branch_count_tracked, petersson,
                             rademacher_cochain, rademacher_phi, ramanujan_tau)


def test_delta_at_i_real_positive():
    v = complex(delta(1j))
    assert v.real > 0
    assert abs(v.imag) < 1e-18


def test_delta_periodicity_and_inversion():
    z = 0.3 + 1.1j
    assert complex(delta(z + 1)) == pytest.approx(complex(delta(z)), rel=1e-14)
    z = 2j
    assert abs(complex(delta(-1 / z))) == pytest.approx(
        abs(z) ** 12 * abs(complex(delta(z))), rel=1e-12)


def test_delta_two_independent_series():
    # eta-product coefficients vs the Eisenstein discriminant expression
    z = 0.2 + 0.9j
    df = delta_form()
    assert complex(df(z)) == pytest.approx(complex(delta(z)), rel=1e-13)
    e4, e6 = eisenstein(4), eisenstein(6)
    alt = (complex(e4(z)) ** 3 - complex(e6(z)) ** 2) / 1728
    assert alt == pytest.approx(complex(delta(z)), rel=1e-12)


def test_eta_24th_power():
    z = 0.1 + 0.8j
    assert complex(eta(z)) ** 24 == pytest.approx(complex(delta(z)), rel=1e-12)


def test_tau_values():
    assert ramanujan_tau(8) == [1, -24, 252, -1472, 4830, -6048, -16744, 84480]


def test_truncation_floor_raises():
    with pytest.raises(ValueError):
        ln_delta(0.3 + 1e-7j)


def test_reduced_branch_agrees_where_both_work():
    for z in (0.3 + 1.4j, -0.2 + 0.8j, 0.49 + 0.6j, 3.7 + 2.2j):
        assert complex(ln_delta_reduced(z)) == pytest.approx(
            complex(ln_delta(z)), abs=1e-12)
    # and extends smoothly far below the series floor
    assert np.isfinite(arg_delta(0.123 + 1e-5j))


def test_dedekind_sums():
    assert dedekind_sum(1, 2) == 0
    assert dedekind_sum(1, 3) == Fraction(1, 18)
    with pytest.raises(ValueError):
        dedekind_sum(2, 4)


def test_dedekind_reciprocity():
    import math

    rng = np.random.default_rng(31)
    done = 0
    while done < 10:
        c = int(rng.integers(2, 80))
        d = int(rng.integers(1, c))
        if math.gcd(c, d) != 1:
            continue
        lhs = dedekind_sum(d, c) + dedekind_sum(c, d)
        rhs = Fraction(-1, 4) + (Fraction(c, d) + Fraction(d, c)
                                 + Fraction(1, c * d)) / 12
        assert lhs == rhs
        done += 1


def test_rademacher_values_and_tracking():
    assert rademacher_phi(T) == 1
    assert rademacher_phi(S) == 0
    assert log_branch_count(T) == 1
    assert log_branch_count(t_power(5)) == 5
    rng = np.random.default_rng(32)
    for _ in range(25):
        g = modular_random(rng)
        assert log_branch_count(g) == log_branch_count_tracked(g)


def test_coboundary_identity_exact():
    assert rademacher_cochain(T) == Fraction(-1, 12)
    rng = np.random.default_rng(33)
    for _ in range(100):
        g1, g2 = modular_random(rng), modular_random(rng)
        assert coboundary_residual(g1, g2) == 0


def test_petersson_products():
    df = delta_form()
    p = petersson(df, df, tol=1e-9)
    assert np.real(p.value) > 0
    assert abs(np.imag(p.value)) < 1e-6 * np.real(p.value)
    # two quadrature strategies: different cusp heights
    p2 = petersson(df, df, tol=1e-9, cusp_height=6.0)
    assert np.real(p.value) == pytest.approx(np.real(p2.value), rel=1e-8)
    # sesquilinearity
    p_scaled = petersson(df, df.scaled(1j), tol=1e-8)
    assert complex(p_scaled.value) == pytest.approx(-1j * complex(p.value),
                                                    rel=1e-6)
    zero = ModularForm(12, (0.0,), q_min=1)
    assert abs(complex(petersson(df, zero).value)) == 0


def test_petersson_refuses_noncusp():
    with pytest.raises(ValueError):
        petersson(eisenstein(4), eisenstein(4))
    with pytest.raises(ValueError):
        petersson(delta_form(), eisenstein(6))


def test_automorphy_modulus_sweep():
    rng = np.random.default_rng(34)
    df = delta_form()
    worst = 0.0
    for _ in range(100):
        g = modular_random(rng)
        z = complex(rng.normal(0, 1.2) + 1j * np.exp(rng.normal(0.3, 0.5)))
        from berezin.groups import automorphy_j, mobius_act

        lhs = abs(eval_form_reduced(df, mobius_act(g, z)))
        rhs = abs(automorphy_j(g, z)) ** 12 * abs(eval_form_reduced(df, z))
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert worst < 1e-10


def test_cusp_sup_constant_bounds():
    df = delta_form()
    c = cusp_sup_constant(df, 2.0)
    ys = np.linspace(2.0, 6.0, 9)
    vals = np.abs(delta(0.37 + 1j * ys))
    assert np.all(vals <= c * np.exp(-2 * np.pi * ys) * (1 + 1e-12))
