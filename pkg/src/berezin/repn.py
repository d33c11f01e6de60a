"""The projective representations: action, covariance, matrix coefficients,
and the formal dimension with its one-point Haar calibration.

The action is (pi_r(g) f)(z) = j(g^(-1), z)^(-r) f(g^(-1) z) with principal
powers; reading the modular factor from g^(-1) is what makes the change of
variables unitary, and it matches the evaluation-vector covariance
pi_r(g) e_z = (phase) j(g^(-1), z)^r e_{g^(-1) z}.

Coefficient integrals run in the disk model.  The Haar chart normalization
kappa is calibrated once so the formal dimension at r = 4 equals 3/pi, then
frozen; the analytic value kappa = 1/(2 pi) is a derived cross-check in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bergman import SpaceParams
from .geometry import DISK, HALF_PLANE, as_value, mobius_act
from .groups import GroupElement, HaarChart, automorphy_j, n_cocycle
from .quadrature import disk_domain, disk_tensor_rule, integrate2d, kernel_window


@dataclass(frozen=True)
class RepnContext:
    params: SpaceParams

    @property
    def r(self):
        return self.params.r

    @property
    def model(self):
        return self.params.model


def pi_act(ctx: RepnContext, g: GroupElement, f):
    """pi_r(g) f as a callable."""
    ginv = g.inverse()
    r = ctx.r

    def out(z):
        z = np.asarray(z, dtype=complex)
        j = automorphy_j(ginv, z)
        return np.exp(-r * np.log(j)) * f(mobius_act(ginv, z))

    return out


def representation_multiplier(ctx: RepnContext, g1: GroupElement,
                              g2: GroupElement) -> complex:
    """c with pi(g1 g2) = c * pi(g1) pi(g2), derived from the N cocycle."""
    n = n_cocycle(g2.inverse(), g1.inverse())
    return complex(np.exp(-2j * np.pi * ctx.r * float(n)))


def norm_squared(ctx: RepnContext, f, centers=(), tol=1e-8):
    """||f||^2 in H_r by quadrature."""
    p = ctx.params
    if p.model == DISK:
        dom = disk_domain(measure_weight=p.r)
    else:
        dom = kernel_window(list(centers) or [1j], p.r, tol * 1e-3,
                            measure_weight=p.r)

    def g(z):
        return np.abs(f(z)) ** 2

    return float(np.real(integrate2d(g, dom, tol=tol, max_panels=6000,
                                     strict=False).value))


def unitarity_check(ctx: RepnContext, g: GroupElement, w, tol=1e-8):
    """Compare ||pi(g) e_w|| with ||e_w||; returns the relative defect."""
    p = ctx.params
    e_w = p.eval_vector(w)
    moved = mobius_act(g, complex(as_value(w)))
    n1 = norm_squared(ctx, pi_act(ctx, g, e_w), centers=[moved], tol=tol)
    n2 = p.eval_norm_sq(w)
    return abs(n1 - n2) / n2


def eval_covariance_check(ctx: RepnContext, g: GroupElement, z, w_samples=None):
    """pi(g) moves e_z to a multiple of e_{g z}: modulus form of the covariance.

    Checks |<pi(g) e_z, e_w>| = |j(g, z)|^(-r) |<e_{g z}, e_w>| pointwise;
    both sides are closed forms, so this exercises only branch handling.
    (The exponent -r is forced by unitarity together with
    Im(g z) = Im z / |j(g, z)|^2.)
    """
    p = ctx.params
    zv = complex(as_value(z))
    if w_samples is None:
        w_samples = ([0.2 + 0.9j, -1.1 + 0.4j, 0.7 + 2.2j]
                     if p.model == HALF_PLANE
                     else [0.0j, 0.3 - 0.2j, -0.45 + 0.31j])
    zmoved = mobius_act(g, zv)
    jfac = abs(automorphy_j(g, zv)) ** (-p.r)
    worst = 0.0
    for w in w_samples:
        # <pi(g) e_z, e_w> = (pi(g) e_z)(w)
        lhs = abs(pi_act(ctx, g, p.eval_vector(zv))(np.asarray(w)))
        rhs = jfac * abs(p.kernel(w, zmoved))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def coefficient(ctx: RepnContext, g: GroupElement, tol=1e-8) -> complex:
    """<pi_r(g) 1, 1> on the disk, by quadrature.

    The integrand j(g^-1, z)^(-r) has a boundary layer when g moves the
    origin far out; the adaptive polar rule resolves it.
    """
    if ctx.model != DISK:
        raise ValueError("coefficient integrals use the disk model")
    r = ctx.r
    ginv = g.inverse()

    def f(z):
        return np.exp(-r * np.log(automorphy_j(ginv, z)))

    dom = disk_domain(measure_weight=r)
    dom.initial_split = (4, 8)
    return complex(integrate2d(f, dom, tol=tol, max_panels=6000, strict=False).value)


def coefficient_modulus_formula(ctx: RepnContext, g: GroupElement) -> float:
    """pi / ((r-1) |a|^r), the residue value of |<pi_r(g) 1, 1>|."""
    a = g.entries[0][0]
    return float(np.pi / ((ctx.r - 1.0) * abs(a) ** ctx.r))


def _coefficient_batch(r, w_nodes, n_rad=90, n_ang=256):
    """|<pi(g_w) 1, 1>|^2 for a batch of transvection parameters w.

    Tensor rule shared across nodes; nodes with |w| above the trapezoid's
    comfort zone fall back to the adaptive path.
    """
    w_nodes = np.asarray(w_nodes, dtype=complex)
    out = np.empty(len(w_nodes))
    done = np.zeros(len(w_nodes), dtype=bool)
    # the trapezoid's angular error scales like (|w| t)^n_ang, so the angular
    # count ramps up toward the boundary
    for cap, ang in ((0.88, n_ang), (0.95, 512), (1.0, 4096)):
        sel = (~done) & (np.abs(w_nodes) <= cap)
        if not np.any(sel):
            continue
        z, wt = disk_tensor_rule(n_rad=n_rad, n_ang=ang, measure_weight=r)
        ws = w_nodes[sel]
        s = 1.0 / np.sqrt(1.0 - np.abs(ws) ** 2)
        a, b = s, ws * s
        # j(g_w^-1, z) = -conj(b) z + a  for g = [[a, b], [conj b, conj a]]
        j = -np.conj(b)[:, None] * z[None, :] + a[:, None]
        vals = np.exp(-r * np.log(j)) @ wt
        out[sel] = np.abs(vals) ** 2
        done |= sel
    return out


@dataclass
class HaarRule:
    """Discretization of the Haar chart: disk nodes, weights, fiber volume."""

    chart: HaarChart
    nodes: np.ndarray
    weights: np.ndarray
    t_max: float

    def integrate_radial(self, values):
        """Sum a right-rotation-invariant integrand sampled on the nodes."""
        return self.chart.kappa * self.chart.fiber_volume() * float(
            np.real(np.sum(values * self.weights)))


def haar_quadrature(kappa=None, t_max=0.993, n_rad=140, n_ang=8) -> HaarRule:
    """Node/weight rule for the Haar chart over the transvection leg."""
    chart = HaarChart(kappa=1.0 if kappa is None else kappa, model=DISK)
    z, wt = disk_tensor_rule(n_rad=n_rad, n_ang=n_ang, t_max=t_max,
                             measure_weight=0.0)
    return HaarRule(chart, z, np.real(wt), t_max)


def _formal_dimension_raw(r, rule: HaarRule, tol=1e-7):
    """||1||^4 / [kappa^(-1) normalized coefficient integral], pre-calibration.

    The boundary band t > t_max enters through the residue closed form,
    which is verified pointwise elsewhere; the band carries a fraction
    (1 - t_max^2)^(r-1) of the mass.
    """
    vals = _coefficient_batch(r, rule.nodes)
    i_quad = float(np.sum(vals * rule.weights))
    band = (np.pi / (r - 1.0)) ** 2 * np.pi * (1 - rule.t_max**2) ** (r - 1) / (r - 1)
    i_raw = i_quad + band

    def one(z):
        return np.ones_like(np.real(z))

    dom = disk_domain(measure_weight=r)
    norm1 = float(np.real(integrate2d(one, dom, tol=tol, strict=False).value))
    return norm1**2 / (rule.chart.fiber_volume() * i_raw)


_KAPPA_CACHE = {}


def calibrate_haar(t_max=0.993, n_rad=140) -> float:
    """kappa frozen so the formal dimension at r = 4 is exactly 3/pi."""
    key = (t_max, n_rad)
    if key not in _KAPPA_CACHE:
        rule = haar_quadrature(kappa=1.0, t_max=t_max, n_rad=n_rad)
        raw = _formal_dimension_raw(4.0, rule)
        _KAPPA_CACHE[key] = raw / (3.0 / np.pi)
    return _KAPPA_CACHE[key]


def formal_dimension(ctx: RepnContext, t_max=0.993, n_rad=140, tol=1e-7) -> float:
    """d_pi = ||1||^4 / integral over G of |<pi(g) 1, 1>|^2 dg."""
    kappa = calibrate_haar(t_max=t_max, n_rad=n_rad)
    rule = haar_quadrature(kappa=kappa, t_max=t_max, n_rad=n_rad)
    return _formal_dimension_raw(ctx.r, rule, tol=tol) / kappa


def schur_independence(ctx: RepnContext, z_list, t_max=0.993, n_rad=140,
                       n_fiber=48):
    """d_pi computed with eta = e_z for several z; Schur says they agree.

    By covariance |<pi(g) e_z, e_z>|^2 = ||e_z||^4 rho(z, g z)^r exactly, so
    this probes the Haar leg with a different coefficient family than the
    constant vector.  For z away from the basepoint the rotation fiber is
    no longer trivial and is discretized explicitly.
    """
    from .geometry import rho as rho_inv

    if ctx.model != DISK:
        raise ValueError("disk model only")
    p = ctx.params
    kappa = calibrate_haar(t_max=t_max, n_rad=n_rad)
    rule = haar_quadrature(kappa=kappa, t_max=t_max, n_rad=n_rad)
    thetas = 2 * np.pi * np.arange(n_fiber) / n_fiber
    out = []
    for z in z_list:
        zv = complex(as_value(z))
        vals = np.empty(len(rule.nodes))
        for i, w in enumerate(rule.nodes):
            s = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
            g = GroupElement.su11(s, complex(w) * s)
            moved = np.array([mobius_act(
                g * GroupElement.su11(np.exp(1j * th / 2), 0.0), zv)
                for th in thetas])
            vals[i] = float(np.mean(rho_inv(zv, moved, DISK) ** p.r))
        integral = kappa * rule.chart.fiber_volume() * float(np.sum(vals * rule.weights))
        tail = np.pi * (1 - t_max**2) ** (p.r - 1) / (p.r - 1)
        integral += kappa * rule.chart.fiber_volume() * tail
        out.append(1.0 / integral)
    return out
