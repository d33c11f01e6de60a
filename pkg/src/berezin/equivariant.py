"""Modular-invariant symbols and the trace over the fundamental domain.

Two kernel constructions:

* automorphic pairs: k(z, zeta~) = (c_n / c_{n+2k}) conj(f(zeta)) g(z)
  pf(z, zeta)^{2k} for weight-2k forms f, g; exactly invariant because the
  pair-factor power absorbs both automorphy factors.
* truncated Poincare averages of a finite-rank seed, with the word-length
  tail reported as the invariance defect.

The trace is tau(k) = area(F)^(-1) * integral over F of k(z, z~) d nu_0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bergman import SpaceParams, normalization_c
from .geometry import HALF_PLANE, as_value, d_invariant, mobius_act, pair_factor
from .groups import GroupElement, enumerate_modular_ball
from .modular import ModularForm, cusp_sup_constant, eval_form_reduced
from .quadrature import (cusp_tail_bound, fundamental_domain, integrate2d,
                         kernel_window)
from .symbols import FiniteRankOp


@dataclass(frozen=True)
class AutoformPairKernel:
    """Gamma-invariant symbol built from two weight-2k forms on H_{n+2k}."""

    f: ModularForm
    g: ModularForm
    base_n: float
    params: SpaceParams = None

    def __post_init__(self):
        if self.f.weight != self.g.weight:
            raise ValueError("pair needs equal weights")
        if not self.base_n > 1:
            raise ValueError("growth condition: base weight n > 1")
        if self.params is None:
            object.__setattr__(
                self, "params",
                SpaceParams(self.base_n + self.f.weight, HALF_PLANE))

    @property
    def weight(self):
        return self.f.weight

    @property
    def ratio(self):
        return (normalization_c(self.base_n, HALF_PLANE)
                / normalization_c(self.base_n + self.weight, HALF_PLANE))

    def symbol(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        return (self.ratio * np.conj(eval_form_reduced(self.f, w))
                * eval_form_reduced(self.g, z)
                * pair_factor(z, w, HALF_PLANE) ** self.weight)

    def symbol_t(self, z, w):
        return self.symbol(z, w) * self.params.pf(z, w) ** -self.params.r

    def diagonal(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.ratio * np.conj(eval_form_reduced(self.f, z))
                * eval_form_reduced(self.g, z) * np.imag(z) ** self.weight)

    def pair_density(self, z, eta, transposed=False):
        """|k(eta, z~)|^2 |d(z, eta)|^(2r) in overflow-safe invariant form.

        Equals ratio^2 Psi_f(z) Psi_g(eta) rho(z, eta)^n (or f, g swapped
        when transposed), with Psi_h = |h|^2 (Im .)^(2k) the invariant
        Petersson density.
        """
        def psi(form, w):
            # Psi is Gamma-invariant: evaluate at the reduced point, where
            # all factors are O(1), instead of pairing huge |f| with tiny y^2k
            from .groups import reduce_points

            w = np.atleast_1d(np.asarray(w, dtype=complex))
            w0, _ = reduce_points(w.ravel())
            val = np.abs(form(w0)) ** 2 * np.imag(w0) ** self.weight
            return val.reshape(w.shape)

        first, second = (self.g, self.f) if transposed else (self.f, self.g)
        rho = np.abs(d_invariant(z, eta, HALF_PLANE)) ** 2
        return (self.ratio**2 * psi(first, z) * psi(second, eta)
                * rho**self.base_n)

    def adjoint(self):
        return AutoformPairKernel(self.g, self.f, self.base_n, self.params)

    def diagonal_sup(self, y_floor=np.sqrt(3) / 2):
        cf = cusp_sup_constant(self.f, y_floor)
        cg = cusp_sup_constant(self.g, y_floor)
        return self.ratio * cf * cg  # times y^2k e^(-4 pi y) profile


@dataclass(frozen=True)
class PoincareKernel:
    """Word-length truncated Gamma-average of a finite-rank seed symbol."""

    seed: FiniteRankOp
    word_length: int

    @property
    def params(self):
        return self.seed.params

    def _ball(self):
        return enumerate_modular_ball(self.word_length)

    def symbol(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        acc = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for gamma in self._ball():
            acc = acc + self.seed.symbol(mobius_act(gamma, z), mobius_act(gamma, w))
        return acc

    def symbol_t(self, z, w):
        return self.symbol(z, w) * self.params.pf(z, w) ** -self.params.r

    def diagonal(self, z):
        return self.symbol(z, z)

    def truncation_estimate(self, z, w):
        """Size of the last word-length shell: a proxy for the dropped tail."""
        inner = {g.key() for g in enumerate_modular_ball(self.word_length - 1)}
        shell = [g for g in self._ball() if g.key() not in inner]
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        est = np.zeros(np.broadcast(z, w).shape, dtype=float)
        for gamma in shell:
            est = est + np.abs(
                self.seed.symbol(mobius_act(gamma, z), mobius_act(gamma, w)))
        return est


def gamma_invariance_check(kernel, samples, gammas=None, rng=None):
    """max |k(gamma z, gamma zeta) - k(z, zeta)| over samples and gammas."""
    from .groups import modular_random

    rng = rng or np.random.default_rng(23)
    if gammas is None:
        gammas = [modular_random(rng) for _ in range(6)]
    worst = 0.0
    worst_rel = 0.0
    for (z, w) in samples:
        zv, wv = complex(as_value(z)), complex(as_value(w))
        base = kernel.symbol(np.asarray(zv), np.asarray(wv))
        for g in gammas:
            moved = kernel.symbol(np.asarray(mobius_act(g, zv)),
                                  np.asarray(mobius_act(g, wv)))
            diff = abs(complex(moved - base))
            worst = max(worst, diff)
            worst_rel = max(worst_rel, diff / max(abs(complex(base)), 1e-300))
    return {"abs": worst, "rel": worst_rel}


def covolume(tol=1e-9, cusp_height=40.0):
    """nu_0-area of the modular fundamental domain (pi/3 classically).

    The strip above the cusp height has the exact area 1/Y, which is added
    back in; the quadrature covers the compact part.
    """
    dom = fundamental_domain(cusp_height=cusp_height, measure_weight=0.0)
    res = integrate2d(lambda z: np.ones_like(np.real(z)), dom, tol=tol,
                      max_panels=6000, strict=False)
    return float(np.real(res.value)) + 1.0 / cusp_height


def gamma_trace(kernel, tol=1e-8, cusp_height=8.0, translate=None,
                area=None, cusp_diagonal_limit=0.0) -> complex:
    """(1 / area F) * integral over F of the diagonal, against nu_0.

    ``translate``: an optional modular element gamma; the integral then runs
    over gamma F, which must give the same answer by invariance.
    ``cusp_diagonal_limit``: the certified limit of the diagonal at the cusp
    (zero for cusp-form pair kernels); its strip mass 1/Y is added back.
    """
    dom = fundamental_domain(cusp_height=cusp_height, measure_weight=0.0)
    area_f = covolume() if area is None else area

    def f(z):
        if translate is not None:
            z = mobius_act(translate, z)
        return kernel.diagonal(z)

    res = integrate2d(f, dom, tol=tol, max_panels=6000, strict=False)
    tail = cusp_diagonal_limit / cusp_height
    return complex((res.value + tail) / area_f)


def sheared_nu0_grid(decay_r, eps_mass=1e-7, level=44):
    """Universal (v, w) rule for nu_0-integrals of rho^decay_r-type kernels.

    In the sheared coordinates x = x_c + 2 sinh(v) y_c e^(w/2), y = y_c e^w
    around any center, d nu_0 = 2 cosh(v) exp(-w/2) dv dw and
    rho = 1/(cosh^2 v + sinh^2(w/2)) do not depend on the center, so one
    tensor rule serves every center at once.
    """
    from .quadrature import composite_axis

    s = min(0.5, (eps_mass * (2 * decay_r - 2) / (4 * np.pi))
            ** (1.0 / (decay_r - 1)))
    v_max = float(np.arccosh(1.0 / np.sqrt(s))) + 0.5
    w_max = 2.0 * float(np.arcsinh(1.0 / np.sqrt(s))) + 0.5
    x, wt = composite_axis(level)
    v = v_max * (2 * x - 1)
    w = w_max * (2 * x - 1)
    vv, ww = np.meshgrid(v, w, indexing="ij")
    base = (2.0 * np.cosh(vv) * np.exp(-ww / 2.0) * np.outer(wt, wt)
            * 4 * v_max * w_max)
    rho = 1.0 / (np.cosh(vv) ** 2 + np.sinh(ww / 2.0) ** 2)
    return vv.ravel(), ww.ravel(), base.ravel(), rho.ravel()


def _pair_trace_grid(psi_outer, psi_inner, base_n, c_r, area_f,
                     cusp_height=8.0, level_f=30, level_inner=44):
    """(1/areaF) c_r * int_F psi_outer(z) [int psi_inner rho^n d nu_0] d nu_0."""
    from .quadrature import grid_rule

    dom = fundamental_domain(cusp_height=cusp_height, measure_weight=0.0)
    zf, wf = grid_rule(dom, level=level_f)
    vv, ww, base, rho = sheared_nu0_grid(base_n, level=level_inner)
    x_c, y_c = zf.real[:, None], zf.imag[:, None]
    eta = (x_c + 2.0 * np.sinh(vv)[None, :] * y_c * np.exp(ww / 2.0)[None, :]
           + 1j * y_c * np.exp(ww)[None, :])
    inner_vals = psi_inner(eta.ravel()).reshape(eta.shape)
    inner = (inner_vals * (rho**base_n * base)[None, :]).sum(axis=1)
    outer = psi_outer(zf)
    return c_r / area_f * float(np.real(np.sum(outer * inner * wf)))


def traciality_check(kernel, level_f=30, level_inner=44, cusp_height=8.0):
    """tau(k* x k) vs tau(k x k*), each as an F x H contraction.

    The integrands differ by swapping which Petersson density sits in the
    fundamental domain, so agreement exercises the unfolding that makes tau
    a trace.  Returns (tau(k* x k), tau(k x k*)).
    """
    if not isinstance(kernel, AutoformPairKernel):
        raise ValueError("the grid traciality check needs an automorphic pair")
    from .groups import reduce_points

    p = kernel.params
    area_f = covolume()

    def psi_of(form):
        def psi(w):
            w = np.asarray(w, dtype=complex)
            w0, _ = reduce_points(w.ravel())
            val = np.abs(form(w0)) ** 2 * np.imag(w0) ** kernel.weight
            return val.reshape(w.shape)

        return psi

    psi_f, psi_g = psi_of(kernel.f), psi_of(kernel.g)
    ratio2 = kernel.ratio**2
    t1 = ratio2 * _pair_trace_grid(psi_f, psi_g, kernel.base_n, p.c, area_f,
                                   cusp_height, level_f, level_inner)
    t2 = ratio2 * _pair_trace_grid(psi_g, psi_f, kernel.base_n, p.c, area_f,
                                   cusp_height, level_f, level_inner)
    return t1, t2


def trace_vs_petersson(f: ModularForm, g: ModularForm, base_n, tol=1e-8,
                       calibration=None, cusp_height=8.0):
    """gamma_trace(pair kernel) against C * <g, f>_Petersson.

    ``calibration``: the constant C pinned at a reference pair; when None
    the exact ratio (c_n / c_{n+2k}) / area(F) is used as the reference.
    Returns (trace, C * petersson, C).
    """
    from .modular import petersson

    kernel = AutoformPairKernel(f, g, base_n)
    tr = gamma_trace(kernel, tol=tol, cusp_height=cusp_height)
    pet = petersson(g, f, tol=tol, cusp_height=cusp_height).value
    c_ref = calibration if calibration is not None else kernel.ratio / covolume()
    return complex(tr), complex(c_ref * pet), float(np.real(c_ref))


def dimension_report(r) -> float:
    """covol(Gamma) * (r - 1) / pi: the module-dimension line of the theory."""
    return covolume() * (r - 1.0) / np.pi


def petersson_density(form: ModularForm):
    """Psi(z) = |f(z)|^2 (Im z)^(2k): bounded, Gamma-invariant, cusp-decaying."""
    from .groups import reduce_points

    def psi(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        z0, _ = reduce_points(z.ravel())
        val = np.abs(form(z0)) ** 2 * np.imag(z0) ** form.weight
        return val.reshape(z.shape)

    return psi


def periodized_br_kernel(r, c_max=10, k_max=5):
    """K_r(z, eta) = c_r sum over Gamma of rho(gamma z, eta)^r.

    The orbit is enumerated by coprime bottom rows (c, d) (one PSL
    representative each); for a fixed row the remaining elements are the
    integer translates of gamma_0 z, so their contribution is an explicit
    k-sum.  Truncation decays like (c-row norm)^(-2r) and k^(-2r).
    """
    from math import gcd

    c_r = normalization_c(r, HALF_PLANE)
    d_max = int(1.2 * c_max) + 2
    rows = [(0, 1)]
    for c in range(1, c_max + 1):
        for d in range(-d_max, d_max + 1):
            if gcd(c, d) == 1:
                rows.append((c, d))

    def kernel(z, eta, term_floor=1e-9):
        """Evaluate on a (rows z) x (cols eta) pair of 1-d node arrays."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        eta = np.atleast_1d(np.asarray(eta, dtype=complex)).ravel()
        y_eta_max = float(np.max(eta.imag))
        x_lo, x_hi = float(np.min(eta.real)), float(np.max(eta.real))
        y_lo = float(np.min(eta.imag))
        acc = np.zeros((z.size, eta.size), dtype=float)
        ks = np.arange(-k_max, k_max + 1)
        for (c, d) in rows:
            if c == 0:
                w0 = z + 0.0
            else:
                a = pow(d, -1, c)
                b = (a * d - 1) // c
                w0 = (a * z + b) / (c * z + d)
            y0 = w0.imag
            for k in ks:
                # rho <= 4 y0 ymax / (dx^2 + (y0 + ymin)^2): prefilter, and
                # restrict the update to the rows where the term can matter
                dx = np.maximum(
                    np.maximum(x_lo - (w0.real + k), (w0.real + k) - x_hi), 0.0)
                bound = (4 * y0 * y_eta_max / (dx**2 + (y0 + y_lo) ** 2)) ** r
                mask = bound >= term_floor
                if not np.any(mask):
                    continue
                acc[mask] += np.abs(
                    d_invariant(w0[mask, None] + k, eta[None, :], HALF_PLANE)
                ) ** (2 * r)
        return c_r * acc

    return kernel


def word_ball_br_kernel(r, word_length=9):
    """The same periodization through the S/T word-ball enumeration."""
    c_r = normalization_c(r, HALF_PLANE)
    ball = enumerate_modular_ball(word_length)

    def kernel(z, eta, term_floor=1e-10):
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        eta = np.atleast_1d(np.asarray(eta, dtype=complex)).ravel()
        y_max, y_lo = float(np.max(eta.imag)), float(np.min(eta.imag))
        x_lo, x_hi = float(np.min(eta.real)), float(np.max(eta.real))
        acc = np.zeros((z.size, eta.size), dtype=float)
        for gamma in ball:
            moved = mobius_act(gamma, z)
            dx = np.maximum(np.maximum(x_lo - moved.real, moved.real - x_hi), 0.0)
            bound = (4 * moved.imag * y_max
                     / (dx**2 + (moved.imag + y_lo) ** 2)) ** r
            mask = bound >= term_floor
            if not np.any(mask):
                continue
            acc[mask] += np.abs(
                d_invariant(moved[mask, None], eta[None, :], HALF_PLANE)) ** (2 * r)
        return c_r * acc

    return kernel


def _orbit_relevance(pts, r, x_lo, x_hi, y_lo, y_max, im_floor=0.015):
    """rho^r upper bound of an orbit point against the eta-node box.

    Points below im_floor are dropped outright: horocycle counting makes
    the kernel mass carried below height h of order h^3 for the exponents
    in play, so the floor costs about 1e-5 of relative mass.
    """
    dx = np.maximum(np.maximum(x_lo - pts.real, pts.real - x_hi), 0.0)
    rel = (4 * pts.imag * y_max / (dx**2 + (pts.imag + y_lo) ** 2)) ** r
    return np.where(pts.imag >= im_floor, rel, 0.0)


def _orbit_points_rows(z, c_max, k_max, r, box, floor=1e-10):
    """(indices, points): the relevant orbit of each z-node, bottom rows.

    A point is kept when its rho^r bound against the eta-node box exceeds
    ``floor``; everything else cannot carry kernel mass.
    """
    from math import gcd

    x_lo, x_hi, y_lo, y_max = box
    idx_all, pts_all = [], []
    base_idx = np.arange(z.size)
    ks = np.arange(-k_max, k_max + 1)
    for c in range(0, c_max + 1):
        drange = [1] if c == 0 else [d for d in range(-int(1.2 * c_max) - 2,
                                                      int(1.2 * c_max) + 3)
                                     if gcd(c, d) == 1]
        for d in drange:
            if c == 0:
                w0 = z + 0.0
            else:
                a = pow(d, -1, c)
                b = (a * d - 1) // c
                w0 = (a * z + b) / (c * z + d)
            for k in ks:
                pts = w0 + k
                keep = _orbit_relevance(pts, r, x_lo, x_hi, y_lo, y_max) >= floor
                if np.any(keep):
                    idx_all.append(base_idx[keep])
                    pts_all.append(pts[keep])
    return np.concatenate(idx_all), np.concatenate(pts_all)


def _orbit_points_ball(z, word_length, r, box, floor=1e-10):
    """The same orbit collection via the S/T word-ball enumeration."""
    x_lo, x_hi, y_lo, y_max = box
    idx_all, pts_all = [], []
    base_idx = np.arange(z.size)
    for gamma in enumerate_modular_ball(word_length):
        moved = mobius_act(gamma, z)
        keep = _orbit_relevance(moved, r, x_lo, x_hi, y_lo, y_max) >= floor
        if np.any(keep):
            idx_all.append(base_idx[keep])
            pts_all.append(moved[keep])
    return np.concatenate(idx_all), np.concatenate(pts_all)


def br_pairing_check(f, g, r, c_max=14, word_length=13, cusp_height=3.0,
                     level_a=24, level_b=28, floor=1e-6):
    """<S_r f, S_r g> = <B_r f, g> through two independent pipelines.

    Both pipelines periodize the transform kernel to the fundamental domain
    (a naive unfold over H cannot sample the modular oscillation of an
    invariant symbol), but they enumerate the group differently (coprime
    bottom rows with translate sums vs the S/T word ball) and integrate on
    different grids.  ``f`` and ``g`` are Gamma-invariant callables with
    certified cusp decay.  Returns (pairing_A, pairing_B).
    """
    from .quadrature import grid_rule

    area_f = covolume()
    c_r = normalization_c(r, HALF_PLANE)

    def pairing(orbit, level):
        dom = fundamental_domain(cusp_height=cusp_height, measure_weight=0.0)
        zf, wf = grid_rule(dom, level=level)
        fv = wf * f(zf)
        gv = np.conj(g(zf))
        box = (float(np.min(zf.real)), float(np.max(zf.real)),
               float(np.min(zf.imag)), float(np.max(zf.imag)))
        idx, pts = orbit(zf, box)
        # V(w) = sum_eta rho(w, eta)^r (w f)(eta), one dot per orbit point,
        # then reduce the orbit sums back onto their base nodes
        contrib = np.zeros(zf.size)
        block = 4096
        for start in range(0, pts.size, block):
            sl = slice(start, start + block)
            v = (np.abs(d_invariant(pts[sl, None], zf[None, :], HALF_PLANE))
                 ** (2 * r)) @ fv
            np.add.at(contrib, idx[sl], np.real(v))
        return c_r * float(np.real(np.sum(gv * contrib * wf))) / area_f

    pair_a = pairing(
        lambda zz, box: _orbit_points_rows(zz, c_max, c_max, r, box, floor),
        level_a)
    pair_b = pairing(
        lambda zz, box: _orbit_points_ball(zz, word_length, r, box, floor),
        level_b)
    return pair_a, pair_b
