"""Deterministic adaptive integration over the disk, H, F, and kernel windows.

The base rule is a tensor Gauss-Legendre panel with an embedded lower-order
rule for the error estimate; panels are split 4-way, worst error first, with
a deterministic tie order.  Coordinates: polar on the disk, (x, log y) on the
half-plane (hyperbolic kernels become well conditioned there), and a mapped
rectangle over the modular fundamental domain with the cusp handled by a
closed-form tail bound.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .geometry import DISK, HALF_PLANE, height

__all__ = [
    "QuadResult", "AccuracyError", "BudgetError", "Domain",
    "disk_domain", "half_plane_rect", "fundamental_domain", "kernel_window",
    "integrate2d", "integrate_iterated", "grid_rule", "cusp_tail_bound",
    "invariant_ball_tail",
]


class AccuracyError(RuntimeError):
    """Adaptive refinement stopped before reaching the requested tolerance."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class BudgetError(AccuracyError):
    """The evaluation budget was exhausted."""


@dataclass
class QuadResult:
    value: complex
    error_estimate: float
    evaluations: int

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(np.real(self.value))


_GL_CACHE = {}


def _gl(n):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (x, w)
    return _GL_CACHE[n]


class Domain:
    """A 2D region described by a map from the unit square.

    ``chart(u, v)`` maps arrays in [0,1]^2 to complex points; ``weight(u, v)``
    is the full density (measure density times Jacobian) against du dv.
    """

    def __init__(self, chart, weight, kind="generic", tail=0.0, initial_split=(1, 1)):
        self.chart = chart
        self.weight = weight
        self.kind = kind
        self.tail = tail  # bound for invariant mass outside the chart
        self.initial_split = initial_split


def disk_domain(measure_weight=0.0, t_max=1.0):
    """Polar chart of {|z| < t_max} with density (1-|z|^2)^(w-2) dxdy."""

    def chart(u, v):
        return (u * t_max) * np.exp(2j * np.pi * v)

    def weight(u, v):
        t = u * t_max
        dens = (1.0 - t**2) ** (measure_weight - 2.0)
        return dens * t * t_max * 2 * np.pi

    return Domain(chart, weight, kind=DISK)


def half_plane_rect(x0, x1, y0, y1, measure_weight=0.0):
    """Chart of [x0,x1] x [y0,y1] in (x, log y) with density y^(w-2) dxdy."""
    u0, u1 = np.log(y0), np.log(y1)

    def chart(u, v):
        return (x0 + (x1 - x0) * u) + 1j * np.exp(u0 + (u1 - u0) * v)

    def weight(u, v):
        y = np.exp(u0 + (u1 - u0) * v)
        dens = y ** (measure_weight - 2.0)
        return dens * y * (x1 - x0) * (u1 - u0)

    return Domain(chart, weight, kind=HALF_PLANE)


def fundamental_domain(cusp_height=30.0, measure_weight=0.0, shift=0.0):
    """The region |Re z| <= 1/2, |z| >= 1, Im z <= Y, optionally translated.

    The vertical coordinate interpolates log-linearly between the unit-circle
    floor and the cusp height, so panels align with the hyperbolic geometry.
    """
    logY = np.log(cusp_height)

    def chart(u, v):
        x = u - 0.5
        lo = 0.5 * np.log1p(-x**2)  # log sqrt(1-x^2)
        return (x + shift) + 1j * np.exp(lo + (logY - lo) * v)

    def weight(u, v):
        x = u - 0.5
        lo = 0.5 * np.log1p(-x**2)
        y = np.exp(lo + (logY - lo) * v)
        dens = y ** (measure_weight - 2.0)
        return dens * y * (logY - lo)

    return Domain(chart, weight, kind="fundamental-domain")


def kernel_window(centers, decay_r, eps_mass=1e-10, measure_weight=0.0, margin=1.0):
    """Sheared half-plane window adapted to kernels decaying like rho^decay_r.

    ``centers`` is a point or a list of points; the window covers the region
    where any rho(center_i, .) exceeds the threshold s chosen so that the
    invariant mass of rho^decay_r outside it is below eps_mass per center.

    Chart coordinates (v, w) around the centroid (x_m, u_m), u = log y:
    x = x_m + 2 sinh(v) sqrt(y y_m), y = exp(u_m + w).  In them
    rho(centroid, .) = 1/(cosh^2 v + sinh^2(w/2)), so the kernel is a smooth
    compactly concentrated bump and tensor panels resolve it.
    """
    if np.ndim(centers) == 0:
        centers = [centers]
    cs = np.asarray([complex(c) for c in centers])
    if decay_r <= 1:
        raise ValueError("kernel windows need invariant decay r > 1")
    s = min(0.5, (eps_mass * (2 * decay_r - 2) / (4 * np.pi)) ** (1.0 / (decay_r - 1)))
    v_s = np.arccosh(1.0 / np.sqrt(s))
    w_s = 2.0 * np.arcsinh(1.0 / np.sqrt(s))
    xm = float(np.mean(cs.real))
    um = float(np.mean(np.log(cs.imag)))
    ym = np.exp(um)
    w_off = np.log(cs.imag) - um
    v_off = np.arcsinh((cs.real - xm) / (2.0 * np.sqrt(cs.imag * ym)))
    V = float(np.max(np.abs(v_off))) + v_s + margin
    W = float(np.max(np.abs(w_off))) + w_s + margin

    def chart(a, b):
        v = (2.0 * a - 1.0) * V
        w = (2.0 * b - 1.0) * W
        y = np.exp(um + w)
        return (xm + 2.0 * np.sinh(v) * np.sqrt(y * ym)) + 1j * y

    def weight(a, b):
        v = (2.0 * a - 1.0) * V
        w = (2.0 * b - 1.0) * W
        y = np.exp(um + w)
        jac = 2.0 * np.cosh(v) * np.sqrt(y * ym) * y * (2 * V) * (2 * W)
        return y ** (measure_weight - 2.0) * jac

    dom = Domain(chart, weight, kind=HALF_PLANE,
                 tail=len(cs) * invariant_ball_tail(decay_r, s))
    dom.initial_split = (max(2, min(10, int(np.ceil(V)))),
                         max(2, min(10, int(np.ceil(W / 1.6)))))
    return dom


def invariant_ball_tail(r, rho_threshold):
    """nu_0 mass of |d|^(2r) outside {rho >= rho_threshold}, closed form.

    integral over dist > R of sech^(2r)(rho/2) sinh(rho) = 4 cosh^(2-2r)(R/2)/(2r-2),
    and rho = sech^2(dist/2) pins cosh(R/2) = rho_threshold^(-1/2).
    """
    if r <= 1:
        return np.inf
    return 2 * np.pi * 2.0 * rho_threshold ** (r - 1) / (2.0 * r - 2.0)


def cusp_tail_bound(decay_class, Y, constant=1.0, rate=None, width=1.0):
    """Rigorous bound for the integral of the full integrand over Im z > Y.

    decay_class "power": integrand <= C y^(-p) with p = rate > 1;
    decay_class "exponential": integrand <= C exp(-rate y).  Anything else is
    refused: the caller must certify decay.
    """
    if decay_class == "power":
        p = rate
        if p is None or p <= 1:
            raise ValueError("power decay needs certified rate p > 1")
        return width * constant * Y ** (1.0 - p) / (p - 1.0)
    if decay_class == "exponential":
        if rate is None or rate <= 0:
            raise ValueError("exponential decay needs a positive rate")
        return width * constant * np.exp(-rate * Y) / rate
    raise ValueError(f"unknown decay class {decay_class!r}: refusing to bound the tail")


def _panel_values(f, dom, box, n_lo, n_hi):
    (a0, a1), (b0, b1) = box
    vals = []
    evals = 0
    for n in (n_lo, n_hi):
        x, w = _gl(n)
        u = a0 + (a1 - a0) * (x + 1) / 2
        v = b0 + (b1 - b0) * (x + 1) / 2
        U, V = np.meshgrid(u, v, indexing="ij")
        z = dom.chart(U, V)
        wt = dom.weight(U, V) * np.outer(w, w) * ((a1 - a0) * (b1 - b0) / 4)
        fv = f(z)
        vals.append(np.sum(fv * wt))
        evals += z.size
    return vals[0], vals[1], evals


def integrate2d(f, domain: Domain, tol=1e-8, abs_floor=1e-14, max_panels=4000,
                n_lo=5, n_hi=8, strict=True):
    """Globally adaptive tensor-panel integration of ``f`` over ``domain``.

    ``f`` must accept complex ndarrays.  Deterministic: the refinement order
    and the final fixed-order summation are independent of timing.
    """
    nx, ny = getattr(domain, "initial_split", (1, 1))
    boxes = [((i / nx, (i + 1) / nx), (j / ny, (j + 1) / ny))
             for i in range(nx) for j in range(ny)]
    heap = []
    results = {}
    counter = 0
    total_evals = 0
    for box in boxes:
        lo, hi, ev = _panel_values(f, domain, box, n_lo, n_hi)
        total_evals += ev
        results[counter] = (box, hi, abs(hi - lo))
        heapq.heappush(heap, (-abs(hi - lo), counter))
        counter += 1

    while True:
        value = np.sum([v for (_, v, _) in results.values()])
        err = float(np.sum([e for (_, _, e) in results.values()]))
        goal = max(tol * abs(value), abs_floor)
        if err <= goal:
            break
        if len(results) >= max_panels:
            msg = f"no convergence within {max_panels} panels (err ~ {err:.3g})"
            partial = QuadResult(value, err + domain.tail, total_evals)
            if strict:
                raise AccuracyError(msg, partial)
            return partial
        neg_err, idx = heapq.heappop(heap)
        box, _, _ = results.pop(idx)
        (a0, a1), (b0, b1) = box
        am, bm = (a0 + a1) / 2, (b0 + b1) / 2
        for sub in (((a0, am), (b0, bm)), ((a0, am), (bm, b1)),
                    ((am, a1), (b0, bm)), ((am, a1), (bm, b1))):
            lo, hi, ev = _panel_values(f, domain, sub, n_lo, n_hi)
            total_evals += ev
            results[counter] = (sub, hi, abs(hi - lo))
            heapq.heappush(heap, (-abs(hi - lo), counter))
            counter += 1

    ordered = [results[k] for k in sorted(results)]
    value = complex(np.sum([v for (_, v, _) in ordered]))
    err = float(np.sum([e for (_, _, e) in ordered])) + domain.tail
    return QuadResult(value, err, total_evals)


def integrate_iterated(f, domains, tol_schedule, max_panels=4000, strict=True):
    """Iterated integral; the innermost domain is listed last.

    ``f`` has signature f(z1, ..., zk) with the last argument vectorized;
    tolerances must tighten inward.  Dimensions 4 and 6 (2 or 3 nested 2D
    integrals) are what the calculus needs.
    """
    if len(domains) != len(tol_schedule):
        raise ValueError("one tolerance per domain")
    if any(t_in >= t_out for t_out, t_in in zip(tol_schedule, tol_schedule[1:])):
        raise ValueError("inner tolerances must be strictly tighter than outer")
    evals = [0]
    inner_err = [0.0]

    def level(k, fixed):
        dom, tol = domains[k], tol_schedule[k]
        if k == len(domains) - 1:
            def g(z):
                return f(*fixed, z)
            res = integrate2d(g, dom, tol=tol, max_panels=max_panels, strict=strict)
            evals[0] += res.evaluations
            inner_err[0] = max(inner_err[0], res.error_estimate)
            return res.value

        def g(z):
            flat = np.asarray(z).ravel()
            out = np.array([level(k + 1, fixed + (zi,)) for zi in flat])
            return out.reshape(np.shape(z))

        res = integrate2d(g, dom, tol=tol, max_panels=max_panels, strict=strict)
        evals[0] += res.evaluations
        if k == 0:
            inner_err[0] += res.error_estimate
        return res.value

    value = level(0, ())
    return QuadResult(value, inner_err[0], evals[0])


def composite_axis(level, panel_order=8):
    """Composite Gauss nodes on [0, 1]: uniform panels of a fixed order.

    Uniform panels resolve integrands concentrated mid-window far better
    than a single high-order rule, whose nodes crowd the endpoints.
    """
    k = max(1, int(round(level / panel_order)))
    x, w = _gl(min(panel_order, level))
    nodes, weights = [], []
    for i in range(k):
        a, b = i / k, (i + 1) / k
        nodes.append(a + (b - a) * (x + 1) / 2)
        weights.append(w * (b - a) / 2)
    return np.concatenate(nodes), np.concatenate(weights)


def grid_rule(domain: Domain, level=24, panel_order=8):
    """Fixed tensor rule (points, weights) on a domain, for matrix contractions.

    Two calls with levels L and 2L/3 give a practical error estimate for the
    smoke-tolerance multiple integrals.
    """
    u, w = composite_axis(level, panel_order)
    U, V = np.meshgrid(u, u, indexing="ij")
    z = domain.chart(U, V)
    wt = domain.weight(U, V) * np.outer(w, w)
    return z.ravel(), wt.ravel()


def disk_tensor_rule(n_rad=60, n_ang=64, t_max=None, measure_weight=2.0,
                     trig_radial=False):
    """Radial Gauss x angular trapezoid rule on the disk.

    The angular rule is exact for trigonometric polynomials, which makes this
    the workhorse for coefficient integrals of analytic integrands.  With
    ``trig_radial`` the radial variable is t = sin(theta), which turns the
    boundary factor (1-t^2)^(w-2) into a smooth cosine power for w > 1.5.
    """
    if t_max is None:
        t_max = 1.0 - 1e-12 if measure_weight >= 2 else 1.0 - 1e-9
    x, w = _gl(n_rad)
    if trig_radial:
        th_max = np.arcsin(t_max)
        theta = (x + 1) / 2 * th_max
        t = np.sin(theta)
        wt_rad = w / 2 * th_max * np.cos(theta)
    else:
        t = (x + 1) / 2 * t_max
        wt_rad = w / 2 * t_max
    th = 2 * np.pi * np.arange(n_ang) / n_ang
    wt_ang = np.full(n_ang, 2 * np.pi / n_ang)
    z = t[:, None] * np.exp(1j * th[None, :])
    dens = (1.0 - t[:, None] ** 2) ** (measure_weight - 2.0)
    wt = dens * t[:, None] * wt_rad[:, None] * wt_ang[None, :]
    return z.ravel(), wt.ravel()
