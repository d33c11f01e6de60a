"""The argument cocycles and the deformation-derivative functionals.

Pointwise data: phi(z, zeta) = i arg pf(z, zeta); the bounded alternating sum
theta; the log-splitting functions m and l; the unbounded equivariant
primitive phi~ built from the continuous branch of arg Delta.

Functionals: tau(A *_s B) and the triple trace as tensor-grid contractions,
and their s-derivatives phi_t, mu_t, theta_t, psi_t, chi_t evaluated through
the exact integrand identities (the log weights m, ln|d|^2, theta).  Every
derivative functional is cross-checkable against a central finite difference
of the underlying trace in s.

Rank-one inputs run in the "plain" regime (trace over all of H, the trace
of trace-class operators); Gamma-invariant inputs use the modular regime
with the fundamental-domain trace.  The identity-symbol input is refused in
the finite-covolume regime: the defining integrals diverge there, which is
exactly the obstruction that keeps the coboundary form unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bergman import SpaceParams, normalization_c
from .geometry import HALF_PLANE, as_value, d_invariant, height, pair_factor
from .groups import arg_branch
from .modular import arg_delta
from .quadrature import grid_rule, kernel_window
from .symbols import FiniteRankOp, hs_norm_quad


class DomainRefusalError(ValueError):
    """The requested functional diverges on these inputs."""


def phi(z, zeta):
    """i arg pf(z, zeta): purely imaginary, |Im| < pi/2, antisymmetric."""
    z = np.asarray(as_value(z), dtype=complex)
    zeta = np.asarray(as_value(zeta), dtype=complex)
    return 1j * np.angle(pair_factor(z, zeta, HALF_PLANE))


def theta(z, eta, zeta, halved=False):
    """The alternating cocycle phi(z,zeta~) + phi(zeta,eta~) + phi(eta,z~).

    The un-halved normalization is the one that matches the derivative
    bookkeeping of the trilinear functionals; ``halved`` exposes the other
    printed convention for comparison.
    """
    val = phi(z, zeta) + phi(zeta, eta) + phi(eta, z)
    return val / 2 if halved else val


def ell(z, zeta):
    """l(z, zeta) = (1/2) ln Im z + (1/2) ln Im zeta - Ln pf(z, zeta).

    This is the principal logarithm of the invariant d-quantity.
    """
    z = np.asarray(as_value(z), dtype=complex)
    zeta = np.asarray(as_value(zeta), dtype=complex)
    return (0.5 * np.log(np.imag(z)) + 0.5 * np.log(np.imag(zeta))
            - np.log(pair_factor(z, zeta, HALF_PLANE)))


def m_weight(z, eta, zeta):
    """m = ln Im eta + Ln pf(z,zeta) - Ln pf(z,eta) - Ln pf(eta,zeta)."""
    z = np.asarray(as_value(z), dtype=complex)
    eta = np.asarray(as_value(eta), dtype=complex)
    zeta = np.asarray(as_value(zeta), dtype=complex)
    return (np.log(np.imag(eta))
            + np.log(pair_factor(z, zeta, HALF_PLANE))
            - np.log(pair_factor(z, eta, HALF_PLANE))
            - np.log(pair_factor(eta, zeta, HALF_PLANE)))


def m_and_l(z, eta, zeta):
    """(m, (l(z,eta), l(eta,zeta), l(z,zeta))); m = l + l - l exactly."""
    return m_weight(z, eta, zeta), (ell(z, eta), ell(eta, zeta), ell(z, zeta))


def phi_tilde(z, zeta):
    """i [arg pf(z, zeta) + (1/12)(arg Delta(z) - arg Delta(zeta))].

    The 1/12 makes the automorphy arguments cancel exactly, so the value is
    invariant mod 2 pi i under the diagonal modular action; it is unbounded
    along horocycles, unlike theta.
    """
    z = np.asarray(as_value(z), dtype=complex)
    zeta = np.asarray(as_value(zeta), dtype=complex)
    return 1j * (np.angle(pair_factor(z, zeta, HALF_PLANE))
                 + (arg_delta(z) - arg_delta(zeta)) / 12.0)


def coboundary_weight(z, eta):
    """d(z, eta~, eta, z~) = phi~(z, eta): the antisymmetric chi_t weight.

    Summing it forward around a triangle rebuilds -theta; with the forward
    product ordering in the coboundary identity the signs close up.
    """
    return phi_tilde(z, eta)


@dataclass(frozen=True)
class CocycleContext:
    """Deformation parameter t, an auxiliary r < t, and c'_t / c_t."""

    t: float
    r_aux: float = None
    model: str = HALF_PLANE
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.r_aux is None:
            object.__setattr__(self, "r_aux", max(1.0 + (self.t - 1.0) / 2, self.t - 2.0))

    @property
    def params(self) -> SpaceParams:
        return SpaceParams(self.t, self.model)

    def log_derivative_c(self, richardson_check=True):
        """c'_t / c_t by central differences; 1/(t-1) in closed form."""
        h = self.fd_step
        c = normalization_c

        def diff(hh):
            return ((c(self.t + hh, self.model) - c(self.t - hh, self.model))
                    / (2 * hh * c(self.t, self.model)))

        d1 = diff(h)
        if richardson_check:
            d2 = diff(h / 2)
            val = (4 * d2 - d1) / 3
            if abs(val - 1.0 / (self.t - 1.0)) > 1e-6 * abs(val):
                raise ArithmeticError("c'_t/c_t drifted from 1/(t-1)")
            return val
        return d1


def _op_nodes(ops, t, level, eps_mass=1e-9, pad=0.75, prune=1e-11):
    """Window grid around all operator centers, pruned to the relevant mass.

    Nodes where every center's rho-kernel is below ``prune`` (relative to
    the decay exponent t-1) contribute nothing to any of the pair or triple
    integrands and are dropped, which keeps the contraction matrices small.
    """
    centers = []
    for op in ops:
        centers.extend(op.centers())
    dom = kernel_window(centers, max(t - 1.0, 1.2), eps_mass, measure_weight=0.0,
                        margin=1.0 + pad)
    z, w = grid_rule(dom, level=level)
    if prune:
        cs = np.asarray([complex(c) for c in centers])
        rho_max = np.max(np.abs(
            d_invariant(z[:, None], cs[None, :], HALF_PLANE)) ** 2, axis=1)
        keep = rho_max ** max(t - 1.0, 1.2) >= prune
        z, w = z[keep], w[keep]
    return z, w


def _kernel_matrix(op, z_rows, z_cols):
    """K(z, w) = <op e_w, e_z> = c_t * op.symbol_t, on the grid pair."""
    return op.kernel(z_rows[:, None], z_cols[None, :])


def pair_trace(a: FiniteRankOp, b: FiniteRankOp, s=None, level=40,
               weight=None) -> complex:
    """tau(A *_s B) = c_s * iint A^ B^ |d|^(2s) d nu_0^2 in the plain regime.

    ``weight``: optional extra factor w(z, eta) in the integrand (used for
    the log-derivative functionals).  For s = t and no weight this equals
    tr(AB)/c_t, the closed-form oracle.
    """
    t = a.params.r
    s = t if s is None else s
    c_s = normalization_c(s, a.params.model)
    z, wz = _op_nodes([a, b], t, level)
    e, we = z, wz  # both variables live on the hull window of all centers
    asym = a.symbol(z[:, None], e[None, :])
    bsym = b.symbol(e[:, None], z[None, :])
    dd = np.abs(d_invariant(z[:, None], e[None, :], HALF_PLANE)) ** (2 * s)
    mat = asym * dd
    if weight is not None:
        mat = mat * weight(z[:, None], e[None, :])
    # nu_0 weights: the grids carry nu_0 measure already (measure_weight=0)
    return complex(c_s * np.einsum("i,ij,ji,j->", wz, mat, bsym, we))


def triple_trace(a, b, c, s=None, level=26, weight=None) -> complex:
    """tau(A *_s B *_s C) in the plain regime, optionally with a log weight.

    ``weight``: list of (slot, func) terms, slot in {"ze", "ez_", "zq",
    "single_z", ...} is avoided: the function signature is w(z, eta, zeta)
    but must decompose over at most two slots per term for the contraction;
    here it is evaluated on the slot pair it depends on.
    """
    t = a.params.r
    s = t if s is None else s
    c_s = normalization_c(s, a.params.model)
    z, wz = _op_nodes([a, b, c], t, level)
    e, we = _op_nodes([a, b, c], t, level)
    q, wq = _op_nodes([a, b, c], t, level)

    def tmat(op, rows, cols, expo):
        # op-symbol in the s-normalized form: symbol * pf^(-s), with the
        # nu_s density folded into the column weights later
        sym = op.symbol(rows[:, None], cols[None, :])
        return sym * pair_factor(rows[:, None], cols[None, :], HALF_PLANE) ** (-expo)

    wza = wz * height(z, HALF_PLANE) ** s
    wea = we * height(e, HALF_PLANE) ** s
    wqa = wq * height(q, HALF_PLANE) ** s
    ma = tmat(a, z, e, s)
    mb = tmat(b, e, q, s)
    mc = tmat(c, q, z, s)

    def chain(m1, m2, m3):
        # sum_ijk wz_i m1_ij we_j m2_jk wq_k m3_ki, via one BLAS matmul
        p = (m1 * wea[None, :]) @ (m2 * wqa[None, :])
        return complex(np.sum((wza[:, None] * p) * m3.T))

    if weight is None:
        return complex(c_s**2 * chain(ma, mb, mc))
    total = 0.0 + 0.0j
    for slots, func in weight:
        if slots == "ze":
            total += chain(ma * func(z[:, None], e[None, :]), mb, mc)
        elif slots == "eq":
            total += chain(ma, mb * func(e[:, None], q[None, :]), mc)
        elif slots == "qz":
            total += chain(ma, mb, mc * func(q[:, None], z[None, :]))
        else:
            raise ValueError(f"unknown slot pair {slots}")
    return complex(c_s**2 * total)


def plain_trace(op: FiniteRankOp) -> complex:
    """tau(X) = integral of the diagonal symbol against nu_0 = tr(X)/c_t."""
    return op.trace() / op.params.c


def phi_t(a: FiniteRankOp, b: FiniteRankOp, ctx: CocycleContext,
          level=40) -> complex:
    """d/ds tau(A *_s B) at s = t: the log-derivative pair functional."""
    dlog = ctx.log_derivative_c()
    tau_t = plain_trace(a.compose(b))

    def logd(z, e):
        return np.log(np.abs(d_invariant(z, e, HALF_PLANE)) ** 2)

    integral = pair_trace(a, b, s=ctx.t, level=level, weight=logd)
    return complex(dlog * tau_t + integral)


def phi_t_fd(a, b, ctx: CocycleContext, step=1e-3, level=40) -> complex:
    """Central finite difference of s -> tau(A *_s B): the independent oracle."""
    up = pair_trace(a, b, s=ctx.t + step, level=level)
    dn = pair_trace(a, b, s=ctx.t - step, level=level)
    return (up - dn) / (2 * step)


def _w_weight():
    """The full log-derivative weight of the triple integrand."""
    def wz_e(z, e):
        return -np.log(pair_factor(z, e, HALF_PLANE)) + 0.5 * (
            np.log(height(z, HALF_PLANE)) + np.log(height(e, HALF_PLANE)))

    # ln(Im z Im eta Im zeta) splits as half-shares over the three edges
    return [("ze", wz_e), ("eq", wz_e), ("qz", wz_e)]


def theta_t(a, b, c, ctx: CocycleContext, level=26) -> complex:
    """d/ds tau(A *_s B *_s C) at s = t."""
    dlog = ctx.log_derivative_c()
    tau3 = plain_trace(a.compose(b).compose(c))
    integral = triple_trace(a, b, c, s=ctx.t, level=level, weight=_w_weight())
    return complex(2 * dlog * tau3 + integral)


def theta_t_fd(a, b, c, ctx: CocycleContext, step=1e-3, level=26) -> complex:
    up = triple_trace(a, b, c, s=ctx.t + step, level=level)
    dn = triple_trace(a, b, c, s=ctx.t - step, level=level)
    return (up - dn) / (2 * step)


def mu_t(c_op, pair, ctx: CocycleContext, level=26) -> complex:
    """mu_t(C, (A, B)) = d/ds tau(C *_t (A *_s B)): inner-derivative only.

    Integral form: (c'/c) tau(ABC) + the m-weighted triple integral.
    """
    a, b = pair
    dlog = ctx.log_derivative_c()
    tau3 = plain_trace(a.compose(b).compose(c_op))

    def m_ze(z, e):
        return -np.log(pair_factor(z, e, HALF_PLANE))

    def m_eq(e, q):
        return -np.log(pair_factor(e, q, HALF_PLANE)) + np.log(
            height(e, HALF_PLANE))

    def m_qz(q, z):
        # the +Ln pf(z, zeta) term of m, transposed onto the (zeta, z) slot
        return np.log(pair_factor(z, q, HALF_PLANE))

    weight = [("ze", m_ze), ("eq", m_eq), ("qz", lambda q, z: m_qz(q, z))]
    integral = triple_trace(a, b, c_op, s=ctx.t, level=level, weight=weight)
    return complex(dlog * tau3 + integral)


def psi_t(a, b, c, ctx: CocycleContext, level=26) -> complex:
    """The cyclic 2-cocycle: (1/2)(c'/c) tau(ABC) + the theta-weighted triple."""
    dlog = ctx.log_derivative_c()
    tau3 = plain_trace(a.compose(b).compose(c))

    def th_ze(z, e):
        return phi(e, z)  # phi(eta, z~) contributes on the (z, eta) slot

    def th_eq(e, q):
        return phi(q, e)

    def th_qz(q, z):
        return phi(z, q)

    weight = [("ze", th_ze), ("eq", th_eq), ("qz", th_qz)]
    integral = triple_trace(a, b, c, s=ctx.t, level=level, weight=weight)
    return complex(0.5 * dlog * tau3 + integral)


def chi_t(a, b, ctx: CocycleContext, level=56, tol=1e-8) -> complex:
    """The antisymmetric pairing with the phi~ coboundary weight.

    Split by weight part: the bounded arg-pf factor stays in the grid
    contraction; the unbounded arg-Delta factor contracts one leg exactly
    (c_t times the eta-integral of the pair is the composite's diagonal),
    leaving a well-behaved 2D integral of (AB - BA)(z, z~) arg Delta(z).

    Refuses inputs without certified decay: on the quotient of finite
    covolume the identity symbol makes the integral divergent.
    """
    from .quadrature import integrate2d

    for op in (a, b):
        if not isinstance(op, FiniteRankOp) or not op.centers():
            raise DomainRefusalError(
                "chi_t needs decaying (finite-rank) inputs; the identity "
                "symbol is outside the form domain in finite covolume")

    def w_pf(z, e):
        return 1j * np.angle(pair_factor(z, e, HALF_PLANE))

    bounded = pair_trace(a, b, s=ctx.t, level=level, weight=w_pf)
    comm = a.compose(b) + b.compose(a).scale(-1.0)
    dom = kernel_window([complex(c) for c in comm.centers()],
                        max(ctx.t - 1.0, 1.2), tol * 1e-2, measure_weight=0.0)

    def g(z):
        return comm.diagonal(z) * arg_delta(z)

    res = integrate2d(g, dom, tol=tol, max_panels=6000, strict=False)
    return complex(bounded + 1j / 12.0 * res.value)


def hochschild_identity_residual(a, b, c, ctx: CocycleContext, level=26):
    """Prop 5.4 ii: theta_t(a,b,c) - mu_t(c,(a,b)) - phi_t(a *_t b, c)."""
    th = theta_t(a, b, c, ctx, level=level)
    mu = mu_t(c, (a, b), ctx, level=level)
    ph = phi_t(a.compose(b), c, ctx, level=max(level, 32))
    return th - (mu + ph), th


def identity_66_check(a, b, c, ctx: CocycleContext, level=26):
    """psi_t - (1/2)(c'/c) tau(ABC) against the chi coboundary, both orderings.

    Returns a dict with the left side, the forward-product combination
    chi(A*B,C)+chi(B*C,A)+chi(C*A,B), and the reversed one printed in the
    source identity; the forward ordering is the one that closes.
    """
    lhs = psi_t(a, b, c, ctx, level=level) - 0.5 * ctx.log_derivative_c() \
        * plain_trace(a.compose(b).compose(c))
    lvl = max(level, 32)
    fwd = (chi_t(a.compose(b), c, ctx, level=lvl)
           + chi_t(b.compose(c), a, ctx, level=lvl)
           + chi_t(c.compose(a), b, ctx, level=lvl))
    rev = (chi_t(b.compose(a), c, ctx, level=lvl)
           + chi_t(a.compose(c), b, ctx, level=lvl)
           + chi_t(c.compose(b), a, ctx, level=lvl))
    return {
        "lhs": lhs,
        "forward": fwd,
        "reversed": rev,
        "forward_residual": abs(lhs - fwd) / max(abs(lhs), 1e-300),
        "reversed_residual": abs(lhs - rev) / max(abs(lhs), 1e-300),
    }


def l2_norm(op: FiniteRankOp) -> float:
    """||A||_{2,t} = tau(A* A)^(1/2) in the plain regime."""
    return float(np.sqrt(np.real(plain_trace(op.adjoint().compose(op)))))
