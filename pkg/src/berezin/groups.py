"""Group elements, the automorphy factor, the integer 2-cocycle, and Haar charts.

Two representative conventions coexist and both are exposed:

* ``"sl"``: matrices are taken literally in SL(2,R) (or SU(1,1)), including
  their sign.  The argument-defect cocycle N then takes values in {-1, 0, 1}.
* ``"psl"``: matrices are first normalized to the canonical PSL representative
  (c > 0, or c = 0 and a > 0).  N may then land in half-integers because -I is
  identified with I.

The test suite validates that the integrality claim holds for the "sl"
convention and records that fact; see also modular.rademacher_cochain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import DISK, HALF_PLANE, Point, height, mobius_act

SL_CONVENTION = "sl"
PSL_CONVENTION = "psl"


class BranchConventionError(RuntimeError):
    """A cocycle value depended on the sample point: a branch bug."""


def arg_branch(w) -> float:
    """Principal argument in (-pi, pi]; rejects 0."""
    w = complex(w)
    if w == 0:
        raise ValueError("argument of 0 is undefined")
    a = np.angle(w)
    # np.angle returns -pi for negative reals with a -0.0 imaginary part
    if a == -np.pi:
        a = np.pi
    return float(a)


@dataclass(frozen=True)
class GroupElement:
    """A real Moebius transformation.

    ``entries`` is a 2x2 matrix: real with det 1 for the half-plane model,
    or an SU(1,1) matrix [[a, b], [conj(b), conj(a)]] for the disk model.
    Integer matrices keep exact int entries so modular arithmetic is exact.
    ``word`` optionally records an S/T word for PSL(2,Z) elements.
    """

    entries: tuple
    model: str = HALF_PLANE
    word: tuple = field(default=(), compare=False)

    @staticmethod
    def sl2(a, b, c, d, word=()) -> "GroupElement":
        return GroupElement(((a, b), (c, d)), HALF_PLANE, tuple(word))

    @staticmethod
    def su11(a, b) -> "GroupElement":
        a, b = complex(a), complex(b)
        return GroupElement(((a, b), (np.conj(b), np.conj(a))), DISK)

    @staticmethod
    def identity(model=HALF_PLANE) -> "GroupElement":
        if model == DISK:
            return GroupElement.su11(1.0, 0.0)
        return GroupElement.sl2(1, 0, 0, 1)

    def abcd(self):
        (a, b), (c, d) = self.entries
        return a, b, c, d

    @property
    def is_integer(self) -> bool:
        return all(isinstance(x, int) for x in self.abcd())

    def det(self):
        a, b, c, d = self.abcd()
        if self.model == DISK:
            return abs(a) ** 2 - abs(b) ** 2
        return a * d - b * c

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.model != other.model:
            raise ValueError("cannot multiply elements of different models")
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        prod = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return GroupElement(prod, self.model, self.word + other.word)

    def inverse(self) -> "GroupElement":
        a, b, c, d = self.abcd()
        inv_word = tuple((sym, -n) for sym, n in reversed(self.word))
        return GroupElement(((d, -b), (-c, a)), self.model, inv_word)

    def neg(self) -> "GroupElement":
        (a, b), (c, d) = self.entries
        return GroupElement(((-a, -b), (-c, -d)), self.model, self.word)

    def psl_canonical(self) -> "GroupElement":
        """The representative with c > 0, or c = 0 and a > 0."""
        a, b, c, d = self.abcd()
        if c < 0 or (c == 0 and a < 0):
            return self.neg()
        return self

    def apply(self, z):
        return mobius_act(self, z)

    def key(self):
        """Hashable exact key for integer matrices (PSL-normalized)."""
        g = self.psl_canonical()
        return g.abcd()


S = GroupElement.sl2(0, -1, 1, 0, word=(("S", 1),))
T = GroupElement.sl2(1, 1, 0, 1, word=(("T", 1),))


def t_power(n: int) -> GroupElement:
    return GroupElement.sl2(1, n, 0, 1, word=(("T", n),) if n else ())


def automorphy_j(g: GroupElement, z):
    """j(g, z) = c z + d (half-plane) or conj(b) z + conj(a) (disk)."""
    a, b, c, d = g.abcd()
    zv = z.value if isinstance(z, Point) else z
    return c * np.asarray(zv) + d if isinstance(zv, np.ndarray) else c * zv + d


def _cocycle_defect(g1: GroupElement, g2: GroupElement, z) -> float:
    """arg j(g1 g2, z) - arg j(g1, g2 z) - arg j(g2, z), in radians."""
    g12 = g1 * g2
    z2 = mobius_act(g2, z)
    return (
        arg_branch(automorphy_j(g12, z))
        - arg_branch(automorphy_j(g1, z2))
        - arg_branch(automorphy_j(g2, z))
    )


_SAMPLE_Z = [
    0.1 + 0.7j, -0.3 + 1.3j, 2.2 + 0.2j, -1.7 + 2.9j,
    0.5 + 0.05j, -0.05 + 5.0j, 3.1 + 1.1j, -2.4 + 0.4j,
]

_SAMPLE_W = [
    0.0 + 0.0j, 0.31 - 0.2j, -0.55 + 0.1j, 0.12 + 0.61j,
    -0.33 - 0.4j, 0.72 + 0.05j, -0.06 - 0.77j, 0.48 + 0.36j,
]


def _samples_for(g: GroupElement):
    return _SAMPLE_W if g.model == DISK else _SAMPLE_Z


def n_cocycle(g1: GroupElement, g2: GroupElement, convention=SL_CONVENTION,
              tol=1e-10) -> Fraction:
    """The argument-defect cocycle N(g1, g2) as an exact rational.

    (2 pi) N = arg j(g1 g2, z) - arg j(g1, g2 z) - arg j(g2, z), checked to be
    independent of z over sample points.  Values land in Z ("sl" convention)
    or (1/2)Z ("psl" convention); any other residue raises.
    """
    samples = _samples_for(g1)
    if convention == PSL_CONVENTION:
        g1, g2 = g1.psl_canonical(), g2.psl_canonical()
        # the product must also be read through its canonical representative
        vals = []
        for z in samples:
            g12 = (g1 * g2).psl_canonical()
            z2 = mobius_act(g2, z)
            defect = (
                arg_branch(automorphy_j(g12, z))
                - arg_branch(automorphy_j(g1, z2))
                - arg_branch(automorphy_j(g2, z))
            )
            vals.append(defect / (2 * np.pi))
        quantum = 2
    else:
        vals = [_cocycle_defect(g1, g2, z) / (2 * np.pi) for z in samples]
        quantum = 1
    rounded = [round(v * quantum) / quantum for v in vals]
    if max(abs(v - r) for v, r in zip(vals, rounded)) > tol:
        raise BranchConventionError(
            f"cocycle defect is not a multiple of 1/{quantum}: {vals}"
        )
    if len(set(rounded)) != 1:
        raise BranchConventionError(f"cocycle value depends on z: {rounded}")
    return Fraction(int(rounded[0] * quantum), quantum)


def projective_multiplier(r: float, g1: GroupElement, g2: GroupElement,
                          convention=SL_CONVENTION) -> complex:
    """The modulus-1 multiplier c_r(g1, g2) = exp(2 pi i r N(g1, g2))."""
    n = n_cocycle(g1, g2, convention)
    return complex(np.exp(2j * np.pi * r * float(n)))


def reduce_to_fundamental(z, eps=1e-12):
    """Reduce z in H to the standard modular fundamental domain.

    Returns (gamma, z0) with z0 = gamma . z, |Re z0| <= 1/2 and |z0| >= 1.
    Ties: Re z0 in [-1/2, 1/2); on the arc |z0| = 1, Re z0 <= 0.
    """
    zv = complex(z.value if isinstance(z, Point) else z)
    if zv.imag <= 0:
        raise ValueError("point must lie in the open upper half-plane")
    gamma = GroupElement.identity()
    w = zv
    for _ in range(10_000):
        n = int(np.floor(w.real + 0.5))
        if w.real - n >= 0.5 - eps:  # push Re into [-1/2, 1/2)
            n += 1
        if n != 0:
            gamma = t_power(-n) * gamma
            w = w - n
        if abs(w) < 1 - eps:
            gamma = S * gamma
            w = -1 / w
            continue
        if abs(abs(w) - 1) <= eps and w.real > eps:
            gamma = S * gamma
            w = -1 / w
            continue
        break
    else:
        raise RuntimeError("fundamental-domain reduction did not terminate")
    z0 = Point(w, HALF_PLANE)
    return gamma, z0


def reduce_points(z, eps=1e-12, max_iter=200):
    """Vectorized domain reduction: returns (z0, j) with z0 = gamma z in the
    fundamental domain and j = j(gamma, z) tracked through the word.

    Only the reduced points and the accumulated automorphy factor are kept;
    use reduce_to_fundamental for the matrix and word of a single point.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = z.copy()
    j = np.ones_like(w)
    for _ in range(max_iter):
        n = np.floor(w.real + 0.5)
        n = np.where(w.real - n >= 0.5 - eps, n + 1, n)
        w = w - n
        inside = (np.abs(w) >= 1 - eps) & ~((np.abs(np.abs(w) - 1) <= eps)
                                            & (w.real > eps))
        if np.all(inside):
            break
        j = np.where(inside, j, j * w)  # j(S, w) = w
        w = np.where(inside, w, -1.0 / w)
    return w, j


def in_fundamental_domain(z, eps=1e-9) -> bool:
    zv = complex(z.value if isinstance(z, Point) else z)
    return abs(zv.real) <= 0.5 + eps and abs(zv) >= 1 - eps


def enumerate_modular_ball(max_word_length: int):
    """All distinct PSL(2,Z) elements expressible as S/T words of bounded length.

    Breadth-first over the generators {S, T, T^-1}; deduplicated by the
    canonical PSL matrix.  Word length counts generator letters.
    """
    seen = {GroupElement.identity().key()}
    frontier = [GroupElement.identity()]
    out = [GroupElement.identity()]
    gens = [S, T, t_power(-1)]
    for _ in range(max_word_length):
        new_frontier = []
        for g in frontier:
            for h in gens:
                cand = g * h
                k = cand.key()
                if k not in seen:
                    seen.add(k)
                    new_frontier.append(cand)
                    out.append(cand)
        frontier = new_frontier
    return out


@dataclass(frozen=True)
class HaarChart:
    """Haar coordinates g ~ (g . o, boundary rotation), o the model basepoint.

    The chart measure is kappa * d(nu_0) x d(theta); the rotation fiber is an
    exact factor of 2 pi for the coefficient integrands used here (they are
    invariant under right rotations), so rules only discretize the nu_0 leg.
    ``kappa`` is the normalization constant fixed by the formal-dimension
    calibration; see repn.calibrate_haar.
    """

    kappa: float
    model: str = DISK

    def fiber_volume(self) -> float:
        return 2 * np.pi

    def section(self, w):
        """The transvection g_w moving the basepoint to w (disk model)."""
        w = complex(w)
        s = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
        return GroupElement.su11(s, w * s)


def su11_random(rng) -> GroupElement:
    t = rng.uniform(0, 1.5)
    alpha, beta = rng.uniform(0, 2 * np.pi, size=2)
    return GroupElement.su11(np.cosh(t) * np.exp(1j * alpha),
                             np.sinh(t) * np.exp(1j * beta))


def sl2r_random(rng) -> GroupElement:
    """Random SL(2,R) element via the Iwasawa decomposition."""
    x = rng.normal(0, 1.5)
    y = np.exp(rng.normal(0, 0.7))
    th = rng.uniform(0, np.pi)
    n = np.array([[1.0, x], [0.0, 1.0]])
    a = np.array([[np.sqrt(y), 0.0], [0.0, 1.0 / np.sqrt(y)]])
    k = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    m = n @ a @ k
    return GroupElement.sl2(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def modular_random(rng, max_len=8) -> GroupElement:
    g = GroupElement.identity()
    for _ in range(rng.integers(1, max_len + 1)):
        pick = rng.integers(0, 3)
        g = g * (S if pick == 0 else t_power(1 if pick == 1 else -1))
    return g
