"""Points of the half-plane and the disk, Moebius actions, and hyperbolic measures.

Everything downstream is written against two model-tagged quantities:

* ``pair_factor(z, zeta)``: ``(z - conj(zeta))/2i`` on the half-plane,
  ``1 - z*conj(zeta)`` on the disk.  Its real part is strictly positive on
  the half-plane, which makes principal powers single valued.
* ``d_invariant(z, zeta)``: the Moebius-invariant quantity
  ``sqrt(h(z) h(zeta)) / pair_factor(z, zeta)`` with ``h`` the height
  (``Im z`` resp. ``1 - |z|^2``).  ``|d| <= 1`` with equality exactly on
  the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HALF_PLANE = "half-plane"
DISK = "disk"


class ModelMismatchError(ValueError):
    """Raised when points from different models are combined."""


@dataclass(frozen=True)
class Point:
    """A point of the upper half-plane or of the unit disk."""

    value: complex
    model: str = HALF_PLANE

    def __post_init__(self):
        if self.model not in (HALF_PLANE, DISK):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == HALF_PLANE and not np.imag(self.value) > 0:
            raise ValueError(f"{self.value} is not in the open upper half-plane")
        if self.model == DISK and not abs(self.value) < 1:
            raise ValueError(f"{self.value} is not in the open unit disk")

    @property
    def z(self) -> complex:
        return complex(self.value)


def as_value(p):
    """Accept a Point or a bare complex number."""
    return p.value if isinstance(p, Point) else p


def check_same_model(z, zeta):
    if isinstance(z, Point) and isinstance(zeta, Point) and z.model != zeta.model:
        raise ModelMismatchError(f"mixed models: {z.model} vs {zeta.model}")


def height(z, model=HALF_PLANE):
    """Im z on the half-plane, 1 - |z|^2 on the disk.  Vectorized."""
    z = as_value(z) if not isinstance(z, np.ndarray) else z
    if model == HALF_PLANE:
        return np.imag(z)
    return 1.0 - np.abs(z) ** 2


def pair_factor(z, zeta, model=None):
    """The off-diagonal factor of the reproducing kernel.  Vectorized.

    Raises ModelMismatchError when two Points of different models are passed.
    """
    check_same_model(z, zeta)
    if model is None:
        model = z.model if isinstance(z, Point) else HALF_PLANE
    zv, wv = as_value(z), as_value(zeta)
    if model == HALF_PLANE:
        return (zv - np.conj(wv)) / 2j
    return 1.0 - zv * np.conj(wv)


def d_invariant(z, zeta, model=None):
    """sqrt(h(z) h(zeta)) / pair_factor(z, zeta); |d| in (0, 1]."""
    check_same_model(z, zeta)
    if model is None:
        model = z.model if isinstance(z, Point) else HALF_PLANE
    zv, wv = as_value(z), as_value(zeta)
    return np.sqrt(height(zv, model) * height(wv, model)) / pair_factor(zv, wv, model)


def rho(z, zeta, model=None):
    """|d|^2, symmetric, equal to 1 exactly on the diagonal."""
    return np.abs(d_invariant(z, zeta, model)) ** 2


def hyperbolic_distance(z, zeta, model=None):
    """Geodesic distance; related to the invariant by |d|^2 = sech^2(dist/2)."""
    r2 = np.clip(rho(z, zeta, model), 1e-300, 1.0)
    return 2.0 * np.arccosh(1.0 / np.sqrt(r2))


@dataclass(frozen=True)
class Measure:
    """The family nu_r: density h(z)^(r-2) against Lebesgue dxdy.

    r = 0 gives the invariant measure nu_0, r > 1 the Bergman weights.
    """

    weight: float = 0.0
    model: str = HALF_PLANE

    def density(self, z):
        h = height(np.asarray(as_value(z)), self.model)
        return h ** (self.weight - 2.0)


def measure_density(m: Measure, z) -> float:
    return float(m.density(z))


def cayley(z):
    """Half-plane to disk, i -> 0."""
    if isinstance(z, Point):
        if z.model != HALF_PLANE:
            raise ModelMismatchError("cayley expects a half-plane point")
        return Point((z.value - 1j) / (z.value + 1j), DISK)
    z = np.asarray(z)
    return (z - 1j) / (z + 1j)


def cayley_inverse(w):
    """Disk to half-plane, 0 -> i."""
    if isinstance(w, Point):
        if w.model != DISK:
            raise ModelMismatchError("cayley_inverse expects a disk point")
        return Point(1j * (1 + w.value) / (1 - w.value), HALF_PLANE)
    w = np.asarray(w)
    return 1j * (1 + w) / (1 - w)


def mobius_act(g, z):
    """Apply a GroupElement (or a raw 2x2 matrix) to a point.

    Half-plane matrices act by (az+b)/(cz+d); SU(1,1) pairs (a, b) act on the
    disk by (az+b)/(conj(b) z + conj(a)).
    """
    from .groups import GroupElement

    if isinstance(g, GroupElement):
        if isinstance(z, Point) and z.model != g.model:
            raise ModelMismatchError(f"element acts on {g.model}, point is {z.model}")
        a, b, c, d = g.abcd()
        model = g.model
    else:
        a, b = g[0]
        c, d = g[1]
        model = z.model if isinstance(z, Point) else HALF_PLANE
    zv = as_value(z) if not isinstance(z, np.ndarray) else z
    w = (a * zv + b) / (c * zv + d)
    if isinstance(z, Point):
        return Point(complex(w), model)
    return w
