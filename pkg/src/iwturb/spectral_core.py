"""Dispersion relation, power-law action spectrum and interaction coefficients.

Everything is nondimensional: the dispersion constant is the buoyancy
frequency ``N`` and both ``N`` and ``g`` default to one.  The numeric helpers
prefixed with an underscore accept numpy arrays and are what the quadrature
uses; the public functions validate their arguments and work on scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Wavenumber:
    """Horizontal modulus ``k`` and signed vertical wavenumber ``m``."""

    k: float
    m: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and math.isfinite(self.m)):
            raise ValueError(f"non-finite wavenumber ({self.k}, {self.m})")
        if self.k < 0:
            raise ValueError(f"horizontal wavenumber must be >= 0, got {self.k}")
        if self.m == 0:
            raise ValueError("vertical wavenumber must be nonzero")


@dataclass(frozen=True)
class SpectralExponents:
    """Exponents of the action spectrum ``n = n0 k^-x |m|^-y``."""

    x: float
    y: float
    n0: float = 1.0

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError(f"amplitude n0 must be positive, got {self.n0}")


@dataclass(frozen=True)
class PhysicalConstants:
    N: float = 1.0
    g: float = 1.0

    def __post_init__(self):
        if not (self.N > 0 and self.g > 0):
            raise ValueError("N and g must both be strictly positive")

    @property
    def coupling(self) -> float:
        """Prefactor ``N / (4 sqrt(2 g))`` of the interaction coefficients."""
        return self.N / (4.0 * math.sqrt(2.0 * self.g))


UNIT = PhysicalConstants()


def _omega(k, m, N=1.0):
    return N * k / np.abs(m)


def _action(k, m, x, y, n0=1.0):
    return n0 * k ** (-x) * np.abs(m) ** (-y)


def _f(n, n1, n2):
    return n1 * n2 - n * (n1 + n2)


def _sum_cosines(ks, ka, kb):
    """Pairwise cosines of the closed horizontal triangle ``ks = ka + kb``.

    Returns ``(cos(s, a), cos(s, b), cos(a, b))`` from the three moduli.
    """
    ks2, ka2, kb2 = ks * ks, ka * ka, kb * kb
    cos_sa = (ks2 + ka2 - kb2) / (2.0 * ks * ka)
    cos_sb = (ks2 + kb2 - ka2) / (2.0 * ks * kb)
    cos_ab = (ks2 - ka2 - kb2) / (2.0 * ka * kb)
    return cos_sa, cos_sb, cos_ab


def _V(ks, ms, ka, ma, kb, mb, coupling=UNIT.coupling, N=1.0):
    """Symmetrised coefficient for the triad ``ps = pa + pb`` (arrays welcome).

    Each of the three ``U`` terms pairs the cosine between the two lower
    wavevectors of that term with the horizontal modulus of its upper one.
    """
    cos_sa, cos_sb, cos_ab = _sum_cosines(ks, ka, kb)
    ws, wa, wb = _omega(ks, ms, N), _omega(ka, ma, N), _omega(kb, mb, N)
    return -coupling * (
        cos_ab * np.sqrt(wa * wb / ws) * ks
        + cos_sb * np.sqrt(ws * wb / wa) * ka
        + cos_sa * np.sqrt(ws * wa / wb) * kb
    )


def frequency(p: Wavenumber, c: PhysicalConstants = UNIT) -> float:
    """Linear internal-wave frequency ``N k / |m|``."""
    if p.k < 0 or p.m == 0:
        raise ValueError(f"invalid wavenumber {p}")
    return c.N * p.k / abs(p.m)


def action(p: Wavenumber, s: SpectralExponents) -> float:
    if p.k == 0:
        raise ValueError("action spectrum is singular at k = 0")
    return float(_action(p.k, p.m, s.x, s.y, s.n0))


def matrix_element_U(
    pa: Wavenumber,
    pb: Wavenumber,
    pc: Wavenumber,
    cos_bc: float,
    c: PhysicalConstants = UNIT,
) -> float:
    """One unsymmetrised term ``U^{pa}_{pb pc}``.

    ``cos_bc`` is the cosine between the horizontal wavevectors of ``pb`` and
    ``pc``.  The leading modulus and the frequency in the denominator belong
    to ``pa``.
    """
    if abs(cos_bc) > 1.0:
        raise ValueError(f"|cos| must not exceed 1, got {cos_bc}")
    wa, wb, wc = frequency(pa, c), frequency(pb, c), frequency(pc, c)
    return -c.coupling * cos_bc * math.sqrt(wb * wc / wa) * pa.k


def matrix_element_V(
    p: Wavenumber,
    p1: Wavenumber,
    p2: Wavenumber,
    cosines: tuple[float, float, float],
    c: PhysicalConstants = UNIT,
) -> float:
    """``V^p_{p1 p2} = U^p_{p1 p2} + U^{p1}_{p p2} + U^{p2}_{p p1}``.

    ``cosines`` is ``(cos(p, p1), cos(p, p2), cos(p1, p2))`` for the closed
    triangle ``k = k1 + k2``, e.g. ``triangle_cosines(...).as_tuple()``.
    """
    cos01, cos02, cos12 = cosines
    return (
        matrix_element_U(p, p1, p2, cos12, c)
        + matrix_element_U(p1, p, p2, cos02, c)
        + matrix_element_U(p2, p, p1, cos01, c)
    )


def f_term(n: float, n1: float, n2: float) -> float:
    """Occupation-number combination ``n1 n2 - n (n1 + n2)``."""
    return n1 * n2 - n * (n1 + n2)


def energy_exponents(s: SpectralExponents) -> tuple[float, float]:
    """Exponents ``(a, b)`` of the energy spectrum ``E ~ w^-a m^-b``."""
    return s.x - 2.0, s.x + s.y - 2.0


def action_exponents(a: float, b: float, n0: float = 1.0) -> SpectralExponents:
    """Inverse of :func:`energy_exponents`."""
    return SpectralExponents(a + 2.0, b - a, n0)
