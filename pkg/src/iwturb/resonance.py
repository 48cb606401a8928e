"""Kinematic box, triangle geometry and vertical resonance roots.

The horizontal wavevectors of a triad close into a triangle, so only moduli
``(k, k1, k2)`` satisfying the triangle inequalities contribute (the
kinematic box).  For given moduli and ``m`` the frequency resonance reduces,
in each sign case of ``m1`` and ``m2``, to a quadratic in ``m1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .spectral_core import Wavenumber, _sum_cosines

RESIDUAL_TOL = 1e-10
DOUBLE_ROOT_TOL = 1e-12


class Branch(enum.Enum):
    """Which permutation of the resonance a triad satisfies.

    SUM:    p  = p1 + p2
    DIFF_1: p1 = p  + p2
    DIFF_2: p2 = p1 + p
    """

    SUM = "SUM"
    DIFF_1 = "DIFF_1"
    DIFF_2 = "DIFF_2"


# residual = (A/m + B/|m1| + C/|m2|) * N with m2 = alpha*m + beta*m1;
# A, B, C are signs applied to k, k1, k2.
_BRANCH_COEFFS = {
    Branch.SUM: (1.0, -1.0, -1.0, 1.0, -1.0),
    Branch.DIFF_1: (-1.0, 1.0, -1.0, -1.0, 1.0),
    Branch.DIFF_2: (-1.0, -1.0, 1.0, 1.0, 1.0),
}


@dataclass(frozen=True)
class TriangleGeometry:
    """Side lengths and pairwise cosines of the closed triangle ``k = k1 + k2``."""

    k: float
    k1: float
    k2: float
    cos01: float
    cos02: float
    cos12: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.cos01, self.cos02, self.cos12


@dataclass(frozen=True)
class ResonantTriad:
    p: Wavenumber
    p1: Wavenumber
    p2: Wavenumber
    branch: Branch
    geometry: TriangleGeometry


def in_kinematic_box(k: float, k1: float, k2: float) -> bool:
    """Strict triangle inequalities; degenerate triangles are outside."""
    return k < k1 + k2 and k1 < k + k2 and k2 < k + k1


def _heron_product(k, k1, k2):
    return (k + k1 + k2) * (k1 + k2 - k) * (k + k2 - k1) * (k + k1 - k2)


def _delta(k, k1, k2):
    # factored form; the expanded quartic loses all digits near the box edges
    return 0.5 * np.sqrt(np.maximum(_heron_product(k, k1, k2), 0.0))


def delta_jacobian(k: float, k1: float, k2: float) -> float:
    """Angle-averaging Jacobian, i.e. twice the area of the triangle.

    Raises ``ValueError`` outside the box and on its boundary, where the
    value is zero and the collision integrand would blow up.
    """
    prod = _heron_product(k, k1, k2)
    if min(k, k1, k2) < 0 or prod < 0 or not in_kinematic_box(k, k1, k2):
        raise ValueError(f"({k}, {k1}, {k2}) is not strictly inside the kinematic box")
    return 0.5 * math.sqrt(prod)


def triangle_cosines(k: float, k1: float, k2: float) -> TriangleGeometry:
    if min(k, k1, k2) <= 0:
        raise ValueError("degenerate triangle: a side has zero length")
    if not in_kinematic_box(k, k1, k2):
        raise ValueError(f"({k}, {k1}, {k2}) is not strictly inside the kinematic box")
    cos01, cos02, cos12 = _sum_cosines(k, k1, k2)
    return TriangleGeometry(k, k1, k2, float(cos01), float(cos02), float(cos12))


def _candidate_roots(branch, k, k1, k2, m, N=1.0, tol=RESIDUAL_TOL):
    """All quadratic roots of one branch, validated, for array arguments.

    Yields ``(m1, m2, valid, dres)`` for each of the 4 sign cases x 2 roots,
    where ``dres`` is the derivative of the frequency residual with respect
    to ``m1`` at fixed ``m``.  Invalid entries hold placeholder values.
    """
    a_, b_, c_, alpha_, beta = _BRANCH_COEFFS[branch]
    A, B, C = a_ * k, b_ * k1, c_ * k2
    alpha = alpha_ * m
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            qa = A * beta / m
            qb = A * alpha / m + B * beta * s1 + C * s2
            qc = B * alpha * s1
            disc = qb * qb - 4.0 * qa * qc
            double = np.abs(disc) <= DOUBLE_ROOT_TOL * qb * qb
            disc = np.where(double, 0.0, disc)
            sq = np.sqrt(np.maximum(disc, 0.0))
            q = -0.5 * (qb + np.where(qb >= 0, sq, -sq))
            with np.errstate(divide="ignore", invalid="ignore"):
                roots = (q / qa, qc / q)
            for i, m1 in enumerate(roots):
                m2 = alpha + beta * m1
                ok = (disc >= 0) & np.isfinite(m1) & (m1 * s1 > 0) & (m2 * s2 > 0)
                if i == 1:
                    ok &= ~double
                m1v = np.where(ok, m1, 1.0)
                m2v = np.where(ok, m2, 1.0)
                terms = (A / m, B / np.abs(m1v), C / np.abs(m2v))
                res = terms[0] + terms[1] + terms[2]
                scale = np.maximum(np.maximum(np.abs(terms[0]), np.abs(terms[1])), np.abs(terms[2]))
                ok &= np.abs(res) <= tol * scale
                dres = N * (-B * s1 / (m1v * m1v) - C * beta * s2 / (m2v * m2v))
                yield m1v, m2v, ok, dres


def solve_vertical(branch: Branch, k: float, k1: float, k2: float, m: float) -> list[tuple[float, float]]:
    """Validated ``(m1, m2)`` pairs resolving one resonance branch.

    Negative ``m`` is handled through the symmetry ``m -> -m`` of the
    resonance conditions.
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    if not in_kinematic_box(k, k1, k2):
        raise ValueError(f"({k}, {k1}, {k2}) is not strictly inside the kinematic box")
    sign = 1.0 if m > 0 else -1.0
    out = []
    for m1, m2, ok, _ in _candidate_roots(branch, float(k), float(k1), float(k2), abs(m)):
        if ok:
            out.append((sign * float(m1), sign * float(m2)))
    out.sort()
    return out


def resonant_triads(k: float, k1: float, k2: float, m: float) -> list[ResonantTriad]:
    """Every resonant triad with moduli ``(k, k1, k2)`` and vertical ``m``."""
    triads = []
    for branch in Branch:
        if branch is Branch.SUM:
            geom = triangle_cosines(k, k1, k2)
        elif branch is Branch.DIFF_1:
            geom = triangle_cosines(k1, k, k2)
        else:
            geom = triangle_cosines(k2, k1, k)
        for m1, m2 in solve_vertical(branch, k, k1, k2, m):
            triads.append(ResonantTriad(Wavenumber(k, m), Wavenumber(k1, m1), Wavenumber(k2, m2), branch, geom))
    return triads
