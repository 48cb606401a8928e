"""Angle-averaged collision integral on a power-law action spectrum.

The integrand over ``(k1, k2)`` is obtained by eliminating both vertical
deltas analytically (``m2`` from the momentum delta, ``m1`` from the
frequency delta).  The integral over the kinematic box is split by which of
``k, k1, k2`` is the shortest side.  The two regions touching the small
``k1``/``k2`` corners are mirror images of each other, and the region where
``k`` is shortest (the large-``k1 + k2`` strip) is the image of the small-
``k2`` region under the similarity ``(k1, k2) -> (k k1 / k2, k^2 / k2)``.
All three are therefore integrated on one region with a combined integrand.
The truncation depth ``U`` (shortest side ``>= k exp(-U)``) is raised with
the level so that divergent spectra show up as growing increments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .resonance import Branch, _candidate_roots, _delta, in_kinematic_box
from .spectral_core import UNIT, PhysicalConstants, SpectralExponents, Wavenumber, _V, _action, _f

TANGENT_J_MAX = 1e12


class Status(enum.Enum):
    CONVERGED = "CONVERGED"
    MAX_LEVELS = "MAX_LEVELS"
    DIVERGENT = "DIVERGENT"


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature controls.

    Level ``l`` uses ``base_resolution * 2**l`` outer nodes and truncation
    depth ``cusp_depth + l * depth_step``.
    """

    base_resolution: int = 12
    max_levels: int = 4
    rel_tol: float = 1e-3
    domain_scale: float = 2.0
    divergence_growth: float = 2.0
    cusp_depth: float = 6.0
    depth_step: float = 2.0

    def __post_init__(self):
        if not (isinstance(self.base_resolution, int) and self.base_resolution >= 2):
            raise ValueError("base_resolution must be an integer >= 2")
        if not (isinstance(self.max_levels, int) and self.max_levels >= 2):
            raise ValueError("max_levels must be an integer >= 2")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.domain_scale > 0:
            raise ValueError("domain_scale must be positive")
        if not self.divergence_growth > 1:
            raise ValueError("divergence_growth must exceed 1")
        if not self.cusp_depth > math.log(2.0):
            raise ValueError("cusp_depth must exceed ln 2")
        if not self.depth_step >= 0:
            raise ValueError("depth_step must be nonnegative")

    def depth(self, level: int) -> float:
        return self.cusp_depth + level * self.depth_step


@dataclass(frozen=True)
class LevelEstimate:
    level: int
    depth: float
    value: float
    reference_scale: float


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    status: Status
    levels_used: int
    evaluations: int
    reference_scale: float = 0.0
    tangential_exclusions: int = 0
    history: tuple = field(default=(), repr=False)

    @property
    def normalized_residual(self) -> float:
        if self.reference_scale > 0:
            return abs(self.value) / self.reference_scale
        return 0.0 if self.value == 0 else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status.value
        d["normalized_residual"] = self.normalized_residual
        d["history"] = [asdict(h) for h in self.history]
        return d


class _Counter:
    def __init__(self):
        self.evaluations = 0
        self.tangential = 0


def _g(x, y, n0, k, m, k1, k2, c: PhysicalConstants, counter=None):
    """Vectorised integrand; ``k`` may be an array too (used by the fold)."""
    k, k1, k2 = np.broadcast_arrays(np.asarray(k, float), np.asarray(k1, float), np.asarray(k2, float))
    D = _delta(k, k1, k2)
    n = _action(k, m, x, y, n0)
    acc = np.zeros(k.shape)
    cpl, N = c.coupling, c.N
    for branch, sign in ((Branch.SUM, 1.0), (Branch.DIFF_1, -1.0), (Branch.DIFF_2, -1.0)):
        for m1, m2, ok, dres in _candidate_roots(branch, k, k1, k2, m, N):
            with np.errstate(divide="ignore"):
                J = 1.0 / np.abs(dres)
            tangent = ok & (J > TANGENT_J_MAX)
            if counter is not None:
                counter.tangential += int(np.count_nonzero(tangent))
            ok &= ~tangent
            if not ok.any():
                continue
            n1 = _action(k1, m1, x, y, n0)
            n2 = _action(k2, m2, x, y, n0)
            if branch is Branch.SUM:
                f = _f(n, n1, n2)
                V = _V(k, m, k1, m1, k2, m2, cpl, N)
            elif branch is Branch.DIFF_1:
                f = _f(n1, n, n2)
                V = _V(k1, m1, k, m, k2, m2, cpl, N)
            else:
                f = _f(n2, n1, n)
                V = _V(k2, m2, k1, m1, k, m, cpl, N)
            acc += np.where(ok, sign * f * V * V * J, 0.0)
    if counter is not None:
        counter.evaluations += k.size
    # (1/k) * k k1 k2 / Delta
    with np.errstate(divide="ignore", invalid="ignore"):
        return acc * k1 * k2 / D


def integrand(
    s: SpectralExponents,
    p: Wavenumber,
    k1: float,
    k2: float,
    c: PhysicalConstants = UNIT,
) -> float:
    """Signed sum of the three resonance branches at one in-box point."""
    if not p.k > 0:
        raise ValueError("p.k must be positive")
    if not in_kinematic_box(p.k, k1, k2):
        raise ValueError(f"({p.k}, {k1}, {k2}) is not strictly inside the kinematic box")
    return float(_g(s.x, s.y, s.n0, p.k, abs(p.m), k1, k2, c))


@dataclass(frozen=True)
class RootTerm:
    """One resonant root's signed contribution to the integrand.

    ``scale`` is the same product with each piece of the occupation term
    taken in absolute value, i.e. the size of the largest cancelling parts.
    """

    branch: Branch
    m1: float
    m2: float
    value: float
    scale: float


def branch_terms(
    s: SpectralExponents,
    p: Wavenumber,
    k1: float,
    k2: float,
    c: PhysicalConstants = UNIT,
) -> list[RootTerm]:
    """Per-root breakdown of :func:`integrand`; the values sum to it."""
    if not in_kinematic_box(p.k, k1, k2):
        raise ValueError(f"({p.k}, {k1}, {k2}) is not strictly inside the kinematic box")
    x, y, n0 = s.x, s.y, s.n0
    k, m = float(p.k), abs(float(p.m))
    pre = k1 * k2 / float(_delta(k, k1, k2))
    n = _action(k, m, x, y, n0)
    out = []
    for branch, sign in ((Branch.SUM, 1.0), (Branch.DIFF_1, -1.0), (Branch.DIFF_2, -1.0)):
        for m1, m2, ok, dres in _candidate_roots(branch, k, k1, k2, m, c.N):
            J = 1.0 / abs(float(dres))
            if not ok or J > TANGENT_J_MAX:
                continue
            m1, m2 = float(m1), float(m2)
            n1, n2 = _action(k1, m1, x, y, n0), _action(k2, m2, x, y, n0)
            if branch is Branch.SUM:
                f, V = _f(n, n1, n2), _V(k, m, k1, m1, k2, m2, c.coupling, c.N)
                parts = (n1 * n2, n * n1, n * n2)
            elif branch is Branch.DIFF_1:
                f, V = _f(n1, n, n2), _V(k1, m1, k, m, k2, m2, c.coupling, c.N)
                parts = (n * n2, n1 * n, n1 * n2)
            else:
                f, V = _f(n2, n1, n), _V(k2, m2, k1, m1, k, m, c.coupling, c.N)
                parts = (n1 * n, n2 * n1, n2 * n)
            w = V * V * J * pre
            out.append(RootTerm(branch, m1, m2, float(sign * f * w), float(max(parts) * w)))
    return out


def _folded(s, k, m, k1, k2, c, counter):
    """Combined integrand on the region where ``k2`` is the shortest side.

    Returns the signed value and the matching sum of absolute values.
    """
    x, y, n0 = s.x, s.y, s.n0
    ga = _g(x, y, n0, k, m, k1, k2, c, counter)
    gb = _g(x, y, n0, k, m, k2, k1, c, counter)
    # image in the large-k strip, rewritten at unit scale by homogeneity
    r = k / k2
    gc = r ** (5.0 - 2.0 * x) * _g(x, y, n0, k2, m, k1, k + 0.0 * k1, c, counter)
    val = ga + gb + gc
    ref = np.abs(ga) + np.abs(gb) + np.abs(gc)
    bad = ~np.isfinite(val)
    if bad.any():
        i = np.flatnonzero(bad.ravel())[0]
        raise FloatingPointError(
            f"nonfinite integrand at k1={k1.ravel()[i]!r}, k2={k2.ravel()[i]!r} (k={k}, m={m}, x={x}, y={y})"
        )
    return val, ref


_GL_CACHE: dict = {}


def _gauss(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _nodes(k, depth, n_out, n_in, n_b, L):
    """Quadrature nodes and weights covering ``k exp(-depth) < k2 < k`` below the fold."""
    # outer panel: k2 = k exp(-u), u in (ln 2, depth), rational stretch in t
    z, w = _gauss(n_out)
    t_lo = L / (L + depth - math.log(2.0))
    t = t_lo + (1.0 - t_lo) * (z + 1.0) / 2.0
    wt = w * (1.0 - t_lo) / 2.0
    u = math.log(2.0) + L * (1.0 - t) / t
    du = L / t**2 * wt
    k2 = k * np.exp(-u)
    # inner: k1 = k + k2 cos(theta) absorbs both edge singularities
    zi, wi = _gauss(n_in)
    th = (zi + 1.0) * math.pi / 2.0
    wth = wi * math.pi / 2.0
    K2a = np.repeat(k2[:, None], n_in, axis=1)
    K1a = k + K2a * np.cos(th)[None, :]
    Wa = K2a * np.sin(th)[None, :] * wth[None, :] * (K2a * du[:, None])
    # panel k2 in (k/2, k): k1 = k + k2 - k s^2, square-root map at k1 = k + k2
    zb, wb = _gauss(n_b)
    k2b = 0.75 * k + 0.25 * k * zb
    w2b = wb * 0.25 * k
    sv, ws = _gauss(n_in)
    sv = (sv + 1.0) / 2.0
    ws = ws / 2.0
    K2b = np.repeat(k2b[:, None], n_in, axis=1)
    K1b = k + K2b - k * sv[None, :] ** 2
    Wb = (2.0 * k * sv * ws)[None, :] * w2b[:, None]
    return (
        np.concatenate([K1a.ravel(), K1b.ravel()]),
        np.concatenate([K2a.ravel(), K2b.ravel()]),
        np.concatenate([Wa.ravel(), Wb.ravel()]),
    )


def _level_sizes(cfg: QuadratureConfig, level: int):
    n_out = cfg.base_resolution * 2**level
    n_in = max(2, (2 * n_out) // 3)
    n_b = max(2, n_out // 2)
    return n_out, n_in, n_b


def integrate_level(s, p, cfg: QuadratureConfig, level: int, c=UNIT, counter=None):
    """One fixed-resolution estimate; returns ``(value, reference_scale)``."""
    counter = counter or _Counter()
    k, m = float(p.k), abs(float(p.m))
    K1, K2, W = _nodes(k, cfg.depth(level), *_level_sizes(cfg, level), cfg.domain_scale)
    val, ref = _folded(s, k, m, K1, K2, c, counter)
    return float(np.sum(val * W)), float(np.sum(ref * W))


def evaluate_I(
    s: SpectralExponents,
    p: Wavenumber = Wavenumber(1.0, 1.0),
    cfg: QuadratureConfig = QuadratureConfig(),
    c: PhysicalConstants = UNIT,
) -> IntegralResult:
    """Collision integral at ``p`` with level doubling and divergence detection."""
    if not (p.k > 0 and p.m > 0):
        raise ValueError("evaluate_I needs p.k > 0 and p.m > 0")
    counter = _Counter()
    history: list[LevelEstimate] = []
    incs: list[float] = []
    status = Status.MAX_LEVELS
    for level in range(cfg.max_levels):
        v, ref = integrate_level(s, p, cfg, level, c, counter)
        history.append(LevelEstimate(level, cfg.depth(level), v, ref))
        if level == 0:
            continue
        incs.append(abs(v - history[-2].value))
        if len(incs) < 2:
            continue
        d0, d1 = incs[-2], incs[-1]
        if d1 > cfg.divergence_growth * d0 and d1 > cfg.rel_tol * ref:
            status = Status.DIVERGENT
            break
        if d1 <= cfg.rel_tol * ref and d1 <= d0:
            status = Status.CONVERGED
            break
    last = history[-1]
    return IntegralResult(
        value=last.value,
        error_estimate=incs[-1],
        status=status,
        levels_used=len(history),
        evaluations=counter.evaluations,
        reference_scale=last.reference_scale,
        tangential_exclusions=counter.tangential,
        history=tuple(history),
    )


def expected_scaling(s: SpectralExponents, alpha: float, beta: float) -> float:
    """``alpha^(4-2x) beta^(1-2y)``: degree of the integral under ``(k, m) -> (alpha k, beta m)``."""
    return alpha ** (4.0 - 2.0 * s.x) * beta ** (1.0 - 2.0 * s.y)


def scaling_exponent_check(
    s: SpectralExponents,
    p: Wavenumber,
    alpha: float,
    beta: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    c: PhysicalConstants = UNIT,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Measured and expected ``I(alpha k, beta m) / I(k, m)``.

    Each pair is ``(ratio, relative uncertainty)``; the expected ratio is
    exact so its uncertainty is zero.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    base = evaluate_I(s, p, cfg, c)
    scaled = evaluate_I(s, Wavenumber(alpha * p.k, beta * p.m), cfg, c)
    for r in (base, scaled):
        if r.status is Status.DIVERGENT:
            raise ArithmeticError(f"integral diverges for {s}")
    if abs(base.value) <= 10 * max(base.error_estimate, 1e-12 * base.reference_scale):
        raise ZeroDivisionError("I(k, m) is indistinguishable from zero; pick a non-steady exponent pair")
    ratio = scaled.value / base.value
    unc = base.error_estimate / abs(base.value) + scaled.error_estimate / max(abs(scaled.value), 1e-300)
    return (ratio, unc), (expected_scaling(s, alpha, beta), 0.0)


def regularized_I(
    s: SpectralExponents,
    p: Wavenumber = Wavenumber(1.0, 1.0),
    cfg: QuadratureConfig = QuadratureConfig(),
    c: PhysicalConstants = UNIT,
) -> tuple[float, float]:
    """``(value, reference_scale)`` at the deepest level of ``cfg``.

    The truncation is fixed, so unlike :func:`evaluate_I` the result is a
    smooth function of ``(x, y)`` even where the integral diverges.
    """
    if not (p.k > 0 and p.m > 0):
        raise ValueError("regularized_I needs p.k > 0 and p.m > 0")
    return integrate_level(s, p, cfg, cfg.max_levels - 1, c)
