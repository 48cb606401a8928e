"""Zero set of I(x, y): slice root finding, continuation and grid sweeps."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .collision import QuadratureConfig, Status, evaluate_I, regularized_I
from .spectral_core import SpectralExponents, Wavenumber

log = logging.getLogger(__name__)

BRACKET_TOL = 1e-3
RESIDUAL_TOL = 1e-3
# emitted curve points must satisfy |I| / reference <= this
TRACE_RESIDUAL_TOL = 1e-2
THICKNESS_OFFSET = 0.25
SEED = (3.5, 0.5)


class NoSignChange(ValueError):
    """Both bracket endpoints give I of the same sign."""


class NonConvergent(ArithmeticError):
    """A bracket endpoint lies where the integral diverges."""


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float
    normalized_residual: float
    bracket_width: float
    status: str = Status.CONVERGED.value
    # |I| / reference at y -/+ THICKNESS_OFFSET, quantifies how sharp the zero is
    offset_residuals: tuple[float, float] | None = None


@dataclass
class GridField:
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray  # shape (ny, nx)
    status: np.ndarray  # Status.value strings, same shape
    reference: np.ndarray
    regularized: bool = False

    def __post_init__(self):
        self.x_axis = np.asarray(self.x_axis, float)
        self.y_axis = np.asarray(self.y_axis, float)
        shape = (self.y_axis.size, self.x_axis.size)
        for name in ("values", "status", "reference"):
            if np.shape(getattr(self, name)) != shape:
                raise ValueError(f"{name} must have shape {shape}")
        for ax in (self.x_axis, self.y_axis):
            if ax.size < 2 or np.any(np.diff(ax) <= 0):
                raise ValueError("axes must be strictly increasing with at least 2 entries")

    @property
    def normalized(self) -> np.ndarray:
        """Signed ``I / reference``; lies in [-1, 1]."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.reference > 0, self.values / self.reference, 0.0)


def _fixed_depth(r, s, p, cfg):
    """Deepest-level estimate, reused from ``r`` when it got that far."""
    if r.levels_used == cfg.max_levels:
        last = r.history[-1]
        return last.value, last.reference_scale
    return regularized_I(s, p, cfg)


class _Sampler:
    """``(x, y) -> (I, reference, status)`` in strict or regularized mode."""

    def __init__(self, cfg, p, regularized):
        self.cfg, self.p, self.regularized = cfg, p, regularized
        self.calls = 0

    def __call__(self, x, y):
        self.calls += 1
        s = SpectralExponents(x, y)
        r = evaluate_I(s, self.p, self.cfg)
        if self.regularized:
            v, ref = _fixed_depth(r, s, self.p, self.cfg)
            return v, ref, r.status
        if r.status is Status.DIVERGENT:
            raise NonConvergent(f"I diverges at (x, y) = ({x:.6g}, {y:.6g})")
        return r.value, r.reference_scale, r.status


def _bracket_root(f, lo, hi, flo, fhi, width_tol, res_tol):
    """Illinois-accelerated bisection on a sign change of ``f``.

    ``f`` returns ``(value, reference, status)``.  Stops when the bracket is
    narrower than ``width_tol`` or a sample has ``|value|/reference <= res_tol``.
    """
    (vlo, rlo, _), (vhi, rhi, _) = flo, fhi
    side = 0
    for _ in range(200):
        if hi - lo <= width_tol:
            break
        # regula falsi with the Illinois halving, clipped into the inner 80%
        t = vlo / (vlo - vhi)
        t = min(max(t, 0.1), 0.9)
        mid = lo + t * (hi - lo)
        v, r, st = f(mid)
        if r > 0 and abs(v) / r <= res_tol:
            return mid, (v, r, st), hi - lo
        if (v > 0) == (vlo > 0):
            lo, vlo = mid, v
            if side == -1:
                vhi *= 0.5
            side = -1
        else:
            hi, vhi = mid, v
            if side == 1:
                vlo *= 0.5
            side = 1
    mid = 0.5 * (lo + hi)
    return mid, f(mid), hi - lo


def _offsets(f, y):
    out = []
    for dy in (-THICKNESS_OFFSET, THICKNESS_OFFSET):
        try:
            v, r, _ = f(y + dy)
            out.append(abs(v) / r if r > 0 else math.inf)
        except NonConvergent:
            out.append(math.inf)
    return tuple(out)


def _solve(fun, lo, hi, name, width_tol, res_tol):
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    flo, fhi = fun(lo), fun(hi)
    if flo[0] == 0:
        return lo, flo, 0.0
    if fhi[0] == 0:
        return hi, fhi, 0.0
    if (flo[0] > 0) == (fhi[0] > 0):
        raise NoSignChange(f"I has the same sign at {name} = {lo:.6g} and {hi:.6g}")
    return _bracket_root(fun, lo, hi, flo, fhi, width_tol, res_tol)


def find_zero_on_slice(
    x: float,
    y_lo: float,
    y_hi: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    p: Wavenumber = Wavenumber(1.0, 1.0),
    regularized: bool = False,
    thickness: bool = False,
) -> CurvePoint:
    """Zero of ``I(x, .)`` inside ``[y_lo, y_hi]``.

    In strict mode a divergent endpoint raises :class:`NonConvergent`.  In
    regularized mode the sign of the fixed-depth integral is used instead
    and divergence is only recorded in the point's status.
    """
    sample = _Sampler(cfg, p, regularized)
    fun = lambda y: sample(x, y)  # noqa: E731
    y, (v, r, st), width = _solve(fun, y_lo, y_hi, "y", BRACKET_TOL, RESIDUAL_TOL)
    off = _offsets(fun, y) if thickness else None
    return CurvePoint(x, y, abs(v) / r if r > 0 else math.inf, max(width, 1e-300), st.value, off)


def find_zero_on_row(
    y: float,
    x_lo: float,
    x_hi: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    p: Wavenumber = Wavenumber(1.0, 1.0),
    regularized: bool = False,
) -> CurvePoint:
    """Fallback for steep segments: zero of ``I(., y)`` inside ``[x_lo, x_hi]``."""
    sample = _Sampler(cfg, p, regularized)
    x, (v, r, st), width = _solve(lambda x: sample(x, y), x_lo, x_hi, "x", BRACKET_TOL, RESIDUAL_TOL)
    return CurvePoint(x, y, abs(v) / r if r > 0 else math.inf, max(width, 1e-300), st.value)


class TracedCurve(list):
    """List of CurvePoints ordered in x, plus tracing diagnostics."""

    def __init__(self, points=(), diagnostics=()):
        super().__init__(points)
        self.diagnostics = list(diagnostics)


def _scan_bracket(x, lo, hi, yc, cfg, p, regularized, pieces=8):
    """Sub-bracket holding the sign change closest to the prediction ``yc``.

    Guards against brackets that straddle two nearby zeros.
    """
    sample = _Sampler(cfg, p, regularized)
    ys = np.linspace(lo, hi, pieces + 1)
    vs = [sample(x, float(y))[0] for y in ys]
    cand = [(ys[i], ys[i + 1]) for i in range(pieces) if (vs[i] > 0) != (vs[i + 1] > 0) or vs[i] == 0]
    if not cand:
        raise NoSignChange(f"no sign change of I at x = {x:.6g} in [{lo:.6g}, {hi:.6g}]")
    return min(cand, key=lambda b: abs(0.5 * (b[0] + b[1]) - yc))


def _march(x0, y0, x_stop, step, cfg, p, regularized, thickness, diagnostics, residual_tol, retries=3):
    pts = []
    direction = 1.0 if x_stop >= x0 else -1.0
    prev = [(x0, y0)]
    slope = 0.0
    x = x0
    while direction * (x_stop - x) > 1e-12:
        x = x + direction * min(step, abs(x_stop - x))
        yc = prev[-1][1] + slope * (x - prev[-1][0])
        width = max(0.1, 4.0 * step * abs(slope))
        pt = None
        for attempt in range(retries + 1):
            try:
                lo, hi = _scan_bracket(x, yc - width / 2, yc + width / 2, yc, cfg, p, regularized)
                pt = find_zero_on_slice(x, lo, hi, cfg, p, regularized, thickness)
                if pt.normalized_residual > residual_tol:
                    # a sign jump of a single-signed field, not a zero
                    raise NoSignChange(f"sign change at (x, y) = ({x:.6g}, {pt.y:.6g}) has residual {pt.normalized_residual:.3g}")
                break
            except NoSignChange as exc:
                pt = None
                last = exc
                width *= 2.0
            except NonConvergent as exc:
                last = exc
                break
        if pt is None:
            msg = f"tracing stopped at x = {x:.6g}: {last}"
            log.warning(msg)
            diagnostics.append(msg)
            break
        pts.append(pt)
        prev.append((pt.x, pt.y))
        slope = (prev[-1][1] - prev[-2][1]) / (prev[-1][0] - prev[-2][0])
    return pts


def trace_curve(
    x_start: float,
    x_end: float,
    step: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    p: Wavenumber = Wavenumber(1.0, 1.0),
    regularized: bool = False,
    seed: tuple[float, float] = SEED,
    seed_halfwidth: float = 0.3,
    thickness: bool = False,
    residual_tol: float = TRACE_RESIDUAL_TOL,
) -> TracedCurve:
    """Continuation of the zero curve across ``[x_start, x_end]``.

    The curve is seeded by a slice solve at ``seed`` (clipped into the
    range) and continued in both directions with a linear predictor.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if x_end < x_start:
        x_start, x_end = x_end, x_start
    xs = min(max(seed[0], x_start), x_end)
    first = find_zero_on_slice(xs, seed[1] - seed_halfwidth, seed[1] + seed_halfwidth, cfg, p, regularized, thickness)
    if first.normalized_residual > residual_tol:
        raise NoSignChange(f"seed slice at x = {xs:.6g} has a sign jump, not a zero (residual {first.normalized_residual:.3g})")
    diagnostics: list[str] = []
    args = (step, cfg, p, regularized, thickness, diagnostics, residual_tol)
    left = _march(first.x, first.y, x_start, *args)
    right = _march(first.x, first.y, x_end, *args)
    return TracedCurve(left[::-1] + [first] + right, diagnostics)


def _cell(args):
    x, y, cfg, p, regularized = args
    s = SpectralExponents(x, y)
    r = evaluate_I(s, p, cfg)
    if regularized:
        v, ref = _fixed_depth(r, s, p, cfg)
        return v, ref, r.status.value
    return r.value, r.reference_scale, r.status.value


def grid_I(
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    nx: int,
    ny: int,
    cfg: QuadratureConfig = QuadratureConfig(),
    p: Wavenumber = Wavenumber(1.0, 1.0),
    regularized: bool = False,
    workers: int = 1,
) -> GridField:
    """Tensor-grid sweep of I; ``values[j, i]`` is at ``(x_axis[i], y_axis[j])``."""
    if nx < 2 or ny < 2:
        raise ValueError("nx and ny must both be >= 2")
    xa = np.linspace(x_range[0], x_range[1], nx)
    ya = np.linspace(y_range[0], y_range[1], ny)
    jobs = [(float(x), float(y), cfg, p, regularized) for y in ya for x in xa]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            out = list(ex.map(_cell, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        out = [_cell(j) for j in jobs]
    vals = np.array([o[0] for o in out]).reshape(ny, nx)
    refs = np.array([o[1] for o in out]).reshape(ny, nx)
    stat = np.array([o[2] for o in out], dtype=object).reshape(ny, nx)
    return GridField(xa, ya, vals, stat, refs, regularized)
