"""Published internal-wave spectral exponents from moored-array experiments.

Each record stores the energy-spectrum power laws ``E ~ omega^-a m^-b`` as
quoted, with ranges kept as intervals, and the implied action exponents
``(x, y)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .spectral_core import action_exponents


class Basis(enum.Enum):
    VERTICAL = "VERTICAL"
    HORIZONTAL = "HORIZONTAL"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __str__(self):
        return f"[{self.lo:g}, {self.hi:g}]"


def _lo(v):
    return v.lo if isinstance(v, Interval) else v


def _hi(v):
    return v.hi if isinstance(v, Interval) else v


def mid(v) -> float:
    return v.mid if isinstance(v, Interval) else float(v)


def _span(lo, hi):
    lo, hi = round(min(lo, hi), 12), round(max(lo, hi), 12)
    return lo if lo == hi else Interval(lo, hi)


@dataclass(frozen=True)
class ObservationRecord:
    name: str
    a: float | Interval
    b: float | Interval | None
    basis: Basis
    derived_x: float | Interval
    derived_y: float | Interval
    notes: str = ""
    # end points in (x, y) of the segment drawn for interval records
    segment: tuple[tuple[float, float], tuple[float, float]] | None = None

    @property
    def is_interval(self) -> bool:
        return isinstance(self.derived_x, Interval) or isinstance(self.derived_y, Interval)

    @property
    def midpoint(self) -> tuple[float, float]:
        return mid(self.derived_x), mid(self.derived_y)


def from_vertical(name: str, a, b, notes: str = "") -> ObservationRecord:
    """Record for ``E ~ omega^-a m^-b``; intervals are mapped endpoint-wise."""
    if isinstance(a, Interval) and isinstance(b, Interval):
        raise ValueError("at most one of a, b may be an interval")
    ends = [action_exponents(_lo(a), _lo(b)), action_exponents(_hi(a), _hi(b))]
    xs = [round(e.x, 12) for e in ends]
    ys = [round(e.y, 12) for e in ends]
    seg = None if xs[0] == xs[1] and ys[0] == ys[1] else ((xs[0], ys[0]), (xs[1], ys[1]))
    return ObservationRecord(name, a, b, Basis.VERTICAL, _span(*xs), _span(*ys), notes, seg)


def from_horizontal(name: str, a, p, notes: str = "") -> ObservationRecord:
    """Record for ``E ~ omega^-a k^-p``.

    The horizontal exponent is taken as ``x`` directly.  ``y`` comes from the
    frequency exponent: on ``n ~ k^-x |m|^-y`` the energy density in
    ``(k, omega)`` goes as ``omega^(y - 1)``, hence ``y = 1 - a``.
    """
    if isinstance(a, Interval):
        raise ValueError("interval frequency exponents are not supported on the horizontal basis")
    y = round(1.0 - a, 12)
    seg = ((p.lo, y), (p.hi, y)) if isinstance(p, Interval) else None
    return ObservationRecord(name, a, None, Basis.HORIZONTAL, p, y, notes, seg)


def builtin_observations() -> list[ObservationRecord]:
    return [
        from_vertical("MODE", 1.6, 2.25, "Sargasso Sea, Mar-Jul 1973; L76"),
        from_horizontal(
            "IWEX", 1.75, Interval(2.0, 2.8), "Sargasso Sea thermocline, Nov-Dec 1973; M78; horizontal-wavenumber fit"
        ),
        from_vertical("AIWEX", 1.2, 2.15, "Canada Basin thermocline, Mar-May 1985; Letal87, DandM91"),
        from_vertical("FASINEX", 1.75, Interval(1.9, 2.0), "Sargasso Sea thermocline, Jan-Jun 1986; WandME, Eetal91"),
        from_vertical("PATCHEX", Interval(1.65, 2.0), 1.75, "eastern subtropical North Pacific, Oct 1986; SandP91"),
        from_vertical("SWAPP", 2.0, 1.9, "eastern subtropical North Pacific thermocline, Mar 1990; A92"),
        from_vertical("NATRE", 0.6, 2.75, "eastern subtropical North Atlantic thermocline, Feb-Oct 1992; P03; 1-6 cpd"),
    ]


REFERENCE_POINTS = (
    ("exact solution", 3.5, 0.5),
    ("GM", 4.0, 0.0),
    ("equipartition", 1.0, -1.0),
)
