"""Collision integral of the angle-averaged internal-wave kinetic equation.

Evaluates the three-wave collision integral on isotropic power-law action
spectra ``n = n0 k^-x |m|^-y``, traces its zero set in the (x, y) exponent
plane and compares it with historical ocean observations.
"""

from .spectral_core import (
    PhysicalConstants,
    SpectralExponents,
    Wavenumber,
    action,
    action_exponents,
    energy_exponents,
    f_term,
    frequency,
    matrix_element_U,
    matrix_element_V,
)
from .resonance import (
    Branch,
    ResonantTriad,
    TriangleGeometry,
    delta_jacobian,
    in_kinematic_box,
    solve_vertical,
    triangle_cosines,
)
from .collision import (
    IntegralResult,
    QuadratureConfig,
    Status,
    evaluate_I,
    integrand,
    regularized_I,
    scaling_exponent_check,
)
from .zero_curve import (
    CurvePoint,
    GridField,
    NoSignChange,
    NonConvergent,
    find_zero_on_slice,
    find_zero_on_row,
    grid_I,
    trace_curve,
)
from .observations import ObservationRecord, builtin_observations

__version__ = "0.1.0"
