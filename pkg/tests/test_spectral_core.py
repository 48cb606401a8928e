import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwturb import (
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
    triangle_cosines,
)

finite = st.floats(-10, 10, allow_nan=False)


def test_frequency_values():
    assert frequency(Wavenumber(1, 1)) == 1.0
    assert frequency(Wavenumber(2, -4)) == 0.5
    assert frequency(Wavenumber(3, 1), PhysicalConstants(N=2)) == 6.0


def test_frequency_even_in_m():
    assert frequency(Wavenumber(0.3, 2.0)) == frequency(Wavenumber(0.3, -2.0))


def test_wavenumber_rejects_bad_input():
    with pytest.raises(ValueError):
        Wavenumber(1, 0)
    with pytest.raises(ValueError):
        Wavenumber(-1, 1)
    with pytest.raises(ValueError):
        Wavenumber(math.nan, 1)


def test_constants_and_amplitude_validation():
    with pytest.raises(ValueError):
        PhysicalConstants(N=0)
    with pytest.raises(ValueError):
        SpectralExponents(3, 1, n0=0)
    assert PhysicalConstants().coupling == pytest.approx(1 / (4 * math.sqrt(2)))


def test_action_power_law():
    s = SpectralExponents(3.5, 0.5, n0=2.0)
    assert action(Wavenumber(2, 4), s) == pytest.approx(2.0 * 2**-3.5 * 4**-0.5)
    with pytest.raises(ValueError):
        action(Wavenumber(0, 1), s)


def test_equipartition_action_is_inverse_frequency():
    s = SpectralExponents(1, -1)
    for p in (Wavenumber(0.4, 2.0), Wavenumber(3.0, -0.7)):
        assert action(p, s) == pytest.approx(1 / frequency(p))


def test_exponent_conversion_examples():
    assert energy_exponents(SpectralExponents(4, 0)) == (2, 2)
    assert energy_exponents(SpectralExponents(3.5, 0.5)) == (1.5, 2.0)
    e = action_exponents(1.6, 2.25)
    assert (e.x, e.y) == pytest.approx((3.6, 0.65))


@given(finite, finite)
def test_exponent_conversion_round_trip(x, y):
    a, b = energy_exponents(SpectralExponents(x, y))
    s = action_exponents(a, b)
    assert s.x == pytest.approx(x, abs=1e-12)
    assert s.y == pytest.approx(y, abs=1e-12)


def test_f_term():
    assert f_term(1.0, 2.0, 3.0) == 6.0 - 5.0
    # equipartition on a resonant sum triad: w = w1 + w2 with n = 1/w
    w1, w2 = 0.3, 0.9
    assert f_term(1 / (w1 + w2), 1 / w1, 1 / w2) == pytest.approx(0.0, abs=1e-15)


def test_matrix_element_U_formula():
    pa, pb, pc = Wavenumber(1, 1), Wavenumber(0.5, 2), Wavenumber(0.8, -1)
    c = PhysicalConstants()
    want = -c.coupling * 0.25 * math.sqrt(frequency(pb) * frequency(pc) / frequency(pa)) * 1
    assert matrix_element_U(pa, pb, pc, 0.25) == pytest.approx(want)
    with pytest.raises(ValueError):
        matrix_element_U(pa, pb, pc, 1.5)


def test_matrix_element_V_is_sum_of_three_U():
    p, p1, p2 = Wavenumber(1, 1), Wavenumber(0.7, 2.3), Wavenumber(0.9, -1.3)
    g = triangle_cosines(1, 0.7, 0.9)
    v = matrix_element_V(p, p1, p2, g.as_tuple())
    u = (
        matrix_element_U(p, p1, p2, g.cos12)
        + matrix_element_U(p1, p, p2, g.cos02)
        + matrix_element_U(p2, p, p1, g.cos01)
    )
    assert v == pytest.approx(u)


def test_matrix_element_V_symmetric_in_lower_pair():
    p, p1, p2 = Wavenumber(1, 1), Wavenumber(0.7, 2.3), Wavenumber(0.9, -1.3)
    g12 = triangle_cosines(1, 0.7, 0.9)
    g21 = triangle_cosines(1, 0.9, 0.7)
    assert matrix_element_V(p, p1, p2, g12.as_tuple()) == pytest.approx(matrix_element_V(p, p2, p1, g21.as_tuple()))


def test_matrix_element_V_scales_with_coupling():
    p, p1, p2 = Wavenumber(1, 1), Wavenumber(0.7, 2.3), Wavenumber(0.9, -1.3)
    cos = triangle_cosines(1, 0.7, 0.9).as_tuple()
    base = matrix_element_V(p, p1, p2, cos)
    assert matrix_element_V(p, p1, p2, cos, PhysicalConstants(g=4.0)) == pytest.approx(base / 2)
