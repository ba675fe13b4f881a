"""Junction matrices against hand-derived determinants and reference matrices."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netcasimir.graph import preset_circle, preset_loop4, preset_star, preset_strip, preset_tree5
from netcasimir.secular import (
    DETERMINANT,
    STAR_CLOSED,
    build_matrix,
    det_real,
    dlog_det_imag,
    dlog_det_imag_dlength,
    log_det_imag,
    log_det_imag_limit,
    plan_problem,
    secular_function,
    star_secular_closed,
)

KS = np.linspace(0.05, 9.0, 37)
GENERIC5 = [1.0, 1.3, 0.7, 1.1, 0.9]
GENERIC4 = [1.0, 1.3, 0.7, 1.1]


def sin(x):
    return np.sin(x)


def cos(x):
    return np.cos(x)


def delta_tree_dbc(L, k):
    L1, L2, L3, L4, L5 = L
    return (sin(k * L1) * sin(k * L2) * sin(k * L4) * cos(k * L3) * cos(k * L5)
            + sin(k * L5) * cos(k * L3) * (sin(k * (L1 + L2)) * sin(k * L4) + sin(k * L1) * sin(k * L2) * cos(k * L4))
            + sin(k * L3) * (sin(k * (L1 + L2)) * sin(k * (L4 + L5)) - sin(k * L1) * sin(k * L2) * sin(k * L4) * sin(k * L5)))


def delta_tree_nbc(L, k):
    L1, L2, L3, L4, L5 = L
    return (-0.25 * (sin(k * (L1 + L3 - L4 + L5)) + 3 * sin(k * (L1 + L3 + L4 + L5))) * cos(k * L2)
            - 0.25 * (sin(k * (L1 + L3 + L4 - L5)) - sin(k * (L1 + L3 - L4 - L5))) * cos(k * L2)
            + sin(k * L2) * cos(k * L1) * (sin(k * L3) * sin(k * (L4 + L5)) - cos(k * L3) * cos(k * L4) * cos(k * L5)))


def delta_loop_dbc(L, k):
    L1, L2, L3, L4 = L
    return (-cos(k * L1) * sin(k * L2) * sin(k * L3) * cos(k * L4)
            + 4 * sin(k * L1) * sin(0.5 * k * (L2 + L3)) ** 2 * sin(k * L4)
            - sin(k * (L2 + L3)) * sin(k * (L1 + L4)))


def delta_loop_nbc(L, k):
    L1, L2, L3, L4 = L
    return (sin(k * L1) * (sin(k * L2) * cos(k * L3) * cos(k * L4) + sin(k * L3) * cos(k * (L2 + L4)))
            + sin(0.5 * k * (L2 + L3)) * (3 * sin(0.5 * k * (L2 + L3 + 2 * L4)) + sin(0.5 * k * (L2 + L3 - 2 * L4)))
            * cos(k * L1))


@pytest.mark.parametrize(
    "preset, lengths, bc, delta, ratio",
    [
        (preset_tree5, GENERIC5, "dirichlet", delta_tree_dbc, -1.0),
        (preset_tree5, GENERIC5, "neumann", delta_tree_nbc, -1.0),
        (preset_loop4, GENERIC4, "dirichlet", delta_loop_dbc, -1.0),
        (preset_loop4, GENERIC4, "neumann", delta_loop_nbc, 1.0),
    ],
)
def test_determinant_matches_hand_expansion(preset, lengths, bc, delta, ratio):
    f = secular_function(preset(lengths, bc))
    ours = det_real(f, KS)
    ref = delta(lengths, KS)
    np.testing.assert_allclose(ours, ratio * ref, atol=1e-12)


def tree_matrix_reference(L, k):
    s = [sin(k * x) for x in L]
    c = [cos(k * x) for x in L]
    return np.array([
        [s[0], -s[1], 0, 0, 0, 0],
        [0, s[1], 0, 1, 0, 0],
        [c[0], c[1], 1, 0, 0, 0],
        [0, 0, s[2], c[2], -s[3], 0],
        [0, 0, 0, 0, s[3], -s[4]],
        [0, 0, c[2], -s[2], c[3], c[4]],
    ])


def loop_matrix_reference(L, k):
    s = [sin(k * x) for x in L]
    c = [cos(k * x) for x in L]
    return np.array([
        [s[0], 0, 1, 0, 0, 0],
        [0, 0, 1, 0, -1, 0],
        [c[0], 1, 0, 1, 0, 0],
        [0, s[1], c[1], 0, 0, -s[3]],
        [0, 0, 0, -s[2], -c[2], s[3]],
        [0, c[1], -s[1], c[2], -s[2], c[3]],
    ])


def test_coefficient_order():
    assert plan_problem(preset_tree5(GENERIC5, "d")).coefficient_labels == ["a1", "a2", "a3", "b3", "a4", "a5"]
    assert plan_problem(preset_loop4(GENERIC4, "d")).coefficient_labels == ["a1", "a2", "b2", "a3", "b3", "a4"]


def test_tree_matrix_equals_reference_up_to_row_signs():
    p = plan_problem(preset_tree5(GENERIC5, "d"))
    signs = np.diag([-1, -1, 1, 1, 1, -1])
    for k in KS:
        np.testing.assert_allclose(signs @ build_matrix(p, k), tree_matrix_reference(GENERIC5, k), atol=1e-14)


def test_loop_matrix_related_by_unimodular_row_transform():
    p = plan_problem(preset_loop4(GENERIC4, "d"))
    transforms = [loop_matrix_reference(GENERIC4, k) @ np.linalg.inv(build_matrix(p, k)) for k in (0.37, 1.9, 4.4)]
    T = transforms[0]
    np.testing.assert_allclose(T, np.round(T), atol=1e-10)
    for other in transforms[1:]:
        np.testing.assert_allclose(other, T, atol=1e-10)
    assert abs(abs(np.linalg.det(np.round(T))) - 1) < 1e-12


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_star_closed_form_and_polynomial(bc):
    lengths = [1.0, 0.6, 1.7]
    g = preset_star(3, lengths, bc)
    det = det_real(secular_function(g), KS)
    poly = det_real(secular_function(g, STAR_CLOSED), KS)
    np.testing.assert_allclose(np.abs(det), np.abs(poly), atol=1e-12)
    trig = np.prod([(sin if bc == "dirichlet" else cos)(KS * L) for L in lengths], axis=0)
    np.testing.assert_allclose(poly, trig * star_secular_closed(lengths, bc, KS), atol=1e-12)


def test_star_closed_signed_infinity_at_pole():
    # sin(pi) is not exactly zero in floating point, so the value is huge rather than inf
    assert abs(star_secular_closed([1.0, 2.0], "d", math.pi)) > 1e15
    assert star_secular_closed([1.0], "n", 0.0) == 0.0


def test_strip_and_circle_zeros():
    strip = secular_function(preset_strip(1.0, "d"))
    assert abs(det_real(strip, math.pi)) < 1e-14
    assert abs(det_real(strip, 2.5)) > 0.1
    circle = plan_problem(preset_circle(1.0))
    M = build_matrix(circle, 2 * math.pi)
    assert np.max(np.abs(M)) < 1e-14   # double zero: the whole matrix vanishes


def test_entries_bounded_on_real_axis():
    p = plan_problem(preset_loop4(GENERIC4, "n"))
    M = build_matrix(p, np.linspace(0.0, 500.0, 2001))
    assert np.max(np.abs(M)) <= 1.0 + 1e-15


@pytest.mark.parametrize("variant", [DETERMINANT, STAR_CLOSED])
@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_imaginary_axis_log_det_against_closed_star(variant, bc):
    lengths = [1.0, 0.6, 1.7]
    w = np.linspace(0.01, 30, 200)
    f = secular_function(preset_star(3, lengths, bc), variant)
    h = log_det_imag(f, w)
    fn = np.tanh if bc == "neumann" else (lambda x: 1 / np.tanh(x))
    # |Delta(iw)| e^{-w sum L} = prod (e^{-wL} |sinh or cosh|) * |sum coth or tanh|
    env = sum(np.log(np.abs(np.sinh(w * L) if bc == "dirichlet" else np.cosh(w * L))) - w * L for L in lengths)
    ref = env + np.log(np.abs(sum(fn(w * L) for L in lengths)))
    diff = h - ref
    assert np.ptp(diff) < 1e-11   # equal up to an additive constant
    assert log_det_imag_limit(f) - h[-1] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("g", [preset_tree5(GENERIC5, "d"), preset_loop4(GENERIC4, "n"), preset_circle(1.3)],
                         ids=["tree5", "loop4", "circle"])
def test_dlog_det_matches_finite_difference(g):
    f = secular_function(g)
    w = np.array([0.05, 0.4, 1.3, 3.0])
    h = 1e-6
    fd = (log_det_imag(f, w + h) - log_det_imag(f, w - h)) / (2 * h)
    np.testing.assert_allclose(dlog_det_imag(f, w), fd, atol=1e-8)


def test_dlength_matches_finite_difference():
    g = preset_tree5(GENERIC5, "n")
    w = np.array([0.2, 1.1])
    h = 1e-6
    for edge in (0, 2, 4):
        up, dn = list(GENERIC5), list(GENERIC5)
        up[edge] += h
        dn[edge] -= h
        fd = (log_det_imag(secular_function(g.with_lengths(up)), w)
              - log_det_imag(secular_function(g.with_lengths(dn)), w)) / (2 * h)
        np.testing.assert_allclose(dlog_det_imag_dlength(secular_function(g), w, edge), fd, atol=1e-7)


lengths_st = st.lists(st.floats(0.1, 3.0), min_size=4, max_size=4)


@settings(max_examples=40, deadline=None)
@given(lengths_st, st.floats(0.01, 20.0), st.sampled_from(["dirichlet", "neumann"]))
def test_loop_det_matches_expansion_property(lengths, k, bc):
    f = secular_function(preset_loop4(lengths, bc))
    ref = delta_loop_dbc(lengths, k) if bc == "dirichlet" else -delta_loop_nbc(lengths, k)
    assert -det_real(f, k) == pytest.approx(ref, abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 3.0), min_size=2, max_size=6), st.floats(0.01, 5.0),
       st.sampled_from(["dirichlet", "neumann"]))
def test_star_variants_share_h_prime_property(lengths, w, bc):
    g = preset_star(len(lengths), lengths, bc)
    a = float(dlog_det_imag(secular_function(g), w))
    b = float(dlog_det_imag(secular_function(g, STAR_CLOSED), w))
    assert math.isfinite(a)
    assert a == pytest.approx(b, abs=1e-10 * (1 + abs(b)))
