"""(1+1)-d energies and forces against closed forms and independent scipy quadrature."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from netcasimir.casimir1d import (
    DETERMINANT_INTEGRAL,
    STAR_CLOSED_FORM,
    conformal_residual,
    energy_general,
    energy_star,
    force_general,
    force_star,
    pole_coefficient,
)
from netcasimir.graph import preset_circle, preset_loop4, preset_star, preset_strip, preset_tree5
from netcasimir.special import dilog

PI = math.pi
LI2_THIRD = 0.366213229977063    # mpmath Li2(1/3)
LI2_MTHIRD = -0.309033126487808  # mpmath Li2(-1/3)


def scipy_star_energy(lengths, bc):
    """Pole sum plus the imaginary-axis integral, integrated by QUADPACK."""
    if bc == "dirichlet":
        num = lambda w: sum(L / np.sinh(L * w) ** 2 for L in lengths)
        den = lambda w: sum(1 / np.tanh(L * w) for L in lengths)
        sign, c = 1.0, -PI / 24
    else:
        num = lambda w: sum(L / np.cosh(L * w) ** 2 for L in lengths)
        den = lambda w: sum(np.tanh(L * w) for L in lengths)
        sign, c = -1.0, PI / 48
    f = lambda w: sign * w * num(w) / (2 * PI * den(w))
    top = 40 / min(lengths)
    with np.errstate(over="ignore"):
        val = quad(f, 1e-12, top, limit=400, epsabs=1e-14, epsrel=1e-13, points=[1 / L for L in lengths if 1 / L < top])[0]
    return c * sum(1 / L for L in lengths) + val


def test_pole_coefficients():
    assert pole_coefficient("dirichlet") == pytest.approx(-PI / 24, rel=1e-15)
    assert pole_coefficient("neumann") == pytest.approx(PI / 48, rel=1e-15)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
@pytest.mark.parametrize("lengths", [[1, 1, 1], [1.0, 0.6, 1.7], [0.3, 2.0, 5.0, 0.9], [1, 10]])
def test_star_energy_against_quadpack(lengths, bc):
    res = energy_star(lengths, bc)
    assert res.method == STAR_CLOSED_FORM
    assert res.energy == pytest.approx(scipy_star_energy(lengths, bc), abs=1e-11)


def test_symmetric_star_values():
    assert energy_star([2, 2, 2], "d").energy == pytest.approx(-PI / 32, abs=1e-12)
    assert force_star([2, 2, 2], "d", 0) == pytest.approx(-PI / 192, abs=1e-12)
    assert energy_star([1, 1, 1], "n").energy == pytest.approx(0.0, abs=1e-12)
    assert force_star([1, 1, 1], "n", 2) == pytest.approx(0.0, abs=1e-12)


def test_two_edge_star_is_a_strip():
    # two leaves joined at a Kirchhoff node is one segment of length L1 + L2
    assert energy_star([0.4, 0.6], "d").energy == pytest.approx(-PI / 24, abs=1e-12)
    assert energy_star([0.4, 0.6], "n").energy == pytest.approx(-PI / 24, abs=1e-12)


@pytest.mark.parametrize("bc, li2", [("dirichlet", LI2_THIRD), ("neumann", LI2_MTHIRD)])
def test_long_arm_limit(bc, li2):
    target = -li2 / (4 * PI)
    assert dilog(1 / 3 if bc == "dirichlet" else -1 / 3) == pytest.approx(li2, abs=1e-14)
    assert energy_star([1, 1e6, 1e6], bc).energy == pytest.approx(target, abs=1e-6)
    assert force_star([1, 1e6, 1e6], bc, 0) == pytest.approx(target, abs=1e-6)
    # convergence is algebraic in 1/L2
    assert abs(force_star([1, 1e3, 1e3], bc, 0) - target) < 1e-3


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_short_arm_limit_is_strip(bc):
    assert force_star([1, 1e-6, 1e-6], bc, 0) == pytest.approx(-PI / 24, abs=1e-5)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_star_forces_conformal_and_fd(bc):
    lengths = [1.0, 0.6, 1.7, 2.3]
    res = energy_star(lengths, bc, with_forces=True)
    total = math.fsum(res.forces[f"E{i + 1}"] * L for i, L in enumerate(lengths))
    assert total == pytest.approx(res.energy, abs=1e-12)
    for i, L in enumerate(lengths):
        h = 1e-5 * L
        up, dn = list(lengths), list(lengths)
        up[i] += h
        dn[i] -= h
        fd = -(energy_star(up, bc).energy - energy_star(dn, bc).energy) / (2 * h)
        assert res.forces[f"E{i + 1}"] == pytest.approx(fd, abs=1e-8)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_general_engine_agrees_with_closed_form(bc):
    lengths = [1.0, 0.6, 1.7]
    g = preset_star(3, lengths, bc)
    res = energy_general(g, with_forces=True)
    assert res.method == DETERMINANT_INTEGRAL
    ref = energy_star(lengths, bc, with_forces=True)
    assert res.energy == pytest.approx(ref.energy, abs=1e-11)
    for key, F in ref.forces.items():
        assert res.forces[key] == pytest.approx(F, abs=1e-8)
        assert force_general(g, key, method="analytic") == pytest.approx(F, abs=1e-11)


# reference integrands for equal edge lengths L = 1, evaluated independently by QUADPACK
def _tree_dbc(w):
    return w * (1 - 1 / math.tanh(w)) * (-16 * math.sinh(2 * w) + 29 * math.cosh(2 * w) + 19) / (
        2 * PI * (9 * math.cosh(2 * w) + 7))


def _tree_nbc(w):
    return w * (-45 * math.exp(-4 * w) + math.exp(-2 * w) + 11 * math.exp(2 * w) - 7) / (
        2 * PI * (2 * math.sinh(2 * w) + 9 * math.sinh(4 * w)))


def _loop_dbc(w):
    return w * (1 - 1 / math.tanh(w)) * (-5 * math.sinh(2 * w) + 13 * math.cosh(2 * w) - 3) / (
        9 * PI * math.cosh(2 * w) + PI)


def _loop_nbc(w):
    return 4 * w * (1 - 1 / math.tanh(w)) * (math.sinh(w) - 2 * math.cosh(w)) ** 2 / (
        PI * (9 * math.cosh(2 * w) + 7))


@pytest.mark.parametrize(
    "preset, n, bc, integrand, rounded",
    [
        (preset_tree5, 5, "dirichlet", _tree_dbc, -0.280),
        (preset_tree5, 5, "neumann", _tree_nbc, 0.046),
        (preset_loop4, 4, "dirichlet", _loop_dbc, -0.216),
        (preset_loop4, 4, "neumann", _loop_nbc, -0.149),
    ],
)
def test_equal_length_networks(preset, n, bc, integrand, rounded):
    ref = quad(integrand, 1e-12, 40, limit=200, epsabs=1e-14)[0]
    assert ref == pytest.approx(rounded, abs=6e-4)
    for L in (1.0, 2.5):
        W = energy_general(preset([L] * n, bc)).energy
        assert W * L == pytest.approx(ref, abs=1e-11)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_strip(bc):
    assert energy_general(preset_strip(2.0, bc)).energy == pytest.approx(-PI / 48, abs=1e-12)


def test_mixed_strip_is_repulsive():
    assert energy_general(preset_strip(1.0, "dirichlet", "neumann")).energy == pytest.approx(PI / 48, abs=1e-12)


@pytest.mark.parametrize("L", [0.5, 1.0, 3.0])
def test_circle(L):
    assert energy_general(preset_circle(L)).energy == pytest.approx(-PI / (6 * L), abs=1e-12)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_loop_strip_limit_force(bc):
    g = preset_loop4([0.5, 1e-4, 1e-4, 0.5], bc)
    assert force_general(g, "E1") == pytest.approx(-PI / 24, abs=1e-3)


@pytest.mark.parametrize("g", [preset_tree5([1.0, 1.3, 0.7, 1.1, 0.9], "n"), preset_loop4([1.0, 0.3, 2.2, 0.8], "d")],
                         ids=["tree5", "loop4"])
def test_general_conformal_and_integration_by_parts(g):
    res = energy_general(g, with_forces=True)
    assert conformal_residual(g, res) < 1e-9
    assert energy_general(g, integrand="logdet").energy == pytest.approx(res.energy, abs=1e-11)
    an = energy_general(g, with_forces=True, force_method="analytic")
    for key in res.forces:
        assert an.forces[key] == pytest.approx(res.forces[key], abs=1e-8)


def test_bad_inputs():
    with pytest.raises(ValueError):
        energy_star([1.0], "d")
    with pytest.raises(ValueError):
        energy_star([1.0, -1.0], "d")
    with pytest.raises(IndexError):
        force_star([1, 1], "d", 5)
    with pytest.raises(ValueError):
        energy_general(preset_circle(1.0), integrand="bogus")


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.05, 20.0), min_size=2, max_size=6), st.sampled_from(["dirichlet", "neumann"]),
       st.floats(0.1, 10.0))
def test_star_scaling_and_conformal_property(lengths, bc, s):
    res = energy_star(lengths, bc, with_forces=True)
    scaled = energy_star([s * L for L in lengths], bc).energy
    unit = 1.0 / min(lengths)
    assert s * scaled == pytest.approx(res.energy, abs=1e-10 * unit)
    total = math.fsum(res.forces[f"E{i + 1}"] * L for i, L in enumerate(lengths))
    assert total == pytest.approx(res.energy, abs=1e-10 * unit)
