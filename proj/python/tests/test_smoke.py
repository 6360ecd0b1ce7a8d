import math

import pytest

import reltrace as rt


def test_kinematics_roundtrip():
    p = rt.RelParams(m=1.0, c=10.0)
    assert rt.physical_energy(1.5, p) == pytest.approx(math.sqrt(10300.0), rel=1e-15)
    assert rt.pseudo_energy(math.sqrt(10300.0), p) == pytest.approx(1.5, rel=1e-13)
    with pytest.raises(rt.DomainError):
        rt.physical_energy(-60.0, p)


def test_special_functions():
    assert rt.bessel_J0(1.0) == pytest.approx(0.7651976865579666, abs=1e-15)
    assert rt.theta_direct(1.0) == pytest.approx(rt.theta_resummed(1.0), abs=1e-12)


def test_billiard_compare():
    p = rt.RelParams()
    cube = rt.billiard.BoxGeometry.cube(math.pi)
    grid = rt.linspace(10.0, 30.0, 300)
    levels = rt.billiard.exact_levels(cube, p, 40.0)
    assert levels[0].eps == 1.5 and levels[1].degeneracy == 3
    exact = rt.broadened_density(levels, grid, 0.3)
    semi = rt.billiard.exact_resummed_density(cube, p, grid, 20, 0.3)
    assert rt.compare(exact, semi, 10.0, 30.0).rel_L2 < 0.05


def test_engine_and_coulomb():
    p = rt.RelParams()
    box = rt.billiard.BoxGeometry(math.pi, 1.2 * math.pi, 0.9 * math.pi)
    d = rt.billiard.engine_oscillating_density(box, p, [10.0, 20.0], 2)
    assert d.system == "trace-engine" and not d.diagnostics
    assert rt.coulomb.energy(1, 0, 0.1) / 100.0 == pytest.approx(0.9949361530051241, abs=1e-15)
    with pytest.raises(rt.CriticalCouplingError):
        rt.coulomb.energy(1, 0, 0.6)
