import math

import numpy as np
import pytest

import reach_grid as rg


def test_initial_discretization():
    disc = rg.Discretization.initial(T=1.0, L=1.0, P=math.e)
    assert disc.n == 1
    assert disc.steps == [1.0]
    assert disc.resolutions == pytest.approx([2 * math.e, 2 * math.e])


def test_error_of_single_interval():
    disc = rg.Discretization.initial(T=1.0, L=1.0, P=math.e)
    e0 = math.e * math.e
    e1 = math.expm1(1.0) * (math.e + math.e + math.e)
    assert rg.error_total(disc, 1.0, math.e) == pytest.approx(e0 + e1, rel=1e-14)
    assert rg.delta_error(disc, 1.0, math.e, 0) < 0


def test_subdivide_refines_steps():
    disc = rg.Discretization.initial(T=1.0, L=1.0, P=math.e).subdivide(1)
    assert disc.n == 2
    assert disc.nodes == [0.0, 0.5, 1.0]


def test_uniform_cost_and_soundness():
    system = rg.exponential_system(d=1, L=1.0)
    result = rg.run_uniform(system, 0.25)
    assert result.disc.n == 23
    assert result.record.total_cost == 5844
    assert result.record.error_bound <= 0.25
    for k in range(result.record.set_count):
        assert result.record.distance_to_exact(system, k) <= result.record.error_bound


def test_adaptive_cheaper_than_uniform():
    system = rg.exponential_system(d=1, L=1.0)
    adaptive = rg.run_adaptive(system, rg.default_ladder(system, 0.25))
    assert adaptive.record.error_bound <= 0.25
    assert adaptive.record.total_cost == 1703
    assert adaptive.thresholds[0].delta_cost_error is None
    assert all(t.delta_cost_error is not None for t in adaptive.thresholds[1:])
    errors = [it.error_after for it in adaptive.iterations]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_set_points_are_lattice_points():
    system = rg.michaelis_menten()
    result = rg.run_uniform(system, 0.5)
    pts = result.record.set_points(result.record.set_count - 1)
    rho = result.disc.resolutions[-1]
    assert pts.shape[1] == 2
    assert np.allclose(pts / rho, np.round(pts / rho))


def test_project_box_bound():
    box = rg.Box([0.1, -0.3], [0.7, 0.2])
    pts = rg.project_box(box, 0.25)
    assert len(pts) > 0
    assert np.all(pts >= np.array(box.lower) - 0.125 - 1e-12)
    assert np.all(pts <= np.array(box.upper) + 0.125 + 1e-12)


def test_resource_error_carries_step():
    system = rg.exponential_system(d=2, L=4.0)
    with pytest.raises(rg.ResourceError) as info:
        rg.run_uniform(system, 4.0, cap=100000)
    assert info.value.projected_cost > 100000
    assert isinstance(info.value, RuntimeError)


def test_sigma_curves_end_at_one():
    system = rg.exponential_system(d=1, L=2.0)
    record = rg.run_uniform(system, 2.0).record
    error, cost = rg.sigma_curves(record, system)
    assert error[-1] == pytest.approx(1.0)
    assert cost[-1] == pytest.approx(1.0)


def test_config_hash_is_stable():
    a = rg.config_hash("d = 2\nL = 1\neps = 0.25\n")
    b = rg.config_hash("eps=0.25\nL=1\nd=2  # same cell\n")
    assert a == b and len(a) == 16
    with pytest.raises(ValueError):
        rg.config_hash("eps = -1\n")
