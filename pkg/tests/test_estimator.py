"""Sample container, pointwise/grid estimates, grid CSV round trip."""

import math

import numpy as np
import pytest

from gammakde.estimator import (
    GridEvaluation,
    Sample,
    SampleMeta,
    density_at,
    derivative_at,
    evaluate_on_grid,
    load_grid_csv,
    save_grid_csv,
)
from gammakde.kernels import kernel_x_derivative
from gammakde.numerics import integrate_semi_infinite
from gammakde.refdens import sample as draw_sample
from gammakde.refdens import MaxwellParams

from conftest import rel_err

# single gamma kernel at rho = x/b = 2, t = 0.5: value and x-derivative
K_SINGLE = 0.73575888234288464
KD_SINGLE = -0.6221346597282556


class TestSample:
    def test_basics(self):
        s = Sample(np.array([0.0, 1.0, 2.5]))
        assert s.n == 3
        assert s.meta is None
        s2 = Sample([1.0, 2.0], meta=SampleMeta(seed=7, source="test"))
        assert s2.meta.seed == 7

    @pytest.mark.parametrize(
        "bad",
        [
            [],
            [[1.0, 2.0]],
            [1.0, -0.5],
            [1.0, math.nan],
            [1.0, math.inf],
        ],
        ids=["empty", "2d", "negative", "nan", "inf"],
    )
    def test_rejects_bad_values(self, bad):
        with pytest.raises(ValueError):
            Sample(np.array(bad))


class TestPointwise:
    def test_single_observation_reduces_to_one_kernel(self):
        # the estimator evaluates in log space, so allow a few ulp of drift
        s = Sample(np.array([0.5]))
        assert rel_err(density_at(s, 0.5, 1.0), K_SINGLE) < 5e-14
        assert rel_err(derivative_at(s, 0.5, 1.0), KD_SINGLE) < 5e-14

    def test_average_of_kernels(self):
        # two observations: the estimate is the mean of two kernel values
        s = Sample(np.array([0.5, 1.5]))
        got = derivative_at(s, 0.5, 1.0)
        want = 0.5 * (
            kernel_x_derivative(1.0, 0.5, 0.5) + kernel_x_derivative(1.0, 0.5, 1.5)
        )
        assert rel_err(got, want) < 1e-14

    def test_zero_observations_at_origin(self):
        # t = 0 feeds the density only through the rho = 1 kernel at x = 0
        s = Sample(np.array([0.0, 0.5, 1.0]))
        assert rel_err(density_at(s, 0.1, 0.0), 3.3559444897628268) < 1e-13
        assert derivative_at(s, 0.1, 0.0) == 0.0
        # away from the origin rho > 1 and t = 0 contributes nothing
        s_zero = Sample(np.array([0.0]))
        assert density_at(s_zero, 0.1, 1.0) == 0.0
        assert derivative_at(s_zero, 0.1, 1.0) == 0.0

    def test_all_zero_sample(self):
        s = Sample(np.array([0.0, 0.0]))
        assert density_at(s, 0.25, 0.0) == 4.0  # 1 / b
        assert derivative_at(s, 0.25, 0.0) == 0.0

    def test_derivative_matches_density_difference(self, rng):
        s = Sample(np.sort(rng.gamma(2.0, 1.0, size=200)))
        b = 0.2
        h = 1e-6
        for x in (0.15, 0.6, 1.3, 2.7):  # straddles both shape branches
            fd = (density_at(s, b, x + h) - density_at(s, b, x - h)) / (2.0 * h)
            assert rel_err(derivative_at(s, b, x), fd) < 1e-5, x

    def test_domain_errors(self):
        s = Sample(np.array([1.0]))
        with pytest.raises(ValueError):
            density_at(s, -0.1, 1.0)
        with pytest.raises(ValueError):
            density_at(s, 0.1, -1.0)
        with pytest.raises(ValueError):
            derivative_at(s, math.nan, 1.0)


class TestGrid:
    def test_matches_pointwise(self):
        s = draw_sample(MaxwellParams(), 500, 11)
        grid = np.linspace(0.05, 3.0, 40)
        ev = evaluate_on_grid(s, 0.15, grid)
        assert ev.bandwidth == 0.15
        for i in (0, 7, 19, 39):
            assert ev.density[i] == density_at(s, 0.15, grid[i])
            assert ev.derivative[i] == derivative_at(s, 0.15, grid[i])

    def test_blocking_is_invisible(self):
        # a large sample forces several grid blocks through the core loop
        s = draw_sample(MaxwellParams(), 30_000, 3)
        grid = np.linspace(0.1, 3.0, 150)
        ev = evaluate_on_grid(s, 0.1, grid)
        i = 77
        assert ev.density[i] == density_at(s, 0.1, grid[i])
        assert ev.derivative[i] == derivative_at(s, 0.1, grid[i])

    def test_density_integrates_to_one(self):
        # each kernel is itself a density in t for fixed x, but the estimate
        # integrates over x; mass 1 still holds to first order
        s = draw_sample(MaxwellParams(), 1000, 5)
        mass = integrate_semi_infinite(
            lambda x: np.array([density_at(s, 0.1, float(v)) for v in x]),
            1e-6,
        )
        assert abs(mass.value - 1.0) < 0.01

    def test_grid_validation(self):
        s = Sample(np.array([1.0]))
        with pytest.raises(ValueError):
            evaluate_on_grid(s, 0.1, np.array([]))
        with pytest.raises(ValueError):
            evaluate_on_grid(s, 0.1, np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            evaluate_on_grid(s, 0.1, np.array([0.5, 0.2]))
        with pytest.raises(ValueError):
            evaluate_on_grid(s, 0.1, np.array([-0.5, 0.2]))
        ev = evaluate_on_grid(s, 0.1, np.array([1.0]))  # single point is fine
        assert ev.density.shape == (1,)


class TestGridEvaluation:
    def test_validation(self):
        g = np.array([0.5, 1.0])
        ok = dict(grid=g, density=np.array([0.1, 0.2]),
                  derivative=np.array([0.0, -0.1]), bandwidth=0.1)
        GridEvaluation(**ok)
        with pytest.raises(ValueError):
            GridEvaluation(**{**ok, "density": np.array([0.1])})
        with pytest.raises(ValueError):
            GridEvaluation(**{**ok, "density": np.array([-0.1, 0.2])})
        with pytest.raises(ValueError):
            GridEvaluation(**{**ok, "derivative": np.array([math.nan, 0.0])})
        with pytest.raises(ValueError):
            GridEvaluation(**{**ok, "bandwidth": 0.0})


class TestCsv:
    def test_round_trip(self, tmp_path):
        s = draw_sample(MaxwellParams(), 100, 8)
        ev = evaluate_on_grid(s, 0.2, np.linspace(0.1, 2.0, 12))
        path = tmp_path / "grid.csv"
        save_grid_csv(ev, path)
        first = path.read_text().splitlines()[0]
        assert first == "x,density,derivative"
        back = load_grid_csv(path, bandwidth=0.2)
        assert back.bandwidth == 0.2
        assert np.allclose(back.grid, ev.grid, rtol=1e-11, atol=0)
        assert np.allclose(back.density, ev.density, rtol=1e-11, atol=1e-15)
        assert np.allclose(back.derivative, ev.derivative, rtol=1e-11, atol=1e-15)

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("wrong,header,here\n1,2,3\n")
        with pytest.raises(ValueError):
            load_grid_csv(path, bandwidth=0.1)
        path.write_text("x,density,derivative\n1,2\n")
        with pytest.raises(ValueError):
            load_grid_csv(path, bandwidth=0.1)
