"""
tests for the quadrature submodule of warpiso
"""
import math

import numpy as np
import pytest
from warpiso import FiberSpec, differentiate, fiber_grid, integrate_fiber, integrate_radial
from warpiso.errors import NumericError, UnsupportedFiber
from warpiso.models.quadrature import field_values, integrate_radial_cumulative


def test_circle_grid() -> None:
    """tests the trapezoid grid on a circle"""
    grid = fiber_grid(FiberSpec.circle(2.0), 64)
    assert len(grid) == 64
    assert grid.shape == (64,)
    assert grid.dimension == 1
    assert grid.radius == 2.0
    assert math.isclose(float(np.sum(grid.weights)), 4.0 * math.pi, rel_tol=1e-14)
    assert str(grid) == "<FiberGrid S1(2) 64>"
    assert repr(grid) == str(grid)
    assert "theta" in grid.describe_node(3)


def test_sphere_grid() -> None:
    """tests the gauss-legendre by uniform grid on the unit sphere"""
    grid = fiber_grid(FiberSpec.sphere(2), (8, 16))
    assert len(grid) == 128
    assert grid.shape == (8, 16)
    assert math.isclose(float(np.sum(grid.weights)), 4.0 * math.pi, rel_tol=1e-13)
    # north to south
    assert grid.colatitudes[0] < grid.colatitudes[-1]
    assert "colatitude" in grid.describe_node(0)
    assert fiber_grid(FiberSpec.sphere(2), 8).shape == (8, 16)


def test_grid_is_read_only() -> None:
    """tests that grid nodes cannot be modified in place"""
    grid = fiber_grid(FiberSpec.circle(), 8)
    with pytest.raises(ValueError):
        grid.nodes[0] = 1.0


def test_broken_grids() -> None:
    """tests fibers and resolutions that cannot be discretized"""
    with pytest.raises(UnsupportedFiber):
        fiber_grid(FiberSpec.abstract(2, 5.0))

    with pytest.raises(UnsupportedFiber):
        fiber_grid(FiberSpec.sphere(3))

    with pytest.raises(ValueError):
        fiber_grid(FiberSpec.circle(), 0)


def test_integrate_fiber() -> None:
    """tests fiber integrals of low order trigonometric fields"""
    circle = fiber_grid(FiberSpec.circle(), 32)
    assert math.isclose(integrate_fiber(circle, lambda t: np.cos(t) ** 2), math.pi)
    sphere = fiber_grid(FiberSpec.sphere(2), (12, 24))
    value = integrate_fiber(sphere, lambda x: np.cos(x[:, 0]) ** 2)
    assert math.isclose(value, 4.0 * math.pi / 3.0, rel_tol=1e-13)


def test_field_values_checks() -> None:
    """tests that node fields must be finite and match the grid"""
    grid = fiber_grid(FiberSpec.circle(), 8)
    values = np.ones(8)
    values[5] = np.nan
    with pytest.raises(NumericError) as error:
        field_values(grid, values)
    assert error.value.node == 5

    with pytest.raises(NumericError):
        field_values(grid, np.ones(7))


def test_integrate_radial() -> None:
    """tests the adaptive radial quadrature"""
    assert math.isclose(integrate_radial(np.exp, 0.0, 1.0), math.e - 1.0, rel_tol=1e-13)
    assert math.isclose(integrate_radial(np.exp, 1.0, 0.0), 1.0 - math.e, rel_tol=1e-13)
    assert integrate_radial(np.exp, 2.0, 2.0) == 0.0
    kink = integrate_radial(lambda r: np.abs(r - 1.0 / 3.0), 0.0, 1.0)
    assert math.isclose(kink, (1.0 / 9.0 + 4.0 / 9.0) / 2.0, rel_tol=1e-9)


def test_integrate_radial_cumulative() -> None:
    """tests cumulative integrals at unsorted points"""
    values = integrate_radial_cumulative(lambda r: 2.0 * r, 0.0, np.array([3.0, 1.0, 2.0]))
    assert np.allclose(values, [9.0, 1.0, 4.0], rtol=1e-13)
    assert integrate_radial_cumulative(np.exp, 0.0, np.array([])).shape == (0,)


def test_broken_radial_quadrature() -> None:
    """tests non-finite integrands and the subdivision limit"""
    with pytest.raises(NumericError):
        integrate_radial(lambda r: np.full_like(r, np.nan), 0.0, 1.0)

    with pytest.raises(NumericError) as error:
        integrate_radial(lambda r: np.sqrt(np.abs(r - 1.0 / 3.0)), 0.0, 1.0, 1e-15, 3)
    assert error.value.best is not None


def test_differentiate_circle() -> None:
    """tests spectral derivatives on the circle"""
    grid = fiber_grid(FiberSpec.circle(), 64)
    theta = grid.nodes
    gradient, hessian = differentiate(grid, np.sin(3.0 * theta))
    assert gradient.shape == (64, 1)
    assert hessian.shape == (64, 1, 1)
    assert np.allclose(gradient[:, 0], 3.0 * np.cos(3.0 * theta), atol=1e-11)
    assert np.allclose(hessian[:, 0, 0], -9.0 * np.sin(3.0 * theta), atol=1e-10)


def test_differentiate_sphere() -> None:
    """tests spectral derivatives of the coordinate functions on the sphere"""
    grid = fiber_grid(FiberSpec.sphere(2), (12, 24))
    colat, azim = grid.nodes[:, 0], grid.nodes[:, 1]

    gradient, hessian = differentiate(grid, np.cos(colat))
    assert np.allclose(gradient[:, 0], -np.sin(colat), atol=1e-11)
    assert np.allclose(gradient[:, 1], 0.0, atol=1e-11)
    assert np.allclose(hessian[:, 0, 0], -np.cos(colat), atol=1e-10)

    gradient, hessian = differentiate(grid, np.sin(colat) * np.cos(azim))
    assert np.allclose(gradient[:, 0], np.cos(colat) * np.cos(azim), atol=1e-10)
    assert np.allclose(gradient[:, 1], -np.sin(colat) * np.sin(azim), atol=1e-10)
    assert np.allclose(hessian[:, 0, 1], -np.cos(colat) * np.sin(azim), atol=1e-9)
