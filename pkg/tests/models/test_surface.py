"""
tests for the surface submodule of warpiso
"""
import math

import numpy as np
import pytest
from warpiso import (
    FiberSpec,
    GraphFunction,
    RadialWeight,
    WarpedSpace,
    boundary_integral,
    build_star_graph,
    enclosed_volume,
    eval_profile,
    export_graph,
    import_graph,
    integrate_fiber,
)
from warpiso.errors import GraphConstructionError, UnsupportedFiber
from warpiso.models.surface import elementary_symmetric


ELLIPSE_PERIMETER = 9.688448220547675


def test_unit_sphere(unit_sphere) -> None:  # type: ignore
    """tests area, volume and curvature of the unit sphere"""
    assert len(unit_sphere) == 16 * 32
    assert unit_sphere.m == 2
    assert unit_sphere.n == 3
    assert unit_sphere.is_slice
    assert unit_sphere.is_revolution
    assert math.isclose(unit_sphere.area, 4.0 * math.pi, rel_tol=1e-12)
    assert math.isclose(unit_sphere.volume, 4.0 * math.pi / 3.0, rel_tol=1e-12)
    shape = unit_sphere.shape
    assert np.allclose(shape.principal, 1.0, atol=1e-12)
    assert np.allclose(shape.H(1), 1.0, atol=1e-12)
    assert np.allclose(shape.H(2), 1.0, atol=1e-12)
    assert np.allclose(unit_sphere.frame.support, 1.0)
    assert unit_sphere.frame.decomposition_defect() < 1e-12
    assert max(shape.identity_defects()) < 1e-12
    assert str(unit_sphere) == "<StarGraph slice(1) in euclidean over S2(1)>"


def test_ellipse(ellipse) -> None:  # type: ignore
    """tests the ellipse perimeter, area and total curvature"""
    assert ellipse.m == 1
    assert not ellipse.is_slice
    assert not ellipse.is_revolution
    assert math.isclose(ellipse.area, ELLIPSE_PERIMETER, rel_tol=1e-10)
    assert math.isclose(ellipse.volume, 2.0 * math.pi, rel_tol=1e-10)
    total = integrate_fiber(ellipse.grid, ellipse.shape.H(1) * ellipse.frame.area_density)
    assert math.isclose(total, 2.0 * math.pi, rel_tol=1e-10)
    assert ellipse.frame.decomposition_defect() < 1e-12
    assert math.isclose(ellipse.relative_variation, 0.5, rel_tol=1e-12)


def test_ellipsoid_gauss_bonnet(ellipsoid) -> None:  # type: ignore
    """tests that the gauss curvature of an ellipsoid integrates to 4 pi"""
    assert not ellipsoid.is_revolution
    shape = ellipsoid.shape
    total = integrate_fiber(ellipsoid.grid, shape.H(2) * ellipsoid.frame.area_density)
    assert math.isclose(total, 4.0 * math.pi, rel_tol=1e-6)
    assert math.isclose(ellipsoid.volume, 4.0 * math.pi, rel_tol=1e-8)
    assert np.all(shape.principal > 0)
    assert max(shape.identity_defects()) < 1e-10


def test_hyperbolic_circle() -> None:
    """tests the geodesic curvature of a hyperbolic circle"""
    space = WarpedSpace.model("hyperbolic", n=2)
    graph = build_star_graph(space, 2.0, resolution=64)
    assert np.allclose(graph.shape.H(1), 1.0 / math.tanh(2.0))
    assert math.isclose(graph.area, 2.0 * math.pi * math.sinh(2.0))
    assert math.isclose(graph.volume, 2.0 * math.pi * (math.cosh(2.0) - 1.0), rel_tol=1e-10)


def test_graph_inputs(plane) -> None:  # type: ignore
    """tests graphs from node values, node functions and scaling"""
    values = build_star_graph(plane, np.full(64, 1.5), resolution=64)
    assert values.label == "grid-data"
    assert math.isclose(values.area, 3.0 * math.pi)

    wobbly = build_star_graph(plane, lambda t: 1.0 + 0.1 * np.cos(2.0 * t), resolution=64)
    analytic = build_star_graph(plane, "wavy(r0=1, amplitude=0.1, frequency=2)", resolution=64)
    assert np.allclose(wobbly.gradient, analytic.gradient, atol=1e-12)
    assert np.allclose(wobbly.hessian, analytic.hessian, atol=1e-11)

    scaled = analytic.scaled(2.0)
    assert math.isclose(scaled.volume, 4.0 * analytic.volume, rel_tol=1e-12)
    assert scaled.label.startswith("2*")


def test_random_shapes(space3) -> None:  # type: ignore
    """tests that seeded random shapes are reproducible and bounded"""
    first = build_star_graph(space3, "random(seed=3, dimension=2)", resolution=(8, 16))
    second = build_star_graph(space3, "random(seed=3, dimension=2)", resolution=(8, 16))
    assert np.array_equal(first.psi, second.psi)
    assert np.all(np.abs(np.log(first.psi)) <= 0.2 + 1e-12)
    revolution = build_star_graph(space3, "random-revolution(seed=1)", resolution=(8, 16))
    assert revolution.is_revolution


def test_offset_circle(plane) -> None:  # type: ignore
    """tests a circle through the origin"""
    with pytest.raises(GraphConstructionError):
        build_star_graph(plane, "offset-circle(d=1, rho=1)", resolution=64)

    graph = build_star_graph(plane, "offset-circle(d=1, rho=1)", resolution=64, allow_origin=True)
    assert graph.touches_origin
    assert math.isclose(graph.volume, math.pi, rel_tol=1e-12)
    assert math.isclose(boundary_integral(graph, lambda r: r * r), 4.0 * math.pi, rel_tol=1e-12)


def test_broken_graphs(plane, space3) -> None:  # type: ignore
    """tests shapes that are not admissible star graphs"""
    with pytest.raises(GraphConstructionError) as error:
        build_star_graph(plane, -1.0, resolution=16)
    assert error.value.node == 0

    with pytest.raises(GraphConstructionError):
        GraphFunction.offset(1.5, 1.0)

    with pytest.raises(GraphConstructionError):
        build_star_graph(space3, "ellipse(a=2, b=1)", resolution=(8, 16))

    with pytest.raises(GraphConstructionError):
        build_star_graph(WarpedSpace.model("hemisphere", n=2), "slice(2)", resolution=16)

    with pytest.raises(GraphConstructionError):
        build_star_graph(plane, np.ones(10), resolution=16)

    with pytest.raises(UnsupportedFiber):
        build_star_graph(WarpedSpace.model("euclidean", fiber=FiberSpec.abstract(2, 3.0)), 1.0)

    with pytest.raises(ValueError):
        GraphFunction.get("torus(1)")


def test_weighted_enclosed_volume(plane) -> None:  # type: ignore
    """tests the weighted enclosed volume of a disk"""
    disk = build_star_graph(plane, 2.0, resolution=32)
    assert math.isclose(enclosed_volume(disk, RadialWeight.get("r")), 16.0 * math.pi / 3.0)


def test_elementary_symmetric() -> None:
    """tests the elementary symmetric polynomials"""
    sigma = elementary_symmetric(np.array([[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]]))
    assert np.array_equal(sigma[0], [1.0, 6.0, 11.0, 6.0])
    assert np.array_equal(sigma[1], [1.0, 0.0, 0.0, 0.0])


def test_graph_files(tmp_path, ellipsoid) -> None:  # type: ignore
    """tests writing a graph and reading it back"""
    path = str(tmp_path / "ellipsoid.txt")
    export_graph(ellipsoid, path)
    graph = import_graph(path)
    assert graph.label == ellipsoid.label
    assert graph.grid.shape == (48, 96)
    assert np.array_equal(graph.psi, ellipsoid.psi)
    assert math.isclose(graph.area, ellipsoid.area, rel_tol=1e-8)

    broken = tmp_path / "broken.txt"
    broken.write_text("# warpiso-graph\n1.0 1.0\n")
    with pytest.raises(GraphConstructionError):
        import_graph(str(broken))


@pytest.mark.parametrize("model", ["euclidean", "hyperbolic", "spherical", "exponential"])
@pytest.mark.parametrize("r0", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("n", [2, 3])
def test_slice_geometry(model: str, r0: float, n: int) -> None:
    """tests principal curvatures and |B|^2 + Ric(nu, nu) on slices"""
    space = WarpedSpace.model(model, n=n)
    graph = build_star_graph(space, r0, resolution=32 if n == 2 else (8, 16))
    s, ds, d2s = eval_profile(space.profile, r0)
    m = n - 1
    shape = graph.shape
    assert np.allclose(shape.principal, ds / s, rtol=0.0, atol=1e-8)
    assert np.allclose(shape.norm2, m * (ds / s) ** 2, rtol=0.0, atol=1e-8)
    assert np.allclose(shape.ricci_normal, -m * d2s / s, rtol=0.0, atol=1e-8)
    total = shape.norm2 + shape.ricci_normal
    assert np.allclose(total, m * (ds * ds - s * d2s) / (s * s), rtol=0.0, atol=1e-8)
