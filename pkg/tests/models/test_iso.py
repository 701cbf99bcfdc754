"""
tests for the iso submodule of warpiso
"""
import math

import numpy as np
import pytest
from warpiso import (
    RadialWeight,
    Verdicts,
    WarpedSpace,
    WeightPair,
    build_star_graph,
    jensen_gap,
    omega_sharp_radius,
    space_form_catalog,
    verify_weighted_iso,
)
from warpiso.errors import DomainError, PreconditionError
from warpiso.models.iso import explicit_euclidean_rhs, weighted_hypotheses


def test_judge() -> None:
    """tests verdicts of checks with and without their hypotheses"""
    assert Verdicts.judge(True, True) == "pass"
    assert Verdicts.judge(False, True) == "pass"
    assert Verdicts.judge(True, False) == "fail"
    assert Verdicts.judge(False, False) == "n/a"


def test_offset_circle_margin(plane) -> None:  # type: ignore
    """tests the r^2 weighted circle through the origin against the unit disk"""
    graph = build_star_graph(plane, "offset-circle(d=1, rho=1)", resolution=512, allow_origin=True)
    record = verify_weighted_iso(plane, graph, WeightPair(RadialWeight.get("r^2")))
    assert math.isclose(record.lhs, 4.0 * math.pi, rel_tol=1e-12)
    assert math.isclose(record.volume, math.pi, rel_tol=1e-12)
    assert math.isclose(record.sharp_radius, 1.0, rel_tol=1e-12)
    assert math.isclose(record.margin, 2.0 * math.pi, rel_tol=1e-10)
    assert "weighted-classical" in record.criteria
    assert record.holds
    assert record.verdict == "pass"
    assert not record.equality_flag
    assert record.hypothesis("weighted-profile-convex").passed
    assert record.hypothesis("missing") is None
    assert record.row()["weight"] == "r^2"


def test_slice_equality(space3) -> None:  # type: ignore
    """tests that slices attain the weighted bound"""
    graph = build_star_graph(space3, "slice(1.5)", resolution=(8, 16))
    record = verify_weighted_iso(space3, graph, WeightPair(RadialWeight.get("r^2")))
    assert abs(record.margin) <= 1e-9 * (1.0 + record.rhs)
    assert record.equality_flag
    assert record.verdict == "pass"
    assert record.to_dict()["resolution"] == [8, 16]


def test_unweighted_ellipse(plane, ellipse) -> None:  # type: ignore
    """tests the classical inequality on an ellipse"""
    record = verify_weighted_iso(plane, ellipse, WeightPair(RadialWeight.constant()))
    assert math.isclose(record.rhs, 2.0 * math.pi * math.sqrt(2.0), rel_tol=1e-10)
    assert record.margin > 0.7
    assert record.verdict == "pass"
    assert record.hypothesis("classical-isoperimetric").passed


def test_weighted_volume_record() -> None:
    """tests a boundary weight together with a volume weight"""
    space = WarpedSpace.model("hyperbolic", n=2)
    graph = build_star_graph(space, "ellipse(a=1.2, b=0.8)", resolution=128)
    weights = WeightPair(RadialWeight.get("cosh"), RadialWeight.get("cosh"))
    record = verify_weighted_iso(space, graph, weights)
    assert record.weight == "cosh / c=cosh"
    assert record.hypothesis("star-profile-convex") is not None
    assert record.hypothesis("weighted-profile-convex") is None
    assert record.verdict in ("pass", "n/a")


def test_weighted_hypotheses(wide_circle_sphere) -> None:  # type: ignore
    """tests that failing hypotheses are reported instead of raised"""
    hypotheses, criteria = weighted_hypotheses(
        wide_circle_sphere, WeightPair(RadialWeight.constant()), 2.0, 512
    )
    names = [h.name for h in hypotheses]
    assert names[:3] == ["star-shaped", "slices-log-convex", "warping-monotone"]
    assert not dict((h.name, h.passed) for h in hypotheses)["warping-monotone"]


def test_sharp_radius(plane) -> None:  # type: ignore
    """tests the radius of the coordinate ball of equal volume"""
    assert math.isclose(omega_sharp_radius(plane, 4.0 * math.pi), 2.0, rel_tol=1e-12)
    with pytest.raises(DomainError):
        omega_sharp_radius(plane, 0.0)


def test_euclidean_catalog(ellipse) -> None:  # type: ignore
    """tests the euclidean catalog with its explicit right side"""
    records = space_form_catalog("euclidean", ellipse, 2)
    assert [r.weight for r in records] == ["r^2", "r^2 explicit"]
    assert all(r.experiment == "catalog" for r in records)
    assert records[1].hypothesis("explicit-form-agrees").passed
    assert math.isclose(records[0].margin, records[1].margin, rel_tol=1e-9)
    assert all(r.verdict == "pass" for r in records)
    assert math.isclose(explicit_euclidean_rhs(2, 1, math.pi), 2.0 * math.pi)


def test_catalog_by_value(ellipse) -> None:  # type: ignore
    """tests that a profile equal to r runs the euclidean catalog"""
    space = WarpedSpace.model("linear(1)", n=2)
    graph = build_star_graph(space, "ellipse(a=2, b=1)", resolution=256)
    records = space_form_catalog("euclidean", graph, 2)
    want = space_form_catalog("euclidean", ellipse, 2)
    assert [r.weight for r in records] == ["r^2", "r^2 explicit"]
    assert math.isclose(records[0].margin, want[0].margin, rel_tol=1e-12)
    assert all(r.verdict == "pass" for r in records)

    with pytest.raises(PreconditionError):
        space_form_catalog("hyperbolic", graph, 1)


def test_hyperbolic_catalog() -> None:
    """tests every hyperbolic catalog weight on a random curve"""
    space = WarpedSpace.model("hyperbolic", n=2)
    graph = build_star_graph(space, "random(seed=11, amplitude=0.3)", resolution=256)
    records = space_form_catalog("hyperbolic", graph, 2)
    assert [r.weight for r in records] == ["sinh^2", "cosh", "(cosh-1)^2"]
    assert all(r.holds for r in records)


def test_broken_catalog(ellipse) -> None:  # type: ignore
    """tests catalog calls outside the space forms"""
    with pytest.raises(PreconditionError):
        space_form_catalog("spherical", ellipse)

    with pytest.raises(PreconditionError):
        space_form_catalog("euclidean", ellipse, 0)

    with pytest.raises(PreconditionError):
        space_form_catalog("hyperbolic", ellipse)


def test_jensen_gap(plane) -> None:  # type: ignore
    """tests the jensen gap of the r^3 profile against the plane volume"""
    grid = build_star_graph(plane, 1.0, resolution=64).grid
    weights = WeightPair(RadialWeight.get("r^2"))
    flat = jensen_gap(plane, weights, np.ones(64), grid, 512)
    assert abs(flat.value) <= 1e-10
    assert math.isclose(flat.radius, 1.0, rel_tol=1e-12)
    assert flat.convex
    assert not flat.advisory
    bumpy = jensen_gap(plane, weights, lambda t: 1.0 + 0.5 * np.cos(t), grid, 512)
    assert bumpy.value > 0

    with pytest.raises(DomainError):
        jensen_gap(plane, weights, -np.ones(64), grid)


@pytest.mark.parametrize(
    "model,n", [("euclidean", 2), ("euclidean", 3), ("hyperbolic", 2), ("hemisphere", 2)]
)
@pytest.mark.parametrize("k", [1, 2])
def test_catalog_on_random_graphs(model: str, n: int, k: int) -> None:
    """tests every catalog weight on fifty random star graphs per model"""
    space = WarpedSpace.model(model, n=n)
    resolution = 128 if n == 2 else (24, 48)
    for seed in range(50):
        shape = "random(seed={}, dimension={})".format(seed, n - 1)
        graph = build_star_graph(space, shape, resolution=resolution)
        for record in space_form_catalog(model, graph, k, 512):
            assert record.margin >= -1e-9 * (1.0 + abs(record.rhs)), record.shape
            assert not record.equality_flag


@pytest.mark.parametrize("seed", range(100))
def test_jensen_gap_random_fields(space3, seed: int) -> None:  # type: ignore
    """tests that the jensen gap with b = r is nonnegative on random radii"""
    grid = build_star_graph(space3, 1.0, resolution=(8, 16)).grid
    rho = np.random.default_rng(seed).uniform(0.2, 1.5, len(grid))
    gap = jensen_gap(space3, WeightPair(RadialWeight.get("r")), rho, grid, 512)
    assert gap.value >= -1e-10


def test_jensen_gap_constant_field(space3) -> None:  # type: ignore
    """tests that a constant field has no jensen gap"""
    grid = build_star_graph(space3, 1.0, resolution=(8, 16)).grid
    gap = jensen_gap(space3, WeightPair(RadialWeight.get("r")), np.full(len(grid), 0.7), grid, 512)
    assert abs(gap.value) <= 1e-12
    assert math.isclose(gap.radius, 0.7, rel_tol=1e-12)
