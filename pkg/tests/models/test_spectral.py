"""
tests for the spectral submodule of warpiso
"""
import math

import pytest
from warpiso import (
    FiberSpec,
    WarpedSpace,
    build_star_graph,
    lambda1_bound_check,
    power_counterexample,
    second_variation_probe,
    slice_stability,
    small_ball_threshold,
    stability_flip_radius,
    steklov_bound_check,
    surjectivity_counterexample,
)
from warpiso.errors import (
    DomainError,
    PreconditionError,
    UnsupportedConfiguration,
    UnsupportedFiber,
)


def test_slice_stability(space3, wide_circle_sphere) -> None:  # type: ignore
    """tests the stability of slices in flat space and over a wide circle"""
    flat = slice_stability(space3, 1.0)
    assert flat.marginal
    assert flat.stable
    assert flat.curvature_term == 2.0

    wide = slice_stability(wide_circle_sphere, math.pi / 2.0)
    assert math.isclose(wide.curvature_term, 1.0)
    assert wide.lambda1 == 0.25
    assert not wide.stable
    assert not wide.marginal
    assert wide.row()["margin"] < 0

    exponential = WarpedSpace.model("exponential", fiber=FiberSpec.circle())
    assert slice_stability(exponential, 1.0).stable


def test_broken_stability(wide_circle_sphere) -> None:  # type: ignore
    """tests fibers without a spectrum and radii outside the domain"""
    abstract = WarpedSpace.model("euclidean", fiber=FiberSpec.abstract(2, 5.0))
    with pytest.raises(UnsupportedConfiguration):
        slice_stability(abstract, 1.0)

    with pytest.raises(DomainError):
        slice_stability(wide_circle_sphere, math.pi)


def test_flip_radius() -> None:
    """tests the fiber radius where the equatorial slice changes stability"""
    radius = stability_flip_radius("spherical", math.pi / 2.0)
    assert math.isclose(radius, 1.0, rel_tol=1e-8)

    with pytest.raises(DomainError):
        stability_flip_radius("spherical", math.pi / 2.0, bracket=(2.0, 4.0))


def test_second_variation_probe(wide_circle_sphere) -> None:  # type: ignore
    """tests the finite difference second variation against its closed form"""
    probe = second_variation_probe(wide_circle_sphere, math.pi / 2.0)
    assert probe.formula_value < 0
    assert probe.refined < 0
    assert probe.agree
    assert probe.verdict == "pass"
    assert len(probe.areas) == 5
    assert probe.shifts[1] == 0.0

    abstract = WarpedSpace.model("euclidean", fiber=FiberSpec.abstract(2, 5.0))
    with pytest.raises(UnsupportedFiber):
        second_variation_probe(abstract, 1.0)


def test_small_ball_threshold(wide_circle_sphere) -> None:  # type: ignore
    """tests the small-ball threshold over a wide circle and the unit sphere"""
    wide = small_ball_threshold(wide_circle_sphere)
    assert math.isclose(wide.threshold, 0.5)
    assert wide.slope == 1.0
    assert wide.violated
    assert wide.model_area > wide.euclidean_area

    round_sphere = small_ball_threshold(WarpedSpace.model("spherical", n=3))
    assert math.isclose(round_sphere.threshold, 1.0)
    assert not round_sphere.violated
    assert math.isclose(round_sphere.model_area, round_sphere.euclidean_area, rel_tol=1e-12)

    with pytest.raises(PreconditionError):
        small_ball_threshold(WarpedSpace.model("exponential", n=2))


def test_power_counterexample() -> None:
    """tests annuli of unit volume ratio whose boundary area vanishes"""
    wide = power_counterexample(1, 10.0)
    assert math.isclose(wide.R2, 10.0 * math.e)
    assert math.isclose(wide.volume_ratio, 1.0, rel_tol=1e-10)
    assert math.isclose(wide.area_ratio, 0.1 + 0.1 / math.e, rel_tol=1e-12)
    assert math.isclose(wide.slice_area_ratio, 1.0 / math.e, rel_tol=1e-9)
    assert wide.agrees
    assert wide.beats_slice
    assert wide.row()["verdict"] == "pass"

    near = power_counterexample(1, 1.0)
    assert near.agrees
    assert not near.beats_slice

    cubic = power_counterexample(3, 100.0)
    assert cubic.beats_slice
    assert math.isclose(cubic.area_ratio, 0.01 + 0.01 / math.e, rel_tol=1e-12)
    assert math.isclose(near.area_ratio, 1.0 + 1.0 / math.e, rel_tol=1e-12)

    with pytest.raises(DomainError):
        power_counterexample(1, 0.5)

    with pytest.raises(PreconditionError):
        power_counterexample(0, 10.0)


def test_surjectivity_counterexample() -> None:
    """tests that slices near a nonzero start lose to small euclidean balls"""
    space = WarpedSpace.model("exponential", n=2)
    close = surjectivity_counterexample(space, 0.01)
    far = surjectivity_counterexample(space, 0.5)
    assert close.ratio > far.ratio > 1.0
    assert math.isclose(close.slice_area, 2.0 * math.pi * math.exp(0.01))

    with pytest.raises(PreconditionError):
        surjectivity_counterexample(WarpedSpace.model("euclidean", n=2), 1.0)


def test_lambda1_on_curves(plane, ellipse) -> None:  # type: ignore
    """tests the exact curve eigenvalue against its bound"""
    circle = lambda1_bound_check(build_star_graph(plane, 1.0, resolution=64))
    assert math.isclose(circle.eigenvalue, 1.0, rel_tol=1e-12)
    assert math.isclose(circle.bound, 1.0, rel_tol=1e-12)
    assert circle.equality
    assert circle.method == "exact (2 pi / L)^2"

    record = lambda1_bound_check(ellipse)
    assert record.holds
    assert not record.equality
    assert record.verdict == "pass"
    assert max(abs(x) for x in record.translation) < 1e-10
    assert record.second_moment > record.moment_bound


def test_lambda1_on_spheres(unit_sphere) -> None:  # type: ignore
    """tests that round spheres attain both eigenvalue bounds"""
    for k in (0, 1):
        record = lambda1_bound_check(unit_sphere, k)
        assert record.method == "exact sphere spectrum"
        assert math.isclose(record.eigenvalue, 2.0)
        assert math.isclose(record.bound, 2.0, rel_tol=1e-12)
        assert record.equality
        assert record.verdict == "pass"


def test_lambda1_rayleigh_ritz(ellipsoid) -> None:  # type: ignore
    """tests the structure of the estimated eigenvalue on an ellipsoid"""
    record = lambda1_bound_check(ellipsoid)
    assert record.method.startswith("rayleigh-ritz")
    assert record.eigenvalue > 0
    assert record.certified == (record.eigenvalue <= record.bound)
    assert record.row()["experiment"] == "eigen-lambda"


def test_broken_lambda1(unit_sphere, hyperbolic3) -> None:  # type: ignore
    """tests eigenvalue checks outside euclidean space or the order range"""
    with pytest.raises(PreconditionError):
        lambda1_bound_check(unit_sphere, 2)

    curved = build_star_graph(hyperbolic3, "slice(1)", resolution=(8, 16))
    with pytest.raises(UnsupportedConfiguration):
        lambda1_bound_check(curved)


def test_steklov() -> None:
    """tests steklov values of balls and of an annulus"""
    ball = steklov_bound_check("ball(rho=2, n=3)")
    assert ball.eigenvalue == 0.5
    assert math.isclose(ball.bound, 0.5, rel_tol=1e-12)
    assert ball.equality
    assert ball.verdict == "pass"
    assert steklov_bound_check(("disk", {"rho": 1.0})).equality

    annulus = steklov_bound_check("annulus(a=0.5, b=1)")
    assert math.isclose(annulus.eigenvalue, (5.0 - math.sqrt(17.0)) / 2.0, rel_tol=1e-9)
    assert math.isclose(annulus.bound, 2.0 / math.sqrt(3.0), rel_tol=1e-12)
    assert annulus.holds
    assert not annulus.equality


def test_broken_steklov() -> None:
    """tests unknown and degenerate steklov domains"""
    with pytest.raises(UnsupportedConfiguration):
        steklov_bound_check("cube(1)")

    with pytest.raises(DomainError):
        steklov_bound_check("annulus(a=1, b=0.5)")

    with pytest.raises(DomainError):
        steklov_bound_check("ball(rho=-1)")
