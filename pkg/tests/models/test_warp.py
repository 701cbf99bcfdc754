"""
tests for the warp submodule of warpiso
"""
import math

import numpy as np
import pytest
from warpiso import (
    FiberSpec,
    RadialWeight,
    RegimeReport,
    WarpedSpace,
    WarpProfile,
    WeightPair,
    eval_profile,
    unit_ball_volume,
)
from warpiso.errors import (
    DomainError,
    InvalidWeight,
    PreconditionError,
    UnsupportedConfiguration,
)
from warpiso.models.warp import parse_notation, round_sphere_volume


REGIMES = RegimeReport.Regimes


def test_parse_notation() -> None:
    """tests the call-like notation parser"""
    assert parse_notation("power(-1)") == ("power", [-1.0], {})
    assert parse_notation("ellipse(a=2, b=1)") == ("ellipse", [], {"a": 2.0, "b": 1.0})
    assert parse_notation("Euclidean") == ("euclidean", [], {})
    assert parse_notation("custom-spline(data.txt)") == ("custom-spline", ["data.txt"], {})
    with pytest.raises(ValueError):
        parse_notation("(2)")


def test_volumes() -> None:
    """tests unit ball and round sphere volumes"""
    assert math.isclose(unit_ball_volume(2), math.pi)
    assert math.isclose(unit_ball_volume(3), 4.0 * math.pi / 3.0)
    assert math.isclose(round_sphere_volume(1), 2.0 * math.pi)
    assert math.isclose(round_sphere_volume(2, 2.0), 16.0 * math.pi)


def test_catalog_profiles() -> None:
    """tests the closed form catalog profiles"""
    hyperbolic = WarpProfile.get("hyperbolic")
    s, ds, d2s = hyperbolic.evaluate(1.0)
    assert math.isclose(s, math.sinh(1.0))
    assert math.isclose(ds, math.cosh(1.0))
    assert math.isclose(d2s, math.sinh(1.0))
    assert hyperbolic.vanishing_at_zero
    assert not hyperbolic.bounded
    assert str(hyperbolic) == "<WarpProfile hyperbolic on [0, inf)>"

    spherical = WarpProfile.get("spherical")
    assert spherical.bounded
    assert spherical.contains(3.0)
    assert not spherical.contains(math.pi)
    with pytest.raises(DomainError):
        spherical.evaluate(4.0)

    power = WarpProfile.get("power(-0.5)")
    assert power.label == "power(-0.5)"
    assert power.domain_start == 1.0
    assert not power.vanishing_at_zero
    assert math.isclose(power(4.0), 0.5)
    assert eval_profile(WarpProfile.get("euclidean"), 2.0) == (2.0, 1.0, 0.0)

    with pytest.raises(ValueError):
        WarpProfile.get("torus")


def test_space_forms() -> None:
    """tests that space forms are recognized by value, not by name"""
    assert WarpProfile.get("hemisphere").space_form == "hemisphere"
    assert WarpProfile.get("linear(1)").space_form == "euclidean"
    assert WarpProfile.get("linear(2)").space_form is None
    assert WarpProfile.get("exponential").space_form is None
    sine = WarpProfile.from_callable("sine", np.sin, domain_end=math.pi)
    assert sine.space_form == "spherical"
    cap = WarpProfile.from_callable("sine", np.sin, domain_end=math.pi / 2.0)
    assert cap.space_form == "hemisphere"
    assert WarpProfile.from_callable("sine", np.sin, domain_end=1.0).space_form is None


def test_profile_from_callable() -> None:
    """tests finite difference derivatives of a callable profile"""
    profile = WarpProfile.from_callable("square", lambda r: r * r)
    s, ds, d2s = profile.evaluate(np.array([1.0, 2.0]))
    assert np.allclose(s, [1.0, 4.0])
    assert np.allclose(ds, [2.0, 4.0], rtol=1e-6)
    assert np.allclose(d2s, [2.0, 2.0], rtol=1e-4)

    with pytest.raises(DomainError):
        WarpProfile("empty", lambda r: (r, 1.0, 0.0), domain_end=0.0)


def test_profile_from_spline(tmp_path) -> None:  # type: ignore
    """tests a spline profile read from a two column file"""
    path = tmp_path / "sinh.txt"
    radii = np.linspace(0.0, 2.0, 201)
    np.savetxt(str(path), np.column_stack([radii, np.sinh(radii)]))
    profile = WarpProfile.get("custom-spline({})".format(path))
    assert profile.domain_end == 2.0
    s, ds, _ = profile.evaluate(1.0)
    assert math.isclose(s, math.sinh(1.0), rel_tol=1e-6)
    assert math.isclose(ds, math.cosh(1.0), rel_tol=1e-4)


def test_fibers() -> None:
    """tests circle, sphere and abstract fibers"""
    circle = FiberSpec.get("S1(2)")
    assert circle.dimension == 1
    assert math.isclose(circle.total_volume, 4.0 * math.pi)
    assert circle.lambda1 == 0.25
    assert circle.curvature is None
    assert circle.discretizable
    assert circle.ricci_bound_holds(10.0)

    sphere = FiberSpec.get("S2")
    assert sphere.lambda1 == 2.0
    assert sphere.curvature == 1.0
    assert sphere.ricci_bound_holds(1.0)
    assert not sphere.ricci_bound_holds(2.0)
    assert FiberSpec.sphere(1, 3.0).label == "S1(3)"

    abstract = FiberSpec.get("abstract(m=3, volume=5)")
    assert abstract.dimension == 3
    assert not abstract.discretizable
    assert abstract.lambda1 is None
    assert abstract.ricci_bound_holds(1.0) is None
    assert str(abstract) == "<FiberSpec abstract(m=3) |N|=5>"


def test_broken_fibers() -> None:
    """tests invalid fiber invariants"""
    with pytest.raises(PreconditionError):
        FiberSpec(0, 1.0)

    with pytest.raises(PreconditionError):
        FiberSpec(2, -1.0)

    with pytest.raises(PreconditionError):
        FiberSpec.abstract(2, 1.0, lambda1=-1.0)

    with pytest.raises(ValueError):
        FiberSpec.get("torus(1)")


def test_radial_weights() -> None:
    """tests weight notation, derivatives and products"""
    square = RadialWeight.get("r^2")
    assert square.label == "r^2"
    assert square(3.0) == 9.0
    f, f1, f2 = square.derivatives(np.array([3.0]))
    assert (f[0], f1[0], f2[0]) == (9.0, 6.0, 2.0)

    product = RadialWeight.get("sinh^1*tanh^2")
    assert math.isclose(product(1.0), math.sinh(1.0) * math.tanh(1.0) ** 2)
    value, slope, _ = product.derivatives(np.array([1.0]))
    step = 1e-6
    numeric = (product(1.0 + step) - product(1.0 - step)) / (2.0 * step)
    assert math.isclose(slope[0], numeric, rel_tol=1e-7)

    assert RadialWeight.get("(cosh-1)^3").label == "(cosh-1)^3"
    assert RadialWeight.get("2.5")(7.0) == 2.5
    potential = RadialWeight.potential(WarpProfile.get("hyperbolic"))
    assert math.isclose(potential(1.0), math.cosh(1.0))
    sine_square = RadialWeight.from_profile(WarpProfile.get("spherical"), 2)
    assert math.isclose(sine_square(1.0), math.sin(1.0) ** 2)

    with pytest.raises(InvalidWeight):
        RadialWeight.get("log^2")


def test_weight_pair() -> None:
    """tests the shifted weight and the sampled weight checks"""
    pair = WeightPair(RadialWeight.get("cosh"))
    assert pair.b(0.0) == 0.0
    assert math.isclose(pair.b(1.0), math.cosh(1.0) - 1.0)
    assert not pair.weighted
    assert str(pair) == "<WeightPair a=cosh c=1>"

    with pytest.raises(InvalidWeight):
        WeightPair(RadialWeight.get("r^-1"))

    with pytest.raises(InvalidWeight):
        WeightPair(RadialWeight.get("r"), RadialWeight.get("cos"), span=(0.0, 3.0))

    with pytest.raises(InvalidWeight):
        WeightPair(RadialWeight.get("r^2"), span=(0.0, 10.0), samples=11, modulus=1.0)


def test_euclidean_volumes(space3) -> None:  # type: ignore
    """tests ball volumes and their inversion in euclidean space"""
    assert space3.n == 3
    assert space3.m == 2
    assert math.isclose(space3.fiber_volume, 4.0 * math.pi)
    assert math.isclose(space3.ball_volume(2.0), 32.0 * math.pi / 3.0, rel_tol=1e-12)
    assert math.isclose(space3.invert_volume(8.0 / 3.0), 2.0, rel_tol=1e-12)
    assert space3.invert_volume(0.0) == 0.0
    assert math.isclose(space3.shell_volume(1.0, 2.0), 7.0 / 3.0, rel_tol=1e-12)
    assert np.allclose(space3.volume_profile(np.array([1.0, 3.0])), [1.0 / 3.0, 9.0])

    with pytest.raises(DomainError):
        space3.volume_profile(-1.0)

    with pytest.raises(DomainError):
        space3.invert_volume(-1.0)


def test_bounded_volumes() -> None:
    """tests inversion near the end of a bounded domain"""
    hemisphere = WarpedSpace.model("hemisphere", n=3)
    total = math.pi / 4.0
    assert math.isclose(hemisphere.invert_volume(total), math.pi / 2.0, rel_tol=1e-9)
    with pytest.raises(DomainError):
        hemisphere.invert_volume(1.0)


@pytest.mark.parametrize("model", ["euclidean", "hyperbolic", "exponential", "hemisphere"])
@pytest.mark.parametrize("radius", [0.05, 0.4, 1.0, 1.5])
def test_volume_inversion(model: str, radius: float) -> None:
    """tests that the volume inverse recovers radii across the profile catalog"""
    space = WarpedSpace.model(model, n=3)
    volume = float(space.volume_profile(radius))
    assert math.isclose(space.invert_volume(volume), radius, rel_tol=1e-9)


def test_weighted_volume(plane) -> None:  # type: ignore
    """tests the weighted volume profile"""
    weight = RadialWeight.get("r")
    assert math.isclose(plane.volume_profile(3.0, weight), 9.0, rel_tol=1e-12)
    assert math.isclose(plane.invert_volume(9.0, weight), 3.0, rel_tol=1e-12)


def test_convexity_margins(plane) -> None:  # type: ignore
    """tests the log-convexity and weighted convexity margins"""
    assert plane.log_convexity_margin(2.0) == -1.0
    pair = WeightPair(RadialWeight.get("r^2"))
    assert math.isclose(plane.weighted_convexity_margin(pair, 2.0), 12.0)
    # A o v^-1 = sqrt(2 u) is concave
    assert plane.secant_convexity((1.0, 2.0, 3.0)) < 0
    assert plane.sampled_monotone(lambda r: r ** 3)
    assert plane.sampled_convexity(lambda r: r ** 3) >= -1e-12


def test_classify_regimes(wide_circle_sphere) -> None:  # type: ignore
    """tests the regime of each catalog model"""
    exponential = WarpedSpace.model("exponential", n=3).classify_regime()
    assert exponential.regime is REGIMES.SLICES_ISOPERIMETRIC
    assert exponential.to_dict()["regime"] == "slices-isoperimetric"

    hyperbolic = WarpedSpace.model("hyperbolic", n=3).classify_regime()
    assert hyperbolic.regime is REGIMES.PINCHED_CURVATURE
    assert math.isclose(hyperbolic.margin_min, 1.0, rel_tol=1e-9)
    assert hyperbolic.K == 1.0

    assert wide_circle_sphere.classify_regime().regime is REGIMES.INDETERMINATE
    wide = wide_circle_sphere.classify_regime(K=0.25)
    assert wide.regime is REGIMES.SLICES_NOT_ISOPERIMETRIC
    assert wide.lambda1 == 0.25

    abstract = WarpedSpace.model("euclidean", fiber=FiberSpec.abstract(2, 5.0))
    assert abstract.classify_regime().regime is REGIMES.INDETERMINATE
    assert abstract.classify_regime(K=1.0).regime is REGIMES.INDETERMINATE


def test_multiply_warped() -> None:
    """tests a product of two fibers over one radial domain"""
    euclidean = WarpProfile.get("euclidean")
    space = WarpedSpace([(euclidean, FiberSpec.circle()), (euclidean, FiberSpec.circle())])
    assert not space.single
    assert space.m == 2
    assert math.isclose(space.fiber_volume, 4.0 * math.pi ** 2)
    assert math.isclose(space.area_coefficient(2.0), 4.0)
    assert math.isclose(space.log_convexity_margin(1.0), -2.0)
    with pytest.raises(UnsupportedConfiguration):
        space.profile

    with pytest.raises(PreconditionError):
        WarpedSpace(
            [(euclidean, FiberSpec.circle()), (WarpProfile.get("spherical"), FiberSpec.circle())]
        )

    with pytest.raises(PreconditionError):
        WarpedSpace([])
