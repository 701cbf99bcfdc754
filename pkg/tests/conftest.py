"""
warpiso pytest configuration
"""
import pytest
from warpiso import FiberSpec, WarpedSpace, build_star_graph
from warpiso.runner import OUTPUT_ROOT_VARIABLE


@pytest.fixture
def plane() -> WarpedSpace:
    """the euclidean plane as a warped product over S1"""
    return WarpedSpace.model("euclidean", n=2)


@pytest.fixture
def space3() -> WarpedSpace:
    """euclidean three-space as a warped product over S2"""
    return WarpedSpace.model("euclidean", n=3)


@pytest.fixture
def hyperbolic3() -> WarpedSpace:
    """hyperbolic three-space"""
    return WarpedSpace.model("hyperbolic", n=3)


@pytest.fixture
def wide_circle_sphere() -> WarpedSpace:
    """the spherical profile over a circle of radius 2"""
    return WarpedSpace.model("spherical", fiber=FiberSpec.circle(2.0))


@pytest.fixture
def unit_sphere(space3):  # type: ignore
    """the unit sphere as a slice graph"""
    return build_star_graph(space3, "slice(1)", resolution=(16, 32))


@pytest.fixture
def ellipse(plane):  # type: ignore
    """the ellipse with semi-axes 2 and 1"""
    return build_star_graph(plane, "ellipse(a=2, b=1)", resolution=256)


@pytest.fixture
def ellipsoid(space3):  # type: ignore
    """a triaxial ellipsoid"""
    return build_star_graph(space3, "ellipsoid(a=2, b=1.5, c=1)", resolution=(48, 96))


@pytest.fixture
def output_root(tmp_path, monkeypatch):  # type: ignore
    """point the default output root at a temporary directory"""
    root = tmp_path / "runs"
    monkeypatch.setenv(OUTPUT_ROOT_VARIABLE, str(root))
    return root
