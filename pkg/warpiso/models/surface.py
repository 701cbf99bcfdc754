"""
@author jacobi petrucciani
@desc star-shaped hypersurfaces r = psi(theta) over S1/S2 fibers and their geometry
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from warpiso.errors import (
    GraphConstructionError,
    NumericError,
    UnsupportedConfiguration,
    UnsupportedFiber,
)
from warpiso.models.quadrature import (
    FiberGrid,
    Resolution,
    differentiate,
    fiber_grid,
    integrate_fiber,
)
from warpiso.models.warp import (
    FiberSpec,
    RadialWeight,
    WarpedSpace,
    parse_notation,
)


logger = logging.getLogger(__name__)

SLICE_TOLERANCE = 1e-8
REVOLUTION_TOLERANCE = 1e-10

Jet = Tuple[np.ndarray, np.ndarray, np.ndarray]
AngleFunction = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]
DirectionFunction = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]
RadialLike = Union[RadialWeight, Callable[[np.ndarray], np.ndarray], float]


def _direction_frame(grid: FiberGrid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    @cc 2
    @desc unit directions x(theta) in R^(m+1) with first and second coordinate derivatives
    @arg grid: an S1 or S2 grid
    @ret x (N, d), dx (N, m, d), ddx (N, m, m, d)
    """
    count = len(grid)
    if grid.dimension == 1:
        theta = grid.nodes
        x = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        dx = np.stack([-np.sin(theta), np.cos(theta)], axis=1)[:, None, :]
        return x, dx, -x[:, None, None, :]
    colat, azim = grid.nodes[:, 0], grid.nodes[:, 1]
    st, ct, sp, cp = np.sin(colat), np.cos(colat), np.sin(azim), np.cos(azim)
    zero = np.zeros(count)
    x = np.stack([st * cp, st * sp, ct], axis=1)
    dx = np.empty((count, 2, 3))
    dx[:, 0] = np.stack([ct * cp, ct * sp, -st], axis=1)
    dx[:, 1] = np.stack([-st * sp, st * cp, zero], axis=1)
    ddx = np.empty((count, 2, 2, 3))
    ddx[:, 0, 0] = -x
    ddx[:, 0, 1] = ddx[:, 1, 0] = np.stack([-ct * sp, ct * cp, zero], axis=1)
    ddx[:, 1, 1] = np.stack([-st * cp, -st * sp, zero], axis=1)
    return x, dx, ddx


def _direction_jet(func: DirectionFunction) -> Callable[[FiberGrid], Jet]:
    """
    @cc 1
    @desc chain rule from an ambient function G(x) with gradient and hessian to psi(theta)
    """

    def jet(grid: FiberGrid) -> Jet:
        x, dx, ddx = _direction_frame(grid)
        value, grad, hess = func(x)
        gradient = np.einsum("ni,nai->na", grad, dx)
        hessian = np.einsum("nai,nij,nbj->nab", dx, hess, dx) + np.einsum(
            "ni,nabi->nab", grad, ddx
        )
        return value, gradient, hessian

    return jet


def _angle_jet(func: AngleFunction) -> Callable[[FiberGrid], Jet]:
    """
    @cc 2
    @desc psi as a function of the angle from the axis (S1 angle, S2 colatitude)
    """

    def jet(grid: FiberGrid) -> Jet:
        count = len(grid)
        theta = grid.nodes if grid.dimension == 1 else grid.nodes[:, 0]
        value, first, second = func(theta)
        gradient = np.zeros((count, grid.dimension))
        hessian = np.zeros((count, grid.dimension, grid.dimension))
        gradient[:, 0] = first
        hessian[:, 0, 0] = second
        return value, gradient, hessian

    return jet


class GraphFunction:
    """
    @desc a radial function psi on the fiber, with analytic derivatives where available
    """

    def __init__(
        self,
        label: str,
        jet: Optional[Callable[[FiberGrid], Jet]] = None,
        func: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        dimensions: Sequence[int] = (1, 2),
    ) -> None:
        """
        @cc 2
        @desc graph function constructor
        @arg label: shape notation used in reports
        @arg jet: grid -> (value, gradient, hessian), analytic path
        @arg func: node array -> values, spectral derivative path
        @arg dimensions: fiber dimensions this shape is defined on
        """
        if jet is None and func is None:
            raise ValueError("a graph function needs a jet or a node function")
        self.label = label
        self._jet = jet
        self._func = func
        self.dimensions = tuple(dimensions)

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this shape
        """
        return "<GraphFunction {}>".format(self.label)

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this shape
        """
        return self.__str__()

    @property
    def analytic(self) -> bool:
        """
        @cc 1
        @desc whether derivatives come from closed forms
        @ret true on the analytic path
        """
        return self._jet is not None

    def jet(self, grid: FiberGrid) -> Jet:
        """
        @cc 3
        @desc values, coordinate gradient and coordinate hessian at the grid nodes
        @arg grid: the fiber grid
        @ret (value (N,), gradient (N, m), hessian (N, m, m))
        """
        if grid.dimension not in self.dimensions:
            raise GraphConstructionError(
                "{} is not defined over a fiber of dimension {}".format(self.label, grid.dimension)
            )
        if self._jet is not None:
            value, gradient, hessian = self._jet(grid)
            return np.asarray(value, dtype=float), gradient, hessian
        assert self._func is not None
        value = np.asarray(self._func(grid.nodes), dtype=float).reshape(-1)
        gradient, hessian = differentiate(grid, value)
        return value, gradient, hessian

    def __call__(self, grid: FiberGrid) -> np.ndarray:
        """
        @cc 1
        @desc node values on a grid
        @arg grid: the fiber grid
        @ret psi at every node
        """
        return self.jet(grid)[0]

    @classmethod
    def constant(cls, radius: float) -> "GraphFunction":
        """
        @cc 1
        @desc the slice r = r0 (a geodesic sphere about the origin)
        @arg radius: the slice radius r0
        @ret the constant shape
        """

        def func(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            return np.full(theta.shape, float(radius)), np.zeros(theta.shape), np.zeros(
                theta.shape
            )

        return cls("slice({:g})".format(radius), _angle_jet(func))

    @classmethod
    def ellipsoid(cls, *axes: float) -> "GraphFunction":
        """
        @cc 2
        @desc polar graph of the centered ellipse/ellipsoid with the given semi-axes
        @arg axes: m + 1 semi-axes
        @ret the shape psi = (x^T D x)^(-1/2), D = diag(axis^-2)
        """
        diag = 1.0 / np.asarray(axes, dtype=float) ** 2
        if np.any(~np.isfinite(diag)) or np.any(diag <= 0):
            raise GraphConstructionError("ellipsoid axes must be positive")

        def func(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            dx = x * diag
            q = np.einsum("ni,ni->n", x, dx)
            value = q ** -0.5
            grad = -(q ** -1.5)[:, None] * dx
            hess = 3.0 * (q ** -2.5)[:, None, None] * dx[:, :, None] * dx[:, None, :]
            hess = hess - (q ** -1.5)[:, None, None] * np.diag(diag)[None]
            return value, grad, hess

        name = "ellipse" if len(axes) == 2 else "ellipsoid"
        return cls(
            "{}({})".format(name, ", ".join("{:g}".format(a) for a in axes)),
            _direction_jet(func),
            dimensions=(len(axes) - 1,),
        )

    @classmethod
    def offset(cls, d: float, rho: float) -> "GraphFunction":
        """
        @cc 4
        @desc circle/sphere of radius rho centered at distance d from the origin along the
        axis, as a polar graph; d = rho touches the origin
        @arg d: center offset, 0 <= d <= rho
        @arg rho: radius
        @ret the shape psi = d cos(t) + sqrt(rho^2 - d^2 sin(t)^2)
        """
        if d < 0 or rho <= 0 or d > rho:
            raise GraphConstructionError(
                "offset d={:g} outside [0, rho={:g}], the origin is not enclosed".format(d, rho)
            )

        def func(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            s, c = np.sin(theta), np.cos(theta)
            q2 = np.maximum(rho * rho - d * d * s * s, 0.0)
            q = np.sqrt(q2)
            live = q > 0
            safe = np.where(live, q, 1.0)
            q1 = np.where(live, -d * d * s * c / safe, 0.0)
            q11 = np.where(
                live, -d * d * (c * c - s * s) / safe + d * d * s * c * q1 / safe ** 2, 0.0
            )
            value = d * c + q
            first = -d * s + q1
            second = -d * c + q11
            inside = value > 0
            return (
                np.where(inside, value, 0.0),
                np.where(inside, first, 0.0),
                np.where(inside, second, 0.0),
            )

        return cls("offset(d={:g}, rho={:g})".format(d, rho), _angle_jet(func))

    @classmethod
    def revolution(cls, *coefficients: float) -> "GraphFunction":
        """
        @cc 1
        @desc psi(t) = sum_j c_j cos(j t) in the angle from the axis
        @arg coefficients: the cosine coefficients c_0, c_1, ...
        @ret the axially symmetric shape
        """
        coef = np.asarray(coefficients, dtype=float)
        order = np.arange(coef.size)

        def func(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            angle = np.outer(theta, order)
            return (
                np.cos(angle) @ coef,
                -np.sin(angle) @ (coef * order),
                -np.cos(angle) @ (coef * order ** 2),
            )

        return cls(
            "revolution({})".format(", ".join("{:g}".format(c) for c in coef)), _angle_jet(func)
        )

    @classmethod
    def wavy(cls, r0: float = 1.0, amplitude: float = 0.2, frequency: int = 3) -> "GraphFunction":
        """
        @cc 1
        @desc psi(t) = r0 + amplitude cos(frequency t)
        @ret the shape
        """
        coefficients = [0.0] * (int(frequency) + 1)
        coefficients[0] += r0
        coefficients[int(frequency)] += amplitude
        shape = cls.revolution(*coefficients)
        shape.label = "wavy(r0={:g}, amplitude={:g}, frequency={:d})".format(
            r0, amplitude, int(frequency)
        )
        return shape

    @classmethod
    def dumbbell(cls, r0: float = 1.0, amplitude: float = 0.6) -> "GraphFunction":
        """
        @cc 1
        @desc the pinched surface of revolution psi = r0 + amplitude cos(2 t)
        @ret the shape
        """
        shape = cls.revolution(r0, 0.0, amplitude)
        shape.label = "dumbbell(r0={:g}, amplitude={:g})".format(r0, amplitude)
        return shape

    @classmethod
    def random(
        cls, seed: int = 0, dimension: int = 1, r0: float = 1.0, amplitude: float = 0.2
    ) -> "GraphFunction":
        """
        @cc 3
        @desc seeded random star-shaped graph psi = r0 exp(P(x)) with P a cubic polynomial on
        the unit directions and |P| <= amplitude
        @arg seed: generator seed
        @arg dimension: fiber dimension, 1 for curves and 2 for surfaces
        @arg r0: base radius
        @arg amplitude: bound on |log(psi / r0)|
        @ret the shape
        """
        rng = np.random.default_rng(int(seed))
        d = int(dimension) + 1
        b = rng.uniform(-1.0, 1.0, d)
        quad = rng.uniform(-1.0, 1.0, (d, d))
        quad = 0.5 * (quad + quad.T)
        cube = rng.uniform(-1.0, 1.0, (d, d, d))
        cube = sum(np.transpose(cube, p) for p in itertools.permutations(range(3))) / 6.0
        scale = amplitude / (np.abs(b).sum() + np.abs(quad).sum() + np.abs(cube).sum())
        b, quad, cube = b * scale, quad * scale, cube * scale

        def func(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            poly = (
                x @ b
                + np.einsum("ni,ij,nj->n", x, quad, x)
                + np.einsum("ni,nj,nk,ijk->n", x, x, x, cube)
            )
            grad = b + 2.0 * x @ quad + 3.0 * np.einsum("nj,nk,ijk->ni", x, x, cube)
            hess = 2.0 * quad + 6.0 * np.einsum("nk,ijk->nij", x, cube)
            value = r0 * np.exp(poly)
            return (
                value,
                value[:, None] * grad,
                value[:, None, None] * (grad[:, :, None] * grad[:, None, :] + hess),
            )

        return cls(
            "random(seed={:d}, r0={:g}, amplitude={:g})".format(int(seed), r0, amplitude),
            _direction_jet(func),
            dimensions=(int(dimension),),
        )

    @classmethod
    def random_revolution(
        cls, seed: int = 0, r0: float = 1.0, amplitude: float = 0.2, modes: int = 4
    ) -> "GraphFunction":
        """
        @cc 2
        @desc seeded random axially symmetric graph psi = r0 exp(sum_j a_j cos(j t))
        @ret the shape, |log(psi / r0)| <= amplitude
        """
        rng = np.random.default_rng(int(seed))
        coef = rng.uniform(-1.0, 1.0, int(modes)) / np.arange(1, int(modes) + 1) ** 2
        coef = coef * amplitude / np.abs(coef).sum()
        order = np.arange(1, int(modes) + 1)

        def func(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            angle = np.outer(theta, order)
            f = np.cos(angle) @ coef
            f1 = -np.sin(angle) @ (coef * order)
            f2 = -np.cos(angle) @ (coef * order ** 2)
            value = r0 * np.exp(f)
            return value, value * f1, value * (f1 * f1 + f2)

        return cls(
            "random-revolution(seed={:d}, r0={:g}, amplitude={:g})".format(
                int(seed), r0, amplitude
            ),
            _angle_jet(func),
        )

    @classmethod
    def from_callable(
        cls, func: Callable[[np.ndarray], np.ndarray], label: str = "callable"
    ) -> "GraphFunction":
        """
        @cc 1
        @desc shape from a node function, derivatives by spectral differentiation on the grid
        @arg func: node array -> psi values
        @arg label: display name
        @ret the shape
        """
        return cls(label, func=func)

    @classmethod
    def get(cls, text: str) -> "GraphFunction":
        """
        @cc 5
        @desc get a catalog shape by notation, e.g. "ellipse(a=2, b=1)", "slice(1)",
        "offset-circle(d=1, rho=1)", "random(seed=3, dimension=2)"
        @arg text: the notation string
        @ret the shape
        """
        name, args, kwargs = parse_notation(text)
        if "ρ" in kwargs:
            kwargs["rho"] = kwargs.pop("ρ")
        if name in ("ellipse", "ellipsoid"):
            axes = list(args) or [kwargs[k] for k in ("a", "b", "c") if k in kwargs]
            return cls.ellipsoid(*axes)
        if name not in SHAPE_CATALOG:
            raise ValueError(
                "unknown shape {!r}, expected one of {}".format(
                    name, sorted(list(SHAPE_CATALOG) + ["ellipse", "ellipsoid"])
                )
            )
        return SHAPE_CATALOG[name](*args, **kwargs)  # type: ignore


SHAPE_CATALOG: Dict[str, Callable[..., GraphFunction]] = {
    "slice": GraphFunction.constant,
    "sphere": GraphFunction.constant,
    "offset": GraphFunction.offset,
    "offset-circle": GraphFunction.offset,
    "offset-sphere": GraphFunction.offset,
    "revolution": GraphFunction.revolution,
    "wavy": GraphFunction.wavy,
    "dumbbell": GraphFunction.dumbbell,
    "random": GraphFunction.random,
    "random-revolution": GraphFunction.random_revolution,
}


def _fiber_metric(grid: FiberGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    @cc 2
    @desc the fiber metric sigma and its inverse at every node
    """
    radius2 = grid.radius ** 2
    count = len(grid)
    if grid.dimension == 1:
        metric = np.full((count, 1, 1), radius2)
        return metric, 1.0 / metric
    sin2 = np.sin(grid.nodes[:, 0]) ** 2
    metric = np.zeros((count, 2, 2))
    inverse = np.zeros((count, 2, 2))
    metric[:, 0, 0] = radius2
    metric[:, 1, 1] = radius2 * sin2
    inverse[:, 0, 0] = 1.0 / radius2
    inverse[:, 1, 1] = 1.0 / (radius2 * sin2)
    return metric, inverse


def _covariant_hessian(grid: FiberGrid, gradient: np.ndarray, hessian: np.ndarray) -> np.ndarray:
    """
    @cc 2
    @desc fiber hessian of psi, correcting coordinate second derivatives on S2
    """
    if grid.dimension == 1:
        return hessian
    colat = grid.nodes[:, 0]
    result = hessian.copy()
    cot = np.cos(colat) / np.sin(colat)
    result[:, 0, 1] = result[:, 1, 0] = hessian[:, 0, 1] - cot * gradient[:, 1]
    result[:, 1, 1] = hessian[:, 1, 1] + np.sin(colat) * np.cos(colat) * gradient[:, 0]
    return result


@dataclass(frozen=True)
class SurfaceFrame:
    """
    @desc first order data of a star graph at every node
    """

    s: np.ndarray
    ds: np.ndarray
    d2s: np.ndarray
    gradient_norm2: np.ndarray
    metric: np.ndarray
    area_density: np.ndarray
    dS: np.ndarray
    support: np.ndarray
    tangent: np.ndarray
    tangent_norm2: np.ndarray

    @property
    def orientation(self) -> np.ndarray:
        """
        @cc 1
        @desc sign of <nu, d/dr>, outward everywhere
        @ret an array of ones
        """
        return np.ones_like(self.dS)

    def decomposition_defect(self) -> float:
        """
        @cc 1
        @desc largest deviation from <X, nu>^2 + |X^T|^2 = s^2
        @ret the max absolute defect relative to 1 + s^2
        """
        lhs = self.support ** 2 + self.tangent_norm2
        return float(np.max(np.abs(lhs - self.s ** 2) / (1.0 + self.s ** 2)))


@dataclass(frozen=True)
class ShapeField:
    """
    @desc curvature data of a star graph with respect to the outward normal
    """

    principal: np.ndarray
    sigma: np.ndarray
    mean: np.ndarray
    newton: np.ndarray
    shape_operator: np.ndarray
    second_form: np.ndarray
    norm2: np.ndarray
    ricci_normal: np.ndarray

    @property
    def m(self) -> int:
        """
        @cc 1
        @desc hypersurface dimension
        @ret the number of principal curvatures per node
        """
        return int(self.principal.shape[1])

    def H(self, k: int) -> np.ndarray:
        """
        @cc 1
        @desc the normalized k-th mean curvature at every node
        @arg k: 0..m
        @ret H_k values
        """
        return self.mean[:, k]

    def T(self, k: int) -> np.ndarray:
        """
        @cc 1
        @desc the k-th Newton tensor in the orthonormal frame at every node
        @arg k: 0..m-1
        @ret (N, m, m) symmetric matrices
        """
        return self.newton[k]

    def identity_defects(self) -> Tuple[float, float]:
        """
        @cc 2
        @desc largest relative defects of tr T_k = (m - k) sigma_k and
        <T_k, B> = (k + 1) sigma_(k+1)
        @ret (trace defect, contraction defect)
        """
        m = self.m
        trace_defect = contraction_defect = 0.0
        for k in range(m):
            trace = np.trace(self.newton[k], axis1=1, axis2=2)
            want = (m - k) * self.sigma[:, k]
            trace_defect = max(
                trace_defect, float(np.max(np.abs(trace - want) / (1.0 + np.abs(want))))
            )
            contraction = np.einsum("nij,nij->n", self.newton[k], self.shape_operator)
            want = (k + 1) * self.sigma[:, k + 1]
            contraction_defect = max(
                contraction_defect,
                float(np.max(np.abs(contraction - want) / (1.0 + np.abs(want)))),
            )
        return trace_defect, contraction_defect


class StarGraph:
    """
    @desc a star-shaped hypersurface r = psi(theta) discretized on a fiber grid
    """

    def __init__(
        self,
        space: WarpedSpace,
        grid: FiberGrid,
        values: np.ndarray,
        gradient: np.ndarray,
        hessian: np.ndarray,
        label: str = "graph",
        allow_origin: bool = False,
    ) -> None:
        """
        @cc 8
        @desc star graph constructor, validates psi at every node
        @arg space: single-fiber warped space over a circle or round 2-sphere
        @arg grid: the fiber grid
        @arg values: psi at the nodes
        @arg gradient: coordinate gradient of psi (N, m)
        @arg hessian: coordinate hessian of psi (N, m, m)
        @arg label: shape notation
        @arg allow_origin: accept psi = 0 nodes when s vanishes at the origin
        """
        if not space.single:
            raise UnsupportedConfiguration("hypersurfaces need a single-fiber space")
        if not space.fiber.discretizable:
            raise UnsupportedFiber("cannot discretize {}".format(space.fiber.label))
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape[0] != len(grid):
            raise GraphConstructionError(
                "{} values for {} nodes".format(values.shape[0], len(grid))
            )
        start, end = space.domain_start, space.domain_end
        floor_ok = allow_origin and space.profile.vanishing_at_zero
        bad = ~np.isfinite(values) | (values >= end)
        bad |= (values < start) if floor_ok else (values <= start)
        if np.any(bad):
            index = int(np.flatnonzero(bad)[0])
            raise GraphConstructionError(
                "psi={:.6g} outside ({:g}, {:g}) at {}".format(
                    values[index], start, end, grid.describe_node(index)
                ),
                node=index,
            )
        if not (np.all(np.isfinite(gradient)) and np.all(np.isfinite(hessian))):
            raise GraphConstructionError("non-finite derivatives of {}".format(label))
        self.space = space
        self.grid = grid
        self.psi = values
        self.gradient = np.asarray(gradient, dtype=float)
        self.hessian = np.asarray(hessian, dtype=float)
        self.label = label
        self.touches_origin = bool(np.any(values <= start))
        self._frame: Optional[SurfaceFrame] = None
        self._shape: Optional[ShapeField] = None
        for array in (self.psi, self.gradient, self.hessian):
            array.setflags(write=False)

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this graph
        """
        return "<StarGraph {} in {} over {}>".format(
            self.label, self.space.label, self.grid.fiber.label
        )

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this graph
        """
        return self.__str__()

    def __len__(self) -> int:
        """
        @cc 1
        @desc dunder len method
        @ret the number of nodes
        """
        return len(self.grid)

    @property
    def m(self) -> int:
        """
        @cc 1
        @desc hypersurface dimension
        @ret the fiber dimension
        """
        return self.grid.dimension

    @property
    def n(self) -> int:
        """
        @cc 1
        @desc ambient dimension
        @ret m + 1
        """
        return self.m + 1

    @property
    def relative_variation(self) -> float:
        """
        @cc 1
        @desc (max psi - min psi) / max psi
        @ret the relative variation of psi
        """
        top = float(np.max(self.psi))
        return (top - float(np.min(self.psi))) / top

    @property
    def is_slice(self) -> bool:
        """
        @cc 1
        @desc whether psi is constant to SLICE_TOLERANCE
        @ret true for numerical slices
        """
        return self.relative_variation <= SLICE_TOLERANCE

    @property
    def is_revolution(self) -> bool:
        """
        @cc 2
        @desc whether a graph over S2 depends on the colatitude only
        @ret true for surfaces of revolution about the polar axis
        """
        if self.m != 2:
            return False
        return bool(
            np.max(np.abs(self.gradient[:, 1])) <= REVOLUTION_TOLERANCE * np.max(self.psi)
        )

    @property
    def frame(self) -> SurfaceFrame:
        """
        @cc 2
        @desc first order surface data, computed once
        @ret the surface frame
        """
        if self._frame is None:
            self._frame = surface_frames(self)
        return self._frame

    @property
    def shape(self) -> ShapeField:
        """
        @cc 2
        @desc curvature data, computed once
        @ret the shape field
        """
        if self._shape is None:
            self._shape = shape_field(self)
        return self._shape

    @property
    def area(self) -> float:
        """
        @cc 1
        @desc hypersurface area
        @ret the integral of dS
        """
        return boundary_integral(self, 1.0)

    @property
    def volume(self) -> float:
        """
        @cc 1
        @desc enclosed volume
        @ret the volume of {r < psi}
        """
        return enclosed_volume(self)

    def scaled(self, factor: float) -> "StarGraph":
        """
        @cc 1
        @desc the graph t psi on the same grid
        @arg factor: scale t
        @ret the scaled graph
        """
        return StarGraph(
            self.space,
            self.grid,
            self.psi * factor,
            self.gradient * factor,
            self.hessian * factor,
            "{:g}*{}".format(factor, self.label),
            self.touches_origin,
        )


def build_star_graph(
    space: WarpedSpace,
    shape: Union[GraphFunction, Callable[[np.ndarray], np.ndarray], np.ndarray, str, float],
    grid: Optional[FiberGrid] = None,
    resolution: Optional[Resolution] = None,
    allow_origin: bool = False,
) -> StarGraph:
    """
    @cc 6
    @desc build and validate the graph r = psi(theta) of a shape over the space's fiber
    @arg space: single-fiber warped space over S1(R) or S2(R)
    @arg shape: a GraphFunction, its notation, a node function, node values or a radius
    @arg grid: the fiber grid, built from the resolution when omitted
    @arg resolution: grid resolution
    @arg allow_origin: accept psi = 0 where s(0) = 0 (radial integrals only)
    @ret the star graph
    """
    if not space.single:
        raise UnsupportedConfiguration("hypersurfaces need a single-fiber space")
    if grid is None:
        grid = fiber_grid(space.fiber, resolution)
    if isinstance(shape, str):
        shape = GraphFunction.get(shape)
    elif isinstance(shape, (int, float)):
        shape = GraphFunction.constant(float(shape))
    elif isinstance(shape, np.ndarray):
        values = np.asarray(shape, dtype=float).reshape(-1)
        if values.shape[0] != len(grid):
            raise GraphConstructionError(
                "{} values for {} nodes".format(values.shape[0], len(grid))
            )
        gradient, hessian = differentiate(grid, values)
        return StarGraph(space, grid, values, gradient, hessian, "grid-data", allow_origin)
    elif not isinstance(shape, GraphFunction):
        shape = GraphFunction.from_callable(shape)
    values, gradient, hessian = shape.jet(grid)
    graph = StarGraph(space, grid, values, gradient, hessian, shape.label, allow_origin)
    logger.debug("built %s with %d nodes", graph, len(graph))
    return graph


def surface_frames(graph: StarGraph) -> SurfaceFrame:
    """
    @cc 4
    @desc area element, support function <X, nu> and tangential X^T at every node
    @arg graph: the star graph
    @ret the surface frame
    """
    s, ds, d2s = graph.space.profile.evaluate(graph.psi)
    sigma, sigma_inv = _fiber_metric(graph.grid)
    grad = graph.gradient
    m = graph.m
    g2 = np.einsum("na,nab,nb->n", grad, sigma_inv, grad)
    metric = grad[:, :, None] * grad[:, None, :] + (s * s)[:, None, None] * sigma
    root = np.sqrt(s * s + g2)
    area_density = s ** (m - 1) * root
    live = root > 0
    support = np.where(live, s * s / np.where(live, root, 1.0), 0.0)
    det = np.linalg.det(metric)
    regular = det > 0
    safe = np.where(regular[:, None, None], metric, np.eye(m)[None])
    tangent = np.linalg.solve(safe, (s[:, None] * grad)[..., None])[..., 0]
    tangent = np.where(regular[:, None], tangent, 0.0)
    tangent_norm2 = np.einsum("na,nab,nb->n", tangent, metric, tangent)
    return SurfaceFrame(
        s=np.asarray(s),
        ds=np.asarray(ds),
        d2s=np.asarray(d2s),
        gradient_norm2=g2,
        metric=metric,
        area_density=area_density,
        dS=area_density * graph.grid.weights,
        support=support,
        tangent=tangent,
        tangent_norm2=tangent_norm2,
    )


def elementary_symmetric(values: np.ndarray) -> np.ndarray:
    """
    @cc 2
    @desc elementary symmetric polynomials sigma_0..sigma_m of each row
    @arg values: (N, m) array
    @ret (N, m + 1) array with sigma_0 = 1
    """
    count, m = values.shape
    result = np.zeros((count, m + 1))
    result[:, 0] = 1.0
    for i in range(m):
        for k in range(i + 1, 0, -1):
            result[:, k] = result[:, k] + values[:, i] * result[:, k - 1]
    return result


def shape_field(graph: StarGraph) -> ShapeField:
    """
    @cc 6
    @desc second fundamental form, principal curvatures, H_k and Newton tensors
    @arg graph: the star graph, psi twice differentiable
    @ret the shape field with respect to the outward normal
    """
    frame = graph.frame
    s, ds, d2s = frame.s, frame.ds, frame.d2s
    bad = np.flatnonzero(s <= 0)
    if bad.size:
        raise NumericError(
            "degenerate induced metric at {}".format(graph.grid.describe_node(int(bad[0]))),
            node=int(bad[0]),
        )
    m = graph.m
    grid = graph.grid
    sigma, _ = _fiber_metric(grid)
    grad = graph.gradient
    hess = _covariant_hessian(grid, grad, graph.hessian)
    root = np.sqrt(s * s + frame.gradient_norm2)
    second_form = (
        (s * s * ds)[:, None, None] * sigma
        + 2.0 * ds[:, None, None] * grad[:, :, None] * grad[:, None, :]
        - s[:, None, None] * hess
    ) / root[:, None, None]
    try:
        lower = np.linalg.cholesky(frame.metric)
    except np.linalg.LinAlgError as error:
        raise NumericError("induced metric is not positive definite: {}".format(error))
    lower_inv = np.linalg.inv(lower)
    operator = lower_inv @ second_form @ np.swapaxes(lower_inv, 1, 2)
    operator = 0.5 * (operator + np.swapaxes(operator, 1, 2))
    principal = np.linalg.eigvalsh(operator)
    sigma_k = elementary_symmetric(principal)
    mean = sigma_k / np.array([math.comb(m, k) for k in range(m + 1)], dtype=float)
    identity = np.broadcast_to(np.eye(m), operator.shape)
    newton = np.empty((m,) + operator.shape)
    newton[0] = identity
    for k in range(1, m):
        newton[k] = sigma_k[:, k, None, None] * identity - operator @ newton[k - 1]
    K = grid.fiber.curvature or 0.0
    g2 = frame.gradient_norm2
    ricci = (
        -m * d2s / s + ((m - 1) * (K - ds * ds) - s * d2s) * g2 / s ** 4
    ) / (1.0 + g2 / (s * s))
    return ShapeField(
        principal=principal,
        sigma=sigma_k,
        mean=mean,
        newton=newton,
        shape_operator=operator,
        second_form=second_form,
        norm2=np.einsum("nij,nij->n", operator, operator),
        ricci_normal=ricci,
    )


def _radial_values(graph: StarGraph, a: RadialLike) -> np.ndarray:
    if isinstance(a, (int, float)):
        return np.full(len(graph), float(a))
    return np.asarray(a(graph.psi), dtype=float)


def boundary_integral(graph: StarGraph, a: RadialLike = 1.0) -> float:
    """
    @cc 1
    @desc integral of a(r) over the hypersurface
    @arg graph: the star graph
    @arg a: radial weight, callable or constant
    @ret the sum of a(psi) dS
    """
    return integrate_fiber(graph.grid, _radial_values(graph, a) * graph.frame.area_density)


def enclosed_volume(graph: StarGraph, c: Optional[RadialWeight] = None) -> float:
    """
    @cc 1
    @desc (weighted) volume enclosed by the graph, the fiber integral of v(psi)
    @arg graph: the star graph
    @arg c: the volume weight, None for plain volume
    @ret the volume
    """
    return integrate_fiber(graph.grid, graph.space.volume_profile(graph.psi, c))


def export_graph(graph: StarGraph, path: str) -> None:
    """
    @cc 2
    @desc write the graph as text: header (model, fiber, resolution) then one node per line
    @arg graph: the star graph
    @arg path: the output file
    """
    header = [
        "warpiso-graph",
        "model: {}".format(graph.space.profile.label),
        "fiber: {}".format(graph.grid.fiber.label),
        "resolution: {}".format("x".join(str(x) for x in graph.grid.resolution)),
        "label: {}".format(graph.label),
        "theta psi" if graph.m == 1 else "colatitude azimuth psi",
    ]
    nodes = graph.grid.nodes.reshape(len(graph), -1)
    np.savetxt(path, np.column_stack([nodes, graph.psi]), fmt="%.17g", header="\n".join(header))
    logger.debug("exported %s to %s", graph, path)


def import_graph(path: str, allow_origin: bool = False) -> StarGraph:
    """
    @cc 6
    @desc read a graph written by export_graph, derivatives by spectral differentiation
    @arg path: the graph file
    @arg allow_origin: accept psi = 0 nodes
    @ret the star graph over the recorded model and fiber grid
    """
    meta: Dict[str, str] = {}
    with open(path) as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, sep, value = line[1:].strip().partition(":")
            if sep:
                meta[key.strip()] = value.strip()
    for key in ("model", "fiber", "resolution"):
        if key not in meta:
            raise GraphConstructionError("graph file {} has no {} header".format(path, key))
    fiber = FiberSpec.get(meta["fiber"])
    space = WarpedSpace.model(meta["model"], fiber=fiber)
    resolution: Any = tuple(int(x) for x in meta["resolution"].split("x"))
    grid = fiber_grid(fiber, resolution)
    data = np.loadtxt(path, ndmin=2)
    nodes = grid.nodes.reshape(len(grid), -1)
    if data.shape != (len(grid), nodes.shape[1] + 1) or not np.allclose(
        data[:, :-1], nodes, atol=1e-12
    ):
        raise GraphConstructionError("node coordinates in {} do not match the grid".format(path))
    values = data[:, -1]
    gradient, hessian = differentiate(grid, values)
    return StarGraph(
        space, grid, values, gradient, hessian, meta.get("label", "imported"), allow_origin
    )


__all__: List[str] = [
    "GraphFunction",
    "ShapeField",
    "StarGraph",
    "SurfaceFrame",
    "boundary_integral",
    "build_star_graph",
    "elementary_symmetric",
    "enclosed_volume",
    "export_graph",
    "import_graph",
    "shape_field",
    "surface_frames",
]
