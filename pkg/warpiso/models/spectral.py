"""
@author jacobi petrucciani
@desc slice stability, small-ball and annulus constructions, eigenvalue bounds
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eig, eigh
from scipy.optimize import bisect, minimize, newton

from warpiso.errors import (
    DomainError,
    NumericError,
    PreconditionError,
    UnsupportedConfiguration,
    UnsupportedFiber,
)
from warpiso.models.iso import Hypothesis, Verdicts
from warpiso.models.minkowski import cone_positivity
from warpiso.models.quadrature import (
    GL_NODES,
    GL_WEIGHTS,
    FiberGrid,
    differentiate,
    fiber_grid,
    integrate_fiber,
)
from warpiso.models.surface import StarGraph, boundary_integral, build_star_graph
from warpiso.models.warp import (
    PROFILE_CATALOG,
    FiberSpec,
    WarpedSpace,
    WarpProfile,
    eval_profile,
    parse_notation,
    unit_ball_volume,
)


logger = logging.getLogger(__name__)

MARGINAL_TOLERANCE = 1e-10
BOUND_TOLERANCE = 1e-9
VOLUME_MATCH = 1e-12
PROBE_RESOLUTION = 256
PROBE_AGREEMENT = 0.05
RAYLEIGH_DEGREE = 4
STEKLOV_MODES = 32
SMALL_BALL_RADIUS = 1e-3


@dataclass
class StabilityVerdict:
    """
    @desc stability of a slice {r = r0}: lambda1(g_N) >= m (s'^2 - s s'')
    """

    model: str
    fiber: str
    r0: float
    curvature_term: float
    lambda1: float
    stable: bool
    marginal: bool

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the verdict as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, lambda1 against the curvature term
        @ret the report columns
        """
        return {
            "experiment": "stability",
            "model": self.model,
            "shape": "slice({:g})".format(self.r0),
            "weight": self.fiber,
            "lhs": self.lambda1,
            "rhs": self.curvature_term,
            "margin": self.lambda1 - self.curvature_term,
            "verdict": Verdicts.NOT_APPLICABLE.name,
        }


@dataclass
class ProbeResult:
    """
    @desc second derivative of area along a volume preserving perturbation of a slice
    """

    model: str
    fiber: str
    r0: float
    mode: int
    step: float
    areas: List[float]
    shifts: List[float]
    fd_second_derivative: float
    refined: float
    formula_value: float
    agree: bool
    verdict: str = Verdicts.NOT_APPLICABLE.name

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the probe as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, refined finite difference against the formula
        @ret the report columns
        """
        return {
            "experiment": "stability",
            "model": self.model,
            "shape": "slice({:g})+t*u{}".format(self.r0, self.mode),
            "weight": self.fiber,
            "lhs": self.refined,
            "rhs": self.formula_value,
            "margin": self.refined - self.formula_value,
            "verdict": self.verdict,
        }


@dataclass
class ThresholdReport:
    """
    @desc small-ball threshold (n beta_n / |N|)^(1/(n-1)) against s'(0)
    """

    model: str
    fiber: str
    slope: float
    threshold: float
    violated: bool
    radius: float
    model_area: float
    euclidean_area: float

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the report as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, the leading order small-ball areas
        @ret the report columns
        """
        return {
            "experiment": "small-ball",
            "model": self.model,
            "shape": "ball({:g})".format(self.radius),
            "weight": self.fiber,
            "lhs": self.euclidean_area,
            "rhs": self.model_area,
            "margin": self.euclidean_area - self.model_area,
            "verdict": Verdicts.PASS.name,
        }


@dataclass
class AnnulusRecord:
    """
    @desc the annulus {R1 < r < e R1} in s = r^(-1/m), volume and boundary area per |N|
    """

    m: int
    R1: float
    R2: float
    volume_ratio: float
    area_ratio: float
    closed_volume_ratio: float
    closed_area_ratio: float
    slice_area_ratio: float
    agrees: bool
    beats_slice: bool

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the record as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, quadrature area ratio against its closed form
        @ret the report columns
        """
        return {
            "experiment": "power-annulus",
            "model": "power(-1/{})".format(self.m),
            "shape": "annulus({:g}, {:g})".format(self.R1, self.R2),
            "weight": "1",
            "lhs": self.area_ratio,
            "rhs": self.closed_area_ratio,
            "margin": self.area_ratio - self.closed_area_ratio,
            "verdict": Verdicts.PASS.name if self.agrees else Verdicts.FAIL.name,
        }


@dataclass
class SurjectivityRecord:
    """
    @desc slice area against the euclidean small ball of equal volume, for s(start) > 0
    """

    model: str
    r0: float
    volume: float
    slice_area: float
    ball_area: float
    ratio: float

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the record as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, slice area against the equal volume euclidean ball
        @ret the report columns
        """
        return {
            "experiment": "small-ball",
            "model": self.model,
            "shape": "slice({:g})".format(self.r0),
            "weight": "1",
            "lhs": self.slice_area,
            "rhs": self.ball_area,
            "margin": self.slice_area - self.ball_area,
            "verdict": Verdicts.NOT_APPLICABLE.name,
        }


@dataclass
class EigenBoundRecord:
    """
    @desc a first eigenvalue (exact or Rayleigh-Ritz estimate) against its volume bound
    """

    experiment: str
    model: str
    shape: str
    eigenvalue: float
    bound: float
    holds: bool
    method: str
    k: int = 0
    certified: bool = True
    translation: List[float] = field(default_factory=list)
    second_moment: Optional[float] = None
    moment_bound: Optional[float] = None
    hypotheses: List[Hypothesis] = field(default_factory=list)
    verdict: str = Verdicts.NOT_APPLICABLE.name

    @property
    def equality(self) -> bool:
        """
        @cc 1
        @desc whether the bound is attained to BOUND_TOLERANCE
        @ret true in the equality case
        """
        return abs(self.eigenvalue - self.bound) <= BOUND_TOLERANCE * (1.0 + abs(self.bound))

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the record as plain values
        """
        return asdict(self)

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row, the bound against the eigenvalue
        @ret the report columns
        """
        return {
            "experiment": self.experiment,
            "model": self.model,
            "shape": self.shape,
            "weight": self.method,
            "lhs": self.bound,
            "rhs": self.eigenvalue,
            "margin": self.bound - self.eigenvalue,
            "verdict": self.verdict,
        }


def _within_bound(eigenvalue: float, bound: float) -> bool:
    return eigenvalue <= bound + BOUND_TOLERANCE * (1.0 + abs(bound))


def slice_stability(space: WarpedSpace, r0: float) -> StabilityVerdict:
    """
    @cc 4
    @desc stability of the constant mean curvature slice {r = r0}
    @arg space: single-fiber warped space whose fiber knows lambda1
    @arg r0: the slice radius, inside the domain
    @ret the stability verdict
    """
    fiber = space.fiber
    if fiber.lambda1 is None:
        raise UnsupportedConfiguration("fiber {} has no lambda1".format(fiber.label))
    if not space.domain_start < r0 < space.domain_end:
        raise DomainError("slice radius {:g} is not interior".format(r0))
    s, ds, d2s = eval_profile(space.profile, r0)
    term = space.m * (ds * ds - s * d2s)
    lambda1 = float(fiber.lambda1)
    marginal = abs(lambda1 - term) <= MARGINAL_TOLERANCE * (1.0 + abs(term))
    stable = marginal or lambda1 > term
    logger.debug("slice %g in %s: lambda1 %g against %g", r0, space.label, lambda1, term)
    return StabilityVerdict(
        model=space.label,
        fiber=fiber.label,
        r0=float(r0),
        curvature_term=term,
        lambda1=lambda1,
        stable=stable,
        marginal=marginal,
    )


def stability_flip_radius(
    profile: Union[str, WarpProfile],
    r0: float,
    dimension: int = 1,
    bracket: Tuple[float, float] = (0.25, 4.0),
    xtol: float = 1e-10,
) -> float:
    """
    @cc 3
    @desc fiber radius R where the slice {r = r0} over S^m(R) changes stability
    @arg profile: the warping profile
    @arg r0: the slice radius
    @arg dimension: the sphere dimension m
    @arg bracket: radii bracketing the change
    @arg xtol: bisection tolerance
    @ret the critical radius
    """

    def gap(radius: float) -> float:
        space = WarpedSpace.model(profile, fiber=FiberSpec.sphere(dimension, radius))
        verdict = slice_stability(space, r0)
        return verdict.lambda1 - verdict.curvature_term

    lo, hi = bracket
    if gap(lo) * gap(hi) > 0:
        raise DomainError("stability does not change on [{:g}, {:g}]".format(lo, hi))
    radius = float(bisect(gap, lo, hi, xtol=xtol, maxiter=200))
    logger.debug("stability flips at R=%.12g", radius)
    return radius


def _first_mode(grid: FiberGrid, mode: int) -> Tuple[np.ndarray, float]:
    """
    @cc 3
    @desc a fiber eigenfunction at the nodes with its eigenvalue
    """
    radius = grid.radius
    if grid.dimension == 1:
        return np.cos(mode * grid.nodes), (mode / radius) ** 2
    if mode != 1:
        raise PreconditionError("only the first spherical mode is probed on S2")
    return np.cos(grid.nodes[:, 0]), 2.0 / radius ** 2


def _shell_integral(space: WarpedSpace, r0: float, values: np.ndarray) -> np.ndarray:
    """
    @cc 1
    @desc node-wise integral of A from r0 to values with one Gauss-Legendre panel
    """
    half = 0.5 * (values - r0)
    mid = 0.5 * (values + r0)
    points = mid[:, None] + half[:, None] * GL_NODES[None, :]
    return half * (np.asarray(space.area_coefficient(points)) @ GL_WEIGHTS)


def _volume_matched(
    space: WarpedSpace, grid: FiberGrid, r0: float, perturbation: np.ndarray
) -> Tuple[np.ndarray, float]:
    """
    @cc 3
    @desc add the constant shift q that restores the volume of the slice {r = r0}
    """

    def excess(q: float) -> float:
        return integrate_fiber(grid, _shell_integral(space, r0, r0 + perturbation + q))

    def slope(q: float) -> float:
        return integrate_fiber(grid, space.area_coefficient(r0 + perturbation + q))

    try:
        shift = float(newton(excess, 0.0, fprime=slope, tol=1e-15, maxiter=50))
    except (RuntimeError, ValueError) as error:
        raise NumericError("volume correction failed: {}".format(error))
    achieved = abs(excess(shift))
    scale = space.fiber_volume * float(space.area_coefficient(r0)) * max(r0, 1.0)
    if not achieved <= VOLUME_MATCH * (1.0 + scale):
        raise NumericError(
            "volume mismatch {:.3g} after correction".format(achieved), achieved=achieved
        )
    return r0 + perturbation + shift, shift


def second_variation_probe(
    space: WarpedSpace,
    r0: float,
    mode: int = 1,
    amplitudes: Optional[Sequence[float]] = None,
    resolution: Optional[Union[int, Tuple[int, int]]] = None,
) -> ProbeResult:
    """
    @cc 5
    @desc compare the finite-difference second derivative of area along
    psi_t = r0 + t u + q(t), with q(t) keeping the volume fixed, against
    (lambda - m (s'^2 - s s'')) s^(m-2) int_N u^2
    @arg space: single-fiber space over S1(R) or S2(R)
    @arg r0: the slice radius
    @arg mode: the eigenfunction index, cos(mode theta) on circles
    @arg amplitudes: the stencil amplitudes, the largest |t| sets the step (0.01 r0 default)
    @arg resolution: the fiber grid resolution
    @ret both values with the Richardson refined difference
    """
    if not space.fiber.discretizable:
        raise UnsupportedFiber("cannot probe slices over {}".format(space.fiber.label))
    if resolution is None and space.m == 1:
        resolution = PROBE_RESOLUTION
    grid = fiber_grid(space.fiber, resolution)
    u, eigenvalue = _first_mode(grid, mode)
    step = 0.01 * r0 if not amplitudes else max(abs(float(t)) for t in amplitudes)
    if not step > 0:
        raise PreconditionError("probe amplitudes must not all vanish")

    def area(t: float) -> Tuple[float, float]:
        if t == 0.0:
            values, shift = np.full(len(grid), float(r0)), 0.0
        else:
            values, shift = _volume_matched(space, grid, r0, t * u)
        graph = build_star_graph(space, values, grid=grid)
        return boundary_integral(graph), shift

    areas, shifts = [], []
    stencil = (-step, 0.0, step, -0.5 * step, 0.5 * step)
    for t in stencil:
        value, shift = area(t)
        areas.append(value)
        shifts.append(shift)
    coarse = (areas[0] - 2.0 * areas[1] + areas[2]) / step ** 2
    fine = (areas[3] - 2.0 * areas[1] + areas[4]) / (0.5 * step) ** 2
    refined = (4.0 * fine - coarse) / 3.0
    s, ds, d2s = eval_profile(space.profile, r0)
    m = space.m
    formula = (eigenvalue - m * (ds * ds - s * d2s)) * s ** (m - 2) * integrate_fiber(grid, u * u)
    agree = abs(refined - formula) <= PROBE_AGREEMENT * abs(formula)
    same_sign = abs(formula) <= 1e-6 or np.sign(refined) == np.sign(formula)
    logger.debug("probe r0=%g: fd %.6g, formula %.6g", r0, refined, formula)
    return ProbeResult(
        model=space.label,
        fiber=space.fiber.label,
        r0=float(r0),
        mode=mode,
        step=step,
        areas=areas,
        shifts=shifts,
        fd_second_derivative=coarse,
        refined=refined,
        formula_value=formula,
        agree=agree,
        verdict=Verdicts.PASS.name if agree and same_sign else Verdicts.FAIL.name,
    )


def small_ball_threshold(space: WarpedSpace, radius: float = SMALL_BALL_RADIUS) -> ThresholdReport:
    """
    @cc 4
    @desc the threshold on s'(0) above which small balls beat slices, with the leading
    order boundary areas of a small ball centered off the pole and of a euclidean ball
    @arg space: single-fiber space with s(0) = 0 and s'(0) > 0
    @arg radius: the small comparison radius
    @ret the threshold report
    """
    profile = space.profile
    s0, slope, _ = (float(x) for x in profile.raw(np.float64(space.domain_start)))
    if space.domain_start != 0.0 or s0 != 0.0:
        raise PreconditionError("the small-ball threshold needs s(0) = 0")
    if not slope > 0:
        raise PreconditionError("the small-ball threshold needs s'(0) > 0")
    n = space.n
    total = space.fiber_volume
    sphere = n * unit_ball_volume(n)
    threshold = (sphere / total) ** (1.0 / (n - 1))
    violated = slope > threshold * (1.0 + 1e-12)
    model_area = (
        total ** (1.0 / n) * sphere ** ((n - 1.0) / n) * slope ** ((n - 1.0) / n)
        * radius ** (n - 1)
    )
    euclidean_area = sphere * radius ** (n - 1)
    if violated:
        logger.info("%s: s'(0)=%g exceeds the threshold %g", space.label, slope, threshold)
    return ThresholdReport(
        model=space.label,
        fiber=space.fiber.label,
        slope=slope,
        threshold=threshold,
        violated=violated,
        radius=radius,
        model_area=model_area,
        euclidean_area=euclidean_area,
    )


def power_counterexample(m: int, R1: float) -> AnnulusRecord:
    """
    @cc 3
    @desc the annulus {R1 < r < e R1} in s = r^(-1/m) over S^m: unit volume ratio and
    boundary area ratio 1/R1 + 1/R2, which tends to zero
    @arg m: the fiber dimension
    @arg R1: the inner radius, R1 >= 1
    @ret the annulus record with quadrature and closed forms
    """
    if int(m) != m or m < 1:
        raise PreconditionError("m must be a positive integer")
    if not R1 >= 1.0:
        raise DomainError("inner radius {:g} below the domain start 1".format(R1))
    space = WarpedSpace.model(PROFILE_CATALOG["power"](-1.0 / m), fiber=FiberSpec.sphere(m))
    R2 = math.e * R1
    volume_ratio = space.shell_volume(R1, R2)
    area_ratio = float(space.area_coefficient(R1)) + float(space.area_coefficient(R2))
    closed_area = 1.0 / R1 + 1.0 / R2
    agrees = abs(volume_ratio - 1.0) <= 1e-10 and abs(area_ratio - closed_area) <= 1e-10 * (
        1.0 + closed_area
    )
    # the region {1 < r < e} of unit volume ratio is bounded by the slice r = e alone
    slice_area = float(space.area_coefficient(space.invert_volume(1.0)))
    return AnnulusRecord(
        m=int(m),
        R1=float(R1),
        R2=R2,
        volume_ratio=volume_ratio,
        area_ratio=area_ratio,
        closed_volume_ratio=1.0,
        closed_area_ratio=closed_area,
        slice_area_ratio=slice_area,
        agrees=agrees,
        beats_slice=area_ratio < slice_area,
    )


def surjectivity_counterexample(space: WarpedSpace, r0: float) -> SurjectivityRecord:
    """
    @cc 2
    @desc for s(start) > 0 compare the slice area |N| A(r0) with the euclidean ball of
    the volume |B_r0|; the ratio blows up as r0 approaches the start
    @arg space: single-fiber space with s(start) > 0
    @arg r0: the slice radius
    @ret the comparison record
    """
    start = space.domain_start
    if not float(space.profile.raw(np.float64(start))[0]) > 0:
        raise PreconditionError("the construction needs s > 0 at the domain start")
    if not start < r0 < space.domain_end:
        raise DomainError("slice radius {:g} is not interior".format(r0))
    n = space.n
    volume = float(space.ball_volume(r0))
    slice_area = space.fiber_volume * float(space.area_coefficient(r0))
    ball_area = n * unit_ball_volume(n) ** (1.0 / n) * volume ** ((n - 1.0) / n)
    return SurjectivityRecord(
        model=space.label,
        r0=float(r0),
        volume=volume,
        slice_area=slice_area,
        ball_area=ball_area,
        ratio=slice_area / ball_area,
    )


def _unit_directions(grid: FiberGrid) -> np.ndarray:
    if grid.dimension == 1:
        theta = grid.nodes
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    colat, azim = grid.nodes[:, 0], grid.nodes[:, 1]
    return np.stack(
        [np.sin(colat) * np.cos(azim), np.sin(colat) * np.sin(azim), np.cos(colat)], axis=1
    )


def _recenter(graph: StarGraph) -> Tuple[np.ndarray, float]:
    """
    @cc 2
    @desc translation t with zero boundary mean of x - t, and the centered second moment
    """
    points = graph.psi[:, None] * _unit_directions(graph.grid)
    density = graph.frame.area_density
    grid = graph.grid
    area = integrate_fiber(grid, density)
    moments = np.array([integrate_fiber(grid, points[:, i] * density) for i in range(graph.n)])

    def objective(t: np.ndarray) -> float:
        return float(np.sum((moments - area * t) ** 2))

    result = minimize(
        objective,
        np.zeros(graph.n),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000},
    )
    translation = np.asarray(result.x)
    if np.max(np.abs(moments - area * translation)) > 1e-10 * (1.0 + area):
        translation = moments / area
        logger.debug("nelder-mead stalled, centroid translation used")
    logger.debug("recentered %s by %s", graph.label, translation)
    shifted = points - translation[None, :]
    second = integrate_fiber(grid, np.sum(shifted * shifted, axis=1) * density)
    return translation, second


def _monomials(directions: np.ndarray, degree: int) -> List[np.ndarray]:
    result = []
    for total in range(1, degree + 1):
        for a in range(total + 1):
            for b in range(total - a + 1):
                c = total - a - b
                result.append(
                    directions[:, 0] ** a * directions[:, 1] ** b * directions[:, 2] ** c
                )
    return result


def _rayleigh_ritz(graph: StarGraph, k: int, degree: int = RAYLEIGH_DEGREE) -> float:
    """
    @cc 3
    @desc smallest Rayleigh-Ritz value of -div(T_k grad) on zero-mean polynomials of the
    unit direction, an upper estimate of the first eigenvalue
    """
    grid = graph.grid
    frame, shape = graph.frame, graph.shape
    dS = frame.area_density * grid.weights
    area = float(np.sum(dS))
    lower_inv = np.linalg.inv(np.linalg.cholesky(frame.metric))
    tensor = shape.T(k)
    values, slopes = [], []
    for basis in _monomials(_unit_directions(grid), degree):
        centered = basis - float(np.sum(basis * dS)) / area
        values.append(centered)
        slopes.append(lower_inv @ differentiate(grid, basis)[0][..., None])
    count = len(values)
    stiffness = np.empty((count, count))
    mass = np.empty((count, count))
    for i in range(count):
        flux = tensor @ slopes[i]
        for j in range(i, count):
            energy = np.einsum("nai,nai->n", slopes[j], flux)
            stiffness[i, j] = stiffness[j, i] = float(np.sum(energy * dS))
            mass[i, j] = mass[j, i] = float(np.sum(values[i] * values[j] * dS))
    # drop the directions the discrete mass matrix cannot resolve
    weights, vectors = eigh(mass)
    keep = weights > 1e-12 * float(np.max(weights))
    basis = vectors[:, keep] / np.sqrt(weights[keep])
    reduced = basis.T @ stiffness @ basis
    return float(eigh(0.5 * (reduced + reduced.T), eigvals_only=True)[0])


def lambda1_bound_check(graph: StarGraph, k: int = 0) -> EigenBoundRecord:
    """
    @cc 8
    @desc first eigenvalue of -div(T_k grad) on a hypersurface of euclidean space against
    (m - k) C(m, k) beta_n^(1/n) int H_k dS / (n Vol^((n+1)/n))
    @arg graph: a star graph in the euclidean model over the unit sphere
    @arg k: the Newton tensor order, 0 <= k <= m - 1
    @ret the bound record; curves and spheres use exact eigenvalues
    """
    space = graph.space
    if space.profile.space_form != "euclidean" or abs(graph.grid.radius - 1.0) > 1e-15:
        raise UnsupportedConfiguration("the eigenvalue bound needs euclidean space")
    m, n = graph.m, graph.n
    if not 0 <= k <= m - 1:
        raise PreconditionError("order k={} outside 0..{}".format(k, m - 1))
    beta = unit_ball_volume(n)
    volume = graph.volume
    total_mean = integrate_fiber(graph.grid, graph.shape.H(k) * graph.frame.area_density)
    bound = (m - k) * math.comb(m, k) * beta ** (1.0 / n) * total_mean / (
        n * volume ** ((n + 1.0) / n)
    )
    hypotheses = [Hypothesis("closed-hypersurface", True, "star graph over the unit sphere")]
    if m == 1:
        length = graph.area
        eigenvalue, method, certified = (2.0 * math.pi / length) ** 2, "exact (2 pi / L)^2", True
    elif graph.is_slice:
        rho = float(np.mean(graph.psi))
        eigenvalue = math.comb(m - 1, k) * rho ** (-k) * m / rho ** 2
        method, certified = "exact sphere spectrum", True
    else:
        if k >= 1:
            positivity = cone_positivity(graph, k + 1)
            hypotheses.append(
                Hypothesis(
                    "newton-tensor-positive",
                    positivity.min_newton[k] > 0,
                    "min eigenvalue of T_{} = {:.6g}".format(k, positivity.min_newton[k]),
                )
            )
        eigenvalue = _rayleigh_ritz(graph, k)
        method = "rayleigh-ritz degree {}".format(RAYLEIGH_DEGREE)
        certified = eigenvalue <= bound
    translation, second = _recenter(graph)
    moment_bound = n * beta ** (-1.0 / n) * volume ** ((n + 1.0) / n)
    hypotheses.append(
        Hypothesis(
            "centered-second-moment",
            second >= moment_bound * (1.0 - BOUND_TOLERANCE),
            "int |x - t|^2 = {:.12g} against {:.12g}".format(second, moment_bound),
        )
    )
    holds = _within_bound(eigenvalue, bound)
    record = EigenBoundRecord(
        experiment="eigen-lambda",
        model=space.label,
        shape=graph.label,
        eigenvalue=eigenvalue,
        bound=bound,
        holds=holds,
        method=method,
        k=k,
        certified=certified,
        translation=[float(x) for x in translation],
        second_moment=second,
        moment_bound=moment_bound,
        hypotheses=hypotheses,
    )
    expected = all(h.passed for h in hypotheses)
    record.verdict = Verdicts.judge(expected, holds)
    return record


def _annulus_modes(a: float, b: float, n: int, modes: int) -> List[float]:
    """
    @cc 5
    @desc positive Steklov values of every angular mode of the annulus a < r < b,
    from the 2x2 problems in the radial basis (r^k, r^(2-n-k)), (1, log r) for k = 0, n = 2
    """
    values = []
    for k in range(modes + 1):
        if n == 2 and k == 0:
            basis = [(lambda r: 1.0, lambda r: 0.0), (math.log, lambda r: 1.0 / r)]
        else:
            p, q = float(k), float(2 - n - k)
            basis = [
                (lambda r, e=p: r ** e, lambda r, e=p: e * r ** (e - 1.0)),
                (lambda r, e=q: r ** e, lambda r, e=q: e * r ** (e - 1.0)),
            ]
        # outward normal derivative is +d/dr on r = b and -d/dr on r = a
        flux = np.array(
            [[d(b) for _, d in basis], [-d(a) for _, d in basis]], dtype=float
        )
        trace = np.array([[f(b) for f, _ in basis], [f(a) for f, _ in basis]], dtype=float)
        for value in eig(flux, trace, right=False):
            if not np.isfinite(value):
                continue
            if abs(value.imag) <= 1e-9 * (1.0 + abs(value.real)) and value.real > 1e-12:
                values.append(float(value.real))
    return values


def steklov_bound_check(
    domain: Union[str, Tuple[str, Dict[str, float]]], modes: int = STEKLOV_MODES
) -> EigenBoundRecord:
    """
    @cc 6
    @desc first nonzero Steklov eigenvalue of a ball or annulus against (beta_n / Vol)^(1/n)
    @arg domain: "ball(rho=2, n=3)", "disk(rho=1)" or "annulus(a=0.5, b=1, n=2)"
    @arg modes: the highest angular mode of the annulus solve
    @ret the bound record
    """
    if isinstance(domain, str):
        name, args, kwargs = parse_notation(domain)
        label = domain
    else:
        name, kwargs = domain
        args, label = [], "{}({})".format(name, kwargs)
    if name in ("ball", "disk"):
        rho = float(kwargs.get("rho", args[0] if args else 1.0))
        n = int(kwargs.get("n", 2 if name == "disk" else 3))
        if not rho > 0 or n < 2:
            raise DomainError("ball needs rho > 0 and n >= 2")
        beta = unit_ball_volume(n)
        eigenvalue, method = 1.0 / rho, "exact 1 / rho"
        volume = beta * rho ** n
    elif name == "annulus":
        a = float(kwargs.get("a", args[0] if args else 0.5))
        b = float(kwargs.get("b", args[1] if len(args) > 1 else 1.0))
        n = int(kwargs.get("n", 2))
        if not 0 < a < b or n < 2:
            raise DomainError("annulus needs 0 < a < b and n >= 2")
        beta = unit_ball_volume(n)
        values = _annulus_modes(a, b, n, modes)
        if not values:
            raise NumericError("no positive Steklov value found")
        eigenvalue, method = min(values), "annulus mode solve k <= {}".format(modes)
        volume = beta * (b ** n - a ** n)
    else:
        raise UnsupportedConfiguration("unknown Steklov domain {!r}".format(name))
    bound = (beta / volume) ** (1.0 / n)
    holds = _within_bound(eigenvalue, bound)
    record = EigenBoundRecord(
        experiment="eigen-steklov",
        model="euclidean(n={})".format(n),
        shape=label,
        eigenvalue=eigenvalue,
        bound=bound,
        holds=holds,
        method=method,
        hypotheses=[Hypothesis("bounded-domain", True, "explicit radial domain")],
    )
    record.verdict = Verdicts.judge(True, holds)
    logger.debug("steklov %s: p1 %.12g bound %.12g", label, eigenvalue, bound)
    return record


__all__ = [
    "AnnulusRecord",
    "EigenBoundRecord",
    "ProbeResult",
    "StabilityVerdict",
    "SurjectivityRecord",
    "ThresholdReport",
    "lambda1_bound_check",
    "power_counterexample",
    "second_variation_probe",
    "slice_stability",
    "small_ball_threshold",
    "stability_flip_radius",
    "steklov_bound_check",
    "surjectivity_counterexample",
]
