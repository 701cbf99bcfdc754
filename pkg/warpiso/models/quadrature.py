"""
@author jacobi petrucciani
@desc deterministic quadrature over radial intervals and over S1/S2 fibers
"""
import logging
import math
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from warpiso.errors import NumericError, UnsupportedFiber

if TYPE_CHECKING:  # pragma: no cover
    from warpiso.models.warp import FiberSpec


logger = logging.getLogger(__name__)

DEFAULT_CIRCLE_RESOLUTION = 512
DEFAULT_SPHERE_RESOLUTION = (64, 128)
DEFAULT_RADIAL_TOLERANCE = 1e-10
MAX_PANELS = 4000

GL_ORDER = 15
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)

Resolution = Union[int, Tuple[int, int]]
FieldLike = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, Sequence[float]]


class FiberGrid:
    """
    @desc quadrature nodes and weights on a realized fiber
    """

    def __init__(
        self,
        fiber: "FiberSpec",
        nodes: np.ndarray,
        weights: np.ndarray,
        resolution: Tuple[int, ...],
        colatitudes: Optional[np.ndarray] = None,
        azimuths: Optional[np.ndarray] = None,
    ) -> None:
        """
        @cc 1
        @desc grid constructor, use fiber_grid() rather than calling this directly
        @arg fiber: the fiber these nodes live on
        @arg nodes: (N,) angles for S1, (N, 2) colatitude/azimuth pairs for S2
        @arg weights: positive quadrature weights, summing to the fiber volume
        @arg resolution: node counts per coordinate direction
        @arg colatitudes: the distinct colatitudes of an S2 grid
        @arg azimuths: the distinct azimuths of an S2 grid
        """
        self.fiber = fiber
        self.nodes = nodes
        self.weights = weights
        self.resolution = resolution
        self.colatitudes = colatitudes
        self.azimuths = azimuths
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this grid
        """
        return "<FiberGrid {} {}>".format(
            self.fiber.label, "x".join(str(x) for x in self.resolution)
        )

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this grid
        """
        return self.__str__()

    def __len__(self) -> int:
        """
        @cc 1
        @desc dunder len method
        @ret the number of nodes on this grid
        """
        return int(self.weights.shape[0])

    @property
    def dimension(self) -> int:
        """
        @cc 1
        @desc the fiber dimension m
        @ret 1 for circles, 2 for spheres
        """
        return int(self.fiber.dimension)

    @property
    def radius(self) -> float:
        """
        @cc 1
        @desc the radius of the realized fiber
        @ret R of S1(R) or S2(R)
        """
        return float(self.fiber.radius)

    @property
    def shape(self) -> Tuple[int, ...]:
        """
        @cc 1
        @desc the array shape of a field on this grid
        @ret (N,) for S1, (n_colatitude, n_azimuth) for S2
        """
        return tuple(self.resolution)

    def describe_node(self, index: int) -> str:
        """
        @cc 2
        @desc human readable node label used in error messages
        @arg index: the flat node index
        @ret the node coordinates as text
        """
        if self.dimension == 1:
            return "node {} (theta={:.6g})".format(index, float(self.nodes[index]))
        colat, azim = self.nodes[index]
        return "node {} (colatitude={:.6g}, azimuth={:.6g})".format(
            index, float(colat), float(azim)
        )


def _positive_int(value: int, name: str) -> int:
    if int(value) != value or value < 1:
        raise ValueError("{} must be a positive integer, got {!r}".format(name, value))
    return int(value)


def fiber_grid(fiber: "FiberSpec", resolution: Optional[Resolution] = None) -> FiberGrid:
    """
    @cc 6
    @desc build the trapezoid (S1) or Gauss-Legendre x uniform (S2) grid of a fiber
    @arg fiber: a circle or round 2-sphere fiber
    @arg resolution: node count (S1) or (colatitude, azimuth) counts (S2)
    @ret the fiber grid
    """
    kind = fiber.realization.name
    if kind == "circle":
        if resolution is None:
            resolution = DEFAULT_CIRCLE_RESOLUTION
        if isinstance(resolution, (tuple, list)):
            resolution = resolution[0]
        count = _positive_int(resolution, "resolution")
        theta = 2.0 * np.pi * np.arange(count) / count
        weights = np.full(count, 2.0 * np.pi * fiber.radius / count)
        return FiberGrid(fiber, theta, weights, (count,))

    if kind == "round-sphere" and fiber.dimension == 2:
        if resolution is None:
            resolution = DEFAULT_SPHERE_RESOLUTION
        if isinstance(resolution, (tuple, list)):
            n_colat, n_azim = (_positive_int(x, "resolution") for x in resolution)
        else:
            n_colat = _positive_int(resolution, "resolution")
            n_azim = 2 * n_colat
        x, w = np.polynomial.legendre.leggauss(n_colat)
        # nodes ordered from north to south pole
        colat = np.arccos(x[::-1])
        w = w[::-1]
        azim = 2.0 * np.pi * np.arange(n_azim) / n_azim
        colat_grid, azim_grid = np.meshgrid(colat, azim, indexing="ij")
        nodes = np.stack([colat_grid.ravel(), azim_grid.ravel()], axis=1)
        weights = np.outer(w, np.full(n_azim, 2.0 * np.pi / n_azim)).ravel()
        weights = weights * fiber.radius ** 2
        return FiberGrid(fiber, nodes, weights, (n_colat, n_azim), colat, azim)

    raise UnsupportedFiber(
        "cannot discretize {} fiber of dimension {}".format(kind, fiber.dimension)
    )


def field_values(grid: FiberGrid, field: FieldLike) -> np.ndarray:
    """
    @cc 4
    @desc evaluate a node field on a grid and check that it is finite
    @arg grid: the fiber grid
    @arg field: a callable on the node array, or precomputed node values
    @ret the flat array of node values
    """
    values = field(grid.nodes) if callable(field) else field
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.shape[0] != len(grid):
        raise NumericError(
            "field has {} values for {} nodes".format(values.shape[0], len(grid))
        )
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NumericError(
            "non-finite field value at {}".format(grid.describe_node(int(bad[0]))),
            node=int(bad[0]),
        )
    return values


def integrate_fiber(grid: FiberGrid, field: FieldLike) -> float:
    """
    @cc 1
    @desc weighted node sum of a field over the fiber
    @arg grid: the fiber grid
    @arg field: a callable on the node array, or precomputed node values
    @ret the integral of the field over the fiber
    """
    values = field_values(grid, field)
    return math.fsum(grid.weights * values)


def _panels(f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """
    @cc 1
    @desc fixed-order Gauss-Legendre rule on many panels at once
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[..., None] + half[..., None] * GL_NODES
    return half * (np.asarray(f(x), dtype=float) @ GL_WEIGHTS)


def integrate_radial(
    f: Callable[[np.ndarray], np.ndarray],
    r0: float,
    r1: float,
    tol: float = DEFAULT_RADIAL_TOLERANCE,
    max_panels: int = MAX_PANELS,
) -> float:
    """
    @cc 7
    @desc adaptive composite Gauss-Legendre quadrature by interval bisection
    @arg f: vectorized integrand
    @arg r0: lower limit
    @arg r1: upper limit
    @arg tol: relative tolerance, the estimated error is kept below tol * (1 + |result|)
    @arg max_panels: subdivision limit
    @ret the integral of f over [r0, r1]
    """
    if r1 == r0:
        return 0.0
    if r1 < r0:
        return -integrate_radial(f, r1, r0, tol, max_panels)
    length = r1 - r0
    whole = float(_panels(f, np.array(r0), np.array(r1)))
    stack: List[Tuple[float, float, float]] = [(r0, r1, whole)]
    accepted: List[float] = []
    achieved = 0.0
    panels = 1
    while stack:
        lo, hi, coarse = stack.pop()
        mid = 0.5 * (lo + hi)
        halves = _panels(f, np.array([lo, mid]), np.array([mid, hi]))
        fine = float(halves[0] + halves[1])
        if not math.isfinite(fine):
            raise NumericError(
                "non-finite integrand on [{:.6g}, {:.6g}]".format(lo, hi), best=None, achieved=None
            )
        error = abs(fine - coarse)
        budget = tol * (1.0 + abs(whole)) * (hi - lo) / length
        if error <= budget or (hi - lo) <= 1e-15 * max(1.0, abs(hi)):
            accepted.append(fine)
            achieved += error
            continue
        panels += 1
        if panels > max_panels:
            best = math.fsum(accepted) + fine + sum(x[2] for x in stack)
            raise NumericError(
                "subdivision limit reached, best estimate {:.12g} with error {:.3g}".format(
                    best, achieved + error
                ),
                best=best,
                achieved=achieved + error,
            )
        stack.append((mid, hi, float(halves[1])))
        stack.append((lo, mid, float(halves[0])))
    logger.debug("radial quadrature on [%g, %g] used %d panels", r0, r1, panels)
    return math.fsum(accepted)


def integrate_radial_cumulative(
    f: Callable[[np.ndarray], np.ndarray],
    start: float,
    points: np.ndarray,
    tol: float = DEFAULT_RADIAL_TOLERANCE,
) -> np.ndarray:
    """
    @cc 4
    @desc integrals of f from start to every point, sharing the work between sorted points
    @arg f: vectorized integrand
    @arg start: common lower limit
    @arg points: upper limits, any shape
    @arg tol: relative tolerance per gap
    @ret array of integrals with the shape of points
    """
    points = np.asarray(points, dtype=float)
    flat = points.reshape(-1)
    if flat.size == 0:
        return np.zeros_like(points)
    order = np.argsort(flat, kind="stable")
    ends = flat[order]
    starts = np.concatenate([[start], ends[:-1]])
    mids = 0.5 * (starts + ends)
    coarse = _panels(f, starts, ends)
    fine = _panels(f, starts, mids) + _panels(f, mids, ends)
    loose = np.abs(fine - coarse) > tol * (1.0 + np.abs(fine))
    for index in np.flatnonzero(loose):
        fine[index] = integrate_radial(f, float(starts[index]), float(ends[index]), tol)
    totals = np.cumsum(fine)
    result = np.empty_like(flat)
    result[order] = totals
    return result.reshape(points.shape)


@lru_cache(maxsize=16)
def _legendre_matrices(count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    @cc 2
    @desc first and second x-derivative matrices of polynomial interpolation at the
    descending Gauss-Legendre nodes used for colatitudes
    """
    x = np.polynomial.legendre.leggauss(count)[0][::-1]
    vander = np.polynomial.legendre.legvander(x, count - 1)
    first = np.empty((count, count))
    second = np.empty((count, count))
    for j in range(count):
        basis = np.zeros(count)
        basis[j] = 1.0
        first[:, j] = np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(basis))
        second[:, j] = np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(basis, 2))
    inverse = np.linalg.inv(vander)
    return first @ inverse, second @ inverse


def _wavenumbers(count: int) -> Tuple[np.ndarray, np.ndarray]:
    k = np.fft.fftfreq(count, 1.0 / count)
    odd_k = k.copy()
    if count % 2 == 0:
        odd_k[count // 2] = 0.0
    return k, odd_k


def differentiate(grid: FiberGrid, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    @cc 5
    @desc spectral coordinate derivatives of a node field: FFT on S1 and in azimuth,
    Legendre interpolation in cos(colatitude) per azimuthal mode on S2
    @arg grid: the fiber grid
    @arg values: flat node values
    @ret (gradient (N, m), hessian (N, m, m)) in the fiber coordinates
    """
    values = field_values(grid, values)
    if grid.dimension == 1:
        k, k1 = _wavenumbers(len(grid))
        spectrum = np.fft.fft(values)
        first = np.real(np.fft.ifft(1j * k1 * spectrum))
        second = np.real(np.fft.ifft(-(k ** 2) * spectrum))
        return first[:, None], second[:, None, None]

    n_colat, n_azim = grid.shape
    colat = grid.colatitudes[:, None]
    sin, cos = np.sin(colat), np.cos(colat)
    dx, dxx = _legendre_matrices(n_colat)
    k, k1 = _wavenumbers(n_azim)
    spectrum = np.fft.fft(values.reshape(n_colat, n_azim), axis=1)
    # odd azimuthal modes carry one factor of sin(colatitude)
    odd = (np.rint(k).astype(int) % 2) != 0
    reduced = np.where(odd, spectrum / sin, spectrum)
    g_x, g_xx = dx @ reduced, dxx @ reduced
    g_t = -sin * g_x
    g_tt = sin * sin * g_xx - cos * g_x
    f_t = np.where(odd, cos * reduced + sin * g_t, g_t)
    f_tt = np.where(odd, -sin * reduced + 2.0 * cos * g_t + sin * g_tt, g_tt)

    def back(modes: np.ndarray) -> np.ndarray:
        return np.real(np.fft.ifft(modes, axis=1)).reshape(-1)

    psi_t, psi_tt = back(f_t), back(f_tt)
    psi_p = back(1j * k1 * spectrum)
    psi_pp = back(-(k ** 2) * spectrum)
    psi_tp = back(1j * k1 * f_t)
    gradient = np.stack([psi_t, psi_p], axis=1)
    hessian = np.empty((len(grid), 2, 2))
    hessian[:, 0, 0] = psi_tt
    hessian[:, 0, 1] = hessian[:, 1, 0] = psi_tp
    hessian[:, 1, 1] = psi_pp
    return gradient, hessian
