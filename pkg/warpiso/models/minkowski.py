"""
@author jacobi petrucciani
@desc Minkowski-type integral identities and the weighted mean curvature chain
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from warpiso.errors import PreconditionError, UnsupportedConfiguration
from warpiso.models.iso import MARGIN_TOLERANCE, Hypothesis, VerificationRecord, Verdicts
from warpiso.models.quadrature import differentiate, field_values, integrate_fiber
from warpiso.models.surface import StarGraph, enclosed_volume
from warpiso.models.warp import (
    CONVEXITY_TOLERANCE,
    DEFAULT_CONVEXITY_SAMPLES,
    RadialWeight,
    WarpedSpace,
    unit_ball_volume,
)


logger = logging.getLogger(__name__)

HM_TOLERANCE = {1: 1e-6, 2: 1e-5}
POSITIVITY_TOLERANCE = 1e-12

TestFunction = Union[float, RadialWeight, Callable[[np.ndarray], np.ndarray], np.ndarray]

# corollary weights s^(l+k) / s'^k written per model, and the volume weight s'
COROLLARY_MODELS: Dict[str, Tuple[Callable[[int, int], str], Optional[str]]] = {
    "euclidean": (lambda k, l: "r^{}".format(l + k), None),
    "hyperbolic": (lambda k, l: "sinh^{}*tanh^{}".format(l, k), "cosh"),
    "hemisphere": (lambda k, l: "sin^{}*tan^{}".format(l, k), "cos"),
}


@dataclass
class PositivityReport:
    """
    @desc sampled positivity of H_1..H_p and of the Newton tensors T_0..T_(p-1)
    """

    p: int
    min_mean: List[float]
    min_newton: List[float]
    verdict: bool
    worst_node: Optional[str]
    certified: bool
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the report as plain values
        """
        return asdict(self)


@dataclass
class ChainReport:
    """
    @desc the chain base <= E_0 <= ... <= E_k with its consecutive margins
    """

    experiment: str
    model: str
    shape: str
    k: int
    l: int
    base: float
    entries: List[float]
    margins: List[float]
    positivity: Optional[PositivityReport]
    hypotheses: List[Hypothesis] = field(default_factory=list)
    resolution: Tuple[int, ...] = ()
    tolerance: float = MARGIN_TOLERANCE
    verdict: str = Verdicts.NOT_APPLICABLE.name

    @property
    def holds(self) -> bool:
        """
        @cc 2
        @desc whether every link of the chain holds up to the relative tolerance
        @ret true if all margins are numerically nonnegative
        """
        previous = [self.base] + self.entries[:-1]
        return all(
            margin >= -self.tolerance * (1.0 + abs(lower))
            for margin, lower in zip(self.margins, previous)
        )

    def staircase(self) -> List[Tuple[str, float]]:
        """
        @cc 1
        @desc (j, value) pairs for plotting, the base first
        @ret the chain values in order
        """
        return [("base", self.base)] + [(str(j), value) for j, value in enumerate(self.entries)]

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the report as plain values
        """
        result = asdict(self)
        result["resolution"] = list(self.resolution)
        return result

    def rows(self) -> List[Dict[str, Any]]:
        """
        @cc 2
        @desc one csv row per link of the chain
        @ret the report columns
        """
        rows = []
        previous = self.base
        for j, value in enumerate(self.entries):
            rows.append(
                {
                    "experiment": self.experiment,
                    "model": self.model,
                    "shape": self.shape,
                    "weight": "H_{} s^{} c^-{}".format(j, self.l + j, j),
                    "lhs": value,
                    "rhs": previous,
                    "margin": self.margins[j],
                    "verdict": self.verdict,
                }
            )
            previous = value
        return rows


def _test_function_jet(graph: StarGraph, eta: TestFunction) -> Tuple[np.ndarray, np.ndarray]:
    """
    @cc 4
    @desc values and coordinate gradient of a test function on the graph: constants,
    radial functions of psi, or node values differentiated spectrally
    """
    count, m = len(graph), graph.m
    if isinstance(eta, (int, float)):
        return np.full(count, float(eta)), np.zeros((count, m))
    if isinstance(eta, np.ndarray):
        values = field_values(graph.grid, eta)
        return values, differentiate(graph.grid, values)[0]
    weight = eta if isinstance(eta, RadialWeight) else RadialWeight("eta", eta)
    values, slope, _ = weight.derivatives(graph.psi)
    values = np.asarray(values, dtype=float)
    return values, np.asarray(slope)[:, None] * graph.gradient


def _divergence_terms_revolution(
    graph: StarGraph, eta: np.ndarray, eta_grad: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    @cc 2
    @desc integrands of eta (div T_1)(X^T) and <T_1 X^T, grad eta> on a surface of
    revolution, in the meridian/parallel frame where T_1 = diag(k2, k1)
    """
    frame, shape = graph.frame, graph.shape
    colat = graph.grid.nodes[:, 0]
    radius = graph.grid.radius
    h_tt = frame.metric[:, 0, 0]
    h_pp = frame.metric[:, 1, 1]
    kappa1 = shape.second_form[:, 0, 0] / h_tt
    kappa2 = shape.second_form[:, 1, 1] / h_pp
    speed = np.sqrt(h_tt)
    psi_t = graph.gradient[:, 0]
    s, ds = frame.s, frame.ds
    tangent = s * psi_t / speed
    kappa2_t = differentiate(graph.grid, kappa2)[0][:, 0]
    rho = s * radius * np.sin(colat)
    rho_t = radius * (ds * psi_t * np.sin(colat) + s * np.cos(colat))
    divergence = kappa2_t / speed + (kappa2 - kappa1) * rho_t / (rho * speed)
    return eta * divergence * tangent, kappa2 * tangent * eta_grad[:, 0] / speed


def hm_terms(graph: StarGraph, eta: TestFunction = 1.0, k: int = 1) -> Dict[str, float]:
    """
    @cc 6
    @desc the four integrals of the weighted Minkowski identity of order k
    @arg graph: the star graph
    @arg eta: test function, a constant, a radial function or node values
    @arg k: the order, 1 <= k <= m
    @ret dictionary with potential, support, divergence and gradient terms and the scale
    """
    m = graph.m
    if not 1 <= k <= m:
        raise PreconditionError("minkowski order k={} outside 1..{}".format(k, m))
    if k >= 2 and not graph.is_revolution:
        raise UnsupportedConfiguration(
            "order {} identities need a surface of revolution, {} is not".format(k, graph.label)
        )
    frame, shape = graph.frame, graph.shape
    eta_values, eta_grad = _test_function_jet(graph, eta)
    c = frame.ds
    density = frame.area_density
    grid = graph.grid
    potential = integrate_fiber(grid, eta_values * c * shape.H(k - 1) * density)
    support = integrate_fiber(grid, eta_values * shape.H(k) * frame.support * density)
    normalizer = k * math.comb(m, k)
    if k == 1:
        divergence = 0.0
        slope = np.einsum("na,na->n", frame.tangent, eta_grad)
        gradient = integrate_fiber(grid, slope * density) / normalizer
    else:
        div_density, grad_density = _divergence_terms_revolution(graph, eta_values, eta_grad)
        divergence = integrate_fiber(grid, div_density * density) / normalizer
        gradient = integrate_fiber(grid, grad_density * density) / normalizer
    scale = integrate_fiber(grid, np.abs(eta_values * c * shape.H(k - 1)) * density)
    scale += max(abs(potential), abs(support), abs(divergence), abs(gradient))
    return {
        "potential": potential,
        "support": support,
        "divergence": divergence,
        "gradient": gradient,
        "scale": scale,
    }


def hm_residual(graph: StarGraph, eta: TestFunction = 1.0, k: int = 1) -> float:
    """
    @cc 2
    @desc normalized residual of
    int eta c H_(k-1) - int eta H_k <X, nu> + (int eta (div T) X^T + int <T X^T, grad eta>)
    / (k C(m, k)) = 0
    @arg graph: the star graph
    @arg eta: test function, a constant, a radial function or node values
    @arg k: the order, 1 <= k <= m; k >= 2 needs a surface of revolution
    @ret the residual divided by the scale of its terms
    """
    terms = hm_terms(graph, eta, k)
    residual = (
        terms["potential"] - terms["support"] + terms["divergence"] + terms["gradient"]
    )
    if terms["scale"] == 0.0:
        return 0.0
    return residual / terms["scale"]


def hm_check(
    graph: StarGraph,
    eta: TestFunction = 1.0,
    k: int = 1,
    tolerance: Optional[float] = None,
    label: Optional[str] = None,
) -> VerificationRecord:
    """
    @cc 3
    @desc verification record of the weighted Minkowski identity on one graph
    @arg graph: the star graph
    @arg eta: the test function
    @arg k: the order
    @arg tolerance: residual tolerance, HM_TOLERANCE[k] by default
    @arg label: display name of the test function
    @ret the record, lhs the potential side and rhs the support side
    """
    if tolerance is None:
        tolerance = HM_TOLERANCE.get(k, 1e-5)
    terms = hm_terms(graph, eta, k)
    lhs = terms["potential"] + terms["divergence"] + terms["gradient"]
    rhs = terms["support"]
    residual = (lhs - rhs) / terms["scale"] if terms["scale"] else 0.0
    if label is None:
        label = getattr(eta, "label", None) or (
            "{:g}".format(eta) if isinstance(eta, (int, float)) else "node-field"
        )
    record = VerificationRecord(
        experiment="hm-check",
        model=graph.space.label,
        shape=graph.label,
        weight="eta={} k={}".format(label, k),
        lhs=lhs,
        rhs=rhs,
        margin=residual,
        sharp_radius=None,
        volume=graph.volume,
        resolution=tuple(graph.grid.resolution),
        tolerance=tolerance,
    )
    record.hypotheses.append(
        Hypothesis("conformal-field", True, "X = s d/dr with potential s'")
    )
    holds = abs(residual) <= tolerance
    record.equality_flag = holds
    record.verdict = Verdicts.PASS.name if holds else Verdicts.FAIL.name
    logger.debug("minkowski k=%d on %s: residual %.3g", k, graph.label, residual)
    return record


def _fiber_constant_curvature(graph: StarGraph) -> bool:
    return graph.m == 1 or graph.grid.fiber.curvature is not None


def cone_positivity(graph: StarGraph, p: int) -> PositivityReport:
    """
    @cc 5
    @desc sample H_1..H_p > 0 and T_0..T_(p-1) > 0 at every node
    @arg graph: the star graph
    @arg p: the cone index, 1 <= p <= m
    @ret the positivity report with the worst node
    """
    m = graph.m
    if not 1 <= p <= m:
        raise PreconditionError("cone index p={} outside 1..{}".format(p, m))
    shape = graph.shape
    min_mean = [float(np.min(shape.H(j))) for j in range(1, p + 1)]
    min_newton = []
    worst_value, worst_index = math.inf, None
    for j in range(p):
        eigen = np.linalg.eigvalsh(shape.T(j))[:, 0]
        min_newton.append(float(np.min(eigen)))
        if float(np.min(eigen)) < worst_value:
            worst_value, worst_index = float(np.min(eigen)), int(np.argmin(eigen))
    for j in range(1, p + 1):
        values = shape.H(j)
        if float(np.min(values)) < worst_value:
            worst_value, worst_index = float(np.min(values)), int(np.argmin(values))
    verdict = worst_value > POSITIVITY_TOLERANCE
    worst = None if worst_index is None else graph.grid.describe_node(worst_index)
    certified = _fiber_constant_curvature(graph)
    note = "" if certified else "sampled, not certified"
    if not verdict:
        logger.info("%s leaves the positive cone of order %d at %s", graph.label, p, worst)
    return PositivityReport(
        p=p,
        min_mean=min_mean,
        min_newton=min_newton,
        verdict=verdict,
        worst_node=worst,
        certified=certified,
        note=note,
    )


def pinched_hypotheses(
    space: WarpedSpace, r_top: float, samples: int = DEFAULT_CONVEXITY_SAMPLES
) -> List[Hypothesis]:
    """
    @cc 6
    @desc sample s' > 0 and 0 <= s'^2 - s s'' <= K on (start, r_top]
    @arg space: single-fiber warped space
    @arg r_top: upper end of the sampled range
    @arg samples: sampling density
    @ret the hypotheses, K taken from the fiber curvature
    """
    radii = space.sample_radii(samples, r_top)
    s, ds, d2s = space.profile.evaluate(radii)
    defect = ds * ds - s * d2s
    scale = 1.0 + float(np.max(np.abs(defect)))
    lower = bool(np.min(defect) >= -CONVEXITY_TOLERANCE * scale)
    hypotheses = [
        Hypothesis(
            "warping-increasing", bool(np.min(ds) > 0), "min s' = {:.6g}".format(float(np.min(ds)))
        ),
        Hypothesis(
            "curvature-lower", lower, "min s'^2 - s s'' = {:.6g}".format(float(np.min(defect)))
        ),
    ]
    K = space.fiber.curvature
    if space.m == 1:
        upper: Optional[bool] = True
        evidence = "circle fiber, no upper bound needed"
    elif K is None:
        upper, evidence = None, "fiber curvature unknown"
    else:
        upper = bool(np.max(defect) <= K + CONVEXITY_TOLERANCE * scale)
        evidence = "max s'^2 - s s'' = {:.6g} against K = {:g}".format(float(np.max(defect)), K)
    hypotheses.append(Hypothesis("curvature-upper", upper, evidence))
    return hypotheses


def _lower_bound_l(space: WarpedSpace) -> int:
    return 0 if space.profile.space_form == "euclidean" else 1


def chain_margins(
    graph: StarGraph,
    k: int,
    l: int = 1,
    samples: int = DEFAULT_CONVEXITY_SAMPLES,
    tolerance: float = MARGIN_TOLERANCE,
) -> ChainReport:
    """
    @cc 8
    @desc evaluate base <= int s^l <= int H_1 s^(l+1) / c <= ... <= int H_k s^(l+k) / c^k
    with c = s' and base = |N|^(-(l-1)/n) (n int c dv)^((n+l-1)/n)
    @arg graph: the star graph
    @arg k: the top order, 0 <= k <= m
    @arg l: the radial power, l >= 1 (l >= 0 in euclidean space)
    @arg samples: hypothesis sampling density
    @arg tolerance: relative margin tolerance
    @ret the chain report with its k + 1 margins
    """
    space = graph.space
    m, n = graph.m, graph.n
    if not 0 <= k <= m:
        raise PreconditionError("chain order k={} outside 0..{}".format(k, m))
    if l < _lower_bound_l(space):
        raise PreconditionError("chain power l={} too small in {}".format(l, space.label))
    frame, shape = graph.frame, graph.shape
    c = frame.ds
    if k >= 1 and float(np.min(c)) <= 0:
        raise PreconditionError("s' must be positive on the graph for the chain weights")
    potential = RadialWeight.potential(space.profile)
    weighted_volume = enclosed_volume(graph, potential)
    base = space.fiber_volume ** (-(l - 1.0) / n) * (n * weighted_volume) ** (
        (n + l - 1.0) / n
    )
    entries = []
    for j in range(k + 1):
        integrand = shape.H(j) * frame.s ** (l + j) * c ** (-float(j)) * frame.area_density
        entries.append(integrate_fiber(graph.grid, integrand))
    previous = [base] + entries[:-1]
    margins = [value - lower for value, lower in zip(entries, previous)]
    positivity = cone_positivity(graph, k) if k >= 1 else None
    r_top = min(float(np.max(graph.psi)), space.working_radius)
    hypotheses = pinched_hypotheses(space, r_top, samples)
    hypotheses.append(Hypothesis("star-shaped", True, "boundary is a graph over the fiber"))
    if positivity is not None:
        if k == 1:
            convex = positivity.min_mean[0] >= -POSITIVITY_TOLERANCE
            hypotheses.append(
                Hypothesis("mean-convex", convex, "min H_1 = {:.6g}".format(positivity.min_mean[0]))
            )
        else:
            hypotheses.append(
                Hypothesis(
                    "k-convex",
                    positivity.verdict,
                    "min H_{} = {:.6g} at {}".format(
                        k, positivity.min_mean[-1], positivity.worst_node
                    ),
                )
            )
    report = ChainReport(
        experiment="chain",
        model=space.label,
        shape=graph.label,
        k=k,
        l=l,
        base=base,
        entries=entries,
        margins=margins,
        positivity=positivity,
        hypotheses=hypotheses,
        resolution=tuple(graph.grid.resolution),
        tolerance=tolerance,
    )
    expected = all(h.passed for h in hypotheses)
    report.verdict = Verdicts.judge(expected, report.holds)
    logger.debug("chain k=%d l=%d on %s: margins %s", k, l, graph.label, margins)
    return report


def corollary_run(
    model: str,
    graph: StarGraph,
    k: int,
    l: int = 1,
    tolerance: float = MARGIN_TOLERANCE,
) -> VerificationRecord:
    """
    @cc 6
    @desc the closed form int H_k s^l (s / s')^k >= n beta_n^(-(l-1)/n) (int s' dv)^((n+l-1)/n)
    in a space form model
    @arg model: "euclidean", "hyperbolic" or "hemisphere"
    @arg graph: a star graph in that model over the unit sphere
    @arg k: the order, 0 <= k <= m
    @arg l: the radial power, l >= 1 (l >= 0 in euclidean space)
    @arg tolerance: relative margin tolerance
    @ret the verification record
    """
    if model not in COROLLARY_MODELS:
        raise PreconditionError(
            "corollary model must be one of {}, got {!r}".format(sorted(COROLLARY_MODELS), model)
        )
    space = graph.space
    if space.profile.space_form != model:
        raise PreconditionError("graph lives in {}, not {}".format(space.profile.label, model))
    m, n = graph.m, graph.n
    if not 0 <= k <= m:
        raise PreconditionError("order k={} outside 0..{}".format(k, m))
    if l < _lower_bound_l(space):
        raise PreconditionError("power l={} too small in {}".format(l, model))
    weight_notation, volume_notation = COROLLARY_MODELS[model]
    weight = RadialWeight.get(weight_notation(k, l))
    shape = graph.shape
    lhs = integrate_fiber(
        graph.grid, shape.H(k) * np.asarray(weight(graph.psi)) * graph.frame.area_density
    )
    volume_weight = None if volume_notation is None else RadialWeight.get(volume_notation)
    volume = enclosed_volume(graph, volume_weight)
    beta = unit_ball_volume(n)
    rhs = n * beta ** (-(l - 1.0) / n) * volume ** ((n + l - 1.0) / n)
    hypotheses = [
        Hypothesis("star-shaped", True, "boundary is a graph over the fiber"),
        Hypothesis(
            "unit-fiber",
            abs(space.fiber_volume - n * beta) <= 1e-12 * n * beta,
            "|N| = {:.12g}, n beta_n = {:.12g}".format(space.fiber_volume, n * beta),
        ),
    ]
    if k >= 1:
        positivity = cone_positivity(graph, k)
        if k == 1:
            hypotheses.append(
                Hypothesis(
                    "mean-convex",
                    positivity.min_mean[0] >= -POSITIVITY_TOLERANCE,
                    "min H_1 = {:.6g}".format(positivity.min_mean[0]),
                )
            )
        else:
            hypotheses.append(
                Hypothesis(
                    "k-convex",
                    positivity.verdict,
                    "min H_{} = {:.6g}".format(k, positivity.min_mean[-1]),
                )
            )
    record = VerificationRecord(
        experiment="corollary",
        model=space.label,
        shape=graph.label,
        weight="H_{} {}".format(k, weight.label),
        lhs=lhs,
        rhs=rhs,
        margin=lhs - rhs,
        sharp_radius=None,
        volume=volume,
        hypotheses=hypotheses,
        resolution=tuple(graph.grid.resolution),
        tolerance=tolerance,
    )
    close = abs(record.margin) <= tolerance * (1.0 + abs(rhs))
    record.equality_flag = close and graph.is_slice
    expected = all(h.passed for h in hypotheses)
    record.verdict = Verdicts.judge(expected, record.holds)
    return record


__all__ = [
    "COROLLARY_MODELS",
    "ChainReport",
    "HM_TOLERANCE",
    "PositivityReport",
    "chain_margins",
    "cone_positivity",
    "corollary_run",
    "hm_check",
    "hm_residual",
    "hm_terms",
    "pinched_hypotheses",
]
