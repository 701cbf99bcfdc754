"""
@author jacobi petrucciani
@desc weighted isoperimetric verification on star-shaped graphs
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from types import SimpleNamespace
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from warpiso.errors import DomainError, PreconditionError
from warpiso.models.quadrature import FiberGrid, field_values, integrate_fiber
from warpiso.models.surface import StarGraph, boundary_integral, enclosed_volume
from warpiso.models.warp import (
    CONVEXITY_TOLERANCE,
    DEFAULT_CONVEXITY_SAMPLES,
    RadialWeight,
    RegimeReport,
    WarpedSpace,
    WeightPair,
    unit_ball_volume,
)


logger = logging.getLogger(__name__)

MARGIN_TOLERANCE = 1e-9


class Verdict(SimpleNamespace):
    """
    @desc verdict namespace class
    """


class Verdicts:
    """
    @desc record verdict enum
    """

    PASS = Verdict(name="pass", value=0)
    FAIL = Verdict(name="fail", value=1)
    NOT_APPLICABLE = Verdict(name="n/a", value=2)

    @classmethod
    def judge(cls, expected: bool, holds: bool) -> str:
        """
        @cc 3
        @desc verdict of a check whose outcome is expected only under its hypotheses
        @arg expected: whether the hypotheses making the outcome expected are met
        @arg holds: whether the outcome was observed
        @ret the verdict name
        """
        if holds:
            return cls.PASS.name
        return cls.FAIL.name if expected else cls.NOT_APPLICABLE.name


@dataclass
class Hypothesis:
    """
    @desc one named hypothesis with its sampled evidence
    """

    name: str
    passed: Optional[bool]
    evidence: str


@dataclass
class VerificationRecord:
    """
    @desc one inequality/identity check: both sides, margin, hypotheses and equality flag
    """

    experiment: str
    model: str
    shape: str
    weight: str
    lhs: float
    rhs: float
    margin: float
    sharp_radius: Optional[float]
    volume: float
    hypotheses: List[Hypothesis] = field(default_factory=list)
    criteria: List[str] = field(default_factory=list)
    equality_flag: bool = False
    resolution: Tuple[int, ...] = ()
    tolerance: float = MARGIN_TOLERANCE
    notes: List[str] = field(default_factory=list)
    verdict: str = Verdicts.NOT_APPLICABLE.name

    @property
    def holds(self) -> bool:
        """
        @cc 1
        @desc whether lhs >= rhs up to the relative tolerance
        @ret true if the inequality holds numerically
        """
        return self.margin >= -self.tolerance * (1.0 + abs(self.rhs))

    def hypothesis(self, name: str) -> Optional[Hypothesis]:
        """
        @cc 2
        @desc look up a hypothesis by name
        @arg name: the hypothesis name
        @ret the hypothesis, None if not evaluated
        """
        for item in self.hypotheses:
            if item.name == name:
                return item
        return None

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc plain dictionary for json reports
        @ret the record as plain values
        """
        result = asdict(self)
        result["resolution"] = list(self.resolution)
        return result

    def row(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat csv row
        @ret the report columns
        """
        return {
            "experiment": self.experiment,
            "model": self.model,
            "shape": self.shape,
            "weight": self.weight,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
        }


@dataclass
class JensenGap:
    """
    @desc mean of psi(rho) minus psi at the volume-averaged radius
    """

    value: float
    radius: float
    convex: bool
    advisory: bool


def omega_sharp_radius(
    space: WarpedSpace, volume: float, weight: Optional[RadialWeight] = None
) -> float:
    """
    @cc 2
    @desc radius R of the coordinate ball with the same (weighted) volume
    @arg space: the warped space
    @arg volume: the (weighted) volume |Omega|
    @arg weight: the volume weight c
    @ret R = v^-1(volume / |N|), or the weighted inverse
    """
    if not volume > 0:
        raise DomainError("volume {:g} must be positive".format(volume))
    return space.invert_volume(volume / space.fiber_volume, weight)


def _is_space_form(space: WarpedSpace) -> bool:
    fiber = space.fiber
    unit = fiber.radius is not None and abs(fiber.radius - 1.0) < 1e-15
    return space.profile.space_form is not None and unit


def weighted_hypotheses(
    space: WarpedSpace,
    weights: WeightPair,
    r_top: float,
    samples: int = DEFAULT_CONVEXITY_SAMPLES,
) -> Tuple[List[Hypothesis], List[str]]:
    """
    @cc 14
    @desc sample every hypothesis of the weighted isoperimetric criteria on (start, r_top]
    @arg space: single-fiber warped space
    @arg weights: the weight pair
    @arg r_top: upper end of the sampled range
    @arg samples: sampling density
    @ret (hypotheses, names of the satisfied criteria)
    """
    radii = space.sample_radii(samples, r_top)
    s, ds, d2s = space.profile.evaluate(radii)
    log_margin = s * d2s - ds * ds
    log_scale = 1.0 + float(np.max(np.abs(log_margin)))
    log_convex = bool(np.min(log_margin) >= -CONVEXITY_TOLERANCE * log_scale)
    monotone = bool(np.min(ds) >= -CONVEXITY_TOLERANCE * (1.0 + float(np.max(np.abs(ds)))))

    def shifted_profile(r: np.ndarray) -> np.ndarray:
        return np.asarray(weights.b(r)) * space.area_coefficient(r)

    def full_profile(r: np.ndarray) -> np.ndarray:
        return np.asarray(weights.a(r)) * space.area_coefficient(r)

    hypotheses = [
        Hypothesis("star-shaped", True, "boundary is a graph over the fiber"),
        Hypothesis(
            "slices-log-convex",
            log_convex,
            "min s s'' - s'^2 = {:.6g} over {} samples".format(float(np.min(log_margin)), samples),
        ),
        Hypothesis(
            "warping-monotone", monotone, "min s' = {:.6g}".format(float(np.min(ds)))
        ),
    ]
    criteria: List[str] = []
    trivial = weights.c is None and float(np.max(np.abs(weights.b(radii)))) == 0.0

    if weights.c is None:
        profile_monotone = space.sampled_monotone(shifted_profile, r_top, samples)
        margin = np.asarray(space.weighted_convexity_margin(weights, radii))
        scale = 1.0 + float(np.max(np.abs(margin)))
        profile_convex = bool(np.min(margin) >= -CONVEXITY_TOLERANCE * scale)
        hypotheses.append(
            Hypothesis("weighted-profile-monotone", profile_monotone, "b A sampled non-decreasing")
        )
        hypotheses.append(
            Hypothesis(
                "weighted-profile-convex",
                profile_convex,
                "min s^2 b'' + m s s' b' - m b (s'^2 - s s'') = {:.6g}".format(
                    float(np.min(margin))
                ),
            )
        )
    else:
        profile_monotone = space.sampled_monotone(full_profile, r_top, samples)
        hypotheses.append(
            Hypothesis("weighted-profile-monotone", profile_monotone, "a A sampled non-decreasing")
        )
        profile_convex = False

    gap = space.sampled_convexity(full_profile, r_top, weights.c, samples)
    star_convex = gap >= -CONVEXITY_TOLERANCE
    hypotheses.append(
        Hypothesis(
            "star-profile-convex",
            star_convex,
            "min chord gap of a A against the weighted volume = {:.3g}".format(gap),
        )
    )

    regime = space.classify_regime(samples=samples)
    classical: Optional[bool] = None
    if _is_space_form(space):
        classical, evidence = True, "constant curvature model"
    elif regime.regime is RegimeReport.Regimes.SLICES_ISOPERIMETRIC:
        classical, evidence = True, "log-convex warping, star-shaped boundary"
    elif regime.regime is RegimeReport.Regimes.PINCHED_CURVATURE:
        classical, evidence = True, "pinched curvature regime (assumed)"
    elif regime.regime is RegimeReport.Regimes.SLICES_NOT_ISOPERIMETRIC:
        classical, evidence = False, "slices are not isoperimetric"
    else:
        evidence = "unknown, regime {}".format(regime.regime.name)
    hypotheses.append(Hypothesis("classical-isoperimetric", classical, evidence))

    if trivial and log_convex and monotone:
        criteria.append("monotone-log-convex")
    if trivial and log_convex:
        criteria.append("star-log-convex")
    if weights.c is None and classical and profile_monotone and profile_convex:
        criteria.append("weighted-classical")
    if star_convex and float(np.min(weights.a(radii))) > 0:
        criteria.append("weighted-volume-star")
    if (
        weights.c is None
        and regime.regime is RegimeReport.Regimes.PINCHED_CURVATURE
        and profile_convex
    ):
        criteria.append("pinched-curvature-assumed")
    return hypotheses, criteria


def verify_weighted_iso(
    space: WarpedSpace,
    graph: StarGraph,
    weights: WeightPair,
    samples: int = DEFAULT_CONVEXITY_SAMPLES,
    tolerance: float = MARGIN_TOLERANCE,
    experiment: str = "verify-iso",
) -> VerificationRecord:
    """
    @cc 6
    @desc compare the weighted boundary integral of the graph with that of the coordinate
    ball of equal (weighted) volume; hypothesis failures are reported, never raised
    @arg space: the warped space of the graph
    @arg graph: the star graph
    @arg weights: boundary weight a and optional volume weight c
    @arg samples: hypothesis sampling density
    @arg tolerance: relative margin tolerance
    @arg experiment: experiment name carried by the record
    @ret the verification record
    """
    lhs = boundary_integral(graph, weights.a)
    volume = enclosed_volume(graph, weights.c)
    radius = omega_sharp_radius(space, volume, weights.c)
    rhs = space.fiber_volume * float(weights.a(radius)) * float(space.area_coefficient(radius))
    margin = lhs - rhs
    r_top = min(max(float(np.max(graph.psi)), radius), space.working_radius)
    hypotheses, criteria = weighted_hypotheses(space, weights, r_top, samples)
    record = VerificationRecord(
        experiment=experiment,
        model=space.label,
        shape=graph.label,
        weight=weights.a.label + ("" if weights.c is None else " / c=" + weights.c.label),
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        sharp_radius=radius,
        volume=volume,
        hypotheses=hypotheses,
        criteria=criteria,
        resolution=tuple(graph.grid.resolution),
        tolerance=tolerance,
    )
    close = abs(margin) <= tolerance * (1.0 + abs(rhs))
    record.equality_flag = close and graph.is_slice
    if close and not graph.is_slice:
        record.notes.append("non-slice equality candidate")
    record.verdict = Verdicts.judge(bool(criteria), record.holds)
    failed = [h.name for h in hypotheses if h.passed is False]
    if failed:
        logger.warning("%s with %s: failed hypotheses %s", graph.label, record.weight, failed)
    logger.debug("verified %s: margin %.6g (%s)", graph.label, margin, record.verdict)
    return record


CATALOG_WEIGHTS: Dict[str, Callable[[int], List[str]]] = {
    "euclidean": lambda k: ["r^{}".format(k)],
    "hyperbolic": lambda k: ["sinh^{}".format(k), "cosh", "(cosh-1)^{}".format(k)],
    "hemisphere": lambda k: ["tan^{}".format(k), "1-cos"],
}


def explicit_euclidean_rhs(n: int, k: float, volume: float) -> float:
    """
    @cc 1
    @desc n beta_n^(-(k-1)/n) Vol^((n-1+k)/n), the closed form of the sharp r^k integral
    @arg n: the dimension
    @arg k: the weight power
    @arg volume: the enclosed volume
    @ret the explicit right side
    """
    beta = unit_ball_volume(n)
    return n * beta ** (-(k - 1.0) / n) * volume ** ((n - 1.0 + k) / n)


def space_form_catalog(
    model: str,
    graph: StarGraph,
    k: int = 1,
    samples: int = DEFAULT_CONVEXITY_SAMPLES,
) -> List[VerificationRecord]:
    """
    @cc 5
    @desc verify every catalog weight of a space form model on one graph
    @arg model: "euclidean", "hyperbolic" or "hemisphere"
    @arg graph: a star graph in that model
    @arg k: the weight power, k >= 1
    @arg samples: hypothesis sampling density
    @ret one record per weight, plus the explicit form in the euclidean model
    """
    if model not in CATALOG_WEIGHTS:
        raise PreconditionError(
            "catalog model must be one of {}, got {!r}".format(sorted(CATALOG_WEIGHTS), model)
        )
    if k < 1:
        raise PreconditionError("catalog weights need k >= 1")
    space = graph.space
    if space.profile.space_form != model:
        raise PreconditionError(
            "graph lives in {}, not {}".format(space.profile.label, model)
        )
    if model == "hemisphere" and float(np.max(graph.psi)) >= math.pi / 2:
        raise DomainError("hemisphere graphs need r < pi/2")
    records = []
    for notation in CATALOG_WEIGHTS[model](k):
        weights = WeightPair(RadialWeight.get(notation), origin=space.domain_start)
        records.append(verify_weighted_iso(space, graph, weights, samples, experiment="catalog"))
    if model == "euclidean":
        base = records[0]
        n = graph.n
        rhs = explicit_euclidean_rhs(n, k, base.volume)
        explicit = VerificationRecord(
            experiment="catalog",
            model=space.label,
            shape=graph.label,
            weight="r^{} explicit".format(k),
            lhs=base.lhs,
            rhs=rhs,
            margin=base.lhs - rhs,
            sharp_radius=None,
            volume=base.volume,
            hypotheses=list(base.hypotheses),
            criteria=list(base.criteria),
            equality_flag=base.equality_flag,
            resolution=base.resolution,
        )
        agrees = abs(rhs - base.rhs) <= 1e-9 * (1.0 + abs(rhs))
        explicit.hypotheses.append(
            Hypothesis(
                "explicit-form-agrees",
                agrees,
                "|N| a(R) A(R) = {:.15g}, closed form = {:.15g}".format(base.rhs, rhs),
            )
        )
        explicit.verdict = Verdicts.judge(bool(explicit.criteria), explicit.holds and agrees)
        records.append(explicit)
    return records


def jensen_gap(
    space: WarpedSpace,
    weights: WeightPair,
    rho: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]],
    grid: FiberGrid,
    samples: int = DEFAULT_CONVEXITY_SAMPLES,
) -> JensenGap:
    """
    @cc 4
    @desc mean of psi(rho) minus psi(v^-1(mean v(rho))) with psi = b A and the normalized
    fiber measure; nonnegative whenever psi o v^-1 is convex
    @arg space: the warped space
    @arg weights: the weight pair providing b
    @arg rho: nonnegative radii at the grid nodes, or a node function
    @arg grid: the fiber grid
    @arg samples: convexity sampling density
    @ret the gap with its convexity flag; advisory when convexity fails
    """
    values = field_values(grid, rho)
    if np.any(values < space.domain_start) or np.any(values >= space.domain_end):
        raise DomainError("rho leaves the radial domain")
    total = space.fiber_volume

    def psi(r: Any) -> Any:
        return np.asarray(weights.b(r)) * space.area_coefficient(r)

    mean_psi = integrate_fiber(grid, psi(values)) / total
    mean_volume = integrate_fiber(grid, space.volume_profile(values, weights.c)) / total
    radius = space.invert_volume(mean_volume, weights.c)
    gap = mean_psi - float(psi(radius))
    r_top = max(float(np.max(values)), radius)
    convex = space.sampled_convexity(psi, r_top, weights.c, samples) >= -CONVEXITY_TOLERANCE
    if not convex:
        logger.warning("jensen gap is advisory: b A o v^-1 is not convex on [0, %.6g]", r_top)
    return JensenGap(value=gap, radius=radius, convex=convex, advisory=not convex)


__all__ = [
    "Hypothesis",
    "JensenGap",
    "VerificationRecord",
    "Verdict",
    "Verdicts",
    "explicit_euclidean_rhs",
    "jensen_gap",
    "omega_sharp_radius",
    "space_form_catalog",
    "verify_weighted_iso",
    "weighted_hypotheses",
]
