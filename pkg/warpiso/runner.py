"""
@author jacobi petrucciani
@desc config driven experiment runner and report writers
"""
import csv
import json
import logging
import os
import platform
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
import scipy
import yaml

from warpiso.errors import ConfigError
from warpiso.models.iso import Verdicts, space_form_catalog, verify_weighted_iso
from warpiso.models.minkowski import chain_margins, corollary_run, hm_check
from warpiso.models.quadrature import Resolution
from warpiso.models.spectral import (
    lambda1_bound_check,
    power_counterexample,
    second_variation_probe,
    slice_stability,
    small_ball_threshold,
    stability_flip_radius,
    steklov_bound_check,
    surjectivity_counterexample,
)
from warpiso.models.surface import (
    SHAPE_CATALOG,
    GraphFunction,
    StarGraph,
    build_star_graph,
    import_graph,
)
from warpiso.models.warp import (
    DEFAULT_CONVEXITY_SAMPLES,
    FiberSpec,
    RadialWeight,
    WarpedSpace,
    WeightPair,
    parse_notation,
)


logger = logging.getLogger(__name__)

OUTPUT_ROOT_VARIABLE = "WARPISO_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "./warpiso-runs"
CSV_COLUMNS = ["experiment", "model", "shape", "weight", "lhs", "rhs", "margin", "verdict"]

COMMON_KEYS = {"experiment", "resolution", "seed", "tolerance", "samples", "out"}
SPACE_KEYS = {"model", "fiber", "n", "working_radius"}
GRAPH_KEYS = {"graph", "graph_file", "count", "allow_origin"}

EXPERIMENT_KEYS: Dict[str, Set[str]] = {
    "classify": COMMON_KEYS | SPACE_KEYS | {"K", "expect"},
    "verify-iso": COMMON_KEYS | SPACE_KEYS | GRAPH_KEYS | {
        "weight",
        "volume_weight",
        "expected_margin",
    },
    "catalog": COMMON_KEYS | {"model", "n", "graph", "count", "k"},
    "hm-check": COMMON_KEYS | SPACE_KEYS | GRAPH_KEYS | {"eta", "k"},
    "chain": COMMON_KEYS | SPACE_KEYS | GRAPH_KEYS | {"k", "l", "corollary"},
    "stability": COMMON_KEYS | SPACE_KEYS | {
        "r0",
        "mode",
        "step",
        "radii",
        "flip",
        "expect_flip",
        "probe",
    },
    "small-ball": COMMON_KEYS | SPACE_KEYS | {"radius", "radii", "expect_violated"},
    "power-annulus": COMMON_KEYS | {"m", "R1"},
    "eigen-lambda": COMMON_KEYS | SPACE_KEYS | GRAPH_KEYS | {"k"},
    "eigen-steklov": COMMON_KEYS | {"domain", "modes"},
}
EXPERIMENTS = tuple(sorted(EXPERIMENT_KEYS))

Series = Dict[str, Any]


@dataclass
class ReportBundle:
    """
    @desc everything one experiment run produced: records, csv rows and plot series
    """

    experiment: str
    config: Dict[str, Any]
    records: List[Dict[str, Any]] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    series: Dict[str, Series] = field(default_factory=dict)
    directory: Optional[str] = None

    @property
    def summary(self) -> Dict[str, int]:
        """
        @cc 2
        @desc verdict counts over the csv rows
        @ret counts per verdict name
        """
        counts = {v.name: 0 for v in (Verdicts.PASS, Verdicts.FAIL, Verdicts.NOT_APPLICABLE)}
        for row in self.rows:
            counts[row["verdict"]] = counts.get(row["verdict"], 0) + 1
        return counts

    @property
    def exit_status(self) -> int:
        """
        @cc 1
        @desc process exit status of the run
        @ret 0 iff no row failed
        """
        return 0 if self.summary[Verdicts.FAIL.name] == 0 else 1

    def to_json(self) -> str:
        """
        @cc 1
        @desc the report.json payload, key-sorted and free of timestamps
        @ret the json text
        """
        payload = {
            "experiment": self.experiment,
            "config": self.config,
            "records": self.records,
            "summary": self.summary,
        }
        return json.dumps(payload, sort_keys=True, indent=2, default=_plain) + "\n"


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError("cannot serialize {!r}".format(type(value)))


def _scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def validate_config(raw: Any, experiment: Optional[str] = None) -> Dict[str, Any]:
    """
    @cc 8
    @desc check a flat experiment config against the keys its experiment accepts
    @arg raw: the parsed yaml mapping
    @arg experiment: experiment named on the command line, must agree with the config
    @ret a copy of the config with the experiment key set
    """
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping", key_path="config")
    config = dict(raw)
    named = config.get("experiment", experiment)
    if experiment is not None and named != experiment:
        raise ConfigError(
            "config is for {!r}, not {!r}".format(named, experiment), key_path="config.experiment"
        )
    if named not in EXPERIMENT_KEYS:
        raise ConfigError(
            "unknown experiment {!r}, expected one of {}".format(named, list(EXPERIMENTS)),
            key_path="config.experiment",
        )
    config["experiment"] = named
    allowed = EXPERIMENT_KEYS[named]
    for key in sorted(config, key=str):
        path = "config.{}".format(key)
        if key not in allowed:
            raise ConfigError("unknown key {!r} for {}".format(key, named), key_path=path)
        value = config[key]
        if isinstance(value, dict):
            raise ConfigError("nested mappings are not allowed", key_path=path)
        if isinstance(value, list):
            for index, item in enumerate(value):
                if not _scalar(item):
                    raise ConfigError(
                        "arrays hold scalars only", key_path="{}[{}]".format(path, index)
                    )
        elif not _scalar(value):
            raise ConfigError("unsupported value {!r}".format(value), key_path=path)
    return config


def load_config(path: str, experiment: Optional[str] = None) -> Dict[str, Any]:
    """
    @cc 2
    @desc read and validate a yaml experiment config
    @arg path: the config file
    @arg experiment: the experiment it must describe, if known
    @ret the validated config
    """
    with open(path) as handle:
        try:
            raw = yaml.safe_load(handle)
        except yaml.YAMLError as error:
            raise ConfigError("{}: {}".format(path, error), key_path="config")
    return validate_config(raw, experiment)


def _listed(value: Any) -> List[Any]:
    return list(value) if isinstance(value, list) else [value]


def _resolution(config: Dict[str, Any]) -> Optional[Resolution]:
    value = config.get("resolution")
    if value is None:
        return None
    if isinstance(value, list):
        if len(value) != 2:
            raise ConfigError(
                "resolution is N or [N_colatitude, N_azimuth]", key_path="config.resolution"
            )
        return int(value[0]), int(value[1])
    return int(value)


def _space(config: Dict[str, Any]) -> WarpedSpace:
    try:
        fiber = FiberSpec.get(config["fiber"]) if "fiber" in config else None
        return WarpedSpace.model(
            str(config.get("model", "euclidean")),
            n=int(config.get("n", 2)),
            fiber=fiber,
            working_radius=config.get("working_radius"),
        )
    except ValueError as error:
        raise ConfigError(str(error), key_path="config.model")


def _model_name(space: WarpedSpace) -> str:
    return space.profile.space_form or space.profile.label


def _shapes(config: Dict[str, Any], space: WarpedSpace) -> List[GraphFunction]:
    """
    @cc 4
    @desc the configured shapes; seeded random shapes expand to count consecutive seeds
    """
    notation = str(config.get("graph", "slice(1)"))
    count = int(config.get("count", 1))
    try:
        name, args, kwargs = parse_notation(notation)
        if name in ("random", "random-revolution"):
            base = int(kwargs.pop("seed", args[0] if args else config.get("seed", 0)))
            if name == "random":
                kwargs.setdefault("dimension", space.m)
            return [SHAPE_CATALOG[name](seed=base + i, **kwargs) for i in range(count)]
        return [GraphFunction.get(notation)]
    except (ValueError, TypeError, KeyError) as error:
        raise ConfigError(str(error), key_path="config.graph")


def _graphs(config: Dict[str, Any], space: WarpedSpace) -> List[StarGraph]:
    allow = bool(config.get("allow_origin", False))
    if "graph_file" in config:
        return [import_graph(str(config["graph_file"]), allow)]
    resolution = _resolution(config)
    return [
        build_star_graph(space, shape, resolution=resolution, allow_origin=allow)
        for shape in _shapes(config, space)
    ]


def _tolerance(config: Dict[str, Any], default: float) -> float:
    return float(config.get("tolerance", default))


def _samples(config: Dict[str, Any]) -> int:
    return int(config.get("samples", DEFAULT_CONVEXITY_SAMPLES))


Outcome = Tuple[List[Any], List[Dict[str, Any]], Dict[str, Series]]


def _collect(records: Sequence[Any]) -> Outcome:
    rows: List[Dict[str, Any]] = []
    for record in records:
        rows.extend(record.rows() if hasattr(record, "rows") else [record.row()])
    return list(records), rows, {}


def run_classify(config: Dict[str, Any]) -> Outcome:
    """
    @cc 3
    @desc classify the configured model and sample its profile for plotting
    """
    space = _space(config)
    K = config.get("K")
    report = space.classify_regime(None if K is None else float(K), _samples(config))
    expect = config.get("expect")
    if expect is None:
        verdict = Verdicts.NOT_APPLICABLE.name
    else:
        verdict = Verdicts.PASS.name if report.regime.name == expect else Verdicts.FAIL.name
    row = {
        "experiment": "classify",
        "model": space.label,
        "shape": "-",
        "weight": report.regime.name,
        "lhs": report.margin_min,
        "rhs": report.margin_max,
        "margin": report.margin_min,
        "verdict": verdict,
    }
    radii = space.sample_radii(256)
    s, ds, d2s = space.profile.evaluate(radii)
    series = {
        "profile": {
            "label": space.label,
            "r": radii.tolist(),
            "s": np.asarray(s * np.ones_like(radii)).tolist(),
            "margin": np.asarray(ds * ds - s * d2s).tolist(),
            "K": report.K,
        }
    }
    return [report], [row], series


def run_verify_iso(config: Dict[str, Any]) -> Outcome:
    """
    @cc 4
    @desc weighted isoperimetric verification of every configured graph
    """
    space = _space(config)
    try:
        a = RadialWeight.get(str(config.get("weight", "1")))
        c = RadialWeight.get(str(config["volume_weight"])) if "volume_weight" in config else None
    except (ValueError, KeyError) as error:
        raise ConfigError(str(error), key_path="config.weight")
    weights = WeightPair(a, c, origin=space.domain_start)
    expected = config.get("expected_margin")
    records = []
    for graph in _graphs(config, space):
        record = verify_weighted_iso(
            space, graph, weights, _samples(config), _tolerance(config, 1e-9)
        )
        if expected is not None:
            close = abs(record.margin - float(expected)) <= 1e-8 * (1.0 + abs(float(expected)))
            if not close:
                record.notes.append("margin differs from the expected {:.12g}".format(expected))
                record.verdict = Verdicts.FAIL.name
        records.append(record)
    return _collect(records)


def run_catalog(config: Dict[str, Any]) -> Outcome:
    """
    @cc 2
    @desc every catalog weight of a space form on every configured graph
    """
    space = _space(config)
    records = []
    for graph in _graphs(config, space):
        for k in _listed(config.get("k", 1)):
            records.extend(space_form_catalog(_model_name(space), graph, int(k), _samples(config)))
    return _collect(records)


def run_hm_check(config: Dict[str, Any]) -> Outcome:
    """
    @cc 4
    @desc weighted Minkowski identities for every graph, test function and order
    """
    space = _space(config)
    records = []
    etas = []
    for eta in _listed(config.get("eta", 1.0)):
        if isinstance(eta, (int, float)) and not isinstance(eta, bool):
            etas.append((float(eta), "{:g}".format(eta)))
        else:
            etas.append((RadialWeight.get(str(eta)), str(eta)))
    tolerance = config.get("tolerance")
    for graph in _graphs(config, space):
        for k in _listed(config.get("k", 1)):
            for eta, label in etas:
                records.append(
                    hm_check(
                        graph,
                        eta,
                        int(k),
                        None if tolerance is None else float(tolerance),
                        label,
                    )
                )
    return _collect(records)


def run_chain(config: Dict[str, Any]) -> Outcome:
    """
    @cc 4
    @desc the mean curvature chain, with the closed form corollary on request
    """
    space = _space(config)
    k, l = int(config.get("k", 1)), int(config.get("l", 1))
    records: List[Any] = []
    staircases = []
    for graph in _graphs(config, space):
        report = chain_margins(graph, k, l, _samples(config), _tolerance(config, 1e-9))
        records.append(report)
        staircases.append({"label": graph.label, "steps": report.staircase()})
        if config.get("corollary"):
            records.append(corollary_run(_model_name(space), graph, k, l))
    records, rows, _ = _collect(records)
    return records, rows, {"staircase": {"chains": staircases, "k": k, "l": l}}


def run_stability(config: Dict[str, Any]) -> Outcome:
    """
    @cc 7
    @desc slice stability with the second variation probe, fiber radius sweep and flip
    """
    space = _space(config)
    if "r0" not in config:
        raise ConfigError("stability needs r0", key_path="config.r0")
    r0 = float(config["r0"])
    records: List[Any] = [slice_stability(space, r0)]
    if config.get("probe", True) and space.fiber.discretizable:
        amplitudes = [float(config["step"])] if "step" in config else None
        records.append(
            second_variation_probe(
                space, r0, int(config.get("mode", 1)), amplitudes, _resolution(config)
            )
        )
    records, rows, series = _collect(records)
    m = space.m
    radii = [float(x) for x in _listed(config.get("radii", []))]
    if radii:
        gaps = []
        for radius in radii:
            swept = WarpedSpace.model(space.profile, fiber=FiberSpec.sphere(m, radius))
            verdict = slice_stability(swept, r0)
            gaps.append(verdict.lambda1 - verdict.curvature_term)
            records.append(verdict)
            rows.append(verdict.row())
        series["sweep"] = {"name": "R", "x": radii, "y": gaps, "label": "lambda1 - m(s'^2 - s s'')"}
    if config.get("flip"):
        bracket = (min(radii), max(radii)) if len(radii) > 1 else (0.25, 4.0)
        radius = stability_flip_radius(space.profile, r0, m, bracket)
        expect = config.get("expect_flip")
        if expect is None:
            verdict_name = Verdicts.NOT_APPLICABLE.name
        elif abs(radius - float(expect)) <= 1e-6:
            verdict_name = Verdicts.PASS.name
        else:
            verdict_name = Verdicts.FAIL.name
        records.append({"flip_radius": radius, "bracket": list(bracket)})
        rows.append(
            {
                "experiment": "stability",
                "model": space.label,
                "shape": "slice({:g})".format(r0),
                "weight": "flip radius",
                "lhs": radius,
                "rhs": None if expect is None else float(expect),
                "margin": None if expect is None else radius - float(expect),
                "verdict": verdict_name,
            }
        )
    return records, rows, series


def run_small_ball(config: Dict[str, Any]) -> Outcome:
    """
    @cc 5
    @desc small-ball threshold for s(0) = 0, the slice comparison for s(start) > 0
    """
    space = _space(config)
    start = space.domain_start
    if float(space.profile.raw(np.float64(start))[0]) > 0:
        radii = _listed(config.get("radii", [start + 0.5, start + 0.1, start + 0.01]))
        return _collect([surjectivity_counterexample(space, float(r)) for r in radii])
    report = small_ball_threshold(space, float(config.get("radius", 1e-3)))
    records, rows, series = _collect([report])
    expect = config.get("expect_violated")
    if expect is not None:
        rows[0]["verdict"] = (
            Verdicts.PASS.name if report.violated == bool(expect) else Verdicts.FAIL.name
        )
    return records, rows, series


def run_power_annulus(config: Dict[str, Any]) -> Outcome:
    """
    @cc 2
    @desc the power law annulus for every configured inner radius
    """
    m = int(config.get("m", 1))
    inner = [float(x) for x in _listed(config.get("R1", [1.0, 10.0, 100.0]))]
    records, rows, _ = _collect([power_counterexample(m, R1) for R1 in inner])
    series = {
        "parameter": {
            "name": "R1",
            "x": inner,
            "y": [r.area_ratio for r in records],
            "reference": [r.slice_area_ratio for r in records],
            "label": "|boundary| / |N|",
        }
    }
    return records, rows, series


def run_eigen_lambda(config: Dict[str, Any]) -> Outcome:
    """
    @cc 2
    @desc Newton tensor eigenvalue bounds for every graph and order
    """
    space = _space(config)
    records = []
    for graph in _graphs(config, space):
        for k in _listed(config.get("k", 0)):
            records.append(lambda1_bound_check(graph, int(k)))
    return _collect(records)


def run_eigen_steklov(config: Dict[str, Any]) -> Outcome:
    """
    @cc 1
    @desc Steklov bounds for every configured domain
    """
    modes = int(config.get("modes", 32))
    domains = _listed(config.get("domain", ["ball(rho=1, n=2)"]))
    return _collect([steklov_bound_check(str(domain), modes) for domain in domains])


RUNNERS: Dict[str, Callable[[Dict[str, Any]], Outcome]] = {
    "classify": run_classify,
    "verify-iso": run_verify_iso,
    "catalog": run_catalog,
    "hm-check": run_hm_check,
    "chain": run_chain,
    "stability": run_stability,
    "small-ball": run_small_ball,
    "power-annulus": run_power_annulus,
    "eigen-lambda": run_eigen_lambda,
    "eigen-steklov": run_eigen_steklov,
}


def output_root() -> str:
    """
    @cc 1
    @desc default output root, from WARPISO_OUTPUT_ROOT when set
    @ret the directory path
    """
    return os.environ.get(OUTPUT_ROOT_VARIABLE, DEFAULT_OUTPUT_ROOT)


def _to_dict(record: Any) -> Dict[str, Any]:
    return record.to_dict() if hasattr(record, "to_dict") else dict(record)


class RunLogFilter(logging.Filter):
    """
    @desc keep the records emitted by the thread that started a run
    """

    def __init__(self) -> None:
        """
        @cc 1
        @desc filter constructor, bound to the calling thread
        """
        super().__init__()
        self.thread = threading.get_ident()

    def filter(self, record: logging.LogRecord) -> bool:
        """
        @cc 1
        @desc accept records of the bound thread only
        @arg record: the log record
        @ret true to emit the record
        """
        return record.thread == self.thread


_LEVEL_LOCK = threading.Lock()
_ACTIVE_RUNS = [0, logging.NOTSET]


def _open_run_log(handler: logging.Handler) -> None:
    package_logger = logging.getLogger("warpiso")
    with _LEVEL_LOCK:
        if _ACTIVE_RUNS[0] == 0:
            _ACTIVE_RUNS[1] = package_logger.level
            package_logger.setLevel(min(package_logger.getEffectiveLevel(), logging.INFO))
        _ACTIVE_RUNS[0] += 1
        package_logger.addHandler(handler)


def _close_run_log(handler: logging.Handler) -> None:
    package_logger = logging.getLogger("warpiso")
    with _LEVEL_LOCK:
        package_logger.removeHandler(handler)
        _ACTIVE_RUNS[0] -= 1
        if _ACTIVE_RUNS[0] == 0:
            package_logger.setLevel(_ACTIVE_RUNS[1])
    handler.close()


def _write_csv(path: str, rows: List[Dict[str, Any]]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: row.get(key) for key in CSV_COLUMNS})


def run_experiment(
    config: Dict[str, Any],
    out: Optional[str] = None,
    resolution: Optional[int] = None,
    seed: Optional[int] = None,
    plots: bool = True,
) -> ReportBundle:
    """
    @cc 6
    @desc run one validated experiment and write report.json, report.csv, run.log and plots
    @arg config: the experiment config
    @arg out: the output directory, defaults to <output root>/<experiment>
    @arg resolution: overrides the configured resolution
    @arg seed: overrides the configured seed
    @arg plots: whether to emit svg plots
    @ret the report bundle
    """
    config = validate_config(config)
    if resolution is not None:
        config["resolution"] = int(resolution)
    if seed is not None:
        config["seed"] = int(seed)
    name = config["experiment"]
    directory = out or config.get("out") or os.path.join(output_root(), name)
    os.makedirs(directory, exist_ok=True)
    handler = logging.FileHandler(os.path.join(directory, "run.log"), mode="w")
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler.addFilter(RunLogFilter())
    _open_run_log(handler)
    started = time.perf_counter()
    try:
        from warpiso import __version__

        logger.info(
            "warpiso %s, numpy %s, scipy %s, python %s",
            __version__,
            np.__version__,
            scipy.__version__,
            platform.python_version(),
        )
        logger.info(
            "experiment %s: resolution %s, tolerance %s",
            name,
            config.get("resolution", "default"),
            config.get("tolerance", "default"),
        )
        records, rows, series = RUNNERS[name](config)
        bundle = ReportBundle(
            experiment=name,
            config=config,
            records=[_to_dict(r) for r in records],
            rows=rows,
            series=series,
            directory=directory,
        )
        with open(os.path.join(directory, "report.json"), "w") as handle:
            handle.write(bundle.to_json())
        _write_csv(os.path.join(directory, "report.csv"), rows)
        if plots:
            from warpiso.plots import emit_plots

            emit_plots(bundle, directory)
        logger.info("%s: %s", name, bundle.summary)
        logger.info("wall time %.3fs", time.perf_counter() - started)
        return bundle
    finally:
        _close_run_log(handler)


def run_suite(directory: str, out: Optional[str] = None, plots: bool = True) -> List[ReportBundle]:
    """
    @cc 3
    @desc run every *.yaml config of a directory into per-config output directories
    @arg directory: the config directory
    @arg out: the output root, defaults to the environment setting
    @arg plots: whether to emit svg plots
    @ret the bundles in file name order
    """
    root = out or output_root()
    bundles = []
    names = sorted(x for x in os.listdir(directory) if x.endswith((".yaml", ".yml")))
    if not names:
        logger.warning("no configs found in %s", directory)
    for filename in names:
        config = load_config(os.path.join(directory, filename))
        stem = os.path.splitext(filename)[0]
        bundles.append(run_experiment(config, os.path.join(root, stem), plots=plots))
    return bundles


__all__ = [
    "EXPERIMENTS",
    "ReportBundle",
    "RunLogFilter",
    "load_config",
    "output_root",
    "run_experiment",
    "run_suite",
    "validate_config",
]
