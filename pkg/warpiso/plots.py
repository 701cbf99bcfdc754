"""
@author jacobi petrucciani
@desc svg plots of report bundles
"""
import logging
import os
from typing import TYPE_CHECKING, Any, Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

if TYPE_CHECKING:  # pragma: no cover
    from warpiso.runner import ReportBundle


logger = logging.getLogger(__name__)

# fixed svg ids, no date metadata
matplotlib.rcParams["svg.hashsalt"] = "warpiso"
SVG_METADATA = {"Date": None}


def _save(fig: Any, path: str) -> str:
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.debug("wrote %s", path)
    return path


def plot_profile(series: Dict[str, Any], path: str) -> str:
    """
    @cc 2
    @desc s(r) with the convexity margin s'^2 - s s'' shaded against 0 and K
    @arg series: the profile series of a classify bundle
    @arg path: the svg file
    @ret the written path
    """
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
    r, margin = series["r"], series["margin"]
    top.plot(r, series["s"], color="tab:blue")
    top.set_ylabel("s(r)")
    top.set_title(series.get("label", "profile"))
    bottom.plot(r, margin, color="tab:red")
    bottom.axhline(0.0, color="black", linewidth=0.8)
    K = series.get("K")
    upper = K if K is not None else max(max(margin), 0.0)
    bottom.fill_between(r, 0.0, upper, color="tab:green", alpha=0.15)
    bottom.set_ylabel("s'^2 - s s''")
    bottom.set_xlabel("r")
    return _save(fig, path)


def plot_staircase(series: Dict[str, Any], path: str) -> str:
    """
    @cc 2
    @desc chain values base, E_0, ..., E_k as steps, one line per graph
    @arg series: the staircase series of a chain bundle
    @arg path: the svg file
    @ret the written path
    """
    fig, axis = plt.subplots(figsize=(6, 4))
    for chain in series["chains"]:
        labels = [label for label, _ in chain["steps"]]
        values = [value for _, value in chain["steps"]]
        axis.step(range(len(values)), values, where="mid", marker="o", label=chain["label"])
        axis.set_xticks(range(len(values)))
        axis.set_xticklabels(labels)
    axis.set_xlabel("j")
    axis.set_ylabel("chain value")
    axis.set_title("k={}, l={}".format(series["k"], series["l"]))
    if len(series["chains"]) <= 8:
        axis.legend(fontsize="small")
    return _save(fig, path)


def plot_sweep(series: Dict[str, Any], path: str) -> str:
    """
    @cc 2
    @desc a margin against a swept parameter, with the zero line and optional reference
    @arg series: x, y, name, label and an optional reference curve
    @arg path: the svg file
    @ret the written path
    """
    fig, axis = plt.subplots(figsize=(6, 4))
    axis.plot(series["x"], series["y"], marker="o", label=series.get("label", "margin"))
    if "reference" in series:
        axis.plot(series["x"], series["reference"], linestyle="--", label="slice")
    axis.axhline(0.0, color="black", linewidth=0.8)
    if min(series["x"]) > 0 and max(series["x"]) / min(series["x"]) > 50:
        axis.set_xscale("log")
    axis.set_xlabel(series.get("name", "parameter"))
    axis.legend(fontsize="small")
    return _save(fig, path)


PLOTTERS = {
    "profile": plot_profile,
    "staircase": plot_staircase,
    "sweep": plot_sweep,
    "parameter": plot_sweep,
}


def emit_plots(bundle: "ReportBundle", directory: str) -> List[str]:
    """
    @cc 3
    @desc write one svg per plot series of the bundle
    @arg bundle: the report bundle
    @arg directory: output directory
    @ret the written paths, empty for a bundle without series
    """
    if not bundle.series:
        if bundle.records:
            logger.debug("%s bundle has no plot series", bundle.experiment)
        else:
            logger.warning("%s bundle is empty, nothing to plot", bundle.experiment)
        return []
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name in sorted(bundle.series):
        plotter = PLOTTERS.get(name)
        if plotter is None:
            logger.warning("no plot for series %s", name)
            continue
        paths.append(plotter(bundle.series[name], os.path.join(directory, name + ".svg")))
    return paths


__all__ = ["emit_plots", "plot_profile", "plot_staircase", "plot_sweep"]
