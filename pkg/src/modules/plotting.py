"""
Deterministic SVG rendering of sweep results and channel realizations.

matplotlib's SVG backend is made byte-stable by fixing the id hash salt and
dropping the date metadata. Each data series is emitted as a group with id
`series-<i>`.
"""
import io
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402

from modules.channel import SparseChannel  # noqa: E402
from modules.errors import ResultFormatError  # noqa: E402
from modules.results_io import ResultRow  # noqa: E402

logger = logging.getLogger(__name__)

METRICS = {
    "recovery_prob": "Successful recovery probability",
    "avg_mse": "Average MSE",
}

ARM_STYLE = {
    "TraditionalShort": {"color": "#d62728", "marker": "s"},
    "Proposed": {"color": "#1f77b4", "marker": "o"},
    "BoundLong": {"color": "#2ca02c", "marker": "^"},
}
LINESTYLES = ("-", "--", ":", "-.")

SVG_RC = {
    "svg.hashsalt": "sparse-channel-sweep",
    "svg.fonttype": "none",
    "font.size": 10,
}

SeriesKey = Tuple[str, str, int, float]


def group_series(rows: List[ResultRow], metric: str) -> Dict[SeriesKey, Tuple[np.ndarray, np.ndarray]]:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose one of {', '.join(METRICS)}")
    points = defaultdict(list)
    for row in rows:
        key = (row.arm.value, row.dist.value, row.k, row.snr_db)
        points[key].append((row.me, getattr(row, metric)))

    series = {}
    for key in sorted(points):
        xs, ys = zip(*sorted(points[key]))
        series[key] = (np.array(xs, dtype=float), np.array(ys, dtype=float))
    return series


def _save_svg(fig, out_path: Union[str, Path]) -> None:
    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None})
    plt.close(fig)
    Path(out_path).write_text(buffer.getvalue(), encoding="utf-8")


def _series_label(key: SeriesKey, series_keys) -> str:
    arm, dist, k, snr_db = key
    parts = [arm]
    if len({s[1] for s in series_keys}) > 1:
        parts.append(dist)
    if len({s[2] for s in series_keys}) > 1:
        parts.append(f"K={k}")
    if len({s[3] for s in series_keys}) > 1:
        parts.append(f"{snr_db:g} dB")
    return ", ".join(parts)


def plot_results(rows: List[ResultRow], out_path: Union[str, Path], metric: str) -> int:
    """Draw one line per (arm, dist, k, snr) against M_e. Returns the series count."""
    if not rows:
        raise ResultFormatError("no data rows to plot", line_number=2)
    series = group_series(rows, metric)

    # linestyle distinguishes the non-arm coordinates of a series
    variants = sorted({key[1:] for key in series})
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        handles = []
        for index, (key, (xs, ys)) in enumerate(series.items()):
            style = ARM_STYLE.get(key[0], {"color": "black", "marker": "x"})
            linestyle = LINESTYLES[variants.index(key[1:]) % len(LINESTYLES)]
            ax.plot(xs, ys, linestyle=linestyle, gid=f"series-{index}", **style)
            label = _series_label(key, series)
            handles.append(Line2D([], [], linestyle=linestyle, label=label, **style))

        if metric == "avg_mse":
            ax.set_yscale("log", nonpositive="mask")
        else:
            ax.set_ylim(-0.02, 1.02)
        ax.set_xlabel("Extracted training length $M_e$")
        ax.set_ylabel(METRICS[metric])
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(handles=handles, loc="best")
        fig.tight_layout()
        _save_svg(fig, out_path)

    logger.info(f"Plotted {len(series)} series of {metric} to {out_path}")
    return len(series)


def plot_channel(h: SparseChannel, out_path: Union[str, Path]) -> None:
    """Stem plot of tap magnitudes against delay index."""
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 3.2))
        delays = np.arange(h.n)
        ax.stem(delays, np.abs(h.taps), basefmt=" ")
        ax.set_xlabel("Delay index n")
        ax.set_ylabel("|h_n|")
        ax.set_xlim(-1, h.n)
        ax.set_title(f"Sparse multipath channel, N={h.n}, K={h.k}")
        fig.tight_layout()
        _save_svg(fig, out_path)
    logger.info(f"Plotted channel realization to {out_path}")
