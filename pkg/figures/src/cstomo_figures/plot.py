"""Render fidelity/error curves with error bars from aggregate CSV files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


class PlotError(ValueError):
    """Invalid figure spec or unusable input data."""


@dataclass(frozen=True)
class SeriesInput:
    path: str
    label: str


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: one or more aggregate CSVs, an x column, a left-axis
    metric with its error column, an optional right-axis metric, and the
    output image path (format from the extension, png or svg)."""

    inputs: tuple[SeriesInput, ...]
    x_column: str
    output: str
    left_column: str = "fidelity_mean"
    left_err_column: str = "fidelity_std"
    left_label: str = "fidelity"
    right_column: str | None = "mse_mean"
    right_err_column: str | None = "mse_std"
    right_label: str = "MSE"
    title: str = ""

    def __post_init__(self):
        if not self.inputs:
            raise PlotError("figure spec needs at least one input series")
        suffix = Path(self.output).suffix.lower()
        if suffix not in (".png", ".svg"):
            raise PlotError(f"unsupported output format {suffix!r}; use .png or .svg")

    @classmethod
    def from_dict(cls, obj: dict) -> "FigureSpec":
        known = {
            "inputs", "x_column", "output", "left_column", "left_err_column",
            "left_label", "right_column", "right_err_column", "right_label", "title",
        }
        unknown = set(obj) - known
        if unknown:
            raise PlotError(f"unknown figure spec keys: {sorted(unknown)}")
        for key in ("inputs", "x_column", "output"):
            if key not in obj:
                raise PlotError(f"figure spec missing key {key!r}")
        inputs = []
        for entry in obj["inputs"]:
            extra = set(entry) - {"path", "label"}
            if extra:
                raise PlotError(f"unknown series keys: {sorted(extra)}")
            inputs.append(SeriesInput(path=entry["path"], label=entry.get("label", entry["path"])))
        kwargs = {k: v for k, v in obj.items() if k != "inputs"}
        return cls(inputs=tuple(inputs), **kwargs)

    @classmethod
    def from_json_file(cls, path) -> "FigureSpec":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise PlotError(f"malformed figure spec {path}: {exc}") from None
        return cls.from_dict(obj)


def _read_series(path: str, columns: list[str]) -> dict[str, list[float]]:
    """Read the named numeric columns, sorted by the first (x) column."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for col in columns:
                if col not in header:
                    raise PlotError(f"column {col!r} not found in {path} (has {header})")
            raw = list(reader)
    except FileNotFoundError:
        raise PlotError(f"input CSV not found: {path}") from None
    if not raw:
        raise PlotError(f"no data rows in {path}")
    rows = []
    for rec in raw:
        try:
            rows.append(tuple(float(rec[col]) for col in columns))
        except ValueError as exc:
            raise PlotError(f"non-numeric value in {path}: {exc}") from None
    rows.sort(key=lambda tup: tup[0])
    return {col: [row[i] for row in rows] for i, col in enumerate(columns)}


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure; returns (figure, left_axis, right_axis).

    right_axis is None when the spec has no right-hand metric.
    """
    fig, ax_left = plt.subplots(figsize=(6.4, 4.2), dpi=150)
    ax_right = ax_left.twinx() if spec.right_column else None

    columns = [spec.x_column, spec.left_column, spec.left_err_column]
    if spec.right_column:
        columns += [spec.right_column, spec.right_err_column]

    for k, series in enumerate(spec.inputs):
        data = _read_series(series.path, columns)
        color = f"C{2 * k}"
        ax_left.errorbar(
            data[spec.x_column],
            data[spec.left_column],
            yerr=data[spec.left_err_column],
            marker="o",
            markersize=3,
            capsize=2,
            color=color,
            label=f"{series.label} ({spec.left_label})",
        )
        if ax_right is not None:
            ax_right.errorbar(
                data[spec.x_column],
                data[spec.right_column],
                yerr=data[spec.right_err_column],
                marker="s",
                markersize=3,
                capsize=2,
                linestyle="--",
                color=f"C{2 * k + 1}",
                label=f"{series.label} ({spec.right_label})",
            )

    ax_left.set_xlabel(spec.x_column)
    ax_left.set_ylabel(spec.left_label)
    handles, labels = ax_left.get_legend_handles_labels()
    if ax_right is not None:
        ax_right.set_ylabel(spec.right_label)
        more_handles, more_labels = ax_right.get_legend_handles_labels()
        handles += more_handles
        labels += more_labels
    ax_left.legend(handles, labels, fontsize=8, loc="center right")
    if spec.title:
        ax_left.set_title(spec.title)
    fig.tight_layout()
    return fig, ax_left, ax_right


def render(spec: FigureSpec) -> Path:
    """Render the figure to spec.output deterministically and return the path."""
    plt.rcParams["svg.hashsalt"] = "cstomo-figures"
    fig, _, _ = build_figure(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    suffix = out.suffix.lower()
    if suffix == ".svg":
        metadata = {"Date": None}  # drop the timestamp for byte-stable output
    else:
        metadata = {"Software": "cstomo-figures"}
    fig.savefig(out, metadata=metadata)
    plt.close(fig)
    if out.stat().st_size == 0:
        raise PlotError(f"rendered an empty file at {out}")
    return out


# x-axis column and left metric per preset family; everything else uses the
# aggregate's m column and fidelity/MSE pair
_PRESET_X = {
    "fig3": "eta",
    "fig4": "sigma_or_lambda",
    "figE": "sigma_or_lambda",
    "figN": "N",
}

PRESET_PLOTS = (
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4", "fig5a", "fig5b",
    "fig6a", "fig6b", "figA", "figB", "figE", "figF", "figG", "figN", "figW",
)


def preset_spec(name: str, input_dir, output: str) -> FigureSpec:
    """FigureSpec for a named preset's aggregate.csv in input_dir."""
    if name not in PRESET_PLOTS:
        raise PlotError(f"unknown preset {name!r}; valid: {', '.join(PRESET_PLOTS)}")
    aggregate = str(Path(input_dir) / "aggregate.csv")
    kwargs = {}
    if name == "figE":
        kwargs = {
            "left_column": "rel_l2_mean",
            "left_err_column": "rel_l2_std",
            "left_label": "relative l2 error",
        }
    return FigureSpec(
        inputs=(SeriesInput(path=aggregate, label=name),),
        x_column=_PRESET_X.get(name, "m"),
        output=output,
        title=name,
        **kwargs,
    )
