"""Render images from the tables the eabpsk command line tool emits.

The renderer consumes only the documented CSV contracts: a block of
`# key=value` meta lines, one header row, then data rows. It never
modifies its input and writes one image per invocation; rerunning with
the same inputs reproduces the same image bytes.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
# pin the svg id salt so rerenders are byte-identical
matplotlib.rcParams["svg.hashsalt"] = "eabpsk"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class SchemaError(ValueError):
    """Input table does not match the column contract for the figure kind."""


# required columns, series-label columns, and x/y value columns per kind
FIGURE_KINDS = {
    "pe_vs_m": {
        "required": ("M", "receiver", "model", "p0", "pe"),
        "series": ("receiver", "model", "p0"),
        "x": "M", "y": "pe",
        "xlabel": "mode count M", "ylabel": "error probability",
    },
    "threshold_vs_m": {
        "required": ("M", "port", "p0", "threshold"),
        "series": ("port", "p0"),
        "x": "M", "y": "threshold",
        "xlabel": "mode count M", "ylabel": "decision threshold (photon number)",
    },
    "pe_surface": {
        "required": ("p0", "n_th", "pe"),
        "xlabel": "decision threshold (photon number)",
        "ylabel": "prior of the zero-phase symbol",
    },
    "capacity": {
        "required": ("ns", "receiver", "model", "capacity",
                     "holevo", "homodyne", "ultimate"),
        "series": ("receiver", "model"),
        "x": "ns", "y": "capacity",
        "xlabel": "signal mean photon number per mode",
        "ylabel": "capacity (bits per channel use)",
    },
    "info_rate": {
        "required": ("M", "receiver", "p0", "rate", "rate_over_holevo"),
        "series": ("receiver", "p0"),
        "x": "M", "y": "rate_over_holevo",
        "xlabel": "mode count M",
        "ylabel": "rate / unassisted capacity",
    },
    "gauss_vs_nb": {
        "required": ("ns", "M", "c_gauss", "c_nb", "delta"),
        "xlabel": "signal mean photon number per mode",
        "ylabel": "capacity (bits per channel use)",
    },
}


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    figure_kind: str
    output_image: str
    log_x: bool = False
    log_y: bool = False


def read_table(path: str) -> tuple[dict, list[str], list[dict]]:
    """Parse a CSV table into (meta, header, rows); rows keep strings."""
    meta: dict = {}
    header: list[str] | None = None
    rows: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(dict(zip(header, line.split(","))))
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    return meta, header, rows


def check_columns(kind: str, header: list[str]) -> None:
    missing = [c for c in FIGURE_KINDS[kind]["required"] if c not in header]
    if missing:
        raise SchemaError(
            f"input does not match the {kind} contract: "
            f"missing columns: {', '.join(missing)}"
        )


def group_series(rows: list[dict], keys: tuple[str, ...]) -> dict[tuple, list[dict]]:
    out: dict[tuple, list[dict]] = {}
    for r in rows:
        out.setdefault(tuple(r[k] for k in keys), []).append(r)
    return out


def _series_label(keys: tuple[str, ...], values: tuple) -> str:
    return " ".join(f"{k}={v}" for k, v in zip(keys, values))


def _plot_lines(ax, rows, kind_info):
    keys = kind_info["series"]
    xcol, ycol = kind_info["x"], kind_info["y"]
    grouped = group_series(rows, keys)
    for values in sorted(grouped):
        pts = sorted((float(r[xcol]), float(r[ycol])) for r in grouped[values])
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker="o", markersize=3, label=_series_label(keys, values))
    ax.legend(fontsize=8)


def _plot_capacity(ax, rows, kind_info):
    _plot_lines(ax, rows, kind_info)
    refs = {}
    for r in rows:
        refs[float(r["ns"])] = (float(r["holevo"]), float(r["homodyne"]),
                                float(r["ultimate"]))
    ns = sorted(refs)
    for idx, name in enumerate(("holevo", "homodyne", "ultimate")):
        ax.plot(ns, [refs[v][idx] for v in ns], linestyle="--", label=name)
    ax.legend(fontsize=8)


def _plot_gauss_vs_nb(ax, rows):
    pts = sorted((float(r["ns"]), float(r["c_gauss"]), float(r["c_nb"]),
                  float(r["delta"])) for r in rows)
    ns = [p[0] for p in pts]
    ax.plot(ns, [p[1] for p in pts], marker="o", markersize=3, label="gaussian model")
    ax.plot(ns, [p[2] for p in pts], marker="s", markersize=3, label="counting model")
    ax.plot(ns, [p[3] for p in pts], linestyle="--", label="difference")
    ax.legend(fontsize=8)


def _plot_surface(fig, ax, rows):
    p0s = sorted({float(r["p0"]) for r in rows})
    ths = sorted({float(r["n_th"]) for r in rows})
    lookup = {(float(r["p0"]), float(r["n_th"])): float(r["pe"]) for r in rows}
    try:
        grid = [[lookup[(p0, t)] for t in ths] for p0 in p0s]
    except KeyError as exc:
        raise SchemaError(f"pe_surface grid is not rectangular near {exc}") from None
    mesh = ax.pcolormesh(ths, p0s, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="error probability")


def render(spec: FigureSpec) -> None:
    """Render one figure; raises SchemaError on contract violations."""
    if spec.figure_kind not in FIGURE_KINDS:
        raise SchemaError(f"unknown figure kind {spec.figure_kind!r}")
    kind_info = FIGURE_KINDS[spec.figure_kind]
    meta, header, rows = read_table(spec.input_csv)
    check_columns(spec.figure_kind, header)
    if not rows:
        raise SchemaError(f"{spec.input_csv}: table has no data rows")

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    try:
        if spec.figure_kind == "pe_surface":
            _plot_surface(fig, ax, rows)
        elif spec.figure_kind == "capacity":
            _plot_capacity(ax, rows, kind_info)
        elif spec.figure_kind == "gauss_vs_nb":
            _plot_gauss_vs_nb(ax, rows)
        else:
            _plot_lines(ax, rows, kind_info)
        if spec.log_x:
            ax.set_xscale("log")
        if spec.log_y:
            ax.set_yscale("log")
        ax.set_xlabel(kind_info["xlabel"])
        ax.set_ylabel(kind_info["ylabel"])
        title = meta.get("experiment", spec.figure_kind)
        ax.set_title(title)
        fig.tight_layout()
        # strip volatile metadata so rerenders are byte-identical
        if spec.output_image.endswith(".svg"):
            fig.savefig(spec.output_image, metadata={"Date": None})
        else:
            fig.savefig(spec.output_image)
    finally:
        plt.close(fig)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="eabpsk-render",
        description="Render a figure from an eabpsk CSV table.",
    )
    ap.add_argument("--input", required=True, help="CSV file produced by the eabpsk tool")
    ap.add_argument("--kind", required=True, choices=sorted(FIGURE_KINDS))
    ap.add_argument("--out", required=True, help="output image path (.png or .svg)")
    ap.add_argument("--log-x", action="store_true", dest="log_x")
    ap.add_argument("--log-y", action="store_true", dest="log_y")
    o = ap.parse_args(argv)
    spec = FigureSpec(input_csv=o.input, figure_kind=o.kind,
                      output_image=o.out, log_x=o.log_x, log_y=o.log_y)
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
