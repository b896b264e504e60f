"""Render the nz CLI's figure CSVs to publication-style PNGs.

Three figure kinds are understood, keyed by the CSV schema the primary
tool emits:

1. enclosed-charge curve (log radial axis) with a proton-scale inset
   showing the cubic rise;
2. magnetic field map on the y = 0 plane: unit direction arrows colored
   by field magnitude (decades apart), axes in Compton-wavelength units;
3. noble-gas sweep: one marker per element plus a dashed through-origin
   quadratic fit c Z^2 (re-fitted here by least squares on the points).

Rendering is deterministic for a given CSV and style: fixed canvas,
fixed dpi, Agg backend, no timestamps in the output.

Usage:
    nz-figures --id 1 --csv fig1.csv --out fig1.png
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


class SchemaError(ValueError):
    """The CSV header does not match the expected figure schema."""


_SCHEMAS = {
    1: ["r_over_b", "enclosed_charge"],
    2: ["x_over_lbar", "z_over_lbar", "Hx", "Hz"],
    3: ["Z", "element", "nz_electric", "quadratic_fit"],
}


@dataclass(frozen=True)
class FigureJob:
    csv_path: str
    figure_id: int
    out_path: str
    dpi: int = 150
    log_main_axis: bool = True  # figure 1 main panel
    arrow_stride: int = 1       # figure 2 vector density (1 = every grid point)

    def __post_init__(self):
        if self.figure_id not in _SCHEMAS:
            raise ValueError(f"unknown figure id {self.figure_id}")


def _check_header(header: list[str], figure_id: int, path: str) -> None:
    expected = _SCHEMAS[figure_id]
    missing = [col for col in expected if col not in header]
    if missing:
        raise SchemaError(
            f"{path}: missing column '{missing[0]}' for figure {figure_id} "
            f"(expected header {','.join(expected)}, got {','.join(header)})")


def _read_rows(path: str, figure_id: int):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        _check_header(header, figure_id, path)
        return list(reader)


def _render_fig1(job: FigureJob) -> dict:
    rows = _read_rows(job.csv_path, 1)
    main = np.array([[float(r[0]), float(r[1])] for r in rows if r[0] != "inset"])
    inset = np.array([[float(r[1]), float(r[2])] for r in rows if r[0] == "inset"])
    if len(main) == 0 or len(inset) == 0:
        raise SchemaError(f"{job.csv_path}: expected both main and inset rows")

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(main[:, 0], main[:, 1], color="tab:blue", lw=1.6)
    if job.log_main_axis:
        ax.set_xscale("log")
    ax.set_xlabel("r / b")
    ax.set_ylabel("enclosed charge  4πr²|D|")
    ax.set_ylim(0.0, 1.05)
    ax.grid(alpha=0.3)

    box = ax.inset_axes([0.52, 0.45, 0.43, 0.48])
    box.plot(inset[:, 0], inset[:, 1], color="tab:red", lw=1.4)
    box.set_xlim(0.0, 3.0)
    box.set_xlabel("r / a", fontsize=8)
    box.tick_params(labelsize=8)
    box.grid(alpha=0.3)

    fig.tight_layout()
    fig.savefig(job.out_path, dpi=job.dpi)
    plt.close(fig)
    return {"main_points": len(main), "inset_points": len(inset),
            "inset_x_range": (float(inset[0, 0]), float(inset[-1, 0]))}


def _render_fig2(job: FigureJob) -> dict:
    rows = _read_rows(job.csv_path, 2)
    data = np.array([[float(v) for v in r] for r in rows])
    x, z, hx, hz = data.T
    stride = max(1, job.arrow_stride)
    n = int(round(np.sqrt(len(data))))
    keep = np.zeros(len(data), dtype=bool)
    idx = np.arange(len(data))
    keep[(idx // n % stride == 0) & (idx % n % stride == 0)] = True

    mag = np.hypot(hx, hz)
    floor = mag[mag > 0].min() if np.any(mag > 0) else 1.0
    ux = np.where(mag > 0, hx / np.maximum(mag, floor * 1e-30), 0.0)
    uz = np.where(mag > 0, hz / np.maximum(mag, floor * 1e-30), 0.0)

    fig, ax = plt.subplots(figsize=(5.6, 5.6))
    q = ax.quiver(x[keep], z[keep], ux[keep], uz[keep],
                  np.log10(np.maximum(mag[keep], floor)),
                  cmap="viridis", pivot="mid", scale=40.0, width=0.003)
    fig.colorbar(q, ax=ax, label="log10 |H|  (1/m²)")
    ax.set_xlabel("x / λ")
    ax.set_ylabel("z / λ")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(job.out_path, dpi=job.dpi)
    plt.close(fig)
    return {"grid_points": len(data), "arrows": int(keep.sum())}


def _render_fig3(job: FigureJob) -> dict:
    rows = _read_rows(job.csv_path, 3)
    zs = np.array([float(r[0]) for r in rows])
    names = [r[1] for r in rows]
    vals = np.array([float(r[2]) for r in rows])
    # through-origin least squares on (Z^2, N)
    coeff = float(np.sum(zs**2 * vals) / np.sum(zs**4))

    fig, ax = plt.subplots(figsize=(5.8, 4.2))
    ax.plot(zs, vals, "o", color="tab:blue", ms=7, zorder=3)
    z_dense = np.linspace(0.0, zs.max() * 1.05, 200)
    ax.plot(z_dense, coeff * z_dense**2, "--", color="tab:gray", lw=1.4,
            label=f"{coeff:.4f} Z²")
    for z, name, v in zip(zs, names, vals):
        ax.annotate(name, (z, v), textcoords="offset points", xytext=(6, -4),
                    fontsize=9)
    ax.set_xlabel("Z")
    ax.set_ylabel("electric field-strength number")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(job.out_path, dpi=job.dpi)
    plt.close(fig)
    return {"markers": len(rows), "fit_coefficient": coeff}


_RENDERERS = {1: _render_fig1, 2: _render_fig2, 3: _render_fig3}


def render(job: FigureJob) -> dict:
    """Render one figure; returns a small summary of what was drawn."""
    return _RENDERERS[job.figure_id](job)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nz-figures",
        description="Render nz figure CSVs to PNG images.")
    parser.add_argument("--id", type=int, choices=[1, 2, 3], required=True)
    parser.add_argument("--csv", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--arrow-stride", type=int, default=1,
                        help="figure 2: draw every n-th grid arrow")
    parser.add_argument("--linear-main-axis", action="store_true",
                        help="figure 1: linear instead of log main axis")
    args = parser.parse_args(argv)
    job = FigureJob(csv_path=args.csv, figure_id=args.id, out_path=args.out,
                    dpi=args.dpi, arrow_stride=args.arrow_stride,
                    log_main_axis=not args.linear_main_axis)
    try:
        summary = render(job)
    except (SchemaError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    parts = ", ".join(f"{k}={v}" for k, v in sorted(summary.items()))
    sys.stdout.write(f"wrote {args.out} ({parts})\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
