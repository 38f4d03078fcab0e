#!/usr/bin/env python3
"""Render an uncertainty trace CSV (from the window-ablation run) as an SVG.

Two stacked panels: the per-row uncertainty series (normalized and
conflict-preserving, for the ensemble tier and, when present, the fused
system tier) on a log scale, and a strip showing truth labels and raised
anomaly flags. Standard library only.

Usage: plot_uncertainty.py TRACE_CSV [-o OUT_SVG]
"""
from __future__ import annotations

import argparse
import csv
import math
import sys

WIDTH, HEIGHT = 1000, 520
MARGIN_L, MARGIN_R, MARGIN_T = 60, 20, 20
PANEL_H, STRIP_H, GAP = 330, 90, 40
FLOOR = 1e-6  # log-scale floor for zero/denormal uncertainties

SERIES = [
    ("u_d_ec", "#1f77b4", "ensemble u_d"),
    ("u_y_ec", "#9edae5", "ensemble u_y"),
    ("u_d_sys", "#d62728", "system u_d"),
    ("u_y_sys", "#ff9896", "system u_y"),
]


def read_trace(path):
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        raise SystemExit(f"{path}: no data rows")
    return rows


def polyline(points, color, label=None):
    joined = " ".join(f"{x:.1f},{y:.1f}" for x, y in points)
    return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{joined}"/>'


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("trace", help="uncertainty_trace.csv from a stream run")
    parser.add_argument("-o", "--out", default="uncertainty_trace.svg")
    args = parser.parse_args()

    rows = read_trace(args.trace)
    n = len(rows)
    have_sys = any(float(r["u_d_sys"]) > 0 or float(r["u_y_sys"]) > 0 for r in rows)
    series = [s for s in SERIES if have_sys or not s[0].endswith("_sys")]

    def x_of(i):
        return MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) * i / max(n - 1, 1)

    lo, hi = math.log10(FLOOR), 0.0

    def y_of(value):
        v = max(float(value), FLOOR)
        frac = (math.log10(v) - lo) / (hi - lo)
        return MARGIN_T + PANEL_H * (1.0 - frac)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L}" y="14">uncertainty per observation (log scale)</text>',
    ]

    # Gridlines per decade.
    decade = 0
    while decade >= lo:
        y = y_of(10**decade)
        parts.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
            'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(f'<text x="6" y="{y + 4:.1f}" fill="#666666">1e{decade}</text>')
        decade -= 1

    for key, color, _ in series:
        points = [(x_of(i), y_of(row[key])) for i, row in enumerate(rows)]
        parts.append(polyline(points, color))

    # Legend.
    lx = MARGIN_L + 10
    for key, color, label in series:
        parts.append(
            f'<rect x="{lx}" y="{MARGIN_T + 6}" width="12" height="4" fill="{color}"/>'
        )
        parts.append(f'<text x="{lx + 16}" y="{MARGIN_T + 12}">{label}</text>')
        lx += 16 + 8 * len(label) + 20

    # Bottom strip: truth-label bands and flag ticks.
    strip_top = MARGIN_T + PANEL_H + GAP
    labels = [row["truth"] for row in rows]
    palette = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69"]
    label_color = {}
    start = 0
    for i in range(1, n + 1):
        if i == n or labels[i] != labels[start]:
            label = labels[start]
            color = label_color.setdefault(label, palette[len(label_color) % len(palette)])
            x0, x1 = x_of(start), x_of(i - 1)
            parts.append(
                f'<rect x="{x0:.1f}" y="{strip_top}" width="{max(x1 - x0, 1):.1f}" '
                f'height="{STRIP_H // 2}" fill="{color}"/>'
            )
            if x1 - x0 > 30:
                parts.append(
                    f'<text x="{(x0 + x1) / 2:.1f}" y="{strip_top + STRIP_H // 4 + 4}" '
                    f'text-anchor="middle">{label}</text>'
                )
            start = i
    flag_y = strip_top + STRIP_H // 2 + 4
    for i, row in enumerate(rows):
        if row["flagged"] != "0":
            x = x_of(i)
            parts.append(
                f'<line x1="{x:.1f}" y1="{flag_y}" x2="{x:.1f}" y2="{flag_y + 24}" '
                'stroke="#d62728" stroke-width="1"/>'
            )
    parts.append(
        f'<text x="{MARGIN_L}" y="{strip_top + STRIP_H + 18}">'
        "top band: truth label; red ticks: anomaly flags</text>"
    )
    parts.append("</svg>")

    with open(args.out, "w") as handle:
        handle.write("\n".join(parts) + "\n")
    print(f"wrote {args.out} ({n} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
