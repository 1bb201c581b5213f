"""CSV and minimal static SVG writers for curves and category effects."""
from __future__ import annotations

import csv
import io
import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .catpd import CatEffect
from .numpd import PDCurve

CURVE_HEADER = ("x", "pd_y", "count")
EFFECT_HEADER = ("category_label", "delta", "count")


def _num(v: float) -> str:
    v = float(v)
    return "NaN" if math.isnan(v) else repr(v)


def curve_to_csv(curve: PDCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for x, y, c in zip(curve.x, curve.pd_y, curve.counts):
        w.writerow((_num(x), _num(y), int(c)))
    return buf.getvalue()


def effect_to_csv(effect: CatEffect, labels: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EFFECT_HEADER)
    for lab, d, c in zip(labels, effect.delta, effect.counts):
        w.writerow((lab, _num(d), int(c)))
    return buf.getvalue()


def read_curve_csv(text: str) -> PDCurve:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise ValueError(f"expected header {','.join(CURVE_HEADER)}")
    body = rows[1:]
    return PDCurve(np.array([float(r[0]) for r in body]), np.array([float(r[1]) for r in body]),
                   np.array([int(r[2]) for r in body], dtype=np.int64))


# --- SVG -------------------------------------------------------------------

W, H, PAD = 480, 320, 48


def _scale(lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def _axes(xlabel: str, ylabel: str, ylo: float, yhi: float) -> list[str]:
    return [
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD // 2}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD // 2}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<text x="{W // 2}" y="{H - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H // 2})">{escape(ylabel)}</text>',
        f'<text x="{PAD - 4}" y="{H - PAD}" text-anchor="end" font-size="10">{ylo:.4g}</text>',
        f'<text x="{PAD - 4}" y="{PAD // 2 + 8}" text-anchor="end" font-size="10">{yhi:.4g}</text>',
    ]


def _svg(parts: list[str]) -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">'
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *parts, "</svg>"]) + "\n"


def curve_to_svg(curve: PDCurve, xlabel: str = "x", ylabel: str = "partial dependence") -> str:
    ylo, yhi = float(np.min(curve.pd_y)), float(np.max(curve.pd_y))
    sx = _scale(float(curve.x[0]), float(curve.x[-1]), PAD, W - PAD // 2)
    sy = _scale(ylo, yhi, H - PAD, PAD // 2)
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(curve.x, curve.pd_y))
    parts = _axes(xlabel, ylabel, ylo, yhi)
    parts.append(f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>')
    parts.append(f'<text x="{PAD}" y="{H - PAD + 14}" font-size="10">{float(curve.x[0]):.4g}</text>')
    parts.append(f'<text x="{W - PAD // 2}" y="{H - PAD + 14}" text-anchor="end" '
                 f'font-size="10">{float(curve.x[-1]):.4g}</text>')
    return _svg(parts)


def effect_to_svg(effect: CatEffect, labels: Sequence[str], xlabel: str = "category",
                  ylabel: str = "delta") -> str:
    vals = np.where(np.isfinite(effect.delta), effect.delta, 0.0)
    ylo, yhi = min(0.0, float(vals.min())), max(0.0, float(vals.max()))
    sy = _scale(ylo, yhi, H - PAD, PAD // 2)
    k = max(len(labels), 1)
    slot = (W - PAD - PAD // 2) / k
    parts = _axes(xlabel, ylabel, ylo, yhi)
    zero = sy(0.0)
    for i, (lab, d) in enumerate(zip(labels, effect.delta)):
        x = PAD + i * slot + slot * 0.1
        if math.isfinite(d):
            top, bottom = min(sy(d), zero), max(sy(d), zero)
            parts.append(f'<rect x="{x:.2f}" y="{top:.2f}" width="{slot * 0.8:.2f}" '
                         f'height="{max(bottom - top, 0.5):.2f}" fill="steelblue"/>')
        if k <= 40:
            parts.append(f'<text x="{x + slot * 0.4:.2f}" y="{H - PAD + 14}" text-anchor="middle" '
                         f'font-size="10">{escape(str(lab))}</text>')
    return _svg(parts)
