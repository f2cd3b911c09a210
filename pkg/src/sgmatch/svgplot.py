"""Minimal SVG renderer for accuracy-vs-seeds curves.

Convenience only: the CSV is the contract, this just draws it. One series
per (method, rho) with +/- 2 standard-error bars.
"""

from __future__ import annotations

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 60, 160, 30, 50


def accuracy_plot_svg(results) -> str:
    """Render cell results (any iterable of CellResult) as an SVG string."""
    series: dict[tuple[str, float], list] = {}
    for r in results:
        series.setdefault((r.method, r.rho), []).append(r)
    for pts in series.values():
        pts.sort(key=lambda r: r.s)

    smax = max((r.s for r in results), default=1) or 1
    x0, x1 = _ML, _W - _MR
    y0, y1 = _H - _MB, _MT

    def sx(s):
        return x0 + (x1 - x0) * s / smax

    def sy(a):
        return y0 + (y1 - y0) * a

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        'font-size="13">seeds</text>',
        f'<text x="16" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2:.1f})">mean nonseed accuracy</text>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(frac)
        parts.append(f'<line x1="{x0 - 4}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{frac:g}</text>'
        )
    for s in sorted({r.s for r in results}):
        x = sx(s)
        parts.append(f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" y2="{y0 + 4}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.1f}" y="{y0 + 16}" text-anchor="middle" font-size="11">{s}</text>'
        )

    for k, (key, pts) in enumerate(sorted(series.items())):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{sx(r.s):.1f},{sy(r.mean_accuracy):.1f}" for r in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for r in pts:
            x, lo, hi = sx(r.s), sy(r.mean_accuracy - 2 * r.stderr), sy(r.mean_accuracy + 2 * r.stderr)
            parts.append(f'<line x1="{x:.1f}" y1="{lo:.1f}" x2="{x:.1f}" y2="{hi:.1f}" stroke="{color}"/>')
            parts.append(
                f'<circle cx="{x:.1f}" cy="{sy(r.mean_accuracy):.1f}" r="2.5" fill="{color}"/>'
            )
        ly = _MT + 16 * k
        parts.append(f'<line x1="{x1 + 10}" y1="{ly}" x2="{x1 + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(
            f'<text x="{x1 + 36}" y="{ly + 4}" font-size="11">{key[0]} rho={key[1]:g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap_svg(freq) -> str:
    """Render a MatchFrequencyMap as a simple red-intensity grid."""
    n = freq.n
    cell = max(2, min(12, 560 // n))
    w = h = n * cell + 80
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    peak = max(1, int(freq.counts.max()))
    for i in range(n):
        for j in range(n):
            c = int(freq.counts[i, j])
            if not c:
                continue
            shade = 255 - int(195 * c / peak)
            parts.append(
                f'<rect x="{40 + j * cell}" y="{40 + i * cell}" width="{cell}" '
                f'height="{cell}" fill="rgb(255,{shade},{shade})"/>'
            )
    parts.append(
        f'<rect x="40" y="40" width="{n * cell}" height="{n * cell}" '
        'fill="none" stroke="black"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
