"""Hand-rolled SVG emission for run snapshots and objective charts.

Plain string assembly keeps the output byte-reproducible (no timestamps or
generated ids), which the CLI relies on for rerun comparisons.
"""

import numpy as np

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
           "#9467bd", "#8c564b", "#e377c2", "#17becf"]

_SIZE = 640.0
_MARGIN = 40.0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Frame:
    """Affine world-to-pixel transform with a y-flip."""

    def __init__(self, points: np.ndarray, pad: float):
        lo = points.min(axis=0) - pad
        hi = points.max(axis=0) + pad
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
        self.lo = lo
        self.scale = (_SIZE - 2 * _MARGIN) / span

    def x(self, wx: float) -> float:
        return _MARGIN + (wx - self.lo[0]) * self.scale

    def y(self, wy: float) -> float:
        return _SIZE - _MARGIN - (wy - self.lo[1]) * self.scale


def _document(body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_SIZE)}" '
            f'height="{int(_SIZE)}" viewBox="0 0 {int(_SIZE)} {int(_SIZE)}">')
    return "\n".join([head, f'<rect width="{int(_SIZE)}" height="{int(_SIZE)}" fill="white"/>',
                      *body, "</svg>"]) + "\n"


def _triangle(cx: float, cy: float, size: float, fill: str, stroke: str = "black") -> str:
    pts = [(cx, cy - size), (cx - size * 0.866, cy + size / 2), (cx + size * 0.866, cy + size / 2)]
    coords = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)
    return f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>'


def _cross(cx: float, cy: float, size: float) -> str:
    return (f'<path d="M {_fmt(cx - size)} {_fmt(cy - size)} L {_fmt(cx + size)} {_fmt(cy + size)} '
            f'M {_fmt(cx - size)} {_fmt(cy + size)} L {_fmt(cx + size)} {_fmt(cy - size)}" '
            f'stroke="black" stroke-width="1"/>')


def final_state_svg(pois: np.ndarray, agents: np.ndarray, memberships: np.ndarray,
                    rho: float) -> str:
    """Snapshot: PoIs colored by their strongest agent, agents as triangles.

    Sensing radii are drawn as dashed circles when rho is finite.
    """
    frame = _Frame(np.vstack([pois, agents]), pad=rho if np.isfinite(rho) else 0.05)
    body = []
    owner = np.argmax(memberships, axis=1)
    if np.isfinite(rho):
        for j, (ax, ay) in enumerate(agents):
            body.append(
                f'<circle cx="{_fmt(frame.x(ax))}" cy="{_fmt(frame.y(ay))}" '
                f'r="{_fmt(rho * frame.scale)}" fill="none" '
                f'stroke="{PALETTE[j % len(PALETTE)]}" stroke-width="1" '
                f'stroke-dasharray="6 4"/>'
            )
    for i, (px, py) in enumerate(pois):
        color = PALETTE[int(owner[i]) % len(PALETTE)]
        body.append(
            f'<circle cx="{_fmt(frame.x(px))}" cy="{_fmt(frame.y(py))}" r="4" '
            f'fill="{color}" fill-opacity="0.7" stroke="none"/>'
        )
    for j, (ax, ay) in enumerate(agents):
        body.append(_triangle(frame.x(ax), frame.y(ay), 9.0,
                              PALETTE[j % len(PALETTE)]))
    return _document(body)


def membership_svg(pois: np.ndarray, agent_position: np.ndarray,
                   column: np.ndarray, rho: float) -> str:
    """Association heat map for one agent.

    PoI color interpolates from blue (association zero) to red (one);
    exactly-zero associations are drawn as black crosses.
    """
    frame = _Frame(np.vstack([pois, agent_position[None, :]]),
                   pad=rho if np.isfinite(rho) else 0.05)
    body = []
    if np.isfinite(rho):
        ax, ay = agent_position
        body.append(
            f'<circle cx="{_fmt(frame.x(ax))}" cy="{_fmt(frame.y(ay))}" '
            f'r="{_fmt(rho * frame.scale)}" fill="none" stroke="gray" '
            f'stroke-width="1" stroke-dasharray="6 4"/>'
        )
    for (px, py), u in zip(pois, column):
        cx, cy = frame.x(px), frame.y(py)
        if u == 0.0:
            body.append(_cross(cx, cy, 4.0))
        else:
            red = int(round(255 * u))
            blue = 255 - red
            body.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
                f'fill="rgb({red},0,{blue})" stroke="none"/>'
            )
    ax, ay = agent_position
    body.append(_triangle(frame.x(ax), frame.y(ay), 9.0, "black"))
    return _document(body)


def objective_chart_svg(series: list[tuple[str, list[float]]]) -> str:
    """Per-iteration objective curves, one polyline per labeled run."""
    all_vals = [v for _, ys in series for v in ys]
    if not all_vals:
        raise ValueError("no data to chart")
    y_lo, y_hi = min(all_vals), max(all_vals)
    if y_hi - y_lo < 1e-12:
        y_hi = y_lo + 1.0
    x_hi = max(len(ys) for _, ys in series) - 1
    x_hi = max(x_hi, 1)

    def px(it: float) -> float:
        return _MARGIN + it / x_hi * (_SIZE - 2 * _MARGIN)

    def py(val: float) -> float:
        return _SIZE - _MARGIN - (val - y_lo) / (y_hi - y_lo) * (_SIZE - 2 * _MARGIN)

    body = [
        f'<line x1="{_fmt(_MARGIN)}" y1="{_fmt(_SIZE - _MARGIN)}" '
        f'x2="{_fmt(_SIZE - _MARGIN)}" y2="{_fmt(_SIZE - _MARGIN)}" stroke="black"/>',
        f'<line x1="{_fmt(_MARGIN)}" y1="{_fmt(_MARGIN)}" '
        f'x2="{_fmt(_MARGIN)}" y2="{_fmt(_SIZE - _MARGIN)}" stroke="black"/>',
        f'<text x="{_fmt(_SIZE / 2)}" y="{_fmt(_SIZE - 8)}" font-size="13" '
        f'text-anchor="middle">iteration</text>',
        f'<text x="14" y="{_fmt(_SIZE / 2)}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt(_SIZE / 2)})">objective</text>',
        f'<text x="{_fmt(_MARGIN)}" y="{_fmt(_SIZE - _MARGIN + 16)}" font-size="11" '
        f'text-anchor="middle">0</text>',
        f'<text x="{_fmt(_SIZE - _MARGIN)}" y="{_fmt(_SIZE - _MARGIN + 16)}" '
        f'font-size="11" text-anchor="middle">{x_hi}</text>',
        f'<text x="{_fmt(_MARGIN - 4)}" y="{_fmt(py(y_lo) + 4)}" font-size="11" '
        f'text-anchor="end">{y_lo:.4g}</text>',
        f'<text x="{_fmt(_MARGIN - 4)}" y="{_fmt(py(y_hi) + 4)}" font-size="11" '
        f'text-anchor="end">{y_hi:.4g}</text>',
    ]
    for idx, (label, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(i))},{_fmt(py(v))}" for i, v in enumerate(ys))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    f'stroke-width="1.5"/>')
        ly = _MARGIN + 16 * (idx + 1)
        body.append(f'<line x1="{_fmt(_SIZE - 170)}" y1="{_fmt(ly - 4)}" '
                    f'x2="{_fmt(_SIZE - 150)}" y2="{_fmt(ly - 4)}" '
                    f'stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{_fmt(_SIZE - 144)}" y="{_fmt(ly)}" '
                    f'font-size="12">{label}</text>')
    return _document(body)
