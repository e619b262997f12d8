"""Dependency-free SVG line charts with a shaded +/- 1 std band per series."""
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 170, 50, 70
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
N_TICKS = 5


def _f(v):
    return f"{v:.2f}"


def _range(lo, hi):
    if hi - lo <= 0:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def line_chart(title, x_label, y_label, series):
    """Render ``series`` as an SVG document string.

    ``series`` is a list of ``(name, xs, means, stds)``; names appear in the
    legend in list order. Output depends only on the arguments.
    """
    if not series:
        raise ValueError("nothing to plot")
    xs_all = [float(x) for _, xs, _, _ in series for x in xs]
    lows = [float(m) - float(s) for _, _, ms, ss in series for m, s in zip(ms, ss)]
    highs = [float(m) + float(s) for _, _, ms, ss in series for m, s in zip(ms, ss)]
    if not xs_all:
        raise ValueError("series have no points")
    x_lo, x_hi = _range(min(xs_all), max(xs_all))
    y_lo, y_hi = _range(min(lows), max(highs))
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    left, top = MARGIN_LEFT, MARGIN_TOP
    right, bottom = WIDTH - MARGIN_RIGHT, HEIGHT - MARGIN_BOTTOM

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def py(y):
        return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{_f((left + right) / 2)}" y="30" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="#000000"/>',
    ]
    for i in range(N_TICKS):
        frac = i / (N_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        out.append(f'<line x1="{_f(px(xv))}" y1="{bottom}" x2="{_f(px(xv))}" y2="{bottom + 5}" stroke="#000000"/>')
        out.append(f'<text x="{_f(px(xv))}" y="{bottom + 20}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12">{xv:.4g}</text>')
        out.append(f'<line x1="{left - 5}" y1="{_f(py(yv))}" x2="{left}" y2="{_f(py(yv))}" stroke="#000000"/>')
        out.append(f'<text x="{left - 8}" y="{_f(py(yv) + 4)}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="12">{yv:.4g}</text>')
    out.append(f'<text x="{_f((left + right) / 2)}" y="{HEIGHT - 20}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14">{escape(x_label)}</text>')
    out.append(f'<text x="20" y="{_f((top + bottom) / 2)}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="14" transform="rotate(-90 20 {_f((top + bottom) / 2)})">{escape(y_label)}</text>')

    for k, (name, xs, means, stds) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        upper = [(px(x), py(m + s)) for x, m, s in zip(xs, means, stds)]
        lower = [(px(x), py(m - s)) for x, m, s in zip(xs, means, stds)]
        band = " ".join(f"{_f(a)},{_f(b)}" for a, b in upper + lower[::-1])
        line = " ".join(f"{_f(px(x))},{_f(py(m))}" for x, m in zip(xs, means))
        out.append(f'<polygon class="band" points="{band}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        out.append(f'<polyline class="series" points="{line}" fill="none" stroke="{color}" stroke-width="2"/>')

    for k, (name, *_rest) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        y = top + 10 + 22 * k
        out.append(f'<g class="legend-entry"><line x1="{right + 15}" y1="{y}" x2="{right + 40}" y2="{y}" '
                   f'stroke="{color}" stroke-width="3"/><text x="{right + 46}" y="{y + 4}" '
                   f'font-family="sans-serif" font-size="13">{escape(name)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
