"""Parameter-plane region maps as CSV tables and SVG drawings.

Figure 1 colours the additivity classes (super orange, sub green, neither
gray).  Figure 2 colours the modulus inequality classes; conjectured classes
are hatched and carry the SVG class ``conjectured``.  Both overlay h(alpha).
"""

import csv
import io
import os
import tempfile
from itertools import groupby

from .inequal import AdditivityLabel, IneqLabel, region_map

ALPHA_MAX = 5.0
BETA_MAX = 10.0
CSV_COLUMNS = ("alpha", "beta", "ineq_label", "additivity_label", "h_of_alpha")

ORANGE = "#f28e2b"
GREEN = "#59a14f"
GRAY = "#bab0ac"
BLUE = "#1f77b4"

FIGURE1_STYLE = {
    AdditivityLabel.SUPER.value: (ORANGE, "proved"),
    AdditivityLabel.SUB.value: (GREEN, "proved"),
    AdditivityLabel.NEITHER.value: (GRAY, "proved"),
}
FIGURE2_STYLE = {
    IneqLabel.LE_HOLDS.value: (ORANGE, "proved"),
    IneqLabel.GE_HOLDS.value: (GREEN, "proved"),
    IneqLabel.GE_CONJECTURED.value: ("url(#hatch-green)", "conjectured"),
    IneqLabel.NEITHER.value: (GRAY, "proved"),
    IneqLabel.NEITHER_CONJECTURED.value: ("url(#hatch-gray)", "conjectured"),
}

WIDTH, HEIGHT = 640, 520
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 20, 50


def fmt(x):
    return format(float(x), ".17g")


def figure_map(resolution):
    """Lattice alpha = 5i/n (i = 1..n), beta = 10j/n (j = 0..n-1).

    With n a multiple of 20 the lines alpha = 1, 2, 4 and beta = 3 lie on it.
    """
    n = int(resolution)
    return region_map((ALPHA_MAX / n, ALPHA_MAX), (0.0, BETA_MAX * (n - 1) / n), n)


def csv_text(rmap):
    h_of = dict(rmap.h_curve)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_COLUMNS)
    for a, b, lab in rmap.rows:
        w.writerow([fmt(a), fmt(b), lab.ineq.value, lab.additivity.value, fmt(h_of[a])])
    return buf.getvalue()


def _scale(alphas, betas):
    da = alphas[1] - alphas[0] if len(alphas) > 1 else 1.0
    db = betas[1] - betas[0] if len(betas) > 1 else 1.0
    a0, a1 = alphas[0] - da / 2, alphas[-1] + da / 2
    b0, b1 = betas[0] - db / 2, betas[-1] + db / 2
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def sx(a):
        return LEFT + (a - a0) / (a1 - a0) * pw

    def sy(b):
        return TOP + (b1 - b) / (b1 - b0) * ph

    return sx, sy, da, db, (a0, a1, b0, b1)


def svg_text(rmap, which):
    which = int(which)
    style = FIGURE1_STYLE if which == 1 else FIGURE2_STYLE
    alphas = sorted({a for a, _, _ in rmap.rows})
    betas = sorted({b for _, b, _ in rmap.rows})
    sx, sy, da, db, (a0, a1, b0, b1) = _scale(alphas, betas)

    def label_of(lab):
        return lab.additivity.value if which == 1 else lab.ineq.value

    rects = {name: [] for name in style}
    for a, column in groupby(rmap.rows, key=lambda r: r[0]):
        for name, run in groupby(column, key=lambda r: label_of(r[2])):
            run = list(run)
            lo, hi = run[0][1] - db / 2, run[-1][1] + db / 2
            x, y = sx(a - da / 2), sy(hi)
            rects[name].append(
                f'<rect x="{x:.3f}" y="{y:.3f}" width="{sx(a + da / 2) - x:.3f}" height="{sy(lo) - y:.3f}"/>')

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        "<defs>",
        f'<pattern id="hatch-green" patternUnits="userSpaceOnUse" width="6" height="6">'
        f'<rect width="6" height="6" fill="white"/><path d="M0,6 L6,0" stroke="{GREEN}" stroke-width="2"/></pattern>',
        f'<pattern id="hatch-gray" patternUnits="userSpaceOnUse" width="6" height="6">'
        f'<rect width="6" height="6" fill="white"/><path d="M0,6 L6,0" stroke="{GRAY}" stroke-width="2"/></pattern>',
        "</defs>",
        f'<title>Figure {which}: {"additivity" if which == 1 else "modulus inequality"} regions</title>',
    ]
    for name, (fill, cls) in style.items():
        if rects[name]:
            out.append(f'<g id="region-{name}" class="{cls}" fill="{fill}" stroke="none">')
            out.extend(rects[name])
            out.append("</g>")
    pts = " ".join(f"{sx(a):.3f},{sy(h):.3f}" for a, h in rmap.h_curve if b0 <= h <= b1)
    out.append(f'<polyline class="h-curve" fill="none" stroke="{BLUE}" stroke-width="2" points="{pts}"/>')
    # axes and ticks
    out.append(f'<g class="axes" stroke="black" fill="none">'
               f'<rect x="{LEFT}" y="{TOP}" width="{WIDTH - LEFT - RIGHT}" height="{HEIGHT - TOP - BOTTOM}"/></g>')
    out.append('<g class="ticks" font-family="sans-serif" font-size="11" fill="black">')
    for t in range(0, int(a1) + 1):
        if a0 <= t <= a1:
            out.append(f'<text x="{sx(t):.1f}" y="{HEIGHT - BOTTOM + 16}" text-anchor="middle">{t}</text>')
    for t in range(0, int(b1) + 1, 2):
        if b0 <= t <= b1:
            out.append(f'<text x="{LEFT - 8}" y="{sy(t) + 4:.1f}" text-anchor="end">{t}</text>')
    out.append(f'<text x="{(LEFT + WIDTH - RIGHT) / 2}" y="{HEIGHT - 12}" text-anchor="middle">alpha</text>')
    out.append(f'<text x="16" y="{(TOP + HEIGHT - BOTTOM) / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(TOP + HEIGHT - BOTTOM) / 2})">beta</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_atomic(path, text):
    """Write to a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_figure(which, resolution, out_dir):
    """Write figure<which>.svg and figure<which>.csv; returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    rmap = figure_map(resolution)
    csv_path = os.path.join(out_dir, f"figure{int(which)}.csv")
    svg_path = os.path.join(out_dir, f"figure{int(which)}.svg")
    write_atomic(csv_path, csv_text(rmap))
    write_atomic(svg_path, svg_text(rmap, which))
    return svg_path, csv_path, rmap
