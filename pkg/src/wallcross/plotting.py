"""Figure rendering for scattering diagrams and tropical graphs.

All figures are illustrative output (matplotlib, rasterized coordinates);
every exact result lives in the JSON/CSV emitters, never here.
"""

from __future__ import annotations

import io
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _line_generation(d, line, cache):
    if line.id in cache:
        return cache[line.id]
    if line.parents is None:
        gen = 0
    else:
        p1 = _line_generation(d, d.lines[line.parents[0]], cache)
        p2 = _line_generation(d, d.lines[line.parents[1]], cache)
        gen = max(p1, p2) + 1
    cache[line.id] = gen
    return gen


def _clip_ray(base, direction, window):
    """Parameter interval [t0, t1] of a ray inside a rectangle, or None."""
    x0, x1, y0, y1 = window
    t_lo, t_hi = Fraction(0), None
    for b, d, lo, hi in ((base[0], direction[0], x0, x1),
                         (base[1], direction[1], y0, y1)):
        if d == 0:
            if not (lo <= b <= hi):
                return None
            continue
        ta = Fraction(lo - b, d)
        tb = Fraction(hi - b, d)
        if ta > tb:
            ta, tb = tb, ta
        t_lo = max(t_lo, ta)
        t_hi = tb if t_hi is None else min(t_hi, tb)
    if t_hi is None:
        t_hi = t_lo + 1
    if t_hi <= t_lo:
        return None
    return t_lo, t_hi


def scatter_figure(d):
    """Lines colored by generation, singular points and events marked."""
    fig, ax = plt.subplots(figsize=(6, 6))
    cache = {}
    cmap = plt.get_cmap("viridis")
    max_gen = max((_line_generation(d, line, cache) for line in d.lines.values()),
                  default=0)
    for line in d.lines.values():
        span = _clip_ray(line.base, line.alpha, d.window)
        if span is None:
            continue
        p = line.point_at(span[0])
        q = line.point_at(span[1])
        gen = cache[line.id]
        color = "black" if gen == 0 else cmap(gen / max(max_gen, 1))
        ax.plot([float(p[0]), float(q[0])], [float(p[1]), float(q[1])],
                color=color, lw=1.6 if gen == 0 else 1.0)
    for s in d.singular_points:
        ax.plot([float(s.point[0])], [float(s.point[1])], marker="x", color="red",
                markersize=8)
    for e in d.events:
        ax.plot([float(e.point[0])], [float(e.point[1])], marker="o", color="tab:orange",
                markersize=4)
    x0, x1, y0, y1 = (float(w) for w in d.window)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_title(f"scattering diagram: {len(d.lines)} lines, {len(d.events)} events")
    return fig


def scatter_figure_svg(d) -> str:
    fig = scatter_figure(d)
    buf = io.StringIO()
    fig.savefig(buf, format="svg")
    plt.close(fig)
    return buf.getvalue()


def save_scatter(d, path: str):
    fig = scatter_figure(d)
    fig.savefig(path)
    plt.close(fig)


def tropical_figure(pl, window=None):
    """Graph of a 1-d tropical function, or level sets of a 2-d one."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if window is None:
        window = (-4, 4)
    if pl.dim == 1:
        lo, hi = Fraction(window[0]), Fraction(window[1])
        breaks = {lo, hi}
        pieces = pl.pieces
        for i, (q1, i1) in enumerate(pieces):
            for q2, i2 in pieces[i + 1:]:
                if i1 != i2:
                    x = Fraction(q1 - q2, i1[0] - i2[0])
                    if lo < x < hi:
                        breaks.add(x)
        xs = sorted(breaks)
        ys = [pl((x,)) for x in xs]
        ax.plot([float(x) for x in xs], [float(y) for y in ys], marker="o")
        ax.set_xlabel("x")
        ax.set_ylabel("min of pieces")
    else:
        import numpy as np
        lo, hi = float(window[0]), float(window[1])
        grid = np.linspace(lo, hi, 80)
        zz = [[float(pl((Fraction(x).limit_denominator(1000),
                         Fraction(y).limit_denominator(1000)))) for x in grid]
              for y in grid]
        cs = ax.contourf(grid, grid, zz, levels=16)
        fig.colorbar(cs, ax=ax)
        ax.set_aspect("equal")
    ax.set_title("tropical piecewise-linear function")
    return fig


def save_tropical(pl, path: str, window=None):
    fig = tropical_figure(pl, window)
    fig.savefig(path)
    plt.close(fig)
