"""Order-truncated scattering diagrams of straight lines in a rational window.

Each singular point seeds two opposite vertical lines (in its own standard
coordinates) carrying the elementary walls (xi(1+eta), eta) and
(xi(1+1/eta), eta).  Lines are straight rays in one global chart; a line
with covector alpha = a*dx + b*dy is traced in the direction (a, b) (the
fixed duality of this chart).  Collisions spawn composite lines for every
coprime weight pair below the order cutoff, wall automorphisms are attached
through the slope factorization, and parallel transport across walls is an
ordered product of crossings.
"""

from __future__ import annotations

import functools
import json
import math
from fractions import Fraction

from .factorization import (FactorizationError, Slope, WallFunction, ccw_less,
                            cone_basis_for, factorize, slope_auto,
                            vertex_consistency, wall_series, wedge_wall)
from .scalars import QQ, format_rational, rational
from .series import ConeBasis, STANDARD_BASIS, SympAuto, p_omega, wedge


class ScatterError(RuntimeError):
    pass


class DuplicateSingularPoint(ScatterError):
    pass


class TripleCollision(ScatterError):
    """Three lines meet at a non-singular point (or an equivalent degeneracy).

    The caller should perturb the input configuration or shrink the window
    below ``point`` (straight lattice rays make some concurrences structural,
    so position jitter alone cannot always remove them).
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class PathThroughVertex(ScatterError):
    pass


class EndpointOnLine(ScatterError):
    pass


class UnsupportedFormat(ScatterError):
    pass


class OrphanWallError(ScatterError):
    """A collision produced a factorization factor whose line was pruned by the
    order cutoff; the order cutoff and series order are inconsistent for this
    configuration."""


def _pt(p):
    return (rational(p[0]) if not isinstance(p[0], Fraction) else p[0],
            rational(p[1]) if not isinstance(p[1], Fraction) else p[1])


class SingularPoint:
    """Focus-focus seed: a position and the primitive covector of its local dy."""

    __slots__ = ("point", "beta")

    def __init__(self, point, beta=(0, 1)):
        self.point = _pt(point)
        beta = (int(beta[0]), int(beta[1]))
        if beta == (0, 0) or math.gcd(abs(beta[0]), abs(beta[1])) != 1:
            raise ScatterError(f"seed covector must be primitive, got {beta}")
        self.beta = beta

    def to_json(self):
        return {"point": [format_rational(self.point[0]), format_rational(self.point[1])],
                "beta": list(self.beta)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (list, tuple)):
            return cls(obj)
        return cls(obj["point"], obj.get("beta", (0, 1)))

    def __eq__(self, other):
        return isinstance(other, SingularPoint) and \
            self.point == other.point and self.beta == other.beta


class Line:
    """Straight ray base + t*(alpha) carrying an affine order function and a wall.

    ``sense`` fixes which of the two elementary transitions the stored wall
    automorphism represents: the automorphism applied on a positively
    oriented crossing is wedge_wall(alpha, wall)^sense.
    """

    __slots__ = ("id", "base", "alpha", "birth_ord", "kind", "parents", "wall", "sense")

    def __init__(self, id, base, alpha, birth_ord, kind, parents=None,
                 wall=None, sense=1):
        self.id = id
        self.base = _pt(base)
        self.alpha = (int(alpha[0]), int(alpha[1]))
        self.birth_ord = rational(birth_ord)
        self.kind = kind
        self.parents = parents
        self.wall = wall if wall is not None else WallFunction.one()
        self.sense = sense
        if (kind == "initial") != (parents is None):
            raise ScatterError("composite lines need parents, initial lines must not have them")

    @property
    def direction(self):
        return self.alpha

    def point_at(self, t):
        return (self.base[0] + t * self.alpha[0], self.base[1] + t * self.alpha[1])

    def ord_at(self, t):
        gram = self.alpha[0] * self.alpha[0] + self.alpha[1] * self.alpha[1]
        return self.birth_ord + t * gram

    def auto(self, k, ring, basis=None) -> SympAuto:
        """Stored wall automorphism; the grading basis must contain the wall covector."""
        if basis is None:
            basis = cone_basis_for([self.alpha])
        phi = wedge_wall(self.alpha, self.wall, k, ring, basis)
        return phi if self.sense == 1 else phi.invert()

    def to_json(self):
        return {
            "id": self.id,
            "base": [format_rational(self.base[0]), format_rational(self.base[1])],
            "alpha": list(self.alpha),
            "ord0": format_rational(self.birth_ord),
            "kind": self.kind,
            "parents": list(self.parents) if self.parents else None,
            "wall": self.wall.to_json(),
            "sense": self.sense,
        }


class CollisionEvent:
    __slots__ = ("point", "line1", "t1", "line2", "t2", "newborn", "pruned")

    def __init__(self, point, line1, t1, line2, t2, newborn, pruned):
        self.point = _pt(point)
        self.line1 = line1
        self.t1 = t1
        self.line2 = line2
        self.t2 = t2
        self.newborn = list(newborn)
        self.pruned = list(pruned)

    def to_json(self):
        return {
            "point": [format_rational(self.point[0]), format_rational(self.point[1])],
            "incoming": [[self.line1, format_rational(self.t1)],
                         [self.line2, format_rational(self.t2)]],
            "newborn": list(self.newborn),
            "pruned": [list(s) for s in self.pruned],
        }


class Diagram:
    """Scattering diagram in a rational window with order cutoff C and series order k."""

    def __init__(self, singular_points, window, order_cutoff, series_order,
                 ring=QQ, basis=STANDARD_BASIS):
        self.singular_points = list(singular_points)
        self.window = tuple(rational(w) for w in window)  # (xmin, xmax, ymin, ymax)
        self.order_cutoff = rational(order_cutoff)
        self.series_order = int(series_order)
        self.ring = ring
        self.basis = basis
        self.lines: dict[int, Line] = {}
        self.events: list[CollisionEvent] = []
        self.walls_attached = False

    def add_line(self, line: Line):
        self.lines[line.id] = line

    def line_auto(self, line_id) -> SympAuto:
        return self.lines[line_id].auto(self.series_order, self.ring, self.basis)

    def in_window(self, p) -> bool:
        x0, x1, y0, y1 = self.window
        return x0 < p[0] < x1 and y0 < p[1] < y1

    def to_json(self):
        return {
            "singular_points": [s.to_json() for s in self.singular_points],
            "window": [format_rational(w) for w in self.window],
            "order_cutoff": format_rational(self.order_cutoff),
            "series_order": self.series_order,
            "basis": [list(self.basis.a1), list(self.basis.a2)],
            "lines": [line.to_json() for _, line in sorted(self.lines.items())],
            "events": [e.to_json() for e in self.events],
            "walls_attached": self.walls_attached,
        }

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.to_json() == other.to_json()


def initial_lines(singular_points, window, order_cutoff, series_order,
                  ring=QQ, basis=STANDARD_BASIS) -> Diagram:
    """Diagram with the two elementary lines of every singular point.

    In the local standard coordinates of a seed the two lines leave along
    +y and -y with covectors +dy and -dy and carry the transitions
    (xi(1+1/eta), eta) and (xi(1+eta), eta) respectively; both are recorded
    with the wall function 1+z in the monomial dual to the line's covector,
    the second through ``sense=-1``.
    """
    seeds = [s if isinstance(s, SingularPoint) else SingularPoint(s) for s in singular_points]
    seen = set()
    for s in seeds:
        if s.point in seen:
            raise DuplicateSingularPoint(f"duplicate singular point {s.point}")
        seen.add(s.point)
    d = Diagram(seeds, window, order_cutoff, series_order, ring, basis)
    wall = WallFunction({1: ring.one}, ring)
    next_id = 0
    for s in seeds:
        b = s.beta
        d.add_line(Line(next_id, s.point, b, 0, "initial", wall=wall, sense=1))
        d.add_line(Line(next_id + 1, s.point, (-b[0], -b[1]), 0, "initial", wall=wall,
                        sense=-1))
        next_id += 2
    return d


def _ray_intersection(l1: Line, l2: Line):
    """Exact intersection parameters (t1, t2) with both strictly positive, or None.

    Raises TripleCollision for overlapping collinear rays.
    """
    u, w = l1.alpha, l2.alpha
    det = wedge(u, w)
    dx = l2.base[0] - l1.base[0]
    dy = l2.base[1] - l1.base[1]
    if det == 0:
        if u[0] * dy - u[1] * dx != 0:
            return None  # parallel, distinct carriers
        dot = u[0] * w[0] + u[1] * w[1]
        if (dx, dy) == (0, 0):
            if dot > 0:
                raise TripleCollision("coincident rays")
            return None  # opposite rays out of one point share only the base
        t = Fraction(dx, u[0]) if u[0] else Fraction(dy, u[1])
        if dot > 0 or t > 0:
            raise TripleCollision("overlapping collinear rays")
        return None
    t1 = Fraction(dx * w[1] - dy * w[0], det)
    t2 = Fraction(dx * u[1] - dy * u[0], det)
    if t1 <= 0 or t2 <= 0:
        return None
    return t1, t2


def _visible_weights(alpha1, alpha2, basis, k):
    """Coprime (n1, n2) whose newborn wall monomial has grading degree < k.

    Weights outside this set carry automorphisms that are the identity
    modulo degree k, so they never matter at the working series order.
    """
    wd1 = basis.degree((-alpha1[0], -alpha1[1]))
    wd2 = basis.degree((-alpha2[0], -alpha2[1]))
    out = []
    n1 = 1
    while n1 * wd1 + wd2 <= k - 1:
        n2 = 1
        while n1 * wd1 + n2 * wd2 <= k - 1:
            if math.gcd(n1, n2) == 1:
                out.append((n1, n2))
            n2 += 1
        n1 += 1
    return out


def evolve(d: Diagram) -> Diagram:
    """Run the collision loop: exact ray intersections inside the window,
    newborn composite lines for every coprime weight pair within the order
    cutoff whose wall can be nontrivial at the series order.

    Weight pairs passing the order cutoff but pruned by the series-order
    bound are recorded on the event for consistency auditing.
    """
    singular = {s.point for s in d.singular_points}
    evented = {(e.line1, e.line2) for e in d.events}
    event_points = {e.point: {e.line1, e.line2} for e in d.events}
    next_id = max(d.lines, default=-1) + 1
    k = d.series_order

    while True:
        candidates = []
        ids = sorted(d.lines)
        for i_pos, i in enumerate(ids):
            for j in ids[i_pos + 1:]:
                if (i, j) in evented or (j, i) in evented:
                    continue
                li, lj = d.lines[i], d.lines[j]
                hit = _ray_intersection(li, lj)
                if hit is None:
                    continue
                p = li.point_at(hit[0])
                if not d.in_window(p):
                    continue
                candidates.append((p, i, j, hit[0], hit[1]))
        if not candidates:
            break
        by_point = {}
        for c in candidates:
            by_point.setdefault(c[0], []).append(c)
        for p, group in by_point.items():
            involved = set()
            for _, i, j, _, _ in group:
                involved.update((i, j))
            prior = event_points.get(p)
            if prior is not None:
                involved |= prior
            if len(involved) > 2:
                raise TripleCollision(f"three or more lines meet at {p}", point=p)
            if p in singular:
                raise TripleCollision(f"collision at a singular point {p}", point=p)
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))
        p, i, j, ti, tj = candidates[0]
        l1, l2 = d.lines[i], d.lines[j]
        t1, t2 = ti, tj
        if wedge(l1.alpha, l2.alpha) < 0:
            l1, l2 = l2, l1
            t1, t2 = t2, t1
        for line in (l1, l2):
            a, b = line.alpha
            if not d.basis.in_cone((-a, -b)) or d.basis.degree((-a, -b)) < 1:
                raise ScatterError(
                    f"collision involves covector {line.alpha} outside the grading cone; "
                    f"choose a window avoiding this wall")
        o1, o2 = l1.ord_at(t1), l2.ord_at(t2)
        if o1 <= 0 or o2 <= 0:
            raise ScatterError("collision with non-positive order function")
        newborn = []
        pruned = []
        for n1, n2 in _visible_weights(l1.alpha, l2.alpha, d.basis, k):
            if n1 * o1 + n2 * o2 > d.order_cutoff:
                # visible at the series order yet beyond the order cutoff:
                # recorded so wall attachment can audit consistency
                pruned.append((n1, n2))
                continue
            alpha = (n1 * l1.alpha[0] + n2 * l2.alpha[0],
                     n1 * l1.alpha[1] + n2 * l2.alpha[1])
            line = Line(next_id, p, alpha, n1 * o1 + n2 * o2, "composite",
                        parents=(l1.id, l2.id, n1, n2))
            d.add_line(line)
            newborn.append(next_id)
            next_id += 1
        ev = CollisionEvent(p, l1.id, t1, l2.id, t2, newborn, pruned)
        d.events.append(ev)
        evented.add((min(l1.id, l2.id), max(l1.id, l2.id)))
        event_points[p] = {l1.id, l2.id}
    return d


def attach_walls(d: Diagram) -> Diagram:
    """Assign wall automorphisms: factorize each collision in its local basis.

    Incoming lines keep their walls (the boundary factors of the
    factorization are checked to agree with them); each newborn receives the
    factor at its weight pair.  A nontrivial factor at a weight pair that was
    pruned by the order cutoff raises OrphanWallError.
    """
    k = d.series_order
    ring = d.ring
    for ev in d.events:
        l1, l2 = d.lines[ev.line1], d.lines[ev.line2]
        basis_e = ConeBasis(l1.alpha, l2.alpha)
        g0 = l1.auto(k, ring, basis_e)
        ginf = l2.auto(k, ring, basis_e)
        g = ginf.compose(g0)
        sf = factorize(g, k)
        for boundary, line, lauto in ((Slope(1, 0), l1, g0), (Slope(0, 1), l2, ginf)):
            f = sf.factors.get(boundary, WallFunction.one(ring))
            if slope_auto(boundary, f, k, ring, basis_e) != lauto:
                raise FactorizationError(
                    f"boundary factor at {boundary} does not match the incoming wall")
        claimed = set()
        for lid in ev.newborn:
            line = d.lines[lid]
            n1, n2 = line.parents[2], line.parents[3]
            s = Slope(n1, n2)
            claimed.add(s)
            line.wall = sf.factors.get(s, WallFunction.one(ring))
        # a factor at weights dropped by the order cutoff but still visible at
        # the series order would leave the diagram inconsistent
        for n1, n2 in ev.pruned:
            f = sf.factors.get(Slope(n1, n2))
            if f is not None and not f.is_trivial():
                raise OrphanWallError(
                    f"nontrivial wall at order-pruned weights ({n1},{n2}); "
                    f"raise the order cutoff or shrink the series order")
    d.walls_attached = True
    return d


def event_vertex_entries(d: Diagram, ev: CollisionEvent):
    """Half-line fan of an event in counterclockwise order, for vertex consistency.

    Automorphisms are built in the diagram's window grading: newborn lines
    pruned because their wall degree meets the series order are invisible
    there, so the fan product closes modulo the series order.
    """
    l1, l2 = d.lines[ev.line1], d.lines[ev.line2]
    members = [(l1, True), (l2, True), (l1, False), (l2, False)] + \
        [(d.lines[lid], False) for lid in ev.newborn]
    entries = []
    for line, incoming in members:
        u = line.alpha if not incoming else (-line.alpha[0], -line.alpha[1])
        entries.append((u, line.auto(d.series_order, d.ring, d.basis), incoming))
    entries.sort(key=functools.cmp_to_key(
        lambda e1, e2: -1 if ccw_less(e1[0], e2[0]) else (1 if ccw_less(e2[0], e1[0]) else 0)))
    return entries


def check_vertex(d: Diagram, ev: CollisionEvent) -> bool:
    return vertex_consistency(event_vertex_entries(d, ev), d.series_order, d.ring,
                              basis=d.basis)


def _on_ray(line: Line, p) -> bool:
    dx = p[0] - line.base[0]
    dy = p[1] - line.base[1]
    if line.alpha[0] * dy - line.alpha[1] * dx != 0:
        return False
    t = Fraction(dx, line.alpha[0]) if line.alpha[0] else Fraction(dy, line.alpha[1])
    return t >= 0


def transport(d: Diagram, x, y, path=None) -> SympAuto:
    """Ordered product of wall crossings along a polyline from x to y.

    The sign of each factor is the orientation of the crossing: moving with
    velocity w across a line traced in direction v applies the stored
    automorphism when v ^ w > 0 and its inverse otherwise.  Factors compose
    so that transport(x, y).compose(transport(y, z)) == transport(x, z).
    """
    if not d.walls_attached:
        raise ScatterError("attach walls before transporting")
    x, y = _pt(x), _pt(y)
    pts = [x] + [_pt(p) for p in (path or [])] + [y]
    for line in d.lines.values():
        for p in (x, y):
            if _on_ray(line, p):
                raise EndpointOnLine(f"endpoint {p} lies on line {line.id}")
        for p in pts[1:-1]:
            if _on_ray(line, p):
                raise PathThroughVertex(f"path vertex {p} lies on line {line.id}")
    event_pts = {e.point for e in d.events}
    special_pts = event_pts | {s.point for s in d.singular_points}
    crossings = []
    for seg in range(len(pts) - 1):
        a, b = pts[seg], pts[seg + 1]
        w = (b[0] - a[0], b[1] - a[1])
        for line in d.lines.values():
            v = line.alpha
            det = v[0] * w[1] - v[1] * w[0]
            dxx = a[0] - line.base[0]
            dyy = a[1] - line.base[1]
            if det == 0:
                continue
            t = Fraction(dxx * w[1] - dyy * w[0], det)
            s = Fraction(dxx * v[1] - dyy * v[0], det)
            if t <= 0 or not (0 < s < 1):
                continue
            p = line.point_at(t)
            if p in special_pts or not d.in_window(p):
                raise PathThroughVertex(f"path crosses a vertex or leaves the window at {p}")
            if d.basis.degree((-v[0], -v[1])) < 1:
                raise ScatterError(
                    f"crossed wall covector {v} lies outside the diagram grading cone")
            sign = 1 if det > 0 else -1
            crossings.append(((seg, s), line.id, sign))
    seen_keys = {}
    for key, lid, _ in crossings:
        if key in seen_keys and seen_keys[key] != lid:
            raise PathThroughVertex("path crosses two lines at one point")
        seen_keys[key] = lid
    crossings.sort(key=lambda c: c[0])
    acc = SympAuto.identity(d.basis, d.series_order, d.ring)
    for _, lid, sign in crossings:
        phi = d.line_auto(lid)
        if sign < 0:
            phi = phi.invert()
        acc = acc.compose(phi)
    return acc


def kaffine_invariance_check(wall: WallFunction, alpha=(0, 1), ring=QQ, k: int = 8) -> bool:
    """Whether the wall multiplier has trivial multiplicative projection (p = 1).

    The multiplier f(z)^m of a wall automorphism is a unit whose logarithm
    has no constant monomial, so its residue-exponential must be exactly 1;
    this is what keeps wall modifications invisible to the K-affine
    structure.
    """
    alpha = (int(alpha[0]), int(alpha[1]))
    basis = cone_basis_for([alpha])
    m = alpha[1] if alpha[1] != 0 else -alpha[0]
    mult = wall_series(alpha, wall, m, k, ring, basis)
    return p_omega(mult).is_one()


def diagram_from_json(obj, ring=QQ) -> Diagram:
    seeds = [SingularPoint.from_json(s) for s in obj["singular_points"]]
    basis = ConeBasis(tuple(obj["basis"][0]), tuple(obj["basis"][1])) if "basis" in obj \
        else STANDARD_BASIS
    d = Diagram(seeds, [rational(w) for w in obj["window"]],
                rational(obj["order_cutoff"]), int(obj["series_order"]), ring, basis)
    for rec in obj.get("lines", []):
        d.add_line(Line(
            int(rec["id"]),
            (rational(rec["base"][0]), rational(rec["base"][1])),
            tuple(rec["alpha"]),
            rational(rec["ord0"]),
            rec["kind"],
            tuple(rec["parents"]) if rec.get("parents") else None,
            WallFunction.from_json(rec.get("wall", {}), ring),
            int(rec.get("sense", 1)),
        ))
    for rec in obj.get("events", []):
        d.events.append(CollisionEvent(
            (rational(rec["point"][0]), rational(rec["point"][1])),
            int(rec["incoming"][0][0]), rational(rec["incoming"][0][1]),
            int(rec["incoming"][1][0]), rational(rec["incoming"][1][1]),
            [int(n) for n in rec.get("newborn", [])],
            [tuple(s) for s in rec.get("pruned", [])],
        ))
    d.walls_attached = bool(obj.get("walls_attached", False))
    return d


def export(d: Diagram, fmt: str = "json"):
    """Serialize a diagram: canonical JSON text, or an SVG figure via matplotlib."""
    if fmt == "json":
        return json.dumps(d.to_json(), sort_keys=True, separators=(",", ":"))
    if fmt == "svg":
        from .plotting import scatter_figure_svg
        return scatter_figure_svg(d)
    raise UnsupportedFormat(f"unknown export format {fmt!r}")
