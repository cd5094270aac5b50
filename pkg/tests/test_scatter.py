import json
import random
from fractions import Fraction

import pytest

from wallcross.checks import build_random_diagram
from wallcross.factorization import WallFunction
from wallcross.scalars import QQ
from wallcross.scatter import (DuplicateSingularPoint, EndpointOnLine,
                               PathThroughVertex, SingularPoint, TripleCollision,
                               attach_walls, check_vertex, diagram_from_json, evolve,
                               export, initial_lines, kaffine_invariance_check,
                               transport)
from wallcross.series import p_omega, TruncSeries2, STANDARD_BASIS


def elementary_pair():
    """One vertical and one horizontal seed whose up/right lines meet at (1, 1)
    with both order functions equal to 1 there."""
    return [SingularPoint((1, 0), (0, 1)), SingularPoint((0, 1), (1, 0))]


def test_initial_lines_single_point():
    d = initial_lines([SingularPoint((0, 0))], (-1, 1, -1, 1), 3, 6)
    assert len(d.lines) == 2
    up, down = d.lines[0], d.lines[1]
    assert up.alpha == (0, 1) and down.alpha == (0, -1)
    a_up = up.auto(6, QQ)
    assert a_up.ax.terms == {(0, 0): 1, (0, -1): 1}     # xi (1 + 1/eta)
    assert a_up.bx.terms == {(0, 0): 1}
    a_down = down.auto(6, QQ)
    assert a_down.ax.terms == {(0, 0): 1, (0, 1): 1}    # xi (1 + eta)
    assert a_down.bx.terms == {(0, 0): 1}


def test_initial_lines_empty_and_two_points():
    d = initial_lines([], (0, 1, 0, 1), 3, 6)
    assert d.lines == {} and d.events == []
    d2 = initial_lines([SingularPoint((0, 0)), SingularPoint((5, 0))], (-1, 6, -1, 1), 3, 6)
    assert sorted(d2.lines) == [0, 1, 2, 3]
    assert d2.lines[2].base == (5, 0)


def test_duplicate_singular_point_rejected():
    with pytest.raises(DuplicateSingularPoint):
        initial_lines([SingularPoint((0, 0)), SingularPoint((0, 0), (1, 0))],
                      (0, 1, 0, 1), 3, 6)


def test_line_parentage_invariant():
    from wallcross.scatter import Line, ScatterError
    with pytest.raises(ScatterError):
        Line(0, (0, 0), (0, 1), 0, "initial", parents=(1, 2, 1, 1))
    with pytest.raises(ScatterError):
        Line(0, (0, 0), (0, 1), 1, "composite", parents=None)


def test_evolve_elementary_collision_newborns():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d)
    assert len(d.events) == 1
    ev = d.events[0]
    assert ev.point == (1, 1)
    weights = sorted((d.lines[lid].parents[2], d.lines[lid].parents[3])
                     for lid in ev.newborn)
    assert weights == [(1, 1), (1, 2), (2, 1)]
    for lid in ev.newborn:
        line = d.lines[lid]
        o1 = d.lines[ev.line1].ord_at(ev.t1)
        o2 = d.lines[ev.line2].ord_at(ev.t2)
        assert line.birth_ord == line.parents[2] * o1 + line.parents[3] * o2
        assert line.birth_ord > max(o1, o2)


def test_evolve_parallel_lines_no_events():
    seeds = [SingularPoint((1, 0), (0, 1)), SingularPoint((2, 0), (0, 1))]
    d = initial_lines(seeds, (0, 4, 0, 4), 3, 6)
    evolve(d)
    assert d.events == []


def test_evolve_order_cutoff_prunes_everything():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), Fraction(3, 2), 6)
    evolve(d)
    assert len(d.events) == 1
    assert d.events[0].newborn == []
    assert (1, 1) in d.events[0].pruned
    assert all(line.kind == "initial" for line in d.lines.values())


def test_attach_walls_flags_order_pruned_visible_wall():
    from wallcross.scatter import OrphanWallError
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), Fraction(3, 2), 6)
    evolve(d)
    # the (1,1) factor of the elementary collision is 1+z but its line was
    # dropped by the order cutoff, so the diagram cannot be made consistent
    with pytest.raises(OrphanWallError):
        attach_walls(d)


def test_evolve_skips_weights_invisible_at_series_order():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 100, 6)
    evolve(d)
    weights = {(d.lines[lid].parents[2], d.lines[lid].parents[3])
               for lid in d.events[0].newborn}
    assert all(n1 + n2 <= 5 for n1, n2 in weights)
    assert (1, 5) not in weights
    assert d.events[0].pruned == []
    attach_walls(d)
    assert all(check_vertex(d, ev) for ev in d.events)


def test_evolve_triple_collision_detected():
    seeds = elementary_pair() + [SingularPoint((0, 0), (1, 1))]
    d = initial_lines(seeds, (0, 4, 0, 4), 3, 6)
    with pytest.raises(TripleCollision) as err:
        evolve(d)
    assert err.value.point == (1, 1)


def test_attach_walls_pentagon_event():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d)
    attach_walls(d)
    ev = d.events[0]
    by_weights = {(d.lines[lid].parents[2], d.lines[lid].parents[3]): d.lines[lid].wall
                  for lid in ev.newborn}
    assert by_weights[(1, 1)] == WallFunction({1: 1})
    assert by_weights[(1, 2)].is_trivial()
    assert by_weights[(2, 1)].is_trivial()
    assert check_vertex(d, ev)


def test_attach_walls_no_collisions_keeps_walls():
    seeds = [SingularPoint((1, 0), (0, 1))]
    d = initial_lines(seeds, (0, 4, 0, 4), 3, 6)
    evolve(d)
    attach_walls(d)
    assert d.lines[0].wall == WallFunction({1: 1})


def test_vertex_consistency_on_random_cascades():
    rng = random.Random(2)
    d = build_random_diagram(rng, k=6, order_cutoff=6, require_cascade=True)
    assert d.events
    assert all(check_vertex(d, ev) for ev in d.events)


def test_lemma5_finiteness_bounds():
    rng = random.Random(6)
    d = build_random_diagram(rng, k=6, order_cutoff=6, require_cascade=True)
    incoming_ords = []
    for ev in d.events:
        incoming_ords.append(d.lines[ev.line1].ord_at(ev.t1))
        incoming_ords.append(d.lines[ev.line2].ord_at(ev.t2))
    delta = min(incoming_ords)
    assert delta > 0
    depth = {}

    def ancestry(lid):
        if lid in depth:
            return depth[lid]
        line = d.lines[lid]
        val = 0 if line.parents is None else 1 + max(ancestry(line.parents[0]),
                                                     ancestry(line.parents[1]))
        depth[lid] = val
        return val

    bound = d.order_cutoff / delta
    for lid, line in d.lines.items():
        assert line.birth_ord <= d.order_cutoff
        assert ancestry(lid) <= bound


def test_transport_no_crossings_is_identity():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d)
    attach_walls(d)
    t = transport(d, (Fraction(1, 3), Fraction(1, 5)), (Fraction(1, 2), Fraction(1, 7)))
    assert t.is_identity()


def test_transport_path_independence_and_composition():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d)
    attach_walls(d)
    x = (Fraction(1, 2), Fraction(3, 2))   # left of the vertical, above horizontal
    y = (Fraction(3, 2), Fraction(1, 3))   # right of the vertical, below horizontal
    t_below = transport(d, x, y, [(Fraction(1, 3), Fraction(1, 3))])
    t_above = transport(d, x, y, [(Fraction(7, 3), Fraction(13, 6))])
    assert not t_below.is_identity()
    assert t_below == t_above
    z = (Fraction(5, 2), Fraction(13, 5))
    t_xz = transport(d, x, z, [(Fraction(7, 3), Fraction(13, 6))])
    t_yz = transport(d, y, z, [])
    assert t_below.compose(t_yz) == t_xz


def test_transport_error_cases():
    d = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d)
    attach_walls(d)
    with pytest.raises(EndpointOnLine):
        transport(d, (1, Fraction(1, 2)), (2, Fraction(1, 2)))
    with pytest.raises(PathThroughVertex):
        transport(d, (Fraction(3, 4), Fraction(5, 4)), (Fraction(5, 4), Fraction(3, 4)))


def test_kaffine_invariance_examples():
    assert kaffine_invariance_check(WallFunction({1: 1}), (0, 1))
    assert kaffine_invariance_check(WallFunction({1: 3, 2: 1}), (0, 1))
    assert kaffine_invariance_check(WallFunction({1: 2, 3: -5}), (2, 1))
    # constant-term perturbation of the multiplier is detected by the projection
    perturbed = TruncSeries2({(0, 0): Fraction(5, 4), (0, -1): 1},
                             STANDARD_BASIS, 8, QQ)
    assert not p_omega(perturbed).is_one()


def test_export_import_roundtrip():
    rng = random.Random(3)
    d = build_random_diagram(rng, k=6, order_cutoff=6)
    blob = export(d, "json")
    d2 = diagram_from_json(json.loads(blob))
    assert d2 == d
    assert export(d2, "json") == blob


def test_export_empty_diagram_and_svg():
    d = initial_lines([], (0, 1, 0, 1), 3, 6)
    doc = json.loads(export(d, "json"))
    assert doc["lines"] == [] and doc["events"] == []
    d2 = initial_lines(elementary_pair(), (0, 4, 0, 4), 3, 6)
    evolve(d2)
    svg = export(d2, "svg")
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


def test_export_unknown_format():
    from wallcross.scatter import UnsupportedFormat
    d = initial_lines([], (0, 1, 0, 1), 3, 6)
    with pytest.raises(UnsupportedFormat):
        export(d, "pdf")
