import random
from fractions import Fraction

import pytest

from wallcross.checks import random_slope_factorization
from wallcross.factorization import (NotInCone, Slope, SlopeFactorization, WallFunction,
                                     cone_basis_for, factorize, integrality_probe,
                                     ordered_product, slope_auto, vertex_consistency,
                                     wedge_wall)
from wallcross.scalars import QQ
from wallcross.series import BasisError, STANDARD_BASIS, SympAuto, TruncSeries2

ONE_Z = WallFunction({1: 1})


def test_slope_order_is_cross_product():
    slopes = [Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(2, 1), Slope(1, 2)]
    assert sorted(slopes) == [Slope(1, 0), Slope(2, 1), Slope(1, 1), Slope(1, 2),
                              Slope(0, 1)]
    assert Slope(1, 0) < Slope(5, 1) < Slope(0, 1)


def test_slope_validation():
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope(0, 0)
    with pytest.raises(ValueError):
        Slope(-1, 2)


def test_slope_auto_trivial_wall():
    assert slope_auto(Slope(1, 2), WallFunction.one(), 8).is_identity()


def test_slope_auto_infinity():
    g = slope_auto(Slope(0, 1), ONE_Z, 8)
    assert g.ax.terms == {(0, 0): 1, (0, -1): 1}
    assert g.bx.terms == {(0, 0): 1}


def test_slope_auto_diagonal():
    g = slope_auto(Slope(1, 1), ONE_Z, 6)
    assert g.ax.terms == {(0, 0): 1, (-1, -1): 1}
    inv = TruncSeries2({(0, 0): 1, (-1, -1): 1}, STANDARD_BASIS, 6, QQ).invert()
    assert g.bx == inv
    assert g.preserves_omega()


def test_ordered_product_edges():
    empty = SlopeFactorization({}, 8)
    assert ordered_product(empty).is_identity()
    single = SlopeFactorization({Slope(1, 2): ONE_Z}, 8)
    assert ordered_product(single) == slope_auto(Slope(1, 2), ONE_Z, 8)


def test_ordered_product_order_convention():
    sf = SlopeFactorization({Slope(1, 0): ONE_Z, Slope(0, 1): ONE_Z}, 8)
    lhs = slope_auto(Slope(1, 0), ONE_Z, 8).compose(slope_auto(Slope(0, 1), ONE_Z, 8))
    assert ordered_product(sf) == lhs


def test_factorize_identity():
    assert factorize(SympAuto.identity(cutoff=8)).factors == {}


def test_factorize_single_factor_unchanged():
    f = WallFunction({1: 1, 2: 1})
    sf = factorize(slope_auto(Slope(1, 2), f, 8))
    assert sf.factors == {Slope(1, 2): f}


def test_pentagon_configuration():
    k = 12
    g = slope_auto(Slope(0, 1), ONE_Z, k).compose(slope_auto(Slope(1, 0), ONE_Z, k))
    sf = factorize(g, k)
    assert sf.factors == {Slope(1, 0): ONE_Z, Slope(1, 1): ONE_Z, Slope(0, 1): ONE_Z}
    assert ordered_product(sf) == g


def test_factorize_boundary_factors_match_inputs():
    f0 = WallFunction({1: 2, 2: -1})
    finf = WallFunction({1: -3})
    g = slope_auto(Slope(0, 1), finf, 8).compose(slope_auto(Slope(1, 0), f0, 8))
    sf = factorize(g, 8)
    assert sf.factors[Slope(1, 0)] == f0
    assert sf.factors[Slope(0, 1)] == finf


def test_factorize_roundtrip_random():
    rng = random.Random(17)
    lattice_bound = sum(1 for a in range(8) for b in range(8)
                        if (a, b) != (0, 0) and a + b < 8)
    for _ in range(25):
        sf = random_slope_factorization(rng, 8)
        back = factorize(ordered_product(sf), 8)
        assert back == sf
        # finite support: nontrivial slopes fit below the cutoff lattice
        assert len(back.factors) <= lattice_bound
        assert all(s.degree() < 8 for s in back.factors)


def test_factorize_uniqueness_contrapositive():
    rng = random.Random(23)
    seen = {}
    for _ in range(20):
        sf = random_slope_factorization(rng, 6)
        key = ordered_product(sf).to_json()
        canon = repr(sorted((s, sorted(f.coeffs.items())) for s, f in sf.factors.items()))
        blob = repr(key)
        if blob in seen:
            assert seen[blob] == canon
        seen[blob] = canon


def test_factorize_rejects_terms_outside_cone():
    bad = SympAuto(TruncSeries2({(0, 0): 1, (0, 1): 1}, STANDARD_BASIS, 6, QQ),
                   TruncSeries2.one(STANDARD_BASIS, 6, QQ))
    with pytest.raises(NotInCone):
        factorize(bad)


def test_integrality_probe_unit_walls():
    report = integrality_probe(ONE_Z, ONE_Z, 8)
    assert report.passed
    table = {(s.n1, s.n2): f for s, f in report.table.items()}
    assert table[(1, 1)].coeffs[1] == 1


def test_integrality_probe_mixed():
    report = integrality_probe(WallFunction({1: 2}), WallFunction({1: 3}), 6)
    assert report.passed


def test_integrality_probe_one_sided():
    report = integrality_probe(WallFunction.one(), WallFunction({1: 4, 2: -2}), 6)
    assert report.passed
    assert set(report.table) == {Slope(0, 1)}


def test_integrality_probe_rejects_fractional_input():
    with pytest.raises(ValueError):
        integrality_probe(WallFunction({1: Fraction(1, 2)}), ONE_Z, 6)


def pentagon_fan(k, include_middle=True):
    """Half-line fan of an elementary collision, counterclockwise from east."""
    entries = [((1, 0), ONE_Z, False)]
    if include_middle:
        entries.append(((1, 1), ONE_Z, False))
    entries += [((0, 1), ONE_Z, False),
                ((-1, 0), ONE_Z, True),
                ((0, -1), ONE_Z, True)]
    return entries


def test_vertex_consistency_pentagon():
    assert vertex_consistency(pentagon_fan(10), 10)


def test_vertex_consistency_fails_without_middle_wall():
    assert not vertex_consistency(pentagon_fan(10, include_middle=False), 10)


def test_vertex_consistency_single_wall_through():
    entries = [((1, 2), WallFunction({1: 5}), False), ((-1, -2), WallFunction({1: 5}), True)]
    assert vertex_consistency(entries, 8)


def test_cone_basis_for_straddles_axis():
    b = cone_basis_for([(1, 1), (1, -1), (1, 0)])
    assert b.in_cone((-1, -1)) and b.in_cone((-1, 1))
    # (1,0) lies in the rational cone (positive grading) though not in the
    # index-2 sublattice spanned by the extremes
    assert b.degree((-1, 0)) == 1


def test_cone_basis_for_rejects_halfplane():
    with pytest.raises(BasisError):
        cone_basis_for([(1, 0), (-1, 0)])
    with pytest.raises(BasisError):
        cone_basis_for([(1, 0), (0, 1), (-1, -1)])


def test_wedge_wall_matches_slope_auto():
    f = WallFunction({1: 3, 2: 1})
    assert wedge_wall((2, 3), f, 8) == slope_auto(Slope(2, 3), f, 8)


def test_factorization_json_roundtrip():
    rng = random.Random(5)
    sf = random_slope_factorization(rng, 8)
    assert SlopeFactorization.from_json(sf.to_json()) == sf


def test_factorize_over_laurent_coefficients():
    from wallcross.scalars import LaurentSeriesRing
    ring = LaurentSeriesRing(10)
    f0 = WallFunction({1: ring.t(1), 2: ring.one}, ring)
    finf = WallFunction({1: ring.one + ring.t(2)}, ring)
    g = slope_auto(Slope(0, 1), finf, 6, ring).compose(slope_auto(Slope(1, 0), f0, 6, ring))
    sf = factorize(g, 6)
    assert sf.factors[Slope(1, 0)] == f0
    assert sf.factors[Slope(0, 1)] == finf
    assert ordered_product(sf) == g
