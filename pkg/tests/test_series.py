import random
from fractions import Fraction

import pytest

from wallcross.scalars import INF, QQ, LaurentSeriesRing
from wallcross.series import (ConeBasis, InconsistentDefect, STANDARD_BASIS, SympAuto,
                              TruncSeries2, exp_ham, log_ham, p_omega, poisson_bracket,
                              residue, symp_filtration_degree)

K = 8


def series(terms, cutoff=K, basis=STANDARD_BASIS, ring=QQ, vmode=False):
    return TruncSeries2(terms, basis, cutoff, ring, vmode)


def xi(c=1, cutoff=K):
    return series({(1, 0): c}, cutoff)


def eta(c=1, cutoff=K):
    return series({(0, 1): c}, cutoff)


def dilog_hamiltonian(mu, cutoff=K):
    """Hamiltonian with z F'(z) = log(1+z) for z = R_mu: generates the wall 1+z."""
    terms = {}
    for n in range(1, cutoff + 1):
        terms[(n * mu[0], n * mu[1])] = Fraction((-1) ** (n + 1), n * n)
    return series(terms, cutoff)


def test_bracket_of_coordinates():
    assert poisson_bracket(xi(), eta()) == series({(1, 1): 1})


def test_bracket_antisymmetry():
    f = series({(-1, 0): 2, (-1, -1): Fraction(1, 3)})
    assert poisson_bracket(f, f).is_zero()


def test_bracket_inverse_monomials():
    f = series({(-1, -1): 1})
    assert poisson_bracket(f, xi()) == series({(0, -1): 1})


def test_jacobi_and_leibniz_random():
    rng = random.Random(11)
    for _ in range(5):
        fgh = []
        for _ in range(3):
            terms = {(-rng.randint(0, 3), -rng.randint(0, 3)): rng.randint(-3, 3)
                     for _ in range(3)}
            terms.pop((0, 0), None)
            fgh.append(series(terms))
        f, g, h = fgh
        jac = poisson_bracket(f, poisson_bracket(g, h)) + \
            poisson_bracket(g, poisson_bracket(h, f)) + \
            poisson_bracket(h, poisson_bracket(f, g))
        assert jac.is_zero()
        leib = poisson_bracket(f, g * h) - \
            (poisson_bracket(f, g) * h + g * poisson_bracket(f, h))
        assert leib.is_zero()


def test_bracket_respects_degree_filtration():
    f = series({(-1, -1): 1})            # degree 2
    g = series({(0, -3): 5, (-1, -2): 1})  # degree 3
    br = poisson_bracket(f, g)
    assert br.min_degree() >= 5


def test_exp_ham_zero_is_identity():
    assert exp_ham(series({}), K).is_identity()


def test_exp_ham_dilogarithm_gives_elementary_wall():
    g = exp_ham(dilog_hamiltonian((0, -1)), K)
    expected_ax = {(0, 0): 1, (0, -1): 1}
    assert g.ax.terms == expected_ax
    assert g.bx == TruncSeries2.one(STANDARD_BASIS, K, QQ)


def test_exp_ham_diagonal_first_orders():
    c = Fraction(2, 3)
    g = exp_ham(series({(-1, -1): c}), K)
    assert g.ax.terms[(-1, -1)] == c
    assert g.ax.terms[(-2, -2)] == c * c / 2
    assert g.bx.terms[(-1, -1)] == -c
    assert g.bx.terms[(-2, -2)] == c * c / 2


def test_compose_identity_and_inverse():
    f = dilog_hamiltonian((0, -1))
    g = exp_ham(f, K)
    ident = SympAuto.identity(STANDARD_BASIS, K, QQ)
    assert ident.compose(g) == g
    assert g.compose(ident) == g
    assert g.compose(g.invert()).is_identity()
    assert g.invert().compose(g).is_identity()
    assert g.compose(exp_ham(-f, K)).is_identity()


def test_invert_matches_opposite_hamiltonian():
    f = series({(-1, -2): Fraction(1, 2), (0, -1): -1})
    assert exp_ham(f, K).invert() == exp_ham(-f, K)


def test_invert_of_elementary_wall_is_inverse_multiplier():
    g = exp_ham(dilog_hamiltonian((0, -1)), K)
    gi = g.invert()
    assert gi.ax == g.ax.invert()
    assert gi.bx == g.bx


def test_preserves_omega():
    assert SympAuto.identity(STANDARD_BASIS, K, QQ).preserves_omega()
    g = exp_ham(series({(-2, -1): 3, (0, -2): Fraction(1, 5)}), K)
    assert g.preserves_omega()
    # multiplying xi by any function of eta alone is a shear and stays symplectic
    shear = SympAuto(series({(0, 0): 1, (0, -1): 2, (0, -2): 1}),
                     TruncSeries2.one(STANDARD_BASIS, K, QQ))
    assert shear.preserves_omega()
    # scaling both coordinates by the same small function is not
    bad = SympAuto(series({(0, 0): 1, (0, -1): 1}),
                   series({(0, 0): 1, (0, -1): 1}))
    assert not bad.preserves_omega()


def test_log_ham_identity_and_roundtrip():
    ident = SympAuto.identity(STANDARD_BASIS, K, QQ)
    assert log_ham(ident, 1).is_zero()
    ham = series({(-1, -2): Fraction(5, 7)})
    assert log_ham(exp_ham(ham, K), 3) == ham


def test_log_ham_absent_defect_returns_zero():
    g = exp_ham(series({(-2, -1): 1}), K)  # lies in the degree >= 3 part
    assert log_ham(g, 2).is_zero()


def test_log_ham_rejects_non_symplectic():
    bad = SympAuto(series({(0, 0): 1, (-1, -1): 1}),
                   TruncSeries2.one(STANDARD_BASIS, K, QQ))
    with pytest.raises(InconsistentDefect):
        log_ham(bad, 2)


def test_residue():
    assert residue(series({(0, 0): 1})) == 1
    assert residue(series({(0, 0): 1, (0, -1): 1})) == 1
    assert residue(series({(-1, 1): 3, (0, 0): 7})) == 7
    assert residue(series({(-1, 1): 3})) == 0


def down_basis():
    return ConeBasis((0, -1), (1, 0))


def test_p_omega_constant():
    v = p_omega(series({(0, 0): Fraction(5, 3)}))
    assert v.value() == Fraction(5, 3)


def test_p_omega_elementary_wall_is_one():
    f = series({(0, 0): 1, (0, 1): 1}, basis=down_basis())  # 1 + eta
    assert p_omega(f).is_one()


def test_p_omega_with_valued_coefficient():
    ring = LaurentSeriesRing(12)
    f = TruncSeries2({(0, 0): ring.one, (-1, 0): ring.t(1)},
                     ConeBasis((1, 0), (0, 1)), 12, ring)
    assert p_omega(f).is_one()


def test_p_omega_detects_constant_perturbation():
    c = Fraction(1, 4)
    f = series({(0, 0): 1 + c, (0, -1): 1})
    assert not p_omega(f).is_one()
    assert p_omega(f).value() == 1 + c


def test_p_omega_multiplicative_with_cancellation():
    ring = LaurentSeriesRing(10)
    f = TruncSeries2({(0, 0): ring.one, (0, 1): ring.t(1), (0, -1): ring.t(1)},
                     STANDARD_BASIS, 10, ring, vmode=True)
    g = TruncSeries2({(0, 0): ring.one, (1, 0): ring.t(2)},
                     STANDARD_BASIS, 10, ring, vmode=True)
    assert p_omega(f * g) == p_omega(f) * p_omega(g)
    # the cancellation f has a genuinely nontrivial residue exponent
    assert not ring.is_zero(p_omega(f).exp_argument)


def test_p_omega_against_reference_volume():
    ring = LaurentSeriesRing(10)
    f = TruncSeries2({(0, 0): ring.one, (0, 1): ring.t(1), (0, -1): ring.t(1)},
                     STANDARD_BASIS, 10, ring, vmode=True)
    vol = TruncSeries2({(0, 0): ring.scalar(2)}, STANDARD_BASIS, 10, ring, vmode=True)
    # rescaling the volume form does not change the projection
    assert p_omega(f, vol) == p_omega(f)


def test_symp_filtration_degree():
    ring = LaurentSeriesRing(12)
    basis = STANDARD_BASIS
    ident = SympAuto.identity(basis, 6, ring)
    assert symp_filtration_degree(ident) == INF
    g = SympAuto(TruncSeries2({(0, 0): ring.one, (0, -1): ring.t(2)}, basis, 6, ring),
                 TruncSeries2.one(basis, 6, ring))
    assert symp_filtration_degree(g) == 2
    h = SympAuto(TruncSeries2({(0, 0): ring.one, (-1, 0): ring.t(3)}, basis, 6, ring),
                 TruncSeries2.one(basis, 6, ring))
    assert symp_filtration_degree(g.compose(h)) >= 2
    # the evaluation point shifts the filtration through the monomial size
    assert symp_filtration_degree(g, point=(0, -1)) == 1


def test_series_json_of_sympauto():
    g = exp_ham(series({(-1, -1): 1}), 4)
    doc = g.to_json()
    assert doc["cutoff"] == 4
    assert [[-1, -1], "1"] in [[list(t[0]), t[1]] for t in
                               [(tuple(rec[0]), rec[1]) for rec in doc["xi_multiplier"]]]


def test_series_json_roundtrip():
    s = series({(-1, -2): Fraction(3, 7), (0, -1): -2})
    doc = s.to_json()
    assert {"a": 0, "b": -1, "coeff": "-2"} in doc["terms"]
    assert TruncSeries2.from_json(doc, QQ) == s
