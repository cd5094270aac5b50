"""Acceptance battery: every criterion at its stated size and tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line per
criterion (the same suites back ``wallcross check-all``).  All comparisons
are exact; the only tolerances are the two runtime budgets.
"""

from wallcross import checks


def report(number, result, budget=None):
    status = "PASS" if result.passed else "FAIL"
    extra = f" [{result.seconds:.2f}s / budget {budget}s]" if budget else \
        f" [{result.seconds:.2f}s]"
    print(f"ACCEPTANCE {number}: {result.name}: {status}{extra}")
    assert result.passed, result.details
    if budget is not None:
        assert result.seconds < budget, f"runtime {result.seconds:.2f}s over {budget}s budget"


def test_acceptance_1_factorization_roundtrip():
    # 200 random slope factorizations, <= 5 slopes, integer coefficients in
    # [-5, 5], order 8; exact reproduction within a 30 s budget
    result = checks.check_factorization_roundtrip(seed=1, cases=200, k=8)
    report(1, result, budget=30)


def test_acceptance_2_pentagon_configuration():
    # the elementary two-wall collision at order 12 factors into walls 1+z at
    # slopes (1,0), (1,1), (0,1) and nothing else, against the direct oracle
    result = checks.check_pentagon(k=12)
    report(2, result)


def test_acceptance_3_integrality():
    # 50 random integer wall pairs at order 8: every produced coefficient is
    # an integer, zero tolerance
    result = checks.check_integrality(seed=2, cases=50, k=8)
    report(3, result)


def test_acceptance_4_gauss_bonnet():
    # 24 * 1/12 = 2 (sphere), 6 * 1/3 = 2 (quadruple-turn structure), 0 (torus)
    result = checks.check_gauss_bonnet()
    report(4, result)


def test_acceptance_5_tropical_suite():
    # additivity on 100 random pairs (exact piece sets), concavity at 1000
    # point pairs, affine detection on 20 unit/inverse pairs
    result = checks.check_tropical(seed=3, pairs=100, concavity_points=1000,
                                   lemma_pairs=20)
    report(5, result)


def test_acceptance_6_scattering_consistency():
    # diagrams with up to 4 singular points at C = k = 6: vertex consistency
    # at every event, 20 homotopic path pairs, invariance of every wall
    result = checks.check_scatter(seed=4, k=6, order_cutoff=6, diagrams=3,
                                  path_pairs=20)
    report(6, result, budget=60)


def test_acceptance_7_poisson_kernel():
    # Jacobi/Leibniz on 100 random triples at order 6, exponential/inverse
    # round-trips, symplectic form preserved on all generated automorphisms
    result = checks.check_poisson(seed=5, triples=100, k=6)
    report(7, result)


def test_acceptance_8_fixed_vector_solver():
    # focus-focus family: one-parameter family for unit translations, empty
    # for the obstructed case, valuation locus = real fixed axis
    result = checks.check_fixed_vectors()
    report(8, result)
