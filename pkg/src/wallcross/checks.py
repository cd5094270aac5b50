"""Randomized property suites: the acceptance identities, runnable with any seed.

Each check returns a CheckResult with a deterministic JSON payload; the CLI
``check-all`` subcommand runs the whole battery.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from . import affine, scatter, tropical
from .factorization import (Slope, SlopeFactorization, WallFunction, integrality_probe,
                            factorize, ordered_product, slope_auto)
from .scalars import QQ, LaurentSeriesRing, ValuedScalar, rational
from .scatter import (OrphanWallError, ScatterError, SingularPoint, TripleCollision,
                      attach_walls, check_vertex, evolve, initial_lines,
                      kaffine_invariance_check, transport)
from .series import (STANDARD_BASIS, TruncSeries2, exp_ham, log_ham, p_omega,
                     poisson_bracket)
from .tropical import LaurentPoly, is_affine_on, pl_add, val_function


class CheckResult:
    def __init__(self, name, passed, details=None, seconds=0.0):
        self.name = name
        self.passed = passed
        self.details = details or {}
        self.seconds = seconds

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name} ({self.seconds:.2f}s)"

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "details": self.details}


def _timed(name, fn):
    t0 = time.time()
    passed, details = fn()
    return CheckResult(name, passed, details, time.time() - t0)


# -- factorization ---------------------------------------------------------


def random_slope_factorization(rng, k=8, max_slopes=5, span=5) -> SlopeFactorization:
    slopes = [Slope(a, b) for a in range(0, k) for b in range(0, k)
              if (a, b) != (0, 0) and math.gcd(a, b) == 1 and a + b <= k - 1]
    chosen = rng.sample(slopes, rng.randint(1, max_slopes))
    factors = {}
    for s in chosen:
        nmax = (k - 1) // s.degree()
        coeffs = {n: rng.randint(-span, span) for n in range(1, nmax + 1)}
        factors[s] = WallFunction(coeffs)
    return SlopeFactorization(factors, k)


def check_factorization_roundtrip(seed=1, cases=200, k=8) -> CheckResult:
    def run():
        rng = random.Random(seed)
        for i in range(cases):
            sf = random_slope_factorization(rng, k)
            back = factorize(ordered_product(sf), k)
            if back != sf:
                return False, {"case": i, "input": sf.to_json(), "output": back.to_json()}
        return True, {"cases": cases, "order": k}
    return _timed("factorization round-trip", run)


def check_pentagon(k=12) -> CheckResult:
    def run():
        one = WallFunction({1: 1})
        g = slope_auto(Slope(0, 1), one, k).compose(slope_auto(Slope(1, 0), one, k))
        sf = factorize(g, k)
        expected = {Slope(1, 0): one, Slope(1, 1): one, Slope(0, 1): one}
        ok = sf.factors == expected
        oracle = ordered_product(SlopeFactorization(expected, k))
        ok = ok and oracle == g
        return ok, {"order": k, "factors": sf.to_json()["factors"]}
    return _timed("pentagon configuration", run)


def check_integrality(seed=2, cases=50, k=8) -> CheckResult:
    def run():
        rng = random.Random(seed)
        for i in range(cases):
            f0 = WallFunction({n: rng.randint(-5, 5) for n in range(1, k)})
            finf = WallFunction({n: rng.randint(-5, 5) for n in range(1, k)})
            report = integrality_probe(f0, finf, k)
            if not report.passed:
                return False, {"case": i, "report": report.to_json()}
        return True, {"cases": cases, "order": k}
    return _timed("integrality of collision walls", run)


# -- Gauss-Bonnet ----------------------------------------------------------


def check_gauss_bonnet() -> CheckResult:
    def run():
        ff = affine.focus_focus_word()
        sphere = affine.gauss_bonnet_check([ff] * 24, genus=0)
        quartic = affine.gauss_bonnet_check([affine.matrix_to_lift(((1, 4), (0, 1)))] * 6,
                                            genus=0)
        torus = affine.gauss_bonnet_check([], genus=1)
        details = {"sphere_24": sphere.to_json(), "six_quarter_turns": quartic.to_json(),
                   "torus": torus.to_json()}
        return sphere.passed and quartic.passed and torus.passed, details
    return _timed("Gauss-Bonnet checksums", run)


# -- tropical --------------------------------------------------------------


def random_laurent(rng, ring, dim, max_terms=4, max_exp=3, max_val=3) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = tuple(rng.randint(-max_exp, max_exp) for _ in range(dim))
        coeff = ValuedScalar({rng.randint(0, max_val):
                              rational(Fraction(rng.choice([c for c in range(-4, 5) if c]),
                                                rng.randint(1, 3)))}, ring.trunc)
        terms[exp] = coeff
    return LaurentPoly(terms, dim, ring)


def check_tropical(seed=3, pairs=100, concavity_points=1000, lemma_pairs=20) -> CheckResult:
    def run():
        rng = random.Random(seed)
        ring = LaurentSeriesRing(32)
        for i in range(pairs):
            dim = rng.choice([1, 2])
            f = random_laurent(rng, ring, dim)
            g = random_laurent(rng, ring, dim)
            if val_function(f * g) != pl_add(val_function(f), val_function(g)):
                return False, {"stage": "additivity", "case": i}
        checked = 0
        while checked < concavity_points:
            dim = rng.choice([1, 2])
            u = val_function(random_laurent(rng, ring, dim))
            for _ in range(25):
                p = tuple(Fraction(rng.randint(-40, 40), 8) for _ in range(dim))
                q = tuple(Fraction(rng.randint(-40, 40), 8) for _ in range(dim))
                mid = tuple((a + b) / 2 for a, b in zip(p, q))
                if u(mid) < (u(p) + u(q)) / 2:
                    return False, {"stage": "concavity", "points": [str(p), str(q)]}
                checked += 1
        for i in range(lemma_pairs):
            if not _lemma_affine_case(rng, ring):
                return False, {"stage": "affine-detection", "case": i}
        return True, {"pairs": pairs, "concavity_points": checked,
                      "affine_detection_pairs": lemma_pairs}
    return _timed("tropical Val suite", run)


def _lemma_affine_case(rng, ring) -> bool:
    """A unit monomial times (1 + t z^J) and its inverse expansion: the product
    is 1, both tropicalizations must be affine on a region where z^J is small."""
    dim = rng.choice([1, 2])
    ivec = tuple(rng.randint(-2, 2) for _ in range(dim))
    jvec = tuple(rng.randint(-2, 2) for _ in range(dim))
    if all(j == 0 for j in jvec):
        jvec = (1,) * dim
    c = ValuedScalar({rng.randint(0, 2): Fraction(rng.choice([1, 2, 3]))}, ring.trunc)
    t = ring.t(1)
    f_terms = {ivec: c, tuple(i + j for i, j in zip(ivec, jvec)): c * t}
    f = LaurentPoly(f_terms, dim, ring)
    cinv = c.invert()
    g_terms = {}
    sign = 1
    power = ring.one
    for m in range(ring.trunc + 1):
        coeff = cinv * power if sign > 0 else -(cinv * power)
        exp = tuple(-i + m * j for i, j in zip(ivec, jvec))
        if not coeff.is_zero():
            g_terms[exp] = g_terms.get(exp, ring.zero) + coeff
        power = power * t
        sign = -sign
    g = LaurentPoly(g_terms, dim, ring)
    prod = f * g
    if len(prod.terms) != 1 or set(prod.terms) != {(0,) * dim}:
        return False
    # region where <J, x> < 1: scale a box around -J
    if dim == 1:
        center = Fraction(-jvec[0])
        h = Fraction(1, 4)
        region = [(center - h,), (center + h,)]
    else:
        center = (Fraction(-jvec[0]), Fraction(-jvec[1]))
        h = Fraction(1, 4)
        region = [(center[0] - h, center[1] - h), (center[0] + h, center[1] - h),
                  (center[0] + h, center[1] + h), (center[0] - h, center[1] + h)]
    uf, ug = val_function(f), val_function(g)
    total = pl_add(uf, ug)
    if not (is_affine_on(uf, region) and is_affine_on(ug, region)):
        return False
    return all(total(p) == 0 for p in region)


# -- scattering ------------------------------------------------------------


def random_scatter_config(rng):
    n = rng.randint(2, 4)
    n_vert = rng.randint(1, n - 1)
    xs = rng.sample(range(3, 40), n_vert)
    ys = rng.sample(range(4, 42), n - n_vert)
    seeds = [SingularPoint((Fraction(x, 64), Fraction(-1, 64)), (0, 1)) for x in xs]
    seeds += [SingularPoint((Fraction(-1, 81), Fraction(y, 81)), (1, 0)) for y in ys]
    return seeds


def _shrunk(window, p):
    x0, x1, y0, y1 = window
    if (p[0] - x0) * (y1 - y0) >= (p[1] - y0) * (x1 - x0):
        return (x0, p[0], y0, y1)
    return (x0, x1, y0, p[1])


def build_random_diagram(rng, k=6, order_cutoff=6, tries=60, min_events=1,
                         require_cascade=False):
    """Random admissible configuration: seeds are resampled on degeneracies and
    the window is shrunk below structural concurrences of straight rays."""
    last = None
    for _ in range(tries):
        seeds = random_scatter_config(rng)
        window = (0, 3, 0, 3)
        for _shrinks in range(14):
            d = initial_lines(seeds, window, order_cutoff, k)
            try:
                evolve(d)
                attach_walls(d)
            except TripleCollision as exc:
                last = exc
                if exc.point is None:
                    break
                window = _shrunk(window, exc.point)
                continue
            except OrphanWallError as exc:
                last = exc
                break
            cascade = any(d.lines[ev.line1].kind == "composite" or
                          d.lines[ev.line2].kind == "composite" for ev in d.events)
            if len(d.events) >= min_events and (cascade or not require_cascade):
                return d
            break
    raise ScatterError(f"could not draw a valid configuration: {last}")


def _random_free_point(rng, d, denom=64):
    x0, x1, y0, y1 = d.window
    for _ in range(200):
        p = (x0 + (x1 - x0) * Fraction(rng.randint(1, denom - 1), denom),
             y0 + (y1 - y0) * Fraction(rng.randint(1, denom - 1), denom))
        if not any(scatter._on_ray(line, p) for line in d.lines.values()):
            return p
    raise ScatterError("no free point found")


def check_scatter(seed=4, k=6, order_cutoff=6, diagrams=3, path_pairs=20) -> CheckResult:
    def run():
        rng = random.Random(seed)
        stats = {"diagrams": [], "path_pairs": 0}
        pairs_done = 0
        for _ in range(diagrams):
            d = build_random_diagram(rng, k, order_cutoff, require_cascade=True)
            for ev in d.events:
                if not check_vertex(d, ev):
                    return False, {"stage": "vertex", "event": ev.to_json()}
            for line in d.lines.values():
                if not line.wall.is_trivial():
                    if not kaffine_invariance_check(line.wall, line.alpha, d.ring, k):
                        return False, {"stage": "kaffine", "line": line.id}
            stats["diagrams"].append({"lines": len(d.lines), "events": len(d.events)})
            want = max(1, (path_pairs + diagrams - 1) // diagrams)
            got = 0
            while got < want and pairs_done < path_pairs:
                try:
                    x = _random_free_point(rng, d)
                    y = _random_free_point(rng, d)
                    w1 = _random_free_point(rng, d)
                    w2 = _random_free_point(rng, d)
                    t1 = transport(d, x, y, [w1])
                    t2 = transport(d, x, y, [w2])
                except ScatterError:
                    continue
                if t1 != t2:
                    return False, {"stage": "transport",
                                   "points": [str(x), str(y), str(w1), str(w2)]}
                got += 1
                pairs_done += 1
        stats["path_pairs"] = pairs_done
        return pairs_done >= path_pairs, stats
    return _timed("scattering consistency", run)


# -- poisson kernel --------------------------------------------------------


def random_hamiltonian(rng, k=6, max_terms=3, span=3) -> TruncSeries2:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(1, k - 1)
        n1 = rng.randint(0, d)
        n2 = d - n1
        c = Fraction(rng.choice([c for c in range(-span, span + 1) if c]),
                     rng.randint(1, 2))
        terms[(-n1, -n2)] = terms.get((-n1, -n2), 0) + c
    return TruncSeries2(terms, STANDARD_BASIS, k, QQ)


def check_poisson(seed=5, triples=100, k=6) -> CheckResult:
    def run():
        rng = random.Random(seed)
        zero = TruncSeries2.zero(STANDARD_BASIS, k, QQ)
        for i in range(triples):
            f = random_hamiltonian(rng, k)
            g = random_hamiltonian(rng, k)
            h = random_hamiltonian(rng, k)
            jacobi = poisson_bracket(f, poisson_bracket(g, h)) + \
                poisson_bracket(g, poisson_bracket(h, f)) + \
                poisson_bracket(h, poisson_bracket(f, g))
            if not jacobi == zero:
                return False, {"stage": "jacobi", "case": i}
            leibniz = poisson_bracket(f, g * h) - (poisson_bracket(f, g) * h +
                                                   g * poisson_bracket(f, h))
            if not leibniz == zero:
                return False, {"stage": "leibniz", "case": i}
            k1, k2 = f.min_degree(), g.min_degree()
            br = poisson_bracket(f, g)
            if not br.is_zero() and br.min_degree() < k1 + k2:
                return False, {"stage": "filtration", "case": i}
        for i in range(20):
            f = random_hamiltonian(rng, k)
            gf = exp_ham(f, k)
            gb = exp_ham(-f, k)
            if not gf.compose(gb).is_identity() or not gb.compose(gf).is_identity():
                return False, {"stage": "exp-inverse", "case": i}
            if gf.invert() != gb:
                return False, {"stage": "invert-vs-exp", "case": i}
            if not gf.preserves_omega():
                return False, {"stage": "symplectic", "case": i}
            g2 = exp_ham(random_hamiltonian(rng, k), k)
            if not gf.compose(g2).preserves_omega():
                return False, {"stage": "symplectic-compose", "case": i}
        # homogeneous log/exp round-trip
        for i in range(20):
            d = rng.randint(1, k - 1)
            n1 = rng.randint(0, d)
            c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            ham = TruncSeries2({(-n1, -(d - n1)): c}, STANDARD_BASIS, k, QQ)
            got = log_ham(exp_ham(ham, k), d)
            if got != ham:
                return False, {"stage": "log-exp", "case": i}
        # p_omega multiplicativity on units of valuation zero
        ring = LaurentSeriesRing(12)
        for i in range(20):
            f = _random_unit(rng, ring, 12)
            g = _random_unit(rng, ring, 12)
            if p_omega(f * g) != p_omega(f) * p_omega(g):
                return False, {"stage": "p-omega", "case": i}
        return True, {"triples": triples, "order": k}
    return _timed("poisson kernel", run)


def _random_unit(rng, ring, k) -> TruncSeries2:
    terms = {(0, 0): ring.one}
    for _ in range(rng.randint(1, 3)):
        mu = (rng.randint(-2, 2), rng.randint(-2, 2))
        if mu == (0, 0):
            continue
        terms[mu] = ring.t(rng.randint(1, 3), rng.randint(-3, 3))
    return TruncSeries2(terms, STANDARD_BASIS, k, ring, vmode=True)


# -- fixed vectors ---------------------------------------------------------


def check_fixed_vectors() -> CheckResult:
    def run():
        ring = LaurentSeriesRing(12)
        t_mat = ((1, 1), (0, 1))
        m1 = affine.KAffineTransform(t_mat, (ring.one, ring.one), ring)
        fam1 = affine.k_fixed_vectors(m1)
        if fam1.empty or fam1.free_directions != [(1, 0)]:
            return False, {"stage": "one-parameter family"}
        if not ring.eq(fam1.base[1], ring.one):
            return False, {"stage": "family base"}
        sample = fam1.sample(ring, [ring.t(2) + ring.one])
        if not m1.is_fixed(sample):
            return False, {"stage": "family membership"}
        m2 = affine.KAffineTransform(t_mat, (ring.one, ring.t(1)), ring)
        if not affine.k_fixed_vectors(m2).empty:
            return False, {"stage": "empty case"}
        locus = fam1.val_locus(ring)
        shadow = affine.fixed_affine_set(m1.shadow())
        if not _same_affine_locus(locus, shadow):
            return False, {"stage": "val locus", "locus": str(locus), "shadow": str(shadow)}
        m3 = affine.KAffineTransform(t_mat, (ring.t(1), ring.one), ring)
        fam3 = affine.k_fixed_vectors(m3)
        if fam3.empty or not m3.is_fixed(fam3.sample(ring, [ring.one])):
            return False, {"stage": "shifted family"}
        if not _same_affine_locus(fam3.val_locus(ring), affine.fixed_affine_set(m3.shadow())):
            return False, {"stage": "shifted val locus"}
        flip = affine.KAffineTransform(((1, 0), (0, -1)), (ring.one, ring.t(2)), ring)
        fam4 = affine.k_fixed_vectors(flip)
        if fam4.empty or not flip.is_fixed(fam4.sample(ring, [ring.t(3)])):
            return False, {"stage": "root case"}
        if not _same_affine_locus(fam4.val_locus(ring), affine.fixed_affine_set(flip.shadow())):
            return False, {"stage": "root val locus"}
        return True, {"cases": 4}
    return _timed("fixed-vector solver", run)


def _normalize_dirs(dirs):
    out = set()
    for d in dirs:
        if d == (0, 0):
            continue
        g = math.gcd(abs(d[0]), abs(d[1]))
        d = (d[0] // g, d[1] // g)
        if d[0] < 0 or (d[0] == 0 and d[1] < 0):
            d = (-d[0], -d[1])
        out.add(d)
    return out


def _same_affine_locus(locus, shadow):
    if locus is None or shadow is None:
        return locus is None and shadow is None
    (p1, d1), (p2, d2) = locus, shadow
    if _normalize_dirs(d1) != _normalize_dirs(d2):
        return False
    diff = (Fraction(p1[0]) - Fraction(p2[0]), Fraction(p1[1]) - Fraction(p2[1]))
    if diff == (0, 0):
        return True
    dirs = _normalize_dirs(d1)
    return any(diff[0] * d[1] - diff[1] * d[0] == 0 for d in dirs)


# -- runner ----------------------------------------------------------------


def run_all(seed=1, series_order=6, fast=False):
    scale = 5 if fast else 1
    return [
        check_factorization_roundtrip(seed, cases=200 // scale, k=8),
        check_pentagon(k=12),
        check_integrality(seed + 1, cases=50 // scale, k=8),
        check_gauss_bonnet(),
        check_tropical(seed + 2, pairs=100 // scale,
                       concavity_points=1000 // scale, lemma_pairs=20 // scale),
        check_scatter(seed + 3, k=series_order, order_cutoff=series_order,
                      diagrams=max(1, 3 // scale), path_pairs=20 // scale),
        check_poisson(seed + 4, triples=100 // scale, k=series_order),
        check_fixed_vectors(),
    ]
