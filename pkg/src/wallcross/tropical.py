"""Tropicalizations of Laurent polynomials: concave piecewise-linear functions.

The tropicalization of f = sum c_I z^I is the concave function
min_I (val(c_I) - <I, x>).  Pieces are kept extensionally as a finite
min-family; pruning keeps exactly the pieces that are the unique minimum
somewhere, decided by exact rational feasibility (no floating point).
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import INF, QQ, rational


class ZeroPolynomial(ValueError):
    pass


class EmptyRegion(ValueError):
    pass


class LaurentPoly:
    """Finitely supported Laurent polynomial in 1 or 2 variables over a valued ring."""

    __slots__ = ("terms", "dim", "ring")

    def __init__(self, terms, dim: int, ring=QQ):
        if dim not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        self.dim = dim
        self.ring = ring
        clean = {}
        for exp, c in terms.items():
            key = (int(exp),) if isinstance(exp, int) else tuple(int(e) for e in exp)
            if len(key) != dim:
                raise ValueError(f"exponent {key} has wrong dimension")
            if not ring.is_zero(c):
                clean[key] = c
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if self.ring.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return LaurentPoly(terms, self.dim, self.ring)

    def __mul__(self, other):
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e)
                s = c if s is None else s + c
                if self.ring.is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return LaurentPoly(terms, self.dim, self.ring)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.dim != other.dim or self.terms.keys() != other.terms.keys():
            return False
        return all(self.ring.eq(c, other.terms[e]) for e, c in self.terms.items())

    def __repr__(self):
        bits = [f"({c})z^{e}" for e, c in sorted(self.terms.items())]
        return "LaurentPoly(" + (" + ".join(bits) if bits else "0") + ")"


def _feasible_strict(constraints, dim):
    """Whether {x in Q^dim : <d, x> > e for all (d, e)} is nonempty.

    Fourier-Motzkin elimination with exact rationals; strict systems are
    open, so rational feasibility equals real feasibility.
    """
    for d, e in constraints:
        if all(di == 0 for di in d) and e >= 0:
            return False
    if dim == 1:
        lo, hi = None, None
        for (d,), e in constraints:
            if d == 0:
                continue
            bound = Fraction(e, d)
            if d > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        return lo is None or hi is None or lo < hi
    lowers, uppers, ones = [], [], []
    for (a, b), e in constraints:
        if b > 0:
            lowers.append((a, b, e))
        elif b < 0:
            uppers.append((a, b, e))
        elif a != 0:
            ones.append(((a,), e))
        elif e >= 0:
            return False
    for a1, b1, e1 in lowers:
        for a2, b2, e2 in uppers:
            # (e1 - a1 x)/b1 < (e2 - a2 x)/b2 with b1 > 0 > b2
            ones.append(((a2 * b1 - a1 * b2,), e2 * b1 - e1 * b2))
    return _feasible_strict(ones, 1)


class PLFunction:
    """Concave function min over affine pieces q - <I, x> with integer linear parts."""

    __slots__ = ("pieces", "dim")

    def __init__(self, pieces, dim: int, prune: bool = True):
        best = {}
        for q, ivec in pieces:
            ivec = tuple(int(i) for i in ivec)
            q = rational(q) if not isinstance(q, Fraction) else q
            if ivec not in best or q < best[ivec]:
                best[ivec] = q
        cleaned = [(q, ivec) for ivec, q in best.items()]
        if prune and len(cleaned) > 1:
            cleaned = self._essential(cleaned, dim)
        self.pieces = tuple(sorted(cleaned, key=lambda p: (p[1], p[0])))
        self.dim = dim

    @staticmethod
    def _essential(pieces, dim):
        keep = []
        for idx, (q, ivec) in enumerate(pieces):
            constraints = []
            for jdx, (q2, jvec) in enumerate(pieces):
                if jdx == idx:
                    continue
                d = tuple(a - b for a, b in zip(ivec, jvec))
                constraints.append((d, q - q2))
            if _feasible_strict(constraints, dim):
                keep.append((q, ivec))
        return keep

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            x = (x,)
        best = None
        for q, ivec in self.pieces:
            v = q - sum(i * xi for i, xi in zip(ivec, x))
            if best is None or v < best:
                best = v
        if best is None:
            raise ZeroPolynomial("piecewise-linear function with no pieces")
        return best

    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return self.dim == other.dim and self.pieces == other.pieces

    def __repr__(self):
        bits = [f"{q} - <{list(ivec)},x>" for q, ivec in self.pieces]
        return "PLFunction(min{" + ", ".join(bits) + "})"


def val_function(f: LaurentPoly) -> PLFunction:
    """Tropicalization min_I (val(c_I) - <I, x>); one affine piece per monomial."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no tropicalization")
    return PLFunction([(f.ring.val(c), e) for e, c in f.terms.items()], f.dim)


def pl_add(u: PLFunction, v: PLFunction) -> PLFunction:
    """Pointwise sum: all pairwise sums of pieces, pruned."""
    if u.dim != v.dim:
        raise ValueError("dimension mismatch")
    pieces = []
    for q1, i1 in u.pieces:
        for q2, i2 in v.pieces:
            pieces.append((q1 + q2, tuple(a + b for a, b in zip(i1, i2))))
    return PLFunction(pieces, u.dim)


def is_affine_on(u: PLFunction, region) -> bool:
    """Whether a single piece achieves the minimum on the whole convex region.

    By concavity a piece attains the min on the region iff it does at every
    vertex, so the test is exact vertex evaluation.
    """
    vertices = [(_as_point(p, u.dim)) for p in region]
    if not vertices:
        raise EmptyRegion("region needs at least one vertex")
    values = [u(p) for p in vertices]
    for q, ivec in u.pieces:
        if all(q - sum(i * xi for i, xi in zip(ivec, p)) == val
               for p, val in zip(vertices, values)):
            return True
    return False


def _as_point(p, dim):
    if isinstance(p, (int, Fraction)):
        p = (p,)
    p = tuple(rational(c) if not isinstance(c, Fraction) else c for c in p)
    if len(p) != dim:
        raise ValueError(f"point {p} has wrong dimension")
    return p


def gauss_seminorm(f: LaurentPoly, x):
    """min_I (val(c_I) - <I, x>): the valuation of the fiber seminorm at x."""
    x = _as_point(x, f.dim)
    if f.is_zero():
        return INF
    return min(f.ring.val(c) - sum(i * xi for i, xi in zip(e, x))
               for e, c in f.terms.items())


def tate_deck_transform(f: LaurentPoly, k: int) -> LaurentPoly:
    """Substitute z -> q^k z in the two-variable (q, z) ring: (m, n) -> (m + k n, n)."""
    if f.dim != 2:
        raise ValueError("deck transformation needs the two-variable (q, z) ring")
    return LaurentPoly({(m + k * n, n): c for (m, n), c in f.terms.items()}, 2, f.ring)


def tate_inf_functional(f: LaurentPoly, x):
    """min over terms of m + n*x for f in the (q, z) ring; transforms by x -> x + k
    under the deck transformation."""
    if f.is_zero():
        return INF
    x = rational(x) if not isinstance(x, Fraction) else x
    return min(m + n * x for (m, n) in f.terms)
