"""Integral affine structures: monodromy, the rotation-number pairing of loops,
the focus-focus local model, lifted SL(2,Z) words with their 1/12-index, the
affine Gauss-Bonnet checksum, and fixed vectors of valued monodromies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import QQ, format_rational, rational


class NotClosed(ValueError):
    pass


class AtSingularPoint(ValueError):
    pass


def _vec(p):
    return (rational(p[0]) if not isinstance(p[0], Fraction) else p[0],
            rational(p[1]) if not isinstance(p[1], Fraction) else p[1])


def _mat(m):
    return ((int(m[0][0]), int(m[0][1])), (int(m[1][0]), int(m[1][1])))


def mat_mul(m, n):
    return ((m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
            (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]))


def mat_vec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_inv(m):
    det = mat_det(m)
    if det not in (1, -1):
        raise ValueError(f"matrix {m} is not invertible over the integers")
    return ((det * m[1][1], -det * m[0][1]), (-det * m[1][0], det * m[0][0]))


IDENTITY_MATRIX = ((1, 0), (0, 1))
FOCUS_FOCUS_MATRIX = ((1, 1), (0, 1))


class AffineTransform:
    """x -> A x + b with A integral of determinant +-1 and rational translation b."""

    __slots__ = ("a", "b")

    def __init__(self, a=IDENTITY_MATRIX, b=(0, 0)):
        self.a = _mat(a)
        if mat_det(self.a) not in (1, -1):
            raise ValueError(f"linear part must have determinant +-1: {self.a}")
        self.b = _vec(b)

    @classmethod
    def identity(cls):
        return cls()

    def compose(self, other: "AffineTransform") -> "AffineTransform":
        """self after other: x -> A_self (A_other x + b_other) + b_self."""
        a = mat_mul(self.a, other.a)
        t = mat_vec(self.a, other.b)
        return AffineTransform(a, (t[0] + self.b[0], t[1] + self.b[1]))

    def inverse(self) -> "AffineTransform":
        ai = mat_inv(self.a)
        t = mat_vec(ai, self.b)
        return AffineTransform(ai, (-t[0], -t[1]))

    def apply(self, p):
        p = _vec(p)
        t = mat_vec(self.a, p)
        return (t[0] + self.b[0], t[1] + self.b[1])

    def apply_covector(self, alpha):
        """Parallel transport of a covector: alpha -> alpha . A^{-1}."""
        ai = mat_inv(self.a)
        return (alpha[0] * ai[0][0] + alpha[1] * ai[1][0],
                alpha[0] * ai[0][1] + alpha[1] * ai[1][1])

    def __eq__(self, other):
        if not isinstance(other, AffineTransform):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __repr__(self):
        return f"AffineTransform({self.a}, {self.b})"

    def to_json(self):
        return {"A": [list(self.a[0]), list(self.a[1])],
                "b": [format_rational(self.b[0]), format_rational(self.b[1])]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["A"], [rational(x) for x in obj.get("b", (0, 0))])


class LoopWord:
    """Chart-to-chart transitions along a loop; any word is a loop presentation."""

    __slots__ = ("transitions",)

    def __init__(self, transitions=()):
        self.transitions = list(transitions)

    def __add__(self, other):
        return LoopWord(self.transitions + other.transitions)


def monodromy(w: LoopWord) -> AffineTransform:
    """Ordered composition of the transitions, leftmost applied last."""
    result = AffineTransform.identity()
    for g in w.transitions:
        result = result.compose(g)
    return result


def focus_focus_transition(x0=0) -> AffineTransform:
    """Gluing across the cut from (x0, 0): (x, y) -> (x + y, y); fixes the cut pointwise."""
    del x0  # every cut position glues by the same transformation
    return AffineTransform(FOCUS_FOCUS_MATRIX)


def focus_focus_loop() -> LoopWord:
    return LoopWord([focus_focus_transition()])


def focus_focus_chart(p, side=None):
    """Modified integral affine coordinates (y, x + max(y, 0)) near the cut.

    Below the cut this is the (y, x) chart; ``side`` only names the limiting
    chart for points on the cut itself.
    """
    del side
    x, y = _vec(p)
    if (x, y) == (0, 0):
        raise AtSingularPoint("the chart is undefined at the singular point")
    return (y, x + max(y, 0))


@dataclass
class ChainSegment:
    """Piece of a singular 1-chain: displacement/crossing steps and a start covector.

    ``steps`` is a list of ("move", (dx, dy)) and ("cross", AffineTransform)
    items; the covector is transported across each crossing.
    """

    steps: list
    alpha0: tuple


class ChainWithCovector:
    def __init__(self, segments):
        self.segments = [s if isinstance(s, ChainSegment) else ChainSegment(*s)
                         for s in segments]


def _develop_segment(seg: ChainSegment):
    """Develop a segment into its initial tangent space.

    Returns (endpoint of developed path, transported covector).
    """
    alpha = tuple(seg.alpha0)
    dev = (Fraction(0), Fraction(0))
    lin = IDENTITY_MATRIX  # linear part of start chart -> current chart
    for kind, data in seg.steps:
        if kind == "move":
            d = _vec(data)
            pulled = mat_vec(mat_inv(lin), d)
            dev = (dev[0] + pulled[0], dev[1] + pulled[1])
        elif kind == "cross":
            g = data
            lin = mat_mul(g.a, lin)
            alpha = g.apply_covector(alpha)
        else:
            raise ValueError(f"unknown chain step {kind!r}")
    return dev, alpha


def rho_pairing(c: ChainWithCovector) -> Fraction:
    """Pairing of the affine-structure class with a closed covector-weighted chain.

    Develops each segment by the affine connection, pairs the developed
    endpoint with the segment's start covector, and sums.  Raises NotClosed
    when the covector does not return to itself around the chain.
    """
    total = Fraction(0)
    transported = None
    first_alpha = None
    for seg in c.segments:
        dev, alpha_end = _develop_segment(seg)
        if first_alpha is None:
            first_alpha = tuple(seg.alpha0)
        elif transported != tuple(seg.alpha0):
            raise NotClosed("covector is not transported consistently between segments")
        transported = alpha_end
        a0 = seg.alpha0
        total += a0[0] * dev[0] + a0[1] * dev[1]
    if c.segments and transported != first_alpha:
        raise NotClosed("covector does not return to itself around the chain")
    return total


# -- fixed vectors of valued monodromies ---------------------------------


def snf2(m):
    """Smith normal form of an integer 2x2 matrix: U m V = D diagonal,
    U and V unimodular."""
    a = [list(m[0]), list(m[1])]
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i][0] -= q * a[j][0]
        a[i][1] -= q * a[j][1]
        u[i][0] -= q * u[j][0]
        u[i][1] -= q * u[j][1]

    def col_op(i, j, q):  # col_i -= q * col_j
        a[0][i] -= q * a[0][j]
        a[1][i] -= q * a[1][j]
        v[0][i] -= q * v[0][j]
        v[1][i] -= q * v[1][j]

    def swap_rows():
        a[0], a[1] = a[1], a[0]
        u[0], u[1] = u[1], u[0]

    def swap_cols():
        a[0][0], a[0][1] = a[0][1], a[0][0]
        a[1][0], a[1][1] = a[1][1], a[1][0]
        v[0][0], v[0][1] = v[0][1], v[0][0]
        v[1][0], v[1][1] = v[1][1], v[1][0]

    while True:
        if a[0][0] == 0:
            if a[1][0] != 0:
                swap_rows()
            elif a[0][1] != 0:
                swap_cols()
            elif a[1][1] != 0:
                swap_rows()
                swap_cols()
            else:
                break
        if a[1][0] % a[0][0] == 0 and a[0][1] % a[0][0] == 0:
            row_op(1, 0, a[1][0] // a[0][0])
            col_op(1, 0, a[0][1] // a[0][0])
            if a[1][0] == 0 and a[0][1] == 0:
                break
        else:
            if a[1][0] % a[0][0] != 0:
                row_op(1, 0, a[1][0] // a[0][0])
                swap_rows()
            else:
                col_op(1, 0, a[0][1] // a[0][0])
                swap_cols()
    # diagonal with unimodular U, V is all the fixed-vector solver needs;
    # the divisibility normalization of the full Smith form is not enforced
    return (tuple(map(tuple, u)), ((a[0][0], 0), (0, a[1][1])), tuple(map(tuple, v)))


class KAffineTransform:
    """Monodromy with multiplicative translation part: v -> lam * A(v), where
    A acts on (K^x)^2 by (A v)_i = prod_j v_j^{A_ij}."""

    __slots__ = ("a", "lam", "ring")

    def __init__(self, a, lam, ring):
        self.a = _mat(a)
        if mat_det(self.a) not in (1, -1):
            raise ValueError("linear part must have determinant +-1")
        self.lam = tuple(lam)
        self.ring = ring
        for x in self.lam:
            if ring.is_zero(x):
                raise ValueError("translation components must be units")

    def shadow(self) -> AffineTransform:
        """The real affine monodromy x -> A x + (val lam_1, val lam_2).

        Taking valuations in lam * A(v) = v shows val(v) is fixed by exactly
        this affine map, so the valuation image of the fixed vectors sweeps
        its fixed-point set.
        """
        return AffineTransform(self.a, (self.ring.val(self.lam[0]),
                                        self.ring.val(self.lam[1])))

    def apply(self, v):
        av = (self._pow(v, self.a[0]), self._pow(v, self.a[1]))
        return (self.lam[0] * av[0], self.lam[1] * av[1])

    def _pow(self, v, row):
        out = self.ring.one
        for x, e in zip(v, row):
            if e > 0:
                for _ in range(e):
                    out = out * x
            elif e < 0:
                xi = self.ring.invert(x)
                for _ in range(-e):
                    out = out * xi
        return out

    def is_fixed(self, v) -> bool:
        w = self.apply(v)
        return self.ring.eq(w[0], v[0]) and self.ring.eq(w[1], v[1])


class FixedVectorFamily:
    """Solutions of lam * A(v) = v: a base point times free multiplicative directions."""

    def __init__(self, base=None, free_directions=(), torsion_orders=()):
        self.base = base
        self.free_directions = [tuple(w) for w in free_directions]
        self.torsion_orders = list(torsion_orders)

    @property
    def empty(self):
        return self.base is None

    def sample(self, ring, params):
        """Member of the family for given unit parameters, one per free direction."""
        if self.empty:
            raise ValueError("empty solution family")
        v = list(self.base)
        for w, s in zip(self.free_directions, params):
            for i in (0, 1):
                e = w[i]
                if e > 0:
                    for _ in range(e):
                        v[i] = v[i] * s
                elif e < 0:
                    si = ring.invert(s)
                    for _ in range(-e):
                        v[i] = v[i] * si
        return tuple(v)

    def val_locus(self, ring):
        """Affine subspace of Q^2 swept by valuations of the family:
        (point, direction list)."""
        if self.empty:
            return None
        point = (ring.val(self.base[0]), ring.val(self.base[1]))
        dirs = [w for w in self.free_directions if w != (0, 0)]
        return point, dirs


def _nth_root_rational(c, n: int):
    """Exact n-th root of a rational, or None."""
    c = Fraction(c)
    if n < 0:
        c = 1 / c
        n = -n
    if c < 0 and n % 2 == 0:
        return None
    sign = -1 if c < 0 else 1

    def iroot(m):
        if m < 2:
            return m
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    p = iroot(abs(c.numerator))
    q = iroot(c.denominator)
    if p is None or q is None:
        return None
    return sign * Fraction(p, q)


def _nth_root(ring, x, n: int):
    """Exact n-th root of a unit in the coefficient ring, or None."""
    if n == 1:
        return x
    if n == -1:
        return ring.invert(x)
    if ring is QQ or not hasattr(x, "terms"):
        return _nth_root_rational(x, n)
    v = x.val()
    if v == float("inf") or v % n != 0:
        return None
    from .scalars import ValuedScalar
    lead = x.terms[v]
    root_lead = _nth_root_rational(lead, n)
    if root_lead is None:
        return None
    # x = lead t^v (1 + r); root = root_lead t^(v/n) (1 + r)^(1/n) by binomial series
    inv_lead = QQ.invert(lead)
    r = ValuedScalar({e - v: rational(Fraction(c) * Fraction(inv_lead))
                      for e, c in x.terms.items() if e != v}, x.trunc - v)
    acc = ValuedScalar({0: 1}, x.trunc - v)
    power = acc
    coeff = Fraction(1)
    m = 1
    exponent = Fraction(1, n)
    while True:
        power = power * r
        if power.is_zero():
            break
        coeff = coeff * (exponent - (m - 1)) / m
        acc = acc + power * coeff
        m += 1
    root = ValuedScalar({e + v // n: c for e, c in acc.terms.items()}, x.trunc)
    return root * root_lead


def k_fixed_vectors(m: KAffineTransform) -> FixedVectorFamily:
    """Solve lam * A(v) = v over the unit group, multiplicatively.

    The equation is phi_{I-A}(v) = lam for the exponent-matrix action; Smith
    normal form decouples it into w_i^{d_i} = mu_i, solved coordinatewise by
    exact root extraction.  An empty family means no solution at the working
    truncation.
    """
    ring = m.ring
    ia = ((1 - m.a[0][0], -m.a[0][1]), (-m.a[1][0], 1 - m.a[1][1]))
    u, d, v = snf2(ia)

    def phi(mat, vec):
        def row(r):
            out = ring.one
            for x, e in zip(vec, r):
                if e > 0:
                    for _ in range(e):
                        out = out * x
                elif e < 0:
                    xi = ring.invert(x)
                    for _ in range(-e):
                        out = out * xi
            return out
        return (row(mat[0]), row(mat[1]))

    mu = phi(u, m.lam)
    w = []
    free = []
    torsion = []
    for i in (0, 1):
        di = d[i][i]
        if di == 0:
            if not ring.eq(mu[i], ring.one):
                return FixedVectorFamily()
            w.append(ring.one)
            free.append(i)
        else:
            root = _nth_root(ring, mu[i], di)
            if root is None:
                return FixedVectorFamily()
            w.append(root)
            if abs(di) > 1 and abs(di) % 2 == 0:
                torsion.append(abs(di))
    base = phi(v, w)
    directions = [(v[0][i], v[1][i]) for i in free]
    return FixedVectorFamily(base, directions, torsion)


def fixed_affine_set(t: AffineTransform):
    """Fixed points of x -> A x + b over Q: None, or (point, direction list)."""
    a = t.a
    b = t.b
    m = ((a[0][0] - 1, a[0][1]), (a[1][0], a[1][1] - 1))  # (A - I) x = -b
    rhs = (-b[0], -b[1])
    det = mat_det(m)
    if det != 0:
        x = (Fraction(rhs[0] * m[1][1] - m[0][1] * rhs[1], det),
             Fraction(m[0][0] * rhs[1] - rhs[0] * m[1][0], det))
        return x, []
    rows = [(m[0], rhs[0]), (m[1], rhs[1])]
    rows = [r for r in rows if r[0] != (0, 0) or r[1] != 0]
    if not rows:
        return (Fraction(0), Fraction(0)), [(1, 0), (0, 1)]
    (r1, c1) = rows[0]
    for (r2, c2) in rows[1:]:
        if r1[0] * c2 - r2[0] * c1 != 0 or r1[1] * c2 - r2[1] * c1 != 0:
            return None
    if r1 == (0, 0):
        return None
    if r1[0] != 0:
        point = (Fraction(c1, r1[0]), Fraction(0))
    else:
        point = (Fraction(0), Fraction(c1, r1[1]))
    direction = (-r1[1], r1[0])
    g = math.gcd(abs(direction[0]), abs(direction[1]))
    return point, [(direction[0] // g, direction[1] // g)]


# -- lifted SL(2,Z) words -------------------------------------------------


S_MATRIX = ((0, -1), (1, 0))
T_MATRIX = ((1, 1), (0, 1))
# order-3 generator: the inverse of S*T; with these choices the word
# a2 * a3^-1 projects to T up to sign and carries index +1/12
A2_MATRIX = S_MATRIX
A3_MATRIX = mat_inv(mat_mul(S_MATRIX, T_MATRIX))


class LiftedWord:
    """Word in generators a2, a3 of the lifted SL(2,Z); u = a3^6 is central."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        clean = []
        for gen, e in letters:
            if gen not in (2, 3) or e == 0:
                raise ValueError(f"bad letter ({gen}, {e})")
            clean.append((gen, int(e)))
        self.letters = clean

    @classmethod
    def from_string(cls, text: str) -> "LiftedWord":
        """Parse words like "a2 a3^-1 a3^6"; "u" abbreviates a3^6 and
        "focus-focus" the canonical singular-point word."""
        letters = []
        for token in text.replace(",", " ").split():
            if token in ("focus-focus", "focus_focus"):
                letters.extend([(2, 1), (3, -1)])
                continue
            if token == "u":
                letters.append((3, 6))
                continue
            if "^" in token:
                head, exp = token.split("^")
            else:
                head, exp = token, "1"
            if head not in ("a2", "a3"):
                raise ValueError(f"unknown generator {head!r}")
            letters.append((int(head[1]), int(exp)))
        return cls(letters)

    def __mul__(self, other):
        return LiftedWord(self.letters + other.letters)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return LiftedWord(self.letters * n)

    def inverse(self):
        return LiftedWord([(g, -e) for g, e in reversed(self.letters)])

    def exponent_sums(self):
        e2 = sum(e for g, e in self.letters if g == 2)
        e3 = sum(e for g, e in self.letters if g == 3)
        return e2, e3

    def project(self):
        """Image in SL(2,Z), well defined up to sign."""
        out = IDENTITY_MATRIX
        for g, e in self.letters:
            mat = A2_MATRIX if g == 2 else A3_MATRIX
            step = mat if e > 0 else mat_inv(mat)
            for _ in range(abs(e)):
                out = mat_mul(out, step)
        return out

    def to_string(self):
        return " ".join(f"a{g}" if e == 1 else f"a{g}^{e}" for g, e in self.letters)

    def __repr__(self):
        return f"LiftedWord({self.to_string() or '1'})"


def focus_focus_word() -> LiftedWord:
    """Canonical lift of the positively oriented standard-singularity loop (index 1/12)."""
    return LiftedWord([(2, 1), (3, -1)])


def u_word(power: int = 1) -> LiftedWord:
    return LiftedWord([(3, 6 * power)]) if power else LiftedWord()


def i_homomorphism(w: LiftedWord) -> Fraction:
    """(3 e2 + 2 e3) / 12; invariant under the relations a2^2 = a3^3, a2^4 = a3^6."""
    e2, e3 = w.exponent_sums()
    return Fraction(3 * e2 + 2 * e3, 12)


def matrix_to_lift(m, winding: int = 0) -> LiftedWord:
    """Word projecting to +-m, via the Euclidean S,T-decomposition, plus u^winding.

    T-letters lift to a2 a3^-1 (or a3 a2^-1 for T^-1) and S to a2; the
    canonical focus-focus matrix therefore lifts to the word of index 1/12.
    """
    m = _mat(m)
    if mat_det(m) != 1:
        raise ValueError("matrix must have determinant 1")
    st: list[tuple[str, int]] = []
    cur = m
    s_inv = mat_inv(S_MATRIX)
    while cur[1][0] != 0:
        a, c = cur[0][0], cur[1][0]
        q = a // c
        if q != 0:
            st.append(("T", q))
            tinv = ((1, -q), (0, 1))
            cur = mat_mul(tinv, cur)
        st.append(("S", 1))
        cur = mat_mul(s_inv, cur)
    if cur[0][0] == 1:
        if cur[0][1] != 0:
            st.append(("T", cur[0][1]))
    else:
        st.append(("S", 2))  # central -1
        if cur[0][1] != 0:
            st.append(("T", -cur[0][1]))
    letters = []
    for kind, e in st:
        if kind == "S":
            letters.append((2, e))
        elif e > 0:
            letters.extend([(2, 1), (3, -1)] * e)
        else:
            letters.extend([(3, 1), (2, -1)] * (-e))
    if winding:
        letters.append((3, 6 * winding))
    return LiftedWord(letters)


class GaussBonnetReport:
    """Both sides of the affine Gauss-Bonnet checksum for a closed surface."""

    def __init__(self, contributions, genus):
        self.contributions = list(contributions)
        self.genus = genus
        self.total = sum(self.contributions, Fraction(0))
        self.euler_characteristic = Fraction(2 - 2 * genus)

    @property
    def passed(self):
        return self.total == self.euler_characteristic

    def to_json(self):
        return {
            "local_indices": [format_rational(c) for c in self.contributions],
            "total": format_rational(self.total),
            "euler_characteristic": format_rational(self.euler_characteristic),
            "genus": self.genus,
            "passed": self.passed,
        }


def gauss_bonnet_check(singularities, genus: int) -> GaussBonnetReport:
    """Sum the local 1/12-indices of the singularity words against 2 - 2*genus."""
    return GaussBonnetReport([i_homomorphism(w) for w in singularities], genus)
