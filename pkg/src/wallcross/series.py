"""Truncated two-variable Laurent series and formal symplectomorphisms.

The coordinate ring is spanned by monomials R_mu = xi^a eta^b, mu = (a, b),
with the torus Poisson bracket {R_mu, R_nu} = (mu ^ nu) R_{mu+nu}.  Series
are graded against an ordered covector pair (alpha1, alpha2): a monomial
written as -n1*alpha1 - n2*alpha2 has degree n1 + n2, and everything is
truncated at a fixed order cutoff.  A symplectomorphism is stored through
its unit multipliers A, B with xi -> xi*A, eta -> eta*B.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import INF, QQ


def wedge(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


class BasisError(ValueError):
    pass


class InconsistentDefect(ValueError):
    """The xi- and eta-readings of a homogeneous defect disagree (non-symplectic input)."""


class NotAUnit(ValueError):
    pass


class ConeBasis:
    """Ordered covector pair (alpha1, alpha2) with alpha1 ^ alpha2 > 0, fixing the grading."""

    __slots__ = ("a1", "a2", "c")

    def __init__(self, a1=(1, 0), a2=(0, 1)):
        a1 = (int(a1[0]), int(a1[1]))
        a2 = (int(a2[0]), int(a2[1]))
        c = wedge(a1, a2)
        if c <= 0:
            raise BasisError(f"basis covectors must be positively oriented, got {a1}, {a2}")
        self.a1 = a1
        self.a2 = a2
        self.c = c

    def coords(self, mu):
        """(n1, n2) with mu = -n1*a1 - n2*a2, as exact fractions."""
        n1 = Fraction(-wedge(mu, self.a2), self.c)
        n2 = Fraction(-wedge(self.a1, mu), self.c)
        return n1, n2

    def degree(self, mu) -> Fraction:
        n1, n2 = self.coords(mu)
        return n1 + n2

    def degree_num(self, mu) -> int:
        """c * degree(mu); integer, cheap, monotone in degree."""
        return -wedge(mu, self.a2) - wedge(self.a1, mu)

    def in_cone(self, mu) -> bool:
        """Whether mu = -n1*a1 - n2*a2 for integers n1, n2 >= 0."""
        n1, n2 = self.coords(mu)
        return n1.denominator == 1 and n2.denominator == 1 and n1 >= 0 and n2 >= 0

    def __eq__(self, other):
        return isinstance(other, ConeBasis) and self.a1 == other.a1 and self.a2 == other.a2

    def __repr__(self):
        return f"ConeBasis({self.a1}, {self.a2})"


STANDARD_BASIS = ConeBasis()


class TruncSeries2:
    """Finite sum of c_mu * R_mu truncated at the basis degree cutoff.

    In the default grading mode a term survives iff degree(mu) < cutoff.
    With ``vmode=True`` the grading is t-adic instead: a term survives iff
    the valuation of its coefficient is < cutoff (used where the support is
    not confined to a cone but coefficients gain valuation).
    """

    __slots__ = ("terms", "basis", "cutoff", "ring", "vmode")

    def __init__(self, terms, basis=STANDARD_BASIS, cutoff=8, ring=QQ, vmode=False,
                 normalize=True):
        if normalize:
            clean = {}
            if vmode:
                val = ring.val
                for mu, c in terms.items():
                    if not ring.is_zero(c) and val(c) < cutoff:
                        clean[mu] = c
            else:
                lim = cutoff * basis.c
                dnum = basis.degree_num
                for mu, c in terms.items():
                    if not ring.is_zero(c) and dnum(mu) < lim:
                        clean[mu] = c
            terms = clean
        self.terms = terms
        self.basis = basis
        self.cutoff = cutoff
        self.ring = ring
        self.vmode = vmode

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, basis=STANDARD_BASIS, cutoff=8, ring=QQ, vmode=False):
        return cls({}, basis, cutoff, ring, vmode, normalize=False)

    @classmethod
    def one(cls, basis=STANDARD_BASIS, cutoff=8, ring=QQ, vmode=False):
        return cls({(0, 0): ring.one}, basis, cutoff, ring, vmode, normalize=False)

    @classmethod
    def monomial(cls, mu, coeff, basis=STANDARD_BASIS, cutoff=8, ring=QQ, vmode=False):
        return cls({(int(mu[0]), int(mu[1])): coeff}, basis, cutoff, ring, vmode)

    def _make(self, terms, normalize=True):
        return TruncSeries2(terms, self.basis, self.cutoff, self.ring, self.vmode, normalize)

    def with_cutoff(self, cutoff):
        if cutoff == self.cutoff:
            return self
        return TruncSeries2(self.terms, self.basis, cutoff, self.ring, self.vmode)

    # -- ring structure --------------------------------------------------

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get((0, 0), self.ring.zero)

    def __add__(self, other):
        terms = dict(self.terms)
        zero = self.ring.is_zero
        for mu, c in other.terms.items():
            s = terms.get(mu)
            s = c if s is None else s + c
            if zero(s):
                terms.pop(mu, None)
            else:
                terms[mu] = s
        return self._make(terms, normalize=False)

    def __neg__(self):
        return self._make({mu: -c for mu, c in self.terms.items()}, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, c):
        if self.ring.is_zero(c):
            return self._make({}, normalize=False)
        return self._make({mu: c * cc for mu, cc in self.terms.items()})

    def __mul__(self, other):
        zero_test = self.ring.is_zero
        terms = {}
        if self.vmode:
            val = self.ring.val
            lim = self.cutoff
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    c = c1 * c2
                    if val(c) >= lim:
                        continue
                    mu = (a1 + a2, b1 + b2)
                    s = terms.get(mu)
                    s = c if s is None else s + c
                    if zero_test(s):
                        terms.pop(mu, None)
                    else:
                        terms[mu] = s
            return self._make(terms, normalize=False)
        basis = self.basis
        lim = self.cutoff * basis.c
        p1, q1 = basis.a1
        p2, q2 = basis.a2
        # degree_num((a,b)) = -(a*q2 - b*p2) - (p1*b - q1*a) = a*(q1 - q2) + b*(p2 - p1)
        da = q1 - q2
        db = p2 - p1
        items2 = list(other.terms.items())
        for (a1c, b1c), c1 in self.terms.items():
            base = a1c * da + b1c * db
            for (a2c, b2c), c2 in items2:
                if base + a2c * da + b2c * db >= lim:
                    continue
                mu = (a1c + a2c, b1c + b2c)
                c = c1 * c2
                s = terms.get(mu)
                s = c if s is None else s + c
                if zero_test(s):
                    terms.pop(mu, None)
                else:
                    terms[mu] = s
        return self._make(terms, normalize=False)

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = self.one(self.basis, self.cutoff, self.ring, self.vmode)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def min_step(self):
        """Smallest positive degree (or valuation, in vmode) among non-constant terms."""
        best = None
        if self.vmode:
            for mu, c in self.terms.items():
                if mu == (0, 0):
                    continue
                v = self.ring.val(c)
                if best is None or v < best:
                    best = v
        else:
            dnum = self.basis.degree_num
            for mu in self.terms:
                if mu == (0, 0):
                    continue
                v = Fraction(dnum(mu), self.basis.c)
                if best is None or v < best:
                    best = v
        return best

    def invert(self):
        """Inverse of a unit u = a(1 + r) with a an invertible scalar and r small."""
        a = self.constant_term()
        if self.ring.is_zero(a):
            raise NotAUnit("series has no constant term")
        inv_a = self.ring.invert(a)
        r = self._make({mu: inv_a * c for mu, c in self.terms.items() if mu != (0, 0)})
        if r.is_zero():
            return self._make({(0, 0): inv_a}, normalize=False)
        step = r.min_step()
        if step is None or step <= 0:
            raise NotAUnit("non-constant part does not lie above the truncation grading")
        acc = self.one(self.basis, self.cutoff, self.ring, self.vmode)
        power = acc
        m = 1
        while m * step < self.cutoff:
            power = power * (-r)
            if power.is_zero():
                break
            acc = acc + power
            m += 1
        return acc.scalar_mul(inv_a)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries2):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        eq = self.ring.eq
        return all(eq(c, other.terms[mu]) for mu, c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "TruncSeries2(0)"
        bits = []
        for mu in sorted(self.terms):
            bits.append(f"({self.terms[mu]})*R{mu}")
        return "TruncSeries2(" + " + ".join(bits) + f", cutoff={self.cutoff})"

    def to_json(self):
        return {
            "terms": [{"a": a, "b": b, "coeff": self.ring.to_json(c)}
                      for (a, b), c in sorted(self.terms.items())],
            "basis": [list(self.basis.a1), list(self.basis.a2)],
            "cutoff": self.cutoff,
        }

    @classmethod
    def from_json(cls, obj, ring=QQ):
        basis = ConeBasis(tuple(obj["basis"][0]), tuple(obj["basis"][1]))
        terms = {(int(rec["a"]), int(rec["b"])): ring.from_json(rec["coeff"])
                 for rec in obj["terms"]}
        return cls(terms, basis, int(obj["cutoff"]), ring)

    # -- grading helpers --------------------------------------------------

    def homogeneous(self, d):
        """Terms of exact basis degree d."""
        lim = d * self.basis.c
        dnum = self.basis.degree_num
        return self._make({mu: c for mu, c in self.terms.items() if dnum(mu) == lim},
                          normalize=False)

    def min_degree(self):
        if not self.terms:
            return INF
        dnum = self.basis.degree_num
        return Fraction(min(dnum(mu) for mu in self.terms), self.basis.c)

    def in_cone(self):
        return all(self.basis.in_cone(mu) for mu in self.terms)

    def wedge_weight(self, alpha):
        """Map c_mu R_mu to (mu ^ alpha) c_mu R_mu."""
        out = {}
        for mu, c in self.terms.items():
            w = wedge(mu, alpha)
            if w:
                out[mu] = w * c if w != 1 else c
        return self._make(out, normalize=False)

    # -- calculus ---------------------------------------------------------

    def bracket(self, other):
        """Torus Poisson bracket, {R_mu, R_nu} = (mu ^ nu) R_{mu+nu}, truncated."""
        if self.basis is not other.basis and self.basis != other.basis:
            raise BasisError("bracket of series over different bases")
        zero_test = self.ring.is_zero
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                w = a1 * b2 - b1 * a2
                if not w:
                    continue
                c = w * (c1 * c2)
                mu = (a1 + a2, b1 + b2)
                s = terms.get(mu)
                s = c if s is None else s + c
                if zero_test(s):
                    terms.pop(mu, None)
                else:
                    terms[mu] = s
        return self._make(terms)


def poisson_bracket(f: TruncSeries2, g: TruncSeries2) -> TruncSeries2:
    return f.bracket(g)


def log_unit(u: TruncSeries2) -> TruncSeries2:
    """log of a unit with constant term 1: log(1+r) = sum (-1)^(m+1) r^m / m."""
    one = u.one(u.basis, u.cutoff, u.ring, u.vmode)
    r = u - one
    if r.is_zero():
        return u.zero(u.basis, u.cutoff, u.ring, u.vmode)
    step = r.min_step()
    if step is None or step <= 0:
        raise NotAUnit("log requires constant term exactly 1 and small remainder")
    acc = u.zero(u.basis, u.cutoff, u.ring, u.vmode)
    power = one
    m = 1
    while (m - 1) * step < u.cutoff:
        power = power * r
        if power.is_zero():
            break
        sign = 1 if m % 2 == 1 else -1
        acc = acc + power.scalar_mul(u.ring.scalar(Fraction(sign, m)))
        m += 1
    return acc


def exp_small(f: TruncSeries2) -> TruncSeries2:
    """exp of a series with positive grading: 1 + f + f^2/2! + ..."""
    if f.is_zero():
        return f.one(f.basis, f.cutoff, f.ring, f.vmode)
    step = f.min_step()
    if f.constant_term() != f.ring.zero and not f.ring.is_zero(f.constant_term()):
        raise NotAUnit("exp requires a series without constant term")
    if step is None or step <= 0:
        raise NotAUnit("exp requires a series above the truncation grading")
    acc = f.one(f.basis, f.cutoff, f.ring, f.vmode)
    power = acc
    fact = 1
    m = 1
    while (m - 1) * step < f.cutoff:
        power = power * f
        if power.is_zero():
            break
        fact *= m
        acc = acc + power.scalar_mul(f.ring.scalar(Fraction(1, fact)))
        m += 1
    return acc


class SympAuto:
    """Order-truncated formal symplectomorphism xi -> xi*A, eta -> eta*B.

    A and B are unit series (constant term 1 for the unipotent group handled
    here).  The object acts on the coordinate algebra by the substitution
    R_mu -> R_mu * A^a * B^b for mu = (a, b).
    """

    __slots__ = ("ax", "bx", "basis", "cutoff", "ring")

    def __init__(self, ax: TruncSeries2, bx: TruncSeries2):
        self.ax = ax
        self.bx = bx
        self.basis = ax.basis
        self.cutoff = ax.cutoff
        self.ring = ax.ring

    @classmethod
    def identity(cls, basis=STANDARD_BASIS, cutoff=8, ring=QQ):
        one = TruncSeries2.one(basis, cutoff, ring)
        return cls(one, one)

    @classmethod
    def from_images(cls, ax, bx):
        return cls(ax, bx)

    def is_identity(self):
        one = TruncSeries2.one(self.basis, self.cutoff, self.ring)
        return self.ax == one and self.bx == one

    def __eq__(self, other):
        if not isinstance(other, SympAuto):
            return NotImplemented
        return self.ax == other.ax and self.bx == other.bx

    def __repr__(self):
        return f"SympAuto(xi*{self.ax!r}, eta*{self.bx!r})"

    def with_cutoff(self, cutoff):
        return SympAuto(self.ax.with_cutoff(cutoff), self.bx.with_cutoff(cutoff))

    def substitute(self, s: TruncSeries2) -> TruncSeries2:
        """Image of a series under the substitution R_mu -> R_mu A^a B^b."""
        apow = {0: TruncSeries2.one(self.basis, s.cutoff, self.ring)}
        bpow = {0: apow[0]}
        ax = self.ax.with_cutoff(s.cutoff)
        bx = self.bx.with_cutoff(s.cutoff)
        axi = None
        bxi = None

        def power(cache, base, get_inv, n):
            if n in cache:
                return cache[n]
            if n > 0:
                cache[n] = power(cache, base, get_inv, n - 1) * base
            else:
                inv = get_inv()
                cache[n] = power(cache, base, get_inv, n + 1) * inv
            return cache[n]

        def ainv():
            nonlocal axi
            if axi is None:
                axi = ax.invert()
            return axi

        def binv():
            nonlocal bxi
            if bxi is None:
                bxi = bx.invert()
            return bxi

        # group by xi-exponent a: sum_a A^a * (sum_b c * R_(a,b) * B^b)
        rows = {}
        for (a, b), c in s.terms.items():
            rows.setdefault(a, []).append((b, c))
        out = TruncSeries2.zero(self.basis, s.cutoff, self.ring, s.vmode)
        for a, entries in rows.items():
            row = TruncSeries2.zero(self.basis, s.cutoff, self.ring, s.vmode)
            for b, c in entries:
                bp = power(bpow, bx, binv, b)
                shifted = {(ma + a, mb + b): c * cc for (ma, mb), cc in bp.terms.items()}
                row = row + TruncSeries2(shifted, self.basis, s.cutoff, self.ring, s.vmode)
            out = out + row * power(apow, ax, ainv, a)
        return out

    def compose(self, other: "SympAuto") -> "SympAuto":
        """Composition as point maps: self after other.

        On the algebra this substitutes ``other``'s images into ``self``'s:
        the xi-multiplier becomes other.ax * other(self.ax).
        """
        if self.basis != other.basis:
            raise BasisError("composition of automorphisms over different bases")
        k = min(self.cutoff, other.cutoff)
        ax = other.ax.with_cutoff(k) * other.substitute(self.ax.with_cutoff(k))
        bx = other.bx.with_cutoff(k) * other.substitute(self.bx.with_cutoff(k))
        return SympAuto(ax, bx)

    def invert(self) -> "SympAuto":
        """Two-sided inverse modulo the cutoff, by degree-growing fixed-point iteration."""
        k = self.cutoff
        h = SympAuto.identity(self.basis, min(2, k), self.ring)
        cut = 2
        while True:
            cut = min(cut + 1, k)
            g = self.with_cutoff(cut)
            ha = h.with_cutoff(cut)
            ax = ha.substitute(g.ax).invert()
            bx = ha.substitute(g.bx).invert()
            h = SympAuto(ax, bx)
            if cut == k:
                # one more pass at full order stabilizes the top degree
                ax = h.substitute(g.ax).invert()
                bx = h.substitute(g.bx).invert()
                h2 = SympAuto(ax, bx)
                if h2 == h:
                    return h
                h = h2

    def preserves_omega(self) -> bool:
        """Whether the substitution preserves d(log xi) ^ d(log eta) modulo the cutoff.

        The log-Jacobian determinant is computed exactly on the truncated ring.
        """
        one = TruncSeries2.one(self.basis, self.cutoff, self.ring)

        def euler(s, axis):
            out = {}
            for mu, c in s.terms.items():
                e = mu[axis]
                if e:
                    out[mu] = e * c if e != 1 else c
            return s._make(out, normalize=False)

        ai = self.ax.invert()
        bi = self.bx.invert()
        j11 = one + euler(self.ax, 0) * ai
        j12 = euler(self.ax, 1) * ai
        j21 = euler(self.bx, 0) * bi
        j22 = one + euler(self.bx, 1) * bi
        det = j11 * j22 - j12 * j21
        return det == one

    def to_json(self):
        ser = self.ring.to_json
        return {
            "xi_multiplier": [[list(mu), ser(c)] for mu, c in sorted(self.ax.terms.items())],
            "eta_multiplier": [[list(mu), ser(c)] for mu, c in sorted(self.bx.terms.items())],
            "cutoff": self.cutoff,
            "basis": [list(self.basis.a1), list(self.basis.a2)],
        }


def exp_ham(F: TruncSeries2, k: int | None = None) -> SympAuto:
    """Exponential of the Hamiltonian derivation {F, .} as a symplectomorphism.

    Each application of {F, .} raises total degree by at least one, so at
    most ``k`` iterations contribute.  F must lie in the positive-degree cone
    algebra for the grading of its basis.
    """
    if k is None:
        k = F.cutoff
    F = F.with_cutoff(k)
    if not F.is_zero():
        if F.min_degree() < 1 or not F.in_cone():
            raise BasisError("Hamiltonian must have cone support of degree >= 1")
    w1 = F.wedge_weight((1, 0))
    w2 = F.wedge_weight((0, 1))
    ring = F.ring

    def flow(w):
        acc = TruncSeries2.one(F.basis, k, ring)
        term = acc
        fact = 1
        for m in range(1, k + 1):
            term = w * term + F.bracket(term)
            if term.is_zero():
                break
            fact *= m
            acc = acc + term.scalar_mul(ring.scalar(Fraction(1, fact)))
        return acc

    return SympAuto(flow(w1), flow(w2))


def log_ham(g: SympAuto, k_low: int) -> TruncSeries2:
    """Degree-k_low Hamiltonian F with g = exp({F, .}) modulo degree k_low + 1.

    Requires g = id modulo degree k_low.  The coefficient of each monomial is
    read off both the xi- and the eta-image; a disagreement means the input
    is not symplectic and raises InconsistentDefect.
    """
    one = TruncSeries2.one(g.basis, g.cutoff, g.ring)
    da = g.ax - one
    db = g.bx - one
    if da.min_degree() < k_low or db.min_degree() < k_low:
        raise ValueError(f"automorphism is not trivial modulo degree {k_low}")
    a = da.homogeneous(k_low)
    b = db.homogeneous(k_low)
    terms = {}
    ring = g.ring
    for mu in set(a.terms) | set(b.terms):
        wa = wedge(mu, (1, 0))  # coefficient in the xi-image is f * wa
        wb = wedge(mu, (0, 1))
        ca = a.terms.get(mu, ring.zero)
        cb = b.terms.get(mu, ring.zero)
        if wa:
            f = ca * ring.scalar(Fraction(1, wa))
            if wb and not ring.eq(cb, wb * f):
                raise InconsistentDefect(f"xi/eta defect readings disagree at {mu}")
            if not (wb or ring.is_zero(cb)):
                raise InconsistentDefect(f"eta defect present at {mu} where none is allowed")
        elif wb:
            f = cb * ring.scalar(Fraction(1, wb))
            if not ring.is_zero(ca):
                raise InconsistentDefect(f"xi defect present at {mu} where none is allowed")
        else:
            raise InconsistentDefect(f"defect at the fixed monomial {mu}")
        if not ring.is_zero(f):
            terms[mu] = f
    return TruncSeries2(terms, g.basis, g.cutoff, g.ring)


def residue(f: TruncSeries2):
    """Constant term of a series written against the reference volume form."""
    return f.constant_term()


class UnitScalarExp:
    """Value a * exp(e) kept in factored form so equality with 1 stays exact."""

    __slots__ = ("unit_part", "exp_argument", "ring")

    def __init__(self, unit_part, exp_argument, ring):
        self.unit_part = unit_part
        self.exp_argument = exp_argument
        self.ring = ring

    def is_one(self) -> bool:
        try:
            return self.ring.eq(self.value(), self.ring.one)
        except NotAUnit:
            return self.ring.eq(self.unit_part, self.ring.one) and \
                self.ring.is_zero(self.exp_argument)

    def __mul__(self, other):
        return UnitScalarExp(self.unit_part * other.unit_part,
                             self.exp_argument + other.exp_argument, self.ring)

    def __eq__(self, other):
        """Equality of values; the (unit, exponent) decomposition is not canonical."""
        if not isinstance(other, UnitScalarExp):
            return NotImplemented
        try:
            return self.ring.eq(self.value(), other.value())
        except NotAUnit:
            # rational exponents: exp is transcendental at nonzero rationals,
            # so values agree iff the components do
            return self.ring.eq(self.unit_part, other.unit_part) and \
                self.ring.eq(self.exp_argument, other.exp_argument)

    def value(self):
        """Materialize a * exp(e); the argument must have positive valuation."""
        if self.ring.is_zero(self.exp_argument):
            return self.unit_part
        if self.ring.val(self.exp_argument) <= 0:
            raise NotAUnit("exp argument has non-positive valuation; value is not exact")
        acc = self.ring.one
        power = self.ring.one
        fact = 1
        m = 1
        while True:
            power = power * self.exp_argument
            if self.ring.is_zero(power):
                break
            fact *= m
            acc = acc + power * self.ring.scalar(Fraction(1, fact))
            m += 1
        return self.unit_part * acc

    def __repr__(self):
        return f"UnitScalarExp({self.unit_part!r} * exp({self.exp_argument!r}))"


def p_omega(f: TruncSeries2, ref_volume: TruncSeries2 | None = None) -> UnitScalarExp:
    """Multiplicative projection a * exp(Res(vol * log(1+r)) / Res(vol)) of a unit f = a(1+r).

    ``ref_volume`` is the density of the volume form against the canonical
    one (default 1).  Requires exact arithmetic over a characteristic-zero
    coefficient ring; the result is kept in factored (unit, exponent) form.
    """
    ring = f.ring
    a = f.constant_term()
    if ring.is_zero(a) or ring.val(a) != 0:
        raise NotAUnit("series is not a unit of valuation zero")
    u = f.scalar_mul(ring.invert(a))
    logs = log_unit(u)
    if ref_volume is None:
        num = logs.constant_term()
        den = ring.one
    else:
        num = (ref_volume * logs).constant_term()
        den = ref_volume.constant_term()
        if ring.is_zero(den):
            raise NotAUnit("reference volume has zero residue")
    e = num * ring.invert(den) if not ring.is_zero(num) else ring.zero
    return UnitScalarExp(a, e, ring)


def symp_filtration_degree(g: SympAuto, point=(0, 0)):
    """Largest r with log-size of (xi'/xi - 1), (eta'/eta - 1) below -r at the point.

    The size of a term c * R_mu at an evaluation point x is val(c) - <mu, x>;
    the filtration degree is the minimum over stored terms, +inf for the
    identity.  Coefficients must live in a valued ring for this to be
    informative (the rationals give 0/+inf).
    """
    best = INF
    ring = g.ring
    one = TruncSeries2.one(g.basis, g.cutoff, g.ring)
    for s in (g.ax - one, g.bx - one):
        for (a, b), c in s.terms.items():
            r = ring.val(c) - (a * point[0] + b * point[1])
            if r < best:
                best = r
    return best
