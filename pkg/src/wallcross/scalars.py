"""Exact coefficient rings with non-archimedean valuations.

Two rings are provided: the rationals with the trivial valuation, and
truncated formal Laurent series in one parameter ``t`` over the rationals
with the t-adic valuation.  All arithmetic is exact; truncation is the only
approximation and every series carries its own truncation order.
"""

from __future__ import annotations

from fractions import Fraction

INF = float("inf")

DEFAULT_TRUNC = 16

Rational = Fraction


def rational(x) -> int | Fraction:
    """Coerce ``x`` (int, Fraction, or a string like ``"3/4"``) to an exact rational.

    Integers are kept as plain ints: they interoperate with Fraction and are
    much faster, which matters in the series kernels.
    """
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, str):
        if "/" in x:
            p, q = x.split("/")
            return rational(Fraction(int(p), int(q)))
        return int(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class ValuedScalar:
    """Truncated Laurent series sum_{e < T} c_e t^e with rational coefficients.

    ``terms`` maps integer exponents to nonzero rational coefficients; every
    stored exponent is < ``trunc``.  Values are immutable by convention: no
    method mutates ``terms`` after construction.
    """

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=None, trunc: int = DEFAULT_TRUNC):
        clean = {}
        if terms:
            for e, c in terms.items():
                if e < trunc and c:
                    clean[e] = c
        self.terms = clean
        self.trunc = trunc

    @classmethod
    def constant(cls, c, trunc: int = DEFAULT_TRUNC) -> "ValuedScalar":
        return cls({0: rational(c)}, trunc)

    @classmethod
    def t_power(cls, e: int, trunc: int = DEFAULT_TRUNC, coeff=1) -> "ValuedScalar":
        return cls({e: rational(coeff)}, trunc)

    def val(self):
        """Least exponent with nonzero coefficient; +inf for the zero element."""
        if not self.terms:
            return INF
        return min(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _coerce(self, other):
        if isinstance(other, ValuedScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ValuedScalar({0: other}, self.trunc)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        trunc = min(self.trunc, o.trunc)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return ValuedScalar(terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return ValuedScalar({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        trunc = min(self.trunc, o.trunc)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = e1 + e2
                if e >= trunc:
                    continue
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return ValuedScalar(terms, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = ValuedScalar({0: 1}, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert(self) -> "ValuedScalar":
        """Multiplicative inverse: factor the leading term, expand a geometric series.

        For a series of valuation v known modulo t^T the inverse is reliable
        modulo t^(T-2v) when v > 0; the result carries that truncation order.
        """
        if not self.terms:
            raise ZeroDivisionError("inverting the zero series")
        v = min(self.terms)
        lead = self.terms[v]
        trunc = self.trunc - 2 * v if v > 0 else self.trunc
        # self = lead * t^v * (1 + r) with val(r) > 0
        rel = self.trunc - v  # relative precision of (1 + r)
        inv_lead = rational(Fraction(1, 1) / Fraction(lead))
        r = {e - v: rational(Fraction(c) * inv_lead) for e, c in self.terms.items() if e != v}
        acc = {0: 1}
        power = {0: 1}
        if r:
            dr = min(r)
            m = 1
            while m * dr < rel:
                new_power = {}
                for e1, c1 in power.items():
                    for e2, c2 in r.items():
                        e = e1 + e2
                        if e >= rel:
                            continue
                        s = new_power.get(e, 0) - c1 * c2
                        if s:
                            new_power[e] = s
                        else:
                            del new_power[e]
                power = new_power
                if not power:
                    break
                for e, c in power.items():
                    s = acc.get(e, 0) + c
                    if s:
                        acc[e] = s
                    else:
                        del acc[e]
                m += 1
        terms = {}
        for e, c in acc.items():
            ee = e - v
            if ee < trunc:
                cc = rational(Fraction(c) * inv_lead)
                if cc:
                    terms[ee] = cc
        return ValuedScalar(terms, trunc)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"ValuedScalar(0, T={self.trunc})"
        parts = [f"{format_rational(c)}*t^{e}" for e, c in sorted(self.terms.items())]
        return f"ValuedScalar({' + '.join(parts)}, T={self.trunc})"

    def to_json(self):
        return {
            "t": [[e, format_rational(c)] for e, c in sorted(self.terms.items())],
            "T": self.trunc,
        }

    @classmethod
    def from_json(cls, obj) -> "ValuedScalar":
        return cls({int(e): rational(c) for e, c in obj["t"]}, int(obj["T"]))


class RationalField:
    """The rationals with the trivial valuation (0 on units, +inf at 0)."""

    name = "QQ"
    zero = 0
    one = 1

    @staticmethod
    def scalar(x):
        return rational(x)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def invert(a):
        if a == 0:
            raise ZeroDivisionError("inverting 0")
        return rational(Fraction(1, 1) / Fraction(a))

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def val(a):
        return INF if a == 0 else 0

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def to_json(a):
        return format_rational(a)

    @staticmethod
    def from_json(obj):
        return rational(obj)

    def random_element(self, rng, span: int = 5):
        num = rng.randint(-span, span)
        den = rng.randint(1, 4)
        return rational(Fraction(num, den))


class LaurentSeriesRing:
    """Truncated Laurent series over the rationals with the t-adic valuation."""

    def __init__(self, trunc: int = DEFAULT_TRUNC):
        self.trunc = trunc
        self.name = f"QQ((t)) mod t^{trunc}"
        self.zero = ValuedScalar({}, trunc)
        self.one = ValuedScalar({0: 1}, trunc)

    def scalar(self, x):
        if isinstance(x, ValuedScalar):
            return x
        return ValuedScalar.constant(x, self.trunc)

    def t(self, e: int = 1, coeff=1):
        return ValuedScalar.t_power(e, self.trunc, coeff)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def invert(a):
        return a.invert()

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def val(a):
        return a.val()

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def to_json(a):
        return a.to_json()

    def from_json(self, obj):
        if isinstance(obj, (str, int)):
            return self.scalar(rational(obj))
        return ValuedScalar.from_json(obj)

    def random_element(self, rng, span: int = 5):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            e = rng.randint(0, min(4, self.trunc - 1))
            terms[e] = rational(Fraction(rng.randint(-span, span), rng.randint(1, 3)))
        return ValuedScalar(terms, self.trunc)


QQ = RationalField()


class RingAxiomFailure:
    def __init__(self, law: str, witnesses):
        self.law = law
        self.witnesses = witnesses

    def __repr__(self):
        return f"RingAxiomFailure({self.law!r}, {self.witnesses!r})"


class RingAxiomReport:
    """Outcome of the ring/valuation law suite on a finite sample set."""

    def __init__(self, ring_name: str, checked: int, failures):
        self.ring_name = ring_name
        self.checked = checked
        self.failures = failures

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def to_json(self):
        return {
            "ring": self.ring_name,
            "checked": self.checked,
            "passed": self.passed,
            "failures": [{"law": f.law, "witnesses": repr(f.witnesses)} for f in self.failures],
        }


def ring_axiom_suite(ring, samples) -> RingAxiomReport:
    """Assert ring axioms and valuation laws on all sample pairs.

    Laws checked: commutativity/associativity of + and *, distributivity,
    val(xy) = val(x) + val(y), the ultrametric inequality with equality for
    distinct valuations, val(0) = +inf, and two-sided inverses for units.
    """
    failures = []
    checked = 0

    def record(law, *witnesses):
        failures.append(RingAxiomFailure(law, witnesses))

    zero = ring.zero
    if ring.val(zero) != INF:
        record("val(0) = +inf", zero)
    samples = list(samples)
    for x in samples:
        for y in samples:
            checked += 1
            if not ring.eq(ring.add(x, y), ring.add(y, x)):
                record("additive commutativity", x, y)
            if not ring.eq(ring.mul(x, y), ring.mul(y, x)):
                record("multiplicative commutativity", x, y)
            if not (ring.is_zero(x) or ring.is_zero(y)):
                if ring.val(ring.mul(x, y)) != ring.val(x) + ring.val(y):
                    record("val(xy) = val(x) + val(y)", x, y)
            s = ring.add(x, y)
            lo = min(ring.val(x), ring.val(y))
            if ring.val(s) < lo:
                record("val(x+y) >= min(val x, val y)", x, y)
            if ring.val(x) != ring.val(y) and ring.val(s) != lo:
                record("ultrametric equality for distinct valuations", x, y)
            for z in samples:
                if not ring.eq(ring.add(ring.add(x, y), z), ring.add(x, ring.add(y, z))):
                    record("additive associativity", x, y, z)
                if not ring.eq(ring.mul(ring.mul(x, y), z), ring.mul(x, ring.mul(y, z))):
                    record("multiplicative associativity", x, y, z)
                if not ring.eq(ring.mul(x, ring.add(y, z)),
                               ring.add(ring.mul(x, y), ring.mul(x, z))):
                    record("distributivity", x, y, z)
        if not ring.is_zero(x) and ring.val(x) != INF:
            try:
                inv = ring.invert(x)
            except ZeroDivisionError:
                inv = None
            if inv is not None and ring.val(x) == 0:
                if not ring.eq(ring.mul(x, inv), ring.one):
                    record("x * invert(x) = 1 for units", x)
    return RingAxiomReport(getattr(ring, "name", type(ring).__name__), checked, failures)
