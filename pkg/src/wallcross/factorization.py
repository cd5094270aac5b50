"""Slope decomposition of unipotent symplectomorphisms into ordered wall products.

A wall at coprime slope (n1, n2) acts by xi -> xi f(z)^n2, eta -> eta f(z)^-n1
with z the inverse monomial of the slope covector and f = 1 + sum c_n z^n.
The ordered product over increasing slopes is a bijection onto the unipotent
group; ``factorize`` inverts it degree by degree through central defects.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import QQ, format_rational, rational
from .series import (BasisError, ConeBasis, STANDARD_BASIS, SympAuto, TruncSeries2,
                     log_ham, wedge)


class NotInCone(ValueError):
    """Input automorphism has correction terms outside the allowed cone."""


class FactorizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Slope:
    """Coprime direction (n1, n2) with n2/n1 the rational slope; (1,0) is slope 0, (0,1) slope infinity."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or (self.n1, self.n2) == (0, 0):
            raise ValueError(f"slope components must be non-negative and not both zero: {self}")
        if math.gcd(self.n1, self.n2) != 1:
            raise ValueError(f"slope components must be coprime: {self}")

    def __lt__(self, other: "Slope") -> bool:
        # n2/n1 < m2/m1 via integer cross products; no division.
        return self.n2 * other.n1 < self.n1 * other.n2

    def __le__(self, other: "Slope") -> bool:
        return self == other or self < other

    def degree(self) -> int:
        return self.n1 + self.n2

    def __repr__(self):
        return f"Slope({self.n1},{self.n2})"


class WallFunction:
    """One-variable wall function f(z) = 1 + sum_{n>=1} c_n z^n, constant term exactly 1."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs=None, ring=QQ):
        self.coeffs = {int(n): c for n, c in (coeffs or {}).items() if not ring.is_zero(c)}
        if any(n < 1 for n in self.coeffs):
            raise ValueError("wall function powers must be >= 1")
        self.ring = ring

    @classmethod
    def one(cls, ring=QQ):
        return cls({}, ring)

    @classmethod
    def from_list(cls, coeffs, ring=QQ):
        return cls({n + 1: ring.scalar(c) for n, c in enumerate(coeffs)}, ring)

    def is_trivial(self) -> bool:
        return not self.coeffs

    def truncated(self, nmax: int) -> "WallFunction":
        return WallFunction({n: c for n, c in self.coeffs.items() if n <= nmax}, self.ring)

    def mul(self, other: "WallFunction", nmax: int) -> "WallFunction":
        """Product of wall functions keeping powers <= nmax."""
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            if n <= nmax:
                s = out.get(n, self.ring.zero) + c
                if self.ring.is_zero(s):
                    out.pop(n, None)
                else:
                    out[n] = s
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                if n > nmax:
                    continue
                s = out.get(n, self.ring.zero) + c1 * c2
                if self.ring.is_zero(s):
                    out.pop(n, None)
                else:
                    out[n] = s
        return WallFunction(out, self.ring)

    def __eq__(self, other):
        if not isinstance(other, WallFunction):
            return NotImplemented
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(self.ring.eq(c, other.coeffs[n]) for n, c in self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "WallFunction(1)"
        bits = [f"({self.coeffs[n]})z^{n}" for n in sorted(self.coeffs)]
        return "WallFunction(1 + " + " + ".join(bits) + ")"

    def to_json(self):
        return {str(n): self.ring.to_json(c) for n, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, obj, ring=QQ):
        return cls({int(n): ring.from_json(c) for n, c in obj.items()}, ring)


def wall_series(alpha, wall: WallFunction, power: int, k: int, ring=QQ,
                basis: ConeBasis = STANDARD_BASIS) -> TruncSeries2:
    """f(z)^power as a truncated series, z the inverse monomial of the covector alpha."""
    za, zb = -alpha[0], -alpha[1]
    terms = {(0, 0): ring.one}
    for n, c in wall.coeffs.items():
        terms[(n * za, n * zb)] = c
    f = TruncSeries2(terms, basis, k, ring)
    return f ** power


def wedge_wall(alpha, wall: WallFunction, k: int, ring=QQ,
               basis: ConeBasis = STANDARD_BASIS) -> SympAuto:
    """Wall automorphism R_mu -> R_mu f(z)^(mu ^ alpha) for the covector alpha."""
    a, b = int(alpha[0]), int(alpha[1])
    ax = wall_series((a, b), wall, b, k, ring, basis)        # (1,0) ^ (a,b) = b
    bx = wall_series((a, b), wall, -a, k, ring, basis)       # (0,1) ^ (a,b) = -a
    return SympAuto(ax, bx)


def slope_auto(s: Slope, f: WallFunction, k: int, ring=QQ,
               basis: ConeBasis = STANDARD_BASIS) -> SympAuto:
    """Automorphism of the slope-(n1,n2) wall: xi -> xi f^n2, eta -> eta f^-n1.

    Relative to a general basis the slope covector is n1*alpha1 + n2*alpha2.
    """
    alpha = (s.n1 * basis.a1[0] + s.n2 * basis.a2[0],
             s.n1 * basis.a1[1] + s.n2 * basis.a2[1])
    return wedge_wall(alpha, f, k, ring, basis)


class SlopeFactorization:
    """Ordered map from coprime slopes to wall functions, below a degree cutoff."""

    def __init__(self, factors, cutoff: int, ring=QQ, basis: ConeBasis = STANDARD_BASIS):
        self.factors = {s: f for s, f in factors.items() if not f.is_trivial()}
        self.cutoff = cutoff
        self.ring = ring
        self.basis = basis

    def slopes(self):
        return sorted(self.factors)

    def __eq__(self, other):
        if not isinstance(other, SlopeFactorization):
            return NotImplemented
        return self.cutoff == other.cutoff and self.factors == other.factors

    def __repr__(self):
        inner = ", ".join(f"{s!r}: {f!r}" for s, f in sorted(self.factors.items()))
        return f"SlopeFactorization({{{inner}}}, cutoff={self.cutoff})"

    def to_json(self):
        return {
            "order": self.cutoff,
            "factors": [{"slope": [s.n1, s.n2], "coeffs": f.to_json()}
                        for s, f in sorted(self.factors.items())],
        }

    @classmethod
    def from_json(cls, obj, ring=QQ):
        factors = {}
        for rec in obj["factors"]:
            s = Slope(int(rec["slope"][0]), int(rec["slope"][1]))
            factors[s] = WallFunction.from_json(rec["coeffs"], ring)
        return cls(factors, int(obj["order"]), ring)


def ordered_product(sf: SlopeFactorization) -> SympAuto:
    """Compose the slope automorphisms in increasing slope order, leftmost applied last."""
    result = SympAuto.identity(sf.basis, sf.cutoff, sf.ring)
    for s in sf.slopes():
        result = result.compose(slope_auto(s, sf.factors[s], sf.cutoff, sf.ring, sf.basis))
    return result


def _check_cone(g: SympAuto):
    one = TruncSeries2.one(g.basis, g.cutoff, g.ring)
    for s in (g.ax - one, g.bx - one):
        for mu in s.terms:
            if not g.basis.in_cone(mu):
                raise NotInCone(f"correction term at {mu} lies outside the cone of {g.basis}")
        if not s.is_zero() and s.min_degree() < 1:
            raise NotInCone("correction terms must have degree >= 1")


def factorize(g: SympAuto, k: int | None = None) -> SlopeFactorization:
    """Unique slope factorization with ordered_product(result) = g modulo degree k.

    Inductive in the degree: at each degree the central defect between the
    current ordered product and the target is extracted as a homogeneous
    Hamiltonian, split by slope, and absorbed into the wall functions.
    """
    if k is None:
        k = g.cutoff
    g = g.with_cutoff(k)
    _check_cone(g)
    ring = g.ring
    basis = g.basis
    ginv = g.invert()
    walls: dict[Slope, WallFunction] = {}
    for d in range(1, k):
        cut = d + 1
        partial = SlopeFactorization(walls, cut, ring, basis)
        p = ordered_product(partial)
        defect = p.compose(ginv.with_cutoff(cut))
        if defect.is_identity():
            continue
        ham = log_ham(defect, d)
        for mu, c in ham.terms.items():
            n1f, n2f = basis.coords(mu)
            m1, m2 = int(n1f), int(n2f)
            n = math.gcd(m1, m2)
            s = Slope(m1 // n, m2 // n)
            # absorbing exp(-{c z^n, .}) multiplies the wall by (1 - n*c*z^n)
            # up to higher-degree terms fixed in later rounds
            delta = -(n * c)
            nmax = (k - 1) // s.degree()
            wall = walls.get(s, WallFunction.one(ring))
            walls[s] = wall.mul(WallFunction({n: delta}, ring), nmax)
    result = SlopeFactorization(walls, k, ring, basis)
    check = ordered_product(result).compose(ginv)
    if not check.is_identity():
        raise FactorizationError("ordered product of computed factors does not reproduce the input")
    return result


class IntegralityReport:
    """Wall-coefficient table of a two-wall collision, with integrality verdict."""

    def __init__(self, table, counterexamples, cutoff):
        self.table = table
        self.counterexamples = counterexamples
        self.cutoff = cutoff

    @property
    def passed(self):
        return not self.counterexamples

    def to_json(self):
        return {
            "order": self.cutoff,
            "passed": self.passed,
            "factors": [{"slope": [s.n1, s.n2],
                         "coeffs": {str(n): format_rational(c) for n, c in sorted(f.coeffs.items())}}
                        for s, f in sorted(self.table.items())],
            "counterexamples": [
                {"slope": [s.n1, s.n2], "power": n, "coeff": format_rational(c)}
                for s, n, c in self.counterexamples
            ],
        }


def integrality_probe(f0: WallFunction, finf: WallFunction, k: int) -> IntegralityReport:
    """Factorize the slope-0 / slope-infinity collision and assert integer wall coefficients.

    Any non-integer coefficient is reported as a counterexample; with integer
    inputs this signals an implementation bug.
    """
    for f in (f0, finf):
        for n, c in f.coeffs.items():
            if Fraction(c).denominator != 1:
                raise ValueError("integrality probe requires integer input walls")
    g = slope_auto(Slope(0, 1), finf, k).compose(slope_auto(Slope(1, 0), f0, k))
    sf = factorize(g, k)
    bad = []
    for s, f in sf.factors.items():
        for n, c in f.coeffs.items():
            if Fraction(c).denominator != 1:
                bad.append((s, n, c))
    return IntegralityReport(sf.factors, bad, k)


def _angle_class(u):
    """Counterclockwise ordering key pieces for a nonzero integer vector."""
    a, b = u
    if a > 0 and b >= 0:
        half, quad = 0, 0
    elif a <= 0 and b > 0:
        half, quad = 0, 1
    elif a < 0 and b <= 0:
        half, quad = 1, 0
    else:
        half, quad = 1, 1
    return half, quad


def ccw_less(u, v) -> bool:
    """Strict counterclockwise order starting from the positive x-axis."""
    cu, cv = _angle_class(u), _angle_class(v)
    if cu != cv:
        return cu < cv
    return wedge(u, v) > 0


def cone_basis_for(covectors) -> ConeBasis:
    """Positively oriented basis whose cone contains every given covector.

    The rays are sorted cyclically; a sector of angle < 180 degrees containing
    all of them exists iff some cyclic gap between consecutive rays exceeds
    180 degrees.  Raises BasisError when no such sector exists.
    """
    rays = []
    for u in covectors:
        u = (int(u[0]), int(u[1]))
        if u == (0, 0):
            raise BasisError("zero covector")
        g = math.gcd(abs(u[0]), abs(u[1]))
        r = (u[0] // g, u[1] // g)
        if r not in rays:
            rays.append(r)
    if len(rays) == 1:
        u = rays[0]
        return ConeBasis(u, (-u[1], u[0]))
    rays.sort(key=functools.cmp_to_key(
        lambda u, v: -1 if ccw_less(u, v) else (1 if ccw_less(v, u) else 0)))
    m = len(rays)
    for i in range(m):
        u = rays[i]
        v = rays[(i + 1) % m]
        # counterclockwise gap from u to v exceeds 180 degrees; at most one such gap
        if wedge(u, v) < 0:
            lo, hi = v, u
            if wedge(lo, hi) > 0 and \
                    all(wedge(lo, r) >= 0 and wedge(r, hi) >= 0 for r in rays):
                return ConeBasis(lo, hi)
            break
    raise BasisError(f"covectors {rays} do not span a proper cone")


def vertex_consistency(walls_in_cyclic_order, k: int, ring=QQ, basis=None) -> bool:
    """Whether the cyclic product of wall crossings around a point is the identity.

    Each entry is (outward_direction, wall, incoming) with ``wall`` either a
    WallFunction or a SympAuto and ``incoming`` marking the half-line running
    into the point (those factors enter inverted).  Entries must be listed in
    cyclic order around the point; the result does not depend on the starting
    entry.  Without an explicit grading ``basis`` the minimal cone spanned by
    the wall covectors is used.
    """
    entries = []
    for entry in walls_in_cyclic_order:
        if len(entry) == 2:
            direction, wall = entry
            incoming = False
        else:
            direction, wall, incoming = entry
        entries.append(((int(direction[0]), int(direction[1])), wall, incoming))
    covs = []
    for direction, wall, incoming in entries:
        alpha = (-direction[0], -direction[1]) if incoming else direction
        covs.append(alpha)
    if basis is None:
        basis = cone_basis_for(covs)
    acc = SympAuto.identity(basis, k, ring)
    for (direction, wall, incoming), alpha in zip(entries, covs):
        if isinstance(wall, SympAuto):
            if wall.basis == basis:
                phi = wall
            else:
                phi = SympAuto(
                    TruncSeries2(wall.ax.terms, basis, k, ring),
                    TruncSeries2(wall.bx.terms, basis, k, ring),
                )
        else:
            phi = wedge_wall(alpha, wall, k, ring, basis)
        if incoming:
            phi = phi.invert()
        acc = acc.compose(phi)
    return acc.is_identity()
