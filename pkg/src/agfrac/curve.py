"""Function-field machinery for curves x^u = L(y) with one point at infinity.

L is a separable linearized polynomial, L(y) = sum_i a_i y^(q0^i) with
a_0, a_r nonzero, and gcd(u, q0^r) = 1 so that the plane model has a single
point P_inf at infinity.  There the coordinate functions have pole orders

    -v(x) = rho_x := q0^r        -v(y) = rho_y := u,

the Weierstrass semigroup is <rho_x, u>, and the genus of the model is
(u-1)(rho_x-1)/2.  The Hermitian curve x^(q0+1) = y^q0 + y is the instance
``CurveModel.hermitian(q0)``.

Functions regular away from P_inf live in the coordinate ring.  They are kept
in a canonical monomial form x^a y^b with 0 <= a < u (x^u is always rewritten
to L(y)), under which distinct monomials have distinct pole orders
a*rho_x + b*u, so the pole order of an element is just the maximum over its
stored monomials.  One-point divisors beta*P_inf are represented throughout
by their integer degree beta.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from . import linalg


class Point(NamedTuple):
    """Affine point, coordinates stored as field element indices."""
    x: int
    y: int


class NotDivisibleError(ArithmeticError):
    """Exact division failed: the numerator is not a ring multiple of the divisor."""


class CurveModel:
    def __init__(self, field, u: int, frob_base: int, coeffs):
        """Curve x^u = L(y) over ``field`` with L(y) = sum coeffs[i] * y^(frob_base^i)."""
        coeffs = [int(c) for c in coeffs]
        if u < 2:
            raise ValueError("exponent u must be at least 2")
        if len(coeffs) < 1 or coeffs[0] == field.zero or coeffs[-1] == field.zero:
            raise ValueError("L must be separable with nonzero leading coefficient")
        if any(not (0 <= c < field.order) for c in coeffs):
            raise ValueError("L coefficient outside the base field")
        q0 = frob_base
        p = field.char
        while q0 > 1 and q0 % p == 0:
            q0 //= p
        if frob_base < 2 or q0 != 1:
            raise ValueError("frobenius base must be a power of the characteristic")
        self.field = field
        self.u = u
        self.frob_base = frob_base
        self.coeffs = tuple(coeffs)
        self.rho_x = frob_base ** (len(coeffs) - 1)
        self.rho_y = u
        if math.gcd(u, self.rho_x) != 1:
            raise ValueError(
                f"gcd(u, deg L) = {math.gcd(u, self.rho_x)} != 1: "
                "no single point at infinity")
        self.genus = (u - 1) * (self.rho_x - 1) // 2
        # dense y-degree -> coefficient view of L, used by canonical reduction
        self._l_terms = tuple((frob_base ** i, c) for i, c in enumerate(coeffs)
                              if c != field.zero)

    @classmethod
    def hermitian(cls, q0: int) -> "CurveModel":
        """Hermitian curve x^(q0+1) = y^q0 + y over F_{q0^2}."""
        from .field import prime_power_field
        p = 2
        while q0 % p != 0:
            p += 1
        e = 0
        m = q0
        while m > 1:
            if m % p:
                raise ValueError(f"{q0} is not a prime power")
            m //= p
            e += 1
        field = prime_power_field(p, 2 * e)
        return cls(field, q0 + 1, q0, [1, 1])

    def l_eval(self, b: int, field=None) -> int:
        fld = field if field is not None else self.field
        acc = fld.zero
        for d, c in self._l_terms:
            acc = fld.add(acc, fld.mul(fld.embed(c) if field is not None else c,
                                       fld.pow(b, d)))
        return acc

    def on_curve(self, point: Point, field=None) -> bool:
        fld = field if field is not None else self.field
        return fld.pow(point.x, self.u) == self.l_eval(point.y, field)

    def affine_points(self, field=None) -> list[Point]:
        """All affine rational points, lexicographic in (x, y) indices."""
        fld = field if field is not None else self.field
        pts = []
        for a in fld.elements():
            xu = fld.pow(a, self.u)
            for b in fld.elements():
                if self.l_eval(b, field if field is not None else None) == xu:
                    pts.append(Point(a, b))
        return pts

    def fiber(self, z: str, value: int, field=None) -> list[Point]:
        """Affine points where coordinate ``z`` ("x" or "y") equals ``value``."""
        fld = field if field is not None else self.field
        pts = []
        if z == "x":
            xu = fld.pow(value, self.u)
            for b in fld.elements():
                if self.l_eval(b, field if field is not None else None) == xu:
                    pts.append(Point(value, b))
        elif z == "y":
            lv = self.l_eval(value, field if field is not None else None)
            for a in fld.elements():
                if fld.pow(a, self.u) == lv:
                    pts.append(Point(a, value))
        else:
            raise ValueError("coordinate must be 'x' or 'y'")
        return pts

    def rho(self, z: str) -> int:
        """Pole order of a coordinate function at P_inf."""
        if z == "x":
            return self.rho_x
        if z == "y":
            return self.rho_y
        raise ValueError("coordinate must be 'x' or 'y'")

    def monomial_pole_order(self, xexp: int, yexp: int) -> int:
        return xexp * self.rho_x + yexp * self.u

    def rr_monomials(self, beta: int) -> list[tuple[int, int]]:
        """Monomials spanning L(beta * P_inf), sorted by pole order."""
        if beta < 0:
            raise ValueError("divisor degree must be nonnegative")
        monos = []
        for a in range(min(self.u, beta // self.rho_x + 1)):
            rest = beta - a * self.rho_x
            for b in range(rest // self.u + 1):
                monos.append((a, b))
        monos.sort(key=lambda m: self.monomial_pole_order(*m))
        return monos

    def rr_dim(self, beta: int) -> int:
        return len(self.rr_monomials(beta)) if beta >= 0 else 0

    def rr_basis(self, beta: int, field=None) -> list["RingElement"]:
        fld = field if field is not None else self.field
        return [RingElement.monomial(self, fld, a, b) for a, b in self.rr_monomials(beta)]

    def __repr__(self):
        return (f"CurveModel(x^{self.u} = L(y), deg L = {self.rho_x}, "
                f"g = {self.genus}, over GF({self.field.order}))")


class RingElement:
    """A function with poles only at P_inf, in canonical monomial form.

    ``coeffs`` maps (xexp, yexp) with xexp < u to a nonzero coefficient index
    in ``field``; ``field`` is the curve's field or an extension that embeds
    it as the identity on indices.  Treat instances as immutable.
    """

    __slots__ = ("curve", "field", "coeffs")

    def __init__(self, curve: CurveModel, field, raw_coeffs):
        self.curve = curve
        self.field = field
        self.coeffs = _reduce_canonical(curve, field, raw_coeffs)

    @classmethod
    def zero(cls, curve, field):
        return cls(curve, field, {})

    @classmethod
    def constant(cls, curve, field, c: int):
        return cls(curve, field, {(0, 0): c})

    @classmethod
    def monomial(cls, curve, field, xexp: int, yexp: int, c: int = 1):
        if xexp < 0 or yexp < 0:
            raise ValueError("negative exponent")
        return cls(curve, field, {(xexp, yexp): c})

    @classmethod
    def coordinate_shift(cls, curve, field, z: str, value: int):
        """The function z - value for a coordinate z in {x, y}."""
        mono = (1, 0) if z == "x" else (0, 1)
        if z not in ("x", "y"):
            raise ValueError("coordinate must be 'x' or 'y'")
        return cls(curve, field, {mono: field.one, (0, 0): field.neg(value)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, mono) -> int:
        return self.coeffs.get(tuple(mono), self.field.zero)

    def monomials(self):
        return sorted(self.coeffs, key=lambda m: self.curve.monomial_pole_order(*m))

    def pole_order(self) -> int:
        if not self.coeffs:
            raise ValueError("the zero function has no pole order")
        return max(self.curve.monomial_pole_order(a, b) for a, b in self.coeffs)

    def __add__(self, other):
        self._check_compatible(other)
        fld = self.field
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = fld.add(out.get(m, fld.zero), c)
        return RingElement(self.curve, fld, out)

    def __sub__(self, other):
        self._check_compatible(other)
        fld = self.field
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = fld.sub(out.get(m, fld.zero), c)
        return RingElement(self.curve, fld, out)

    def __neg__(self):
        fld = self.field
        return RingElement(self.curve, fld, {m: fld.neg(c) for m, c in self.coeffs.items()})

    def __mul__(self, other):
        self._check_compatible(other)
        fld = self.field
        out: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                m = (a1 + a2, b1 + b2)
                out[m] = fld.add(out.get(m, fld.zero), fld.mul(c1, c2))
        return RingElement(self.curve, fld, out)

    def scale(self, c: int) -> "RingElement":
        fld = self.field
        if c == fld.zero:
            return RingElement.zero(self.curve, fld)
        return RingElement(self.curve, fld,
                           {m: fld.mul(c, v) for m, v in self.coeffs.items()})

    def pow_int(self, e: int) -> "RingElement":
        if e < 0:
            raise ValueError("negative exponent")
        acc = RingElement.constant(self.curve, self.field, self.field.one)
        for _ in range(e):
            acc = acc * self
        return acc

    def evaluate(self, point: Point) -> int:
        fld = self.field
        acc = fld.zero
        for (a, b), c in self.coeffs.items():
            acc = fld.add(acc, fld.mul(c, fld.mul(fld.pow(point.x, a), fld.pow(point.y, b))))
        return acc

    def with_field(self, field) -> "RingElement":
        """Reinterpret coefficients in an extension (indices are unchanged)."""
        for c in self.coeffs.values():
            if not (0 <= c < field.order):
                raise ValueError("coefficient outside the target field")
        return RingElement(self.curve, field, dict(self.coeffs))

    def _check_compatible(self, other):
        if not isinstance(other, RingElement):
            raise TypeError("expected a RingElement")
        if self.curve is not other.curve or self.field != other.field:
            raise ValueError("operands live on different curves or fields")

    def __eq__(self, other):
        return (isinstance(other, RingElement) and self.curve is other.curve
                and self.field == other.field and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (a, b) in sorted(self.coeffs, key=lambda m: self.curve.monomial_pole_order(*m)):
            c = self.coeffs[(a, b)]
            term = "*".join(
                ([f"{c}"] if (c != self.field.one or (a, b) == (0, 0)) else [])
                + ([f"x^{a}" if a > 1 else "x"] if a else [])
                + ([f"y^{b}" if b > 1 else "y"] if b else []))
            parts.append(term)
        return " + ".join(parts)


def _reduce_canonical(curve: CurveModel, field, raw):
    """Rewrite x^u -> L(y) until every x-exponent is below u; drop zeros."""
    u = curve.u
    zero = field.zero
    out: dict = {}
    work = list(raw.items())
    while work:
        (a, b), c = work.pop()
        if c == zero:
            continue
        if not (0 <= c < field.order):
            raise ValueError("coefficient outside the field")
        if a < u:
            s = field.add(out.get((a, b), zero), c)
            if s == zero:
                out.pop((a, b), None)
            else:
                out[(a, b)] = s
        else:
            for d, lc in curve._l_terms:
                work.append(((a - u, b + d), field.mul(c, lc)))
    return out


def exact_divide(numerator: RingElement, divisor: RingElement) -> RingElement:
    """Quotient Q with Q * divisor = numerator in the coordinate ring.

    The quotient, when it exists, has pole order exactly
    pole(numerator) - pole(divisor), so it is found by solving a linear
    system over the monomials of that pole bound; an unsolvable system
    raises NotDivisibleError, which decoders use as a failure detector.
    """
    if not isinstance(numerator, RingElement) or not isinstance(divisor, RingElement):
        raise TypeError("expected RingElements")
    numerator._check_compatible(divisor)
    if divisor.is_zero():
        raise ValueError("division by the zero function")
    curve, fld = numerator.curve, numerator.field
    if numerator.is_zero():
        return RingElement.zero(curve, fld)
    bound = numerator.pole_order() - divisor.pole_order()
    if bound < 0:
        raise NotDivisibleError("numerator has smaller pole order than divisor")
    monos = curve.rr_monomials(bound)
    products = [RingElement.monomial(curve, fld, a, b) * divisor for a, b in monos]
    rows_index = sorted(set().union(*(p.coeffs for p in products), numerator.coeffs))
    matrix = [[p.coefficient(m) for p in products] for m in rows_index]
    rhs = [numerator.coefficient(m) for m in rows_index]
    sol = linalg.solve(fld, matrix, rhs)
    if sol is None:
        raise NotDivisibleError("no exact quotient exists")
    quotient = RingElement(curve, fld,
                           {m: c for m, c in zip(monos, sol) if c != fld.zero})
    if quotient * divisor != numerator:
        raise NotDivisibleError("no exact quotient exists")  # pragma: no cover
    return quotient
