"""Exact coefficient values.

Rationals are plain :class:`fractions.Fraction` (or ``int``).  Number-field
values are :class:`FieldElement` residues modulo a monic integer polynomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence, Union

import sympy

Scalar = Union[int, Fraction, "FieldElement"]

_X = sympy.Symbol("x")


class ScalarError(ValueError):
    pass


def _as_modulus(poly: Union[str, Sequence[int]]) -> tuple[int, ...]:
    """Coefficients (low degree first) of a monic integer polynomial."""
    if isinstance(poly, str):
        expr = sympy.sympify(poly.replace("^", "**"), locals={"x": _X})
        coeffs = [int(c) for c in reversed(sympy.Poly(expr, _X).all_coeffs())]
    else:
        coeffs = [int(c) for c in poly]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise ScalarError(f"modulus must be monic of degree >= 1: {poly!r}")
    return tuple(coeffs)


def poly_text(modulus: Sequence[int]) -> str:
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if mono and c == 1:
            t = mono
        elif mono and c == -1:
            t = "-" + mono
        else:
            t = f"{c}*{mono}" if mono else str(c)
        terms.append(t)
    return "+".join(terms).replace("+-", "-")


class FieldElement:
    """An element of Q[x]/(f) for monic integer f, in the power basis."""

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs: Sequence, modulus: Union[str, Sequence[int]]):
        mod = _as_modulus(modulus)
        n = len(mod) - 1
        cs = [Fraction(c) for c in coeffs]
        self.modulus = mod
        self.coeffs = _reduce(cs, mod) if len(cs) > n else tuple(cs + [Fraction(0)] * (n - len(cs)))

    @classmethod
    def _raw(cls, coeffs: tuple, modulus: tuple) -> "FieldElement":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.modulus = modulus
        return obj

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ScalarError("field elements have different moduli")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement._raw(
                (Fraction(other),) + (Fraction(0),) * (self.degree - 1), self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._raw(tuple(x + y for x, y in zip(self.coeffs, o.coeffs)), self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(tuple(-x for x in self.coeffs), self.modulus)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement._raw(tuple(x * other for x in self.coeffs), self.modulus)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * self.degree - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    prod[i + j] += x * y
        return FieldElement._raw(_reduce(prod, self.modulus), self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        num = sympy.Poly(list(reversed(self.coeffs)), _X, domain=sympy.QQ)
        mod = sympy.Poly(list(reversed(self.modulus)), _X, domain=sympy.QQ)
        try:
            inv = sympy.invert(num, mod)
        except sympy.polys.polyerrors.NotInvertible as exc:
            raise ZeroDivisionError("element is a zero divisor") from exc
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return FieldElement(cs, self.modulus)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.coeffs, self.modulus))

    def __bool__(self):
        return any(self.coeffs)

    def rational(self):
        """The value as a Fraction when it lies in Q, else None."""
        return None if any(self.coeffs[1:]) else self.coeffs[0]

    def __repr__(self):
        return f"FieldElement({format_scalar(self)})"


def _reduce(cs: list, modulus: tuple) -> tuple:
    n = len(modulus) - 1
    cs = list(cs)
    for i in range(len(cs) - 1, n - 1, -1):
        c = cs[i]
        if c:
            for j in range(n):
                cs[i - n + j] -= c * modulus[j]
        cs[i] = Fraction(0)
    return tuple(cs[:n]) if len(cs) >= n else tuple(cs + [Fraction(0)] * (n - len(cs)))


def scale(s: Scalar, p: int, e: int) -> Scalar:
    """Return p**e * s exactly (e may be negative)."""
    return s * (Fraction(p) ** e)


def normalize(s: Scalar) -> Scalar:
    """Collapse rational field elements and integral fractions."""
    if isinstance(s, FieldElement):
        r = s.rational()
        return s if r is None else normalize(r)
    if isinstance(s, Fraction) and s.denominator == 1:
        return int(s.numerator)
    return s


_FIELD_RE = re.compile(r"^\[(.*)\](?:@(.+))?$")


def parse_scalar(text: str, fieldpoly: Union[str, Sequence[int], None] = None) -> Scalar:
    """Parse ``n``, ``n/d`` or ``[c0,c1,...]@poly`` (``@poly`` optional with a default)."""
    t = text.strip()
    m = _FIELD_RE.match(t)
    if m:
        poly = m.group(2) or fieldpoly
        if poly is None:
            raise ScalarError(f"field element {t!r} needs a modulus")
        body = m.group(1).strip()
        coeffs = [Fraction(c.strip()) for c in body.split(",")] if body else []
        return FieldElement(coeffs, poly)
    try:
        return normalize(Fraction(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarError(f"cannot parse scalar {t!r}") from exc


def format_scalar(s: Scalar, with_poly: bool = True) -> str:
    if isinstance(s, FieldElement):
        body = "[" + ",".join(str(c) for c in s.coeffs) + "]"
        return body + ("@" + poly_text(s.modulus) if with_poly else "")
    return str(normalize(Fraction(s)))
