"""Jacobi forms: coefficient tables, index-changing operators, and the
bridge to Fourier-Jacobi coefficients of Siegel expansions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, NamedTuple, Optional, Union

from .fourier import (
    STABLE_KLINGEN, UNKNOWN, ZERO, FourierExpansion, Lookup, Status, _key, known, materialize,
)
from .quadform import DomainError, QuadIndex, stable_part
from .scalars import format_scalar, parse_scalar


@dataclass
class JacobiExpansion:
    """Coefficients c(n, r) of a Jacobi form of weight k and index m.

    Rows n = 0..bound are complete; entries outside the table beyond that
    are unknown.
    """

    weight: int
    index: int
    table: dict = field(default_factory=dict)
    bound: int = -1
    cusp: bool = True

    def lookup(self, n, r) -> Lookup:
        if isinstance(n, Fraction):
            if n.denominator != 1:
                return ZERO
            n = n.numerator
        if isinstance(r, Fraction):
            if r.denominator != 1:
                return ZERO
            r = r.numerator
        gap = 4 * n * self.index - r * r
        if n < 0 or gap < 0 or (gap == 0 and self.cusp):
            return ZERO
        v = self.table.get((n, r))
        return UNKNOWN if v is None else known(v)

    __call__ = lookup

    def entries(self):
        return sorted(self.table.items())


def _row(n: int, m: int):
    top = math.isqrt(4 * n * m)
    return range(-top, top + 1)


def build(weight: int, index: int, coef: Callable[[int, int], Lookup], n_top: int,
          cusp: bool = True) -> JacobiExpansion:
    """Tabulate a coefficient rule for rows 0..n_top, dropping unknown entries."""
    table = {}
    bound = -1
    complete = True
    for n in range(n_top + 1):
        for r in _row(n, index):
            res = coef(n, r)
            if res.status is Status.UNKNOWN:
                complete = False
                continue
            table[(n, r)] = res.value if res.status is Status.KNOWN else 0
        if complete:
            bound = n
    return JacobiExpansion(weight, index, table, bound, cusp)


def _sum(items) -> Lookup:
    total = ZERO
    for it in items:
        if it.status is Status.UNKNOWN:
            return UNKNOWN
        total = total + it
    return total


# -------------------------------------------------------------- operators

def u_p(f: JacobiExpansion, p: int) -> JacobiExpansion:
    """f(tau, p z): index m -> m p^2."""
    def coef(n, r):
        return f.lookup(n, r // p) if r % p == 0 else ZERO
    return build(f.weight, f.index * p * p, coef, max(f.bound, 0), f.cusp)


def v_p(f: JacobiExpansion, p: int) -> JacobiExpansion:
    """The Hecke-type operator V_p: index m -> m p."""
    k = f.weight
    scale = Fraction(p) ** (k - 1)

    def coef(n, r):
        first = f.lookup(n * p, r)
        if n % p == 0 and r % p == 0:
            return first + f.lookup(n // p, r // p).scaled(scale)
        return first
    return build(k, f.index * p, coef, max(f.bound, 0) // p, f.cusp)


def l_csq(f: JacobiExpansion, c: int) -> JacobiExpansion:
    """Index-lowering operator L_{c^2}: index m c^2 -> m."""
    if f.index % (c * c):
        raise DomainError(f"index {f.index} is not divisible by {c * c}")
    m = f.index // (c * c)
    k = f.weight
    scale = Fraction(c) ** (1 - k)

    def coef(n, r):
        terms = []
        for a in range(c):
            ra = r - 2 * m * a
            na = n - a * ra - m * a * a
            if na >= 0:
                terms.append(f.lookup(na, ra * c))
        return _sum(terms).scaled(scale)
    return build(k, m, coef, max(f.bound, 0), f.cusp)


def lprime_p(f: JacobiExpansion, p: int) -> JacobiExpansion:
    """Index-lowering operator L'_p: index m p -> m."""
    if f.index % p:
        raise DomainError(f"index {f.index} is not divisible by {p}")
    m = f.index // p
    k = f.weight
    tail = Fraction(p) ** (3 - k)

    def coef(n, r):
        terms = []
        for a in range(p):
            ra = r - 2 * a * m
            num = n - a * ra - m * a * a
            if num % p == 0 and num >= 0:
                terms.append(f.lookup(num // p, ra))
        return _sum(terms).scaled(p) + f.lookup(n * p, r * p).scaled(tail)
    return build(k, m, coef, max(f.bound, 0) // p, f.cusp)


def scaled(f: JacobiExpansion, factor) -> JacobiExpansion:
    return JacobiExpansion(f.weight, f.index, {k: v * factor for k, v in f.table.items()},
                           f.bound, f.cusp)


# ------------------------------------------------------ Fourier-Jacobi glue

Source = Union[FourierExpansion, tuple]


def _source(F: Source):
    """(coefficient function, level, weight, default n bound for index m)."""
    if isinstance(F, FourierExpansion):
        return F.lookup, F.level, F.weight, F.bound
    fn, level, weight, bound = F
    return fn, level, weight, bound


def fj_decompose(F: Source, m: int, n_max: Optional[int] = None) -> JacobiExpansion:
    """The m-th Fourier-Jacobi coefficient: c_m(n, r) = a([[n, r/2], [r/2, m]]).

    ``F`` is an expansion or a tuple (coefficient function, level, weight,
    discriminant bound).  Rows default to those fully below the bound.
    """
    fn, level, weight, D = _source(F)
    if m <= 0 or m % stable_part(level):
        return JacobiExpansion(weight, max(m, 0), {}, n_max if n_max is not None else 0)
    if n_max is None:
        n_max = (D - 1) // (4 * m) if D else 0
    return build(weight, m, lambda n, r: fn((n, r, m)), n_max)


def fj_recompose(parts, level: int, weight: int, bound: int,
                 space: str = STABLE_KLINGEN) -> FourierExpansion:
    """Rebuild a Siegel expansion below ``bound`` from (m, JacobiExpansion) pairs.

    Orbits not reached by any stored Jacobi coefficient stay unknown.
    """
    values = {}
    for m, f in parts:
        for (n, r), v in f.table.items():
            S = QuadIndex(n, r, m)
            if S.disc4 <= 0 or S.disc4 >= bound:
                continue
            ok = _key(S, level)
            values[ok.key] = -v if (ok.sign == -1 and weight % 2) else v

    def coef(S):
        v = values.get(S)
        return UNKNOWN if v is None else known(v)
    return materialize(coef, level, weight, bound, space)


# ----------------------------------------------------------------- bridges

BRIDGE_OPS = ("sigma", "t10s", "t01s", "eta", "theta", "tau")


class BridgeOutcome(NamedTuple):
    op: str
    m: int
    checked: int
    failures: list


def bridge_sides(F: FourierExpansion, op: str, p: int, m: int):
    """(fj of op(F) at index m, the same coefficient via Jacobi operators).

    Returns None when the image has no index-m coefficient by the support
    rule or the Jacobi side needs an index that is not an integer.
    """
    from .siegel_ops import direct, out_bound, vp

    k = F.weight
    res = direct(op, F.lookup, F.level, k, p)
    if m % stable_part(res.level):
        return None
    left = fj_decompose((res.fn, res.level, k, out_bound(op, F.bound, p)), m)
    q = Fraction(p)
    if op == "sigma":
        right = scaled(l_csq(fj_decompose(F, m * p * p), p), 1 / q ** 2)
    elif op == "t10s":
        right = scaled(l_csq(fj_decompose(F, m * p * p), p), q ** 2)
    elif op == "t01s":
        right = lprime_p(fj_decompose(F, m * p), p)
    elif op == "eta":
        if m % (p * p):
            return None
        right = scaled(u_p(fj_decompose(F, m // (p * p)), p), q ** k)
    elif op == "theta":
        if m % p:
            return None
        right = scaled(v_p(fj_decompose(F, m // p), p), q)
    elif op == "tau":
        right = fj_decompose(F, m) if m % p ** vp(F.level, p) == 0 else None
        if right is None:
            right = JacobiExpansion(k, m, {key: 0 for key in left.table}, left.bound)
    else:
        raise DomainError(f"no bridge for {op!r}")
    return left, right


def bridge_check(F: FourierExpansion, op: str, p: int, m: int) -> Optional[BridgeOutcome]:
    """Compare both sides of a bridge on the entries computable on both."""
    from .siegel_ops import is_zero

    sides = bridge_sides(F, op, p, m)
    if sides is None:
        return None
    left, right = sides
    checked = 0
    failures = []
    for key, v in left.table.items():
        w = right.table.get(key)
        if w is None:
            continue
        checked += 1
        if not is_zero(v - w):
            failures.append((key, v, w))
    return BridgeOutcome(op, m, checked, failures)


# ---------------------------------------------------------------- file io

def serialize_jacobi(f: JacobiExpansion) -> str:
    lines = [f"# weight={f.weight}", f"# index={f.index}", f"# bound={f.bound}"]
    for (n, r), v in f.entries():
        lines.append(f"{n},{r},{format_scalar(v)}")
    return "\n".join(lines) + "\n"


def deserialize_jacobi(text: str) -> JacobiExpansion:
    header = {}
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            header[key.strip()] = val.strip()
            continue
        parts = [x.strip() for x in line.split(",", 2)]
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected n,r,value")
        table[(int(parts[0]), int(parts[1]))] = parse_scalar(parts[2])
    if "weight" not in header or "index" not in header:
        raise ValueError("jacobi file needs '# weight=' and '# index=' headers")
    bound = int(header.get("bound", max((n for n, _ in table), default=-1)))
    return JacobiExpansion(int(header["weight"]), int(header["index"]), table, bound)


def read_jacobi(path) -> JacobiExpansion:
    return deserialize_jacobi(Path(path).read_text(encoding="utf-8"))
