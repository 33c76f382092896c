"""Upper-block operators on Fourier coefficients.

Each operator is available in two forms: the direct index-substitution
formula and the Hecke-ring formulation built from the combinators
``delta_plus``, ``delta_minus``, ``nabla``, ``hecke_T`` and ``char_mul``.
Both act on coefficient functions ``S -> Lookup`` and can be composed
lazily; :func:`apply` materializes the result as a new expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

from .fourier import (
    ZERO, CoefficientFn, FourierExpansion, Lookup, Status, integral_index,
    lookup_sum, materialize,
)
from .quadform import DomainError, in_A, in_B

OPS = ("tau", "theta", "eta", "sigma", "t01s", "t10s")


def vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


# ------------------------------------------------------------ index maps

def neighbor(S: Sequence, x, p) -> tuple:
    """S[[1, 0], [x, p]] for possibly rational x."""
    a, b, c = S
    return (a + b * x + c * x * x, p * (b + 2 * c * x), p * p * c)


def times(S: Sequence, t) -> tuple:
    return tuple(t * s for s in S)


def shrink_second(S: Sequence, t) -> tuple:
    """S[diag(1, 1/t)]."""
    a, b, c = S
    return (a, Fraction(b, t), Fraction(c, t * t))


# ------------------------------------------------------- ring combinators

def delta_plus(a: CoefficientFn, t: int) -> CoefficientFn:
    return lambda S: a(times(S, t))


def delta_minus(a: CoefficientFn, t: int) -> CoefficientFn:
    inv = Fraction(1, t)
    return lambda S: a(times(S, inv))


def nabla(a: CoefficientFn, t: int) -> CoefficientFn:
    return lambda S: a(shrink_second(S, t))


def hecke_T(a: CoefficientFn, p: int, power: int = 1) -> CoefficientFn:
    """(a|T(p))(S) = sum over x mod p of a(S[[1,0],[x,p]]); T(p^2) = T(p)^2."""
    fn = a
    for _ in range(power):
        fn = (lambda inner: lambda S: lookup_sum(inner(neighbor(S, x, p)) for x in range(p)))(fn)
    return fn


def char_mul(a: CoefficientFn, N: int, which: str = "B") -> CoefficientFn:
    """Multiply by the indicator of B(N)^+ (or A(N)^+)."""
    test = in_B if which == "B" else in_A

    def fn(S):
        T = integral_index(S)
        if T is None or not test(T, N):
            return ZERO
        return a(S)
    return fn


def linear(*terms: tuple) -> CoefficientFn:
    """Linear combination of coefficient functions given as (factor, fn)."""
    def fn(S):
        total = ZERO
        for factor, g in terms:
            r = g(S)
            if r.status is Status.UNKNOWN:
                return r
            total = total + r.scaled(factor)
        return total
    return fn


# -------------------------------------------------------------- operators

class OpResult(NamedTuple):
    fn: CoefficientFn
    level: int


def _need(N: int, p: int, e: int, name: str) -> None:
    if vp(N, p) < e:
        raise DomainError(f"{name} needs p^{e} | N (p={p}, N={N})")


def out_level(op: str, N: int, p: int) -> int:
    return {"tau": N * p, "theta": N * p, "eta": N * p * p, "sigma": N // p,
            "t01s": N, "t10s": N}[op]


def out_bound(op: str, D: int, p: int) -> int:
    """Largest output bound whose coefficients only need inputs below D."""
    if op in ("tau", "theta"):
        return D
    if op == "eta":
        return D * p * p
    return (D - 1) // (p * p) + 1


def direct(op: str, a: CoefficientFn, N: int, k: int, p: int) -> OpResult:
    """Coefficient function of the operator image, from the direct formulas."""
    q = Fraction(p)
    if op == "tau":
        M = N * p
        return OpResult(char_mul(a, M), M)
    if op == "theta":
        M = N * p

        def theta(S):
            x, y, z = S
            return a(times(S, Fraction(1, p))).scaled(q ** k) + a((p * x, y, Fraction(z, p))).scaled(q)
        return OpResult(char_mul(theta, M), M)
    if op == "eta":
        M = N * p * p

        def eta(S):
            return a(shrink_second(S, p)).scaled(q ** k)
        return OpResult(char_mul(eta, M), M)
    if op == "sigma":
        _need(N, p, 2, "sigma")
        M = N // p

        def sigma(S):
            return lookup_sum(a(neighbor(S, x, p)) for x in range(p)).scaled(q ** (-k - 1))
        return OpResult(char_mul(sigma, M), M)
    if op == "t01s":
        _need(N, p, 1, "t01s")

        def t01(S):
            first = a(times(S, p)).scaled(q ** (3 - k))
            al, b, c = S
            rest = lookup_sum(
                a(times(neighbor(S, y, p), Fraction(1, p)))
                for y in range(p) if (al + b * y + c * y * y) % p == 0)
            return first + rest.scaled(q)
        return OpResult(char_mul(t01, N), N)
    if op == "t10s":
        _need(N, p, 1, "t10s")

        def t10(S):
            return lookup_sum(a(neighbor(S, x, p)) for x in range(p)).scaled(q ** (3 - k))
        return OpResult(char_mul(t10, N), N)
    raise DomainError(f"unknown operator {op!r}")


def abstract(op: str, a: CoefficientFn, N: int, k: int, p: int) -> OpResult:
    """Coefficient function of the operator image, from the Hecke-ring formulas."""
    q = Fraction(p)
    if op == "tau":
        return OpResult(char_mul(a, N * p), N * p)
    if op == "theta":
        wide = N * p * p if vp(N, p) == 0 else N * p
        fn = linear((q ** k, delta_minus(a, p)),
                    (q, char_mul(delta_plus(nabla(a, p), p), wide)))
        return OpResult(fn, N * p)
    if op == "eta":
        return OpResult(linear((q ** k, nabla(a, p))), N * p * p)
    if op == "sigma":
        _need(N, p, 2, "sigma")
        return OpResult(linear((q ** (-k - 1), char_mul(hecke_T(a, p), N // p))), N // p)
    if op == "t01s":
        _need(N, p, 1, "t01s")
        fn = linear((q ** (3 - k), char_mul(delta_plus(a, p), N)),
                    (q, char_mul(hecke_T(delta_minus(a, p), p), N)))
        return OpResult(fn, N)
    if op == "t10s":
        _need(N, p, 1, "t10s")
        return OpResult(linear((q ** (3 - k), char_mul(hecke_T(a, p), N))), N)
    raise DomainError(f"unknown operator {op!r}")


def sigma_squared_abstract(a: CoefficientFn, N: int, k: int, p: int) -> OpResult:
    """Hecke-ring formula for the square of the level-lowering operator."""
    _need(N, p, 3, "sigma^2")
    M = N // (p * p)
    return OpResult(linear((Fraction(p) ** (-2 * k - 2), char_mul(hecke_T(a, p, 2), M))), M)


def apply(F: FourierExpansion, op: str, p: int, bound: Optional[int] = None,
          method: str = "direct") -> FourierExpansion:
    """Materialize the image of F under one operator."""
    build = direct if method == "direct" else abstract
    res = build(op, F.lookup, F.level, F.weight, p)
    D = out_bound(op, F.bound, p)
    if bound is not None:
        D = min(D, bound)
    return materialize(res.fn, res.level, F.weight, D, fieldpoly=F.fieldpoly)


def chain(word: Sequence[str], a: CoefficientFn, N: int, k: int, p: int,
          method: str = "direct") -> OpResult:
    """Apply operators left to right: word ("theta", "t01s") means t01s(theta(F))."""
    build = direct if method == "direct" else abstract
    res = OpResult(a, N)
    for op in word:
        res = build(op, res.fn, res.level, k, p)
    return res


def chain_depth(word: Sequence[str], p: int) -> int:
    """Factor by which the input discriminant must exceed the output's."""
    depth = 1
    for op in word:
        if op in ("sigma", "t01s", "t10s"):
            depth *= p * p
    return depth


# -------------------------------------------------------------- relations

@dataclass(frozen=True)
class Relation:
    """sum(lhs) == sum(rhs); each term is (sign, exponent of p, word)."""

    name: str
    lhs: tuple
    rhs: tuple
    min_vp: int

    def words(self):
        return [w for _, _, w in self.lhs + self.rhs]


def _t(e: int, *word: str, sign: int = 1) -> tuple:
    return (sign, e, tuple(word))


RELATIONS = (
    Relation("theta tau = tau theta", (_t(0, "tau", "theta"),), (_t(0, "theta", "tau"),), 0),
    Relation("T01 T10 = T10 T01", (_t(0, "t10s", "t01s"),), (_t(0, "t01s", "t10s"),), 1),
    Relation("T01 = p^2 sigma theta", (_t(0, "t01s"),), (_t(2, "theta", "sigma"),), 1),
    Relation("T10 = p^4 sigma tau", (_t(0, "t10s"),), (_t(4, "tau", "sigma"),), 1),
    Relation("T10 = p^4 tau sigma", (_t(0, "t10s"),), (_t(4, "sigma", "tau"),), 2),
    Relation("T01 tau = tau T01", (_t(0, "tau", "t01s"),), (_t(0, "t01s", "tau"),), 1),
    Relation("T10 tau = tau T10", (_t(0, "tau", "t10s"),), (_t(0, "t10s", "tau"),), 1),
    Relation("T10 theta = p^2 T01 tau", (_t(0, "theta", "t10s"),), (_t(2, "tau", "t01s"),), 1),
    Relation("T01 theta = theta T01 + p^3 tau - p^3 eta sigma",
             (_t(0, "theta", "t01s"),),
             (_t(0, "t01s", "theta"), _t(3, "tau"), _t(3, "sigma", "eta", sign=-1)), 2),
)


class RelationOutcome(NamedTuple):
    relation: str
    checked: int
    skipped: int
    failures: list


def _side(terms, a, N, k, p, method):
    fns = []
    level = None
    for sign, e, word in terms:
        res = chain(word, a, N, k, p, method)
        level = res.level
        fns.append((sign * Fraction(p) ** e, res.fn))
    return linear(*fns), level


def is_zero(value) -> bool:
    r = value == 0
    return bool(r.all()) if hasattr(r, "all") else bool(r)


def relation_target(rel: Relation, bound: int, p: int) -> int:
    """Largest output bound at which every word of ``rel`` only reads inputs below ``bound``."""
    depth = max(chain_depth(w, p) for w in rel.words())
    return (bound - 1) // depth + 1


def check_relation(rel: Relation, F: FourierExpansion, p: int, target: Optional[int] = None,
                   method: str = "direct") -> RelationOutcome:
    """Evaluate both sides on all orbits below ``target`` of the output level.

    ``target`` defaults to :func:`relation_target` for the expansion's bound.
    """
    from .fourier import orbits_below, forced_zero
    from .quadform import stable_part

    if vp(F.level, p) < rel.min_vp:
        raise DomainError(f"{rel.name} needs p^{rel.min_vp} | N")
    if target is None:
        target = relation_target(rel, F.bound, p)
    left, level = _side(rel.lhs, F.lookup, F.level, F.weight, p, method)
    right, level_r = _side(rel.rhs, F.lookup, F.level, F.weight, p, method)
    assert level == level_r
    checked = skipped = 0
    failures = []
    for S in orbits_below(level, target, stable_part(level)):
        if forced_zero(S, level, F.weight):
            continue
        x, y = left(S), right(S)
        if not (x.computable and y.computable):
            skipped += 1
            continue
        checked += 1
        if not is_zero((x - y).value):
            failures.append((S, x, y))
    return RelationOutcome(rel.name, checked, skipped, failures)
