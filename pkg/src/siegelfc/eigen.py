"""Hecke eigenvalues at p with p^2 | N from Fourier coefficients.

Each identity below is an exact linear relation between coefficients of a
paramodular newform regarded at stable Klingen level N.  An identity is
evaluated at an index S and yields both sides as :class:`Lookup` values;
it is skipped when some input is unknown.  Witnesses for eigenvalue
extraction and verification are orbit representatives under a congruence
group that fixes every term of the identity (see :func:`identity_group`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .fourier import ZERO, CoefficientFn, FourierExpansion, Lookup, Status, known
from .quadform import (
    G1, G2, G3, CongruenceGroup, DomainError, QuadIndex, orbit_reps, stable_part, upper,
)
from .siegel_ops import chain, is_zero, neighbor, times, vp
from .scalars import Scalar, normalize


class DataIntegrityError(ValueError):
    """Witnesses disagree about a value that must be unique."""


class Verdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    SKIPPED = "Skipped"


class Genericity(enum.Enum):
    GENERIC = "Generic"
    NON_GENERIC = "NonGeneric"
    UNDETERMINED = "Undetermined"


@dataclass
class IdentityVerdict:
    identity: str
    index: tuple
    status: Verdict
    lhs: object = None
    rhs: object = None
    missing: tuple = ()

    def as_dict(self) -> dict:
        out = {"identity": self.identity, "S": list(self.index), "status": self.status.value}
        if self.status is Verdict.FAIL:
            out["lhs"], out["rhs"] = str(self.lhs), str(self.rhs)
        if self.status is Verdict.SKIPPED:
            out["missing"] = [list(m) for m in self.missing[:5]]
        return out


# --------------------------------------------------------------- evaluation

class _Recorder:
    """Coefficient function wrapper remembering which lookups were unknown."""

    def __init__(self, fn: CoefficientFn):
        self.fn = fn
        self.missing: list = []

    def __call__(self, S) -> Lookup:
        res = self.fn(S)
        if res.status is Status.UNKNOWN:
            self.missing.append(tuple(S))
        return res


def _sum(items) -> Lookup:
    # evaluate everything so the recorder sees every missing index
    items = list(items)
    total = ZERO
    for it in items:
        total = total + it
    return total


def _cdiv(S, t):
    return times(S, Fraction(1, t))


def neighbor_sum(a: CoefficientFn, S, p: int, j: int = 1, shrink: int = 1,
                 cond_mod: int = 1) -> Lookup:
    """sum over x mod p^j of a(S[[1,0],[x,p^j]] / shrink), restricted to
    x with cond_mod | (alpha + b x + gamma x^2)."""
    q = p ** j
    al, b, g = S
    return _sum(a(_cdiv(neighbor(S, x, q), shrink)) for x in range(q)
                if (al + b * x + g * x * x) % cond_mod == 0)


def t01_coefficient(a: CoefficientFn, S, k: int, p: int) -> Lookup:
    """c(S), the coefficient of the image under the stable T01 operator."""
    al, b, _ = S
    q = Fraction(p)
    first = a(times(S, p)).scaled(q ** (3 - k))
    rest = _sum(a(_cdiv(neighbor(S, x, p), p)) for x in range(p) if (al + b * x) % p == 0)
    return first + rest.scaled(q)


@dataclass(frozen=True)
class Identity:
    """An identity between coefficients, evaluated at indices of one index set.

    ``level`` maps N to the level whose B-set holds the indices; ``depth`` is
    the power of p by which the largest input discriminant exceeds d(S).
    """

    key: str
    name: str
    level: Callable[[int, int], int]
    depth: int
    upper_power: int
    needs: Callable[[int, int], bool]


def _vp_at_least(e):
    return lambda N, p: vp(N, p) >= e


IDENTITIES = {
    "1": Identity("1", "sum over z mod p^2 vanishes", lambda N, p: N // (p * p), 4, 2,
                  _vp_at_least(3)),
    "2": Identity("2", "mu equation", lambda N, p: N * p, 2, 1, _vp_at_least(2)),
    "3": Identity("3", "lambda equation (mu != 0)", lambda N, p: N // p, 4, 2, _vp_at_least(2)),
    "4": Identity("4", "epsilon equation (mu != 0)", lambda N, p: N // p, 4, 2, _vp_at_least(2)),
    "5": Identity("5", "sum over x mod p vanishes (mu = 0)", lambda N, p: N // p, 2, 1,
                  _vp_at_least(2)),
    "5'": Identity("5'", "sum over x mod p vanishes on B(N) (mu = 0)", lambda N, p: N, 2, 1,
                   _vp_at_least(2)),
    "6": Identity("6", "lambda equation (mu = 0, not a T01 eigenvector)", lambda N, p: N, 4, 2,
                  _vp_at_least(2)),
    "7": Identity("7", "lambda equation (mu = 0, T01 eigenvector)", lambda N, p: N, 2, 1,
                  _vp_at_least(2)),
}

# groups used for the level-16, p = 2 data; all fix every term of their identity
_LEVEL16_GROUPS = {"1": G1, "2": G2, "3": G3, "4": G3, "5": G2, "7": G2}


def identity_group(key: str, N: int, p: int) -> CongruenceGroup:
    """A subgroup of SL(2,Z) under which the identity's terms are permuted.

    For g = [[a, b], [c, d]] with b = 0 and a = d mod p^j, the conjugate
    B^T g B^-T of g by B = [[1, 0], [x, p^j]] is integral with lower-left
    entry p^j c, so requiring c = 0 mod lcm(N/p^j, ...) keeps every term
    inside Gamma0(N).
    """
    if (N, p) == (16, 2) and key in _LEVEL16_GROUPS:
        return _LEVEL16_GROUPS[key]
    ident = IDENTITIES[key]
    M = p ** ident.upper_power
    lower = {"1": N // (p * p), "2": N, "3": N // p, "4": N // p, "5": N // p,
             "5'": N, "6": N, "7": N}[key]
    return upper(M, lower)


def witnesses(key: str, N: int, p: int, bound: int) -> list[QuadIndex]:
    """Orbit representatives for an identity, by ascending discriminant."""
    ident = IDENTITIES[key]
    level = ident.level(N, p)
    G = identity_group(key, N, p)
    top = (bound - 1) // p ** ident.depth
    out = []
    for d in range(3, top + 1):
        if d % 4 in (0, 3):
            out.extend(orbit_reps(G, level, d, "B"))
    return out


def evaluate(key: str, a: CoefficientFn, S, N: int, k: int, p: int,
             mu=None, lam=None, eps=None) -> tuple[Lookup, Lookup]:
    """Both sides of identity ``key`` at S (eigenvalue arguments may be None).

    Sides that need a missing eigenvalue come back as the bare coefficient
    of that eigenvalue, so callers can solve for it.
    """
    q = Fraction(p)
    al, b, g = S
    if key == "1":
        return neighbor_sum(a, S, p, 2), ZERO
    if key == "2":
        rhs = neighbor_sum(a, S, p).scaled(q ** (3 - k))
        if b % p == 0:
            rhs = rhs - _sum(a(neighbor(S, Fraction(x, p), 1)) for x in range(p)).scaled(q)
        lhs = a(S)
        return (lhs if mu is None else lhs.scaled(mu)), rhs
    if key == "3":
        lhs = neighbor_sum(a, S, p)
        rhs = (_sum(a(times(neighbor(S, x, p), p)) for x in range(p)).scaled(q ** (3 - k))
               + neighbor_sum(a, S, p, 2, shrink=p, cond_mod=p).scaled(q))
        return (lhs if lam is None else lhs.scaled(lam)), rhs
    if key == "4":
        lhs = neighbor_sum(a, S, p, 2)
        if vp(N, p) > 2:
            return lhs, ZERO
        rhs = neighbor_sum(a, S, p).scaled(q ** (k - 2))
        return lhs, (rhs if eps is None else rhs.scaled(eps))
    if key in ("5", "5'"):
        return neighbor_sum(a, S, p), ZERO
    if key == "6":
        lhs = t01_coefficient(a, S, k, p)
        rhs = (a(S).scaled(q ** 3) + a(times(S, p * p)).scaled(q ** (6 - 2 * k))
               + _sum(a(neighbor(S, y, p)) for y in range(p)
                      if (al + b * y) % p == 0).scaled(q ** (4 - k))
               + neighbor_sum(a, S, p, 2, shrink=p * p, cond_mod=p * p).scaled(q * q))
        return (lhs if lam is None else lhs.scaled(lam)), rhs
    if key == "7":
        lhs = a(S)
        rhs = t01_coefficient(a, S, k, p).scaled(1 + 1 / q)
        return (lhs if lam is None else lhs.scaled(lam)), rhs
    raise DomainError(f"unknown identity {key!r}")


def check(key: str, a: CoefficientFn, S, N: int, k: int, p: int,
          mu=None, lam=None, eps=None) -> IdentityVerdict:
    rec = _Recorder(a)
    lhs, rhs = evaluate(key, rec, S, N, k, p, mu, lam, eps)
    if not (lhs.computable and rhs.computable):
        return IdentityVerdict(key, tuple(S), Verdict.SKIPPED, missing=tuple(rec.missing))
    if is_zero((lhs - rhs).value):
        return IdentityVerdict(key, tuple(S), Verdict.PASS, lhs.value, rhs.value)
    return IdentityVerdict(key, tuple(S), Verdict.FAIL, lhs.value, rhs.value)


# --------------------------------------------------------------- extraction

@dataclass
class Solution:
    value: Optional[Scalar]
    witness: Optional[tuple] = None
    identity: Optional[str] = None
    evaluated: list = field(default_factory=list)


def _solve(key: str, F: FourierExpansion, p: int, candidates, **known_values) -> Solution:
    """Solve identity ``key`` for its unknown eigenvalue on every usable witness."""
    N, k = F.level, F.weight
    sol = Solution(None, identity=key)
    for S in candidates:
        coeff, rhs = evaluate(key, F.lookup, S, N, k, p, **known_values)
        if not (coeff.computable and rhs.computable):
            continue
        if coeff.value == 0:
            continue
        value = normalize(rhs.value / coeff.value)
        sol.evaluated.append((tuple(S), value))
        if sol.value is None:
            sol.value, sol.witness = value, tuple(S)
        elif value != sol.value:
            raise DataIntegrityError(
                f"identity {key}: witness {tuple(S)} gives {value}, "
                f"witness {sol.witness} gave {sol.value}")
    return sol


def _require_square(F: FourierExpansion, p: int) -> None:
    if vp(F.level, p) < 2:
        raise DomainError(f"need p^2 | N (p={p}, N={F.level})")


def extract_mu(F: FourierExpansion, p: int) -> Solution:
    _require_square(F, p)
    return _solve("2", F, p, witnesses("2", F.level, p, F.bound))


def extract_lambda_shadow(F: FourierExpansion, p: int) -> Solution:
    """lambda from the mu != 0 equation."""
    _require_square(F, p)
    return _solve("3", F, p, witnesses("3", F.level, p, F.bound))


def extract_epsilon(F: FourierExpansion, p: int) -> Solution:
    """The Atkin-Lehner sign, from the sum over y mod p^2 (needs v_p(N) = 2)."""
    if vp(F.level, p) != 2:
        raise DomainError("the sign is only determined when v_p(N) = 2")
    N, k = F.level, F.weight
    sol = Solution(None, identity="4")
    for S in witnesses("4", N, p, F.bound):
        lhs, rhs = evaluate("4", F.lookup, S, N, k, p)
        if not (lhs.computable and rhs.computable) or rhs.value == 0:
            continue
        value = normalize(lhs.value / rhs.value)
        if value not in (1, -1):
            raise DataIntegrityError(f"sign at {tuple(S)} is {value}, not +-1")
        sol.evaluated.append((tuple(S), value))
        if sol.value is None:
            sol.value, sol.witness = value, tuple(S)
        elif value != sol.value:
            raise DataIntegrityError(f"signs disagree at {tuple(S)} and {sol.witness}")
    return sol


@dataclass
class EigenvectorTest:
    """Outcome of testing whether F is an eigenvector of the stable T01 operator."""

    eigenvector: Optional[bool]
    ratio: Optional[Scalar] = None
    reason: str = ""
    evaluated: list = field(default_factory=list)


def decide_t01_eigenvector(F: FourierExpansion, p: int) -> EigenvectorTest:
    """Test lambda a(S) = (1 + 1/p) c(S) for one common lambda.

    A witness with a(S) = 0 but c(S) != 0, or two distinct ratios, rules the
    eigenvector case out.  Agreement needs at least one c(S) != 0.
    """
    N, k = F.level, F.weight
    ratio = None
    for S in witnesses("7", N, p, F.bound):
        lhs, rhs = evaluate("7", F.lookup, S, N, k, p)
        if not (lhs.computable and rhs.computable):
            continue
        x, y = lhs.value, rhs.value
        if x == 0:
            if y != 0:
                return EigenvectorTest(False, None, f"0 = {y} at {tuple(S)}")
            continue
        r = normalize(y / x)
        if ratio is None:
            ratio, first = r, tuple(S)
        elif r != ratio:
            return EigenvectorTest(False, None,
                                   f"ratios {ratio} at {first} and {r} at {tuple(S)}")
    if ratio is None:
        return EigenvectorTest(None, None, "no computable witness with c(S) != 0")
    return EigenvectorTest(True, ratio, f"common ratio {ratio}")


def extract_lambda_nonshadow(F: FourierExpansion, p: int) -> Solution:
    """lambda from the mu = 0 equation for non-eigenvectors of T01."""
    _require_square(F, p)
    return _solve("6", F, p, witnesses("6", F.level, p, F.bound))


@dataclass
class EigenReport:
    p: int
    mu: Optional[Scalar]
    lam: Optional[Scalar]
    epsilon: Optional[int]
    t01_eigenvector: Optional[bool]
    genericity: Genericity
    mu_source: Optional[tuple] = None
    lambda_source: Optional[tuple] = None
    lambda_identity: Optional[str] = None
    notes: list = field(default_factory=list)

    def as_dict(self, detail: bool = False) -> dict:
        from .scalars import format_scalar

        def fmt(v):
            return None if v is None else format_scalar(v)
        out = {"mu": fmt(self.mu), "lambda": fmt(self.lam),
               "t01_eigenvector": self.t01_eigenvector, "genericity": self.genericity.value}
        if detail:
            out.update({"p": self.p, "epsilon": self.epsilon,
                        "mu_source": list(self.mu_source) if self.mu_source else None,
                        "lambda_source": list(self.lambda_source) if self.lambda_source else None,
                        "lambda_identity": self.lambda_identity, "notes": self.notes})
        return out


def eigen_report(F: FourierExpansion, p: int) -> EigenReport:
    """Run the extraction algorithm: mu first, then lambda along the right branch."""
    from .localrep import LocalProfile, classify

    mu_sol = extract_mu(F, p)
    mu = mu_sol.value
    report = EigenReport(p, mu, None, None, None, Genericity.UNDETERMINED, mu_sol.witness)
    if mu is None:
        report.notes.append("no witness determines mu")
        return report
    if mu != 0:
        lam_sol = extract_lambda_shadow(F, p)
        if vp(F.level, p) == 2:
            report.epsilon = extract_epsilon(F, p).value
    else:
        test = decide_t01_eigenvector(F, p)
        report.t01_eigenvector = test.eigenvector
        report.notes.append(test.reason)
        if test.eigenvector is None:
            return report
        if test.eigenvector:
            lam_sol = Solution(test.ratio, identity="7")
        else:
            lam_sol = extract_lambda_nonshadow(F, p)
    report.lam = lam_sol.value
    report.lambda_source = lam_sol.witness
    report.lambda_identity = lam_sol.identity
    if report.lam is not None:
        outcome = classify(LocalProfile(p, vp(F.level, p), report.lam, mu, report.epsilon),
                           report.t01_eigenvector)
        report.genericity = {"Yes": Genericity.GENERIC, "No": Genericity.NON_GENERIC}.get(
            outcome.generic, Genericity.UNDETERMINED)
    return report


# ------------------------------------------------------------- verification

def verify_identities(F: FourierExpansion, p: int, report: Optional[EigenReport] = None,
                      relation_bound: Optional[int] = None) -> list[IdentityVerdict]:
    """Evaluate every applicable identity over its witness set.

    Eigenvalues come from ``report`` (extracted when absent).  The branch
    identities follow mu: 3 and 4 when mu != 0, 5, 5' and 6 or 7 when mu = 0.
    """
    N, k = F.level, F.weight
    _require_square(F, p)
    if report is None:
        report = eigen_report(F, p)
    mu, lam, eps = report.mu, report.lam, report.epsilon
    keys = ["1"] if vp(N, p) >= 3 else []
    keys.append("2")
    if mu is not None and mu != 0:
        keys += ["3", "4"]
    elif mu == 0:
        keys += ["5", "5'"]
        if report.t01_eigenvector is True:
            keys.append("7")
        elif report.t01_eigenvector is False:
            keys.append("6")
    out = []
    for key in keys:
        if key in ("2",) and mu is None:
            continue
        if key in ("3", "6", "7") and lam is None:
            continue
        if key == "4" and vp(N, p) == 2 and eps is None:
            continue
        for S in witnesses(key, N, p, F.bound):
            out.append(check(key, F.lookup, S, N, k, p, mu, lam, eps))
    out.extend(verify_operator_relations(F, p, mu, relation_bound))
    return out


def verify_operator_relations(F: FourierExpansion, p: int, mu, bound: Optional[int] = None
                              ) -> list[IdentityVerdict]:
    """mu F = p^4 tau^2 sigma F - p^2 eta sigma F, and sigma^2 F = 0 when v_p(N) >= 3."""
    from .fourier import orbits_below, forced_zero
    from .siegel_ops import linear

    N, k = F.level, F.weight
    q = Fraction(p)
    out = []
    checks = []
    if mu is not None:
        tts = chain(("sigma", "tau", "tau"), F.lookup, N, k, p).fn
        es = chain(("sigma", "eta"), F.lookup, N, k, p).fn
        rhs = linear((q ** 4, tts), (-q * q, es))
        checks.append(("mu-relation", N * p, lambda S: F.lookup(S).scaled(mu), rhs,
                       (F.bound - 1) // (p * p) + 1))
    if vp(N, p) >= 3:
        ss = chain(("sigma", "sigma"), F.lookup, N, k, p).fn
        checks.append(("sigma-squared", N // (p * p), ss, lambda S: ZERO,
                       (F.bound - 1) // p ** 4 + 1))
    for name, level, left, right, top in checks:
        if bound is not None:
            top = min(top, bound)
        for S in orbits_below(level, top, stable_part(level)):
            if forced_zero(S, level, k):
                continue
            x, y = left(S), right(S)
            if not (x.computable and y.computable):
                continue
            ok = is_zero((x - y).value)
            out.append(IdentityVerdict(name, tuple(S), Verdict.PASS if ok else Verdict.FAIL,
                                       x.value, y.value))
    return out


# ----------------------------------------------------- L-factor, recurrence

@dataclass(frozen=True)
class LFactor:
    """Denominator D(X) = 1 - p^(k-3) lambda X + p^(2k-5) (mu + p^2) X^2."""

    p: int
    k: int
    lam: Scalar
    mu: Scalar

    @property
    def coefficients(self) -> tuple:
        q = Fraction(self.p)
        return (1, normalize(-q ** (self.k - 3) * self.lam),
                normalize(q ** (2 * self.k - 5) * (self.mu + self.p ** 2)))

    def __call__(self, X):
        c0, c1, c2 = self.coefficients
        return c0 + c1 * X + c2 * X * X


def spin_lfactor(p: int, k: int, lam, mu) -> LFactor:
    return LFactor(p, k, lam, mu)


@dataclass(frozen=True)
class EigenLFactor:
    """Degree-one denominator 1 - p^(k-2) (1+p)^-1 lambda X of the T01-eigenvector case."""

    p: int
    k: int
    lam: Scalar

    @property
    def coefficients(self) -> tuple:
        q = Fraction(self.p)
        return (1, normalize(-q ** (self.k - 2) / (1 + q) * self.lam))

    def __call__(self, X):
        c0, c1 = self.coefficients
        return c0 + c1 * X


def radial_series(a: CoefficientFn, S, p: int, length: int) -> list[Lookup]:
    return [a(times(S, p ** t)) for t in range(length)]


def radial_numerator(lf, series: Sequence) -> list:
    """First coefficients of D(X) * sum a(p^t S) X^t (the numerator N(X, S))."""
    cs = lf.coefficients
    return [sum(cs[i] * series[j - i] for i in range(len(cs)) if j - i >= 0)
            for j in range(len(cs))]


def radial_check(a: CoefficientFn, S, lf, length: int = 9) -> IdentityVerdict:
    """Check that D(X) times the radial series is a polynomial of degree <= deg D.

    Every coefficient of X^t with deg D < t < length must vanish; that is
    the linear recurrence a(p^t S) = -sum c_i a(p^(t-i) S).
    """
    p = lf.p
    vals = radial_series(a, S, p, length)
    missing = tuple(tuple(times(S, p ** t)) for t, v in enumerate(vals) if not v.computable)
    known_vals = []
    for v in vals:
        if not v.computable:
            break
        known_vals.append(v.value)
    cs = lf.coefficients
    deg = len(cs) - 1
    if len(known_vals) <= deg + 1:
        return IdentityVerdict("radial", tuple(S), Verdict.SKIPPED, missing=missing)
    for t in range(deg + 1, len(known_vals)):
        total = sum(cs[i] * known_vals[t - i] for i in range(len(cs)))
        if total != 0:
            return IdentityVerdict("radial", tuple(S), Verdict.FAIL,
                                   known_vals[t], known_vals[t] - total)
    return IdentityVerdict("radial", tuple(S), Verdict.PASS, len(known_vals), None)


def radial_from_recurrence(lf, seeds: Sequence, length: int) -> list:
    """Extend initial values by the recurrence of ``lf`` (generator for test data)."""
    cs = lf.coefficients
    vals = list(seeds)
    while len(vals) < length:
        t = len(vals)
        vals.append(normalize(-sum(cs[i] * vals[t - i] for i in range(1, len(cs)))))
    return vals
