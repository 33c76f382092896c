"""Local data for paramodular representations of GSp(4) over a p-adic field.

Four tables are encoded as data: conductor exponents with Hecke eigenvalues
(lambda, mu, epsilon), stable Klingen dimensions, and the characteristic
polynomials of the stable operators T01 and T10 on V_s(1) (once in terms
of inducing data, once in terms of eigenvalues).  Formulas are stored as
strings and parsed into sympy expressions on load.

Symbols: ``q`` residue field size; ``s``, ``c``, ``c1``, ``c2`` the values
at a uniformizer of sigma, chi, chi1, chi2; ``cs``, ``c1s``, ``c2s``, ``xs``
values of the unramified products chi*sigma, chi_i*sigma, xi*sigma when
sigma itself is ramified; ``sgn`` a sign such as chi(-1); ``esp`` the
epsilon factor eps(1/2, sigma pi); ``a`` the conductor parameter of a row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import sympy

SYMBOLS = {name: sympy.Symbol(name) for name in
           ("q", "s", "c", "c1", "c2", "cs", "c1s", "c2s", "xs", "sgn", "esp", "a", "n",
            "lam", "mu", "eps", "X")}
q, X, n = SYMBOLS["q"], SYMBOLS["X"], SYMBOLS["n"]
LAM, MU, EPS = SYMBOLS["lam"], SYMBOLS["mu"], SYMBOLS["eps"]

NOT_PARAMODULAR = None

# Types whose representations are generic.
GENERIC_TYPES = {"I", "IIa", "IIIa", "IVa", "Va", "VIa", "VII", "VIIIa", "IXa", "X", "XIa",
                 "sc.generic"}

# key: (inducing data, N_pi, N_pi_s, dim V_s(n), bar N_pi_s, dim bar V_s(n), category,
#       comment, epsilon, lambda, mu); None for the numeric columns means not paramodular
_CAT1 = ("a", "a-1", "(n-a+2)*(n-a+3)/2", "a-1", "n-a+2", 1)
_CAT2 = ("a", "a", "(n-a+1)*(n-a+4)/2", "a", "n-a+1", 2)
_NP = (None, None, None, None, None, None)

_ROWS = [
    ("I.1", "chi1, chi2, sigma unr.", ("0", "0", "(n**2+5*n+2)/2", "1", "n", 2), "",
     "1", "q**(3/2)*s*(1+c1+c2+c1*c2)", "q**2*(c1+c2+1/c1+1/c2+1-q**(-2))"),
    ("I.2", "chi1, chi2 ram., sigma unr.", _CAT2, "", "sgn", "q**(3/2)*(s+1/s)", "0"),
    ("I.3", "chi_i sigma unr., sigma ram.", _CAT2, "", "sgn", "q**(3/2)*(c1s+c2s)", "0"),
    ("I.4", "chi_i sigma ram., sigma ram.", _CAT1, "", "sgn", "0", "-q**2"),
    ("IIa.1", "sigma, chi unr.", ("1", "1", "n*(n+3)/2", "1", "n", 2), "",
     "-c*s", "q**(3/2)*(s+1/s)+(q+1)*c*s", "q**(3/2)*(c+1/c)"),
    ("IIa.2", "sigma ram., chi sigma unr.", _CAT1, "", "-sgn*cs", "q*cs", "-q**2"),
    ("IIa.3", "sigma unr., chi sigma ram.", _CAT2, "", "sgn", "q**(3/2)*(s+1/s)", "0"),
    ("IIa.4", "sigma, chi sigma ram.", _CAT1, "", "sgn", "0", "-q**2"),
    ("IIb.1", "chi sigma unr., sigma unr.", ("0", "0", "n+1", None, "0", 2), "SK",
     "1", "q**(3/2)*(s+1/s)+q*(q+1)*c*s", "q**(3/2)*(q+1)*(c+1/c)+q**2-1"),
    ("IIb.2", "chi sigma unr., sigma ram.", ("a", "a", "n-a+1", None, "0", 2), "SK",
     "sgn", "q*(q+1)*cs", "0"),
    ("IIb.3", "chi sigma ram.", _NP, "SK", None, None, None),
    ("IIIa.1", "sigma unr.", ("2", "1", "n*(n+1)/2", "1", "n", 1), "",
     "1", "q*(s+1/s)", "-q**2+q"),
    ("IIIa.2", "sigma ram.", _CAT1, "", "1", "0", "-q**2"),
    ("IIIb.1", "sigma unr.", ("0", "0", "2*n+1", None, "0", 2), "",
     "1", "q*(q+1)*s*(1+c)", "q**2*(c+1/c+q+1)+q-1"),
    ("IIIb.2", "sigma ram.", _NP, "", None, None, None),
    ("IVa.1", "sigma unr.", ("3", "2", "(n-1)*n/2", "2", "n-1", 1), "", "-s", "s", "-q**2"),
    ("IVa.2", "sigma ram.", _CAT1, "", "1", "0", "-q**2"),
    ("IVb.1", "sigma unr.", ("2", "1", "n", "1", "1", 1), "non-unit.",
     "1", "s*(1+q**2)", "-q**2+q"),
    ("IVb.2", "sigma ram.", _NP, "non-unit.", None, None, None),
    ("IVc.1", "sigma unr.", ("1", "1", "2*n", "1", "1", 2), "non-unit.",
     "-s", "s*(q**3+q+2)", "q**3+1"),
    ("IVc.2", "sigma ram.", _NP, "non-unit.", None, None, None),
    ("IVd.1", "sigma unr.", ("0", "0", "1", None, "0", 2), "one-dim.",
     "1", "s*(q+1)*(q**2+1)", "q*(q+1)*(q**2+1)"),
    ("IVd.2", "sigma ram.", _NP, "one-dim.", None, None, None),
    ("Va.1", "sigma, xi unr.", ("2", "1", "n*(n+1)/2", "1", "n", 1), "", "-1", "0", "-q**2-q"),
    ("Va.2", "sigma unr., xi ram.", _CAT1, "", "-s*sgn", "s*q", "-q**2"),
    ("Va.3", "sigma ram., sigma xi unr.", _CAT1, "", "-sgn*xs", "xs*q", "-q**2"),
    ("Va.4", "sigma, sigma xi ram.", _CAT1, "", "sgn", "0", "-q**2"),
    ("Vb.1", "sigma, xi unr.", ("1", "1", "n", None, "0", 2), "SK", "s", "s*(q**2-1)", "-q**2-q"),
    ("Vb.2", "sigma unr., xi ram.", ("a", "a", "n-a+1", None, "0", 2), "SK",
     "sgn", "s*(q**2+q)", "0"),
    ("Vb.3", "sigma ram., sigma xi unr.", _NP, "SK", None, None, None),
    ("Vb.4", "sigma, sigma xi ram.", _NP, "SK", None, None, None),
    ("Vc.1", "sigma, xi unr.", ("1", "1", "n", None, "0", 2), "SK",
     "-s", "-s*(q**2-1)", "-q**2-q"),
    ("Vc.2", "sigma unr., xi ram.", _NP, "SK", None, None, None),
    ("Vc.3", "sigma ram., sigma xi unr.", ("a", "a", "n-a+1", None, "0", 2), "SK",
     "sgn", "xs*(q**2+q)", "0"),
    ("Vc.4", "sigma, sigma xi ram.", _NP, "SK", None, None, None),
    ("Vd.1", "sigma, xi unr.", ("0", "0", "1", None, "0", 2), "", "1", "0", "-(q+1)*(q**2+1)"),
    ("Vd.2", "sigma or xi ram.", _NP, "", None, None, None),
    ("VIa.1", "sigma unr.", ("2", "1", "n*(n+1)/2", "1", "n", 1), "", "1", "2*q*s", "-q**2+q"),
    ("VIa.2", "sigma ram.", _CAT1, "", "1", "0", "-q**2"),
    ("VIb.1", "sigma unr.", _NP, "", None, None, None),
    ("VIb.2", "sigma ram.", _NP, "", None, None, None),
    ("VIc.1", "sigma unr.", ("1", "1", "n", None, "0", 2), "SK",
     "-s", "s*(q+1)**2", "q*(q+1)"),
    ("VIc.2", "sigma ram.", _NP, "SK", None, None, None),
    ("VId.1", "sigma unr.", ("0", "0", "n+1", None, "0", 2), "",
     "1", "2*q*(q+1)*s", "(q+1)*(q**2+2*q-1)"),
    ("VId.2", "sigma ram.", _NP, "", None, None, None),
    ("VII", "", _CAT1, "", "sgn", "0", "-q**2"),
    ("VIIIa", "", _CAT1, "", "1", "0", "-q**2"),
    ("VIIIb", "", _NP, "", None, None, None),
    ("IXa", "", _CAT1, "", "sgn", "0", "-q**2"),
    ("IXb", "", _NP, "", None, None, None),
    ("X.1", "sigma unr.", _CAT2, "", "esp", "q**(3/2)*(s+1/s)", "0"),
    ("X.2", "sigma ram.", _CAT1, "", "sgn*esp", "0", "-q**2"),
    ("XIa.1", "sigma unr.", _CAT1, "", "-s*esp", "q*s", "-q**2"),
    ("XIa.2", "sigma ram.", _CAT1, "", "sgn*esp", "0", "-q**2"),
    ("XIb.1", "sigma unr.", ("a", "a", "n-a+1", None, "0", 2), "SK", "esp", "(q**2+q)*s", "0"),
    ("XIb.2", "sigma ram.", _NP, "SK", None, None, None),
    ("sc.generic", "generic", _CAT1, "", "esp", "0", "-q**2"),
    ("sc.nongeneric", "non-generic", _NP, "", None, None, None),
]

EXPECTED_ROWS = 58

# type: (constraint note, T01 in inducing data, T10 in inducing data,
#        T01 in eigenvalues, T10 in eigenvalues)
_CHARPOLY = {
    "I": ("c1*c2*s**2 = 1",
          "(X-c1*(1+c2)*s*q**(3/2))*(X-c2*(1+c1)*s*q**(3/2))"
          "*(X-(1+c1)*s*q**(3/2))*(X-(1+c2)*s*q**(3/2))",
          "(X-c1*q**2)*(X-c2*q**2)*(X-q**2/c2)*(X-q**2/c1)",
          "X**4-2*lam*X**3+(lam**2+q*mu+3*q**3+q)*X**2-q*lam*(mu+3*q**2+1)*X+q**3*lam**2",
          "X**4-(mu-q**2+1)*X**3+(q*lam**2-2*q**2*mu-2*q**2)*X**2-q**4*(mu-q**2+1)*X+q**8"),
    "IIa": ("c**2*s**2 = 1",
            "X**2-(2*c*s*q+(s+1/s)*q**(3/2))*X+q**2+q**3+(c+1/c)*q**(5/2)",
            "X**2-(c+1/c)*q**(3/2)*X+q**3",
            "X**2+((q-1)*eps-lam)*X+q*(q**2+q+mu)",
            "X**2-mu*X+q**3"),
    "IIb": ("c**2*s**2 = 1",
            "X**2-(2*c*s*q**2+(s+1/s)*q**(3/2))*X+q**3+q**4+(c+1/c)*q**(7/2)",
            "X**2-(c+1/c)*q**(5/2)*X+q**5",
            "X**2-lam*(mu+1+q**2+2*q**3)/(mu+1+q+q**2+q**3)*X+q**2*mu/(q+1)+q**2*(q**2+1)",
            "X**2-q*(mu/(q+1)-q+1)*X+q**5"),
    "IIIa": ("c*s**2 = 1", "X-q*(s+1/s)", "X-q", "X-lam", "X-q"),
    "IIIb": ("c*s**2 = 1",
             "X**3-(s+1/s)*q*(1+2*q)*X**2+(1+3*q+(c+1/c)*q)*q**2*(q+1)*X"
             "-(s+1/s)*q**4*(q+1)**2",
             "X**3-((c+1/c)*q**2+q**3)*X**2+((c+1/c)*q**5+q**4)*X-q**7",
             "X**3-lam*(1+q/(1+q))*X**2+(1+2*q**2-q**3+mu)*q*(q+1)*X-lam*q**3*(q+1)",
             "X**3-(mu+1-q-q**2)*X**2+q**3*(mu+1-q**2-q**3)*X-q**7"),
    "IVb": ("s**2 = 1", "X-s*(1+q**2)", "X-q", "X-lam", "X-q"),
    "IVc": ("s**2 = 1", "X**2-s*(1+2*q+q**3)*X+q*(1+q)*(1+q**2)", "X**2-(1+q**3)*X+q**3",
            "X**2-lam*(1+2*q+q**3)/(2+q+q**3)*X+q*(1+q)*(1+q**2)", "X**2-(1+q**3)*X+q**3"),
    "IVd": ("s**2 = 1", "X-s*(q**2+q**3)", "X-q**4", "X-lam*q**2/(q**2+1)", "X-q**4"),
    "Va": ("s**2 = 1", "X", "X+q", "X", "X+q"),
    "Vb": ("s**2 = 1", "X-s*(q**2-q)", "X+q**2", "X-lam*q/(q+1)", "X+q**2"),
    "Vc": ("s**2 = 1", "X+s*(q**2-q)", "X+q**2", "X-lam*q/(q+1)", "X+q**2"),
    "Vd": ("s**2 = 1", "X", "X+q**3", "X", "X+q**3"),
    "VIa": ("s**2 = 1", "X-2*q*s", "X-q", "X-lam", "X-q"),
    "VIc": ("s**2 = 1", "X-s*(q**2+q)", "X-q**2", "X-lam*q/(q+1)", "X-q**2"),
    "VId": ("s**2 = 1", "X**2-s*(q+3*q**2)*X+2*q**3*(q+1)", "(X-q**2)*(X-q**3)",
            "X**2-lam/2*(1+2*q/(1+q))*X+2*q**3*(q+1)", "(X-q**2)*(X-q**3)"),
}

# the unramified eigenvalue row belonging to each Iwahori-spherical type
CHARPOLY_ROW = {t: ("I.1" if t == "I" else f"{t}.1") for t in _CHARPOLY}


class LocalDataError(ValueError):
    pass


def _expr(text):
    if text is None:
        return None
    return sympy.sympify(text, locals=SYMBOLS)


@dataclass(frozen=True)
class Row:
    key: str
    inducing: str
    N_pi: object
    N_pi_s: object
    dim: object
    bar_N_pi_s: object
    bar_dim: object
    category: Optional[int]
    comment: str
    epsilon: object
    lam: object
    mu: object

    @property
    def type(self) -> str:
        return self.key.split(".")[0] if not self.key.startswith("sc") else self.key

    @property
    def paramodular(self) -> bool:
        return self.N_pi is not None

    @property
    def generic(self) -> bool:
        return self.type in GENERIC_TYPES


@lru_cache(maxsize=None)
def rows() -> dict[str, Row]:
    """The local table, keyed by row; checks every row is present exactly once."""
    out = {}
    for key, inducing, nums, comment, eps, lam, mu in _ROWS:
        if key in out:
            raise LocalDataError(f"duplicate row {key}")
        N, Ns, dim, bN, bdim, cat = nums
        out[key] = Row(key, inducing, _expr(N), _expr(Ns), _expr(dim), _expr(bN), _expr(bdim),
                       cat, comment, _expr(eps), _expr(lam), _expr(mu))
    if len(out) != EXPECTED_ROWS:
        raise LocalDataError(f"expected {EXPECTED_ROWS} rows, found {len(out)}")
    return out


ALIASES = {"I unramified": "I.1", "IIIa": "IIIa.1", "IVb": "IVb.1", "Va": "Va.1",
           "VIa": "VIa.1", "IIa": "IIa.1"}


def row(type_key: str) -> Row:
    key = ALIASES.get(type_key, type_key)
    table = rows()
    if key not in table:
        if f"{key}.1" in table:
            key = f"{key}.1"
        else:
            raise LocalDataError(f"unknown representation type {type_key!r}")
    return table[key]


# ---------------------------------------------------------------- dimensions

def dim_vs(type_key: str, n_value: int, a: Optional[int] = None) -> int:
    """dim V_s(p^n) for a row of the table (``a`` is the row's conductor parameter)."""
    r = row(type_key)
    if not r.paramodular:
        raise LocalDataError(f"{r.key} is not paramodular")
    subs = {n: n_value}
    if r.N_pi.has(SYMBOLS["a"]):
        if a is None:
            raise LocalDataError(f"{r.key} needs the parameter a")
        subs[SYMBOLS["a"]] = a
    level_s = int(r.N_pi_s.subs(subs))
    if n_value < level_s:
        return 0
    value = r.dim.subs(subs)
    return int(value)


def dim_bar_vs(type_key: str, n_value: int, a: Optional[int] = None) -> int:
    r = row(type_key)
    subs = {n: n_value, SYMBOLS["a"]: a if a is not None else 0}
    if r.bar_N_pi_s is None:
        return 0
    if n_value < int(r.bar_N_pi_s.subs(subs)):
        return 0
    return int(r.bar_dim.subs(subs))


def paramodular_pair_dim(n_value: int, N_pi: int) -> int:
    """floor((n-N+1)^2/4) + floor((n-N+2)^2/4), zero below the conductor."""
    if n_value < N_pi:
        return 0
    return (n_value - N_pi + 1) ** 2 // 4 + (n_value - N_pi + 2) ** 2 // 4


# ----------------------------------------------------------- classification

@dataclass(frozen=True)
class LocalProfile:
    q: int
    N_pi: int
    lam: object
    mu: object
    epsilon: Optional[int] = None


@dataclass
class ClassOutcome:
    category: str
    generic: str
    matching_rows: list

    def as_dict(self) -> dict:
        return {"category": self.category, "generic": self.generic,
                "matching_rows": self.matching_rows}


def _sym(v):
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if hasattr(v, "rational") and v.rational() is not None:
        return _sym(v.rational())
    return sympy.sympify(v)


def _possible(expr, value, subs) -> bool:
    """Whether a table entry can take ``value`` (entries with free symbols always can)."""
    e = expr.subs(subs)
    if e.free_symbols:
        return True
    return sympy.simplify(e - value) == 0


def matching_rows(profile: LocalProfile) -> list[str]:
    subs = {q: profile.q}
    out = []
    for key, r in rows().items():
        if not r.paramodular:
            continue
        if not _possible(r.N_pi, profile.N_pi, subs):
            continue
        if not _possible(r.mu, _sym(profile.mu), subs):
            continue
        if not _possible(r.lam, _sym(profile.lam), subs):
            continue
        out.append(key)
    return out


def classify(profile: LocalProfile, t01_eigen: Optional[bool] = None) -> ClassOutcome:
    """Category and genericity of a paramodular representation with N_pi >= 2."""
    if profile.N_pi < 2:
        raise LocalDataError("the classification needs N_pi >= 2")
    Q = profile.q
    mu, lam = _sym(profile.mu), _sym(profile.lam)
    category = "Cat1" if mu != 0 else "Cat2"
    if profile.N_pi == 2 and mu == -Q * Q + Q and lam in (1 + Q * Q, -(1 + Q * Q)):
        generic = "No"
    elif mu != 0:
        generic = "Yes"
    elif t01_eigen is None:
        generic = "NeedsEigenFlag"
    else:
        generic = "No" if t01_eigen else "Yes"
    return ClassOutcome(category, generic, matching_rows(profile))


# -------------------------------------------------- characteristic polynomials

def charpoly_vs1(type_key: str, profile: Optional[LocalProfile] = None, which: str = "T01s",
                 in_terms_of: str = "eigenvalues") -> sympy.Expr:
    """Characteristic polynomial of T01s or T10s on V_s(1).

    With ``in_terms_of="eigenvalues"`` the result is in X, lam, mu, eps, q,
    with the profile's values substituted when given; ``"inducing"`` gives
    the polynomial in the character values.
    """
    key = type_key.split(".")[0]
    if key not in _CHARPOLY:
        raise LocalDataError(f"{type_key!r} has V_s(1) = 0 or is not Iwahori-spherical")
    if which not in ("T01s", "T10s"):
        raise LocalDataError("which must be T01s or T10s")
    _, ind01, ind10, eig01, eig10 = _CHARPOLY[key]
    if in_terms_of == "inducing":
        return sympy.expand(_expr(ind01 if which == "T01s" else ind10))
    expr = _expr(eig01 if which == "T01s" else eig10)
    if profile is not None:
        subs = {q: profile.q, LAM: _sym(profile.lam), MU: _sym(profile.mu)}
        if profile.epsilon is not None:
            subs[EPS] = profile.epsilon
        expr = expr.subs(subs)
    return sympy.expand(sympy.simplify(expr))


def charpoly_from_row(type_key: str, which: str, values: dict) -> sympy.Expr:
    """Eigenvalue-form polynomial with the row's lambda, mu, epsilon substituted."""
    key = type_key.split(".")[0]
    r = rows()[CHARPOLY_ROW[key]]
    expr = _expr(_CHARPOLY[key][3 if which == "T01s" else 4])
    expr = expr.subs({LAM: r.lam, MU: r.mu, EPS: r.epsilon})
    return sympy.expand(sympy.simplify(expr.subs(values)))


def charpoly_types() -> list[str]:
    return list(_CHARPOLY)


def constraint(type_key: str) -> str:
    return _CHARPOLY[type_key.split(".")[0]][0]
