"""Binary quadratic form arithmetic for Fourier indices.

An index is stored as an integer triple ``(a, b, c)`` standing for the
half-integral matrix ``[[a, b/2], [b/2, c]]``.  Integral matrices act by
``g . S = g S g^T``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, NamedTuple, Optional

Matrix = tuple[int, int, int, int]  # (p, q, r, s) for [[p, q], [r, s]]

IDENTITY: Matrix = (1, 0, 0, 1)
SWAP: Matrix = (0, 1, -1, 0)
FLIP: Matrix = (1, 0, 0, -1)


class QuadIndex(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc4(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc4 > 0

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


class GLWitness(NamedTuple):
    entries: Matrix
    det: int


class DomainError(ValueError):
    """Raised when an input lies outside an operation's domain."""


def disc4(S: Iterable[int]) -> int:
    a, b, c = S
    return 4 * a * c - b * b


def parse_index(text: str) -> QuadIndex:
    parts = [int(x) for x in text.replace("(", "").replace(")", "").split(",")]
    if len(parts) != 3:
        raise DomainError(f"expected a,b,c but got {text!r}")
    return QuadIndex(*parts)


# ---------------------------------------------------------------- matrices

def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    p, q, r, s = g
    w, x, y, z = h
    return (p * w + q * y, p * x + q * z, r * w + s * y, r * x + s * z)


def mat_det(g: Matrix) -> int:
    return g[0] * g[3] - g[1] * g[2]


def mat_inv(g: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    d = mat_det(g)
    if d not in (1, -1):
        raise DomainError(f"matrix {g} is not unimodular")
    p, q, r, s = g
    return (s * d, -q * d, -r * d, p * d)


def act(g: Matrix, S: Iterable[int]) -> QuadIndex:
    """Return g S g^T in (a, b, c) coordinates."""
    a, b, c = S
    p, q, r, s = g
    return QuadIndex(
        a * p * p + b * p * q + c * q * q,
        2 * a * p * r + b * (p * s + q * r) + 2 * c * q * s,
        a * r * r + b * r * s + c * s * s,
    )


# --------------------------------------------------------------- reduction

def is_reduced(S: Iterable[int]) -> bool:
    a, b, c = S
    if not (-a < b <= a <= c):
        return False
    return not ((b == a or a == c) and b < 0)


def reduce(S: Iterable[int]) -> tuple[QuadIndex, Matrix]:
    """Gauss reduction.

    Returns the canonical reduced form ``R`` and ``g`` in SL(2,Z) with
    ``act(g, S) == R``.
    """
    a, b, c = S
    if a <= 0 or 4 * a * c - b * b <= 0:
        raise DomainError(f"{tuple(S)} is not positive definite")
    g = IDENTITY
    while True:
        # translate b into (-a, a]
        t = (a - b) // (2 * a)
        if t:
            c = a * t * t + b * t + c
            b = b + 2 * a * t
            g = mat_mul((1, 0, t, 1), g)
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            g = mat_mul(SWAP, g)
            continue
        return QuadIndex(a, b, c), g


def y_set(d: int) -> list[QuadIndex]:
    """All (a, b, c) with 4ac - b^2 = d, 0 < a <= c and |b| <= a."""
    if d <= 0:
        raise DomainError("d must be positive")
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a, a + 1):
            num = d + b * b
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a:
                    out.append(QuadIndex(a, b, c))
        a += 1
    return out


@lru_cache(maxsize=None)
def reduced_forms(d: int) -> tuple[QuadIndex, ...]:
    """One canonical reduced form per SL(2,Z)-class of discriminant d."""
    return tuple(S for S in y_set(d) if is_reduced(S))


@lru_cache(maxsize=65536)
def automorphs(R: QuadIndex) -> tuple[Matrix, ...]:
    """All u in GL(2,Z) with u.R = R, for reduced R.

    Automorphs of a reduced definite form have entries in {-1, 0, 1}.
    """
    return tuple(
        u for u in product((-1, 0, 1), repeat=4)
        if mat_det(u) in (1, -1) and act(u, R) == R
    )


# ------------------------------------------------------- congruence groups

@dataclass(frozen=True)
class CongruenceGroup:
    """A finite-index subgroup of SL(2,Z) cut out by congruences.

    ``kind`` is one of SL2Z, Gamma0, G1, G2, G3, Gamma, Upper.  ``Upper``
    is b = 0 and a = d mod M, c = 0 mod N.  With ``pm`` the group is
    extended by ``diag(1, -1)``.
    """

    kind: str
    N: int = 1
    pm: bool = False
    M: int = 1

    @property
    def level(self) -> int:
        return {"SL2Z": 1, "Gamma0": self.N, "G1": 4, "G2": 16, "G3": 8,
                "Gamma": self.N, "Upper": math.lcm(self.M, self.N)}[self.kind]

    def _moduli(self) -> tuple[int, int]:
        """Moduli dividing the upper-right and lower-left entries."""
        return {"SL2Z": (1, 1), "Gamma0": (1, self.N), "G1": (4, 4), "G2": (2, 16),
                "G3": (4, 8), "Gamma": (self.N, self.N), "Upper": (self.M, self.N)}[self.kind]

    def _congruence(self, p: int, q: int, r: int, s: int) -> bool:
        k = self.kind
        if k == "SL2Z":
            return True
        if k == "Gamma0":
            return r % self.N == 0
        if k == "G1":
            return q % 4 == 0 and r % 4 == 0
        if k == "G2":
            return q % 2 == 0 and r % 16 == 0
        if k == "G3":
            return q % 4 == 0 and r % 8 == 0
        if k == "Gamma":
            n = self.N
            return q % n == 0 and r % n == 0 and (p - 1) % n == 0 and (s - 1) % n == 0
        if k == "Upper":
            return q % self.M == 0 and r % self.N == 0 and (p - s) % self.M == 0
        raise DomainError(f"unknown group kind {k}")

    def contains(self, g: Matrix) -> bool:
        d = mat_det(g)
        if d == 1:
            return self._congruence(*g)
        if d == -1 and self.pm:
            return self._congruence(*mat_mul(FLIP, g))
        return False

    def __str__(self) -> str:
        name = {"Gamma0": f"Gamma0({self.N})", "Gamma": f"Gamma({self.N})",
                "Upper": f"Upper({self.M},{self.N})"}.get(
            self.kind, self.kind)
        return name + ("+-" if self.pm else "")


SL2Z = CongruenceGroup("SL2Z")


def gamma0(N: int, pm: bool = False) -> CongruenceGroup:
    return CongruenceGroup("Gamma0", N, pm)


G1 = CongruenceGroup("G1")
G2 = CongruenceGroup("G2")
G3 = CongruenceGroup("G3")
GAMMA16 = CongruenceGroup("Gamma", 16)


def upper(M: int, N: int) -> CongruenceGroup:
    return CongruenceGroup("Upper", N, False, M)


_GROUP_RE = re.compile(r"^(SL2Z|G1|G2|G3|Gamma0|Gamma|Upper)(?:\((\d+)(?:,(\d+))?\))?(\+-)?$")


def parse_group(text: str) -> CongruenceGroup:
    """Parse names such as ``G2``, ``Gamma0(16)+-``, ``Gamma(16)``, ``Upper(4,16)``."""
    m = _GROUP_RE.match(text.replace(" ", ""))
    if not m:
        raise DomainError(f"unknown group {text!r}")
    kind, x, y, pm = m.groups()
    pm = pm is not None
    if kind in ("SL2Z", "G1", "G2", "G3"):
        if x is not None:
            raise DomainError(f"{kind} takes no level")
        return CongruenceGroup(kind, 1, pm)
    if x is None or (kind != "Upper") == (y is not None):
        raise DomainError(f"bad parameters for {kind} in {text!r}")
    if kind == "Upper":
        return CongruenceGroup("Upper", int(y), pm, int(x))
    return CongruenceGroup(kind, int(x), pm)


@lru_cache(maxsize=None)
def _reduced_group(G: CongruenceGroup) -> tuple[Matrix, ...]:
    """Image of the (det 1 part of) G in SL(2, Z/L)."""
    L = G.level
    if L == 1:
        return ((0, 0, 0, 0),)
    qm, rm = G._moduli()
    return tuple(
        (a, q, r, d)
        for a in range(L) for d in range(L)
        for q in range(0, L, qm) for r in range(0, L, rm)
        if (a * d - q * r - 1) % L == 0 and G._congruence(a, q, r, d)
    )


def _coset_label(G: CongruenceGroup, g: Matrix) -> Matrix:
    """Canonical label of the right coset G g, for g in GL(2,Z)."""
    if mat_det(g) == -1:
        if not G.pm:
            raise DomainError("det -1 matrix outside SL(2,Z)")
        g = mat_mul(FLIP, g)
    L = G.level
    if L == 1:
        return (0, 0, 0, 0)
    gm = tuple(x % L for x in g)
    return min(tuple(x % L for x in mat_mul(h, gm)) for h in _reduced_group(G))


@lru_cache(maxsize=None)
def coset_reps(G: CongruenceGroup) -> tuple[Matrix, ...]:
    """Right coset representatives of G in SL(2,Z), by breadth-first search."""
    seen = {_coset_label(G, IDENTITY): IDENTITY}
    frontier = [IDENTITY]
    gens = (SWAP, (1, 1, 0, 1))
    while frontier:
        nxt = []
        for g in frontier:
            for t in gens:
                h = mat_mul(g, t)
                lab = _coset_label(G, h)
                if lab not in seen:
                    seen[lab] = h
                    nxt.append(h)
        frontier = nxt
    return tuple(seen.values())


# ------------------------------------------------------------ index sets

def stable_part(N: int) -> int:
    """N divided by the product of the primes dividing N."""
    n, rad, p = N, 1, 2
    while p * p <= n:
        if n % p == 0:
            rad *= p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        rad *= n
    return N // rad


def in_A(S: Iterable[int], N: int) -> bool:
    a, b, c = S
    return c % N == 0 and a > 0 and 4 * a * c - b * b > 0


def in_B(S: Iterable[int], N: int) -> bool:
    return in_A(S, stable_part(N))


# ------------------------------------------------------- Gamma0(N)+- keys

class _P1:
    """The projective line over Z/N, with canonical SL(2,Z) lifts."""

    def __init__(self, N: int):
        self.N = N
        units = [u for u in range(N) if math.gcd(u, N) == 1] if N > 1 else [0]
        self.label: dict[tuple[int, int], tuple[int, int]] = {}
        self.lift: dict[tuple[int, int], Matrix] = {}
        for c, d in product(range(N), repeat=2):
            if math.gcd(math.gcd(c, d), N) != 1:
                continue
            lab = min(((u * c) % N, (u * d) % N) for u in units)
            self.label[(c, d)] = lab
            if lab not in self.lift:
                self.lift[lab] = _complete(*lab, N)
        self.points = sorted(self.lift)

    def of(self, g: Matrix) -> tuple[int, int]:
        N = self.N
        return self.label[(g[2] % N, g[3] % N)]


def _complete(c: int, d: int, N: int) -> Matrix:
    """An SL(2,Z) matrix whose bottom row is congruent to (c, d) mod N."""
    if N == 1:
        return IDENTITY
    if c == 0:
        c = N
    while math.gcd(c, d) != 1:
        d += N
    # p*d - q*c = 1
    g, x, y = _egcd(d, c)
    return (x, -y, c, d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@lru_cache(maxsize=None)
def p1(N: int) -> _P1:
    return _P1(N)


class OrbitKey(NamedTuple):
    """Canonical representative of a Gamma0(N)+- orbit.

    ``sign`` is det(h) for the transform h taking the query to ``key``;
    ``odd_stabilizer`` flags orbits stabilized by some det -1 element.
    """

    key: QuadIndex
    sign: int
    odd_stabilizer: bool
    witness: Matrix


def _proper_key(S: Iterable[int], N: int):
    """Smallest Gamma0(N)-image of S, with the dets of the automorphs reaching it."""
    R, g0 = reduce(S)
    P = p1(N)
    g0inv = mat_inv(g0)
    best = None
    signs = set()
    for u in automorphs(R):
        lift = P.lift[P.of(mat_mul(g0inv, u))]
        K = act(lift, R)
        if best is None or K < best[0]:
            best = (K, mat_det(u), mat_mul(lift, mat_mul(mat_inv(u), g0)))
            signs = {mat_det(u)}
        elif K == best[0]:
            signs.add(mat_det(u))
    return best, signs


def orbit_key(S: Iterable[int], N: int) -> OrbitKey:
    (K, sign, h), signs = _proper_key(S, N)
    (Kf, sign_f, hf), signs_f = _proper_key(act(FLIP, S), N)
    sign_f, signs_f, hf = -sign_f, {-x for x in signs_f}, mat_mul(hf, FLIP)
    if Kf < K:
        return OrbitKey(Kf, sign_f, len(signs_f) > 1, hf)
    if Kf == K:
        signs |= signs_f
    return OrbitKey(K, sign, len(signs) > 1, h)


@lru_cache(maxsize=None)
def gamma0_orbits(N: int, d: int, modulus: int) -> tuple[QuadIndex, ...]:
    """Keys of all Gamma0(N)+- orbits of discriminant d with modulus | c."""
    if N % modulus:
        raise DomainError("modulus must divide N")
    P = p1(N)
    keys = set()
    for R in reduced_forms(d):
        for lab in P.points:
            T = act(P.lift[lab], R)
            if T.c % modulus == 0:
                keys.add(orbit_key(T, N).key)
    return tuple(sorted(keys))


# ------------------------------------------------------ orbit enumeration

def _in_index_set(S: QuadIndex, N: int, variant: str) -> bool:
    return in_B(S, N) if variant == "B" else in_A(S, N)


def orbit_reps(G: CongruenceGroup, N: int, d: int, variant: str = "A") -> list[QuadIndex]:
    """G-orbit representatives of the forms of discriminant d in A(N) (or B(N)).

    Each orbit inside the SL(2,Z)-class of a reduced form R corresponds to a
    class of cosets G k with k.R in the index set, modulo right
    multiplication by the automorphs of R.
    """
    reps = []
    cosets = coset_reps(G)
    for R in reduced_forms(d):
        auts = [u for u in automorphs(R) if G.pm or mat_det(u) == 1]
        done = set()
        for k in cosets:
            lab = _coset_label(G, k)
            if lab in done:
                continue
            if not _in_index_set(act(k, R), N, variant):
                continue
            members = []
            for u in auts:
                ku = mat_mul(k, u)
                done.add(_coset_label(G, ku))
                members.append(ku)
            reps.append(min(act(m, R) for m in members))
    return sorted(reps)


def equivalent(S1: Iterable[int], S2: Iterable[int],
               G: CongruenceGroup = SL2Z) -> Optional[GLWitness]:
    """A witness g in G with g.S1 = S2, or None."""
    S1, S2 = QuadIndex(*S1), QuadIndex(*S2)
    if S1.disc4 != S2.disc4:
        return None
    R1, g1 = reduce(S1)
    R2, g2 = reduce(S2)
    if R1 != R2:
        return None
    g2inv = mat_inv(g2)
    for u in automorphs(R1):
        h = mat_mul(g2inv, mat_mul(u, g1))
        if G.contains(h):
            return GLWitness(h, mat_det(h))
    return None
