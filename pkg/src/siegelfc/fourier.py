"""Truncated Fourier expansions keyed by Gamma0(N)+- orbit.

A coefficient query answers with one of three states: a known value, a
structural zero (the index is outside the support), or unknown (the data
does not reach that far).  Operators propagate the unknown state instead
of treating missing data as zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence

from .quadform import QuadIndex, DomainError, gamma0_orbits, orbit_key, stable_part
from .scalars import FieldElement, Scalar, format_scalar, normalize, parse_scalar, poly_text

PARAMODULAR = "paramodular"
STABLE_KLINGEN = "stable-klingen"
SPACES = (PARAMODULAR, STABLE_KLINGEN)


class Status(enum.Enum):
    KNOWN = "known"
    ZERO = "structural-zero"
    UNKNOWN = "unknown"


class Lookup(NamedTuple):
    status: Status
    value: object = 0

    @property
    def computable(self) -> bool:
        return self.status is not Status.UNKNOWN

    def __add__(self, other: "Lookup") -> "Lookup":
        if self.status is Status.UNKNOWN or other.status is Status.UNKNOWN:
            return UNKNOWN
        if self.status is Status.ZERO:
            return other
        if other.status is Status.ZERO:
            return self
        return Lookup(Status.KNOWN, self.value + other.value)

    def __neg__(self) -> "Lookup":
        return self if self.status is not Status.KNOWN else Lookup(Status.KNOWN, -self.value)

    def __sub__(self, other: "Lookup") -> "Lookup":
        return self + (-other)

    def scaled(self, factor) -> "Lookup":
        if self.status is not Status.KNOWN or factor == 1:
            return self
        # integer factors keep integer (and integer-array) values out of Fraction arithmetic
        if isinstance(factor, Fraction) and factor.denominator == 1:
            factor = factor.numerator
        return Lookup(Status.KNOWN, self.value * factor)

    def __repr__(self) -> str:
        if self.status is Status.KNOWN:
            return f"Known({self.value!r})"
        return "StructuralZero" if self.status is Status.ZERO else "Unknown"


ZERO = Lookup(Status.ZERO, 0)
UNKNOWN = Lookup(Status.UNKNOWN, None)


def known(value) -> Lookup:
    return Lookup(Status.KNOWN, value)


def lookup_sum(items: Iterable[Lookup]) -> Lookup:
    total = ZERO
    for item in items:
        if item.status is Status.UNKNOWN:
            return UNKNOWN
        total = total + item
    return total


CoefficientFn = Callable[[tuple], Lookup]


class IngestError(ValueError):
    pass


class ConflictError(IngestError):
    pass


class ParseError(ValueError):
    pass


def integral_index(S: Sequence) -> Optional[QuadIndex]:
    """The index as integers, or None when some entry is not integral."""
    out = []
    for x in S:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                return None
            x = x.numerator
        out.append(int(x))
    return QuadIndex(*out)


@lru_cache(maxsize=1 << 20)
def _key(S: QuadIndex, N: int):
    return orbit_key(S, N)


@dataclass
class FourierExpansion:
    """Orbit-compressed coefficient table of a Siegel cusp form of degree 2.

    ``table`` maps canonical orbit keys (see :func:`quadform.orbit_key`) to
    values.  Keys absent from the table answer as unknown.
    """

    level: int
    weight: int
    space: str = STABLE_KLINGEN
    table: dict = field(default_factory=dict)
    bound: int = 1
    fieldpoly: Optional[tuple] = None

    def __post_init__(self):
        if self.space not in SPACES:
            raise DomainError(f"unknown space {self.space!r}")
        if self.level < 1 or self.weight < 1:
            raise DomainError("level and weight must be positive")

    @property
    def stable_level(self) -> int:
        return stable_part(self.level)

    @property
    def index_modulus(self) -> int:
        return self.level if self.space == PARAMODULAR else self.stable_level

    def __len__(self) -> int:
        return len(self.table)

    def in_support(self, S: QuadIndex) -> bool:
        a, b, c = S
        return a > 0 and 4 * a * c - b * b > 0 and c % self.index_modulus == 0

    def lookup(self, S: Sequence) -> Lookup:
        T = integral_index(S)
        if T is None or not self.in_support(T):
            return ZERO
        if T.disc4 >= self.bound:
            return UNKNOWN
        ok = _key(T, self.level)
        if ok.odd_stabilizer and self.weight % 2:
            return ZERO
        value = self.table.get(ok.key)
        if value is None:
            return UNKNOWN
        if ok.sign == -1 and self.weight % 2:
            value = -value
        return known(value)

    __call__ = lookup

    def keys(self) -> list[QuadIndex]:
        return sorted(self.table)

    def items(self) -> Iterator[tuple[QuadIndex, object]]:
        for k in self.keys():
            yield k, self.table[k]

    def restrict(self, bound: int) -> "FourierExpansion":
        """Drop everything at discriminant >= bound."""
        b = min(bound, self.bound)
        return FourierExpansion(self.level, self.weight, self.space,
                                {k: v for k, v in self.table.items() if k.disc4 < b},
                                b, self.fieldpoly)

    def same_as(self, other: "FourierExpansion") -> bool:
        return (self.level, self.weight, self.space, self.bound, self.fieldpoly) == (
            other.level, other.weight, other.space, other.bound, other.fieldpoly) and \
            self.table == other.table


def orbits_below(N: int, bound: int, modulus: int) -> list[QuadIndex]:
    """Keys of all Gamma0(N)+- orbits with modulus | c and disc4 < bound."""
    out = []
    for d in range(3, bound):
        if d % 4 in (0, 3):
            out.extend(gamma0_orbits(N, d, modulus))
    return out


def forced_zero(S: QuadIndex, N: int, k: int) -> bool:
    """True when the sign rule forces a(S) = 0 (odd k, det -1 stabilizer)."""
    return bool(k % 2) and _key(S, N).odd_stabilizer


def materialize(fn: CoefficientFn, level: int, weight: int, bound: int,
                space: str = STABLE_KLINGEN, fieldpoly=None) -> FourierExpansion:
    """Evaluate a coefficient function on every orbit below ``bound``.

    Orbits whose value depends on unknown inputs are left out.
    """
    modulus = level if space == PARAMODULAR else stable_part(level)
    table = {}
    for key in orbits_below(level, bound, modulus):
        if forced_zero(key, level, weight):
            continue
        res = fn(key)
        if res.status is Status.UNKNOWN:
            continue
        table[key] = res.value if res.status is Status.KNOWN else 0
    return FourierExpansion(level, weight, space, table, bound, fieldpoly)


def random_expansion(level: int, weight: int, bound: int,
                     value: Callable[[], object],
                     space: str = STABLE_KLINGEN) -> FourierExpansion:
    """A complete table of random coefficients below ``bound``.

    Every orbit gets ``value()``; orbits where the sign rule forces 0 are
    left out, as :func:`materialize` does.
    """
    modulus = level if space == PARAMODULAR else stable_part(level)
    table = {}
    for key in orbits_below(level, bound, modulus):
        if not forced_zero(key, level, weight):
            table[key] = value()
    return FourierExpansion(level, weight, space, table, bound)


# ------------------------------------------------------------------ ingest

def ingest(rows: Iterable[Sequence], level: int, weight: int, space: str = STABLE_KLINGEN,
           fieldpoly=None, bound: Optional[int] = None,
           doubled_outer: bool = False) -> FourierExpansion:
    """Build an expansion from rows ``(a, b, c, value)`` or ``(a, b, c, d, value)``.

    With ``doubled_outer`` the first and last entries are read as 2a and 2c.
    """
    F = FourierExpansion(level, weight, space, {}, 1, fieldpoly)
    sources: dict[QuadIndex, int] = {}
    max_d = 0
    for lineno, row in enumerate(rows, 1):
        if len(row) not in (4, 5):
            raise IngestError(f"row {lineno}: expected 4 or 5 fields")
        a, b, c = (int(x) for x in row[:3])
        if doubled_outer:
            if a % 2 or c % 2:
                raise IngestError(f"row {lineno}: doubled entries must be even")
            a, c = a // 2, c // 2
        S = QuadIndex(a, b, c)
        if len(row) == 5 and int(row[3]) != S.disc4:
            raise IngestError(f"row {lineno}: d={row[3]} but 4ac-b^2={S.disc4}")
        value = row[-1]
        if isinstance(value, str):
            value = parse_scalar(value, fieldpoly)
        value = normalize(value)
        if not F.in_support(S):
            raise IngestError(f"row {lineno}: {S} is outside the index set of level {level}")
        ok = _key(S, level)
        if ok.sign == -1 and weight % 2:
            value = -value
        if ok.odd_stabilizer and weight % 2 and value != 0:
            raise ConflictError(f"row {lineno}: {S} must have coefficient 0 in odd weight")
        prev = F.table.get(ok.key)
        if prev is not None and prev != value:
            raise ConflictError(
                f"row {lineno}: {S} conflicts with row {sources[ok.key]} (same orbit {ok.key})")
        F.table[ok.key] = value
        sources.setdefault(ok.key, lineno)
        max_d = max(max_d, S.disc4)
    F.bound = bound if bound is not None else max_d + 1
    if any(k.disc4 >= F.bound for k in F.table):
        raise IngestError("bound must exceed every stored discriminant")
    return F


# ------------------------------------------------------------- file format

def serialize(F: FourierExpansion) -> str:
    lines = [f"# level={F.level}", f"# weight={F.weight}", f"# space={F.space}",
             f"# bound={F.bound}"]
    if F.fieldpoly is not None:
        lines.append(f"# fieldpoly={poly_text(F.fieldpoly)}")
    for k, v in F.items():
        lines.append(f"{k.a},{k.b},{k.c},{format_scalar(v, with_poly=F.fieldpoly is None)}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> FourierExpansion:
    header: dict[str, str] = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                header[key.strip()] = val.strip()
            continue
        parts = _split_row(line)
        if len(parts) not in (4, 5):
            raise ParseError(f"line {lineno}: expected a,b,c,value")
        try:
            nums = [int(x) for x in parts[:-1]]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer index") from exc
        rows.append((lineno, nums + [parts[-1]]))
    for required in ("level", "weight"):
        if required not in header:
            raise ParseError(f"missing header line '# {required}='")
    try:
        level, weight = int(header["level"]), int(header["weight"])
    except ValueError as exc:
        raise ParseError("level and weight must be integers") from exc
    space = header.get("space", STABLE_KLINGEN)
    fieldpoly = header.get("fieldpoly")
    modulus = None
    if fieldpoly:
        modulus = FieldElement([0], fieldpoly).modulus
    bound = int(header["bound"]) if "bound" in header else None
    parsed = []
    for lineno, row in rows:
        try:
            parsed.append(row[:-1] + [parse_scalar(row[-1], modulus)])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return ingest(parsed, level, weight, space, modulus, bound)


def _split_row(line: str) -> list[str]:
    # a field element value "[c0,c1]@poly" contains commas
    if "[" in line:
        head, _, tail = line.partition("[")
        parts = [p.strip() for p in head.rstrip(", ").split(",")]
        return parts + ["[" + tail.strip()]
    return [p.strip() for p in line.split(",")]


def read_fourier(path) -> FourierExpansion:
    return deserialize(Path(path).read_text(encoding="utf-8"))


def write_fourier(F: FourierExpansion, path) -> None:
    Path(path).write_text(serialize(F), encoding="utf-8")
