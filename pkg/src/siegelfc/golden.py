"""Published coefficient tables for two level-16 newforms as test data.

``fixtures/tables.json`` holds the printed rows.  Indices there are written
``alpha,beta,gamma`` with beta possibly half-integral; they are converted to
the integer triple ``(alpha, 2 beta, gamma)`` on load.  Every printed column
corresponds to one coefficient a(T) at an index T derived from the row's S;
:func:`column_index` gives that T (or None where the column is undefined).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from .fourier import ZERO, UNKNOWN, known
from .quadform import QuadIndex
from .siegel_ops import neighbor, times

P = 2  # all tables are at p = 2, level 16
LEVEL = 16
WEIGHTS = {"F-7-16-2": 7, "F-10-16-2": 10}


def parse_printed_index(text: str) -> QuadIndex:
    al, be, ga = (Fraction(x.strip()) for x in text.split(","))
    b = 2 * be
    if b.denominator != 1 or al.denominator != 1 or ga.denominator != 1:
        raise ValueError(f"not a half-integral index: {text}")
    return QuadIndex(int(al), int(b), int(ga))


def load_tables(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _integral(T) -> Optional[QuadIndex]:
    if all(Fraction(x).denominator == 1 for x in T):
        return QuadIndex(*(int(x) for x in T))
    return None


def column_index(table: str, column: str, S: QuadIndex, p: int = P) -> Optional[QuadIndex]:
    """The index whose coefficient the column prints, or None if undefined."""
    al, b, g = S
    i = int(column[1:]) if column[1:].isdigit() else None
    if column in ("aS",):
        return S
    if column == "a2S":
        return QuadIndex(*times(S, p))
    if column == "a4S":
        return QuadIndex(*times(S, p * p))
    if table == "sigma_squared" and column[0] == "A":
        return QuadIndex(*neighbor(S, i, p * p))
    if table == "vanishing_sum" and column[0] == "A":
        return QuadIndex(*neighbor(S, i, p))
    if table == "mu":
        if column[0] == "A":
            return QuadIndex(*neighbor(S, i, p))
        if column[0] == "B":
            return _integral(neighbor(S, Fraction(i, p), 1)) if b % p == 0 else None
    if table == "lambda_shadow":
        if column[0] == "A":
            return QuadIndex(*neighbor(S, i, p))
        if column[0] == "B":
            return QuadIndex(*times(neighbor(S, i, p), p))
        if column[0] == "C":
            if (al + b * i + g * i * i) % p:
                return None
            return _integral(times(neighbor(S, i, p * p), Fraction(1, p)))
    if table in ("eigen_test", "lambda_nonshadow"):
        if column[0] == "A":
            if (al + b * i) % p:
                return None
            return _integral(times(neighbor(S, i, p), Fraction(1, p)))
        if column[0] == "B":
            return QuadIndex(*neighbor(S, i, p)) if (al + b * i) % p == 0 else None
        if column[0] == "C":
            if (al + b * i + g * i * i) % (p * p):
                return None
            return _integral(times(neighbor(S, i, p * p), Fraction(1, p * p)))
    raise KeyError(f"no column {column!r} in table {table!r}")


VALUE_COLUMNS = {"sum", "mu", "lambda", "result"}


def rows(tables: dict, table: str, form: str) -> Iterator[tuple]:
    """(S, d, {column: printed value}) for each printed row."""
    cols = tables[table]["columns"]
    for row in tables[table].get(form, []):
        S = parse_printed_index(row[0])
        yield S, row[1], dict(zip(cols, row[2:]))


def coefficient_rows(tables: dict, form: str) -> list[tuple[QuadIndex, int, str]]:
    """Every (index, value, provenance) pair readable from the tables for one form.

    Columns printed for an undefined term (shown as 0 where the condition
    fails) are skipped.
    """
    out = []
    for text, d, value in tables["coefficients"][form]:
        out.append((parse_printed_index(text), value, f"coefficients {text}"))
    for table in ("sigma_squared", "vanishing_sum", "mu", "lambda_shadow", "eigen_test",
                  "lambda_nonshadow"):
        for S, d, cols in rows(tables, table, form):
            for col, value in cols.items():
                if col in VALUE_COLUMNS or value is None:
                    continue
                T = column_index(table, col, S)
                if T is None:
                    continue
                out.append((T, value, f"{table} {tuple(S)} {col}"))
    return out


def build_expansion(tables: dict, form: str):
    """Ingest all table-derived coefficients of one form (conflicts raise)."""
    from .fourier import PARAMODULAR, ingest

    data = []
    for T, v, src in coefficient_rows(tables, form):
        # printed zeros outside A(16) are structural and carry no data
        if T.c % LEVEL and v == 0:
            continue
        data.append((T.a, T.b, T.c, v))
    return ingest(data, LEVEL, WEIGHTS[form], PARAMODULAR)


def write_fixtures(tables_path, out_dir) -> list[Path]:
    """Regenerate ``<form>.csv`` for every form from the printed tables."""
    from .fourier import write_fourier

    tables = load_tables(tables_path)
    out = []
    for form in WEIGHTS:
        path = Path(out_dir) / f"{form}.csv"
        write_fourier(build_expansion(tables, form), path)
        out.append(path)
    return out


# identity evaluated by each printed table
TABLE_IDENTITY = {"sigma_squared": "1", "vanishing_sum": "5", "mu": "2", "lambda_shadow": "3",
                  "eigen_test": "7", "lambda_nonshadow": "6"}
SUM_TABLES = {"sigma_squared", "vanishing_sum"}


def _as_key(T):
    if all(Fraction(x).denominator == 1 for x in T):
        return tuple(int(x) for x in T)
    return None


def printed_lookup(table: str, S: QuadIndex, cols: dict):
    """Coefficient function backed only by the values printed in one row."""
    values = {}
    for col, value in cols.items():
        if col in VALUE_COLUMNS or value is None:
            continue
        T = column_index(table, col, S)
        if T is not None:
            values[tuple(T)] = Fraction(value)

    def fn(T):
        key = _as_key(T)
        if key is None:
            return ZERO
        v = values.get(key)
        return UNKNOWN if v is None else known(v)
    return fn


@dataclass
class RowCheck:
    table: str
    form: str
    S: QuadIndex
    printed: object
    computed: object

    @property
    def passed(self) -> bool:
        if isinstance(self.printed, str) and self.printed in ("*", "contradiction"):
            return self.computed == self.printed
        return self.computed is not None and self.computed == Fraction(self.printed)


def check_row(table: str, form: str, S: QuadIndex, cols: dict, p: int = P,
              lookup=None) -> RowCheck:
    """Re-evaluate a printed row's identity.

    Coefficients come from the row's own printed columns, or from ``lookup``
    when given.  Sum tables yield the value of the vanishing side; the others
    yield the eigenvalue the row determines, ``"*"`` when both sides vanish,
    or ``"contradiction"`` when only the eigenvalue's coefficient vanishes.
    """
    from .eigen import evaluate

    key = TABLE_IDENTITY[table]
    printed = cols[_value_column(cols)]
    fn = lookup if lookup is not None else printed_lookup(table, S, cols)
    lhs, rhs = evaluate(key, fn, S, LEVEL, WEIGHTS[form], p)
    if not (lhs.computable and rhs.computable):
        return RowCheck(table, form, S, printed, None)
    if table in SUM_TABLES:
        return RowCheck(table, form, S, printed, (lhs - rhs).value)
    if lhs.value != 0:
        return RowCheck(table, form, S, printed, Fraction(rhs.value) / Fraction(lhs.value))
    return RowCheck(table, form, S, printed, "*" if rhs.value == 0 else "contradiction")


def _value_column(cols: dict) -> str:
    return next(c for c in cols if c in VALUE_COLUMNS)


def check_printed_rows(tables: dict, expansions: Optional[dict] = None) -> list[RowCheck]:
    """Check every printed row; ``expansions`` maps a form name to the
    expansion whose lookup replaces the printed columns."""
    out = []
    for table in TABLE_IDENTITY:
        for form in WEIGHTS:
            lookup = expansions[form].lookup if expansions else None
            for S, _, cols in rows(tables, table, form):
                out.append(check_row(table, form, S, cols, lookup=lookup))
    return out
