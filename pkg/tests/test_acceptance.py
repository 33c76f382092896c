"""The ten acceptance criteria, each at its stated tolerance and time limit.

Every check is recorded through the ``criterion`` fixture; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import math
import random
import time
from fractions import Fraction

import pytest
import sympy

from siegelfc import localrep
from siegelfc.eigen import (
    EigenLFactor, Genericity, Verdict, eigen_report, radial_check, radial_from_recurrence,
    spin_lfactor,
)
from siegelfc.fourier import UNKNOWN, forced_zero, known, orbits_below
from siegelfc.golden import check_printed_rows
from siegelfc.jacobi import BRIDGE_OPS, bridge_check
from siegelfc.localrep import LocalProfile, charpoly_vs1, classify
from siegelfc.quadform import (
    G1, G2, G3, act, coset_reps, gamma0, orbit_reps, parse_group, reduce, stable_part, y_set,
)
from siegelfc.siegel_ops import (
    OPS, RELATIONS, abstract, check_relation, direct, is_zero, out_bound, times, vp,
)


def within(criterion, number, start, limit):
    elapsed = time.perf_counter() - start
    return criterion(number, "time", elapsed < limit, f"{elapsed:.1f}s < {limit}s")


# ------------------------------------------------------- 1. reduction oracle

def random_sl2(rng, bound=50):
    """A uniform-ish element of SL(2,Z) with entries in [-bound, bound]."""
    while True:
        a, c = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if math.gcd(a, c) != 1:
            continue
        # extended Euclid: a x + c y = +-1, then g = [[a, -y'], [c, x']]
        r0, r1, x0, x1, y0, y1 = a, c, 1, 0, 0, 1
        while r1:
            t = r0 // r1
            r0, r1, x0, x1, y0, y1 = r1, r0 - t * r1, x1, x0 - t * x1, y1, y0 - t * y1
        d, b = x0 * r0, -y0 * r0
        if abs(b) <= bound and abs(d) <= bound:
            return (a, b, c, d)


def test_criterion_1_reduction_oracle(criterion):
    start = time.perf_counter()
    rng = random.Random(20260101)
    canonical = {d: set(y_set(d)) for d in range(1, 201)}
    forms = [(a, b, c) for a in range(1, 61) for c in range(1, 61) for b in range(-60, 61)
             if 0 < 4 * a * c - b * b <= 200]
    outside = unstable = 0
    for S in forms:
        R, _ = reduce(S)
        outside += R not in canonical[4 * S[0] * S[2] - S[1] ** 2]
        for _ in range(200):
            unstable += reduce(act(random_sl2(rng), S))[0] != R
    criterion(1, "lands in y_set", outside == 0, f"{len(forms)} forms")
    criterion(1, "orbit invariant", unstable == 0, f"{200 * len(forms)} images")
    within(criterion, 1, start, 60)
    assert outside == 0 and unstable == 0


# ---------------------------------------------------------- 2. group indices

def test_criterion_2_coset_counts(criterion):
    start = time.perf_counter()
    expected = [("Gamma0(16)", gamma0(16), 24), ("G2", G2, 48), ("G3", G3, 48), ("G1", G1, 24),
                ("Gamma(16)", parse_group("Gamma(16)"), 3072)]
    ok = True
    for name, G, n in expected:
        got = len(coset_reps(G))
        ok &= criterion(2, name, got == n, f"{got}")
    within(criterion, 2, start, 10)
    assert ok


# ----------------------------------------------------------- 3. orbit counts

# (label, group, level of the A-set, largest d, printed count)
ORBIT_TABLE = [
    ("X1", G1, 2, 30, 208),
    ("X2", G2, 16, 124, 536),
    ("X3", G3, 4, 30, 184),
    pytest.param("X4", G3, 4, 30, 88, marks=pytest.mark.xfail(
        strict=True, reason="defined by the same group and index set as X3, so it has 184")),
    ("X5", G2, 4, 124, 2320),
    ("X6", G3, 8, 30, 88),
    ("X7", G2, 8, 124, 1120),
]


@pytest.mark.parametrize("label, group, level, d_max, printed", ORBIT_TABLE)
def test_criterion_3_orbit_counts(criterion, label, group, level, d_max, printed):
    start = time.perf_counter()
    got = sum(len(orbit_reps(group, level, d)) for d in range(1, d_max + 1))
    criterion(3, label, got == printed, f"{got} vs {printed}")
    elapsed = time.perf_counter() - start
    assert elapsed < 300 / len(ORBIT_TABLE)
    assert got == printed


# ------------------------------------------------------ 4. eigen extraction

def test_criterion_4_eigenvalues(criterion, f7, f10):
    start = time.perf_counter()
    r7, r10 = eigen_report(f7, 2), eigen_report(f10, 2)
    ok7 = (r7.mu, r7.lam, r7.t01_eigenvector, r7.genericity) == (0, -3, False,
                                                                 Genericity.GENERIC)
    ok10 = (r10.mu, r10.lam, r10.genericity) == (-4, -2, Genericity.GENERIC)
    criterion(4, "F-7-16-2", ok7, f"mu={r7.mu} lambda={r7.lam} {r7.genericity.value}")
    criterion(4, "F-10-16-2", ok10, f"mu={r10.mu} lambda={r10.lam} {r10.genericity.value}")
    within(criterion, 4, start, 10)
    assert ok7 and ok10


# ------------------------------------------------------- 5. printed rows

def test_criterion_5_printed_rows(criterion, tables, f7, f10):
    start = time.perf_counter()
    printed = check_printed_rows(tables)
    from_fixture = check_printed_rows(tables, {"F-7-16-2": f7, "F-10-16-2": f10})
    bad = [r for r in printed + from_fixture if not r.passed]
    by_table = {}
    for r in printed:
        by_table[r.table] = by_table.get(r.table, 0) + 1
    for table, n in by_table.items():
        failed = sum(not r.passed for r in printed + from_fixture if r.table == table)
        criterion(5, table, failed == 0, f"{n} rows")
    within(criterion, 5, start, 10)
    assert not bad


# ---------------------------------------------------- 6. operator relations

def test_criterion_6_relations(criterion, corpus):
    start = time.perf_counter()
    ok = True
    for (p, N), batches in corpus.items():
        checked = failures = 0
        for F in batches:
            for rel in RELATIONS:
                if vp(N, p) < rel.min_vp:
                    continue
                out = check_relation(rel, F, p)
                checked += out.checked
                failures += len(out.failures)
                assert out.checked > 0, rel.name
        forms = sum(len(next(iter(F.table.values()))) for F in batches)
        ok &= criterion(6, f"(p,N)=({p},{N})", failures == 0 and forms >= 100,
                        f"{forms} forms, {checked} orbit checks")
    ok &= within(criterion, 6, start, 120)
    assert ok


# ------------------------------------------------- 7. abstract versus direct

def test_criterion_7_abstract_direct(criterion, corpus):
    start = time.perf_counter()
    ok = True
    for (p, N), batches in corpus.items():
        level_ok = True
        for op in OPS:
            checked = bad = 0
            for F in batches:
                d = direct(op, F.lookup, N, F.weight, p)
                a = abstract(op, F.lookup, N, F.weight, p)
                top = min(out_bound(op, F.bound, p), F.bound)
                for S in orbits_below(d.level, top, stable_part(d.level)):
                    if forced_zero(S, d.level, F.weight):
                        continue
                    x, y = d.fn(S), a.fn(S)
                    if x.computable and y.computable:
                        checked += 1
                        bad += not is_zero((x - y).value)
            level_ok &= checked > 0 and bad == 0
        ok &= criterion(7, f"(p,N)=({p},{N})", level_ok, f"{len(OPS)} operators")
    ok &= within(criterion, 7, start, 120)
    assert ok


# ------------------------------------------------- 8. Fourier-Jacobi bridge

def test_criterion_8_bridges(criterion, corpus):
    start = time.perf_counter()
    ok = True
    for (p, N), batches in corpus.items():
        assert N % (p * p) == 0
        totals = {op: [0, 0] for op in BRIDGE_OPS if op != "tau"}
        for F in batches:
            for m in range(1, 4 * p * p * stable_part(N) + 1):
                for op in totals:
                    out = bridge_check(F, op, p, m)
                    if out is not None:
                        totals[op][0] += out.checked
                        totals[op][1] += len(out.failures)
        good = all(c > 0 and f == 0 for c, f in totals.values())
        ok &= criterion(8, f"(p,N)=({p},{N})", good,
                        ", ".join(f"{op} {c}" for op, (c, _) in totals.items()))
    ok &= within(criterion, 8, start, 120)
    assert ok


# ------------------------------------------------------ 9. radial recurrence

RADIAL_S = (1, 1, 8)


def radial_fn(p, values):
    table = {tuple(times(RADIAL_S, p ** t)): v for t, v in enumerate(values)}
    return lambda T: known(table[tuple(T)]) if tuple(T) in table else UNKNOWN


def radial_cases():
    spin = spin_lfactor(2, 10, -2, -4)
    eig = EigenLFactor(2, 10, Fraction(-9))
    return [("D", spin, radial_from_recurrence(spin, [3, -5, 11], 9)),
            ("D3", eig, radial_from_recurrence(eig, [7, 2], 9))]


def free_seeds(lf):
    """How many leading a(p^t S) no checked recurrence step reads.

    Steps run for t > deg D and read back as far as the highest nonzero
    coefficient of D, so the first deg D - (that index) + 1 terms are free.
    """
    cs = lf.coefficients
    top = max(i for i, c in enumerate(cs) if c != 0)
    return len(cs) - 1 - top + 1


def _corruption_detected(lf, values, t):
    bad = list(values)
    bad[t] += 1
    return radial_check(radial_fn(lf.p, bad), RADIAL_S, lf).status is Verdict.FAIL


def test_criterion_9_radial(criterion):
    start = time.perf_counter()
    ok = True
    for name, lf, values in radial_cases():
        passes = radial_check(radial_fn(lf.p, values), RADIAL_S, lf).status is Verdict.PASS
        ok &= criterion(9, f"{name} passes t<=8", passes)
        seeds = free_seeds(lf)
        caught = [t for t in range(seeds, 9) if _corruption_detected(lf, values, t)]
        ok &= criterion(9, f"{name} corruption t={seeds}..8", len(caught) == 9 - seeds)
    ok &= within(criterion, 9, start, 5)
    assert ok


@pytest.mark.xfail(strict=True, reason="the numerator N(X,S) absorbs the leading seeds, so "
                                       "corrupting them leaves a valid recurrence")
@pytest.mark.parametrize("name, t", [("D", 0), ("D", 1), ("D3", 0)])
def test_criterion_9_seed_corruption(criterion, name, t):
    lf, values = next((lf, v) for n, lf, v in radial_cases() if n == name)
    detected = _corruption_detected(lf, values, t)
    criterion(9, f"{name} corruption t={t}", detected, "free numerator seed")
    assert detected


# --------------------------------------------------------- 10. classification

def test_criterion_10_classification(criterion, f7, f10):
    start = time.perf_counter()
    S, q = localrep.SYMBOLS, 3
    ok = True
    # spot rows: the unramified row of each type with s = sigma(uniformizer) = 1
    for key in ("IIIa.1", "IVb.1", "Va.1", "VIa.1"):
        row = localrep.rows()[key]
        subs = {S["q"]: q, S["s"]: 1}
        out = classify(LocalProfile(q, int(row.N_pi), row.lam.subs(subs), row.mu.subs(subs)))
        expected = (f"Cat{row.category}", "Yes" if row.generic else "No")
        ok &= criterion(10, key, (out.category, out.generic) == expected,
                        f"{out.category}/{out.generic}")
    for name, F in (("F-7-16-2", f7), ("F-10-16-2", f10)):
        rep = eigen_report(F, 2)
        out = classify(LocalProfile(2, vp(F.level, 2), rep.lam, rep.mu), rep.t01_eigenvector)
        agrees = out.generic == "Yes" and rep.genericity is Genericity.GENERIC
        ok &= criterion(10, name, agrees, f"{out.category}/{out.generic}")
    X, lam, mu, eps = sympy.symbols("X lam mu eps")
    qq = S["q"]
    printed = {
        ("IIIa", "T01s"): X - lam, ("IIIa", "T10s"): X - qq,
        ("IVb", "T01s"): X - lam, ("IVb", "T10s"): X - qq,
        ("IIa", "T01s"): X ** 2 + ((qq - 1) * eps - lam) * X + qq * (qq ** 2 + qq + mu),
        ("IIa", "T10s"): X ** 2 - mu * X + qq ** 3,
        ("IVd", "T01s"): X - lam * qq ** 2 / (qq ** 2 + 1), ("IVd", "T10s"): X - qq ** 4,
    }
    for (key, which), poly in printed.items():
        same = sympy.simplify(charpoly_vs1(key, which=which) - poly) == 0
        ok &= criterion(10, f"charpoly {key} {which}", same)
    ok &= within(criterion, 10, start, 5)
    assert ok
