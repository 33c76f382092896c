import random
from fractions import Fraction

import pytest

from siegelfc import jacobi
from siegelfc.fourier import ZERO, Status, known, random_expansion
from siegelfc.jacobi import (
    JacobiExpansion, build, deserialize_jacobi, fj_decompose, fj_recompose, l_csq, lprime_p,
    serialize_jacobi, u_p, v_p,
)
from siegelfc.quadform import DomainError
from siegelfc.scalars import FieldElement
from siegelfc.siegel_ops import direct, out_bound


def from_dict(k, m, entries, n_top, cusp=True):
    return build(k, m, lambda n, r: known(entries[(n, r)]) if (n, r) in entries else ZERO,
                 n_top, cusp)


def symmetric_random(k, m, n_top, seed):
    """Random coefficients with c(n, -r) = (-1)^k c(n, r)."""
    rng = random.Random(seed)
    entries = {}
    for n in range(n_top + 1):
        for r in jacobi._row(n, m):
            if r * r == 4 * n * m:
                continue
            if r > 0 or (r == 0 and k % 2 == 0):
                v = rng.randint(-20, 20)
                entries[(n, r)] = v
                entries[(n, -r)] = (-1) ** k * v
    return from_dict(k, m, entries, n_top)


def cyclotomic(p):
    return [1] * p  # 1 + x + ... + x^(p-1)


def v_p_oracle(f, p, n_top):
    """Expand p^(k-1) sum_{ad=p, b mod d} d^-k f((a tau + b)/d, a z) term by term."""
    k = f.weight
    zeta = FieldElement([0, 1], cyclotomic(p))
    powers = [FieldElement([1], cyclotomic(p))]
    for _ in range(p - 1):
        powers.append(powers[-1] * zeta)
    out = {}
    for (n, r), c in f.table.items():
        # a = p, d = 1
        key = (Fraction(p * n), p * r)
        out[key] = out.get(key, 0) + Fraction(p) ** (k - 1) * c
        # a = 1, d = p: q^(n/p) e(n b / p) summed over b
        twist = sum((powers[(n * b) % p] for b in range(p)), FieldElement([0], cyclotomic(p)))
        key = (Fraction(n, p), r)
        out[key] = out.get(key, 0) + twist * Fraction(c, p)
    result = {}
    for (n, r), v in out.items():
        v = v.rational() if isinstance(v, FieldElement) else v
        assert v is not None, "q-expansion coefficient left the rationals"
        if n.denominator != 1:
            assert v == 0
            continue
        if n <= n_top and v != 0:
            result[(int(n), r)] = v
    return result


def test_u_p_example():
    f = from_dict(10, 1, {(1, 0): 5}, 2)
    g = u_p(f, 2)
    assert g.index == 4
    assert g.lookup(1, 0) == known(5)


def test_v_p_single_entry_oracle():
    f = from_dict(10, 1, {(1, 1): 1}, 8)
    g = v_p(f, 2)
    assert g.index == 2
    expected = v_p_oracle(f, 2, 4)
    got = {key: v for key, v in g.table.items() if v and key[0] <= 4}
    assert got == expected
    assert g.lookup(2, 2) == known(2 ** 9)


@pytest.mark.parametrize("p, k, m", [(2, 7, 1), (3, 10, 2), (2, 12, 3)])
def test_v_p_random_oracle(p, k, m):
    f = symmetric_random(k, m, 12, seed=p * k)
    g = v_p(f, p)
    top = min(4, g.bound)
    expected = v_p_oracle(f, p, top)
    got = {key: v for key, v in g.table.items() if v and key[0] <= top}
    assert got == expected


def test_zero_expansions_stay_zero():
    z = from_dict(10, 4, {}, 5)
    for g in (v_p(z, 2), lprime_p(z, 2), u_p(z, 2), l_csq(z, 2)):
        assert all(v == 0 for v in g.table.values())


def test_l_csq_constant_term():
    w = 7
    f = from_dict(10, 4, {(0, 0): w}, 3, cusp=False)
    g = l_csq(f, 2)
    assert g.index == 1
    assert g.lookup(0, 0) == known(Fraction(2) ** (1 - 10) * w)


def test_index_errors():
    f = from_dict(10, 3, {}, 2)
    with pytest.raises(DomainError):
        l_csq(f, 2)
    with pytest.raises(DomainError):
        lprime_p(f, 2)


def test_fj_decompose_example(f7):
    f = fj_decompose(f7, 352, n_max=2)
    assert f.lookup(2, -53) == known(1)
    assert f.lookup(2, 53) == known(-1)


def test_fj_decompose_support_rule(f7):
    f = fj_decompose(f7, 12)
    assert f.table == {}


def test_recompose_inverts_decompose():
    rng = random.Random(1)
    F = random_expansion(8, 10, 400, lambda: rng.randint(-9, 9))
    parts = [(m, fj_decompose(F, m, n_max=60)) for m in range(4, 101, 4)]
    G = fj_recompose(parts, 8, 10, 400)
    shared = set(F.table) & set(G.table)
    assert len(shared) > 100
    assert all(F.table[key] == G.table[key] for key in shared)


@pytest.mark.parametrize("k", [7, 10])
def test_reflection_and_elliptic_shift(k):
    rng = random.Random(k)
    F = random_expansion(8, k, 600, lambda: rng.randint(-9, 9))
    f = fj_decompose(F, 8, n_max=18)
    for (n, r), v in f.table.items():
        mirror = f.lookup(n, -r)
        if mirror.computable:
            assert mirror.value == (-1) ** k * v
        for lam in range(-2, 3):
            shifted = f.lookup(n + r * lam + f.index * lam * lam, r + 2 * f.index * lam)
            if shifted.computable:
                assert shifted.value == v


@pytest.mark.parametrize("k", [7, 10])
def test_operators_preserve_reflection(k):
    rng = random.Random(k)
    F = random_expansion(4, k, 1200, lambda: rng.randint(-9, 9))
    f = fj_decompose(F, 8, n_max=37)
    for g in (u_p(f, 2), v_p(f, 2), l_csq(f, 2), lprime_p(f, 2)):
        checked = 0
        for (n, r), v in g.table.items():
            mirror = g.lookup(n, -r)
            if mirror.computable:
                checked += 1
                assert mirror.value == (-1) ** k * v
        assert checked > 0


def test_tau_bridge():
    rng = random.Random(2)
    N, k, p = 8, 10, 2
    F = random_expansion(N, k, 400, lambda: rng.randint(-9, 9))
    tau = (direct("tau", F.lookup, N, k, p).fn, N * p, k, out_bound("tau", 400, p))
    for m in (4, 8, 12, 16, 24):
        A = fj_decompose(tau, m, n_max=10)
        B = fj_decompose(F, m, n_max=10)
        for key, v in A.table.items():
            expected = B.table.get(key) if m % 8 == 0 else 0
            if expected is not None:
                assert v == expected


def test_jacobi_file_round_trip(tmp_path):
    f = symmetric_random(10, 2, 4, seed=3)
    text = serialize_jacobi(f)
    assert text.startswith("# weight=10\n# index=2\n")
    g = deserialize_jacobi(text)
    assert (g.weight, g.index, g.bound, g.table) == (f.weight, f.index, f.bound, f.table)
    path = tmp_path / "f.jac"
    path.write_text(text)
    assert jacobi.read_jacobi(path).table == f.table
    with pytest.raises(ValueError):
        deserialize_jacobi("# weight=10\n1,2\n")


@pytest.mark.parametrize("op", jacobi.BRIDGE_OPS)
def test_bridges_on_random_form(op):
    rng = random.Random(5)
    F = random_expansion(8, 7, 600, lambda: rng.randint(-20, 20))
    checked = 0
    for m in range(1, 33):
        out = jacobi.bridge_check(F, op, 2, m)
        if out is not None:
            checked += out.checked
            assert out.failures == [], (op, m)
    assert checked > 0


def test_bridge_detects_wrong_normalization():
    rng = random.Random(6)
    F = random_expansion(8, 7, 600, lambda: rng.randint(-20, 20))
    left, right = jacobi.bridge_sides(F, "sigma", 2, 4)
    wrong = jacobi.scaled(right, 2)
    assert any(wrong.table.get(key) not in (None, v) for key, v in left.table.items() if v)


def test_bridge_not_defined():
    F = random_expansion(8, 7, 200, lambda: 1)
    assert jacobi.bridge_check(F, "eta", 2, 6) is None
    assert jacobi.bridge_check(F, "theta", 2, 3) is None
    with pytest.raises(DomainError):
        jacobi.bridge_sides(F, "mu", 2, 4)
