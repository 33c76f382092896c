import random
from fractions import Fraction

import pytest

from siegelfc import eigen
from siegelfc.eigen import (
    DataIntegrityError, EigenLFactor, Genericity, Verdict, check, decide_t01_eigenvector,
    eigen_report, extract_epsilon, extract_lambda_nonshadow, extract_lambda_shadow, extract_mu,
    radial_check, radial_from_recurrence, spin_lfactor, verify_identities, witnesses,
)
from siegelfc.fourier import UNKNOWN, ZERO, FourierExpansion, known, orbits_below
from siegelfc.quadform import DomainError, in_B, orbit_key, stable_part
from siegelfc.siegel_ops import apply, neighbor, times, vp


class DiscriminantForm(FourierExpansion):
    """Coefficients depending only on the discriminant: g(D) = ratio^floor(v_p(D)/2)."""

    def __init__(self, level, weight, p, ratio, bound=2000):
        super().__init__(level, weight, bound=bound)
        self.p, self.ratio = p, ratio

    def lookup(self, S):
        T = tuple(S)
        if any(Fraction(x).denominator != 1 for x in T):
            return ZERO
        T = tuple(int(x) for x in T)
        if not self.in_support(T):
            return ZERO
        return known(Fraction(self.ratio) ** (vp(T[0] * 4 * T[2] - T[1] ** 2, self.p) // 2))


def eigenvector_fixture(N, k, p, lam, bound, seed):
    """Random data completed so that lam a(S) = (1 + 1/p) c(S) on B(N)."""
    rng = random.Random(seed)
    q = Fraction(p)
    F = FourierExpansion(N, k, bound=bound)
    for T in sorted(orbits_below(N, bound, stable_part(N)), key=lambda T: (T.disc4, T)):
        S = tuple(Fraction(x, p) for x in T)
        if all(x.denominator == 1 for x in S) and in_B(tuple(int(x) for x in S), N):
            al, b, _ = S
            rest = sum(F.lookup(times(neighbor(S, x, p), Fraction(1, p))).value
                       for x in range(p) if (al + b * x) % p == 0)
            F.table[T] = (lam * F.lookup(S).value / (1 + 1 / q) - q * rest) / q ** (3 - k)
        else:
            F.table[T] = rng.randint(-20, 20)
    return F


# ------------------------------------------------------------------ extraction

def test_mu_on_fixtures(f7, f10):
    s10 = extract_mu(f10, 2)
    assert s10.value == -4 and len(s10.evaluated) > 1
    assert all(v == -4 for _, v in s10.evaluated)
    s7 = extract_mu(f7, 2)
    assert s7.value == 0 and all(v == 0 for _, v in s7.evaluated)


def test_mu_skips_zero_coefficient_witness(f10):
    assert f10.lookup((1, 4, 16)).value == 0
    used = [S for S, _ in extract_mu(f10, 2).evaluated]
    assert (1, 4, 16) not in used


def test_lambda_shadow(f10):
    sol = extract_lambda_shadow(f10, 2)
    assert sol.value == -2
    assert all(v == -2 for _, v in sol.evaluated)


def test_f7_is_not_t01_eigenvector(f7):
    test = decide_t01_eigenvector(f7, 2)
    assert test.eigenvector is False
    assert extract_lambda_nonshadow(f7, 2).value == -3


def test_noneigen_ratios_disagree(f7):
    # the printed ratios 609/178 and -759/82 come from two witnesses of the eigen test
    N, k, p = 16, 7, 2
    ratios = set()
    for S in [(1, -5, 8), (1, -3, 8), (1, -1, 8), (3, -7, 8), (1, -9, 24), (3, -5, 8)]:
        lhs, rhs = eigen.evaluate("7", f7.lookup, S, N, k, p)
        if lhs.computable and rhs.computable and lhs.value:
            ratios.add(rhs.value / lhs.value)
    assert len(ratios) != 1


def test_inconsistent_witnesses_raise(f10):
    G = FourierExpansion(f10.level, f10.weight, f10.space, dict(f10.table), f10.bound)
    S = orbit_key((1, -11, 32), 16)
    G.table[S.key] = G.table[S.key] * 3
    with pytest.raises(DataIntegrityError):
        extract_mu(G, 2)


def test_eigenvector_branch_recovers_lambda():
    lam = Fraction(-6)
    F = eigenvector_fixture(8, 10, 2, lam, 600, seed=1)
    test = decide_t01_eigenvector(F, 2)
    assert test.eigenvector is True
    assert test.ratio == lam


@pytest.mark.parametrize("sign", [1, -1])
def test_epsilon_sign_fixture(sign):
    p, k = 2, 10
    F = DiscriminantForm(4, k, p, sign * p ** (k - 3))
    sol = extract_epsilon(F, p)
    assert sol.value == sign
    assert len(sol.evaluated) > 1


def test_epsilon_not_a_sign_raises():
    F = DiscriminantForm(4, 10, 2, 2 * 2 ** 7)
    with pytest.raises(DataIntegrityError):
        extract_epsilon(F, 2)


def test_epsilon_needs_exact_square(f10):
    with pytest.raises(DomainError):
        extract_epsilon(f10, 2)


def test_empty_expansion_is_undetermined():
    rep = eigen_report(FourierExpansion(16, 10), 2)
    assert rep.mu is None and rep.genericity is Genericity.UNDETERMINED


def test_needs_p_squared():
    with pytest.raises(DomainError):
        extract_mu(FourierExpansion(6, 10), 2)


def test_report_keys(f7, f10):
    r7 = eigen_report(f7, 2)
    assert r7.as_dict() == {"mu": "0", "lambda": "-3", "t01_eigenvector": False,
                            "genericity": "Generic"}
    r10 = eigen_report(f10, 2)
    assert r10.as_dict() == {"mu": "-4", "lambda": "-2", "t01_eigenvector": None,
                             "genericity": "Generic"}
    assert {"p", "epsilon", "notes"} <= set(r10.as_dict(detail=True))


# ---------------------------------------------------------------- verification

@pytest.mark.parametrize("form, key, S", [
    ("f7", "1", (257, 482, 226)),
    ("f7", "5", (242, 453, 212)),
    ("f10", "1", (242, 453, 212)),
])
def test_identity_examples(request, form, key, S):
    F = request.getfixturevalue(form)
    v = check(key, F.lookup, S, 16, F.weight, 2)
    assert v.status is Verdict.PASS


def test_identity_example_values(f7):
    terms = [f7.lookup(neighbor((257, 482, 226), z, 4)).value for z in range(4)]
    assert sorted(terms) == [-2304, -2304, 2304, 2304]


@pytest.mark.parametrize("form, expected", [
    ("f7", {"1", "2", "5", "5'", "6", "mu-relation", "sigma-squared"}),
    ("f10", {"1", "2", "3", "4", "mu-relation", "sigma-squared"}),
])
def test_verify_all_pass(request, form, expected):
    F = request.getfixturevalue(form)
    verdicts = verify_identities(F, 2)
    assert not [v for v in verdicts if v.status is Verdict.FAIL]
    passed = {v.identity for v in verdicts if v.status is Verdict.PASS}
    assert passed == expected


def test_verify_detects_wrong_eigenvalue(f10):
    rep = eigen_report(f10, 2)
    rep.lam = -1
    verdicts = verify_identities(f10, 2, rep)
    assert any(v.status is Verdict.FAIL and v.identity == "3" for v in verdicts)


def test_witness_groups_fix_identities(f10):
    # every witness rep of identity 3 gives the same verdict as its group images
    from siegelfc.quadform import act
    G = eigen.identity_group("3", 16, 2)
    compared = 0
    for S in witnesses("3", 16, 2, 449):
        base = check("3", f10.lookup, S, 16, 10, 2, lam=-2)
        for g in [(1, 0, 8, 1), (1, 4, 8, 33), (3, 4, 8, 11), (-1, 0, 0, -1)]:
            assert G.contains(g)
            image = check("3", f10.lookup, act(g, S), 16, 10, 2, lam=-2)
            if base.status is not Verdict.SKIPPED and image.status is not Verdict.SKIPPED:
                compared += 1
                assert base.status is image.status
    assert compared > 0


# ---------------------------------------------------------- L-factor, radial

def radial_fn(S, p, values):
    table = {tuple(times(S, p ** t)): v for t, v in enumerate(values)}
    return lambda T: known(table[tuple(T)]) if tuple(T) in table else UNKNOWN


def test_lfactor_constant_term():
    lf = spin_lfactor(2, 10, -2, -4)
    assert lf(0) == 1
    assert lf.coefficients == (1, 256, 0)
    assert EigenLFactor(3, 8, 4)(0) == 1


@pytest.mark.parametrize("p, k, lam, mu", [(2, 10, -2, -4), (3, 7, 5, 2), (2, 7, -3, 0)])
def test_radial_generate_then_verify(p, k, lam, mu):
    lf = spin_lfactor(p, k, lam, mu)
    S = (1, 1, 8)
    values = radial_from_recurrence(lf, [3, -5, 11], 9)
    assert radial_check(radial_fn(S, p, values), S, lf).status is Verdict.PASS
    checked = [t for t in range(2, 9) if t >= 3 or lf.coefficients[3 - t] != 0]
    for t in checked:
        bad = list(values)
        bad[t] += 1
        assert radial_check(radial_fn(S, p, bad), S, lf).status is Verdict.FAIL, t


def test_radial_eigen_case():
    lf = EigenLFactor(2, 10, Fraction(-9))
    S = (1, 1, 8)
    values = radial_from_recurrence(lf, [7, 2], 9)
    assert radial_check(radial_fn(S, 2, values), S, lf).status is Verdict.PASS
    for t in range(1, 9):
        bad = list(values)
        bad[t] -= 2
        assert radial_check(radial_fn(S, 2, bad), S, lf).status is Verdict.FAIL


def test_radial_skipped_when_short():
    lf = spin_lfactor(2, 10, -2, -4)
    S = (1, 1, 8)
    assert radial_check(radial_fn(S, 2, [1, 2, 3]), S, lf).status is Verdict.SKIPPED


def test_radial_on_fixtures_never_fails(f7, f10):
    for F, lam, mu in ((f7, -3, 0), (f10, -2, -4)):
        lf = spin_lfactor(2, F.weight, lam, mu)
        for S in F.keys():
            assert radial_check(F.lookup, S, lf).status is not Verdict.FAIL
