import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import dual, group
from pnbent.errors import DimensionError, InvalidParameterError, ParseError, WrongKindError
from pnbent.fourier import mdft, rep_ft
from pnbent.nonlinearity import (FunctionTable, ac_ab_nab, ac_nab_ab, ac_nab_nab, balance_profile, bent_ab_ab,
                                 bent_ab_nab, bent_auto, bent_nab_ab, bent_nab_nab, derivative,
                                 format_function_table, is_balanced, matrix_coefficient, method_for,
                                 norm_condition, parse_function_table, pn_oracle)

Z3, Z2, Z6, V4 = "cyclic:3", "cyclic:2", "cyclic:6", "product:cyclic:2,cyclic:2"
S3, Q8 = "symmetric:3", "quaternion"


def table(gs, hs, values):
    return FunctionTable(group(gs), group(hs), np.array(values))


def brute_pn(f):
    """Perfect nonlinearity straight from the definition, element by element."""
    G, H = f.domain, f.codomain
    if G.order % H.order:
        return G.order == 1
    for a in range(1, G.order):
        counts = [0] * H.order
        for x in range(G.order):
            counts[H.mul(f(G.mul(a, x)), H.inv(f(x)))] += 1
        if len(set(counts)) != 1:
            return False
    return True


def all_tables(gs, hs):
    G, H = group(gs), group(hs)
    for vals in itertools.product(range(H.order), repeat=G.order):
        yield FunctionTable(G, H, np.array(vals))


def test_derivative_of_square_on_z3():
    f = table(Z3, Z3, [0, 1, 1])
    assert list(derivative(f, 1).values) == [1, 0, 2]


def test_balance_profile_of_square():
    assert list(balance_profile(table(Z3, Z3, [0, 1, 1])).counts) == [1, 2, 0]


def test_square_on_z3_is_pn():
    v = pn_oracle(table(Z3, Z3, [0, 1, 1]))
    assert v.is_pn and v.method == "oracle" and v.witness is None


def test_identity_on_z3_is_not_pn():
    v = pn_oracle(table(Z3, Z3, [0, 1, 2]))
    assert not v.is_pn and v.failing_alpha == 1 and v.witness is None


def test_indivisible_orders_are_never_pn():
    assert not pn_oracle(table(Z3, Z2, [0, 1, 1])).is_pn


def test_trivial_domain_is_pn():
    assert pn_oracle(table("cyclic:1", Z2, [1])).is_pn


def test_table_validation():
    with pytest.raises(DimensionError):
        table(Z3, Z3, [0, 1])
    with pytest.raises(InvalidParameterError):
        table(Z3, Z2, [0, 1, 2])
    with pytest.raises(InvalidParameterError):
        derivative(table(Z3, Z3, [0, 1, 1]), 3)


@pytest.mark.parametrize("gs,hs", [(Z3, Z3), (V4, Z2), (S3, Z2), (Z3, S3)])
def test_oracle_matches_definition(gs, hs):
    for f in all_tables(gs, hs):
        assert pn_oracle(f).is_pn == brute_pn(f)


def test_known_pn_counts():
    # quadratics a x^2 + b x + c with a != 0, and the odd-weight Boolean functions on two bits
    assert sum(pn_oracle(f).is_pn for f in all_tables(Z3, Z3)) == 18
    assert sum(pn_oracle(f).is_pn for f in all_tables(V4, Z2)) == 8
    assert sum(pn_oracle(f).is_pn for f in all_tables(Z2, Z2)) == 0


# balancedness through characters and representations

def _character_sums_vanish(f, hs):
    return all(abs(r.matrices[f.values, 0, 0].sum()) < 1e-9 for r in dual(hs).nontrivial)


@pytest.mark.parametrize("gs,hs", [(Z3, Z3), (V4, Z2), (Z6, Z3)])
def test_balanced_iff_character_sums_vanish(gs, hs):
    seen = set()
    for f in itertools.islice(all_tables(gs, hs), 400):
        seen.add(is_balanced(f))
        assert is_balanced(f) == _character_sums_vanish(f, hs)
    assert seen == {True, False}


@pytest.mark.parametrize("gs,hs", [(S3, Z2), (S3, Z3)])
def test_balanced_iff_principal_transform_vanishes(gs, hs):
    G, dG, dH = group(gs), dual(gs), dual(hs)
    seen = set()
    for f in all_tables(gs, hs):
        vanish = all(abs(rep_ft(G, b.matrices[f.values, 0, 0], dG.trivial)[0, 0]) < 1e-9 for b in dH.nontrivial)
        seen.add(vanish)
        assert is_balanced(f) == vanish
    assert seen == {True, False}


@pytest.mark.parametrize("gs,hs", [(Z6, S3), (S3, S3)])
def test_balanced_iff_operator_sums_vanish(gs, hs, rng):
    G, H, dH = group(gs), group(hs), dual(hs)
    balanced = [FunctionTable(G, H, rng.permutation(G.order) % H.order) for _ in range(30)]
    unbalanced = [FunctionTable(G, H, rng.integers(0, H.order - 1, G.order)) for _ in range(30)]
    for f in balanced + unbalanced:
        vanish = all(np.allclose(r.matrices[f.values].sum(axis=0), 0) for r in dH.nontrivial)
        assert is_balanced(f) == vanish
    assert all(is_balanced(f) for f in balanced) and not any(is_balanced(f) for f in unbalanced)


# autocorrelations

def test_autocorrelation_values_at_identity(rng):
    f = FunctionTable(group(S3), group(Z2), rng.integers(0, 2, 6))
    assert ac_nab_ab(f, 1, dual(Z2))[0] == pytest.approx(6)
    g = FunctionTable(group(Z6), group(S3), rng.integers(0, 6, 6))
    for r in dual(S3).entries:
        assert np.allclose(ac_ab_nab(g, r)[0], 6 * np.eye(r.dim))
    h = FunctionTable(group(S3), group(S3), rng.integers(0, 6, 6))
    rp = dual(S3).entries[2]
    for i, j in itertools.product(range(2), repeat=2):
        assert ac_nab_nab(h, rp, i, j)[0] == pytest.approx(6.0 if i == j else 0.0)


def balanced_step_function(rng, G, H):
    """f on a cyclic G whose derivative in direction 1 hits every element of H equally often."""
    steps = np.repeat(np.arange(H.order), G.order // H.order)
    while True:
        rng.shuffle(steps)
        vals = [0]
        for h in steps[:-1]:
            vals.append(H.mul(int(h), vals[-1]))
        if H.mul(int(steps[-1]), vals[-1]) == 0:
            return FunctionTable(G, H, np.array(vals))


def test_autocorrelation_vanishes_iff_derivative_balanced(rng):
    # on Z6 -> S3 no derivative can be balanced (sign parity), so use Z12 -> S3
    G, H = group("cyclic:12"), group(S3)
    found = 0
    samples = [balanced_step_function(rng, G, H) for _ in range(20)]
    samples += [FunctionTable(G, H, rng.integers(0, 6, 12)) for _ in range(20)]
    for f in samples:
        for a in range(1, 12):
            ac = [ac_ab_nab(f, r)[a] for r in dual(S3).nontrivial]
            balanced = is_balanced(derivative(f, a))
            assert balanced == all(np.allclose(m, 0) for m in ac)
            found += balanced
    assert found >= 20


def test_autocorrelation_factorizations(rng):
    f = FunctionTable(group(S3), group(S3), rng.integers(0, 6, 6))
    G, dG, dH = group(S3), dual(S3), dual(S3)
    for rho in dG.entries:
        for rp in dH.nontrivial:
            F = [[rep_ft(G, matrix_coefficient(rp, i, k)[f.values], rho) for k in range(rp.dim)]
                 for i in range(rp.dim)]
            for i, j in itertools.product(range(rp.dim), repeat=2):
                lhs = rep_ft(G, ac_nab_nab(f, rp, i, j), rho)
                rhs = sum(F[i][k] @ F[j][k].conj().T for k in range(rp.dim))
                assert np.allclose(lhs, rhs)
    f2 = FunctionTable(group(Z6), group(S3), rng.integers(0, 6, 6))
    for rp in dH.entries:
        M = mdft(group(Z6), dual(Z6), rp.matrices[f2.values])
        lhs = mdft(group(Z6), dual(Z6), ac_ab_nab(f2, rp))
        assert np.allclose(lhs, M @ np.conj(np.swapaxes(M, 1, 2)))


def test_matrix_coefficient_identities():
    H, rp = group(S3), dual(S3).entries[2]
    for y, z in itertools.product(range(6), repeat=2):
        for i, j in itertools.product(range(2), repeat=2):
            lhs = matrix_coefficient(rp, i, j)[H.mul(y, z)]
            rhs = sum(matrix_coefficient(rp, i, k)[y] * matrix_coefficient(rp, k, j)[z] for k in range(2))
            assert lhs == pytest.approx(rhs)
            assert matrix_coefficient(rp, i, j)[H.inv(y)] == pytest.approx(np.conj(matrix_coefficient(rp, j, i)[y]))
    with pytest.raises(InvalidParameterError):
        matrix_coefficient(rp, 2, 0)


# criteria

@pytest.mark.parametrize("gs,hs,method", [
    (Z3, Z3, "bent_ab_ab"), (S3, Z2, "bent_nab_ab"), (Z3, S3, "bent_ab_nab"), (S3, S3, "bent_nab_nab"),
])
def test_dispatch(gs, hs, method):
    assert method_for(group(gs), group(hs)) == method
    f = FunctionTable(group(gs), group(hs), np.zeros(group(gs).order, dtype=int))
    v = bent_auto(f)
    assert v.method == method and not v.is_pn
    assert v.witness is not None and v.witness.residual > v.max_residual * 0.999


def test_square_is_bent():
    v = bent_auto(table(Z3, Z3, [0, 1, 1]))
    assert v.is_pn and v.witness is None and v.max_residual < 1e-12


def test_wrong_kind_guards():
    f = table(S3, Z2, [0] * 6)
    with pytest.raises(WrongKindError):
        bent_ab_ab(f, dual(S3), dual(Z2))
    with pytest.raises(WrongKindError):
        bent_ab_nab(f, dual(S3), dual(Z2))
    g = table(Z3, S3, [0, 1, 2])
    with pytest.raises(WrongKindError):
        bent_nab_ab(g, dual(Z3), dual(S3))


@pytest.mark.parametrize("gs,hs", [(Z3, Z3), (V4, Z2)])
def test_four_criteria_agree_on_abelian_pairs(gs, hs):
    dG, dH = dual(gs), dual(hs)
    for f in all_tables(gs, hs):
        verdicts = {c(f, dG, dH).is_pn for c in (bent_ab_ab, bent_nab_ab, bent_ab_nab, bent_nab_nab)}
        assert verdicts == {pn_oracle(f).is_pn}


def test_nab_nab_agrees_with_nab_ab_on_random_s3_to_z3(rng):
    dG, dH = dual(S3), dual(Z3)
    for _ in range(500):
        f = FunctionTable(group(S3), group(Z3), rng.integers(0, 3, 6))
        assert bent_nab_nab(f, dG, dH).is_pn == bent_nab_ab(f, dG, dH).is_pn == pn_oracle(f).is_pn


def test_norm_condition_holds_for_pn():
    for f in all_tables(Z3, Z3):
        if pn_oracle(f).is_pn:
            assert norm_condition(f).holds


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(S3, Z3), (Q8, Z2), (Z3, S3), (S3, S3), (V4, Z2)]), st.data())
def test_verdict_independent_of_dual_order(pair, data):
    gs, hs = pair
    G, H = group(gs), group(hs)
    f = FunctionTable(G, H, np.array(data.draw(st.lists(st.integers(0, H.order - 1),
                                                         min_size=G.order, max_size=G.order))))
    dG, dH = dual(gs), dual(hs)
    # keep the trivial entry first, shuffle the rest
    pg = [0] + data.draw(st.permutations(range(1, len(dG.entries))))
    ph = [0] + data.draw(st.permutations(range(1, len(dH.entries))))
    base = bent_auto(f, dG, dH)
    shuffled = bent_auto(f, dG.reordered(pg), dH.reordered(ph))
    assert base.is_pn == shuffled.is_pn == pn_oracle(f).is_pn
    assert shuffled.max_residual == pytest.approx(base.max_residual, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(S3, Z2), (Q8, Z2), (Z3, S3), (S3, Z3), (Z3, Z3)]), st.data())
def test_oracle_and_criterion_agree(pair, data):
    gs, hs = pair
    G, H = group(gs), group(hs)
    f = FunctionTable(G, H, np.array(data.draw(st.lists(st.integers(0, H.order - 1),
                                                         min_size=G.order, max_size=G.order))))
    assert bent_auto(f).is_pn == pn_oracle(f).is_pn == brute_pn(f)


def test_function_table_text_roundtrip():
    f = table(S3, Z3, [0, 1, 2, 2, 1, 0])
    g = parse_function_table(format_function_table(f), group(S3), group(Z3))
    assert list(g.values) == list(f.values)


@pytest.mark.parametrize("text", ["fn 6 3\n0 1 2\n", "fn 3 3\n0 1 2\n", "nope\n", "fn 6 3\n0 1 2 x 1 0\n"])
def test_function_table_parse_errors(text):
    with pytest.raises((ParseError, DimensionError)):
        parse_function_table(text, group(S3), group(Z3))
