"""Carrier-set matching, congruences, audits and parameter transport."""

import itertools

import pytest

from kisinweights.chars import InertialChar, SemisimpleShape, char_of_exponents
from kisinweights.field import Context
from kisinweights.matching import (
    DichotomyError,
    SubspaceDescriptor,
    achievable_pairs,
    appendix_alpha_audit,
    backward_from_mus,
    backward_from_theta,
    check_congruence,
    exceptional_audit,
    forward_sets,
    param_count,
    semisimple_decide,
    semisimple_equivalence_audit,
    shape_search,
    subspace_dim,
    subspace_transport_audit,
)
from kisinweights.weights import (
    Weight,
    bprime_table,
    btheta_table,
    ht_table,
    set_J0,
    st_sequences,
    validate_irregular,
)


def valid_weights(p, f):
    for k in itertools.product(range(1, p + 1), repeat=f):
        w = Weight(p, k)
        try:
            validate_irregular(w)
        except ValueError:
            continue
        yield w


def subsets(f):
    for mask in range(1 << f):
        yield frozenset(i for i in range(f) if mask >> i & 1)


def test_check_congruence():
    assert check_congruence(3, (2, 0), (1, 3), 8)
    assert not check_congruence(3, (2, 0), (1, 2), 8)


def test_forward_example():
    ctx = Context(3, 2, 1)
    w = Weight(3, (3, 1))
    fs = forward_sets(ctx, w, {0})
    assert fs.Jprime == {0, 1}
    assert fs.Jtheta == {0}
    assert fs.Jmu == {0: frozenset({0})}
    # the base congruence: s = (2,0) against s' = (1,3), 6 = 6 mod 8
    s, _ = st_sequences(ht_table(w), {0})
    sp, _ = st_sequences(bprime_table(w), fs.Jprime)
    assert check_congruence(3, s, sp, 8)


def test_forward_backward_roundtrip():
    for p, fmax in ((3, 4), (5, 3)):
        for f in range(1, fmax + 1):
            ctx = Context(p, f, 1)
            for w in valid_weights(p, f):
                J0 = set_J0(w)
                for J in subsets(f):
                    fs = forward_sets(ctx, w, J)
                    J_th = backward_from_theta(ctx, w, fs.Jprime, fs.Jtheta)
                    J_mu = backward_from_mus(ctx, w, fs.Jprime, fs.Jmu)
                    # recovery is exact away from the k = 1 indices
                    assert J_th == J - J0
                    assert J_mu == J - J0


def test_backward_dichotomy_violation():
    ctx = Context(3, 2, 1)
    w = Weight(3, (3, 1))
    with pytest.raises(DichotomyError):
        backward_from_theta(ctx, w, frozenset({0, 1}), frozenset({1}))


def test_shape_search_and_decide():
    ctx = Context(3, 2, 1)
    w = Weight(3, (3, 1))
    table = ht_table(w)
    s, t = st_sequences(table, {0})
    chi1, chi2 = char_of_exponents(ctx, s), char_of_exponents(ctx, t)
    hits = shape_search(ctx, chi1, chi2, table)
    assert any(h.J == frozenset({0}) for h in hits)
    assert semisimple_decide(ctx, SemisimpleShape(chi1, chi2), table)
    assert semisimple_decide(ctx, SemisimpleShape(chi2, chi1), table)


def test_achievable_pairs_card():
    ctx = Context(3, 2, 1)
    pairs = achievable_pairs(ctx, ht_table(Weight(3, (3, 1))))
    assert all(isinstance(pair, frozenset) for pair in pairs)
    assert frozenset({6, 0}) in pairs  # J = {0}: s=(2,0), t=(0,0)


def test_semisimple_equivalence_audits():
    cases = [(3, 2, (3, 1)), (5, 2, (4, 1)), (3, 3, (3, 1, 3))]
    for p, f, k in cases:
        ctx = Context(p, f, 1)
        report = semisimple_equivalence_audit(ctx, Weight(p, k))
        assert report.ok, (p, f, k, report.counterexamples[:3])
        assert report.total == (p**f - 1) ** 2


def test_alpha_table_audit_small():
    for p, f in ((3, 2), (3, 3), (5, 2)):
        ctx = Context(p, f, 1)
        for w in valid_weights(p, f):
            for J in subsets(f):
                appendix_alpha_audit(ctx, w, J)


def test_exceptional_audit():
    ctx = Context(3, 2, 1)
    seen_unconstrained = 0
    for w in valid_weights(3, 2):
        report = exceptional_audit(ctx, w)
        assert report.ok
        seen_unconstrained += len(report.unconstrained_hits)
    # dropping the carrier constraints does produce exceptional hits
    assert seen_unconstrained > 0


def test_subspace_descriptor():
    desc = SubspaceDescriptor(frozenset({0, 1}), frozenset({1}), same_character=False)
    assert subspace_dim(desc) == 1
    desc2 = SubspaceDescriptor(frozenset({0, 1}), frozenset({1}), same_character=True)
    assert subspace_dim(desc2) == 2
    ctx = Context(3, 2, 1)
    assert param_count(desc2, ctx.coefficient_field()) == 9


def test_transport_audit_full():
    ctx = Context(3, 2, 1)
    F = ctx.coefficient_field()
    for w in valid_weights(3, 2):
        for J in subsets(2):
            for a in F.units():
                for b in F.units():
                    report = subspace_transport_audit(ctx, w, J, a, b)
                    assert report.family_size == F.order**report.dim
                    assert report.dim == len(J - set_J0(w))
