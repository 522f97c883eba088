"""Invariant pairs: validation, regularity, and matrix extraction."""

import pytest
from hypothesis import given, strategies as st

from orbitcount.errors import SchemaError
from orbitcount.invariants import (InvariantPair, MatrixE, delta_invariant,
                                   invariants_of, matching_check,
                                   membership_check, moment_sequence,
                                   strong_regularity, v_invariant,
                                   variant_transport)
from orbitcount.local_field import (EElem, TruncSeries, field_desc,
                                    sigma_and_imaginary)
from orbitcount.verify import rand_invariants

inert3 = field_desc(3, "inert")
split3 = field_desc(3, "split")


def _j(desc):
    return sigma_and_imaginary(desc)[1].elem


def _pi_pair(desc, e):
    """n = 1 pair with a_1 = 0 and b_0 = pi^e."""
    b0 = EElem.from_real(desc, TruncSeries.pi_pow(desc.k, e))
    return InvariantPair([EElem.zero(desc)], [b0], desc)


def test_validate_rejects_wrong_parity():
    one = EElem.one(inert3)
    with pytest.raises(SchemaError, match=r"a\[1\].*parity"):
        InvariantPair([one], [one], inert3).validate()
    with pytest.raises(SchemaError, match=r"b\[0\].*parity"):
        InvariantPair([_j(inert3)], [_j(inert3)], inert3).validate()
    with pytest.raises(SchemaError, match=r"b\[1\].*parity"):
        InvariantPair([_j(split3), EElem.one(split3)],
                      [EElem.one(split3), EElem.one(split3)],
                      split3).validate()


def test_validate_rejects_nonintegral():
    desc = inert3
    bad = EElem.from_real(desc, TruncSeries.pi_pow(desc.k, -1))
    with pytest.raises(SchemaError, match=r"b\[0\].*integrality"):
        InvariantPair([EElem.zero(desc)], [bad], desc).validate()
    with pytest.raises(SchemaError, match=r"a\[1\].*integrality"):
        InvariantPair([bad * _j(desc)], [EElem.one(desc)], desc).validate()


def test_validate_accepts_and_returns_self():
    ab = _pi_pair(inert3, 2)
    assert ab.validate() is ab
    assert ab.n == 1


def test_strong_regularity_of_pi_chains():
    for desc in (inert3, split3):
        for e in range(4):
            rep = strong_regularity(_pi_pair(desc, e))
            assert rep.strongly_regular
            assert rep.val_delta == e
            assert rep.val_disc == 0
            want = 1 if (desc.is_split or e % 2 == 0) else -1
            assert rep.eta_delta == want


def test_delta_homogeneous_in_b():
    for desc in (inert3, split3):
        for n in (1, 2):
            ab = rand_invariants(n, desc, seed=5)
            rep = strong_regularity(ab)
            lift = EElem.from_real(desc, TruncSeries.pi_pow(desc.k, 1))
            scaled = InvariantPair(ab.a, [x * lift for x in ab.b], desc)
            # Delta is homogeneous of degree n in the moments
            assert strong_regularity(scaled).val_delta == rep.val_delta + n
            d0 = delta_invariant(ab)
            d1 = delta_invariant(scaled)
            assert d1.val() == d0.val() + n


def test_invariants_of_explicit_matrix():
    desc = inert3
    j = _j(desc)
    pi = EElem.from_real(desc, TruncSeries.pi_pow(desc.k, 1))
    z = EElem.zero(desc)
    A = MatrixE([[z, j], [j * pi, z]], desc)
    assert membership_check(A, "s_n")
    ab = invariants_of(A)
    ab.validate()
    assert ab.a[0].is_zero()
    # a_2 = det A = -j^2 pi
    want = (-(j * j)) * pi
    assert ab.a[1].agrees_with(want)
    # moments against e_0: b_0 = 1, b_1 = e_0* A e_0 = 0
    assert ab.b[0].agrees_with(EElem.one(desc))
    assert ab.b[1].is_zero()
    assert v_invariant(A) == 1


def test_membership_checks():
    desc = inert3
    j = _j(desc)
    one = EElem.one(desc)
    z = EElem.zero(desc)
    pi = EElem.from_real(desc, TruncSeries.pi_pow(desc.k, 1))
    A = MatrixE([[z, j], [j * pi, z]], desc)
    assert membership_check(A, "s_n")
    # the off-diagonal valuations differ, so conjugate-transpose moves A
    assert not membership_check(A, "u_n")
    sym = MatrixE([[z, j], [j, z]], desc)
    assert membership_check(sym, "s_n")
    assert membership_check(sym, "u_n")
    B = MatrixE([[one, z], [z, one]], desc)
    assert membership_check(B, "S_n")
    assert membership_check(B, "U_n")
    assert not membership_check(B, "s_n")
    # integral, but A sigma(A) = diag(pi^2, 1) is not the identity
    C = MatrixE([[j * pi, z], [z, j]], desc)
    assert not membership_check(C, "S_n")
    with pytest.raises(ValueError):
        membership_check(A, "gl_n")


def test_matching_check():
    x = rand_invariants(2, inert3, seed=1)
    y = rand_invariants(2, inert3, seed=1)
    assert matching_check(x, y)
    z = rand_invariants(2, inert3, seed=2)
    assert not matching_check(x, z)
    assert not matching_check(x, rand_invariants(1, inert3, seed=1))


def test_variant_transport_preserves_delta_class():
    desc = inert3
    k = desc.k
    j = _j(desc)
    # real gl-side invariants, twisted into the parity-correct form
    a = [EElem.from_real(desc, TruncSeries.const(k, 2)),
         EElem.from_real(desc, TruncSeries.pi_pow(k, 1))]
    b = [EElem.one(desc), EElem.from_real(desc, TruncSeries.pi_pow(k, 1))]
    raw = InvariantPair(a, b, desc)
    tw = variant_transport(raw, j)
    tw.validate()
    assert tw.a[0].is_imaginary() and tw.a[1].is_real()
    assert tw.b[1].is_imaginary()
    # the twist multiplies Delta by a unit
    assert strong_regularity(tw).val_delta == strong_regularity(raw).val_delta


def test_moment_sequence_prefix():
    ab = rand_invariants(2, split3, seed=3)
    s = moment_sequence(ab, 5)
    assert len(s) == 5
    for i in range(2):
        assert s[i].agrees_with(ab.b[i])
    # s_2 follows the recurrence a_1 s_1 - a_2 s_0
    want = ab.a[0] * s[1] - ab.a[1] * s[0]
    assert s[2].agrees_with(want)


@given(st.integers(0, 10_000), st.sampled_from([1, 2]),
       st.sampled_from(["inert", "split"]))
def test_sampler_output_always_validates(seed, n, ext):
    ab = rand_invariants(n, field_desc(3, ext), seed=seed)
    ab.validate()
    rep = strong_regularity(ab)
    assert rep.strongly_regular


def test_pair_truncation_and_prec():
    ab = rand_invariants(1, inert3, seed=0)
    assert ab.prec() is None
    cut = ab.truncated(5)
    assert cut.prec() == 5
    assert cut.a[0].agrees_with(ab.a[0])
