"""Double-pole sums: DP kernel against brute force, rewrites, single-sum
representations."""

import pytest

from qnahm.series import BadParams, Ctx, q_infinity
from qnahm.nahm import (
    NahmSpec,
    d_series,
    d_series_naive,
    d_series_symmetry_check,
    fermionic_lhs,
    fermionic_side,
    multisum_rhs,
    single_var_rhs,
    weighted_d_series,
)


def test_spec_validation():
    with pytest.raises(BadParams):
        NahmSpec(0, 1)
    with pytest.raises(BadParams):
        NahmSpec(2, 4)
    with pytest.raises(BadParams):
        NahmSpec(2, 1, "nope")
    with pytest.raises(BadParams):
        NahmSpec(2, 1, exponent_vector=(1,))
    with pytest.raises(BadParams):
        NahmSpec(2, 1, exponent_vector=(0, 1))


def test_linear_coefficients():
    assert NahmSpec(3, 2).linear_coeffs() == (1, 2, 1)
    assert NahmSpec(3, 4).linear_coeffs() == (1, 1, 1)
    assert NahmSpec(2, 1, exponent_vector=(3, 1)).linear_coeffs() == (3, 1)


def test_dp_equals_naive_enumeration():
    for t in (1, 2, 3):
        for s in range(1, t + 2):
            for wm in ("zero", "one", "formal"):
                spec = NahmSpec(t, s, wm)
                assert d_series(spec, 15) == d_series_naive(spec, 15), (t, s, wm)


def test_dp_equals_naive_half_grain():
    spec = NahmSpec(2, 2, "half")
    assert d_series(spec, 24) == d_series_naive(spec, 24)


def test_dp_equals_naive_exponent_vector():
    for ev in ((2,), (3, 1), (1, 2, 2)):
        spec = NahmSpec(len(ev), 1, "zero", exponent_vector=ev)
        assert d_series(spec, 14) == d_series_naive(spec, 14)


def test_known_initial_coefficients():
    s = d_series(NahmSpec(1, 2, "zero"), 6)
    assert [s.coefficient(e) for e in range(6)] == [1, 1, 3, 6, 12, 21]


def test_reflection_symmetry_at_w_zero():
    for t in (2, 3, 4, 5):
        for s in range(1, t + 1):
            assert d_series_symmetry_check(t, s, 20)
    with pytest.raises(BadParams):
        d_series_symmetry_check(3, 4, 10)


def test_multisum_rewrite():
    for t in (2, 3, 4):
        for s in range(2, t + 2):
            for wm in ("zero", "one", "formal"):
                assert d_series(NahmSpec(t, s, wm), 18) == \
                    multisum_rhs(t, s, wm, 18), (t, s, wm)


def test_multisum_rewrite_half_grain():
    assert d_series(NahmSpec(2, 3, "half"), 30) == multisum_rhs(2, 3, "half", 30)


def test_multisum_range_restrictions():
    with pytest.raises(BadParams):
        multisum_rhs(2, 1, "zero", 10)
    with pytest.raises(BadParams):
        multisum_rhs(1, 2, "zero", 10)


def test_single_variable_rewrite():
    for a, s in ((1, 2), (2, 1)):
        for wm in ("zero", "one", "formal"):
            assert d_series(NahmSpec(1, s, wm), 22) == \
                single_var_rhs(a, wm, 22), (a, wm)
    assert d_series(NahmSpec(1, 2, "half"), 30) == single_var_rhs(1, "half", 30)
    with pytest.raises(BadParams):
        single_var_rhs(3, "zero", 10)


def test_fermionic_single_sum():
    for parity, ks in (("even", (1, 2)), ("odd", (2,))):
        for k in ks:
            for i in range(k + 1):
                for wm in ("zero", "one", "formal"):
                    lhs = fermionic_lhs(k, i, parity, wm, 18)
                    rhs = fermionic_side(k, i, parity, wm, 18)
                    assert lhs == rhs, (parity, k, i, wm)


def test_fermionic_half_grain():
    assert fermionic_lhs(2, 1, "even", "half", 28) == \
        fermionic_side(2, 1, "even", "half", 28)


def test_fermionic_parameter_guards():
    with pytest.raises(BadParams):
        fermionic_side(1, 0, "odd", "zero", 10)
    with pytest.raises(BadParams):
        fermionic_side(2, 3, "even", "zero", 10)
    with pytest.raises(BadParams):
        fermionic_side(2, 1, "sideways", "zero", 10)


def test_weighted_combination_is_linear():
    ctx = Ctx(15)
    a = d_series(NahmSpec(2, 2, "zero"), 15)
    b = d_series(NahmSpec(2, 3, "zero"), 15)
    combo = weighted_d_series(2, {2: -1, 3: 2}, "zero", 15)
    assert combo == b.scale(2) - a
