"""Chain DP for the theta/phi multisum families and their q-difference
systems."""

import pytest

from qnahm.series import BadParams, MonomialSpec, QSeries, poch_infinite
from qnahm.qdiff import (
    phi_at_one,
    phi_series,
    qdiff_ctx,
    system_matrix_B,
    theta_at_one,
    theta_series,
    verify_system,
)


def naive_chain(k, i, order, last_squared):
    """Direct enumeration over N_1 >= ... >= N_k >= 0."""
    from qnahm.series import inv_qpoch

    ctx = qdiff_ctx(order)
    total = QSeries.zero(ctx)
    vmax = 0
    while vmax * vmax < order:
        vmax += 1

    def rec(j, prev, tuples):
        nonlocal total
        if j > k:
            quad = sum(n * n for n in tuples)
            lin = sum(tuples[j0 - 1] for j0 in range(k - i + 1, k + 1))
            if quad + lin >= order:
                return
            term = QSeries.monomial(ctx, 1, quad + lin, aux_exp=sum(tuples))
            for idx in range(k):
                nxt = tuples[idx + 1] if idx + 1 < k else 0
                term = term * inv_qpoch(ctx, tuples[idx] - nxt)
                if last_squared and idx == k - 1:
                    term = term * inv_qpoch(ctx, tuples[idx] - nxt)
            total = total + term
            return
        for v in range(prev + 1):
            rec(j + 1, v, tuples + (v,))

    rec(1, vmax, ())
    return total


def test_dp_equals_naive():
    for k in (1, 2, 3):
        for i in range(k + 1):
            assert theta_series(k, i, 16) == naive_chain(k, i, 16, False), (k, i)
            assert phi_series(k, i, 16) == naive_chain(k, i, 16, True), (k, i)


def test_parameter_guards():
    with pytest.raises(BadParams):
        theta_series(0, 0, 10)
    with pytest.raises(BadParams):
        phi_series(2, 3, 10)


def test_specialized_series_are_aux_free():
    assert theta_at_one(2, 1, 15).aux_degree() == 0
    assert phi_at_one(2, 1, 15).aux_degree() == 0


def test_rogers_ramanujan_at_x_one():
    # k = 1 at x = 1 gives the two Rogers-Ramanujan products
    order = 40
    ctx = theta_at_one(1, 0, order).ctx()
    first = (poch_infinite(MonomialSpec(1, 1), ctx, step=5)
             * poch_infinite(MonomialSpec(1, 4), ctx, step=5)).invert()
    second = (poch_infinite(MonomialSpec(1, 2), ctx, step=5)
              * poch_infinite(MonomialSpec(1, 3), ctx, step=5)).invert()
    assert theta_at_one(1, 0, order) == first
    assert theta_at_one(1, 1, order) == second


def test_difference_systems_hold():
    for k in (1, 2, 3):
        assert all(verify_system(k, "theta", 25, x_cap=12)), k
        assert all(verify_system(k, "phi", 25, x_cap=12)), k
    with pytest.raises(BadParams):
        verify_system(2, "neither", 10)


def test_phi_matrix_k2_literal():
    ctx = qdiff_ctx(12)
    B = system_matrix_B(2, ctx)
    xq = QSeries.monomial(ctx, 1, 1, aux_exp=1)
    one = QSeries.one(ctx)
    assert B[(0, 0)] == QSeries.const(ctx, 3)
    assert B[(0, 1)] == (one - xq).scale(-2)
    assert B[(0, 2)] == -(xq * (one - xq))
    assert B[(1, 0)] == QSeries.const(ctx, 2)
    assert B[(1, 1)] == -(one - xq)
    assert (1, 2) not in B
    assert B[(2, 0)] == one
    assert (2, 1) not in B and (2, 2) not in B
