"""Pair matrix, moves, conjugated shift matrices, and the move pipeline."""

import random

import pytest

from qnahm.series import BadParams, BasePoleError, Ctx, QSeries
from qnahm.nahm import nahm_ctx
from qnahm.bailey import (
    MOVES,
    BaileyPair,
    alpha_closed_form,
    bailey_L_entry,
    bailey_L_inverse_entry,
    check_pair,
    conjugate_check,
    limit_agreement_order,
    move_Fw,
    move_LO,
    pipeline,
    pipeline_moves,
    seed_B3,
)


def random_pair(ctx, rng, e, window):
    alpha = [QSeries.monomial(ctx, rng.randint(-4, 4), rng.randint(0, 5))
             for _ in range(window + 1)]
    beta = []
    for n in range(window + 1):
        acc = QSeries.zero(ctx)
        for c in range(n + 1):
            acc = acc + bailey_L_entry(ctx, e, n, c) * alpha[c]
        beta.append(acc)
    return BaileyPair(e, tuple(alpha), tuple(beta))


def test_matrix_inverse_windows():
    ctx = Ctx(25)
    for e in (1, 2):
        for r in range(16):
            for c in range(16):
                acc = QSeries.zero(ctx)
                for m in range(c, r + 1):
                    acc = acc + (bailey_L_entry(ctx, e, r, m)
                                 * bailey_L_inverse_entry(ctx, e, m, c))
                want = QSeries.one(ctx) if r == c else QSeries.zero(ctx)
                assert acc == want, (e, r, c)


def test_inverse_needs_positive_base():
    with pytest.raises(BasePoleError):
        bailey_L_inverse_entry(Ctx(10), 0, 1, 0)


def test_seed_pair_holds():
    ctx = Ctx(25)
    assert check_pair(seed_B3(ctx, 10), ctx)


def test_conjugated_shift_matrices():
    ctx = Ctx(25)
    for name in ("U", "D", "S", "U1"):
        for e in (1, 2, 3):
            assert conjugate_check(name, ctx, e, 6), (name, e)


def test_moves_preserve_pair_relation_seed():
    for wm in ("zero", "one", "formal"):
        ctx = nahm_ctx(wm, 18)
        pair = seed_B3(ctx, 7)
        for mv in ("F", "S", "U", "F"):
            pair = MOVES[mv](pair, ctx)
            assert check_pair(pair, ctx), (wm, mv)
        pair = move_Fw(pair, ctx, wm)
        assert check_pair(pair, ctx), (wm, "Fw")


def test_moves_preserve_pair_relation_random():
    rng = random.Random(424242)
    ctx = Ctx(16)
    for trial in range(20):
        pair = random_pair(ctx, rng, 1, 5)
        assert check_pair(pair, ctx)
        mv = ("F", "S", "U")[trial % 3]
        out = MOVES[mv](pair, ctx)
        assert check_pair(out, ctx), (trial, mv)


def test_lift_move_from_unit_base():
    rng = random.Random(7)
    ctx = Ctx(18)
    alpha = [QSeries.zero(ctx)] + [
        QSeries.monomial(ctx, rng.randint(-3, 3), rng.randint(0, 4))
        for _ in range(5)]
    beta = []
    for n in range(6):
        acc = QSeries.zero(ctx)
        for c in range(n + 1):
            acc = acc + bailey_L_entry(ctx, 0, n, c) * alpha[c]
        beta.append(acc)
    p0 = BaileyPair(0, tuple(alpha), tuple(beta))
    p1 = move_LO(p0, ctx)
    assert p1.e == 1 and check_pair(p1, ctx)
    with pytest.raises(BasePoleError):
        move_LO(p1, ctx)


def test_pipeline_move_counts():
    assert pipeline_moves(2, 2, "even") == ["F", "F", "Fw"]
    assert pipeline_moves(2, 0, "even") == ["F", "S", "F", "Fw"]
    assert pipeline_moves(2, 1, "odd") == ["S", "F", "Fw"]


def test_pipeline_alpha_matches_closed_form():
    for parity, ks in (("even", (1, 2, 3)), ("odd", (2, 3))):
        for k in ks:
            for i in range(k + 1):
                pair = pipeline(k, i, parity, "formal", 15, 5, check=True)
                for n in range(6):
                    assert pair.alpha[n] == \
                        alpha_closed_form(k, i, parity, "formal", 15, n), \
                        (parity, k, i, n)


def test_pipeline_alpha_at_zero_is_alternating_sum():
    # alpha_0 = 1 - q + ... + (-1)^(k-i) q^(k-i), independent of w
    for k, i in ((2, 0), (3, 1), (3, 3)):
        pair = pipeline(k, i, "even", "zero", 12, 2)
        a0 = pair.alpha[0]
        for e in range(12):
            want = (-1) ** e if e <= k - i else 0
            assert a0.coefficient(e) == want, (k, i, e)


def test_beta_converges_to_sum_side():
    # beta_n agrees with the infinite-window limit exactly up to order n+1
    for parity, k, wm in (("even", 2, "formal"), ("odd", 2, "zero")):
        orders = limit_agreement_order(k, 1, parity, wm, 12, 6)
        assert orders == [min(n + 1, 12) for n in range(7)], (parity, k, orders)


def test_corrupted_alpha_detected():
    ctx = Ctx(14)
    pair = seed_B3(ctx, 4)
    bad = BaileyPair(1, pair.alpha[:1]
                     + (pair.alpha[1] + QSeries.one(ctx),)
                     + pair.alpha[2:], pair.beta)
    assert not check_pair(bad, ctx)
