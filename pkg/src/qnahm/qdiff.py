"""Multisum families theta_{k,i} and phi_{k,i} in a formal variable x and
the first-order q-difference systems v(x) = M(x, q) v(qx) they satisfy.

Both families are sums over partial sums N_1 >= ... >= N_k >= 0 of
x^(sum N_j) q^(sum N_j^2 + N_{k-i+1} + ... + N_k) over products of
finite q-Pochhammers in the successive differences; phi squares the last
denominator.  Evaluation runs a DP over the decreasing chain.
"""

from functools import lru_cache

from .series import (
    BadParams,
    Ctx,
    QSeries,
    aux_specialize,
    inv_qpoch,
)


def qdiff_ctx(order):
    return Ctx(order, 1, "x")


def _chain_dp(k, i, order, last_squared):
    ctx = qdiff_ctx(order)
    E = ctx.order
    vmax = 0
    while vmax * vmax < E:
        vmax += 1
    # T[v] accumulates the tail over N_{j}..N_k with N_j = v
    T = []
    for v in range(vmax):
        lin = v if k >= k - i + 1 else 0
        head = QSeries.monomial(ctx, 1, v * v + lin, aux_exp=v)
        den = inv_qpoch(ctx, v)
        if last_squared:
            den = den * inv_qpoch(ctx, v)
        T.append(head * den)
    for j in range(k - 1, 0, -1):
        newT = []
        for v in range(vmax):
            lin = v if j >= k - i + 1 else 0
            if v * v + lin >= E:
                newT.append(QSeries.zero(ctx))
                continue
            acc = QSeries.zero(ctx)
            for u in range(v + 1):
                acc = acc + T[u] * inv_qpoch(ctx, v - u)
            newT.append(QSeries.monomial(ctx, 1, v * v + lin, aux_exp=v) * acc)
        T = newT
    total = QSeries.zero(ctx)
    for v in range(vmax):
        total = total + T[v]
    return total


@lru_cache(maxsize=None)
def theta_series(k, i, order):
    """theta_{k,i}(x, q) truncated at the given q order."""
    if not 0 <= i <= k or k < 1:
        raise BadParams("need k >= 1 and 0 <= i <= k")
    return _chain_dp(k, i, order, last_squared=False)


@lru_cache(maxsize=None)
def phi_series(k, i, order):
    """phi_{k,i}(x, q): same chain with the last denominator squared."""
    if not 0 <= i <= k or k < 1:
        raise BadParams("need k >= 1 and 0 <= i <= k")
    return _chain_dp(k, i, order, last_squared=True)


def theta_at_one(k, i, order):
    """theta_{k,i}(1, q) as an aux-free series."""
    return aux_specialize(theta_series(k, i, order), "one")


def phi_at_one(k, i, order):
    return aux_specialize(phi_series(k, i, order), "one")


# ---------------------------------------------------------------------------
# coefficient matrices of the two systems


def system_matrix_A(k, ctx):
    """[A]_{r,c} = (xq)^c for c <= k - r, zero otherwise; size (k+1)^2."""
    out = {}
    for r in range(k + 1):
        for c in range(k - r + 1):
            out[(r, c)] = QSeries.monomial(ctx, 1, c * ctx.grain, aux_exp=c)
    return out


def system_matrix_B(k, ctx):
    """First column k+1-r; then -(k-r-c+1)(1-xq)(xq)^(c-1) while positive."""
    g = ctx.grain
    one_minus_xq = QSeries.one(ctx) - QSeries.monomial(ctx, 1, g, aux_exp=1)
    out = {}
    for r in range(k + 1):
        out[(r, 0)] = QSeries.const(ctx, k + 1 - r)
        for c in range(1, k - r + 1):
            m = QSeries.monomial(ctx, -(k - r - c + 1), (c - 1) * g, aux_exp=c - 1)
            out[(r, c)] = m * one_minus_xq
    return out


def verify_system(k, which, order, x_cap=12):
    """Check v(x) = M(x,q) v(qx) row by row, capping the x degree.

    `which` selects 'theta' (matrix A) or 'phi' (matrix B).  Returns the
    list of per-row booleans.
    """
    ctx = qdiff_ctx(order)
    if which == "theta":
        vec = [theta_series(k, i, order) for i in range(k + 1)]
        M = system_matrix_A(k, ctx)
    elif which == "phi":
        vec = [phi_series(k, i, order) for i in range(k + 1)]
        M = system_matrix_B(k, ctx)
    else:
        raise BadParams("which must be 'theta' or 'phi'")
    shifted = [aux_specialize(v, "qshift") for v in vec]
    rows = []
    for r in range(k + 1):
        rhs = QSeries.zero(ctx)
        for c in range(k + 1):
            m = M.get((r, c))
            if m is not None:
                rhs = rhs + m * shifted[c]
        rows.append(vec[r].truncate_aux(x_cap) == rhs.truncate_aux(x_cap))
    return rows
