"""Double-pole Nahm-type sums and their single-pole multisum rewrites.

The basic object is the t-fold sum over n_1..n_t >= 0 of

    (-w)_{n_1} q^{n_1 n_2 + ... + n_{t-1} n_t + linear(n)} / prod_j (q)_{n_j}^2

where the linear part has coefficient 2 in slot s (or is all-ones when
s = t+1), or is given by an explicit exponent vector.  Evaluation is by
backward contraction of the coupling chain, one summation variable at a
time, which keeps large t cheap at desk-scale truncation orders.
"""

from dataclasses import dataclass
from functools import lru_cache

from .series import (
    BadParams,
    Ctx,
    MonomialSpec,
    QSeries,
    W_MODES,
    inv_q_infinity,
    inv_qpoch,
    neg_w_poch,
    neg_w_poch_inf,
    poch_infinite,
    qpoch,
    w_shifted_poch,
)


@dataclass(frozen=True)
class NahmSpec:
    """Parameters of one double-pole sum."""

    t: int
    s: int
    w_mode: str = "zero"
    exponent_vector: tuple = None

    def __post_init__(self):
        if self.t < 1:
            raise BadParams("t must be >= 1")
        if not 1 <= self.s <= self.t + 1:
            raise BadParams("s must satisfy 1 <= s <= t+1")
        if self.w_mode not in W_MODES:
            raise BadParams("unknown w mode %r" % (self.w_mode,))
        if self.exponent_vector is not None:
            ev = tuple(self.exponent_vector)
            object.__setattr__(self, "exponent_vector", ev)
            if len(ev) != self.t or any(a < 1 for a in ev):
                raise BadParams("exponent vector needs t entries >= 1")

    def linear_coeffs(self):
        if self.exponent_vector is not None:
            return self.exponent_vector
        if self.s == self.t + 1:
            return (1,) * self.t
        return tuple(2 if j == self.s else 1 for j in range(1, self.t + 1))


def nahm_ctx(w_mode, order):
    grain = 2 if w_mode == "half" else 1
    aux = "w" if w_mode == "formal" else "none"
    return Ctx(order, grain, aux)


@lru_cache(maxsize=None)
def _d_series_cached(spec, order):
    ctx = nahm_ctx(spec.w_mode, order)
    g, E = ctx.grain, ctx.order
    cs = spec.linear_coeffs()
    # K[n] = 1/(q)_n^2, with the (-w)_n factor attached at the first slot
    inv2 = [inv_qpoch(ctx, n) * inv_qpoch(ctx, n) for n in range((E - 1) // g + 1)]
    F = [QSeries.one(ctx)] * len(inv2)
    for j in range(spec.t, 0, -1):
        c = cs[j - 1]
        G = []
        for n in range(len(inv2)):
            if g * c * n >= E:
                break
            gn = inv2[n] * F[n]
            if j == 1 and n > 0:
                gn = gn * neg_w_poch(n, spec.w_mode, ctx)
            G.append(gn)
        mtop = 1 if j == 1 else len(inv2)
        newF = []
        for m in range(mtop):
            acc = G[0]
            for n in range(1, len(G)):
                e = g * (m + c) * n
                if e >= E:
                    break
                acc = acc + G[n].shift(e)
            newF.append(acc)
        F = newF
    return F[0]


def d_series(spec, order):
    """The double-pole sum for `spec`, exact to the given truncation order."""
    return _d_series_cached(spec, order)


def d_series_naive(spec, order):
    """Brute-force nested-loop evaluation (test oracle; t <= 3 recommended)."""
    ctx = nahm_ctx(spec.w_mode, order)
    g, E = ctx.grain, ctx.order
    cs = spec.linear_coeffs()
    inv2 = [inv_qpoch(ctx, n) * inv_qpoch(ctx, n) for n in range(E + 1)]
    total = QSeries.zero(ctx)

    def rec(j, prev, exp, acc):
        nonlocal total
        if j > spec.t:
            total = total + acc.shift(g * exp)
            return
        n = 0
        while True:
            e = exp + (prev * n if j > 1 else 0) + cs[j - 1] * n
            if g * e >= E and n > 0:
                break
            if g * e < E:
                term = acc * inv2[n]
                if j == 1 and n > 0:
                    term = term * neg_w_poch(n, spec.w_mode, ctx)
                rec(j + 1, n, e, term)
            n += 1

    rec(1, 0, 0, QSeries.one(ctx))
    return total


def d_series_symmetry_check(t, s, order):
    """Whether D_{t,s}(0) = D_{t,t+1-s}(0) to the working order (1 <= s <= t)."""
    if not 1 <= s <= t:
        raise BadParams("symmetry holds for 1 <= s <= t only")
    lhs = d_series(NahmSpec(t, s, "zero"), order)
    rhs = d_series(NahmSpec(t, t + 1 - s, "zero"), order)
    return lhs == rhs


def weighted_d_series(t, s_weights, w_mode, order):
    """Linear combination sum_s c_s D_{t,s} given {s: c_s} (helper for combos)."""
    ctx = nahm_ctx(w_mode, order)
    total = QSeries.zero(ctx)
    for s, c in sorted(s_weights.items()):
        if c:
            total = total + d_series(NahmSpec(t, s, w_mode), order).scale(c)
    return total


# ---------------------------------------------------------------------------
# single-pole rewrites


def multisum_rhs(t, s, w_mode, order):
    """Bailey-side rewrite of D_{t,s}: alternating multisum over m_1..m_{t-1}.

    Stated for t >= 2 and 2 <= s <= t+1 only.
    """
    if t < 2:
        raise BadParams("multisum form needs t >= 2")
    if not 2 <= s <= t + 1:
        raise BadParams("multisum form is stated for 2 <= s <= t+1 only")
    ctx = nahm_ctx(w_mode, order)
    g, E = ctx.grain, ctx.order
    total = QSeries.zero(ctx)
    mmax = 0
    while g * mmax * (mmax + 1) // 2 < E:
        mmax += 1

    def rec(j, ms, exp):
        nonlocal total
        if j > t - 1:
            sign = (-1) ** sum(ms[1:])
            term = w_shifted_poch(ms[0], ctx, w_mode).scale(sign, g * exp)
            term = term * inv_qpoch(ctx, ms[0])
            for jj in range(2, t):
                term = term * inv_qpoch(ctx, ms[jj - 2] - ms[jj - 1] + (1 if jj == s else 0))
            if s <= t:
                term = term * (QSeries.one(ctx)
                               - QSeries.monomial(ctx, 1, g * (ms[s - 2] + 1)))
            total = total + term
            return
        hi = mmax if j == 1 else ms[-1] + (1 if j == s else 0)
        for m in range(hi + 1):
            e = exp + m * (m + 1) // 2
            if g * e >= E:
                break
            rec(j + 1, ms + [m], e)

    rec(1, [], 0)
    return total * inv_q_infinity(ctx).pow(t)


def single_var_rhs(a, w_mode, order):
    """Single-variable rewrite: equals D_{1,2} for a=1 and D_{1,1} for a=2."""
    if a not in (1, 2):
        raise BadParams("a must be 1 or 2")
    ctx = nahm_ctx(w_mode, order)
    g, E = ctx.grain, ctx.order
    total = QSeries.zero(ctx)
    n = 0
    while g * n * (n + 1) // 2 < E:
        term = QSeries.monomial(ctx, (-1) ** n, g * n * (n + 1) // 2)
        term = term * neg_w_poch_inf(w_mode, ctx, start=a + n)
        term = term * inv_qpoch(ctx, n)
        term = term * poch_infinite(MonomialSpec(1, g * (a + n)), ctx).invert()
        total = total + term
        n += 1
    return total * inv_q_infinity(ctx)


# ---------------------------------------------------------------------------
# fermionic single-sum side


def bracket_string(k, i):
    """Coefficients of the alternating bracket: list of (j, coeff, offset).

    The bracket is sum_j coeff * q^(j*r + offset) with the two strings
    advancing by r and by r+1; for i = k it degenerates to q^(kr) - q^((k+2)r+1).
    """
    terms = []
    for j in range(i, k + 1):
        c = 1 if j == i else 2 * (-1) ** (j - i)
        terms.append((j, c, 0))
    for j in range(k + 2, 2 * k - i + 3):
        if j == 2 * k - i + 2:
            c = -1
        else:
            c = 2 * (-1) ** (k - i) * (-1) ** (j - k - 1)
        terms.append((j, c, j - k - 1))
    return terms


def fermionic_side(k, i, parity, w_mode, order):
    """Single-sum side of the fermionic representation.

    parity 'even' covers t = 2k (k >= 1); 'odd' covers t = 2k-1 (k >= 2).
    """
    if parity not in ("even", "odd"):
        raise BadParams("parity must be 'even' or 'odd'")
    if parity == "even" and k < 1:
        raise BadParams("even parity needs k >= 1")
    if parity == "odd" and k < 2:
        raise BadParams("odd parity needs k >= 2")
    if not 0 <= i <= k:
        raise BadParams("need 0 <= i <= k")
    ctx = nahm_ctx(w_mode, order)
    g, E = ctx.grain, ctx.order
    terms = bracket_string(k, i)
    total = QSeries.zero(ctx)
    r = 0
    while True:
        if parity == "even":
            quad = (k + 1) * r * r
            sign = (-1) ** (r + k - i)
        else:
            quad = ((2 * k + 1) * r * r - r) // 2
            sign = (-1) ** (k - i)
        if g * (quad + i * r) >= E and r > 0:
            break
        pre = w_shifted_poch(r, ctx, w_mode).scale(sign, g * quad)
        pre = pre * neg_w_poch(r, w_mode, ctx, start=1).invert()
        bracket = QSeries.zero(ctx)
        for j, c, off in terms:
            e = g * (j * r + off)
            if e < E:
                bracket = bracket + QSeries.monomial(ctx, c, e)
        total = total + pre * bracket
        r += 1
    return total * inv_q_infinity(ctx).pow(2)


def fermionic_lhs(k, i, parity, w_mode, order):
    """Matching left side: (q)_inf^(t-1) / (-wq)_inf * D_{t,s}."""
    ctx = nahm_ctx(w_mode, order)
    if parity == "even":
        t, s = 2 * k, k + i + 1
    else:
        t, s = 2 * k - 1, k + i
    d = d_series(NahmSpec(t, s, w_mode), order)
    from .series import q_infinity
    return d * q_infinity(ctx).pow(t - 1) * neg_w_poch_inf(w_mode, ctx).invert()
