"""Bailey pairs relative to a = q^e and the moves used to build the
double-pole families.

A pair is a finite window alpha_0..alpha_N, beta_0..beta_N with
beta = L(a) alpha, L(a)_{r,c} = 1/((q)_{r-c} (aq)_{r+c}).  Moves F, Fw,
U, S and LO transform one pair into another; U, S and their unit-column
variants also exist as explicit matrices whose conjugates by L(a) have
closed forms, which is checked entrywise in `conjugate_check`.
"""

from dataclasses import dataclass
from functools import lru_cache

from .series import (
    BadParams,
    BasePoleError,
    MonomialSpec,
    QSeries,
    inv_qpoch,
    neg_w_poch,
    poch_finite,
    qpoch,
    w_shifted_poch,
)
from .nahm import bracket_string, fermionic_lhs


@lru_cache(maxsize=None)
def _poch_from(ctx, start, n):
    """prod_{i=0}^{n-1} (1 - q^(start+i)), plain exponents."""
    return poch_finite(MonomialSpec(1, ctx.grain * start), n, ctx)


@lru_cache(maxsize=None)
def _inv_poch_from(ctx, start, n):
    return _poch_from(ctx, start, n).invert()


def _mono(ctx, e):
    return QSeries.monomial(ctx, 1, ctx.grain * e)


@lru_cache(maxsize=None)
def _inv_one_minus(ctx, e):
    """1 / (1 - q^e)."""
    return (QSeries.one(ctx) - _mono(ctx, e)).invert()


# ---------------------------------------------------------------------------
# the lower-triangular pair matrix and its inverse


def bailey_L_entry(ctx, e, r, c):
    """L(q^e)_{r,c} for c <= r; zero series above the diagonal."""
    if c > r:
        return QSeries.zero(ctx)
    return inv_qpoch(ctx, r - c) * _inv_poch_from(ctx, e + 1, r + c)


def bailey_L_inverse_entry(ctx, e, r, c):
    """Entry (r,c) of L(q^e)^(-1); requires e >= 1."""
    if e < 1:
        raise BasePoleError("inverse matrix needs base exponent e >= 1")
    if c > r:
        return QSeries.zero(ctx)
    d = r - c
    num = _poch_from(ctx, e, r + c)
    num = num * (QSeries.one(ctx) - _mono(ctx, e + 2 * r))
    num = num.scale((-1) ** d, ctx.grain * (d * (d - 1) // 2))
    return num * inv_qpoch(ctx, d) * _inv_one_minus(ctx, e)


def bailey_L(ctx, e, size):
    return {(r, c): bailey_L_entry(ctx, e, r, c)
            for r in range(size) for c in range(r + 1)}


def bailey_L_inverse(ctx, e, size):
    return {(r, c): bailey_L_inverse_entry(ctx, e, r, c)
            for r in range(size) for c in range(r + 1)}


def mat_mul(A, B, size):
    out = {}
    bycol = {}
    for (r, c), v in B.items():
        bycol.setdefault(r, []).append((c, v))
    for (r, k), a in A.items():
        if a.is_zero():
            continue
        for c, b in bycol.get(k, ()):
            p = a * b
            if (r, c) in out:
                out[(r, c)] = out[(r, c)] + p
            else:
                out[(r, c)] = p
    return out


def mat_apply(M, vec):
    out = []
    zero = QSeries.zero(vec[0].ctx())
    for r in range(len(vec)):
        acc = zero
        for c in range(len(vec)):
            m = M.get((r, c))
            if m is not None and not m.is_zero():
                acc = acc + m * vec[c]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# pairs


@dataclass(frozen=True)
class BaileyPair:
    """Window of a Bailey pair relative to a = q^e."""

    e: int
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        if len(self.alpha) != len(self.beta) or not self.alpha:
            raise BadParams("alpha and beta windows must match and be nonempty")

    @property
    def window(self):
        return len(self.alpha) - 1


def check_pair(pair, ctx):
    """Whether beta = L(a) alpha holds on the whole window."""
    for n in range(len(pair.alpha)):
        acc = QSeries.zero(ctx)
        for c in range(n + 1):
            acc = acc + bailey_L_entry(ctx, pair.e, n, c) * pair.alpha[c]
        if acc != pair.beta[n]:
            return False
    return True


def seed_B3(ctx, window):
    """The unit pair: beta_n = 1/(q)_n with the matching alternating alpha."""
    g = ctx.grain
    alpha = []
    inv_1mq = _inv_one_minus(ctx, 1)
    for n in range(window + 1):
        a = QSeries.one(ctx) - _mono(ctx, 2 * n + 1)
        a = a.scale((-1) ** n, g * ((3 * n * n + n) // 2))
        alpha.append(a * inv_1mq)
    beta = [inv_qpoch(ctx, n) for n in range(window + 1)]
    return BaileyPair(1, tuple(alpha), tuple(beta))


# ---------------------------------------------------------------------------
# moves (stated relative to base a = q unless noted)


def _require_base_q(pair):
    if pair.e != 1:
        raise BasePoleError("move is stated for base a = q")


def move_F(pair, ctx):
    """alpha_n -> (-1)^n q^(n(n+1)/2) alpha_n, with the matching beta sum."""
    _require_base_q(pair)
    g = ctx.grain
    N = pair.window
    alpha = tuple(pair.alpha[n].scale((-1) ** n, g * (n * (n + 1) // 2))
                  for n in range(N + 1))
    beta = []
    for n in range(N + 1):
        acc = QSeries.zero(ctx)
        for r in range(n + 1):
            term = pair.beta[r].scale((-1) ** r, g * (r * (r + 1) // 2))
            term = term * qpoch(ctx, r) * inv_qpoch(ctx, n - r)
            acc = acc + term
        beta.append(acc * inv_qpoch(ctx, n))
    return BaileyPair(1, alpha, tuple(beta))


def move_Fw(pair, ctx, w_mode):
    """The w-weighted variant of F, introducing w^r (-q/w)_r / (-wq)_n."""
    _require_base_q(pair)
    g = ctx.grain
    N = pair.window
    alpha = []
    for n in range(N + 1):
        a = pair.alpha[n] * w_shifted_poch(n, ctx, w_mode)
        a = a.shift(g * (n * (n + 1) // 2))
        alpha.append(a * neg_w_poch(n, w_mode, ctx, start=1).invert())
    beta = []
    for n in range(N + 1):
        acc = QSeries.zero(ctx)
        for r in range(n + 1):
            term = pair.beta[r] * w_shifted_poch(r, ctx, w_mode)
            term = term.shift(g * (r * (r + 1) // 2))
            acc = acc + term * inv_qpoch(ctx, n - r)
        beta.append(acc * neg_w_poch(n, w_mode, ctx, start=1).invert())
    return BaileyPair(1, tuple(alpha), tuple(beta))


def move_U(pair, ctx):
    """alpha -> (conjugated shift) alpha, beta_n -> beta_{n+1}; window shrinks."""
    _require_base_q(pair)
    N = pair.window
    if N < 1:
        raise BadParams("window too small for a shrinking move")
    M = tilde_matrix("U", ctx, 1, N + 1)
    alpha = mat_apply(M, list(pair.alpha))
    beta = tuple(pair.beta[n + 1] for n in range(N))
    return BaileyPair(1, tuple(alpha[:N]), beta)


def move_S(pair, ctx):
    """The squared variant: beta_n -> (1-q^(n+1))^2 beta_{n+1}."""
    _require_base_q(pair)
    g = ctx.grain
    N = pair.window
    if N < 1:
        raise BadParams("window too small for a shrinking move")
    M = tilde_matrix("S", ctx, 1, N + 1)
    alpha = mat_apply(M, list(pair.alpha))
    beta = []
    for n in range(N):
        f = QSeries.one(ctx) - _mono(ctx, n + 1)
        beta.append(pair.beta[n + 1] * f * f)
    return BaileyPair(1, tuple(alpha[:N]), tuple(beta))


def move_LO(pair, ctx):
    """Lift a base a = 1 pair with alpha_0 = beta_0 = 0 to base a = q."""
    if pair.e != 0:
        raise BasePoleError("lift move needs base a = 1")
    if not (pair.alpha[0].is_zero() and pair.beta[0].is_zero()):
        raise BadParams("lift move needs alpha_0 = beta_0 = 0")
    g = ctx.grain
    N = pair.window
    if N < 1:
        raise BadParams("window too small for a shrinking move")
    inv_1mq = _inv_one_minus(ctx, 1)
    alpha = []
    for n in range(N):
        a = pair.alpha[n + 1] * _inv_one_minus(ctx, 2 * n + 2)
        if n > 0:
            a = a - pair.alpha[n].shift(g * 2 * n) * _inv_one_minus(ctx, 2 * n)
        alpha.append(a * inv_1mq)
    beta = tuple(pair.beta[n + 1] for n in range(N))
    return BaileyPair(1, tuple(alpha), beta)


MOVES = {"F": move_F, "U": move_U, "S": move_S, "LO": move_LO}


# ---------------------------------------------------------------------------
# shift matrices and their conjugates by L(a)


def plain_matrix(name, ctx, size):
    one = QSeries.one(ctx)
    out = {}
    if name == "U":
        for r in range(size - 1):
            out[(r, r + 1)] = one
    elif name == "D":
        for r in range(size):
            out[(r, r)] = _mono(ctx, r)
    elif name == "S":
        for r in range(size - 1):
            f = one - _mono(ctx, r + 1)
            out[(r, r + 1)] = f * f
    elif name == "U1":
        for r in range(size - 1):
            out[(r, r + 1)] = one - _mono(ctx, r + 1)
    else:
        raise BadParams("unknown matrix %r" % (name,))
    return out


def tilde_matrix(name, ctx, e, size):
    """Closed form of L(q^e)^(-1) M L(q^e) for M in {U, D, S, U1}."""
    one = QSeries.one(ctx)
    out = {}
    if name == "U":
        for n in range(size):
            if n == 0:
                v = _inv_one_minus(ctx, 1) * _inv_one_minus(ctx, e + 1)
            elif n == 1:
                num = (-_mono(ctx, e + 1) - _mono(ctx, 1)
                       + _mono(ctx, e + 3) + _mono(ctx, e + 2))
                v = (num * _inv_one_minus(ctx, 1) * _inv_one_minus(ctx, 2)
                     * _inv_one_minus(ctx, e + 1))
            else:
                v = (one - _mono(ctx, e + 2 * n)) * _poch_from(ctx, e + 1, n - 2)
                v = v.scale((-1) ** n, ctx.grain * (n * (n + 1) // 2))
                v = v * inv_qpoch(ctx, n + 1)
            out[(n, 0)] = v
        for n in range(size):
            if n + 1 < size:
                out[(n, n + 1)] = (_inv_one_minus(ctx, e + 2 * n + 1)
                                   * _inv_one_minus(ctx, e + 2 * n + 2))
            if n >= 1:
                num = -(_mono(ctx, e + 2 * n - 1) + _mono(ctx, e + 2 * n))
                out[(n, n)] = (num * _inv_one_minus(ctx, e + 2 * n - 1)
                               * _inv_one_minus(ctx, e + 2 * n + 1))
            if n >= 2:
                v = QSeries.monomial(ctx, 1, ctx.grain * (2 * e + 4 * n - 3))
                out[(n, n - 1)] = (v * _inv_one_minus(ctx, e + 2 * n - 2)
                                   * _inv_one_minus(ctx, e + 2 * n - 1))
    elif name == "D":
        for r in range(size):
            out[(r, r)] = _mono(ctx, r)
            for c in range(r):
                v = one - _mono(ctx, e + 2 * r)
                v = v.scale(-1, ctx.grain * (e * (r - c - 1) + r * r - r - c * c))
                out[(r, c)] = v
    elif name == "S":
        out[(0, 0)] = (one - _mono(ctx, 1)) * _inv_one_minus(ctx, e + 1)
        if size > 1:
            out[(1, 0)] = ((one - _mono(ctx, e)).shift(ctx.grain)
                           * _inv_one_minus(ctx, e + 1))
        for r in range(size):
            if r >= 2:
                f = one - _mono(ctx, e + r - 1)
                v = (f * f).shift(ctx.grain * (2 * r - 1))
                out[(r, r - 1)] = (v * _inv_one_minus(ctx, e + 2 * r - 2)
                                   * _inv_one_minus(ctx, e + 2 * r - 1))
            if r >= 1:
                num = (QSeries.const(ctx, 2) - _mono(ctx, r) - _mono(ctx, r + 1)
                       - _mono(ctx, e + r - 1) - _mono(ctx, e + r)
                       + _mono(ctx, e + 2 * r).scale(2))
                out[(r, r)] = (num.shift(ctx.grain * r)
                               * _inv_one_minus(ctx, e + 2 * r - 1)
                               * _inv_one_minus(ctx, e + 2 * r + 1))
            if r + 1 < size:
                f = one - _mono(ctx, r + 1)
                out[(r, r + 1)] = (f * f * _inv_one_minus(ctx, e + 2 * r + 1)
                                   * _inv_one_minus(ctx, e + 2 * r + 2))
    elif name == "U1":
        out[(0, 0)] = _inv_one_minus(ctx, e + 1)
        if size > 1:
            out[(1, 0)] = _mono(ctx, e + 1).scale(-1) * _inv_one_minus(ctx, e + 1)
        for r in range(size):
            if r >= 2:
                v = (one - _mono(ctx, e + r - 1)).scale(-1, ctx.grain * (e + 3 * r - 2))
                out[(r, r - 1)] = (v * _inv_one_minus(ctx, e + 2 * r - 2)
                                   * _inv_one_minus(ctx, e + 2 * r - 1))
            if r >= 1:
                num = (_mono(ctx, e + 3 * r) - _mono(ctx, e + 2 * r)
                       - _mono(ctx, e + 2 * r - 1) + _mono(ctx, r))
                out[(r, r)] = (num * _inv_one_minus(ctx, e + 2 * r - 1)
                               * _inv_one_minus(ctx, e + 2 * r + 1))
            if r + 1 < size:
                out[(r, r + 1)] = ((one - _mono(ctx, r + 1))
                                   * _inv_one_minus(ctx, e + 2 * r + 1)
                                   * _inv_one_minus(ctx, e + 2 * r + 2))
    else:
        raise BadParams("unknown matrix %r" % (name,))
    return out


def conjugate_check(name, ctx, e, n_max):
    """Compare L^(-1) M L entrywise with the closed form, up to index n_max."""
    size = n_max + 2
    L = bailey_L(ctx, e, size)
    Linv = bailey_L_inverse(ctx, e, size)
    M = plain_matrix(name, ctx, size)
    conj = mat_mul(Linv, mat_mul(M, L, size), size)
    T = tilde_matrix(name, ctx, e, n_max + 1)
    zero = QSeries.zero(ctx)
    for r in range(n_max + 1):
        for c in range(n_max + 1):
            if conj.get((r, c), zero) != T.get((r, c), zero):
                return False
    return True


# ---------------------------------------------------------------------------
# the move pipeline producing the double-pole pairs


def pipeline_moves(k, i, parity):
    t = 2 * k if parity == "even" else 2 * k - 1
    if not 0 <= i <= k:
        raise BadParams("need 0 <= i <= k")
    if i == k:
        return ["F"] * (t - 2) + ["Fw"]
    lam = k - i - 1
    mu = t - 2 - lam
    if mu < 0:
        raise BadParams("parameters out of range for the move pipeline")
    return ["F"] * lam + ["S"] + ["F"] * mu + ["Fw"]


def pipeline(k, i, parity, w_mode, order, n_max, check=False):
    """Build the pair for family (k, i) by running the move sequence.

    With check=True every intermediate pair is verified against L(a).
    """
    from .nahm import nahm_ctx
    ctx = nahm_ctx(w_mode, order)
    moves = pipeline_moves(k, i, parity)
    window = n_max + moves.count("S")
    pair = seed_B3(ctx, window)
    if check and not check_pair(pair, ctx):
        raise BadParams("seed pair failed its defining relation")
    for mv in moves:
        if mv == "Fw":
            pair = move_Fw(pair, ctx, w_mode)
        else:
            pair = MOVES[mv](pair, ctx)
        if check and not check_pair(pair, ctx):
            raise BadParams("pair relation lost after move %s" % mv)
    return pair


def alpha_closed_form(k, i, parity, w_mode, order, n):
    """Predicted alpha_n of the pipeline pair, as a single bracketed term."""
    from .nahm import nahm_ctx
    ctx = nahm_ctx(w_mode, order)
    g, E = ctx.grain, ctx.order
    t = 2 * k if parity == "even" else 2 * k - 1
    if parity == "even":
        quad = (k + 1) * n * n
        sign = (-1) ** (n + k - i)
    else:
        quad = ((2 * k + 1) * n * n - n) // 2
        sign = (-1) ** (k - i)
    pre = w_shifted_poch(n, ctx, w_mode).scale(sign, g * quad)
    pre = pre * neg_w_poch(n, w_mode, ctx, start=1).invert()
    pre = pre * _inv_one_minus(ctx, 1)
    bracket = QSeries.zero(ctx)
    for j, c, off in bracket_string(k, i):
        e = g * (j * n + off)
        if e < E:
            bracket = bracket + QSeries.monomial(ctx, c, e)
    return pre * bracket


def limit_agreement_order(k, i, parity, w_mode, order, n_max):
    """For each n, the order to which beta_n matches the fermionic left side.

    Returns the list of agreement orders (scaled exponents, None meaning
    full agreement at the working order).
    """
    pair = pipeline(k, i, parity, w_mode, order, n_max)
    target = fermionic_lhs(k, i, parity, w_mode, order)
    return [pair.beta[n].first_mismatch(target) for n in range(n_max + 1)]
