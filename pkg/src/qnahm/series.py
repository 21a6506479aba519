"""Exact truncated q-series arithmetic.

A QSeries is a formal power series in q, truncated at a fixed exclusive
order E on a scaled integer exponent grid.  The grid unit is q^(1/grain),
so grain=2 series live in half-integer powers of q while all stored
exponents stay integral.  Coefficients are exact integer Laurent
polynomials in at most one auxiliary symbol (w, x or zeta); a coefficient
is stored as a plain int when it is constant, or as a dict mapping
aux exponent -> int otherwise.
"""

from dataclasses import dataclass
from functools import lru_cache


class QSeriesError(Exception):
    pass


class GrainError(QSeriesError):
    pass


class AuxTagError(QSeriesError):
    pass


class NotAUnit(QSeriesError):
    pass


class DivergentProduct(QSeriesError):
    pass


class DivergentSum(QSeriesError):
    pass


class BasePoleError(QSeriesError):
    pass


class BadParams(QSeriesError):
    pass


AUX_TAGS = ("none", "w", "x", "zeta")


@dataclass(frozen=True)
class Ctx:
    """Working context: truncation order (scaled, exclusive), grain, aux tag."""

    order: int
    grain: int = 1
    aux: str = "none"

    def __post_init__(self):
        if self.order < 1:
            raise BadParams("order must be >= 1")
        if self.grain not in (1, 2):
            raise GrainError("grain must be 1 or 2")
        if self.aux not in AUX_TAGS:
            raise AuxTagError("unknown aux tag %r" % (self.aux,))

    def with_aux(self, aux):
        return Ctx(self.order, self.grain, aux)


# ---------------------------------------------------------------------------
# coefficient arithmetic (int, or dict {aux_exp: int})


def _c_norm(d):
    if not d:
        return 0
    if len(d) == 1 and 0 in d:
        return d[0]
    return d


def c_canon(c):
    if isinstance(c, int):
        return c
    return _c_norm({e: v for e, v in c.items() if v})


def c_add(a, b):
    if isinstance(a, int):
        if isinstance(b, int):
            return a + b
        a, b = b, a
    if isinstance(b, int):
        if b == 0:
            return a
        r = dict(a)
        nv = r.get(0, 0) + b
        if nv:
            r[0] = nv
        else:
            r.pop(0, None)
        return _c_norm(r)
    r = dict(a)
    for e, v in b.items():
        nv = r.get(e, 0) + v
        if nv:
            r[e] = nv
        else:
            r.pop(e, None)
    return _c_norm(r)


def c_neg(a):
    if isinstance(a, int):
        return -a
    return {e: -v for e, v in a.items()}


def c_mul(a, b):
    if isinstance(a, int):
        if isinstance(b, int):
            return a * b
        if a == 0:
            return 0
        return {e: a * v for e, v in b.items()}
    if isinstance(b, int):
        if b == 0:
            return 0
        return {e: b * v for e, v in a.items()}
    r = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = e1 + e2
            nv = r.get(e, 0) + v1 * v2
            if nv:
                r[e] = nv
            else:
                del r[e]
    return _c_norm(r)


def c_is_zero(c):
    if isinstance(c, int):
        return c == 0
    return all(v == 0 for v in c.values())


def _merge_aux(a1, a2):
    if a1 == a2:
        return a1
    if a1 == "none":
        return a2
    if a2 == "none":
        return a1
    raise AuxTagError("incompatible aux tags %r and %r" % (a1, a2))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialSpec:
    """A monomial c * aux^aux_exp * q^q_exp (q_exp in scaled units)."""

    int_coeff: int
    q_exp: int
    aux_exp: int = 0

    def __post_init__(self):
        if self.q_exp < 0:
            raise BadParams("q_exp must be >= 0")


class QSeries:
    """Truncated power series in q with exact Laurent-polynomial coefficients.

    Immutable by convention: no public method mutates self.
    """

    __slots__ = ("grain", "order", "aux", "coeffs")

    def __init__(self, grain, order, aux, coeffs):
        self.grain = grain
        self.order = order
        self.aux = aux
        self.coeffs = coeffs  # list of length `order`, int or dict entries

    # -- constructors

    @classmethod
    def zero(cls, ctx):
        return cls(ctx.grain, ctx.order, ctx.aux, [0] * ctx.order)

    @classmethod
    def one(cls, ctx):
        c = [0] * ctx.order
        c[0] = 1
        return cls(ctx.grain, ctx.order, ctx.aux, c)

    @classmethod
    def const(cls, ctx, value):
        c = [0] * ctx.order
        c[0] = value
        return cls(ctx.grain, ctx.order, ctx.aux, c)

    @classmethod
    def monomial(cls, ctx, int_coeff, q_exp, aux_exp=0):
        """int_coeff * aux^aux_exp * q^q_exp as a series (0 if beyond order)."""
        if aux_exp != 0 and ctx.aux == "none":
            raise AuxTagError("aux exponent with aux tag 'none'")
        if aux_exp < 0 and ctx.aux in ("w", "x"):
            raise AuxTagError("negative aux exponent for tag %r" % (ctx.aux,))
        c = [0] * ctx.order
        if 0 <= q_exp < ctx.order:
            c[q_exp] = int_coeff if aux_exp == 0 else {aux_exp: int_coeff}
        return cls(ctx.grain, ctx.order, ctx.aux, c)

    @classmethod
    def from_mono(cls, ctx, m):
        return cls.monomial(ctx, m.int_coeff, m.q_exp, m.aux_exp)

    def ctx(self):
        return Ctx(self.order, self.grain, self.aux)

    # -- basic queries

    def coefficient(self, e):
        if 0 <= e < self.order:
            return c_canon(self.coeffs[e])
        return 0

    def is_zero(self):
        return all(c_is_zero(c) for c in self.coeffs)

    def aux_degree(self):
        d = 0
        for c in self.coeffs:
            if isinstance(c, dict):
                for e, v in c.items():
                    if v and e > d:
                        d = e
        return d

    # -- arithmetic

    def _check(self, other):
        if self.grain != other.grain:
            raise GrainError("grain mismatch %d vs %d" % (self.grain, other.grain))
        return _merge_aux(self.aux, other.aux)

    def __add__(self, other):
        aux = self._check(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return QSeries(self.grain, n, aux, [c_add(a[i], b[i]) for i in range(n)])

    def __sub__(self, other):
        aux = self._check(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return QSeries(self.grain, n, aux, [c_add(a[i], c_neg(b[i])) for i in range(n)])

    def __neg__(self):
        return QSeries(self.grain, self.order, self.aux, [c_neg(c) for c in self.coeffs])

    def __mul__(self, other):
        aux = self._check(other)
        n = min(self.order, other.order)
        out = [0] * n
        a, b = self.coeffs, other.coeffs
        for i in range(n):
            ai = a[i]
            if c_is_zero(ai):
                continue
            for j in range(n - i):
                bj = b[j]
                if c_is_zero(bj):
                    continue
                out[i + j] = c_add(out[i + j], c_mul(ai, bj))
        return QSeries(self.grain, n, aux, out)

    def scale(self, int_coeff, q_exp=0, aux_exp=0):
        """Multiply by int_coeff * aux^aux_exp * q^q_exp (monomial)."""
        if aux_exp != 0 and self.aux == "none":
            raise AuxTagError("aux exponent with aux tag 'none'")
        n = self.order
        out = [0] * n
        m = int_coeff if aux_exp == 0 else {aux_exp: int_coeff}
        for i in range(max(0, -q_exp), n):
            j = i + q_exp
            if 0 <= j < n and not c_is_zero(self.coeffs[i]):
                out[j] = c_mul(self.coeffs[i], m)
        return QSeries(self.grain, n, self.aux, out)

    def shift(self, q_exp):
        return self.scale(1, q_exp)

    def invert(self):
        """Inverse of a series with constant term 1, via the standard recurrence."""
        if c_canon(self.coeffs[0]) != 1:
            raise NotAUnit("constant term is not 1")
        n = self.order
        s = self.coeffs
        t = [0] * n
        t[0] = 1
        for e in range(1, n):
            acc = 0
            for j in range(1, e + 1):
                sj = s[j]
                if not c_is_zero(sj):
                    acc = c_add(acc, c_mul(sj, t[e - j]))
            t[e] = c_neg(acc)
        return QSeries(self.grain, n, self.aux, t)

    def pow(self, n):
        if n < 0:
            return self.invert().pow(-n)
        r = QSeries.one(self.ctx())
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b if n > 1 else b
            n >>= 1
        return r

    def truncate(self, order):
        if order >= self.order:
            return self
        return QSeries(self.grain, order, self.aux, self.coeffs[:order])

    def truncate_aux(self, cap):
        """Drop all terms with aux exponent > cap."""
        out = []
        for c in self.coeffs:
            if isinstance(c, dict):
                out.append(_c_norm({e: v for e, v in c.items() if e <= cap}))
            else:
                out.append(c)
        return QSeries(self.grain, self.order, self.aux, out)

    # -- comparison

    def first_mismatch(self, other):
        """Smallest scaled exponent where the two series differ, or None."""
        if self.grain != other.grain:
            raise GrainError("grain mismatch in comparison")
        n = min(self.order, other.order)
        for e in range(n):
            if c_canon(self.coeffs[e]) != c_canon(other.coeffs[e]):
                return e
        return None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.first_mismatch(other) is None

    def __hash__(self):
        return id(self)

    def __repr__(self):
        terms = []
        for e, c in enumerate(self.coeffs):
            c = c_canon(c)
            if c == 0:
                continue
            terms.append("(%r)*q^%s" % (c, e if self.grain == 1 else "%d/2" % e))
            if len(terms) >= 8:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return "QSeries<g=%d,E=%d,%s>[%s]" % (self.grain, self.order, self.aux, body)


# ---------------------------------------------------------------------------
# Pochhammer symbols


def _step_mono(step):
    """Normalize a step given as a scaled q exponent or a full monomial."""
    if isinstance(step, MonomialSpec):
        return step
    return MonomialSpec(1, step)


def poch_finite(z, n, ctx, step=None):
    """(z; Q)_n = prod_{i=0}^{n-1} (1 - z Q^i); Q defaults to q (scaled)."""
    if n < 0:
        raise BadParams("poch_finite needs n >= 0")
    Q = _step_mono(ctx.grain if step is None else step)
    r = QSeries.one(ctx)
    for i in range(n):
        f = QSeries.one(ctx) - QSeries.monomial(
            ctx, z.int_coeff * Q.int_coeff ** i, z.q_exp + i * Q.q_exp,
            z.aux_exp + i * Q.aux_exp)
        r = r * f
    return r


def poch_infinite(z, ctx, step=None):
    """(z; Q)_inf truncated at the working order; Q must carry q^(>0)."""
    Q = _step_mono(ctx.grain if step is None else step)
    if Q.q_exp <= 0:
        raise DivergentProduct("step must have positive q-exponent")
    if z.q_exp == 0 and z.aux_exp == 0:
        raise DivergentProduct("constant argument with no aux part")
    r = QSeries.one(ctx)
    i = 0
    while z.q_exp + i * Q.q_exp < ctx.order:
        f = QSeries.one(ctx) - QSeries.monomial(
            ctx, z.int_coeff * Q.int_coeff ** i, z.q_exp + i * Q.q_exp,
            z.aux_exp + i * Q.aux_exp)
        r = r * f
        i += 1
    return r


@lru_cache(maxsize=None)
def qpoch(ctx, n):
    """(q; q)_n at the given context."""
    return poch_finite(MonomialSpec(1, ctx.grain), n, ctx)


@lru_cache(maxsize=None)
def inv_qpoch(ctx, n):
    """1 / (q; q)_n."""
    return qpoch(ctx, n).invert()


@lru_cache(maxsize=None)
def q_infinity(ctx):
    """(q; q)_inf."""
    return poch_infinite(MonomialSpec(1, ctx.grain), ctx)


@lru_cache(maxsize=None)
def inv_q_infinity(ctx):
    return q_infinity(ctx).invert()


# ---------------------------------------------------------------------------
# factors depending on the w specialization mode

W_MODES = ("zero", "one", "half", "formal")


def _w_factor(i, w_mode, ctx):
    """1 + w q^i with w specialized per mode (i in plain q units)."""
    g = ctx.grain
    one = QSeries.one(ctx)
    if w_mode == "zero":
        return one
    if w_mode == "one":
        return one + QSeries.monomial(ctx, 1, i * g)
    if w_mode == "half":
        if g != 2:
            raise GrainError("w = q^(1/2) requires grain 2")
        return one + QSeries.monomial(ctx, 1, i * g + 1)
    if w_mode == "formal":
        if ctx.aux != "w":
            raise AuxTagError("formal w mode requires aux tag 'w'")
        return one + QSeries.monomial(ctx, 1, i * g, aux_exp=1)
    raise BadParams("unknown w mode %r" % (w_mode,))


def neg_w_poch(n, w_mode, ctx, start=0):
    """prod_{i=start}^{start+n-1} (1 + w q^i): (-w)_n for start=0, (-wq)_n for start=1."""
    r = QSeries.one(ctx)
    for i in range(start, start + n):
        r = r * _w_factor(i, w_mode, ctx)
    return r


def neg_w_poch_inf(w_mode, ctx, start=1):
    """prod_{i>=start} (1 + w q^i), truncated (start must be >= 1)."""
    if start < 1:
        raise DivergentProduct("infinite (-w q^i) product needs start >= 1")
    if w_mode == "zero":
        return QSeries.one(ctx)
    g = ctx.grain
    r = QSeries.one(ctx)
    i = start
    while i * g < ctx.order:
        r = r * _w_factor(i, w_mode, ctx)
        i += 1
    return r


def w_shifted_poch(n, ctx, w_mode="formal"):
    """w^n (-q/w; q)_n = prod_{i=1}^{n} (q^i + w); polynomial in w (no Laurent part)."""
    g = ctx.grain
    r = QSeries.one(ctx)
    for i in range(1, n + 1):
        if w_mode == "zero":
            f = QSeries.monomial(ctx, 1, i * g)
        elif w_mode == "one":
            f = QSeries.monomial(ctx, 1, i * g) + QSeries.one(ctx)
        elif w_mode == "half":
            if g != 2:
                raise GrainError("w = q^(1/2) requires grain 2")
            f = QSeries.monomial(ctx, 1, i * g) + QSeries.monomial(ctx, 1, 1)
        elif w_mode == "formal":
            f = QSeries.monomial(ctx, 1, i * g) + QSeries.monomial(ctx, 1, 0, aux_exp=1)
        else:
            raise BadParams("unknown w mode %r" % (w_mode,))
        r = r * f
    return r


# ---------------------------------------------------------------------------
# theta and false theta building blocks


def sgn_star(n):
    """+1 for n >= 0, -1 for n < 0."""
    return 1 if n >= 0 else -1


def _mono_power(ctx, m, e):
    """m^e as a monomial series (e >= 0)."""
    return QSeries.monomial(ctx, m.int_coeff ** e, m.q_exp * e, m.aux_exp * e)


def jacobi_triple_product(a, b, ctx):
    """Both sides of the triple product identity for monomials a, b.

    Returns (sum side, product side): the bilateral sum of
    a^(n(n+1)/2) b^(n(n-1)/2) and (-a; ab)_inf (-b; ab)_inf (ab; ab)_inf.
    """
    if a.q_exp + b.q_exp <= 0:
        raise DivergentSum("a*b must have positive q-exponent")
    E = ctx.order
    total = QSeries.zero(ctx)
    n = 0
    while True:
        hit = False
        for m in {n, -n}:
            ea = m * (m + 1) // 2
            eb = m * (m - 1) // 2
            exp = a.q_exp * ea + b.q_exp * eb
            if exp < E:
                hit = True
                total = total + _mono_power(ctx, a, ea) * _mono_power(ctx, b, eb)
        if not hit and n > 0:
            break
        n += 1
    ab = MonomialSpec(a.int_coeff * b.int_coeff, a.q_exp + b.q_exp,
                      a.aux_exp + b.aux_exp)
    prod = (poch_infinite(MonomialSpec(-a.int_coeff, a.q_exp, a.aux_exp), ctx, step=ab)
            * poch_infinite(MonomialSpec(-b.int_coeff, b.q_exp, b.aux_exp), ctx, step=ab)
            * poch_infinite(ab, ctx, step=ab))
    return total, prod


def triple_product(x_exp, y_exp, modulus, ctx):
    """(q^x, q^y, q^m; q^m)_inf with x + y = m (all exponents scaled)."""
    if x_exp + y_exp != modulus:
        raise BadParams("exponents must sum to the modulus")
    _, prod = jacobi_triple_product(MonomialSpec(-1, x_exp), MonomialSpec(-1, y_exp), ctx)
    return prod


def false_theta_psi(a, b, ctx):
    """Rogers' false theta: sum_{n>=0} a^(n(n+1)/2) b^(n(n-1)/2) (1 - b^(2n+1))."""
    if a.q_exp + b.q_exp <= 0:
        raise DivergentSum("a*b must have positive q-exponent")
    E = ctx.order
    total = QSeries.zero(ctx)
    n = 0
    while True:
        ea = n * (n + 1) // 2
        eb = n * (n - 1) // 2
        base = a.q_exp * ea + b.q_exp * eb
        if base >= E:
            break
        t = _mono_power(ctx, a, ea) * _mono_power(ctx, b, eb)
        total = total + t - t * _mono_power(ctx, b, 2 * n + 1)
        n += 1
    return total


def signed_theta_sum(quad, lin, ctx):
    """sum_{n in Z} sgn*(n) q^(quad n^2 + lin n), exponents scaled."""
    if quad <= 0:
        raise DivergentSum("quadratic coefficient must be positive")
    E = ctx.order
    total = QSeries.zero(ctx)
    n = 0
    while True:
        hit = False
        for m in {n, -n}:
            exp = quad * m * m + lin * m
            if 0 <= exp < E:
                hit = True
                total = total + QSeries.monomial(ctx, sgn_star(m), exp)
        if not hit and n > 0:
            break
        n += 1
    return total


# ---------------------------------------------------------------------------
# aux specialization


def aux_specialize(s, value):
    """Substitute the aux symbol: value in {'zero','one','half','qshift'}.

    'half' substitutes aux -> q^(1/2) (grain 2 only); 'qshift' maps
    aux^d -> aux^d q^(d*grain), i.e. x -> qx.
    """
    if s.aux not in ("w", "x"):
        raise AuxTagError("specialization needs aux tag w or x")
    n = s.order
    out = [0] * n
    keep_aux = value == "qshift"
    for i, c in enumerate(s.coeffs):
        if not isinstance(c, dict):
            out[i] = c_add(out[i], c)
            continue
        for d, v in c.items():
            if value == "zero":
                if d == 0:
                    out[i] = c_add(out[i], v)
            elif value == "one":
                out[i] = c_add(out[i], v)
            elif value == "half":
                if s.grain != 2:
                    raise GrainError("aux -> q^(1/2) requires grain 2")
                j = i + d
                if j < n:
                    out[j] = c_add(out[j], v)
            elif value == "qshift":
                j = i + d * s.grain
                if j < n:
                    out[j] = c_add(out[j], {d: v} if d else v)
            else:
                raise BadParams("unknown specialization %r" % (value,))
    aux = s.aux if keep_aux else "none"
    return QSeries(s.grain, n, aux, out)


def zeta_coefficient(s, j):
    """The q-series coefficient of zeta^j (aux tag of the result is 'none')."""
    if s.aux != "zeta":
        raise AuxTagError("zeta_coefficient needs aux tag 'zeta'")
    out = [0] * s.order
    for i, c in enumerate(s.coeffs):
        if isinstance(c, dict):
            out[i] = c.get(j, 0)
        elif j == 0:
            out[i] = c
    return QSeries(s.grain, s.order, "none", out)
