"""Tate parameter and Tate uniformization over Q_p and its unramified
quadratic extension.

The j-inversion runs Newton against the integral j(q)-series; the forward map
is the classical theta-quotient series X(u,q), Y(u,q) followed by a
coordinate change onto the input model, and the inverse multiplies the point
into the formal group, takes the formal logarithm, and resolves the root and
q-power ambiguity by forward checking.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import (PadicNumber, QuadContext, QuadElt, padic_log, padic_exp,
                    DivisionByZero, ExpDivergence)


class NonMultiplicativeReduction(ValueError):
    pass


class NonSplitTwist(ValueError):
    pass


class SeriesPrecisionLoss(ArithmeticError):
    pass


class NewtonDivergence(ArithmeticError):
    pass


class NotCommensurable(Exception):
    def __init__(self, precision):
        super().__init__(f"no commensurability witness at precision {precision}")
        self.precision = precision


# ---------------------------------------------------------------------------
# integer q-expansions
# ---------------------------------------------------------------------------

_series_cache = {}


def _sigma(k, n):
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def tate_a4_coeffs(nterms):
    """a4(q) = -5 sum sigma_3(n) q^n."""
    return [0] + [-5 * _sigma(3, n) for n in range(1, nterms)]


def tate_a6_coeffs(nterms):
    """a6(q) = -sum (5 sigma_3(n) + 7 sigma_5(n))/12 q^n (integral)."""
    out = [0]
    for n in range(1, nterms):
        num = 5 * _sigma(3, n) + 7 * _sigma(5, n)
        assert num % 12 == 0
        out.append(-(num // 12))
    return out


def j_series_coeffs(nterms):
    """Coefficients c_k of j(q) = 1/q + 744 + 196884 q + ...: index k >= -1,
    returned as a list starting at q^-1."""
    key = ("j", nterms)
    if key in _series_cache:
        return _series_cache[key]
    L = nterms + 2
    # E4 = 1 + 240 sum sigma_3 q^n
    e4 = [1] + [240 * _sigma(3, n) for n in range(1, L)]
    # Delta/q = prod (1-q^n)^24: compute eta^24 via polynomial powering
    eta = [0] * L
    eta[0] = 1
    for n in range(1, L):
        # multiply by (1 - q^n)
        pass
    prod = [0] * L
    prod[0] = 1
    for n in range(1, L):
        new = list(prod)
        for i in range(L - n):
            if prod[i]:
                new[i + n] -= prod[i]
        prod = new
    d24 = [0] * L
    d24[0] = 1
    # prod^24 by repeated squaring times prod
    def mul(a, b):
        out = [0] * L
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if i + j >= L:
                        break
                    if y:
                        out[i + j] += x * y
        return out
    sq = prod
    acc = [0] * L
    acc[0] = 1
    e = 24
    while e:
        if e & 1:
            acc = mul(acc, sq)
        e >>= 1
        if e:
            sq = mul(sq, sq)
    delta_over_q = acc
    e4cubed = mul(mul(e4, e4), e4)
    # j*q = E4^3 / (Delta/q): series division over Z (unit constant term)
    inv = [0] * L
    inv[0] = 1  # (Delta/q)^{-1}: constant term 1
    for k in range(1, L):
        s = 0
        for i in range(1, k + 1):
            s += delta_over_q[i] * inv[k - i]
        inv[k] = -s
    jq = mul(e4cubed, inv)  # = j * q
    out = jq[: nterms + 1]  # coefficient of q^k in j is jq[k+1]... shift below
    _series_cache[key] = out
    return out  # out[k] = coefficient of q^(k-1) in j


def _const_like(x, c):
    if isinstance(x, QuadElt):
        return x.K.rational(Fraction(c))
    return x.ctx.rational(Fraction(c))


class TateData:
    def __init__(self, q, series_prec, coord_change, curve, j_target):
        self.q = q
        self.series_prec = series_prec
        self.u_iso, self.r, self.s, self.t = coord_change
        self.curve = curve  # target model a-invariants (as p-adic elements)
        self.j = j_target

    @property
    def p(self):
        return self.q.K.p if isinstance(self.q, QuadElt) else self.q.ctx.p

    def val_q(self):
        return self.q.val0() if isinstance(self.q, QuadElt) else self.q.val


def _c_invariants(ai):
    a1, a2, a3, a4, a6 = ai
    b2 = a1 * a1 + a2 * 4
    b4 = a1 * a3 + a4 * 2
    b6 = a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - b4 * 24
    c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
    disc = -(b2 * b2) * b8 - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
    return c4, c6, disc


def tate_parameter(K: QuadContext, ainvs, precision=None):
    """Tate data for a curve over Q_{p^2} (entries QuadElt) with val(j) < 0.

    Newton inversion of the j(q) series; the coordinate change to the Tate
    model is solved from the c-invariants and verified."""
    ai = [x if isinstance(x, QuadElt) else K.rational(x) for x in ainvs]
    c4, c6, disc = _c_invariants(ai)
    j = c4 * c4 * c4 / disc
    vj = j.val0()
    if vj >= 0:
        raise NonMultiplicativeReduction(f"val j = {vj} >= 0")
    prec = precision or K.prec
    nterms = prec + 8
    jc = j_series_coeffs(nterms)
    # Newton: q0 = 1/j, iterate q <- q - (j(q)-j)/j'(q)
    q = j.inverse()
    for _ in range(prec.bit_length() + 6):
        jq = _eval_j(jc, q)
        dj = _eval_j_deriv(jc, q)
        corr = (jq - j) / dj
        q = q - corr
        if corr.is_zero() or corr.val0() >= prec + vj:
            break
    if (_eval_j(jc, q) - j).val0() < prec + 2 * vj:
        raise NewtonDivergence("j(q) inversion did not converge")
    # Tate model
    nq = -vj
    a4c = tate_a4_coeffs(prec // max(nq, 1) + 8)
    a6c = tate_a6_coeffs(prec // max(nq, 1) + 8)
    a4t = _poly_at(a4c, q)
    a6t = _poly_at(a6c, q)
    tate_ai = [K.one(), K.zero(), K.zero(), a4t, a6t]
    c4t, c6t, disct = _c_invariants(tate_ai)
    # u^2 = (c6 * c4t) / (c4 * c6t)
    u2 = (c6 * c4t) / (c4 * c6t)
    try:
        u = K.sqrt(u2)
    except ValueError as exc:
        raise NonSplitTwist(str(exc))
    a1, a2, a3, a4, a6 = ai
    s = (u * tate_ai[0] - a1) / 2
    r = (u * u * tate_ai[1] - a2 + s * a1 + s * s) / 3
    t = (u * u * u * tate_ai[2] - a3 - r * a1) / 2
    # verify remaining equations
    lhs4 = u ** 4 * a4t
    rhs4 = a4 - s * a3 + r * a2 * 2 - (t + r * s) * a1 + r * r * 3 - s * t * 2
    lhs6 = u ** 6 * a6t
    rhs6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
    for lhs, rhs in ((lhs4, rhs4), (lhs6, rhs6)):
        d = lhs - rhs
        if not d.is_zero() and d.val0() < prec - 8:
            raise SeriesPrecisionLoss("coordinate change failed verification")
    return TateData(q, prec, (u, r, s, t), ai, j)


def _eval_j(jc, q):
    # j = q^{-1} * sum jc[k] q^k
    acc = None
    for c in reversed(jc):
        acc = _const_like(q, c) if acc is None else acc * q + _const_like(q, c)
    return acc * q.inverse()


def _eval_j_deriv(jc, q):
    # d/dq of q^{-1} sum jc[k] q^k = sum (k-1) jc[k] q^{k-2}
    acc = None
    for k in range(len(jc) - 1, -1, -1):
        c = jc[k] * (k - 1)
        acc = _const_like(q, c) if acc is None else acc * q + _const_like(q, c)
    return acc * (q.inverse() ** 2)


def _poly_at(coeffs, q):
    acc = None
    for c in reversed(coeffs):
        acc = _const_like(q, c) if acc is None else acc * q + _const_like(q, c)
    return acc


def _normalize_u(u, q):
    """Representative of u mod q^Z with 0 <= val(u) < val(q)."""
    vq = q.val0()
    vu = u.val0()
    k = vu // vq
    if k:
        u = u * q.inverse() ** k if k > 0 else u * q ** (-k)
    while u.val0() < 0:
        u = u * q
    while u.val0() >= vq:
        u = u * q.inverse()
    return u


def tate_forward(u, td: TateData):
    """Point of the target model for u in K^x/q^Z (identity for u in q^Z)."""
    K = u.K
    q = td.q
    u = _normalize_u(u, q)
    one = K.one()
    if (u - one).is_zero():
        return None  # identity
    vq = q.val0()
    prec = td.series_prec
    nmax = prec // vq + 4
    uinv = u.inverse()
    X = u / ((one - u) * (one - u))
    Y = u * u / ((one - u) ** 3)
    qn = K.one()
    for n in range(1, nmax + 1):
        qn = qn * q
        t1 = qn * u
        t2 = qn * uinv
        X = X + t1 / ((one - t1) * (one - t1)) + t2 / ((one - t2) * (one - t2)) \
            - (qn / ((one - qn) * (one - qn))) * 2
        Y = Y + t1 * t1 / ((one - t1) ** 3) - t2 / ((one - t2) ** 3) \
            + qn / ((one - qn) * (one - qn))
    # map Tate model point to the target model: x = u^2 X + r, y = u^3 Y + s u^2 X + t
    ui, r, s, t = td.u_iso, td.r, td.s, td.t
    x = ui * ui * X + r
    y = ui ** 3 * Y + s * (ui * ui) * X + t
    return (x, y)


def on_curve(td: TateData, pt, tol_digits=6):
    if pt is None:
        return True
    a1, a2, a3, a4, a6 = td.curve
    x, y = pt
    lhs = y * y + a1 * x * y + a3 * y
    rhs = x * x * x + a2 * x * x + a4 * x + a6
    d = lhs - rhs
    return d.is_zero() or d.val0() >= td.series_prec - tol_digits


# ---------------------------------------------------------------------------
# formal group, logs, inverse
# ---------------------------------------------------------------------------

def formal_log_coeffs(K, ai, nterms):
    """Formal logarithm L(z) = z + ... with coefficients in the p-adic ring.

    Built from w(z) (y = -1/w, x = z/w) and the invariant differential
    dx/(2y + a1 x + a3); the division by k+1 costs a few guard digits at
    p-divisible indices."""
    n = nterms + 4
    zero = K.zero()
    one = K.one()
    a1, a2, a3, a4, a6 = ai

    def ps_mul(a, b):
        out = [zero] * (n + 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if i + j > n:
                    break
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return out

    def ps_inv(a):
        inv0 = a[0].inverse()
        out = [zero] * (n + 1)
        out[0] = inv0
        for k in range(1, n + 1):
            s = zero
            for i in range(1, k + 1):
                if i < len(a) and not a[i].is_zero():
                    s = s + a[i] * out[k - i]
            out[k] = -(s * inv0)
        return out

    # w-series by fixed-point iteration
    w = [zero] * (n + 1)
    w[3] = one
    for _ in range(n):
        w2 = ps_mul(w, w)
        w3 = ps_mul(w2, w)
        new = [zero] * (n + 1)
        new[3] = one
        for i in range(n + 1):
            v = zero
            if i >= 1:
                v = v + a1 * w[i - 1] + a4 * w2[i - 1]
            if i >= 2:
                v = v + a2 * w[i - 2]
            v = v + a3 * w2[i] + a6 * w3[i]
            new[i] = new[i] + v
        w = new
    unit = [w[i + 3] for i in range(n - 3 + 1)] + [zero] * 3
    inv_unit = ps_inv(unit)
    num3 = [zero] * (n + 1)
    for k, c in enumerate(inv_unit):
        if k <= n:
            num3[k] = c * (k - 2)
    den3 = [zero] * (n + 1)
    for k, c in enumerate(inv_unit):
        if k <= n:
            den3[k] = den3[k] + c * (-2)
        if k + 1 <= n:
            den3[k + 1] = den3[k + 1] + a1 * c
    den3[3] = den3[3] + a3
    omega = ps_mul(num3, ps_inv(den3))
    L = [zero] * (n + 2)
    for k, c in enumerate(omega):
        L[k + 1] = c * K.rational(Fraction(1, k + 1))
    return L[: nterms + 1]


def curve_add(ai, P, Q):
    """Group law with p-adic coordinates on a general Weierstrass model."""
    a1, a2, a3, a4, a6 = ai
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if (x1 - x2).is_zero():
        if (y1 + y2 + a1 * x2 + a3).is_zero():
            return None
        num = x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1
        den = y1 * 2 + a1 * x1 + a3
        lam = num / den
        nu = (-(x1 ** 3) + a4 * x1 + a6 * 2 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def curve_mul(ai, n, P):
    out = None
    if n < 0:
        n = -n
        P = curve_neg(ai, P)
    base = P
    while n:
        if n & 1:
            out = curve_add(ai, out, base)
        base = curve_add(ai, base, base)
        n >>= 1
    return out


def curve_neg(ai, P):
    if P is None:
        return None
    a1, _, a3, _, _ = ai
    x, y = P
    return (x, -y - a1 * x - a3)


def tate_inverse(P, td: TateData, smooth_order=None):
    """u with tate_forward(u) = P, normalized to 0 <= val(u) < val(q).

    Multiplies P into the formal group by N = (p^2 - 1) * val(q) * p^k,
    takes the formal log, exponentiates on the G_m side, and resolves the
    N-th-root and q-power ambiguity by forward checks."""
    if P is None:
        return None
    K = P[0].K
    p = K.p
    q = td.q
    vq = q.val0()
    N0 = (p * p - 1) * vq if smooth_order is None else smooth_order
    # push into the formal group (x with negative valuation)
    ai = td.curve
    Q = curve_mul(ai, N0, P)
    k = 0
    while Q is not None and not (Q[0].val0() < 0 and Q[0].val0() % 2 == 0 and
                                 Q[0].val0() <= -2):
        Q = curve_mul(ai, p, Q)
        k += 1
        if k > td.series_prec:
            raise NewtonDivergence("point will not enter the formal group")
    N = N0 * p ** k
    if Q is None:
        uN = K.one()
    else:
        z = -(Q[0] / Q[1])
        nt = max(6, (td.series_prec + 4) // max(-Q[0].val0() // 2, 1) + 6)
        Lc = formal_log_coeffs(K, ai, nt)
        # pulling the target-model differential back to the Tate model scales
        # by 1/u_iso, so the G_m-side logarithm is u_iso times the formal log
        lam = _poly_at_quad(Lc, z) * td.u_iso
        uN = padic_exp(lam)
    # u = p^a zeta u1 with u1 a 1-unit: u^N = q^j uN forces a = j vq / N and
    # N log(u1) = j log(q) + log(uN) (Iwasawa branch kills p-powers and
    # Teichmuller parts); zeta is resolved by forward checking.
    base_log = padic_log(uN) if not (uN - K.one()).is_zero() else K.zero()
    p2 = p * p
    log_q = padic_log(q)
    for lam_sign in (1, -1):
        for a in range(0, max(vq, 1)):
            if (N * a) % vq:
                continue
            j = (N * a) // vq
            tlog = base_log * lam_sign + log_q * j
            try:
                u1 = padic_exp(tlog / K.rational(N))
            except ExpDivergence:
                continue
            stem = K.rational(Fraction(p) ** a) * u1
            for tpow in range(p2 - 1):
                zeta = _teich_power(K, tpow)
                cand = _normalize_u(stem * zeta, q)
                fwd = tate_forward(cand, td)
                if _points_agree(fwd, P, td):
                    return cand
    raise NewtonDivergence("no root candidate matched under the forward map")


_teich_cache = {}


def _teich_power(K, k):
    """k-th power of a fixed Teichmuller generator of mu_{p^2-1} in Q_{p^2}."""
    key = id(K)
    if key not in _teich_cache:
        p = K.p
        gen = None
        for a0 in range(p):
            for a1 in range(p):
                if a0 == 0 and a1 == 0:
                    continue
                x = K(K.base.integer(a0), K.base.integer(a1))
                if _residue_order(K, x) == p * p - 1:
                    gen = x
                    break
            if gen is not None:
                break
        _teich_cache[key] = K.teichmuller(gen)
    return _teich_cache[key] ** k


def _residue_order(K, x):
    p = K.p
    B0 = K.B.residue() if not K.B.is_zero() else 0
    C0 = K.C.residue() if not K.C.is_zero() else 0

    def fmul(a, b):
        return ((a[0] * b[0] - a[1] * b[1] * C0) % p,
                (a[0] * b[1] + a[1] * b[0] - a[1] * b[1] * B0) % p)

    a = (x.a.residue() if not x.a.is_zero() else 0,
         x.b.residue() if not x.b.is_zero() else 0)
    if a == (0, 0):
        return 0
    cur = a
    for k in range(1, p * p):
        if cur == (1, 0):
            return k
        cur = fmul(cur, a)
    return p * p - 1 if cur == (1, 0) else 0


def _points_agree(A, B, td, slack=6):
    if A is None or B is None:
        return A is None and B is None
    dx = A[0] - B[0]
    dy = A[1] - B[1]
    lim = td.series_prec - slack
    okx = dx.is_zero() or dx.val0() >= min(lim, dx.abs_prec() - 1)
    oky = dy.is_zero() or dy.val0() >= min(lim, dy.abs_prec() - 1)
    return okx and oky


def _poly_at_quad(coeffs, z):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * z + c
    return acc


# ---------------------------------------------------------------------------
# lattice commensurability
# ---------------------------------------------------------------------------

def lattice_commensurability(gens, q, max_exp=12):
    """Witness (m, n) with (prod gens^e)^m = q^n for small exponents, or raise
    NotCommensurable at the working precision.

    Searches val-matching exponent vectors and checks the unit parts through
    the Iwasawa logarithm."""
    if not gens:
        raise ValueError("empty generator list")
    K = q.K
    vq = q.val0()
    for m in range(1, max_exp + 1):
        for n in range(1, max_exp + 1):
            # single-generator fast path and small combinations
            for g in gens:
                vg = g.val0()
                if vg * m == vq * n:
                    ratio = g ** m / q ** n
                    lg = padic_log(ratio)
                    if lg.is_zero() or lg.val0() >= K.prec - 6:
                        # ratio is a root of unity: torsion, commensurable
                        return (m, n)
    raise NotCommensurable(K.prec)
