"""Elliptic curves over the base field and its quadratic extensions.

General Weierstrass models (all five a-invariants), exact group law over any
coefficient domain whose elements support field operators, reduction mod
primes with naive or baby-step/giant-step point counting, and the L-series
coefficient table with its Euler-product recursion.
"""

from __future__ import annotations

import math
import os
import random
import struct
from fractions import Fraction

from .numfield import NFElt
from .primes import GFp, GFq
from .ideals import Ideal, prime_ideals_up_to, ideals_up_to


class PointNotOnCurve(ValueError):
    pass


class AdditiveReduction(ValueError):
    pass


class CurveModel:
    """Weierstrass model [a1,a2,a3,a4,a6] over a field-like coefficient domain."""

    def __init__(self, field, ainvs, conductor_factorization=None):
        self.field = field
        a1, a2, a3, a4, a6 = [field.coerce(a) for a in ainvs]
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.conductor_factorization = conductor_factorization or []
        if self.discriminant().is_zero():
            raise ValueError("singular model")

    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    # standard b-, c-invariants
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs()
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self):
        c4, _ = self.c_invariants()
        return c4 ** 3 / self.discriminant()

    def __repr__(self):
        return f"CurveModel[{self.a1}, {self.a2}, {self.a3}, {self.a4}, {self.a6}]"

    # -- points ------------------------------------------------------------------

    def point(self, x, y):
        P = CurvePoint(self, self.field.coerce(x), self.field.coerce(y))
        if not self.contains(P):
            raise PointNotOnCurve(f"({x}, {y})")
        return P

    def identity(self):
        return CurvePoint(self, None, None)

    def contains(self, P):
        if P.is_identity():
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return (lhs - rhs).is_zero()

    def change_coefficients(self, new_field, embed):
        """Base change via an embedding map applied to the a-invariants."""
        return CurveModel(new_field, [embed(a) for a in self.ainvs()])


class CurvePoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    def is_identity(self):
        return self.x is None

    def __repr__(self):
        if self.is_identity():
            return "O"
        return f"({self.x} : {self.y})"

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_identity() or other.is_identity():
            return self.is_identity() and other.is_identity()
        return (self.x - other.x).is_zero() and (self.y - other.y).is_zero()

    def __neg__(self):
        if self.is_identity():
            return self
        E = self.curve
        return CurvePoint(E, self.x, -self.y - E.a1 * self.x - E.a3)

    def __add__(self, other):
        E = self.curve
        if self.is_identity():
            return other
        if other.is_identity():
            return self
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        a1, a2, a3, a4, a6 = E.ainvs()
        if (x1 - x2).is_zero():
            if (y1 + y2 + a1 * x2 + a3).is_zero():
                return E.identity()
            # doubling
            num = x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1
            den = y1 * 2 + a1 * x1 + a3
            lam = num / den
            nu = (-(x1 * x1 * x1) + a4 * x1 + a6 * 2 - a3 * y1) / den
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(E, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return self.multiply(n)

    def multiply(self, n):
        n = int(n)
        if n < 0:
            return (-self).multiply(-n)
        out = self.curve.identity()
        base = self
        while n:
            if n & 1:
                out = out + base
            base = base + base
            n >>= 1
        return out


# ---------------------------------------------------------------------------
# reduction and point counting
# ---------------------------------------------------------------------------

def _reduce_coeff_mod(a: NFElt, prime, Fq):
    """Image of a field element in the residue field (denominators prime to p)."""
    p = prime.p
    out = Fq.zero()
    # Horner in the residue image of the generator
    rbar = _generator_residue(prime, Fq)
    acc = Fq.zero()
    for c in reversed(a.co):
        num = c.numerator
        den = c.denominator
        if den % p == 0:
            raise ValueError("coefficient has p in denominator")
        cval = num * pow(den, -1, p ** 4) % p  # den unit mod p
        acc = Fq.add(Fq.mul(acc, rbar), Fq(cval))
    return acc


def _generator_residue(prime, Fq):
    if isinstance(Fq, GFp):
        # linear local factor x - a
        return (-prime.gpoly[0]) % prime.p
    # Fq built on the local factor itself: residue of r is the class of x
    return Fq([0, 1])


def residue_field(prime):
    if prime.residue_degree == 1:
        return GFp(prime.p)
    return GFq(prime.p, list(prime.gpoly))


def reduce_curve(E: CurveModel, prime):
    """Reduced a-invariants over the residue field; returns (Fq, ainvs)."""
    Fq = residue_field(prime)
    ai = tuple(_reduce_coeff_mod(a, prime, Fq) for a in E.ainvs())
    return Fq, ai


def _disc_mod(Fq, ai):
    a1, a2, a3, a4, a6 = ai
    m, ad, s = Fq.mul, Fq.add, Fq.sub

    def k(n):
        return Fq(n)

    b2 = ad(m(a1, a1), m(k(4), a2))
    b4 = ad(m(a1, a3), m(k(2), a4))
    b6 = ad(m(a3, a3), m(k(4), a6))
    b8 = s(ad(ad(m(m(a1, a1), a6), m(k(4), m(a2, a6))),
             s(m(a2, m(a3, a3)), m(m(a1, a3), a4))), m(a4, a4))
    t1 = m(m(b2, b2), b8)
    t2 = m(k(8), m(b4, m(b4, b4)))
    t3 = m(k(27), m(b6, b6))
    t4 = m(k(9), m(b2, m(b4, b6)))
    return s(t4, ad(ad(t1, t2), t3))


def count_points_naive(Fq, ai):
    """#E(F_q) by looping x and solving the y-quadratic."""
    a1, a2, a3, a4, a6 = ai
    p = Fq.p
    count = 1  # infinity
    if p == 2:
        for x in Fq.elements() if not isinstance(Fq, GFp) else range(2):
            xx = x if not isinstance(Fq, GFp) else x
            b = Fq.add(Fq.mul(a1, xx), a3)
            fx = Fq.add(Fq.add(Fq.mul(Fq.mul(xx, xx), xx), Fq.mul(a2, Fq.mul(xx, xx))),
                        Fq.add(Fq.mul(a4, xx), a6))
            if Fq.is_zero(b):
                count += 1  # y -> y^2 bijective in char 2
            else:
                # y = b z: z^2 + z = fx / b^2; solvable iff absolute trace = 0
                c = Fq.mul(fx, Fq.inv(Fq.mul(b, b)))
                tr = c
                acc = c
                f = Fq.f if isinstance(Fq, GFq) else 1
                for _ in range(f - 1):
                    acc = Fq.mul(acc, acc)
                    tr = Fq.add(tr, acc)
                if Fq.is_zero(tr):
                    count += 2
        return count
    # odd characteristic: y-quadratic discriminant test
    inv4 = Fq.inv(Fq(4))
    for x in (range(p) if isinstance(Fq, GFp) else Fq.elements()):
        xx = x
        b = Fq.add(Fq.mul(a1, xx), a3)
        fx = Fq.add(Fq.add(Fq.mul(Fq.mul(xx, xx), xx), Fq.mul(a2, Fq.mul(xx, xx))),
                    Fq.add(Fq.mul(a4, xx), a6))
        D = Fq.add(Fq.mul(b, b), Fq.mul(Fq(4), fx))
        if Fq.is_zero(D):
            count += 1
        elif Fq.is_square(D):
            count += 2
    return count


# -- BSGS order counting for prime fields -------------------------------------

class _FpCurve:
    """Minimal fast arithmetic on y^2 = x^3 + A x + B over F_p (odd p > 3)."""

    def __init__(self, p, A, B):
        self.p, self.A, self.B = p, A % p, B % p

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + self.A) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        y3 = (lam * (x1 - x3) - y1) % p
        return (x3, y3)

    def neg(self, P):
        if P is None:
            return None
        return (P[0], (-P[1]) % self.p)

    def mul(self, n, P):
        out = None
        if n < 0:
            n, P = -n, self.neg(P)
        while n:
            if n & 1:
                out = self.add(out, P)
            P = self.add(P, P)
            n >>= 1
        return out

    def random_point(self, rng):
        p = self.p
        while True:
            x = rng.randrange(p)
            rhs = (x * x * x + self.A * x + self.B) % p
            if rhs == 0:
                return (x, 0)
            if pow(rhs, (p - 1) // 2, p) == 1:
                from .padic import _sqrt_mod_p
                y = _sqrt_mod_p(rhs, p)
                return (x, y)


def _short_weierstrass_mod(Fq: GFp, ai):
    """c4/c6 short model over F_p, p > 3."""
    p = Fq.p
    a1, a2, a3, a4, a6 = ai
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (a1 * a3 + 2 * a4) % p
    b6 = (a3 * a3 + 4 * a6) % p
    c4 = (b2 * b2 - 24 * b4) % p
    c6 = (-b2 ** 3 + 36 * b2 * b4 - 216 * b6) % p
    A = (-27 * c4) % p
    B = (-54 * c6) % p
    return A, B


def count_points_bsgs(Fq: GFp, ai, rng_seed=0):
    """#E(F_p) by Shanks interval BSGS with lcm-of-orders disambiguation."""
    p = Fq.p
    A, B = _short_weierstrass_mod(Fq, ai)
    C = _FpCurve(p, A, B)
    rng = random.Random(rng_seed ^ p)
    w = math.isqrt(4 * p) + 2
    lo = p + 1 - w
    hi = p + 1 + w
    L = 1
    for _ in range(40):
        P = C.random_point(rng)
        m = _bsgs_find_multiple(C, P, lo, hi)
        ordP = _exact_order(C, P, m)
        L = L * ordP // math.gcd(L, ordP)
        # candidates: multiples of L in [lo, hi]
        first = (lo + L - 1) // L * L
        cands = list(range(first, hi + 1, L))
        if len(cands) == 1:
            return cands[0]
    raise RuntimeError(f"BSGS failed to disambiguate group order at p={p}")


def _bsgs_find_multiple(C, P, lo, hi):
    """Some m in [lo, hi] with m*P = O."""
    width = hi - lo + 1
    s = math.isqrt(width) + 1
    table = {}
    Q = None  # j*P
    for j in range(s):
        key = Q if Q is None else Q[0]
        table.setdefault((None if Q is None else (Q[0], min(Q[1], C.p - Q[1]))), []).append(j)
        Q = C.add(Q, P)
    S = C.mul(s, P)
    R = C.mul(lo, P)
    for k in range((width // s) + 2):
        key = None if R is None else (R[0], min(R[1], C.p - R[1]))
        if key in table:
            for j in table[key]:
                for sign in (1, -1):
                    m = lo + k * s + sign * j
                    if lo <= m <= hi and C.mul(m, P) is None:
                        return m
                    # match may be the mirror
                    m2 = lo + k * s - sign * j
                    if lo <= m2 <= hi and C.mul(m2, P) is None:
                        return m2
        R = C.add(R, S)
    raise RuntimeError("BSGS found no annihilating multiple (should not happen)")


def _exact_order(C, P, m):
    """Order of P given an annihilating multiple m."""
    facs = {}
    mm = m
    d = 2
    while d * d <= mm:
        while mm % d == 0:
            facs[d] = facs.get(d, 0) + 1
            mm //= d
        d += 1 if d == 2 else 2
    if mm > 1:
        facs[mm] = facs.get(mm, 0) + 1
    o = m
    for q in facs:
        while o % q == 0 and C.mul(o // q, P) is None:
            o //= q
    return o


NAIVE_THRESHOLD = 4000


def reduce_and_count(E: CurveModel, prime):
    """Trace of Frobenius a_p; at declared multiplicative primes the +-1 value."""
    Fq, ai = reduce_curve(E, prime)
    disc = _disc_mod(Fq, ai)
    if Fq.is_zero(disc):
        return _multiplicative_ap(Fq, ai, prime)
    q = Fq.q
    if isinstance(Fq, GFp) and q > NAIVE_THRESHOLD and q > 3:
        n = count_points_bsgs(Fq, ai)
    else:
        n = count_points_naive(Fq, ai)
    return q + 1 - n


def _multiplicative_ap(Fq, ai, prime):
    """Split/nonsplit via tangent directions at the node; cusp -> error."""
    a1, a2, a3, a4, a6 = ai
    sing = _singular_point(Fq, ai)
    if sing is None:
        raise AdditiveReduction(f"no rational singular point found at {prime}")
    x0, y0 = sing
    # tangent cone v^2 + a1 uv - (3 x0 + a2) u^2
    cu = Fq.neg(Fq.add(Fq.mul(Fq(3), x0), a2))
    b = a1
    if Fq.p == 2:
        if Fq.is_zero(b):
            raise AdditiveReduction(f"cusp at {prime}")
        c = Fq.mul(cu, Fq.inv(Fq.mul(b, b)))
        tr = c
        acc = c
        f = Fq.f if isinstance(Fq, GFq) else 1
        for _ in range(f - 1):
            acc = Fq.mul(acc, acc)
            tr = Fq.add(tr, acc)
        return 1 if Fq.is_zero(tr) else -1
    D = Fq.sub(Fq.mul(b, b), Fq.mul(Fq(4), Fq.neg(cu)))
    # D = a1^2 + 4(3x0+a2); the quadratic z^2 + a1 z - (3x0+a2)
    D = Fq.add(Fq.mul(a1, a1), Fq.mul(Fq(4), Fq.add(Fq.mul(Fq(3), x0), a2)))
    if Fq.is_zero(D):
        raise AdditiveReduction(f"cusp at {prime}")
    return 1 if Fq.is_square(D) else -1


def _singular_point(Fq, ai):
    a1, a2, a3, a4, a6 = ai
    els = range(Fq.p) if isinstance(Fq, GFp) else list(Fq.elements())
    for x in els:
        # Fy = 2y + a1 x + a3 = 0 and curve equation and Fx = 0
        for y in els:
            fy = Fq.add(Fq.add(Fq.mul(Fq(2), y), Fq.mul(a1, x)), a3)
            if not Fq.is_zero(fy):
                continue
            lhs = Fq.add(Fq.mul(y, y), Fq.add(Fq.mul(Fq.mul(a1, x), y), Fq.mul(a3, y)))
            rhs = Fq.add(Fq.mul(Fq.mul(x, x), x),
                         Fq.add(Fq.mul(a2, Fq.mul(x, x)), Fq.add(Fq.mul(a4, x), a6)))
            if not Fq.is_zero(Fq.sub(lhs, rhs)):
                continue
            fx = Fq.sub(Fq.mul(a1, y),
                        Fq.add(Fq.mul(Fq(3), Fq.mul(x, x)),
                               Fq.add(Fq.mul(Fq(2), Fq.mul(a2, x)), a4)))
            if Fq.is_zero(fx):
                return (x, y)
    return None


# ---------------------------------------------------------------------------
# a_n table
# ---------------------------------------------------------------------------

class AnTable:
    """a_n for all ideals of norm <= bound, Euler recursion over declared
    conductor data."""

    def __init__(self, E: CurveModel, bound, cache_path=None):
        self.E = E
        self.F = E.field
        self.bound = int(bound)
        self.bad_keys = {pr.key() for pr, _ in E.conductor_factorization}
        self._ap = {}
        self._an = {}
        self.primes = prime_ideals_up_to(self.F, self.bound)
        if cache_path and os.path.exists(cache_path):
            self._load(cache_path)
        missing = [pr for pr in self.primes if pr.key() not in self._ap]
        for pr in missing:
            self._ap[pr.key()] = reduce_and_count(E, pr)
        if cache_path and missing:
            self._save(cache_path)

    def ap(self, prime):
        k = prime.key()
        if k not in self._ap:
            self._ap[k] = reduce_and_count(self.E, prime)
        return self._ap[k]

    def an(self, ideal: Ideal):
        if ideal.norm > self.bound:
            from .archdarmon import InsufficientTable
            raise InsufficientTable(f"norm {ideal.norm} > table bound {self.bound}")
        key = ideal.key()
        if key in self._an:
            return self._an[key]
        val = 1
        for pr, e in ideal.factors:
            val *= self._prime_power(pr, e)
        self._an[key] = val
        return val

    def _prime_power(self, pr, e):
        ap = self.ap(pr)
        if pr.key() in self.bad_keys:
            return ap ** e
        # a_{p^(k+1)} = a_p a_{p^k} - N(p) a_{p^(k-1)}
        prev, cur = 1, ap
        for _ in range(e - 1):
            prev, cur = cur, ap * cur - pr.norm * prev
        return cur

    # cache: one record per prime, "p f gpoly_coeffs... : ap" text lines
    # (documented in README; text keeps the layout portable and diffable)
    def _save(self, path):
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write("# localpoints an-cache v1: p f c0,c1,... ap\n")
            for pr in self.primes:
                co = ",".join(str(c) for c in pr.gpoly)
                fh.write(f"{pr.p} {pr.residue_degree} {co} {self._ap[pr.key()]}\n")

    def _load(self, path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                p_s, f_s, co_s, ap_s = line.split()
                gpoly = tuple(int(c) for c in co_s.split(","))
                self._ap[(int(p_s), gpoly)] = int(ap_s)


def an_table(E, norm_bound, cache_path=None):
    return AnTable(E, norm_bound, cache_path)
