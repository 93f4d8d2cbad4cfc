"""Mod-p polynomial factorization, Hensel lifting, finite fields F_{p^f}.

Only what the splitting of degree <= 4 fields and naive point counting need.
"""

from __future__ import annotations

import random


def sieve_primes(bound):
    """Primes <= bound (simple sieve)."""
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    p = 2
    while p * p <= bound:
        if flags[p]:
            flags[p * p:: p] = b"\x00" * len(range(p * p, bound + 1, p))
        p += 1
    return [i for i in range(2, bound + 1) if flags[i]]


# -- polynomials over F_p, coefficient lists increasing, ints mod p -----------

def _pnorm(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pnorm(out, p)


def _pdivmod(a, b, p):
    a = _pnorm(a, p)
    b = _pnorm(b, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(r):
        r = _pnorm(r, p)
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        f = r[-1] * inv % p
        q[k] = f
        for i, y in enumerate(b):
            r[i + k] = (r[i + k] - f * y) % p
        r = r[:-1]
    return _pnorm(q, p), _pnorm(r, p)


def _pgcd(a, b, p):
    a, b = _pnorm(a, p), _pnorm(b, p)
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppow_mod(a, n, mod, p):
    out = [1]
    base = _pdivmod(a, mod, p)[1]
    while n:
        if n & 1:
            out = _pdivmod(_pmul(out, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        n >>= 1
    return out


def factor_mod_p(m, p):
    """Factor a monic integer polynomial mod p.  Returns [(factor, mult)],
    factors monic with int coefficients in [0,p), increasing degree."""
    m = _pnorm(m, p)
    inv = pow(m[-1], -1, p)
    m = [c * inv % p for c in m]
    out = []
    # squarefree part handling via repeated gcd with derivative
    work = [(m, 1)]
    res = []
    while work:
        f, mult = work.pop()
        if len(f) <= 1:
            continue
        df = _pnorm([i * f[i] for i in range(1, len(f))], p)
        if not df:
            # f = g(x^p); perfect p-th power
            g = [f[i] for i in range(0, len(f), p)]
            work.append((g, mult * p))
            continue
        g = _pgcd(f, df, p)
        if len(g) > 1:
            work.append((g, mult))
            q, r = _pdivmod(f, g, p)
            assert not r
            work.append((q, mult))
            continue
        res.append((f, mult))
    # merge duplicate squarefree parts
    merged = {}
    for f, mult in res:
        merged[tuple(f)] = merged.get(tuple(f), 0) + mult
    for f, mult in merged.items():
        for g in _squarefree_factor(list(f), p):
            out.append((tuple(g), mult))
    # consolidate
    final = {}
    for g, e in out:
        final[g] = final.get(g, 0) + e
    return sorted(final.items())


def _squarefree_factor(f, p):
    """Cantor-Zassenhaus on a squarefree monic poly over F_p (deg <= 4 use)."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    # distinct degree
    out = []
    rng = random.Random(0xBEEF ^ p ^ n)
    stack = [f]
    # split by degree d parts
    rem = f
    for d in range(1, n + 1):
        if len(rem) - 1 < 2 * d:
            break
        xq = _ppow_mod([0, 1], p ** d, rem, p)
        diff = _pnorm([(xq[i] if i < len(xq) else 0) - (1 if i == 1 else 0)
                       for i in range(max(len(xq), 2))], p)
        g = _pgcd(diff, rem, p)
        if len(g) > 1:
            out.extend(_equal_degree_split(g, d, p, rng))
            rem = _pdivmod(rem, g, p)[0]
    if len(rem) > 1:
        out.append(rem)
    return out


def _equal_degree_split(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)] + [1]
        if p == 2:
            # trace map splitting
            t = a
            acc = a
            for _ in range(d - 1):
                acc = _ppow_mod(acc, 2, f, p)
                t = _pnorm([(t[i] if i < len(t) else 0) + (acc[i] if i < len(acc) else 0)
                            for i in range(max(len(t), len(acc)))], p)
            g = _pgcd(t, f, p)
        else:
            e = (p ** d - 1) // 2
            b = _ppow_mod(a, e, f, p)
            b = _pnorm([(b[i] if i < len(b) else 0) - (1 if i == 0 else 0)
                        for i in range(max(len(b), 1))], p)
            g = _pgcd(b, f, p)
        if 1 < len(g) < len(f):
            left = _equal_degree_split(g, d, p, rng)
            right = _equal_degree_split(_pdivmod(f, g, p)[0], d, p, rng)
            return left + right


def hensel_lift_factor(m, g, p, prec):
    """Lift a factor g of m mod p (g coprime to m/g) to mod p^prec."""
    from .numfield import poly_trim
    modulus = p
    g = [c % p for c in g]
    h, r = _pdivmod(m, g, p)
    if r:
        raise ValueError("g does not divide m mod p")
    # Bezout: s*g + t*h = 1 mod p
    s, t = _bezout(g, h, p)
    target = p ** prec
    G, H, S, T = g, h, s, t
    while modulus < target:
        modulus = min(modulus * modulus, target)
        G, H, S, T = _hensel_step(m, G, H, S, T, modulus)
    return [c % target for c in G]


def _bezout(g, h, p):
    # extended euclid over F_p
    r0, r1 = _pnorm(g, p), _pnorm(h, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]

    def sub(a, b):
        n = max(len(a), len(b))
        return _pnorm([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                       for i in range(n)], p)

    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, _pmul(q, s1, p))
        t0, t1 = t1, sub(t0, _pmul(q, t1, p))
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0], [x * c % p for x in t0]


def _hensel_step(m, g, h, s, t, modulus):
    """One quadratic Hensel step: m = g*h mod modulus maintained."""

    def norm(a):
        a = [c % modulus for c in a]
        while a and a[-1] == 0:
            a.pop()
        return a

    def mul(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % modulus
        return norm(out)

    def add(a, b):
        n = max(len(a), len(b))
        return norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                     for i in range(n)])

    def sub(a, b):
        n = max(len(a), len(b))
        return norm([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                     for i in range(n)])

    def divmod_(a, b):
        a, b = norm(a), norm(b)
        inv = pow(b[-1], -1, modulus)
        q = [0] * max(0, len(a) - len(b) + 1)
        r = list(a)
        while len(r) >= len(b) and any(r):
            r = norm(r)
            if len(r) < len(b):
                break
            k = len(r) - len(b)
            f = r[-1] * inv % modulus
            q[k] = f
            for i, y in enumerate(b):
                r[i + k] = (r[i + k] - f * y) % modulus
            r = r[:-1]
        return norm(q), norm(r)

    e = sub(m, mul(g, h))
    q, r = divmod_(mul(s, e), h)
    g1 = add(g, add(mul(t, e), mul(q, g)))
    h1 = add(h, r)
    # refresh bezout
    b = sub(add(mul(s, g1), mul(t, h1)), [1])
    c, d = divmod_(mul(s, b), h1)
    s1 = sub(s, d)
    t1 = sub(t, add(mul(t, b), mul(c, g1)))
    return norm(g1), norm(h1), norm(s1), norm(t1)


# -- finite fields -------------------------------------------------------------

class GFp:
    """Prime field F_p with element = int; tiny wrapper for the generic group law."""

    def __init__(self, p):
        self.p = p
        self.q = p

    def __call__(self, x):
        return x % self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def elements(self):
        return range(self.p)

    def is_square(self, a):
        a %= self.p
        if a == 0:
            return True
        if self.p == 2:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1


class GFq:
    """F_{p^f} = F_p[x]/(g), elements as tuples of ints of length f."""

    def __init__(self, p, g):
        self.p = p
        self.g = _pnorm(g, p)
        self.f = len(self.g) - 1
        self.q = p ** self.f
        # reduction of x^f
        self._red = tuple((-c) % p for c in self.g[:-1])

    def __call__(self, co):
        if isinstance(co, int):
            return (co % self.p,) + (0,) * (self.f - 1)
        co = list(co)[: self.f]
        return tuple(c % self.p for c in co) + (0,) * (self.f - len(co))

    def zero(self):
        return (0,) * self.f

    def one(self):
        return (1,) + (0,) * (self.f - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        f, p = self.f, self.p
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            c = out[k] % p
            if c:
                for i, rc in enumerate(self._red):
                    out[k - f + i] += c * rc
            out[k] = 0
        return tuple(c % p for c in out[:f])

    def inv(self, a):
        return self.pow(a, self.q - 2)

    def pow(self, a, n):
        out = self.one()
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def elements(self):
        import itertools as it
        for co in it.product(range(self.p), repeat=self.f):
            yield co

    def is_square(self, a):
        if self.is_zero(a):
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one()
