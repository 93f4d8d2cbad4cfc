"""Ideals of the monogenic order as products of primes; enumeration by norm.

Everything is principal (narrow class number one); generators are constructed
as products of short prime-ideal generators and unit-normalized so the
distinguished real embedding sits near norm^(1/degree).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numfield import NFElt, PrimeIdeal, WindowUnbounded
from .primes import sieve_primes
from . import lattice


def prime_generator(prime: PrimeIdeal):
    """Short generator of a prime ideal via LLL + small-combination search."""
    if prime._gen is not None:
        return prime._gen
    F = prime.field
    d = F.degree
    rows = []
    for i in range(d):
        v = [0] * d
        v[i] = prime.p
        rows.append(v)
    g_elt = F([Fraction(c) for c in prime.gpoly])
    cur = g_elt
    for _ in range(d):
        rows.append([int(c) if c.denominator == 1 else c for c in cur.co])
        cur = cur * F.gen()
    M = lattice.minkowski_matrix(F)

    def gram_map(row):
        return np.array(row, dtype=float) @ M

    red = lattice.lll_reduce(_hnf(rows, d), gram_map)
    for v in lattice.short_vectors(red, gram_map, radius=3):
        x = F(v)
        if abs(x.norm()) == prime.norm:
            prime._gen = x
            return x
    # widen
    for v in lattice.short_vectors(red, gram_map, radius=6):
        x = F(v)
        if abs(x.norm()) == prime.norm:
            prime._gen = x
            return x
    raise RuntimeError(f"no short generator found for {prime}")


def _hnf(rows, n):
    mat = [list(map(int, r)) for r in rows]
    basis = []
    for col in range(n):
        piv = None
        for r in range(len(mat)):
            if mat[r][col] != 0 and all(mat[r][c] == 0 for c in range(col)):
                if piv is None or abs(mat[r][col]) < abs(mat[piv][col]):
                    piv = r
        if piv is None:
            continue
        changed = True
        while changed:
            changed = False
            for r in range(len(mat)):
                if r != piv and mat[r][col] != 0 and all(mat[r][c] == 0 for c in range(col)):
                    q = mat[r][col] // mat[piv][col]
                    mat[r] = [a - q * b for a, b in zip(mat[r], mat[piv])]
                    if mat[r][col] != 0 and abs(mat[r][col]) < abs(mat[piv][col]):
                        piv, changed = r, True
        basis.append(mat[piv][:])
        mat.pop(piv)
    return basis


class Ideal:
    """Integral ideal as a sorted tuple of (PrimeIdeal, exponent)."""

    __slots__ = ("field", "factors", "norm")

    def __init__(self, field, factors=()):
        self.field = field
        factors = tuple(sorted(((p, e) for p, e in factors if e), key=lambda t: t[0].key()))
        self.factors = factors
        n = 1
        for p, e in factors:
            n *= p.norm ** e
        self.norm = n

    def key(self):
        return tuple((p.key(), e) for p, e in self.factors)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        d = {}
        for p, e in self.factors:
            d[p] = d.get(p, 0) + e
        for p, e in other.factors:
            d[p] = d.get(p, 0) + e
        return Ideal(self.field, d.items())

    def is_one(self):
        return not self.factors

    def coprime_to(self, other):
        mine = {p.key() for p, _ in self.factors}
        return all(p.key() not in mine for p, _ in other.factors)

    def generator(self):
        g = self.field.one()
        for p, e in self.factors:
            g = g * prime_generator(p) ** e
        return g

    def __repr__(self):
        if not self.factors:
            return "(1)"
        return " * ".join(f"P({p.p},f{p.residue_degree})^{e}" if e > 1 else
                          f"P({p.p},f{p.residue_degree})" for p, e in self.factors)


def prime_ideals_up_to(F, bound):
    """All prime ideals of norm <= bound, sorted by (norm, p, factor)."""
    out = []
    for p in sieve_primes(bound):
        if p > bound:
            break
        for pr in F.primes_above(p):
            if pr.norm <= bound:
                out.append(pr)
    out.sort(key=lambda pr: (pr.norm, pr.p, pr.gpoly))
    return out


def ideals_up_to(F, bound, primes=None):
    """All integral ideals of norm <= bound (including (1)), sorted by norm."""
    primes = primes if primes is not None else prime_ideals_up_to(F, bound)
    out = [Ideal(F)]

    def rec2(idx, factors, norm):
        for i in range(idx, len(primes)):
            p = primes[i]
            pn = p.norm
            if norm * pn > bound:
                continue
            e = 1
            n = norm * pn
            while n <= bound:
                f2 = factors + [(p, e)]
                out.append(Ideal(F, f2))
                rec2(i + 1, f2, n)
                e += 1
                n *= pn
    rec2(0, [], 1)
    out.sort(key=lambda I: (I.norm, I.key()))
    return out


def factor_element(F, x, primes_hint=None):
    """Factor the principal ideal (x) for integral x (norms factored by sieve)."""
    n = abs(int(x.norm()))
    if n == 0:
        raise ValueError("zero element")
    facs = {}
    for p, e_tot in _factor_int(n).items():
        for pr in F.primes_above(p):
            v = pr.valuation(x)
            if v > 0:
                facs[pr] = v
    return Ideal(F, facs.items())


def _factor_int(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# element enumeration (signature (1,1) fields)
# ---------------------------------------------------------------------------

def unit_normalize(F, x, prec=64):
    """Multiply by fundamental-unit powers so sigma_0(x) ~ |Nm|^(1/3), sigma_0 > 0."""
    eps = F.fundamental_units()[0]
    e0 = abs(complex(eps.embed(0, prec)).real)
    if abs(e0 - 1.0) < 1e-12:
        raise ValueError("degenerate unit")
    x0 = complex(x.embed(0, prec)).real
    target = abs(x.norm()) ** (1.0 / F.degree)
    k = round(math.log(target / abs(x0)) / math.log(e0))
    y = x * eps ** k
    y0 = complex(y.embed(0, prec)).real
    if y0 < 0:
        y = -y
    return y


def enumerate_totally_bounded(F, norm_bound, real_window, max_rounds=None):
    """Elements alpha of O_F with |Nm| <= norm_bound, sigma_0(alpha) in the
    window and positive, each exactly once.

    Signature (1,1) only.  Yields per ideal along the unit ladder, expanding
    the ladder in rounds so every qualifying element is eventually produced
    (the set can be infinite when the window touches 0).
    """
    r, s = F.signature
    if (r, s) != (1, 1):
        raise ValueError("element enumeration implemented for signature (1,1)")
    lo, hi = real_window
    if (lo is None or lo == -math.inf) and (hi is None or hi == math.inf):
        raise WindowUnbounded("window unbounded on both ends")
    if hi is None or hi == math.inf:
        raise WindowUnbounded("window must be bounded above")
    lo = max(float(lo), 0.0) if lo is not None else 0.0
    hi = float(hi)
    if norm_bound < 1 or hi <= 0:
        return
    eps = F.fundamental_units()[0]
    e0 = abs(complex(eps.embed(0, 80)).real)
    if e0 < 1:
        eps = eps.inverse()
        e0 = 1.0 / e0
    gens = []
    for I in ideals_up_to(F, norm_bound):
        g = unit_normalize(F, I.generator()) if not I.is_one() else F.one()
        gens.append(g)
    rnd = 0
    emitted = 0
    while True:
        produced = False
        for g in gens:
            for k in ([0] if rnd == 0 else [rnd, -rnd]):
                x = g * eps ** k
                x0 = complex(x.embed(0, 80)).real
                if x0 < 0:
                    x = -x
                    x0 = -x0
                if lo < x0 <= hi or (lo == 0.0 and 0 < x0 <= hi):
                    produced = True
                    yield x
        rnd += 1
        if max_rounds is not None and rnd > max_rounds:
            return
        if rnd > 4:
            # once the whole ladder band has left [lo, hi] on both sides, stop
            hi_side = min(e0 ** rnd * _min_pos_sigma0(gens), 10.0 ** 400)
            lo_side = e0 ** (-rnd) * _max_pos_sigma0(gens)
            if hi_side > hi and (lo > 0.0 and lo_side < lo):
                return
            if hi_side > hi and lo == 0.0 and max_rounds is None:
                # infinite tail toward 0: keep yielding (caller slices)
                pass


def _min_pos_sigma0(gens):
    return min(abs(complex(g.embed(0, 64)).real) for g in gens)


def _max_pos_sigma0(gens):
    return max(abs(complex(g.embed(0, 64)).real) for g in gens)
