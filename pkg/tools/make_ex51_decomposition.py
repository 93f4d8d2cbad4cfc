"""Offline fixture builder: factor the Gamma_1(N)-power of the embedding unit
into elementary matrices u(x), l(y in N).

Strategy: greedy two-sided size reduction with closest-vector steps in the
row/column lattices, then a direct finish once the core is tiny.  The library
only verifies the result; this script is not part of the package.

Usage: python3 tools/make_ex51_decomposition.py  -> writes fixtures/ex51_decomposition.json
"""

import itertools
import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from localpoints.numfield import NumberField  # noqa: E402
from localpoints.fmatrix import FMat  # noqa: E402
from localpoints.archdarmon import ElementaryDecomposition  # noqa: E402
from localpoints import lattice  # noqa: E402


def embed_row(F, M_emb, pair):
    v = []
    for x in pair:
        co = np.array([float(c) for c in x.co])
        v.append(co @ M_emb)
    return np.concatenate(v)


def t2_size(F, M_emb, mat):
    r1 = embed_row(F, M_emb, (mat.a, mat.b))
    r2 = embed_row(F, M_emb, (mat.c, mat.d))
    return float(r1 @ r1 + r2 @ r2)


def cvp_coeff(F, M_emb, target_pair, gen_pair, sublattice_mult=None):
    """Best x (in O_F, or mult*O_F) minimizing T2(target + x*gen)."""
    d = F.degree
    basis = []
    mults = []
    for i in range(d):
        xi = F.gen() ** i
        if sublattice_mult is not None:
            xi = xi * sublattice_mult
        mults.append(xi)
        basis.append(embed_row(F, M_emb, (xi * gen_pair[0], xi * gen_pair[1])))
    B = np.array(basis).T  # 6 x 3
    t = embed_row(F, M_emb, target_pair)
    co, *_ = np.linalg.lstsq(B, -t, rcond=None)
    co0 = np.round(co).astype(int)
    best = None
    for d3 in itertools.product((-1, 0, 1), repeat=d):
        cc = co0 + np.array(d3)
        x = F.zero()
        for c, m in zip(cc, mults):
            x = x + int(c) * m
        new = (target_pair[0] + x * gen_pair[0], target_pair[1] + x * gen_pair[1])
        sz = float(embed_row(F, M_emb, new) @ embed_row(F, M_emb, new))
        if best is None or sz < best[0]:
            best = (sz, x)
    return best[1]


def reduce_matrix(F, nu, M):
    """Greedy reduction; returns (core, left_word, right_word) with
    word entries ('u'|'l', value) applied as  (prod L) * M * (prod R) = core."""
    M_emb = lattice.minkowski_matrix(F)
    left, right = [], []
    cur = M
    cur_size = t2_size(F, M_emb, cur)
    for _ in range(400):
        cands = []
        # left u(x): row1 += x row2
        x = cvp_coeff(F, M_emb, (cur.a, cur.b), (cur.c, cur.d))
        cands.append(("Lu", x, FMat.upper(F, x) * cur))
        # left l(y): row2 += y row1, y in (nu)
        y = cvp_coeff(F, M_emb, (cur.c, cur.d), (cur.a, cur.b), sublattice_mult=nu)
        cands.append(("Ll", y, FMat.lower(F, y) * cur))
        # right u(x): col2 += x col1
        x = cvp_coeff(F, M_emb, (cur.b, cur.d), (cur.a, cur.c))
        cands.append(("Ru", x, cur * FMat.upper(F, x)))
        # right l(y): col1 += y col2
        y = cvp_coeff(F, M_emb, (cur.a, cur.c), (cur.b, cur.d), sublattice_mult=nu)
        cands.append(("Rl", y, cur * FMat.lower(F, y)))
        best = None
        for kind, val, mat in cands:
            if val.is_zero():
                continue
            sz = t2_size(F, M_emb, mat)
            if best is None or sz < best[0]:
                best = (sz, kind, val, mat)
        if best is None or best[0] >= cur_size - 1e-9:
            break
        cur_size, kind, val, cur = best
        if kind == "Lu":
            left.append(("u", val))
        elif kind == "Ll":
            left.append(("l", val))
        elif kind == "Ru":
            right.append(("u", val))
        else:
            right.append(("l", val))
    return cur, left, right


class ResidueRing:
    """O_F / (mu) with coordinate reduction through the HNF of the ideal lattice."""

    def __init__(self, F, mu):
        self.F = F
        self.mu = mu
        d = F.degree
        rows = []
        cur = mu
        for _ in range(d):
            rows.append([int(c) for c in cur.co])
            cur = cur * F.gen()
        from localpoints.ideals import _hnf
        self.basis = _hnf(rows, d)  # row k has first nonzero entry in column k
        self.basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
        for row in self.basis:
            piv = next(i for i, x in enumerate(row) if x)
            if row[piv] < 0:
                row[:] = [-x for x in row]

    def reduce(self, x):
        co = [int(c) for c in x.co]
        for k, row in enumerate(self.basis):
            q = co[k] // row[k]
            if q:
                co = [a - q * b for a, b in zip(co, row)]
        return tuple(co)

    def key(self, x):
        return self.reduce(x)


def _unit_order(F, ring, eps, group_order):
    """Multiplicative order of eps mod the ring ideal, dividing group_order."""
    facs = {}
    n = group_order
    d = 2
    while d * d <= n:
        while n % d == 0:
            facs[d] = facs.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        facs[n] = facs.get(n, 0) + 1
    o = group_order
    one_key = ring.key(F.one())

    def powk(e, k):
        out = F.one()
        b = e
        while k:
            if k & 1:
                out = F(list(ring.reduce(out * b)))
            b = F(list(ring.reduce(b * b)))
            k >>= 1
        return out

    if ring.key(powk(eps, o)) != one_key:
        return None
    for q in facs:
        while o % q == 0 and ring.key(powk(eps, o // q)) == one_key:
            o //= q
    return o


def _dlog(F, ring, eps, order, target_key):
    """j with eps^j = target in the residue ring, via baby-step giant-step."""
    import math as _math
    s = _math.isqrt(order) + 1
    baby = {}
    cur = F.one()
    for j in range(s):
        baby.setdefault(ring.key(cur), j)
        cur = F(list(ring.reduce(cur * eps)))
    # giant step: eps^(-s)
    eps_s_inv = F.one()
    e_inv_red = None
    # compute eps^s then its inverse mod via order: eps^(order - s mod order)
    k = (-s) % order
    giant = F.one()
    b = eps
    kk = k
    while kk:
        if kk & 1:
            giant = F(list(ring.reduce(giant * b)))
        b = F(list(ring.reduce(b * b)))
        kk >>= 1
    cur = F(list(target_key))
    for i in range(s + 1):
        key = ring.key(cur)
        if key in baby:
            return (i * s + baby[key]) % order
        cur = F(list(ring.reduce(cur * giant)))
    return None


def five_factor_ansatz(F, nu, core, x1_radius=3, verbose=False, max_unit_power=28):
    """core = u(x1) l(y1) u(x2) l(y2) u(x3) for core in Gamma_1((nu)).

    With a' = a - x1 c, the middle entry x2 = b - x1 d - x3 a' must divide
    a' - 1 with quotient in (nu); x2 runs over unit multiples of divisor-ideal
    generators of ((a'-1)/nu), and the congruence x2 = b - x1 d mod (a') is
    solved by a discrete log of the fundamental unit in O_F/(a')."""
    from localpoints.ideals import factor_element, Ideal
    a, b, c, d = core.a, core.b, core.c, core.d
    eps = F.fundamental_units()[0]
    solutions = []
    boxes = sorted(itertools.product(range(-x1_radius, x1_radius + 1), repeat=F.degree),
                   key=lambda t: sum(abs(x) for x in t))
    for co in boxes:
        x1 = F(list(co))
        ap = a - x1 * c
        if ap.is_zero():
            continue
        am1 = ap - F.one()
        if am1.is_zero():
            # core is l(c) after one upper move; handle directly
            word = [("u", x1), ("l", c)]
            prod = FMat.upper(F, x1) * FMat.lower(F, c)
            if prod.key_pgl() == core.key_pgl():
                return word
            continue
        m = am1 / nu
        if not m.is_integral():
            continue
        beta = b - x1 * d
        ap_inv = ap.inverse()
        try:
            ap_fac = factor_element(F, ap)
            m_fac = factor_element(F, m)
        except Exception:
            continue
        group_order = 1
        for pr, e in ap_fac.factors:
            group_order *= pr.norm ** (e - 1) * (pr.norm - 1)
        ring = ResidueRing(F, ap)
        order = _unit_order(F, ring, eps, group_order)
        if order is None:
            continue
        divisors = [Ideal(F)]
        for pr, e in m_fac.factors:
            divisors = [D * Ideal(F, [(pr, k)]) for D in divisors for k in range(e + 1)]
        if verbose:
            print(f"x1={x1}: Nm(m)={m.norm()}, {len(divisors)} divisors, "
                  f"unit order {order} in group of size {group_order}")
        for D in divisors:
            try:
                g0 = D.generator() if not D.is_one() else F.one()
            except Exception:
                continue
            # g0 divides a'-1, and a', a'-1 are coprime, so g0 is a unit mod
            # (a'); invert it by raising to |unit group| - 1 in the ring.
            try:
                g0_inv = F.one()
                bpow = g0
                kk = group_order - 1
                while kk:
                    if kk & 1:
                        g0_inv = F(list(ring.reduce(g0_inv * bpow)))
                    bpow = F(list(ring.reduce(bpow * bpow)))
                    kk >>= 1
                if ring.key(g0_inv * g0) != ring.key(F.one()):
                    continue
                for sgn in (1, -1):
                    target = beta * g0_inv * sgn
                    j = _dlog(F, ring, eps, order, ring.key(target))
                    if j is None:
                        continue
                    # small unit powers only: big powers make the rewritten
                    # divisor points collapse onto the real axis and the series
                    # unusable
                    for jc in (j % order, j % order - order):
                        if abs(jc) > max_unit_power:
                            continue
                        x2s = g0 * sgn * eps ** jc
                        num = beta - x2s
                        x3 = num * ap_inv
                        if not x3.is_integral():
                            continue
                        y2 = am1 / x2s
                        if not (y2 / nu).is_integral():
                            continue
                        dp = d - x3 * c
                        y1 = (dp - F.one()) / x2s
                        if not (y1 / nu).is_integral():
                            continue
                        word = [("u", x1), ("l", y1), ("u", x2s), ("l", y2), ("u", x3)]
                        prod = FMat.identity(F)
                        for k, v in word:
                            prod = prod * (FMat.upper(F, v) if k == "u" else FMat.lower(F, v))
                        if prod.key_pgl() == core.key_pgl():
                            solutions.append(word)
            except ZeroDivisionError:
                continue
    if not solutions:
        return None

    def height(word):
        return max(max(abs(c.numerator) for c in v.co) for _, v in word)

    solutions.sort(key=height)
    return solutions[0]


def main():
    import random
    F = NumberField([1, 0, -1, 1], label="F23")
    r = F.gen()
    nu = F([4, 0, 1])
    gamma = FMat(F, -4 * r - 3, -r * r + 2 * r + 3, -2 * r * r - 4 * r - 3,
                 -r * r + 4 * r + 2)
    M = -(gamma ** 11)
    rng = random.Random(20240811)
    mid = None
    for attempt in range(24):
        M_try = M
        pre_word, post_word = [], []
        if attempt > 0:
            for _ in range(rng.randrange(1, 3)):
                coords = [rng.randrange(-1, 2) for _ in range(F.degree)]
                if not any(coords):
                    coords[0] = 1
                if rng.random() < 0.5:
                    x = F(coords)
                    M_try = FMat.upper(F, x) * M_try
                    pre_word.append(("u", x))
                else:
                    y = nu * F(coords)
                    M_try = FMat.lower(F, y) * M_try
                    pre_word.append(("l", y))
        core, left, right = reduce_matrix(F, nu, M_try)
        print(f"attempt {attempt}: core {core}")
        word = five_factor_ansatz(F, nu, core, x1_radius=2, max_unit_power=30)
        if word is not None:
            # moves applied as cur = L_k ... L_1 (pre M) R_1 ... R_m = core, so
            # M = pre_1^-1 pre_2^-1 ... L_1^-1 ... L_k^-1 core R_m^-1 ... R_1^-1
            mid = []
            for kind, val in pre_word:
                mid.append((kind, -val))
            for kind, val in left:
                mid.append((kind, -val))
            mid.extend(word)
            for kind, val in reversed(right):
                mid.append((kind, -val))
            left, right = [], []
            break
    if mid is None:
        print("endgame failed; no small decomposition found")
        sys.exit(1)
    # M = (prod L)^-1 core (prod R)^-1 ; inverses of elementaries negate args
    factors = []
    for kind, val in reversed(left):
        factors.append((kind, -val))
    factors.extend(mid)
    for kind, val in reversed(right):
        factors.append((kind, -val))
    dec = ElementaryDecomposition(F, factors, nu)
    dec.verify(M)
    print(f"OK: {len(factors)} elementary factors, "
          f"{sum(1 for k, _ in factors if k == 'l')} lower")
    data = {
        "description": "elementary factorization of -(gamma_psi)^11 for the "
                       "discriminant -23 cubic fixture, level (r^2+4)",
        "field_minpoly": [1, 0, -1, 1],
        "level_generator": [str(c) for c in nu.co],
        "power": 11,
        "pgl_sign": -1,
        "factors": [{"kind": k, "coords": [str(c) for c in v.co]} for k, v in factors],
    }
    out = os.path.join(os.path.dirname(__file__), "..", "fixtures",
                       "ex51_decomposition.json")
    with open(out, "w") as fh:
        json.dump(data, fh, indent=1)
    print("wrote", out)


if __name__ == "__main__":
    main()
