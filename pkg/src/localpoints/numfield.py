"""Exact arithmetic in small number fields.

The base field F = Q[x]/(m(x)) is represented on the power basis of a root r
of a monic integer polynomial m of degree <= 4.  All element arithmetic is
done with arbitrary-precision rationals; floating evaluation always takes an
explicit bit-precision argument.  The order Z[r] is assumed maximal
(monogenic); every field exercised by the shipped fixtures satisfies this.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath as mp


class ReducibleExtension(ValueError):
    pass


class UnsupportedDegree(ValueError):
    pass


class WindowUnbounded(ValueError):
    pass


class NonDegreeOnePrime(ValueError):
    pass


# ---------------------------------------------------------------------------
# dense polynomials over Q, coefficient lists in increasing degree
# ---------------------------------------------------------------------------

def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)])


def poly_neg(a):
    return [-x for x in a]


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a, b):
    a = [Fraction(x) for x in a]
    b = poly_trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(poly_trim(r)) >= len(b):
        r = poly_trim(r)
        k = len(r) - len(b)
        coef = r[-1] / b[-1]
        q[k] = coef
        for i, y in enumerate(b):
            r[i + k] -= coef * y
    return poly_trim(q), poly_trim(r)


def poly_deriv(a):
    return poly_trim([i * a[i] for i in range(1, len(a))])


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_resultant(a, b):
    """Resultant via pseudo-Euclid on exact rationals."""
    a = poly_trim([Fraction(x) for x in a])
    b = poly_trim([Fraction(x) for x in b])
    if not a or not b:
        return Fraction(0)
    res = Fraction(1)
    while len(b) > 1:
        _, r = poly_divmod(a, b)
        if not r:
            return Fraction(0)
        res *= b[-1] ** (len(a) - len(r))
        res *= (-1) ** ((len(a) - 1) * (len(b) - 1))
        a, b = b, r
    return res * b[0] ** (len(a) - 1)


def poly_disc(m):
    """Discriminant of a monic polynomial."""
    d = len(m) - 1
    r = poly_resultant(m, poly_deriv(m))
    return r * (-1) ** (d * (d - 1) // 2)


def _is_irreducible(m):
    """Irreducibility over Q for monic integer polys of degree <= 4.

    Rational-root test plus a search for monic quadratic integer factors;
    enough for degree <= 4 (a reducible quartic has a linear or quadratic
    factor).
    """
    d = len(m) - 1
    if d <= 1:
        return d == 1
    c0 = int(m[0])
    if c0 == 0:
        return False
    divs = set()
    for k in range(1, abs(c0) + 1):
        if abs(c0) % k == 0:
            divs.update((k, -k))
    for root in divs:
        if poly_eval(m, Fraction(root)) == 0:
            return False
    if d <= 3:
        return True
    # quartic: try monic quadratic factors x^2 + u x + v with v | c0
    c3, c2, c1 = int(m[3]), int(m[2]), int(m[1])
    for v in divs:
        # matching constant terms: v * w = c0
        w = c0 // v
        if v * w != c0:
            continue
        # x^4+c3x^3+c2x^2+c1x+c0 = (x^2+ux+v)(x^2+sx+w)
        # s = c3-u ; constraints: v+w+us' .. solve over integer u
        for u in range(-abs(c0) - abs(c3) - 4, abs(c0) + abs(c3) + 5):
            s = c3 - u
            if u * s + v + w == c2 and u * w + s * v == c1:
                return False
    return True


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

class NFElt:
    """Element of a NumberField, exact rational coordinates on the power basis."""

    __slots__ = ("field", "co")

    def __init__(self, field, co):
        self.field = field
        d = field.degree
        co = [Fraction(c) for c in co]
        if len(co) > d:
            co = field._reduce(co)
        co += [Fraction(0)] * (d - len(co))
        self.co = tuple(co)

    def __repr__(self):
        return self.field.elt_str(self)

    def __hash__(self):
        return hash((id(self.field), self.co))

    def __eq__(self, other):
        other = self.field.coerce(other)
        return other is not None and self.co == other.co

    def __add__(self, other):
        o = self.field.coerce(other)
        if o is None:
            return NotImplemented
        return NFElt(self.field, [a + b for a, b in zip(self.co, o.co)])

    __radd__ = __add__

    def __neg__(self):
        return NFElt(self.field, [-a for a in self.co])

    def __sub__(self, other):
        o = self.field.coerce(other)
        if o is None:
            return NotImplemented
        return NFElt(self.field, [a - b for a, b in zip(self.co, o.co)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self.field.coerce(other)
        if o is None:
            return NotImplemented
        return NFElt(self.field, self.field._reduce(poly_mul(list(self.co), list(o.co))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self.field.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return all(c == 0 for c in self.co)

    def is_rational(self):
        return all(c == 0 for c in self.co[1:])

    def inverse(self):
        """Inverse via extended Euclid against the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # solve a(x)*u(x) + m(x)*v(x) = 1
        a = poly_trim(list(self.co))
        m = [Fraction(c) for c in self.field.minpoly]
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while poly_trim(r1):
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_add(s0, poly_neg(poly_mul(q, s1)))
        # r0 is a nonzero constant gcd
        c = r0[0]
        inv = [x / c for x in s0]
        return NFElt(self.field, inv)

    def mul_matrix(self):
        """Matrix of multiplication by self on the power basis (rows = images)."""
        d = self.field.degree
        rows = []
        cur = list(self.co)
        for i in range(d):
            rows.append(list(cur) + [Fraction(0)] * (d - len(cur)))
            cur = self.field._reduce(poly_mul(cur, [Fraction(0), Fraction(1)]))
        return rows

    def norm(self):
        return _det([row[:] for row in self.mul_matrix()])

    def trace(self):
        m = self.mul_matrix()
        return sum(m[i][i] for i in range(self.field.degree))

    def charpoly(self):
        """Characteristic polynomial of multiplication by self (monic, degree d)."""
        d = self.field.degree
        m = self.mul_matrix()
        # Faddeev-LeVerrier, exact
        coeffs = [Fraction(1)]
        M = [[Fraction(0)] * d for _ in range(d)]
        I = [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]
        A = m
        Mk = I
        c = Fraction(1)
        out = [Fraction(1)]
        for k in range(1, d + 1):
            Mk = _matmul(A, Mk)
            tr = sum(Mk[i][i] for i in range(d))
            c = -tr / k
            out.append(c)
            for i in range(d):
                Mk[i][i] += c
        out.reverse()
        return out  # increasing degree, monic

    def denominator(self):
        den = 1
        for c in self.co:
            den = den * c.denominator // _gcd(den, c.denominator)
        return den

    def is_integral(self):
        return all(c.denominator == 1 for c in self.co)

    def embed(self, i, prec=53):
        """Image under the i-th archimedean embedding at `prec` bits."""
        roots = self.field.embeddings(prec)
        with mp.workprec(prec + 20):
            return poly_eval([mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in self.co],
                             roots[i])

    def serialize(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.co]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _det(m):
    """Fraction determinant by Gaussian elimination."""
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class NumberField:
    def __init__(self, minpoly, label=None):
        minpoly = [int(c) for c in minpoly]
        if not minpoly or minpoly[-1] != 1:
            raise ValueError("minimal polynomial must be monic with integer coefficients")
        degree = len(minpoly) - 1
        if degree > 4:
            raise UnsupportedDegree(f"degree {degree} > 4")
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if not _is_irreducible(minpoly):
            raise ReducibleExtension(f"{minpoly} factors over Q")
        self.minpoly = tuple(Fraction(c) for c in minpoly)
        self.minpoly_int = tuple(minpoly)
        self.degree = degree
        self.label = label
        self.discriminant = int(poly_disc(list(self.minpoly)))
        self._roots_cache = {}
        self._fund_units = None
        self._reduction_table = self._build_reduction()

    # -- representation helpers ------------------------------------------------

    def _build_reduction(self):
        """Powers r^d .. r^(2d-2) on the power basis."""
        d = self.degree
        table = []
        # r^d = -(m - x^d)
        cur = [-c for c in self.minpoly[:-1]]
        table.append(list(cur))
        for _ in range(d - 2):
            cur = poly_mul(cur, [Fraction(0), Fraction(1)])
            if len(cur) > d:
                head = cur[d]
                cur = poly_add(cur[:d], [head * c for c in table[0]])
            table.append(list(cur) + [Fraction(0)] * (d - len(cur)))
        return table

    def _reduce(self, co):
        d = self.degree
        co = list(co) + []
        while len(co) > d:
            head = co.pop()
            k = len(co) - d  # reduce x^(d+k)
            if head:
                tbl = self._reduction_table[k]
                for i, t in enumerate(tbl):
                    co[i] += head * t
        return co

    def coerce(self, x):
        if isinstance(x, NFElt):
            return x if x.field is self else None
        if isinstance(x, (int, Fraction)):
            return NFElt(self, [x])
        return None

    def __call__(self, co):
        if isinstance(co, (int, Fraction)):
            return NFElt(self, [co])
        return NFElt(self, co)

    def gen(self):
        if self.degree == 1:
            return NFElt(self, [-self.minpoly[0]])
        return NFElt(self, [0, 1])

    def zero(self):
        return NFElt(self, [0])

    def one(self):
        return NFElt(self, [1])

    def elt_str(self, x, var="r"):
        terms = []
        for i, c in enumerate(x.co):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{var}" if c != 1 else var)
            else:
                terms.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        name = self.label or "F"
        return f"NumberField({name}, x^{self.degree}, disc={self.discriminant})"

    # -- invariants -------------------------------------------------------------

    @property
    def signature(self):
        real = self._count_real_roots()
        return (real, (self.degree - real) // 2)

    def _count_real_roots(self):
        roots = self.embeddings(64)
        return sum(1 for z in roots if z.imag == 0) + sum(
            0 for _ in ())  # real-first ordering below

    def embeddings(self, prec=53):
        """Root approximations of the minimal polynomial, real roots first
        (ascending), then one representative per complex-conjugate pair
        (positive imaginary part, sorted by real part).  Stable across runs."""
        if prec < 53:
            raise ValueError("precision >= 53 bits required")
        key = prec
        if key in self._roots_cache:
            return self._roots_cache[key]
        with mp.workprec(prec + 8 * self.degree):
            roots = mp.polyroots([mp.mpf(int(c)) for c in reversed(self.minpoly_int)],
                                 maxsteps=200, extraprec=prec)
            reals = []
            cplx = []
            for z in roots:
                z = mp.mpc(z)
                if abs(z.imag) < mp.mpf(2) ** (-prec // 2):
                    reals.append(mp.mpf(z.real))
                elif z.imag > 0:
                    cplx.append(z)
            reals.sort()
            cplx.sort(key=lambda z: (z.real, z.imag))
            out = [mp.mpc(x) for x in reals] + cplx
        self._roots_cache[key] = out
        return out

    @property
    def different_generator(self):
        """Generator of the different, normalized positive under sigma_0.

        For the monogenic order this is m'(r); sign fixed so the distinguished
        (first real, else first) embedding is a positive real when available.
        """
        d = NFElt(self, [Fraction(0)])
        dm = poly_deriv(list(self.minpoly))
        d = NFElt(self, self._reduce([Fraction(c) for c in dm]))
        r, s = self.signature
        if r > 0:
            v = d.embed(0, 64)
            if v.real < 0:
                d = -d
        return d

    # -- units ------------------------------------------------------------------

    def unit_rank(self):
        r, s = self.signature
        return r + s - 1

    def fundamental_units(self, box_schedule=(3, 6, 10, 16)):
        """Fundamental units by bounded coordinate-box search.

        The search enumerates integral elements with |Nm| = 1 in expanding
        coordinate boxes and keeps a generating set of the log-unit lattice;
        the schedule stops once the regulator is stable across one expansion.
        """
        if self._fund_units is not None:
            return self._fund_units
        rank = self.unit_rank()
        if rank == 0:
            self._fund_units = []
            return []
        prev_reg = None
        chosen = None
        for bound in box_schedule:
            units = self._units_in_box(bound)
            basis, reg = self._log_lattice_basis(units)
            if len(basis) == rank:
                if prev_reg is not None and abs(reg - prev_reg) < 1e-9 * (1 + abs(reg)):
                    chosen = basis
                    break
                prev_reg = reg
                chosen = basis
        if chosen is None or len(chosen) < rank:
            raise RuntimeError("unit search failed to stabilize; enlarge box schedule")
        self._fund_units = chosen
        return chosen

    def _units_in_box(self, bound):
        d = self.degree
        out = []
        for co in itertools.product(range(-bound, bound + 1), repeat=d):
            if all(c == 0 for c in co):
                continue
            x = NFElt(self, list(co))
            if abs(x.norm()) == 1:
                out.append(x)
        return out

    def _log_lattice_basis(self, units):
        """Pick `rank` independent units of smallest regulator (greedy)."""
        rank = self.unit_rank()
        r, s = self.signature
        prec = 80
        roots = self.embeddings(prec)

        def logvec(u):
            v = []
            for i in range(r + s):
                z = poly_eval([mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in u.co],
                              roots[i])
                mult = 1 if i < r else 2
                v.append(mult * mp.log(abs(z)))
            return v[:-1] if (r + s) > 1 else v  # drop last coordinate (sum = 0)

        cands = []
        for u in units:
            v = logvec(u)
            size = mp.sqrt(sum(x * x for x in v))
            if size > 1e-20:
                cands.append((float(size), u, v))
        cands.sort(key=lambda t: t[0])
        basis = []
        vecs = []
        for _, u, v in cands:
            trial = vecs + [v]
            if _gram_rank(trial) == len(trial):
                basis.append(u)
                vecs.append(v)
                if len(basis) == rank:
                    break
        reg = abs(_gram_det(vecs)) ** 0.5 if vecs else 0.0
        return basis, float(reg)

    # -- primes -----------------------------------------------------------------

    def primes_above(self, p, max_prec=2):
        """Prime ideals above p (monogenic order, p not dividing the index)."""
        from .primes import factor_mod_p
        facs = factor_mod_p([int(c) for c in self.minpoly_int], p)
        out = []
        for g, e in facs:
            out.append(PrimeIdeal(self, p, g, e))
        return out


def _gram_rank(vecs):
    if not vecs:
        return 0
    g = [[float(sum(a * b for a, b in zip(u, v))) for v in vecs] for u in vecs]
    import numpy as np
    return int(np.linalg.matrix_rank(np.array(g), tol=1e-12))


def _gram_det(vecs):
    if not vecs:
        return 0.0
    import numpy as np
    g = [[float(sum(a * b for a, b in zip(u, v))) for v in vecs] for u in vecs]
    return float(np.linalg.det(np.array(g)))


# ---------------------------------------------------------------------------
# prime ideals
# ---------------------------------------------------------------------------

class PrimeIdeal:
    """Prime of the monogenic order, given by (p, g(r)) with g | m mod p.

    Narrow class number one is assumed throughout, so a generator exists; it
    is searched on demand (short vectors in the ideal lattice).
    """

    def __init__(self, field, p, gpoly, ram=1):
        self.field = field
        self.p = int(p)
        self.gpoly = tuple(int(c) % p for c in gpoly)  # monic mod p, increasing degree
        self.residue_degree = len(self.gpoly) - 1
        self.ramification = ram
        self.norm = self.p ** self.residue_degree
        self._gen = None
        self._lift_cache = {}

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, f={self.residue_degree}, g={list(self.gpoly)})"

    def key(self):
        return (self.p, self.gpoly)

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.key() == other.key() \
            and self.field is other.field

    def __hash__(self):
        return hash((id(self.field), self.key()))

    # membership and valuation --------------------------------------------------

    def lifted_factor(self, prec):
        """Hensel lift of the local factor g to mod p^prec (coprime case)."""
        from .primes import hensel_lift_factor
        if prec not in self._lift_cache:
            self._lift_cache[prec] = hensel_lift_factor(
                [int(c) for c in self.field.minpoly_int], list(self.gpoly), self.p, prec)
        return self._lift_cache[prec]

    def valuation(self, x):
        """v_p(x) for integral or p-unit-denominator x."""
        if x.is_zero():
            raise ValueError("valuation of zero")
        if self.ramification > 1:
            return self._valuation_by_generator(x)
        den = x.denominator()
        dval = 0
        while den % self.p == 0:
            den //= self.p
            dval += 1
        # scale to integral
        y = x * (self.p ** dval)
        prec = 40
        while True:
            g = self.lifted_factor(prec)
            pw = self.p ** prec
            co = [int(c * (y.denominator() // 1)) if c.denominator == 1 else None
                  for c in y.co]
            if any(c is None for c in co):
                # clear non-p denominator (unit mod p)
                d = y.denominator()
                co = [int(c * d) % pw for c in y.co]
                dd = pow(d % pw, -1, pw) if d % self.p else None
                if dd is None:
                    raise ValueError("denominator not prime to p")
                co = [c * dd % pw for c in co]
            rem = _polyrem_mod(co, g, pw)
            vals = [_ival(c, self.p, prec) for c in rem]
            v = min(vals) if vals else prec
            if v < prec - 4:
                return v - dval * self.ramification
            prec *= 2

    def _valuation_by_generator(self, x):
        """Divide out the prime generator; (gen) is exactly this prime, so
        integrality of x/gen^k is equivalent to v(x) >= k for integral x."""
        from .ideals import prime_generator
        gen = prime_generator(self)
        den = x.denominator()
        dval = 0
        while den % self.p == 0:
            den //= self.p
            dval += 1
        y = x * (self.p ** dval)
        v = 0
        while True:
            q = y / gen
            if not q.is_integral():
                break
            y = q
            v += 1
        return v - dval * self.ramification

    def contains(self, x):
        return self.valuation(x) > 0

    # generator ------------------------------------------------------------------

    def generator(self, search_bound=60):
        if self._gen is not None:
            return self._gen
        F = self.field
        d = F.degree
        # ideal lattice basis: columns of HNF of [p*e_i ; g(r)*r^j]
        rows = []
        for i in range(d):
            v = [Fraction(0)] * d
            v[i] = Fraction(self.p)
            rows.append(v)
        g_elt = NFElt(F, [Fraction(c) for c in self.gpoly])
        cur = g_elt
        for _ in range(d):
            rows.append(list(cur.co))
            cur = cur * F.gen()
        basis = _hnf_rows([[int(c) for c in row] for row in rows])
        gen = _short_norm_search(F, basis, self.norm, search_bound)
        if gen is None:
            raise RuntimeError(f"no generator of norm {self.norm} found for {self}")
        self._gen = gen
        return gen


def _ival(c, p, cap):
    c = int(c)
    if c == 0:
        return cap
    v = 0
    while c % p == 0:
        c //= p
        v += 1
        if v >= cap:
            break
    return v


def _polyrem_mod(co, g, modulus):
    """Remainder of the poly with integer coeffs `co` by monic-mod-p^k lift g."""
    co = [c % modulus for c in co]
    dg = len(g) - 1
    ginv = pow(g[-1] % modulus, -1, modulus)
    co = list(co)
    while len(poly_trim(co)) > dg:
        co = poly_trim(co)
        k = len(co) - 1 - dg
        f = co[-1] * ginv % modulus
        for i, gc in enumerate(g):
            co[i + k] = (co[i + k] - f * gc) % modulus
        co.pop()
    return [c % modulus for c in co]


def _hnf_rows(rows):
    """Row HNF of an integer matrix, returning a square basis (rows)."""
    import numpy as np
    rows = [list(map(int, r)) for r in rows]
    n = len(rows[0])
    mat = [r[:] for r in rows]
    basis = []
    col = 0
    for col in range(n):
        # find pivot
        piv = None
        for r in range(len(mat)):
            if mat[r][col] != 0 and all(mat[r][c] == 0 for c in range(col)):
                if piv is None or abs(mat[r][col]) < abs(mat[piv][col]):
                    piv = r
        if piv is None:
            continue
        # eliminate via gcd steps
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


def _short_norm_search(F, basis, target_norm, bound):
    """Search small combinations of lattice basis rows for |Nm| = target."""
    d = F.degree
    best = None
    for radius in (2, 4, 8, bound):
        for co in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
            if all(c == 0 for c in co):
                continue
            vec = [sum(c * basis[i][j] for i, c in enumerate(co)) for j in range(d)]
            x = NFElt(F, vec)
            if abs(x.norm()) == target_norm:
                key = tuple(abs(v) for v in vec)
                if best is None or key < best[0]:
                    best = (key, x)
        if best is not None:
            return best[1]
    return None


# ---------------------------------------------------------------------------
# relative quadratic extensions K/F
# ---------------------------------------------------------------------------

class RelativeExtension:
    """K = F[w]/(w^2 + b w + c) with declared integral generator w_K."""

    def __init__(self, base, rel_poly, norm_one_unit=None, label=None):
        # rel_poly = (c, b, 1) over base, monic quadratic, increasing degree
        if len(rel_poly) != 3:
            raise ValueError("relative polynomial must be quadratic")
        self.base = base
        c, b, lead = rel_poly
        if base.coerce(lead) != base.one():
            raise ValueError("relative polynomial must be monic")
        self.b = base.coerce(b)
        self.c = base.coerce(c)
        self.label = label
        self._norm_one_unit = norm_one_unit

    def __call__(self, a0, a1=0):
        return RelElt(self, self.base.coerce(a0), self.base.coerce(a1))

    def gen(self):
        return RelElt(self, self.base.zero(), self.base.one())

    def zero(self):
        return RelElt(self, self.base.zero(), self.base.zero())

    def one(self):
        return RelElt(self, self.base.one(), self.base.zero())

    def coerce(self, x):
        if isinstance(x, RelElt) and x.ext is self:
            return x
        b = self.base.coerce(x)
        if b is not None:
            return RelElt(self, b, self.base.zero())
        return None

    def norm_one_unit(self, box=14):
        """Generator of O_1^x/torsion: unit with Nm_{K/F} = 1, found by search.

        Searches x + y w over coordinate boxes for the smallest nontrivial
        solution (in log-height at the distinguished embedding).
        """
        if self._norm_one_unit is not None:
            return self._norm_one_unit
        F = self.base
        best = None
        rng = range(-box, box + 1)
        for xco in itertools.product(rng, repeat=F.degree):
            for yco in itertools.product(rng, repeat=F.degree):
                if all(c == 0 for c in yco):
                    continue
                u = RelElt(self, NFElt(F, list(xco)), NFElt(F, list(yco)))
                if u.rel_norm() == F.one() and u.is_integral():
                    h = _rel_log_height(u)
                    if h > 1e-12 and (best is None or h < best[0]):
                        best = (h, u)
        if best is None:
            raise RuntimeError("no norm-one unit found; enlarge box")
        self._norm_one_unit = best[1]
        return best[1]

    def __repr__(self):
        return f"RelativeExtension({self.label or 'K'} over {self.base!r})"


class RelElt:
    """a0 + a1*w with a_i in the base field."""

    __slots__ = ("ext", "a0", "a1")

    def __init__(self, ext, a0, a1):
        self.ext = ext
        self.a0 = a0
        self.a1 = a1

    def __repr__(self):
        return f"({self.a0}) + ({self.a1})*w"

    def __eq__(self, other):
        o = self.ext.coerce(other)
        return o is not None and self.a0 == o.a0 and self.a1 == o.a1

    def __hash__(self):
        return hash((id(self.ext), self.a0.co, self.a1.co))

    def __add__(self, other):
        o = self.ext.coerce(other)
        if o is None:
            return NotImplemented
        return RelElt(self.ext, self.a0 + o.a0, self.a1 + o.a1)

    __radd__ = __add__

    def __neg__(self):
        return RelElt(self.ext, -self.a0, -self.a1)

    def __sub__(self, other):
        o = self.ext.coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self.ext.coerce(other)
        if o is None:
            return NotImplemented
        # (a0 + a1 w)(b0 + b1 w), w^2 = -b w - c
        b, c = self.ext.b, self.ext.c
        w2 = self.a1 * o.a1
        return RelElt(self.ext,
                      self.a0 * o.a0 - w2 * c,
                      self.a0 * o.a1 + self.a1 * o.a0 - w2 * b)

    __rmul__ = __mul__

    def conj(self):
        """Nontrivial K/F automorphism: w -> -b - w."""
        return RelElt(self.ext, self.a0 - self.a1 * self.ext.b, -self.a1)

    def rel_norm(self):
        n = self * self.conj()
        assert n.a1.is_zero()
        return n.a0

    def rel_trace(self):
        t = self + self.conj()
        assert t.a1.is_zero()
        return t.a0

    def inverse(self):
        n = self.rel_norm()
        if n.is_zero():
            raise ZeroDivisionError
        cj = self.conj()
        ninv = n.inverse()
        return RelElt(self.ext, cj.a0 * ninv, cj.a1 * ninv)

    def __truediv__(self, other):
        o = self.ext.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.ext.coerce(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ext.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return self.a0.is_zero() and self.a1.is_zero()

    def is_integral(self):
        return self.a0.is_integral() and self.a1.is_integral()

    def embed(self, root_w, i, prec=53):
        """Embed into C: base to embedding i, w to the given root image."""
        return self.a0.embed(i, prec) + self.a1.embed(i, prec) * root_w


def _rel_log_height(u, prec=64):
    F = u.ext.base
    r, s = F.signature
    total = 0.0
    for i in range(r + s):
        b = u.ext.b.embed(i, prec)
        c = u.ext.c.embed(i, prec)
        disc = b * b - 4 * c
        rt = mp.sqrt(disc)
        for sign in (1, -1):
            w = (-b + sign * rt) / 2
            z = u.a0.embed(i, prec) + u.a1.embed(i, prec) * w
            total += abs(float(mp.log(abs(z)))) if abs(z) > 0 else 0.0
    return total


# ---------------------------------------------------------------------------
# completion F -> Q_p
# ---------------------------------------------------------------------------

def complete_at_prime(F, prime, precision):
    """Ring map F -> Q_p for a degree-one unramified prime.

    Returns the PadicNumber image of the field generator: the Hensel lift of
    the root of the minimal polynomial at which the prime's local factor
    vanishes.  Deterministic per prime.
    """
    from .padic import PadicContext
    if prime.residue_degree != 1 or prime.ramification != 1:
        raise NonDegreeOnePrime(f"{prime} does not give F_p = Q_p")
    p = prime.p
    # root mod p from the linear local factor g = (x - a)
    g = prime.gpoly
    a = (-g[0]) % p
    ctx = PadicContext(p, precision)
    m = [int(c) for c in F.minpoly_int]
    root = _hensel_root(m, a, p, precision)
    return ctx.integer(root)


def _hensel_root(m, a, p, prec):
    mp_ = p ** prec
    x = a % p
    dm = [i * m[i] for i in range(1, len(m))]
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mod = p ** k
        fx = poly_eval(m, x) % mod
        dfx = poly_eval(dm, x) % mod
        inv = pow(dfx, -1, mod)
        x = (x - fx * inv) % mod
    assert poly_eval(m, x) % mp_ == 0
    return x


def embed_element(x, gen_image):
    """Image of a field element under a completion given by the generator image."""
    ctx = gen_image.ctx
    acc = ctx.zero()
    for c in reversed(x.co):
        acc = acc * gen_image + ctx.rational(c)
    return acc
