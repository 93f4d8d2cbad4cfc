"""Combinatorics of the Bruhat-Tits tree of PGL_2(Q_p).

Oriented edges are identified with their compact opens in P^1(Q_p): balls
a + p^n Z_p (not containing infinity) or complements of balls.  The base edge
e_* is Z_p.  Centers are exact rationals with p-power denominators, reduced
canonically mod p^n, so edge keys are hashable and the level-by-level
combinatorics is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import PadicNumber, QuadElt, INF


class PrecisionTooLow(ValueError):
    pass


class CapExceeded(ValueError):
    pass


class LocalFormViolation(ValueError):
    pass


def _vp_frac(x: Fraction, p: int):
    if x == 0:
        return INF
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _reduce_center(a: Fraction, n: int, p: int) -> Fraction:
    """Canonical representative of the p-adic number a mod p^n: p^v * u with
    u an integer in [0, p^(n-v)), so centers always have p-power denominators."""
    a = Fraction(a)
    if a == 0:
        return Fraction(0)
    v = _vp_frac(a, p)
    if v >= n:
        return Fraction(0)
    u = a / Fraction(p) ** v
    m = p ** (n - v)
    rep = u.numerator * pow(u.denominator, -1, m) % m
    return rep * Fraction(p) ** v


class TreeEdge:
    """kind 'ball' for U = a + p^n Z_p, 'cball' for its complement."""

    __slots__ = ("p", "kind", "center", "n")

    def __init__(self, p, kind, center, n):
        self.p = p
        self.kind = kind
        self.n = int(n)
        c = _reduce_center(Fraction(center), self.n, p)
        if _vp_frac(c, p) < -10 ** 8:
            raise ValueError("bad center")
        self.center = c

    @classmethod
    def base(cls, p):
        return cls(p, "ball", 0, 0)

    def key(self):
        return (self.kind, self.center, self.n)

    def __eq__(self, other):
        return isinstance(other, TreeEdge) and self.p == other.p and self.key() == other.key()

    def __hash__(self):
        return hash((self.p,) + self.key())

    def __repr__(self):
        return f"{self.kind}({self.center}, {self.n})@{self.p}"

    def opposite(self):
        return TreeEdge(self.p, "cball" if self.kind == "ball" else "ball",
                        self.center, self.n)

    @property
    def parity(self):
        """0 for even edges (the orbit of the base edge)."""
        return self.n % 2 if self.kind == "ball" else (self.n + 1) % 2

    def source_vertex(self):
        """(center mod p^k, k) lattice label of the source."""
        if self.kind == "ball":
            k = self.n - 1
        else:
            k = self.n
        return (_reduce_center(self.center, k, self.p), k)

    def target_vertex(self):
        if self.kind == "ball":
            k = self.n
        else:
            k = self.n - 1
        return (_reduce_center(self.center, k, self.p), k)

    def forward_children(self):
        """The p oriented edges whose opens partition U_e, one level deeper."""
        p = self.p
        if self.kind == "ball":
            return [TreeEdge(p, "ball", self.center + i * Fraction(p) ** self.n, self.n + 1)
                    for i in range(p)]
        # complement of a + p^n Z_p: children are the complement of the parent
        # ball a + p^(n-1) Z_p ... as compact opens: P^1 - (a + p^(n-1)Z_p)
        # union the sibling balls at level n
        out = [TreeEdge(p, "cball", self.center, self.n - 1)]
        parent_scale = Fraction(p) ** (self.n - 1)
        base = _reduce_center(self.center, self.n - 1, p)
        for i in range(p):
            cand = base + i * parent_scale
            if _reduce_center(cand, self.n, p) != self.center:
                out.append(TreeEdge(p, "ball", cand, self.n))
        return out

    def level(self):
        """Distance of the source vertex from the base vertex s(e_*)."""
        return _vertex_distance(self.source_vertex(), (Fraction(0), -1), self.p)

    def geom_distance_to_base(self):
        return edge_distance(self, TreeEdge.base(self.p))

    def contains_infinity(self):
        return self.kind == "cball"

    def contains(self, t):
        """Membership of t in U_e; t is a Fraction or the string 'inf'."""
        if t == "inf":
            return self.kind == "cball"
        inside = _vp_frac(Fraction(t) - self.center, self.p) >= self.n
        return inside if self.kind == "ball" else not inside

    def sample_point(self):
        """Canonical sample: the center for balls; just outside for complements."""
        if self.kind == "ball":
            return self.center
        return self.center + Fraction(self.p) ** (self.n - 1)


def edge_distance(e1: TreeEdge, e2: TreeEdge):
    """Geometric distance between the unordered edges."""
    s1, t1 = e1.source_vertex(), e1.target_vertex()
    s2, t2 = e2.source_vertex(), e2.target_vertex()
    d11 = _vertex_distance(s1, s2, e1.p)
    d12 = _vertex_distance(s1, t2, e1.p)
    d21 = _vertex_distance(t1, s2, e1.p)
    d22 = _vertex_distance(t1, t2, e1.p)
    return min(d11, d12, d21, d22)


def _vertex_distance(u, v, p):
    au, ku = u
    av, kv = v
    # climb both to a common ancestor
    du = 0
    dv = 0
    # represent path sets
    pu = {}
    a, k = au, ku
    d = 0
    for _ in range(4000):
        pu[(a, k)] = d
        a = _reduce_center(a, k - 1, p)
        k -= 1
        d += 1
        if k < -200:
            break
    a, k = av, kv
    d = 0
    for _ in range(4000):
        if (a, k) in pu:
            return pu[(a, k)] + d
        a = _reduce_center(a, k - 1, p)
        k -= 1
        d += 1
        if k < -200:
            break
    raise RuntimeError("vertices in different trees?")


# ---------------------------------------------------------------------------
# PGL_2(Q_p) action
# ---------------------------------------------------------------------------

def _entry_val_frac(x):
    """(valuation, Fraction lift) of a matrix entry (PadicNumber or Fraction)."""
    if isinstance(x, PadicNumber):
        if x.is_zero():
            return INF, Fraction(0)
        return x.val, x.lift()
    x = Fraction(x)
    return None, x


def act(g, e: TreeEdge):
    """Image edge of e under the fractional-linear action of g.

    g is a 2x2 matrix with entries PadicNumber or exact rationals.  Raises
    PrecisionTooLow when entries are too coarse to decide the image ball."""
    p = e.p
    (A, B), (C, D) = g
    va, a = _entry_val_frac(A)
    vb, b = _entry_val_frac(B)
    vc, c = _entry_val_frac(C)
    vd, d = _entry_val_frac(D)
    det = a * d - b * c
    if det == 0:
        raise PrecisionTooLow("determinant vanishes at working precision")
    min_prec = min((x.abs_prec() for x in (A, B, C, D) if isinstance(x, PadicNumber)),
                   default=INF)
    if e.kind == "ball":
        img = _image_of_ball(a, b, c, d, det, e.center, e.n, p, min_prec)
    else:
        # complement of ball = image of a ball under an inversion chart:
        # g(P^1 - U) = P^1 - g(U)
        inner = TreeEdge(p, "ball", e.center, e.n)
        img_inner = _image_of_ball(a, b, c, d, det, inner.center, inner.n, p, min_prec)
        img = img_inner.opposite()
    return img


def _image_of_ball(a, b, c, d, det, ctr, n, p, min_prec):
    """Mobius image of the closed ball ctr + p^n Z_p."""
    # pole at -d/c (if c != 0)
    if c != 0:
        pole = -d / c
        pole_inside = _vp_frac(pole - ctr, p) >= n
    else:
        pole_inside = False
    if not pole_inside:
        # |c t + d| constant on the ball
        denom_val = _vp_frac(c * ctr + d, p) if (c * ctr + d) != 0 else INF
        if denom_val >= min_prec - 2 if denom_val != INF else False:
            raise PrecisionTooLow("denominator valuation at the edge of precision")
        gc = (a * ctr + b) / (c * ctr + d)
        vdet = _vp_frac(det, p)
        n2 = n + vdet - 2 * denom_val if c != 0 or True else n
        # radius p^-n scaled by |det| / |c ctr + d|^2
        n2 = n + vdet - 2 * (denom_val if denom_val != INF else 0)
        return TreeEdge(p, "ball", gc, n2)
    # pole inside: image is the complement of a ball; compute via the image of
    # the complement (a ball in the 1/(t-ctr') chart)
    # P^1 - (ctr + p^n Z_p) = { ctr + s^-1 : v(s) <= ... } i.e. image of
    # ball(0, 1 - n) under s -> ctr + 1/s ... combine with g:
    # g(ctr + 1/s) = ((a ctr + b) s + a) / ((c ctr + d) s + c)
    A2 = a * ctr + b
    B2 = a
    C2 = c * ctr + d
    D2 = c
    det2 = A2 * D2 - B2 * C2  # = -det
    # complement of the original ball is the image of ball(0, 1-n) under the
    # map with matrix [[A2,B2],[C2,D2]] applied to s
    comp = _image_of_ball(A2, B2, C2, D2, det2, Fraction(0), 1 - n, p, min_prec)
    return comp.opposite()


def act_matrix_of_quad(g):
    """Convert a matrix over QuadElt with base-field entries to PadicNumbers."""
    out = []
    for row in g:
        r = []
        for x in row:
            if isinstance(x, QuadElt):
                if not x.in_base():
                    raise ValueError("tree action needs Q_p matrix entries")
                r.append(x.a)
            else:
                r.append(x)
        out.append(tuple(r))
    return tuple(out)


# ---------------------------------------------------------------------------
# covers of P^1(Q_p)
# ---------------------------------------------------------------------------

def cover(p, level):
    """Disjoint cover of P^1(Q_p) by the 2 p^level opens at depth `level`,
    refining {Z_p, complement}; level 0 gives the two base opens."""
    out = [TreeEdge.base(p), TreeEdge.base(p).opposite()]
    for _ in range(level):
        nxt = []
        for e in out:
            nxt.extend(e.forward_children())
        out = nxt
    return out


# ---------------------------------------------------------------------------
# radial systems
# ---------------------------------------------------------------------------

def ent_is_zero(x):
    if isinstance(x, PadicNumber):
        return x.is_zero()
    return Fraction(x) == 0


def ent_val(x, p):
    if isinstance(x, PadicNumber):
        return x.val if not x.is_zero() else INF
    x = Fraction(x)
    return _vp_frac(x, p) if x != 0 else INF


def ent_inv(x):
    if isinstance(x, PadicNumber):
        return x.inverse()
    return 1 / Fraction(x)


class GroupElement:
    """Group element carried as an opaque word label plus its iota_p matrix.

    Matrix entries are exact Fractions (split fixtures) or PadicNumbers."""

    __slots__ = ("word", "mat")

    def __init__(self, word, mat):
        self.word = tuple(word)
        self.mat = tuple(tuple(row) for row in mat)

    def __mul__(self, other):
        (a, b), (c, d) = self.mat
        (e, f), (g, h) = other.mat
        mat = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return GroupElement(_reduce_word(self.word + other.word), mat)

    def inverse(self):
        (a, b), (c, d) = self.mat
        det = a * d - b * c
        inv = ent_inv(det)
        mat = ((d * inv, -b * inv), (-c * inv, a * inv))
        inv_word = tuple((lbl, -e) for lbl, e in reversed(self.word))
        return GroupElement(_reduce_word(inv_word), mat)

    def act(self, e: TreeEdge):
        return act(self.mat, e)

    def matrix_eq(self, other):
        for i in range(2):
            for j in range(2):
                d = self.mat[i][j] - other.mat[i][j]
                if not ent_is_zero(d):
                    return False
        return True

    def __repr__(self):
        return "*".join(f"{l}^{e}" if e != 1 else l for l, e in self.word) or "1"


def _reduce_word(word):
    out = []
    for lbl, e in word:
        if e == 0:
            continue
        if out and out[-1][0] == lbl:
            e2 = out[-1][1] + e
            out.pop()
            if e2:
                out.append((lbl, e2))
        else:
            out.append((lbl, e))
    return tuple(out)


class RadialSystem:
    """gamma_e for even edges up to a level cap, built from Upsilon and omega_p.

    Upsilon = [gamma_0 = 1, gamma_1, ..., gamma_p] with iota_p(gamma_i) in
    Iwahori * (0 -1; 1 i); omega_p has iota_p = Iwahori * (0 -1; pi 0).
    gamma_e satisfies gamma_e^-1(e_*) = e.
    """

    def __init__(self, p, upsilon, omega, level_cap=6, validate=True):
        self.p = p
        self.upsilon = upsilon
        self.omega = omega
        self.level_cap = level_cap
        if validate:
            self._validate_local_forms()
        self.gamma_tilde = [None]
        for i in range(1, p + 1):
            gt = omega * upsilon[i] * omega
            gt = GroupElement(gt.word, _scale_matrix(gt.mat, -1, p))
            self.gamma_tilde.append(gt)
        self._gamma_e = {}
        self._build()

    def _validate_local_forms(self):
        p = self.p
        for i, g in enumerate(self.upsilon):
            if i == 0:
                continue
            # iota(g) = u (0 -1; 1 i) with u Iwahori, i.e. g * (i 1; -1 0) Iwahori
            winv = ((Fraction(i), Fraction(1)), (Fraction(-1), Fraction(0)))
            u = _matmul(g.mat, winv)
            if not _is_iwahori(u, p):
                raise LocalFormViolation(f"upsilon[{i}] local form fails")
        winv = ((Fraction(0), Fraction(1, p)), (Fraction(-1), Fraction(0)))
        u = _matmul(self.omega.mat, winv)
        if not _is_iwahori(u, p):
            raise LocalFormViolation("omega_p local form fails")

    def _build(self):
        """Breadth-first over words in Upsilon and the omega-conjugates; depth
        equals the word length, which reaches every even edge eventually."""
        p = self.p
        base = TreeEdge.base(p)
        one = self.upsilon[0]
        self._gamma_e[base.key()] = one
        frontier = [(base, one)]
        seen = {base.key()}
        for _depth in range(self.level_cap):
            new_frontier = []
            for e, ge in frontier:
                for letter in list(self.upsilon[1:]) + list(self.gamma_tilde[1:]):
                    g2 = letter * ge
                    e2 = g2.inverse().act(base)
                    if e2.parity != 0:
                        continue
                    if e2.key() in seen:
                        continue
                    seen.add(e2.key())
                    self._gamma_e[e2.key()] = g2
                    new_frontier.append((e2, g2))
            frontier = new_frontier

    def gamma_of(self, e: TreeEdge):
        if e.parity != 0:
            raise ValueError("radial representatives index even edges")
        key = e.key()
        if key not in self._gamma_e:
            raise CapExceeded(f"edge {e} beyond cached level cap {self.level_cap}")
        return self._gamma_e[key]

    def even_edges(self):
        return list(self._gamma_e.keys())

    def verify(self):
        base = TreeEdge.base(self.p)
        for key, g in self._gamma_e.items():
            e = TreeEdge(self.p, *key)
            if g.inverse().act(base) != e:
                return False
        return True


def _scale_matrix(mat, pshift, p):
    out = []
    for row in mat:
        new_row = []
        for x in row:
            if isinstance(x, PadicNumber):
                new_row.append(x if x.is_zero()
                               else PadicNumber(x.ctx, x.val + pshift, x.unit, x.prec))
            else:
                new_row.append(Fraction(x) * Fraction(p) ** pshift)
        out.append(tuple(new_row))
    return tuple(out)


def _matmul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _is_iwahori(m, p):
    (a, b), (c, d) = m
    det = a * d - b * c
    if ent_is_zero(det) or ent_val(det, p) != 0:
        return False
    for x in (a, b, d):
        if ent_val(x, p) < 0:
            return False
    if ent_val(c, p) < 1:
        return False
    return ent_val(a, p) == 0 and ent_val(d, p) == 0


def h_of(g: GroupElement, e: TreeEdge, system: RadialSystem):
    """h(g, e) = gamma_e g gamma_{g^-1 e}^-1, in Gamma_0(pm) locally."""
    ge = system.gamma_of(e)
    e2 = g.inverse().act(e)
    ge2 = system.gamma_of(e2)
    h = ge * g * ge2.inverse()
    return h
