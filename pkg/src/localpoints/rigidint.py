"""Harmonic cocycles, Shapiro measures, Riemann-product integration, homology
rewriting, and assembly of the non-archimedean point.

Measures are integer-valued functions on oriented tree edges, antisymmetric
under orientation reversal and with vanishing vertex sums; integration against
a degree-zero divisor of H_p is a limit of Riemann products over the level
covers of P^1(Q_p).
"""

from __future__ import annotations

from fractions import Fraction

from .bttree import (TreeEdge, cover, GroupElement, RadialSystem, h_of,
                     _is_iwahori, ent_is_zero, CapExceeded)
from .padic import QuadElt, padic_log


class HarmonicityViolation(ValueError):
    def __init__(self, msg, vertex=None):
        super().__init__(msg)
        self.vertex = vertex


class LevelExceedsTruncation(ValueError):
    pass


class WordRewriteFailure(ValueError):
    pass


class MissingHeckeData(ValueError):
    pass


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

class Measure:
    def value(self, edge: TreeEdge):
        raise NotImplementedError

    def __add__(self, other):
        return SumMeasure([(self, 1), (other, 1)])

    def __rmul__(self, n):
        return SumMeasure([(self, int(n))])

    def total_on_cover(self, p, level):
        return sum(self.value(U) for U in cover(p, level))


class SumMeasure(Measure):
    def __init__(self, parts):
        self.parts = parts

    def value(self, edge):
        return sum(c * m.value(edge) for m, c in self.parts)


class PathMeasure(Measure):
    """mu(U) = [a in U] - [b in U]; the harmonic measure of the geodesic a->b."""

    def __init__(self, p, a, b):
        self.p = p
        self.a = a  # Fraction or 'inf'
        self.b = b

    def value(self, edge):
        return (1 if edge.contains(self.a) else 0) - (1 if edge.contains(self.b) else 0)


class HarmonicCocycle(Measure):
    """Explicit values on even edges up to a truncation depth, extended by
    antisymmetry.  Validated on construction."""

    def __init__(self, p, level, values, validate=True):
        self.p = p
        self.level = level  # cover depth: values known on cover(p, k<=level)
        self.values = {}    # edge key -> value (even edges)
        for key, v in values.items():
            self.values[key] = v
        if validate:
            self.validate()

    def value(self, edge):
        key = edge.key()
        if key in self.values:
            return self.values[key]
        opp = edge.opposite().key()
        if opp in self.values:
            return -self.values[opp]
        raise LevelExceedsTruncation(f"edge {edge} beyond truncation")

    def validate(self):
        """Antisymmetry is structural; check vertex sums and total measure."""
        p = self.p
        tot = self.total_on_cover(p, 0)
        if tot != 0:
            raise HarmonicityViolation(f"total measure {tot} != 0")
        # harmonicity at interior vertices: for each stored edge at depth k,
        # its value equals the sum over forward children (equivalent form of
        # the vanishing vertex sums, using antisymmetry)
        for k in range(0, self.level):
            for U in cover(p, k):
                try:
                    v = self.value(U)
                    kids = [self.value(c) for c in U.forward_children()]
                except LevelExceedsTruncation:
                    continue
                if v != sum(kids):
                    raise HarmonicityViolation(
                        f"vertex sum fails below edge {U}", vertex=U.target_vertex())

    @classmethod
    def from_residues(cls, p, level, residue_map):
        """residue_map: edge key -> value on all edges of the level covers."""
        return cls(p, level, residue_map, validate=True)


def measure_from_residues(p, level, residue_map):
    return HarmonicCocycle.from_residues(p, level, residue_map)


def measure_from_function(p, level, fn):
    """Tabulate fn over the covers up to `level` into a HarmonicCocycle."""
    vals = {}
    for k in range(level + 1):
        for U in cover(p, k):
            vals[U.key()] = fn(U)
    return HarmonicCocycle(p, level, vals)


class ShapiroMeasure(Measure):
    """mu_g(e) = phi(h(g, e)) through a radial system; defined on even edges
    and extended by antisymmetry."""

    def __init__(self, phi, g: GroupElement, system: RadialSystem):
        self.phi = phi
        self.g = g
        self.system = system
        self._cache = {}

    def value(self, edge):
        key = edge.key()
        if key in self._cache:
            return self._cache[key]
        if edge.parity == 0:
            h = h_of(self.g, edge, self.system)
            v = self.phi(h)
        else:
            opp = edge.opposite()
            h = h_of(self.g, opp, self.system)
            v = -self.phi(h)
        self._cache[key] = v
        return v


def shapiro_measure(phi, g, e, system):
    """phi(h(g,e)) for an even edge; odd edges by antisymmetry."""
    return ShapiroMeasure(phi, g, system).value(e)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def _ratio_at(tU, tau1, tau2):
    """(t_U - tau2)/(t_U - tau1) in the quadratic extension."""
    K = tau1.K
    t = K.rational(Fraction(tU))
    return (t - tau2) / (t - tau1)


def mult_integral(mu: Measure, tau1: QuadElt, tau2: QuadElt, level):
    """Riemann product over the level cover of P^1(Q_p)."""
    if isinstance(mu, HarmonicCocycle) and level > mu.level:
        raise LevelExceedsTruncation(f"level {level} > truncation {mu.level}")
    K = tau1.K
    out = K.one()
    for U in cover(K.p, level):
        m = mu.value(U)
        if m == 0:
            continue
        out = out * _ratio_at(U.sample_point(), tau1, tau2) ** int(m)
    return out


def add_integral(mu: Measure, tau1: QuadElt, tau2: QuadElt, level):
    """Riemann sum of log_p of the cover factors (Iwasawa branch)."""
    if isinstance(mu, HarmonicCocycle) and level > mu.level:
        raise LevelExceedsTruncation(f"level {level} > truncation {mu.level}")
    K = tau1.K
    out = K.zero()
    for U in cover(K.p, level):
        m = mu.value(U)
        if m == 0:
            continue
        out = out + padic_log(_ratio_at(U.sample_point(), tau1, tau2)) * K.rational(m)
    return out


def cross_ratio(a, b, tau1, tau2):
    """((tau2-a)(tau1-b)) / ((tau1-a)(tau2-b)); a, b rationals or 'inf'."""
    K = tau1.K
    if a == "inf":
        return (tau1 - Fraction(b)) / (tau2 - Fraction(b))
    if b == "inf":
        return (tau2 - Fraction(a)) / (tau1 - Fraction(a))
    a = K.rational(Fraction(a))
    b = K.rational(Fraction(b))
    return ((tau2 - a) * (tau1 - b)) / ((tau1 - a) * (tau2 - b))


# ---------------------------------------------------------------------------
# Hecke projection into harmonic cocycles
# ---------------------------------------------------------------------------

class HeckeData:
    """Double-coset representatives for T_l: Gamma alpha Gamma = sqcup Gamma alpha_j,
    with exact matrices (and the norm of l)."""

    def __init__(self, ell_norm, reps):
        self.ell_norm = int(ell_norm)
        self.reps = reps  # list of GroupElement (det of norm l)


def hecke_translate(g: GroupElement, hecke: HeckeData):
    """Resolve alpha_j g = g_j alpha_{sigma(j)} over the coset reps; returns
    [(g_j, alpha_j)].  The permutation is detected by integrality of
    alpha_j g alpha_k^-1 (the candidate must land back in the group)."""
    reps = hecke.reps
    parts = []
    for al in reps:
        target = al * g
        matched = None
        for ak in reps:
            cand = target * ak.inverse()
            if _integral_det_unit(cand):
                matched = (cand, ak)
                break
        if matched is None:
            raise MissingHeckeData("coset permutation unresolved; reps inconsistent")
        gj, _ = matched
        parts.append((gj, al))
    return parts


def _integral_det_unit(g: GroupElement):
    """Entries integral and determinant a unit (works for exact matrices)."""
    from .bttree import ent_val
    (a, b), (c, d) = g.mat
    det = a * d - b * c
    try:
        for x in (a, b, c, d):
            if isinstance(x, Fraction) and x.denominator != 1:
                return False
        if isinstance(det, Fraction):
            return abs(det) == 1
        return (not det.is_zero()) and det.val == 0
    except AttributeError:
        return False


def hecke_project(phi, gens, system: RadialSystem, hecke: HeckeData, level,
                  check_level=None):
    """(T_l - |l| - 1) applied to the Shapiro cocycle, evaluated on the group
    elements `gens`; returns a dict g.word -> HarmonicCocycle and validates
    harmonicity at the truncation."""
    out = {}
    for g in gens:
        parts = hecke_translate(g, hecke)

        def fn(U, g=g, parts=parts):
            acc = 0
            for gj, al in parts:
                e2 = _act_edge(al, U)
                acc += ShapiroMeasure(phi, gj, system).value(e2)
            acc -= (hecke.ell_norm + 1) * ShapiroMeasure(phi, g, system).value(U)
            return acc

        hc = measure_from_function(system.p, level if check_level is None else check_level, fn)
        out[g.word] = hc
    return out


def _act_edge(al: GroupElement, U: TreeEdge):
    return al.inverse().act(U)


# ---------------------------------------------------------------------------
# homology: Hecke action, degree-zero rewriting
# ---------------------------------------------------------------------------

class CyclePoint:
    """Point of H_p presented exactly: a QuadElt value."""

    def __init__(self, value: QuadElt):
        self.value = value


class Chain1:
    """Formal sum of g (x) D with D a list of (point, mult); points QuadElt."""

    def __init__(self, terms=None):
        self.terms = list(terms or [])  # (GroupElement, [(QuadElt, int)])

    def add(self, g, divisor):
        self.terms.append((g, list(divisor)))
        return self

    def degree_of(self, i):
        return sum(m for _, m in self.terms[i][1])


def hecke_on_cycle(cycle: Chain1, hecke: HeckeData):
    """T_l(gamma (x) D) = sum_j g_j (x) alpha_j^-1 D."""
    out = Chain1()
    for g, D in cycle.terms:
        for al in hecke.reps:
            target = al * g
            gj = None
            for ak in hecke.reps:
                cand = target * ak.inverse()
                if _integral_det_unit(cand):
                    gj = cand
                    break
            if gj is None:
                raise MissingHeckeData("coset permutation unresolved")
            alinv = al.inverse()
            newD = [(_mobius_quad(alinv.mat, z), m) for z, m in D]
            out.add(gj, newD)
    return out


def _mobius_quad(mat, z: QuadElt):
    (a, b), (c, d) = mat
    K = z.K

    def lift(x):
        if isinstance(x, Fraction) or isinstance(x, int):
            return K.rational(Fraction(x))
        return K(x, K.base.zero())

    num = lift(a) * z + lift(b)
    den = lift(c) * z + lift(d)
    return num / den


def _mat_key(g: GroupElement):
    """Hashable key of the matrix modulo sign (exact entries only)."""
    ent = [g.mat[0][0], g.mat[0][1], g.mat[1][0], g.mat[1][1]]
    ent = [Fraction(x) for x in ent]
    lead = next(x for x in ent if x != 0)
    sgn = -1 if lead < 0 else 1
    return tuple(sgn * x for x in ent)


def rewrite_homology(cycle: Chain1, word_letters, base_point: QuadElt):
    """Degree-zero form of a 1-cycle plus an explicit boundary certificate.

    word_letters: list of (GroupElement, +-1) whose ordered product (with -1
    meaning the inverse letter) is the identity, and whose signed multiset of
    matrix keys equals the degree word {g_i with multiplicity deg D_i} of the
    cycle.  With d(g|h (x) D) = h (x) g^-1 D - gh (x) D + g (x) D, the word
    filling converts the degree part into boundaries plus degree-zero terms.
    Returns (Chain1 degree-zero, certificate list of (g, h, D-as-pairs, coeff))."""
    deg0 = Chain1()
    degree_terms = []
    for g, D in cycle.terms:
        n = sum(m for _, m in D)
        D0 = list(D) + ([(base_point, -n)] if n else [])
        if _compress_divisor(D0):
            deg0.add(g, D0)
        if n:
            degree_terms.append((g, n))
    # signed multiset check over matrix keys
    need = {}
    for g, n in degree_terms:
        k = _mat_key(g)
        need[k] = need.get(k, 0) + n
    have = {}
    for g, e in word_letters:
        k = _mat_key(g)
        have[k] = have.get(k, 0) + e
    need = {k: v for k, v in need.items() if v}
    have = {k: v for k, v in have.items() if v}
    if need != have:
        raise WordRewriteFailure("certificate letters do not match the degree word")
    # ordered product must be the identity
    prod = None
    for g, e in word_letters:
        gg = g if e == 1 else g.inverse()
        prod = gg if prod is None else prod * gg
    if prod is not None:
        ident = prod * prod.inverse()
        if not prod.matrix_eq(ident):
            raise WordRewriteFailure("certificate word does not multiply to 1")
    certificate = []
    # filling of the trivial word: with prefixes P_j = xi_1 ... xi_j,
    #   sum_j xi_j (x) P_{j-1}^-1 x0 = d(sum_{j>=2} (P_{j-1}|xi_j (x) x0)) + junk,
    # and each letter term is the Z-piece g (x) x0 plus a degree-zero shift
    # (inverse letters via g^-1 (x) pt = d(g^-1|g (x) pt) - g (x) g pt + junk).
    prefix = None
    for g, e in word_letters:
        xi = g if e == 1 else g.inverse()
        if prefix is not None:
            certificate.append((prefix, xi, [(base_point, 1)], 1))
        pt = base_point if prefix is None else _mobius_quad(prefix.inverse().mat, base_point)
        if e == 1:
            corr = [(base_point, 1), (pt, -1)]
            if _compress_divisor(corr):
                deg0.add(g, corr)
        else:
            certificate.append((xi, g, [(pt, 1)], -1))
            gpt = _mobius_quad(g.mat, pt)
            corr = [(gpt, 1), (base_point, -1)]
            if _compress_divisor(corr):
                deg0.add(g, corr)
        prefix = xi if prefix is None else prefix * xi
    out = Chain1()
    for g, D in deg0.terms:
        comp = _compress_divisor(D)
        if comp:
            out.add(g, comp)
    return out, certificate


def verify_homology_certificate(cycle: Chain1, deg0: Chain1, certificate):
    """Formal check: d(certificate) == cycle - deg0 at the level of
    (matrix key, point) terms; exact, no integration involved."""
    terms = []  # (mat_key, point, mult)

    def emit(g, D, c):
        for z, m in D:
            if c * m:
                terms.append((_mat_key(g), z, c * m))

    for g, h, D, c in certificate:
        if c == 0:
            continue
        # d(g|h (x) D) = h (x) g^-1 D - gh (x) D + g (x) D
        ginv = g.inverse()
        emit(h, [(_mobius_quad(ginv.mat, z), m) for z, m in D], c)
        emit(g * h, D, -c)
        emit(g, D, c)
    for g, D in cycle.terms:
        emit(g, D, -1)
    for g, D in deg0.terms:
        emit(g, D, 1)
    # identity-labeled terms pair to zero under any cocycle; drop them
    live = []
    for k, z, m in terms:
        ident = _mat_key_is_identity(k)
        if not ident:
            live.append((k, z, m))
    # pairwise cancellation with exact point equality
    while live:
        k0, z0, m0 = live.pop()
        for i, (k1, z1, m1) in enumerate(live):
            if k0 == k1 and (z0 - z1).is_zero():
                tot = m0 + m1
                live.pop(i)
                if tot:
                    live.append((k0, z0, tot))
                break
        else:
            return False
    return True


def _mat_key_is_identity(k):
    return k[0] == k[3] and k[1] == 0 and k[2] == 0 and k[0] != 0


def _compress_divisor(D):
    acc = []
    for z, m in D:
        for i, (z0, m0) in enumerate(acc):
            if (z0 - z).is_zero():
                acc[i] = (z0, m0 + m)
                break
        else:
            acc.append((z, m))
    return [(z, m) for z, m in acc if m != 0]


def nonarch_darmon_point(cycle: Chain1, measure_of, level):
    """prod_i mult-integral(mu_{g_i}, pairs of D_i) in K_p^x.

    measure_of(g) returns the Measure for the group element g; divisors are
    evaluated pairwise against the base point ordering."""
    K = None
    out = None
    for g, D in cycle.terms:
        mu = measure_of(g)
        # write D = sum m_j (z_j) with sum m_j = 0; integrate as product of
        # (z_j vs z_ref) factors
        D = _compress_divisor(D)
        if not D:
            continue
        if sum(m for _, m in D) != 0:
            raise ValueError("cycle term without degree zero divisor")
        zref = D[0][0]
        for z, m in D[1:]:
            val = mult_integral(mu, zref, z, level) ** int(m)
            out = val if out is None else out * val
        if K is None:
            K = zref.K
    if out is None:
        return K.one() if K is not None else None
    return out
