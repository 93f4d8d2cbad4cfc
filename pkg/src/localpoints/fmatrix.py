"""Exact 2x2 matrices over a number field, with PGL-normalized keys."""

from __future__ import annotations

from fractions import Fraction


class FMat:
    __slots__ = ("F", "a", "b", "c", "d")

    def __init__(self, F, a, b, c, d):
        self.F = F
        self.a = F.coerce(a)
        self.b = F.coerce(b)
        self.c = F.coerce(c)
        self.d = F.coerce(d)

    @classmethod
    def identity(cls, F):
        return cls(F, 1, 0, 0, 1)

    @classmethod
    def upper(cls, F, x):
        return cls(F, 1, x, 0, 1)

    @classmethod
    def lower(cls, F, y):
        return cls(F, 1, 0, y, 1)

    @classmethod
    def s_matrix(cls, F):
        return cls(F, 0, -1, 1, 0)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __mul__(self, o):
        return FMat(self.F,
                    self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self):
        det = self.det()
        inv = det.inverse()
        return FMat(self.F, self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = FMat.identity(self.F)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return FMat(self.F, -self.a, -self.b, -self.c, -self.d)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def key_pgl(self):
        """Hashable key of the class modulo scalars (sign-normalized for +-1)."""
        ent = self.entries()
        for e in ent:
            if not e.is_zero():
                lead = e
                break
        inv = lead.inverse()
        norm = tuple((x * inv).co for x in ent)
        return norm

    def __eq__(self, o):
        return isinstance(o, FMat) and self.key_pgl() == o.key_pgl()

    def __hash__(self):
        return hash(self.key_pgl())

    def is_upper_triangular(self):
        return self.c.is_zero()

    def embed(self, i, prec):
        return [[self.a.embed(i, prec), self.b.embed(i, prec)],
                [self.c.embed(i, prec), self.d.embed(i, prec)]]

    def mobius_h(self, z, i, prec):
        """Action on the upper half plane via the i-th (real) embedding."""
        m = self.embed(i, prec)
        return (m[0][0] * z + m[0][1]) / (m[1][0] * z + m[1][1])

    def __repr__(self):
        return f"[{self.a}, {self.b}; {self.c}, {self.d}]"
