"""Small-dimension lattice reduction over the Minkowski embedding.

Used to find short ideal generators; dimensions are <= 4 so a plain
floating-point LLL with exact integer row operations is enough.
"""

from __future__ import annotations

import itertools

import numpy as np


def minkowski_matrix(field, prec=64):
    """Rows = embedding images of the power basis (real; complex split)."""
    r, s = field.signature
    roots = field.embeddings(prec)
    cols = []
    d = field.degree
    M = np.zeros((d, d))
    for j in range(d):
        row = []
        for i in range(r):
            row.append(float(roots[i].real) ** j if j else 1.0)
        for i in range(r, r + s):
            z = roots[i] ** j if j else 1
            row.append(float((2 ** 0.5)) * float(z.real if j else 1.0))
            row.append(float((2 ** 0.5)) * float(z.imag if j else 0.0))
        M[j] = row
    return M  # shape (degree, degree); element coords @ M = embedding vector


def lll_reduce(rows, gram_map):
    """LLL on integer rows; gram_map sends an int row to a float vector."""
    basis = [list(map(int, r)) for r in rows]
    n = len(basis)

    def vec(b):
        return gram_map(b)

    delta = 0.75
    k = 1
    guard = 0
    while k < n and guard < 10000:
        guard += 1
        emb = [vec(b) for b in basis]
        # Gram-Schmidt
        ortho = []
        mu = [[0.0] * n for _ in range(n)]
        for i in range(n):
            v = np.array(emb[i], dtype=float)
            for j in range(i):
                denom = float(np.dot(ortho[j], ortho[j]))
                mu[i][j] = float(np.dot(emb[i], ortho[j])) / denom if denom else 0.0
                v = v - mu[i][j] * ortho[j]
            ortho.append(v)
        # size reduce k
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                emb[k] = vec(basis[k])
                for jj in range(j + 1):
                    denom = float(np.dot(ortho[jj], ortho[jj]))
                    mu[k][jj] = float(np.dot(emb[k], ortho[jj])) / denom if denom else 0.0
        # Lovasz
        lhs = float(np.dot(ortho[k], ortho[k]))
        rhs = (delta - mu[k][k - 1] ** 2) * float(np.dot(ortho[k - 1], ortho[k - 1]))
        if lhs >= rhs:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            k = max(k - 1, 1)
    return basis


def short_vectors(basis, gram_map, radius=3):
    """Small integer combinations of the basis rows, sorted by embedded length."""
    n = len(basis)
    combos = []
    for co in itertools.product(range(-radius, radius + 1), repeat=n):
        if all(c == 0 for c in co):
            continue
        v = [sum(c * basis[i][j] for i, c in enumerate(co)) for j in range(len(basis[0]))]
        w = gram_map(v)
        combos.append((float(np.dot(w, w)), v))
    combos.sort(key=lambda t: (t[0], [abs(x) for x in t[1]]))
    return [v for _, v in combos]
