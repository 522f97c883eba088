"""Arithmetic tables for the residue field k = F_q, q = p^m with p an odd prime.

Elements are represented by their index in [0, q): the element with base-p
digit vector (c_0, .., c_{m-1}) under the fixed power basis of
F_p[y]/(f) has index sum(c_i * p^i).  The modulus f is the first monic
irreducible of degree m in the same index order, so the encoding is
deterministic and reproducible across runs.

For m = 1 the index is the usual integer residue and all tables reduce to
arithmetic mod p.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(u, v, f, p):
    # u, v, f are little-endian coefficient lists; f monic of degree m
    m = len(f) - 1
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] = (out[i + j] + a * b) % p
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * f[j]) % p
    return out[:m] if len(out) >= m else out + [0] * (m - len(out))


def _find_irreducible(p, m):
    """First monic irreducible of degree m over F_p in index order.

    The index of x^m + sum c_i x^i is sum c_i p^i.  Smallness of p^m in
    practice (tables are built eagerly) keeps trial division affordable.
    """
    if m == 1:
        return [0, 1]

    def poly_from_index(idx, deg):
        cs = []
        for _ in range(deg):
            cs.append(idx % p)
            idx //= p
        return cs

    def divides(g, f):
        # trial division of monic f by monic g over F_p
        r = list(f)
        dg = len(g) - 1
        while len(r) - 1 >= dg:
            lead = r[-1]
            if lead:
                shift = len(r) - 1 - dg
                for j in range(dg + 1):
                    r[shift + j] = (r[shift + j] - lead * g[j]) % p
            r.pop()
        return all(c == 0 for c in r)

    for idx in range(p ** m):
        f = poly_from_index(idx, m) + [1]
        ok = True
        for d in range(1, m // 2 + 1):
            for gidx in range(p ** d):
                g = poly_from_index(gidx, d) + [1]
                if divides(g, f):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise RuntimeError("no irreducible found (unreachable)")


class GFTable:
    """Dense arithmetic tables for F_q.

    Attributes add/mul are q x q nested tuples, neg/inv are q-tuples
    (inv[0] = 0 as a sentinel, never a valid inverse).  The numpy mirrors
    np_add etc. support vectorized use.  ``prime`` flags q = p, where
    callers may use plain integer arithmetic mod p instead.
    """

    def __init__(self, p, m):
        assert is_prime(p) and p >= 3, "odd prime characteristic required"
        assert m >= 1
        self.p = p
        self.m = m
        self.q = q = p ** m
        self.prime = m == 1
        self.modulus = _find_irreducible(p, m)

        if m == 1:
            add = [[(a + b) % p for b in range(p)] for a in range(p)]
            mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            add = [[0] * q for _ in range(q)]
            mul = [[0] * q for _ in range(q)]
            digs = [self.digits(e) for e in range(q)]
            for a in range(q):
                for b in range(q):
                    add[a][b] = self.from_digits(
                        [(x + y) % p for x, y in zip(digs[a], digs[b])])
                    mul[a][b] = self.from_digits(
                        _poly_mul_mod(digs[a], digs[b], self.modulus, p))
        self.add = tuple(tuple(r) for r in add)
        self.mul = tuple(tuple(r) for r in mul)
        self.neg = tuple(self.from_digits([(-c) % p for c in self.digits(a)])
                         for a in range(q))
        inv = [0] * q
        for a in range(1, q):
            x = a
            # Fermat: a^(q-2)
            acc, e = 1, q - 2
            while e:
                if e & 1:
                    acc = self.mul[acc][x]
                x = self.mul[x][x]
                e >>= 1
            inv[a] = acc
        self.inv = tuple(inv)
        self.sub = tuple(tuple(self.add[a][self.neg[b]] for b in range(q))
                         for a in range(q))

        self.np_add = np.array(self.add, dtype=np.int64)
        self.np_sub = np.array(self.sub, dtype=np.int64)
        self.np_mul = np.array(self.mul, dtype=np.int64)
        self.np_neg = np.array(self.neg, dtype=np.int64)
        self.np_inv = np.array(self.inv, dtype=np.int64)

    def digits(self, e):
        out = []
        for _ in range(self.m):
            out.append(e % self.p)
            e //= self.p
        return out

    def from_digits(self, ds):
        e = 0
        for c in reversed(ds[:self.m]):
            e = e * self.p + (c % self.p)
        return e

    def pow(self, a, e):
        if e < 0:
            a = self.inv[a]
            e = -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul[acc][a]
            a = self.mul[a][a]
            e >>= 1
        return acc

    def is_square(self, a):
        """Whether a is a square in F_q (0 counts as a square)."""
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def least_nonresidue(self):
        """First quadratic nonresidue in the canonical enumeration.

        The enumeration starts with the prime-subfield lifts 1, 2, .., p-1
        (whose indices are just 1..p-1) and continues through the remaining
        indices in increasing order, so the choice is deterministic.
        """
        for a in range(1, self.q):
            if not self.is_square(a):
                return a
        raise RuntimeError("every element is a square; q must be even (excluded)")


@lru_cache(maxsize=None)
def gf_table(p, m=1):
    return GFTable(p, m)


def gf_by_order(q):
    """Table for F_q, factoring q = p^m."""
    for p in range(2, q + 1):
        if is_prime(p):
            m, t = 0, q
            while t % p == 0:
                t //= p
                m += 1
            if t == 1 and m >= 1:
                return gf_table(p, m)
            if q % p == 0:
                break
    raise ValueError(f"q = {q} is not an odd prime power")
