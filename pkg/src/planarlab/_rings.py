"""Coefficient rings for the order-by-order series solvers.

The grammar systems are solved once per truncation order, with coefficients
living either in Q (series already evaluated at a rational vertex weight) or
in the truncated polynomial ring Q[x]/(x^(max_x+1)) (fully bivariate series).
Keeping the two behind one tiny interface lets a single solver drive both.
"""

from gmpy2 import mpq


class ScalarRing:
    """Exact rationals."""

    def zero(self):
        return mpq(0)

    def one(self):
        return mpq(1)

    def from_q(self, q):
        return mpq(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, q):
        return a * q

    def is_zero(self, a):
        return a == 0


class PolyRing:
    """Dense truncated polynomials over Q, coefficient lists of fixed length.

    Elements are tuples of mpq of length max_x + 1; products drop every term
    above the truncation order.
    """

    def __init__(self, max_x):
        self.max_x = max_x
        self._zero = tuple([mpq(0)] * (max_x + 1))

    def zero(self):
        return self._zero

    def one(self):
        c = [mpq(0)] * (self.max_x + 1)
        c[0] = mpq(1)
        return tuple(c)

    def from_q(self, q):
        c = [mpq(0)] * (self.max_x + 1)
        c[0] = mpq(q)
        return tuple(c)

    def monomial(self, a, q=1):
        c = [mpq(0)] * (self.max_x + 1)
        if a <= self.max_x:
            c[a] = mpq(q)
        return tuple(c)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        n = self.max_x
        out = [mpq(0)] * (n + 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] += ai * bj
        return tuple(out)

    def scale(self, a, q):
        if q == 0:
            return self._zero
        q = mpq(q)
        return tuple(x * q for x in a)

    def is_zero(self, a):
        return all(x == 0 for x in a)


def solve_uv_kernel(ring, x_elem, n_y):
    """Solve u = x*y*(1+v)^2, v = y*(1+u)^2 up to y-order n_y.

    Returns (u, v) as lists of ring elements indexed by the y-exponent.
    The system is valuation-contracting, so coefficients are fixed one
    y-order at a time; (1+u)^2 and (1+v)^2 are maintained incrementally.
    """
    zero, one = ring.zero(), ring.one()
    u = [zero] * (n_y + 1)
    v = [zero] * (n_y + 1)
    sq_v = [one] + [zero] * n_y   # (1+v)^2
    sq_u = [one] + [zero] * n_y   # (1+u)^2
    for n in range(1, n_y + 1):
        u[n] = ring.mul(x_elem, sq_v[n - 1])
        v[n] = sq_u[n - 1]
        s = ring.scale(v[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(v[i], v[n - i]))
        sq_v[n] = s
        s = ring.scale(u[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(u[i], u[n - i]))
        sq_u[n] = s
    return u, v
