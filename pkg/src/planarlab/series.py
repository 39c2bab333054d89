"""Exact truncated bivariate power series with species operations.

A :class:`Series` stores coefficients of x^a y^b up to a truncation pair
(max_x, max_y), always as exact rationals.  Two labelling conventions are
supported:

* ``LABELLED_X``: exponential in x, ordinary in y.  The *stored* coefficient
  of x^a y^b is already divided by a!, which turns the species product into a
  plain convolution and SET into a plain exponential.  Counts are recovered
  with :meth:`Series.labelled_count`.
* ``PLAIN``: ordinary in both variables (asymmetric structures such as
  corner-rooted maps).

A series may also be constructed with x pre-substituted by an exact rational
``x_value``; it then collapses to a univariate series in y (max_x = 0), which
is how the high-order tilted runs are carried out.

No floating point ever enters this module; every operation is exact.
"""

from __future__ import annotations

import enum
import json
from typing import Callable, Dict, Iterable, Optional, Tuple

from gmpy2 import mpq, mpz

from ._rings import PolyRing, ScalarRing, solve_uv_kernel

Q = mpq  # short alias used across the package


class Convention(enum.Enum):
    LABELLED_X = "labelled-x"
    PLAIN = "plain"


class SeriesError(ValueError):
    """Raised on convention mismatches and violated preconditions."""


def _factorial(n: int) -> mpz:
    out = mpz(1)
    for k in range(2, n + 1):
        out *= k
    return out


class Series:
    """Truncated bivariate power series with exact rational coefficients."""

    __slots__ = ("max_x", "max_y", "convention", "x_value", "_c")

    def __init__(self, max_x, max_y, coeffs=None, convention=Convention.PLAIN,
                 x_value=None):
        if max_x < 0 or max_y < 0:
            raise SeriesError("truncation orders must be >= 0")
        if x_value is not None and max_x != 0:
            raise SeriesError("x-evaluated series must have max_x = 0")
        self.max_x = int(max_x)
        self.max_y = int(max_y)
        self.convention = convention
        self.x_value = None if x_value is None else mpq(x_value)
        self._c: Dict[Tuple[int, int], mpq] = {}
        if coeffs:
            for (a, b), val in coeffs.items():
                if a <= self.max_x and b <= self.max_y:
                    v = mpq(val)
                    if v != 0:
                        self._c[(a, b)] = v

    # -- basic access ------------------------------------------------------

    def coeff(self, a: int, b: int) -> mpq:
        return self._c.get((a, b), mpq(0))

    __getitem__ = lambda self, ab: self.coeff(*ab)

    def labelled_count(self, a: int, b: int) -> mpq:
        """a! times the stored coefficient; the weighted count of structures."""
        if self.convention is not Convention.LABELLED_X:
            raise SeriesError("labelled_count only applies to LABELLED_X series")
        return self.coeff(a, b) * _factorial(a)

    def items(self):
        return self._c.items()

    def y_slice(self, b: int):
        """Dense list of x-coefficients of y^b."""
        out = [mpq(0)] * (self.max_x + 1)
        for (a, bb), v in self._c.items():
            if bb == b:
                out[a] = v
        return out

    def x_slice_sum(self, a: int) -> mpq:
        """Sum of all y-coefficients at x^a, i.e. the x^a coefficient at y=1."""
        return sum((v for (aa, _), v in self._c.items() if aa == a), mpq(0))

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> Optional[int]:
        """Smallest total degree with a nonzero coefficient (None if zero)."""
        if not self._c:
            return None
        return min(a + b for a, b in self._c)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.convention is other.convention
                and self.x_value == other.x_value
                and self.max_x == other.max_x and self.max_y == other.max_y
                and self._c == other._c)

    def __repr__(self):
        terms = sorted(self._c)[:6]
        inner = ", ".join(f"x^{a}y^{b}:{self._c[(a, b)]}" for a, b in terms)
        more = "" if len(self._c) <= 6 else f", ... ({len(self._c)} terms)"
        return (f"Series({self.convention.value}, max_x={self.max_x}, "
                f"max_y={self.max_y}, {{{inner}{more}}})")

    # -- construction helpers ---------------------------------------------

    def _like(self, coeffs, max_x=None, max_y=None) -> "Series":
        return Series(self.max_x if max_x is None else max_x,
                      self.max_y if max_y is None else max_y,
                      coeffs, self.convention, self.x_value)

    def _check_compatible(self, other: "Series", op: str):
        if self.convention is not other.convention:
            raise SeriesError(f"{op}: convention mismatch "
                              f"({self.convention.value} vs {other.convention.value})")
        if self.x_value != other.x_value:
            raise SeriesError(f"{op}: series evaluated at different x values")

    # -- ring operations ----------------------------------------------------

    def add(self, other: "Series") -> "Series":
        self._check_compatible(other, "add")
        mx, my = min(self.max_x, other.max_x), min(self.max_y, other.max_y)
        out = {}
        for (a, b), v in self._c.items():
            if a <= mx and b <= my:
                out[(a, b)] = v
        for (a, b), v in other._c.items():
            if a <= mx and b <= my:
                out[(a, b)] = out.get((a, b), mpq(0)) + v
        return self._like(out, mx, my)

    def sub(self, other: "Series") -> "Series":
        return self.add(other.scale(-1))

    __add__ = add
    __sub__ = sub

    def scale(self, q) -> "Series":
        q = mpq(q)
        return self._like({k: v * q for k, v in self._c.items()})

    def mul(self, other: "Series") -> "Series":
        self._check_compatible(other, "mul")
        mx, my = min(self.max_x, other.max_x), min(self.max_y, other.max_y)
        out: Dict[Tuple[int, int], mpq] = {}
        small, big = (self._c, other._c) if len(self._c) <= len(other._c) \
            else (other._c, self._c)
        for (a1, b1), v1 in small.items():
            if a1 > mx or b1 > my:
                continue
            for (a2, b2), v2 in big.items():
                a, b = a1 + a2, b1 + b2
                if a <= mx and b <= my:
                    out[(a, b)] = out.get((a, b), mpq(0)) + v1 * v2
        return self._like(out, mx, my)

    __mul__ = mul

    def shift_y(self, k: int = 1) -> "Series":
        """Multiply by y^k."""
        out = {(a, b + k): v for (a, b), v in self._c.items() if b + k <= self.max_y}
        return self._like(out)

    def shift_x(self, k: int = 1) -> "Series":
        """Multiply by x^k (PLAIN) -- for LABELLED_X use mul by an atom series."""
        out = {(a + k, b): v for (a, b), v in self._c.items() if a + k <= self.max_x}
        return self._like(out)

    # -- substitution and composites ----------------------------------------

    def substitute_y(self, g: "Series") -> "Series":
        """Replace y by g; g must have zero constant term."""
        self._check_compatible(g, "substitute_y")
        if g.coeff(0, 0) != 0:
            raise SeriesError("substitute_y: inner series has nonzero constant term")
        mx, my = min(self.max_x, g.max_x), min(self.max_y, g.max_y)
        b_max = max((b for (_, b) in self._c), default=0)
        # Horner in the y-variable
        out = _const_like(self, 0, mx, my)
        for b in range(b_max, -1, -1):
            out = out.mul(g)
            fb = self._like({(a, 0): v for (a, bb), v in self._c.items()
                             if bb == b and a <= mx}, mx, my)
            out = out.add(fb)
        return out

    def substitute_x(self, g: "Series") -> "Series":
        """Replace x by g (EGF composition under LABELLED_X); g(0,0) must be 0."""
        self._check_compatible(g, "substitute_x")
        if g.coeff(0, 0) != 0:
            raise SeriesError("substitute_x: inner series has nonzero constant term")
        if self.x_value is not None:
            raise SeriesError("substitute_x: series has x already evaluated")
        mx, my = min(self.max_x, g.max_x), min(self.max_y, g.max_y)
        a_max = max((a for (a, _) in self._c), default=0)
        out = _const_like(self, 0, mx, my)
        for a in range(a_max, -1, -1):
            out = out.mul(g)
            fa = self._like({(0, b): v for (aa, b), v in self._c.items()
                             if aa == a and b <= my}, mx, my)
            out = out.add(fa)
        return out

    def seq(self) -> "Series":
        """SEQ(f) = 1/(1-f); requires zero constant term."""
        if self.coeff(0, 0) != 0:
            raise SeriesError("seq: nonzero constant term")
        # s = 1 + f*s, fixed in <= max_x+max_y+1 rounds by valuation gain
        one = _const_like(self, 1)
        s = one
        for _ in range(self.max_x + self.max_y + 1):
            nxt = one.add(self.mul(s))
            if nxt == s:
                return s
            s = nxt
        return s

    def seq_ge(self, k: int) -> "Series":
        """SEQ_{>=k}(f) = f^k/(1-f)."""
        out = self.seq()
        for _ in range(k):
            out = out.mul(self)
        return out

    def set(self) -> "Series":
        """SET(f) = exp(f); LABELLED_X only, zero constant term required."""
        return self.set_ge(0)

    def set_ge(self, kmin: int) -> "Series":
        """SET_{>=kmin}(f) = exp(f) minus the first kmin Taylor terms."""
        if self.convention is not Convention.LABELLED_X:
            raise SeriesError("set: SET requires the LABELLED_X convention")
        if self.coeff(0, 0) != 0:
            raise SeriesError("set: nonzero constant term")
        val = self.valuation()
        if val is None:
            return _const_like(self, 1 if kmin <= 0 else 0)
        kmax = (self.max_x + self.max_y) // val
        out = _const_like(self, 1 if kmin <= 0 else 0)
        term = _const_like(self, 1)
        for k in range(1, kmax + 1):
            term = term.mul(self).scale(mpq(1, k))
            if k >= kmin:
                out = out.add(term)
        return out

    # -- calculus -----------------------------------------------------------

    def derive_x(self) -> "Series":
        if self.x_value is not None:
            raise SeriesError("derive_x: x already evaluated")
        out = {}
        for (a, b), v in self._c.items():
            if a >= 1:
                out[(a - 1, b)] = v * a
        return self._like(out)

    def derive_y(self) -> "Series":
        out = {}
        for (a, b), v in self._c.items():
            if b >= 1:
                out[(a, b - 1)] = v * b
        return self._like(out)

    def integrate_y(self, const_term: "Series") -> "Series":
        """Antiderivative in y; const_term supplies the y^0 slice."""
        self._check_compatible(const_term, "integrate_y")
        if any(b != 0 for (_, b) in const_term._c):
            raise SeriesError("integrate_y: const_term must be a pure x-series")
        out = {}
        for (a, b), v in self._c.items():
            if b + 1 <= self.max_y:
                out[(a, b + 1)] = v / (b + 1)
        for (a, _), v in const_term._c.items():
            if a <= self.max_x:
                out[(a, 0)] = v
        return self._like(out)

    # -- numerics (boundary only; does not affect exactness inside) ---------

    def eval_fractions(self, x=None, y=None) -> mpq:
        """Exact evaluation of the truncated polynomial at rational points."""
        xv = None if x is None else mpq(x)
        yv = None if y is None else mpq(y)
        tot = mpq(0)
        for (a, b), v in self._c.items():
            term = v
            if xv is not None:
                term *= xv ** a
            if yv is not None:
                term *= yv ** b
            tot += term
        return tot

    # -- cache format --------------------------------------------------------

    def to_cache_obj(self, class_id: str, t=None):
        coeffs = [[a, b, f"{v.numerator}/{v.denominator}"]
                  for (a, b), v in sorted(self._c.items())]
        tval = self.x_value if t is None else mpq(t)
        return {
            "class-id": class_id,
            "t": None if tval is None else f"{tval.numerator}/{tval.denominator}",
            "convention": self.convention.value,
            "max_x": self.max_x,
            "max_y": self.max_y,
            "coeffs": coeffs,
        }

    @staticmethod
    def from_cache_obj(obj) -> "Series":
        conv = Convention(obj["convention"])
        t = obj.get("t")
        coeffs = {(a, b): mpq(s) for a, b, s in obj["coeffs"]}
        return Series(obj["max_x"], obj["max_y"], coeffs, conv,
                      x_value=None if t is None else mpq(t))

    def dump_json(self, path, class_id: str, t=None):
        with open(path, "w") as fh:
            json.dump(self.to_cache_obj(class_id, t), fh)

    @staticmethod
    def load_json(path) -> "Series":
        with open(path) as fh:
            return Series.from_cache_obj(json.load(fh))


def _const_like(s: Series, value, max_x=None, max_y=None) -> Series:
    return Series(s.max_x if max_x is None else max_x,
                  s.max_y if max_y is None else max_y,
                  {(0, 0): mpq(value)}, s.convention, s.x_value)


# -- constructors ------------------------------------------------------------

def zero(max_x, max_y, convention=Convention.PLAIN, x_value=None) -> Series:
    return Series(max_x, max_y, {}, convention, x_value)


def one(max_x, max_y, convention=Convention.PLAIN, x_value=None) -> Series:
    return Series(max_x, max_y, {(0, 0): 1}, convention, x_value)


def monomial(max_x, max_y, a, b, coef=1, convention=Convention.PLAIN,
             x_value=None) -> Series:
    return Series(max_x, max_y, {(a, b): coef}, convention, x_value)


def x_atom(max_x, max_y, convention=Convention.PLAIN) -> Series:
    """The single-atom series x (stored coefficient is 1 in both conventions)."""
    return Series(max_x, max_y, {(1, 0): 1}, convention)


def y_atom(max_x, max_y, convention=Convention.PLAIN, x_value=None) -> Series:
    return Series(max_x, max_y, {(0, 1): 1}, convention, x_value)


def from_y_coeffs(coeffs: Iterable, max_y=None, convention=Convention.PLAIN,
                  x_value=None) -> Series:
    """Univariate-in-y series from a coefficient list."""
    coeffs = list(coeffs)
    if max_y is None:
        max_y = len(coeffs) - 1
    return Series(0, max_y, {(0, b): c for b, c in enumerate(coeffs)},
                  convention, x_value)


# -- fixed points -------------------------------------------------------------

def _agreement_degree(f: Series, g: Series) -> Optional[int]:
    """Total degree below which f and g agree (None = identical)."""
    diff = f.sub(g)
    return diff.valuation() if not diff.is_zero() else None


def fixed_point_y(rhs: Callable[[Series], Series], max_x, max_y,
                  convention=Convention.PLAIN, x_value=None) -> Series:
    """Solve Z = rhs(Z) for the unique truncated series fixed point.

    rhs must be contracting in the valuation metric (all grammar equations
    are, thanks to their leading y, z or x factor).  Runs at most
    max_x + max_y + 1 rounds and asserts that one further application leaves
    the result unchanged; raises if a round fixes no new coefficients.
    """
    z = zero(max_x, max_y, convention, x_value)
    agree = -1
    for _ in range(max_x + max_y + 1):
        nxt = rhs(z)
        deg = _agreement_degree(nxt, z)
        if deg is None:
            z = nxt
            break
        if deg <= agree:
            raise SeriesError("fixed_point_y: no contraction "
                              f"(agreement stuck at degree {deg})")
        agree, z = deg, nxt
    final = rhs(z)
    if final != z:
        raise SeriesError("fixed_point_y: iteration did not stabilise "
                          "within max_x + max_y + 1 rounds")
    return z


def solve_uv_system(max_x, max_y, x_value=None) -> Tuple[Series, Series]:
    """The unique series pair solving u = xy(1+v)^2, v = y(1+u)^2.

    With ``x_value`` set, x is pre-substituted and the result is univariate
    in y.  The solution is found order-by-order (the joint system is
    valuation-contracting) and the defining residual is exactly zero up to
    the truncation, which callers may re-assert cheaply.
    """
    if x_value is not None:
        ring = ScalarRing()
        u_l, v_l = solve_uv_kernel(ring, mpq(x_value), max_y)
        u = from_y_coeffs(u_l, max_y, Convention.PLAIN, x_value)
        v = from_y_coeffs(v_l, max_y, Convention.PLAIN, x_value)
        return u, v
    ring = PolyRing(max_x)
    u_l, v_l = solve_uv_kernel(ring, ring.monomial(1), max_y)
    u = Series(max_x, max_y, {(a, b): c for b, sl in enumerate(u_l)
                              for a, c in enumerate(sl) if c != 0})
    v = Series(max_x, max_y, {(a, b): c for b, sl in enumerate(v_l)
                              for a, c in enumerate(sl) if c != 0})
    return u, v


# -- weight sequences ---------------------------------------------------------

class WeightSequence:
    """Finite truncation of a weight sequence (omega_k), exact rationals."""

    def __init__(self, weights, source: str = "", t=None):
        self.weights = [mpq(w) for w in weights]
        self.source = source
        self.t = None if t is None else mpq(t)
        if not self.weights or self.weights[0] <= 0:
            raise SeriesError("weight sequence needs omega_0 > 0")
        if not any(w > 0 for w in self.weights[2:]):
            raise SeriesError("weight sequence needs omega_k > 0 for some k >= 2")

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, k):
        return self.weights[k]

    def phi_at(self, tau) -> mpq:
        """phi(tau) = sum omega_k tau^k over the stored support."""
        tau = mpq(tau)
        acc, power = mpq(0), mpq(1)
        for w in self.weights:
            acc += w * power
            power *= tau
        return acc

    def phi_prime_at(self, tau) -> mpq:
        """phi'(tau) = sum k omega_k tau^(k-1) over the stored support."""
        tau = mpq(tau)
        acc, power = mpq(0), mpq(1)  # power = tau^(k-1)
        for k, w in enumerate(self.weights):
            if k >= 1:
                acc += w * k * power
                power *= tau
        return acc
