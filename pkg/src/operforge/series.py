"""Truncated Laurent series over exact rationals.

A series carries a window: coefficients at degrees below `prec` are exactly
known, anything at or above `prec` is unknown.  `prec = None` means the
series is an exact Laurent polynomial (the `exact_polynomial` state).  No
operation ever truncates silently; asking for a coefficient outside the
window raises PrecisionError.

LieSeries is the same thing with coefficients in a fixed simple Lie algebra,
stored as sparse vectors over the Chevalley basis of `rootdata`.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .errors import DomainError, PrecisionError
from .rootdata import vec_add, vec_scale

DEFAULT_PRECISION = 12

_SPACES = ("g", "b", "h", "n", "n-", "vcan")


def _min_prec(*precs):
    finite = [p for p in precs if p is not None]
    return min(finite) if finite else None


class ScalarSeries:
    """Laurent series sum_d a_d t^d with window discipline."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec=None):
        clean = {}
        for d, c in coeffs.items():
            c = Q(c)
            if c:
                if prec is not None and d >= prec:
                    continue
                clean[int(d)] = c
        self.coeffs = clean
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, prec=None):
        return cls({}, prec)

    @classmethod
    def one(cls):
        return cls({0: Q(1)})

    @classmethod
    def monomial(cls, coeff, degree, prec=None):
        return cls({degree: Q(coeff)}, prec)

    # -- window ----------------------------------------------------------

    @property
    def exact_polynomial(self):
        return self.prec is None

    def min_degree(self):
        """Lower edge of the window (smallest possibly-nonzero degree)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.prec

    def window(self):
        return (self.min_degree(), self.prec)

    def valuation(self):
        """Degree of the leading nonzero coefficient.

        Raises PrecisionError when the series is zero on its window but not
        exactly zero; returns None for the exact zero series.
        """
        if self.coeffs:
            return min(self.coeffs)
        if self.prec is None:
            return None
        raise PrecisionError(
            "series is zero on its window [.., %d); valuation unknown"
            % self.prec)

    def is_zero(self):
        return not self.coeffs and self.prec is None

    def coefficient(self, d):
        if self.prec is not None and d >= self.prec:
            raise PrecisionError(
                "coefficient at degree %d is outside the window [.., %d)"
                % (d, self.prec))
        return self.coeffs.get(d, Q(0))

    def residue_coefficient(self):
        return self.coefficient(-1)

    def truncate(self, prec):
        return ScalarSeries(self.coeffs, _min_prec(self.prec, prec))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScalarSeries):
            other = ScalarSeries({0: Q(other)})
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out.get(d, 0) + c
            if s:
                out[d] = s
            else:
                del out[d]
        return ScalarSeries(out, _min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return ScalarSeries({d: -c for d, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        if not isinstance(other, ScalarSeries):
            other = ScalarSeries({0: Q(other)})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Q(c)
        if not c:
            return ScalarSeries({}, self.prec)
        return ScalarSeries({d: c * v for d, v in self.coeffs.items()},
                            self.prec)

    def _vlb(self):
        # lower bound for the valuation, used in window propagation
        if self.coeffs:
            return min(self.coeffs)
        return self.prec  # None for exact zero

    def __mul__(self, other):
        if not isinstance(other, ScalarSeries):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            # a factor is zero on its window; the product is zero there too
            prec = None
            if self.prec is not None and other._vlb() is not None:
                prec = self.prec + other._vlb()
            if other.prec is not None and self._vlb() is not None:
                p2 = other.prec + self._vlb()
                prec = p2 if prec is None else min(prec, p2)
            return ScalarSeries({}, prec)
        p1 = None if self.prec is None else self.prec + other._vlb()
        p2 = None if other.prec is None else other.prec + self._vlb()
        prec = _min_prec(p1, p2)
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if prec is not None and d >= prec:
                    continue
                s = out.get(d, 0) + c1 * c2
                if s:
                    out[d] = s
                else:
                    del out[d]
        return ScalarSeries(out, prec)

    __rmul__ = __mul__

    def derivative(self):
        out = {d - 1: d * c for d, c in self.coeffs.items() if d}
        prec = None if self.prec is None else self.prec - 1
        return ScalarSeries(out, prec)

    def shift(self, k):
        """Multiply by t^k."""
        prec = None if self.prec is None else self.prec + k
        return ScalarSeries({d + k: c for d, c in self.coeffs.items()}, prec)

    def invert(self):
        """Multiplicative inverse on the propagated window."""
        if not self.coeffs:
            if self.prec is None:
                raise DomainError("the zero series has no inverse")
            raise PrecisionError(
                "cannot invert a series that is zero on its window")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        if self.prec is None:
            if len(self.coeffs) == 1:
                return ScalarSeries({-v: Q(1) / lead})
            depth = DEFAULT_PRECISION - 2 * v
        else:
            depth = self.prec - 2 * v
        # invert u = t^-v * self, a unit power series known mod t^(depth+v... )
        nterms = depth + v  # coefficients of the unit known below this bound
        u = {d - v: c for d, c in self.coeffs.items()}
        inv = {0: Q(1) / lead}
        for n in range(1, max(nterms, 0)):
            acc = Q(0)
            for k, c in u.items():
                if 0 < k <= n:
                    got = inv.get(n - k)
                    if got:
                        acc += c * got
            if acc:
                inv[n] = -acc / lead
        out = {d - v: c for d, c in inv.items() if c}
        return ScalarSeries(out, depth)

    def compose_scale(self, c):
        """Substitute t -> c*t for a nonzero rational c."""
        c = Q(c)
        if not c:
            raise DomainError("scale factor must be nonzero")
        return ScalarSeries({d: v * c ** d for d, v in self.coeffs.items()},
                            self.prec)

    def power(self, k):
        if k == 0:
            return ScalarSeries.one()
        base = self if k > 0 else self.invert()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, ScalarSeries)
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def agrees(self, other):
        """Exact equality of coefficients on the common window."""
        prec = _min_prec(self.prec, other.prec)
        degs = set(self.coeffs) | set(other.coeffs)
        for d in degs:
            if prec is not None and d >= prec:
                continue
            if self.coeffs.get(d, 0) != other.coeffs.get(d, 0):
                return False
        return True

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for d in sorted(self.coeffs):
                c = self.coeffs[d]
                if d == 0:
                    parts.append(str(c))
                elif d == 1:
                    parts.append("%s*t" % c)
                else:
                    parts.append("%s*t^%d" % (c, d))
            body = " + ".join(parts)
        tail = "" if self.prec is None else " + O(t^%d)" % self.prec
        return "<%s%s>" % (body, tail)


class LieSeries:
    """Laurent series with coefficients in a fixed Chevalley algebra."""

    __slots__ = ("algebra", "space", "coeffs", "prec")

    def __init__(self, algebra, space, coeffs, prec=None, validate=True):
        if space not in _SPACES:
            raise DomainError("unknown ambient space tag %r" % (space,))
        clean = {}
        for d, vec in coeffs.items():
            vec = {k: Q(v) for k, v in vec.items() if v}
            if vec:
                if prec is not None and d >= prec:
                    continue
                clean[int(d)] = vec
        self.algebra = algebra
        self.space = space
        self.coeffs = clean
        self.prec = prec
        if validate:
            self._check_membership()

    def _check_membership(self):
        allowed = _space_indices(self.algebra, self.space)
        if allowed is None:
            return
        for d, vec in self.coeffs.items():
            for k in vec:
                if k not in allowed:
                    raise DomainError(
                        "coefficient at degree %d leaves the %r subspace"
                        % (d, self.space))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, algebra, space="g", prec=None):
        return cls(algebra, space, {}, prec)

    @classmethod
    def constant(cls, algebra, vec, space="g", prec=None):
        return cls(algebra, space, {0: dict(vec)}, prec)

    @classmethod
    def from_scalar(cls, algebra, scalar, vec, space="g"):
        """scalar series times a fixed algebra vector."""
        coeffs = {d: vec_scale(vec, c) for d, c in scalar.coeffs.items()}
        return cls(algebra, space, coeffs, scalar.prec)

    # -- window ------------------------------------------------------------

    @property
    def exact_polynomial(self):
        return self.prec is None

    def min_degree(self):
        if self.coeffs:
            return min(self.coeffs)
        return self.prec

    def window(self):
        return (self.min_degree(), self.prec)

    def _vlb(self):
        if self.coeffs:
            return min(self.coeffs)
        return self.prec

    def coefficient(self, d):
        if self.prec is not None and d >= self.prec:
            raise PrecisionError(
                "coefficient at degree %d is outside the window [.., %d)"
                % (d, self.prec))
        return dict(self.coeffs.get(d, {}))

    def residue(self):
        return self.coefficient(-1)

    def truncate(self, prec):
        return LieSeries(self.algebra, self.space, self.coeffs,
                         _min_prec(self.prec, prec), validate=False)

    def retag(self, space):
        return LieSeries(self.algebra, space, self.coeffs, self.prec)

    # -- arithmetic ----------------------------------------------------------

    def _join_space(self, other):
        if self.space == other.space:
            return self.space
        return "g"

    def __add__(self, other):
        out = {d: dict(v) for d, v in self.coeffs.items()}
        for d, vec in other.coeffs.items():
            cur = out.setdefault(d, {})
            for k, v in vec.items():
                s = cur.get(k, 0) + v
                if s:
                    cur[k] = s
                else:
                    del cur[k]
        return LieSeries(self.algebra, self._join_space(other), out,
                         _min_prec(self.prec, other.prec), validate=False)

    def __neg__(self):
        return self.scale(Q(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        if not c:
            return LieSeries(self.algebra, self.space, {}, self.prec,
                             validate=False)
        return LieSeries(
            self.algebra, self.space,
            {d: {k: c * v for k, v in vec.items()}
             for d, vec in self.coeffs.items()},
            self.prec, validate=False)

    def scalar_mul(self, scalar):
        """Multiply by a ScalarSeries."""
        if not self.coeffs or not scalar.coeffs:
            prec = None
            if self.prec is not None and scalar._vlb() is not None:
                prec = self.prec + scalar._vlb()
            if scalar.prec is not None and self._vlb() is not None:
                p2 = scalar.prec + self._vlb()
                prec = p2 if prec is None else min(prec, p2)
            return LieSeries(self.algebra, self.space, {}, prec,
                             validate=False)
        p1 = None if self.prec is None else self.prec + scalar._vlb()
        p2 = None if scalar.prec is None else scalar.prec + self._vlb()
        prec = _min_prec(p1, p2)
        out = {}
        for d1, vec in self.coeffs.items():
            for d2, c in scalar.coeffs.items():
                d = d1 + d2
                if prec is not None and d >= prec:
                    continue
                cur = out.setdefault(d, {})
                for k, v in vec.items():
                    s = cur.get(k, 0) + c * v
                    if s:
                        cur[k] = s
                    else:
                        del cur[k]
        return LieSeries(self.algebra, self.space, out, prec, validate=False)

    def bracket(self, other):
        if self.algebra is not other.algebra:
            raise DomainError("bracket requires a common ambient algebra")
        br = self.algebra.chevalley.bracket
        if not self.coeffs or not other.coeffs:
            prec = None
            if self.prec is not None and other._vlb() is not None:
                prec = self.prec + other._vlb()
            if other.prec is not None and self._vlb() is not None:
                p2 = other.prec + self._vlb()
                prec = p2 if prec is None else min(prec, p2)
            return LieSeries(self.algebra, "g", {}, prec, validate=False)
        p1 = None if self.prec is None else self.prec + other._vlb()
        p2 = None if other.prec is None else other.prec + self._vlb()
        prec = _min_prec(p1, p2)
        out = {}
        for d1, v1 in self.coeffs.items():
            for d2, v2 in other.coeffs.items():
                d = d1 + d2
                if prec is not None and d >= prec:
                    continue
                img = br(v1, v2)
                if img:
                    cur = out.setdefault(d, {})
                    for k, v in img.items():
                        s = cur.get(k, 0) + v
                        if s:
                            cur[k] = s
                        else:
                            del cur[k]
        return LieSeries(self.algebra, "g", out, prec, validate=False)

    def derivative(self):
        out = {d - 1: {k: d * v for k, v in vec.items()}
               for d, vec in self.coeffs.items() if d}
        prec = None if self.prec is None else self.prec - 1
        return LieSeries(self.algebra, self.space, out, prec, validate=False)

    def shift(self, k):
        prec = None if self.prec is None else self.prec + k
        return LieSeries(self.algebra, self.space,
                         {d + k: vec for d, vec in self.coeffs.items()},
                         prec, validate=False)

    def compose_scale(self, c):
        c = Q(c)
        if not c:
            raise DomainError("scale factor must be nonzero")
        return LieSeries(
            self.algebra, self.space,
            {d: {k: v * c ** d for k, v in vec.items()}
             for d, vec in self.coeffs.items()},
            self.prec, validate=False)

    # -- structure ----------------------------------------------------------

    def component_series(self, index):
        """ScalarSeries of the coefficient of one basis vector."""
        out = {}
        for d, vec in self.coeffs.items():
            c = vec.get(index)
            if c:
                out[d] = c
        return ScalarSeries(out, self.prec)

    def select(self, indices, space="g"):
        """Sub-series supported on the given basis indices."""
        out = {}
        for d, vec in self.coeffs.items():
            sel = {k: v for k, v in vec.items() if k in indices}
            if sel:
                out[d] = sel
        return LieSeries(self.algebra, space, out, self.prec, validate=False)

    def support_indices(self):
        out = set()
        for vec in self.coeffs.values():
            out.update(vec)
        return out

    def is_zero_on_window(self):
        return not self.coeffs

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, LieSeries)
                and self.algebra is other.algebra
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def agrees(self, other):
        prec = _min_prec(self.prec, other.prec)
        degs = set(self.coeffs) | set(other.coeffs)
        for d in degs:
            if prec is not None and d >= prec:
                continue
            if self.coeffs.get(d, {}) != other.coeffs.get(d, {}):
                return False
        return True

    def __repr__(self):
        degs = sorted(self.coeffs)
        tail = "" if self.prec is None else " + O(t^%d)" % self.prec
        return "<LieSeries[%s] degrees %s%s>" % (self.space, degs, tail)


def _space_indices(algebra, space):
    ch = algebra.chevalley
    if space == "g":
        return None
    e = set(ch.e_index.values())
    f = set(ch.f_index.values())
    h = set(range(ch.h_start, ch.h_start + ch.rank))
    if space == "b":
        return e | h
    if space == "h":
        return h
    if space == "n":
        return e
    if space == "n-":
        return f
    if space == "vcan":
        # membership in the actual slice is checked via coordinates
        return e
    raise DomainError("unknown space %r" % (space,))


def space_basis_indices(algebra, space):
    """Ordered basis indices used for the JSON coordinate encoding."""
    ch = algebra.chevalley
    e = sorted(ch.e_index.values())
    f = sorted(ch.f_index.values())
    h = list(range(ch.h_start, ch.h_start + ch.rank))
    if space == "g":
        return e + h + f
    if space == "b":
        return e + h
    if space == "h":
        return h
    if space == "n":
        return e
    if space == "n-":
        return f
    raise DomainError("space %r has no plain coordinate basis" % (space,))
