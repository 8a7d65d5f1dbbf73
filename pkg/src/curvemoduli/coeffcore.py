"""Exact scalars, truncated series and bivariate polynomials.

Scalars live either in the rationals (FLINT ``fmpq`` objects) or in a
simple extension Q[z]/(m(z)) (``AlgebraicNumber`` objects).  Every routine in
the package is written against the ordinary arithmetic operators, so both
kinds of scalar flow through the same code.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator

import flint
from flint import fmpq

INF = math.inf


class InputError(ValueError):
    """Raised for malformed or inconsistent user input."""


class UnsupportedInput(Exception):
    """The request is well formed but outside what the package handles."""


RATIONAL_TYPES = (int, Fraction, fmpq)


def rational(value) -> fmpq:
    """Exact rational from an int, Fraction, fmpq or a "p/q" / decimal string."""
    if isinstance(value, fmpq):
        return value
    if isinstance(value, int):
        return fmpq(value)
    q = Fraction(value)
    return fmpq(q.numerator, q.denominator)


def scalar_key(c):
    """Cheap hashable stand-in for a scalar (hashing fmpq directly is slow)."""
    if isinstance(c, fmpq):
        return (c.p, c.q)
    if isinstance(c, AlgebraicNumber):
        return tuple((q.p, q.q) for q in c.c)
    return c


def sympy_rational(q):
    import sympy

    q = rational(q)
    return sympy.Rational(int(q.numerator), int(q.denominator))


# ---------------------------------------------------------------------------
# univariate helpers over Q (lists of rationals, lowest degree first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qpoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [rational(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    return _trim(q), a


class FieldSpec:
    """The coefficient field: Q, or Q[z]/(m) for a monic irreducible m.

    ``minpoly`` lists the coefficients of m from the constant term upward.
    """

    __slots__ = ("minpoly", "degree", "_reduction")

    def __init__(self, minpoly: Iterable | None = None):
        if minpoly is None:
            self.minpoly = None
            self.degree = 1
            self._reduction = None
            return
        m = [rational(c) for c in minpoly]
        _trim(m)
        if len(m) < 2:
            raise InputError("minimal polynomial must have positive degree")
        if m[-1] != 1:
            m = [c / m[-1] for c in m]
        if len(m) == 2:
            # a degree one modulus is just Q
            self.minpoly = None
            self.degree = 1
            self._reduction = None
            return
        _check_irreducible(m)
        self.minpoly = tuple(m)
        self.degree = len(m) - 1
        d = self.degree
        # z^k for d <= k < 2d - 1 expressed in the basis 1, z, ..., z^(d-1)
        table = []
        cur = [-c for c in m[:-1]]
        for _ in range(d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [rational(0)] + cur[:-1]
            cur = [ci - top * mi for ci, mi in zip(cur, m[:-1])]
        self._reduction = tuple(table)

    @property
    def is_rational(self) -> bool:
        return self.minpoly is None

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def gen(self):
        if self.is_rational:
            raise ValueError("Q has no generator")
        return AlgebraicNumber(tuple(rational(int(i == 1)) for i in range(self.degree)), self)

    def __call__(self, value):
        if isinstance(value, AlgebraicNumber):
            if value.field != self:
                raise ValueError("scalar belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            coeffs = [rational(c) for c in value]
            if len(coeffs) > self.degree:
                raise InputError("coefficient vector longer than the field degree")
            coeffs += [rational(0)] * (self.degree - len(coeffs))
            if self.is_rational:
                return coeffs[0]
            return AlgebraicNumber(tuple(coeffs), self)
        q = rational(value)
        if self.is_rational:
            return q
        return AlgebraicNumber((q,) + (rational(0),) * (self.degree - 1), self)

    def coefficients(self, value) -> tuple:
        """Coordinates of ``value`` in the basis 1, z, ..., z^(d-1)."""
        if isinstance(value, AlgebraicNumber):
            return value.c
        return (rational(value),) + (rational(0),) * (self.degree - 1)

    def is_rational_value(self, value) -> bool:
        return all(c == 0 for c in self.coefficients(value)[1:])

    def dump(self, value):
        """JSON form: a rational string, or a list of them for extensions."""
        cs = self.coefficients(value)
        if self.is_rational:
            return str(cs[0])
        return [str(c) for c in cs]

    def to_json(self):
        if self.is_rational:
            return "QQ"
        return {"minpoly": [str(c) for c in self.minpoly]}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if obj is None or obj == "QQ":
            return cls()
        if isinstance(obj, dict) and "minpoly" in obj:
            try:
                return cls([rational(c) for c in obj["minpoly"]])
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise InputError(f"bad minimal polynomial: {exc}") from exc
        raise InputError(f"unrecognised field description {obj!r}")

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        if self.is_rational:
            return "FieldSpec(QQ)"
        return f"FieldSpec(minpoly={[str(c) for c in self.minpoly]})"


def _check_irreducible(m: list) -> None:
    import sympy

    z = sympy.Symbol("z")
    poly = sympy.Poly(list(reversed([sympy_rational(c) for c in m])), z)
    if not poly.is_irreducible:
        raise InputError("minimal polynomial is reducible over Q")


class AlgebraicNumber:
    """Element of Q[z]/(m) stored as its coordinate vector."""

    __slots__ = ("c", "field")

    def __init__(self, c: tuple, field: FieldSpec):
        self.c = c
        self.field = field

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise ValueError("mixing scalars from different fields")
            return other.c
        if isinstance(other, RATIONAL_TYPES):
            return (rational(other),) + (rational(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return AlgebraicNumber(tuple(a + b for a, b in zip(self.c, oc)), self.field)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(tuple(-a for a in self.c), self.field)

    def __sub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return AlgebraicNumber(tuple(a - b for a, b in zip(self.c, oc)), self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return AlgebraicNumber(tuple(a * other for a in self.c), self.field)
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        d = self.field.degree
        prod = [rational(0)] * (2 * d - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(oc):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        for k, coeff in enumerate(prod[d:]):
            if coeff:
                row = self.field._reduction[k]
                for i in range(d):
                    out[i] += coeff * row[i]
        return AlgebraicNumber(tuple(out), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        a = _trim(list(self.c))
        if not a:
            raise ZeroDivisionError("inverse of zero")
        m = list(self.field.minpoly)
        # extended Euclid on (m, a)
        r0, r1 = m, a
        s0, s1 = [rational(0)], [rational(1)]
        while len(r1) > 1:
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        inv = [c / r1[0] for c in s1]
        _, inv = _qpoly_divmod(inv, m)
        inv += [rational(0)] * (self.field.degree - len(inv))
        return AlgebraicNumber(tuple(inv), self.field)

    def __truediv__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return AlgebraicNumber(tuple(a / other for a in self.c), self.field)
        if isinstance(other, AlgebraicNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        oc = self._coerce(other) if isinstance(other, RATIONAL_TYPES + (AlgebraicNumber,)) else None
        if oc is None:
            return NotImplemented
        return self.c == oc

    def __hash__(self):
        if all(c == 0 for c in self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.c):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*z^{i}")
        return " + ".join(terms) or "0"


def _qmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [rational(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _qsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([rational(c) for c in out])


def parse_scalar(token, field: FieldSpec):
    """Read a scalar from JSON: "p/q", an int, or a coordinate list."""
    try:
        if isinstance(token, str) and "z" in token:
            return _scalar_from_expr(token, field)
        return field(token)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read scalar {token!r}: {exc}") from exc


def _scalar_from_expr(text: str, field: FieldSpec):
    poly = BivariatePoly.parse(text, field)
    if any(k != (0, 0) for k in poly.terms):
        raise InputError(f"{text!r} is not a constant")
    return poly.terms.get((0, 0), field.zero)


# ---------------------------------------------------------------------------
# univariate polynomials over the field (lists, lowest degree first)


def upoly_trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a = upoly_trim(a)
    return upoly_trim(q), a


def upoly_gcd(a: list, b: list) -> list:
    """Monic gcd of two univariate polynomials (empty list for gcd(0, 0))."""
    a = upoly_trim(a)
    b = upoly_trim(b)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return upoly_trim(out)


def upoly_derivative(a: list) -> list:
    return upoly_trim([a[k] * k for k in range(1, len(a))])


def upoly_order(a: list) -> float:
    for k, c in enumerate(a):
        if c != 0:
            return k
    return INF


# ---------------------------------------------------------------------------
# truncated power series


class TruncatedSeries:
    """A power series in t known modulo t^prec."""

    __slots__ = ("coeffs", "prec", "field")

    def __init__(self, coeffs, prec: int, field: FieldSpec):
        coeffs = list(coeffs)[:prec]
        zero = field.zero
        coeffs += [zero] * (prec - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.prec = prec
        self.field = field

    @classmethod
    def from_terms(cls, terms: dict, prec: int, field: FieldSpec) -> "TruncatedSeries":
        coeffs = [field.zero] * prec
        for k, c in terms.items():
            if k < prec:
                coeffs[k] = coeffs[k] + c
        return cls(coeffs, prec, field)

    @classmethod
    def monomial(cls, k: int, prec: int, field: FieldSpec, coeff=None) -> "TruncatedSeries":
        coeffs = [field.zero] * prec
        if k < prec:
            coeffs[k] = field.one if coeff is None else coeff
        return cls(coeffs, prec, field)

    def coeff(self, k: int):
        return self.coeffs[k]

    def valuation(self) -> float:
        """Order of the series; INF when it vanishes to the known precision."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return INF

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise ValueError("cannot raise the precision of a truncated series")
        return TruncatedSeries(self.coeffs[:prec], prec, self.field)

    def __add__(self, other):
        prec = min(self.prec, other.prec)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[:prec], other.coeffs[:prec])], prec, self.field)

    def __sub__(self, other):
        prec = min(self.prec, other.prec)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs[:prec], other.coeffs[:prec])], prec, self.field)

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.prec, self.field)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries([a * c for a in self.coeffs], self.prec, self.field)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        prec = min(self.prec, other.prec)
        out = [self.field.zero] * prec
        a, b = self.coeffs, other.coeffs
        for i in range(prec):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(prec - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] = out[i + j] + ai * bj
        return TruncatedSeries(out, prec, self.field)

    def __pow__(self, n: int) -> "TruncatedSeries":
        result = TruncatedSeries.monomial(0, self.prec, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(t)) for a series ``inner`` without constant term."""
        if inner.coeffs and inner.prec and inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at t = 0")
        prec = min(self.prec, inner.prec)
        result = TruncatedSeries([], prec, self.field)
        for c in reversed(self.coeffs[:prec]):
            result = result * inner.truncate(prec)
            if c != 0:
                coeffs = list(result.coeffs)
                coeffs[0] = coeffs[0] + c
                result = TruncatedSeries(coeffs, prec, self.field)
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse of a unit."""
        if self.prec == 0:
            return self
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series is not a unit")
        inv0 = self.field.one / c0
        out = [inv0]
        for n in range(1, self.prec):
            s = self.field.zero
            for k in range(1, n + 1):
                s = s + self.coeffs[k] * out[n - k]
            out.append(-s * inv0)
        return TruncatedSeries(out, self.prec, self.field)

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries([self.coeffs[k] * k for k in range(1, self.prec)], self.prec - 1, self.field)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prec, self.coeffs))

    def __repr__(self):
        terms = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return (" + ".join(terms) or "0") + f" + O(t^{self.prec})"


# ---------------------------------------------------------------------------
# bivariate polynomials


_MPOLY_CTX = flint.fmpq_mpoly_ctx.get(("x", "y"), "deglex")
# products with at least this many term pairs go through FLINT
_FAST_PRODUCT = 256


def _to_mpoly(terms: dict):
    return _MPOLY_CTX.from_dict(terms)


def _from_mpoly(p) -> dict:
    return {tuple(int(e) for e in k): v for k, v in p.to_dict().items()}


def _grlex_key(m: tuple[int, int]) -> tuple[int, int]:
    # graded order with x > y: larger total degree first, then larger x power
    return (m[0] + m[1], m[0])


class BivariatePoly:
    """Sparse polynomial in x and y; ``terms`` maps (i, j) to the coefficient of x^i y^j."""

    __slots__ = ("terms", "field")

    def __init__(self, terms: dict | None, field: FieldSpec):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        self.field = field

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, field: FieldSpec) -> "BivariatePoly":
        return cls({}, field)

    @classmethod
    def constant(cls, c, field: FieldSpec) -> "BivariatePoly":
        return cls({(0, 0): field(c) if not isinstance(c, AlgebraicNumber) else c}, field)

    @classmethod
    def x(cls, field: FieldSpec) -> "BivariatePoly":
        return cls({(1, 0): field.one}, field)

    @classmethod
    def y(cls, field: FieldSpec) -> "BivariatePoly":
        return cls({(0, 1): field.one}, field)

    @classmethod
    def monomial(cls, i: int, j: int, field: FieldSpec, coeff=None) -> "BivariatePoly":
        return cls({(i, j): field.one if coeff is None else coeff}, field)

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> "BivariatePoly":
        """Parse an expression in x, y (and z for the field generator)."""
        import sympy
        from sympy.parsing.sympy_parser import (
            convert_xor,
            implicit_multiplication_application,
            parse_expr,
            standard_transformations,
        )

        x, y, z = sympy.symbols("x y z")
        try:
            expr = parse_expr(
                text,
                local_dict={"x": x, "y": y, "z": z},
                transformations=standard_transformations + (convert_xor, implicit_multiplication_application),
            )
        except Exception as exc:  # sympy raises a zoo of exception types
            raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc
        return cls.from_sympy(expr, field)

    @classmethod
    def from_sympy(cls, expr, field: FieldSpec) -> "BivariatePoly":
        import sympy

        x, y, z = sympy.symbols("x y z")
        free = expr.free_symbols - {x, y, z}
        if free:
            raise InputError(f"unexpected symbols {sorted(map(str, free))}")
        if z in expr.free_symbols and field.is_rational:
            raise InputError("the symbol z needs an extension field")
        try:
            poly = sympy.Poly(sympy.expand(expr), x, y, z)
        except sympy.PolynomialError as exc:
            raise InputError(f"not a polynomial: {expr}") from exc
        terms: dict = {}
        gen = None if field.is_rational else field.gen()
        for (i, j, k), c in poly.terms():
            if not c.is_rational:
                raise InputError(f"non-rational coefficient {c}")
            q = fmpq(int(c.p), int(c.q))
            val = field(q) if k == 0 else gen ** k * q
            terms[(i, j)] = terms.get((i, j), field.zero) + val
        return cls(terms, field)

    def to_sympy(self):
        import sympy

        x, y, z = sympy.symbols("x y z")
        out = sympy.Integer(0)
        for (i, j), c in self.terms.items():
            cs = self.field.coefficients(c)
            coeff = sum(sympy_rational(q) * z ** k for k, q in enumerate(cs))
            out += coeff * x ** i * y ** j
        return out

    # basic queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def order(self) -> float:
        """Lowest total degree of a monomial (INF for the zero polynomial)."""
        return min((i + j for i, j in self.terms), default=INF)

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), self.field.zero)

    def homogeneous_part(self, d: int) -> "BivariatePoly":
        return BivariatePoly({k: v for k, v in self.terms.items() if k[0] + k[1] == d}, self.field)

    def initial_form(self) -> "BivariatePoly":
        o = self.order()
        if o == INF:
            return self
        return self.homogeneous_part(int(o))

    def truncate_degree(self, d: int) -> "BivariatePoly":
        """Drop every monomial of total degree above d."""
        return BivariatePoly({k: v for k, v in self.terms.items() if k[0] + k[1] <= d}, self.field)

    def leading_monomial(self) -> tuple[int, int]:
        return max(self.terms, key=_grlex_key)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self.terms}) <= 1

    def has_rational_coefficients(self) -> bool:
        return all(self.field.is_rational_value(c) for c in self.terms.values())

    def over_rationals(self) -> "BivariatePoly":
        """The same polynomial viewed over Q; fails if a coefficient is irrational."""
        q = FieldSpec()
        if self.field.is_rational:
            return self
        if not self.has_rational_coefficients():
            raise ValueError("polynomial has irrational coefficients")
        return BivariatePoly({k: self.field.coefficients(v)[0] for k, v in self.terms.items()}, q)

    def change_field(self, field: FieldSpec) -> "BivariatePoly":
        """Embed a rational polynomial into ``field``."""
        if not self.field.is_rational and self.field != field:
            raise ValueError("can only embed polynomials with rational coefficients")
        return BivariatePoly({k: field(self.field.coefficients(v)[0]) for k, v in self.terms.items()}, field)

    # arithmetic ---------------------------------------------------------------
    def _lift(self, other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return other
        return BivariatePoly({(0, 0): other if isinstance(other, AlgebraicNumber) else self.field(other)}, self.field)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return BivariatePoly(terms, self.field)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly({k: -v for k, v in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "BivariatePoly":
        if c == 0:
            return BivariatePoly.zero(self.field)
        return BivariatePoly({k: v * c for k, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, BivariatePoly):
            return self.scale(other)
        if self.field.is_rational and len(self.terms) * len(other.terms) >= _FAST_PRODUCT:
            return BivariatePoly(_from_mpoly(_to_mpoly(self.terms) * _to_mpoly(other.terms)), self.field)
        terms: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                terms[k] = terms[k] + a * b if k in terms else a * b
        return BivariatePoly(terms, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        result = BivariatePoly.constant(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift_monomial(self, i: int, j: int) -> "BivariatePoly":
        return BivariatePoly({(a + i, b + j): v for (a, b), v in self.terms.items()}, self.field)

    def __eq__(self, other):
        if isinstance(other, RATIONAL_TYPES + (AlgebraicNumber,)):
            other = self._lift(other)
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def dx(self) -> "BivariatePoly":
        return BivariatePoly({(i - 1, j): v * i for (i, j), v in self.terms.items() if i > 0}, self.field)

    def dy(self) -> "BivariatePoly":
        return BivariatePoly({(i, j - 1): v * j for (i, j), v in self.terms.items() if j > 0}, self.field)

    # substitution -------------------------------------------------------------
    def substitute(self, px: "BivariatePoly", py: "BivariatePoly") -> "BivariatePoly":
        """self(px(x, y), py(x, y))."""
        result = BivariatePoly.zero(self.field)
        xpow: dict[int, BivariatePoly] = {}
        ypow: dict[int, BivariatePoly] = {}
        for (i, j), c in self.terms.items():
            if i not in xpow:
                xpow[i] = px ** i
            if j not in ypow:
                ypow[j] = py ** j
            result = result + (xpow[i] * ypow[j]).scale(c)
        return result

    def evaluate(self, xv, yv):
        total = self.field.zero
        for (i, j), c in self.terms.items():
            total = total + c * xv ** i * yv ** j
        return total

    def compose_series(self, xs: TruncatedSeries, ys: TruncatedSeries) -> TruncatedSeries:
        """self(x(t), y(t)) as a truncated series."""
        prec = min(xs.prec, ys.prec)
        xs, ys = xs.truncate(prec), ys.truncate(prec)
        out = TruncatedSeries([], prec, self.field)
        xpow = [TruncatedSeries.monomial(0, prec, self.field)]
        ypow = [TruncatedSeries.monomial(0, prec, self.field)]
        for (i, j), c in self.terms.items():
            while len(xpow) <= i:
                xpow.append(xpow[-1] * xs)
            while len(ypow) <= j:
                ypow.append(ypow[-1] * ys)
            out = out + (xpow[i] * ypow[j]).scale(c)
        return out

    def compose_upoly(self, xt: list, yt: list) -> list:
        """self(x(t), y(t)) for polynomial x(t), y(t), exactly."""
        out: list = []
        xpow = [[self.field.one]]
        ypow = [[self.field.one]]
        for (i, j), c in self.terms.items():
            while len(xpow) <= i:
                xpow.append(upoly_mul(xpow[-1], xt))
            while len(ypow) <= j:
                ypow.append(upoly_mul(ypow[-1], yt))
            term = [a * c for a in upoly_mul(xpow[i], ypow[j])]
            n = max(len(out), len(term))
            out = [(out[k] if k < len(out) else 0) + (term[k] if k < len(term) else 0) for k in range(n)]
        return upoly_trim(out)

    # division -----------------------------------------------------------------
    def divmod(self, other: "BivariatePoly") -> tuple["BivariatePoly", "BivariatePoly"]:
        """Division with remainder in the graded order with x > y."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lm = other.leading_monomial()
        lc = other.terms[lm]
        rem = dict(self.terms)
        quot: dict = {}
        out_rem: dict = {}
        while rem:
            m = max(rem, key=_grlex_key)
            c = rem[m]
            if m[0] >= lm[0] and m[1] >= lm[1]:
                shift = (m[0] - lm[0], m[1] - lm[1])
                q = c / lc
                quot[shift] = quot.get(shift, self.field.zero) + q
                for (i, j), v in other.terms.items():
                    k = (i + shift[0], j + shift[1])
                    nv = rem.get(k, self.field.zero) - q * v
                    if nv == 0:
                        rem.pop(k, None)
                    else:
                        rem[k] = nv
            else:
                out_rem[m] = c
                del rem[m]
        return BivariatePoly(quot, self.field), BivariatePoly(out_rem, self.field)

    def divide_exact(self, other: "BivariatePoly") -> "BivariatePoly":
        if self.field.is_rational and other.terms:
            q, r = divmod(_to_mpoly(self.terms), _to_mpoly(other.terms))
            if r != 0:
                raise ArithmeticError("polynomial division is not exact")
            return BivariatePoly(_from_mpoly(q), self.field)
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: "BivariatePoly") -> bool:
        try:
            other.divide_exact(self)
        except ArithmeticError:
            return False
        return True

    def max_power_dividing_x(self) -> int:
        return min((i for i, _ in self.terms), default=0)

    def max_power_dividing_y(self) -> int:
        return min((j for _, j in self.terms), default=0)

    # display ------------------------------------------------------------------
    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self:
            mono = "*".join(p for p in (f"x^{i}" if i > 1 else "x" if i else "", f"y^{j}" if j > 1 else "y" if j else "") if p)
            coeff = f"({c})" if isinstance(c, AlgebraicNumber) else str(c)
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)

    def to_json(self) -> list:
        return [[i, j, self.field.dump(c)] for (i, j), c in self]

    @classmethod
    def from_json(cls, obj, field: FieldSpec) -> "BivariatePoly":
        if isinstance(obj, str):
            return cls.parse(obj, field)
        try:
            terms: dict = {}
            for i, j, c in obj:
                k = (int(i), int(j))
                terms[k] = terms.get(k, field.zero) + parse_scalar(c, field)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad polynomial term list: {exc}") from exc
        return cls(terms, field)


# ---------------------------------------------------------------------------
# homogeneous binary forms


def dehomogenize(form: BivariatePoly) -> tuple[list, int]:
    """Return (F(x, 1) as a list, exponent of y dividing the form)."""
    d = form.degree()
    coeffs = [form.field.zero] * (d + 1)
    for (i, j), c in form.terms.items():
        coeffs[i] = c
    coeffs = upoly_trim(coeffs)
    return coeffs, d - (len(coeffs) - 1)


def homogenize(p: list, d: int, field: FieldSpec) -> BivariatePoly:
    return BivariatePoly({(i, d - i): c for i, c in enumerate(p) if c != 0}, field)


def binary_form_gcd(f: BivariatePoly, g: BivariatePoly) -> BivariatePoly:
    """Monic gcd of two homogeneous forms (up to a scalar)."""
    field = f.field
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    pf, yf = dehomogenize(f)
    pg, yg = dehomogenize(g)
    common = upoly_gcd(pf, pg)
    ypow = min(yf, yg)
    return homogenize(common, len(common) - 1 + ypow, field)


def binary_form_divide(f: BivariatePoly, g: BivariatePoly) -> BivariatePoly:
    """Exact quotient of homogeneous forms."""
    return f.divide_exact(g)


def binary_form_squarefree_part(f: BivariatePoly) -> BivariatePoly:
    """Product of the distinct linear factors of a form over the algebraic closure."""
    field = f.field
    p, ypow = dehomogenize(f)
    g = upoly_gcd(p, upoly_derivative(p)) if len(p) > 1 else [field.one]
    sq, _ = upoly_divmod(p, g or [field.one])
    lead = sq[-1]
    sq = [c / lead for c in sq]
    d = len(sq) - 1 + (1 if ypow else 0)
    return homogenize(sq, d, field)


def binary_form_is_squarefree(f: BivariatePoly) -> bool:
    return binary_form_squarefree_part(f).degree() == f.degree()
