"""Plane curve germs given by their branch parametrizations.

A branch is a pair of polynomials (x(t), y(t)) vanishing at t = 0.  The order
of the branch list is the marking of the curve.  The local equation is the
product of the per-branch eliminants Res_t(x - x(t), y - y(t)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .coeffcore import (
    INF,
    BivariatePoly,
    FieldSpec,
    InputError,
    TruncatedSeries,
    UnsupportedInput,
    parse_scalar,
    rational,
    sympy_rational,
    upoly_gcd,
    upoly_order,
    upoly_trim,
)


def parse_tpoly(obj, field: FieldSpec) -> tuple:
    """Read a polynomial in t: an expression string or a list of [exponent, coeff]."""
    if isinstance(obj, str):
        import sympy
        from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

        t, z = sympy.symbols("t z")
        try:
            expr = parse_expr(obj, local_dict={"t": t, "z": z},
                              transformations=standard_transformations + (convert_xor,))
            poly = sympy.Poly(sympy.expand(expr), t, z)
        except Exception as exc:
            raise InputError(f"cannot parse branch component {obj!r}: {exc}") from exc
        if z in expr.free_symbols and field.is_rational:
            raise InputError("the symbol z needs an extension field")
        coeffs: dict[int, object] = {}
        gen = None if field.is_rational else field.gen()
        for (k, e), c in poly.terms():
            if not c.is_rational:
                raise InputError(f"non-rational coefficient {c}")
            q = rational(int(c.p)) / int(c.q)
            val = field(q) if e == 0 else gen ** e * q
            coeffs[k] = coeffs.get(k, field.zero) + val
    else:
        coeffs = {}
        try:
            for k, c in obj:
                coeffs[int(k)] = coeffs.get(int(k), field.zero) + parse_scalar(c, field)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad branch term list: {exc}") from exc
    if not coeffs:
        return ()
    top = max(coeffs)
    return tuple(upoly_trim([coeffs.get(k, field.zero) for k in range(top + 1)]))


@dataclass(frozen=True)
class Branch:
    """Polynomial parametrization t -> (x(t), y(t)) of one branch."""

    x: tuple
    y: tuple
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(upoly_trim([self.field(c) for c in self.x])))
        object.__setattr__(self, "y", tuple(upoly_trim([self.field(c) for c in self.y])))
        if self.x and self.x[0] != 0 or self.y and self.y[0] != 0:
            raise InputError("a branch must pass through the origin")
        if not self.x and not self.y:
            raise InputError("a branch cannot be constant")

    @property
    def multiplicity(self) -> int:
        return int(min(upoly_order(list(self.x)), upoly_order(list(self.y))))

    def series(self, prec: int) -> tuple[TruncatedSeries, TruncatedSeries]:
        return (TruncatedSeries(self.x, prec, self.field), TruncatedSeries(self.y, prec, self.field))

    def evaluate(self, poly: BivariatePoly) -> list:
        """Exact polynomial poly(x(t), y(t))."""
        return poly.compose_upoly(list(self.x), list(self.y))

    def to_json(self) -> dict:
        return {
            "x": [[k, self.field.dump(c)] for k, c in enumerate(self.x) if c != 0],
            "y": [[k, self.field.dump(c)] for k, c in enumerate(self.y) if c != 0],
        }

    @classmethod
    def from_json(cls, obj, field: FieldSpec) -> "Branch":
        if not isinstance(obj, dict) or "x" not in obj or "y" not in obj:
            raise InputError("a branch needs 'x' and 'y' entries")
        return cls(parse_tpoly(obj["x"], field), parse_tpoly(obj["y"], field), field)


def _initial_leading_coefficient(f: BivariatePoly):
    init = f.initial_form()
    return init.terms[init.leading_monomial()]


def branch_eliminant(branch: Branch) -> BivariatePoly:
    """Irreducible local equation of one branch, normalised to a monic initial form."""
    import sympy

    field = branch.field
    x, y, t, z = sympy.symbols("x y t z")

    def to_expr(coeffs):
        out = sympy.Integer(0)
        for k, c in enumerate(coeffs):
            if c != 0:
                cs = field.coefficients(c)
                out += sum(sympy_rational(q) * z ** e for e, q in enumerate(cs)) * t ** k
        return out

    if not branch.x:
        res = x
    elif not branch.y:
        res = y
    else:
        _check_single_visit(branch)
        res = sympy.resultant(x - to_expr(branch.x), y - to_expr(branch.y), t)
    poly = BivariatePoly.from_sympy(sympy.expand(res), field)
    if poly.is_zero():
        raise InputError("degenerate branch parametrization")
    if not branch.evaluate(poly) == []:
        raise InputError("eliminant does not vanish on its branch")
    if not branch.evaluate(poly.dx()) and not branch.evaluate(poly.dy()):
        raise InputError("branch parametrization is not generically injective")
    return poly.scale(field.one / _initial_leading_coefficient(poly))


def _check_single_visit(branch: Branch) -> None:
    g = upoly_gcd(list(branch.x), list(branch.y))
    k = int(upoly_order(g))
    if len(g) - 1 != k:
        raise InputError("the parametrization returns to the origin at another parameter value")


def equation_from_branches(branches) -> BivariatePoly:
    """Product of the branch eliminants."""
    branches = list(branches)
    if not branches:
        raise InputError("no branches given")
    f = BivariatePoly.constant(1, branches[0].field)
    for b in branches:
        f = f * branch_eliminant(b)
    return f


class CurveGerm:
    """A reduced plane curve germ at the origin with a marking of its branches.

    Either ``branches`` or ``equation`` (or both) must be supplied.  Routines
    that depend on the branch structure refuse equation-only germs.
    """

    def __init__(self, field: FieldSpec, branches=(), equation: BivariatePoly | None = None, name: str | None = None):
        self.field = field
        self.branches = tuple(branches)
        self.name = name
        for b in self.branches:
            if b.field != field:
                raise InputError("branch and curve fields differ")
        if equation is None and not self.branches:
            raise InputError("a curve needs branches or an equation")
        if equation is not None:
            if equation.field != field:
                equation = equation.change_field(field)
            if equation.is_zero() or equation.coeff(0, 0) != 0:
                raise InputError("the equation must vanish at the origin")
            if self.branches:
                self._check_consistency(equation)
        self._given_equation = equation

    def _check_consistency(self, equation: BivariatePoly) -> None:
        for b in self.branches:
            if b.evaluate(equation):
                raise InputError("inconsistent equation/branches: equation does not vanish on a branch")
        if equation.order() != sum(b.multiplicity for b in self.branches):
            raise InputError("inconsistent equation/branches: multiplicities differ")

    @property
    def has_branches(self) -> bool:
        return bool(self.branches)

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    @cached_property
    def eliminants(self) -> tuple[BivariatePoly, ...]:
        self.require_branches()
        return tuple(branch_eliminant(b) for b in self.branches)

    @cached_property
    def equation(self) -> BivariatePoly:
        if self._given_equation is not None:
            return self._given_equation
        f = BivariatePoly.constant(1, self.field)
        for e in self.eliminants:
            f = f * e
        return f

    @cached_property
    def rational_equation(self) -> BivariatePoly:
        """The equation over Q when all its coefficients are rational, else over the field."""
        f = self.equation
        if f.has_rational_coefficients():
            return f.over_rationals()
        return f

    def multiplicity(self) -> int:
        return int(self.equation.order())

    def require_branches(self) -> None:
        if not self.branches:
            raise UnsupportedInput("this operation needs branch parametrizations, not only an equation")

    def intersection_multiplicity(self, i: int, j: int) -> float:
        """(C_i . C_j): the t-order of the equation of C_j along C_i."""
        self.require_branches()
        if i == j:
            return INF
        values = self.branches[i].evaluate(self.eliminants[j])
        return upoly_order(values)

    def intersection_matrix(self) -> list[list[float]]:
        r = self.branch_count
        return [[self.intersection_multiplicity(i, j) for j in range(r)] for i in range(r)]

    def is_union_of_two_smooth(self) -> bool:
        return self.branch_count == 2 and all(b.multiplicity == 1 for b in self.branches)

    def is_smooth(self) -> bool:
        return self.multiplicity() == 1

    def with_marking(self, perm) -> "CurveGerm":
        """Reorder the branches: new branch k is old branch perm[k]."""
        self.require_branches()
        perm = list(perm)
        if sorted(perm) != list(range(self.branch_count)):
            raise InputError(f"marking {perm} is not a permutation of the branches")
        return CurveGerm(self.field, [self.branches[p] for p in perm], self._given_equation, self.name)

    def to_json(self) -> dict:
        doc: dict = {"field": self.field.to_json()}
        if self.name:
            doc["name"] = self.name
        if self.branches:
            doc["branches"] = [b.to_json() for b in self.branches]
        doc["equation"] = self.equation.to_json()
        return doc

    @classmethod
    def from_json(cls, doc) -> "CurveGerm":
        if not isinstance(doc, dict):
            raise InputError("a curve document must be a JSON object")
        field = FieldSpec.from_json(doc.get("field"))
        branches = [Branch.from_json(b, field) for b in doc.get("branches", [])]
        equation = doc.get("equation")
        equation = BivariatePoly.from_json(equation, field) if equation is not None else None
        curve = cls(field, branches, equation, doc.get("name"))
        if "marking" in doc and doc["marking"] is not None:
            curve = curve.with_marking(doc["marking"])
        return curve

    def __repr__(self):
        label = self.name or repr(self.equation)
        return f"CurveGerm({label}, branches={self.branch_count})"
