"""Logarithmic vector fields along a plane curve germ.

A polynomial vector field X = a d/dx + b d/dy is tangent to f = 0 when
X(f) = a f_x + b f_y is a multiple of f.  The module of such fields (over the
local ring) is free of rank two; a pair {X1, X2} is a basis exactly when
X1 ^ X2 = u f with u(0, 0) != 0.  Everything here is polynomial and exact:
candidates come out of a linear solve and are re-checked as identities.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

from .coeffcore import INF, BivariatePoly, FieldSpec, InputError, UnsupportedInput
from .linalg import generic_scalars, nullspace, rref

TYPE_LABELS = ("E", "Ed", "Ed'", "O", "Od", "Od'")
UNCLASSIFIED = "unclassified"


class SaitoError(RuntimeError):
    """No verified basis was found within the degree bound."""


@dataclass(frozen=True)
class VectorField:
    """X = a d/dx + b d/dy with polynomial components."""

    a: BivariatePoly
    b: BivariatePoly

    @property
    def field(self) -> FieldSpec:
        return self.a.field

    @classmethod
    def from_exprs(cls, a: str, b: str, field: FieldSpec | None = None) -> "VectorField":
        field = field or FieldSpec()
        return cls(BivariatePoly.parse(a, field), BivariatePoly.parse(b, field))

    @classmethod
    def radial(cls, field: FieldSpec) -> "VectorField":
        return cls(BivariatePoly.x(field), BivariatePoly.y(field))

    @classmethod
    def hamiltonian(cls, f: BivariatePoly) -> "VectorField":
        """The field f_x d/dy - f_y d/dx, always tangent to f."""
        return cls(-f.dy(), f.dx())

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def valuation(self) -> float:
        return min(self.a.order(), self.b.order())

    def degree(self) -> int:
        return max(self.a.degree(), self.b.degree())

    def homogeneous_part(self, d: int) -> "VectorField":
        return VectorField(self.a.homogeneous_part(d), self.b.homogeneous_part(d))

    def initial_part(self) -> "VectorField":
        v = self.valuation()
        if v == INF:
            return self
        return self.homogeneous_part(int(v))

    def apply(self, g: BivariatePoly) -> BivariatePoly:
        """Derivative of g along the field."""
        return self.a * g.dx() + self.b * g.dy()

    def wedge(self, other: "VectorField") -> BivariatePoly:
        return self.a * other.b - self.b * other.a

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.a, -self.b)

    def times(self, g) -> "VectorField":
        """Multiply by a polynomial or a scalar."""
        return VectorField(self.a * g, self.b * g)

    def divide_exact(self, g: BivariatePoly) -> "VectorField":
        return VectorField(self.a.divide_exact(g), self.b.divide_exact(g))

    def substitute(self, px: BivariatePoly, py: BivariatePoly) -> "VectorField":
        """Components evaluated at (px, py); no chain rule is applied."""
        return VectorField(self.a.substitute(px, py), self.b.substitute(px, py))

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"({self.a})*dx + ({self.b})*dy"

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, obj, field: FieldSpec) -> "VectorField":
        if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
            raise InputError("a vector field needs 'a' and 'b' entries")
        return cls(BivariatePoly.from_json(obj["a"], field), BivariatePoly.from_json(obj["b"], field))


def is_dicritical(X: VectorField) -> bool:
    """True when the initial part of X is a multiple of the radial field."""
    if X.is_zero():
        raise ValueError("the zero field has no initial part")
    init = X.initial_part()
    x, y = BivariatePoly.x(X.field), BivariatePoly.y(X.field)
    return (y * init.a - x * init.b).is_zero()


def radial_factor(X: VectorField) -> BivariatePoly:
    """R with initial part R (x d/dx + y d/dy), for a dicritical field."""
    init = X.initial_part()
    if not is_dicritical(X):
        raise ValueError("field is not dicritical")
    if not init.a.is_zero():
        return init.a.divide_exact(BivariatePoly.x(X.field))
    return init.b.divide_exact(BivariatePoly.y(X.field))


def require_reduced(f: BivariatePoly) -> None:
    if f.is_zero() or f.coeff(0, 0) != 0:
        raise InputError("the equation must vanish at the origin")
    if f.field.is_rational:
        from .coeffcore import _to_mpoly

        _, factors = _to_mpoly(f.terms).factor_squarefree()
        if any(e > 1 for _, e in factors):
            raise InputError("the equation is not reduced")


# ---------------------------------------------------------------------------
# the module of tangent fields, truncated by degree


def _monomials(deg: int) -> list[tuple[int, int]]:
    return [(d - j, j) for d in range(deg + 1) for j in range(d + 1)]


@dataclass
class TangentModuleSlice:
    """Tangent fields with components of degree at most ``degree_bound``.

    ``fields`` is a basis of that vector space in echelon form for the
    valuation: the valuation of any combination is the least valuation of the
    members it uses.
    """

    f: BivariatePoly
    degree_bound: int
    fields: list
    cofactors: list

    def valuations(self) -> list:
        return [X.valuation() for X in self.fields]

    def minimal_valuation(self) -> float:
        return min(self.valuations(), default=INF)

    def at_valuation(self, v) -> list:
        return [X for X in self.fields if X.valuation() == v]

    def __len__(self):
        return len(self.fields)


def tangent_slice(f: BivariatePoly, D: int) -> TangentModuleSlice:
    """All (a, b) of degree <= D with a f_x + b f_y = h f, as an echelon basis."""
    field = f.field
    fx, fy = f.dx(), f.dy()
    mons = _monomials(D)
    hmons = _monomials(D - 1) if D >= 1 else []
    n = len(mons)
    ncols = 2 * n + len(hmons)
    rows: dict = {}

    def add(col, poly, shift):
        for (i, j), c in poly.terms.items():
            key = (i + shift[0], j + shift[1])
            rows.setdefault(key, {})[col] = rows.get(key, {}).get(col, field.zero) + c

    for k, m in enumerate(mons):
        add(k, fx, m)
        add(n + k, fy, m)
    neg_f = -f
    for k, m in enumerate(hmons):
        add(2 * n + k, neg_f, m)
    kernel = nullspace(list(rows.values()), ncols, field)

    # reorder the (a, b) part by total degree so that pivots read off valuations
    order = sorted(range(2 * n), key=lambda c: (sum(mons[c % n]), c >= n, c))
    position = {c: p for p, c in enumerate(order)}
    vecs = [{position[c]: v for c, v in vec.items() if c < 2 * n} for vec in kernel]
    red, _ = rref(vecs, 2 * n, field)
    fields, cofactors = [], []
    for row in red:
        a: dict = {}
        b: dict = {}
        for p, v in row.items():
            c = order[p]
            (a if c < n else b)[mons[c % n]] = v
        X = VectorField(BivariatePoly(a, field), BivariatePoly(b, field))
        h = tangency_cofactor(X, f)
        if h is None:
            raise ArithmeticError("slice member failed the exact tangency check")
        fields.append(X)
        cofactors.append(h)
    return TangentModuleSlice(f, D, fields, cofactors)


def tangency_cofactor(X: VectorField, f: BivariatePoly):
    """h with X(f) = h f, or None when X is not tangent."""
    try:
        return X.apply(f).divide_exact(f)
    except ArithmeticError:
        return None


def is_tangent(X: VectorField, f: BivariatePoly) -> bool:
    return tangency_cofactor(X, f) is not None


# ---------------------------------------------------------------------------
# bases


def criterion_check(X1: VectorField, X2: VectorField, f: BivariatePoly):
    """(ok, u) with X1 ^ X2 = u f and u(0, 0) != 0; u is None when ok is false."""
    w = X1.wedge(X2)
    if w.is_zero():
        return False, None
    try:
        u = w.divide_exact(f)
    except ArithmeticError:
        return False, None
    if u.coeff(0, 0) == 0:
        return False, None
    return True, u


@dataclass
class SaitoBasis:
    """A verified pair with X1 ^ X2 = unit * f."""

    X1: VectorField
    X2: VectorField
    f: BivariatePoly
    unit: BivariatePoly
    type_label: str | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def nu1(self) -> int:
        return int(self.X1.valuation())

    @property
    def nu2(self) -> int:
        return int(self.X2.valuation())

    @property
    def dicritical(self) -> tuple[bool, bool]:
        return is_dicritical(self.X1), is_dicritical(self.X2)

    def verify(self) -> bool:
        ok, u = criterion_check(self.X1, self.X2, self.f)
        return ok and u == self.unit

    def to_json(self) -> dict:
        return {
            "nu1": self.nu1,
            "nu2": self.nu2,
            "type": self.type_label,
            "dicritical": list(self.dicritical),
            "unit_constant": self.f.field.dump(self.unit.coeff(0, 0)),
            "X1": self.X1.to_json(),
            "X2": self.X2.to_json(),
        }


def make_basis(X1: VectorField, X2: VectorField, f: BivariatePoly, label=None) -> SaitoBasis:
    """Order by valuation and verify; raises SaitoError if the criterion fails."""
    if X2.valuation() < X1.valuation():
        X1, X2 = X2, X1
    ok, u = criterion_check(X1, X2, f)
    if not ok:
        raise SaitoError("pair fails the Saito criterion")
    return SaitoBasis(X1, X2, f, u, label)


def default_degree_bound(f: BivariatePoly) -> int:
    return max(int(f.degree()), 2)


def _generic_combination(fields: list, offset: int = 0) -> VectorField:
    scalars = generic_scalars(len(fields), offset)
    out = fields[0].times(scalars[0])
    for X, s in zip(fields[1:], scalars[1:]):
        out = out + X.times(s)
    return out


def _basis_from_slice(sl: TangentModuleSlice) -> SaitoBasis | None:
    f = sl.f
    s = sl.minimal_valuation()
    if s == INF:
        return None
    X1 = _generic_combination(sl.at_valuation(s))
    for B in sl.fields:
        ok, u = criterion_check(X1, B, f)
        if ok:
            return SaitoBasis(X1, B, f, u)
    return None


def find_saito_basis(f: BivariatePoly, degree_bound: int | None = None) -> SaitoBasis:
    """A verified basis whose first member is a generic optimal field.

    The slice is computed at ``degree_bound`` (default deg f) and, failing
    that, at twice and four times the bound.
    """
    require_reduced(f)
    D = degree_bound or default_degree_bound(f)
    for bound in (D, 2 * D, 4 * D):
        basis = _basis_from_slice(tangent_slice(f, bound))
        if basis is not None:
            basis.notes.append(f"degree bound {bound}")
            return basis
    raise SaitoError(f"no Saito basis with components of degree <= {4 * D}")


def saito_number(f: BivariatePoly, degree_bound: int | None = None, strict: bool = True) -> int:
    """Least valuation of a tangent field.

    A verified basis certifies the value.  Without one the slice minimum is
    only an upper bound; it is returned with a warning when ``strict`` is off.
    """
    try:
        return find_saito_basis(f, degree_bound).nu1
    except SaitoError:
        if strict:
            raise
    D = degree_bound or default_degree_bound(f)
    value = tangent_slice(f, 4 * D).minimal_valuation()
    warnings.warn("Saito number not certified by a basis; value is an upper bound", RuntimeWarning)
    return int(value)


# ---------------------------------------------------------------------------
# adapted bases


def basis_type(nu_s: int, nu1: int, nu2: int, d1: bool, d2: bool) -> str:
    """The adapted-type label of a basis with these invariants, if any."""
    if nu_s % 2 == 0:
        half = nu_s // 2
        shapes = {
            (half, half, False, False): "E",
            (half - 1, half, True, True): "Ed",
            (half - 1, half + 1, True, False): "Ed'",
        }
    else:
        half = (nu_s - 1) // 2
        shapes = {
            (half, half + 1, False, False): "O",
            (half, half, True, True): "Od",
            (half, half + 1, True, False): "Od'",
        }
    return shapes.get((nu1, nu2, d1, d2), UNCLASSIFIED)


def _initial_quotient(top: VectorField, base: VectorField):
    """Homogeneous h with top = h * base for two homogeneous fields, else None."""
    if not base.a.is_zero():
        try:
            h = top.a.divide_exact(base.a)
        except ArithmeticError:
            return None
    else:
        try:
            h = top.b.divide_exact(base.b)
        except ArithmeticError:
            return None
    if base.times(h) == top:
        return h
    return None


def reduce_against(X2: VectorField, X1: VectorField, limit: int) -> VectorField:
    """Raise the valuation of X2 by subtracting multiples of X1, degree by degree.

    Stops as soon as the initial part of X2 is not a multiple of the initial
    part of X1; that valuation is then the largest reachable.
    """
    init1 = X1.initial_part()
    while not X2.is_zero() and X2.valuation() <= limit:
        h = _initial_quotient(X2.initial_part(), init1)
        if h is None:
            break
        X2 = X2 - X1.times(h)
    return X2


def adapt_basis(basis: SaitoBasis, f: BivariatePoly | None = None) -> SaitoBasis:
    """Move the basis into one of the six adapted shapes and record its label.

    X2 is replaced by X2 - h X1 with h built degree by degree, and equal
    valuations are mixed with generic scalars to fix the dicritical pattern.
    The label is "unclassified" when no shape fits, which happens for
    curves that are special in their moduli.
    """
    f = f or basis.f
    nu_s = int(f.order())
    X1, X2 = basis.X1, basis.X2
    if X2.valuation() < X1.valuation():
        X1, X2 = X2, X1
    X2 = reduce_against(X2, X1, nu_s)
    d1, d2 = is_dicritical(X1), is_dicritical(X2)
    nu1, nu2 = int(X1.valuation()), int(X2.valuation())
    if nu1 == nu2 and d1 != d2 and nu1 + nu2 == nu_s:
        # a dicritical and a non-dicritical field of the same valuation
        if d1:
            X1 = X1 + X2
        else:
            X2 = X2 + X1
    elif nu2 == nu1 + 1 and d2 and not d1:
        x, y = BivariatePoly.x(f.field), BivariatePoly.y(f.field)
        for k in range(8):
            p, q = generic_scalars(2, 2 * k)
            candidate = X2 + X1.times(x.scale(p) + y.scale(q))
            if not is_dicritical(candidate):
                X2 = candidate
                break
    result = make_basis(X1, X2, f)
    d1, d2 = result.dicritical
    result.type_label = basis_type(nu_s, result.nu1, result.nu2, d1, d2)
    result.notes = list(basis.notes)
    return result


def adapted_basis(f: BivariatePoly, degree_bound: int | None = None) -> SaitoBasis:
    return adapt_basis(find_saito_basis(f, degree_bound), f)


# ---------------------------------------------------------------------------
# adding and removing a smooth curve


@dataclass(frozen=True)
class _Graph:
    """A smooth curve written as x = e(y) (over_y) or y = e(x)."""

    L: BivariatePoly
    over_y: bool
    e: BivariatePoly

    def point(self) -> tuple[BivariatePoly, BivariatePoly]:
        t = BivariatePoly.y(self.L.field) if self.over_y else BivariatePoly.x(self.L.field)
        return (self.e, t) if self.over_y else (t, self.e)

    def tangent(self) -> tuple[BivariatePoly, BivariatePoly]:
        one = BivariatePoly.constant(1, self.L.field)
        return (self.e.dy(), one) if self.over_y else (one, self.e.dx())

    def parameter_order(self, p: BivariatePoly) -> float:
        return p.max_power_dividing_y() if self.over_y else p.max_power_dividing_x()

    def divide_parameter(self, p: BivariatePoly, k: int) -> BivariatePoly:
        return p.shift_monomial(0, -k) if self.over_y else p.shift_monomial(-k, 0)


def _as_graph(L: BivariatePoly) -> _Graph:
    if L.is_zero() or L.coeff(0, 0) != 0:
        raise InputError("the added curve must pass through the origin")
    field = L.field
    cx = L.coeff(1, 0)
    if cx != 0 and all(i == 0 or (i, j) == (1, 0) for i, j in L.terms):
        rest = L - BivariatePoly.monomial(1, 0, field, cx)
        return _Graph(L, True, rest.scale(-field.one / cx))
    cy = L.coeff(0, 1)
    if cy != 0 and all(j == 0 or (i, j) == (0, 1) for i, j in L.terms):
        rest = L - BivariatePoly.monomial(0, 1, field, cy)
        return _Graph(L, False, rest.scale(-field.one / cy))
    raise UnsupportedInput("the smooth curve must be a graph x = e(y) or y = e(x) with polynomial e")


def _restrict(g: _Graph, p: BivariatePoly) -> BivariatePoly:
    px, py = g.point()
    return p.substitute(px, py)


def add_line(basis: SaitoBasis, f: BivariatePoly, L: BivariatePoly) -> SaitoBasis:
    """A verified basis of f L from a basis of f, for a smooth curve L = 0.

    With gamma a parametrization of L = 0, p_i = X_i(gamma) ^ gamma' are the
    obstructions to tangency; dividing out their common order gives
    polynomials q_i, and {q_k X_j - q_j X_k, L X_k} is the new basis where k
    has the smaller order.
    """
    g = _as_graph(L)
    if not criterion_check(basis.X1, basis.X2, f)[0]:
        raise InputError("the given pair is not a Saito basis of f")
    if L.divides(f):
        raise InputError("the added curve is already a component")
    X1, X2 = basis.X1, basis.X2
    if X1.valuation() != X2.valuation():
        X2 = X2 + X1
    tx, ty = g.tangent()
    obstructions = []
    for X in (X1, X2):
        p = _restrict(g, X.a * ty - X.b * tx)
        obstructions.append(p)
    orders = [g.parameter_order(p) if not p.is_zero() else INF for p in obstructions]
    if orders[0] == INF and orders[1] == INF:
        raise InputError("both fields are tangent to the added curve")
    keep = 0 if orders[0] <= orders[1] else 1
    k = int(orders[keep])
    q = [g.divide_parameter(p, k) if not p.is_zero() else p for p in obstructions]
    fields = (X1, X2)
    other = 1 - keep
    Z = fields[other].times(q[keep]) - fields[keep].times(q[other])
    return make_basis(Z, fields[keep].times(L), f * L)


def remove_line(basis: SaitoBasis, f: BivariatePoly, L: BivariatePoly) -> SaitoBasis:
    """A verified basis of f from a basis of f L, where L = 0 is smooth.

    Restricting the transverse components to L = 0 gives polynomials whose
    common order is divided out; the combination that vanishes on L = 0 is
    then divided by L exactly.
    """
    g = _as_graph(L)
    fL = f * L
    if not criterion_check(basis.X1, basis.X2, fL)[0]:
        raise InputError("the pair is not a Saito basis of the curve with L = 0 added")
    if L.divides(f):
        raise InputError("L = 0 is a component of f, not an added curve")
    fields = (basis.X1, basis.X2)
    restricted = [_restrict(g, X.b if g.over_y else X.a) for X in fields]
    orders = [g.parameter_order(p) if not p.is_zero() else INF for p in restricted]
    if orders[0] == INF and orders[1] == INF:
        raise ArithmeticError("both fields vanish along the removed curve")
    keep = 0 if orders[0] <= orders[1] else 1
    k = int(orders[keep])
    beta = [g.divide_parameter(p, k) if not p.is_zero() else p for p in restricted]
    other = 1 - keep
    Z = fields[other].times(beta[keep]) - fields[keep].times(beta[other])
    try:
        W = Z.divide_exact(L)
    except ArithmeticError as exc:
        raise ArithmeticError("combination does not vanish on the removed curve") from exc
    return make_basis(W, fields[keep], f)
