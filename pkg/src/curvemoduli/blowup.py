"""One blow-up of the origin, and the classification built on it.

Chart 1 is (x1, y1) -> (x1, x1 y1) with divisor x1 = 0, chart 2 is
(x2, y2) -> (x2 y2, y2) with divisor y2 = 0.  Inside this module both charts
reuse the variables x and y of ``BivariatePoly``.  A point of the divisor is
a tangent direction: the slope y/x as seen from chart 1, or "inf" for the
direction x = 0 which is the origin of chart 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import flint

from .coeffcore import INF, BivariatePoly, FieldSpec, UnsupportedInput, binary_form_gcd, upoly_order, upoly_trim
from .linalg import generic_scalars
from .saito import (
    UNCLASSIFIED,
    SaitoBasis,
    VectorField,
    adapt_basis,
    find_saito_basis,
    is_dicritical,
    require_reduced,
)

__all__ = [
    "ChartData",
    "DivisorPoint",
    "blow_up",
    "is_dicritical",
    "tangency_locus",
    "curve_tangency_locus",
    "index_and_tan",
    "divisor_indices",
    "radial_tests",
    "nu0_and_free_points",
    "moduli_dimension",
    "classify",
    "ClassificationReport",
    "blown_criterion",
    "free_points",
    "is_ordinary",
    "two_smooth_branches",
    "generic_perturbation",
]


@dataclass
class ChartData:
    """The blown-up object in one chart.

    ``exponent`` is the power of the divisor coordinate that was divided out.
    For a vector field it is counted against the plain pull-back, so it is
    one less than the power removed from the polynomial field x1 E*X.
    """

    chart: int
    strict_transform: BivariatePoly | None = None
    blown_field: VectorField | None = None
    pullback: VectorField | None = None
    exponent: int = 0


def _chart_maps(field: FieldSpec, chart: int):
    x, y = BivariatePoly.x(field), BivariatePoly.y(field)
    return (x, x * y) if chart == 1 else (x * y, y)


def _divisor_power(p: BivariatePoly, chart: int) -> int:
    return p.max_power_dividing_x() if chart == 1 else p.max_power_dividing_y()


def _divide_divisor(p: BivariatePoly, chart: int, k: int) -> BivariatePoly:
    return p.shift_monomial(-k, 0) if chart == 1 else p.shift_monomial(0, -k)


def _blow_poly(p: BivariatePoly, chart: int) -> ChartData:
    px, py = _chart_maps(p.field, chart)
    q = p.substitute(px, py)
    k = _divisor_power(q, chart) if not q.is_zero() else 0
    return ChartData(chart, strict_transform=_divide_divisor(q, chart, k), exponent=k)


def _blow_field(X: VectorField, chart: int) -> ChartData:
    field = X.field
    px, py = _chart_maps(field, chart)
    a, b = X.a.substitute(px, py), X.b.substitute(px, py)
    x, y = BivariatePoly.x(field), BivariatePoly.y(field)
    if chart == 1:
        # x1' = a,  y1' = (b - y1 a) / x1;  work with x1 times the pull-back
        P, Q = x * a, b - y * a
    else:
        P, Q = a - x * b, y * b
    k = min(_divisor_power(P, chart) if not P.is_zero() else INF,
            _divisor_power(Q, chart) if not Q.is_zero() else INF)
    if k == INF:
        raise ValueError("the zero field cannot be blown up")
    k = int(k)
    blown = VectorField(_divide_divisor(P, chart, k), _divide_divisor(Q, chart, k))
    pull = None
    if k >= 1:
        pull = VectorField(_divide_divisor(P, chart, 1), _divide_divisor(Q, chart, 1))
    return ChartData(chart, blown_field=blown, pullback=pull, exponent=k - 1)


def blow_up(obj) -> tuple[ChartData, ChartData]:
    """Strict transform of a polynomial, or blown-up field, in both charts."""
    if isinstance(obj, VectorField):
        return _blow_field(obj, 1), _blow_field(obj, 2)
    return _blow_poly(obj, 1), _blow_poly(obj, 2)


# ---------------------------------------------------------------------------
# points of the divisor


@dataclass(frozen=True)
class DivisorPoint:
    """A direction with an order.  Irrational slopes stay as a factor of s = y/x."""

    slope: object = None
    factor: tuple | None = None
    order: int = 1

    @property
    def degree(self) -> int:
        return 1 if self.factor is None else len(self.factor) - 1

    def to_json(self) -> dict:
        if self.factor is None:
            slope = "inf" if self.slope == "inf" else str(self.slope)
            return {"slope": slope, "order": self.order}
        terms = [f"{c}*s^{k}" for k, c in enumerate(self.factor) if c != 0]
        return {"factor": " + ".join(terms), "degree": self.degree, "order": self.order}

    def key(self):
        return ("inf",) if self.slope == "inf" else (str(self.slope), self.factor)


def _points_of(coeffs: list, field: FieldSpec) -> list[DivisorPoint]:
    """Roots (with multiplicity) of a polynomial in the slope, lowest degree first."""
    coeffs = upoly_trim(list(coeffs))
    if len(coeffs) <= 1:
        return []
    if not field.is_rational:
        if not all(field.is_rational_value(c) for c in coeffs):
            # no factorization over extensions: report the whole polynomial
            lead = coeffs[-1]
            return [DivisorPoint(factor=tuple(str(c / lead) for c in coeffs), order=1)]
        coeffs = [field.coefficients(c)[0] for c in coeffs]
    _, factors = flint.fmpq_poly(coeffs).factor()
    out = []
    for poly, mult in factors:
        cs = [poly[k] for k in range(poly.degree() + 1)]
        if len(cs) == 2:
            out.append(DivisorPoint(slope=-cs[0] / cs[1], order=int(mult)))
        else:
            lead = cs[-1]
            out.append(DivisorPoint(factor=tuple(c / lead for c in cs), order=int(mult)))
    out.sort(key=lambda p: (p.factor is not None, p.degree, str(p.slope), str(p.factor)))
    return out


def _on_divisor(p: BivariatePoly, chart: int) -> list:
    """The restriction to the divisor, as coefficients in the other variable."""
    if chart == 1:
        terms = {j: c for (i, j), c in p.terms.items() if i == 0}
    else:
        terms = {i: c for (i, j), c in p.terms.items() if j == 0}
    top = max(terms, default=-1)
    return [terms.get(k, p.field.zero) for k in range(top + 1)]


def _divisor_zeros(p1: BivariatePoly, p2: BivariatePoly) -> list[DivisorPoint]:
    """Zeros on the divisor of a function seen in chart 1 as p1 and chart 2 as p2."""
    field = p1.field
    points = _points_of(_on_divisor(p1, 1), field)
    inf = upoly_order(_on_divisor(p2, 2))
    if inf == INF:
        raise ValueError("function vanishes identically on the divisor")
    if inf > 0:
        points.append(DivisorPoint(slope="inf", order=int(inf)))
    return points


def tangency_locus(X: VectorField) -> list[DivisorPoint]:
    """Tan(X^E, D): points where the blown-up field touches the divisor, with tangency order."""
    c1, c2 = blow_up(X)
    transverse1 = c1.blown_field.a  # component along x1, the divisor equation
    transverse2 = c2.blown_field.b
    if not _on_divisor(transverse1, 1) and not _on_divisor(transverse2, 2):
        raise ValueError("the divisor is invariant: use divisor_indices instead")
    return _divisor_zeros(transverse1, transverse2)


def divisor_indices(X: VectorField) -> list[DivisorPoint]:
    """Index of X^E along an invariant divisor at each of its zeros on D."""
    c1, c2 = blow_up(X)
    if _on_divisor(c1.blown_field.a, 1):
        raise ValueError("the divisor is not invariant: use tangency_locus instead")
    return _divisor_zeros(c1.blown_field.b, c2.blown_field.a)


def curve_tangency_locus(f: BivariatePoly) -> list[DivisorPoint]:
    """Tan(S^E, D): directions where the strict transform is not a smooth curve
    crossing D transversally, i.e. repeated lines of the tangent cone.  The
    order is the intersection number of S^E with D there."""
    cone = f.initial_form()
    points = _divisor_zeros(_blow_poly(cone, 1).strict_transform, _blow_poly(cone, 2).strict_transform)
    return [p for p in points if p.order >= 2]


def index_and_tan(X: VectorField, curve: BivariatePoly | None = None):
    """('index', n) if x = 0 is invariant by X, else ('tan', n).

    ``curve`` defaults to x; only x itself is accepted, so move the point and
    the curve there first.
    """
    field = X.field
    if curve is not None and curve != BivariatePoly.x(field):
        raise UnsupportedInput("coordinates must be adapted so the curve is x = 0")
    a0 = _on_divisor(X.a, 1)
    b0 = _on_divisor(X.b, 1)
    if not upoly_trim(a0):
        return "index", upoly_order(b0)
    return "tan", upoly_order(a0)


# ---------------------------------------------------------------------------
# radial type, free points, dimension


def radial_tests(f: BivariatePoly, basis: SaitoBasis | None = None, degree_bound: int | None = None) -> str:
    """'not_radial', 'radial' or 'pure_radial'.

    Radial means every tangent field of least valuation is dicritical.  Such a
    field is a X1 + b X2 with a(0) != 0, or any combination with constant
    coefficients when nu1 = nu2, so the basis alone decides.  Pure radial is
    read off the adapted type (Ed' or Od').
    """
    basis = basis or find_saito_basis(f, degree_bound)
    d1, d2 = basis.dicritical
    if not d1 or (basis.nu2 == basis.nu1 and not d2):
        return "not_radial"
    label = basis.type_label or adapt_basis(basis, f).type_label
    return "pure_radial" if label in ("Ed'", "Od'") else "radial"


def _form_gcd_and_primitive(V: VectorField):
    """(g, P) with V = g P for a homogeneous field and P without common factor."""
    field = V.field
    if V.a.is_zero():
        return V.b, VectorField(BivariatePoly.zero(field), BivariatePoly.constant(1, field))
    if V.b.is_zero():
        return V.a, VectorField(BivariatePoly.constant(1, field), BivariatePoly.zero(field))
    g = binary_form_gcd(V.a, V.b)
    return g, VectorField(V.a.divide_exact(g), V.b.divide_exact(g))


def nu0_and_free_points(basis: SaitoBasis, f: BivariatePoly | None = None) -> dict:
    """nu0 from the common factor of the initial parts, and the free points of X1.

    Needs nu1 + nu2 = nu(S) - 1, where the two initial parts are proportional.
    Free points are the tangency points of X1^E outside Tan(S^E, D), counted
    with and without their tangency order.
    """
    f = f or basis.f
    nu_s = int(f.order())
    if basis.nu1 + basis.nu2 != nu_s - 1:
        raise ValueError("nu0 is defined when nu1 + nu2 = nu(S) - 1")
    I1, I2 = basis.X1.initial_part(), basis.X2.initial_part()
    g1, P1 = _form_gcd_and_primitive(I1)
    g2, P2 = _form_gcd_and_primitive(I2)
    if not P1.wedge(P2).is_zero():
        raise ValueError("initial parts are not proportional: inconsistent basis")
    common = binary_form_gcd(g1, g2)
    nu0 = int(common.degree()) + max(int(P1.degree()), 0)
    free = free_points(basis.X1, f)
    return {
        "nu0": nu0,
        "free_points": basis.nu1 - nu0,
        "free_points_tangency": free["with_order"],
        "free_points_distinct": free["distinct"],
        "consistent": free["with_order"] == basis.nu1 - nu0,
    }


def free_points(X1: VectorField, f: BivariatePoly) -> dict:
    """Tan(X1^E, D) minus Tan(S^E, D), for a dicritical X1."""
    if not is_dicritical(X1):
        return {"points": [], "with_order": None, "distinct": None}
    curve_points = {p.key() for p in curve_tangency_locus(f)}
    pts = [p for p in tangency_locus(X1) if p.key() not in curve_points]
    return {
        "points": pts,
        "with_order": sum(p.order * p.degree for p in pts),
        "distinct": sum(p.degree for p in pts),
    }


def moduli_dimension(nu1: int, nu2: int, nu_s: int, nu0: int | None = None) -> int:
    """Closed form of dim H^1 from the multiplicities of an adapted basis."""

    def term(n):
        return (n - 1) * (n - 2) // 2

    if nu1 + nu2 == nu_s:
        return term(nu1) + term(nu2)
    if nu1 + nu2 == nu_s - 1:
        if nu0 is None:
            raise ValueError("nu0 is needed when nu1 + nu2 = nu(S) - 1")
        return term(nu1) + term(nu2) + nu_s - 2 - nu0
    raise ValueError(f"nu1 + nu2 = {nu1 + nu2} is not nu(S) or nu(S) - 1 (nu(S) = {nu_s})")


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    nuS: int
    nu1: int
    nu2: int
    type: str
    dicritical: tuple
    saito_number: int
    radial: str
    nu0: int | None
    free_points: int | None
    free_points_distinct: int | None
    tan_S: list
    dimension: int | None
    dimension_status: str
    perturbation: BivariatePoly | None
    basis: SaitoBasis
    notes: list
    input_basis: SaitoBasis | None = None

    @property
    def supported(self) -> bool:
        return self.dimension is not None and self.type != UNCLASSIFIED

    def to_json(self) -> dict:
        doc = {
            "nuS": self.nuS,
            "nu1": self.nu1,
            "nu2": self.nu2,
            "type": self.type,
            "dicritical": list(self.dicritical),
            "saito_number": self.saito_number,
            "radial": self.radial,
            "nu0": self.nu0,
            "free_points": self.free_points,
            "free_points_distinct": self.free_points_distinct,
            "tan_S": [p.to_json() for p in self.tan_S],
            "dimension": self.dimension if self.dimension is not None else "unsupported",
            "dimension_status": self.dimension_status,
        }
        if self.perturbation is not None:
            doc["perturbation"] = self.perturbation.to_json()
            own = self.input_basis
            doc["input_saito"] = {"nu1": own.nu1, "nu2": own.nu2, "type": own.type_label}
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def is_ordinary(f: BivariatePoly) -> bool:
    """Tangent cone without repeated lines: one blow-up resolves the curve."""
    points = _divisor_zeros(_blow_poly(f.initial_form(), 1).strict_transform,
                            _blow_poly(f.initial_form(), 2).strict_transform)
    return all(p.order == 1 for p in points)


def two_smooth_branches(f: BivariatePoly, branch_multiplicities=None) -> bool:
    if branch_multiplicities is not None:
        return list(branch_multiplicities) == [1, 1]
    if f.order() != 2 or not f.field.is_rational:
        return False
    from .coeffcore import _from_mpoly, _to_mpoly

    _, factors = _to_mpoly(f.terms).factor()
    local = [BivariatePoly(_from_mpoly(p), f.field) for p, e in factors]
    local = [p for p in local if p.coeff(0, 0) == 0]
    return len(local) == 2 and all(p.order() == 1 for p in local)


def generic_perturbation(f: BivariatePoly, attempt: int = 0) -> BivariatePoly:
    """All monomials of degree nu(S) + 1 with consecutive prime coefficients."""
    n = int(f.order()) + 1
    primes = generic_scalars(n + 1, attempt * (n + 1))
    return BivariatePoly({(n - k, k): primes[k] for k in range(n + 1)}, f.field)


def classify(f: BivariatePoly, degree_bound: int | None = None, branch_multiplicities=None,
             perturb: bool = True, max_attempts: int = 3) -> ClassificationReport:
    """Saito basis, adapted type, free points and moduli dimension of f = 0.

    An ordinary singularity whose basis fits none of the six shapes is special
    in its moduli; it is replaced by f plus prime-coefficient terms of degree
    nu(S) + 1 (same topological class) and the added terms are reported.
    """
    require_reduced(f)
    nu_s = int(f.order())
    notes: list = []
    ordinary = is_ordinary(f)
    basis = adapt_basis(find_saito_basis(f, degree_bound), f)
    perturbation = None
    own = None
    work = f
    if basis.type_label == UNCLASSIFIED and ordinary and perturb and nu_s >= 3:
        for attempt in range(max_attempts):
            extra = generic_perturbation(f, attempt)
            candidate = adapt_basis(find_saito_basis(f + extra, degree_bound), f + extra)
            if candidate.type_label != UNCLASSIFIED:
                own = basis
                work, basis, perturbation = f + extra, candidate, extra
                notes.append("input is special in its moduli; classified a generic perturbation")
                break
    d1, d2 = basis.dicritical
    radial = radial_tests(work, basis, degree_bound)
    nu0 = fp = fp_distinct = None
    if basis.nu1 + basis.nu2 == nu_s - 1:
        data = nu0_and_free_points(basis, work)
        nu0, fp, fp_distinct = data["nu0"], data["free_points"], data["free_points_distinct"]
        if not data["consistent"]:
            notes.append(f"tangency count {data['free_points_tangency']} differs from nu1 - nu0 = {fp}")
    elif d1:
        data = free_points(basis.X1, work)
        fp, fp_distinct = data["with_order"], data["distinct"]
    tan_s = curve_tangency_locus(f)

    dimension = None
    if nu_s <= 1:
        dimension, status = 0, "smooth curve"
    elif two_smooth_branches(f, branch_multiplicities):
        dimension, status = 0, "two smooth branches"
    elif not ordinary:
        status = "unsupported: the curve is not resolved by one blow-up"
    elif basis.type_label == UNCLASSIFIED:
        status = "unsupported: basis fits none of the adapted shapes"
    else:
        dimension = moduli_dimension(basis.nu1, basis.nu2, nu_s, nu0)
        status = "closed form"
    return ClassificationReport(
        nuS=nu_s, nu1=basis.nu1, nu2=basis.nu2, type=basis.type_label, dicritical=(d1, d2),
        saito_number=basis.nu1, radial=radial, nu0=nu0, free_points=fp, free_points_distinct=fp_distinct,
        tan_S=tan_s, dimension=dimension, dimension_status=status, perturbation=perturbation,
        basis=basis, notes=notes, input_basis=own,
    )


def blown_criterion(basis: SaitoBasis) -> list[dict]:
    """Saito's criterion for the blown-up pair, chart by chart.

    X1^E ^ X2^E = U D^e f^E with f^E the strict transform; the pair is a
    basis near every point of D exactly when U restricted to D has no zero,
    i.e. is a nonzero constant.
    """
    out = []
    for chart, (c1, c2, cf) in enumerate(zip(blow_up(basis.X1), blow_up(basis.X2), blow_up(basis.f)), 1):
        w = c1.blown_field.wedge(c2.blown_field)
        k = _divisor_power(w, chart)
        try:
            unit = _divide_divisor(w, chart, k).divide_exact(cf.strict_transform)
        except ArithmeticError:
            out.append({"chart": chart, "ok": False, "divisor_exponent": k})
            continue
        rest = upoly_trim(_on_divisor(unit, chart))
        out.append({"chart": chart, "ok": len(rest) == 1, "divisor_exponent": k})
    return out
