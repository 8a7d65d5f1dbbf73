import pytest

from curvemoduli.blowup import (
    blow_up,
    blown_criterion,
    classify,
    curve_tangency_locus,
    divisor_indices,
    index_and_tan,
    is_ordinary,
    moduli_dimension,
    nu0_and_free_points,
    radial_tests,
    tangency_locus,
    two_smooth_branches,
)
from curvemoduli.coeffcore import UnsupportedInput
from curvemoduli.saito import VectorField, adapted_basis, is_dicritical
from conftest import QQ, poly

CATALOG_EQUATIONS = [
    "x*y",
    "x*y*(x+y)",
    "x*y*(x^2-y^2)",
    "x*y*(x^3-y^3+x^2*y^2)",
    "x*y*(x^2-y^2)*(x+2*y+x^2)*(x+3*y)",
    "y*(y+x^3)",
    "(x^2-y^3)*(y^2-x^3)",
    "y^2-x^3",
]


def field(a, b):
    return VectorField.from_exprs(a, b, QQ)


def test_radial_blows_up_to_transverse_field():
    c1, c2 = blow_up(VectorField.radial(QQ))
    assert c1.pullback == field("x", "0")
    assert c1.blown_field == field("1", "0") and c1.exponent == 1
    assert c2.blown_field == field("0", "1") and c2.exponent == 1


def test_strict_transform():
    c1, c2 = blow_up(poly("y^2-x^3"))
    assert c1.strict_transform == poly("y^2-x") and c1.exponent == 2
    assert c2.strict_transform == poly("1-x^3*y") and c2.exponent == 2


def test_index_and_tan_examples():
    assert index_and_tan(VectorField.radial(QQ)) == ("index", 1)
    assert index_and_tan(field("1", "0")) == ("tan", 0)
    assert index_and_tan(field("y^2", "1")) == ("tan", 2)
    with pytest.raises(UnsupportedInput):
        index_and_tan(field("1", "0"), poly("y"))


def test_tangency_locus_of_dicritical_field():
    X = VectorField.radial(QQ).times(poly("y*(y-x)^2"))
    pts = {p.to_json()["slope"]: p.order for p in tangency_locus(X)}
    assert pts == {"0": 1, "1": 2}
    inf = tangency_locus(VectorField.radial(QQ).times(poly("x")))
    assert [p.to_json() for p in inf] == [{"slope": "inf", "order": 1}]


def test_irrational_directions_are_kept_as_factors():
    pts = tangency_locus(VectorField.radial(QQ).times(poly("x^2+y^2")))
    assert len(pts) == 1 and pts[0].degree == 2 and pts[0].to_json()["degree"] == 2


def test_curve_tangency_locus():
    pts = curve_tangency_locus(poly("y*(y+x^4)"))
    assert [p.to_json() for p in pts] == [{"slope": "0", "order": 2}]
    assert curve_tangency_locus(poly("x*y*(x+y)")) == []


@pytest.mark.parametrize("f", CATALOG_EQUATIONS)
def test_divisor_sums(f):
    basis = adapted_basis(poly(f))
    for X in (basis.X1, basis.X2):
        if X.valuation() == 0:
            continue
        if is_dicritical(X):
            assert sum(p.order * p.degree for p in tangency_locus(X)) == X.valuation() - 1
        else:
            assert sum(p.order * p.degree for p in divisor_indices(X)) == X.valuation() + 1


@pytest.mark.parametrize("f", CATALOG_EQUATIONS)
def test_blown_up_basis_satisfies_criterion(f):
    basis = adapted_basis(poly(f))
    assert all(chart["ok"] for chart in blown_criterion(basis))


def test_dimension_formulas():
    assert moduli_dimension(2, 2, 4) == 0
    assert moduli_dimension(1, 3, 4) == 1
    assert moduli_dimension(2, 3, 6, 1) == 4
    assert moduli_dimension(3, 4, 8, 1) == 9
    with pytest.raises(ValueError):
        moduli_dimension(2, 3, 6)
    with pytest.raises(ValueError):
        moduli_dimension(1, 1, 5)


def test_nu0_and_free_points_row6():
    f = poly("x*y*(x^2-y^2)*(x+2*y+x^2)*(x+3*y)")
    data = nu0_and_free_points(adapted_basis(f), f)
    assert data["nu0"] == 1 and data["free_points"] == 1 and data["consistent"]


def test_radial_tests():
    assert radial_tests(poly("x*y*(x^2-y^2)")) == "pure_radial"
    assert radial_tests(poly("x*y*(x^3-y^3+x^2*y^2)")) == "radial"
    assert radial_tests(poly("(x^2-y^3)*(y^2-x^3)")) == "not_radial"


def test_curve_shape_predicates():
    assert is_ordinary(poly("x*y*(x+y)")) and not is_ordinary(poly("y^2-x^3"))
    assert two_smooth_branches(poly("y*(y+x^3)"))
    assert two_smooth_branches(poly("y^2-x^4"))
    assert not two_smooth_branches(poly("y^2-x^3"))


def test_classify_short_circuits():
    assert classify(poly("x")).dimension == 0
    r = classify(poly("y*(y+x^3)"))
    assert r.dimension == 0 and r.dimension_status == "two smooth branches"
    assert classify(poly("(x^2-y^3)*(y^2-x^3)")).dimension is None


def test_classify_perturbs_special_curves():
    r = classify(poly("x^5+y^5"))
    assert r.perturbation is not None and r.input_basis.nu1 == 1
    assert (r.nu1, r.nu2, r.type, r.dimension) == (2, 2, "Od", 2)
    assert classify(poly("x^5+y^5"), perturb=False).dimension is None
