import pytest

from curvemoduli.catalog import catalog_curve
from curvemoduli.coeffcore import INF, InputError, UnsupportedInput
from curvemoduli.curvegerm import Branch, CurveGerm, branch_eliminant
from conftest import QQ, poly


def branch(x, y):
    return Branch.from_json({"x": x, "y": y}, QQ)


def test_cusp_eliminant():
    cusp = branch([[2, "1"]], [[3, "1"]])
    e = branch_eliminant(cusp)
    assert e == poly("y^2-x^3") or e == poly("x^3-y^2")
    assert cusp.multiplicity == 2


def test_golden_intersections():
    c = catalog_curve("golden")
    assert c.branch_count == 2
    assert c.intersection_matrix() == [[INF, 3], [3, INF]]
    assert c.multiplicity() == 3


def test_equation_from_branches_only():
    c = CurveGerm(QQ, [branch([[1, "1"]], []), branch([], [[1, "1"]])])
    assert c.equation == poly("x*y") or c.equation == poly("-x*y")


def test_inconsistent_equation_rejected():
    with pytest.raises(InputError):
        CurveGerm(QQ, [branch([[1, "1"]], [])], poly("x"))
    with pytest.raises(InputError):
        CurveGerm(QQ, [], poly("1+x"))


def test_marking_and_json_round_trip():
    c = catalog_curve("golden")
    m = c.with_marking([1, 0])
    assert m.branches == (c.branches[1], c.branches[0])
    back = CurveGerm.from_json(m.to_json())
    assert back.branches == m.branches and back.equation == m.equation
    with pytest.raises(InputError):
        c.with_marking([0, 0])


def test_equation_only_needs_branches_for_semiring_work():
    c = CurveGerm(QQ, [], poly("x^5+y^5"))
    with pytest.raises(UnsupportedInput):
        c.require_branches()


def test_two_smooth_detection():
    assert catalog_curve("tangent_smooth_pair").is_union_of_two_smooth()
    assert not catalog_curve("golden").is_union_of_two_smooth()
