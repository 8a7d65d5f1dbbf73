from curvemoduli.catalog import catalog_curve
from curvemoduli.coeffcore import INF
from curvemoduli.curvegerm import Branch, CurveGerm
from curvemoduli.semiring import (
    branch_semigroup,
    compute_semiring,
    odot,
    oplus,
    semiring_by_linear_algebra,
    semiring_equal,
)
from conftest import QQ

GOLDEN_ABSOLUTE = [(1, 2), (2, 4), (3, INF), (INF, 3)]


def branch(x, y):
    return Branch.from_json({"x": x, "y": y}, QQ)


def test_operations():
    assert oplus((1, INF), (2, 3)) == (1, 3)
    assert odot((1, INF), (2, 3)) == (3, INF)


def test_cusp_semigroup():
    s = branch_semigroup(branch([[2, "1"]], [[3, "1"]]))
    assert [n for n in range(8) if n in s] == [0, 2, 3, 4, 5, 6, 7]


def test_golden_semiring():
    g = compute_semiring(catalog_curve("golden"))
    assert g.sigma == (3, 5)
    assert g.absolute_points() == GOLDEN_ABSOLUTE
    assert g.minimal_generators() == [(1, 2), (3, INF), (INF, 3)]
    assert (1, 2) in g and (2, 3) in g and (1, 3) not in g


def test_witnesses_realize_their_values():
    g = compute_semiring(catalog_curve("golden"))
    for alpha in g.members:
        w = g.witness(alpha)
        if w is not None:
            assert g.clip(w.value()) == alpha


def test_against_linear_algebra_oracle():
    for name in ("golden", "double_cusp", "four_lines"):
        c = catalog_curve(name)
        g = compute_semiring(c)
        assert semiring_by_linear_algebra(c, g.sigma) == g.members


def test_semiring_equal_reports_conductor_first():
    a = compute_semiring(catalog_curve("golden"))
    b = compute_semiring(catalog_curve("double_cusp"))
    assert semiring_equal(a, a) == {"equal": True, "reason": None}
    assert semiring_equal(a, b)["reason"] == "conductor mismatch"


def test_semiring_equal_members():
    # a higher-contact cusp keeps the conductor of the second branch different
    smooth = branch([[1, "1"]], [])
    c1 = CurveGerm(QQ, [smooth, branch([[2, "1"]], [[3, "1"]])])
    c2 = CurveGerm(QQ, [smooth, branch([[2, "1"]], [[3, "1"]])])
    assert semiring_equal(compute_semiring(c1), compute_semiring(c2))["equal"]
