import pytest

from curvemoduli.coeffcore import InputError, UnsupportedInput
from curvemoduli.saito import (
    SaitoError,
    VectorField,
    adapted_basis,
    add_line,
    basis_type,
    criterion_check,
    find_saito_basis,
    is_dicritical,
    is_tangent,
    make_basis,
    radial_factor,
    reduce_against,
    remove_line,
    require_reduced,
    saito_number,
    tangency_cofactor,
    tangent_slice,
)
from conftest import QQ, poly

DOUBLE_CUSP = "(x^2-y^3)*(y^2-x^3)"


def field(a, b):
    return VectorField.from_exprs(a, b, QQ)


def test_hamiltonian_and_radial_are_tangent_to_homogeneous():
    f = poly("x*y*(x+y)")
    assert is_tangent(VectorField.hamiltonian(f), f)
    assert tangency_cofactor(VectorField.radial(QQ), f) == poly("3")
    assert not is_tangent(field("1", "0"), f)


def test_double_cusp_printed_field():
    f = poly(DOUBLE_CUSP)
    X1 = field("2*x^2+5/2*y^3-9/2*x^3*y", "3*x*y-3*x^2*y^2")
    assert is_tangent(X1, f)
    assert X1.valuation() == 2
    assert saito_number(f) == 2


def test_reduced_required():
    with pytest.raises(InputError):
        require_reduced(poly("x^2*y"))
    with pytest.raises(InputError):
        require_reduced(poly("1+x"))


def test_slice_members_are_tangent():
    f = poly("y^2-x^3")
    sl = tangent_slice(f, 4)
    assert sl.fields and all(is_tangent(X, f) for X in sl.fields)
    assert sl.minimal_valuation() == 1


def test_criterion_on_known_bases():
    f = poly("x*y")
    ok, unit = criterion_check(field("x", "0"), field("0", "y"), f)
    assert ok and unit != 0
    ok, _ = criterion_check(field("x", "y"), field("x^2", "x*y"), f)
    assert not ok
    with pytest.raises(SaitoError):
        make_basis(field("x", "y"), field("x^2", "x*y"), f)


@pytest.mark.parametrize(
    "f, nus, label",
    [
        ("x", (0, 1), "O"),
        ("x*y", (1, 1), "E"),
        ("x*y*(x+y)", (1, 2), "Od'"),
        ("x*y*(x^2-y^2)", (1, 3), "Ed'"),
        ("x*y*(x^3-y^3+x^2*y^2)", (2, 2), "Od"),
        ("x*y*(x^2-y^2)*(x+2*y+x^2)*(x+3*y)", (2, 3), "Ed"),
        ("x^2+y^2", (1, 1), "E"),
    ],
)
def test_adapted_types(f, nus, label):
    b = adapted_basis(poly(f))
    assert (b.nu1, b.nu2) == nus
    assert b.type_label == label
    assert b.verify()


def test_basis_type_table():
    assert basis_type(5, 2, 2, True, True) == "Od"
    assert basis_type(6, 2, 3, True, True) == "Ed"
    assert basis_type(4, 1, 3, True, False) == "Ed'"
    assert basis_type(3, 1, 2, True, False) == "Od'"
    assert basis_type(4, 2, 2, False, False) == "E"
    assert basis_type(6, 1, 5, True, False) == "unclassified"


def test_dicritical_and_radial_factor():
    X = VectorField.radial(QQ).times(poly("x+y"))
    assert is_dicritical(X)
    assert radial_factor(X) == poly("x+y")
    assert not is_dicritical(field("x", "-y"))


def test_reduce_against_strips_multiples():
    X1 = field("x", "y")
    X2 = X1.times(poly("x+y")) + field("y^3", "0")
    assert reduce_against(X2, X1, 5) == field("y^3", "0")


def test_remove_line_from_two_lines():
    f = poly("x*y")
    basis = make_basis(field("x", "0"), field("0", "y"), f)
    smaller = remove_line(basis, poly("y"), poly("x"))
    assert smaller.nu1 == 0 and smaller.verify()


@pytest.mark.parametrize("f, L", [("x*y", "x+y"), ("y^2-x^3", "x"), ("x*y*(x+y)", "y-2*x+x^2"), (DOUBLE_CUSP, "x+y")])
def test_add_remove_round_trip(f, L):
    f, L = poly(f), poly(L)
    base = adapted_basis(f)
    bigger = add_line(base, f, L)
    assert bigger.verify() and bigger.f == f * L
    assert base.nu1 in (bigger.nu1 - 1, bigger.nu1)
    back = remove_line(bigger, f, L)
    assert back.verify() and back.nu1 == base.nu1


def test_line_must_be_a_graph():
    f = poly("x*y")
    with pytest.raises(UnsupportedInput):
        add_line(adapted_basis(f), f, poly("x^2-y^3"))


def test_basis_json_fields():
    doc = adapted_basis(poly("x*y*(x+y)")).to_json()
    assert doc["nu1"] == 1 and doc["nu2"] == 2 and doc["type"] == "Od'"
    assert doc["dicritical"] == [True, False]
    assert VectorField.from_json(doc["X1"], QQ).valuation() == 1


def test_find_basis_respects_degree_bound():
    assert find_saito_basis(poly("x*y"), 2).nu1 == 1
