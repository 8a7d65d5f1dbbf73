"""Randomized invariants, each on at least 50 generated curves."""

import itertools

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from curvemoduli.coeffcore import INF, BivariatePoly, InputError
from curvemoduli.curvegerm import Branch, CurveGerm
from curvemoduli.normalform import AmbientAlgebra, generator_pair, generator_precision, moduli_point, normalize_pair
from curvemoduli.saito import adapt_basis, add_line, find_saito_basis, remove_line, require_reduced
from curvemoduli.semiring import compute_semiring, odot, oplus, semiring_by_linear_algebra
from conftest import QQ, poly

PROPS = settings(max_examples=50, deadline=None, derandomize=True,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
small = st.integers(-4, 4)


@st.composite
def factor(draw):
    kind = draw(st.sampled_from(["line", "line", "line", "graph_x", "cusp", "tacnode"]))
    a, b = draw(small), draw(small)
    if kind == "line":
        return poly(f"y-({a})*x-({b})*x^2")
    if kind == "graph_x":
        return poly(f"x-({b})*y^2")
    if kind == "cusp":
        return poly(f"y^2-x^3+({b})*x^2*y")
    return poly(f"y^3-x^4+({a})*x^3*y")


@st.composite
def reduced_curve(draw, max_mult=6):
    f = BivariatePoly.constant(1, QQ)
    for _ in range(draw(st.integers(1, 4))):
        g = draw(factor())
        if f.order() + g.order() > max_mult:
            break
        f = f * g
    try:
        require_reduced(f)
    except InputError:
        assume(False)
    return f


@st.composite
def smooth_graph(draw):
    a, b = draw(small), draw(small)
    if draw(st.booleans()):
        return poly(f"y-({a})*x-({b})*x^2")
    return poly(f"x-({a})*y-({b})*y^2")


# ---------------------------------------------------------------------------
# vector fields


@PROPS
@given(reduced_curve())
def test_basis_inequalities(f):
    basis = find_saito_basis(f)
    assert basis.verify()
    nu = f.order()
    assert basis.nu1 + basis.nu2 <= nu
    assert 2 * basis.nu1 <= nu


@PROPS
@given(reduced_curve())
def test_dicriticality_implications(f):
    for basis in (find_saito_basis(f), adapt_basis(find_saito_basis(f), f)):
        d1, d2 = basis.dicritical
        total = basis.nu1 + basis.nu2
        if d1 and total < f.order():
            assert d2
        if d1 and total == f.order():
            assert not d2


@PROPS
@given(reduced_curve(max_mult=5), smooth_graph())
def test_add_remove_round_trip(f, L):
    assume(not L.divides(f))
    base = find_saito_basis(f)
    bigger = add_line(base, f, L)
    assert bigger.verify()
    back = remove_line(bigger, f, L)
    assert back.verify() and back.nu1 == base.nu1


@PROPS
@given(reduced_curve(max_mult=5), smooth_graph())
def test_saito_number_drops_by_at_most_one(f, L):
    assume(not L.divides(f))
    s = find_saito_basis(f).nu1
    s_union = find_saito_basis(f * L).nu1
    assert s in (s_union - 1, s_union)


# ---------------------------------------------------------------------------
# value semirings

TEMPLATES = [
    (1, [1, 2, 3]),
    (2, [3, 4, 5]),
    (2, [5, 6, 7]),
    (3, [4, 5, 7]),
    (3, [5, 6, 7]),
]


@st.composite
def branch(draw, max_mult=3):
    m, exps = draw(st.sampled_from([t for t in TEMPLATES if t[0] <= max_mult]))
    coeffs = [draw(small) for _ in exps]
    if m == 1:
        ys = [[e, str(c)] for e, c in zip(exps, coeffs) if c]
    else:
        ys = [[exps[0], "1"]] + [[e, str(c)] for e, c in zip(exps[1:], coeffs[1:]) if c]
    return Branch.from_json({"x": [[m, "1"]], "y": ys}, QQ)


@st.composite
def marked_curve(draw, max_mult=5):
    first = draw(branch())
    branches = [first]
    if draw(st.booleans()):
        second = draw(branch(max_mult=max_mult - first.multiplicity))
        assume(second != first)
        if draw(st.booleans()):
            # swap the coordinates of the second branch for a transverse one
            second = Branch(second.y, second.x, QQ) if second.multiplicity == 1 else second
        branches.append(second)
    try:
        curve = CurveGerm(QQ, branches)
        curve.equation
    except (InputError, ArithmeticError, ValueError):
        assume(False)
    assume(curve.multiplicity() <= max_mult)
    return curve


def window_points(gamma):
    return list(itertools.product(*[list(range(s + 1)) + [INF] for s in gamma.sigma]))


@PROPS
@given(marked_curve())
def test_semiring_closure_and_witnesses(curve):
    gamma = compute_semiring(curve)
    members = [a for a in window_points(gamma) if a in gamma]
    for a in members:
        for b in members:
            assert oplus(a, b) in gamma
            assert odot(a, b) in gamma
    for alpha in gamma.members:
        w = gamma.witness(alpha)
        if w is not None:
            assert gamma.clip(w.value()) == alpha


@PROPS
@given(marked_curve())
def test_semiring_matches_linear_algebra_oracle(curve):
    gamma = compute_semiring(curve)
    assert semiring_by_linear_algebra(curve, gamma.sigma) == gamma.members


@PROPS
@given(marked_curve(), st.integers(1, 5))
def test_truncation_keeps_semiring(curve, c):
    gamma = compute_semiring(curve)
    far = 2 * max(gamma.sigma) + 4
    moved = []
    for b in curve.branches:
        y = list(b.y) + [QQ.zero] * (far + 1 - len(b.y))
        y[far] = y[far] + c
        moved.append(Branch(b.x, tuple(y), QQ))
    other = compute_semiring(CurveGerm(QQ, moved))
    assert other.sigma == gamma.sigma and other.members == gamma.members


@PROPS
@given(marked_curve(), small, small, small)
def test_normal_form_independent_of_witnesses(curve, p, q, s):
    gamma = compute_semiring(curve)
    reference = moduli_point(curve, gamma=gamma)
    assume(reference.positions())
    values, wits = generator_pair(gamma)
    prec = tuple(max(a, b) for a, b in zip(generator_precision(values[0], gamma.sigma),
                                           generator_precision(values[1], gamma.sigma)))
    alg = AmbientAlgebra(curve, prec)
    unit = poly(f"1+({p})*x+({q})*y")
    first = wits[0].expr * unit + wits[1].expr * poly(f"({s})*x*y")
    second = wits[1].expr * poly(f"1+({q})*x")
    pair = (alg.image(first), alg.image(second))
    assume(all(a == b for a, b in zip(alg.witness(first).value(), values[0])))
    assume(all(a == b for a, b in zip(alg.witness(second).value(), values[1])))
    again = normalize_pair(pair, values, gamma)
    assert again.coefficients() == reference.coefficients()
