import random

from flint import fmpq

from curvemoduli.catalog import catalog_curve
from curvemoduli.normalform import (
    act,
    compose_jets,
    identity_jets,
    marked_equivalent,
    moduli_point,
    orbit_reduce,
)


def golden():
    return moduli_point(catalog_curve("golden"))


def rq(rng, nonzero=False):
    while True:
        q = fmpq(rng.randint(-9, 9), rng.randint(1, 5))
        if q != 0 or not nonzero:
            return q


def golden_action(a, b, c, u, v, al, be, ga):
    return [
        a * al**2 / u,
        (-a**2 * al**4 * v - 2 * a * al**2 * be * c * u**2 + al**4 * b * u**2 + 2 * a * al * ga * u**2 - 5 * a * be**2 * u**2) / u**3,
        al * c + 3 * be / al,
    ]


def test_golden_shape():
    ng = golden()
    assert ng.sigma == (3, 5)
    assert ng.positions() == [(0, 1, 2), (0, 1, 4), (1, 1, 4)]
    assert ng.values[0] == (1, 2)


def test_golden_action_formula():
    ng = golden()
    rng = random.Random(7)
    for _ in range(10):
        u, al = rq(rng, True), rq(rng, True)
        v, be, ga, de = rq(rng), rq(rng), rq(rng), rq(rng)
        a, b, c = rq(rng, True), rq(rng), rq(rng)
        phi = [[0, u, v], [0, al, be, ga, de]]
        assert act(phi, [a, b, c], ng) == golden_action(a, b, c, u, v, al, be, ga)


def test_identity_acts_trivially():
    ng = golden()
    assert act(identity_jets(ng.sigma, ng.field), [fmpq(2), fmpq(3), fmpq(5)], ng) == [2, 3, 5]


def test_action_law():
    ng = golden()
    rng = random.Random(11)
    for _ in range(5):
        phi = [[0, rq(rng, True), rq(rng)], [0, rq(rng, True), rq(rng), rq(rng), rq(rng)]]
        psi = [[0, rq(rng, True), rq(rng)], [0, rq(rng, True), rq(rng), rq(rng), rq(rng)]]
        A = [rq(rng, True), rq(rng), rq(rng)]
        both = compose_jets(psi, phi, ng.field, ng.sigma)
        # acting by psi o phi is acting by psi, then by phi
        assert act(both, A, ng) == act(phi, act(psi, A, ng), ng)


def test_orbit_reduce_golden():
    ng = golden()
    rng = random.Random(5)
    for _ in range(3):
        rep, free = orbit_reduce([rq(rng, True), rq(rng), rq(rng)], ng)
        assert rep == [1, 0, 0] and free == []


def test_four_lines_keep_cross_ratio():
    ng = moduli_point(catalog_curve("four_lines"))
    rep, free = orbit_reduce(ng.coefficients(), ng)
    assert len(free) == 1
    assert rep[free[0]] == 2


def test_marked_equivalence():
    same = marked_equivalent(catalog_curve("golden"), catalog_curve("golden"))
    assert same["equivalent"]
    other = marked_equivalent(catalog_curve("golden"), catalog_curve("double_cusp"))
    assert not other["equivalent"] and "conductor" in other["reason"]


def test_two_smooth_branches_have_no_moduli():
    ng = moduli_point(catalog_curve("tangent_smooth_pair"))
    assert ng.positions() == [] and "y(y+x^3)" in ng.note
