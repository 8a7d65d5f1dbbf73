import random

import sympy
from flint import fmpq

from curvemoduli import linalg
from curvemoduli.coeffcore import FieldSpec

QQ = FieldSpec()
K = FieldSpec([-2, 0, 1])


def to_matrix(rows, n):
    return sympy.Matrix([[sympy.Rational(str(r.get(j, 0))) for j in range(n)] for r in rows])


def test_nullspace_matches_sympy():
    rng = random.Random(3)
    for _ in range(20):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        rows = [{j: fmpq(rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.6} for _ in range(m)]
        basis = linalg.nullspace(rows, n, QQ)
        assert len(basis) == n - to_matrix(rows, n).rank()
        for v in basis:
            for r in rows:
                assert sum(c * v.get(j, 0) for j, c in r.items()) == 0


def test_solve_affine():
    rows = [{0: fmpq(1), 1: fmpq(1)}, {0: fmpq(1), 1: fmpq(-1)}]
    sol, kernel = linalg.solve_affine(rows, [fmpq(3), fmpq(1)], 2, QQ)
    assert sol == {0: 2, 1: 1} and kernel == []
    sol, _ = linalg.solve_affine([{0: fmpq(1)}, {0: fmpq(1)}], [fmpq(1), fmpq(2)], 1, QQ)
    assert sol is None


def test_generic_path_over_extension():
    z = K.gen()
    rows = [{0: K.one, 1: z}, {0: z, 1: K(2)}]  # second row is z times the first
    assert linalg.rank(rows, 2, K) == 1
    (v,) = linalg.nullspace(rows, 2, K)
    assert v.get(0, K.zero) + z * v.get(1, K.zero) == K.zero


def test_generic_scalars_are_primes():
    assert linalg.generic_scalars(5) == [2, 3, 5, 7, 11]
    assert linalg.generic_scalars(2, 3) == [7, 11]
