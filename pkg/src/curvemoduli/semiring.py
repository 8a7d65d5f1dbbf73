"""Value semirings of plane curve germs.

For a curve with branches C_1, ..., C_r the value of a function g is the tuple
of t-orders of g along each branch.  The set of values is closed under
componentwise min (oplus) and componentwise sum (odot, with k + inf = inf).

Everything here works in the window prod([0, sigma_l] U {inf}) where sigma is
the conductor.  Membership of a value only depends on its clipped form
min(value_l, sigma_l), so the semiring is stored as a finite set of clipped
tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coeffcore import INF, BivariatePoly, InputError, TruncatedSeries, scalar_key, upoly_order
from .curvegerm import Branch, CurveGerm
from . import linalg

DEFAULT_TRUNCATION = 32
MAX_TRUNCATION = 512

Value = tuple  # entries are ints or INF


def oplus(a: Value, b: Value) -> Value:
    return tuple(min(x, y) for x, y in zip(a, b))


def odot(a: Value, b: Value) -> Value:
    return tuple(x + y for x, y in zip(a, b))


def format_value(v: Value) -> list:
    return ["inf" if x == INF else int(x) for x in v]


def parse_value(v) -> Value:
    return tuple(INF if x in ("inf", INF) else int(x) for x in v)


# ---------------------------------------------------------------------------
# one branch


@dataclass(frozen=True)
class BranchSemigroup:
    conductor: int
    generators: tuple[int, ...]
    truncation: int

    def __contains__(self, n: int) -> bool:
        if n == INF or n >= self.conductor:
            return True
        return _in_numerical_semigroup(n, self.generators)


def _in_numerical_semigroup(n: int, gens: tuple[int, ...]) -> bool:
    reach = [False] * (n + 1)
    reach[0] = True
    for k in range(1, n + 1):
        reach[k] = any(g <= k and reach[k - g] for g in gens)
    return reach[n]


def _monomial_order(i: int, j: int, ox, oy):
    return (i * ox if i else 0) + (j * oy if j else 0)


def _surviving_monomials(orders: list[tuple], precs: list[int]) -> list[tuple[int, int]]:
    """Exponents (i, j) with x^i y^j of order below prec on at least one branch."""

    def alive(i, j):
        return any(_monomial_order(i, j, ox, oy) < p for (ox, oy), p in zip(orders, precs))

    out = []
    i = 0
    while alive(i, 0):
        j = 0
        while alive(i, j):
            out.append((i, j))
            j += 1
        i += 1
    return out


def _branch_orders(branch: Branch, N: int) -> set[int]:
    """t-orders below N of functions on the branch, by echelon form.

    With ord x(t) = m the branch ring is spanned over K[[x]] by 1, y, ..., y^(m-1),
    so the rows x^i y^j with j < m suffice (swap the roles if ord y is smaller).
    """
    field = branch.field
    xs, ys = branch.series(N)
    ox, oy = upoly_order(list(branch.x)), upoly_order(list(branch.y))
    if oy < ox:
        xs, ys, ox, oy = ys, xs, oy, ox
    m = int(ox)
    rows = []
    ypow = TruncatedSeries.monomial(0, N, field)
    for j in range(m):
        term = ypow
        while not term.is_zero():
            rows.append({k: c for k, c in enumerate(term.coeffs) if c != 0})
            term = term * xs
        ypow = ypow * ys
    _, pivots = linalg.rref(rows, N, field)
    return set(pivots)


def branch_semigroup(branch: Branch, truncation: int = DEFAULT_TRUNCATION) -> BranchSemigroup:
    """Semigroup of the branch, read off below a truncation order.

    The conductor is accepted once a run of consecutive values at least as long
    as the multiplicity is seen below N, and the same answer comes out at 2N.
    """
    m = branch.multiplicity
    N = truncation
    previous = None
    while N <= MAX_TRUNCATION:
        orders = _branch_orders(branch, N)
        c = N
        while c - 1 >= 0 and (c - 1) in orders:
            c -= 1
        settled = N - c >= m
        if settled:
            gens = _minimal_generators(sorted(o for o in orders if 0 < o < c + m))
            result = (c, gens)
            if previous == result:
                return BranchSemigroup(c, gens, N // 2)
            previous = result
        N *= 2
    raise InputError("branch semigroup did not stabilise; is the parametrization primitive?")


def _minimal_generators(values: list[int]) -> tuple[int, ...]:
    gens: list[int] = []
    for v in values:
        if not gens or not _in_numerical_semigroup(v, tuple(gens)):
            gens.append(v)
    return tuple(gens)


def compute_conductor(curve: CurveGerm, truncation: int = DEFAULT_TRUNCATION) -> tuple[int, ...]:
    """sigma_l = c(C_l) + sum over j != l of (C_l . C_j)."""
    curve.require_branches()
    r = curve.branch_count
    sig = []
    for l in range(r):
        c = branch_semigroup(curve.branches[l], truncation).conductor
        sig.append(int(c + sum(curve.intersection_multiplicity(l, j) for j in range(r) if j != l)))
    return tuple(sig)


# ---------------------------------------------------------------------------
# elements of the local ring restricted to the branches


@dataclass
class Witness:
    """A function on the curve: an (x, y)-expression and its branch images."""

    expr: BivariatePoly
    images: tuple[TruncatedSeries, ...]

    def value(self) -> Value:
        return tuple(s.valuation() for s in self.images)

    def key(self) -> tuple:
        return tuple(scalar_key(c) for s in self.images for c in s.coeffs)

    def leading(self, l: int):
        s = self.images[l]
        return s.coeffs[s.valuation()]

    def __add__(self, other: "Witness") -> "Witness":
        return Witness(self.expr + other.expr, tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other: "Witness") -> "Witness":
        return Witness(self.expr - other.expr, tuple(a - b for a, b in zip(self.images, other.images)))

    def scale(self, c) -> "Witness":
        return Witness(self.expr.scale(c), tuple(s.scale(c) for s in self.images))

    def __mul__(self, other: "Witness") -> "Witness":
        return Witness(self.expr * other.expr, tuple(a * b for a, b in zip(self.images, other.images)))

    def linear_part(self) -> tuple:
        return (self.expr.coeff(1, 0), self.expr.coeff(0, 1))


class AmbientAlgebra:
    """prod_l K[t]/(t^prec_l) together with the images of x and y."""

    def __init__(self, curve: CurveGerm, precisions: tuple[int, ...]):
        curve.require_branches()
        self.curve = curve
        self.field = curve.field
        self.prec = tuple(int(p) for p in precisions)
        self.x_images = tuple(b.series(p)[0] for b, p in zip(curve.branches, self.prec))
        self.y_images = tuple(b.series(p)[1] for b, p in zip(curve.branches, self.prec))
        self.orders = [(upoly_order(list(b.x)), upoly_order(list(b.y))) for b in curve.branches]

    def image(self, poly: BivariatePoly) -> tuple[TruncatedSeries, ...]:
        return tuple(poly.compose_series(xs, ys) for xs, ys in zip(self.x_images, self.y_images))

    def witness(self, poly: BivariatePoly) -> Witness:
        return Witness(self.trim(poly), self.image(poly))

    def monomial_negligible(self, i: int, j: int) -> bool:
        """True when x^i y^j vanishes in every factor of the algebra."""
        return all(_monomial_order(i, j, ox, oy) >= p for (ox, oy), p in zip(self.orders, self.prec))

    def trim(self, poly: BivariatePoly) -> BivariatePoly:
        return BivariatePoly({k: v for k, v in poly.terms.items() if not self.monomial_negligible(*k)}, poly.field)

    def monomials(self) -> list[tuple[int, int]]:
        """Exponents of all monomials that survive in the algebra."""
        return _surviving_monomials(self.orders, list(self.prec))

    def flatten(self, images) -> dict:
        """Sparse coordinate vector of an element (position (l, e) -> index)."""
        out = {}
        offset = 0
        for s, p in zip(images, self.prec):
            for e in range(p):
                c = s.coeffs[e]
                if c != 0:
                    out[offset + e] = c
            offset += p
        return out

    def position(self, l: int, e: int) -> int:
        return sum(self.prec[:l]) + e

    @property
    def dimension(self) -> int:
        return sum(self.prec)


# ---------------------------------------------------------------------------
# the semiring


class ValueSemiring:
    """Clipped value set of a curve germ inside the conductor window."""

    def __init__(self, sigma: tuple[int, ...], members, witnesses: dict | None = None, algebra: AmbientAlgebra | None = None):
        self.sigma = tuple(sigma)
        self.members = frozenset(members) | {self.sigma}
        self.witnesses = witnesses or {}
        self.algebra = algebra

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def clip(self, alpha: Value) -> tuple[int, ...]:
        return tuple(int(min(a, s)) for a, s in zip(alpha, self.sigma))

    def __contains__(self, alpha: Value) -> bool:
        if len(alpha) != self.rank:
            raise ValueError("value tuple has the wrong length")
        return self.clip(alpha) in self.members

    def witness(self, alpha: Value) -> Witness | None:
        """A ring element of value alpha (coordinates at infinity vanish modulo t^sigma)."""
        if alpha not in self:
            return None
        if all(a == INF or a < s for a, s in zip(alpha, self.sigma)):
            w = self.witnesses.get(self.clip(alpha))
            if w is not None:
                return w
        if self.algebra is None:
            return None
        return solve_witness(self.algebra.curve, alpha, self.sigma)

    def coordinate_range(self, l: int) -> list:
        return list(range(self.sigma[l] + 1)) + [INF]

    def window(self):
        """All members of the window prod([0, sigma_l] U {inf})."""
        for beta in sorted(self.members):
            choices = [[b] if b < s else [s, INF] for b, s in zip(beta, self.sigma)]
            yield from itertools.product(*choices)

    def _smallest_positive(self) -> int:
        return min([m[0] for m in self.members if m[0] > 0] + [max(self.sigma[0], 1)])

    def _branch_values(self) -> list[int]:
        """Positive values of a single branch below conductor + multiplicity."""
        top = self.sigma[0] + self._smallest_positive() + 1
        return [v for v in range(1, top) if (v,) in self]

    def absolute_points(self) -> list[Value]:
        if self.rank == 1:
            # every member is absolute; list the range that holds the generators
            return [(v,) for v in self._branch_values()]
        zero = (0,) * self.rank
        infv = (INF,) * self.rank
        out = []
        for a in self.window():
            if a in (zero, infv) or not self.is_absolute(a):
                continue
            # above the conductor only the points needed as generators are reported
            if self.clip(a) == self.sigma and not self.is_irreducible(a):
                continue
            out.append(a)
        return sorted(out)

    def minimal_generators(self) -> list[Value]:
        if self.rank == 1:
            return [(v,) for v in _minimal_generators(self._branch_values())]
        return [a for a in self.absolute_points() if self.is_irreducible(a)]

    def _fiber_nonempty(self, fixed: dict, raised: dict) -> bool:
        """Is there a member with a_i = fixed[i] and a_i > raised[i]?"""
        ranges = []
        for i in range(self.rank):
            s = self.sigma[i]
            if i in fixed:
                ranges.append([min(fixed[i], s)])
            else:
                lo = raised[i]
                ranges.append(list(range(min(lo + 1, s), s + 1)) if lo < s else [s])
        return any(c in self.members for c in itertools.product(*ranges))

    def is_absolute(self, alpha: Value) -> bool:
        support = [i for i, a in enumerate(alpha) if a != INF]
        for size in range(1, len(support)):
            for J in itertools.combinations(support, size):
                raised = {i: alpha[i] for i in support if i not in J}
                fixed = {i: alpha[i] for i in range(self.rank) if i not in raised}
                if self._fiber_nonempty(fixed, raised):
                    return False
        return True

    def is_irreducible(self, alpha: Value) -> bool:
        """alpha is not a sum of two members both different from alpha."""
        if alpha not in self:
            return False
        for a in self.window():
            ok = True
            b_choices = []
            for ai, al, s in zip(a, alpha, self.sigma):
                if al != INF:
                    if ai == INF or ai > al:
                        ok = False
                        break
                    b_choices.append([al - ai])
                elif ai != INF:
                    b_choices.append([INF])
                else:
                    b_choices.append(list(range(s + 1)) + [INF])
            if not ok or a == alpha:
                continue
            for b in itertools.product(*b_choices):
                if b != alpha and b in self:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "conductor": list(self.sigma),
            "absolute_points": [format_value(a) for a in self.absolute_points()],
            "minimal_generators": [format_value(a) for a in self.minimal_generators()],
            "members": [format_value(m) for m in sorted(self.members, key=_value_key)],
        }


def _value_key(v: Value) -> tuple:
    return tuple((1, 0) if e == INF else (0, e) for e in v)


def semiring_equal(a: "ValueSemiring", b: "ValueSemiring") -> dict:
    """Compare two semirings; a conductor mismatch is reported on its own."""
    if a.sigma != b.sigma:
        return {"equal": False, "reason": "conductor mismatch", "conductors": [list(a.sigma), list(b.sigma)]}
    only_a = sorted(a.members - b.members, key=_value_key)
    only_b = sorted(b.members - a.members, key=_value_key)
    if only_a or only_b:
        return {
            "equal": False,
            "reason": "members differ",
            "only_first": [format_value(v) for v in only_a],
            "only_second": [format_value(v) for v in only_b],
        }
    return {"equal": True, "reason": None}


def _eliminate(vectors: list, pos: int) -> list:
    """Subspace of span(vectors) whose image coordinate ``pos`` vanishes.

    Each vector is a pair (image coordinates, monomial coefficients) so the
    expression of every element is carried along.
    """
    pivot = next((v for v in vectors if v[0].get(pos, 0) != 0), None)
    if pivot is None:
        return vectors
    pimg, pexp = pivot
    out = []
    for v in vectors:
        if v is pivot:
            continue
        c = v[0].get(pos, 0)
        if c == 0:
            out.append(v)
            continue
        lam = c / pimg[pos]
        img = _axpy(v[0], pimg, -lam)
        if img:
            out.append((img, _axpy(v[1], pexp, -lam)))
    return out


def _axpy(a: dict, b: dict, lam) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + lam * v
        if nv == 0:
            out.pop(k, None)
        else:
            out[k] = nv
    return out


def _nonzero_on(vectors: list, pos: int) -> bool:
    return any(v[0].get(pos, 0) != 0 for v in vectors)


def compute_semiring(curve: CurveGerm, truncation: int = DEFAULT_TRUNCATION, sigma=None) -> ValueSemiring:
    """All clipped values of the ring image inside the conductor window.

    Branch by branch, the orders alpha_l are fixed in turn while the subspace
    of ring images vanishing to order alpha_l is kept in echelon form.  A
    tuple is a value exactly when every leading coefficient it asks for is a
    nonzero functional on the final subspace; a prefix failing that test is
    pruned, since the subspace only shrinks further down.
    """
    sigma = tuple(sigma) if sigma is not None else compute_conductor(curve, truncation)
    alg = AmbientAlgebra(curve, sigma)
    field = curve.field
    monos = alg.monomials()
    start = []
    for k, (i, j) in enumerate(monos):
        img = alg.flatten(alg.image(BivariatePoly.monomial(i, j, field)))
        if img:
            start.append((img, {k: field.one}))
    r = len(sigma)
    witnesses: dict[tuple, Witness] = {}

    def record(alpha, vectors, checks):
        for attempt in range(len(vectors) + 1):
            scalars = linalg.generic_scalars(len(vectors), attempt)
            img: dict = {}
            coeffs: dict = {}
            for (vi, ve), c in zip(vectors, scalars):
                img = _axpy(img, vi, field(c))
                coeffs = _axpy(coeffs, ve, field(c))
            if all(img.get(p, 0) != 0 for p in checks):
                expr = BivariatePoly({monos[k]: v for k, v in coeffs.items()}, field)
                witnesses[alpha] = Witness(alg.trim(expr), alg.image(expr))
                return
        raise ArithmeticError(f"no generic element of value {alpha}")

    def search(l, vectors, prefix, checks):
        if l == r:
            record(tuple(prefix), vectors, checks)
            return
        current = vectors
        for a in range(sigma[l] + 1):
            if not all(_nonzero_on(current, p) for p in checks):
                return
            if a == sigma[l]:
                search(l + 1, current, prefix + [a], checks)
                return
            pos = alg.position(l, a)
            if _nonzero_on(current, pos):
                search(l + 1, current, prefix + [a], checks + [pos])
                current = _eliminate(current, pos)

    search(0, start, [], [])
    witnesses.pop(sigma, None)
    return ValueSemiring(sigma, witnesses.keys(), witnesses, alg)


# ---------------------------------------------------------------------------
# linear algebra on the ring image


def solve_witness(curve: CurveGerm, alpha: Value, sigma) -> Witness | None:
    """Ring element of value exactly alpha, found by linear algebra.

    Finite coordinates are resolved at precision alpha_l + 1, coordinates at
    infinity are required to vanish modulo t^sigma_l.
    """
    field = curve.field
    precs = tuple(int(a) + 1 if a != INF else max(int(s), 1) for a, s in zip(alpha, sigma))
    alg = AmbientAlgebra(curve, precs)
    monos = alg.monomials()
    images = [alg.image(BivariatePoly.monomial(i, j, field)) for i, j in monos]
    cols = [{} for _ in range(alg.dimension)]
    for k, img in enumerate(images):
        for pos, c in alg.flatten(img).items():
            cols[pos][k] = c
    finite = [l for l, a in enumerate(alpha) if a != INF]
    if not finite:
        return None
    rows, rhs = [], []
    for l, a in enumerate(alpha):
        top = alg.prec[l] if a == INF else int(a)
        for e in range(top):
            rows.append(cols[alg.position(l, e)])
            rhs.append(field.zero)
    lead = alg.position(finite[0], int(alpha[finite[0]]))
    rows.append(cols[lead])
    rhs.append(field.one)
    part, kernel = linalg.solve_affine(rows, rhs, len(monos), field)
    if part is None:
        return None
    checks = [alg.position(l, int(alpha[l])) for l in finite[1:]]
    for attempt in range(len(kernel) + 1):
        scalars = linalg.generic_scalars(len(kernel), attempt) if attempt else [0] * len(kernel)
        vec = dict(part)
        for kv, c in zip(kernel, scalars):
            for key, v in kv.items():
                vec[key] = vec.get(key, field.zero) + c * v
        if all(sum((vec.get(k, 0) * c for k, c in cols[pos].items()), field.zero) != 0 for pos in checks):
            expr = BivariatePoly({monos[k]: v for k, v in vec.items() if v != 0}, field)
            return Witness(expr, alg.image(expr))
    return None


# ---------------------------------------------------------------------------
# independent check by linear algebra


def ring_image_rows(alg: AmbientAlgebra) -> list[dict]:
    """Coordinate vectors of all surviving monomials: they span the image of the ring."""
    return [alg.flatten(alg.image(BivariatePoly.monomial(i, j, alg.field))) for i, j in alg.monomials()]


def semiring_by_linear_algebra(curve: CurveGerm, sigma) -> frozenset:
    """Clipped value set computed independently of the closure.

    alpha is a value iff, on the subspace of ring elements with order at least
    alpha_l on every branch, each leading coefficient functional at alpha_l
    (alpha_l < sigma_l) is not identically zero.
    """
    sigma = tuple(sigma)
    alg = AmbientAlgebra(curve, sigma)
    field = curve.field
    red, _ = linalg.rref(ring_image_rows(alg), alg.dimension, field)
    basis = red  # rows spanning the image
    members = set()
    for alpha in itertools.product(*[range(s + 1) for s in sigma]):
        # constraints on combination coefficients c: sum c_k basis_k at (l, e) = 0 for e < alpha_l
        cons = []
        for l, a in enumerate(alpha):
            for e in range(a):
                pos = alg.position(l, e)
                cons.append({k: row[pos] for k, row in enumerate(basis) if pos in row})
        kern = linalg.nullspace(cons, len(basis), field)
        ok = True
        for l, a in enumerate(alpha):
            if a >= sigma[l]:
                continue
            pos = alg.position(l, a)
            if not any(sum((row.get(pos, 0) * vec.get(k, 0) for k, row in enumerate(basis)), field.zero) != 0 for vec in kern):
                ok = False
                break
        if ok:
            members.add(alpha)
    return frozenset(members)
