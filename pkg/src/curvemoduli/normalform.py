"""Normal forms for a pair of generators of the ring of a marked curve.

Two generators G1, G2 with independent linear parts are pushed to a unique
shape by Gamma-reductions: every coefficient sitting at an exponent that the
semiring can reach is removed.  The coefficients that survive give the point
of coefficient space attached to the marked curve, and jets of
reparametrizations of the branches act on these points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .coeffcore import INF, FieldSpec, TruncatedSeries
from .curvegerm import CurveGerm
from .semiring import AmbientAlgebra, ValueSemiring, Value, compute_semiring, format_value, semiring_equal


class NormalizationError(RuntimeError):
    """No combination of generator products realizes a required value."""


@dataclass(frozen=True)
class ReductionStep:
    value: Value
    coord: int

    def to_json(self) -> dict:
        return {"value": format_value(self.value), "coord": self.coord}


# ---------------------------------------------------------------------------
# Gamma-reduction calculus

# An exponent family is a tuple of frozensets of finite exponents, one per
# branch; infinity is implicitly a member of every set.


def init_index(n: Value, g: Value) -> int | None:
    """First coordinate where n is finite and differs from g."""
    for k, (a, b) in enumerate(zip(n, g)):
        if a != INF and a != b:
            return k
    return None


def family_members(family, gamma: ValueSemiring) -> list[Value]:
    """Gamma meets prod(P_l + {inf}) in these points, infinity tuple excluded."""
    choices = [sorted(P) + [INF] for P in family]
    out = []
    for n in itertools.product(*choices):
        if all(a == INF for a in n):
            continue
        if n in gamma:
            out.append(n)
    return out


def is_reduced(family, gamma: ValueSemiring) -> bool:
    return not family_members(family, gamma)


def reduce_family(family, gamma: ValueSemiring, g: Value | None = None):
    """Greedy sequence of Gamma-reductions until the family is reduced.

    Each step picks the member with the smallest Init index, then the smallest
    entry at that index, then the lexicographically smallest tuple; the
    exponent removed is the one at the Init index.  Returns (steps, family).
    """
    if g is None:
        g = (INF,) * len(family)
    family = tuple(frozenset(P) for P in family)
    steps: list[ReductionStep] = []
    while True:
        members = family_members(family, gamma)
        keyed = []
        for n in members:
            k = init_index(n, g)
            if k is None:
                # impossible when g is an absolute point; guard anyway
                k = next(i for i, a in enumerate(n) if a != INF)
            keyed.append(((k, n[k], n), k, n))
        if not keyed:
            return steps, family
        _, k, n = min(keyed)
        steps.append(ReductionStep(n, k))
        family = tuple(P - {n[k]} if l == k else P for l, P in enumerate(family))


def initial_family(g: Value, sigma) -> tuple[int, tuple]:
    """Leading branch and the starting exponent family of a generator."""
    lead = next(l for l, a in enumerate(g) if a != INF)
    family = []
    for l, (a, s) in enumerate(zip(g, sigma)):
        if a == INF:
            family.append(frozenset())
            continue
        lo = a + 1 if l == lead else a
        family.append(frozenset(range(int(lo), int(max(s - 1, a)) + 1)))
    return lead, tuple(family)


def generator_precision(g: Value, sigma) -> tuple[int, ...]:
    return tuple(int(s) if a == INF else int(max(s, a + 1)) for a, s in zip(g, sigma))


# ---------------------------------------------------------------------------
# elements of prod K[t]/t^q as flat coordinate dictionaries


class _Layout:
    def __init__(self, prec):
        self.prec = tuple(prec)
        self.offsets = [sum(self.prec[:l]) for l in range(len(self.prec))]

    def pos(self, l: int, e: int) -> int:
        return self.offsets[l] + e

    def flatten(self, series) -> dict:
        out = {}
        for l, s in enumerate(series):
            for e in range(self.prec[l]):
                c = s.coeffs[e] if e < s.prec else 0
                if c != 0:
                    out[self.offsets[l] + e] = c
        return out

    def unflatten(self, vec: dict, field: FieldSpec) -> tuple[list, ...]:
        out = []
        for l, p in enumerate(self.prec):
            out.append([vec.get(self.offsets[l] + e, field.zero) for e in range(p)])
        return tuple(out)

    @property
    def size(self) -> int:
        return sum(self.prec)


def _truncate_all(series, prec) -> tuple[TruncatedSeries, ...]:
    return tuple(TruncatedSeries(s.coeffs, p, s.field) for s, p in zip(series, prec))


def _product_columns(pair, prec, field: FieldSpec) -> list[dict]:
    """Flat images of the products G1^a G2^b that do not vanish modulo t^prec."""
    G1 = _truncate_all(pair[0], prec)
    G2 = _truncate_all(pair[1], prec)
    layout = _Layout(prec)
    one = tuple(TruncatedSeries.monomial(0, p, field) for p in prec)
    cols = []
    left = one
    while any(not s.is_zero() for s in left):
        cur = left
        while any(not s.is_zero() for s in cur):
            cols.append(layout.flatten(cur))
            cur = tuple(a * b for a, b in zip(cur, G2))
        left = tuple(a * b for a, b in zip(left, G1))
    return cols


def _position_rows(cols: list[dict], size: int) -> list[dict]:
    rows = [dict() for _ in range(size)]
    for k, col in enumerate(cols):
        for pos, c in col.items():
            rows[pos][k] = c
    return rows


def _evaluate(rows_at, vec: dict, field: FieldSpec, pos: int):
    return sum((vec.get(k, 0) * c for k, c in rows_at[pos].items()), field.zero)


def _find_w(rows_at, layout: _Layout, n: Value, k: int, forbidden, field: FieldSpec) -> dict | None:
    """Combination of products with value n, coefficient 1 at (k, n_k), and
    zero coefficients at the forbidden positions."""
    ncols = max((max(r) for r in rows_at if r), default=-1) + 1
    cons, rhs = [], []
    for l, a in enumerate(n):
        top = layout.prec[l] if a == INF else int(a)
        for e in range(min(top, layout.prec[l])):
            cons.append(rows_at[layout.pos(l, e)])
            rhs.append(field.zero)
    cons.append(rows_at[layout.pos(k, int(n[k]))])
    rhs.append(field.one)
    for l, e in forbidden:
        if n[l] != INF and e > n[l] and e < layout.prec[l]:
            cons.append(rows_at[layout.pos(l, e)])
            rhs.append(field.zero)
    part, kernel = linalg.solve_affine(cons, rhs, ncols, field)
    if part is None:
        return None
    checks = [layout.pos(l, int(a)) for l, a in enumerate(n) if a != INF and l != k and a < layout.prec[l]]
    for attempt in range(len(kernel) + 1):
        scalars = linalg.generic_scalars(len(kernel), attempt) if attempt else [0] * len(kernel)
        vec = linalg.combine([part] + kernel, [field.one] + scalars, field)
        if all(_evaluate(rows_at, vec, field, p) != 0 for p in checks):
            return vec
    return part


def _apply(rows_at, vec: dict, size: int, field: FieldSpec) -> dict:
    out = {}
    for pos in range(size):
        v = _evaluate(rows_at, vec, field, pos)
        if v != 0:
            out[pos] = v
    return out


# ---------------------------------------------------------------------------
# normalized generators


@dataclass
class NormalizedGenerators:
    """A normalized generator pair with everything needed to act on it."""

    field: FieldSpec
    sigma: tuple
    values: tuple  # (g1, g2)
    leads: tuple  # leading branch of each generator
    precisions: tuple  # per generator, per branch
    families: tuple  # final exponent family of each generator
    logs: tuple  # reduction steps of each generator
    series: tuple  # per generator, per branch coefficient lists
    note: str | None = None
    gamma: ValueSemiring | None = dc_field(default=None, repr=False, compare=False)

    def positions(self) -> list[tuple[int, int, int]]:
        """Free positions (generator, branch, exponent), branch-major then exponent then generator."""
        out = []
        for i, fam in enumerate(self.families):
            for l, P in enumerate(fam):
                for e in P:
                    out.append((i, l, e))
        return sorted(out, key=lambda p: (p[1], p[2], p[0]))

    def coefficients(self) -> list:
        return [self.series[i][l][e] for i, l, e in self.positions()]

    def with_coefficients(self, coeffs) -> "NormalizedGenerators":
        """The generator pair of shape self carrying the given free coefficients."""
        coeffs = list(coeffs)
        pos = self.positions()
        if len(coeffs) != len(pos):
            raise ValueError(f"expected {len(pos)} coefficients, got {len(coeffs)}")
        series = []
        for i in range(len(self.values)):
            branches = []
            for l, p in enumerate(self.precisions[i]):
                row = [self.field.zero] * p
                if l == self.leads[i]:
                    row[int(self.values[i][l])] = self.field.one
                branches.append(row)
            series.append(branches)
        for (i, l, e), c in zip(pos, coeffs):
            series[i][l][e] = self.field(c)
        return NormalizedGenerators(self.field, self.sigma, self.values, self.leads, self.precisions,
                                    self.families, self.logs, tuple(tuple(b) for b in series), self.note, self.gamma)

    def generator_series(self, i: int) -> tuple[TruncatedSeries, ...]:
        return tuple(TruncatedSeries(c, p, self.field) for c, p in zip(self.series[i], self.precisions[i]))

    def to_json(self) -> dict:
        f = self.field
        doc = {
            "conductor": format_value(self.sigma),
            "generators": [format_value(v) for v in self.values],
            "free_positions": [{"generator": i + 1, "branch": l + 1, "exponent": e} for i, l, e in self.positions()],
            "coefficients": [f.dump(c) for c in self.coefficients()],
            "normalized": [
                [[[e, f.dump(c)] for e, c in enumerate(branch) if c != 0] for branch in gen]
                for gen in self.series
            ],
            "reductions": [[s.to_json() for s in log] for log in self.logs],
        }
        if self.note:
            doc["note"] = self.note
        return doc


def _normalize_one(pair, i: int, g: Value, lead: int, prec, log, family0, field: FieldSpec):
    """Run the fixed reduction log on generator i of the pair."""
    layout = _Layout(prec)
    cols = _product_columns(pair, prec, field)
    rows_at = _position_rows(cols, layout.size)
    H = layout.flatten(_truncate_all(pair[i], prec))
    lead_pos = layout.pos(lead, int(g[lead]))
    c0 = H.get(lead_pos, 0)
    if c0 == 0:
        raise NormalizationError("generator does not have the expected leading term")
    inv = field.one / c0
    H = {p: v * inv for p, v in H.items()}
    killed: list[tuple[int, int]] = []
    for step in log:
        n, k = step.value, step.coord
        target = layout.pos(k, int(n[k]))
        a = H.get(target, 0)
        if a != 0:
            W = _find_w(rows_at, layout, n, k, killed, field)
            if W is None:
                W = _find_w(rows_at, layout, n, k, [], field)
            if W is None:
                raise NormalizationError(f"no combination of products has value {format_value(n)}")
            for pos, v in _apply(rows_at, W, layout.size, field).items():
                nv = H.get(pos, field.zero) - a * v
                if nv == 0:
                    H.pop(pos, None)
                else:
                    H[pos] = nv
        killed.append((k, int(n[k])))
    return layout.unflatten(H, field)


def normalize_pair(pair, values, gamma: ValueSemiring, logs=None) -> NormalizedGenerators:
    """Normalize two generators (tuples of branch series) with values g1, g2.

    With ``logs`` given, the reduction sequences are reused instead of being
    recomputed; this is what the group action needs.
    """
    field = pair[0][0].field
    sigma = gamma.sigma
    leads, precs, families, out_logs, series = [], [], [], [], []
    for i, g in enumerate(values):
        lead, fam0 = initial_family(g, sigma)
        prec = generator_precision(g, sigma)
        if logs is None:
            log, fam = reduce_family(fam0, gamma, g)
        else:
            log = list(logs[i])
            fam = list(fam0)
            for s in log:
                fam[s.coord] = fam[s.coord] - {s.value[s.coord]}
            fam = tuple(fam)
        series.append(_normalize_one(pair, i, g, lead, prec, log, fam0, field))
        leads.append(lead)
        precs.append(prec)
        families.append(fam)
        out_logs.append(tuple(log))
    result = NormalizedGenerators(field, tuple(sigma), tuple(values), tuple(leads), tuple(precs),
                                  tuple(families), tuple(out_logs), tuple(series), gamma=gamma)
    _check_shape(result)
    return result


def _check_shape(ng: NormalizedGenerators) -> None:
    for i, gen in enumerate(ng.series):
        for l, row in enumerate(gen):
            for e, c in enumerate(row):
                if c == 0:
                    continue
                if l == ng.leads[i] and e == ng.values[i][l]:
                    continue
                if e not in ng.families[i][l]:
                    raise NormalizationError(
                        f"generator {i + 1} keeps a coefficient at branch {l + 1}, exponent {e} outside its free family")


def direct_normal_form(pair, values, gamma: ValueSemiring, families) -> tuple:
    """The normal form as the unique solution of one linear system.

    Used as an independent check of the procedural normalization: the ring
    element with leading coefficient 1 and support in the final families.
    """
    field = pair[0][0].field
    out = []
    for i, g in enumerate(values):
        lead, _ = initial_family(g, gamma.sigma)
        prec = generator_precision(g, gamma.sigma)
        layout = _Layout(prec)
        cols = _product_columns(pair, prec, field)
        rows_at = _position_rows(cols, layout.size)
        cons, rhs = [], []
        for l, p in enumerate(prec):
            for e in range(p):
                pos = layout.pos(l, e)
                if l == lead and e == g[l]:
                    cons.append(rows_at[pos])
                    rhs.append(field.one)
                elif e not in families[i][l]:
                    cons.append(rows_at[pos])
                    rhs.append(field.zero)
        part, kernel = linalg.solve_affine(cons, rhs, len(cols), field)
        if part is None:
            raise NormalizationError("the normal form system has no solution")
        sol = _apply(rows_at, part, layout.size, field)
        for kv in kernel:
            if _apply(rows_at, kv, layout.size, field):
                raise NormalizationError("the normal form is not unique")
        out.append(layout.unflatten(sol, field))
    return tuple(out)


# ---------------------------------------------------------------------------
# from a curve to its point in coefficient space


def _independent(a: tuple, b: tuple) -> bool:
    return a[0] * b[1] - a[1] * b[0] != 0


def generator_pair(gamma: ValueSemiring):
    """First lexicographic pair of minimal generators whose witnesses have
    independent linear parts: ((g1, g2), (W1, W2))."""
    gens = gamma.minimal_generators()
    wits = {g: gamma.witness(g) for g in gens}
    for a, b in itertools.combinations(gens, 2):
        wa, wb = wits[a], wits[b]
        if wa is None or wb is None:
            continue
        if _independent(wa.linear_part(), wb.linear_part()):
            return (a, b), (wa, wb)
    raise NormalizationError("no two minimal generators with independent linear parts")


def _trivial(curve: CurveGerm, gamma: ValueSemiring, values, note: str) -> NormalizedGenerators:
    r = curve.branch_count
    empty = tuple(frozenset() for _ in range(r))
    return NormalizedGenerators(curve.field, gamma.sigma, tuple(values), tuple(), tuple(), (empty,) * len(values),
                                ((),) * len(values), tuple(), note, gamma)


def moduli_point(curve: CurveGerm, truncation: int = 32, gamma: ValueSemiring | None = None) -> NormalizedGenerators:
    """Normalized generators of the marked curve; .coefficients() is the point."""
    curve.require_branches()
    gamma = gamma or compute_semiring(curve, truncation)
    if curve.branch_count == 1 and curve.branches[0].multiplicity == 1:
        return _trivial(curve, gamma, [(1,)], "smooth curve: no moduli")
    if curve.is_union_of_two_smooth():
        n = gamma.sigma[0]
        return _trivial(curve, gamma, [(INF, n), (n, INF)],
                        f"two smooth branches with contact {n}: equivalent to y(y+x^{n}), no moduli")
    values, wits = generator_pair(gamma)
    prec = tuple(max(p, q) for p, q in zip(generator_precision(values[0], gamma.sigma),
                                           generator_precision(values[1], gamma.sigma)))
    alg = AmbientAlgebra(curve, prec)
    pair = (alg.image(wits[0].expr), alg.image(wits[1].expr))
    return normalize_pair(pair, values, gamma)


# ---------------------------------------------------------------------------
# the action of jets of reparametrizations


def _jet_series(phi, prec: int, field: FieldSpec) -> TruncatedSeries:
    coeffs = [field(c) for c in phi]
    s = TruncatedSeries(coeffs, prec, field)
    if s.coeffs and s.coeffs[0] != 0:
        raise ValueError("a jet must vanish at t = 0")
    if prec > 1 and s.coeffs[1] == 0:
        raise ValueError("a jet must have a nonzero linear coefficient")
    return s


def act(phi, coeffs, context: NormalizedGenerators) -> list:
    """phi . A: compose the generators with the jets and renormalize along the fixed log.

    ``phi`` holds one coefficient list per branch (constant term first).
    """
    if not context.values or not context.series and not context.positions():
        return list(coeffs)
    ng = context.with_coefficients(coeffs)
    field = context.field
    r = len(context.sigma)
    if len(phi) != r:
        raise ValueError(f"expected {r} jets, got {len(phi)}")
    prec = tuple(max(p) for p in zip(*context.precisions))
    jets = [_jet_series(phi[l], prec[l], field) for l in range(r)]
    pair = []
    for i in range(2):
        gen = []
        for l in range(r):
            s = TruncatedSeries(ng.series[i][l], prec[l], field)
            gen.append(s.compose(jets[l]))
        pair.append(tuple(gen))
    out = normalize_pair(tuple(pair), context.values, context.gamma, logs=context.logs)
    return out.coefficients()


def compose_jets(psi, phi, field: FieldSpec, sigma) -> list:
    """Per branch psi_l(phi_l(t)) modulo t^sigma_l."""
    out = []
    for l, s in enumerate(sigma):
        p = max(int(s), 2)
        a = _jet_series(psi[l], p, field)
        b = _jet_series(phi[l], p, field)
        out.append(list(a.compose(b).coeffs))
    return out


def identity_jets(sigma, field: FieldSpec) -> list:
    return [[field.zero, field.one] for _ in sigma]


# ---------------------------------------------------------------------------
# orbit representatives


def _jet(r: int, l: int, k: int, s, field: FieldSpec) -> list:
    phi = [[field.zero, field.one] for _ in range(r)]
    if k == 1:
        phi[l] = [field.zero, field(s)]
    else:
        phi[l] = [field.zero, field.one] + [field.zero] * (k - 2) + [field(s)]
    return phi


def _parameters(context: NormalizedGenerators):
    for l, s in enumerate(context.sigma):
        for k in range(2, max(int(s), 2)):
            yield (l, k)
    for l in range(len(context.sigma)):
        yield (l, 1)


def _try_kill(A, j, fixed, l, k, context):
    """Use the one-parameter family t + s t^k on branch l to make A_j zero."""
    field = context.field
    r = len(context.sigma)
    vals = {s: act(_jet(r, l, k, s, field), A, context) for s in (0, 1, 2, 3)}
    if any(vals[s][i] != A[i] for s in (1, 2, 3) for i in fixed):
        return None
    f0, f1, f2, f3 = (vals[s][j] for s in (0, 1, 2, 3))
    slope = f1 - f0
    if slope == 0 or f2 - f1 != slope or f3 - f2 != slope:
        return None
    s = -f0 / slope
    new = act(_jet(r, l, k, s, field), A, context)
    if new[j] != 0 or any(new[i] != A[i] for i in fixed):
        return None
    return new


def _try_scale(A, j, fixed, l, context):
    """Use t -> lambda t on branch l to make A_j equal to one."""
    field = context.field
    r = len(context.sigma)
    c = A[j]
    if c == 0:
        return None
    vals = {s: act(_jet(r, l, 1, s, field), A, context) for s in (2, 3)}
    if any(vals[s][i] != A[i] for s in (2, 3) for i in fixed):
        return None
    for e in (1, -1):
        if all(vals[s][j] == c * field(s) ** e for s in (2, 3)):
            lam = (field.one / c) ** e if e == 1 else c
            new = act(_jet(r, l, 1, lam, field), A, context)
            if new[j] == 1 and all(new[i] == A[i] for i in fixed):
                return new
    return None


def orbit_reduce(coeffs, context: NormalizedGenerators, max_nodes: int = 200):
    """A distinguished point in the orbit of A under the jet group.

    Coordinates are fixed one at a time, either killed by a translation-type
    jet t + s t^k or scaled to one by t -> lambda t, always leaving the
    coordinates fixed earlier untouched.  A depth-first search over the order
    of coordinates keeps the deepest success.  Returns (representative,
    indices of coordinates left free).
    """
    A = list(coeffs)
    n = len(A)
    if n == 0:
        return A, []
    best = (A, [])
    budget = [max_nodes]

    def search(cur, fixed):
        nonlocal best
        if len(fixed) > len(best[1]):
            best = (cur, list(fixed))
        if len(fixed) == n or budget[0] <= 0:
            return len(fixed) == n
        for j in range(n):
            if j in fixed:
                continue
            budget[0] -= 1
            nxt = None
            for l, k in _parameters(context):
                if k == 1:
                    nxt = _try_scale(cur, j, fixed, l, context)
                else:
                    nxt = _try_kill(cur, j, fixed, l, k, context)
                if nxt is not None:
                    break
            if nxt is not None and search(nxt, fixed + [j]):
                return True
        return False

    search(A, [])
    rep, fixed = best
    free = [j for j in range(n) if j not in fixed]
    return rep, free


def marked_equivalent(curve_a: CurveGerm, curve_b: CurveGerm, truncation: int = 32) -> dict:
    """Probe marked analytic equivalence through orbit representatives."""
    ga = compute_semiring(curve_a, truncation)
    gb = compute_semiring(curve_b, truncation)
    same = semiring_equal(ga, gb)
    if not same["equal"]:
        return {"equivalent": False, "reason": f"different value semirings: {same['reason']}"}
    pa = moduli_point(curve_a, truncation, ga)
    pb = moduli_point(curve_b, truncation, gb)
    if pa.positions() != pb.positions() or pa.values != pb.values:
        return {"equivalent": False, "reason": "different normal form layouts"}
    ra, free_a = orbit_reduce(pa.coefficients(), pa)
    pb_in_a = pa.with_coefficients(pb.coefficients())
    rb, free_b = orbit_reduce(pb_in_a.coefficients(), pa)
    return {
        "equivalent": ra == rb,
        "representative_a": [pa.field.dump(c) for c in ra],
        "representative_b": [pa.field.dump(c) for c in rb],
        "free": free_a,
        "certain": free_a == free_b,
    }
