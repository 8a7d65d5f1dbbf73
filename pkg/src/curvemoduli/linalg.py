"""Exact linear algebra on sparse rows.

Rows are dictionaries ``{column: scalar}``.  Over Q the elimination is
delegated to FLINT's rational matrices; over an extension field a plain
Gauss-Jordan elimination on dictionaries is used.
"""

from __future__ import annotations

import flint

from .coeffcore import FieldSpec, rational


def _rref_flint(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [], []
    mat = flint.fmpq_mat(nrows, ncols)
    for r, row in enumerate(rows):
        for c, v in row.items():
            if v != 0:
                mat[r, c] = rational(v)
    red, rank = mat.rref()
    out_rows: list[dict] = []
    pivots: list[int] = []
    for r in range(rank):
        row: dict = {}
        for c in range(ncols):
            e = red[r, c]
            if e != 0:
                row[c] = e
        pivots.append(min(row))
        out_rows.append(row)
    return out_rows, pivots


def _rref_generic(rows: list[dict], ncols: int, field: FieldSpec) -> tuple[list[dict], list[int]]:
    work = [dict((c, v) for c, v in row.items() if v != 0) for row in rows]
    work = [row for row in work if row]
    reduced: list[dict] = []
    pivots: list[int] = []
    for col in range(ncols):
        pick = None
        for idx, row in enumerate(work):
            if row.get(col, 0) != 0:
                pick = idx
                break
        if pick is None:
            continue
        prow = work.pop(pick)
        inv = field.one / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for row in work:
            f = row.get(col, 0)
            if f != 0:
                for c, v in prow.items():
                    nv = row.get(c, field.zero) - f * v
                    if nv == 0:
                        row.pop(c, None)
                    else:
                        row[c] = nv
        for row in reduced:
            f = row.get(col, 0)
            if f != 0:
                for c, v in prow.items():
                    nv = row.get(c, field.zero) - f * v
                    if nv == 0:
                        row.pop(c, None)
                    else:
                        row[c] = nv
        work = [row for row in work if row]
        reduced.append(prow)
        pivots.append(col)
    return reduced, pivots


def rref(rows: list[dict], ncols: int, field: FieldSpec) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    if field.is_rational:
        return _rref_flint(rows, ncols)
    return _rref_generic(rows, ncols, field)


def nullspace(rows: list[dict], ncols: int, field: FieldSpec) -> list[dict]:
    """Basis of {v : row . v = 0 for all rows}, as sparse vectors."""
    red, pivots = rref(rows, ncols, field)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: field.one}
        for row, p in zip(red, pivots):
            v = row.get(free)
            if v is not None and v != 0:
                vec[p] = -v
        basis.append(vec)
    return basis


def solve_affine(rows: list[dict], rhs: list, ncols: int, field: FieldSpec):
    """Solve rows . v = rhs.  Returns (particular solution or None, kernel basis)."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b != 0:
            r[ncols] = b
        aug.append(r)
    red, pivots = rref(aug, ncols + 1, field)
    if ncols in pivots:
        return None, []
    particular = {}
    for row, p in zip(red, pivots):
        b = row.get(ncols)
        if b is not None and b != 0:
            particular[p] = b
    kernel = nullspace(rows, ncols, field)
    return particular, kernel


def rank(rows: list[dict], ncols: int, field: FieldSpec) -> int:
    return len(rref(rows, ncols, field)[1])


def combine(vectors: list[dict], scalars: list, field: FieldSpec) -> dict:
    out: dict = {}
    for vec, s in zip(vectors, scalars):
        if s == 0:
            continue
        for c, v in vec.items():
            out[c] = out.get(c, field.zero) + s * v
    return {c: v for c, v in out.items() if v != 0}


def generic_scalars(count: int, offset: int = 0) -> list[int]:
    """Deterministic 'generic' scalars: consecutive primes 2, 3, 5, 7, ..."""
    primes: list[int] = []
    n = 2
    while len(primes) < count + offset:
        if all(n % p for p in primes if p * p <= n):
            primes.append(n)
        n += 1
    return primes[offset:offset + count]
