"""Exact dense linear algebra over small finite fields.

Matrices are lists of row lists holding element indices.  Every routine takes
the field object first, treats its arguments as read-only, and returns fresh
lists.  ``field`` is any object exposing ``zero``/``one`` attributes plus
``add``/``sub``/``neg``/``mul``/``inv`` methods on indices.
"""

from __future__ import annotations


def rref(field, matrix, columns=None):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``pivots`` lists, in elimination order,
    the column index of each pivot.  ``columns`` optionally restricts (and
    orders) the columns allowed to carry pivots; columns outside it are never
    eliminated, which is what greedy information-set searches need.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    scan = list(columns) if columns is not None else list(range(ncols))
    zero = field.zero
    one = field.one
    pivots = []
    r = 0
    nrows = len(rows)
    for c in scan:
        if r == nrows:
            break
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] != zero:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        if inv != one:
            mul = field.mul
            rows[r] = [mul(inv, x) for x in rows[r]]
        lead = rows[r]
        sub, mul = field.sub, field.mul
        for i in range(nrows):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [sub(x, mul(f, y)) for x, y in zip(rows[i], lead)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(field, matrix):
    return len(rref(field, matrix)[1])


def solve(field, matrix, rhs):
    """One solution of ``matrix @ x = rhs`` with free variables set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    if len(matrix) != len(rhs):
        raise ValueError("matrix/rhs size mismatch")
    if not matrix:
        return []
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(field, aug, columns=range(ncols))
    zero = field.zero
    for row in red:
        if row[-1] != zero and all(x == zero for x in row[:-1]):
            return None
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][-1]
    return x


def invert(field, matrix):
    """Inverse of a square matrix, or ``None`` if singular."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    zero, one = field.zero, field.one
    aug = [list(row) + [one if i == j else zero for j in range(n)]
           for i, row in enumerate(matrix)]
    red, pivots = rref(field, aug, columns=range(n))
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def nullspace(field, matrix):
    """Basis of the right nullspace, one vector per free column (ascending)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    red, pivots = rref(field, matrix)
    pivot_set = set(pivots)
    zero, one = field.zero, field.one
    basis = []
    for fc in range(ncols):
        if fc in pivot_set:
            continue
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][fc])
        basis.append(v)
    return basis


def matvec(field, matrix, vec):
    zero = field.zero
    add, mul = field.add, field.mul
    out = []
    for row in matrix:
        acc = zero
        for a, b in zip(row, vec):
            if a != zero and b != zero:
                acc = add(acc, mul(a, b))
        out.append(acc)
    return out
