"""Row reduction over exact fields (Fraction or CoeffNumber entries)."""
from __future__ import annotations

from fractions import Fraction

from .errors import InternalError


def _zero(x) -> bool:
    return x == 0


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(M)) if not _zero(M[i][col])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col] if not isinstance(M[r][col], int) else Fraction(1, M[r][col])
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and not _zero(M[i][col]):
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: list[list]) -> int:
    return len(rref(rows)[1])


def solve(A: list[list], b: list) -> list:
    """Unique solution of A x = b; raises InternalError if inconsistent or underdetermined."""
    n = len(A[0])
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    R, pivots = rref(aug)
    if n in pivots:
        raise InternalError("linear system is inconsistent")
    if len(pivots) != n:
        raise InternalError("linear system does not determine a unique solution")
    x = [Fraction(0)] * n
    for row, col in zip(R, pivots):
        x[col] = row[n]
    return x


def nullspace(rows: list[list]) -> list[list]:
    """Basis of {x : rows * x = 0}, one vector per free column."""
    if not rows:
        return []
    n = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis
