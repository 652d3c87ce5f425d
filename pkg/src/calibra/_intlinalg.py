"""Exact integer linear algebra (Python ints): diagonalization by unimodular moves."""
from __future__ import annotations


def diagonalize(A):
    """Return (D, U, V) with D = U A V diagonal, U and V unimodular.

    A is a list of integer rows.  The diagonal need not satisfy the
    divisibility chain of the Smith form; that is not needed for solving.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                a = D[i][t]
                if a:
                    q = a // p
                    if q:
                        ri, rt = D[i], D[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                        ui, ut = U[i], U[t]
                        for j in range(m):
                            if ut[j]:
                                ui[j] -= q * ut[j]
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                a = D[t][j]
                if a:
                    q = a // p
                    if q:
                        for row in D:
                            if row[t]:
                                row[j] -= q * row[t]
                        for row in V:
                            if row[t]:
                                row[j] -= q * row[t]
                    if D[t][j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest remainder in row/column t to the pivot
            best = (abs(D[t][t]), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
    return D, U, V


def solve_integer(A, b):
    """An integer x with A x = b, or None if no integer solution exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    b = [int(v) for v in b]
    if m == 0:
        return []
    if n == 0:
        return [] if not any(b) else None
    D, U, V = diagonalize(A)
    c = [sum(U[i][j] * b[j] for j in range(m) if U[i][j]) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
            continue
        q, r = divmod(c[i], d)
        if r:
            return None
        y[i] = q
    return [sum(V[i][j] * y[j] for j in range(n) if y[j]) for i in range(n)]
