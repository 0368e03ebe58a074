"""Sylvester resultants with fraction-free (Bareiss) elimination.

Entries of the Sylvester matrix are homogeneous polynomials in the two
remaining variables.  Every minor of a Sylvester matrix is homogeneous, so
Bareiss' exact divisions stay inside :class:`HPoly`.

Degenerate degrees follow the usual convention with the *actual* degree in
the eliminated variable: if ``p`` does not involve it, ``Res(p, q) = p**deg(q)``
(and symmetrically); if neither does, the empty determinant gives ``1``.
"""

from __future__ import annotations

from typing import List

from .hpoly import HPoly, hp_divexact


def sylvester_matrix(p: HPoly, q: HPoly, var: int) -> List[List[HPoly]]:
    m, n = p.deg_in(var), q.deg_in(var)
    pc = [p.coeff_in(var, k) for k in range(m, -1, -1)]
    qc = [q.coeff_in(var, k) for k in range(n, -1, -1)]
    size = m + n
    zero = HPoly.zero()
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(M: List[List[HPoly]]) -> HPoly:
    n = len(M)
    if n == 0:
        return HPoly.one()
    M = [list(r) for r in M]
    sign = 1
    prev = HPoly.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return HPoly.zero()
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            for j in range(k + 1, n):
                num = M[i][j] * pivot - mik * M[k][j]
                M[i][j] = num if prev.is_constant() and prev == HPoly.one() else hp_divexact(num, prev)
            M[i][k] = HPoly.zero()
        prev = pivot
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant_eliminate(p: HPoly, q: HPoly, var: int) -> HPoly:
    """Resultant of ``p`` and ``q`` with respect to variable ``var`` (0, 1 or 2)."""
    if p.is_zero() or q.is_zero():
        return HPoly.zero()
    return bareiss_det(sylvester_matrix(p, q, var))
