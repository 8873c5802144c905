"""Exact linear programming over the rationals.

A small two-phase simplex on Fraction arithmetic, sufficient for the
feasibility problems in this package (tens of variables).  Bland's rule
guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


@dataclass
class LPResult:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    objective: Optional[Fraction] = None
    solution: Optional[list[Fraction]] = None


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int
           ) -> None:
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    for r, line in enumerate(tab):
        if r != row and line[col] != 0:
            coef = line[col]
            tab[r] = [x - coef * y for x, y in zip(line, tab[row])]
    basis[row] = col


def _simplex(tab: list[list[Fraction]], basis: list[int], ncols: int) -> str:
    """Maximize; objective in the last row as  z - c.x = 0  form."""
    while True:
        obj = tab[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for r in range(len(tab) - 1):
            if tab[r][col] > 0:
                ratio = tab[r][-1] / tab[r][col]
                if best is None or ratio < best[0] or \
                        (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], col)


def solve_lp(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence,
             a_ub: Sequence[Sequence] = (), b_ub: Sequence = ()
             ) -> LPResult:
    """Maximize c.x subject to a_eq x = b_eq, a_ub x <= b_ub, x >= 0."""
    c = [Fraction(x) for x in c]
    n = len(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(a_ub)
    for i, row in enumerate(a_eq):
        r = [Fraction(x) for x in row] + [Fraction(0)] * nslack
        rows.append(r)
        rhs.append(Fraction(b_eq[i]))
    for i, row in enumerate(a_ub):
        r = [Fraction(x) for x in row] + [Fraction(0)] * nslack
        r[n + i] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(b_ub[i]))
    total = n + nslack
    # make all right-hand sides nonnegative
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    # phase 1: artificial variables
    tab = []
    for i in range(m):
        tab.append(rows[i] + [Fraction(int(j == i)) for j in range(m)]
                   + [rhs[i]])
    # maximize -(sum of artificials): bottom row starts as +1 on the
    # artificial columns, then is reduced against the (artificial) basis
    phase1 = [Fraction(0)] * total + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        phase1 = [x - y for x, y in zip(phase1, tab[i])]
    tab.append(phase1)
    basis = list(range(total, total + m))
    status = _simplex(tab, basis, total + m)
    assert status == "optimal"
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= total:
            col = next((j for j in range(total) if tab[r][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, r, col)
    # drop rows still basic in an artificial (redundant constraints)
    keep = [r for r in range(m) if basis[r] < total]
    tab = [[tab[r][j] for j in range(total)] + [tab[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]

    # phase 2
    obj = [-x for x in c] + [Fraction(0)] * nslack + [Fraction(0)]
    for r, line in enumerate(tab):
        if obj[basis[r]] != 0:
            coef = obj[basis[r]]
            obj = [x - coef * y for x, y in zip(obj, line)]
    tab.append(obj)
    status = _simplex(tab, basis, total)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * total
    for r, b in enumerate(basis):
        x[b] = tab[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, x[:n]))
    return LPResult("optimal", value, x[:n])
