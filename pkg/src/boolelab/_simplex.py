"""Exact phase-one simplex for ``A x = b, x >= 0`` over the rationals.

Revised form with an explicit basis inverse and Bland's rule, which cannot
cycle. Intended for a handful of rows and up to a few thousand columns.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def find_feasible(columns: Sequence[Sequence[int]], rhs: Sequence[Fraction]) -> dict[int, Fraction] | None:
    """A nonnegative solution as ``{column: value}`` (nonzeros only), or None."""
    m = len(rhs)
    n = len(columns)
    sign = [1 if Fraction(b) >= 0 else -1 for b in rhs]
    cols = [[sign[i] * int(c[i]) for i in range(m)] for c in columns]
    x_b = [abs(Fraction(b)) for b in rhs]
    # columns n..n+m-1 are artificials; they start basic and never re-enter
    basis = [n + i for i in range(m)]
    binv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]

    while True:
        # duals of the phase-one objective (sum of artificials)
        y = [sum((binv[r][i] for r in range(m) if basis[r] >= n), Fraction(0)) for i in range(m)]
        scale = lcm(*(v.denominator for v in y))
        yi = [int(v * scale) for v in y]
        enter = -1
        for j in range(n):
            col = cols[j]
            if sum(a * b for a, b in zip(yi, col)) > 0:
                enter = j
                break
        if enter < 0:
            break
        col = cols[enter]
        d = [sum((binv[r][i] * col[i] for i in range(m) if col[i]), Fraction(0)) for r in range(m)]
        leave = -1
        best = None
        for r in range(m):
            if d[r] > 0:
                ratio = x_b[r] / d[r]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave < 0:  # unbounded direction; impossible for a phase-one problem
            raise RuntimeError("phase-one simplex reported an unbounded direction")
        piv = d[leave]
        row = [v / piv for v in binv[leave]]
        x_leave = x_b[leave] / piv
        for r in range(m):
            if r == leave or d[r] == 0:
                continue
            f = d[r]
            binv[r] = [a - f * b for a, b in zip(binv[r], row)]
            x_b[r] -= f * x_leave
        binv[leave] = row
        x_b[leave] = x_leave
        basis[leave] = enter

    if any(basis[r] >= n and x_b[r] != 0 for r in range(m)):
        return None
    return {basis[r]: x_b[r] for r in range(m) if basis[r] < n and x_b[r] != 0}
