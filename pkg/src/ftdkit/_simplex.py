"""Exact phase-one simplex over the rationals.

Decides {Ax = 1, x >= 0} for a 0/1 incidence matrix given by columns of
row indices.  Minimizes the sum of artificial variables with Bland's
rule (smallest eligible index enters; ties in the ratio test go to the
row whose basic variable has the smallest index), which cannot cycle,
so the decision is complete.  Everything is a Fraction; the answer is
exact.  Intended for small instances (tens of rows), where a dense
tableau is simplest and fast enough.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_phase_one(columns, m):
    """Minimize sum of artificials for A x + s = 1.

    ``columns``: per structural column, the sorted row indices holding a 1.
    Returns (optimum, x, y): the exact optimum, a structural solution of
    length len(columns) (meaningful when optimum == 0), and the dual row
    vector of length m (a Farkas certificate when optimum > 0).
    """
    t = len(columns)
    n = t + m  # artificials live at indices t .. t+m-1
    tableau = [[ZERO] * (n + 1) for _ in range(m)]
    for j, rows in enumerate(columns):
        for i in rows:
            tableau[i][j] = ONE
    for i in range(m):
        tableau[i][t + i] = ONE
        tableau[i][n] = ONE
    basis = [t + i for i in range(m)]

    # reduced costs: r_j = c_j - sum of rows through the artificial basis
    red = [ZERO] * (n + 1)
    for j in range(t):
        red[j] = -Fraction(len(columns[j]))
    red[n] = -Fraction(m)  # negative objective value

    while True:
        enter = -1
        for j in range(n):
            if red[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][n] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise ArithmeticError("phase-one objective is bounded; unbounded pivot means a bug")
        piv = tableau[leave][enter]
        row = tableau[leave]
        if piv != 1:
            for j in range(n + 1):
                if row[j]:
                    row[j] = row[j] / piv
        for i in range(m):
            if i == leave:
                continue
            f = tableau[i][enter]
            if f:
                ti = tableau[i]
                for j in range(n + 1):
                    if row[j]:
                        ti[j] -= f * row[j]
        f = red[enter]
        if f:
            for j in range(n + 1):
                if row[j]:
                    red[j] -= f * row[j]
        basis[leave] = enter

    optimum = -red[n]
    x = [ZERO] * t
    for i, b in enumerate(basis):
        if b < t:
            x[b] = tableau[i][n]
    # reduced cost of artificial i is 1 - y_i
    y = [ONE - red[t + i] for i in range(m)]
    return optimum, x, y


def decide_exact(columns, m):
    """(feasible, x, y) for {Ax = 1, x >= 0}; x or y is None accordingly."""
    optimum, x, y = solve_phase_one(columns, m)
    if optimum == 0:
        return True, x, None
    return False, None, y
