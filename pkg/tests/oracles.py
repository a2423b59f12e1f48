"""Independent reference implementations used as test oracles.

Nothing here imports savgol_ci; the least-squares fits are solved by
plain Gaussian elimination with partial pivoting over the full window.
"""

from fractions import Fraction


def gauss_solve(A, b):
    """Solve A x = b by Gaussian elimination with partial pivoting (lists)."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        s = M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / M[r][r]
    return x


def wls_poly_fit(window, n, weights):
    """Weighted LS polynomial coefficients on abscissa -m..m (unit spacing).

    Works with floats or Fractions.
    """
    w2 = len(window)
    m = (w2 - 1) // 2
    xs = [k - m for k in range(w2)]
    A = [[sum(weights[i] * xs[i] ** (r + c) for i in range(w2)) for c in range(n)] for r in range(n)]
    b = [sum(weights[i] * xs[i] ** r * window[i] for i in range(w2)) for r in range(n)]
    return gauss_solve(A, b)


def poly_eval(coef, x):
    return sum(c * x**k for k, c in enumerate(coef))


def poly_deriv_eval(coef, x):
    return sum(k * c * x ** (k - 1) for k, c in enumerate(coef) if k)


def brute_force_filter(y, n, m, weights):
    """Smoothed values and per-sample derivatives, one explicit fit per output."""
    q = len(y)
    yf, dyf = [], []
    for t in range(q):
        start = min(max(t - m, 0), q - 2 * m - 1)
        coef = wls_poly_fit(y[start : start + 2 * m + 1], n, weights)
        pos = t - start - m
        yf.append(poly_eval(coef, pos))
        dyf.append(poly_deriv_eval(coef, pos))
    return yf, dyf


def exact_center_row(n, m, weights=None):
    """Centre-row smoothing coefficients in exact rational arithmetic."""
    w2 = 2 * m + 1
    weights = weights or [Fraction(1)] * w2
    row = []
    for k in range(w2):
        unit = [Fraction(int(i == k)) for i in range(w2)]
        row.append(poly_eval(wls_poly_fit(unit, n, weights), 0))
    return row


def exact_center_deriv_row(n, m, weights=None):
    w2 = 2 * m + 1
    weights = weights or [Fraction(1)] * w2
    row = []
    for k in range(w2):
        unit = [Fraction(int(i == k)) for i in range(w2)]
        row.append(poly_deriv_eval(wls_poly_fit(unit, n, weights), 0))
    return row
