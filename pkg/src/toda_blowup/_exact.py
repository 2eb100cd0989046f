"""Small exact linear-algebra kernel over ``fractions.Fraction``.

Matrices are lists of rows. Everything here is sized for Lie data of rank
at most 8 and representation blocks of a few dozen rows, so plain Python
loops are fine.
"""

from fractions import Fraction
from numbers import Rational


def as_fraction(x):
    """Coerce ints, Fractions and "p/q" or decimal strings to Fraction.

    Floats are passed through untouched; callers that accept real input
    decide for themselves what to do with them.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return x


def is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def fmt(x):
    """Serialize a rational as a "p/q" string ("p" when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_number(x):
    """Rationals as "p/q"; reals as their shortest round-trip repr."""
    if is_exact(x):
        return fmt(x)
    return repr(float(x))


def parse_number(s):
    if isinstance(s, str) and ("/" in s or s.strip().lstrip("-").isdigit()):
        return Fraction(s.strip())
    return as_fraction(s)


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def matmul(a, b):
    if not a:
        return []
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt]
            for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def quad_form(g, v):
    return dot(v, matvec(g, v))


def solve(a, b):
    """Solve ``a x = b`` exactly for square nonsingular ``a``.

    ``b`` may be a vector or a matrix (list of rows). Raises ValueError on a
    singular system.
    """
    n = len(a)
    vector = b and not isinstance(b[0], list)
    rhs = [[x] for x in b] if vector else [list(r) for r in b]
    m = [list(map(Fraction, a[i])) + list(rhs[i]) for i in range(n)]
    width = len(m[0]) if m else 0
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = [row[n:width] for row in m]
    return [r[0] for r in out] if vector else out


def inverse(a):
    return solve(a, identity(len(a)))


def det(a):
    n = len(a)
    m = [list(map(Fraction, r)) for r in a]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        p = m[col][col]
        d *= p
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / p
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return d


def leading_minors(a):
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def greedy_independent(gram):
    """Indices of a maximal subset with nonsingular Gram submatrix.

    Earlier indices win ties. Works by incremental Gaussian elimination on
    the Gram matrix (a symmetric Cholesky without square roots), so the
    selected block is guaranteed invertible.
    """
    chosen = []
    # rows of the reduced Gram matrix restricted to chosen pivots
    reduced = []
    for k in range(len(gram)):
        row = list(gram[k])
        for (j, r) in zip(chosen, reduced):
            if row[j] != 0:
                f = row[j] / r[j]
                row = [x - f * y for x, y in zip(row, r)]
        if row[k] != 0:
            chosen.append(k)
            reduced.append(row)
    return chosen
