"""Small exact linear algebra over ``fractions.Fraction``."""
from fractions import Fraction


def frac_vec(v):
    return tuple(Fraction(x) for x in v)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def matvec(m, v):
    """Apply an integer/rational matrix (sequence of rows) to ``v``."""
    return tuple(dot([Fraction(int(a)) if not isinstance(a, Fraction) else a
                      for a in row], v) for row in m)


def _echelon(rows):
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    rows = [frac_vec(r) for r in rows]
    if not rows:
        return 0
    return len(_echelon(rows)[1])


def affine_rank(points):
    """Dimension of the affine span of ``points`` (-1 for no points)."""
    points = list(points)
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def solve(a, b):
    """Solve the square system ``a x = b``; return None when singular."""
    n = len(a)
    aug = [list(frac_vec(row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    m, pivots = _echelon(aug)
    if pivots != list(range(n)):
        return None
    return tuple(m[i][n] for i in range(n))


def inverse(a):
    n = len(a)
    aug = [list(frac_vec(row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    m, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [tuple(m[i][n:]) for i in range(n)]
