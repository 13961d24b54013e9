"""Independent reference implementations used only by the tests.

Plain Python lists and loops; nothing here imports numpy or the package
under test, so these checks stay independent of the code paths they verify.
"""

from __future__ import annotations


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def inverse(m):
    """Gauss-Jordan elimination with partial pivoting."""
    n = len(m)
    aug = [list(map(float, row)) + identity(n)[i] for i, row in enumerate(m)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[piv][col] == 0:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def cv_transition(t):
    a = identity(8)
    for i in (0, 2, 4, 6):
        a[i][i + 1] = t
    return a


def selector():
    c = [[0.0] * 8 for _ in range(4)]
    for row, col in enumerate((0, 2, 4, 6)):
        c[row][col] = 1.0
    return c


def kalman_cycle(x, p, z, t, q, r):
    """One predict/update with the textbook (I - KC) P covariance form."""
    a = cv_transition(t)
    c = selector()
    xcol = [[v] for v in x]
    xp = matmul(a, xcol)
    pp = add(matmul(matmul(a, p), transpose(a)), q)
    s = add(matmul(matmul(c, pp), transpose(c)), r)
    k = matmul(matmul(pp, transpose(c)), inverse(s))
    innov = sub([[v] for v in z], matmul(c, xp))
    xu = add(xp, matmul(k, innov))
    pu = matmul(sub(identity(8), matmul(k, c)), pp)
    return [row[0] for row in xu], pu, pp, k


def gap_crash_oracle(gap, closing, host_speed, host_x, safety_gap):
    """Closed-form crash zone: host positions at gap == safety_gap and gap == 0."""
    t_contact = gap / closing
    t_enter = max((gap - safety_gap) / closing, 0.0)
    return host_x + host_speed * t_enter, host_x + host_speed * t_contact, t_contact
