"""Exact integer linear algebra.

Matrices are plain lists of row lists of Python ints. Nothing here touches
floating point.
"""

IntMatrix = list  # list[list[int]], row-major


class DimensionError(ValueError):
    pass


class RankError(ValueError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def copy(m: IntMatrix) -> IntMatrix:
    return [list(row) for row in m]


def transpose(m: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*m)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: IntMatrix, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def bareiss_det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(m: IntMatrix):
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Pivots of
    ``h`` are positive, entries above a pivot lie in ``[0, pivot)``, zero
    rows sit at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = copy(m)
    u = identity(rows)
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        # fold every entry below row r in column c into row r
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            g, x, y = _xgcd(h[r][c], h[i][c])
            p, q = h[r][c] // g, h[i][c] // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-s for s in h[r]]
            u[r] = [-s for s in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return h, u


def hnf_pivots(h: IntMatrix) -> list:
    """Column index of the pivot of each nonzero row of an HNF matrix."""
    out = []
    for row in h:
        for j, x in enumerate(row):
            if x:
                out.append(j)
                break
    return out


def snf(m: IntMatrix):
    """Smith normal form: ``(d, u, v)`` with ``u @ m @ v == d``."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = copy(m)
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(rows, cols):
        # choose the smallest nonzero entry in the trailing block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            p = d[t][t]
            for i in range(t + 1, rows):
                if d[i][t]:
                    f = d[i][t] // p
                    d[i] = [a - f * b for a, b in zip(d[i], d[t])]
                    u[i] = [a - f * b for a, b in zip(u[i], u[t])]
                    if d[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if d[t][j]:
                    f = d[t][j] // p
                    for row in d:
                        row[j] -= f * row[t]
                    for row in v:
                        row[j] -= f * row[t]
                    if d[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if d[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                d[t] = [a + b for a, b in zip(d[t], d[bad])]
                u[t] = [a + b for a, b in zip(u[t], u[bad])]
                continue
            # move the new smallest entry of row/column t into the pivot
            best = (t, t)
            for i in range(t, rows):
                if d[i][t] and abs(d[i][t]) < abs(d[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, cols):
                if d[t][j] and abs(d[t][j]) < abs(d[best[0]][best[1]]):
                    best = (t, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
        if d[t][t] < 0:
            d[t] = [-a for a in d[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return d, u, v


def invariant_factors(m: IntMatrix) -> list:
    d, _, _ = snf(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Rows spanning the integer kernel ``{x : m @ x == 0}``, in HNF."""
    h, u = hnf(transpose(m))
    rank = len(hnf_pivots(h))
    ker = u[rank:]
    if not ker:
        return []
    k, _ = hnf(ker)
    return [row for row in k if any(row)]


def solve_linear(m: IntMatrix, b):
    """Integer solution of ``m @ x == b`` or ``None``.

    When the solution set is a coset of a nonzero kernel lattice, the
    representative returned is reduced against the kernel's HNF so that its
    pivot coordinates lie in ``[0, pivot)``; this makes it canonical.
    """
    if len(b) != len(m):
        raise DimensionError("right-hand side length does not match rows")
    cols = len(m[0]) if m else 0
    # x^T m^T = b^T; row-reduce m^T
    h, u = hnf(transpose(m))
    piv = hnf_pivots(h)
    rank = len(piv)
    y = [0] * rank
    rem = list(b)
    for r, c in enumerate(piv):
        q, s = divmod(rem[c], h[r][c])
        if s:
            return None
        y[r] = q
        if q:
            rem = [a - q * e for a, e in zip(rem, h[r])]
    if any(rem):
        return None
    x = [sum(y[r] * u[r][j] for r in range(rank)) for j in range(cols)]
    for row in kernel_basis(m):
        c = next(j for j, e in enumerate(row) if e)
        f = x[c] // row[c]
        if f:
            x = [a - f * e for a, e in zip(x, row)]
    return x


def _round_div(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties toward -inf."""
    return -((-2 * num + den) // (2 * den)) if den > 0 else _round_div(-num, -den)


def lagrange_gauss(basis, form):
    """Lagrange-Gauss reduction of a rank-2 lattice.

    ``basis`` is a pair of integer 2-vectors and ``form`` a positive
    definite quadratic form ``(A, B, C)`` giving the squared length
    ``A*x^2 + B*x*y + C*y^2`` of a vector ``(x, y)``.
    """
    A, B, C = form
    if B * B - 4 * A * C >= 0 or A <= 0:
        raise ValueError("form is not positive definite")

    def Q(v):
        return A * v[0] * v[0] + B * v[0] * v[1] + C * v[1] * v[1]

    def bil(v, w):  # twice the associated bilinear form
        return 2 * A * v[0] * w[0] + B * (v[0] * w[1] + v[1] * w[0]) + 2 * C * v[1] * w[1]

    v1, v2 = list(basis[0]), list(basis[1])
    if v1[0] * v2[1] - v1[1] * v2[0] == 0:
        raise RankError("basis vectors are linearly dependent")
    if Q(v1) > Q(v2):
        v1, v2 = v2, v1
    while True:
        mu = _round_div(bil(v1, v2), 2 * Q(v1))
        if mu:
            v2 = [a - mu * b for a, b in zip(v2, v1)]
        if Q(v2) < Q(v1):
            v1, v2 = v2, v1
        else:
            return v1, v2


def lattice_contains(h: IntMatrix, vec) -> bool:
    """Membership of ``vec`` in the row lattice of HNF matrix ``h``."""
    vec = list(vec)
    for row in h:
        c = next((j for j, e in enumerate(row) if e), None)
        if c is None:
            break
        q, r = divmod(vec[c], row[c])
        if r:
            return False
        if q:
            vec = [a - q * e for a, e in zip(vec, row)]
    return not any(vec)
