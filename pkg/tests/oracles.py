"""Independent reference computations used to produce and check expected values.

Nothing here calls the library's operators, solvers or closed forms; only the
exact scalar type is shared.
"""

from bilattice.scalar import ExactScalar, as_scalar


def lattice_point(s: int, gamma) -> ExactScalar:
    """x(s) = s + gamma (1 + (-1)^s)."""
    g = as_scalar(gamma)
    return as_scalar(s) + g * (2 if s % 2 == 0 else 0)


def poly_value(coeffs, x: ExactScalar) -> ExactScalar:
    acc = as_scalar(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def value_on_lattice(even, odd, s: int, gamma) -> ExactScalar:
    """Value of ``even(z) + (-1)^s odd(z)`` at the lattice point s."""
    x = lattice_point(s, gamma)
    sign = 1 if s % 2 == 0 else -1
    return poly_value(even, x) + poly_value(odd, x) * sign


def difference_on_lattice(even, odd, s: int, gamma) -> ExactScalar:
    """(F(s+1) - F(s-1)) / 2 for the function F of :func:`value_on_lattice`."""
    return (value_on_lattice(even, odd, s + 1, gamma)
            - value_on_lattice(even, odd, s - 1, gamma)) / 2


def average_on_lattice(even, odd, s: int, gamma) -> ExactScalar:
    return (value_on_lattice(even, odd, s + 1, gamma)
            + value_on_lattice(even, odd, s - 1, gamma)) / 2


def _solve(matrix, rhs):
    n = len(matrix)
    a = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if not a[r][col].is_zero())
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def monic_orthogonal(moments, n_max: int) -> list:
    """Monic P_0..P_n_max (ascending coefficient lists) from <P_n, z^j> = 0, j < n."""
    m = [as_scalar(x) for x in moments]
    out = [[as_scalar(1)]]
    for n in range(1, n_max + 1):
        matrix = [[m[i + j] for j in range(n)] for i in range(n)]
        rhs = [-m[i + n] for i in range(n)]
        out.append(_solve(matrix, rhs) + [as_scalar(1)])
    return out


def gram_schmidt_table(moments, N: int):
    """(B_0..B_N, C_1..C_N) by B_n = <z P_n, P_n>/<P_n, P_n>, C_n = h_n / h_{n-1}."""
    m = [as_scalar(x) for x in moments]
    ps = monic_orthogonal(m, N + 1)

    def pairing(p, q, shift=0):
        acc = as_scalar(0)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                acc = acc + x * y * m[i + j + shift]
        return acc

    h = [pairing(p, p) for p in ps[: N + 1]]
    B = [pairing(p, p, 1) / hn for p, hn in zip(ps, h)]
    C = [h[n] / h[n - 1] for n in range(1, N + 1)]
    return B, C


def interpolate(points) -> list:
    """Ascending coefficients of the polynomial through ``(x, y)`` pairs (Lagrange)."""
    n = len(points)
    out = [as_scalar(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [as_scalar(1)]
        denom = as_scalar(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [as_scalar(0)] + basis            # multiply by z
            for k in range(len(basis) - 1):
                basis[k] = basis[k] - xj * basis[k + 1]
            denom = denom * (xi - xj)
        scale = yi / denom
        out = [o + b * scale for o, b in zip(out, basis)]
    while len(out) > 1 and out[-1].is_zero():
        out.pop()
    return out


def sigma_components_from_lattice(func, degree: int, gamma):
    """Recover ``(even, odd)`` of a sigma-polynomial from its values ``func(s)``.

    Even s gives ``even + odd`` at x = s + 2 gamma, odd s gives ``even - odd``
    at x = s.
    """
    plus = interpolate([(lattice_point(2 * j, gamma), func(2 * j)) for j in range(degree + 1)])
    minus = interpolate([(lattice_point(2 * j + 1, gamma), func(2 * j + 1))
                         for j in range(degree + 1)])
    size = max(len(plus), len(minus))
    plus += [as_scalar(0)] * (size - len(plus))
    minus += [as_scalar(0)] * (size - len(minus))
    even = [(p + q) / 2 for p, q in zip(plus, minus)]
    odd = [(p - q) / 2 for p, q in zip(plus, minus)]
    return even, odd


def discrete_moments(weights, count: int) -> list:
    """Moments sum_x w(x) x^k of a finite weight given as ``{x: w}``, normalized to m_0 = 1."""
    total = sum(weights.values())
    return [as_scalar(sum(w * x ** k for x, w in weights.items()) / total) for k in range(count)]


def rising_binomial(alpha, x: int):
    """binom(alpha + x, x) for rational alpha."""
    out = 1
    for j in range(1, x + 1):
        out = out * (alpha + j) / j
    return out
