"""Brute-force reference implementations used only by the tests.

Nothing here calls the package or numpy.linalg: index arithmetic is spelled
out with loops and eigenvalues come from characteristic polynomials, solved in
closed form (2x2) or by bisection (larger). Polynomial work runs in 40-digit
mpmath arithmetic so the oracle is far more accurate than what it checks.
"""

import cmath
import math

import mpmath
import numpy as np

mpmath.mp.dps = 40


def to_lists(m):
    return [[complex(x) for x in row] for row in np.asarray(m)]


def charpoly(m):
    """Coefficients c[0..n] of det(x I - m) = sum_k c[k] x^k (Faddeev-LeVerrier)."""
    rows = m if isinstance(m, list) else to_lists(m)
    a = [[mpmath.mpc(x) for x in row] for row in rows]
    n = len(a)
    zero = mpmath.mpc(0)
    c = [zero] * (n + 1)
    c[n] = mpmath.mpc(1)
    mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = [[sum(a[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        mk = [[am[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        amk = [[sum(a[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return c


def polyval(c, x):
    acc = mpmath.mpf(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _derivative(c):
    return [k * c[k] for k in range(1, len(c))]


def _bisect(c, a, b):
    fa = polyval(c, a)
    for _ in range(160):
        mid = (a + b) / 2
        fm = polyval(c, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


def real_roots(c):
    """All roots of a real polynomial assumed to have only real roots, ascending.

    Critical points (roots of the derivative, found recursively) split the
    line into monotone pieces that each hold one root.
    """
    c = [mpmath.mpf(mpmath.re(x)) for x in c]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n == 1:
        return [-c[0] / c[1]]
    bound = 1 + max(abs(x / c[-1]) for x in c[:-1])
    crit = real_roots(_derivative(c))
    edges = [-bound] + crit + [bound]
    roots = []
    for a, b in zip(edges[:-1], edges[1:]):
        fa, fb = polyval(c, a), polyval(c, b)
        if fa == 0:
            roots.append(a)
        elif (fa > 0) != (fb > 0):
            roots.append(_bisect(c, a, b))
        else:
            # tangent (repeated) root: the nearer endpoint is the best estimate
            roots.append(a if abs(fa) <= abs(fb) else b)
    return sorted(roots)


def eigvals_2x2(m):
    (a, b), (c, d) = to_lists(m)
    tr = (a + d).real
    disc = math.sqrt(max(0.0, ((a - d).real / 2) ** 2 + abs(b) * abs(c)))
    return sorted([tr / 2 + disc, tr / 2 - disc], reverse=True)


def eigvals_bisection(m):
    """Descending eigenvalues of a Hermitian (or real-spectrum) matrix."""
    return sorted((float(r) for r in real_roots(charpoly(m))), reverse=True)


def eigvals(m):
    m = np.asarray(m)
    if m.shape == (2, 2):
        return eigvals_2x2(m)
    return eigvals_bisection(m)


def partial_trace_loops(rho, keep="A"):
    r = to_lists(rho)
    out = [[0j, 0j], [0j, 0j]]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                if keep == "A":
                    out[i][j] += r[2 * i + k][2 * j + k]
                else:
                    out[i][j] += r[2 * k + i][2 * k + j]
    return np.array(out)


def partial_transpose_loops(rho):
    r = to_lists(rho)
    out = [[0j] * 4 for _ in range(4)]
    for i in range(2):
        for k in range(2):
            for j in range(2):
                for l in range(2):
                    out[2 * i + k][2 * j + l] = r[2 * j + k][2 * i + l]
    return np.array(out)


def l1_loops(rho):
    r = to_lists(rho)
    return sum(abs(r[i][j]) for i in range(len(r)) for j in range(len(r)) if i != j)


def entropy_from(values):
    return -sum(v * math.log2(v) for v in values if v > 0.0)


def von_neumann(rho):
    return entropy_from([max(v, 0.0) for v in eigvals(rho)])


def rel_ent_coherence(rho):
    r = to_lists(rho)
    return entropy_from([r[i][i].real for i in range(len(r))]) - von_neumann(rho)


def negativity(rho):
    return sum(abs(v) for v in eigvals(partial_transpose_loops(rho))) - 1.0


def spin_flip(rho):
    """(Y x Y) rho* (Y x Y) with explicit sign bookkeeping."""
    r = to_lists(rho)
    # Y (x) Y maps basis index b to 3 - b with sign -1 for b in {0, 3}
    sign = [-1, 1, 1, -1]
    return np.array([[sign[i] * sign[j] * r[3 - i][3 - j].conjugate() for j in range(4)] for i in range(4)])


def concurrence(rho):
    r = [[mpmath.mpc(x) for x in row] for row in to_lists(rho)]
    f = [[mpmath.mpc(x) for x in row] for row in to_lists(spin_flip(rho))]
    prod = [[sum(r[i][k] * f[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    mus = real_roots(charpoly(prod))
    lam = sorted((mpmath.sqrt(max(mu, 0)) for mu in mus), reverse=True)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_pure(psi):
    a, b, c, d = (complex(x) for x in psi)
    return 2.0 * abs(a * d - b * c)


def evolved_uniform(dphi_lr, dphi_rl):
    """Outer product of (1/2)(1, e^{i dLR}, e^{i dRL}, 1), entry by entry."""
    v = [0.5, 0.5 * cmath.exp(1j * dphi_lr), 0.5 * cmath.exp(1j * dphi_rl), 0.5]
    return np.array([[v[i] * v[j].conjugate() for j in range(4)] for i in range(4)])


def evolved_product(p_a, p_b, dphi_lr, dphi_rl):
    m = [math.sqrt(p_a * p_b), math.sqrt(p_a * (1 - p_b)), math.sqrt((1 - p_a) * p_b), math.sqrt((1 - p_a) * (1 - p_b))]
    ph = [1, cmath.exp(1j * dphi_lr), cmath.exp(1j * dphi_rl), 1]
    v = [m[i] * ph[i] for i in range(4)]
    return np.array([[v[i] * v[j].conjugate() for j in range(4)] for i in range(4)])


def random_pure(rng, dim=4):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / math.sqrt(float(np.sum(np.abs(v) ** 2)))


def random_mixed(rng, weight_range=(0.02, 0.25)):
    """Full-rank two-qubit state: a random pure state mixed with a random full-rank state."""
    psi = random_pure(rng)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    g = x @ x.conj().T
    g = g / np.trace(g).real
    w = rng.uniform(*weight_range)
    rho = (1 - w) * np.outer(psi, psi.conj()) + w * g
    return 0.5 * (rho + rho.conj().T)


def random_hermitian(rng, dim=4):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (x + x.conj().T)
