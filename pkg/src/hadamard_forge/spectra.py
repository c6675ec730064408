"""Characteristic polynomials, root finding and spectrum comparison.

Polynomials are plain 1-d complex arrays in ascending degree order, so
``p[k]`` is the coefficient of ``x**k``.  Spectra are always taken of the
scaled matrix M/sqrt(m), whose eigenvalues lie on the unit circle whenever
M is Hadamard of order m.

A degree-2k polynomial is called reciprocal here when p(x) = x**k * q(y)
for the substitution y = 1/x - x; the reduced polynomial q has half the
degree and each of its roots lifts back to the root pair of
x**2 + y*x - 1 = 0.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    InvalidDimensions,
    NotNormal,
    NotReciprocal,
    RootFindingFailure,
    ToleranceConfig,
    as_matrix,
)

# Accept a cluster of near-coincident roots as one multiple root only when
# every low-order derivative at the polished root sits at coefficient-noise
# level.  Genuinely distinct roots ~1e-6 apart fail this by two orders of
# magnitude and are kept separate.  The radius is sized for triple roots,
# whose computed copies scatter by (coefficient noise)**(1/3) ~ 1e-4.
_MERGE_VALID_REL = 3e-14
_CLUSTER_RADIUS = 2e-4


def polyval(coeffs, x):
    """Horner evaluation of an ascending-coefficient polynomial."""
    c = np.asarray(coeffs, dtype=complex)
    r = np.zeros_like(np.asarray(x, dtype=complex))
    for ck in c[::-1]:
        r = r * x + ck
    return r


def polyderiv(coeffs):
    c = np.asarray(coeffs, dtype=complex)
    if len(c) <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c))


def trim(coeffs, rel=1e-14):
    """Drop trailing (leading-degree) coefficients that are relative noise."""
    c = np.asarray(coeffs, dtype=complex)
    top = np.max(np.abs(c)) if len(c) else 0.0
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= rel * top:
        n -= 1
    return c[:n].copy()


def _coeff_scale(coeffs, x):
    c = np.abs(np.asarray(coeffs))
    xx = max(1.0, abs(x))
    return float(np.sum(c * xx ** np.arange(len(c))))


def _aberth(coeffs, max_iter=200, tol=1e-14):
    """Simultaneous Aberth-Ehrlich iteration for all roots at once."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    dc = polyderiv(c)
    radius = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    angles = 2 * np.pi * (np.arange(n) + 0.376) / n + 0.5
    z = 0.8 * radius * np.exp(1j * angles)
    best, best_res, stall = z.copy(), np.inf, 0
    for _ in range(max_iter):
        pv = polyval(c, z)
        dv = polyval(dc, z)
        dv = np.where(dv == 0, 1e-300, dv)
        ratio = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        w = ratio / (1.0 - ratio * s)
        z = z - w
        res = float(np.max(np.abs(polyval(c, z))))
        if res < best_res:
            stall = 0 if res < 0.5 * best_res else stall + 1
            best_res, best = res, z.copy()
        else:
            stall += 1
        if np.max(np.abs(w)) < tol * max(1.0, np.max(np.abs(z))) or stall > 12:
            break
    return best


def _newton(coeffs, x0, iters=60):
    c = np.asarray(coeffs, dtype=complex)
    dc = polyderiv(c)
    x = complex(x0)
    for _ in range(iters):
        f = complex(polyval(c, x))
        fp = complex(polyval(dc, x))
        if fp == 0:
            break
        step = f / fp
        x -= step
        if abs(step) < 1e-16 * max(1.0, abs(x)):
            break
    return x


def _merge_clusters(coeffs, roots):
    """Replace tight root clusters by polished multiple roots when valid."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(roots)
    used = [False] * n
    out = []
    for i in range(n):
        if used[i]:
            continue
        cluster = [i]
        used[i] = True
        grew = True
        while grew:
            grew = False
            for j in range(n):
                if used[j]:
                    continue
                if any(
                    abs(roots[j] - roots[k]) < _CLUSTER_RADIUS * max(1, abs(roots[k]))
                    for k in cluster
                ):
                    cluster.append(j)
                    used[j] = True
                    grew = True
        m = len(cluster)
        if m == 1:
            out.append(roots[i])
            continue
        centroid = np.mean([roots[k] for k in cluster])
        dm = c
        for _ in range(m - 1):
            dm = polyderiv(dm)
        rstar = _newton(dm, centroid)
        der = c
        accepted = True
        for _ in range(m):
            if abs(complex(polyval(der, rstar))) > _MERGE_VALID_REL * _coeff_scale(
                der, rstar
            ):
                accepted = False
                break
            der = polyderiv(der)
        if accepted:
            out.extend([rstar] * m)
        else:
            out.extend(roots[k] for k in cluster)
    return np.array(out, dtype=complex)


def poly_roots(coeffs, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """All complex roots of a polynomial, multiple roots repeated.

    Aberth-Ehrlich simultaneous iteration, then a Newton polish per root,
    then cluster refinement: a clump of m nearly equal roots is replaced by
    the nearby simple root of the (m-1)-th derivative when the backward
    error confirms a genuine m-fold root.  Raises RootFindingFailure when
    the residual bound |p(root)| <= tau_root * scale cannot be met.
    """
    c = trim(coeffs)
    if len(c) < 2:
        raise InvalidDimensions("root finding needs degree >= 1")
    raw = _aberth(c)
    polished = np.array([_newton(c, z) for z in raw])
    roots = _merge_clusters(c, polished)
    worst = max(
        abs(complex(polyval(c, r))) / _coeff_scale(c, r) for r in roots
    )
    if worst > tol.tau_root:
        raise RootFindingFailure(
            f"root residual {worst:.3e} exceeds tau_root={tol.tau_root:.1e}"
        )
    return roots


def char_poly(M) -> np.ndarray:
    """Monic characteristic polynomial of M/sqrt(m), ascending coefficients.

    For orders up to 16 the coefficients come from the Faddeev-LeVerrier
    trace recursion and are cross-checked against the product of the
    eigenvalue linear factors; the two routes are independent, which guards
    against cancellation in either one.  Larger orders use the eigenvalue
    product alone.
    """
    A = as_matrix(M)
    m = A.shape[0]
    S = A / np.sqrt(m)

    ev = np.linalg.eigvals(S)
    from_roots = np.array([1.0 + 0j])
    for lam in ev:
        from_roots = np.convolve(from_roots, [1.0, -lam])
    from_roots = from_roots[::-1].copy()

    if m > 16:
        return from_roots

    coeffs = np.zeros(m + 1, dtype=complex)
    coeffs[m] = 1.0
    Mk = np.eye(m, dtype=complex)
    for k in range(1, m + 1):
        Mk = S @ Mk
        ck = -np.trace(Mk) / k
        coeffs[m - k] = ck
        Mk += ck * np.eye(m)
    scale = float(np.max(np.abs(coeffs)))
    if np.max(np.abs(coeffs - from_roots)) > 1e-8 * max(1.0, scale):
        raise RootFindingFailure(
            "characteristic polynomial cross-check failed: trace recursion "
            "and eigenvalue product disagree"
        )
    return coeffs


def _reduction_candidate(coeffs):
    """Build q with q(1/x - x) * x**k = p(x) from the symmetrised low half.

    Uses T_0 = 2, T_1 = y and T_{m+1} = y*T_m + T_{m-1}, where T_m stands
    for x**-m + (-1)**m * x**m expressed in y.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    k = n // 2
    q = np.zeros(k + 1, dtype=complex)
    q[0] = c[k]
    t_prev = np.array([2.0 + 0j])
    t_cur = np.array([0.0, 1.0 + 0j])
    for m in range(1, k + 1):
        sym = (c[k - m] + (-1) ** m * c[k + m]) / 2.0
        q[: m + 1] += sym * t_cur
        t_next = np.concatenate(([0j], t_cur))
        t_next[: len(t_prev)] += t_prev
        t_prev, t_cur = t_cur, t_next
    return q


def _reduction_residual(coeffs, q):
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    k = n // 2
    xs = 1.3 * np.exp(1j * np.linspace(0.1, 2 * np.pi, 2 * k + 1))
    pv = polyval(c, xs)
    qv = polyval(q, 1.0 / xs - xs) * xs**k
    scale = float(np.sum(np.abs(c) * 1.3 ** np.arange(n + 1)))
    return float(np.max(np.abs(pv - qv))) / scale


def is_reciprocal(p, rel_tol: float = 1e-9) -> bool:
    """True when p admits the y = 1/x - x degree-halving substitution.

    Detected constructively: the candidate reduced polynomial is built from
    the low-order half of the coefficients and accepted when the identity
    q(1/x - x) * x**k = p(x) holds on sample points.  Equivalent to the
    coefficient pattern c[2k-j] = (-1)**(k+j) * c[j].
    """
    c = trim(p)
    n = len(c) - 1
    if n < 2 or n % 2 != 0:
        return False
    return _reduction_residual(c, _reduction_candidate(c)) <= rel_tol


def reduce_reciprocal(p) -> np.ndarray:
    """Degree-k polynomial q in y = 1/x - x with q(1/x - x) * x**k = p(x).

    Raises NotReciprocal when the identity fails on sample points (checked
    after construction, so near-reciprocal numerical inputs pass with their
    coefficient noise symmetrised away).
    """
    c = trim(p)
    n = len(c) - 1
    if n < 2 or n % 2 != 0:
        raise NotReciprocal("reduction needs an even degree >= 2")
    q = _reduction_candidate(c)
    if _reduction_residual(c, q) > 1e-9:
        raise NotReciprocal("polynomial does not satisfy the y-substitution pattern")
    return q


def lift_roots(yroots) -> np.ndarray:
    """Map each y to the two roots of x**2 + y*x - 1 = 0."""
    ys = np.asarray(yroots, dtype=complex)
    disc = np.sqrt(ys * ys + 4.0)
    return np.concatenate(((-ys + disc) / 2.0, (-ys - disc) / 2.0))


def multiset_match(avals, bvals, tol: float) -> bool:
    """Tolerance-based bijective matching between two complex multisets.

    Greedy nearest-pair matching first; on failure falls back to exact
    bipartite matching on the graph of pairs within tolerance, so clustered
    or permuted values compare correctly.
    """
    A = list(np.asarray(avals, dtype=complex))
    B = list(np.asarray(bvals, dtype=complex))
    if len(A) != len(B):
        return False
    n = len(A)
    if n == 0:
        return True
    used = [False] * n
    greedy_ok = True
    for a in A:
        best, bi = np.inf, -1
        for i, b in enumerate(B):
            if not used[i] and abs(a - b) < best:
                best, bi = abs(a - b), i
        if best > tol:
            greedy_ok = False
            break
        used[bi] = True
    if greedy_ok:
        return True

    adj = [[j for j in range(n) if abs(A[i] - B[j]) <= tol] for i in range(n)]
    match_of_b = [-1] * n

    def augment(i, visited):
        for j in adj[i]:
            if visited[j]:
                continue
            visited[j] = True
            if match_of_b[j] < 0 or augment(match_of_b[j], visited):
                match_of_b[j] = i
                return True
        return False

    return all(augment(i, [False] * n) for i in range(n))


class SpectrumMultiset:
    """Multiset of eigenvalues with tolerance-based equality."""

    def __init__(self, values):
        vals = np.asarray(values, dtype=complex).ravel()
        order = np.lexsort((vals.imag, vals.real))
        self.values = vals[order]

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        inner = ", ".join(f"{v:.6g}" for v in self.values)
        return f"SpectrumMultiset([{inner}])"

    def matches(self, other, tol: float = DEFAULT_TOL.tau_spec) -> bool:
        other_vals = other.values if isinstance(other, SpectrumMultiset) else other
        return multiset_match(self.values, other_vals, tol)

    def max_unimodularity_deviation(self) -> float:
        return float(np.max(np.abs(np.abs(self.values) - 1.0)))


def spectrum(M) -> SpectrumMultiset:
    """Eigenvalues of M/sqrt(m) as a tolerance-aware multiset."""
    A = as_matrix(M)
    m = A.shape[0]
    return SpectrumMultiset(np.linalg.eigvals(A / np.sqrt(m)))


def is_normal(M, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    A = as_matrix(M)
    H = A.conj().T
    scale = max(1.0, float(np.max(np.abs(A))) ** 2)
    return float(np.max(np.abs(A @ H - H @ A))) <= tol.tau_entry * A.shape[0] * scale


def unitary_equivalent(M1, M2, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Spectral equivalence of normal matrices: equal spectra of M/sqrt(m).

    Raises NotNormal for non-normal input, where equality of spectra does
    not decide similarity.
    """
    A1 = as_matrix(M1)
    A2 = as_matrix(M2)
    if A1.shape != A2.shape:
        raise InvalidDimensions("matrices must share an order")
    if not is_normal(A1, tol) or not is_normal(A2, tol):
        raise NotNormal("spectral equivalence needs normal matrices")
    return spectrum(A1).matches(spectrum(A2), tol.tau_spec)
