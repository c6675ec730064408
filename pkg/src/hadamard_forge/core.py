"""Core linear algebra for inverse-orthogonal and complex Hadamard matrices.

A matrix O with nonzero complex entries is inverse orthogonal when
O @ (1/O).T == n*I.  If on top of that every entry has modulus one, the
entrywise reciprocal transpose coincides with the conjugate transpose and O
is a complex Hadamard matrix.  Everything here works on plain numpy
complex128 arrays; all operations return fresh arrays and never mutate
their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np


class HadamardForgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(HadamardForgeError, ValueError):
    """A scalar argument is zero, non-finite or otherwise unusable."""


class InvalidDimensions(HadamardForgeError, ValueError):
    """Matrix shapes do not fit the requested operation."""


class SingularBranch(HadamardForgeError, ArithmeticError):
    """A closed-form solution branch hits a vanishing denominator."""


class DegenerateQuadratic(HadamardForgeError, ArithmeticError):
    """Leading coefficient of a quadratic solve vanished."""


class DegenerateCubic(HadamardForgeError, ArithmeticError):
    """Leading coefficient of a cubic solve vanished."""


class NotReciprocal(HadamardForgeError, ValueError):
    """Polynomial does not admit the degree-halving substitution."""


class NotNormal(HadamardForgeError, ValueError):
    """Matrix is not normal, so spectral equivalence does not apply."""


class RootFindingFailure(HadamardForgeError, ArithmeticError):
    """Polynomial root iteration did not reach the required residual."""


class NoConvergence(HadamardForgeError, ArithmeticError):
    """Numeric constraint search exhausted its iteration budget."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric tolerances: entrywise residuals, polynomial roots, spectra."""

    tau_entry: float = 1e-10
    tau_root: float = 1e-9
    tau_spec: float = 1e-8

    def __post_init__(self):
        if min(self.tau_entry, self.tau_root, self.tau_spec) <= 0:
            raise InvalidParameter("tolerances must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class ParamVector:
    """Ordered nonzero parameters of a matrix family, with torus flags."""

    family: str
    values: tuple
    on_torus: tuple = field(default=())

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(v == 0 or not np.isfinite(v) for v in vals):
            raise InvalidParameter("family parameters must be finite and nonzero")
        flags = self.on_torus or tuple(
            abs(abs(v) - 1.0) <= DEFAULT_TOL.tau_entry for v in vals
        )
        object.__setattr__(self, "on_torus", tuple(bool(f) for f in flags))


def as_matrix(M) -> np.ndarray:
    """Copy input to a square complex matrix, rejecting NaN/Inf entries."""
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidDimensions(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidParameter("matrix entries must be finite")
    return A


def _require_nonzero(A: np.ndarray):
    if np.any(A == 0):
        raise InvalidParameter("all entries must be nonzero")


def circulant(first_row) -> np.ndarray:
    """Circulant matrix whose row i is `first_row` right-shifted i times.

    circulant([a, b, c]) has rows (a, b, c), (c, a, b), (b, c, a).
    """
    row = np.asarray(first_row, dtype=complex)
    if row.ndim != 1 or len(row) < 1:
        raise InvalidDimensions("first_row must be a nonempty 1-d sequence")
    if np.any(row == 0) or not np.all(np.isfinite(row)):
        raise InvalidParameter("circulant entries must be finite and nonzero")
    k = len(row)
    idx = (np.arange(k)[None, :] - np.arange(k)[:, None]) % k
    return row[idx]


def negacirculant2(a, b) -> np.ndarray:
    """The 2x2 negacyclic block [[a, b], [-b, a]]."""
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise InvalidParameter("negacirculant entries must be nonzero")
    return np.array([[a, b], [-b, a]], dtype=complex)


def entrywise_inv_transpose(M) -> np.ndarray:
    """Entrywise reciprocal of the transpose: result[i, j] = 1 / M[j, i]."""
    A = as_matrix(M)
    _require_nonzero(A)
    return (1.0 / A).T.copy()


def assemble_sylvester(A, B) -> np.ndarray:
    """Stack blocks [[A, B], [1/B^t, -1/A^t]] into a 2n x 2n matrix."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise InvalidDimensions(f"block shapes differ: {A.shape} vs {B.shape}")
    _require_nonzero(A)
    _require_nonzero(B)
    return np.block(
        [[A, B], [entrywise_inv_transpose(B), -entrywise_inv_transpose(A)]]
    )


def orthogonality_residual(M) -> float:
    """Max-abs deviation of M @ (1/M)^t from m*I."""
    A = as_matrix(M)
    _require_nonzero(A)
    m = A.shape[0]
    return float(np.max(np.abs(A @ entrywise_inv_transpose(A) - m * np.eye(m))))


def unimodularity_deviation(M) -> float:
    """Max over entries of | |entry| - 1 |."""
    A = as_matrix(M)
    return float(np.max(np.abs(np.abs(A) - 1.0)))


def is_hadamard(M, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when all entries are unimodular and rows are mutually orthogonal.

    Never raises: zero entries or a bad shape simply return False.
    """
    try:
        A = as_matrix(M)
        if unimodularity_deviation(A) > tol.tau_entry:
            return False
        return orthogonality_residual(A) <= tol.tau_entry * A.shape[0]
    except HadamardForgeError:
        return False


def dephase(M) -> np.ndarray:
    """Equivalent matrix with first row and column scaled to exact ones.

    Rows are normalised by their first entry, then columns by the updated
    first row.  Diagonal scalings preserve inverse orthogonality, and for
    Hadamard inputs the scalings are phases, so the property is kept.
    Idempotent.
    """
    A = as_matrix(M)
    if np.any(A[:, 0] == 0) or np.any(A[0, :] == 0):
        raise InvalidParameter("dephasing needs nonzero first row and column")
    A = A / A[:, [0]]
    A = A / A[[0], :]
    A[:, 0] = 1.0
    A[0, :] = 1.0
    return A


def permutation_matrix(perm) -> np.ndarray:
    """Matrix P with P[i, perm[i]] = 1, so (P @ M)[i] = M[perm[i]]."""
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InvalidParameter(f"not a permutation of 0..{n - 1}: {perm}")
    P = np.zeros((n, n), dtype=complex)
    P[np.arange(n), perm] = 1.0
    return P


def check_equivalence_certificate(
    H1, H2, D1, D2, P1, P2, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Verify H1 == diag(D1) @ P1 @ H2 @ P2 @ diag(D2) within tau_entry.

    D1, D2 are sequences of unimodular phases.  P1, P2 are permutations,
    either as 0/1 matrices or as index sequences; index sequences select
    rows and columns of H2 directly, i.e. the transformed H2 has row i
    equal to H2[P1[i]] and column j equal to H2[:, P2[j]].
    """
    A1 = as_matrix(H1)
    A2 = as_matrix(H2)
    if A1.shape != A2.shape:
        raise InvalidDimensions("certificate matrices must share an order")
    d1 = np.asarray(D1, dtype=complex)
    d2 = np.asarray(D2, dtype=complex)
    if np.max(np.abs(np.abs(d1) - 1)) > tol.tau_entry or np.max(
        np.abs(np.abs(d2) - 1)
    ) > tol.tau_entry:
        raise InvalidParameter("certificate diagonals must be unimodular")
    P1 = np.asarray(P1)
    P2 = np.asarray(P2)
    if P1.ndim == 1:
        P1 = permutation_matrix(P1)
    if P2.ndim == 1:
        P2 = permutation_matrix(P2).T
    rhs = np.diag(d1) @ P1 @ A2 @ P2 @ np.diag(d2)
    return float(np.max(np.abs(A1 - rhs))) <= tol.tau_entry


def search_equivalence_certificate(H1, H2, tol: ToleranceConfig = DEFAULT_TOL):
    """Brute-force a certificate (D1, P1, P2, D2) with H1 = D1 P1 H2 P2 D2.

    Test oracle for small orders (factorial in n, usable up to n = 6).  The
    search anchors one row and one column of H2 onto position 0, dephases,
    and matches the remaining core under column permutations; dephasing
    absorbs both diagonals, so only permutations are enumerated.  Returns
    None when no certificate exists at the given tolerance.
    """
    A1 = as_matrix(H1)
    A2 = as_matrix(H2)
    if A1.shape != A2.shape:
        raise InvalidDimensions("matrices must share an order")
    n = A1.shape[0]
    digits = max(1, int(-np.log10(tol.tau_entry)) - 2)

    def rowkey(v):
        return tuple(np.round(v, digits) + 0.0)

    T1 = dephase(A1)
    target = {rowkey(T1[i, :]): i for i in range(1, n)}
    for r in range(n):
        rows0 = [r] + [x for x in range(n) if x != r]
        for c in range(n):
            cols0 = [c] + [x for x in range(n) if x != c]
            K = dephase(A2[np.ix_(rows0, cols0)])
            for corecols in permutations(range(1, n)):
                cols = [0] + list(corecols)
                Kp = K[:, cols]
                sigma = [0] * n
                seen = set()
                for i in range(1, n):
                    j = target.get(rowkey(Kp[i, :]))
                    if j is None or j in seen:
                        sigma = None
                        break
                    seen.add(j)
                    sigma[j] = i
                if sigma is None:
                    continue
                row_map = [rows0[sigma[i]] for i in range(n)]
                col_map = [cols0[cols[j]] for j in range(n)]
                K2 = A2[np.ix_(row_map, col_map)]
                D1 = A1[:, 0] / K2[:, 0]
                K3 = K2 * D1[:, None]
                D2 = A1[0, :] / K3[0, :]
                if (
                    np.max(np.abs(np.abs(D1) - 1)) <= tol.tau_entry
                    and np.max(np.abs(np.abs(D2) - 1)) <= tol.tau_entry
                    and check_equivalence_certificate(
                        A1, A2, D1, D2, row_map, col_map, tol
                    )
                ):
                    return D1, row_map, col_map, D2
    return None
