"""Named matrix families: parametric constructors and numeric landmarks.

Order 4 comes from a pair of negacyclic 2x2 blocks, orders 6 and 8 from
pairs of circulant blocks, and orders 8, 12, 16, 24, ... from the doubling
of two smaller Hadamard matrices.  Constructors whose parameters satisfy
the constraints on the torus return genuine complex Hadamard matrices; the
numeric landmark matrices (d6, d61, d81, a6, b6, ...) are stored as
literal constants so tests pin down exact entry patterns.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    InvalidDimensions,
    InvalidParameter,
    SingularBranch,
    ToleranceConfig,
    assemble_sylvester,
    circulant,
    dephase,
    is_hadamard,
    negacirculant2,
)
from .constraints import c6_solve_f, c6_solve_quadratic, c8_solve_h
from .spectra import SpectrumMultiset

_I = 1j
_SQ2 = np.sqrt(2.0)


# ----------------------------------------------------------------- order 4

def m4(a, b, c, d) -> np.ndarray:
    """Raw order-4 block form from negacyclic blocks (a, b) and (c, d)."""
    return assemble_sylvester(negacirculant2(a, b), negacirculant2(c, d))


def h4(b, c, d) -> np.ndarray:
    """Three-phase order-4 family with a = b*d/c; Hadamard on the torus."""
    b, c, d = complex(b), complex(c), complex(d)
    if 0 in (b, c, d):
        raise InvalidParameter("h4 parameters must be nonzero")
    return m4(b * d / c, b, c, d)


def h4a(q) -> np.ndarray:
    """Dephased one-phase order-4 family."""
    q = complex(q)
    if q == 0:
        raise InvalidParameter("q must be a nonzero phase")
    return np.array(
        [[1, 1, 1, 1], [1, -q, q, -1], [1, -1, -1, 1], [1, q, -q, -1]],
        dtype=complex,
    )


def h4a_spectrum_closed(q) -> SpectrumMultiset:
    """Closed-form spectrum of h4a(q)/2: {-1, 1, -(1+q±sqrt(1-14q+q²))/4}."""
    q = complex(q)
    root = np.sqrt(1.0 - 14.0 * q + q * q + 0j)
    return SpectrumMultiset(
        [-1.0, 1.0, -(1.0 + q + root) / 4.0, -(1.0 + q - root) / 4.0]
    )


def h42(a, b) -> np.ndarray:
    """Two-parameter order-4 variant, realised with d = 1 and c = b/a."""
    a, b = complex(a), complex(b)
    if 0 in (a, b):
        raise InvalidParameter("h42 parameters must be nonzero")
    return m4(a, b, b / a, 1.0)


def h43(a, c, d) -> np.ndarray:
    """Order-4 variant on the branch b = a*c/d."""
    a, c, d = complex(a), complex(c), complex(d)
    if 0 in (a, c, d):
        raise InvalidParameter("h43 parameters must be nonzero")
    return m4(a, a * c / d, c, d)


def h44(b, c, d) -> np.ndarray:
    """Order-4 variant on the branch a = -b*c/d."""
    b, c, d = complex(b), complex(c), complex(d)
    if 0 in (b, c, d):
        raise InvalidParameter("h44 parameters must be nonzero")
    return m4(-b * c / d, b, c, d)


def h45(a, c, d) -> np.ndarray:
    """Order-4 variant on the branch b = -a*d/c."""
    a, c, d = complex(a), complex(c), complex(d)
    if 0 in (a, c, d):
        raise InvalidParameter("h45 parameters must be nonzero")
    return m4(a, -a * d / c, c, d)


# ----------------------------------------------------------------- order 6

def bf(d) -> np.ndarray:
    """Circulant order-6 matrix with first row (1, i/d, -1/d, -i, -d, i*d)."""
    d = complex(d)
    if d == 0:
        raise InvalidParameter("d must be nonzero")
    return circulant([1.0, _I / d, -1.0 / d, -_I, -d, _I * d])


def bf_quartic_roots() -> tuple:
    """The four roots of d**4 - 2*d**3 - 2*d + 1 = 0, closed forms.

    The first two are complex conjugates on the unit circle and feed the
    Hadamard matrix; the last two are real and give merely orthogonal
    matrices.
    """
    r = _SQ2 * 3.0**0.25
    s3 = np.sqrt(3.0)
    return (
        (1.0 + _I * r - s3) / 2.0,
        (1.0 - _I * r - s3) / 2.0,
        (1.0 + r + s3) / 2.0,
        (1.0 - r + s3) / 2.0,
    )


def bf_dephased(d) -> np.ndarray:
    """Dephased form of bf(d), written out in powers of d."""
    d = complex(d)
    if d == 0:
        raise InvalidParameter("d must be nonzero")
    return np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, -1, -1 / d, -1 / d**2, 1 / d**2, 1 / d],
            [1, -d, 1, 1 / d**2, -1 / d**3, 1 / d**2],
            [1, -(d**2), d**2, -1, 1 / d**2, -1 / d**2],
            [1, d**2, -(d**3), d**2, 1, -1 / d],
            [1, d, d**2, -(d**2), -d, -1],
        ],
        dtype=complex,
    )


def d6() -> np.ndarray:
    """Self-adjoint dephased order-6 Hadamard with entries in {±1, ±i}."""
    return np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, -1, _I, _I, -_I, -_I],
            [1, -_I, -1, 1, -1, _I],
            [1, -_I, 1, -1, _I, -1],
            [1, _I, -1, -_I, 1, -1],
            [1, _I, -_I, -1, -1, 1],
        ],
        dtype=complex,
    )


def d61() -> np.ndarray:
    """Row/column-shuffled companion of d6: equivalent but not self-adjoint."""
    return np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, _I, -_I],
            [1, 1, -1, _I, -1, -_I],
            [1, -_I, -1, -1, 1, _I],
            [1, -1, -_I, 1, -1, _I],
            [1, _I, _I, -_I, -_I, -1],
        ],
        dtype=complex,
    )


def m6(a, b, c, d, e, f) -> np.ndarray:
    """Raw order-6 block form from circulant blocks (a,b,c) and (d,e,f)."""
    return assemble_sylvester(circulant([a, b, c]), circulant([d, e, f]))


def m6_standard(a, b, c, d, e, f) -> np.ndarray:
    """Dephased order-6 form, written as the printed ratio pattern.

    Coincides entrywise with dephase(m6(a..f)) for the row-first dephasing
    convention used throughout.
    """
    vals = [complex(v) for v in (a, b, c, d, e, f)]
    if any(v == 0 for v in vals):
        raise InvalidParameter("all six parameters must be nonzero")
    a, b, c, d, e, f = vals
    return np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, a*a/(b*c), a*b/(c*c), a*f/(c*d), a*d/(c*e), a*e/(c*f)],
            [1, a*c/(b*b), a*a/(b*c), a*e/(b*d), a*f/(b*e), a*d/(b*f)],
            [1, a*d/(b*f), a*d/(c*e), -1, -a*d/(c*e), -a*d/(b*f)],
            [1, a*e/(b*d), a*e/(c*f), -a*e/(b*d), -1, -a*e/(c*f)],
            [1, a*f/(b*e), a*f/(c*d), -a*f/(c*d), -a*f/(b*e), -1],
        ],
        dtype=complex,
    )


def m6_from_branches(b, c, d, e, a_branch="+", f_branch="+", standard=False):
    """Four-parameter family point: a from the reduced quadratic, then f.

    Returns (matrix, a_value, f_value).  The matrix is Hadamard exactly
    when the solved a and f land on the torus, which happens on a large
    region of torus (b, c, d, e) but not everywhere.
    """
    branches_a = {br.branch_label: br for br in c6_solve_quadratic("a", b=b, c=c, d=d, e=e)}
    a = branches_a[a_branch].value
    branches_f = {br.branch_label: br for br in c6_solve_f(a, b, c, d, e)}
    f = branches_f[f_branch].value
    build = m6_standard if standard else m6
    return build(a, b, c, d, e, f), a, f


def _d6_family(c, d, e, sign):
    c, d, e = complex(c), complex(d), complex(e)
    if 0 in (c, d, e):
        raise InvalidParameter("family parameters must be nonzero")
    r1 = np.sqrt(c**4 * d**5 * e + 0j)
    r2 = np.sqrt(-(c**6) * d**6 / e**2 + 0j)
    if r1 == 0 or r2 == 0:
        raise SingularBranch("nested radical vanished; family undefined here")
    b = -c * d / e
    for flip in (1.0, -1.0):
        a = -sign * flip * r1 / (c * d * d * e)
        f = sign * flip * e * e * r2 / (c * r1)
        M = m6(a, b, c, d, e, f)
        if is_hadamard(M):
            return M
    # phases off the torus never verify; return the principal-branch matrix
    return m6(
        -sign * r1 / (c * d * d * e), b, c, d, e, sign * e * e * r2 / (c * r1)
    )


def d61_family(c, d, e) -> np.ndarray:
    """Three-parameter Hadamard family on the branch b = -c*d/e, first sheet.

    Nested radicals are taken with the principal square root; if the
    assembled matrix fails verification the radical sign is flipped, which
    keeps the family total on the torus away from its singular loci.
    """
    return _d6_family(c, d, e, +1)


def d62_family(c, d, e) -> np.ndarray:
    """Companion sheet of d61_family: both radical signs reversed."""
    return _d6_family(c, d, e, -1)


# ------------------------------------------------------------ order 8 & up

def m8(a, b, c, d, e, f, g, h) -> np.ndarray:
    """Raw order-8 block form from circulant blocks (a..d) and (e..h)."""
    return assemble_sylvester(circulant([a, b, c, d]), circulant([e, f, g, h]))


def m8_from_h_branch(a, b, c, d, e, f, g, h_branch="+"):
    """Order-8 matrix with h solved from the first constraint."""
    branches = {br.branch_label: br for br in c8_solve_h(a, b, c, d, e, f, g)}
    h = branches[h_branch].value
    return m8(a, b, c, d, e, f, g, h), h


def double(A, B, diag=None, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Order-doubling [[A, D@B], [A, -D@B]] of two equal-order Hadamards.

    D is a diagonal of phases (defaults to the identity).  The output is
    Hadamard of twice the order whenever the inputs are Hadamard, so the
    construction iterates to orders 2^k * n.
    """
    A = np.array(A, dtype=complex)
    B = np.array(B, dtype=complex)
    if A.shape != B.shape:
        raise InvalidDimensions("doubling needs equal-order blocks")
    if not is_hadamard(A, tol) or not is_hadamard(B, tol):
        raise InvalidParameter("doubling inputs must be Hadamard matrices")
    n = A.shape[0]
    if diag is None:
        DB = B
    else:
        d = np.asarray(diag, dtype=complex)
        if d.shape != (n,):
            raise InvalidDimensions(f"diagonal must have length {n}")
        if np.max(np.abs(np.abs(d) - 1.0)) > tol.tau_entry:
            raise InvalidParameter("diagonal entries must be phases")
        DB = d[:, None] * B
    return np.block([[A, DB], [A, -DB]])


def d8a(b, c, d, f, g, h) -> np.ndarray:
    """Six-phase order-8 family: doubling of two order-4 family members.

    The left block is h4(b, c, d); the right block is the order-4 variant
    with first row (f, g, h, f*h/g).
    """
    f, g, h = complex(f), complex(g), complex(h)
    if 0 in (f, g, h):
        raise InvalidParameter("d8a parameters must be nonzero")
    right = m4(f, g, h, f * h / g)
    return double(h4(b, c, d), right)


def d81() -> np.ndarray:
    """Landmark numeric order-8 Hadamard, stored as literal constants.

    Equals d8a(1, i, -i, exp(i*pi/4), exp(-i*pi/4), -1) entrywise.
    """
    s = (1 + _I) / _SQ2
    t = (1 - _I) / _SQ2
    return np.array(
        [
            [-1, 1, _I, -_I, s, t, -1, -_I],
            [-1, -1, _I, _I, -t, s, _I, -1],
            [-_I, -_I, 1, 1, -1, -_I, -t, s],
            [_I, -_I, -1, 1, _I, -1, -s, -t],
            [-1, 1, _I, -_I, -s, -t, 1, _I],
            [-1, -1, _I, _I, t, -s, -_I, 1],
            [-_I, -_I, 1, 1, 1, _I, t, -s],
            [_I, -_I, -1, 1, -_I, 1, s, t],
        ],
        dtype=complex,
    )


def a6() -> np.ndarray:
    """First order-6 numeric block used in the order-12 doubling example."""
    return m6(-(1 - _I) / _SQ2, 1.0, _I, -_I, -1.0, (1 - _I) / _SQ2)


def b6() -> np.ndarray:
    """Second order-6 numeric block used in the order-12 doubling example."""
    root = np.sqrt(1 + _I)
    q = 2.0**0.25
    return m6(1.0, (1 + _I) / _SQ2, _I * root / q, q / root, (1 - _I) / _SQ2, -1.0)


FAMILY_BUILDERS = {
    "m4": (m4, 4),
    "h4": (h4, 3),
    "h4a": (h4a, 1),
    "h42": (h42, 2),
    "h43": (h43, 3),
    "h44": (h44, 3),
    "h45": (h45, 3),
    "bf": (bf, 1),
    "bf-dephased": (bf_dephased, 1),
    "d6": (d6, 0),
    "d61": (d61, 0),
    "m6": (m6, 6),
    "m6s": (m6_standard, 6),
    "d61f": (d61_family, 3),
    "d62f": (d62_family, 3),
    "m8": (m8, 8),
    "d8a": (d8a, 6),
    "d81": (d81, 0),
    "a6": (a6, 0),
    "b6": (b6, 0),
}
