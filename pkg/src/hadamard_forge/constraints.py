"""Orthogonality constraints for the block-circulant families.

The order-4 construction carries a single factorised constraint, order 6
carries two coupled quadratics whose pair-elimination leaves one reduced
condition, and order 8 carries three constraints that only admit a numeric
treatment once two of them have been used up.  Solvers return
SolutionBranch records so callers can keep track of which sheet of the
square or cube root they are on; every branch substitutes back to a
residual at rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    DegenerateCubic,
    DegenerateQuadratic,
    InvalidParameter,
    ParamVector,
    SingularBranch,
    ToleranceConfig,
)
from .spectra import poly_roots

PARAM_NAMES_4 = "abcd"
PARAM_NAMES_6 = "abcdef"
PARAM_NAMES_8 = "abcdefgh"


@dataclass(frozen=True)
class ConstraintResidual:
    """Values of the orthogonality constraint polynomials at one point."""

    order: int
    values: tuple

    def __post_init__(self):
        expected = {4: 1, 6: 2, 8: 3}.get(self.order)
        if expected is None or len(self.values) != expected:
            raise InvalidParameter(
                f"order {self.order} carries {expected} constraint(s), "
                f"got {len(self.values)}"
            )

    def max_abs(self) -> float:
        return float(max(abs(v) for v in self.values))


@dataclass(frozen=True)
class SolutionBranch:
    """One closed-form or numeric root of a constraint, labelled by sheet."""

    solved_param: str
    branch_label: str
    value: complex
    discriminant: complex = 0j


def _check_nonzero(**params):
    for name, value in params.items():
        v = complex(value)
        if v == 0 or not np.isfinite(v):
            raise InvalidParameter(f"parameter {name!r} must be finite and nonzero")


def _quadratic_branches(name, lead, lin, const, degenerate_exc=DegenerateQuadratic):
    if lead == 0:
        raise degenerate_exc(f"quadratic in {name!r} has vanishing leading coefficient")
    disc = lin * lin - 4.0 * lead * const
    root = np.sqrt(complex(disc))
    return (
        SolutionBranch(name, "+", (-lin + root) / (2.0 * lead), disc),
        SolutionBranch(name, "-", (-lin - root) / (2.0 * lead), disc),
    )


# ----------------------------------------------------------------- order 4

def c4_residual(a, b, c, d) -> complex:
    """The factorised order-4 constraint (b*c + a*d) * (a*c - b*d)."""
    _check_nonzero(a=a, b=b, c=c, d=d)
    return (b * c + a * d) * (a * c - b * d)


def c4_branches(unknown: str, **given) -> list[SolutionBranch]:
    """Both closed-form branches for one unknown of the order-4 constraint.

    The "+" branch kills the factor a*c - b*d, the "-" branch kills
    b*c + a*d; e.g. solving for a gives a = b*d/c and a = -b*c/d.
    """
    if unknown not in PARAM_NAMES_4:
        raise InvalidParameter(f"unknown must be one of {PARAM_NAMES_4!r}")
    names = [n for n in PARAM_NAMES_4 if n != unknown]
    if sorted(given) != names:
        raise InvalidParameter(f"expected values for {names}, got {sorted(given)}")
    _check_nonzero(**given)
    g = {k: complex(v) for k, v in given.items()}
    prod = {
        "a": lambda: g["b"] * g["d"] / g["c"],
        "b": lambda: g["a"] * g["c"] / g["d"],
        "c": lambda: g["b"] * g["d"] / g["a"],
        "d": lambda: g["a"] * g["c"] / g["b"],
    }
    neg = {
        "a": lambda: -g["b"] * g["c"] / g["d"],
        "b": lambda: -g["a"] * g["d"] / g["c"],
        "c": lambda: -g["a"] * g["d"] / g["b"],
        "d": lambda: -g["b"] * g["c"] / g["a"],
    }
    return [
        SolutionBranch(unknown, "+", prod[unknown]()),
        SolutionBranch(unknown, "-", neg[unknown]()),
    ]


# ----------------------------------------------------------------- order 6

def c6_residuals(a, b, c, d, e, f) -> ConstraintResidual:
    """The two order-6 constraint polynomial values."""
    _check_nonzero(a=a, b=b, c=c, d=d, e=e, f=f)
    first = (
        a * b * c * d**2 * e
        + a**2 * b * d * e * f
        + b**2 * c * d * e * f
        + a * c**2 * d * e * f
        + a * b * c * e**2 * f
        + a * b * c * d * f**2
    )
    second = (
        a * b * c * d * e**2
        + a * b * c * d**2 * f
        + a * b**2 * d * e * f
        + a**2 * c * d * e * f
        + b * c**2 * d * e * f
        + a * b * c * e * f**2
    )
    return ConstraintResidual(6, (first, second))


def c6_solve_f(a, b, c, d, e):
    """Both roots of the first order-6 constraint seen as a quadratic in f."""
    _check_nonzero(a=a, b=b, c=c, d=d, e=e)
    lead = a * b * c * d
    lin = e * (a**2 * b * d + b**2 * c * d + a * c**2 * d + a * b * c * e)
    const = a * b * c * d**2 * e
    return _quadratic_branches("f", lead, lin, const)


def c6_reduced_residual(a, b, c, d, e) -> complex:
    """The single reduced condition left after eliminating f from the pair."""
    _check_nonzero(a=a, b=b, c=c, d=d, e=e)
    return (
        -a * b * c * d**3
        - a * b**2 * d**2 * e
        - a**2 * c * d**2 * e
        - b * c**2 * d**2 * e
        + a**2 * b * d * e**2
        + b**2 * c * d * e**2
        + a * c**2 * d * e**2
        + a * b * c * e**3
    )


_C6_QUAD_PARTNERS = {"a": ("b", "c"), "b": ("c", "a"), "c": ("a", "b")}


def c6_solve_quadratic(unknown: str, **given):
    """Both roots of the reduced condition in one of its quadratic unknowns.

    The reduced condition is quadratic in a, b and c.  For unknown u with
    cyclic partners (p, q) it reads
        d*e*(p*e - q*d) * u**2 - (q*d + p*e)*(p*d**2 - q*e**2) * u
        + p*q*d*e*(p*e - q*d) = 0,
    a singular parametrisation exactly when p*e = q*d.
    """
    if unknown not in _C6_QUAD_PARTNERS:
        raise InvalidParameter("quadratic unknowns are 'a', 'b' and 'c'")
    names = sorted(set("abcde") - {unknown})
    if sorted(given) != names:
        raise InvalidParameter(f"expected values for {names}, got {sorted(given)}")
    _check_nonzero(**given)
    g = {k: complex(v) for k, v in given.items()}
    p, q = (g[x] for x in _C6_QUAD_PARTNERS[unknown])
    d, e = g["d"], g["e"]
    if abs(p * e - q * d) <= DEFAULT_TOL.tau_entry * max(abs(p * e), abs(q * d), 1.0):
        raise SingularBranch(
            f"coordinate singularity for {unknown!r}: partner relation "
            "p*e = q*d makes the quadratic collapse"
        )
    lead = d * e * (p * e - q * d)
    lin = -(q * d + p * e) * (p * d**2 - q * e**2)
    const = p * q * d * e * (p * e - q * d)
    return _quadratic_branches(unknown, lead, lin, const)


def c6_solve_cubic(unknown: str, tol: ToleranceConfig = DEFAULT_TOL, **given):
    """All three roots of the reduced condition in d or e, numerically."""
    if unknown not in ("d", "e"):
        raise InvalidParameter("cubic unknowns are 'd' and 'e'")
    names = sorted(set("abcde") - {unknown})
    if sorted(given) != names:
        raise InvalidParameter(f"expected values for {names}, got {sorted(given)}")
    _check_nonzero(**given)
    g = {k: complex(v) for k, v in given.items()}
    a, b, c = g["a"], g["b"], g["c"]
    sym_sq = a * b**2 + a**2 * c + b * c**2
    sym_lin = a**2 * b + b**2 * c + a * c**2
    if unknown == "d":
        e = g["e"]
        coeffs = [a * b * c * e**3, e**2 * sym_lin, -e * sym_sq, -a * b * c]
    else:
        d = g["d"]
        coeffs = [-a * b * c * d**3, -(d**2) * sym_sq, d * sym_lin, a * b * c]
    if abs(coeffs[-1]) <= tol.tau_entry:
        raise DegenerateCubic(f"cubic in {unknown!r} has a vanishing leading term")
    roots = poly_roots(np.asarray(coeffs, dtype=complex), tol)
    return [
        SolutionBranch(unknown, str(i + 1), complex(r))
        for i, r in enumerate(sorted(roots, key=lambda z: (z.real, z.imag)))
    ]


def hu_residual(b, c, d, e) -> complex:
    """Factorised specialisation surface (b*e + c*d) * (b*d**2 - c*e**2).

    Either factor vanishing collapses the reduced condition and yields the
    three-parameter subfamilies.
    """
    _check_nonzero(b=b, c=c, d=d, e=e)
    return (b * e + c * d) * (b * d**2 - c * e**2)


# ----------------------------------------------------------------- order 8

def c8_residuals(a, b, c, d, e, f, g, h) -> ConstraintResidual:
    """The three order-8 constraint polynomial values."""
    _check_nonzero(a=a, b=b, c=c, d=d, e=e, f=f, g=g, h=h)
    r1 = (
        a * b * c * d * e**2 * f * g
        + a**2 * b * c * e * f * g * h
        + b**2 * c * d * e * f * g * h
        + a * c**2 * d * e * f * g * h
        + a * b * d**2 * e * f * g * h
        + a * b * c * d * f**2 * g * h
        + a * b * c * d * e * g**2 * h
        + a * b * c * d * e * f * h**2
    )
    r2 = (
        a * b * c * d * e * f**2 * g
        + a * b * c * d * e**2 * f * h
        + a * b**2 * c * e * f * g * h
        + a**2 * b * d * e * f * g * h
        + b * c**2 * d * e * f * g * h
        + a * c * d**2 * e * f * g * h
        + a * b * c * d * f * g**2 * h
        + a * b * c * d * e * g * h**2
    )
    r3 = (
        a * b * c * d * e * f * g**2
        + a * b * c * d * e * f**2 * h
        + a * b * c * d * e**2 * g * h
        + a * b * c**2 * e * f * g * h
        + a * b**2 * d * e * f * g * h
        + a**2 * c * d * e * f * g * h
        + b * c * d**2 * e * f * g * h
        + a * b * c * d * f * g * h**2
    )
    return ConstraintResidual(8, (r1, r2, r3))


def c8_solve_h(a, b, c, d, e, f, g):
    """Both roots of the first order-8 constraint as a quadratic in h."""
    _check_nonzero(a=a, b=b, c=c, d=d, e=e, f=f, g=g)
    lead = a * b * c * d * e * f
    lin = (
        e * f * g * (a**2 * b * c + b**2 * c * d + a * c**2 * d + a * b * d**2)
        + a * b * c * d * f**2 * g
        + a * b * c * d * e * g**2
    )
    const = a * b * c * d * e**2 * f * g
    return _quadratic_branches("h", lead, lin, const)


def c8_reduced_residual(a, b, c, d, e, f, g) -> complex:
    """Square-root-free condition left by feeding both h-roots onward.

    On the torus the product of the third constraint evaluated at the two
    h-branches has modulus equal to |this value| squared, so its vanishing
    locus matches the pair substitution.
    """
    _check_nonzero(a=a, b=b, c=c, d=d, e=e, f=f, g=g)
    t1 = (
        a**2 * b * c * e * f
        + b**2 * c * d * e * f
        + a * c**2 * d * e * f
        + a * b * d**2 * e * f
        + a * b * c * d * f**2
        + a * b * c * d * e * g
    ) * g**2
    t2 = (
        a * b * c * d * f**2
        + a * b * c * d * e * g
        + a * b * c**2 * f * g
        + a * b**2 * d * f * g
        + a**2 * c * d * f * g
        + b * c * d**2 * f * g
    ) * e**2
    return t1 - t2


@dataclass(frozen=True)
class NumericSolveReport:
    """Outcome of the order-8 numeric search: solutions plus diagnostics."""

    solutions: tuple
    restarts: int
    converged: int
    rejected_degenerate: int
    no_convergence: int

    def __bool__(self):
        return bool(self.solutions)


def c8_numeric_solve(
    fixed: dict,
    seed: int = 0,
    restarts: int = 64,
    max_iter: int = 200,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> NumericSolveReport:
    """Damped-Newton search for the free order-8 parameters.

    `fixed` maps at least five of the names 'a'..'h' to unimodular values;
    the remaining parameters are solved so all three constraints vanish.
    Each restart draws its start point from an independent substream of
    `seed`, so results are reproducible and independent of scheduling.
    Solutions converging onto a zero coordinate parametrise degenerate
    matrices and are discarded.  An empty solution list with a positive
    no_convergence count is the infeasibility diagnostic, not an error.
    """
    if not set(fixed) <= set(PARAM_NAMES_8):
        raise InvalidParameter(f"fixed keys must be among {PARAM_NAMES_8!r}")
    if len(fixed) < 5:
        raise InvalidParameter("at least five parameters must be fixed")
    fixed_vals = {k: complex(v) for k, v in fixed.items()}
    _check_nonzero(**fixed_vals)
    for name, v in fixed_vals.items():
        if abs(abs(v) - 1.0) > tol.tau_entry:
            raise InvalidParameter(f"fixed parameter {name!r} must lie on the torus")
    free = [n for n in PARAM_NAMES_8 if n not in fixed_vals]

    def residuals(x):
        params = dict(fixed_vals)
        params.update(zip(free, x))
        return np.array(c8_residuals(**params).values)

    def scale(x):
        # each constraint is the cyclic ratio sum times the product of all
        # eight parameters, so convergence is judged against that product
        return 8.0 * float(np.prod(np.abs(x))) + 1e-300

    solutions = []
    converged = degenerate = failed = 0
    for k in range(restarts):
        rng = np.random.default_rng([int(seed), k])
        x = np.exp(2j * np.pi * rng.random(len(free)))
        ok = False
        for _ in range(max_iter):
            r = residuals(x)
            if np.max(np.abs(r)) < tol.tau_entry * scale(x):
                ok = True
                break
            jac = np.zeros((3, len(free)), dtype=complex)
            step = 1e-7
            for j in range(len(free)):
                xp = x.copy()
                xp[j] += step
                jac[:, j] = (residuals(xp) - r) / step
            try:
                delta, *_ = np.linalg.lstsq(jac, -r, rcond=None)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            base = np.max(np.abs(r))
            while lam > 1e-4:
                cand = x + lam * delta
                if np.min(np.abs(cand)) > 1e-8 and np.max(
                    np.abs(residuals(cand))
                ) < base:
                    break
                lam /= 2.0
            x = x + lam * delta
            if np.max(np.abs(x)) > 1e8 or np.min(np.abs(x)) < 1e-10:
                break
        if not ok:
            failed += 1
            continue
        if np.min(np.abs(x)) < 1e-3:
            degenerate += 1
            continue
        converged += 1
        full = dict(fixed_vals)
        full.update(zip(free, (complex(v) for v in x)))
        vec = ParamVector("M8", tuple(full[n] for n in PARAM_NAMES_8))
        if not any(
            np.max(np.abs(np.array(vec.values) - np.array(s.values))) < 1e-7
            for s in solutions
        ):
            solutions.append(vec)
    return NumericSolveReport(
        tuple(solutions), restarts, converged, degenerate, failed
    )
