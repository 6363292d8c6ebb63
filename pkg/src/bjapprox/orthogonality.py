"""Birkhoff-James orthogonality tests for vectors, functionals and matrices.

A vector x is BJ-orthogonal to y when ||x + t y|| >= ||x|| for every real t.
In a smooth strictly convex space the same relation can be decided through
the semi-inner-product (for vectors), through the norm attainment point (for
functionals) and through a real numerical range reduction (for matrices
between Euclidean spaces).  Every decision below reports a signed relative
margin: zero or slightly negative at the boundary, clearly negative when the
relation fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    InvalidParameterError,
)
from .lp_core import (
    Functional,
    LpVector,
    lp_norm,
    norm_attainment_point,
    sip,
    symmetric_eigen,
)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class OrthogonalityVerdict:
    """Outcome of an orthogonality decision.

    ``witness`` is the point certifying the verdict when one exists (the
    norm attainment point for functionals, a unit vector of the attainment
    sphere for matrices).  ``margin`` is the signed relative slack of the
    decisive inequality: the verdict is orthogonal iff margin >= -tol.
    """

    is_orthogonal: bool
    witness: object | None
    margin: float


@dataclass(frozen=True)
class StrongOrthogonalityVerdict:
    """Outcome of a strong-orthogonality classification.

    ``classification`` is one of ``"strong"``, ``"orthogonal-not-strong"``
    and ``"not-orthogonal"``.  Strictness is certified on ``|t| >=
    certification_radius`` by convexity and checked explicitly at the
    radius itself.
    """

    classification: str
    certification_radius: float
    margin: float


def golden_section_min(fn, lo: float, hi: float, xtol: float, max_iter: int = 300):
    """Golden-section minimization of a unimodal function on [lo, hi].

    Returns (argmin, min value).  ``xtol`` is the absolute final bracket
    width.  Convex functions are unimodal, which is the only way this
    routine is used in the package.
    """
    a, b = float(lo), float(hi)
    if not b > a:
        raise InvalidParameterError("empty bracket for golden-section search")
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if h <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = fn(d)
    x = 0.5 * (a + b)
    fx = fn(x)
    if fc < fx:
        x, fx = c, fc
    if fd < fx:
        x, fx = d, fd
    return x, fx


def _check_pair(x: LpVector, y: LpVector):
    if x.exponent != y.exponent:
        raise DimensionMismatchError("vectors live in different lp spaces")
    if x.dim != y.dim:
        raise DimensionMismatchError("vectors have different dimensions")


def _min_norm_on_line(x: LpVector, y: LpVector):
    """Minimize t -> ||x + t y|| over the real line.

    The minimizer satisfies |t| <= 2 ||x|| / ||y||, because beyond that the
    reverse triangle inequality already pushes the norm above ||x||.
    """
    p = x.exponent.p
    xc, yc = x.coords, y.coords
    span = 2.0 * x.norm / y.norm + 1.0

    def phi(t):
        return lp_norm(xc + t * yc, p)

    lo, hi = -span, span
    xtol = 1e-12 * (1.0 + span)
    return golden_section_min(phi, lo, hi, xtol)


def bj_orthogonal_vectors(
    x: LpVector, y: LpVector, tol: float = DEFAULT_TOL
) -> OrthogonalityVerdict:
    """Decide x BJ-orthogonal y by minimizing ||x + t y|| over t.

    Orthogonal iff the minimum stays within tol * ||x|| of ||x||;
    margin = (min - ||x||) / ||x||, which is always <= 0.
    """
    _check_pair(x, y)
    nx = x.norm
    if nx == 0.0:
        raise DegenerateInputError("orthogonality is undefined for x = 0")
    if tol < 0.0:
        raise InvalidParameterError("tol must be nonnegative")
    if y.norm == 0.0:
        return OrthogonalityVerdict(True, None, 0.0)
    _, fmin = _min_norm_on_line(x, y)
    margin = (fmin - nx) / nx
    return OrthogonalityVerdict(margin >= -tol, None, margin)


def strong_bj_orthogonal(
    x: LpVector, y: LpVector, delta: float, tol: float = DEFAULT_TOL
) -> StrongOrthogonalityVerdict:
    """Classify the pair as strong / orthogonal-not-strong / not-orthogonal.

    Strong BJ orthogonality asks ||x + t y|| > ||x|| for every t != 0.  The
    certificate checks the strict inequality at t = +-delta; by convexity
    that extends it to all |t| >= delta, and together with the orthogonality
    verdict it certifies strictness at tolerance tol.
    """
    _check_pair(x, y)
    if delta <= 0.0:
        raise InvalidParameterError("delta must be positive")
    nx = x.norm
    if nx == 0.0:
        raise DegenerateInputError("orthogonality is undefined for x = 0")
    if y.norm == 0.0:
        # x + t*0 never exceeds ||x||, so the relation is never strong.
        return StrongOrthogonalityVerdict("orthogonal-not-strong", delta, 0.0)
    _, fmin = _min_norm_on_line(x, y)
    margin = (fmin - nx) / nx
    if margin < -tol:
        return StrongOrthogonalityVerdict("not-orthogonal", delta, margin)
    p = x.exponent.p
    up = lp_norm(x.coords + delta * y.coords, p)
    down = lp_norm(x.coords - delta * y.coords, p)
    if up > nx * (1.0 + tol) and down > nx * (1.0 + tol):
        return StrongOrthogonalityVerdict("strong", delta, margin)
    return StrongOrthogonalityVerdict("orthogonal-not-strong", delta, margin)


def semicone_membership(x: LpVector, y: LpVector, tol: float = DEFAULT_TOL):
    """Membership of y in the semicones x+ and x-.

    y is in x+ when ||x + t y|| >= ||x|| for all t >= 0, which for a smooth
    norm is the one-sided derivative condition [y, x] >= 0; symmetrically
    for x-.  Returns (in_plus, in_minus); both hold exactly when x is
    BJ-orthogonal to y.
    """
    _check_pair(x, y)
    nx = x.norm
    if nx == 0.0:
        raise DegenerateInputError("semicones are undefined for x = 0")
    slack = tol * nx * max(y.norm, 1e-300)
    value = sip(y, x)
    return value >= -slack, value <= slack


def bj_orthogonal_functionals(
    f: Functional, g: Functional, tol: float = DEFAULT_TOL
) -> OrthogonalityVerdict:
    """Decide f BJ-orthogonal g in the dual space through norm attainment.

    f attains its norm at the single pair +-x of sphere points; f is
    orthogonal to g exactly when g vanishes there.  The witness is the
    attainment point, margin = -|g(x)| / ||g||.
    """
    if f.domain_exponent != g.domain_exponent:
        raise DimensionMismatchError("functionals act on different spaces")
    if f.dim != g.dim:
        raise DimensionMismatchError("functionals have different dimensions")
    if f.norm == 0.0 or g.norm == 0.0:
        raise DegenerateInputError("orthogonality of a zero functional is undefined")
    xhat = norm_attainment_point(f)
    margin = -abs(g(xhat)) / g.norm
    return OrthogonalityVerdict(margin >= -tol, xhat, margin)


def _top_eigenspace(matrix: np.ndarray, rel_tol: float = 1e-9):
    """Orthonormal basis of the eigenspace of the largest eigenvalue."""
    values, vectors = symmetric_eigen(matrix)
    top = values[0]
    keep = values >= top - rel_tol * max(abs(top), 1e-300)
    return top, vectors[:, keep]


def _interval_witness(mu: np.ndarray, u: np.ndarray) -> np.ndarray:
    """A unit c with c' diag-form c = 0 given eigenpairs spanning zero.

    ``mu`` descending; assumes mu[0] >= 0 >= mu[-1] (approximately).  Mixes
    the extreme eigenvectors so the quadratic form vanishes.
    """
    hi, lo = mu[0], mu[-1]
    if hi <= 0.0:
        return u[:, 0]
    if lo >= 0.0:
        return u[:, -1]
    t = math.atan(math.sqrt(hi / -lo))
    return math.cos(t) * u[:, 0] + math.sin(t) * u[:, -1]


def bj_orthogonal_matrices_hilbert(
    t_mat, a_mat, tol: float = DEFAULT_TOL
) -> OrthogonalityVerdict:
    """Decide T BJ-orthogonal A for matrices between Euclidean spaces.

    T is orthogonal to A iff some norm-attaining unit x of T has
    <Tx, Ax> = 0.  Over the top eigenspace V of T'T the values <Tx, Ax>
    fill the real interval [mu_min, mu_max] of the symmetric part of the
    compression of T'A to V, so the test is whether that interval contains
    zero.  The witness is a unit vector of V realizing a zero of the form.
    """
    t = np.asarray(t_mat, dtype=float)
    a = np.asarray(a_mat, dtype=float)
    if t.ndim != 2 or t.shape != a.shape:
        raise DimensionMismatchError(
            f"matrices must share one shape, got {t.shape} and {a.shape}"
        )
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(a))):
        raise DegenerateInputError("matrix contains non-finite entries")
    norm_t_sq, v = _top_eigenspace(t.T @ t)
    if norm_t_sq <= 0.0:
        raise DegenerateInputError("orthogonality is undefined for T = 0")
    scale = math.sqrt(norm_t_sq) * float(np.linalg.norm(a))
    if scale == 0.0:
        # A = 0 is orthogonal to everything; any attaining x witnesses it.
        return OrthogonalityVerdict(True, v[:, 0], 0.0)
    compression = v.T @ (t.T @ a) @ v
    sym = 0.5 * (compression + compression.T)
    mu, u = symmetric_eigen(sym)
    margin = min(mu[0], -mu[-1]) / scale
    witness = v @ _interval_witness(mu, u)
    witness = witness / float(np.linalg.norm(witness))
    return OrthogonalityVerdict(margin >= -tol, witness, margin)
