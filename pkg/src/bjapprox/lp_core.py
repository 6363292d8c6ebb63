"""Vectors, functionals and linear algebra for finite-dimensional lp spaces.

Conventions used throughout the package:

* An ``Exponent`` is a Holder conjugate pair ``(p, q)`` with
  ``1/p + 1/q = 1`` and ``1 < p < inf``.
* An ``LpVector`` is tagged with the exponent pair of its own space, so a
  vector of ``lp^n`` has ``v.exponent.p == p``.
* A ``Functional`` stores the exponent pair of the space it acts on.  A
  functional on ``lq^n`` therefore has ``f.domain_exponent.p == q`` and its
  operator norm is the ``lp`` norm of its coefficient vector, i.e. the norm
  taken with ``f.domain_exponent.q``.

All heavy numerics are plain numpy; the only eigen solver used anywhere is
the cyclic Jacobi iteration implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    InvalidExponentError,
    PreconditionError,
    RankDeficiencyError,
)

# Relative singular value cutoff used for every rank decision in the package.
RANK_TOL = 1e-10

# The Jacobi eigen solver is meant for desk-scale symmetric matrices only.
MAX_EIGEN_DIM = 16


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatchError(f"{name} must be a nonempty 1-d real array")
    if not np.all(np.isfinite(arr)):
        raise DegenerateInputError(f"{name} contains non-finite entries")
    return arr


def _validate_p(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise InvalidExponentError(f"exponent must satisfy 1 < p < inf, got {p!r}")
    return p


@dataclass(frozen=True)
class Exponent:
    """A Holder conjugate pair (p, q) with 1/p + 1/q = 1."""

    p: float
    q: float

    def __post_init__(self):
        _validate_p(self.p)
        _validate_p(self.q)
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-12:
            raise InvalidExponentError(
                f"({self.p}, {self.q}) is not a conjugate pair"
            )

    @property
    def conjugate(self) -> "Exponent":
        """The same pair seen from the dual space."""
        return Exponent(self.q, self.p)


def conjugate_exponent(p: float) -> Exponent:
    """Build the conjugate pair (p, q) with q = p / (p - 1)."""
    p = _validate_p(p)
    return Exponent(p, p / (p - 1.0))


def lp_norm(coords, p: float) -> float:
    """The lp norm (sum |c_i|^p)^(1/p), scaled to avoid overflow."""
    p = _validate_p(p)
    arr = _as_float_vector(coords, "coords")
    peak = float(np.max(np.abs(arr)))
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum((np.abs(arr) / peak) ** p)) ** (1.0 / p)


@dataclass(frozen=True)
class LpVector:
    """A vector of lp^n tagged with the exponent pair of its own space."""

    coords: np.ndarray
    exponent: Exponent

    def __post_init__(self):
        arr = _as_float_vector(self.coords, "coords")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def dim(self) -> int:
        return self.coords.size

    @property
    def norm(self) -> float:
        return lp_norm(self.coords, self.exponent.p)

    def scaled(self, factor: float) -> "LpVector":
        return LpVector(self.coords * float(factor), self.exponent)


@dataclass(frozen=True)
class Functional:
    """A linear functional x -> sum a_i x_i on lq^n.

    ``domain_exponent`` is the exponent pair of the domain space, so the
    functional norm is the norm of ``coeffs`` taken with the conjugate
    exponent ``domain_exponent.q``.
    """

    coeffs: np.ndarray
    domain_exponent: Exponent

    def __post_init__(self):
        arr = _as_float_vector(self.coeffs, "coeffs")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    @property
    def norm(self) -> float:
        return lp_norm(self.coeffs, self.domain_exponent.q)

    def __call__(self, x) -> float:
        if isinstance(x, LpVector):
            if x.exponent != self.domain_exponent:
                raise DimensionMismatchError(
                    "functional applied to a vector from a different space"
                )
            x = x.coords
        x = _as_float_vector(x, "x")
        if x.size != self.coeffs.size:
            raise DimensionMismatchError(
                f"functional of dim {self.coeffs.size} applied to dim {x.size}"
            )
        return float(self.coeffs @ x)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n spanned by the columns of ``basis``."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionMismatchError(
                f"basis must be {self.ambient_dim} x k, got shape {basis.shape}"
            )
        if not np.all(np.isfinite(basis)):
            raise DegenerateInputError("basis contains non-finite entries")
        if basis.shape[1] > self.ambient_dim:
            raise RankDeficiencyError("more basis vectors than ambient dimension")
        if basis.shape[1] > 0:
            s = np.linalg.svd(basis, compute_uv=False)
            if s[-1] <= RANK_TOL * s[0]:
                raise RankDeficiencyError("basis columns are not independent")
        basis = basis.copy()
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


def sip(x: LpVector, y: LpVector) -> float:
    """Semi-inner-product [x, y] compatible with the lp norm.

    [x, y] = ||y||^(2-p) * sum_i x_i sgn(y_i) |y_i|^(p-1), evaluated in the
    overflow-safe form ||y|| * sum_i x_i sgn(y_i) (|y_i|/||y||)^(p-1).
    Linear in x, conjugate-homogeneous in y, and [x, x] = ||x||^2.
    """
    if x.exponent != y.exponent:
        raise DimensionMismatchError("sip operands live in different spaces")
    if x.dim != y.dim:
        raise DimensionMismatchError("sip operands have different dimensions")
    p = x.exponent.p
    ny = y.norm
    if ny == 0.0:
        return 0.0
    unit = np.abs(y.coords) / ny
    return ny * float(np.sum(x.coords * np.sign(y.coords) * unit ** (p - 1.0)))


def duality_map(h: LpVector) -> Functional:
    """The norm-one support functional of a nonzero h in lq^n.

    J(h)_i = sgn(h_i) |h_i|^(q-1) / ||h||^(q-1) where q is the exponent of
    h's own space; J(h)(h) = ||h|| and the functional norm of J(h) is 1.
    """
    q = h.exponent.p
    nh = h.norm
    if nh == 0.0:
        raise DegenerateInputError("duality map is undefined at the zero vector")
    coeffs = np.sign(h.coords) * (np.abs(h.coords) / nh) ** (q - 1.0)
    return Functional(coeffs, h.exponent)


def norm_attainment_point(f: Functional) -> LpVector:
    """The unit vector where a nonzero functional attains its norm.

    For f with coefficients a on lq^n the point is
    x_i = sgn(a_i) |a_i|^(p-1) / ||a||_p^(p-1) with p conjugate to q; it is
    the unique unit vector with f(x) = ||f||, and f attains |f| = ||f||
    nowhere on the sphere except at +-x.
    """
    a = f.coeffs
    p = f.domain_exponent.q
    na = f.norm
    if na == 0.0:
        raise DegenerateInputError("zero functional attains no norm")
    coords = np.sign(a) * (np.abs(a) / na) ** (p - 1.0)
    return LpVector(coords, f.domain_exponent)


def _power_newton(target, basis, p, alpha, eps=1e-12, max_rounds=120):
    """Damped Newton for min_alpha || target - basis @ alpha ||_p.

    Works on the eps-smoothed power sum sum_i rho_i^p whose Hessian
    B' D B is positive definite for p > 1, so the iteration is reliable
    even where the norm gradient is barely Holder continuous (p near 1)
    and first-order methods crawl.  Returns (alpha, trail, rounds) with
    ``trail`` the accepted objective values converted back to norm units.
    """
    basis = np.asarray(basis, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    s0 = 1.0 + float(np.max(np.abs(target - basis @ alpha)))
    eps_u = eps / s0

    def parts(a):
        u = (target - basis @ a) / s0
        rho2 = u * u + eps_u * eps_u
        return u, rho2, float(np.sum(rho2 ** (0.5 * p)))

    u, rho2, phi = parts(alpha)
    trail = []
    rounds = 0
    for _ in range(max_rounds):
        w = rho2 ** (0.5 * p - 1.0) * u
        grad = -(p / s0) * (basis.T @ w)
        if float(np.linalg.norm(grad)) <= 1e-15 * (1.0 + phi):
            break
        diag = rho2 ** (0.5 * p - 2.0) * ((p - 1.0) * u * u + eps_u * eps_u)
        hess = (p / (s0 * s0)) * (basis.T @ (diag[:, None] * basis))
        step, *_ = np.linalg.lstsq(hess, -grad, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        tau = 1.0
        accepted = False
        for _ in range(40):
            cand = alpha + tau * step
            cu, crho2, cphi = parts(cand)
            if cphi < phi:
                accepted = True
                break
            tau *= 0.5
        if not accepted:
            break
        rounds += 1
        gain = phi - cphi
        alpha, u, rho2, phi = cand, cu, crho2, cphi
        trail.append(s0 * phi ** (1.0 / p))
        if gain <= 1e-18 * (1.0 + phi):
            break
    return alpha, trail, rounds


def _nullspace(rows: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace of a row-stacked matrix."""
    if rows.size == 0:
        return np.eye(ambient_dim)
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > RANK_TOL * (s[0] if s.size else 0.0)))
    return vt[rank:].T.copy()


def nullspace_intersection(functionals, ambient_dim: int) -> Subspace:
    """Intersection of the kernels of the given functionals as a Subspace.

    The returned basis is orthonormal in the Euclidean sense.  An empty
    family yields the whole space.
    """
    ambient_dim = int(ambient_dim)
    if ambient_dim <= 0:
        raise DimensionMismatchError("ambient dimension must be positive")
    rows = []
    for f in functionals:
        if f.dim != ambient_dim:
            raise DimensionMismatchError(
                f"functional of dim {f.dim} in ambient dimension {ambient_dim}"
            )
        rows.append(f.coeffs)
    stacked = np.array(rows, dtype=float) if rows else np.empty((0, ambient_dim))
    return Subspace(ambient_dim, _nullspace(stacked, ambient_dim))


def symmetric_eigen(matrix, *, off_tol: float = 1e-14, max_sweeps: int = 100):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending
    and orthonormal eigenvectors in the columns.  Sweeps run until the
    off-diagonal Frobenius mass drops below ``off_tol`` times the Frobenius
    norm of the input.  Dimension is capped at MAX_EIGEN_DIM; symmetry is
    required up to 1e-12 relative.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    n = m.shape[0]
    if n > MAX_EIGEN_DIM:
        raise CapacityError(f"eigen solver supports dimension <= {MAX_EIGEN_DIM}")
    if not np.all(np.isfinite(m)):
        raise DegenerateInputError("matrix contains non-finite entries")
    scale = float(np.linalg.norm(m))
    if scale == 0.0:
        return np.zeros(n), np.eye(n)
    if float(np.linalg.norm(m - m.T)) > 1e-12 * scale:
        raise PreconditionError("matrix is not symmetric within tolerance")

    a = 0.5 * (m + m.T)
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(a * a)) - float(np.sum(np.diag(a) ** 2))))
        if off <= off_tol * scale:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                if abs(a[i, j]) <= 1e-300:
                    continue
                tau = (a[j, j] - a[i, i]) / (2.0 * a[i, j])
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot_i = c * a[:, i] - s * a[:, j]
                rot_j = s * a[:, i] + c * a[:, j]
                a[:, i], a[:, j] = rot_i, rot_j
                rot_i = c * a[i, :] - s * a[j, :]
                rot_j = s * a[i, :] + c * a[j, :]
                a[i, :], a[j, :] = rot_i, rot_j
                a[i, j] = a[j, i] = 0.0
                rot_i = c * v[:, i] - s * v[:, j]
                rot_j = s * v[:, i] + c * v[:, j]
                v[:, i], v[:, j] = rot_i, rot_j

    values = np.diag(a).copy()
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = v[:, order]
    for k in range(n):
        lead = int(np.argmax(np.abs(vectors[:, k])))
        if vectors[lead, k] < 0.0:
            vectors[:, k] = -vectors[:, k]
    return values, vectors
