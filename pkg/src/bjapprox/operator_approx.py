"""Best approximation and orthogonality for matrices at desk scale.

Operators are real m x n matrices with the domain carrying either the
Euclidean or the sup norm and the codomain always Euclidean.  The central
results implemented here:

* 1-D best approximation min_t ||T - t A|| by golden-section on an
  expanding bracket (the map is convex);
* the multiplier condition <Tx, Ax> = t0 ||Ax||^2 on norm-attaining x,
  which characterizes the optimal multiplier;
* the duality formula dist(T, span A) = max |<Tx, y>| over unit x, y with
  y orthogonal to Ax, evaluated with the inner maximum in closed form
  (the component of Tx orthogonal to Ax);
* the same formula for sup-norm domains by exhaustive face search, valid
  when the attainment set of the residual is an antipodal pair +-D with D
  connected (a warning is emitted otherwise);
* a sampled certificate for approximation out of a multi-dimensional span.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    InternalInconsistencyError,
    InvalidParameterError,
    PreconditionError,
    RankDeficiencyError,
)
from .lp_core import RANK_TOL, Subspace, symmetric_eigen
from .orthogonality import (
    OrthogonalityVerdict,
    bj_orthogonal_matrices_hilbert,
    golden_section_min,
)

MAX_SUP_DIM = 20
ATTAINMENT_REL = 1e-9


@dataclass(frozen=True)
class MatrixOperator:
    """A real matrix operator with named domain and codomain norms."""

    matrix: np.ndarray
    domain_norm: str = "euclidean"
    codomain_norm: str = "euclidean"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise DimensionMismatchError("operator matrix must be 2-d and nonempty")
        if not np.all(np.isfinite(m)):
            raise DegenerateInputError("operator matrix has non-finite entries")
        if self.domain_norm not in ("euclidean", "sup"):
            raise InvalidParameterError(f"unknown domain norm {self.domain_norm!r}")
        if self.codomain_norm != "euclidean":
            raise InvalidParameterError("only Euclidean codomains are supported")
        if self.domain_norm == "sup" and m.shape[1] > MAX_SUP_DIM:
            raise CapacityError(f"sup-norm domain limited to {MAX_SUP_DIM} columns")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def apply(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)


@dataclass(frozen=True)
class NormAttainmentSet:
    """Description of the unit vectors where an operator attains its norm.

    Euclidean domains attain on the unit sphere of the top eigenspace of
    M'M (``kind = "subspace-sphere"``).  Sup-norm domains attain at sign
    vectors; ``patterns`` lists every maximizing pattern including
    antipodes.  ``plus_minus_connected`` says whether the set is +-D for a
    connected D, decided for patterns by joining maximizers that share a
    cube face whose connecting segment also attains.
    """

    kind: str
    subspace: Subspace | None
    patterns: tuple[tuple[float, ...], ...] | None
    plus_minus_connected: bool


def _check_same_space(t_op: MatrixOperator, a_op: MatrixOperator):
    if t_op.matrix.shape != a_op.matrix.shape:
        raise DimensionMismatchError("operators must share one shape")
    if (t_op.domain_norm, t_op.codomain_norm) != (a_op.domain_norm, a_op.codomain_norm):
        raise DimensionMismatchError("operators must share domain and codomain norms")


def _sign_patterns(n: int) -> np.ndarray:
    """All sign vectors with first coordinate +1, as columns (n x 2^(n-1))."""
    tails = list(itertools.product((1.0, -1.0), repeat=n - 1))
    cols = [np.array((1.0,) + t) for t in tails]
    return np.stack(cols, axis=1)


def _euclidean_norm_sq(matrix: np.ndarray) -> float:
    values, _ = symmetric_eigen(matrix.T @ matrix)
    return max(float(values[0]), 0.0)


def _sup_pattern_values(matrix: np.ndarray):
    patterns = _sign_patterns(matrix.shape[1])
    images = matrix @ patterns
    values = np.sqrt(np.sum(images * images, axis=0))
    return patterns, values


def _op_norm(matrix: np.ndarray, domain: str) -> float:
    if domain == "euclidean":
        return math.sqrt(_euclidean_norm_sq(matrix))
    _, values = _sup_pattern_values(matrix)
    return float(np.max(values))


def operator_norm(op: MatrixOperator) -> float:
    """Operator norm for the declared domain/codomain norm pair.

    Euclidean domains give the spectral norm sqrt(lambda_max(M'M)); for a
    sup-norm domain the convex maximum over the cube is attained at a
    vertex, so the norm is the maximum of ||M s||_2 over sign vectors s.
    """
    return _op_norm(op.matrix, op.domain_norm)


def _pattern_graph_connected(patterns: list[np.ndarray], matrix: np.ndarray,
                             norm_value: float) -> bool:
    """Check the +-D (D connected) shape of a finite attainment pattern set."""
    k = len(patterns)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for i in range(k):
        for j in range(i + 1, k):
            si, sj = patterns[i], patterns[j]
            if not np.any(si == sj):
                continue  # no common face, segment leaves the sphere
            mid = 0.5 * (si + sj)
            if float(np.linalg.norm(matrix @ mid)) >= norm_value * (1.0 - ATTAINMENT_REL):
                union(i, j)
    roots = {find(i) for i in range(k)}
    if len(roots) == 1:
        return True
    if len(roots) == 2:
        comp = {}
        for i in range(k):
            comp.setdefault(find(i), []).append(tuple(patterns[i]))
        first, second = comp.values()
        mirrored = {tuple(-np.array(p)) for p in first}
        return mirrored == set(second)
    return False


def norm_attainment_set(op: MatrixOperator) -> NormAttainmentSet:
    """The set of unit vectors attaining the operator norm.

    Eigenvalues within 1e-9 relative of the top eigenvalue count as part of
    the attaining eigenspace; sup-norm patterns within 1e-9 relative of the
    maximum count as maximizers.
    """
    m = op.matrix
    if op.domain_norm == "euclidean":
        values, vectors = symmetric_eigen(m.T @ m)
        top = float(values[0])
        if top <= 0.0:
            basis = np.eye(m.shape[1])
        else:
            keep = values >= top * (1.0 - ATTAINMENT_REL)
            basis = vectors[:, keep]
        return NormAttainmentSet("subspace-sphere", Subspace(m.shape[1], basis), None, True)

    patterns, values = _sup_pattern_values(m)
    vmax = float(np.max(values))
    if vmax <= 0.0:
        keep = list(range(patterns.shape[1]))
    else:
        keep = [j for j in range(patterns.shape[1]) if values[j] >= vmax * (1.0 - ATTAINMENT_REL)]
    canon = [patterns[:, j] for j in keep]
    full = canon + [-s for s in canon]
    connected = _pattern_graph_connected(full, m, vmax) if vmax > 0.0 else True
    return NormAttainmentSet(
        "sign-patterns", None, tuple(tuple(float(v) for v in s) for s in full), connected
    )


def best_approx_operator_1d(t_op: MatrixOperator, a_op: MatrixOperator):
    """Minimize t -> ||T - t A||, returning (t0, distance).

    The map is convex and exceeds ||T|| outside |t| <= 2 ||T|| / ||A||, so a
    golden-section search on an expanding bracket finds the minimum.  A
    collinear T returns the exact multiplier with distance zero.
    """
    _check_same_space(t_op, a_op)
    t, a = t_op.matrix, a_op.matrix
    domain = t_op.domain_norm
    norm_t = _op_norm(t, domain)
    norm_a = _op_norm(a, domain)
    if norm_a == 0.0:
        return 0.0, norm_t
    vec_t, vec_a = t.ravel(), a.ravel()
    lam_hat = float(vec_t @ vec_a) / float(vec_a @ vec_a)
    if float(np.linalg.norm(vec_t - lam_hat * vec_a)) <= 1e-12 * max(
        float(np.linalg.norm(vec_t)), 1e-300
    ):
        return lam_hat, 0.0

    if domain == "sup":
        patterns = _sign_patterns(t.shape[1])
        t_img = t @ patterns
        a_img = a @ patterns

        def phi(lam):
            diff = t_img - lam * a_img
            return float(np.max(np.sqrt(np.sum(diff * diff, axis=0))))

    else:

        def phi(lam):
            return math.sqrt(_euclidean_norm_sq(t - lam * a))

    span = 2.0 * norm_t / norm_a + 1.0
    for _ in range(60):
        if phi(span) > norm_t and phi(-span) > norm_t:
            break
        span *= 2.0
    lam0, dist = golden_section_min(phi, -span, span, 1e-12 * (1.0 + span))
    lam0, dist = _polish_multiplier(t, a, domain, lam0, dist, phi, span)
    return lam0, dist


def _phi_subgradient(t: np.ndarray, a: np.ndarray, domain: str, lam: float) -> float:
    """One subderivative of lam -> ||T - lam A|| at a norm-attaining point."""
    diff = t - lam * a
    if domain == "sup":
        patterns = _sign_patterns(t.shape[1])
        images = diff @ patterns
        norms = np.sqrt(np.sum(images * images, axis=0))
        j = int(np.argmax(norms))
        if norms[j] == 0.0:
            return 0.0
        return -float(images[:, j] @ (a @ patterns[:, j])) / float(norms[j])
    values, vectors = symmetric_eigen(diff.T @ diff)
    v = vectors[:, 0]
    image = diff @ v
    nv = float(np.linalg.norm(image))
    if nv == 0.0:
        return 0.0
    return -float(image @ (a @ v)) / nv


def _polish_multiplier(t, a, domain, lam0, dist, phi, span):
    """Sharpen the golden-section multiplier by bisecting the subgradient.

    Comparison search alone locates a smooth minimum only to about sqrt(eps)
    relative error; the convex objective's subgradient changes sign at the
    minimizer, so a short bisection recovers it to machine precision.
    """
    if _phi_subgradient(t, a, domain, lam0) == 0.0:
        return lam0, dist
    h = 1e-9 * (1.0 + abs(lam0))
    lo = hi = lam0
    bracketed = False
    for _ in range(60):
        lo, hi = lam0 - h, lam0 + h
        if _phi_subgradient(t, a, domain, lo) < 0.0 < _phi_subgradient(
            t, a, domain, hi
        ):
            bracketed = True
            break
        h *= 4.0
        if h > span:
            break
    if not bracketed:
        return lam0, dist
    for _ in range(200):
        if hi - lo <= 1e-15 * (1.0 + abs(lam0)):
            break
        mid = 0.5 * (lo + hi)
        if _phi_subgradient(t, a, domain, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    value = phi(lam)
    # Near a flat minimum the improvement is below float resolution, so the
    # polished value may read one ulp above the incumbent; accept it anyway.
    if value <= dist * (1.0 + 1e-12):
        return lam, value
    return lam0, dist


def hilbert_lambda_condition(
    t_op: MatrixOperator, a_op: MatrixOperator, lambda0: float, tol: float = 1e-8
) -> OrthogonalityVerdict:
    """Check the optimal-multiplier condition for Euclidean operators.

    lambda0 minimizes t -> ||T - t A|| exactly when some norm-attaining
    unit x of T - lambda0 A satisfies <Tx, Ax> = lambda0 ||Ax||^2, which is
    Birkhoff-James orthogonality of the residual to A; the verdict carries
    the witnessing x.
    """
    _check_same_space(t_op, a_op)
    if t_op.domain_norm != "euclidean":
        raise InvalidParameterError("the multiplier condition needs Euclidean norms")
    residual = t_op.matrix - float(lambda0) * a_op.matrix
    return bj_orthogonal_matrices_hilbert(residual, a_op.matrix, tol)


def _deflected_value(ttt, ata, tam, x, guard):
    """Squared norm of the component of Tx orthogonal to Ax (unit x)."""
    s = float(x @ (ttt @ x))
    r = float(x @ (ata @ x))
    if r <= guard:
        return s
    w = float(x @ (tam @ x))
    return max(s - w * w / r, 0.0)


def _deflected_grad(ttt, ata, tam, tam_sym, x, guard):
    s_grad = 2.0 * (ttt @ x)
    r = float(x @ (ata @ x))
    if r <= guard:
        grad = s_grad
    else:
        w = float(x @ (tam @ x))
        w_grad = tam_sym @ x
        r_grad = 2.0 * (ata @ x)
        grad = s_grad - (2.0 * w * r * w_grad - w * w * r_grad) / (r * r)
    return grad - float(grad @ x) * x


def _sphere_ascend(value, grad, x0, max_iter=4000, gtol=1e-11, vtol=1e-14):
    x = np.asarray(x0, dtype=float)
    x = x / float(np.linalg.norm(x))
    val = value(x)
    step = 0.25
    stagnant = 0
    for _ in range(max_iter):
        g = grad(x)
        gn = float(np.linalg.norm(g))
        if gn <= gtol * (1.0 + abs(val)):
            break
        direction = g / gn
        s = step
        best_s, best_val = 0.0, val
        shrink = 0
        while shrink < 60:
            cand = x + s * direction
            cand = cand / float(np.linalg.norm(cand))
            cval = value(cand)
            if cval > best_val + 1e-4 * s * gn:
                best_s, best_val = s, cval
                s *= 2.0
                if s > 1e6:
                    break
            elif best_s > 0.0:
                break
            else:
                s *= 0.5
                shrink += 1
                if s < 1e-18:
                    break
        if best_s == 0.0:
            break
        x = x + best_s * direction
        x = x / float(np.linalg.norm(x))
        new_val = value(x)
        if new_val - val <= vtol * (1.0 + abs(new_val)):
            stagnant += 1
        else:
            stagnant = 0
        val = new_val
        step = best_s
        if stagnant >= 8:
            break
    return val, x


def _max_deflected_euclidean(t: np.ndarray, a: np.ndarray, seed: int, restarts: int) -> float:
    """max over unit x of ||component of Tx orthogonal to Ax|| (Euclidean).

    Points with Ax = 0 leave y unconstrained, so the objective there is
    ||Tx||; the supremum over that branch is the norm of T restricted to
    the nullspace of A and is computed exactly as a spectral problem.
    """
    n = t.shape[1]
    ttt = t.T @ t
    ata = a.T @ a
    tam = t.T @ a
    tam_sym = tam + tam.T
    guard = max(float(np.trace(ata)), 1e-300) * 1e-24

    best = 0.0
    a_values, a_vectors = symmetric_eigen(ata)
    null_mask = a_values <= max(a_values[0], 0.0) * 1e-24
    if np.any(null_mask):
        null_basis = a_vectors[:, null_mask]
        comp = null_basis.T @ ttt @ null_basis
        comp_values, _ = symmetric_eigen(comp)
        best = max(best, float(comp_values[0]))

    def value(x):
        return _deflected_value(ttt, ata, tam, x, guard)

    def grad(x):
        return _deflected_grad(ttt, ata, tam, tam_sym, x, guard)

    rng = np.random.default_rng(seed)
    t_values, t_vectors = symmetric_eigen(ttt)
    starts = [t_vectors[:, j] for j in range(n)]
    starts.extend(_residual_singular_starts(t, a))
    for _ in range(restarts):
        cand = rng.standard_normal(n)
        while float(np.linalg.norm(cand)) == 0.0:
            cand = rng.standard_normal(n)
        starts.append(cand)
    for x0 in starts:
        val, _ = _sphere_ascend(value, grad, x0)
        best = max(best, val)
    return math.sqrt(max(best, 0.0))


def _residual_singular_starts(t: np.ndarray, a: np.ndarray) -> list[np.ndarray]:
    """Ascent starts at the attainment vectors of near-optimal residuals.

    The constrained maximum is attained at a norm-attaining vector of
    T - lam0 A, so the leading right singular vectors of residuals near the
    minimizing multiplier are the natural seeds.  The multiplier map is
    convex, which makes the golden-section locate reliable; any inaccuracy
    only weakens a seed, never the returned value.
    """
    norm_a = _op_norm(a, "euclidean")
    if norm_a == 0.0:
        return []
    norm_t = _op_norm(t, "euclidean")
    span = 2.0 * norm_t / norm_a + 1.0

    def g(lam):
        return math.sqrt(_euclidean_norm_sq(t - lam * a))

    lam_hat, _ = golden_section_min(g, -span, span, 1e-10 * (1.0 + span))
    starts: list[np.ndarray] = []
    for lam in (lam_hat, lam_hat - 1e-6 * span, lam_hat + 1e-6 * span):
        _, _, vt = np.linalg.svd(t - lam * a)
        starts.append(vt[0])
        if vt.shape[0] > 1:
            starts.append(vt[1])
    return starts


def dist_formula_hilbert(
    t_op: MatrixOperator, a_op: MatrixOperator, seed: int = 42, restarts: int = 8
) -> float:
    """dist(T, span A) for Euclidean operators via the duality formula.

    Evaluates max over unit x of the inner maximum max{|<Tx, y>| : y unit,
    y orthogonal to Ax}, whose closed form is the norm of the component of
    Tx orthogonal to Ax.  The outer maximization uses multi-start projected
    gradient ascent on the sphere (seeded) plus the eigenvectors of T'T.
    """
    _check_same_space(t_op, a_op)
    if t_op.domain_norm != "euclidean":
        raise InvalidParameterError("this formula requires Euclidean norms")
    return _max_deflected_euclidean(t_op.matrix, a_op.matrix, seed, restarts)


def _face_objective(t: np.ndarray, a: np.ndarray):
    guard = (1e-12 * max(float(np.linalg.norm(a)), 1e-300)) ** 2

    def h(x):
        tx = t @ x
        v = a @ x
        nv2 = float(v @ v)
        s = float(tx @ tx)
        if nv2 <= guard:
            return math.sqrt(max(s, 0.0))
        w = float(tx @ v)
        return math.sqrt(max(s - w * w / nv2, 0.0))

    return h


def _refine_1d(fn, t_best, step):
    lo, hi = max(t_best - step, -1.0), min(t_best + step, 1.0)
    if hi - lo <= 0.0:
        return fn(t_best)
    arg, neg = golden_section_min(lambda t: -fn(t), lo, hi, 1e-12)
    return max(-neg, fn(t_best))


def _refine_2d(fn, u0, v0, step):
    u, v, best = u0, v0, fn(np.array([u0, v0]))
    radius = step
    for _ in range(60):
        improved = False
        for du, dv in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            uu = min(max(u + du * radius, -1.0), 1.0)
            vv = min(max(v + dv * radius, -1.0), 1.0)
            val = fn(np.array([uu, vv]))
            if val > best:
                u, v, best = uu, vv, val
                improved = True
        if not improved:
            radius *= 0.5
            if radius < 1e-13:
                break
    return best


def dist_formula_smooth_codomain(
    t_op: MatrixOperator, a_op: MatrixOperator, resolution: int = 1000
) -> float:
    """The duality distance formula for sup-norm domains (n <= 3).

    Maximizes the closed-form inner value over the faces of the unit cube
    by dense grids with local refinement; the objective is even, so one
    representative of each face pair suffices.  The formula is justified
    when the attainment set of the optimal residual is an antipodal pair
    +-D with D connected; otherwise a RuntimeWarning is emitted and the
    value may disagree with the true distance.
    """
    _check_same_space(t_op, a_op)
    if t_op.domain_norm != "sup":
        raise InvalidParameterError("this formula requires a sup-norm domain")
    t, a = t_op.matrix, a_op.matrix
    n = t.shape[1]
    if n > 3:
        raise CapacityError("face search supports at most 3 columns")
    if resolution < 8:
        raise InvalidParameterError("resolution is too small")
    h = _face_objective(t, a)

    best = 0.0
    if n == 1:
        best = h(np.array([1.0]))
    elif n == 2:
        grid = np.linspace(-1.0, 1.0, resolution + 1)
        for face in range(2):

            def on_face(s, face=face):
                x = np.empty(2)
                x[face] = 1.0
                x[1 - face] = s
                return h(x)

            values = [on_face(s) for s in grid]
            j = int(np.argmax(values))
            best = max(best, _refine_1d(on_face, float(grid[j]), float(grid[1] - grid[0])))
    else:
        side = max(int(math.ceil(math.sqrt(resolution))), 8)
        grid = np.linspace(-1.0, 1.0, side + 1)
        free_pairs = [(1, 2), (0, 2), (0, 1)]
        for face in range(3):
            fu, fv = free_pairs[face]

            def on_face(uv, face=face, fu=fu, fv=fv):
                x = np.empty(3)
                x[face] = 1.0
                x[fu], x[fv] = uv[0], uv[1]
                return h(x)

            face_best, face_u, face_v = -1.0, 0.0, 0.0
            for u in grid:
                for v in grid:
                    val = on_face(np.array([u, v]))
                    if val > face_best:
                        face_best, face_u, face_v = val, float(u), float(v)
            best = max(
                best, _refine_2d(on_face, face_u, face_v, float(grid[1] - grid[0]))
            )

    lam0, _ = best_approx_operator_1d(t_op, a_op)
    residual = MatrixOperator(t.copy() - lam0 * a, "sup", "euclidean")
    attainment = norm_attainment_set(residual)
    if not attainment.plus_minus_connected:
        warnings.warn(
            "attainment set of the optimal residual is not an antipodal "
            "connected pair; the duality distance formula may not apply",
            RuntimeWarning,
            stacklevel=2,
        )
    return best


def lemma_norm_eval(
    t_op: MatrixOperator, a_op: MatrixOperator, seed: int = 42, tol: float = 1e-6
) -> float:
    """Evaluate ||T|| as a constrained maximum, given T orthogonal to A.

    Checks the precondition min_t ||T - t A|| = ||T|| (within 1e-9
    relative), evaluates max{|<Tx, y>| : y orthogonal to Ax} with the
    machinery of the distance formulas, and raises if the result strays
    from ||T|| by more than tol relative.
    """
    _check_same_space(t_op, a_op)
    norm_t = operator_norm(t_op)
    if norm_t == 0.0:
        raise DegenerateInputError("the zero operator has a trivial norm")
    _, dist = best_approx_operator_1d(t_op, a_op)
    if dist < norm_t * (1.0 - 1e-9):
        raise PreconditionError("T is not Birkhoff-James orthogonal to A")
    if t_op.domain_norm == "euclidean":
        value = _max_deflected_euclidean(t_op.matrix, a_op.matrix, seed, 8)
    else:
        attainment = norm_attainment_set(t_op)
        if not attainment.plus_minus_connected:
            raise PreconditionError(
                "attainment set of T is not an antipodal connected pair"
            )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            value = dist_formula_smooth_codomain(t_op, a_op)
    if abs(value - norm_t) > tol * norm_t:
        raise InternalInconsistencyError(
            f"constrained maximum {value:.12g} disagrees with ||T|| = {norm_t:.12g}"
        )
    return value


@dataclass(frozen=True)
class NdimCertificateReport:
    """Outcome of the sampled certificate for multi-dimensional spans.

    ``holds`` is True when every conclusive sample passed, False when some
    sample violated the inequality chain, and None when a gamma search was
    inconclusive without any outright failure.
    """

    holds: bool | None
    checked: int
    failures: int
    inconclusive: int
    degenerate: bool
    worst_violation: float


def _gamma_for_tiny_eigenspace(svals: np.ndarray) -> np.ndarray | None:
    """Unit gamma with sum gamma_i s_i = 0 for scalar compressions."""
    k = svals.size
    norm = float(np.linalg.norm(svals))
    if norm == 0.0:
        out = np.zeros(k)
        out[0] = 1.0
        return out
    if k == 1:
        return None
    _, _, vt = np.linalg.svd(svals.reshape(1, -1))
    return vt[-1]


def _gamma_search(s_mats, rng, tol_abs: float, restarts: int = 32):
    """Find unit gamma whose compression interval contains zero.

    The compression of the residual against sum gamma_i A_i on the top
    eigenspace is linear in gamma; the search minimizes the squared
    distance of zero from the eigenvalue interval.  One-dimensional
    eigenspaces reduce to a linear equation solved in closed form.
    """
    k = len(s_mats)
    d = s_mats[0].shape[0]
    stack = np.stack(s_mats)

    if d == 1:
        gamma = _gamma_for_tiny_eigenspace(stack[:, 0, 0])
        if gamma is not None and _interval_gap(stack, gamma) <= tol_abs:
            return gamma
        if gamma is not None:
            return None

    def gap(gamma):
        return _interval_gap(stack, gamma)

    best_gamma, best_gap = None, math.inf
    for trial in range(restarts):
        gamma = rng.standard_normal(k)
        gamma /= float(np.linalg.norm(gamma))
        step = 0.5
        cur = gap(gamma)
        for _ in range(300):
            if cur <= tol_abs:
                break
            moved = False
            for i in range(k):
                for sgn in (1.0, -1.0):
                    cand = gamma.copy()
                    cand[i] += sgn * step
                    cand /= float(np.linalg.norm(cand))
                    cval = gap(cand)
                    if cval < cur:
                        gamma, cur = cand, cval
                        moved = True
            if not moved:
                step *= 0.5
                if step < 1e-14:
                    break
        if cur < best_gap:
            best_gap, best_gamma = cur, gamma
        if best_gap <= tol_abs:
            return best_gamma
    return best_gamma if best_gap <= tol_abs else None


def _interval_gap(stack: np.ndarray, gamma: np.ndarray) -> float:
    combined = np.tensordot(gamma, stack, axes=1)
    values, _ = symmetric_eigen(combined)
    hi, lo = float(values[0]), float(values[-1])
    if lo > 0.0:
        return lo
    if hi < 0.0:
        return -hi
    return 0.0


def verify_ndim_certificate_hilbert(
    t_op: MatrixOperator,
    a_ops,
    alpha,
    beta_samples,
    seed: int = 42,
    tol: float = 1e-6,
) -> NdimCertificateReport:
    """Sampled certificate that alpha is optimal for span{A_1..A_k}.

    For each sampled beta a unit gamma is found making the residual
    T - sum beta_i A_i orthogonal to sum gamma_i A_i; with that gamma the
    constrained maximum of the residual must match its norm from above and
    dominate the alpha-side constrained maximum, which must equal
    ||T - sum alpha_i A_i||.  Failed gamma searches make the sample
    inconclusive rather than a failure.
    """
    a_list = list(a_ops)
    if not a_list:
        raise InvalidParameterError("at least one basis operator is required")
    for a_op in a_list:
        _check_same_space(t_op, a_op)
    if t_op.domain_norm != "euclidean":
        raise InvalidParameterError("the certificate requires Euclidean norms")
    k = len(a_list)
    vecs = np.stack([a.matrix.ravel() for a in a_list])
    s = np.linalg.svd(vecs, compute_uv=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise RankDeficiencyError("basis operators are not independent")
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (k,):
        raise DimensionMismatchError("alpha length must match the basis size")

    t = t_op.matrix
    a_mats = [a.matrix for a in a_list]
    r_alpha = t - sum(alpha[i] * a_mats[i] for i in range(k))
    norm_t = _op_norm(t, "euclidean")
    norm_r_alpha = _op_norm(r_alpha, "euclidean")
    if norm_r_alpha <= 1e-12 * max(norm_t, 1e-300):
        return NdimCertificateReport(True, 0, 0, 0, True, 0.0)

    rng = np.random.default_rng(seed)
    if isinstance(beta_samples, (int, np.integer)):
        spread = norm_t / max(np.mean([_op_norm(a, "euclidean") for a in a_mats]), 1e-300)
        betas = [alpha + 0.5 * spread * rng.standard_normal(k) for _ in range(int(beta_samples))]
    else:
        betas = [np.asarray(b, dtype=float) for b in beta_samples]
        for b in betas:
            if b.shape != (k,):
                raise DimensionMismatchError("each beta must have the basis length")

    failures = 0
    inconclusive = 0
    worst = 0.0
    for beta in betas:
        r_beta = t - sum(beta[i] * a_mats[i] for i in range(k))
        norm_r_beta = _op_norm(r_beta, "euclidean")
        scale = max(norm_r_beta, norm_r_alpha, 1e-300)
        values, vectors = symmetric_eigen(r_beta.T @ r_beta)
        top = float(values[0])
        keep = values >= top * (1.0 - ATTAINMENT_REL)
        v = vectors[:, keep]
        s_mats = [0.5 * (v.T @ (r_beta.T @ a_mats[i] + a_mats[i].T @ r_beta) @ v) for i in range(k)]
        gamma = _gamma_search(s_mats, rng, tol_abs=1e-9 * scale)
        if gamma is None:
            inconclusive += 1
            continue
        g_mat = sum(gamma[i] * a_mats[i] for i in range(k))
        seed_b = int(rng.integers(0, 2**31 - 1))
        max_beta = _max_deflected_euclidean(r_beta, g_mat, seed_b, 8)
        max_alpha = _max_deflected_euclidean(r_alpha, g_mat, seed_b + 1, 8)
        violation = max(
            max_alpha - max_beta,
            abs(max_alpha - norm_r_alpha),
        ) / scale
        worst = max(worst, violation)
        if violation > tol:
            failures += 1

    if failures:
        holds = False
    elif inconclusive:
        holds = None
    else:
        holds = True
    return NdimCertificateReport(
        holds, len(betas), failures, inconclusive, False, worst
    )
