"""Brute-force and first-principles oracles for cross-checking.

Nothing here knows about duality: distances are found by minimizing the
primal objectives directly (smoothed gradient descent for lp residuals,
subgradient descent plus coordinate polish for operator norms) and maxima
over low-dimensional spheres can be taken over dense grids.  The rest of
the package treats these routines as the independent referee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    InvalidParameterError,
)
from .lp_core import LpVector, Subspace, _power_newton, lp_norm, symmetric_eigen
from .operator_approx import MatrixOperator, _op_norm, _sign_patterns
from .orthogonality import golden_section_min

SMOOTHING_EPS = 1e-12
STATIONARITY_REL = 1e-9


@dataclass(frozen=True)
class OracleReport:
    """Result of a primal minimization.

    ``history`` records the objective after every accepted step (for the
    operator oracle, the best value seen so far), so it is non-increasing;
    for lp problems it tracks the smoothed objective that is actually
    minimized while ``value`` is the exact objective at the minimizer.
    ``converged`` is set only when the final first-order stationarity
    measure is at most 1e-9 * (1 + value).
    """

    value: float
    minimizer: np.ndarray
    iterations: int
    converged: bool
    history: tuple[float, ...]

    def __post_init__(self):
        arr = np.asarray(self.minimizer, dtype=float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "minimizer", arr)


def _smoothed_lp(residual: np.ndarray, p: float) -> float:
    rho = np.sqrt(residual * residual + SMOOTHING_EPS * SMOOTHING_EPS)
    peak = float(np.max(rho))
    return peak * float(np.sum((rho / peak) ** p)) ** (1.0 / p)


def _smoothed_lp_grad(residual: np.ndarray, p: float, value: float) -> np.ndarray:
    rho = np.sqrt(residual * residual + SMOOTHING_EPS * SMOOTHING_EPS)
    return (rho / value) ** (p - 1.0) * (residual / rho)


def primal_min_lp(x: LpVector, y: Subspace, max_iter: int = 100000) -> OracleReport:
    """Minimize ||x - sum alpha_i y_i||_p over alpha directly.

    Gradient descent on the eps-smoothed norm (eps = 1e-12) with
    Barzilai-Borwein step proposals safeguarded by Armijo backtracking,
    warm-started from the Euclidean projection; a damped Newton polish on
    the smoothed power sum finishes the exponents where first-order steps
    crawl.  The reported value is the unsmoothed norm at the final alpha.
    """
    if y.ambient_dim != x.dim:
        raise DimensionMismatchError("subspace and point dimensions differ")
    p = x.exponent.p
    basis = np.asarray(y.basis, dtype=float)
    if y.rank == 0:
        return OracleReport(x.norm, np.empty(0), 0, True, (x.norm,))

    xc = x.coords

    def fval(alpha):
        return _smoothed_lp(xc - basis @ alpha, p)

    def fgrad(alpha, value):
        return -basis.T @ _smoothed_lp_grad(xc - basis @ alpha, p, value)

    alpha, *_ = np.linalg.lstsq(basis, xc, rcond=None)
    f = fval(alpha)
    g = fgrad(alpha, f)
    history = [f]
    step = 1.0 / (1.0 + float(np.linalg.norm(g)))
    prev_alpha, prev_g = None, None
    iterations = 0
    stale = 0
    # The Newton polish below handles the slow-convergence exponents, so
    # the first-order phase only needs enough budget to reach its basin.
    for _ in range(min(max_iter, 5000)):
        gn = float(np.linalg.norm(g))
        if gn <= STATIONARITY_REL * (1.0 + f):
            break
        iterations += 1
        if prev_alpha is not None:
            ds = alpha - prev_alpha
            dg = g - prev_g
            denom = float(ds @ dg)
            if denom > 0.0:
                bb = float(ds @ ds) / denom
                if math.isfinite(bb) and bb > 0.0:
                    step = bb
        s = step
        accepted = False
        for _ in range(60):
            cand = alpha - s * g
            fc = fval(cand)
            if fc <= f - 1e-4 * s * gn * gn:
                accepted = True
                break
            s *= 0.5
            if s < 1e-20 * (1.0 + abs(f)):
                break
        if not accepted:
            break
        # Hand off to the Newton polish once first-order progress dries up.
        stale = stale + 1 if f - fc <= 1e-14 * (1.0 + f) else 0
        if stale > 200:
            prev_alpha, prev_g = alpha, g
            alpha, f = cand, fc
            history.append(f)
            break
        prev_alpha, prev_g = alpha, g
        alpha, f = cand, fc
        g = fgrad(alpha, f)
        history.append(f)
        step = s

    alpha, trail, rounds = _power_newton(xc, basis, p, alpha, eps=SMOOTHING_EPS)
    history.extend(trail)
    iterations += rounds
    f = fval(alpha)
    gn = float(np.linalg.norm(fgrad(alpha, f)))
    converged = gn <= STATIONARITY_REL * (1.0 + f)
    value = lp_norm(xc - basis @ alpha, p)
    return OracleReport(value, alpha, iterations, converged, tuple(history))


def _operator_phi(t: np.ndarray, a_mats, domain: str):
    if domain == "sup":
        patterns = _sign_patterns(t.shape[1])
        t_img = t @ patterns
        a_imgs = [a @ patterns for a in a_mats]

        def phi(beta):
            diff = t_img.copy()
            for b, img in zip(beta, a_imgs):
                diff -= b * img
            return float(np.max(np.sqrt(np.sum(diff * diff, axis=0))))

    else:

        def phi(beta):
            diff = t.copy()
            for b, a in zip(beta, a_mats):
                diff -= b * a
            values, _ = symmetric_eigen(diff.T @ diff)
            return math.sqrt(max(float(values[0]), 0.0))

    return phi


def _operator_subgrad(t: np.ndarray, a_mats, domain: str, beta: np.ndarray):
    diff = t - sum(b * a for b, a in zip(beta, a_mats))
    if domain == "sup":
        patterns = _sign_patterns(t.shape[1])
        images = diff @ patterns
        norms = np.sqrt(np.sum(images * images, axis=0))
        j = int(np.argmax(norms))
        if norms[j] == 0.0:
            return np.zeros(len(a_mats))
        u = images[:, j] / norms[j]
        v = patterns[:, j]
    else:
        values, vectors = symmetric_eigen(diff.T @ diff)
        v = vectors[:, 0]
        image = diff @ v
        nv = float(np.linalg.norm(image))
        if nv == 0.0:
            return np.zeros(len(a_mats))
        u = image / nv
    return np.array([-float(u @ (a @ v)) for a in a_mats])


def _coordinate_polish(phi, beta, value, scale, max_sweeps=40):
    """Cyclic per-coordinate golden-section descent for a convex objective."""
    k = beta.size
    history = []
    for _ in range(max_sweeps):
        before = value
        for i in range(k):
            span = max(scale, 1e-12)
            center = value

            def section(s, i=i):
                cand = beta.copy()
                cand[i] = s
                return phi(cand)

            lo, hi = beta[i] - span, beta[i] + span
            for _ in range(60):
                if section(lo) >= center and section(hi) >= center:
                    break
                span *= 2.0
                lo, hi = beta[i] - span, beta[i] + span
            arg, fmin = golden_section_min(section, lo, hi, 1e-12 * (1.0 + span))
            if fmin < value:
                beta = beta.copy()
                beta[i] = arg
                value = fmin
                history.append(value)
        if before - value <= 1e-13 * (1.0 + abs(value)):
            break
    return beta, value, history


def _operator_stationarity(phi, beta, value, scale, rng):
    probes = []
    k = beta.size
    for i in range(k):
        e = np.zeros(k)
        e[i] = 1.0
        probes.extend((e, -e))
    for _ in range(8):
        d = rng.standard_normal(k)
        nd = float(np.linalg.norm(d))
        if nd > 0.0:
            probes.append(d / nd)
    h = 1e-6 * max(scale, 1e-12)
    worst = 0.0
    for d in probes:
        worst = max(worst, (value - phi(beta + h * d)) / h)
    return worst


def primal_min_operator(
    t_op: MatrixOperator, a_ops, seed: int = 42, iterations: int = 10000
) -> OracleReport:
    """Minimize ||T - sum beta_i A_i|| over beta without duality.

    One basis operator: golden-section on the convex section (the bracket
    expands until both endpoint values exceed ||T||).  Several: normalized
    subgradient descent with step s0/sqrt(t) and best-iterate tracking,
    then cyclic coordinate golden-section polish.  Convergence is declared
    from finite-difference descent probes at the final point.
    """
    a_list = list(a_ops)
    if not a_list:
        raise InvalidParameterError("at least one basis operator is required")
    for a_op in a_list:
        if a_op.matrix.shape != t_op.matrix.shape:
            raise DimensionMismatchError("operators must share one shape")
        if (a_op.domain_norm, a_op.codomain_norm) != (
            t_op.domain_norm,
            t_op.codomain_norm,
        ):
            raise DimensionMismatchError("operators must share their norms")
    t = t_op.matrix
    a_mats = [a.matrix for a in a_list]
    domain = t_op.domain_norm
    k = len(a_list)
    phi = _operator_phi(t, a_mats, domain)
    norm_t = _op_norm(t, domain)
    a_norms = [_op_norm(a, domain) for a in a_mats]
    if min(a_norms) == 0.0:
        raise DegenerateInputError("a basis operator is zero")
    scale = norm_t / float(np.mean(a_norms)) + 1.0

    flat = np.stack([a.ravel() for a in a_mats], axis=1)
    beta, *_ = np.linalg.lstsq(flat, t.ravel(), rcond=None)
    value = phi(beta)
    history = [value]
    rng = np.random.default_rng(seed)
    count = 0

    if k == 1:

        def section(s):
            return phi(np.array([s]))

        span = 2.0 * norm_t / a_norms[0] + 1.0
        lo, hi = beta[0] - span, beta[0] + span
        for _ in range(60):
            if section(lo) > norm_t and section(hi) > norm_t:
                break
            span *= 2.0
            lo, hi = beta[0] - span, beta[0] + span
        arg, fmin = golden_section_min(section, lo, hi, 1e-12 * (1.0 + span))
        if fmin < value:
            beta = np.array([arg])
            value = fmin
            history.append(value)
        count = 1
    else:
        best_beta, best_value = beta.copy(), value
        stale = 0
        for step_index in range(1, iterations + 1):
            g = _operator_subgrad(t, a_mats, domain, beta)
            gn = float(np.linalg.norm(g))
            if gn == 0.0:
                break
            beta = beta - (scale / math.sqrt(step_index)) * (g / gn)
            count += 1
            val = phi(beta)
            if val < best_value - 1e-13 * (1.0 + best_value):
                stale = 0
            else:
                stale += 1
                # The coordinate polish finishes the job once progress stops.
                if stale > 400:
                    break
            if val < best_value:
                best_value, best_beta = val, beta.copy()
                history.append(val)
        beta, value = best_beta, best_value
        beta, value, polish_history = _coordinate_polish(phi, beta, value, scale)
        history.extend(polish_history)

    residual = _operator_stationarity(phi, beta, value, scale, rng)
    converged = residual <= STATIONARITY_REL * (1.0 + value)
    return OracleReport(value, beta, count, converged, tuple(history))


@dataclass(frozen=True)
class GridMaxReport:
    """Maximum of an objective over a unit sphere by dense grid search.

    ``uncertainty`` bounds how far the reported value can sit below the
    true maximum: (Lipschitz bound) * (grid step), with the bound estimated
    from the grid itself when the caller does not supply one.
    """

    value: float
    point: np.ndarray
    uncertainty: float

    def __post_init__(self):
        arr = np.asarray(self.point, dtype=float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "point", arr)


def _euclidean_grid(dim: int, resolution: int):
    panels = []
    if dim == 1:
        panels.append([np.array([1.0]), np.array([-1.0])])
        return panels, 2.0
    if dim == 2:
        thetas = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
        panels.append([np.array([math.cos(t), math.sin(t)]) for t in thetas])
        return panels, float(thetas[1] - thetas[0])
    n_theta = max(int(math.ceil(math.sqrt(resolution / 2.0))), 8)
    thetas = np.linspace(0.0, math.pi, n_theta + 1)
    phis = np.linspace(0.0, 2.0 * math.pi, 2 * n_theta, endpoint=False)
    step = max(float(thetas[1] - thetas[0]), float(phis[1] - phis[0]))
    for phi in phis:
        row = [
            np.array(
                [
                    math.sin(th) * math.cos(phi),
                    math.sin(th) * math.sin(phi),
                    math.cos(th),
                ]
            )
            for th in thetas
        ]
        panels.append(row)
    return panels, step


def _sup_grid(dim: int, resolution: int):
    panels = []
    if dim == 1:
        panels.append([np.array([1.0]), np.array([-1.0])])
        return panels, 2.0
    if dim == 2:
        grid = np.linspace(-1.0, 1.0, resolution + 1)
        step = float(grid[1] - grid[0])
        for fixed in range(2):
            for sign in (1.0, -1.0):
                row = []
                for s in grid:
                    x = np.empty(2)
                    x[fixed] = sign
                    x[1 - fixed] = s
                    row.append(x)
                panels.append(row)
        return panels, step
    side = max(int(math.ceil(math.sqrt(resolution))), 8)
    grid = np.linspace(-1.0, 1.0, side + 1)
    step = float(grid[1] - grid[0]) * math.sqrt(2.0)
    free_pairs = [(1, 2), (0, 2), (0, 1)]
    for fixed in range(3):
        fu, fv = free_pairs[fixed]
        for sign in (1.0, -1.0):
            row = []
            for u in grid:
                for v in grid:
                    x = np.empty(3)
                    x[fixed] = sign
                    x[fu], x[fv] = u, v
                    row.append(x)
            panels.append(row)
    return panels, step


def _project_sphere(x: np.ndarray, sphere: str) -> np.ndarray:
    if sphere == "euclidean":
        return x / float(np.linalg.norm(x))
    return x / float(np.max(np.abs(x)))


def _local_refine(objective, sphere: str, x0: np.ndarray, step: float,
                  best: float) -> tuple[float, np.ndarray]:
    x = x0.copy()
    radius = step
    dim = x.size
    for _ in range(60):
        improved = False
        for i in range(dim):
            for sgn in (1.0, -1.0):
                cand = x.copy()
                cand[i] += sgn * radius
                norm = np.linalg.norm(cand) if sphere == "euclidean" else np.max(np.abs(cand))
                if norm == 0.0:
                    continue
                cand = _project_sphere(cand, sphere)
                val = objective(cand)
                if val > best:
                    best, x = val, cand
                    improved = True
        if not improved:
            radius *= 0.5
            if radius < 1e-13:
                break
    return best, x


def grid_max_constrained(
    objective,
    sphere: str,
    dim: int,
    resolution: int = 1000,
    constraint=None,
    constraint_tol: float = 1e-9,
    lipschitz: float | None = None,
) -> GridMaxReport:
    """Maximize a black-box objective over a unit sphere by dense search.

    ``sphere`` is "euclidean" or "sup"; dimensions up to 3 are supported.
    An optional equality ``constraint`` (a callable; points with
    |constraint(x)| <= constraint_tol are kept) filters the grid, in which
    case no local refinement runs.  The reported uncertainty is (Lipschitz
    bound) * (grid step); without a supplied bound the slope is estimated
    from consecutive grid values.
    """
    if sphere not in ("euclidean", "sup"):
        raise InvalidParameterError(f"unknown sphere {sphere!r}")
    if dim < 1 or dim > 3:
        raise CapacityError("grid search supports dimensions 1 to 3")
    if resolution < 4:
        raise InvalidParameterError("resolution is too small")

    panels, step = (
        _euclidean_grid(dim, resolution)
        if sphere == "euclidean"
        else _sup_grid(dim, resolution)
    )

    best, best_point = -math.inf, None
    slope = 0.0
    for panel in panels:
        prev_val, prev_pt = None, None
        for point in panel:
            if constraint is not None and abs(constraint(point)) > constraint_tol:
                prev_val, prev_pt = None, None
                continue
            val = float(objective(point))
            if val > best:
                best, best_point = val, point
            if prev_val is not None:
                gap = float(np.linalg.norm(point - prev_pt))
                if gap > 0.0:
                    slope = max(slope, abs(val - prev_val) / gap)
            prev_val, prev_pt = val, point

    if best_point is None:
        raise DegenerateInputError("no grid point satisfies the constraint")

    if constraint is None:
        best, best_point = _local_refine(objective, sphere, best_point, step, best)

    bound = lipschitz if lipschitz is not None else slope
    return GridMaxReport(best, best_point, bound * step)
