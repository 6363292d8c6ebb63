"""Best approximation of functionals and points out of subspaces of lp^n.

The central computation: for f0 on lq^n and independent functionals g_1..g_m,

1. restrict f0 to W, the intersection of the kernels of the g_i;
2. maximize f0 over the unit sphere of W, giving the distance d and the
   attainment point h0;
3. recover the optimal coefficients from f0 - d * J(h0) = sum alpha_i g_i,
   where J is the duality map, by a linear solve with a residual check.

Points x of lp^n are handled by the isometric identification of lp^n with
the dual of lq^n that sends x to the functional with coefficients x.  The
classical annihilator-supremum formula is implemented as an independent
route that must agree with the three-step result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    InternalInconsistencyError,
    InvalidParameterError,
    RankDeficiencyError,
)
from .lp_core import (
    RANK_TOL,
    Functional,
    LpVector,
    Subspace,
    _power_newton,
    conjugate_exponent,
    duality_map,
    lp_norm,
    norm_attainment_point,
    nullspace_intersection,
)

DEGENERATE_REL = 1e-10
RESIDUAL_REL = 1e-7


@dataclass(frozen=True)
class ApproxResult:
    """Distance plus certificates from one best-approximation solve.

    ``coefficients`` expand the best approximation in the basis the caller
    supplied.  ``attainment_point`` is the unit vector h0 of W where the
    restricted functional attains the distance; ``residual_functional`` is
    the defect f0 - sum alpha_i g_i, whose norm equals the distance.  Both
    are None on the degenerate branch where the distance is zero.
    """

    distance: float
    coefficients: np.ndarray
    attainment_point: LpVector | None
    residual_functional: Functional | None
    route: str

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)


def _ratio_value(a, basis, q, c):
    h = basis @ c
    nh = lp_norm(h, q)
    return float(a @ h) / nh, h, nh


def _ratio_grad(a, basis, q, c, val, h, nh):
    unit = np.abs(h) / nh
    jvec = np.sign(h) * unit ** (q - 1.0)
    return (basis.T @ a - val * (basis.T @ jvec)) / nh


def _ascend_ratio(a, basis, q, c0, max_iter=600, gtol=1e-12, vtol=1e-13):
    """Maximize (a . Bc) / ||Bc||_q over c by gradient ascent with line search.

    The objective is scale-invariant in c, so iterates stay on the Euclidean
    unit sphere of coefficients.  The line search backtracks on failure and
    forward-tracks while the value keeps improving, which behaves like a
    crude exact line search and keeps the iteration count small.  The
    iteration cap is deliberately modest: on small-q ridges first-order
    steps zigzag, and the Newton polish plus the stationarity root solve
    downstream finish the job from any point in the right basin.
    """
    c = np.asarray(c0, dtype=float)
    c = c / float(np.linalg.norm(c))
    val, h, nh = _ratio_value(a, basis, q, c)
    if val < 0.0:
        c = -c
        val, h, nh = _ratio_value(a, basis, q, c)
    step = 0.25
    stagnant = 0
    iterations = 0
    checkpoint = val
    for _ in range(max_iter):
        iterations += 1
        grad = _ratio_grad(a, basis, q, c, val, h, nh)
        gn = float(np.linalg.norm(grad))
        if gn <= gtol * (1.0 + abs(val)):
            break
        direction = grad / gn
        s = step
        best_s, best_val = 0.0, val
        shrink = 0
        while shrink < 60:
            cand = c + s * direction
            cand = cand / float(np.linalg.norm(cand))
            cval, _, _ = _ratio_value(a, basis, q, cand)
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
                if s < 1e-18 * (1.0 + abs(val)):
                    break
        if best_s == 0.0:
            break
        c = c + best_s * direction
        c = c / float(np.linalg.norm(c))
        new_val, h, nh = _ratio_value(a, basis, q, c)
        if new_val - val <= vtol * (1.0 + abs(new_val)):
            stagnant += 1
        else:
            stagnant = 0
        val = new_val
        step = best_s
        if stagnant >= 8:
            break
        # Zigzag crawls on small-q ridges gain just above vtol per step for
        # thousands of iterations; a windowed rate check cuts them off and
        # leaves the finishing precision to the later polish stages.
        if iterations % 40 == 0:
            if val - checkpoint <= 1e-10 * (1.0 + abs(val)):
                break
            checkpoint = val
    return val, c, iterations


def _stationarity_root_small_q(a, basis, q, c_seed):
    """Sphere-max stationarity solved in dual coordinates, for q < 2.

    Near q = 1 the norm gradient is cliff-steep around zero coordinates of
    h and both ascent and finite-difference polish lose the maximizer.  In
    the dual coordinates w = sgn(h) |h|^(q-1) the picture flips: h(w) =
    sgn(w) |w|^(q'-1) with q' - 1 > 1 is differentiable with a bounded
    Jacobian, and the multiplier condition forces P_W w = P_W a up to
    scale.  That leaves the square system F(s) = D' h(P_W a + D s) = 0
    over the complement coordinates s, solved by damped Newton.  The
    strictly convex section has exactly one positive-value stationary
    point, so any root is the global maximizer.  Returns h or None.
    """
    qmat, _ = np.linalg.qr(basis)
    u_full, _, _ = np.linalg.svd(qmat, full_matrices=True)
    comp = u_full[:, basis.shape[1]:]
    if comp.shape[1] == 0:
        return None
    g0 = qmat @ (qmat.T @ a)
    if float(np.linalg.norm(g0)) <= 1e-300:
        return None

    def solve_at(q_leg, s):
        qq = q_leg / (q_leg - 1.0)

        def h_of(w):
            return np.sign(w) * np.abs(w) ** (qq - 1.0)

        fvec = comp.T @ h_of(g0 + comp @ s)
        fn = float(np.linalg.norm(fvec))
        for _ in range(80):
            w = g0 + comp @ s
            scale = lp_norm(h_of(w), q_leg)
            if fn <= 1e-13 * max(scale, 1e-300):
                return s, True
            slope = (qq - 1.0) * np.abs(w) ** (qq - 2.0)
            jac = comp.T @ (slope[:, None] * comp)
            step, *_ = np.linalg.lstsq(jac, -fvec, rcond=None)
            if not np.all(np.isfinite(step)):
                return s, False
            tau, moved = 1.0, False
            for _ in range(40):
                cand = s + tau * step
                cf = comp.T @ h_of(g0 + comp @ cand)
                cfn = float(np.linalg.norm(cf))
                if cfn < fn:
                    s, fvec, fn, moved = cand, cf, cfn, True
                    break
                tau *= 0.5
            if not moved:
                return s, False
        return s, False

    # The root moves continuously in q, so extreme exponents are reached by
    # walking q down from a mild anchor and reusing each root as the seed.
    if q >= 1.4:
        legs = [q]
    else:
        count = max(1, math.ceil(math.log(1.4 / q) / 0.08))
        legs = [1.4 * (q / 1.4) ** (i / count) for i in range(count + 1)]

    first_q = legs[0]
    seeds = [np.zeros(comp.shape[1])]
    h_seed = basis @ c_seed
    w_raw = np.sign(h_seed) * np.abs(h_seed) ** (first_q - 1.0)
    proj = qmat @ (qmat.T @ w_raw)
    pn = float(proj @ g0)
    if pn > 0.0:
        seeds.append(comp.T @ (w_raw * (float(g0 @ g0) / pn)))

    for s in seeds:
        good = True
        for q_leg in legs:
            s, ok = solve_at(q_leg, s)
            if not ok:
                good = False
                break
        if good:
            qq = q / (q - 1.0)
            w = g0 + comp @ s
            return np.sign(w) * np.abs(w) ** (qq - 1.0)
    return None


def _exponent_path(q: float) -> list[float]:
    """Geometric path from 2 to q, in legs of at most 0.2 log units.

    Near q = 1 the sphere develops near-vertices and the norm gradient
    turns cliff-steep around zero coordinates, so an ascent started cold at
    the target exponent can settle short of the maximizer.  Walking the
    exponent down from the Euclidean case keeps the iterate inside the
    right basin the whole way.
    """
    span = abs(math.log(q / 2.0))
    if span <= 1e-12:
        return [q]
    legs = max(1, math.ceil(span / 0.2))
    return [2.0 * (q / 2.0) ** (i / legs) for i in range(1, legs + 1)]


def _polish_ratio(a, basis, q, c, max_rounds=8):
    """Damped Newton on the stationarity system of the ratio objective.

    Value-driven ascent stalls once improvements drop below float
    resolution, which leaves the maximizer direction accurate only to about
    sqrt(eps).  Driving the (scale-invariant) gradient itself to zero with
    finite-difference Newton steps recovers full precision; steps are only
    accepted when the gradient norm decreases.
    """
    k = c.size
    val, h, nh = _ratio_value(a, basis, q, c)
    grad = _ratio_grad(a, basis, q, c, val, h, nh)
    gn = float(np.linalg.norm(grad))
    for _ in range(max_rounds):
        if gn <= 1e-15 * (1.0 + abs(val)):
            break
        fd = 1e-7
        jac = np.empty((k, k))
        for j in range(k):
            bump = np.zeros(k)
            bump[j] = fd
            vp, hp, nhp = _ratio_value(a, basis, q, c + bump)
            vm, hm, nhm = _ratio_value(a, basis, q, c - bump)
            gp = _ratio_grad(a, basis, q, c + bump, vp, hp, nhp)
            gm = _ratio_grad(a, basis, q, c - bump, vm, hm, nhm)
            jac[:, j] = (gp - gm) / (2.0 * fd)
        step, *_ = np.linalg.lstsq(jac, -grad, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        scale = 1.0
        accepted = False
        for _ in range(30):
            cand = c + scale * step
            norm_cand = float(np.linalg.norm(cand))
            if norm_cand > 0.0:
                cand = cand / norm_cand
                cval, ch, cnh = _ratio_value(a, basis, q, cand)
                cgrad = _ratio_grad(a, basis, q, cand, cval, ch, cnh)
                cgn = float(np.linalg.norm(cgrad))
                # The value guard keeps the sharpening from sliding off a
                # maximizer toward some flatter low spot.
                if cgn < gn and cval >= val - 1e-12 * (1.0 + abs(val)):
                    c, val, grad, gn = cand, cval, cgrad, cgn
                    accepted = True
                    break
            scale *= 0.5
        if not accepted:
            break
    return val, c


def max_on_sphere_subspace(
    f: Functional, w: Subspace, seed: int = 42, restarts: int = 8
):
    """Maximize f over the unit sphere of the subspace W of its domain.

    Returns (value, h0) where h0 is the maximizing unit vector of W with
    f(h0) = value >= 0.  Runs ``restarts`` seeded random starts plus the
    Euclidean warm start (the projection of the coefficient vector onto W)
    and keeps the best; for a linear functional over this smooth strictly
    convex sphere the only critical points are the antipodal optimum pair,
    so the restarts only guard against line-search stalls.
    """
    if w.ambient_dim != f.dim:
        raise DimensionMismatchError("subspace and functional dimensions differ")
    if w.rank == 0:
        raise DegenerateInputError("the zero subspace has no unit sphere")
    if restarts < 0:
        raise InvalidParameterError("restarts must be nonnegative")
    basis = np.asarray(w.basis, dtype=float)
    a = f.coeffs
    q = f.domain_exponent.p
    rng = np.random.default_rng(seed)

    starts = []
    warm = basis.T @ a
    if float(np.linalg.norm(warm)) > 0.0:
        starts.append(warm)
    for _ in range(restarts):
        cand = rng.standard_normal(w.rank)
        while float(np.linalg.norm(cand)) == 0.0:
            cand = rng.standard_normal(w.rank)
        starts.append(cand)
    if not starts:
        starts.append(np.ones(w.rank))

    best_val, best_c = -math.inf, None
    for c0 in starts:
        val, c, _ = _ascend_ratio(a, basis, q, c0)
        if val > best_val:
            best_val, best_c = val, c
    # One continuation run guards the cold starts at extreme exponents.
    c = starts[0]
    for leg in _exponent_path(q):
        _, c, _ = _ascend_ratio(a, basis, leg, c)
    val, _, _ = _ratio_value(a, basis, q, c)
    if abs(val) > best_val:
        best_val, best_c = abs(val), c
    best_val, best_c = _polish_ratio(a, basis, q, best_c)
    if q < 2.0:
        root = _stationarity_root_small_q(a, basis, q, best_c)
        if root is not None:
            c_root, *_ = np.linalg.lstsq(basis, root, rcond=None)
            val, _, _ = _ratio_value(a, basis, q, c_root)
            if abs(val) >= best_val:
                best_val, best_c = abs(val), c_root
    h = basis @ best_c
    h = h / lp_norm(h, q)
    point = LpVector(h, f.domain_exponent)
    value = f(point)
    if value < 0.0:
        point = point.scaled(-1.0)
        value = -value
    return value, point


def _stack_and_validate(f0: Functional, gs) -> np.ndarray:
    rows = []
    for g in gs:
        if not isinstance(g, Functional):
            raise InvalidParameterError("gs must contain Functional instances")
        if g.domain_exponent != f0.domain_exponent or g.dim != f0.dim:
            raise DimensionMismatchError("f0 and gs must share one domain space")
        rows.append(g.coeffs)
    if not rows:
        return np.empty((0, f0.dim))
    stacked = np.array(rows, dtype=float)
    s = np.linalg.svd(stacked, compute_uv=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise RankDeficiencyError("the functionals g_i are not independent")
    return stacked


def _expand_exactly(f0: Functional, stacked: np.ndarray, route: str) -> ApproxResult:
    """Zero-distance branch: f0 already lies in the span of the g_i."""
    if stacked.shape[0] == 0:
        return ApproxResult(0.0, np.empty(0), None, None, route)
    alpha, *_ = np.linalg.lstsq(stacked.T, f0.coeffs, rcond=None)
    residual = float(np.linalg.norm(stacked.T @ alpha - f0.coeffs))
    if residual > RESIDUAL_REL * max(f0.norm, 1e-300):
        raise InternalInconsistencyError(
            "restriction of f0 to W vanishes but f0 is not in span(g_i)"
        )
    return ApproxResult(0.0, alpha, None, None, route)


def best_approx_functional(
    f0: Functional, gs, seed: int = 42, restarts: int = 8
) -> ApproxResult:
    """Best approximation to f0 out of span(g_1..g_m) by the three-step route.

    Requires the g_i independent.  Returns the distance, the optimal
    coefficients alpha with ||f0 - sum alpha_i g_i|| = distance, the
    attainment point h0 and the residual functional itself.
    """
    stacked = _stack_and_validate(f0, gs)
    n = f0.dim
    w = nullspace_intersection(gs, n)
    if f0.norm == 0.0 or w.rank == 0:
        return _expand_exactly(f0, stacked, "duality-3step")
    d, h0 = max_on_sphere_subspace(f0, w, seed=seed, restarts=restarts)
    if d <= DEGENERATE_REL * f0.norm:
        return _expand_exactly(f0, stacked, "duality-3step")
    xi0 = Functional(d * duality_map(h0).coeffs, f0.domain_exponent)
    if stacked.shape[0] == 0:
        return ApproxResult(d, np.empty(0), h0, f0, "duality-3step")
    rhs = f0.coeffs - xi0.coeffs
    alpha, *_ = np.linalg.lstsq(stacked.T, rhs, rcond=None)
    # The least-squares seed inherits the attainment direction's noise
    # amplified by the duality-map power, so the coefficients are pinned on
    # the residual norm itself before the route is checked against d.
    alpha, _, _ = _power_newton(f0.coeffs, stacked.T, f0.domain_exponent.q, alpha)
    residual_f = Functional(f0.coeffs - stacked.T @ alpha, f0.domain_exponent)
    if abs(residual_f.norm - d) > RESIDUAL_REL * max(f0.norm, 1e-300):
        raise InternalInconsistencyError(
            f"sphere value {d:.6e} and expansion residual norm "
            f"{residual_f.norm:.6e} disagree beyond the duality gap bound"
        )
    return ApproxResult(d, alpha, h0, residual_f, "duality-3step")


def _point_problem_parts(x: LpVector, y: Subspace):
    if y.ambient_dim != x.dim:
        raise DimensionMismatchError("subspace and point dimensions differ")
    if y.rank >= x.dim:
        raise InvalidParameterError("the subspace must be proper")
    dual_exp = x.exponent.conjugate
    f0 = Functional(x.coords, dual_exp)
    gs = [Functional(y.basis[:, i], dual_exp) for i in range(y.rank)]
    return f0, gs


def dist_point_subspace_lp(
    x: LpVector, y: Subspace, seed: int = 42, restarts: int = 8
) -> ApproxResult:
    """Distance from x to the subspace Y of lp^n, with optimal coefficients.

    Identifies lp^n with the dual of lq^n (the point x becomes the
    functional with coefficients x; the identification is an isometry) and
    runs the three-step functional solve.  The returned coefficients expand
    the nearest point of Y in the columns of Y's basis.
    """
    f0, gs = _point_problem_parts(x, y)
    return best_approx_functional(f0, gs, seed=seed, restarts=restarts)


def classical_duality_eval(
    x: LpVector, y: Subspace, seed: int = 42, restarts: int = 8
) -> float:
    """dist(x, Y) as the supremum of f(x) over the unit ball of Y's annihilator.

    The annihilator of Y inside the dual of lp^n consists of the coefficient
    vectors orthogonal (in the Euclidean sense) to Y, measured in the lq
    norm; the supremum over its unit sphere is computed with the same
    sphere maximizer used by the three-step route and must agree with it.
    """
    if y.ambient_dim != x.dim:
        raise DimensionMismatchError("subspace and point dimensions differ")
    if y.rank >= x.dim:
        raise InvalidParameterError("the subspace must be proper")
    dual_exp = x.exponent.conjugate
    annihilator = nullspace_intersection(
        [Functional(y.basis[:, i], dual_exp) for i in range(y.rank)], x.dim
    )
    value, _ = max_on_sphere_subspace(
        Functional(x.coords, dual_exp), annihilator, seed=seed, restarts=restarts
    )
    return value


def codim1_closed_form_2d(a: float, b: float, c: float, d: float, p: float) -> float:
    """dist((a, b), span{(c, d)}) in lp^2 in closed form.

    Equals |ad - bc| / (|c|^q + |d|^q)^(1/q) with q conjugate to p.
    """
    q = conjugate_exponent(p).q
    if c == 0.0 and d == 0.0:
        raise DegenerateInputError("the spanning vector must be nonzero")
    numer = abs(a * d - b * c)
    denom = lp_norm(np.array([c, d]), q)
    return numer / denom


def verify_remark_inequality(
    a: float, b: float, c: float, alpha: float, beta: float, p: float
):
    """Evaluate the optimal three-term lp inequality at one parameter point.

    lhs = |a-alpha-beta|^p + |b-2 beta|^p + |c+alpha-beta|^p
    rhs = 3^(1-p) |a-b+c|^p

    Returns (lhs, rhs, holds); the inequality is exact mathematics, so
    ``holds`` only leaves slack for floating-point rounding.
    """
    p = conjugate_exponent(p).p
    lhs = (
        abs(a - alpha - beta) ** p
        + abs(b - 2.0 * beta) ** p
        + abs(c + alpha - beta) ** p
    )
    rhs = 3.0 ** (1.0 - p) * abs(a - b + c) ** p
    holds = lhs >= rhs * (1.0 - 1e-12) - 1e-300
    return lhs, rhs, holds


def check_best_approx_certificate_functional(
    f: Functional, gs, alpha, tol: float = 1e-9
):
    """Verify optimality of an expansion without re-solving.

    alpha is optimal iff the residual f - sum alpha_i g_i is BJ-orthogonal
    to every g_k, i.e. every g_k vanishes at the residual's norm attainment
    point.  Returns (valid, witness); a numerically zero residual is valid
    with witness None.
    """
    stacked = _stack_and_validate(f, gs)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (stacked.shape[0],):
        raise DimensionMismatchError("alpha length must match the number of g_i")
    if stacked.shape[0] == 0:
        return True, None
    residual = Functional(f.coeffs - stacked.T @ alpha, f.domain_exponent)
    if residual.norm <= 1e-12 * max(f.norm, 1.0):
        return True, None
    xhat = norm_attainment_point(residual)
    for i in range(stacked.shape[0]):
        g = Functional(stacked[i], f.domain_exponent)
        if abs(g(xhat)) > tol * g.norm:
            return False, xhat
    return True, xhat
