"""Executes problem documents and assembles result documents.

Each distance problem is solved along every applicable route (duality,
closed formulas, primal oracles); the result reports all route values plus
their worst relative disagreement.  Exit codes follow the CLI contract:
0 success / verdict true, 1 verdict false, 3 route disagreement beyond
DISAGREEMENT_LIMIT.  Parse and input errors are raised, not encoded.
"""

from __future__ import annotations

import time

import numpy as np

from .errors import InvalidParameterError
from .functional_approx import (
    best_approx_functional,
    classical_duality_eval,
    dist_point_subspace_lp,
    verify_remark_inequality,
)
from .lp_core import Functional, LpVector, Subspace, conjugate_exponent
from .operator_approx import (
    MatrixOperator,
    best_approx_operator_1d,
    dist_formula_hilbert,
    verify_ndim_certificate_hilbert,
)
from .oracle import primal_min_lp, primal_min_operator
from .orthogonality import (
    bj_orthogonal_functionals,
    bj_orthogonal_matrices_hilbert,
    bj_orthogonal_vectors,
    strong_bj_orthogonal,
)
from .problems import (
    FunctionalSubspaceProblem,
    InequalityCheckProblem,
    Operator1dProblem,
    OperatorNdProblem,
    OrthogonalityCheckProblem,
    PointSubspaceProblem,
    ProblemOptions,
    SCHEMA_VERSION,
)

DISAGREEMENT_LIMIT = 1e-5

BENCH_CASES = [
    (2, (1,)),
    (3, (1, 2)),
    (4, (1, 2, 3)),
    (6, (1, 3, 5)),
]
BENCH_EXPONENTS = (1.5, 2.0, 3.0)


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value.ravel()]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value


def _witness_payload(witness):
    if witness is None:
        return None
    if isinstance(witness, LpVector):
        return [float(v) for v in witness.coords]
    return _jsonable(witness)


def _echo_options(options: ProblemOptions, routes: list[str] | None) -> dict:
    echoed = {
        "tolerance": options.tolerance,
        "seed": options.seed,
        "restarts": options.restarts,
    }
    if routes is not None:
        echoed["routes"] = list(routes)
    return echoed


def _select_routes(available: list[str], requested) -> list[str]:
    if requested is None:
        return list(available)
    unknown = sorted(set(requested) - set(available))
    if unknown:
        raise InvalidParameterError(
            f"unknown routes {unknown}; available: {available}"
        )
    chosen = [name for name in available if name in requested]
    if not chosen:
        raise InvalidParameterError("no routes selected")
    return chosen


def _basis_columns(vectors, ambient_dim: int) -> np.ndarray:
    if not vectors:
        return np.empty((ambient_dim, 0))
    return np.array(vectors, dtype=float).T


def _dist_point_subspace(problem: PointSubspaceProblem):
    opts = problem.options
    exp = conjugate_exponent(problem.p)
    x = LpVector(np.array(problem.point, dtype=float), exp)
    y = Subspace(x.dim, _basis_columns(problem.basis, x.dim))
    available = ["duality", "classical", "oracle"]
    routes = _select_routes(available, opts.routes)
    entries, extras = [], {}
    for name in routes:
        if name == "duality":
            res = dist_point_subspace_lp(x, y, seed=opts.seed, restarts=opts.restarts)
            entries.append(
                {
                    "name": name,
                    "value": res.distance,
                    "coefficients": _jsonable(res.coefficients),
                }
            )
            extras.setdefault("coefficients", _jsonable(res.coefficients))
        elif name == "classical":
            value = classical_duality_eval(x, y, seed=opts.seed, restarts=opts.restarts)
            entries.append({"name": name, "value": value})
        else:
            rep = primal_min_lp(x, y)
            entries.append(
                {
                    "name": name,
                    "value": rep.value,
                    "iterations": rep.iterations,
                    "converged": rep.converged,
                }
            )
            extras.setdefault("coefficients", _jsonable(rep.minimizer))
    return entries, extras, routes


def _dist_functional_subspace(problem: FunctionalSubspaceProblem):
    opts = problem.options
    dexp = conjugate_exponent(problem.q)
    target = np.array(problem.target, dtype=float)
    rows = [np.array(c, dtype=float) for c in problem.constraints]
    available = ["duality", "oracle"]
    routes = _select_routes(available, opts.routes)
    entries, extras = [], {}
    for name in routes:
        if name == "duality":
            f0 = Functional(target, dexp)
            gs = [Functional(row, dexp) for row in rows]
            res = best_approx_functional(f0, gs, seed=opts.seed, restarts=opts.restarts)
            entries.append(
                {
                    "name": name,
                    "value": res.distance,
                    "coefficients": _jsonable(res.coefficients),
                }
            )
            extras.setdefault("coefficients", _jsonable(res.coefficients))
        else:
            # Dual-norm distances are lp distances of the coefficient vectors.
            x = LpVector(target, dexp.conjugate)
            y = Subspace(x.dim, _basis_columns([list(r) for r in rows], x.dim))
            rep = primal_min_lp(x, y)
            entries.append(
                {
                    "name": name,
                    "value": rep.value,
                    "iterations": rep.iterations,
                    "converged": rep.converged,
                }
            )
            extras.setdefault("coefficients", _jsonable(rep.minimizer))
    return entries, extras, routes


def _dist_operator_1d(problem: Operator1dProblem):
    opts = problem.options
    t_op = MatrixOperator(
        np.array(problem.t, dtype=float),
        domain_norm=problem.domain_norm,
        codomain_norm=problem.codomain_norm,
    )
    a_op = MatrixOperator(
        np.array(problem.a, dtype=float),
        domain_norm=problem.domain_norm,
        codomain_norm=problem.codomain_norm,
    )
    available = ["section", "oracle"]
    if problem.domain_norm == "euclidean":
        available.insert(1, "formula")
    routes = _select_routes(available, opts.routes)
    entries, extras = [], {}
    for name in routes:
        if name == "section":
            lambda0, dist = best_approx_operator_1d(t_op, a_op)
            entries.append({"name": name, "value": dist, "lambda0": lambda0})
            extras.setdefault("lambda0", lambda0)
            extras.setdefault("coefficients", [lambda0])
        elif name == "formula":
            value = dist_formula_hilbert(t_op, a_op, seed=opts.seed, restarts=opts.restarts)
            entries.append({"name": name, "value": value})
        else:
            rep = primal_min_operator(t_op, [a_op], seed=opts.seed)
            entries.append(
                {
                    "name": name,
                    "value": rep.value,
                    "iterations": rep.iterations,
                    "converged": rep.converged,
                }
            )
            extras.setdefault("lambda0", float(rep.minimizer[0]))
            extras.setdefault("coefficients", _jsonable(rep.minimizer))
    return entries, extras, routes


def _dist_operator_nd(problem: OperatorNdProblem):
    opts = problem.options
    t_op = MatrixOperator(
        np.array(problem.t, dtype=float),
        domain_norm=problem.domain_norm,
        codomain_norm=problem.codomain_norm,
    )
    a_ops = [
        MatrixOperator(
            np.array(mat, dtype=float),
            domain_norm=problem.domain_norm,
            codomain_norm=problem.codomain_norm,
        )
        for mat in problem.basis
    ]
    routes = _select_routes(["oracle"], opts.routes)
    rep = primal_min_operator(t_op, a_ops, seed=opts.seed)
    entries = [
        {
            "name": "oracle",
            "value": rep.value,
            "iterations": rep.iterations,
            "converged": rep.converged,
        }
    ]
    extras = {"coefficients": _jsonable(rep.minimizer)}
    if problem.domain_norm == "euclidean":
        report = verify_ndim_certificate_hilbert(
            t_op, a_ops, rep.minimizer, beta_samples=6, seed=opts.seed
        )
        extras["certificate"] = {
            "holds": report.holds,
            "checked": report.checked,
            "failures": report.failures,
            "inconclusive": report.inconclusive,
            "degenerate": report.degenerate,
            "worst_violation": report.worst_violation,
        }
    return entries, extras, routes


_DIST_RUNNERS = {
    "point-subspace": _dist_point_subspace,
    "functional-subspace": _dist_functional_subspace,
    "operator-1d": _dist_operator_1d,
    "operator-nd": _dist_operator_nd,
}


def run_dist(problem) -> dict:
    """Solve a distance problem along its routes; returns the result document."""
    entries, extras, routes = _DIST_RUNNERS[problem.kind](problem)
    values = [entry["value"] for entry in entries]
    primary = values[0]
    scale = max(1.0, abs(primary))
    disagreement = (max(values) - min(values)) / scale if len(values) > 1 else 0.0
    document = {
        "schema": SCHEMA_VERSION,
        "kind": problem.kind,
        "distance": primary,
        "routes": entries,
        "max_rel_disagreement": disagreement,
        "options": _echo_options(problem.options, routes),
        "exit_code": 3 if disagreement > DISAGREEMENT_LIMIT else 0,
    }
    document.update(extras)
    return document


def _check_orthogonality(problem: OrthogonalityCheckProblem) -> dict:
    tol = problem.options.tolerance
    extras = {}
    if problem.space == "lp-vectors":
        exp = conjugate_exponent(problem.p)
        x = LpVector(np.array(problem.x, dtype=float), exp)
        y = LpVector(np.array(problem.y, dtype=float), exp)
        if problem.strong:
            sv = strong_bj_orthogonal(x, y, problem.delta, tol)
            verdict = sv.classification != "not-orthogonal"
            margin = sv.margin
            witness = None
            extras = {
                "classification": sv.classification,
                "certification_radius": sv.certification_radius,
            }
        else:
            v = bj_orthogonal_vectors(x, y, tol)
            verdict, margin, witness = v.is_orthogonal, v.margin, v.witness
    elif problem.space == "lp-functionals":
        dexp = conjugate_exponent(problem.p)
        f = Functional(np.array(problem.x, dtype=float), dexp)
        g = Functional(np.array(problem.y, dtype=float), dexp)
        v = bj_orthogonal_functionals(f, g, tol)
        verdict, margin, witness = v.is_orthogonal, v.margin, v.witness
    else:
        v = bj_orthogonal_matrices_hilbert(
            np.array(problem.t, dtype=float), np.array(problem.a, dtype=float), tol
        )
        verdict, margin, witness = v.is_orthogonal, v.margin, v.witness
    document = {
        "schema": SCHEMA_VERSION,
        "kind": problem.kind,
        "space": problem.space,
        "verdict": bool(verdict),
        "margin": float(margin),
        "witness": _witness_payload(witness),
        "options": _echo_options(problem.options, None),
        "exit_code": 0 if verdict else 1,
    }
    document.update(extras)
    return document


def _check_inequality(problem: InequalityCheckProblem) -> dict:
    a, b, c = problem.triple
    alpha, beta = problem.coefficients
    lhs, rhs, holds = verify_remark_inequality(a, b, c, alpha, beta, problem.p)
    return {
        "schema": SCHEMA_VERSION,
        "kind": problem.kind,
        "verdict": bool(holds),
        "lhs": lhs,
        "rhs": rhs,
        "options": _echo_options(problem.options, None),
        "exit_code": 0 if holds else 1,
    }


def run_check(problem) -> dict:
    """Evaluate a verification problem; returns the result document."""
    if problem.kind == "orthogonality-check":
        return _check_orthogonality(problem)
    return _check_inequality(problem)


def run_bench(options: ProblemOptions) -> dict:
    """Random lp distance problems solved along all three routes.

    Per case the reference value is the median route value and the reported
    accuracy is the largest relative deviation of any route from it; the
    document-level accuracy is the worst case seen.
    """
    rng = np.random.default_rng(options.seed)
    cases = []
    max_accuracy = 0.0
    started = time.perf_counter()
    for n, ks in BENCH_CASES:
        for k in ks:
            for p in BENCH_EXPONENTS:
                point = rng.standard_normal(n)
                basis = rng.standard_normal((n, k))
                exp = conjugate_exponent(p)
                x = LpVector(point, exp)
                y = Subspace(n, basis)
                case_started = time.perf_counter()
                values = {
                    "duality": dist_point_subspace_lp(
                        x, y, seed=options.seed, restarts=options.restarts
                    ).distance,
                    "classical": classical_duality_eval(
                        x, y, seed=options.seed, restarts=options.restarts
                    ),
                    "oracle": primal_min_lp(x, y).value,
                }
                elapsed = time.perf_counter() - case_started
                reference = float(np.median(list(values.values())))
                scale = max(1.0, abs(reference))
                accuracy = max(abs(v - reference) / scale for v in values.values())
                max_accuracy = max(max_accuracy, accuracy)
                cases.append(
                    {
                        "n": n,
                        "k": k,
                        "p": p,
                        "routes": values,
                        "reference": reference,
                        "accuracy": accuracy,
                        "elapsed_s": elapsed,
                    }
                )
    return {
        "schema": SCHEMA_VERSION,
        "kind": "bench",
        "cases": cases,
        "max_accuracy": max_accuracy,
        "total_elapsed_s": time.perf_counter() - started,
        "options": _echo_options(options, None),
        "exit_code": 3 if max_accuracy > DISAGREEMENT_LIMIT else 0,
    }
