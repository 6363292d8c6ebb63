"""Problem documents accepted by the CLI and the HTTP service.

Every document carries ``"schema": 1``, a ``"kind"`` discriminator, and an
optional ``"options"`` block; the remaining fields depend on the kind.
Matrices are row-major lists of rows, and a subspace basis is a list of
vectors (not a matrix), one entry per basis element.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Vector = list[float]
Matrix = list[Vector]

SCHEMA_VERSION = 1


class ProblemOptions(BaseModel):
    """Shared solver knobs; defaults are echoed back in every result."""

    model_config = ConfigDict(extra="forbid")

    tolerance: float = Field(default=1e-9, gt=0.0)
    seed: int = Field(default=42, ge=0)
    restarts: int = Field(default=8, ge=1)
    routes: list[str] | None = None


class ProblemBase(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    options: ProblemOptions = Field(default_factory=ProblemOptions)


def _require_rectangular(matrix: Matrix, name: str) -> None:
    if not matrix or not matrix[0]:
        raise ValueError(f"{name} must be a non-empty matrix")
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError(f"{name} rows must all have the same length")


class PointSubspaceProblem(ProblemBase):
    """Distance from a point to the span of basis vectors in lp."""

    kind: Literal["point-subspace"]
    p: float = Field(gt=1.0)
    point: Vector = Field(min_length=1)
    basis: list[Vector] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_shapes(self):
        n = len(self.point)
        for i, vec in enumerate(self.basis):
            if len(vec) != n:
                raise ValueError(f"basis[{i}] has length {len(vec)}, expected {n}")
        return self


class FunctionalSubspaceProblem(ProblemBase):
    """Distance from a functional to the span of constraint functionals.

    All functionals act on lq^n and are given by coefficient vectors; the
    dual norm is the conjugate-exponent norm of the coefficients.
    """

    kind: Literal["functional-subspace"]
    q: float = Field(gt=1.0)
    target: Vector = Field(min_length=1)
    constraints: list[Vector] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_shapes(self):
        n = len(self.target)
        for i, vec in enumerate(self.constraints):
            if len(vec) != n:
                raise ValueError(
                    f"constraints[{i}] has length {len(vec)}, expected {n}"
                )
        return self


class Operator1dProblem(ProblemBase):
    """Distance from matrix t to the line spanned by matrix a."""

    kind: Literal["operator-1d"]
    domain_norm: Literal["euclidean", "sup"] = "euclidean"
    codomain_norm: Literal["euclidean"] = "euclidean"
    t: Matrix
    a: Matrix

    @model_validator(mode="after")
    def _check_shapes(self):
        _require_rectangular(self.t, "t")
        _require_rectangular(self.a, "a")
        if (len(self.t), len(self.t[0])) != (len(self.a), len(self.a[0])):
            raise ValueError("t and a must have the same shape")
        return self


class OperatorNdProblem(ProblemBase):
    """Distance from matrix t to the span of several basis matrices."""

    kind: Literal["operator-nd"]
    domain_norm: Literal["euclidean", "sup"] = "euclidean"
    codomain_norm: Literal["euclidean"] = "euclidean"
    t: Matrix
    basis: list[Matrix] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_shapes(self):
        _require_rectangular(self.t, "t")
        shape = (len(self.t), len(self.t[0]))
        for i, mat in enumerate(self.basis):
            _require_rectangular(mat, f"basis[{i}]")
            if (len(mat), len(mat[0])) != shape:
                raise ValueError(f"basis[{i}] does not match the shape of t")
        return self


class OrthogonalityCheckProblem(ProblemBase):
    """Is x orthogonal to y (Birkhoff-James sense) in the given space?

    ``space`` selects the geometry: lp vectors, functionals on lp given by
    coefficients, or matrices between Euclidean spaces.  The lp spaces need
    ``p``, ``x`` and ``y``; the matrix space needs ``t`` and ``a``.  With
    ``strong`` set the verdict is refined to report whether the
    orthogonality survives excluding the trivial direction.
    """

    kind: Literal["orthogonality-check"]
    space: Literal["lp-vectors", "lp-functionals", "matrices-hilbert"]
    p: float | None = Field(default=None, gt=1.0)
    x: Vector | None = None
    y: Vector | None = None
    t: Matrix | None = None
    a: Matrix | None = None
    strong: bool = False
    delta: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.space in ("lp-vectors", "lp-functionals"):
            if self.p is None or self.x is None or self.y is None:
                raise ValueError(f"space {self.space!r} requires p, x and y")
            if len(self.x) != len(self.y):
                raise ValueError("x and y must have the same length")
            if not self.x:
                raise ValueError("x must be non-empty")
        else:
            if self.t is None or self.a is None:
                raise ValueError("space 'matrices-hilbert' requires t and a")
            _require_rectangular(self.t, "t")
            _require_rectangular(self.a, "a")
            if (len(self.t), len(self.t[0])) != (len(self.a), len(self.a[0])):
                raise ValueError("t and a must have the same shape")
            if self.strong:
                raise ValueError("strong refinement is only defined for vectors")
        if self.strong and self.space != "lp-vectors":
            raise ValueError("strong refinement is only defined for vectors")
        return self


class InequalityCheckProblem(ProblemBase):
    """Does the three-term power inequality hold for this instance?

    ``triple`` is the point (a, b, c) and ``coefficients`` the pair
    (alpha, beta) combining the two fixed directions subtracted from it.
    """

    kind: Literal["inequality-check"]
    p: float = Field(gt=1.0)
    triple: Vector = Field(min_length=3, max_length=3)
    coefficients: Vector = Field(min_length=2, max_length=2)


DistProblem = Annotated[
    Union[
        PointSubspaceProblem,
        FunctionalSubspaceProblem,
        Operator1dProblem,
        OperatorNdProblem,
    ],
    Field(discriminator="kind"),
]

CheckProblem = Annotated[
    Union[OrthogonalityCheckProblem, InequalityCheckProblem],
    Field(discriminator="kind"),
]


class BenchRequest(BaseModel):
    """Options accepted by the benchmark endpoint."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    options: ProblemOptions = Field(default_factory=ProblemOptions)
