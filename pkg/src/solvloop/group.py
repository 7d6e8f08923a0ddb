"""Arithmetic in a one-parameter family of 4-dimensional solvable matrix groups.

An element with coordinates (x1, x2, x3, x4) is the upper-triangular matrix

    [ e^(a*x4)   0          0          x1 ]
    [ 0          e^x4       x4*e^x4    x2 ]
    [ 0          0          e^x4       x3 ]
    [ 0          0          0          1  ]

for a fixed real shape parameter a != 0.  The group is solvable; its
commutator subgroup is the abelian slab {x4 = 0}.  This module provides the
product, inverse and matrix conversions, the Lie algebra (brackets, matrix
representation, exponential), the automorphisms fixing the grading direction,
and a sampled witness that the centre is trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GroupParam",
    "GroupElement",
    "AlgebraVector",
    "AutomorphismParams",
    "VariantMismatchError",
    "IDENTITY",
    "E1",
    "E2",
    "E3",
    "E4",
    "coordinate_distance",
    "mul",
    "inv",
    "conjugate",
    "as_matrix",
    "from_matrix",
    "algebra_matrix",
    "bracket",
    "structure_constants",
    "commutator_oracle",
    "exp_alg",
    "apply_automorphism",
    "automorphism_matrix",
    "central_defect",
    "standard_center_probes",
]


class VariantMismatchError(ValueError):
    """Automorphism parameters use a variant not available for this shape parameter."""


@dataclass(frozen=True)
class GroupParam:
    """Shape parameter of the group family.  a = 0 is excluded (the matrix form degenerates)."""

    a: float

    def __post_init__(self) -> None:
        if self.a == 0:
            raise ValueError("shape parameter a must be nonzero")
        if not math.isfinite(self.a):
            raise ValueError("shape parameter a must be finite")


@dataclass(frozen=True)
class GroupElement:
    x1: float
    x2: float
    x3: float
    x4: float

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(0.0, 0.0, 0.0, 0.0)


IDENTITY = GroupElement.identity()


@dataclass(frozen=True)
class AlgebraVector:
    """Tangent vector c1*e1 + c2*e2 + c3*e3 + c4*e4 at the identity."""

    c1: float
    c2: float
    c3: float
    c4: float

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    def scaled(self, factor: float) -> "AlgebraVector":
        return AlgebraVector(factor * self.c1, factor * self.c2, factor * self.c3, factor * self.c4)

    def plus(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(
            self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3, self.c4 + other.c4
        )


E1 = AlgebraVector(1.0, 0.0, 0.0, 0.0)
E2 = AlgebraVector(0.0, 1.0, 0.0, 0.0)
E3 = AlgebraVector(0.0, 0.0, 1.0, 0.0)
E4 = AlgebraVector(0.0, 0.0, 0.0, 1.0)


def coordinate_distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Hybrid absolute/relative distance: max_i |u_i - v_i| / max(1, |u_i|, |v_i|).

    Behaves like an absolute bound near the origin and like a relative bound
    for large coordinates, so a single tolerance is meaningful across the
    exponential coordinate growth of the group.
    """
    if len(u) != len(v):
        raise ValueError("coordinate tuples must have equal length")
    worst = 0.0
    for a, b in zip(u, v):
        d = abs(a - b) / max(1.0, abs(a), abs(b))
        if d > worst:
            worst = d
    return worst


def mul(p: GroupParam, g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product, read off from the matrix product of the two representatives."""
    ea = math.exp(p.a * g.x4)
    e = math.exp(g.x4)
    return GroupElement(
        g.x1 + ea * h.x1,
        g.x2 + e * h.x2 + g.x4 * e * h.x3,
        g.x3 + e * h.x3,
        g.x4 + h.x4,
    )


def inv(p: GroupParam, g: GroupElement) -> GroupElement:
    ea = math.exp(-p.a * g.x4)
    e = math.exp(-g.x4)
    return GroupElement(
        -ea * g.x1,
        -e * g.x2 + g.x4 * e * g.x3,
        -e * g.x3,
        -g.x4,
    )


def conjugate(p: GroupParam, g: GroupElement, h: GroupElement) -> GroupElement:
    """g * h * g^-1."""
    return mul(p, mul(p, g, h), inv(p, g))


def as_matrix(p: GroupParam, g: GroupElement) -> np.ndarray:
    e = math.exp(g.x4)
    return np.array(
        [
            [math.exp(p.a * g.x4), 0.0, 0.0, g.x1],
            [0.0, e, g.x4 * e, g.x2],
            [0.0, 0.0, e, g.x3],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def from_matrix(p: GroupParam, m: np.ndarray, tol: float = 1e-9) -> GroupElement:
    """Invert as_matrix.  Raises ValueError if m does not have the group's shape.

    The check is relative at tolerance tol; it guards against calling this on
    matrices that left the coordinate patch (which products and exponentials
    of patch members never do).
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if m[2, 2] <= 0.0:
        raise ValueError("matrix (3,3) entry must be positive")
    x4 = math.log(m[2, 2])
    g = GroupElement(float(m[0, 3]), float(m[1, 3]), float(m[2, 3]), x4)
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - as_matrix(p, g)).max()) > tol * scale:
        raise ValueError("matrix is not in the group's coordinate patch")
    return g


def algebra_matrix(p: GroupParam, v: AlgebraVector) -> np.ndarray:
    """Tangent matrix whose one-parameter exponential has velocity v at the identity."""
    return np.array(
        [
            [p.a * v.c4, 0.0, 0.0, v.c1],
            [0.0, v.c4, v.c4, v.c2],
            [0.0, 0.0, v.c4, v.c3],
            [0.0, 0.0, 0.0, 0.0],
        ]
    )


def bracket(p: GroupParam, u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    """Lie bracket from the structure table.

    Nonzero basis brackets: [e1,e4] = a*e1, [e2,e4] = e2, [e3,e4] = e2 + e3.
    Bilinear extension; the result always lies in span(e1, e2, e3).
    """
    s = u.c1 * v.c4 - u.c4 * v.c1
    t = u.c2 * v.c4 - u.c4 * v.c2
    r = u.c3 * v.c4 - u.c4 * v.c3
    return AlgebraVector(p.a * s, t + r, r, 0.0)


def structure_constants(p: GroupParam) -> np.ndarray:
    """c[i][j][k] = coefficient of e_(k+1) in [e_(i+1), e_(j+1)]."""
    c = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            u = AlgebraVector(*(1.0 if n == i else 0.0 for n in range(4)))
            v = AlgebraVector(*(1.0 if n == j else 0.0 for n in range(4)))
            c[i, j, :] = bracket(p, u, v).coords
    return c


def _flip(v: AlgebraVector) -> AlgebraVector:
    return AlgebraVector(v.c1, v.c2, v.c3, -v.c4)


def commutator_oracle(p: GroupParam, u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    """Bracket computed independently as a matrix commutator.

    The matrix model realizes the structure table with the grading direction
    reversed, so both arguments have their fourth coefficient negated before
    the commutator AB - BA is taken.  The commutator always lands in
    span(e1, e2, e3), where the flip is the identity, so the result compares
    directly against bracket().
    """
    a = algebra_matrix(p, _flip(u))
    b = algebra_matrix(p, _flip(v))
    c = a @ b - b @ a
    return AlgebraVector(float(c[0, 3]), float(c[1, 3]), float(c[2, 3]), float(c[2, 2]))


def _expm(m: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential, adequate for these tiny nilpotent-plus-diagonal matrices."""
    norm = float(np.abs(m).sum(axis=1).max())
    squarings = 0
    if norm > 0.25:
        squarings = max(0, math.ceil(math.log2(norm / 0.25)))
    scaled = m / (2.0**squarings)
    result = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    k = 1
    while True:
        term = term @ scaled / k
        result = result + term
        if float(np.abs(term).max()) < tol * 1e-3:
            break
        k += 1
        if k > 60:
            raise ArithmeticError("matrix exponential series failed to converge")
    for _ in range(squarings):
        result = result @ result
    return result


def exp_alg(p: GroupParam, v: AlgebraVector, t: float = 1.0) -> GroupElement:
    """One-parameter subgroup through the identity with coordinate velocity v, at time t."""
    return from_matrix(p, _expm(t * algebra_matrix(p, v)))


@dataclass(frozen=True)
class AutomorphismParams:
    """Parameters of an automorphism fixing the grading direction modulo the slab.

    Columns of the matrix are the images of e1..e4.  The generic variant
    (valid for every shape parameter) is

        e1 -> k1*e1,  e2 -> l*e2,  e3 -> n2*e2 + l*e3,  e4 -> f1*e1 + f2*e2 + f3*e3 + e4

    with k1*l != 0.  At a = 1 the weight spaces of e1 and e3 merge and two
    extra entries open up: e1 may also hit e2 (k2) and e3 may hit e1 (n1).
    """

    variant: str  # "generic" or "merged"
    k1: float = 1.0
    k2: float = 0.0
    l: float = 1.0
    n1: float = 0.0
    n2: float = 0.0
    f1: float = 0.0
    f2: float = 0.0
    f3: float = 0.0

    def __post_init__(self) -> None:
        if self.variant not in ("generic", "merged"):
            raise ValueError("variant must be 'generic' or 'merged'")
        if self.k1 * self.l == 0:
            raise ValueError("k1 and l must be nonzero (the map must be invertible)")
        if self.variant == "generic" and (self.k2 != 0 or self.n1 != 0):
            raise ValueError("k2 and n1 must vanish in the generic variant")

    @classmethod
    def identity(cls, variant: str = "generic") -> "AutomorphismParams":
        return cls(variant=variant)


def automorphism_matrix(p: GroupParam, phi: AutomorphismParams) -> np.ndarray:
    if phi.variant == "merged" and p.a != 1:
        raise VariantMismatchError("merged variant automorphisms exist only at a = 1")
    return np.array(
        [
            [phi.k1, 0.0, phi.n1, phi.f1],
            [phi.k2, phi.l, phi.n2, phi.f2],
            [0.0, 0.0, phi.l, phi.f3],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def apply_automorphism(p: GroupParam, phi: AutomorphismParams, v: AlgebraVector) -> AlgebraVector:
    image = automorphism_matrix(p, phi) @ v.as_array()
    return AlgebraVector(*image)


def standard_center_probes(p: GroupParam) -> list[GroupElement]:
    """Probe set that separates every nonzero tangent direction from the centre."""
    return [exp_alg(p, E4), exp_alg(p, E1), exp_alg(p, E3)]


def central_defect(
    p: GroupParam,
    v: AlgebraVector,
    probes: Iterable[GroupElement],
    ts: Sequence[float] = (0.25, 0.5, 1.0),
) -> float:
    """Largest commutation failure of exp(t*v) against the probes.

    Zero for v = 0; strictly positive for every nonzero v once the probes
    include points with x4 != 0, x1 != 0 and x3 != 0, which certifies a
    trivial centre on the sampled directions.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("probe set must be nonempty")
    worst = 0.0
    for t in ts:
        g = exp_alg(p, v, t)
        for q in probes:
            d = coordinate_distance(mul(p, g, q).coords, mul(p, q, g).coords)
            if d > worst:
                worst = d
    return worst
