"""One-parameter subgroups, coset charts, and the automorphism classification.

Four distinguished one-parameter subgroups are treated:

    H1 = {g(0, 0, k, 0)}        admissible for every shape parameter
    H2 = {g(k, 0, k, 0)}        admissible only for a != 1
    H3 = {g(k, k, 0, 0)}        admissible only for a != 1
    H4 = {g(0, 0, 0, k)}        never admissible: every left translation by an
                                element outside the slab fixes a coset

Each admissible subgroup comes with a global coset chart, an exact
decomposition of an arbitrary element into chart representative times
subgroup element, and a membership residual.  classify_subalgebra reduces an
arbitrary one-dimensional subalgebra of the slab to one of the canonical
generators by an explicit automorphism, or reports it as a normal
(inadmissible) direction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .group import (
    AlgebraVector,
    AutomorphismParams,
    GroupElement,
    GroupParam,
    coordinate_distance,
    mul,
)

__all__ = [
    "SubgroupId",
    "LoopPoint",
    "DecompResult",
    "SubalgebraKind",
    "SubalgebraClass",
    "InadmissibleSubgroupError",
    "admissible_subgroups",
    "subgroup_generator",
    "subgroup_element",
    "embed",
    "decompose",
    "membership_residual",
    "in_subgroup",
    "classify_subalgebra",
    "classify_direction",
    "fixed_point_witness",
]


class InadmissibleSubgroupError(ValueError):
    """Subgroup not available for this shape parameter."""


class SubgroupId(enum.Enum):
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    H4 = "H4"

    def admissible(self, p: GroupParam) -> bool:
        """True when a sharply transitive section over this subgroup can exist."""
        if self in (SubgroupId.H2, SubgroupId.H3):
            return p.a != 1
        return self is SubgroupId.H1

    def check_defined(self, p: GroupParam) -> None:
        if self in (SubgroupId.H2, SubgroupId.H3) and p.a == 1:
            raise InadmissibleSubgroupError(f"{self.value} coincides with a weight space at a = 1")


@dataclass(frozen=True)
class LoopPoint:
    """Coordinates in a coset chart; also the points of the derived loops."""

    x: float
    y: float
    z: float

    @property
    def coords(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @classmethod
    def origin(cls) -> "LoopPoint":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class DecompResult:
    rep: LoopPoint
    k: float


def admissible_subgroups(p: GroupParam) -> list[SubgroupId]:
    return [s for s in (SubgroupId.H1, SubgroupId.H2, SubgroupId.H3) if s.admissible(p)]


def subgroup_generator(sub: SubgroupId) -> AlgebraVector:
    """Tangent generator: the subgroup is the exponential of its span."""
    return {
        SubgroupId.H1: AlgebraVector(0.0, 0.0, 1.0, 0.0),
        SubgroupId.H2: AlgebraVector(1.0, 0.0, 1.0, 0.0),
        SubgroupId.H3: AlgebraVector(1.0, 1.0, 0.0, 0.0),
        SubgroupId.H4: AlgebraVector(0.0, 0.0, 0.0, 1.0),
    }[sub]


def subgroup_element(sub: SubgroupId, k: float) -> GroupElement:
    if sub is SubgroupId.H1:
        return GroupElement(0.0, 0.0, k, 0.0)
    if sub is SubgroupId.H2:
        return GroupElement(k, 0.0, k, 0.0)
    if sub is SubgroupId.H3:
        return GroupElement(k, k, 0.0, 0.0)
    return GroupElement(0.0, 0.0, 0.0, k)


def embed(p: GroupParam, sub: SubgroupId, m: LoopPoint) -> GroupElement:
    """Chart representative of the coset m.  H1/H2: g(x,y,0,z); H3: g(x,0,y,z); H4: g(x,y,w,0)."""
    sub.check_defined(p)
    if sub in (SubgroupId.H1, SubgroupId.H2):
        return GroupElement(m.x, m.y, 0.0, m.z)
    if sub is SubgroupId.H3:
        return GroupElement(m.x, 0.0, m.y, m.z)
    return GroupElement(m.x, m.y, m.z, 0.0)


def decompose(p: GroupParam, sub: SubgroupId, g: GroupElement) -> DecompResult:
    """Unique splitting g = embed(rep) * subgroup_element(k)."""
    sub.check_defined(p)
    if sub is SubgroupId.H1:
        return DecompResult(
            LoopPoint(g.x1, g.x2 - g.x4 * g.x3, g.x4), math.exp(-g.x4) * g.x3
        )
    if sub is SubgroupId.H2:
        return DecompResult(
            LoopPoint(g.x1 - math.exp((p.a - 1.0) * g.x4) * g.x3, g.x2 - g.x4 * g.x3, g.x4),
            math.exp(-g.x4) * g.x3,
        )
    if sub is SubgroupId.H3:
        return DecompResult(
            LoopPoint(g.x1 - math.exp((p.a - 1.0) * g.x4) * g.x2, g.x3, g.x4),
            math.exp(-g.x4) * g.x2,
        )
    return DecompResult(LoopPoint(g.x1, g.x2, g.x3), g.x4)


def _hyb(u: float, v: float) -> float:
    return abs(u - v) / max(1.0, abs(u), abs(v))


def membership_residual(sub: SubgroupId, g: GroupElement) -> float:
    """How far g is from satisfying the subgroup's defining relations (hybrid metric)."""
    if sub is SubgroupId.H1:
        return max(_hyb(g.x1, 0.0), _hyb(g.x2, 0.0), _hyb(g.x4, 0.0))
    if sub is SubgroupId.H2:
        return max(_hyb(g.x2, 0.0), _hyb(g.x4, 0.0), _hyb(g.x1, g.x3))
    if sub is SubgroupId.H3:
        return max(_hyb(g.x3, 0.0), _hyb(g.x4, 0.0), _hyb(g.x1, g.x2))
    return max(_hyb(g.x1, 0.0), _hyb(g.x2, 0.0), _hyb(g.x3, 0.0))


def in_subgroup(sub: SubgroupId, g: GroupElement, tol: float = 1e-9) -> bool:
    return membership_residual(sub, g) <= tol


class SubalgebraKind(enum.Enum):
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    NORMAL_INADMISSIBLE = "NormalInadmissible"
    NOT_IN_COMMUTATOR = "NotInCommutator"


@dataclass(frozen=True)
class SubalgebraClass:
    kind: SubalgebraKind
    automorphism: Optional[AutomorphismParams]
    scale: Optional[float] = None  # image of the generator is scale * canonical generator


def classify_subalgebra(p: GroupParam, b1: float, b2: float, b3: float) -> SubalgebraClass:
    """Classify the span of b1*e3 + b2*e1 + b3*e2 up to automorphisms.

    Conjugation-stable one-dimensional subalgebras of the slab reduce to the
    generators of H1, H2 or H3; directions that remain one-dimensional ideals
    are flagged NormalInadmissible (a normal stabilizer cannot carry a sharply
    transitive section).  For a != 1 the returned automorphism is normalized
    to l = 1.
    """
    if b1 == 0 and b2 == 0 and b3 == 0:
        raise ValueError("zero generator spans no subalgebra")
    if p.a == 1:
        if b1 == 0:
            return SubalgebraClass(SubalgebraKind.NORMAL_INADMISSIBLE, None)
        phi = AutomorphismParams(
            variant="merged", k1=1.0, k2=0.0, l=1.0, n1=-b2 / b1, n2=-b3 / b1
        )
        return SubalgebraClass(SubalgebraKind.H1, phi, scale=b1)
    if b1 != 0 and b2 == 0:
        phi = AutomorphismParams(variant="generic", k1=1.0, l=1.0, n2=-b3 / b1)
        return SubalgebraClass(SubalgebraKind.H1, phi, scale=b1)
    if b1 != 0 and b2 != 0:
        phi = AutomorphismParams(variant="generic", k1=b1 / b2, l=1.0, n2=-b3 / b1)
        return SubalgebraClass(SubalgebraKind.H2, phi, scale=b1)
    if b2 * b3 != 0:
        phi = AutomorphismParams(variant="generic", k1=b3 / b2, l=1.0)
        return SubalgebraClass(SubalgebraKind.H3, phi, scale=b3)
    return SubalgebraClass(SubalgebraKind.NORMAL_INADMISSIBLE, None)


def classify_direction(p: GroupParam, v: AlgebraVector) -> SubalgebraClass:
    """Classify an arbitrary tangent direction; c4 != 0 leaves the commutator slab."""
    if v.c4 != 0:
        return SubalgebraClass(SubalgebraKind.NOT_IN_COMMUTATOR, None)
    return classify_subalgebra(p, v.c3, v.c1, v.c2)


def canonical_span_generator(kind: SubalgebraKind) -> AlgebraVector:
    if kind is SubalgebraKind.H1:
        return AlgebraVector(0.0, 0.0, 1.0, 0.0)
    if kind is SubalgebraKind.H2:
        return AlgebraVector(1.0, 0.0, 1.0, 0.0)
    if kind is SubalgebraKind.H3:
        return AlgebraVector(1.0, 1.0, 0.0, 0.0)
    raise ValueError("no canonical generator for inadmissible classes")


def fixed_point_witness(p: GroupParam, g: GroupElement) -> LoopPoint:
    """Coset fixed by left translation with g on the chart of the slab cosets.

    Requires g.x4 != 0; the translation then fixes the coset of
    (x, y, w) with x = g1/(1-e^{a*g4}), w = g3/(1-e^{g4}),
    y = (g2 + g4*e^{g4}*w)/(1-e^{g4}).  Verified by the identity
    mul(g, embed(H4, m)) = mul(embed(H4, m), subgroup_element(H4, g.x4)).
    """
    if g.x4 == 0:
        raise ValueError("translations by slab elements need not fix a coset")
    # 1 - e^s = -expm1(s), accurate for small exponents
    x = -g.x1 / math.expm1(p.a * g.x4)
    w = -g.x3 / math.expm1(g.x4)
    y = -(g.x2 + g.x4 * math.exp(g.x4) * w) / math.expm1(g.x4)
    return LoopPoint(x, y, w)


def fixed_point_residual(p: GroupParam, g: GroupElement, m: LoopPoint) -> float:
    """Residual of the fixed-coset identity for a claimed witness m."""
    rep = embed(p, SubgroupId.H4, m)
    lhs = mul(p, g, rep)
    rhs = mul(p, rep, subgroup_element(SubgroupId.H4, g.x4))
    return coordinate_distance(lhs.coords, rhs.coords)
