"""Normalizer sampling and the multiplication-group obstruction certificate.

The group cannot be the multiplication group of a connected proper loop.
The computable ingredients: the normalizer of each admissible one-parameter
subgroup is exactly the commutator slab {x4 = 0} (3-dimensional), and the
centre is trivial.  If the group were such a multiplication group with the
subgroup as inner mapping group, the normalizer of the inner mapping group
would have to equal inner mappings times centre, which is 1-dimensional.
The certificate records both sampled facts and the resulting contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .group import (
    E1,
    E2,
    E3,
    E4,
    AlgebraVector,
    GroupElement,
    GroupParam,
    central_defect,
    conjugate,
    standard_center_probes,
)
from .subgroups import (
    InadmissibleSubgroupError,
    SubgroupId,
    admissible_subgroups,
    membership_residual,
    subgroup_element,
)

__all__ = [
    "NormalizerRecord",
    "Theorem2Certificate",
    "normalizes",
    "theorem2_certificate",
    "CENTER_TEST_DIRECTIONS",
]

# spans every line of the algebra once combined: each basis direction plus
# the diagonal that distinguishes e2 from e3 scaling
CENTER_TEST_DIRECTIONS: tuple[AlgebraVector, ...] = (
    E1,
    E2,
    E3,
    E4,
    AlgebraVector(0.0, 1.0, 1.0, 0.0),
)


def normalizes(p: GroupParam, g: GroupElement, sub: SubgroupId, tol: float = 1e-10) -> bool:
    """Does conjugation by g keep the subgroup's generator inside the subgroup?"""
    if not sub.admissible(p):
        raise InadmissibleSubgroupError(f"{sub.value} is not admissible for a = {p.a:g}")
    conj = conjugate(p, g, subgroup_element(sub, 1.0))
    return membership_residual(sub, conj) <= tol


@dataclass(frozen=True)
class NormalizerRecord:
    subgroup: str
    slab_samples: int
    slab_normalizing: int
    off_slab_samples: int
    off_slab_normalizing: int

    @property
    def normalizer_equals_commutator(self) -> bool:
        return (
            self.slab_normalizing == self.slab_samples
            and self.off_slab_normalizing == 0
        )

    @property
    def normalizer_dim_estimate(self) -> Optional[int]:
        """Sampled surrogate: 3 when exactly the slab normalizes; None when inconclusive."""
        return 3 if self.normalizer_equals_commutator else None

    def to_dict(self) -> dict:
        return {
            "subgroup": self.subgroup,
            "slab_samples": self.slab_samples,
            "slab_normalizing": self.slab_normalizing,
            "off_slab_samples": self.off_slab_samples,
            "off_slab_normalizing": self.off_slab_normalizing,
            "normalizer_equals_commutator": self.normalizer_equals_commutator,
            "normalizer_dim_estimate": self.normalizer_dim_estimate,
        }


@dataclass(frozen=True)
class Theorem2Certificate:
    a: float
    records: tuple[NormalizerRecord, ...]
    center_trivial: bool
    contradiction: bool
    min_central_defect: float
    seed: int
    notes: str

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "records": [r.to_dict() for r in self.records],
            "center_trivial": self.center_trivial,
            "contradiction": self.contradiction,
            "min_central_defect": self.min_central_defect,
            "seed": self.seed,
            "notes": self.notes,
        }


def theorem2_certificate(
    p: GroupParam,
    n_samples: int = 1000,
    seed: int = 0,
    xy_half_width: float = 5.0,
    off_slab_min: float = 1e-3,
    off_slab_max: float = 3.0,
    defect_threshold: float = 1e-6,
) -> Theorem2Certificate:
    """Sampled normalizer dichotomy plus centre triviality, combined into the obstruction.

    Half the samples lie in the slab x4 = 0 (all must normalize every
    admissible subgroup), half have |x4| in [off_slab_min, off_slab_max]
    (none may normalize).  The dimension estimate 3 is a sampled surrogate,
    not a proof; the contradiction field states the incompatibility with a
    1-dimensional normalizer that the inner-mapping-group hypothesis would
    force.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    subs = admissible_subgroups(p)
    n_slab = n_samples // 2
    n_off = n_samples - n_slab
    slab = []
    for _ in range(n_slab):
        x1, x2, x3 = rng.uniform(-xy_half_width, xy_half_width, 3)
        slab.append(GroupElement(float(x1), float(x2), float(x3), 0.0))
    off = []
    for _ in range(n_off):
        x1, x2, x3 = rng.uniform(-xy_half_width, xy_half_width, 3)
        x4 = float(rng.uniform(off_slab_min, off_slab_max)) * (
            1.0 if rng.uniform() < 0.5 else -1.0
        )
        off.append(GroupElement(float(x1), float(x2), float(x3), x4))
    records = []
    for sub in subs:
        slab_ok = sum(1 for g in slab if normalizes(p, g, sub))
        off_ok = sum(1 for g in off if normalizes(p, g, sub))
        records.append(
            NormalizerRecord(
                subgroup=sub.value,
                slab_samples=len(slab),
                slab_normalizing=slab_ok,
                off_slab_samples=len(off),
                off_slab_normalizing=off_ok,
            )
        )
    probes = standard_center_probes(p)
    defects = [central_defect(p, v, probes) for v in CENTER_TEST_DIRECTIONS]
    min_defect = min(defects)
    center_trivial = min_defect > defect_threshold
    contradiction = center_trivial and all(
        r.normalizer_equals_commutator for r in records
    )
    return Theorem2Certificate(
        a=p.a,
        records=tuple(records),
        center_trivial=center_trivial,
        contradiction=contradiction,
        min_central_defect=min_defect,
        seed=seed,
        notes=(
            "hypothesis: were the group a loop multiplication group with an "
            "admissible stabilizer as inner mapping group, the normalizer of "
            "the stabilizer would be stabilizer times centre (1-dimensional); "
            "sampled normalizer is the 3-dimensional commutator slab"
        ),
    )
