"""Constructors for the standard toric and product-of-projective-space potentials."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import QPeriodsError
from .laurent import LaurentPoly


def rank(vectors) -> int:
    """Rank over the rationals (Gaussian elimination on Fractions)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class ToricRaySet:
    dim: int
    rays: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if self.dim < 1 or any(len(r) != self.dim for r in rays):
            raise QPeriodsError(f"rays must all have length {self.dim}")
        for r in rays:
            if math.gcd(*r) != 1:
                raise QPeriodsError(f"ray {list(r)} is not primitive")
        if len(set(rays)) != len(rays):
            raise QPeriodsError("duplicate ray")
        if rank(rays) != self.dim:
            raise QPeriodsError("rays do not span the lattice over Q")

    @classmethod
    def from_json(cls, payload) -> "ToricRaySet":
        rays = json.loads(payload) if isinstance(payload, str) else payload
        if not rays:
            raise QPeriodsError("empty ray set")
        return cls(len(rays[0]), tuple(tuple(r) for r in rays))


@dataclass(frozen=True)
class ProjectiveProductSpec:
    """Factor sizes ``k_1..k_s`` of ``CP^{k_1} x ... x CP^{k_s}``."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(k) for k in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors or any(k < 1 for k in factors):
            raise QPeriodsError("need at least one factor, each of size >= 1")

    @property
    def dim(self) -> int:
        return sum(self.factors)

    @classmethod
    def from_json(cls, payload) -> "ProjectiveProductSpec":
        data = json.loads(payload) if isinstance(payload, str) else payload
        return cls(tuple(data))

    @classmethod
    def parse(cls, text: str) -> "ProjectiveProductSpec":
        """Accept ``cp:2,1`` or ``2,1`` or a JSON array."""
        text = text.strip()
        if text.startswith("["):
            return cls.from_json(text)
        if text.lower().startswith("cp:"):
            text = text[3:]
        try:
            return cls(tuple(int(p) for p in text.split(",") if p.strip()))
        except ValueError as exc:
            raise QPeriodsError(f"bad projective product spec {text!r}") from exc


def hori_vafa(rays) -> LaurentPoly:
    """Sum of ``x**v`` over the rays of the fan."""
    if not isinstance(rays, ToricRaySet):
        rays = ToricRaySet.from_json(list(rays))
    return LaurentPoly(rays.dim, {r: 1 for r in rays.rays})


def product_projective_potential(spec) -> LaurentPoly:
    if not isinstance(spec, ProjectiveProductSpec):
        spec = ProjectiveProductSpec(tuple(spec))
    n = spec.dim
    terms = {}
    offset = 0
    for k in spec.factors:
        for j in range(k):
            e = [0] * n
            e[offset + j] = 1
            terms[tuple(e)] = 1
        e = [0] * n
        for j in range(k):
            e[offset + j] = -1
        terms[tuple(e)] = 1
        offset += k
    return LaurentPoly(n, terms)


def catalog() -> dict[str, LaurentPoly]:
    """Named potentials used by the checks in this package."""
    return {
        "product-torus": LaurentPoly(2, {(1, 0): 1, (0, 1): 1}),
        "cp1": product_projective_potential([1]),
        "cp2": product_projective_potential([2]),
        "cp3": product_projective_potential([3]),
        "cp1xcp1": product_projective_potential([1, 1]),
        "cp2xcp1": product_projective_potential([2, 1]),
    }


CATALOG_SPECS = {
    "cp1": (1,),
    "cp2": (2,),
    "cp3": (3,),
    "cp1xcp1": (1, 1),
    "cp2xcp1": (2, 1),
}
