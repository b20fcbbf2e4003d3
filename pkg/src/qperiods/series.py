"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class PeriodSeries:
    """``sum(coeffs[d] * t**d for d in range(len(coeffs)))``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def max_degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d: int) -> Fraction:
        return self.coeffs[d]

    def truncate(self, max_degree: int) -> "PeriodSeries":
        if max_degree > self.max_degree:
            raise ValueError(f"series only known to degree {self.max_degree}")
        return PeriodSeries(self.coeffs[: max_degree + 1])

    def __mul__(self, other: "PeriodSeries") -> "PeriodSeries":
        top = min(self.max_degree, other.max_degree)
        return PeriodSeries(tuple(
            sum((self.coeffs[a] * other.coeffs[d - a] for a in range(d + 1)), Fraction(0))
            for d in range(top + 1)
        ))

    def to_json(self) -> str:
        return json.dumps({"maxDegree": self.max_degree,
                           "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, payload) -> "PeriodSeries":
        data = json.loads(payload) if isinstance(payload, str) else payload
        coeffs = tuple(Fraction(c) for c in data["coeffs"])
        if "maxDegree" in data and data["maxDegree"] != len(coeffs) - 1:
            raise ValueError("maxDegree does not match the coefficient count")
        return cls(coeffs)

    def __str__(self) -> str:
        return ", ".join(str(c) for c in self.coeffs)
