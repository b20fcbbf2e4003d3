"""Quantum periods of projective products, mirror checks and index arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import QPeriodsError, StretchUniquenessError
from .laurent import LaurentPoly, period
from .potentials import ProjectiveProductSpec
from .series import PeriodSeries

__all__ = [
    "PeriodSeries", "IndexQuery", "MirrorReport", "StretchResult",
    "known_quantum_period", "mirror_check", "desc_enum_to_psi",
    "normalization_consistency", "stabilization_factors", "gluing_factor_identity",
    "dim_tangency_moduli", "dim_descendant_moduli", "degree_dictionary",
    "stretch_index", "stretch_solver",
]


@dataclass(frozen=True)
class IndexQuery:
    n: int
    d: int
    m: int
    k: int
    degs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1 or self.d < 0 or self.m < 1 or self.k < 1:
            raise QPeriodsError("need n >= 1, d >= 0, m >= 1, k >= 1")


def _projective_series(k: int, max_degree: int) -> PeriodSeries:
    coeffs = [Fraction(0)] * (max_degree + 1)
    for r in range(max_degree // (k + 1) + 1):
        coeffs[(k + 1) * r] = Fraction(1, math.factorial(r) ** (k + 1))
    return PeriodSeries(tuple(coeffs))


def known_quantum_period(spec, max_degree: int) -> PeriodSeries:
    """Quantum period of a product of projective spaces up to ``t**max_degree``.

    For ``CP^k`` the coefficient of ``t**((k+1)r)`` is ``1/(r!)**(k+1)``;
    products multiply as power series.
    """
    if not isinstance(spec, ProjectiveProductSpec):
        spec = ProjectiveProductSpec(tuple(spec))
    if max_degree < 0:
        raise QPeriodsError("max_degree must be nonnegative")
    series = None
    for k in spec.factors:
        s = _projective_series(k, max_degree)
        series = s if series is None else series * s
    return series


@dataclass
class MirrorReport:
    ok: bool
    max_degree: int
    mismatch_degree: int | None = None
    period: int | None = None
    expected: Fraction | None = None
    checked: list[int] = field(default_factory=list)

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return (f"MISMATCH at d={self.mismatch_degree}: "
                f"period={self.period}, d!*c_d={self.expected}")


def mirror_check(W: LaurentPoly, G: PeriodSeries, max_degree: int) -> MirrorReport:
    """Compare ``period(W, d)`` with ``d! * G[d]`` for ``d = 0..max_degree``."""
    if G.max_degree < max_degree:
        raise QPeriodsError(f"series only known to degree {G.max_degree}")
    report = MirrorReport(ok=True, max_degree=max_degree)
    for d in range(max_degree + 1):
        phi = period(W, d)
        expected = math.factorial(d) * G[d]
        report.checked.append(d)
        if phi != expected:
            report.ok = False
            report.mismatch_degree = d
            report.period = phi
            report.expected = expected
            break
    return report


def desc_enum_to_psi(value, d: int, direction: str = "to-bullet") -> Fraction:
    """Convert between the enumerative count and the psi-class invariant.

    The enumerative version is ``(d-2)!`` times the psi-class version;
    ``direction`` is ``"to-bullet"`` (multiply) or ``"from-bullet"`` (divide).
    """
    if d < 2:
        raise QPeriodsError("degree must be at least 2")
    factor = math.factorial(d - 2)
    value = Fraction(value)
    if direction in ("to-bullet", "to_bullet"):
        return value * factor
    if direction in ("from-bullet", "from_bullet"):
        return value / factor
    raise QPeriodsError(f"unknown direction {direction!r}")


def normalization_consistency(d: int) -> bool:
    """``d! == d (d-1) (d-2)!``: the two forms of the periods identity agree."""
    if d < 2:
        raise QPeriodsError("degree must be at least 2")
    return math.factorial(d) == d * (d - 1) * math.factorial(d - 2)


def stabilization_factors(N: int, d: int, p: int) -> tuple[int, int]:
    """Forgetful-map degrees for ``p`` distinct divisors and for one divisor.

    Returns ``((N d)**p, (N d)(N d - 1)...(N d - p + 1))``.
    """
    if N < 1 or d < 2:
        raise QPeriodsError("need N >= 1 and d >= 2")
    nd = N * d
    if not 2 <= p <= nd:
        raise QPeriodsError(f"p must lie in [2, {nd}]")
    return nd**p, math.perm(nd, p)


def gluing_factor_identity(N: int, d: int) -> bool:
    if N < 1 or d < 2:
        raise QPeriodsError("need N >= 1 and d >= 2")
    # multinomial (Nd; N,...,N) as a product of binomials
    multinomial = 1
    remaining = N * d
    for _ in range(d):
        multinomial *= math.comb(remaining, N)
        remaining -= N
    lhs = (Fraction(1, math.factorial(N * d)) * Fraction(1, math.factorial(d))
           * multinomial * math.factorial(N) ** d)
    return lhs == Fraction(1, math.factorial(d))


def dim_tangency_moduli(d: int, m: int) -> int:
    if d < 0 or m < 1:
        raise QPeriodsError("need d >= 0 and m >= 1")
    return 2 * d - 2 * (m + 1)


def dim_descendant_moduli(k: int, m: int, degs) -> int:
    if k < 1 or m < 1:
        raise QPeriodsError("need k >= 1 and m >= 1")
    degs = list(degs)
    if len(degs) != k:
        raise QPeriodsError(f"expected {k} input degrees, got {len(degs)}")
    return 2 * (k - 1) - 2 * m - sum(degs)


def degree_dictionary(mu: int, n: int) -> tuple[int, int]:
    """Degrees ``(|check gamma|, |hat gamma|) = (n - mu, n - 1 - mu)``."""
    return n - mu, n - 1 - mu


def stretch_index(n: int, d: int, mus) -> int:
    """Fredholm index of the component carrying the tangency after stretching."""
    p = len(mus)
    return (n - 3) * (2 - p) + sum(mus) - (2 * n - 2) - 2 * (d - 2)


@dataclass(frozen=True)
class StretchResult:
    p: int
    mus: tuple[int, ...]
    index: int


def stretch_solver(n: int, d: int) -> StretchResult:
    """Enumerate puncture data with nonnegative index; expect exactly one.

    Searches ``1 <= p <= d`` and ``0 <= mu_i <= n - 1``.
    """
    if n < 2 or d < 2:
        raise QPeriodsError("need n >= 2 and d >= 2")
    solutions = []
    for p in range(1, d + 1):
        for mus in combinations_with_replacement(range(n), p):
            idx = stretch_index(n, d, mus)
            if idx >= 0:
                solutions.append(StretchResult(p, tuple(mus), idx))
    if len(solutions) != 1:
        raise StretchUniquenessError(f"expected a unique solution, found {len(solutions)}")
    sol = solutions[0]
    if sol.p != d or any(m != n - 1 for m in sol.mus) or sol.index != 0:
        raise StretchUniquenessError(f"unexpected solution {sol}")
    return sol
