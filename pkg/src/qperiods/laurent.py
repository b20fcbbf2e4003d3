"""Sparse Laurent polynomials with integer coefficients.

A polynomial in ``dim`` variables is a map from exponent tuples to nonzero
Python ints. Values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    DivisibilityFailure,
    NotUnimodular,
    ParseError,
    QPeriodsError,
)
from .series import PeriodSeries

Exponent = tuple[int, ...]

_ALIASES = {"x": 1, "y": 2, "z": 3}


class LaurentPoly:
    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms=None):
        if dim < 1:
            raise QPeriodsError("dimension must be positive")
        clean: dict[Exponent, int] = {}
        for e, c in dict(terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != dim:
                raise DimensionMismatch(f"exponent {e} has length {len(e)}, expected {dim}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.dim = dim
        self._terms = {e: clean[e] for e in sorted(clean) if clean[e]}
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, exponent, coeff: int = 1) -> "LaurentPoly":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def constant(cls, dim: int, value: int) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim: int, index: int) -> "LaurentPoly":
        """The variable ``x_index`` (1-based)."""
        e = [0] * dim
        e[index - 1] = 1
        return cls(dim, {tuple(e): 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list[Exponent]:
        return list(self._terms)

    def coefficient(self, exponent) -> int:
        return self._terms.get(tuple(exponent), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.dim}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # ring operations
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, d: int):
        if not isinstance(d, int) or d < 0:
            raise QPeriodsError("exponent must be a nonnegative integer")
        result = LaurentPoly.constant(self.dim, 1)
        base = self
        while d:
            if d & 1:
                result = result * base
            d >>= 1
            if d:
                base = base * base
        return result

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.dim, 0)

    def newton_extremes(self) -> tuple[list[int], list[int]]:
        """Per-coordinate min and max exponents (empty polynomial: zeros)."""
        if not self._terms:
            return [0] * self.dim, [0] * self.dim
        es = list(self._terms)
        return ([min(e[i] for e in es) for i in range(self.dim)],
                [max(e[i] for e in es) for i in range(self.dim)])

    def shift(self, exponent) -> "LaurentPoly":
        """Multiply by the monomial ``x**exponent``."""
        return LaurentPoly(self.dim, {tuple(a + b for a, b in zip(e, exponent)): c
                                      for e, c in self._terms.items()})

    def evaluate(self, point):
        """Evaluate at a point of the complex torus (any numeric type)."""
        total = 0
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                term = term * x**k
            total = total + term
        return total


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def pow(a: LaurentPoly, d: int) -> LaurentPoly:  # noqa: A001
    return a**d


def constant_term(W: LaurentPoly) -> int:
    return W.constant_term()


# text format

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[xyz]\d*)|(?P<op>[-+*^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text: str, dim: int | None = None) -> LaurentPoly:
    """Parse the ``x1^2*x2^-1 - 3*x3 + 5`` text format.

    ``x``, ``y``, ``z`` alias ``x1``, ``x2``, ``x3``. When ``dim`` is omitted
    it is the largest variable index used (at least 1).
    """
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = tokens[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want}, found {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def signed_int():
        sign = 1
        while peek()[0] == "op" and peek()[1] in "+-":
            if take()[1] == "-":
                sign = -sign
        return sign * int(take("int")[1])

    raw_terms = []  # (coeff, {var_index: exponent}, position)
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    while True:
        start = peek()[2]
        coeff = sign
        powers: dict[int, int] = {}
        if peek()[0] == "int":
            coeff *= int(take()[1])
            if peek()[0] == "op" and peek()[1] == "*":
                take()
                _factor(take, peek, powers, signed_int)
        else:
            _factor(take, peek, powers, signed_int)
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            _factor(take, peek, powers, signed_int)
        raw_terms.append((coeff, powers, start))
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
            continue
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])

    used = max((v for _, p, _ in raw_terms for v in p), default=1)
    if dim is None:
        dim = used
    out: dict[Exponent, int] = {}
    for coeff, powers, pos in raw_terms:
        e = [0] * dim
        for v, k in powers.items():
            if v > dim:
                raise ParseError(f"variable x{v} out of range for dimension {dim}", pos)
            e[v - 1] += k
        key = tuple(e)
        out[key] = out.get(key, 0) + coeff
    return LaurentPoly(dim, out)


def _factor(take, peek, powers, signed_int):
    tok = peek()
    if tok[0] != "var":
        raise ParseError(f"expected variable, found {tok[1] or 'end of input'!r}", tok[2])
    take()
    name = tok[1]
    if name[0] != "x" and len(name) > 1:
        raise ParseError(f"unknown variable {name!r}", tok[2])
    index = int(name[1:]) if len(name) > 1 else _ALIASES[name]
    if index < 1:
        raise ParseError("variable indices start at 1", tok[2])
    k = 1
    if peek()[0] == "op" and peek()[1] == "^":
        take()
        k = signed_int()
    powers[index] = powers.get(index, 0) + k


def format_poly(W: LaurentPoly) -> str:
    if W.is_zero():
        return "0"
    parts = []
    for e, c in W.items():
        factors = []
        for i, k in enumerate(e, start=1):
            if k == 1:
                factors.append(f"x{i}")
            elif k:
                factors.append(f"x{i}^{k}")
        mono = "*".join(factors)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


# periods

def period(W: LaurentPoly, d: int, backend: str | None = None) -> int:
    """Constant term of ``W**d``; ``period(W, 0) == 1``."""
    if d < 0:
        raise QPeriodsError("period degree must be nonnegative")
    if d == 0:
        return 1
    exps = W.exponents()
    coeffs = [c for _, c in W.items()]
    return kernels.constant_term_power(exps, coeffs, d, backend=backend)


def period_numeric(W: LaurentPoly, d: int, grid: int) -> float:
    """Trapezoid-rule value of the torus integral of ``W**d dx/x``.

    Uses ``grid**dim`` equally spaced points on the unit torus; the rule is
    exact once ``grid`` exceeds ``d`` times the Newton-polytope width in every
    coordinate.
    """
    if grid < 2:
        raise QPeriodsError("grid must be at least 2")
    if d == 0:
        return 1.0
    if W.is_zero():
        return 0.0
    n = W.dim
    theta = 2.0 * np.pi * np.arange(grid) / grid
    exps = np.array(W.exponents(), dtype=np.int64)
    coeffs = np.array([float(c) for _, c in W.items()])
    rest = n - 1
    if rest:
        mesh = np.meshgrid(*([theta] * rest), indexing="ij")
        rest_angles = np.stack([m.ravel() for m in mesh])  # (rest, grid**rest)
    else:
        rest_angles = np.zeros((0, 1))
    base = exps[:, 1:] @ rest_angles  # (terms, points)
    total = 0.0
    with np.errstate(over="raise", invalid="raise"):
        try:
            for t0 in theta:
                phase = base + np.outer(exps[:, 0], [t0])
                values = coeffs @ np.exp(1j * phase)
                total += np.sum(values**d).real
        except FloatingPointError as exc:
            raise OverflowError("float overflow in numeric period") from exc
    result = total / grid**n
    if not math.isfinite(result):
        raise OverflowError("float overflow in numeric period")
    return float(result)


def classical_period_series(W: LaurentPoly, max_degree: int) -> PeriodSeries:
    """Coefficients ``period(W, d) / d!`` for ``d = 0..max_degree``."""
    if max_degree < 0:
        raise QPeriodsError("max_degree must be nonnegative")
    return PeriodSeries(tuple(Fraction(period(W, d), math.factorial(d))
                              for d in range(max_degree + 1)))


# substitutions

def determinant(matrix) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise NotUnimodular("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def check_unimodular(matrix, n: int) -> list[list[int]]:
    g = [list(map(int, row)) for row in matrix]
    if len(g) != n or any(len(row) != n for row in g):
        raise NotUnimodular(f"expected a {n}x{n} matrix")
    if determinant(g) not in (1, -1):
        raise NotUnimodular("determinant is not +1 or -1")
    return g


def mat_vec(g, v) -> Exponent:
    return tuple(sum(gij * vj for gij, vj in zip(row, v)) for row in g)


def apply_unimodular(W: LaurentPoly, g) -> LaurentPoly:
    """Replace every exponent ``v`` by ``g @ v``."""
    g = check_unimodular(g, W.dim)
    return LaurentPoly(W.dim, {mat_vec(g, e): c for e, c in W.items()})


@dataclass(frozen=True)
class MutationSpec:
    pivot: int  # 1-based variable index
    factor: LaurentPoly

    def __post_init__(self):
        if not 1 <= self.pivot <= self.factor.dim:
            raise QPeriodsError(f"pivot {self.pivot} out of range")
        if self.factor.is_zero():
            raise QPeriodsError("mutation factor must be nonzero")
        if any(e[self.pivot - 1] for e in self.factor.exponents()):
            raise QPeriodsError("mutation factor depends on the pivot variable")


def _normalize(P: LaurentPoly) -> tuple[LaurentPoly, list[int]]:
    """Split ``P = x**shift * Q`` with ``Q`` a polynomial of minimal exponents 0."""
    lo, _ = P.newton_extremes()
    return P.shift([-m for m in lo]), lo


def _lead(P: LaurentPoly):
    e = max(P.exponents())
    return e, P.coefficient(e)


def divide_exact(numer: LaurentPoly, denom: LaurentPoly) -> LaurentPoly | None:
    """Quotient in the Laurent ring, or ``None`` when ``denom`` does not divide."""
    if denom.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if numer.is_zero():
        return numer
    N, n_shift = _normalize(numer)
    D, d_shift = _normalize(denom)
    d_lead, d_coeff = _lead(D)
    quotient: dict[Exponent, int] = {}
    rem = N
    while not rem.is_zero():
        r_lead, r_coeff = _lead(rem)
        q_exp = tuple(a - b for a, b in zip(r_lead, d_lead))
        if any(k < 0 for k in q_exp) or r_coeff % d_coeff:
            return None
        q_c = r_coeff // d_coeff
        quotient[q_exp] = q_c
        rem = rem - D.shift(q_exp) * q_c
    Q = LaurentPoly(numer.dim, quotient)
    return Q.shift([a - b for a, b in zip(n_shift, d_shift)])


def mutate(W: LaurentPoly, spec: MutationSpec) -> LaurentPoly:
    """Substitute ``x_p -> x_p * f`` and return the result if it is Laurent.

    Raises ``DivisibilityFailure(j)`` for the first negative pivot degree ``j``
    (closest to zero) whose coefficient is not divisible by ``f**|j|``.
    """
    f = spec.factor
    if f.dim != W.dim:
        raise DimensionMismatch(f"dimension {W.dim} vs {f.dim}")
    p = spec.pivot - 1
    slices: dict[int, dict[Exponent, int]] = {}
    for e, c in W.items():
        flat = e[:p] + (0,) + e[p + 1:]
        slices.setdefault(e[p], {})[flat] = c
    out = LaurentPoly(W.dim)
    for j in sorted(slices, key=lambda j: (j >= 0, -j)):
        a_j = LaurentPoly(W.dim, slices[j])
        if j >= 0:
            b = a_j * f**j
        else:
            b = divide_exact(a_j, f ** (-j))
            if b is None:
                raise DivisibilityFailure(j)
        unit = [0] * W.dim
        unit[p] = j
        out = out + b.shift(unit)
    return out
