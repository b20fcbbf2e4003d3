"""Loop homology of the n-torus as exterior algebra tensor group ring.

An element ``a (x) x^u`` pairs an exterior form ``a`` on the coordinate duals
with a lattice vector ``u``. The product wedges forms and adds lattice
vectors; the BV operator contracts the form by ``u``. The degree used in all
signs is the exterior degree.

Basis subsets are 1-based index tuples in increasing order.
"""

from __future__ import annotations

import json

from .errors import DimensionMismatch, QPeriodsError

Subset = tuple[int, ...]


def _merge_sign(a: Subset, b: Subset) -> int:
    """Sign of sorting the concatenation ``a + b``; 0 if they overlap."""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


class ExtElement:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms=None):
        clean: dict[Subset, int] = {}
        for s, c in dict(terms or {}).items():
            s = tuple(int(i) for i in s)
            if list(s) != sorted(set(s)):
                raise QPeriodsError(f"subset {s} is not strictly increasing")
            if s and (s[0] < 1 or s[-1] > n):
                raise DimensionMismatch(f"subset {s} out of range for rank {n}")
            if c:
                clean[s] = clean.get(s, 0) + int(c)
        self.n = n
        self._terms = {s: clean[s] for s in sorted(clean, key=lambda s: (len(s), s)) if clean[s]}

    @classmethod
    def basis(cls, n: int, *indices: int) -> "ExtElement":
        """``e_{i1} ^ ... ^ e_{ip}`` in the given order (sign applied)."""
        out = cls.one(n)
        for i in indices:
            out = wedge(out, cls(n, {(i,): 1}))
        return out

    @classmethod
    def one(cls, n: int) -> "ExtElement":
        return cls(n, {(): 1})

    @classmethod
    def from_covector(cls, n: int, alpha) -> "ExtElement":
        return cls(n, {(i + 1,): a for i, a in enumerate(alpha) if a})

    def items(self):
        return self._terms.items()

    def degrees(self) -> set[int]:
        return {len(s) for s in self._terms}

    def homogeneous(self, degree: int) -> "ExtElement":
        return ExtElement(self.n, {s: c for s, c in self._terms.items() if len(s) == degree})

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, tuple(self._terms.items())))

    def __add__(self, other):
        _same_rank(self.n, other.n)
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, 0) + c
        return ExtElement(self.n, out)

    def __neg__(self):
        return ExtElement(self.n, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "ExtElement":
        return ExtElement(self.n, {s: k * c for s, c in self._terms.items()})

    def __repr__(self):
        return f"ExtElement({self.n}, {self._terms})"

    def pair(self, u, v) -> int:
        """Evaluate the degree-2 part as a skew form: ``e_i^e_j (u, v) = u_i v_j - u_j v_i``."""
        total = 0
        for s, c in self._terms.items():
            if len(s) == 2:
                i, j = s[0] - 1, s[1] - 1
                total += c * (u[i] * v[j] - u[j] * v[i])
        return total


def _same_rank(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"rank {a} vs {b}")


def wedge(a: ExtElement, b: ExtElement) -> ExtElement:
    _same_rank(a.n, b.n)
    out: dict[Subset, int] = {}
    for s, c in a.items():
        for t, k in b.items():
            sign = _merge_sign(s, t)
            if sign:
                key = tuple(sorted(s + t))
                out[key] = out.get(key, 0) + sign * c * k
    return ExtElement(a.n, out)


def interior_product(u, a: ExtElement) -> ExtElement:
    """Contraction by ``u`` as a left antiderivation."""
    u = tuple(u)
    _same_rank(len(u), a.n)
    out: dict[Subset, int] = {}
    for s, c in a.items():
        for j, i in enumerate(s):
            if u[i - 1]:
                key = s[:j] + s[j + 1:]
                out[key] = out.get(key, 0) + (-1) ** j * u[i - 1] * c
    return ExtElement(a.n, out)


class LoopClass:
    """Formal sum of ``coeff * (e_S (x) x^u)``."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms=None):
        clean: dict[tuple[Subset, tuple[int, ...]], int] = {}
        for (s, u), c in dict(terms or {}).items():
            s = tuple(int(i) for i in s)
            u = tuple(int(x) for x in u)
            if len(u) != n:
                raise DimensionMismatch(f"exponent {u} has length {len(u)}, expected {n}")
            if list(s) != sorted(set(s)) or (s and (s[0] < 1 or s[-1] > n)):
                raise QPeriodsError(f"bad exterior subset {s}")
            if c:
                clean[(s, u)] = clean.get((s, u), 0) + int(c)
        self.n = n
        self._terms = {k: clean[k] for k in sorted(clean) if clean[k]}

    @classmethod
    def tensor(cls, a: ExtElement, u) -> "LoopClass":
        return cls(a.n, {(s, tuple(u)): c for s, c in a.items()})

    @classmethod
    def group_element(cls, u, coeff: int = 1) -> "LoopClass":
        u = tuple(u)
        return cls(len(u), {((), u): coeff})

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {len(s) for s, _ in self._terms}

    def homogeneous(self, degree: int) -> "LoopClass":
        return LoopClass(self.n, {k: c for k, c in self._terms.items() if len(k[0]) == degree})

    def degree(self) -> int:
        """Exterior degree of a homogeneous element (0 for zero)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise QPeriodsError("element is not homogeneous")
        return degs.pop() if degs else 0

    def __eq__(self, other):
        if not isinstance(other, LoopClass):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, tuple(self._terms.items())))

    def __add__(self, other):
        _same_rank(self.n, other.n)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LoopClass(self.n, out)

    def __neg__(self):
        return LoopClass(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "LoopClass":
        return LoopClass(self.n, {key: k * c for key, c in self._terms.items()})

    def __mul__(self, other):
        return cs_product(self, other)

    def __repr__(self):
        return f"LoopClass({self.n}, {format_loop(self)!r})"

    def __str__(self):
        return format_loop(self)

    def to_json(self) -> str:
        return json.dumps([{"subset": list(s), "exponent": list(u), "coeff": str(c)}
                           for (s, u), c in self._terms.items()])

    @classmethod
    def from_json(cls, payload, n: int | None = None) -> "LoopClass":
        data = json.loads(payload) if isinstance(payload, str) else payload
        if not data and n is None:
            raise QPeriodsError("cannot infer the rank of an empty loop class")
        if n is None:
            n = len(data[0]["exponent"])
        return cls(n, {(tuple(t["subset"]), tuple(t["exponent"])): int(t["coeff"]) for t in data})


def format_loop(x: LoopClass) -> str:
    """Text like ``e12*x^(1,0) - 2*x^(2,0)``."""
    if x.is_zero():
        return "0"
    parts = []
    for (s, u), c in x.items():
        if s:
            sep = "," if x.n > 9 else ""
            mono = "e" + sep.join(str(i) for i in s) + "*"
        else:
            mono = ""
        mono += "x^(" + ",".join(map(str, u)) + ")"
        body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def cs_product(x: LoopClass, y: LoopClass) -> LoopClass:
    _same_rank(x.n, y.n)
    out: dict = {}
    for (s, u), c in x.items():
        for (t, v), k in y.items():
            sign = _merge_sign(s, t)
            if sign:
                key = (tuple(sorted(s + t)), tuple(a + b for a, b in zip(u, v)))
                out[key] = out.get(key, 0) + sign * c * k
    return LoopClass(x.n, out)


def bv(x: LoopClass) -> LoopClass:
    """``Delta(a (x) x^u) = (iota_u a) (x) x^u``."""
    out: dict = {}
    for (s, u), c in x.items():
        for t, k in interior_product(u, ExtElement(x.n, {s: c})).items():
            out[(t, u)] = out.get((t, u), 0) + k
    return LoopClass(x.n, out)


def bracket(x: LoopClass, y: LoopClass) -> LoopClass:
    """``Delta(xy) - Delta(x) y - (-1)^|x| x Delta(y)``, extended bilinearly."""
    _same_rank(x.n, y.n)
    total = LoopClass(x.n)
    for p in sorted(x.degrees()):
        xp = x.homogeneous(p)
        term = bv(cs_product(xp, y)) - cs_product(bv(xp), y)
        term = term - cs_product(xp, bv(y)).scale((-1) ** p)
        total = total + term
    return total


def goldman_t2(u, v) -> LoopClass:
    """Goldman bracket of two free loops on the 2-torus."""
    u, v = tuple(u), tuple(v)
    if len(u) != 2 or len(v) != 2:
        raise DimensionMismatch("the Goldman formula here is for the 2-torus")
    det = u[0] * v[1] - u[1] * v[0]
    return LoopClass.group_element((u[0] + v[0], u[1] + v[1]), det)
