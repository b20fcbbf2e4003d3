"""Descendant symbols on the n-torus: closed form, relations and reduction.

A symbol ``<x^{v_1}|...|x^{v_k}>`` is a multiset of nonzero lattice vectors.
Its value is ``(k-2)!`` when the vectors sum to zero and ``0`` otherwise.
``reduce`` derives the same number without using the closed form: it
stabilizes, applies the skew relation, shears and recurses until every branch
reaches a block pattern whose value is known. The resulting certificate can be
re-checked by ``verify_certificate``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (DimensionMismatch, DomainViolation, InvalidStep, NonBalanced,
                     NotUnimodular, QPeriodsError, ReductionIncomplete, ZeroVector)
from .laurent import LaurentPoly, check_unimodular, mat_vec
from .string_topology import ExtElement

Vec = tuple[int, ...]

__all__ = [
    "DescendantSymbol", "SkewData", "CertNode", "DerivationCertificate",
    "is_balanced", "evaluate", "apply_gl", "stabilize", "relation_terms",
    "relation_residual", "reduce", "verify_certificate", "bs_power_expansion",
    "cpm_groups",
]


def _vec(v, n: int | None = None) -> Vec:
    v = tuple(int(x) for x in v)
    if n is not None and len(v) != n:
        raise DimensionMismatch(f"vector {v} has length {len(v)}, expected {n}")
    return v


@dataclass(frozen=True)
class DescendantSymbol:
    """Sorted multiset of nonzero vectors in ``Z^n``."""

    n: int
    vectors: tuple[Vec, ...]

    def __init__(self, n: int, vectors):
        if n < 1:
            raise QPeriodsError("rank must be positive")
        vecs = [_vec(v, n) for v in vectors]
        if not vecs:
            raise QPeriodsError("a symbol needs at least one input")
        for v in vecs:
            if not any(v):
                raise ZeroVector("the zero vector is not an admissible input")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "vectors", tuple(sorted(vecs)))

    @property
    def k(self) -> int:
        return len(self.vectors)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        return {"n": self.n, "vectors": [list(v) for v in self.vectors]}

    @classmethod
    def from_json(cls, payload) -> "DescendantSymbol":
        data = json.loads(payload) if isinstance(payload, str) else payload
        try:
            return cls(int(data["n"]), data["vectors"])
        except (KeyError, TypeError) as exc:
            raise QPeriodsError(f"malformed symbol: {exc}") from None

    def __str__(self) -> str:
        return "<" + "|".join("x^(" + ",".join(map(str, v)) + ")" for v in self.vectors) + ">"


@dataclass(frozen=True)
class SkewData:
    """A vector ``u`` and a 2-form ``omega`` feeding the skew relation."""

    u: Vec
    omega: ExtElement

    def __init__(self, u, omega: ExtElement):
        u = _vec(u)
        if omega.n != len(u):
            raise DimensionMismatch(f"omega has rank {omega.n}, u has length {len(u)}")
        if omega.degrees() - {2}:
            raise QPeriodsError("omega must be homogeneous of degree 2")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "omega", omega)

    def pairing(self, v) -> int:
        return self.omega.pair(self.u, v)

    def to_dict(self) -> dict:
        return {"u": list(self.u), "omega": [[s[0], s[1], c] for s, c in self.omega.items()]}

    @classmethod
    def from_dict(cls, data) -> "SkewData":
        u = _vec(data["u"])
        return cls(u, ExtElement(len(u), {(int(i), int(j)): int(c) for i, j, c in data["omega"]}))


def is_balanced(s: DescendantSymbol) -> bool:
    return all(sum(col) == 0 for col in zip(*s.vectors))


def evaluate(s: DescendantSymbol) -> int:
    if s.k < 2 or not is_balanced(s):
        return 0
    return math.factorial(s.k - 2)


def apply_gl(s: DescendantSymbol, g) -> DescendantSymbol:
    g = check_unimodular(g, s.n)
    return DescendantSymbol(s.n, [mat_vec(g, v) for v in s.vectors])


def stabilize(s: DescendantSymbol, extra_rows: int = 1) -> DescendantSymbol:
    if extra_rows < 1:
        raise QPeriodsError("extra_rows must be at least 1")
    pad = (0,) * extra_rows
    return DescendantSymbol(s.n + extra_rows, [v + pad for v in s.vectors])


def relation_terms(s: DescendantSymbol, data: SkewData):
    """The k terms ``(Omega(u, v_i), s with v_i -> v_i + u)`` of the skew relation.

    A term whose coefficient vanishes but whose replacement would be the zero
    vector is returned as ``(0, None)``.
    """
    if len(data.u) != s.n:
        raise DimensionMismatch(f"u has length {len(data.u)}, symbol rank is {s.n}")
    terms = []
    for i, v in enumerate(s.vectors):
        coeff = data.pairing(v)
        w = tuple(a + b for a, b in zip(v, data.u))
        if not any(w):
            if coeff:
                raise DomainViolation(f"v_{i + 1} + u = 0 with coefficient {coeff}")
            terms.append((0, None))
            continue
        vecs = list(s.vectors)
        vecs[i] = w
        terms.append((coeff, DescendantSymbol(s.n, vecs)))
    return terms


def relation_residual(s: DescendantSymbol, data: SkewData) -> int:
    return sum(c * evaluate(t) for c, t in relation_terms(s, data) if c)


# -- block pattern -----------------------------------------------------------

def cpm_groups(columns) -> list[list[int]] | None:
    """Group column indices into basis blocks closed by a minus-sum column.

    After deleting zero rows, each group is a set of distinct standard basis
    columns on coordinates no other group touches, plus one column equal to
    minus their sum. Returns the groups (basis indices then the closing
    index) or ``None`` when the columns do not have this shape.
    """
    cols = [tuple(c) for c in columns]
    if not cols:
        return None
    rows = [r for r in range(len(cols[0])) if any(c[r] for c in cols)]
    cols = [tuple(c[r] for r in rows) for c in cols]
    basis: dict[int, int] = {}
    closers = []
    for idx, c in enumerate(cols):
        nz = [r for r, x in enumerate(c) if x]
        if len(nz) == 1 and c[nz[0]] == 1:
            if nz[0] in basis:
                return None
            basis[nz[0]] = idx
        elif nz and all(c[r] == -1 for r in nz):
            closers.append((idx, nz))
        else:
            return None
    used: set[int] = set()
    groups = []
    for idx, support in closers:
        if used & set(support) or any(r not in basis for r in support):
            return None
        used |= set(support)
        groups.append([basis[r] for r in support] + [idx])
    if used != set(basis):
        return None
    return groups


# -- certificates ------------------------------------------------------------

KINDS = ("relation", "gl", "stabilize", "reorder", "leaf")


@dataclass
class CertNode:
    """One derivation step applied to an ordered list of columns.

    ``weight`` is the coefficient on the edge from the parent; the value of
    a node is the weighted sum of its children's values.
    """

    kind: str
    n: int
    columns: tuple[Vec, ...]
    data: dict = field(default_factory=dict)
    weight: Fraction = Fraction(1)
    children: list["CertNode"] = field(default_factory=list)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def leaves(self):
        if self.kind == "leaf":
            yield self
        for c in self.children:
            yield from c.leaves()

    def to_dict(self) -> dict:
        w = self.weight
        return {
            "kind": self.kind,
            "symbol": {"n": self.n, "vectors": [list(c) for c in self.columns]},
            "data": self.data,
            "weight": f"{w.numerator}/{w.denominator}",
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d) -> "CertNode":
        try:
            sym = d["symbol"]
            n = int(sym["n"])
            return cls(
                kind=str(d["kind"]),
                n=n,
                columns=tuple(_vec(v, n) for v in sym["vectors"]),
                data=dict(d.get("data", {})),
                weight=Fraction(d.get("weight", "1/1")),
                children=[cls.from_dict(c) for c in d.get("children", [])],
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise QPeriodsError(f"malformed certificate node: {exc}") from None


@dataclass
class DerivationCertificate:
    root: CertNode

    @property
    def symbol(self) -> DescendantSymbol:
        return DescendantSymbol(self.root.n, self.root.columns)

    def node_count(self) -> int:
        return self.root.node_count()

    def leaves(self):
        return list(self.root.leaves())

    def to_json(self, indent=None) -> str:
        return json.dumps(self.root.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, payload) -> "DerivationCertificate":
        data = json.loads(payload) if isinstance(payload, str) else payload
        return cls(CertNode.from_dict(data))


def _omega_from_alpha(n: int, z: int, alpha) -> ExtElement:
    """``e_z ^ alpha`` for a covector on the first coordinates (z is 1-based)."""
    terms = {}
    for i, a in enumerate(alpha):
        if a:
            # e_z ^ e_{i+1} with i+1 < z equals -e_{i+1} ^ e_z
            terms[(i + 1, z)] = -a
    return ExtElement(n, terms)


def _pick_alpha(columns, pivot: int, n0: int):
    """Small functional on the first ``n0`` coordinates, nonzero on the pivot."""
    best = None
    for size in (1, 2):
        for support in itertools.combinations(range(n0), size):
            for signs in itertools.product((1, -1), repeat=size):
                alpha = [0] * n0
                for i, sgn in zip(support, signs):
                    alpha[i] = sgn
                ap = sum(a * x for a, x in zip(alpha, columns[pivot]))
                if ap == 0:
                    continue
                branching = sum(1 for m, c in enumerate(columns)
                                if m != pivot and sum(a * x for a, x in zip(alpha, c)))
                key = (abs(ap) != 1, branching, abs(ap), size)
                if best is None or key < best[0]:
                    best = (key, alpha)
    return best[1]


def _relation_children(n: int, columns, pivot: int, u, omega: ExtElement):
    """Terms of the relation solved for the pivot term; checks the domain."""
    R = [list(c) for c in columns]
    R[pivot] = [a - b for a, b in zip(columns[pivot], u)]
    if not any(R[pivot]):
        raise DomainViolation("relation input has a zero vector at the pivot")
    coeffs = [omega.pair(u, r) for r in R]
    cp = coeffs[pivot]
    if cp == 0:
        raise DomainViolation("pivot coefficient is zero")
    out = []
    for i, c in enumerate(coeffs):
        if i == pivot or c == 0:
            continue
        w = [a + b for a, b in zip(R[i], u)]
        if not any(w):
            raise DomainViolation(f"column {i} leaves the domain")
        cols = [tuple(r) for r in R]
        cols[i] = tuple(w)
        out.append((Fraction(-c, cp), tuple(cols)))
    return out


def _shear(columns, pivot: int, z: int):
    """Matrix ``I - c e_z^T`` with ``c`` the pivot column minus its z-entry."""
    n = len(columns[0])
    c = list(columns[pivot])
    c[z] = 0
    g = [[int(r == s) for s in range(n)] for r in range(n)]
    for r in range(n):
        g[r][z] -= c[r]
    return g


def reduce(s: DescendantSymbol) -> DerivationCertificate:
    """Derive the value of a balanced symbol as a tree of elementary steps."""
    if s.k < 2:
        raise NonBalanced("a single nonzero vector is never balanced")
    if not is_balanced(s):
        raise NonBalanced(f"vectors of {s} do not sum to zero")
    n0 = s.n
    root = _reduce_node(s.n, s.vectors, 0, n0, Fraction(1))
    return DerivationCertificate(root)


def _leaf(n, columns, weight, groups) -> CertNode:
    return CertNode("leaf", n, tuple(columns), {"groups": groups}, weight)


def _reduce_node(n: int, columns, pivot: int, n0: int, weight: Fraction) -> CertNode:
    columns = tuple(tuple(c) for c in columns)
    groups = cpm_groups(columns)
    if groups is not None:
        return _leaf(n, columns, weight, groups)
    k = len(columns)
    j = pivot
    while j < k and not any(columns[j][:n0]):
        j += 1
    if j == k:
        raise ReductionIncomplete(f"terminal columns {columns} do not match the block pattern")

    stab = CertNode("stabilize", n, columns, {"rows": 1}, weight)
    n1 = n + 1
    T = tuple(c + (0,) for c in columns)
    z = n  # 0-based index of the new coordinate
    alpha = _pick_alpha(columns, j, n0)
    u = tuple(-int(r == z) for r in range(n1))
    omega = _omega_from_alpha(n1, z + 1, alpha)
    rel = CertNode("relation", n1, T,
                   {"pivot": j, "u": list(u), "omega": [[a, b, c] for (a, b), c in omega.items()]})
    stab.children.append(rel)

    for w, cols in _relation_children(n1, T, j, u, omega):
        i = next(m for m in range(k) if m != j and cols[m] != T[m])
        g = _shear(cols, j, z)
        gl = CertNode("gl", n1, cols, {"matrix": g}, w)
        rel.children.append(gl)
        sheared = tuple(mat_vec(g, c) for c in cols)
        order = list(range(k))
        order.remove(i)
        order.insert(j + 1, i)
        if cpm_groups(sheared) is not None:
            gl.children.append(_reduce_node(n1, sheared, j + 1, n0, Fraction(1)))
        elif order != list(range(k)):
            reo = CertNode("reorder", n1, sheared, {"permutation": order})
            gl.children.append(reo)
            reordered = tuple(sheared[m] for m in order)
            reo.children.append(_reduce_node(n1, reordered, j + 1, n0, Fraction(1)))
        else:
            gl.children.append(_reduce_node(n1, sheared, j + 1, n0, Fraction(1)))
    return stab


# -- verification ------------------------------------------------------------

def _fail(path, reason):
    raise InvalidStep(path, reason)


def _only_child(node, path) -> CertNode:
    if len(node.children) != 1:
        _fail(path, f"{node.kind} step needs exactly one child")
    child = node.children[0]
    if child.weight != 1:
        _fail(path + (0,), f"{node.kind} step must carry weight 1")
    return child


def _check_same(child, n, cols, path):
    if child.n != n or tuple(child.columns) != tuple(cols):
        _fail(path, "child columns do not follow from the step")


def _leaf_value(node, path) -> int:
    """Value of a block-pattern leaf, re-derived from the columns."""
    if node.children:
        _fail(path, "leaf has children")
    k = len(node.columns)
    rows = [r for r in range(node.n) if any(c[r] for c in node.columns)]
    seen_rows: set[int] = set()
    closers = 0
    basis = set()
    for c in node.columns:
        nz = [r for r in rows if c[r]]
        vals = {c[r] for r in nz}
        if vals == {1} and len(nz) == 1:
            if nz[0] in basis:
                _fail(path, "repeated basis column")
            basis.add(nz[0])
        elif vals == {-1}:
            if seen_rows & set(nz):
                _fail(path, "closing columns overlap")
            seen_rows |= set(nz)
            closers += 1
        else:
            _fail(path, f"column {c} fits neither block role")
    if basis != seen_rows or set(rows) != basis or closers == 0:
        _fail(path, "columns do not close up into blocks")
    if k < 2:
        _fail(path, "leaf needs at least two columns")
    return math.factorial(k - 2)


def _verify(node: CertNode, path: tuple[int, ...]) -> Fraction:
    if node.kind not in KINDS:
        _fail(path, f"unknown step kind {node.kind!r}")
    n, cols = node.n, tuple(tuple(c) for c in node.columns)
    if not cols or any(len(c) != n for c in cols) or any(not any(c) for c in cols):
        _fail(path, "columns must be nonzero vectors of the stated length")
    data = node.data

    if node.kind == "leaf":
        return Fraction(_leaf_value(node, path))

    if node.kind == "stabilize":
        rows = data.get("rows")
        if not isinstance(rows, int) or rows < 1:
            _fail(path, "stabilization needs a positive row count")
        child = _only_child(node, path)
        _check_same(child, n + rows, [c + (0,) * rows for c in cols], path + (0,))
        return _verify(child, path + (0,))

    if node.kind == "gl":
        try:
            g = check_unimodular(data.get("matrix"), n)
        except (NotUnimodular, DimensionMismatch, TypeError, ValueError) as exc:
            _fail(path, f"bad matrix: {exc}")
        child = _only_child(node, path)
        _check_same(child, n, [mat_vec(g, c) for c in cols], path + (0,))
        return _verify(child, path + (0,))

    if node.kind == "reorder":
        perm = data.get("permutation")
        if not isinstance(perm, list) or sorted(perm) != list(range(len(cols))):
            _fail(path, "not a permutation")
        child = _only_child(node, path)
        _check_same(child, n, [cols[m] for m in perm], path + (0,))
        return _verify(child, path + (0,))

    # relation
    try:
        j = int(data["pivot"])
        u = _vec(data["u"], n)
        omega = ExtElement(n, {(int(a), int(b)): int(c) for a, b, c in data["omega"]})
    except (KeyError, TypeError, ValueError, QPeriodsError) as exc:
        _fail(path, f"bad relation data: {exc}")
    if not 0 <= j < len(cols):
        _fail(path, "pivot out of range")
    try:
        expected = _relation_children(n, cols, j, u, omega)
    except DomainViolation as exc:
        _fail(path, str(exc))
    if len(expected) != len(node.children):
        _fail(path, f"relation has {len(expected)} terms, certificate lists {len(node.children)}")
    total = Fraction(0)
    for idx, ((w, tcols), child) in enumerate(zip(expected, node.children)):
        cpath = path + (idx,)
        _check_same(child, n, tcols, cpath)
        if child.weight != w:
            _fail(cpath, f"weight {child.weight} does not match the relation ({w})")
        total += w * _verify(child, cpath)
    return total


def verify_certificate(cert) -> Fraction:
    """Re-check every step of a certificate and return the derived value."""
    root = cert.root if isinstance(cert, DerivationCertificate) else cert
    if root.weight != 1:
        _fail((), "root weight must be 1")
    return _verify(root, ())


# -- bridge to periods -------------------------------------------------------

def bs_power_expansion(W: LaurentPoly, d: int, ordered: bool = False) -> int:
    """Expand the d-fold symbol of ``W`` multilinearly and sum the values.

    By default tuples are grouped by multiset and counted with their
    multinomial multiplicity; ``ordered=True`` enumerates all d-tuples.
    """
    if d < 2:
        raise QPeriodsError("d must be at least 2")
    terms = list(W.items())
    for e, _ in terms:
        if not any(e):
            raise ZeroVector("W has a constant term, which is not an admissible input")
    n = W.dim
    total = 0
    if ordered:
        for combo in itertools.product(range(len(terms)), repeat=d):
            vecs = [terms[i][0] for i in combo]
            if any(sum(col) for col in zip(*vecs)):
                continue
            coeff = math.prod(terms[i][1] for i in combo)
            total += coeff * evaluate(DescendantSymbol(n, vecs))
        return total
    for combo in itertools.combinations_with_replacement(range(len(terms)), d):
        vecs = [terms[i][0] for i in combo]
        if any(sum(col) for col in zip(*vecs)):
            continue
        mult = math.factorial(d)
        for _, grp in itertools.groupby(combo):
            mult //= math.factorial(len(list(grp)))
        coeff = math.prod(terms[i][1] for i in combo)
        total += mult * coeff * evaluate(DescendantSymbol(n, vecs))
    return total
