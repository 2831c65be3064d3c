"""Systems of partial-derivative operators and their series homomorphisms.

A system of order N in m variables from A to B is a family of linear maps
D_k: A -> B, |k| <= N, such that D_0 is unital, every D_k respects the
involutions, and the binomial Leibniz rule

    D_k(a b) = sum_{l <= k} binom(k, l) D_{k-l}(a) D_l(b)

holds. Such systems correspond bijectively to unital involutive
homomorphisms h: A -> B[[m]] truncated at order N via h(a)_k = D_k(a)/k!;
the factorial is what turns the binomial Leibniz rule into the plain
convolution product of series, and both directions below use it.
"""
from __future__ import annotations

import numpy as np

from . import _linalg as la
from .algebra import (Element, LinearOp, PolyAlgebra, StructureAlgebra,
                      function_algebra, truncated_poly)
from .errors import DomainError, NumericError
from .multiindex import (MultiIndex, mi_binomial, mi_enumerate, mi_factorial,
                         mi_le, mi_sub)
from .series import SeriesStructureAlgebra, series_algebra

__all__ = [
    "DerivativeSystem",
    "SystemReport",
    "verify_system",
    "to_homomorphism",
    "from_homomorphism",
    "taylor_system",
    "monomial_about",
]


class DerivativeSystem:
    """Family of operator matrices D_k: A -> B indexed by multi-indices.

    Matrices act on coordinates; indices missing from `ops` are zero maps.
    """

    def __init__(self, source: StructureAlgebra, target: StructureAlgebra,
                 mvars: int, order: int, ops: dict):
        assert mvars >= 1 and order >= 0
        self.source = source
        self.target = target
        self.mvars = mvars
        self.order = order
        self.indices: list[MultiIndex] = mi_enumerate(mvars, order)
        index_set = set(self.indices)
        self.ops: dict[MultiIndex, np.ndarray] = {}
        for k, mat in ops.items():
            k = tuple(int(t) for t in k)
            if k not in index_set:
                raise ValueError(f"operator index {k} outside order-{order} range")
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (target.dim, source.dim):
                raise ValueError(f"operator {k} has shape {mat.shape}, "
                                 f"expected {(target.dim, source.dim)}")
            self.ops[k] = mat

    def op_matrix(self, k: MultiIndex) -> np.ndarray:
        k = tuple(int(t) for t in k)
        mat = self.ops.get(k)
        if mat is None:
            return np.zeros((self.target.dim, self.source.dim), dtype=complex)
        return mat.copy()

    def op(self, k: MultiIndex) -> LinearOp:
        return LinearOp(self.op_matrix(k), self.source, self.target)

    def apply(self, k: MultiIndex, a: Element) -> Element:
        return Element(self.target, self.op_matrix(k) @ a.coords)

    def scale(self) -> float:
        if not self.ops:
            return 0.0
        return float(max(np.abs(m).max() for m in self.ops.values()))

    def isclose(self, other: "DerivativeSystem", tol: float = 1e-12) -> bool:
        if (self.mvars, self.order) != (other.mvars, other.order):
            return False
        return all(np.abs(self.op_matrix(k) - other.op_matrix(k)).max() <= tol
                   for k in self.indices)

    def __repr__(self):
        return (f"<DerivativeSystem m={self.mvars} N={self.order} "
                f"{self.source.dim}->{self.target.dim}>")


class SystemReport:
    """Outcome of the axiom check; violations are data, not exceptions."""

    def __init__(self, violations: list[dict]):
        self.violations = violations

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return max((v["residual"] for v in self.violations), default=0.0)

    def summary(self) -> str:
        if self.ok:
            return "all axioms hold"
        first = self.violations[0]
        return (f"{len(self.violations)} violation(s); first: axiom "
                f"{first['axiom']} at index {first['index']}, "
                f"residual {first['residual']:.2e}")

    def __repr__(self):
        return f"<SystemReport ok={self.ok} violations={len(self.violations)}>"


def verify_system(sys: DerivativeSystem, tol: float = 1e-9) -> SystemReport:
    """Checks the unit, involution, and binomial Leibniz axioms.

    All three are bilinear or antilinear in the algebra arguments, so
    checking them on basis vectors and basis pairs is exhaustive.
    """
    a, b = sys.source, sys.target
    violations = []
    scale = 1.0 + sys.scale() ** 2

    for k in sys.indices:
        dk = sys.op_matrix(k)
        expected = b.unit if sum(k) == 0 else np.zeros(b.dim)
        res = float(np.abs(dk @ a.unit - expected).max())
        if res > tol * scale:
            violations.append({"axiom": "unit", "index": k, "pair": None,
                               "residual": res})

    for k in sys.indices:
        dk = sys.op_matrix(k)
        res = float(np.abs(dk @ a.involution - b.involution @ np.conj(dk)).max())
        if res > tol * scale:
            violations.append({"axiom": "involution", "index": k, "pair": None,
                               "residual": res})

    for k in sys.indices:
        dk = sys.op_matrix(k)
        lhs = np.einsum("ba,ija->ijb", dk, a.structure)
        rhs = np.zeros_like(lhs)
        for l in sys.indices:
            if not mi_le(l, k):
                continue
            dkl = sys.op_matrix(mi_sub(k, l))
            dl = sys.op_matrix(l)
            rhs += mi_binomial(k, l) * np.einsum("bi,cj,bcd->ijd", dkl, dl,
                                                 b.structure)
        gap = np.abs(lhs - rhs)
        if gap.max() > tol * scale:
            i, j = np.unravel_index(np.argmax(gap.max(axis=2)),
                                    (a.dim, a.dim))
            violations.append({"axiom": "leibniz", "index": k, "pair": (int(i), int(j)),
                               "residual": float(gap[i, j].max())})
    return SystemReport(violations)


def to_homomorphism(sys: DerivativeSystem, tol: float = 1e-9) -> LinearOp:
    """Packs a valid system into the map a -> (D_k(a)/k!)_k.

    The target is the flattened truncated series algebra over B. Raises
    DomainError with the verification report when the axioms fail, and
    NumericError if the packed map unexpectedly fails the homomorphism
    check it is guaranteed to satisfy.
    """
    report = verify_system(sys, tol)
    if not report.ok:
        raise DomainError(f"not a derivative system: {report.summary()}")
    ser = series_algebra(sys.target, sys.mvars, sys.order)
    db = sys.target.dim
    h = np.zeros((ser.dim, sys.source.dim), dtype=complex)
    for p, k in enumerate(ser.exponents):
        h[p * db:(p + 1) * db, :] = sys.op_matrix(k) / mi_factorial(k)
    out = LinearOp(h, sys.source, ser)
    bad = out.hom_violations(tol * (1.0 + sys.scale() ** 2))
    if bad:
        raise NumericError(f"packed series map fails homomorphism check: {bad[0]}")
    return out


def from_homomorphism(h: LinearOp, tol: float = 1e-9) -> DerivativeSystem:
    """Unpacks a unital involutive multiplicative series map into a system.

    Inverse of to_homomorphism: D_k = k! times the k-th coefficient block.
    """
    ser = h.target
    if not isinstance(ser, SeriesStructureAlgebra):
        raise ValueError("target of the map must be a flattened series algebra")
    bad = h.hom_violations(tol * (1.0 + float(np.abs(h.matrix).max()) ** 2))
    if bad:
        raise DomainError(f"series map is not a homomorphism: {bad[0]}")
    db = ser.base.dim
    ops = {}
    for p, k in enumerate(ser.exponents):
        block = h.matrix[p * db:(p + 1) * db, :]
        if np.any(block):
            ops[k] = mi_factorial(k) * block
    return DerivativeSystem(h.source, ser.base, ser.mvars, ser.order, ops)


def taylor_system(mvars: int, order: int, point, degree: int | None = None) -> DerivativeSystem:
    """Classical partial derivatives at a point, with scalar values.

    The source is truncated_poly(mvars, degree) whose basis monomials are
    read as powers of (x - point); see monomial_about for writing absolute
    polynomials in that basis. Then D_k evaluates the k-th partial at the
    point: D_k((x-point)^a) = k! if a = k else 0. The returned system
    carries the point as the `point` attribute.
    """
    if degree is None:
        degree = order
    if degree < order:
        raise ValueError("source degree must be at least the system order")
    point = np.asarray(point, dtype=float).ravel()
    if point.shape != (mvars,):
        raise ValueError("point dimension mismatch")
    source = truncated_poly(mvars, degree)
    target = function_algebra(1)
    ops = {}
    for k in mi_enumerate(mvars, order):
        row = np.zeros((1, source.dim), dtype=complex)
        row[0, source.exp_index[k]] = mi_factorial(k)
        ops[k] = row
    sys = DerivativeSystem(source, target, mvars, order, ops)
    sys.point = point
    return sys


def monomial_about(source: PolyAlgebra, point, alpha) -> Element:
    """The absolute monomial x^alpha written in point-centered basis monomials.

    x^alpha = sum_{b <= alpha} binom(alpha, b) point^(alpha-b) (x-point)^b.
    """
    point = np.asarray(point, dtype=float).ravel()
    alpha = tuple(int(t) for t in alpha)
    if point.shape != (source.mvars,) or len(alpha) != source.mvars:
        raise ValueError("dimension mismatch")
    if sum(alpha) > source.degree:
        raise ValueError("monomial degree exceeds the algebra's bound")
    coords = np.zeros(source.dim, dtype=complex)
    for beta, idx in source.exp_index.items():
        if mi_le(beta, alpha):
            rest = mi_sub(alpha, beta)
            coords[idx] = mi_binomial(alpha, beta) * np.prod(point ** np.array(rest))
    return Element(source, coords)
