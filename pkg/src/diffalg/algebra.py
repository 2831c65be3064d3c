"""Finite-dimensional involutive algebras given by structure constants.

An algebra of dimension d is stored as a d x d x d complex tensor c with
c[i, j] = coordinates of e_i * e_j, an involution matrix S acting
antilinearly (star(x) = S conj(x)), and the coordinate vector of the unit.
On top of that sit subspaces (canonical row-reduced bases), characters
(unital involutive multiplicative functionals), quotients by two-sided
ideals, centralizers, and a family of ready-made constructors.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import _linalg as la
from .errors import DomainError, NumericError
from .multiindex import MultiIndex, mi_add, mi_enumerate

__all__ = [
    "StructureAlgebra",
    "PolyAlgebra",
    "Element",
    "Subspace",
    "Character",
    "LinearOp",
    "mul",
    "re_im",
    "subspace_product",
    "characters",
    "quotient",
    "centralizer",
    "subalgebra",
    "matrix_algebra",
    "function_algebra",
    "truncated_poly",
    "direct_sum",
    "group_algebra",
    "cusp_algebra",
    "algebra_from_name",
]


class StructureAlgebra:
    """Involutive algebra described by structure constants.

    Immutable after construction. Axioms (associativity on basis triples,
    unit law, involution laws) are validated on construction unless
    check=False is passed; violations raise DomainError.
    """

    def __init__(self, structure, involution, unit, labels=None, check=True,
                 tol=la.ZERO_TOL):
        self.structure = np.asarray(structure, dtype=complex)
        if self.structure.ndim != 3 or len(set(self.structure.shape)) != 1:
            raise ValueError("structure tensor must have shape (d, d, d)")
        d = self.structure.shape[0]
        self.involution = np.asarray(involution, dtype=complex)
        if self.involution.shape != (d, d):
            raise ValueError("involution matrix shape mismatch")
        self.unit = np.asarray(unit, dtype=complex).ravel()
        if self.unit.shape != (d,):
            raise ValueError("unit vector shape mismatch")
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != d:
            raise ValueError("label count mismatch")
        if check:
            bad = self.axiom_violations(tol)
            if bad:
                raise DomainError(f"algebra axioms fail: {bad[0]}"
                                  + (f" (+{len(bad) - 1} more)" if len(bad) > 1 else ""))

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    # --- raw coordinate operations -------------------------------------

    def mul_coords(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=complex).ravel()
        y = np.asarray(y, dtype=complex).ravel()
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def star_coords(self, x) -> np.ndarray:
        return self.involution @ np.conj(np.asarray(x, dtype=complex).ravel())

    def left_mul_matrix(self, a) -> np.ndarray:
        """Matrix of x -> a*x."""
        a = np.asarray(a, dtype=complex).ravel()
        # entry [k, j] = sum_i a_i c[i, j, k]
        return np.tensordot(a, self.structure, axes=(0, 0)).T

    def right_mul_matrix(self, a) -> np.ndarray:
        """Matrix of x -> x*a."""
        a = np.asarray(a, dtype=complex).ravel()
        # entry [k, i] = sum_j c[i, j, k] a_j
        return np.tensordot(self.structure, a, axes=(1, 0)).T

    # --- elements ------------------------------------------------------

    def element(self, coords) -> "Element":
        return Element(self, coords)

    def basis_element(self, i: int) -> "Element":
        coords = np.zeros(self.dim, dtype=complex)
        coords[i] = 1.0
        return Element(self, coords)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim, dtype=complex))

    def one(self) -> "Element":
        return Element(self, self.unit.copy())

    def basis(self):
        return [self.basis_element(i) for i in range(self.dim)]

    # --- validation ----------------------------------------------------

    def axiom_violations(self, tol=la.ZERO_TOL) -> list[str]:
        """All failed algebra axioms, as human-readable strings."""
        out = []
        d = self.dim
        c = self.structure
        # associativity (e_i e_j) e_k = e_i (e_j e_k)
        left = np.einsum("ijl,lkm->ijkm", c, c)
        right = np.einsum("jkl,ilm->ijkm", c, c)
        bad = np.abs(left - right)
        if bad.max() > tol:
            i, j, k = np.unravel_index(np.argmax(bad.max(axis=3)), (d, d, d))
            out.append(f"associativity fails at basis triple ({i},{j},{k}), "
                       f"residual {bad[i, j, k].max():.2e}")
        # unit law
        for i in range(d):
            e = np.eye(d, dtype=complex)[i]
            if np.abs(self.mul_coords(self.unit, e) - e).max() > tol:
                out.append(f"left unit law fails at basis {i}")
            if np.abs(self.mul_coords(e, self.unit) - e).max() > tol:
                out.append(f"right unit law fails at basis {i}")
        # involution laws
        s = self.involution
        # (x*)* = x  <=>  S conj(S) = I
        if np.abs(s @ np.conj(s) - np.eye(d)).max() > tol:
            out.append("involution is not an involution: S conj(S) != I")
        if np.abs(self.star_coords(self.unit) - self.unit).max() > tol:
            out.append("unit is not involution-fixed")
        # (e_i e_j)* = e_j* e_i*
        for i in range(d):
            for j in range(d):
                lhs = self.star_coords(c[i, j])
                rhs = self.mul_coords(s[:, j], s[:, i])
                if np.abs(lhs - rhs).max() > tol:
                    out.append(f"(xy)* = y*x* fails at basis pair ({i},{j})")
        return out

    def is_commutative(self, tol=la.ZERO_TOL) -> bool:
        return bool(np.abs(self.structure - self.structure.transpose(1, 0, 2)).max() <= tol)

    def is_involutive_pair(self, other: "StructureAlgebra") -> bool:
        return self is other

    # --- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        def cplx(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "dim": self.dim,
            "structure": [[[cplx(z) for z in row] for row in plane]
                          for plane in self.structure],
            "involution": [[cplx(z) for z in row] for row in self.involution],
            "unit": [cplx(z) for z in self.unit],
            "labels": self.labels,
        }

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "StructureAlgebra":
        def un(z):
            return complex(z[0], z[1])

        d = int(data["dim"])
        structure = np.array([[[un(z) for z in row] for row in plane]
                              for plane in data["structure"]], dtype=complex)
        involution = np.array([[un(z) for z in row] for row in data["involution"]],
                              dtype=complex)
        unit = np.array([un(z) for z in data["unit"]], dtype=complex)
        if structure.shape != (d, d, d):
            raise ValueError("structure tensor shape disagrees with dim")
        return cls(structure, involution, unit, labels=data.get("labels"),
                   check=check)

    def __repr__(self):
        return f"<StructureAlgebra dim={self.dim}>"


class PolyAlgebra(StructureAlgebra):
    """Degree-truncated polynomial algebra in m commuting variables.

    Basis = monomials x^k with |k| <= degree in graded lexicographic order;
    products above the degree bound are dropped. Keeps the exponent list so
    jets and evaluation can recover the polynomial structure.
    """

    def __init__(self, mvars: int, degree: int, **kw):
        exps = mi_enumerate(mvars, degree)
        index = {k: i for i, k in enumerate(exps)}
        d = len(exps)
        c = np.zeros((d, d, d), dtype=complex)
        for i, a in enumerate(exps):
            for j, b in enumerate(exps):
                s = mi_add(a, b)
                if sum(s) <= degree:
                    c[i, j, index[s]] = 1.0
        unit = np.zeros(d, dtype=complex)
        unit[index[(0,) * mvars]] = 1.0
        labels = [monomial_label(k) for k in exps]
        super().__init__(c, np.eye(d), unit, labels=labels, **kw)
        self.mvars = mvars
        self.degree = degree
        self.exponents: list[MultiIndex] = exps
        self.exp_index = index

    def evaluate(self, coords, point) -> complex:
        """Value of the polynomial with the given coefficients at a point."""
        point = np.asarray(point, dtype=float).ravel()
        if point.shape != (self.mvars,):
            raise ValueError("point dimension mismatch")
        coords = np.asarray(coords, dtype=complex).ravel()
        total = 0.0 + 0.0j
        for i, k in enumerate(self.exponents):
            if coords[i] != 0:
                total += coords[i] * np.prod([point[t] ** k[t] for t in range(self.mvars)])
        return complex(total)

    def __repr__(self):
        return f"<PolyAlgebra m={self.mvars} degree={self.degree}>"


def monomial_label(k: MultiIndex) -> str:
    if sum(k) == 0:
        return "1"
    parts = []
    for i, p in enumerate(k):
        if p == 0:
            continue
        name = "x" if len(k) == 1 else f"x{i + 1}"
        parts.append(name if p == 1 else f"{name}^{p}")
    return "*".join(parts)


class Element:
    """Coordinate vector bound to its parent algebra."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: StructureAlgebra, coords):
        self.algebra = algebra
        self.coords = np.asarray(coords, dtype=complex).ravel()
        if self.coords.shape != (algebra.dim,):
            raise ValueError("coordinate length does not match algebra dimension")

    def _same_parent(self, other: "Element"):
        if self.algebra is not other.algebra:
            raise DomainError("elements belong to different algebras")

    def __add__(self, other):
        self._same_parent(other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self._same_parent(other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, Element):
            self._same_parent(other)
            return Element(self.algebra, self.algebra.mul_coords(self.coords, other.coords))
        return Element(self.algebra, self.coords * complex(other))

    def __rmul__(self, scalar):
        return Element(self.algebra, complex(scalar) * self.coords)

    def star(self) -> "Element":
        return Element(self.algebra, self.algebra.star_coords(self.coords))

    def re_im(self) -> tuple["Element", "Element"]:
        """Real and imaginary parts with respect to the involution.

        Re x = (x + x*)/2 and Im x = (x - x*)/(2i); both are fixed by the
        involution and x = Re x + i Im x, x* = Re x - i Im x.
        """
        s = self.star()
        re = Element(self.algebra, (self.coords + s.coords) / 2.0)
        im = Element(self.algebra, (self.coords - s.coords) / 2.0j)
        return re, im

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def isclose(self, other: "Element", tol=la.ZERO_TOL) -> bool:
        self._same_parent(other)
        return bool(np.abs(self.coords - other.coords).max() <= tol)

    def __repr__(self):
        return f"Element({np.array_str(self.coords, precision=4)})"


def mul(x: Element, y: Element) -> Element:
    """Product in the parent algebra (structure-constant contraction)."""
    return x * y


def re_im(x: Element) -> tuple[Element, Element]:
    """See Element.re_im."""
    return x.re_im()


class Subspace:
    """Linear subspace with a canonical row-reduced basis."""

    def __init__(self, algebra: StructureAlgebra, vectors, tol=la.RANK_TOL):
        self.algebra = algebra
        rows = [v.coords if isinstance(v, Element) else v for v in vectors]
        self.basis = la.span_basis(rows, width=algebra.dim, tol=tol)

    @classmethod
    def zero(cls, algebra: StructureAlgebra) -> "Subspace":
        return cls(algebra, [])

    @classmethod
    def whole(cls, algebra: StructureAlgebra) -> "Subspace":
        return cls(algebra, np.eye(algebra.dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, x, tol=la.ZERO_TOL) -> bool:
        v = x.coords if isinstance(x, Element) else np.asarray(x, dtype=complex)
        return la.in_span(v, self.basis, tol)

    def contains_subspace(self, other: "Subspace", tol=la.ZERO_TOL) -> bool:
        return la.spans_contain(self.basis, other.basis, tol)

    def equals(self, other: "Subspace", tol=la.ZERO_TOL) -> bool:
        return la.spans_equal(self.basis, other.basis, tol)

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace(self.algebra, np.vstack([self.basis, other.basis]))

    def star_closed(self, tol=la.ZERO_TOL) -> bool:
        return all(la.in_span(self.algebra.star_coords(v), self.basis, tol)
                   for v in self.basis)

    def __repr__(self):
        return f"<Subspace dim={self.dim} of {self.algebra!r}>"


def subspace_product(m: Subspace, n: Subspace) -> Subspace:
    """Linear span of all pairwise products of basis vectors.

    The span plays the role of the closed product of subspaces; in finite
    dimension closure is linear span.
    """
    if m.algebra is not n.algebra:
        raise DomainError("subspaces belong to different algebras")
    alg = m.algebra
    prods = [alg.mul_coords(a, b) for a in m.basis for b in n.basis]
    return Subspace(alg, prods)


class Character:
    """Unital involutive multiplicative functional, as a row vector."""

    __slots__ = ("algebra", "functional")

    def __init__(self, algebra: StructureAlgebra, functional):
        self.algebra = algebra
        self.functional = np.asarray(functional, dtype=complex).ravel()
        if self.functional.shape != (algebra.dim,):
            raise ValueError("functional length mismatch")

    def __call__(self, x) -> complex:
        v = x.coords if isinstance(x, Element) else np.asarray(x, dtype=complex).ravel()
        return complex(self.functional @ v)

    def kernel(self) -> Subspace:
        return Subspace(self.algebra, la.null_space(self.functional.reshape(1, -1)))

    def multiplicativity_residual(self) -> float:
        c = self.algebra.structure
        s = self.functional
        vals = np.einsum("ijk,k->ij", c, s) - np.outer(s, s)
        return float(np.abs(vals).max())

    def is_character(self, tol=1e-8) -> bool:
        a = self.algebra
        if abs(self(a.unit) - 1.0) > tol:
            return False
        if self.multiplicativity_residual() > tol:
            return False
        # involutive: s(e_j*) = conj(s(e_j)); antilinear identities can be
        # checked on a basis
        for j in range(a.dim):
            if abs(self.functional @ a.involution[:, j] - np.conj(self.functional[j])) > tol:
                return False
        return True

    def __repr__(self):
        return f"Character({np.array_str(self.functional, precision=4)})"


def _refine(basis_cols: np.ndarray, op: np.ndarray, tol: float) -> list[np.ndarray]:
    """Split an op-invariant column subspace into eigen-sub-subspaces."""
    k = basis_cols.shape[1]
    if k == 1:
        return [basis_cols]
    restricted, *_ = np.linalg.lstsq(basis_cols, op @ basis_cols, rcond=None)
    eigvals = np.linalg.eigvals(restricted)
    reps = la.cluster_values(eigvals, tol)
    if len(reps) == 1:
        return [basis_cols]
    out = []
    for lam in reps:
        sub = la.eigenspace(restricted, lam, tol)
        if sub.shape[0]:
            out.append(basis_cols @ sub.T)
    return out


def _semisimple_characters(algebra: StructureAlgebra, tol: float) -> list[Character]:
    """Character extraction for a radical-free commutative algebra.

    Here every multiplication operator is diagonalizable, so joint
    eigenvalue refinement is safe: eigenspaces of the transposed
    multiplication by a fixed generic element are refined by the transposed
    basis multiplications, and each leaf's eigenvalue tuple is the
    candidate functional (a character takes on a common eigenvector of the
    left regular representation exactly its own values).
    """
    d = algebra.dim
    cluster_tol = 1e-7
    rng = np.random.default_rng(7)
    generic = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    ops = [algebra.left_mul_matrix(np.eye(d)[i]).T for i in range(d)]
    m = algebra.left_mul_matrix(generic).T

    spaces: list[np.ndarray] = []
    for lam in la.cluster_values(np.linalg.eigvals(m), cluster_tol):
        sub = la.eigenspace(m, lam, cluster_tol)
        if sub.shape[0]:
            spaces.append(sub.T)
    for op in ops:
        spaces = [piece for v in spaces for piece in _refine(v, op, cluster_tol)]

    chars: list[Character] = []
    for v in spaces:
        vec = v[:, 0]
        nv = vec.conj() @ vec
        tup = np.array([(vec.conj() @ (op @ vec)) / nv for op in ops])
        ch = Character(algebra, tup)
        if not ch.is_character(tol):
            continue
        dupe = False
        for known in chars:
            delta = np.abs(known.functional - ch.functional).max()
            if delta <= cluster_tol:
                dupe = True
                break
            if cluster_tol < delta <= 10 * cluster_tol:
                raise NumericError("eigen-cluster ambiguity: two candidate "
                                   "characters closer than the resolution limit")
        if not dupe:
            chars.append(ch)
    return chars


def characters(algebra: StructureAlgebra, tol: float = 1e-8) -> list[Character]:
    """All unital involutive multiplicative functionals of a commutative algebra.

    Characters kill every nilpotent, so the radical is split off first: it
    is the null space of the trace form tr(L_{e_i} L_{e_j}) (finite
    dimension, characteristic zero), and characters of the radical-free
    quotient pull back along the projection. This keeps the eigenvalue
    extraction away from defective operators. Algebras with nilpotent parts
    therefore have fewer characters than dim; that is expected, not an
    error. Non-commutative input raises DomainError.
    """
    if not algebra.is_commutative():
        raise DomainError("character extraction requires a commutative algebra")
    d = algebra.dim
    lefts = np.stack([algebra.left_mul_matrix(np.eye(d)[i]) for i in range(d)])
    gram = np.einsum("iab,jba->ij", lefts, lefts)
    rad = la.null_space(gram)
    if rad.shape[0]:
        qalg, proj = quotient(algebra, Subspace(algebra, rad))
        chars = [Character(algebra, c.functional @ proj.matrix)
                 for c in _semisimple_characters(qalg, tol)]
        chars = [c for c in chars if c.is_character(tol)]
    else:
        chars = _semisimple_characters(algebra, tol)
    chars.sort(key=lambda c: tuple(np.round(c.functional.view(float), 9)))
    return chars


def quotient(algebra: StructureAlgebra, ideal: Subspace,
             tol: float = la.ZERO_TOL) -> tuple[StructureAlgebra, "LinearOp"]:
    """Quotient by a two-sided involution-closed ideal, plus the projection.

    The quotient basis consists of the classes of the standard basis vectors
    at the non-pivot columns of the ideal's row-reduced basis, so bases are
    deterministic. The projection is a unital homomorphism.
    """
    if ideal.algebra is not algebra:
        raise DomainError("subspace belongs to a different algebra")
    d = algebra.dim
    for i in range(d):
        e = np.eye(d)[i]
        for j, v in enumerate(ideal.basis):
            if not la.in_span(algebra.mul_coords(e, v), ideal.basis, tol):
                raise DomainError(f"not an ideal: basis {i} * (ideal basis {j}) "
                                  "leaves the subspace")
            if not la.in_span(algebra.mul_coords(v, e), ideal.basis, tol):
                raise DomainError(f"not an ideal: (ideal basis {j}) * basis {i} "
                                  "leaves the subspace")
    if not ideal.star_closed(tol):
        raise DomainError("ideal is not involution-closed; quotient involution undefined")

    r, pivots = la.rref(ideal.basis) if ideal.dim else (ideal.basis, [])
    free = [c for c in range(d) if c not in pivots]
    reduce = np.eye(d, dtype=complex)
    for i, p in enumerate(pivots):
        reduce[:, p] = -r[i]
        reduce[p, p] = 0.0
    proj = reduce[free, :]
    rep = np.eye(d, dtype=complex)[:, free]

    q = len(free)
    c_new = np.zeros((q, q, q), dtype=complex)
    for a in range(q):
        for b in range(q):
            c_new[a, b] = proj @ algebra.mul_coords(rep[:, a], rep[:, b])
    unit_new = proj @ algebra.unit
    inv_new = proj @ algebra.involution @ rep
    labels = ([algebra.labels[j] for j in free] if algebra.labels else None)
    qalg = StructureAlgebra(c_new, inv_new, unit_new, labels=labels)
    return qalg, LinearOp(proj, algebra, qalg)


def centralizer(algebra: StructureAlgebra, s: Subspace) -> Subspace:
    """{b : [b, v] = 0 for all v in s}, computed as one null space."""
    if s.dim == 0:
        return Subspace.whole(algebra)
    blocks = [algebra.right_mul_matrix(v) - algebra.left_mul_matrix(v)
              for v in s.basis]
    return Subspace(algebra, la.null_space(np.vstack(blocks)))


def subalgebra(algebra: StructureAlgebra, vectors,
               tol: float = la.ZERO_TOL) -> tuple[StructureAlgebra, "LinearOp"]:
    """Unital *-subalgebra spanned by the given vectors, plus its inclusion.

    The span must contain the unit and be closed under products and the
    involution; otherwise DomainError. The returned algebra uses the
    canonical row-reduced basis of the span.
    """
    rows = [v.coords if isinstance(v, Element) else v for v in vectors]
    basis = la.span_basis(rows, width=algebra.dim)
    if not la.in_span(algebra.unit, basis, tol):
        raise DomainError("span does not contain the unit")
    for v in basis:
        if not la.in_span(algebra.star_coords(v), basis, tol):
            raise DomainError("span is not closed under the involution")
    for a in basis:
        for b in basis:
            if not la.in_span(algebra.mul_coords(a, b), basis, tol):
                raise DomainError("span is not closed under products")
    r = basis.shape[0]

    def coeffs(v):
        sol, *_ = np.linalg.lstsq(basis.T, v, rcond=None)
        return sol

    c = np.zeros((r, r, r), dtype=complex)
    for i in range(r):
        for j in range(r):
            c[i, j] = coeffs(algebra.mul_coords(basis[i], basis[j]))
    inv = np.zeros((r, r), dtype=complex)
    for j in range(r):
        inv[:, j] = coeffs(algebra.star_coords(basis[j]))
    unit = coeffs(algebra.unit)
    sub = StructureAlgebra(c, inv, unit)
    return sub, LinearOp(basis.T, sub, algebra)


class LinearOp:
    """Matrix of a linear map between two structure algebras."""

    def __init__(self, matrix, source: StructureAlgebra, target: StructureAlgebra):
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.shape != (target.dim, source.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not map "
                             f"dim {source.dim} to dim {target.dim}")
        self.source = source
        self.target = target

    def __call__(self, x) -> Element:
        v = x.coords if isinstance(x, Element) else np.asarray(x, dtype=complex).ravel()
        return Element(self.target, self.matrix @ v)

    def compose(self, inner: "LinearOp") -> "LinearOp":
        if inner.target is not self.source:
            raise DomainError("composition shape mismatch")
        return LinearOp(self.matrix @ inner.matrix, inner.source, self.target)

    @classmethod
    def identity(cls, algebra: StructureAlgebra) -> "LinearOp":
        return cls(np.eye(algebra.dim), algebra, algebra)

    def hom_violations(self, tol: float = la.ZERO_TOL) -> list[str]:
        """Checks that the map is a unital involutive homomorphism."""
        out = []
        src, tgt, h = self.source, self.target, self.matrix
        if np.abs(h @ src.unit - tgt.unit).max() > tol:
            out.append("does not preserve the unit")
        for i in range(src.dim):
            lhs = h @ src.involution[:, i]
            rhs = tgt.star_coords(h[:, i])
            if np.abs(lhs - rhs).max() > tol:
                out.append(f"does not intertwine involutions at basis {i}")
                break
        for i in range(src.dim):
            for j in range(src.dim):
                lhs = h @ src.structure[i, j]
                rhs = tgt.mul_coords(h[:, i], h[:, j])
                if np.abs(lhs - rhs).max() > tol:
                    out.append(f"not multiplicative at basis pair ({i},{j})")
                    return out
        return out

    def is_homomorphism(self, tol: float = la.ZERO_TOL) -> bool:
        return not self.hom_violations(tol)

    def image(self) -> Subspace:
        return Subspace(self.target, self.matrix.T)

    def __repr__(self):
        return f"<LinearOp {self.source.dim}->{self.target.dim}>"


# --- constructors ------------------------------------------------------


def matrix_algebra(n: int) -> StructureAlgebra:
    """Full matrix algebra M_n with conjugate-transpose involution.

    Basis = matrix units E_ij in row-major order.
    """
    d = n * n

    def pos(i, j):
        return i * n + j

    c = np.zeros((d, d, d), dtype=complex)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if j == k:
            c[pos(i, j), pos(k, l), pos(i, l)] = 1.0
    inv = np.zeros((d, d), dtype=complex)
    for i, j in itertools.product(range(n), repeat=2):
        inv[pos(j, i), pos(i, j)] = 1.0
    unit = np.zeros(d, dtype=complex)
    for i in range(n):
        unit[pos(i, i)] = 1.0
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return StructureAlgebra(c, inv, unit, labels=labels, check=False)


def function_algebra(n: int) -> StructureAlgebra:
    """C^n with pointwise product and complex-conjugate involution."""
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        c[i, i, i] = 1.0
    labels = [f"e{i + 1}" for i in range(n)]
    return StructureAlgebra(c, np.eye(n), np.ones(n), labels=labels,
                            check=False)


def truncated_poly(mvars: int, degree: int) -> PolyAlgebra:
    """Polynomials of degree <= degree in mvars variables, overflow dropped."""
    return PolyAlgebra(mvars, degree, check=False)


def direct_sum(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    """Direct sum with componentwise operations."""
    da, db = a.dim, b.dim
    d = da + db
    c = np.zeros((d, d, d), dtype=complex)
    c[:da, :da, :da] = a.structure
    c[da:, da:, da:] = b.structure
    inv = np.zeros((d, d), dtype=complex)
    inv[:da, :da] = a.involution
    inv[da:, da:] = b.involution
    unit = np.concatenate([a.unit, b.unit])
    labels = None
    if a.labels and b.labels:
        labels = [f"({lab},0)" for lab in a.labels] + [f"(0,{lab})" for lab in b.labels]
    return StructureAlgebra(c, inv, unit, labels=labels, check=False)


def group_algebra(factors) -> StructureAlgebra:
    """Group algebra of a product of cyclic groups Z_{n_1} x ... x Z_{n_r}.

    Basis = point masses delta_g in lexicographic order of residue tuples;
    product is convolution (delta_g delta_h = delta_{g+h}) and the
    involution sends delta_g to delta_{-g} (conjugate coefficients).
    """
    factors = [int(n) for n in factors]
    if not factors or any(n < 1 for n in factors):
        raise ValueError("factors must be positive integers")
    elems = list(itertools.product(*[range(n) for n in factors]))
    index = {g: i for i, g in enumerate(elems)}
    d = len(elems)
    c = np.zeros((d, d, d), dtype=complex)
    for g in elems:
        for h in elems:
            s = tuple((x + y) % n for x, y, n in zip(g, h, factors))
            c[index[g], index[h], index[s]] = 1.0
    inv = np.zeros((d, d), dtype=complex)
    for g in elems:
        neg = tuple((-x) % n for x, n in zip(g, factors))
        inv[index[neg], index[g]] = 1.0
    unit = np.zeros(d, dtype=complex)
    unit[index[(0,) * len(factors)]] = 1.0
    labels = [f"d{g}" for g in elems]
    return StructureAlgebra(c, inv, unit, labels=labels, check=False)


def cusp_algebra() -> StructureAlgebra:
    """Span of the monomials {1, x^2, x^3, x^4, x^5, x^6}, products above
    degree 6 dropped.

    The missing degree-1 monomial makes the point 0 singular: tangent and
    cotangent spaces there are 2-dimensional.
    """
    exps = [0, 2, 3, 4, 5, 6]
    index = {e: i for i, e in enumerate(exps)}
    d = len(exps)
    c = np.zeros((d, d, d), dtype=complex)
    for i, a in enumerate(exps):
        for j, b in enumerate(exps):
            if a + b <= 6:
                c[i, j, index[a + b]] = 1.0
    unit = np.zeros(d, dtype=complex)
    unit[0] = 1.0
    labels = ["1"] + [f"x^{e}" for e in exps[1:]]
    return StructureAlgebra(c, np.eye(d), unit, labels=labels, check=False)


def algebra_from_name(name: str) -> StructureAlgebra:
    """Constructor lookup for CLI-style names.

    Supported: "matrix:n", "func:n", "poly:m:N", "group:AxB...", "cusp".
    """
    parts = name.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "matrix" and len(parts) == 2:
            return matrix_algebra(int(parts[1]))
        if kind == "func" and len(parts) == 2:
            return function_algebra(int(parts[1]))
        if kind == "poly" and len(parts) == 3:
            return truncated_poly(int(parts[1]), int(parts[2]))
        if kind == "group" and len(parts) == 2:
            return group_algebra([int(x.lstrip("z"))
                                  for x in parts[1].lower().split("x")])
        if kind == "cusp" and len(parts) == 1:
            return cusp_algebra()
    except ValueError as exc:
        raise ValueError(f"bad algebra name {name!r}: {exc}") from exc
    raise ValueError(f"unknown algebra name {name!r}")
