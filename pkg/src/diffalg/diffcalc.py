"""Commutator calculus relative to a homomorphism.

A linear map P: A -> B is measured against a homomorphism phi: A -> B
through the commutators [P, a](x) = P(a x) - phi(a) P(x). Differential
operators of order n are the maps whose (n+1)-fold iterated commutators
all vanish; the relative centralizer tower Z^n(phi) grades the elements of
B by how many commutators with the image of phi it takes to reach zero.
"""
from __future__ import annotations

import numpy as np

from . import _linalg as la
from .algebra import Character, Element, LinearOp, PolyAlgebra, StructureAlgebra, \
    Subspace, truncated_poly
from .dersys import DerivativeSystem, verify_system
from .errors import DomainError, NumericError
from .geometry import TangentVector
from .multiindex import mi_binomial, mi_le, mi_sub

__all__ = [
    "RelativeOp",
    "Tower",
    "commutator",
    "left_multiply",
    "diff_order",
    "z_tower",
    "z_tower_from_images",
    "check_stabilization",
    "is_derivation",
    "check_diffsys_characterization",
    "tangent_of_derivation",
    "truncation_hom",
    "derivative_matrix",
    "multiplication_matrix",
    "derivative_op",
]


class RelativeOp:
    """Linear map A -> B paired with the homomorphism giving the module action."""

    def __init__(self, op: LinearOp, action: LinearOp, check: bool = True,
                 tol: float = la.ZERO_TOL):
        if op.source is not action.source or op.target is not action.target:
            raise DomainError("map and action must share source and target")
        self.op = op
        self.action = action
        if check:
            bad = action.hom_violations(tol)
            if bad:
                raise DomainError(f"action is not a homomorphism: {bad[0]}")

    @property
    def source(self) -> StructureAlgebra:
        return self.op.source

    @property
    def target(self) -> StructureAlgebra:
        return self.op.target

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    def __call__(self, x) -> Element:
        return self.op(x)

    def norm(self) -> float:
        return float(np.linalg.norm(self.op.matrix))

    def __repr__(self):
        return f"<RelativeOp {self.source.dim}->{self.target.dim}>"


def _coords(x, algebra: StructureAlgebra) -> np.ndarray:
    if isinstance(x, Element):
        if x.algebra is not algebra:
            raise DomainError("element belongs to a different algebra")
        return x.coords
    return np.asarray(x, dtype=complex).ravel()


def commutator(p: RelativeOp, a) -> RelativeOp:
    """[P, a]: x -> P(a x) - phi(a) P(x), with the same action."""
    av = _coords(a, p.source)
    left_a = p.source.left_mul_matrix(av)
    left_phi = p.target.left_mul_matrix(p.action.matrix @ av)
    mat = p.op.matrix @ left_a - left_phi @ p.op.matrix
    return RelativeOp(LinearOp(mat, p.source, p.target), p.action, check=False)


def left_multiply(b, p: RelativeOp) -> RelativeOp:
    """b . P: x -> b * P(x) for b in the target algebra."""
    bv = _coords(b, p.target)
    mat = p.target.left_mul_matrix(bv) @ p.op.matrix
    return RelativeOp(LinearOp(mat, p.source, p.target), p.action, check=False)


def diff_order(p: RelativeOp, gens, max_n: int, tol: float = 1e-8,
               samples: int = 100, seed: int = 0) -> int | None:
    """Smallest n <= max_n with all (n+1)-fold iterated commutators zero.

    Commutator arguments run over the given generating set of the source;
    that is sufficient because [P, ab] = [P,a] L_b + L_phi(a) [P,b] lets
    vanishing propagate from generators to products. Each candidate order
    is additionally cross-checked on `samples` random element tuples, so a
    generating set that is secretly too small cannot produce a silent
    underestimate. Returns None when no order <= max_n is found.
    """
    gvecs = [_coords(g, p.source) for g in gens]
    if not gvecs:
        raise ValueError("need at least one generator")
    base = 1.0 + p.norm()
    rng = np.random.default_rng(seed)
    d = p.source.dim

    current = [p]
    for depth in range(1, max_n + 2):
        nxt = [commutator(q, g) for q in current for g in gvecs]
        if all(q.norm() <= tol * base for q in nxt):
            ok = True
            for _ in range(samples):
                q = p
                for _level in range(depth):
                    a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                    a /= np.linalg.norm(a)
                    q = commutator(q, a)
                if q.norm() > tol * base:
                    ok = False
                    break
            if ok:
                return depth - 1
        current = nxt
    return None


class Tower:
    """Ascending chain of subspaces of the target algebra."""

    def __init__(self, levels: list[Subspace]):
        self.levels = levels

    def level(self, n: int) -> Subspace:
        return self.levels[n]

    def dims(self) -> list[int]:
        return [s.dim for s in self.levels]

    def monotone(self, tol: float = la.ZERO_TOL) -> bool:
        return all(self.levels[n + 1].contains_subspace(self.levels[n], tol)
                   for n in range(len(self.levels) - 1))

    def __repr__(self):
        return f"<Tower dims={self.dims()}>"


def z_tower_from_images(target: StructureAlgebra, images, depth: int) -> Tower:
    """Centralizer tower against a fixed family of elements of the target.

    Z^0 = 0 and Z^{n+1} = {b : [b, c] in Z^n for every listed element c}.
    The membership condition is linear in c, so a spanning family of the
    action's image is fully general. Each level is one null-space solve:
    project [b, c] off the previous level and require the remainder zero.
    """
    cvecs = [np.asarray(c.coords if isinstance(c, Element) else c,
                        dtype=complex).ravel() for c in images]
    d = target.dim
    ad = [target.right_mul_matrix(c) - target.left_mul_matrix(c) for c in cvecs]
    levels = [Subspace.zero(target)]
    for _ in range(depth):
        prev = levels[-1]
        if prev.dim:
            q, _ = np.linalg.qr(prev.basis.T)
            off = np.eye(d) - q @ q.conj().T
        else:
            off = np.eye(d)
        stacked = np.vstack([off @ m for m in ad])
        levels.append(Subspace(target, la.null_space(stacked)))
    return Tower(levels)


def z_tower(phi: LinearOp, depth: int) -> Tower:
    """Centralizer tower of a homomorphism, built from its basis images."""
    return z_tower_from_images(phi.target, phi.matrix.T, depth)


def _involution_residual(phi: LinearOp) -> float:
    lhs = phi.matrix @ phi.source.involution
    rhs = phi.target.involution @ np.conj(phi.matrix)
    return float(np.abs(lhs - rhs).max())


def check_stabilization(phi: LinearOp, depth: int = 3,
                        enforce_preconditions: bool = True,
                        tol: float = la.ZERO_TOL) -> dict:
    """Report on whether the centralizer tower is constant from level 1.

    The stabilization statement assumes the action intertwines the
    involutions and lands in an involution-closed matrix-type algebra;
    a non-involutive action is refused unless enforce_preconditions=False,
    which is exactly how the counterexample tower is inspected.
    """
    res = _involution_residual(phi)
    involutive = res <= tol * (1.0 + float(np.abs(phi.matrix).max()))
    if not involutive and enforce_preconditions:
        raise DomainError(
            "action does not intertwine the involutions (residual "
            f"{res:.2e}); stabilization is only guaranteed for involutive "
            "actions into involution-closed algebras. Pass "
            "enforce_preconditions=False to inspect the tower anyway.")
    tower = z_tower(phi, depth)
    z1, z2 = tower.level(1), tower.level(2)
    forward = z2.contains_subspace(z1, tol)
    backward = z1.contains_subspace(z2, tol)
    return {
        "involutive": involutive,
        "involution_residual": res,
        "dims": tower.dims(),
        "z1_dim": z1.dim,
        "z2_dim": z2.dim,
        "stabilized": bool(forward and backward and z1.dim == z2.dim),
        "mutual_containment": [backward, forward],
        "tower": tower,
    }


def is_derivation(d: RelativeOp, tol: float = la.ZERO_TOL) -> bool:
    """True iff D(x*) = D(x)* and D(xy) = D(x) phi(y) + phi(x) D(y)."""
    a, b = d.source, d.target
    dm, pm = d.op.matrix, d.action.matrix
    scale = (1.0 + float(np.abs(dm).max())) * (1.0 + float(np.abs(pm).max()))
    star = np.abs(dm @ a.involution - b.involution @ np.conj(dm)).max()
    if star > tol * scale:
        return False
    lhs = np.einsum("ba,ija->ijb", dm, a.structure)
    rhs = np.einsum("bi,cj,bcd->ijd", dm, pm, b.structure)
    rhs += np.einsum("bi,cj,bcd->ijd", pm, dm, b.structure)
    return bool(np.abs(lhs - rhs).max() <= tol * scale)


def check_diffsys_characterization(sys: DerivativeSystem, gens,
                                   tol: float = 1e-8, samples: int = 100,
                                   seed: int = 0) -> dict:
    """Tests the three equivalent descriptions of a derivative system.

    (i) every D_k is a differential operator of order |k| relative to D_0;
    (ii) the values of each D_k, k > 0, lie in tower level Z^{|k|}(D_0);
    (iii) those values already lie in Z^1(D_0).
    The three are global statements over the whole family; the report says
    whether each holds and whether they agree, and also measures the
    commutator identity [D_k, a] = sum_{l<k} binom(k,l) D_{k-l}(a) . D_l
    as a matrix residual for |k| <= 3.
    """
    vr = verify_system(sys, tol)
    if not vr.ok:
        raise DomainError(f"not a derivative system: {vr.summary()}")
    a, b = sys.source, sys.target
    zero = (0,) * sys.mvars
    phi = LinearOp(sys.op_matrix(zero), a, b)
    tower = z_tower(phi, max(sys.order, 1))

    orders: dict = {}
    pred_i = True
    pred_ii = True
    pred_iii = True
    witnesses = []
    for k in sys.indices:
        if k == zero:
            orders[k] = 0
            continue
        p = RelativeOp(sys.op(k), phi, check=False)
        orders[k] = diff_order(p, gens, max_n=sum(k), tol=tol,
                               samples=samples, seed=seed)
        if orders[k] is None:
            pred_i = False
            witnesses.append({"predicate": "diff_order", "index": k})
        columns = sys.op_matrix(k).T
        if not tower.level(sum(k)).contains_subspace(Subspace(b, columns), tol):
            pred_ii = False
            witnesses.append({"predicate": "tower_membership", "index": k})
        if not tower.level(1).contains_subspace(Subspace(b, columns), tol):
            pred_iii = False
            witnesses.append({"predicate": "first_level", "index": k})

    comm_res = 0.0
    for k in sys.indices:
        if not 1 <= sum(k) <= 3:
            continue
        dk = sys.op_matrix(k)
        for i in range(a.dim):
            e = np.eye(a.dim)[i]
            lhs = dk @ a.left_mul_matrix(e) - b.left_mul_matrix(phi.matrix @ e) @ dk
            rhs = np.zeros_like(lhs)
            for l in sys.indices:
                if l != k and mi_le(l, k):
                    val = sys.op_matrix(mi_sub(k, l)) @ e
                    rhs = rhs + mi_binomial(k, l) * (b.left_mul_matrix(val)
                                                     @ sys.op_matrix(l))
            comm_res = max(comm_res, float(np.abs(lhs - rhs).max()))

    return {
        "predicates": {"diff_order": pred_i, "tower_membership": pred_ii,
                       "first_level": pred_iii},
        "agree": pred_i == pred_ii == pred_iii,
        "orders": orders,
        "tower_dims": tower.dims(),
        "commutator_residual": comm_res,
        "witnesses": witnesses,
    }


def tangent_of_derivation(d: RelativeOp, t: Character,
                          tol: float = 1e-9) -> TangentVector:
    """The functional x -> t(D(x)) of a derivation, as a tangent vector.

    The base point is the character t composed with the action; the
    Leibniz rule there follows from the derivation identity and is
    re-verified numerically.
    """
    if not is_derivation(d):
        raise DomainError("map is not a derivation relative to its action")
    if t.algebra is not d.target:
        raise DomainError("character must live on the target algebra")
    base = Character(d.source, t.functional @ d.action.matrix)
    if not base.is_character():
        raise NumericError("character pulled back along the action is not a character")
    tau = TangentVector(d.source, t.functional @ d.op.matrix, base)
    if tau.leibniz_residual() > tol * (1.0 + np.abs(tau.functional).max()):
        raise NumericError("pulled-back functional fails the Leibniz rule")
    return tau


# --- polynomial operator helpers ---------------------------------------


def truncation_hom(source: PolyAlgebra, target: PolyAlgebra) -> LinearOp:
    """Degree-truncation map between polynomial algebras; a homomorphism."""
    if source.mvars != target.mvars or target.degree > source.degree:
        raise ValueError("target must share variables and have no larger degree")
    mat = np.zeros((target.dim, source.dim), dtype=complex)
    for alpha, j in source.exp_index.items():
        if sum(alpha) <= target.degree:
            mat[target.exp_index[alpha], j] = 1.0
    return LinearOp(mat, source, target)


def derivative_matrix(source: PolyAlgebra, target: PolyAlgebra, i: int) -> np.ndarray:
    """Matrix of d/dx_i followed by truncation into the target degrees."""
    if source.mvars != target.mvars:
        raise ValueError("variable count mismatch")
    mat = np.zeros((target.dim, source.dim), dtype=complex)
    for alpha, j in source.exp_index.items():
        if alpha[i] >= 1:
            down = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            if sum(down) <= target.degree:
                mat[target.exp_index[down], j] = alpha[i]
    return mat


def multiplication_matrix(source: PolyAlgebra, target: PolyAlgebra,
                          g: dict) -> np.ndarray:
    """Matrix of f -> g*f truncated into the target degrees.

    g is a sparse polynomial {exponent tuple: coefficient}.
    """
    if source.mvars != target.mvars:
        raise ValueError("variable count mismatch")
    mat = np.zeros((target.dim, source.dim), dtype=complex)
    for alpha, j in source.exp_index.items():
        for beta, coeff in g.items():
            beta = tuple(int(t) for t in beta)
            up = tuple(x + y for x, y in zip(alpha, beta))
            if sum(up) <= target.degree:
                mat[target.exp_index[up], j] += coeff
    return mat


def derivative_op(source: PolyAlgebra, i: int, drop: int = 1) -> RelativeOp:
    """d/dx_i as a degree-lowering relative operator.

    The target is the same polynomial family with the degree lowered by
    `drop`, and the action is the truncation homomorphism; with that
    pairing the operator has differential order exactly 1 and the identity
    [d/dx_i, x_i] = truncation holds on the nose.
    """
    if drop < 1 or drop > source.degree:
        raise ValueError("drop must be between 1 and the source degree")
    target = truncated_poly(source.mvars, source.degree - drop)
    op = LinearOp(derivative_matrix(source, target, i), source, target)
    return RelativeOp(op, truncation_hom(source, target), check=False)
