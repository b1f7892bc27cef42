"""Connective commutative DG-algebras given by structure constants.

A Cdga stores, for each degree n <= 0, a basis of R^n, and
``mult[(i, j)]`` of shape (dim R^i, dim R^{i+j}, dim R^j) so that
``mult[(i, j)][a]`` is left multiplication by the a-th basis vector of
R^i as a map R^j -> R^{i+j}.  ``diff[n]`` is the matrix R^n -> R^{n+1}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import comb

import numpy as np

from .exactfield import FieldSpec
from .graded import Cohomology, GradedSpace, VComplex, full_cohomology


class NotLocal(ValueError):
    pass


@dataclass
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": [int(w) if isinstance(w, (int, np.integer)) else str(w)
                                                  for w in self.witness]}


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)
    local: "LocalData | None" = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations],
                "m_dim": None if self.local is None else self.local.m_dim}


@dataclass(eq=False)
class LocalData:
    """Residue data of H^0: augmentation, maximal ideal and its lifts to R^0."""
    eps: np.ndarray        # 1 x dim R^0, the map R^0 -> H^0 -> K
    m_classes: np.ndarray  # basis of m inside H^0 coordinates
    m_lifts: np.ndarray    # columns in R^0 lifting m_classes
    mbar: np.ndarray       # basis of ker(eps) in R^0, i.e. the preimage of m

    @property
    def m_dim(self) -> int:
        return self.m_classes.shape[1]


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(eq=False)
class Cdga:
    field: FieldSpec
    dims: dict
    unit: np.ndarray
    mult: dict
    diff: dict = dc_field(default_factory=dict)
    var_names: tuple = ()
    monomials: tuple = ()  # exponent tuples labelling the first coordinates of R^0
    name: str = ""

    def __post_init__(self):
        self.dims = {int(n): int(d) for n, d in sorted(self.dims.items()) if d > 0}

    # shape helpers ---------------------------------------------------------
    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def bottom(self) -> int:
        return min(self.dims) if self.dims else 0

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def m(self, i: int, j: int) -> np.ndarray:
        t = self.mult.get((i, j))
        if t is None:
            return self.field.zeros((self.dim(i), self.dim(i + j), self.dim(j)))
        return t

    def d(self, n: int) -> np.ndarray:
        t = self.diff.get(n)
        if t is None:
            return self.field.zeros((self.dim(n + 1), self.dim(n)))
        return t

    def left_mult(self, vec: np.ndarray, i: int, j: int) -> np.ndarray:
        """Matrix of left multiplication by vec (in R^i) from R^j to R^{i+j}."""
        return contract(self.field, vec, self.m(i, j))

    def product(self, a: np.ndarray, i: int, b: np.ndarray, j: int) -> np.ndarray:
        return self.field.dot(self.left_mult(a, i, j), b.reshape(-1, 1))[:, 0]

    def complex(self) -> VComplex:
        return VComplex.make(self.field, self.dims, {n: self.d(n) for n in self.degrees})

    @cached_property
    def cohomology(self) -> Cohomology:
        return full_cohomology(self.complex())

    @cached_property
    def local(self) -> LocalData:
        return compute_local_data(self)

    @cached_property
    def regular(self):
        from .modules import DenseModule
        return DenseModule(self, dict(self.dims), {n: self.d(n) for n in self.degrees if self.dim(n + 1)},
                        dict(self.mult), name="R")

    @cached_property
    def H(self) -> "Cdga":
        return cohomology_algebra(self)

    def inf_sup_amp(self):
        from .graded import inf_sup_amp
        return inf_sup_amp(self.cohomology.space)


def contract(F: FieldSpec, vec: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """sum_a vec[a] * tensor[a] as a matrix."""
    k, p, q = tensor.shape
    if k == 0 or p == 0 or q == 0:
        return F.zeros((p, q))
    nz = [a for a in range(k) if vec[a] != 0]
    if F.is_rational and len(nz) <= 8:
        # structure-constant vectors are usually sparse; skip the flint round trip
        out = F.zeros((p, q))
        for a in nz:
            out = out + (tensor[a] if vec[a] == 1 else vec[a] * tensor[a])
        return out
    return F.dot(vec.reshape(1, k), tensor.reshape(k, p * q)).reshape(p, q)


def basis_products(F: FieldSpec, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """For tensors left (A,G,H) and right (B,H,C), the tensor (A,B,G,C) of left[a] @ right[b]."""
    A, G, H = left.shape
    B, H2, C = right.shape
    assert H == H2
    if 0 in (A, G, B, C):
        return F.zeros((A, B, G, C))
    if H == 0:
        return F.zeros((A, B, G, C))
    l2 = left.reshape(A * G, H)
    r2 = right.transpose(1, 0, 2).reshape(H, B * C)
    return F.dot(l2, r2).reshape(A, G, B, C).transpose(0, 2, 1, 3)


def combine(F: FieldSpec, coeffs: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """coeffs of shape (X, E) against tensor (E, P, Q) -> (X, P, Q)."""
    X, E = coeffs.shape
    _, P, Q = tensor.shape
    if 0 in (X, P, Q) or E == 0:
        return F.zeros((X, P, Q))
    return F.dot(coeffs, tensor.reshape(E, P * Q)).reshape(X, P, Q)


def _first_mismatch(F, a, b):
    diff = F.sub(a, b) if a.size else a
    idx = np.argwhere(diff != 0)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def check_action_axioms(F: FieldSpec, ring: Cdga, dims: dict, act, diff, report: list):
    """Unit, associativity, Leibniz and d∘d on an action given by act(i, n) and diff(n)."""
    degs = sorted(d for d, v in dims.items() if v)
    rdegs = ring.degrees
    dim = lambda n: dims.get(n, 0)
    for n in degs:
        t = act(0, n)
        if ring.dim(0) and not F.equal(contract(F, ring.unit, t), F.eye(dim(n))):
            report.append(Violation("unit", (n,)))
        if dim(n + 2) and not F.is_zero(F.dot(diff(n + 1), diff(n))):
            report.append(Violation("d∘d", (n,)))
    for i in rdegs:
        for j in rdegs:
            for n in degs:
                if not (dim(n + i + j)):
                    continue
                lhs = basis_products(F, act(i, n + j), act(j, n))
                e = ring.dim(i + j)
                if e:
                    t = ring.m(i, j).transpose(0, 2, 1).reshape(ring.dim(i) * ring.dim(j), e)
                    rhs = combine(F, t, act(i + j, n)).reshape(lhs.shape)
                else:
                    rhs = F.zeros(lhs.shape)
                w = _first_mismatch(F, lhs, rhs)
                if w is not None:
                    report.append(Violation("associativity", (i, j, n) + w[:2]))
    for i in rdegs:
        for n in degs:
            if not dim(n + i + 1):
                continue
            t = act(i, n)
            # d(r m) = d(r) m + (-1)^i r d(m)
            A = ring.dim(i)
            lhs = np.stack([F.dot(diff(n + i), t[a]) for a in range(A)]) if A else F.zeros((0, dim(n + i + 1), dim(n)))
            dr = ring.d(i)  # (dim R^{i+1}, A)
            r1 = combine(F, dr.T.copy(), act(i + 1, n)) if ring.dim(i + 1) else F.zeros(lhs.shape)
            r2 = np.stack([F.dot(act(i, n + 1)[a], diff(n)) for a in range(A)]) if A else F.zeros(lhs.shape)
            rhs = F.add(r1, r2) if i % 2 == 0 else F.sub(r1, r2)
            w = _first_mismatch(F, lhs, rhs)
            if w is not None:
                report.append(Violation("leibniz", (i, n) + w[:1]))


def validate(r: Cdga, require_local: bool = True) -> ValidationReport:
    F = r.field
    rep: list = []
    if any(n > 0 for n in r.dims):
        rep.append(Violation("connective", tuple(n for n in r.dims if n > 0)))
    if r.unit.shape != (r.dim(0),):
        rep.append(Violation("unit-shape", (r.dim(0),)))
        return ValidationReport(rep)
    for (i, j), t in r.mult.items():
        if t.shape != (r.dim(i), r.dim(i + j), r.dim(j)):
            rep.append(Violation("mult-shape", (i, j)))
    for n, t in r.diff.items():
        if t.shape != (r.dim(n + 1), r.dim(n)):
            rep.append(Violation("diff-shape", (n,)))
    if rep:
        return ValidationReport(rep)
    if r.dim(0) == 0:
        rep.append(Violation("unit", ("R^0 = 0",)))
        return ValidationReport(rep)
    du = F.dot(r.d(0), r.unit.reshape(-1, 1)) if r.dim(1) else None
    if du is not None and not F.is_zero(du):
        rep.append(Violation("d(unit)", (0,)))
    # right unit
    for j in r.degrees:
        t = r.m(j, 0)
        right = np.stack([F.dot(t[a], r.unit.reshape(-1, 1))[:, 0] for a in range(r.dim(j))], axis=1)
        w = _first_mismatch(F, right, F.eye(r.dim(j)))
        if w is not None:
            rep.append(Violation("right-unit", (j,) + w))
    for i in r.degrees:
        for j in r.degrees:
            if i + j not in r.dims:
                continue
            a = r.m(i, j).transpose(0, 2, 1)
            b = r.m(j, i).transpose(2, 0, 1)
            b = b if (i * j) % 2 == 0 else F.neg(b)
            w = _first_mismatch(F, a, b)
            if w is not None:
                rep.append(Violation("graded-commutativity", (i, j) + w[:2]))
    check_action_axioms(F, r, r.dims, r.m, r.d, rep)
    local = None
    if not rep and require_local:
        try:
            local = r.local
        except NotLocal as e:
            rep.append(Violation("local", (str(e),)))
    return ValidationReport(rep, local)


def _minpoly_of_vector(F: FieldSpec, L: np.ndarray, v: np.ndarray) -> list:
    """Monic coefficients c_0..c_{k-1} with L^k v = sum c_i L^i v."""
    vecs = [v]
    while True:
        nxt = F.dot(L, vecs[-1].reshape(-1, 1))[:, 0]
        basis = np.stack(vecs, axis=1)
        c = F.try_solve(basis, nxt)
        if c is not None:
            return list(c)
        vecs.append(nxt)


def _eigenvalue(F: FieldSpec, coeffs: list):
    """lambda with t^k - sum c_i t^i = (t - lambda)^k, or None."""
    k = len(coeffs)
    # coefficient of t^{k-1} in the monic poly is -c_{k-1}
    p = F.characteristic
    top = [F.neg(c) for c in coeffs] + [F.one]  # a_0..a_k
    if p == 0:
        lam = F.neg(top[k - 1]) / k
    else:
        a = 1
        while k % (a * p) == 0:
            a *= p
        q = k // a
        # (t^a - lam)^q: coefficient of t^{a(q-1)} is -q lam
        lam = F.neg(top[k - a]) * pow(q, -1, p) % p
    for i in range(k + 1):
        coef = comb(k, i)
        term = F.scalar(coef) * (F.neg(lam) ** (k - i)) if p == 0 else coef * pow(int(F.neg(lam)), k - i, p) % p
        if term != top[i]:
            return None
    return lam


def compute_local_data(r: Cdga) -> LocalData:
    F = r.field
    h0 = r.cohomology[0] if r.dim(0) else None
    if h0 is None or h0.dim == 0:
        raise NotLocal("H^0 = 0")
    reps, proj = h0.reps, h0.proj
    n = h0.dim
    unit_cls = F.dot(proj, r.unit.reshape(-1, 1))[:, 0]
    lams = []
    for i in range(n):
        L = F.mdot(proj, r.left_mult(reps[:, i], 0, 0), reps)
        coeffs = _minpoly_of_vector(F, L, unit_cls)
        lam = _eigenvalue(F, coeffs)
        if lam is None:
            raise NotLocal(f"basis class {i} of H^0 is not scalar plus nilpotent")
        lams.append(lam)
    phi = F.array([lams]) if F.characteristic == 0 else np.array([lams], dtype=np.int64)
    m_classes = F.kernel(phi)
    # m must be nilpotent; with H^0 commutative it suffices that each basis element is
    for j in range(m_classes.shape[1]):
        L = F.mdot(proj, r.left_mult(F.dot(reps, m_classes[:, j:j + 1])[:, 0], 0, 0), reps)
        P, e = L, 1
        while e < n and not F.is_zero(P):
            P, e = F.dot(P, P), 2 * e
        if not F.is_zero(P):
            raise NotLocal("maximal ideal is not nilpotent")
    eps = F.dot(phi, proj)
    return LocalData(eps=eps, m_classes=m_classes, m_lifts=F.dot(reps, m_classes), mbar=F.kernel(eps))


def cohomology_algebra(r: Cdga) -> Cdga:
    """H(R) with zero differential on the stored representatives."""
    F = r.field
    h = r.cohomology
    dims = dict(h.space.dims)
    mult = {}
    for i in dims:
        for j in dims:
            if i + j not in dims:
                continue
            ri = h.reps(i)
            t = combine(F, ri.T.copy(), r.m(i, j))  # (hi, R^{i+j}, R^j)
            t = np.stack([F.mdot(h.proj(i + j), t[a], h.reps(j)) for a in range(dims[i])])
            mult[(i, j)] = t
    unit = F.dot(h.proj(0), r.unit.reshape(-1, 1))[:, 0]
    return Cdga(F, dims, unit, mult, {}, r.var_names, (), name=f"H({r.name})" if r.name else "H")


def formal(r: Cdga) -> Cdga:
    return r.H


def monomial_quotient(F: FieldSpec, var_names, relations, name: str = "") -> Cdga:
    """K[vars]/(monomials) in degree 0; relations are exponent tuples."""
    v = len(var_names)
    rels = [tuple(r) for r in relations]
    for i in range(v):
        if not any(all(r[j] == 0 for j in range(v) if j != i) and r[i] > 0 for r in rels):
            raise ValueError(f"quotient is infinite-dimensional: no pure power of {var_names[i]}")

    def dead(m):
        return any(all(m[j] >= r[j] for j in range(v)) for r in rels)

    bounds = [min(r[i] for r in rels if all(r[j] == 0 for j in range(v) if j != i) and r[i] > 0)
              for i in range(v)]
    basis = [m for m in itertools.product(*[range(b) for b in bounds]) if not dead(m)]
    basis.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
    index = {m: k for k, m in enumerate(basis)}
    n = len(basis)
    t = F.zeros((n, n, n))
    for a, ma in enumerate(basis):
        for b, mb in enumerate(basis):
            prod = tuple(x + y for x, y in zip(ma, mb))
            if prod in index:
                t[a, index[prod], b] = F.one
    unit = F.zeros((n,))
    unit[index[(0,) * v]] = F.one
    return Cdga(F, {0: n}, unit, {(0, 0): t}, {}, tuple(var_names), tuple(basis), name)


def ground_field(F: FieldSpec) -> Cdga:
    t = F.zeros((1, 1, 1))
    t[0, 0, 0] = F.one
    u = F.zeros((1,))
    u[0] = F.one
    return Cdga(F, {0: 1}, u, {(0, 0): t}, {}, (), ((),), "K")


def socle_of_algebra(r: Cdga) -> dict:
    """Graded socle of a Cdga with zero differential: {c : m c = 0, R^{<0} c = 0}, per degree."""
    F = r.field
    loc = r.local
    out = {}
    for n in r.degrees:
        rows = []
        for j in range(loc.m_lifts.shape[1]):
            rows.append(r.left_mult(loc.m_lifts[:, j], 0, n))
        for i in r.degrees:
            if i < 0 and r.dim(n + i):
                t = r.m(i, n)
                rows.extend(t[a] for a in range(r.dim(i)))
        A = np.concatenate(rows, axis=0) if rows else F.zeros((0, r.dim(n)))
        out[n] = F.kernel(A)
    return out
