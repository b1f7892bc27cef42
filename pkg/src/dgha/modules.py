"""DG-modules over a Cdga and the constructions used by the resolutions.

Two concrete representations share one interface:

* ``DenseModule`` stores every action tensor ``act[(i, n)]`` of shape
  (dim R^i, dim M^{n+i}, dim M^n).
* ``SumModule`` is a direct sum of shifted pieces with block diagonal
  action and an arbitrary (dense) differential.  Cones, shifts and free
  modules are built this way so the stage modules of long resolutions
  never need dense action tensors.

Sign conventions: M[s]^n = M^{n+s}, d[s] = (-1)^s d, r.m twisted by
(-1)^{s|r|}.  cone(f: X -> Y) = Y + X[1] with d = [[dY, f], [0, -dX]].
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .cdga import Cdga, Violation, check_action_axioms, combine, contract
from .exactfield import FieldSpec
from .graded import Cohomology, GradedSpace, VComplex, full_cohomology, inf_sup_amp


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


class DgModule:
    ring: Cdga
    dims: dict
    diff: dict
    name: str = ""

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def d(self, n: int) -> np.ndarray:
        t = self.diff.get(n)
        if t is None:
            return self.field.zeros((self.dim(n + 1), self.dim(n)))
        return t

    def complex(self) -> VComplex:
        return VComplex.make(self.field, self.dims, {n: self.d(n) for n in self.degrees})

    @cached_property
    def cohomology(self) -> Cohomology:
        return full_cohomology(self.complex(), check=False)

    @property
    def hdims(self) -> dict:
        return dict(self.cohomology.space.dims)

    def inf_sup_amp(self):
        return inf_sup_amp(self.cohomology.space)

    @property
    def inf(self):
        return self.inf_sup_amp()[0]

    @property
    def sup(self):
        return self.inf_sup_amp()[1]

    @property
    def amp(self):
        return self.inf_sup_amp()[2]

    def is_acyclic(self) -> bool:
        return not self.cohomology.space.dims

    # action primitives, overridden below ------------------------------------
    def action(self, i: int, n: int) -> np.ndarray:
        raise NotImplementedError

    def act_elem(self, vec: np.ndarray, i: int, n: int) -> np.ndarray:
        return contract(self.field, vec, self.action(i, n))

    def right_apply(self, Z: np.ndarray, i: int, n: int) -> np.ndarray:
        """Tensor (A, dim M^{n+i}, k) of act_a @ Z for Z of shape (dim M^n, k)."""
        F = self.field
        T = self.action(i, n)
        A, P, Q = T.shape
        if 0 in (A, P, Z.shape[1]) or Q == 0:
            return F.zeros((A, P, Z.shape[1]))
        return F.dot(T.reshape(A * P, Q), Z).reshape(A, P, Z.shape[1])

    def left_apply(self, Psi: np.ndarray, i: int, n: int) -> np.ndarray:
        """Tensor (A, k, dim M^n) of Psi @ act_a for Psi of shape (k, dim M^{n+i})."""
        F = self.field
        T = self.action(i, n)
        A, P, Q = T.shape
        k = Psi.shape[0]
        if 0 in (A, Q, k) or P == 0:
            return F.zeros((A, k, Q))
        r = F.dot(Psi, T.transpose(1, 0, 2).reshape(P, A * Q))
        return r.reshape(k, A, Q).transpose(1, 0, 2)

    def dense(self) -> "DenseModule":
        R = self.ring
        act = {}
        for i in R.degrees:
            for n in self.degrees:
                if self.dim(n + i):
                    act[(i, n)] = self.action(i, n)
        return DenseModule(R, dict(self.dims), {n: self.d(n) for n in self.degrees if self.dim(n + 1)},
                           act, name=self.name)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} dims={self.dims}>"


class DenseModule(DgModule):
    def __init__(self, ring: Cdga, dims: dict, diff: dict, act: dict, name: str = ""):
        self.ring = ring
        self.dims = {int(n): int(v) for n, v in sorted(dims.items()) if v > 0}
        self.diff = {n: t for n, t in diff.items() if t.size}
        self.act = act
        self.name = name

    def action(self, i: int, n: int) -> np.ndarray:
        t = self.act.get((i, n))
        if t is None:
            return self.field.zeros((self.ring.dim(i), self.dim(n + i), self.dim(n)))
        return t


@dataclass(frozen=True)
class Piece:
    module: DgModule
    shift: int   # degree n of the sum meets module degree n + shift
    twist: int   # action by r carries the sign (-1)^{twist |r|}


class SumModule(DgModule):
    def __init__(self, ring: Cdga, pieces: list, diff: dict | None = None, name: str = ""):
        self.ring = ring
        self.pieces = list(pieces)
        dims: dict = {}
        for p in self.pieces:
            for n, v in p.module.dims.items():
                dims[n - p.shift] = dims.get(n - p.shift, 0) + v
        self.dims = {n: v for n, v in sorted(dims.items()) if v}
        self._offsets: dict = {}
        self.diff = {n: t for n, t in (diff or {}).items() if t.size}
        self.name = name

    def offsets(self, n: int) -> list:
        o = self._offsets.get(n)
        if o is None:
            o, acc = [], 0
            for p in self.pieces:
                o.append(acc)
                acc += p.module.dim(n + p.shift)
            self._offsets[n] = o
        return o

    def piece_range(self, k: int, n: int) -> slice:
        o = self.offsets(n)[k]
        return slice(o, o + self.pieces[k].module.dim(n + self.pieces[k].shift))

    def _sign(self, k: int, i: int) -> int:
        return _sgn(self.pieces[k].twist * i)

    def act_elem(self, vec, i, n):
        F = self.field
        out = F.zeros((self.dim(n + i), self.dim(n)))
        for k, p in enumerate(self.pieces):
            rs, cs = self.piece_range(k, n + i), self.piece_range(k, n)
            if rs.stop == rs.start or cs.stop == cs.start:
                continue
            blk = p.module.act_elem(vec, i, n + p.shift)
            out[rs, cs] = blk if self._sign(k, i) > 0 else F.neg(blk)
        return out

    def action(self, i, n):
        F = self.field
        A = self.ring.dim(i)
        out = F.zeros((A, self.dim(n + i), self.dim(n)))
        for k, p in enumerate(self.pieces):
            rs, cs = self.piece_range(k, n + i), self.piece_range(k, n)
            if rs.stop == rs.start or cs.stop == cs.start:
                continue
            blk = p.module.action(i, n + p.shift)
            out[:, rs, cs] = blk if self._sign(k, i) > 0 else F.neg(blk)
        return out

    def right_apply(self, Z, i, n):
        F = self.field
        A = self.ring.dim(i)
        out = F.zeros((A, self.dim(n + i), Z.shape[1]))
        for k, p in enumerate(self.pieces):
            rs, cs = self.piece_range(k, n + i), self.piece_range(k, n)
            if rs.stop == rs.start or cs.stop == cs.start:
                continue
            blk = p.module.right_apply(Z[cs], i, n + p.shift)
            out[:, rs, :] = blk if self._sign(k, i) > 0 else F.neg(blk)
        return out

    def left_apply(self, Psi, i, n):
        F = self.field
        A = self.ring.dim(i)
        out = F.zeros((A, Psi.shape[0], self.dim(n)))
        for k, p in enumerate(self.pieces):
            rs, cs = self.piece_range(k, n + i), self.piece_range(k, n)
            if rs.stop == rs.start or cs.stop == cs.start:
                continue
            blk = p.module.left_apply(Psi[:, rs], i, n + p.shift)
            out[:, :, cs] = blk if self._sign(k, i) > 0 else F.neg(blk)
        return out


def pieces_of(m: DgModule, shift: int = 0) -> list:
    """Pieces of m[shift]."""
    if isinstance(m, SumModule):
        return [Piece(p.module, p.shift + shift, (p.twist + shift) % 2) for p in m.pieces]
    return [Piece(m, shift, shift % 2)]


# morphisms ----------------------------------------------------------------------

class DgMorphism:
    def __init__(self, source: DgModule, target: DgModule, blocks: dict):
        self.source = source
        self.target = target
        self.blocks = blocks

    @property
    def field(self):
        return self.source.field

    def block(self, n: int) -> np.ndarray:
        b = self.blocks.get(n)
        if b is None:
            return self.field.zeros((self.target.dim(n), self.source.dim(n)))
        return b

    def degrees(self):
        return sorted(set(self.source.degrees) | set(self.target.degrees))

    def compose(self, other: "DgMorphism") -> "DgMorphism":
        """self ∘ other."""
        F = self.field
        return DgMorphism(other.source, self.target,
                          {n: F.dot(self.block(n), other.block(n)) for n in other.source.degrees
                           if self.target.dim(n)})

    def cohomology_map(self, n: int) -> np.ndarray:
        F = self.field
        hs, ht = self.source.cohomology, self.target.cohomology
        if n not in hs.data or n not in ht.data:
            return F.zeros((self.target.cohomology.space.dim(n), self.source.cohomology.space.dim(n)))
        return F.mdot(ht.proj(n), self.block(n), hs.reps(n))


def check_module(m: DgModule) -> list:
    rep: list = []
    dm = m.dense() if not isinstance(m, DenseModule) else m
    check_action_axioms(m.field, m.ring, dm.dims, dm.action, dm.d, rep)
    return rep


def check_morphism(f: DgMorphism) -> list:
    F = f.field
    R = f.source.ring
    rep = []
    for n in f.degrees():
        if f.target.dim(n + 1) and f.source.dim(n):
            if not F.equal(F.dot(f.target.d(n), f.block(n)), F.dot(f.block(n + 1), f.source.d(n))):
                rep.append(Violation("chain-map", (n,)))
        for i in R.degrees:
            if not (f.target.dim(n + i) and f.source.dim(n)):
                continue
            a = f.target.action(i, n)
            lhs = np.stack([F.dot(a[k], f.block(n)) for k in range(R.dim(i))]) if R.dim(i) else a
            b = f.source.action(i, n)
            rhs = np.stack([F.dot(f.block(n + i), b[k]) for k in range(R.dim(i))]) if R.dim(i) else a
            if not F.equal(lhs, rhs):
                rep.append(Violation("linearity", (i, n)))
    return rep


def identity(m: DgModule) -> DgMorphism:
    return DgMorphism(m, m, {n: m.field.eye(m.dim(n)) for n in m.degrees})


# basic constructions ----------------------------------------------------------------

def zero_module(R: Cdga) -> DgModule:
    return DenseModule(R, {}, {}, {}, name="0")


def shift(m: DgModule, s: int) -> DgModule:
    F = m.field
    diff = {}
    for n in m.degrees:
        if m.dim(n + 1):
            diff[n - s] = F.neg(m.d(n)) if s % 2 else m.d(n)
    return SumModule(m.ring, pieces_of(m, s), diff, name=f"{m.name}[{s}]")


def shift_morphism(f: DgMorphism, s: int) -> DgMorphism:
    src, tgt = shift(f.source, s), shift(f.target, s)
    return DgMorphism(src, tgt, {n - s: b for n, b in f.blocks.items()})


def direct_sum(ms: list, name: str = "") -> DgModule:
    R = ms[0].ring
    F = R.field
    pieces = []
    for m in ms:
        pieces.extend(pieces_of(m))
    out = SumModule(R, pieces, name=name)
    diff = {}
    for n in out.degrees:
        if not out.dim(n + 1):
            continue
        blocks = [m.d(n) for m in ms]
        diff[n] = _block_diag(F, blocks, [m.dim(n + 1) for m in ms], [m.dim(n) for m in ms])
    out.diff = diff
    return out


def _block_diag(F, blocks, rows, cols):
    out = F.zeros((sum(rows), sum(cols)))
    r = c = 0
    for b, h, w in zip(blocks, rows, cols):
        if h and w:
            out[r:r + h, c:c + w] = b
        r += h
        c += w
    return out


@dataclass
class Cone:
    module: DgModule
    inclusion: DgMorphism   # Y -> cone
    projection: DgMorphism  # cone -> X[1]


def cone(f: DgMorphism) -> Cone:
    X, Y = f.source, f.target
    if X.ring is not Y.ring:
        raise ValueError("morphism between modules over different algebras")
    F = f.field
    pieces = pieces_of(Y) + pieces_of(X, 1)
    C = SumModule(Y.ring, pieces, name=f"cone({f.source.name}->{f.target.name})")
    diff = {}
    for n in C.degrees:
        if not C.dim(n + 1):
            continue
        y0, y1 = Y.dim(n), Y.dim(n + 1)
        x1, x2 = X.dim(n + 1), X.dim(n + 2)
        blk = F.zeros((y1 + x2, y0 + x1))
        if y1 and y0:
            blk[:y1, :y0] = Y.d(n)
        if y1 and x1:
            blk[:y1, y0:] = f.block(n + 1)
        if x2 and x1:
            blk[y1:, y0:] = F.neg(X.d(n + 1))
        diff[n] = blk
    C.diff = diff
    inc = {n: F.eye(C.dim(n))[:, :Y.dim(n)] for n in C.degrees if Y.dim(n)}
    X1 = shift(X, 1)
    proj = {n: F.eye(C.dim(n))[Y.dim(n):, :] for n in C.degrees if X.dim(n + 1)}
    return Cone(C, DgMorphism(Y, C, inc), DgMorphism(C, X1, proj))


def is_quasi_iso(f: DgMorphism) -> bool:
    return cone(f).module.is_acyclic()


# sub and quotient modules --------------------------------------------------------

def submodule(m: DgModule, basis: dict, name: str = ""):
    """The DG-submodule spanned degreewise by the columns of basis[n].

    Returns (S, inclusion).  Closure under d and the action is assumed.
    """
    F = m.field
    R = m.ring
    basis = {n: b for n, b in basis.items() if b.shape[1]}
    linv = {n: F.left_inverse(b) for n, b in basis.items()}
    dims = {n: b.shape[1] for n, b in basis.items()}
    diff = {n: F.mdot(linv[n + 1], m.d(n), basis[n]) for n in basis if n + 1 in basis}
    act = {}
    for i in R.degrees:
        A = R.dim(i)
        for n in basis:
            if n + i not in basis or not A:
                continue
            t = m.right_apply(basis[n], i, n)  # (A, dim M^{n+i}, k)
            P = t.shape[1]
            t2 = F.dot(linv[n + i], t.transpose(1, 0, 2).reshape(P, A * dims[n]))
            act[(i, n)] = t2.reshape(dims[n + i], A, dims[n]).transpose(1, 0, 2)
    S = DenseModule(R, dims, diff, act, name=name)
    return S, DgMorphism(S, m, dict(basis))


def quotient(m: DgModule, sub: dict, name: str = ""):
    """M / S for a DG-submodule given by spanning columns sub[n] (independent).

    Returns (Q, projection).
    """
    F = m.field
    R = m.ring
    comp, pi = {}, {}
    for n in m.degrees:
        s = sub.get(n, F.zeros((m.dim(n), 0)))
        c = F.extend(s, m.dim(n))
        if c.shape[1] == 0:
            continue
        w = np.concatenate([s, c], axis=1)
        comp[n] = c
        pi[n] = F.inverse(w)[s.shape[1]:]
    dims = {n: c.shape[1] for n, c in comp.items()}
    diff = {n: F.mdot(pi[n + 1], m.d(n), comp[n]) for n in comp if n + 1 in comp}
    act = {}
    for i in R.degrees:
        A = R.dim(i)
        for n in comp:
            if n + i not in comp or not A:
                continue
            t = m.right_apply(comp[n], i, n)
            P = t.shape[1]
            t2 = F.dot(pi[n + i], t.transpose(1, 0, 2).reshape(P, A * dims[n]))
            act[(i, n)] = t2.reshape(dims[n + i], A, dims[n]).transpose(1, 0, 2)
    Q = DenseModule(R, dims, diff, act, name=name)
    return Q, DgMorphism(m, Q, pi)


def truncate(m: DgModule, mode: str, n: int) -> DgModule:
    """Smart truncations: mode 'le' keeps H^{<=n}, mode 'gt' keeps H^{>n}."""
    F = m.field
    if mode == "le":
        basis = {k: F.eye(m.dim(k)) for k in m.degrees if k < n}
        if m.dim(n):
            basis[n] = F.kernel(m.d(n)) if m.dim(n + 1) else F.eye(m.dim(n))
        return submodule(m, basis, name=f"σ≤{n}({m.name})")[0]
    if mode == "gt":
        sub = {k: F.eye(m.dim(k)) for k in m.degrees if k <= n}
        if m.dim(n + 1) and m.dim(n):
            sub[n + 1] = F.column_basis(m.d(n))
        return quotient(m, sub, name=f"σ>{n}({m.name})")[0]
    raise ValueError(f"unknown truncation mode {mode!r}")


# free modules -------------------------------------------------------------------

class FreeModule(SumModule):
    """Semi-free module on generators w_k of degree gens[k]; basis a.w, untwisted action.

    d(a w) = d(a) w + (-1)^{|a|} a d(w).
    """

    def __init__(self, ring: Cdga, gens: list, gen_diffs: list | None = None, name: str = ""):
        R = ring
        pieces = [Piece(R.regular, -g, 0) for g in gens]
        super().__init__(R, pieces, name=name)
        self.gens = list(gens)
        if callable(gen_diffs):
            gen_diffs = gen_diffs(self)
        self.gen_diffs = gen_diffs
        self.diff = self._build_diff(gen_diffs)

    def gen_vector(self, k: int) -> np.ndarray:
        """Coordinates of the generator w_k in degree gens[k]."""
        F = self.field
        g = self.gens[k]
        v = F.zeros((self.dim(g),))
        r = self.piece_range(k, g)
        v[r] = self.ring.unit
        return v

    def _build_diff(self, gen_diffs):
        F, R = self.field, self.ring
        diff = {}
        for n in self.degrees:
            if not self.dim(n + 1):
                continue
            blk = F.zeros((self.dim(n + 1), self.dim(n)))
            for k, g in enumerate(self.gens):
                cs = self.piece_range(k, n)
                if cs.stop == cs.start:
                    continue
                i = n - g
                rs = self.piece_range(k, n + 1)
                if rs.stop > rs.start:
                    blk[rs, cs] = R.d(i)
                if gen_diffs is not None and gen_diffs[k] is not None:
                    dw = gen_diffs[k].reshape(-1, 1)
                    t = self.right_apply(dw, i, g + 1)[:, :, 0]  # (A, dim F^{n+1})
                    if i % 2:
                        t = F.neg(t)
                    blk[:, cs] = F.add(blk[:, cs], t.T)
            diff[n] = blk
        return diff


def free_morphism(P: FreeModule, M: DgModule, images: list) -> DgMorphism:
    """R-linear map sending w_k to images[k] in M^{gens[k]}; a chain map when d w_k maps to d images[k]."""
    F = M.field
    blocks = {}
    for n in P.degrees:
        if not M.dim(n):
            continue
        blk = F.zeros((M.dim(n), P.dim(n)))
        for k, g in enumerate(P.gens):
            cs = P.piece_range(k, n)
            if cs.stop == cs.start:
                continue
            t = M.right_apply(images[k].reshape(-1, 1), n - g, g)[:, :, 0]
            blk[:, cs] = t.T
        blocks[n] = blk
    return DgMorphism(P, M, blocks)


# Hom into complexes of vector spaces -------------------------------------------------

def vspace_complex(F: FieldSpec, dims: dict, diff: dict | None = None) -> VComplex:
    return VComplex.make(F, dims, diff or {})


class HomModule(DenseModule):
    """Hom_K(M, L) with (r f)(m) = (-1)^{|r||f|} f(r m), d f = d_L f - (-1)^{|f|} f d_M.

    Degree n component: blocks f_p : M^p -> L^{p+n} in increasing p, each flattened row-major.
    """

    def __init__(self, m: DgModule, L: VComplex, name: str = ""):
        F = m.field
        R = m.ring
        self.source_module = m
        self.target_complex = L
        ldims = L.space.dims
        layout = {}
        for p in m.degrees:
            for q in ldims:
                layout.setdefault(q - p, []).append(p)
        self.layout = {}
        dims = {}
        for n, ps in layout.items():
            off, acc = {}, 0
            for p in sorted(ps):
                off[p] = acc
                acc += ldims[p + n] * m.dim(p)
            self.layout[n] = off
            dims[n] = acc
        self._L = L
        diff = {}
        for n in dims:
            if n + 1 not in dims:
                continue
            blk = F.zeros((dims[n + 1], dims[n]))
            for p, o in self.layout[n].items():
                l0, mp = L.space.dim(p + n), m.dim(p)
                if p in self.layout[n + 1] and L.space.dim(p + n + 1):
                    o1 = self.layout[n + 1][p]
                    l1 = L.space.dim(p + n + 1)
                    blk[o1:o1 + l1 * mp, o:o + l0 * mp] = np.kron(L.d(p + n), F.eye(mp))
            # - (-1)^n f_{p+1} d_M^p contributes to (df)_p from f_{p+1}
            for p in self.layout[n + 1]:
                if p + 1 in self.layout[n] and m.dim(p + 1):
                    o1 = self.layout[n + 1][p]
                    o = self.layout[n][p + 1]
                    l1 = L.space.dim(p + n + 1)
                    t = np.kron(F.eye(l1), m.d(p).T.copy())
                    t = t if n % 2 else F.neg(t)
                    blk[o1:o1 + l1 * m.dim(p), o:o + l1 * m.dim(p + 1)] = F.add(
                        blk[o1:o1 + l1 * m.dim(p), o:o + l1 * m.dim(p + 1)], t)
            diff[n] = F.normalize(blk)
        act = {}
        for i in R.degrees:
            A = R.dim(i)
            for n in dims:
                if n + i not in dims or not A:
                    continue
                t = F.zeros((A, dims[n + i], dims[n]))
                # (r f)_p = (-1)^{i n} f_{p+i} ∘ act_M(r): M^p -> M^{p+i}
                for p, o in self.layout[n + i].items():
                    q = p + i
                    if q not in self.layout[n]:
                        continue
                    l = L.space.dim(p + n + i)
                    am = m.action(i, p)  # (A, M^{p+i}, M^p)
                    oq = self.layout[n][q]
                    for a in range(A):
                        blk = np.kron(F.eye(l), am[a].T.copy())
                        t[a, o:o + l * m.dim(p), oq:oq + l * m.dim(q)] = blk if (i * n) % 2 == 0 else F.neg(blk)
                act[(i, n)] = F.normalize(t)
        super().__init__(R, dims, diff, act, name=name)


def hom_to_complex(m: DgModule, L: VComplex, name: str = "") -> HomModule:
    return HomModule(m, L, name=name)


def point_complex(F: FieldSpec, mult: int, degree: int) -> VComplex:
    return VComplex.make(F, {degree: mult}, {})


def matlis_dual(m: DgModule) -> HomModule:
    F = m.field
    return HomModule(m, point_complex(F, 1, 0), name=f"D({m.name})")


def coinduced_injective(R: Cdga, mult: int = 1, degree: int = 0) -> HomModule:
    """Hom_K(R, K^mult placed in degree `degree`); H^{-degree}... a shifted sum of E(k) copies."""
    R.local  # raises NotLocal
    return HomModule(R.regular, point_complex(R.field, mult, degree), name=f"G(E^{mult})[{-degree}]")


def adjunction_morphism(m: DgModule, I: HomModule, g: dict) -> DgMorphism:
    """The map M -> Hom_K(R, L) adjoint to a K-linear chain map g: M -> L.

    g[d] is the matrix M^d -> L^d.  f(m)(s) = (-1)^{|s||m|} g(s m).
    """
    F = m.field
    R = m.ring
    L = I.target_complex
    blocks = {}
    for n in m.degrees:
        if n not in I.dims:
            continue
        blk = F.zeros((I.dim(n), m.dim(n)))
        for p, o in I.layout[n].items():
            gd = g.get(p + n)
            if gd is None or not gd.shape[0]:
                continue
            A = R.dim(p)
            t = m.left_apply(gd, p, n)  # (A, l, dim M^n)
            t = t.transpose(1, 0, 2).reshape(gd.shape[0] * A, m.dim(n))
            blk[o:o + t.shape[0]] = t if (p * n) % 2 == 0 else F.neg(t)
        blocks[n] = blk
    return DgMorphism(m, I, blocks)


# residue field and formal modules ------------------------------------------------

def residue_field(R: Cdga) -> DenseModule:
    F = R.field
    eps = R.local.eps
    t = eps.reshape(R.dim(0), 1, 1).copy()
    return DenseModule(R, {0: 1}, {}, {(0, 0): t}, name="k")


def formal_module(m: DgModule) -> DenseModule:
    """H(M) as a module over H(R) with zero differential."""
    F = m.field
    R = m.ring
    H = R.H
    hr = R.cohomology
    hm = m.cohomology
    dims = dict(hm.space.dims)
    act = {}
    for i in H.degrees:
        reps_i = hr.reps(i)
        for n in dims:
            if n + i not in dims:
                continue
            t = m.right_apply(hm.reps(n), i, n)  # (A, M^{n+i}, h_n)
            t = combine(F, reps_i.T.copy(), t)  # (h_i, M^{n+i}, h_n)
            act[(i, n)] = np.stack([F.dot(hm.proj(n + i), t[a]) for a in range(t.shape[0])])
    return DenseModule(H, dims, {}, act, name=f"H({m.name})")


# Koszul quotients ---------------------------------------------------------------

def _element(R: Cdga, x) -> np.ndarray:
    F = R.field
    x = np.asarray(x)
    if x.shape != (R.dim(0),):
        raise ValueError("element must lie in degree 0")
    return x if x.dtype == F.dtype else F.array(x)


def quotient_module(m: DgModule, x, S: Cdga | None = None) -> DenseModule:
    """M∖xM = cone(x: M -> M) with its action of R∖xR.

    Degree n component M^n + M^{n+1}; (r + ξs).(a, b) = (r a, (-1)^{|r|} r b + s a).
    """
    R = m.ring
    F = R.field
    x = _element(R, x)
    dims = {n: m.dim(n) + m.dim(n + 1) for n in set(m.degrees) | {k - 1 for k in m.degrees}}
    dims = {n: v for n, v in dims.items() if v}
    xm = {n: m.act_elem(x, 0, n) for n in m.degrees}
    diff = {}
    for n in dims:
        if n + 1 not in dims:
            continue
        a0, a1, a2 = m.dim(n), m.dim(n + 1), m.dim(n + 2)
        blk = F.zeros((a1 + a2, a0 + a1))
        if a1 and a0:
            blk[:a1, :a0] = m.d(n)
        if a1:
            blk[:a1, a0:] = xm[n + 1]
        if a2 and a1:
            blk[a1:, a0:] = F.neg(m.d(n + 1))
        diff[n] = blk
    Sdims = {i: R.dim(i) + R.dim(i + 1) for i in range(R.bottom - 1, 1)}
    act = {}
    for i, si in Sdims.items():
        if not si:
            continue
        ri = R.dim(i)
        for n in dims:
            if n + i not in dims:
                continue
            t = F.zeros((si, dims[n + i], dims[n]))
            a0, a1 = m.dim(n), m.dim(n + 1)
            b0 = m.dim(n + i)
            if ri:
                if b0 and a0:
                    t[:ri, :b0, :a0] = m.action(i, n)
                if a1 and m.dim(n + i + 1):
                    blk = m.action(i, n + 1)
                    t[:ri, b0:, a0:] = blk if i % 2 == 0 else F.neg(blk)
            if R.dim(i + 1) and a0 and m.dim(n + i + 1):
                t[ri:, b0:, :a0] = m.action(i + 1, n)
            act[(i, n)] = t
    if S is None:
        S = quotient_by_element(R, x)[0]
    return DenseModule(S, dims, diff, act, name=f"{m.name}∖x")


@dataclass
class AlgebraMap:
    source: Cdga
    target: Cdga
    blocks: dict  # n -> (dim target^n, dim source^n)


def quotient_by_element(R: Cdga, x):
    """R∖xR = R[ξ]/(ξ²), |ξ| = -1, dξ = x, with the inclusion R -> R∖xR."""
    F = R.field
    x = _element(R, x)
    stub = Cdga(F, {i: R.dim(i) + R.dim(i + 1) for i in range(R.bottom - 1, 1)}, None, {})
    M = quotient_module(R.regular, x, S=stub)
    unit = F.zeros((M.dim(0),))
    unit[:R.dim(0)] = R.unit
    mult = {}
    for (i, n), t in M.act.items():
        mult[(i, n)] = t
    S = Cdga(F, dict(M.dims), unit, mult, {n: t for n, t in M.diff.items()}, R.var_names, R.monomials,
             name=f"{R.name}∖x" if R.name else "")
    inc = {n: F.eye(S.dim(n))[:, :R.dim(n)] for n in R.degrees}
    return S, AlgebraMap(R, S, inc)


def lift_element(phi: AlgebraMap, x) -> np.ndarray:
    F = phi.source.field
    return F.dot(phi.blocks[0], _element(phi.source, x).reshape(-1, 1))[:, 0]


def koszul(R: Cdga, xs: list):
    """Iterated R∖x1R∖...∖xrR; the degree 0 part is unchanged so each x lifts verbatim."""
    S = R
    for x in xs:
        x = np.asarray(x)
        y = R.field.zeros((S.dim(0),))
        y[:R.dim(0)] = x if x.dtype == R.field.dtype else R.field.array(x)
        S = quotient_by_element(S, y)[0]
    return S


def koszul_module(m: DgModule, xs: list):
    """M∖x1M∖... over the matching Koszul algebra."""
    R = m.ring
    F = R.field
    N = m
    for x in xs:
        x = np.asarray(x)
        y = F.zeros((N.ring.dim(0),))
        y[:R.dim(0)] = x if x.dtype == F.dtype else F.array(x)
        N = quotient_module(N, y)
    return N


def restrict(n: DgModule, phi: AlgebraMap) -> DenseModule:
    """Restriction of scalars along phi: R -> S."""
    F = n.field
    R = phi.source
    act = {}
    for i in R.degrees:
        for k in n.degrees:
            if not n.dim(k + i) or i not in phi.blocks:
                continue
            act[(i, k)] = combine(F, phi.blocks[i].T.copy(), n.action(i, k))
    return DenseModule(R, dict(n.dims), {k: n.d(k) for k in n.degrees if n.dim(k + 1)}, act,
                       name=f"res({n.name})")


def trivial_extension(R: Cdga, N: DgModule, name: str = "") -> Cdga:
    """R ⋉ N with N.N = 0; N must live in degrees <= 0."""
    F = R.field
    if any(k > 0 for k in N.degrees):
        raise ValueError("trivial extension needs a connective module")
    degs = sorted(set(R.degrees) | set(N.degrees))
    dims = {n: R.dim(n) + N.dim(n) for n in degs}
    mult = {}
    for i in degs:
        for j in degs:
            if i + j not in dims:
                continue
            ri, rj, rk = R.dim(i), R.dim(j), R.dim(i + j)
            t = F.zeros((dims[i], dims[i + j], dims[j]))
            if ri and rj and rk:
                t[:ri, :rk, :rj] = R.m(i, j)
            if ri and N.dim(j) and N.dim(i + j):
                t[:ri, rk:, rj:] = N.action(i, j)
            if N.dim(i) and rj and N.dim(i + j):
                # n r = (-1)^{ij} r n
                blk = N.action(j, i).transpose(2, 1, 0)  # (N^i, N^{i+j}, R^j)
                t[ri:, rk:, :rj] = blk if (i * j) % 2 == 0 else F.neg(blk)
            mult[(i, j)] = t
    diff = {}
    for n in degs:
        if n + 1 not in dims:
            continue
        diff[n] = _block_diag(F, [R.d(n), N.d(n)], [R.dim(n + 1), N.dim(n + 1)], [R.dim(n), N.dim(n)])
    unit = F.zeros((dims[0],))
    unit[:R.dim(0)] = R.unit
    return Cdga(F, dims, unit, mult, diff, R.var_names, R.monomials, name=name)
