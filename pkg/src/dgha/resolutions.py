"""Minimal sppj/ifij resolutions and truncated semi-free / DG-injective resolutions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cdga import Cdga, NotLocal
from .graded import VComplex, degree_cohomology
from .modules import (DgModule, DgMorphism, FreeModule, HomModule, Piece, SumModule, adjunction_morphism,
                      cone, free_morphism, quotient, residue_field, shift, submodule)

DEFAULT_CUTOFF = 32
DEFAULT_MAX_DIM = 4000


class ZeroModule(ValueError):
    pass


class WindowTooWide(ValueError):
    pass


@dataclass(frozen=True)
class DimResult:
    value: int | None  # None means the cutoff was reached first
    cutoff: int

    @property
    def finite(self) -> bool:
        return self.value is not None

    def to_json(self):
        return {"finite": self.value} if self.finite else {"exceeds_cutoff": self.cutoff}

    def __str__(self):
        return str(self.value) if self.finite else f">cutoff({self.cutoff})"


@dataclass
class Table:
    """n -> dimension, exact for lo <= n <= hi (entries absent outside the window)."""
    entries: dict
    lo: float = -math.inf
    hi: float = math.inf
    source: str = ""

    def certified(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def get(self, n: int):
        if not self.certified(n):
            return None
        return self.entries.get(n, 0)

    def on_window(self, lo: int, hi: int) -> dict:
        return {n: self.entries.get(n, 0) for n in range(lo, hi + 1) if self.certified(n)}

    def to_json(self):
        enc = lambda v: None if abs(v) == math.inf else int(v)
        return {"entries": {str(k): v for k, v in sorted(self.entries.items())},
                "window": [enc(self.lo), enc(self.hi)], "source": self.source}


def _require_local(R: Cdga):
    return R.local


def top_cover(m: DgModule):
    """(sup, cocycles lifting a minimal generating set of H^sup(M) over H^0)."""
    F = m.field
    loc = _require_local(m.ring)
    s = m.sup
    if s == -math.inf:
        raise ZeroModule("module is acyclic")
    hc = m.cohomology[s]
    h = hc.dim
    cols = [F.mdot(hc.proj, m.act_elem(loc.m_lifts[:, j], 0, s), hc.reps) for j in range(loc.m_dim)]
    mh = np.concatenate(cols, axis=1) if cols else F.zeros((h, 0))
    mh = F.column_basis(mh)
    gens = F.complement(mh, F.eye(h))
    return s, F.dot(hc.reps, gens)


def bottom_socle_functionals(m: DgModule):
    """(inf, psi) with psi: M^b -> K^mu killing boundaries and dual to soc H^b(M) over H^0."""
    F = m.field
    loc = _require_local(m.ring)
    b = m.inf
    if b == math.inf:
        raise ZeroModule("module is acyclic")
    hc = m.cohomology[b]
    h = hc.dim
    rows = [F.mdot(hc.proj, m.act_elem(loc.m_lifts[:, j], 0, b), hc.reps) for j in range(loc.m_dim)]
    A = np.concatenate(rows, axis=0) if rows else F.zeros((0, h))
    soc = F.kernel(A)
    return b, _dual_functionals(F, m, b, soc)


def _dual_functionals(F, m: DgModule, b: int, soc: np.ndarray) -> np.ndarray:
    """Functionals on M^b vanishing on B^b and on a complement of soc inside H^b, dual to soc."""
    hc = m.cohomology[b]
    h = hc.dim
    mu = soc.shape[1]
    if mu == 0:
        return F.zeros((0, m.dim(b)))
    w = np.concatenate([soc, F.complement(soc, F.eye(h))], axis=1)
    phi = F.inverse(w)[:mu]  # mu x h
    z = np.concatenate([hc.reps, hc.boundaries], axis=1)
    full = np.concatenate([z, F.extend(z, m.dim(b))], axis=1)
    vals = F.zeros((mu, m.dim(b)))
    vals[:, :h] = phi
    return F.dot(vals, F.inverse(full))


# sppj -------------------------------------------------------------------------

@dataclass
class SppjStage:
    module: DgModule
    sup: int
    rank: int
    free: FreeModule
    morphism: DgMorphism
    next: DgModule


def sppj_step(m: DgModule) -> SppjStage:
    s, z = top_cover(m)
    g = z.shape[1]
    P = FreeModule(m.ring, [s] * g, name=f"R^{g}[{-s}]")
    f = free_morphism(P, m, [z[:, j] for j in range(g)])
    nxt = shift(cone(f).module, -1)
    return SppjStage(m, s, g, P, f, nxt)


@dataclass
class SppjResolution:
    stages: list
    terminated: bool
    cutoff: int
    tail: DgModule | None = None  # M_c when not terminated
    budget_hit: bool = False

    @property
    def length(self):
        return len(self.stages) - 1 if self.terminated else None

    @property
    def ranks(self):
        return [st.rank for st in self.stages]

    @property
    def sups(self):
        return [st.sup for st in self.stages]


def minimal_sppj(m: DgModule, cutoff: int = DEFAULT_CUTOFF, max_dim: int = DEFAULT_MAX_DIM) -> SppjResolution:
    if m.is_acyclic():
        raise ZeroModule("module is acyclic")
    stages = []
    cur = m
    for _ in range(cutoff):
        st = sppj_step(cur)
        stages.append(st)
        if st.next.is_acyclic():
            return SppjResolution(stages, True, cutoff)
        cur = st.next
        if cur.total_dim > max_dim:
            return SppjResolution(stages, False, len(stages), cur, budget_hit=True)
    return SppjResolution(stages, False, cutoff, cur)


def projective_dimension(m: DgModule, cutoff: int = DEFAULT_CUTOFF, res: SppjResolution | None = None) -> DimResult:
    res = res or minimal_sppj(m, cutoff)
    if not res.terminated:
        return DimResult(None, res.cutoff)
    e = res.length
    return DimResult(e + res.stages[0].sup - res.stages[e].sup, res.cutoff)


def hom_to_simple(m: DgModule, cutoff: int = DEFAULT_CUTOFF, res: SppjResolution | None = None) -> Table:
    """n -> dim Hom(M, k[n])."""
    res = res or minimal_sppj(m, cutoff)
    entries = {i - st.sup: st.rank for i, st in enumerate(res.stages)}
    hi = math.inf if res.terminated else len(res.stages) - res.tail.sup - 1
    return Table({n: v for n, v in entries.items() if n <= hi}, -math.inf, hi, "sppj")


def derived_tensor_residue(m: DgModule, cutoff: int = DEFAULT_CUTOFF, res: SppjResolution | None = None) -> Table:
    """n -> dim H^n(M ⊗^L k)."""
    if m.is_acyclic():
        return Table({}, source="sppj")
    res = res or minimal_sppj(m, cutoff)
    entries = {-i + st.sup: st.rank for i, st in enumerate(res.stages)}
    lo = -math.inf if res.terminated else -len(res.stages) + res.tail.sup + 1
    return Table({n: v for n, v in entries.items() if n >= lo}, lo, math.inf, "sppj")


# ifij -------------------------------------------------------------------------

@dataclass
class IfijStage:
    module: DgModule
    inf: int
    mult: int
    injective: HomModule
    morphism: DgMorphism
    next: DgModule


def ifij_step(m: DgModule) -> IfijStage:
    R = m.ring
    b, psi = bottom_socle_functionals(m)
    mu = psi.shape[0]
    L = VComplex.make(R.field, {b: mu}, {})
    I = HomModule(R.regular, L, name=f"G(E^{mu})[{-b}]")
    f = adjunction_morphism(m, I, {b: psi})
    return IfijStage(m, b, mu, I, f, cone(f).module)


@dataclass
class IfijResolution:
    stages: list
    terminated: bool
    cutoff: int
    tail: DgModule | None = None
    budget_hit: bool = False

    @property
    def length(self):
        return len(self.stages) - 1 if self.terminated else None

    @property
    def mults(self):
        return [st.mult for st in self.stages]

    @property
    def infs(self):
        return [st.inf for st in self.stages]


def minimal_ifij(m: DgModule, cutoff: int = DEFAULT_CUTOFF, max_dim: int = DEFAULT_MAX_DIM) -> IfijResolution:
    if m.is_acyclic():
        raise ZeroModule("module is acyclic")
    stages = []
    cur = m
    for _ in range(cutoff):
        st = ifij_step(cur)
        stages.append(st)
        if st.next.is_acyclic():
            return IfijResolution(stages, True, cutoff)
        cur = st.next
        if cur.total_dim > max_dim:
            return IfijResolution(stages, False, len(stages), cur, budget_hit=True)
    return IfijResolution(stages, False, cutoff, cur)


def injective_dimension(m: DgModule, cutoff: int = DEFAULT_CUTOFF, res: IfijResolution | None = None) -> DimResult:
    res = res or minimal_ifij(m, cutoff)
    if not res.terminated:
        return DimResult(None, res.cutoff)
    e = res.length
    return DimResult(e + res.stages[e].inf - res.stages[0].inf, res.cutoff)


def hom_from_simple(m: DgModule, cutoff: int = DEFAULT_CUTOFF, res: IfijResolution | None = None) -> Table:
    """Bass numbers n -> dim Hom(k, M[n])."""
    res = res or minimal_ifij(m, cutoff)
    entries = {i + st.inf: st.mult for i, st in enumerate(res.stages)}
    hi = math.inf if res.terminated else len(res.stages) + res.tail.inf - 1
    return Table({n: v for n, v in entries.items() if n <= hi}, -math.inf, hi, "ifij")


# truncated semi-free resolutions --------------------------------------------------

@dataclass
class SemifreeStage:
    module: DgModule        # M_i
    free: FreeModule        # P_i
    images: list            # images of the generators in M_i
    morphism: DgMorphism    # P_i -> M_i, degreewise surjective
    n_cohomological: int    # leading generators that lift H-generators; the rest are contractible pairs
    kernel: DgModule | None = None
    kernel_inclusion: DgMorphism | None = None


def _h_generator_cocycles(m: DgModule) -> list:
    """(degree, cocycle) lifting a minimal generating set of H(M) over H (top degree first)."""
    F = m.field
    R = m.ring
    loc = R.local
    hr = R.cohomology
    hm = m.cohomology
    out = []
    for d in sorted(hm.space.dims, reverse=True):
        hc = hm[d]
        cols = [F.mdot(hc.proj, m.act_elem(loc.m_lifts[:, j], 0, d), hc.reps) for j in range(loc.m_dim)]
        for j in R.H.degrees:
            if j >= 0 or (d - j) not in hm.space.dims:
                continue
            src = hm[d - j]
            for h in range(hr.space.dim(j)):
                cols.append(F.mdot(hc.proj, m.act_elem(hr.reps(j)[:, h], j, d - j), src.reps))
        sub = np.concatenate(cols, axis=1) if cols else F.zeros((hc.dim, 0))
        gens = F.complement(F.column_basis(sub), F.eye(hc.dim))
        z = F.dot(hc.reps, gens)
        out.extend((d, z[:, k]) for k in range(z.shape[1]))
    return out


def _image_in(F, m: DgModule, gens: list, d: int) -> np.ndarray:
    cols = []
    for deg, v in gens:
        if deg >= d and m.ring.dim(d - deg):
            cols.append(m.right_apply(v.reshape(-1, 1), d - deg, deg)[:, :, 0].T)
    return np.concatenate(cols, axis=1) if cols else F.zeros((m.dim(d), 0))


def semifree_cover(m: DgModule, cohomological_gens: list | None = None) -> SemifreeStage:
    """Free P with a degreewise surjective chain map P -> M that is surjective on cohomology."""
    F = m.field
    R = m.ring
    cg = _h_generator_cocycles(m) if cohomological_gens is None else cohomological_gens
    gens = list(cg)
    pairs = []
    for d in sorted(m.degrees, reverse=True):
        im = _image_in(F, m, gens, d)
        comp = F.extend(F.column_basis(im), m.dim(d)) if im.shape[1] else F.eye(m.dim(d))
        for k in range(comp.shape[1]):
            u = comp[:, k]
            du = F.dot(m.d(d), u.reshape(-1, 1))[:, 0] if m.dim(d + 1) else F.zeros((0,))
            gens.append((d, u))
            gens.append((d + 1, du))
            pairs.append((len(gens) - 2, len(gens) - 1))
    degs = [g for g, _ in gens]

    def gdiffs(P):
        out = [None] * len(degs)
        for u, v in pairs:
            out[u] = P.gen_vector(v)
        return out

    P = FreeModule(R, degs, gdiffs, name="P")
    f = free_morphism(P, m, [v for _, v in gens])
    return SemifreeStage(m, P, [v for _, v in gens], f, len(cg))


def _kernel_module(st: SemifreeStage):
    F = st.module.field
    P, f = st.free, st.morphism
    basis = {}
    for n in P.degrees:
        k = F.kernel(f.block(n)) if st.module.dim(n) else F.eye(P.dim(n))
        if k.shape[1]:
            basis[n] = k
    S, inc = submodule(P, basis, name="ker")
    st.kernel, st.kernel_inclusion = S, inc
    return S


@dataclass
class SemifreeResolution:
    stages: list        # SemifreeStage for P_0..P_k
    exact: bool         # M_{k+1} acyclic, so T_k -> M is a quasi-isomorphism
    tail: DgModule      # M_{k+1}

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def generators(self):
        """(stage i, generator index, total degree) for the totalization."""
        out = []
        for i, st in enumerate(self.stages):
            for k, g in enumerate(st.free.gens):
                out.append((i, k, g - i))
        return out

    def delta(self, i: int, k: int) -> np.ndarray:
        """delta_i(w_k) in P_{i-1}."""
        st = self.stages[i]
        prev = self.stages[i - 1]
        v = st.images[k]
        return st.module.field.dot(prev.kernel_inclusion.block(st.free.gens[k]), v.reshape(-1, 1))[:, 0]

    def window_hi(self, inf_target) -> float:
        """Largest n with Hom(T_k, N[n]) = Hom(M, N[n]) guaranteed."""
        if self.exact:
            return math.inf
        return inf_target + self.depth - self.tail.sup - 1

    def totalization(self):
        """(T_k as a free module, comparison morphism T_k -> M)."""
        F = self.stages[0].module.field
        R = self.stages[0].module.ring
        gens = self.generators()
        degs = [t for _, _, t in gens]
        index = {(i, k): j for j, (i, k, _) in enumerate(gens)}
        first = {}
        for j, (i, k, _) in enumerate(gens):
            first.setdefault(i, j)

        def embed(T, i, vec, internal_deg):
            out = F.zeros((T.dim(internal_deg - i),))
            n = internal_deg - i
            P = self.stages[i].free
            o = T.offsets(n)[first[i]]
            out[o:o + P.dim(internal_deg)] = vec
            return out

        def gdiffs(T):
            out = []
            for i, k, t in gens:
                st = self.stages[i]
                g = st.free.gens[k]
                v = F.zeros((T.dim(t + 1),))
                if st.free.gen_diffs and st.free.gen_diffs[k] is not None:
                    v = F.add(v, embed(T, i, st.free.gen_diffs[k], g + 1))
                if i > 0:
                    dv = self.delta(i, k)
                    dv = dv if g % 2 == 0 else F.neg(dv)
                    v = F.add(v, embed(T, i - 1, dv, g))
                out.append(v)
            return out

        T = FreeModule(R, degs, gdiffs, name=f"T{self.depth}")
        M = self.stages[0].module
        f0 = self.stages[0].morphism
        blocks = {}
        for n in T.degrees:
            if not M.dim(n):
                continue
            blk = F.zeros((M.dim(n), T.dim(n)))
            o = T.offsets(n)[0]
            w = self.stages[0].free.dim(n)
            blk[:, o:o + w] = f0.block(n)
            blocks[n] = blk
        return T, DgMorphism(T, M, blocks)


def semifree_resolution_truncated(m: DgModule, depth: int, max_dim: int = DEFAULT_MAX_DIM,
                                  stop_when=None) -> SemifreeResolution:
    """P_0..P_depth (fewer if some M_i is acyclic).  stop_when(res) may end the loop early."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    R = m.ring
    R.local
    stages = []
    cur = m
    for i in range(depth + 1):
        st = semifree_cover(cur)
        stages.append(st)
        cur = _kernel_module(st)
        if cur.is_acyclic():
            return SemifreeResolution(stages, True, cur)
        res = SemifreeResolution(stages, False, cur)
        if stop_when is not None and stop_when(res):
            return res
        if cur.total_dim > max_dim:
            raise WindowTooWide(f"resolution stage {i + 1} exceeds {max_dim} dimensions")
    return SemifreeResolution(stages, False, cur)


def hom_complex_dims(res: SemifreeResolution, N: DgModule, lo: int, hi: int) -> dict:
    """dims of H^q(Hom_R(T_k, N)) for lo <= q <= hi."""
    T, _ = res.totalization()
    return hom_free_dims(T, N, lo, hi)


def hom_free_dims(T: FreeModule, N: DgModule, lo: int, hi: int) -> dict:
    """dims of H^q(Hom_R(T, N)) for a semi-free T; Hom^q is the product of N^{|w|+q} over generators w."""
    F = N.field
    tdeg = list(T.gens)
    comps = {}

    def layout(q):
        if q not in comps:
            off, acc = [], 0
            for t in tdeg:
                off.append(acc)
                acc += N.dim(t + q)
            comps[q] = (off, acc)
        return comps[q]

    def dmat(q):
        off0, n0 = layout(q)
        off1, n1 = layout(q + 1)
        out = F.zeros((n1, n0))
        for j, t in enumerate(tdeg):
            r = N.dim(t + q + 1)
            if not r:
                continue
            # d_N phi(w_j)
            c = N.dim(t + q)
            if c:
                out[off1[j]:off1[j] + r, off0[j]:off0[j] + c] = N.d(t + q)
            gv = T.gen_diffs[j] if T.gen_diffs is not None else None
            if gv is None:
                continue
            for jj, tt in enumerate(tdeg):
                rs = T.piece_range(jj, t + 1)
                if rs.stop == rs.start:
                    continue
                coeff = gv[rs]
                if F.is_zero(coeff):
                    continue
                c2 = N.dim(tt + q)
                if not c2:
                    continue
                i = t + 1 - tt
                blk = N.act_elem(coeff, i, tt + q)
                sign = -1 if (q + q * i) % 2 == 0 else 1
                blk = blk if sign > 0 else F.neg(blk)
                out[off1[j]:off1[j] + r, off0[jj]:off0[jj] + c2] = F.add(
                    out[off1[j]:off1[j] + r, off0[jj]:off0[jj] + c2], blk)
        return out

    dims = {}
    for q in range(lo, hi + 1):
        _, n = layout(q)
        if n == 0:
            dims[q] = 0
            continue
        d_out = dmat(q)
        d_in = dmat(q - 1)
        dims[q] = n - F.rank(d_out) - F.rank(d_in)
    return dims


@dataclass
class MinimalSemifree:
    """A minimal semi-free resolution P -> M, complete in generator degrees >= lowest."""
    module: DgModule
    free: FreeModule
    images: list
    lowest: int
    exact: bool  # P -> M is already a quasi-isomorphism

    @property
    def morphism(self) -> DgMorphism:
        return free_morphism(self.free, self.module, self.images)


def _pad(F, v: np.ndarray, n: int) -> np.ndarray:
    out = F.zeros((n,))
    out[:v.shape[0]] = v
    return out


def minimal_semifree(m: DgModule, lowest: int, max_dim: int = DEFAULT_MAX_DIM) -> MinimalSemifree:
    """Adjoin generators degree by degree, from sup M down to `lowest`.

    With C = cone(P -> M) acyclic above d, each minimal generator of H^d(C) over H^0,
    say the cocycle (y, x) in M^d + P^{d+1}, becomes a generator w with w -> y and dw = -x.
    Generator differentials only involve higher generators, so the generators of degree
    >= lowest span a sub-DG-module and no later step changes them.
    """
    F = m.field
    R = m.ring
    loc = R.local
    gens, gdiffs, images = [], [], []
    P = FreeModule(R, [], [], name="P")
    if m.is_acyclic():
        return MinimalSemifree(m, P, [], lowest, True)
    for d in range(max(m.degrees), lowest - 1, -1):
        C = cone(free_morphism(P, m, images)).module
        if not C.dim(d):
            continue
        hc = degree_cohomology(F, C.d(d - 1), C.d(d), C.dim(d))
        if hc.dim == 0:
            continue
        cols = [F.mdot(hc.proj, C.act_elem(loc.m_lifts[:, j], 0, d), hc.reps) for j in range(loc.m_dim)]
        sub = np.concatenate(cols, axis=1) if cols else F.zeros((hc.dim, 0))
        new = F.dot(hc.reps, F.complement(F.column_basis(sub), F.eye(hc.dim)))
        my = m.dim(d)
        for k in range(new.shape[1]):
            gens.append(d)
            images.append(new[:my, k])
            gdiffs.append(F.neg(new[my:, k]))
        P = FreeModule(R, gens, lambda Q: [_pad(F, v, Q.dim(g + 1)) for g, v in zip(gens, gdiffs)], name="P")
        if P.total_dim > max_dim:
            raise WindowTooWide(f"semi-free resolution exceeds {max_dim} dimensions at degree {d}")
    exact = cone(free_morphism(P, m, images)).module.is_acyclic()
    return MinimalSemifree(m, P, images, lowest, exact)


def rhom(m: DgModule, n: DgModule, window: tuple, max_depth: int = 24, max_dim: int = DEFAULT_MAX_DIM,
         method: str = "minimal") -> Table:
    """dims of H^q(RHom(M, N)) on the window.

    method "minimal": degree-by-degree minimal semi-free resolution, cut where generators
    stop reaching the window (exact for every q <= hi).
    method "kernels": iterated degreewise-surjective covers and their totalization.
    """
    lo, hi = window
    if m.is_acyclic() or n.is_acyclic():
        return Table({}, lo, hi, "rhom")
    if method == "minimal":
        lowest = min(n.degrees) - hi - 1
        if max(m.degrees) - lowest > max_depth:
            raise WindowTooWide(f"window top {hi} needs generators down to degree {lowest}")
        res = minimal_semifree(m, lowest, max_dim=max_dim)
        dims = hom_free_dims(res.free, n, lo, hi)
        return Table({q: v for q, v in dims.items() if v}, lo, hi, "rhom")
    inf_n = n.inf

    def enough(res):
        return res.window_hi(inf_n) >= hi

    need = hi - inf_n + m.sup + 1
    if need > max_depth:
        raise WindowTooWide(f"window top {hi} needs resolution depth {need} > {max_depth}")
    res = semifree_resolution_truncated(m, max(need, 0), max_dim=max_dim, stop_when=enough)
    top = min(hi, res.window_hi(inf_n))
    dims = hom_complex_dims(res, n, lo, int(top) if top != math.inf else hi)
    return Table({q: v for q, v in dims.items() if v}, lo, top, "rhom")


def rhom_into_coinduced(m: DgModule, L: VComplex, window: tuple) -> Table:
    """RHom(M, Hom_K(R, L)) = Hom_K(M, L), exact on any window."""
    lo, hi = window
    H = HomModule(m, L)
    dims = {q: v for q, v in H.hdims.items() if lo <= q <= hi}
    return Table(dims, lo, hi, "coinduced")


def bass_via_rhom(m: DgModule, window: tuple, **kw) -> Table:
    t = rhom(residue_field(m.ring), m, window, **kw)
    t.source = "rhom"
    return t


# truncated DG-injective resolutions ------------------------------------------------

@dataclass
class InjectiveStage:
    module: DgModule   # C_i
    L: VComplex
    injective: HomModule
    morphism: DgMorphism
    socle_dims: dict
    quotient: DgModule | None = None
    projection: DgMorphism | None = None


def _graded_socle(m: DgModule) -> dict:
    """Per degree, the socle of H(M) as a graded H-module (H-coordinates)."""
    F = m.field
    R = m.ring
    loc = R.local
    hr = R.cohomology
    hm = m.cohomology
    out = {}
    for d, hd in hm.space.dims.items():
        hc = hm[d]
        rows = [F.mdot(hc.proj, m.act_elem(loc.m_lifts[:, j], 0, d), hc.reps) for j in range(loc.m_dim)]
        for j in R.H.degrees:
            if j >= 0 or (d + j) not in hm.space.dims:
                continue
            tgt = hm[d + j]
            for h in range(hr.space.dim(j)):
                rows.append(F.mdot(tgt.proj, m.act_elem(hr.reps(j)[:, h], j, d), hc.reps))
        A = np.concatenate(rows, axis=0) if rows else F.zeros((0, hd))
        out[d] = F.kernel(A)
    return out


def injective_embedding(c: DgModule) -> InjectiveStage:
    F = c.field
    R = c.ring
    soc = _graded_socle(c)
    psi = {d: _dual_functionals(F, c, d, s) for d, s in soc.items() if s.shape[1]}
    # contractible functionals, bottom degree up, until the adjoint map is injective
    contr: dict = {}

    def funcs_at(e):
        rows = []
        if e in psi:
            rows.append(psi[e])
        if e in contr:
            rows.append(contr[e])
        if e + 1 in contr and c.dim(e + 1):
            rows.append(F.dot(contr[e + 1], c.d(e)))
        return np.concatenate(rows, axis=0) if rows else None

    for d in c.degrees:
        rows = []
        for p in R.degrees:
            g = funcs_at(d + p)
            if g is None or not g.shape[0]:
                continue
            t = c.left_apply(g, p, d)
            rows.append(t.reshape(-1, c.dim(d)))
        A = np.concatenate(rows, axis=0) if rows else F.zeros((0, c.dim(d)))
        ker = F.kernel(A)
        if ker.shape[1]:
            contr[d] = F.left_inverse(ker)
    degs = sorted(set(psi) | set(contr) | {e - 1 for e in contr})
    ldims, g, ldiff = {}, {}, {}
    for d in degs:
        s = psi[d].shape[0] if d in psi else 0
        top = contr[d].shape[0] if d in contr else 0
        bot = contr[d + 1].shape[0] if d + 1 in contr else 0
        ldims[d] = s + top + bot
        rows = []
        if s:
            rows.append(psi[d])
        if top:
            rows.append(contr[d])
        if bot:
            rows.append(F.dot(contr[d + 1], c.d(d)) if c.dim(d + 1) else F.zeros((bot, c.dim(d))))
        g[d] = np.concatenate(rows, axis=0) if rows else F.zeros((0, c.dim(d)))
    for d in degs:
        if d + 1 not in ldims or not ldims[d + 1]:
            continue
        blk = F.zeros((ldims[d + 1], ldims[d]))
        bot = contr[d + 1].shape[0] if d + 1 in contr else 0
        if bot:
            s1 = psi[d + 1].shape[0] if d + 1 in psi else 0
            blk[s1:s1 + bot, ldims[d] - bot:] = F.eye(bot)
        ldiff[d] = blk
    L = VComplex.make(F, ldims, ldiff)
    I = HomModule(R.regular, L, name="I")
    f = adjunction_morphism(c, I, g)
    return InjectiveStage(c, L, I, f, {d: s.shape[1] for d, s in soc.items() if s.shape[1]})


@dataclass
class InjectiveResolution:
    stages: list
    exact: bool
    tail: DgModule | None

    @property
    def depth(self):
        return len(self.stages) - 1

    def window_hi(self) -> float:
        """Largest n where Hom(k, T[n]) = Hom(k, M[n]) is guaranteed."""
        if self.exact:
            return math.inf
        return self.depth + self.tail.inf

    def totalization(self) -> SumModule:
        F = self.stages[0].module.field
        R = self.stages[0].module.ring
        pieces = [Piece(st.injective, -i, 0) for i, st in enumerate(self.stages)]
        T = SumModule(R, pieces, name="Tot")
        diff = {}
        for n in T.degrees:
            if not T.dim(n + 1):
                continue
            blk = F.zeros((T.dim(n + 1), T.dim(n)))
            for i, st in enumerate(self.stages):
                cs = T.piece_range(i, n)
                if cs.stop == cs.start:
                    continue
                I = st.injective
                e = n - i  # internal degree
                rs = T.piece_range(i, n + 1)
                if rs.stop > rs.start:
                    blk[rs, cs] = I.d(e)
                if i + 1 < len(self.stages):
                    nxt = self.stages[i + 1]
                    rs2 = T.piece_range(i + 1, n + 1)
                    if rs2.stop > rs2.start and st.quotient.dim(e):
                        dl = F.dot(nxt.morphism.block(e), st.projection.block(e))
                        blk[rs2, cs] = dl if e % 2 == 0 else F.neg(dl)
            diff[n] = blk
        T.diff = diff
        return T


def dginjective_resolution_truncated(m: DgModule, depth: int, max_dim: int = DEFAULT_MAX_DIM,
                                     stop_when=None) -> InjectiveResolution:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    m.ring.local
    stages = []
    cur = m
    for i in range(depth + 1):
        st = injective_embedding(cur)
        stages.append(st)
        im = {n: F_colbasis(st.morphism, n) for n in st.injective.degrees}
        q, pi = quotient(st.injective, {n: b for n, b in im.items() if b.shape[1]}, name=f"C{i + 1}")
        st.quotient, st.projection = q, pi
        cur = q
        if cur.is_acyclic():
            return InjectiveResolution(stages, True, cur)
        res = InjectiveResolution(stages, False, cur)
        if stop_when is not None and stop_when(res):
            return res
        if cur.total_dim > max_dim:
            raise WindowTooWide(f"injective stage {i + 1} exceeds {max_dim} dimensions")
    return InjectiveResolution(stages, False, cur)


def F_colbasis(f: DgMorphism, n: int) -> np.ndarray:
    F = f.field
    if not f.source.dim(n):
        return F.zeros((f.target.dim(n), 0))
    return F.column_basis(f.block(n))


def socle_complex_dims(T: DgModule, lo: int, hi: int) -> dict:
    """dims of H^n of the subcomplex {t : m' t = 0}, i.e. Hom_R(k, T), for lo <= n <= hi."""
    F = T.field
    R = T.ring
    loc = R.local
    socs = {}

    def soc(n):
        if n not in socs:
            if not T.dim(n):
                socs[n] = F.zeros((0, 0))
                return socs[n]
            rows = [T.act_elem(loc.mbar[:, j], 0, n) for j in range(loc.mbar.shape[1])]
            for i in R.degrees:
                if i < 0 and T.dim(n + i):
                    t = T.action(i, n)
                    rows.extend(t[a] for a in range(R.dim(i)))
            A = np.concatenate(rows, axis=0) if rows else F.zeros((0, T.dim(n)))
            socs[n] = F.kernel(A)
        return socs[n]

    def dres(n):
        s0, s1 = soc(n), soc(n + 1)
        if not s0.shape[1] or not s1.shape[1]:
            return F.zeros((s1.shape[1], s0.shape[1]))
        return F.mdot(F.left_inverse(s1), T.d(n), s0)

    out = {}
    for n in range(lo, hi + 1):
        k = soc(n).shape[1]
        out[n] = k - F.rank(dres(n)) - F.rank(dres(n - 1)) if k else 0
    return out


@dataclass
class DualInjective:
    """M -> D(P) for a minimal semi-free P -> D(M), with P cut at generator degree `lowest`.

    D(P) = Hom_K(P, K) is a sum of coinduced injectives, and its socle complex agrees with
    that of the full resolution in degrees <= -lowest - 1.
    """
    module: DgModule
    resolution: MinimalSemifree
    injective: HomModule

    @property
    def window_hi(self) -> float:
        return math.inf if self.resolution.exact else -self.resolution.lowest - 1


def dual_injective_resolution(m: DgModule, hi: int, max_dim: int = DEFAULT_MAX_DIM) -> DualInjective:
    from .modules import matlis_dual
    res = minimal_semifree(matlis_dual(m), -hi - 1, max_dim=max_dim)
    return DualInjective(m, res, matlis_dual(res.free))


def bass_via_dginj(m: DgModule, window: tuple, max_depth: int = 24, max_dim: int = DEFAULT_MAX_DIM,
                   method: str = "dual") -> Table:
    """Bass numbers from the socle complex Hom_R(k, I) of a DG-injective resolution M -> I.

    method "dual": I = D(P) for a minimal semi-free resolution P of the Matlis dual.
    method "embedding": iterated socle embeddings into coinduced modules, totalized.
    """
    lo, hi = window
    if m.is_acyclic():
        return Table({}, lo, hi, "dginj")
    need = hi - m.inf + 1
    if need > max_depth:
        raise WindowTooWide(f"window top {hi} needs injective depth {need}")
    if method == "dual":
        di = dual_injective_resolution(m, hi, max_dim=max_dim)
        dims = socle_complex_dims(di.injective, lo, hi)
        return Table({n: v for n, v in dims.items() if v}, lo, hi, "dginj")
    res = dginjective_resolution_truncated(m, max(need, 0), max_dim=max_dim,
                                           stop_when=lambda r: r.window_hi() > hi)
    top = min(hi, res.window_hi() - 1)
    T = res.totalization()
    dims = socle_complex_dims(T, lo, int(top))
    return Table({n: v for n, v in dims.items() if v}, lo, top, "dginj")


# classical graded resolutions over algebras with zero differential ----------------------

def graded_minimal_resolution(n: DgModule, depth: int, max_dim: int = DEFAULT_MAX_DIM) -> list:
    """Generator degrees of F_0, ..., F_depth in a minimal graded free resolution of n.

    Both n and its ring must have zero differential; then every stage is a plain
    graded module and the H-generators are minimal generators.
    """
    F = n.field
    cur = n
    out = []
    for _ in range(depth + 1):
        if cur.total_dim == 0:
            out.append([])
            break
        gens = _h_generator_cocycles(cur)
        P = FreeModule(cur.ring, [g for g, _ in gens], None, name="F")
        f = free_morphism(P, cur, [v for _, v in gens])
        out.append([g for g, _ in gens])
        basis = {}
        for d in P.degrees:
            k = F.kernel(f.block(d)) if cur.dim(d) else F.eye(P.dim(d))
            if k.shape[1]:
                basis[d] = k
        cur = submodule(P, basis, name="syz")[0]
        if cur.total_dim > max_dim:
            raise WindowTooWide("syzygy exceeds the dimension budget")
    return out
