"""Depth, Bass tables and the theorem-level checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cdga import Cdga, contract, socle_of_algebra
from .graded import VComplex
from .modules import (DgModule, DenseModule, FreeModule, HomModule, free_morphism, formal_module, koszul, matlis_dual, quotient_by_element,
                      quotient_module, residue_field, restrict, shift, submodule)
from .resolutions import (DEFAULT_CUTOFF, Table, _h_generator_cocycles, bass_via_dginj, bass_via_rhom, hom_from_simple,
                          injective_dimension, minimal_ifij, minimal_sppj, projective_dimension,
                          rhom, rhom_into_coinduced)

HOLDS, VIOLATED, INCONCLUSIVE = "Holds", "Violated", "Inconclusive"


class SearchExhausted(RuntimeError):
    pass


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return v


@dataclass
class TheoremReport:
    theorem: str
    instance: str
    lhs: object
    rhs: object
    verdict: str
    witness: dict = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self):
        return {"theorem": self.theorem, "instance": self.instance, "lhs": _jsonable(self.lhs),
                "rhs": _jsonable(self.rhs), "verdict": self.verdict, "witness": _jsonable(self.witness)}


def _verdict(ok: bool) -> str:
    return HOLDS if ok else VIOLATED


# Bass tables and depth ---------------------------------------------------------

def bass_table(m: DgModule, cutoff: int = DEFAULT_CUTOFF, source: str = "ifij", window=None, **kw) -> Table:
    if source == "ifij":
        return hom_from_simple(m, cutoff)
    if window is None:
        raise ValueError("rhom and dginj tables need a window")
    if source == "rhom":
        return bass_via_rhom(m, window, **kw)
    if source == "dginj":
        return bass_via_dginj(m, window, **kw)
    raise ValueError(f"unknown source {source!r}")


def inf_rhom_k(m: DgModule) -> int:
    """inf RHom(k, M): the first ifij stage already carries the lowest Bass entry."""
    t = hom_from_simple(m, cutoff=1)
    return min(t.entries)


def regular_on_bottom(m: DgModule, x: np.ndarray) -> bool:
    F = m.field
    b = m.inf
    hc = m.cohomology[b]
    L = F.mdot(hc.proj, m.act_elem(x, 0, b), hc.reps)
    return F.rank(L) == hc.dim


def _candidates(R: Cdga, rng_seed: int = 0):
    F = R.field
    lifts = R.local.m_lifts
    k = lifts.shape[1]
    for j in range(k):
        yield lifts[:, j]
    if k == 0:
        return
    if F.characteristic and F.characteristic ** k <= 4096:
        import itertools
        for coeffs in itertools.product(range(F.characteristic), repeat=k):
            if any(coeffs):
                yield F.dot(lifts, np.array(coeffs, dtype=np.int64).reshape(-1, 1))[:, 0]
        return
    rng = np.random.default_rng(rng_seed)
    for _ in range(64):
        c = F.random_matrix(rng, (k, 1))
        yield F.dot(lifts, c)[:, 0]


@dataclass
class DepthResult:
    via_bass: int
    via_sequence: int | None
    sequence: list
    completed: bool

    def to_json(self):
        return {"via_bass": self.via_bass, "via_sequence": self.via_sequence,
                "sequence": [[str(v) for v in x] for x in self.sequence], "completed": self.completed}


def cohomological_depth(m: DgModule, seed: int = 0) -> DepthResult:
    """Depth from the Bass table and from a greedy regular-sequence search.

    The search stops with a certificate when soc H^inf(M) != 0: then every
    element of m kills a nonzero class, so no regular element exists.
    """
    F = m.field
    via_bass = inf_rhom_k(m) - m.inf
    seq = []
    cur = m
    while True:
        b = cur.inf
        hc = cur.cohomology[b]
        R = cur.ring
        loc = R.local
        rows = [F.mdot(hc.proj, cur.act_elem(loc.m_lifts[:, j], 0, b), hc.reps) for j in range(loc.m_dim)]
        soc = F.kernel(np.concatenate(rows, axis=0)) if rows else F.eye(hc.dim)
        if soc.shape[1]:
            return DepthResult(via_bass, len(seq), seq, True)
        found = None
        for x in _candidates(R, seed):
            if regular_on_bottom(cur, x):
                found = x
                break
        if found is None:
            if via_bass > len(seq):
                raise SearchExhausted("no regular element found")
            return DepthResult(via_bass, None, seq, False)
        seq.append(found)
        cur = quotient_module(cur, found)


def chdepth(m: DgModule) -> int:
    return inf_rhom_k(m) - m.inf


# theorem checks ------------------------------------------------------------------

def check_auslander_buchsbaum(m: DgModule, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    R = m.ring
    pd = projective_dimension(m, cutoff)
    if not pd.finite:
        return TheoremReport("auslander-buchsbaum", name, None, None, INCONCLUSIVE, {"pd": pd})
    lhs = inf_rhom_k(m) + pd.value - m.sup
    rhs = inf_rhom_k(R.regular)
    amp_l = chdepth(m) + pd.value - chdepth(R.regular)
    amp_r = m.amp - R.regular.amp
    ok = lhs == rhs and amp_l == amp_r
    return TheoremReport("auslander-buchsbaum", name, lhs, rhs, _verdict(ok),
                         {"pd": pd.value, "amplitude_form": [amp_l, amp_r], "sup": m.sup})


def check_bass_formula(m: DgModule, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    R = m.ring
    idm = injective_dimension(m, cutoff)
    if not idm.finite:
        return TheoremReport("bass-formula", name, None, None, INCONCLUSIVE, {"injdim": idm})
    lhs = chdepth(R.regular) - R.regular.amp
    rhs = idm.value - m.amp
    return TheoremReport("bass-formula", name, lhs, rhs, _verdict(lhs == rhs), {"injdim": idm.value})


@dataclass
class GorensteinResult:
    verdict: bool | None
    bass: Table
    injdim: object
    position: int | None  # degree of the unique Bass entry
    shift: int | None     # n with RHom(k, R) = k[n]

    def to_json(self):
        return {"gorenstein": self.verdict, "bass": self.bass.to_json(), "injdim": _jsonable(self.injdim),
                "bass_position": self.position, "shift": self.shift}


def _single_entry_test(m: DgModule, cutoff: int) -> GorensteinResult:
    """RHom(k, M) = k[n] iff the minimal ifij resolution stops after one stage of multiplicity one.

    Two stages always decide it: a second stage means a second Bass entry.
    """
    res = minimal_ifij(m, 2)
    table = hom_from_simple(m, res=res)
    idim = injective_dimension(m, res=res)
    if res.stages[0].mult == 1 and res.terminated:
        pos = res.stages[0].inf
        return GorensteinResult(True, table, idim, pos, -pos)
    return GorensteinResult(False, table, idim, None, None)


def is_gorenstein(R: Cdga, cutoff: int = DEFAULT_CUTOFF) -> GorensteinResult:
    return _single_entry_test(R.regular, cutoff)


def is_dualizing(D: DgModule, cutoff: int = DEFAULT_CUTOFF) -> GorensteinResult:
    return _single_entry_test(D, cutoff)


def homothety_dims(D: DgModule, window: tuple, method: str = "injective") -> dict:
    """dims of H(RHom(D, D)) on the window.

    method "injective" uses D -> I_0 = Hom_K(R, L) (a quasi-isomorphism for dualizing D),
    so RHom(D, D) = Hom_K(D, L); "semifree" resolves D directly.
    """
    lo, hi = window
    if method == "semifree":
        t = rhom(D, D, window)
        return t.on_window(lo, hi)
    res = minimal_ifij(D, cutoff=2)
    if not res.terminated or res.length != 0:
        raise ValueError("injective route needs a length-0 ifij resolution")
    st = res.stages[0]
    L = st.injective.target_complex
    t = rhom_into_coinduced(D, L, window)
    return t.on_window(lo, hi)


# graded module isomorphism ---------------------------------------------------------

@dataclass
class IsoResult:
    kind: str  # yes | no_by_dims | not_found
    blocks: dict | None = None

    def to_json(self):
        return {"result": self.kind}


def linear_maps(x: DgModule, y: DgModule) -> list:
    """Basis of the degree-0 ring-linear maps x -> y, as dicts degree -> matrix.

    x must have zero differential.  A map is fixed by the images of minimal
    generators of x, subject to the relations (the kernel of the free cover).
    """
    F = x.field
    gens = _h_generator_cocycles(x)
    if not gens:
        return []
    P = FreeModule(x.ring, [g for g, _ in gens], None)
    f = free_morphism(P, x, [v for _, v in gens])
    off, acc = [], 0
    for g, _ in gens:
        off.append(acc)
        acc += y.dim(g)
    if acc == 0:
        return []

    def image_op(n):
        """Linear map from unknowns to Hom(P^n, Y^n), as a list over columns of P^n."""
        ops = F.zeros((P.dim(n), y.dim(n), acc))
        for j, (g, _) in enumerate(gens):
            sl = P.piece_range(j, n)
            if sl.stop == sl.start or not y.dim(g):
                continue
            ops[sl, :, off[j]:off[j] + y.dim(g)] = y.action(n - g, g)
        return ops

    rows = []
    ops = {}
    for n in P.degrees:
        if not y.dim(n):
            continue
        ops[n] = image_op(n)
        K = F.kernel(f.block(n)) if x.dim(n) else F.eye(P.dim(n))
        for k in range(K.shape[1]):
            rows.append(contract(F, K[:, k], ops[n]))
    C = np.concatenate(rows, axis=0) if rows else F.zeros((0, acc))
    basis = F.kernel(C)
    sections = {n: F.left_inverse(f.block(n).T.copy()).T.copy() for n in x.degrees}
    out = []
    for c in range(basis.shape[1]):
        v = basis[:, c]
        blocks = {}
        for n in x.degrees:
            if not y.dim(n):
                blocks[n] = F.zeros((0, x.dim(n)))
                continue
            q = P.dim(n)
            phi = F.dot(ops[n].reshape(q * y.dim(n), acc), v.reshape(-1, 1)).reshape(q, y.dim(n)).T.copy()
            blocks[n] = F.dot(phi, sections[n])
        out.append(blocks)
    return out


def graded_module_iso(x: DgModule, y: DgModule, trials: int = 20, seed: int = 0) -> IsoResult:
    """Las Vegas search for a degree-0 H-linear isomorphism between modules with zero differential."""
    F = x.field
    if x.dims != y.dims:
        return IsoResult("no_by_dims")
    basis = linear_maps(x, y)
    if not basis:
        return IsoResult("yes", {}) if not x.dims else IsoResult("not_found")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        c = F.random_matrix(rng, (len(basis), 1))[:, 0]
        blocks = {}
        for n in x.degrees:
            t = F.zeros((x.dim(n), x.dim(n)))
            for k, b in enumerate(basis):
                t = F.add(t, F.scale(b[n], c[k]))
            blocks[n] = t
        if all(F.rank(b) == b.shape[0] for b in blocks.values()):
            return IsoResult("yes", blocks)
    return IsoResult("not_found")


def degree_zero_subalgebra(H: Cdga) -> Cdga:
    return Cdga(H.field, {0: H.dim(0)}, H.unit, {(0, 0): H.m(0, 0)}, {}, H.var_names, H.monomials, name="H0")


def as_h0_module(hmod: DgModule, H0: Cdga, degree: int) -> DenseModule:
    """The degree component of an H-module, regarded as an H^0-module in degree 0."""
    return DenseModule(H0, {0: hmod.dim(degree)}, {}, {(0, 0): hmod.action(0, degree)}, name="C")


def hom_h0_into(H: Cdga, C: DenseModule) -> DenseModule:
    """Hom_{H^0}(H, C) as a graded H-module; C is an H^0-module in degree 0.

    Degree n is Hom_{H^0}(H^{-n}, C), and (r f)(x) = (-1)^{|r| n} f(r x).
    """
    F = H.field
    H0 = C.ring
    c = C.dim(0)
    basis = {}
    for n in (-d for d in H.degrees):
        comp = DenseModule(H0, {0: H.dim(-n)}, {}, {(0, 0): H.m(0, -n)})
        maps = linear_maps(comp, C)
        if maps:
            basis[n] = np.stack([m[0].reshape(-1) for m in maps], axis=1)
    linv = {n: F.left_inverse(b) for n, b in basis.items()}
    act = {}
    for i in H.degrees:
        for n in basis:
            if n + i not in basis:
                continue
            h_src, h_dst = H.dim(-n), H.dim(-n - i)
            t = H.m(i, -n - i)  # r: H^{-n-i} -> H^{-n}
            out = F.zeros((H.dim(i), basis[n + i].shape[1], basis[n].shape[1]))
            k = basis[n].shape[1]
            fs = basis[n].T.reshape(k * c, h_src)
            for a in range(H.dim(i)):
                g = F.dot(fs, t[a]).reshape(k, c * h_dst).T
                g = g if (i * n) % 2 == 0 else F.neg(g)
                out[a] = F.dot(linv[n + i], g.copy())
            act[(i, n)] = out
    return DenseModule(H, {n: b.shape[1] for n, b in basis.items()}, {}, act, name="Hom_H0(H,C)")


def _formality_conditions(D: DgModule, trials: int, seed: int):
    R = D.ring
    H = R.H
    HD = formal_module(D)
    b = HD.degrees[0]
    H0 = degree_zero_subalgebra(H)
    C = as_h0_module(HD, H0, b)
    E = matlis_dual(H0.regular)
    cond_a = graded_module_iso(C, DenseModule(H0, E.dims, {}, dict(E.act)), trials, seed)
    target = shift(hom_h0_into(H, C), -b).dense()
    cond_c = graded_module_iso(HD, target, trials, seed)
    return b, cond_a, cond_c


def check_dualizing_formality(D: DgModule, trials: int = 20, seed: int = 0, name: str = "") -> TheoremReport:
    dual = is_dualizing(D)
    if not dual.verdict:
        return TheoremReport("dualizing-formality", name, None, None, INCONCLUSIVE, {"dualizing": False})
    b, a, c = _formality_conditions(D, trials, seed)
    res = minimal_ifij(D, 2)
    cond1 = res.terminated and res.length == 0
    kinds = {a.kind, c.kind}
    if "no_by_dims" in kinds:
        verdict = VIOLATED
    elif kinds == {"yes"} and cond1:
        verdict = HOLDS
    elif not cond1:
        verdict = VIOLATED
    else:
        verdict = INCONCLUSIVE
    return TheoremReport("dualizing-formality", name, True, {"a": a.kind, "b": "trivial", "c": c.kind}, verdict,
                         {"b": b, "ifij_length0": cond1})


def graded_socle_dim(R: Cdga) -> int:
    return sum(s.shape[1] for s in socle_of_algebra(R.H).values())


def check_cohomology_gorenstein(R: Cdga, trials: int = 20, seed: int = 0, name: str = "") -> TheoremReport:
    g = is_gorenstein(R)
    sd = graded_socle_dim(R)
    h_gor = sd == 1
    b, a, c = _formality_conditions(R.regular, trials, seed)
    clause4 = a.kind == "yes" and c.kind == "yes"
    witness = {"socle_dim_H": sd, "R_gorenstein": g.verdict, "clause4": {"a": a.kind, "c": c.kind}}
    if g.verdict != h_gor:
        return TheoremReport("cohomology-gorenstein", name, g.verdict, h_gor, VIOLATED, witness)
    if g.verdict and not clause4:
        verdict = INCONCLUSIVE if "not_found" in (a.kind, c.kind) else VIOLATED
        return TheoremReport("cohomology-gorenstein", name, g.verdict, h_gor, verdict, witness)
    return TheoremReport("cohomology-gorenstein", name, g.verdict, h_gor, HOLDS, witness)


def check_fj_koszul(R: Cdga, xs: list, name: str = "") -> TheoremReport:
    g1 = is_gorenstein(R).verdict
    g2 = is_gorenstein(koszul(R, xs)).verdict
    return TheoremReport("fj-koszul", name, g1, g2, _verdict(g1 == g2), {"elements": len(xs)})


def check_amp_conjecture(m: DgModule, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    idm = injective_dimension(m, cutoff)
    if not idm.finite:
        return TheoremReport("amp-conjecture", name, None, None, INCONCLUSIVE, {"injdim": idm})
    return TheoremReport("amp-conjecture", name, m.amp, m.ring.regular.amp, _verdict(m.amp >= m.ring.regular.amp),
                         {"injdim": idm.value})


# consistency lemmas for the Koszul quotient -----------------------------------------------

def check_amplitude_lemma(m: DgModule, x, name: str = "") -> TheoremReport:
    q = quotient_module(m, x)
    reg = regular_on_bottom(m, x)
    expect = m.inf if reg else m.inf - 1
    return TheoremReport("amplitude-lemma", name, q.inf, expect, _verdict(q.inf == expect), {"regular": reg})


def check_waru_corollary(m: DgModule, x, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    idr = injective_dimension(m, cutoff)
    q = quotient_module(m, x)
    ids = injective_dimension(q, cutoff)
    if not (idr.finite and ids.finite):
        return TheoremReport("waru-corollary", name, None, None, INCONCLUSIVE, {"id_R": idr, "id_S": ids})
    reg = regular_on_bottom(m, x)
    ok = idr.value - 1 <= ids.value <= idr.value and ((ids.value == idr.value - 1) == reg)
    return TheoremReport("waru-corollary", name, ids.value, idr.value, _verdict(ok), {"regular": reg})


def check_waru_lemma(m: DgModule, x, window: tuple, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    """dim Hom_S(N, M∖xM[n-1]) = dim Hom_R(N, M[n]) for N = k and N = S."""
    R = m.ring
    S, phi = quotient_by_element(R, x)
    q = quotient_module(m, x, S=S)
    lo, hi = window
    # N = k: Bass numbers shift by one
    bs = hom_from_simple(q, cutoff)
    br = hom_from_simple(m, cutoff)
    top = min(bs.hi + 1, br.hi, hi)
    lhs_k = {n: bs.entries.get(n - 1, 0) for n in range(lo, int(top) + 1)}
    rhs_k = {n: br.entries.get(n, 0) for n in range(lo, int(top) + 1)}
    # N = S: Hom_S(S, M∖xM[n-1]) = H^{n-1}(M∖xM) against RHom_R(R∖xR, M)
    res_s = restrict(S.regular, phi)
    t = rhom(res_s, m, (lo, hi))
    top2 = min(t.hi, hi)
    lhs_s = {n: q.cohomology.space.dim(n - 1) for n in range(lo, int(top2) + 1)}
    rhs_s = {n: t.entries.get(n, 0) for n in range(lo, int(top2) + 1)}
    ok = lhs_k == rhs_k and lhs_s == rhs_s
    return TheoremReport("waru-lemma", name, {"k": lhs_k, "S": lhs_s}, {"k": rhs_k, "S": rhs_s}, _verdict(ok))


def check_cohomologous_invariance(m: DgModule, x, z, cutoff: int = DEFAULT_CUTOFF, name: str = "") -> TheoremReport:
    """M∖xM and M∖yM with y = x + d(z) share cohomology, Bass tables, pd and injdim."""
    R = m.ring
    F = R.field
    y = F.add(x, F.dot(R.d(-1), z.reshape(-1, 1))[:, 0]) if R.dim(-1) else x
    qx, qy = quotient_module(m, x), quotient_module(m, y)

    def summary(q):
        res = minimal_ifij(q, cutoff)
        # ranks of semi-projective resolutions double per stage when pd is infinite
        proj = minimal_sppj(q, cutoff=min(cutoff, 4))
        return {"H": q.hdims, "bass": hom_from_simple(q, res=res).to_json(),
                "injdim": str(injective_dimension(q, res=res)), "ranks": list(proj.ranks),
                "pd": str(projective_dimension(q, res=proj))}

    a, b = summary(qx), summary(qy)
    return TheoremReport("cohomologous-invariance", name, a, b, _verdict(a == b))
