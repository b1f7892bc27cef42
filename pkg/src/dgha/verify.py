"""Seeded verification suites over generated instances."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import generators as gen
from .invariants import (HOLDS, INCONCLUSIVE, VIOLATED, TheoremReport, check_amp_conjecture, check_amplitude_lemma,
                         check_auslander_buchsbaum, check_bass_formula, check_cohomologous_invariance,
                         check_cohomology_gorenstein, check_fj_koszul, check_waru_corollary, check_waru_lemma,
                         cohomological_depth, homothety_dims, is_dualizing)
from .modules import matlis_dual
from .presentation import PresentationDoc, build, element
from .resolutions import WindowTooWide, bass_via_dginj, bass_via_rhom, hom_from_simple, minimal_ifij

ORACLE_CUTOFF = 6
ORACLE_WIDTH = 2
ORACLE_MAX_DIM = 64


@dataclass
class SuiteResult:
    suite: str
    seed: int
    reports: list

    def counts(self) -> dict:
        out = {HOLDS: 0, VIOLATED: 0, INCONCLUSIVE: 0}
        for r in self.reports:
            out[r.verdict] += 1
        return out

    @property
    def verdict(self) -> str:
        c = self.counts()
        if c[VIOLATED]:
            return VIOLATED
        return INCONCLUSIVE if c[INCONCLUSIVE] else HOLDS

    def to_json(self):
        return {"suite": self.suite, "seed": self.seed, "counts": self.counts(),
                "reports": {str(k): r.to_json() for k, r in enumerate(self.reports)}}


def _rng(seed: int, salt: int):
    return np.random.default_rng([seed, salt])


def _random_m_element(R, rng):
    F = R.field
    lifts = R.local.m_lifts
    if lifts.shape[1] == 0:
        return F.zeros((R.dim(0),))
    c = F.random_matrix(rng, (lifts.shape[1], 1), -2, 2)
    return F.dot(lifts, c)[:, 0]


def finite_pd_docs(seed: int, count: int) -> list:
    """cones of elements on R (pd <= 1) and regular modules, both of finite pd."""
    a = gen.generate_instances("shifted_cones", seed, (count + 1) // 2, dual=False)
    b = gen.mixed_instances(seed + 1, count // 2, families=("monomial_artinian", "koszul_over_gorenstein",
                                                             "trivial_extension"))
    return [d for pair in zip(a, b + [None]) for d in pair if d is not None][:count]


def finite_injdim_docs(seed: int, count: int) -> list:
    """Matlis duals of finite-pd modules: Hom_K(P, K) has finite injdim when P has finite pd."""
    out = []
    for d in finite_pd_docs(seed, count):
        out.append(PresentationDoc(d.field, d.base_ring, d.constructions + [{"matlis_dual": True}], d.module))
    return out


def suite_ab(seed: int, count: int, cutoff: int = 32) -> list:
    return [check_auslander_buchsbaum(build(d, check=False).module, cutoff, name=d.dumps())
            for d in finite_pd_docs(seed, count)]


def suite_bass(seed: int, count: int, cutoff: int = 32) -> list:
    return [check_bass_formula(build(d, check=False).module, cutoff, name=d.dumps())
            for d in finite_injdim_docs(seed, count)]


def suite_conjecture(seed: int, count: int, cutoff: int = 32) -> list:
    return [check_amp_conjecture(build(d, check=False).module, cutoff, name=d.dumps())
            for d in finite_injdim_docs(seed, count)]


def oracle_report(m, name: str = "", cutoff: int = ORACLE_CUTOFF, width: int = ORACLE_WIDTH) -> TheoremReport:
    """Compare the three Bass-number oracles, narrowing the window when a resolution outgrows the budget."""
    lo = m.inf - 1
    # stage i of the ifij resolution only reaches degrees >= inf M + i
    t1 = hom_from_simple(m, min(cutoff, width + 2))
    for w in range(width, -1, -1):
        window = (lo, m.inf + w)
        try:
            t2 = bass_via_rhom(m, window)
            t3 = bass_via_dginj(m, window)
            break
        except WindowTooWide:
            continue
    else:
        return TheoremReport("bass-oracles", name, None, None, INCONCLUSIVE, {"window": None})
    hi = min(window[1], t1.hi, t2.hi, t3.hi)
    if hi < m.inf:
        return TheoremReport("bass-oracles", name, None, None, INCONCLUSIVE, {"window": [lo, hi]})
    a, b, c = (t.on_window(lo, int(hi)) for t in (t1, t2, t3))
    ok = a == b == c
    return TheoremReport("bass-oracles", name, a, {"rhom": b, "dginj": c}, HOLDS if ok else VIOLATED,
                         {"window": [lo, int(hi)]})


def suite_oracle(seed: int, count: int, cutoff: int = ORACLE_CUTOFF) -> list:
    return [oracle_report(build(d, check=False).module, d.dumps(), min(cutoff, ORACLE_CUTOFF))
            for d in gen.mixed_instances(seed, count, max_dim=ORACLE_MAX_DIM)]


def suite_depth(seed: int, count: int, cutoff: int = 32) -> list:
    out = []
    for d in gen.mixed_instances(seed, count):
        m = build(d, check=False).module
        r = cohomological_depth(m, seed=seed)
        verdict = INCONCLUSIVE if not r.completed else (HOLDS if r.via_bass == r.via_sequence else VIOLATED)
        out.append(TheoremReport("depth", d.dumps(), r.via_bass, r.via_sequence, verdict, r.to_json()))
    return out


A_CI = PresentationDoc({"kind": "Q"}, {"kind": "monomial_quotient", "vars": ["x", "y"], "relations": ["x^3", "y^3"]})
A_CI_ELEMENTS = ["x^2", "x*y", "y^2"]


def fj_pairs(seed: int, count: int) -> list:
    rng = _rng(seed, 11)
    pairs = [(A_CI, A_CI_ELEMENTS)]
    while len(pairs) < count:
        names, rels, basis = gen._monomial_ring(rng, max_dim=16)
        r = int(rng.integers(1, 3))
        xs = [gen._random_element(rng, names, basis) for _ in range(r)]
        pairs.append((PresentationDoc({"kind": "Q"}, {"kind": "monomial_quotient", "vars": list(names),
                                                      "relations": rels}), xs))
    return pairs


def suite_fj(seed: int, count: int, cutoff: int = 32) -> list:
    out = []
    for doc, xs in fj_pairs(seed, count):
        R = build(doc, check=False).ring
        out.append(check_fj_koszul(R, [element(R, e) for e in xs], name=f"{doc.dumps()} {xs}"))
    return out


def suite_cohgor(seed: int, count: int, cutoff: int = 32) -> list:
    out = []
    for d in gen.mixed_instances(seed, count, families=("monomial_artinian", "koszul_over_gorenstein",
                                                        "trivial_extension")):
        R = build(d, check=False).ring
        out.append(check_cohomology_gorenstein(R, seed=seed, name=d.dumps()))
    return out


def dualizing_report(R, name: str = "", homothety_limit: int = 32) -> TheoremReport:
    D = matlis_dual(R.regular)
    g = is_dualizing(D)
    res = minimal_ifij(D, 2)
    st = res.stages[0]
    structure = res.terminated and res.length == 0 and st.mult == 1 and st.inf == D.inf
    witness = {"bass": g.bass.to_json(), "shift": g.shift, "ifij_length0": structure}
    ok = bool(g.verdict) and structure
    if R.total_dim <= homothety_limit:
        hd = homothety_dims(D, (-6, 6))
        want = {n: R.cohomology.space.dim(n) for n in range(-6, 7)}
        witness["homothety"] = hd == want
        ok = ok and hd == want
    return TheoremReport("dualizing", name, g.verdict, True, HOLDS if ok else VIOLATED, witness)


def suite_dualizing(seed: int, count: int, cutoff: int = 32) -> list:
    out = []
    for d in gen.mixed_instances(seed, count, families=("monomial_artinian", "koszul_over_gorenstein",
                                                        "trivial_extension")):
        out.append(dualizing_report(build(d, check=False).ring, d.dumps()))
    return out


def lemma_reports(m, rng, name: str = "", cutoff: int = 32) -> list:
    R = m.ring
    F = R.field
    x = _random_m_element(R, rng)
    out = [check_amplitude_lemma(m, x, name), check_waru_corollary(m, x, cutoff, name),
           check_waru_lemma(m, x, (m.inf - 1, m.inf + 2), ORACLE_CUTOFF, name)]
    z = F.random_matrix(rng, (R.dim(-1), 1), -2, 2)[:, 0] if R.dim(-1) else F.zeros((0,))
    out.append(check_cohomologous_invariance(m, x, z, ORACLE_CUTOFF, name))
    return out


def suite_lemmas(seed: int, count: int, cutoff: int = 32) -> list:
    rng = _rng(seed, 13)
    out = []
    for d in finite_injdim_docs(seed, count):
        out.extend(lemma_reports(build(d, check=False).module, rng, d.dumps(), cutoff))
    return out


SUITES = {
    "ab": suite_ab,
    "bass": suite_bass,
    "fj": suite_fj,
    "cohgor": suite_cohgor,
    "oracle": suite_oracle,
    "conjecture": suite_conjecture,
    "depth": suite_depth,
    "dualizing": suite_dualizing,
    "lemmas": suite_lemmas,
}


def run_suite(name: str, seed: int, count: int, cutoff: int = 32) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SuiteResult(name, seed, SUITES[name](seed, count, cutoff))
