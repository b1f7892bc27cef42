"""Seeded random presentations.

Parameter ranges: at most 3 variables, pure-power exponents 2..4, total
dimension of the ring and of the module at most 64, all degrees >= -4.
The same (family, seed, count, options) always yields the same docs.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .presentation import PresentationDoc

FAMILIES = ("monomial_artinian", "koszul_over_gorenstein", "trivial_extension", "shifted_cones")
MAX_DIM = 64
MIN_DEGREE = -4
VAR_NAMES = ("x", "y", "z")


def _mono(names, e) -> str:
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) if parts else "1"


def _field(p: int) -> dict:
    return {"kind": "Q"} if p == 0 else {"kind": "GF", "p": p}


def _basis(powers, extra):
    return [e for e in itertools.product(*[range(a) for a in powers])
            if not any(all(x >= r for x, r in zip(e, rel)) for rel in extra)]


def _monomial_ring(rng, max_vars=3, lo=2, hi=4, max_dim=MAX_DIM, extra_max=2):
    while True:
        nv = int(rng.integers(1, max_vars + 1))
        powers = [int(rng.integers(lo, hi + 1)) for _ in range(nv)]
        extra = []
        if nv > 1:
            for _ in range(int(rng.integers(0, extra_max + 1))):
                e = tuple(int(rng.integers(0, a)) for a in powers)
                if sum(e) >= 2 and sum(1 for x in e if x) >= 2:
                    extra.append(e)
        basis = _basis(powers, extra)
        if len(basis) <= max_dim:
            names = VAR_NAMES[:nv]
            rels = [_mono(names, tuple(a if j == i else 0 for j in range(nv))) for i, a in enumerate(powers)]
            rels += [_mono(names, e) for e in extra]
            return names, rels, basis


def _random_element(rng, names, basis, terms=2) -> str:
    nonunit = [e for e in basis if sum(e) > 0]
    k = int(rng.integers(1, terms + 1))
    picks = rng.choice(len(nonunit), size=min(k, len(nonunit)), replace=False)
    out = []
    for j in sorted(int(p) for p in picks):
        c = int(rng.choice([1, 1, 2, -1, 3]))
        m = _mono(names, nonunit[j])
        out.append(m if c == 1 else f"{c}*{m}")
    return " + ".join(out).replace("+ -", "- ")


def monomial_artinian(rng, p: int = 0, max_dim: int = MAX_DIM) -> PresentationDoc:
    names, rels, _ = _monomial_ring(rng, max_dim=max_dim)
    return PresentationDoc(_field(p), {"kind": "monomial_quotient", "vars": list(names), "relations": rels})


def koszul_over_gorenstein(rng, p: int = 0, max_elements: int = 3, max_dim: int = MAX_DIM) -> PresentationDoc:
    """A complete intersection K[x..]/(x_i^{a_i}) (Gorenstein) and a Koszul construction on it."""
    while True:
        names, rels, basis = _monomial_ring(rng, hi=3, extra_max=0, max_dim=min(32, max_dim // 2))
        r = int(rng.integers(1, max_elements + 1))
        if len(basis) * 2 ** r <= max_dim and 1 - r >= MIN_DEGREE:
            break
    xs = [_random_element(rng, names, basis) for _ in range(r)]
    return PresentationDoc(_field(p), {"kind": "monomial_quotient", "vars": list(names), "relations": rels},
                           [{"koszul": xs}])


def trivial_extension(rng, p: int = 0, max_dim: int = MAX_DIM) -> PresentationDoc:
    """R ⋉ N for N one of k[s], R[s] (s = 1, 2) or the cone of an element."""
    while True:
        names, rels, basis = _monomial_ring(rng, max_vars=2, max_dim=min(8, max_dim // 2))
        kind = int(rng.integers(0, 3))
        if kind == 0:
            s = int(rng.integers(0, 3))
            cons = [{"residue": True}, {"shift": s}]
            extra = 1
        elif kind == 1:
            s = int(rng.integers(1, 3))
            cons = [{"shift": s}]
            extra = len(basis)
        else:
            s = int(rng.integers(1, 3))
            cons = [{"cone_of_mult": _random_element(rng, names, basis, 1)}, {"shift": s}]
            extra = 2 * len(basis)
        if len(basis) + extra <= max_dim:
            break
    cons.append({"trivial_extension": True})
    return PresentationDoc(_field(p), {"kind": "monomial_quotient", "vars": list(names), "relations": rels}, cons)


def shifted_cones(rng, p: int = 0, dual: bool | None = None, max_dim: int = MAX_DIM) -> PresentationDoc:
    """cone(x: R -> R)[s] over a monomial or Koszul base, optionally Matlis-dualized."""
    while True:
        if rng.random() < 0.5:
            base = monomial_artinian(rng, p, max_dim=max(1, max_dim // 2))
            names = base.base_ring["vars"]
            basis = _basis([_pure(r) for r in base.base_ring["relations"][:len(names)]], _extras(base, names))
            rdim, bottom = len(basis), 0
            cons = []
        else:
            base = koszul_over_gorenstein(rng, p, max_elements=1, max_dim=max(4, max_dim // 2))
            names = base.base_ring["vars"]
            basis = _basis([_pure(r) for r in base.base_ring["relations"]], [])
            rdim, bottom = 2 * len(basis), -1
            cons = list(base.constructions)
        if 2 * rdim > max_dim:
            continue
        s = int(rng.integers(-2, 3))
        if bottom - 1 - s < MIN_DEGREE:
            continue
        cons.append({"cone_of_mult": _random_element(rng, names, basis)})
        if s:
            cons.append({"shift": s})
        use_dual = bool(rng.random() < 0.5) if dual is None else dual
        if use_dual:
            cons.append({"matlis_dual": True})
        return PresentationDoc(base.field, base.base_ring, cons)


def _pure(rel: str) -> int:
    return int(rel.split("^")[1]) if "^" in rel else 1


def _extras(doc, names):
    out = []
    for r in doc.base_ring["relations"][len(names):]:
        e = [0] * len(names)
        for f in r.split("*"):
            n, _, k = f.partition("^")
            e[names.index(n)] += int(k or 1)
        out.append(tuple(e))
    return out


_MAKERS = {
    "monomial_artinian": monomial_artinian,
    "koszul_over_gorenstein": koszul_over_gorenstein,
    "trivial_extension": trivial_extension,
    "shifted_cones": shifted_cones,
}


def generate_instances(family: str, seed: int, count: int, p: int = 0, **options) -> list:
    if family not in _MAKERS:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    rng = np.random.default_rng(seed)
    return [_MAKERS[family](rng, p, **options) for _ in range(count)]


def mixed_instances(seed: int, count: int, p: int = 0, families=FAMILIES, **options) -> list:
    """Round-robin over families with one child seed each."""
    per = math.ceil(count / len(families))
    pools = [generate_instances(f, seed * 1000 + k, per, p, **options) for k, f in enumerate(families)]
    out = []
    for i in range(per):
        for pool in pools:
            if len(out) < count:
                out.append(pool[i])
    return out
