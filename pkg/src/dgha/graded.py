"""Graded vector spaces, cochain complexes and their cohomology."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .exactfield import FieldSpec


class NotAComplex(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpace:
    field: FieldSpec
    dims: dict  # degree -> positive dimension

    def __post_init__(self):
        object.__setattr__(self, "dims", {int(n): int(d) for n, d in sorted(self.dims.items()) if d > 0})

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def window(self):
        if not self.dims:
            return None
        return min(self.dims), max(self.dims)


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    shift: int
    blocks: dict  # source degree n -> matrix (target n+shift) x (source n)

    def block(self, n: int) -> np.ndarray:
        b = self.blocks.get(n)
        if b is None:
            return self.source.field.zeros((self.target.dim(n + self.shift), self.source.dim(n)))
        return b


@dataclass(frozen=True, eq=False)
class VComplex:
    space: GradedSpace
    differential: GradedMap

    @classmethod
    def make(cls, field: FieldSpec, dims: dict, diff: dict) -> "VComplex":
        sp = GradedSpace(field, dims)
        return cls(sp, GradedMap(sp, sp, 1, dict(diff)))

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    def d(self, n: int) -> np.ndarray:
        return self.differential.block(n)

    def check(self):
        F = self.field
        for n in self.space.degrees:
            if self.space.dim(n + 2) and not F.is_zero(F.dot(self.d(n + 1), self.d(n))):
                raise NotAComplex(f"d∘d ≠ 0 starting in degree {n}")


@dataclass
class DegreeCohomology:
    """Cohomology data in one degree.

    reps: cocycle columns whose classes form a basis.
    proj: matrix reading off class coordinates of a cocycle (garbage on non-cocycles).
    """
    reps: np.ndarray
    proj: np.ndarray
    cocycles: np.ndarray
    boundaries: np.ndarray

    @property
    def dim(self) -> int:
        return self.reps.shape[1]


def degree_cohomology(F: FieldSpec, d_in: np.ndarray, d_out: np.ndarray, n_dim: int) -> DegreeCohomology:
    z = F.kernel(d_out) if d_out.shape[0] else F.eye(n_dim)
    b = F.column_basis(d_in) if d_in.shape[1] else F.zeros((n_dim, 0))
    reps = F.complement(b, z)
    w = np.concatenate([reps, b], axis=1)
    proj = F.left_inverse(w)[: reps.shape[1]]
    return DegreeCohomology(reps, proj, z, b)


@dataclass(eq=False)
class Cohomology:
    space: GradedSpace
    data: dict = dc_field(default_factory=dict)

    def reps(self, n: int) -> np.ndarray:
        return self.data[n].reps

    def proj(self, n: int) -> np.ndarray:
        return self.data[n].proj

    def __getitem__(self, n: int) -> DegreeCohomology:
        return self.data[n]


def full_cohomology(c: VComplex, check: bool = True) -> Cohomology:
    if check:
        c.check()
    F = c.field
    dims = {}
    data = {}
    for n in c.space.degrees:
        dc = degree_cohomology(F, c.d(n - 1), c.d(n), c.space.dim(n))
        data[n] = dc
        dims[n] = dc.dim
    return Cohomology(GradedSpace(F, dims), data)


def cohomology(c: VComplex):
    """(H as graded space, degree -> representative cocycle columns)."""
    h = full_cohomology(c)
    return h.space, {n: d.reps for n, d in h.data.items() if d.dim}


def shift(c: VComplex, n: int) -> VComplex:
    F = c.field
    sign = -1 if n % 2 else 1
    dims = {d - n: v for d, v in c.space.dims.items()}
    diff = {d - n: (F.neg(c.d(d)) if sign < 0 else c.d(d)) for d in c.space.degrees}
    return VComplex.make(F, dims, diff)


def inf_sup_amp(c) -> tuple:
    """On cohomology; (inf, sup, amp) = (+inf, -inf, -inf) for acyclic input."""
    h = c if isinstance(c, GradedSpace) else cohomology(c)[0]
    if not h.dims:
        return math.inf, -math.inf, -math.inf
    lo, hi = min(h.dims), max(h.dims)
    return lo, hi, hi - lo
