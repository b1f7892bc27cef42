import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from dgha.exactfield import FieldSpec
from dgha.graded import GradedSpace, VComplex, cohomology, inf_sup_amp, shift

QQ = FieldSpec.rationals()


def hanrei_complex():
    # R --x--> R over K[x]/(x^2), basis (1, x) in degrees -1 and 0
    F = QQ
    return VComplex.make(F, {-1: 2, 0: 2}, {-1: F.array([[0, 0], [1, 0]])})


def test_zero_differential():
    c = VComplex.make(QQ, {0: 2}, {})
    h, reps = cohomology(c)
    assert h.dims == {0: 2}
    assert QQ.equal(reps[0], QQ.eye(2))


def test_identity_is_acyclic():
    c = VComplex.make(QQ, {-1: 1, 0: 1}, {-1: QQ.eye(1)})
    assert cohomology(c)[0].dims == {}
    assert inf_sup_amp(c) == (math.inf, -math.inf, -math.inf)


def test_hanrei_cohomology():
    c = hanrei_complex()
    assert cohomology(c)[0].dims == {-1: 1, 0: 1}
    assert inf_sup_amp(c) == (-1, 0, 1)


def test_field_in_degree_zero():
    assert inf_sup_amp(VComplex.make(QQ, {0: 1}, {})) == (0, 0, 0)


def test_shift_bookkeeping():
    c = hanrei_complex()
    assert cohomology(shift(c, 1))[0].dims == {-2: 1, -1: 1}
    back = shift(shift(c, 3), -3)
    assert back.space.dims == c.space.dims
    assert QQ.equal(back.d(-1), c.d(-1))
    assert QQ.equal(shift(c, 0).d(-1), c.d(-1))


@st.composite
def complexes(draw, field=QQ):
    """Random bounded complexes built as d = A B style products so d∘d = 0."""
    lo = draw(st.integers(-3, 0))
    n = draw(st.integers(1, 4))
    dims = {lo + k: draw(st.integers(0, 3)) for k in range(n)}
    rng = np.random.default_rng(draw(st.integers(0, 2**20)))
    diff = {}
    prev = None
    for d in range(lo, lo + n - 1):
        a, b = dims[d], dims[d + 1]
        m = field.random_matrix(rng, (b, a))
        if prev is not None and a and b:
            # keep image(prev) inside ker(m)
            k = field.kernel(prev.T) if prev.shape[1] else field.eye(a)
            m = field.dot(field.random_matrix(rng, (b, k.shape[1])), k.T)
        diff[d] = m
        prev = m
    return VComplex.make(field, dims, diff)


@given(complexes(), st.integers(-3, 3))
def test_shift_moves_cohomology(c, n):
    h = cohomology(c)[0]
    hs = cohomology(shift(c, n))[0]
    assert hs.dims == {d - n: v for d, v in h.dims.items()}


@given(complexes())
def test_euler_characteristic(c):
    h = cohomology(c)[0]
    chi = sum((-1) ** (n % 2) * v for n, v in c.space.dims.items())
    assert chi == sum((-1) ** (n % 2) * v for n, v in h.dims.items())


def test_graded_space_drops_zero_dims():
    s = GradedSpace(QQ, {0: 2, 1: 0, -1: 3})
    assert s.degrees == [-1, 0]
    assert s.window() == (-1, 0)
    assert s.total_dim == 5
