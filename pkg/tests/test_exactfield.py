import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgha.exactfield import ExactMatrix, FieldSpec, NoSolution, kernel_basis, rref, solve

QQ = FieldSpec.rationals()
GF5 = FieldSpec.prime(5)


def int_matrices(max_side=6, lo=-4, hi=4):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


fields = st.sampled_from([QQ, GF5, FieldSpec.prime(2), FieldSpec.prime(101)])


def test_field_spec_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec.prime(6)


def test_field_json():
    assert QQ.to_json() == {"kind": "Q"}
    assert GF5.to_json() == {"kind": "GF", "p": 5}


def test_rational_scalars_are_exact():
    h = QQ.scalar("1/3")
    assert QQ.scalar_to_json(h * 3) == 1
    assert QQ.scalar_to_json(h) == "1/3"


def test_modular_reduction():
    a = GF5.array([[7, -1]])
    assert a.tolist() == [[2, 4]]


@given(fields, int_matrices())
def test_rank_nullity(F, rows):
    a = F.array(rows)
    k = F.kernel(a)
    assert F.rank(a) + k.shape[1] == a.shape[1]
    assert F.is_zero(F.dot(a, k))


@given(fields, int_matrices())
def test_rref_idempotent_and_pivots(F, rows):
    a = F.array(rows)
    r, piv = F.rref(a)
    r2, piv2 = F.rref(r)
    assert piv == piv2
    assert F.equal(r, r2)
    assert len(piv) == F.rank(a)


@given(fields, int_matrices(), st.data())
def test_solve_consistent_systems(F, rows, data):
    a = F.array(rows)
    x = F.array([[data.draw(st.integers(-3, 3))] for _ in range(a.shape[1])])
    b = F.dot(a, x)
    y = F.try_solve(a, b)
    assert y is not None
    assert F.equal(F.dot(a, y), b)


@given(fields, st.integers(1, 5), st.integers(0, 2**16))
def test_inverse_of_random_invertible(F, n, seed):
    rng = np.random.default_rng(seed)
    a = F.random_matrix(rng, (n, n))
    if F.rank(a) < n:
        return
    assert F.equal(F.dot(a, F.inverse(a)), F.eye(n))


@given(fields, int_matrices())
def test_column_basis_and_extend(F, rows):
    a = F.array(rows)
    c = F.column_basis(a)
    assert c.shape[1] == F.rank(a) == F.rank(c)
    full = np.concatenate([c, F.extend(c, a.shape[0])], axis=1)
    assert full.shape == (a.shape[0], a.shape[0])
    assert F.rank(full) == a.shape[0]


def test_unsolvable_returns_none():
    a = QQ.array([[1, 1], [1, 1]])
    assert QQ.try_solve(a, QQ.array([[1], [2]])) is None


def test_exact_matrix_wrappers():
    m = ExactMatrix.from_rows(QQ, [[1, 2], [2, 4]])
    assert m.rank() == 1
    r, piv = rref(m)
    assert piv == [0]
    assert kernel_basis(m).cols == 1
    with pytest.raises(NoSolution):
        solve(m, [1, 0])
