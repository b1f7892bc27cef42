import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgha.cdga import Cdga, ground_field, monomial_quotient, socle_of_algebra, validate
from dgha.exactfield import FieldSpec
from dgha.modules import koszul, quotient_by_element

QQ = FieldSpec.rationals()


def axioms(r):
    return {v.axiom for v in validate(r).violations}


def test_ground_field_is_valid(field):
    rep = validate(ground_field(field))
    assert rep.ok
    assert rep.local.m_dim == 0


def test_dual_numbers(field):
    R = monomial_quotient(field, ["x"], [(2,)])
    rep = validate(R)
    assert rep.ok
    assert rep.local.m_dim == 1
    # the maximal ideal is spanned by x (basis order 1, x)
    assert field.equal(rep.local.mbar, field.array([[0], [1]]))


def test_nonzero_differential_on_unit_is_rejected():
    # dual numbers with a degree -1 partner e and d(e) = 1: kills the unit, so H^0 = 0
    F = QQ
    t00 = F.zeros((2, 2, 2))
    t00[0, 0, 0] = t00[0, 1, 1] = t00[1, 1, 0] = F.one
    t0m = F.zeros((2, 1, 1))
    t0m[0, 0, 0] = F.one
    tm0 = F.zeros((1, 1, 2))
    tm0[0, 0, 0] = F.one
    R = Cdga(F, {-1: 1, 0: 2}, F.array([1, 0]), {(0, 0): t00, (0, -1): t0m, (-1, 0): tm0},
             {-1: F.array([[1], [0]])})
    assert axioms(R) & {"local", "leibniz", "d(unit)"}


def test_noncommutative_mult_is_rejected():
    F = QQ
    R = monomial_quotient(F, ["x", "y"], [(2, 0), (1, 1), (0, 2)])
    t = R.m(0, 0).copy()
    t[1, 0, 2] = F.one  # x*y = 1 but y*x = 0
    bad = Cdga(F, dict(R.dims), R.unit, {(0, 0): t}, {})
    assert "graded-commutativity" in axioms(bad)


def test_positive_degree_rejected():
    F = QQ
    one = F.zeros((1, 1, 1))
    one[0, 0, 0] = F.one
    r = Cdga(F, {0: 1, 1: 1}, F.array([1]), {(0, 0): one}, {})
    assert "connective" in axioms(r)


def test_trivial_differential_cohomology_is_itself():
    R = monomial_quotient(QQ, ["x", "y"], [(3, 0), (0, 2)])
    assert dict(R.H.dims) == dict(R.dims)


def test_S_kx_cohomology():
    R = monomial_quotient(QQ, ["x"], [(2,)])
    S, phi = quotient_by_element(R, QQ.array([0, 1]))
    assert dict(S.dims) == {-1: 2, 0: 2}
    assert dict(S.H.dims) == {-1: 1, 0: 1}
    assert validate(S).ok


def test_R_kos_dimensions_and_H0():
    A = monomial_quotient(QQ, ["x", "y"], [(3, 0), (0, 3)])
    # basis is sorted by total degree: 1, x, y, x^2, xy, y^2, ...
    idx = {m: k for k, m in enumerate(A.monomials)}
    xs = []
    for m in [(2, 0), (1, 1), (0, 2)]:
        v = QQ.zeros((9,))
        v[idx[m]] = QQ.one
        xs.append(v)
    K = koszul(A, xs)
    assert dict(K.dims) == {-3: 9, -2: 27, -1: 27, 0: 9}
    assert K.total_dim == 9 * 8
    assert K.H.dim(0) == 3
    assert validate(K).ok
    # graded socle of H(R_kos) is one-dimensional, sitting in the bottom degree
    soc = {n: v.shape[1] for n, v in socle_of_algebra(K.H).items() if v.shape[1]}
    assert soc == {-3: 1}


def test_zero_element_gives_exterior_factor():
    R = monomial_quotient(QQ, ["x"], [(3,)])
    S, _ = quotient_by_element(R, QQ.zeros((3,)))
    assert dict(S.H.dims) == {-1: 3, 0: 3}


def test_infinite_quotient_rejected():
    with pytest.raises(ValueError):
        monomial_quotient(QQ, ["x", "y"], [(2, 0)])


@given(st.lists(st.integers(2, 4), min_size=1, max_size=2), st.integers(0, 2**16))
def test_koszul_on_random_elements_validates(powers, seed):
    R = monomial_quotient(QQ, ["x", "y", "z"][:len(powers)],
                          [tuple(p if j == i else 0 for j in range(len(powers))) for i, p in enumerate(powers)])
    rng = np.random.default_rng(seed)
    lifts = R.local.m_lifts
    x = QQ.dot(lifts, QQ.random_matrix(rng, (lifts.shape[1], 1)))[:, 0]
    S, _ = quotient_by_element(R, x)
    assert validate(S).ok
    # H^0(R∖xR) = R/xR
    assert S.H.dim(0) == R.dim(0) - QQ.rank(R.left_mult(x, 0, 0))
