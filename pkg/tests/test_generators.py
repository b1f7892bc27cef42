import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgha import generators as gen
from dgha.cdga import validate
from dgha.invariants import is_gorenstein
from dgha.modules import check_module
from dgha.presentation import build


def test_determinism():
    a = gen.generate_instances("monomial_artinian", 1, 1)
    b = gen.generate_instances("monomial_artinian", 1, 1)
    assert a[0].dumps() == b[0].dumps()
    assert gen.mixed_instances(4, 9)[5].dumps() == gen.mixed_instances(4, 9)[5].dumps()


def test_unknown_family():
    with pytest.raises(ValueError):
        gen.generate_instances("nope", 0, 1)


@given(st.sampled_from(gen.FAMILIES), st.integers(0, 10**6), st.sampled_from([0, 2, 7]))
def test_generated_docs_validate(family, seed, p):
    doc = gen.generate_instances(family, seed, 1, p)[0]
    b = build(doc, check=True)
    assert validate(b.ring).ok
    assert b.ring.total_dim <= gen.MAX_DIM
    assert b.module.total_dim <= gen.MAX_DIM
    assert min(b.module.degrees) >= gen.MIN_DEGREE
    assert min(b.ring.degrees) >= gen.MIN_DEGREE
    assert check_module(b.module) == []
    assert len(doc.base_ring["vars"]) <= 3


@given(st.integers(0, 10**6))
def test_koszul_family_base_is_gorenstein(seed):
    doc = gen.generate_instances("koszul_over_gorenstein", seed, 1)[0]
    base = build(type(doc)(doc.field, doc.base_ring)).ring
    assert is_gorenstein(base).verdict


@given(st.integers(0, 10**6), st.integers(4, 32))
def test_max_dim_is_respected(seed, cap):
    for doc in gen.mixed_instances(seed, 4, max_dim=cap):
        b = build(doc, check=False)
        assert b.module.total_dim <= max(cap, 4)
