from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from filtra.chain import ChainComplex, ChainMap, direct_sum, direct_sum_map, hom_complex, is_quasi_iso, tensor
from filtra.errors import FieldMismatch
from filtra.exactlin import GF, QQ
from filtra.generators import random_complex
from filtra.graded import (
    GradedMap,
    GradedObject,
    graded_canonical_map,
    graded_hom,
    graded_quasi_isomorphic,
    graded_tensor,
    is_dualizable_graded,
    reflector_graded,
)

from helpers import mat, point, two_term_acyclic


def random_graded(rng: random.Random, field, support: int = 3, max_dim: int = 3) -> GradedObject:
    degrees = rng.sample(range(-3, 4), rng.randint(0, support))
    return GradedObject(field, {n: random_complex(rng, field, (-1, 1), max_dim) for n in degrees})


graded_objects = st.builds(
    lambda seed, f: random_graded(random.Random(seed), f),
    st.integers(0, 10**6),
    st.sampled_from([QQ, GF(3)]),
)


def test_zero_components_are_dropped():
    g = GradedObject(QQ, {0: ChainComplex.zero(QQ), 2: point(QQ)})
    assert g.support == [2]


def test_tensor_examples():
    a, b = point(QQ, 0, 2), two_term_acyclic(QQ)
    assert graded_tensor(GradedObject(QQ, {0: a}), GradedObject(QQ, {0: b})).at(0) == tensor(a, b)
    x = GradedObject(QQ, {-1: a, 2: b})
    unit = GradedObject(QQ, {0: ChainComplex.unit(QQ)})
    assert graded_tensor(unit, x).comps == x.comps
    k01 = GradedObject(QQ, {0: point(QQ), 1: point(QQ)})
    sq = graded_tensor(k01, k01)
    assert {n: c.total_dim() for n, c in sq.comps.items()} == {0: 1, 1: 2, 2: 1}


def test_tensor_field_mismatch():
    with pytest.raises(FieldMismatch):
        graded_tensor(GradedObject(QQ, {0: point(QQ)}), GradedObject(GF(2), {0: point(GF(2))}))


def test_hom_examples():
    a, b = point(QQ, 0, 2), point(QQ, 1, 1)
    assert graded_hom(GradedObject(QQ, {0: a}), GradedObject(QQ, {0: b})).at(0) == hom_complex(a, b)
    assert graded_hom(GradedObject(QQ, {0: a}), GradedObject(QQ, {})).is_zero
    x = GradedObject(QQ, {0: point(QQ), 2: point(QQ)})
    y = GradedObject(QQ, {1: point(QQ)})
    h = graded_hom(x, y)
    assert h.support == [-1, 1]
    assert all(c.total_dim() == 1 for c in h.comps.values())


def test_reflector_examples():
    unit = ChainComplex.unit(QQ)
    a = point(QQ, 1, 2)
    assert reflector_graded(GradedObject(QQ, {0: a}), unit).at(0) == hom_complex(a, unit)
    r = reflector_graded(GradedObject(QQ, {3: point(QQ)}), unit)
    assert r.support == [-3] and r.at(-3).total_dim() == 1
    assert reflector_graded(GradedObject(QQ, {-1: a, 2: a}), unit).support == [-2, 1]


def test_dualizable_examples():
    assert is_dualizable_graded(GradedObject(QQ, {}))
    assert is_dualizable_graded(GradedObject(QQ, {0: point(QQ)}))


@given(graded_objects)
def test_dualizable_on_random_objects(x):
    f = graded_canonical_map(x)
    assert f.is_quasi_iso()
    assert is_dualizable_graded(x)


@given(graded_objects)
def test_reflector_matches_hom_into_degree_zero(x):
    d = random_complex(random.Random(len(x.support)), x.field, (0, 1), 2)
    assert graded_quasi_isomorphic(reflector_graded(x, d), graded_hom(x, GradedObject(x.field, {0: d})))


@given(graded_objects)
def test_double_dual_is_reflexive(x):
    unit = ChainComplex.unit(x.field)
    assert graded_quasi_isomorphic(reflector_graded(reflector_graded(x, unit), unit), x)


@given(graded_objects, graded_objects)
def test_tensor_commutative_and_associative_on_invariants(x, y):
    if x.field != y.field:
        return
    xy, yx = graded_tensor(x, y), graded_tensor(y, x)
    assert {n: c.dims for n, c in xy.comps.items()} == {n: c.dims for n, c in yx.comps.items()}
    assert graded_quasi_isomorphic(xy, yx)
    left = graded_tensor(graded_tensor(x, y), x)
    right = graded_tensor(x, graded_tensor(y, x))
    assert graded_quasi_isomorphic(left, right)


@given(st.integers(0, 10**6))
def test_components_of_a_quasi_isomorphism_are_quasi_isomorphisms(seed):
    rng = random.Random(seed)
    k = point(QQ)
    # each component is multiplication by a scalar, possibly zero
    scalars = {n: rng.choice([0, 1, 2]) for n in range(3)}
    x = GradedObject(QQ, {n: k for n in scalars})
    f = GradedMap(x, x, {n: ChainMap(k, k, {0: mat(QQ, [[s]])}) for n, s in scalars.items()})
    total = direct_sum_map(*(f.at(n) for n in scalars))
    assert total.source == direct_sum(*(x.at(n) for n in scalars))
    assert is_quasi_iso(total) == f.is_quasi_iso() == all(s != 0 for s in scalars.values())
