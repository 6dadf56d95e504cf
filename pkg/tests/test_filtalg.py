from __future__ import annotations

import pytest

from filtra.chain import ChainComplex, ChainMap, tensor
from filtra.errors import InvalidAlgebra
from filtra.exactlin import GF, QQ, Matrix, intersection, rank, span_contains
from filtra.filtalg import (
    FilteredAlgebra,
    ad_power_kernel,
    algebra_defects,
    diff_ops_example,
    diff_ops_stages,
    gr_algebra,
    graded_algebra_defects,
    is_commutative,
    truncated_polynomial_algebra,
    validate_algebra,
)
from filtra.sequence import Sequence, is_monic, step_sequence

from helpers import mat, point


def one_level_algebra(field, table: dict, dim: int, unit_vec: list) -> FilteredAlgebra:
    """Algebra on ``k^dim`` in degree 0 over the window (0, 0) with ``e_a e_b = table[a, b]``."""
    c = point(field, 0, dim)
    x = Sequence((0, 0), [c], [])
    rows = [[0] * (dim * dim) for _ in range(dim)]
    for (a, b), vec in table.items():
        for r, v in enumerate(vec):
            rows[r][a * dim + b] = v
    mult = {(0, 0): ChainMap(tensor(c, c), c, {0: mat(field, rows)})}
    unit = ChainMap(ChainComplex.unit(field), c, {0: mat(field, [[v] for v in unit_vec])})
    return FilteredAlgebra(x, mult, unit)


def trivial_algebra(field=QQ) -> FilteredAlgebra:
    x = step_sequence(0, ChainComplex.unit(field))
    k = x.at(0)
    mult = {}
    for p in (-1, 0):
        for q in (-1, 0):
            src = tensor(x.at(p), x.at(q))
            tgt = x.at(min(p + q, 0))
            mult[(p, q)] = ChainMap(src, tgt, {0: mat(field, [[1]])} if p == q == 0 else {})
    return FilteredAlgebra(x, mult, ChainMap.identity(k))


def test_trivial_algebra():
    a = trivial_algebra()
    assert validate_algebra(a)
    g = gr_algebra(a)
    assert g.carrier.support == [0] and g.carrier.at(0).dims == {0: 1}
    assert graded_algebra_defects(g) == []


def test_broken_associativity_is_located():
    # e0 unit, e1 e1 = e2, e1 e2 = e1, everything else with e1, e2 zero
    table = {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 0): [0, 1, 0], (0, 2): [0, 0, 1],
             (2, 0): [0, 0, 1], (1, 1): [0, 0, 1], (1, 2): [0, 1, 0]}
    a = one_level_algebra(QQ, table, 3, [1, 0, 0])
    defects = algebra_defects(a)
    assert len(defects) == 1 and "associativity" in defects[0]
    assert not validate_algebra(a)
    with pytest.raises(InvalidAlgebra):
        gr_algebra(a)


def test_perturbed_product_fails_restriction():
    a = diff_ops_example(2)
    M = a.carrier.M
    top = a.mult[(M, M)]
    m = top.at(0)
    rows = m.to_rows()
    rows[0][0] = rows[0][0] + 1
    bad = dict(a.mult)
    bad[(M, M)] = ChainMap(top.source, top.target, {0: Matrix.from_rows(QQ, rows)})
    defects = algebra_defects(FilteredAlgebra(a.carrier, bad, a.unit))
    assert defects and "restriction" in defects[0]


def test_broken_unit_is_reported():
    a = one_level_algebra(QQ, {(0, 0): [2]}, 1, [1])
    assert any("unit law" in d for d in algebra_defects(a))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_diff_ops_valid_and_commutative(d):
    a = diff_ops_example(d)
    assert is_monic(a.carrier)
    assert validate_algebra(a)
    g = gr_algebra(a)
    assert graded_algebra_defects(g) == []
    assert is_commutative(g)


def test_diff_ops_d1_is_constant_k():
    a = diff_ops_example(1)
    top = a.carrier.at(a.carrier.M)
    assert top.dims == {0: 1}
    assert [c.dims for c in a.carrier.levels] == [{}, {0: 1}]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_diff_ops_stage_zero_is_multiplication_operators(d):
    stages = diff_ops_stages(d)
    assert stages[0].cols == d
    centralizer = ad_power_kernel(d, 0)
    assert rank(Matrix.hstack(QQ, d * d, [stages[0], centralizer])) == d


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_diff_ops_stages_match_ad_power_kernels(d):
    stages = diff_ops_stages(d)
    assert stages[-1].cols == d * d
    for n, s in enumerate(stages):
        oracle = ad_power_kernel(d, n)
        assert s.cols == oracle.cols
        assert span_contains(s, oracle) and span_contains(oracle, s)
    for small, big in zip(stages, stages[1:]):
        assert small.cols < big.cols
        assert intersection(small, big).cols == small.cols


@pytest.mark.parametrize("d", [2, 3, 4])
def test_diff_ops_generator_choice_does_not_matter(d):
    by_x = diff_ops_stages(d, generators=[1])
    by_all = diff_ops_stages(d, generators=list(range(d)))
    default = diff_ops_stages(d)
    for a, b, c in zip(by_x, by_all, default):
        assert span_contains(a, b) and span_contains(b, a)
        assert span_contains(a, c) and span_contains(c, a)
    assert len(by_x) == len(by_all) == len(default)


def test_diff_ops_over_prime_field():
    # for d < p the order filtration looks the same over F_p
    stages = diff_ops_stages(3, GF(5))
    assert [s.cols for s in stages] == [s.cols for s in diff_ops_stages(3)]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_gr_of_truncated_polynomials_is_monomial_grading(d):
    a = truncated_polynomial_algebra(d)
    assert validate_algebra(a)
    g = gr_algebra(a)
    # t^j sits in filtration degree -j
    assert g.carrier.support == list(range(1 - d, 1))
    assert all(g.carrier.at(p).dims == {0: 1} for p in g.carrier.support)
    for (p, q), f in g.mult.items():
        assert f.at(0) == Matrix.from_rows(QQ, [[1]]), (p, q)
    # products t^i t^j with i + j >= d vanish, so no component is provided there
    assert set(g.mult) == {(p, q) for p in g.carrier.support for q in g.carrier.support if p + q > -d}
    assert is_commutative(g)
