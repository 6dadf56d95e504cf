"""Shared builders for the test suite."""

from __future__ import annotations

import random

from filtra.chain import ChainComplex, ChainMap, betti
from filtra.exactlin import Field, Matrix, rank
from filtra.generators import random_complex, random_monic_sequence, random_sequence_map
from filtra.sequence import Sequence, SequenceMap, align, constant_sequence, direct_sum_sequence


def mat(field: Field, rows) -> Matrix:
    return Matrix.from_rows(field, rows)


def two_term_acyclic(field: Field) -> ChainComplex:
    """``0 -> k --id--> k -> 0`` in degrees 1 and 0."""
    return ChainComplex(field, {0: 1, 1: 1}, {1: mat(field, [[1]])})


def point(field: Field, degree: int = 0, dim: int = 1) -> ChainComplex:
    return ChainComplex.concentrated(field, degree, dim)


def inclusion_into_sum(x: Sequence, tail: Sequence) -> SequenceMap:
    """The summand inclusion ``x -> x ⊕ tail`` of sequences."""
    x, tail = align(x, tail)
    y = direct_sum_sequence(x, tail)
    comps = []
    for n in x.indices():
        a, t = x.at(n), tail.at(n)
        comp = {
            k: Matrix.vstack(x.field, a.dim(k), [Matrix.identity(x.field, a.dim(k)),
                                                 Matrix.zeros(x.field, t.dim(k), a.dim(k))])
            for k in a.dims
        }
        comps.append(ChainMap(a, y.at(n), comp))
    return SequenceMap(x, y, comps)


def levelwise_isomorphic(x: Sequence, y: Sequence) -> bool:
    """Isomorphism invariants of sequences over a field.

    Levels must agree in dimensions and Betti numbers (which fixes a complex up
    to isomorphism) and corresponding steps must have equal ranks in each degree.
    """
    x, y = align(x, y)
    for n in x.indices():
        a, b = x.at(n), y.at(n)
        if a.dims != b.dims or betti(a) != betti(b):
            return False
        if n < x.M:
            fx, fy = x.step_at(n), y.step_at(n)
            if any(rank(fx.at(k)) != rank(fy.at(k)) for k in a.dims):
                return False
    return True


def random_map_pair(seed: int, field: Field) -> SequenceMap:
    """A map between small monic sequences; about half are graded equivalences."""
    rng = random.Random(seed)
    x = random_monic_sequence(rng, field, max_dim=2, max_window=3, max_support=2)
    choice = rng.randrange(3)
    if choice == 0:
        y = random_monic_sequence(rng, field, max_dim=2, max_window=3, max_support=2)
        w = (min(x.N, y.N), max(x.M, y.M))
        return random_sequence_map(rng, x.extend(w), y.extend(w))
    if choice == 1:
        # engineered graded equivalence: adding a constant tail
        tail = constant_sequence(random_complex(rng, field, (0, 1), 2), x.window)
        return inclusion_into_sum(x, tail)
    return random_sequence_map(rng, x, x)
