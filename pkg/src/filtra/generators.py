"""Example and random generators for complexes, sequences and maps."""

from __future__ import annotations

import random

from .chain import ChainComplex, ChainMap, subcomplex
from .exactlin import Field, Matrix, column_basis, kernel_basis, solve
from .filtalg import truncated_polynomial_algebra
from .sequence import (
    Sequence,
    SequenceMap,
    constant_sequence,
    direct_sum_sequence,
    truncation_sequence,
)

__all__ = [
    "t_adic_sequence",
    "t_adic_endomorphism",
    "t_adic_with_constant_tail",
    "postnikov_example",
    "random_complex",
    "random_monic_sequence",
    "random_sequence_map",
    "random_chain_map",
    "random_sequence",
]


def t_adic_sequence(d: int, field: Field | None = None) -> Sequence:
    """``n -> (t^{-n}) / (t^d)`` inside k[t]/(t^d) on the window ``(-d-1, 0)``."""
    a = truncated_polynomial_algebra(d) if field is None else truncated_polynomial_algebra(d, field)
    return a.carrier


def t_adic_endomorphism(x: Sequence) -> SequenceMap:
    """Multiplication by ``1 + t`` on a truncated t-adic sequence.

    Levels list monomials from ``t^{d-1}`` down to ``1``, so ``t`` moves
    coordinate ``i`` to ``i - 1``.
    """
    field = x.field
    comps = []
    for c in x.levels:
        n = c.dim(0)
        rows = [[field.one if r == s or r == s - 1 else field.zero for s in range(n)] for r in range(n)]
        comps.append(ChainMap(c, c, {0: Matrix._raw(field, n, n, rows)} if n else {}))
    return SequenceMap(x, x, comps)


def t_adic_with_constant_tail(d: int, field: Field | None = None) -> SequenceMap:
    """``(1 + t)`` on the truncated sequence plus a constant summand ``k[t]/(1 + t)``.

    On the constant summand ``1 + t`` acts by zero, so the map is a graded
    equivalence without being a levelwise quasi-isomorphism.
    """
    x = t_adic_sequence(d, field)
    f = t_adic_endomorphism(x)
    k = ChainComplex.unit(x.field)
    tail = constant_sequence(k, x.window)
    y = direct_sum_sequence(x, tail)
    comps = []
    for n in x.indices():
        fn = f.at(n)
        level = y.at(n)
        m = Matrix.block_diag(x.field, [fn.at(0), Matrix.zeros(x.field, 1, 1)])
        comps.append(ChainMap(level, level, {0: m}))
    return SequenceMap(y, y, comps)


def postnikov_example(c: ChainComplex, mode: str = "postnikov") -> Sequence:
    """Truncation tower of ``c`` on the window where it changes, ``(-hi-1, -lo)``."""
    if c.is_zero:
        return truncation_sequence(c, (0, 0), mode)
    return truncation_sequence(c, (-c.hi - 1, -c.lo), mode)


def _random_matrix(rng: random.Random, field: Field, rows: int, cols: int, spread: int = 2) -> Matrix:
    return Matrix._raw(field, rows, cols, [
        [field(rng.randint(-spread, spread)) for _ in range(cols)] for _ in range(rows)
    ])


def random_complex(
    rng: random.Random, field: Field, degrees: tuple[int, int] = (0, 2), max_dim: int = 3
) -> ChainComplex:
    """Random complex on ``degrees`` with ``d_k`` landing in the cycles of ``C_{k-1}``."""
    lo, hi = degrees
    dims = {k: rng.randint(0, max_dim) for k in range(lo, hi + 1)}
    diff = {}
    for k in range(lo + 1, hi + 1):
        cycles = kernel_basis(diff[k - 1]) if k - 1 in diff else Matrix.identity(field, dims[k - 1])
        # sparse-ish coefficients keep ranks varied
        coeff = _random_matrix(rng, field, cycles.cols, dims[k], 1)
        diff[k] = cycles @ coeff
    return ChainComplex(field, dims, diff)


def _closure(c: ChainComplex, vectors: dict) -> dict:
    """Smallest subcomplex containing ``vectors`` (degree -> column matrix)."""
    field = c.field
    out = {}
    for k in sorted(c.dims):
        cols = [vectors.get(k, Matrix.zeros(field, c.dim(k), 0))]
        if k + 1 in vectors and c.dim(k + 1):
            cols.append(c.d(k + 1) @ vectors[k + 1])
        out[k] = column_basis(Matrix.hstack(field, c.dim(k), cols))
    return out


def random_monic_sequence(
    rng: random.Random,
    field: Field,
    max_dim: int = 3,
    max_window: int = 4,
    max_support: int = 3,
    bounded_below: bool = False,
) -> Sequence:
    """Random sequence of subcomplexes ``X(N) ⊆ ... ⊆ X(M)``.

    ``max_window`` bounds the number of levels, ``max_support`` the number of
    homological degrees, ``max_dim`` each degree's dimension. With
    ``bounded_below`` the bottom level is zero.
    """
    levels_n = rng.randint(2 if bounded_below else 1, max_window)
    N = rng.randint(-2, 1)
    M = N + levels_n - 1
    lo = rng.randint(-1, 1)
    top = random_complex(rng, field, (lo, lo + rng.randint(0, max_support - 1)), max_dim)
    while top.is_zero:
        # degenerate all-zero sequences are tested separately
        top = random_complex(rng, field, (lo, lo + rng.randint(0, max_support - 1)), max_dim)
    bases = [{k: Matrix.identity(field, n) for k, n in top.dims.items()}]
    for idx in range(levels_n - 1):
        cur = bases[-1]
        if bounded_below and idx == levels_n - 2:
            bases.append({k: Matrix.zeros(field, n, 0) for k, n in top.dims.items()})
            break
        picks = {}
        for k, b in cur.items():
            if b.cols == 0:
                continue
            take = rng.randint(0, b.cols)
            if take:
                picks[k] = b @ _random_matrix(rng, field, b.cols, take, 1)
        bases.append(_closure(top, picks))
    bases.reverse()
    subs = [subcomplex(top, b) for b in bases]
    steps = []
    for (a, ia), (b, ib) in zip(subs, subs[1:]):
        steps.append(ChainMap(a, b, {k: solve(ib.at(k), ia.at(k)) for k in a.dims if b.dim(k)}))
    return Sequence((N, M), [s for s, _ in subs], steps)


def random_sequence_map(rng: random.Random, x: Sequence, y: Sequence) -> SequenceMap:
    """A random element of the space of strict sequence maps ``x -> y``.

    Both sequences must share a window. The space is the kernel of the linear
    conditions (chain map in each level, commuting squares), sampled with
    small integer coefficients.
    """
    if x.window != y.window:
        raise ValueError("random_sequence_map needs a common window")
    field = x.field
    slots = []  # (n, k, rows, cols, offset)
    off = 0
    for n in x.indices():
        for k, c in x.at(n).dims.items():
            r = y.at(n).dim(k)
            if r:
                slots.append((n, k, r, c, off))
                off += r * c
    where = {(n, k): s for s in slots for n, k in [s[:2]]}
    rows: list[list] = []

    def var_row():
        return [field.zero] * off

    def add_product(row_list, left: Matrix, n: int, k: int, right: Matrix, sign: int):
        """Add ``sign * (left @ F[n,k] @ right)`` entrywise into ``row_list``."""
        s = where.get((n, k))
        if s is None:
            return
        _, _, r, c, o = s
        for i in range(left.rows):
            for j in range(right.cols):
                row = row_list[i * right.cols + j]
                for a in range(r):
                    la = left[i, a]
                    if not la:
                        continue
                    for b in range(c):
                        rb = right[b, j]
                        if rb:
                            row[o + a * c + b] += sign * la * rb

    for n in x.indices():
        xs, ys = x.at(n), y.at(n)
        # chain map: d_Y F_k - F_{k-1} d_X = 0
        for k in sorted(set(xs.dims) | set(ys.dims)):
            shape = (ys.dim(k - 1), xs.dim(k))
            if not shape[0] or not shape[1]:
                continue
            block = [var_row() for _ in range(shape[0] * shape[1])]
            add_product(block, ys.d(k), n, k, Matrix.identity(field, xs.dim(k)), 1)
            add_product(block, Matrix.identity(field, ys.dim(k - 1)), n, k - 1, xs.d(k), -1)
            rows.extend(block)
        if n < x.M:
            yn1 = y.at(n + 1)
            for k in sorted(set(xs.dims) | set(yn1.dims)):
                shape = (yn1.dim(k), xs.dim(k))
                if not shape[0] or not shape[1]:
                    continue
                block = [var_row() for _ in range(shape[0] * shape[1])]
                add_product(block, y.step_at(n).at(k), n, k, Matrix.identity(field, xs.dim(k)), 1)
                add_product(block, Matrix.identity(field, yn1.dim(k)), n + 1, k, x.step_at(n).at(k), -1)
                rows.extend(block)
    if off == 0:
        sol = []
    else:
        rows = [[field(v) for v in r] for r in rows]
        cons = Matrix._raw(field, len(rows), off, rows) if rows else Matrix.zeros(field, 0, off)
        kern = kernel_basis(cons)
        coeff = _random_matrix(rng, field, kern.cols, 1, 2)
        sol = list((kern @ coeff).column(0)) if kern.cols else [field.zero] * off
    comps = []
    for n in x.indices():
        comp = {}
        for k in x.at(n).dims:
            s = where.get((n, k))
            if s is None:
                continue
            _, _, r, c, o = s
            comp[k] = Matrix._raw(field, r, c, [sol[o + a * c:o + (a + 1) * c] for a in range(r)])
        comps.append(ChainMap(x.at(n), y.at(n), comp))
    return SequenceMap(x, y, comps)


def random_chain_map(rng: random.Random, a: ChainComplex, b: ChainComplex) -> ChainMap:
    """A random chain map ``a -> b`` from the space of all chain maps."""
    return random_sequence_map(rng, constant_sequence(a), constant_sequence(b)).at(0)


def random_sequence(
    rng: random.Random, field: Field, max_dim: int = 2, max_window: int = 3, max_support: int = 2
) -> Sequence:
    """Random sequence whose steps are arbitrary chain maps, so usually not monic."""
    count = rng.randint(1, max_window)
    N = rng.randint(-2, 1)
    lo = rng.randint(-1, 1)
    hi = lo + rng.randint(0, max_support - 1)
    levels = [random_complex(rng, field, (lo, hi), max_dim) for _ in range(count)]
    steps = [random_chain_map(rng, a, b) for a, b in zip(levels, levels[1:])]
    return Sequence((N, N + count - 1), levels, steps)
