"""Filtered associative algebras, their associated graded, and examples.

Products are compared through sparse structure constants rather than full
tensor-power matrices, which would be too large for End(k[x]/(x^5)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .chain import ChainComplex, ChainMap, _tensor_index, quotient_complex, tensor
from .errors import InvalidAlgebra
from .exactlin import (
    QQ,
    Field,
    Matrix,
    inverse,
    kernel_basis,
    pivot_columns,
    quotient_presentation,
    span_contains,
)
from .graded import GradedObject
from .sequence import Sequence, is_monic

__all__ = [
    "FilteredAlgebra",
    "GradedAlgebra",
    "algebra_defects",
    "validate_algebra",
    "gr_algebra",
    "graded_algebra_defects",
    "is_commutative",
    "diff_ops_stages",
    "ad_power_kernel",
    "diff_ops_example",
    "truncated_polynomial_algebra",
]


@dataclass(frozen=True, eq=False)
class FilteredAlgebra:
    """A monoid in sequences.

    Args:
        carrier: monic sequence.
        mult: ``(p, q) -> ChainMap carrier(p) ⊗ carrier(q) -> carrier(p+q)`` for
            ``p, q`` in the window, the target index clamped to the window.
        unit: ``ChainMap`` from the unit complex to ``carrier(0)``.
    """

    carrier: Sequence
    mult: Mapping[tuple[int, int], ChainMap]
    unit: ChainMap

    def clamp(self, n: int) -> int:
        return min(max(n, self.carrier.N), self.carrier.M)


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Graded components with products ``mult[(p, q)]: x_p ⊗ x_q -> x_{p+q}``."""

    carrier: GradedObject
    mult: Mapping[tuple[int, int], ChainMap]
    unit: ChainMap


# sparse vectors over the total basis of a complex


def _column(m: Matrix, j: int) -> dict[int, object]:
    return {i: v for i, v in enumerate(m.column(j)) if v}


def _product(m: ChainMap, idx: dict, i: int, u: dict, j: int, v: dict) -> dict:
    """``m(u ⊗ v)`` for ``u`` in degree ``i`` and ``v`` in degree ``j`` (sparse)."""
    out: dict[int, object] = {}
    n = i + j
    mat = m.at(n)
    if mat.rows == 0:
        return out
    cols = mat.cols
    entries = mat.entries
    for x, ux in u.items():
        for y, vy in v.items():
            col = idx[(i, x, j, y)][1]
            c = ux * vy
            for r in range(mat.rows):
                e = entries[r * cols + col]
                if e:
                    out[r] = out.get(r, 0) + c * e
    return _clean(out, m.field)


def _clean(v: dict, field: Field) -> dict:
    if field.is_prime:
        return {k: x % field.p for k, x in v.items() if x % field.p}
    return {k: x for k, x in v.items() if x}


def _add_scaled(acc: dict, c, v: dict):
    for k, x in v.items():
        acc[k] = acc.get(k, 0) + c * x


def _apply(m: Matrix, v: dict) -> dict:
    out: dict[int, object] = {}
    cols = m.cols
    for j, c in v.items():
        for r in range(m.rows):
            e = m.entries[r * cols + j]
            if e:
                out[r] = out.get(r, 0) + c * e
    return out


def _basis(c: ChainComplex):
    for k, n in c.dims.items():
        for i in range(n):
            yield k, i


# filtered algebras


def algebra_defects(a: FilteredAlgebra) -> list[str]:
    """Human-readable witnesses for every failed algebra axiom; empty if valid.

    Every product is pushed into the top level ``X(M)``. For a monic carrier
    this loses nothing, so associativity and unitality at all levels reduce to
    the top level plus the statement that each ``mult(p, q)`` is the
    restriction of ``mult(M, M)``.
    """
    x = a.carrier
    field = x.field
    out: list[str] = []
    if not is_monic(x):
        return ["carrier has a non-injective step"]
    N, M = x.window
    top = x.at(M)
    unit_c = ChainComplex.unit(field)
    if a.unit.source != unit_c or a.unit.target != x.at(a.clamp(0)):
        out.append("unit has the wrong source or target")
        return out
    for p in x.indices():
        for q in x.indices():
            f = a.mult.get((p, q))
            if f is None:
                out.append(f"missing multiplication ({p},{q})")
                continue
            if f.source != tensor(x.at(p), x.at(q)) or f.target != x.at(a.clamp(p + q)):
                out.append(f"multiplication ({p},{q}) has the wrong source or target")
    if out:
        return out
    mtop = a.mult[(M, M)]
    idx_top = _tensor_index(top, top)
    incl = {n: x.composite(n, M) for n in x.indices()}

    # restriction: mult(p, q) agrees with mult(M, M) on X(p) ⊗ X(q)
    for p in x.indices():
        for q in x.indices():
            f = a.mult[(p, q)]
            xp, xq = x.at(p), x.at(q)
            idx = _tensor_index(xp, xq)
            up = incl[a.clamp(p + q)]
            bad = None
            for i, s in _basis(xp):
                u = _column(incl[p].at(i), s)
                for j, t in _basis(xq):
                    v = _column(incl[q].at(j), t)
                    want = _product(mtop, idx_top, i, u, j, v)
                    local = _product(f, idx, i, {s: field.one}, j, {t: field.one})
                    got = _clean(_apply(up.at(i + j), local), field)
                    if got != want:
                        bad = (i, s, j, t)
                        break
                if bad:
                    break
            if bad:
                out.append(
                    f"multiplication ({p},{q}) is not the restriction of the top product "
                    f"(basis pair {bad[1]} in degree {bad[0]}, {bad[3]} in degree {bad[2]})"
                )
    # products must stay inside X(N) when one factor lies there
    if not x.at(N).is_zero:
        for q in x.indices():
            for key in ((N, q), (q, N)):
                f = a.mult[key]
                for k, m in f.comp.items():
                    if not span_contains(incl[N].at(k), incl[a.clamp(sum(key))].at(k) @ m):
                        out.append(f"multiplication {key} leaves X({N}) in degree {k}")
    # top-level associativity (ab)c = a(bc)
    prods: dict = {}

    def mul(i, u, j, v):
        return _product(mtop, idx_top, i, u, j, v)

    def basic(i, s, j, t):
        key = (i, s, j, t)
        if key not in prods:
            prods[key] = mul(i, {s: field.one}, j, {t: field.one})
        return prods[key]

    elems = list(_basis(top))
    for i, s in elems:
        for j, t in elems:
            ab = basic(i, s, j, t)
            for k, w in elems:
                lhs: dict = {}
                for r, c in ab.items():
                    _add_scaled(lhs, c, basic(i + j, r, k, w))
                bc = basic(j, t, k, w)
                rhs: dict = {}
                for r, c in bc.items():
                    _add_scaled(rhs, c, basic(i, s, j + k, r))
                if _clean(lhs, field) != _clean(rhs, field):
                    out.append(
                        f"associativity fails on basis triple "
                        f"({i}:{s}, {j}:{t}, {k}:{w}) of X({M})"
                    )
                    return out
    # unitality at the top, via the image of the unit in X(M)
    e = _column(incl[a.clamp(0)].at(0) @ a.unit.at(0), 0) if top.dim(0) else {}
    for i, s in elems:
        one = {s: field.one}
        if mul(0, e, i, one) != one:
            out.append(f"left unit law fails on basis vector {s} in degree {i}")
            break
        if mul(i, one, 0, e) != one:
            out.append(f"right unit law fails on basis vector {s} in degree {i}")
            break
    return out


def validate_algebra(a: FilteredAlgebra) -> bool:
    return not algebra_defects(a)


# associated graded


def graded_algebra_defects(g: GradedAlgebra) -> list[str]:
    """Associativity and unitality of a graded algebra, checked on basis elements."""
    field = g.carrier.field
    comps = g.carrier.comps
    idx = {}

    def mul(p, i, u, q, j, v):
        f = g.mult.get((p, q))
        if f is None or p + q not in comps:
            return {}
        key = (p, q)
        if key not in idx:
            idx[key] = _tensor_index(comps[p], comps[q])
        return _product(f, idx[key], i, u, j, v)

    elems = [(p, k, s) for p, c in comps.items() for k, s in _basis(c)]
    one = field.one
    for p, i, s in elems:
        for q, j, t in elems:
            ab = mul(p, i, {s: one}, q, j, {t: one})
            for r, k, w in elems:
                lhs = mul(p + q, i + j, ab, r, k, {w: one}) if ab else {}
                bc = mul(q, j, {t: one}, r, k, {w: one})
                rhs = mul(p, i, {s: one}, q + r, j + k, bc) if bc else {}
                if lhs != rhs:
                    return [f"associativity fails on ({p}:{i}:{s}, {q}:{j}:{t}, {r}:{k}:{w})"]
    e = _column(g.unit.at(0), 0) if 0 in comps and comps[0].dim(0) else {}
    for p, i, s in elems:
        u = {s: one}
        if mul(0, 0, e, p, i, u) != u or mul(p, i, u, 0, 0, e) != u:
            return [f"unit law fails on ({p}:{i}:{s})"]
    return []


def is_commutative(g: GradedAlgebra) -> bool:
    """``ab = (-1)^{|a||b|} ba`` on all homogeneous basis elements."""
    field = g.carrier.field
    comps = g.carrier.comps
    one = field.one
    for (p, q), f in g.mult.items():
        if (q, p) not in g.mult:
            return False
        h = g.mult[(q, p)]
        ia = _tensor_index(comps[p], comps[q])
        ib = _tensor_index(comps[q], comps[p])
        for i, s in _basis(comps[p]):
            for j, t in _basis(comps[q]):
                ab = _product(f, ia, i, {s: one}, j, {t: one})
                ba = _product(h, ib, j, {t: one}, i, {s: one})
                if (i * j) % 2:
                    ba = _clean({k: -v for k, v in ba.items()}, field)
                if ab != ba:
                    return False
    return True


def gr_algebra(a: FilteredAlgebra) -> GradedAlgebra:
    """Associated graded algebra, modelled by the quotients ``X(p) / X(p-1)``.

    The quotient model is quasi-isomorphic to the cone model used by ``gr``
    and makes the induced product strictly associative (and strictly
    commutative when the filtered product is commutative up to lower order).
    """
    defects = algebra_defects(a)
    if defects:
        raise InvalidAlgebra("; ".join(defects))
    x = a.carrier
    field = x.field
    quot, lifts, proj = {}, {}, {}
    for p in range(x.N + 1, x.M + 1):
        sub = x.step_at(p - 1)
        bases = {k: m for k, m in sub.comp.items()}
        q, pi = quotient_complex(x.at(p), bases)
        if q.is_zero:
            continue
        quot[p] = q
        proj[p] = pi
        lifts[p] = {
            k: quotient_presentation(x.at(p).dim(k), Matrix.identity(field, x.at(p).dim(k)),
                                     bases.get(k, Matrix.zeros(field, x.at(p).dim(k), 0)),
                                     check=False).basis
            for k in q.dims
        }
    carrier = GradedObject(field, quot)
    mult = {}
    for p in quot:
        for q_ in quot:
            if p + q_ not in quot:
                continue
            f = a.mult[(p, q_)]
            idx = _tensor_index(x.at(p), x.at(q_))
            src = tensor(quot[p], quot[q_])
            sidx = _tensor_index(quot[p], quot[q_])
            comp = {n: [[field.zero] * src.dim(n) for _ in range(quot[p + q_].dim(n))] for n in src.dims}
            for i, s in _basis(quot[p]):
                u = _column(lifts[p][i], s)
                for j, t in _basis(quot[q_]):
                    v = _column(lifts[q_][j], t)
                    prod = _product(f, idx, i, u, j, v)
                    img = _clean(_apply(proj[p + q_].at(i + j), prod), field)
                    n, col = sidx[(i, s, j, t)]
                    if n in comp:
                        for r, val in img.items():
                            comp[n][r][col] = val
            mult[(p, q_)] = ChainMap(src, quot[p + q_], {
                n: Matrix._raw(field, quot[p + q_].dim(n), src.dim(n), rows)
                for n, rows in comp.items() if quot[p + q_].dim(n)
            })
    unit_c = ChainComplex.unit(field)
    if 0 in quot:
        u = proj[0].at(0) @ a.unit.at(0) if x.at(0).dim(0) else Matrix.zeros(field, quot[0].dim(0), 1)
        unit = ChainMap(unit_c, quot[0], {0: u} if quot[0].dim(0) else {})
    else:
        unit = ChainMap.zero(unit_c, carrier.at(0))
    return GradedAlgebra(carrier, mult, unit)


# differential operators on k[x]/(x^d)


def _mult_operator(d: int, j: int, field: Field = QQ) -> Matrix:
    """Multiplication by ``x^j`` on the monomial basis ``1, x, ..., x^{d-1}``."""
    rows = [[field.one if r == c + j else field.zero for c in range(d)] for r in range(d)]
    return Matrix._raw(field, d, d, rows)


def _ad(op: Matrix) -> Matrix:
    """``P -> P op - op P`` on row-major vectorized ``d x d`` matrices."""
    field = op.field
    ident = Matrix.identity(field, op.rows)
    return ident.kron(op.T) - op.kron(ident)


def diff_ops_stages(d: int, field: Field = QQ, generators: list[int] | None = None) -> list[Matrix]:
    """Bases of ``D_0 ⊆ D_1 ⊆ ...`` inside End(k[x]/(x^d)), up to the first stage equal to End.

    ``D_n = {P : [P, x^j] ∈ D_{n-1}}`` with ``D_{-1} = 0``; by default ``j``
    runs over ``1 .. d-1``. Each basis is the reduced kernel basis of the
    defining linear conditions, so columns are vectorized row-major matrices.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    js = list(range(1, d)) if generators is None else generators
    ads = [_ad(_mult_operator(d, j, field)) for j in js]
    full = d * d
    stages: list[Matrix] = []
    prev = Matrix.zeros(field, full, 0)
    while True:
        # rows of `ann` cut out the previous stage
        ann = kernel_basis(prev.T).T
        if ads:
            cond = Matrix.vstack(field, full, [ann @ a for a in ads])
            cur = kernel_basis(cond)
        else:
            cur = Matrix.identity(field, full)
        stages.append(cur)
        if cur.cols == full:
            return stages
        if cur.cols == prev.cols and stages[:-1]:
            raise RuntimeError("filtration stalled below End(O)")
        prev = cur


def ad_power_kernel(d: int, n: int, field: Field = QQ) -> Matrix:
    """Basis of ``ker(ad(x)^{n+1})`` on End(k[x]/(x^d))."""
    a = _ad(_mult_operator(d, 1, field)) if d > 1 else Matrix.zeros(field, 1, 1)
    power = Matrix.identity(field, d * d)
    for _ in range(n + 1):
        power = a @ power
    return kernel_basis(power)


def _adapted_frame(stages: list[Matrix]) -> tuple[Matrix, list[int]]:
    """Basis of the ambient space extending each stage in turn, and the stage dims."""
    field = stages[-1].field
    full = stages[-1].rows
    frame = Matrix.zeros(field, full, 0)
    dims = []
    for s in stages:
        stacked = Matrix.hstack(field, full, [frame, s])
        new = [j - frame.cols for j in pivot_columns(stacked) if j >= frame.cols]
        frame = Matrix.hstack(field, full, [frame, s.select_columns(new)])
        dims.append(frame.cols)
    return frame, dims


def _filtered_from_frame(field: Field, frame: Matrix, dims: list[int], window: tuple[int, int],
                         product, unit_vec: Matrix) -> FilteredAlgebra:
    """Filtered algebra on nested coordinate spaces ``span(frame[:, :dims[i]])`` in degree 0.

    ``product(u, v)`` multiplies two ambient vectors (lists) and returns a list.
    """
    inv = inverse(frame)
    n_amb = frame.cols
    basis_vecs = [list(frame.column(j)) for j in range(n_amb)]
    table: dict = {}
    for a_ in range(n_amb):
        for b_ in range(n_amb):
            prod = [field(v) for v in product(basis_vecs[a_], basis_vecs[b_])]
            coords = inv @ Matrix._raw(field, n_amb, 1, [[v] for v in prod])
            table[(a_, b_)] = coords.column(0)
    N, M = window
    sizes = {N: 0}
    for i, n in enumerate(range(N + 1, M + 1)):
        sizes[n] = dims[i]
    levels = [ChainComplex(field, {0: sizes[n]}, {}) for n in range(N, M + 1)]
    steps = []
    for i in range(M - N):
        a, b = sizes[N + i], sizes[N + i + 1]
        steps.append(ChainMap(levels[i], levels[i + 1], {0: Matrix.identity(field, b).select_columns(range(a))}))
    carrier = Sequence(window, levels, steps)

    def clamp(n):
        return min(max(n, N), M)

    mult = {}
    for p in range(N, M + 1):
        for q in range(N, M + 1):
            t = clamp(p + q)
            rows = [[field.zero] * (sizes[p] * sizes[q]) for _ in range(sizes[t])]
            for a_ in range(sizes[p]):
                for b_ in range(sizes[q]):
                    col = table[(a_, b_)]
                    for r in range(sizes[t]):
                        rows[r][a_ * sizes[q] + b_] = col[r]
                    if any(col[sizes[t]:]):
                        raise InvalidAlgebra(f"product of stages {p} and {q} leaves stage {t}")
            src = tensor(levels[p - N], levels[q - N])
            mult[(p, q)] = ChainMap(src, levels[t - N], {
                0: Matrix._raw(field, sizes[t], sizes[p] * sizes[q], rows)
            } if sizes[t] and sizes[p] * sizes[q] else {})
    unit_coords = inv @ unit_vec
    u0 = sizes[clamp(0)]
    if any(unit_coords.column(0)[u0:]):
        raise InvalidAlgebra("unit is not in stage 0")
    unit = ChainMap(ChainComplex.unit(field), levels[clamp(0) - N],
                    {0: unit_coords.select_rows(range(u0))} if u0 else {})
    return FilteredAlgebra(carrier, mult, unit)


def diff_ops_example(d: int, field: Field = QQ) -> FilteredAlgebra:
    """The order filtration on End(k[x]/(x^d)) with composition as product.

    Window is ``(-1, s)`` where ``s`` is the stabilization index, so the top
    level is End(O) of dimension ``d^2``. Stages are coordinate subspaces of
    a basis adapted to the filtration.
    """
    stages = diff_ops_stages(d, field)
    frame, dims = _adapted_frame(stages)

    def compose(u, v):
        a = Matrix._raw(field, d, d, [u[i * d:(i + 1) * d] for i in range(d)])
        b = Matrix._raw(field, d, d, [v[i * d:(i + 1) * d] for i in range(d)])
        return list((a @ b).entries)

    ident = Matrix.identity(field, d)
    unit_vec = Matrix._raw(field, d * d, 1, [[v] for v in ident.entries])
    return _filtered_from_frame(field, frame, dims, (-1, len(stages) - 1), compose, unit_vec)


def truncated_polynomial_algebra(d: int, field: Field = QQ) -> FilteredAlgebra:
    """k[t]/(t^d) filtered by ``X(n) = (t^{-n})``, window ``(-d-1, 0)``.

    Coordinates list the monomials ``t^{d-1}, ..., t, 1`` so every level is
    an initial segment.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    # ambient vector index i holds the coefficient of t^{d-1-i}
    frame = Matrix.identity(field, d)
    dims = [0] + [k for k in range(1, d + 1)]

    def multiply(u, v):
        out = [field.zero] * d
        for i, a_ in enumerate(u):
            if not a_:
                continue
            for j, b_ in enumerate(v):
                if b_:
                    e = (d - 1 - i) + (d - 1 - j)
                    if e < d:
                        out[d - 1 - e] += a_ * b_
        return out

    unit_vec = Matrix._raw(field, d, 1, [[field.one if i == d - 1 else field.zero] for i in range(d)])
    return _filtered_from_frame(field, frame, dims, (-d - 1, 0), multiply, unit_vec)
