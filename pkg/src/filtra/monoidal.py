"""Day convolution, completed tensor, internal hom and reflectors on sequences.

Monic sequences are handled in adapted coordinates: a basis of ``X(∞)``
in which every ``X(p)`` is a coordinate subspace. Each basis vector carries a
weight, the first index where it appears, or ``None`` if it already lies in
``X(-∞)``. Filtered tensors and homs then become coordinate subcomplexes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import (
    ChainComplex,
    ChainMap,
    _hom_blocks,
    _same_field,
    _tensor_blocks,
    canonical_map,
    cone,
    cone_map,
    coordinate_subcomplex,
    direct_sum,
    hom_complex,
    postcompose,
    precompose,
    quotient_complex,
    selection_matrix,
    subcomplex,
    tensor,
    tensor_map,
)
from .errors import InvariantViolation, NotMonic
from .exactlin import Matrix, column_basis, inverse, kernel_basis, solve
from .sequence import (
    Sequence,
    SequenceMap,
    _adapted,
    align,
    completion,
    is_graded_equivalence,
    is_monic,
    monic_form,
    step_sequence,
)

__all__ = [
    "day_tensor",
    "day_tensor_map",
    "staircase_colimit",
    "completed_tensor",
    "internal_hom_fil",
    "sequence_reflector",
    "filtered_canonical_map",
    "is_dualizable_filtered",
    "unit_sequence",
]


def unit_sequence(field) -> Sequence:
    """The monoidal unit ``⟨0, k⟩``."""
    return step_sequence(0, ChainComplex.unit(field))


def _le(w, n: int) -> bool:
    return w is None or w <= n


@dataclass(frozen=True, eq=False)
class _CoordinateSequence:
    """A monic sequence given by nested coordinate subcomplexes of ``ambient``."""

    sequence: Sequence
    ambient: ChainComplex
    selections: dict  # index -> {degree: [coordinates]}

    def selection(self, n: int) -> dict:
        n = min(max(n, self.sequence.N), self.sequence.M)
        return self.selections[n]


def _coordinate_sequence(ambient: ChainComplex, window, select) -> _CoordinateSequence:
    """Build levels ``select(n)`` (degree -> coordinates) on ``window``."""
    lo, hi = window
    field = ambient.field
    sels, levels = {}, []
    for n in range(lo, hi + 1):
        sel = {k: [i for i in select(n, k)] for k in ambient.dims}
        sels[n] = sel
        levels.append(coordinate_subcomplex(ambient, sel)[0])
    steps = []
    for i, n in enumerate(range(lo, hi)):
        a, b = levels[i], levels[i + 1]
        steps.append(ChainMap._trusted(a, b, {
            k: selection_matrix(field, sels[n + 1][k], sels[n][k]) for k in a.dims
        }))
    return _CoordinateSequence(Sequence._trusted(window, levels, steps), ambient, sels)


def _require_monic(*xs: Sequence):
    for x in xs:
        if not is_monic(x):
            raise NotMonic("operand has a non-injective step; apply monic_form first")


def _tensor_weights(a: ChainComplex, b: ChainComplex, wa: dict, wb: dict) -> dict:
    out = {}
    for n in sorted({i + j for i in a.dims for j in b.dims}):
        ws = []
        for i, j, _ in _tensor_blocks(a, b, n):
            for u in wa[i]:
                for v in wb[j]:
                    ws.append(None if u is None or v is None else u + v)
        out[n] = ws
    return out


def _day(x: Sequence, y: Sequence):
    _same_field(x.field, y.field)
    _require_monic(x, y)
    ax, wx, fx = _adapted(x)
    ay, wy, fy = _adapted(y)
    amb = tensor(ax, ay)
    weights = _tensor_weights(ax, ay, wx, wy)
    window = (x.N + y.N, x.M + y.M)
    cs = _coordinate_sequence(
        amb, window, lambda n, k: [i for i, w in enumerate(weights[k]) if _le(w, n)]
    )
    return cs, fx, fy


def day_tensor(x: Sequence, y: Sequence) -> Sequence:
    """``(x ⊗ y)(n) = Σ_{p+q=n} im(X(p) ⊗ Y(q))`` inside ``X(∞) ⊗ Y(∞)``.

    Both operands must be monic. The result lives in adapted coordinates of
    ``X(∞) ⊗ Y(∞)``; for step sequences these are the standard coordinates.
    """
    return _day(x, y)[0].sequence


def _restrict(full: Matrix, rows: list[int], cols: list[int]) -> Matrix:
    """Rows/columns of ``full`` after checking that the dropped rows vanish there."""
    sub = full.select_columns(cols)
    keep = set(rows)
    for i in range(full.rows):
        if i not in keep and any(sub.row(i)):
            raise InvariantViolation("map does not respect the filtration")
    return sub.select_rows(rows)


def _restricted_map(src: _CoordinateSequence, tgt: _CoordinateSequence, full: ChainMap) -> SequenceMap:
    """Levelwise restriction of an ambient chain map to coordinate sequences."""
    s, t = align(src.sequence, tgt.sequence)
    comps = []
    for n in s.indices():
        ss, ts = src.selection(n), tgt.selection(n)
        a, b = s.at(n), t.at(n)
        comps.append(ChainMap._trusted(a, b, {
            k: _restrict(full.at(k), ts.get(k, []), ss[k]) for k in a.dims if b.dim(k)
        }))
    return SequenceMap._trusted(s, t, comps)


def _adapted_map(f: SequenceMap, fs: ChainMap, ft: ChainMap) -> ChainMap:
    """``f(∞)`` rewritten between adapted coordinates (``fs``, ``ft`` are frames)."""
    top = f.at(f.source.M)
    comp = {k: inverse(ft.at(k)) @ top.at(k) @ fs.at(k) for k in fs.source.dims if ft.source.dim(k)}
    return ChainMap._trusted(fs.source, ft.source, comp)


def day_tensor_map(f: SequenceMap, g: SequenceMap) -> SequenceMap:
    """``f ⊗ g`` between Day tensors of monic sequences."""
    sx, ax, bx = _day(f.source, g.source)
    tx, cx, dx = _day(f.target, g.target)
    full = tensor_map(_adapted_map(f, ax, cx), _adapted_map(g, bx, dx))
    return _restricted_map(sx, tx, full)


def staircase_colimit(x: Sequence, y: Sequence, n: int) -> ChainComplex:
    """Strict colimit of ``X(p) ⊗ Y(q)`` over ``p + q <= n``, as a cokernel.

    The diagram is reduced to its cofinal staircase: peaks ``X(p) ⊗ Y(n-p)``
    joined through valleys ``X(p) ⊗ Y(n-p-1)`` by ``id ⊗ y`` and ``x ⊗ id``.
    This is an independent check on ``day_tensor`` for monic inputs.
    """
    field = _same_field(x.field, y.field)
    lo = min(x.N, n - y.M) - 1
    hi = max(x.M, n - y.N) + 1
    peaks = [tensor(x.at(p), y.at(n - p)) for p in range(lo, hi + 1)]
    valleys = [tensor(x.at(p), y.at(n - p - 1)) for p in range(lo, hi)]
    big_p = direct_sum(*peaks)
    big_v = direct_sum(*valleys)
    comp = {}
    for k in big_v.dims:
        if not big_p.dim(k):
            continue
        parts = {}
        for i, p in enumerate(range(lo, hi)):
            left = tensor_map(ChainMap.identity(x.at(p)), y.step_at(n - p - 1))
            right = tensor_map(x.step_at(p), ChainMap.identity(y.at(n - p - 1)))
            parts[(i, i)] = left.at(k)
            parts[(i + 1, i)] = -right.at(k)
        comp[k] = Matrix.block(
            field, [c.dim(k) for c in peaks], [c.dim(k) for c in valleys], parts
        )
    images = {k: column_basis(m) for k, m in comp.items()}
    return quotient_complex(big_p, images)[0]


def completed_tensor(x: Sequence, y: Sequence) -> Sequence:
    """Completion of the Day tensor of monic replacements."""
    xm, _ = monic_form(x)
    ym, _ = monic_form(y)
    return completion(day_tensor(xm, ym))[0]


# internal hom


def _hom_weights_allowed(wa, wb, n: int) -> bool:
    if wa is None:
        return wb is None
    return wb is None or wb <= wa + n


def _hom_fast(x: Sequence, y: Sequence):
    ax, wx, fx = _adapted(x)
    ay, wy, fy = _adapted(y)
    amb = hom_complex(ax, ay)
    window = (y.N - x.M, y.M - x.N)

    def select(n, t):
        out, off = [], 0
        for k in _hom_blocks(ax, ay, t):
            da = ax.dim(k)
            for r in range(ay.dim(k + t)):
                for c in range(da):
                    if _hom_weights_allowed(wx[k][c], wy[k + t][r], n):
                        out.append(off + r * da + c)
            off += da * ay.dim(k + t)
        return out

    return _coordinate_sequence(amb, window, select), (ax, wx, fx), (ay, wy, fy)


def _hom_end(x: Sequence, y: Sequence, pad: int = 1) -> Sequence:
    """Level ``n`` is the complex of families ``X(m) -> Y(m+n)`` commuting with steps.

    ``pad`` widens the index ranges beyond the point where both tails are
    constant; any ``pad >= 1`` gives the same answer.
    """
    field = x.field
    n_lo, n_hi = y.N - x.M - pad, y.M - x.N + pad
    lo = min(x.N, y.N - n_hi) - pad
    hi = max(x.M, y.M - n_lo) + pad
    ms = list(range(lo, hi + 1))
    ambients, kernels, levels = {}, {}, []
    for n in range(n_lo, n_hi + 1):
        factors = [hom_complex(x.at(m), y.at(m + n)) for m in ms]
        prod = direct_sum(*factors)
        targets = [hom_complex(x.at(m), y.at(m + n + 1)) for m in ms[:-1]]
        constraint = {}
        for t in prod.dims:
            parts = {}
            for i, m in enumerate(ms[:-1]):
                post = postcompose(y.step_at(m + n), x.at(m))
                pre = precompose(x.step_at(m), y.at(m + n + 1))
                if targets[i].dim(t):
                    if factors[i].dim(t):
                        parts[(i, i)] = post.at(t)
                    if factors[i + 1].dim(t):
                        parts[(i, i + 1)] = -pre.at(t)
            constraint[t] = Matrix.block(
                field, [c.dim(t) for c in targets], [c.dim(t) for c in factors], parts
            )
        bases = {t: kernel_basis(m) for t, m in constraint.items()}
        level, inc = subcomplex(prod, bases)
        ambients[n] = (prod, factors)
        kernels[n] = inc
        levels.append(level)
    steps = []
    for i, n in enumerate(range(n_lo, n_hi)):
        prod, factors = ambients[n]
        nxt, nfactors = ambients[n + 1]
        comp = {}
        for t in prod.dims:
            blocks = {}
            for j, m in enumerate(ms):
                post = postcompose(y.step_at(m + n), x.at(m))
                blocks[(j, j)] = post.at(t)
            full = Matrix.block(
                field, [c.dim(t) for c in nfactors], [c.dim(t) for c in factors], blocks
            )
            if levels[i].dim(t) and levels[i + 1].dim(t):
                comp[t] = solve(kernels[n + 1].at(t), full @ kernels[n].at(t))
        steps.append(ChainMap._trusted(levels[i], levels[i + 1], comp))
    return Sequence._trusted((n_lo, n_hi), levels, steps)


def internal_hom_fil(x: Sequence, y: Sequence) -> Sequence:
    """``Hom(x, y)(n) = ∫_m Hom(X(m), Y(m+n))``.

    ``x`` is replaced by its monic form first so that the strict end is
    homotopically meaningful. When ``y`` is monic too, a family is the same as
    one map ``X(∞) -> Y(∞)`` sending every ``X(m)`` into ``Y(m+n)``, which is a
    coordinate subcomplex in adapted bases. Otherwise the end is computed as a
    kernel over the clamped index range.
    """
    _same_field(x.field, y.field)
    xm, _ = monic_form(x)
    if is_monic(y):
        return _hom_fast(xm, y)[0].sequence
    return _hom_end(xm, y)


def sequence_reflector(x: Sequence, d: ChainComplex, mode: str) -> Sequence:
    """``unit-step``: ``n -> Hom(X(∞)/X(-n-1), d)``; ``lower-constant``: ``n -> Hom(X(-n), d)``.

    The quotient is modelled by the cone of the structure map ``X(-n-1) -> X(∞)``.
    """
    _same_field(x.field, d.field)
    if mode == "unit-step":
        window = (-x.M - 1, -x.N - 1)
        ident = ChainMap.identity(x.at(x.M))
        incl = {n: x.composite(-n - 1, x.M) for n in range(window[0], window[1] + 1)}
        levels = [hom_complex(cone(incl[n]).cone, d) for n in range(window[0], window[1] + 1)]
        steps = []
        for n in range(window[0], window[1]):
            # X(-n-2) -> X(-n-1) induces cone(incl[n+1]) -> cone(incl[n])
            c = cone_map(incl[n + 1], incl[n], x.step_at(-n - 2), ident)
            steps.append(precompose(c, d))
        return Sequence._trusted(window, levels, steps)
    if mode == "lower-constant":
        window = (-x.M, -x.N)
        levels = [hom_complex(x.at(-n), d) for n in range(window[0], window[1] + 1)]
        steps = [precompose(x.step_at(-n - 1), d) for n in range(window[0], window[1])]
        return Sequence._trusted(window, levels, steps)
    raise ValueError(f"unknown reflector mode {mode!r}")


# dualizability


def filtered_canonical_map(x: Sequence) -> SequenceMap:
    """``X ⊗ Hom(X, 1) -> Hom(X, X)`` for the monic form ``X`` of ``x``."""
    xm, _ = monic_form(x)
    dual_cs, (ax, _, _), _ = _hom_fast(xm, unit_sequence(x.field))
    ends_cs, _, _ = _hom_fast(xm, xm)
    dual = dual_cs.sequence
    day_cs, fx, fr = _day(xm, dual)
    # the x-factor of the Day tensor uses the same adapted coordinates ax;
    # fr maps adapted R(∞) into the top level of the dual, a coordinate subcomplex.
    top_sel = dual_cs.selection(dual.M)
    jr = ChainMap._trusted(dual.at(dual.M), dual_cs.ambient, {
        k: Matrix.identity(x.field, dual_cs.ambient.dim(k)).select_columns(top_sel[k])
        for k in dual.at(dual.M).dims
    })
    to_dual = jr.compose(fr)
    mu = canonical_map(ax, ax)
    left = tensor_map(ChainMap.identity(ax), to_dual)
    full = mu.compose(left)
    return _restricted_map(day_cs, ends_cs, full)


def is_dualizable_filtered(x: Sequence) -> bool:
    """Whether the canonical map ``X ⊗ Hom(X, 1) -> Hom(X, X)`` is a graded equivalence."""
    return is_graded_equivalence(filtered_canonical_map(x))
