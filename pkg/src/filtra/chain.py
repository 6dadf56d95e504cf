"""Finite chain complexes over a field.

Grading is homological: ``d_k: C_k -> C_{k-1}``. A complex stores only its
nonzero degrees; every accessor treats missing degrees as zero.

Sign conventions:

* cone: ``Cone_k = A_{k-1} ⊕ B_k`` with ``d(a, b) = (-d a, f a + d b)``
* shift: ``(C[s])_k = C_{k-s}`` with differential ``(-1)^s d``
* tensor: ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``, blocks in ascending degree of
  the left factor, Kronecker order inside a block
* hom: ``Hom(a, b)_n = ∏_k Hom(a_k, b_{k+n})``, blocks ascending in ``k``,
  each block vectorized row-major, ``d φ = d φ - (-1)^n φ d``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import FieldMismatch, InvariantViolation
from .exactlin import (
    Field,
    Matrix,
    Subquotient,
    kernel_basis,
    quotient_presentation,
    rank,
    solve,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "ConeResult",
    "homology",
    "homology_map",
    "betti",
    "is_acyclic",
    "quasi_isomorphic",
    "cone",
    "cone_map",
    "is_quasi_iso",
    "tensor",
    "tensor_map",
    "hom_complex",
    "precompose",
    "postcompose",
    "truncate",
    "shift",
    "shift_map",
    "direct_sum",
    "direct_sum_map",
    "cylinder",
    "subcomplex",
    "quotient_complex",
    "canonical_map",
    "associator",
    "braiding",
    "coordinate_subcomplex",
    "selection_matrix",
]


def _same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"{first} vs {f}")
    return first


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """A bounded complex ``(C_k, d_k)`` of finite-dimensional spaces.

    Args:
        field: coefficient field.
        dims: degree -> dimension; zero entries are dropped.
        diff: degree ``k`` -> matrix of ``d_k`` with shape ``dims[k-1] x dims[k]``.
            Missing entries are zero.
    """

    field: Field
    dims: Mapping[int, int]
    diff: Mapping[int, Matrix]

    def __post_init__(self):
        dims = {int(k): int(v) for k, v in sorted(self.dims.items()) if v}
        if any(v < 0 for v in dims.values()):
            raise InvariantViolation("negative dimension")
        diff = {}
        for k, m in self.diff.items():
            k = int(k)
            if m.field != self.field:
                raise FieldMismatch(f"differential d_{k} over {m.field}, complex over {self.field}")
            want = (dims.get(k - 1, 0), dims.get(k, 0))
            if m.shape != want:
                raise InvariantViolation(f"d_{k} has shape {m.shape}, expected {want}")
            if want[0] and want[1]:
                diff[k] = m
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diff", dict(sorted(diff.items())))
        for k in self.diff:
            if k - 1 in self.diff and not (self.diff[k - 1] @ self.diff[k]).is_zero():
                raise InvariantViolation(f"d_{k-1} d_{k} != 0")

    # constructors

    @classmethod
    def zero(cls, field: Field) -> ChainComplex:
        return cls(field, {}, {})

    @classmethod
    def unit(cls, field: Field) -> ChainComplex:
        """The field concentrated in degree 0."""
        return cls(field, {0: 1}, {})

    @classmethod
    def concentrated(cls, field: Field, degree: int, dim: int) -> ChainComplex:
        return cls(field, {degree: dim}, {})

    @classmethod
    def _trusted(cls, field: Field, dims: dict, diff: dict) -> ChainComplex:
        # skips d∘d validation; callers guarantee it by construction
        obj = object.__new__(cls)
        dims = {k: v for k, v in sorted(dims.items()) if v}
        diff = {
            k: m for k, m in sorted(diff.items())
            if dims.get(k, 0) and dims.get(k - 1, 0)
        }
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "dims", dims)
        object.__setattr__(obj, "diff", diff)
        return obj

    # access

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d(self, k: int) -> Matrix:
        m = self.diff.get(k)
        if m is None:
            return Matrix.zeros(self.field, self.dim(k - 1), self.dim(k))
        return m

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    @property
    def is_zero(self) -> bool:
        return not self.dims

    @property
    def lo(self) -> int | None:
        return min(self.dims) if self.dims else None

    @property
    def hi(self) -> int | None:
        return max(self.dims) if self.dims else None

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.field == other.field
            and self.dims == other.dims
            and all(self.d(k) == other.d(k) for k in set(self.diff) | set(other.diff))
        )

    def __repr__(self):
        return f"ChainComplex<{self.field} dims={self.dims}>"


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Degreewise matrices ``comp[k]: source_k -> target_k`` commuting with ``d``."""

    source: ChainComplex
    target: ChainComplex
    comp: Mapping[int, Matrix]

    def __post_init__(self):
        _same_field(self.source.field, self.target.field)
        comp = {}
        for k, m in self.comp.items():
            k = int(k)
            want = (self.target.dim(k), self.source.dim(k))
            if m.shape != want:
                raise InvariantViolation(f"component {k} has shape {m.shape}, expected {want}")
            if want[0] and want[1]:
                comp[k] = m
        object.__setattr__(self, "comp", dict(sorted(comp.items())))
        for k in set(self.source.dims) | set(self.target.dims):
            lhs = self.target.d(k) @ self.at(k)
            rhs = self.at(k - 1) @ self.source.d(k)
            if lhs != rhs:
                raise InvariantViolation(f"chain map does not commute with d in degree {k}")

    @classmethod
    def _trusted(cls, source: ChainComplex, target: ChainComplex, comp: dict) -> ChainMap:
        obj = object.__new__(cls)
        object.__setattr__(obj, "source", source)
        object.__setattr__(obj, "target", target)
        object.__setattr__(obj, "comp", {
            k: m for k, m in sorted(comp.items()) if source.dim(k) and target.dim(k)
        })
        return obj

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls._trusted(c, c, {k: Matrix.identity(c.field, n) for k, n in c.dims.items()})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> ChainMap:
        return cls._trusted(source, target, {})

    @property
    def field(self) -> Field:
        return self.source.field

    def at(self, k: int) -> Matrix:
        m = self.comp.get(k)
        if m is None:
            return Matrix.zeros(self.field, self.target.dim(k), self.source.dim(k))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.source.dims) | set(self.target.dims))

    def compose(self, first: ChainMap) -> ChainMap:
        """``self ∘ first``."""
        if first.target != self.source:
            raise InvariantViolation("composition of chain maps with mismatched middle complex")
        return ChainMap._trusted(
            first.source, self.target,
            {k: self.at(k) @ first.at(k) for k in first.source.dims if self.target.dim(k)},
        )

    def __add__(self, other: ChainMap) -> ChainMap:
        return ChainMap._trusted(
            self.source, self.target, {k: self.at(k) + other.at(k) for k in self.degrees()}
        )

    def __neg__(self) -> ChainMap:
        return ChainMap._trusted(self.source, self.target, {k: -m for k, m in self.comp.items()})

    def __sub__(self, other: ChainMap) -> ChainMap:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and all(self.at(k) == other.at(k) for k in self.degrees())
        )

    def is_injective(self) -> bool:
        return all(rank(self.at(k)) == n for k, n in self.source.dims.items())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comp.values())


@dataclass(frozen=True)
class ConeResult:
    cone: ChainComplex
    include: ChainMap
    project: ChainMap


# homology


def homology(c: ChainComplex, k: int) -> Subquotient:
    """``ker d_k / im d_{k+1}`` presented inside ``C_k``."""
    cycles = kernel_basis(c.d(k))
    boundaries = c.d(k + 1)
    return quotient_presentation(c.dim(k), cycles, boundaries, check=False)


def homology_map(f: ChainMap, k: int) -> Matrix:
    hs = homology(f.source, k)
    ht = homology(f.target, k)
    return ht.project @ f.at(k) @ hs.basis


def betti(c: ChainComplex) -> dict[int, int]:
    """Nonzero homology dimensions by degree."""
    ranks = {k: rank(m) for k, m in c.diff.items()}
    out = {}
    for k, n in c.dims.items():
        h = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if h:
            out[k] = h
    return out


def is_acyclic(c: ChainComplex) -> bool:
    return not betti(c)


def quasi_isomorphic(a: ChainComplex, b: ChainComplex) -> bool:
    """Over a field, complexes are quasi-isomorphic iff their homology dimensions agree."""
    _same_field(a.field, b.field)
    return betti(a) == betti(b)


# cones, shifts, sums


def shift(c: ChainComplex, s: int) -> ChainComplex:
    sign = -1 if s % 2 else 1
    return ChainComplex._trusted(
        c.field,
        {k + s: n for k, n in c.dims.items()},
        {k + s: m.scale(sign) for k, m in c.diff.items()},
    )


def shift_map(f: ChainMap, s: int) -> ChainMap:
    return ChainMap._trusted(
        shift(f.source, s), shift(f.target, s), {k + s: m for k, m in f.comp.items()}
    )


def cone(f: ChainMap) -> ConeResult:
    a, b = f.source, f.target
    field = a.field
    degs = sorted({k + 1 for k in a.dims} | set(b.dims))
    dims = {k: a.dim(k - 1) + b.dim(k) for k in degs}
    diff = {}
    for k in degs:
        if dims.get(k - 1, 0) == 0:
            continue
        diff[k] = Matrix.block(
            field,
            [a.dim(k - 2), b.dim(k - 1)],
            [a.dim(k - 1), b.dim(k)],
            {(0, 0): -a.d(k - 1), (1, 0): f.at(k - 1), (1, 1): b.d(k)},
        )
    c = ChainComplex._trusted(field, dims, diff)
    include = ChainMap._trusted(b, c, {
        k: Matrix.vstack(field, b.dim(k), [Matrix.zeros(field, a.dim(k - 1), b.dim(k)),
                                          Matrix.identity(field, b.dim(k))])
        for k in b.dims
    })
    sa = shift(a, 1)
    project = ChainMap._trusted(c, sa, {
        k: Matrix.hstack(field, a.dim(k - 1), [Matrix.identity(field, a.dim(k - 1)),
                                               Matrix.zeros(field, a.dim(k - 1), b.dim(k))])
        for k in sa.dims
    })
    return ConeResult(c, include, project)


def cone_map(f: ChainMap, g: ChainMap, u: ChainMap, v: ChainMap) -> ChainMap:
    """Map ``cone(f) -> cone(g)`` induced by a square ``v f = g u``.

    Here ``f: A -> B``, ``g: A' -> B'``, ``u: A -> A'`` and ``v: B -> B'``.
    """
    for k in set(f.source.dims) | set(g.target.dims):
        if v.at(k) @ f.at(k) != g.at(k) @ u.at(k):
            raise InvariantViolation(f"square does not commute in degree {k}")
    cf, cg = cone(f).cone, cone(g).cone
    field = cf.field
    comp = {}
    for k in cf.dims:
        if not cg.dim(k):
            continue
        comp[k] = Matrix.block(
            field,
            [g.source.dim(k - 1), g.target.dim(k)],
            [f.source.dim(k - 1), f.target.dim(k)],
            {(0, 0): u.at(k - 1), (1, 1): v.at(k)},
        )
    return ChainMap._trusted(cf, cg, comp)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f).cone)


def direct_sum(*cs: ChainComplex) -> ChainComplex:
    field = _same_field(*(c.field for c in cs))
    degs = sorted(set().union(*(c.dims for c in cs)))
    dims = {k: sum(c.dim(k) for c in cs) for k in degs}
    diff = {k: Matrix.block_diag(field, [c.d(k) for c in cs]) for k in degs}
    return ChainComplex._trusted(field, dims, diff)


def direct_sum_map(*fs: ChainMap) -> ChainMap:
    src = direct_sum(*(f.source for f in fs))
    tgt = direct_sum(*(f.target for f in fs))
    field = src.field
    return ChainMap._trusted(src, tgt, {
        k: Matrix.block_diag(field, [f.at(k) for f in fs]) for k in src.dims
    })


def cylinder(g: ChainMap) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Mapping cylinder of ``g: A -> B``.

    ``Cyl_k = A_{k-1} ⊕ A_k ⊕ B_k`` with ``d(s, a, b) = (-ds, da + s, db - g s)``.
    Returns ``(cyl, inclusion of A, projection to B)``; the inclusion is
    injective, the projection ``(s, a, b) -> g a + b`` is a quasi-isomorphism,
    and projection ∘ inclusion = g.
    """
    a, b = g.source, g.target
    field = a.field
    degs = sorted({k + 1 for k in a.dims} | set(a.dims) | set(b.dims))
    sizes = {k: [a.dim(k - 1), a.dim(k), b.dim(k)] for k in degs}
    dims = {k: sum(s) for k, s in sizes.items()}
    diff = {}
    for k in degs:
        if not dims.get(k - 1, 0):
            continue
        diff[k] = Matrix.block(field, [a.dim(k - 2), a.dim(k - 1), b.dim(k - 1)], sizes[k], {
            (0, 0): -a.d(k - 1),
            (1, 0): Matrix.identity(field, a.dim(k - 1)),
            (1, 1): a.d(k),
            (2, 0): -g.at(k - 1),
            (2, 2): b.d(k),
        })
    cyl = ChainComplex._trusted(field, dims, diff)
    inc = ChainMap._trusted(a, cyl, {
        k: Matrix.block(field, sizes[k], [a.dim(k)], {(1, 0): Matrix.identity(field, a.dim(k))})
        for k in a.dims
    })
    proj = ChainMap._trusted(cyl, b, {
        k: Matrix.block(field, [b.dim(k)], sizes[k], {(0, 1): g.at(k), (0, 2): Matrix.identity(field, b.dim(k))})
        for k in b.dims if k in dims
    })
    return cyl, inc, proj


def subcomplex(c: ChainComplex, bases: Mapping[int, Matrix]) -> tuple[ChainComplex, ChainMap]:
    """Subcomplex spanned by independent columns ``bases[k]`` of each ``C_k``.

    Raises ContainmentViolation if the span is not closed under ``d``.
    """
    field = c.field
    b = {k: bases.get(k, Matrix.zeros(field, n, 0)) for k, n in c.dims.items()}
    dims = {k: m.cols for k, m in b.items()}
    diff = {}
    for k, m in b.items():
        if k - 1 in b and m.cols and b[k - 1].cols:
            diff[k] = solve(b[k - 1], c.d(k) @ m)
        elif m.cols and not (c.d(k) @ m).is_zero():
            solve(b.get(k - 1, Matrix.zeros(field, c.dim(k - 1), 0)), c.d(k) @ m)
    sub = ChainComplex._trusted(field, dims, diff)
    return sub, ChainMap._trusted(sub, c, {k: m for k, m in b.items()})


def quotient_complex(c: ChainComplex, bases: Mapping[int, Matrix]) -> tuple[ChainComplex, ChainMap]:
    """Quotient of ``c`` by the subcomplex spanned by ``bases``; returns the projection too."""
    field = c.field
    pres = {}
    for k, n in c.dims.items():
        rel = bases.get(k, Matrix.zeros(field, n, 0))
        pres[k] = quotient_presentation(n, Matrix.identity(field, n), rel, check=False)
    dims = {k: p.dim for k, p in pres.items()}
    diff = {k: pres[k - 1].project @ c.d(k) @ p.basis for k, p in pres.items() if k - 1 in pres}
    q = ChainComplex._trusted(field, dims, diff)
    return q, ChainMap._trusted(c, q, {k: p.project for k, p in pres.items()})


def truncate(c: ChainComplex, k: int, mode: str) -> tuple[ChainComplex, ChainMap]:
    """Smart truncation.

    ``mode="at-least"`` gives ``(τ_{≥k} c, inclusion)`` with ``Z_k`` in degree ``k``.
    ``mode="below"`` gives ``(τ_{<k} c, projection)`` with ``C_k / Z_k`` in degree ``k``.
    """
    field = c.field
    if mode == "at-least":
        bases = {j: Matrix.identity(field, n) for j, n in c.dims.items() if j > k}
        if c.dim(k):
            bases[k] = kernel_basis(c.d(k))
        return subcomplex(c, bases)
    if mode == "below":
        bases = {j: Matrix.identity(field, n) for j, n in c.dims.items() if j > k}
        if c.dim(k):
            bases[k] = kernel_basis(c.d(k))
        return quotient_complex(c, bases)
    raise ValueError(f"unknown truncation mode {mode!r}")


# tensor and hom


def _tensor_blocks(a: ChainComplex, b: ChainComplex, n: int) -> list[tuple[int, int, int]]:
    """``(i, j, offset)`` for the blocks ``a_i ⊗ b_j`` of degree ``n``."""
    out, off = [], 0
    for i in a.dims:
        j = n - i
        if b.dim(j):
            out.append((i, j, off))
            off += a.dim(i) * b.dim(j)
    return out


def _tensor_degrees(a: ChainComplex, b: ChainComplex) -> list[int]:
    return sorted({i + j for i in a.dims for j in b.dims})


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    field = _same_field(a.field, b.field)
    degs = _tensor_degrees(a, b)
    blocks = {n: _tensor_blocks(a, b, n) for n in degs}
    dims = {n: sum(a.dim(i) * b.dim(j) for i, j, _ in bl) for n, bl in blocks.items()}
    diff = {}
    for n in degs:
        if n - 1 not in blocks:
            continue
        rows = blocks[n - 1]
        index = {(i, j): t for t, (i, j, _) in enumerate(rows)}
        parts = {}
        for s, (i, j, _) in enumerate(blocks[n]):
            if (i - 1, j) in index and a.dim(i - 1):
                parts[(index[(i - 1, j)], s)] = a.d(i).kron(Matrix.identity(field, b.dim(j)))
            if (i, j - 1) in index and b.dim(j - 1):
                m = Matrix.identity(field, a.dim(i)).kron(b.d(j))
                parts[(index[(i, j - 1)], s)] = -m if i % 2 else m
        diff[n] = Matrix.block(
            field,
            [a.dim(i) * b.dim(j) for i, j, _ in rows],
            [a.dim(i) * b.dim(j) for i, j, _ in blocks[n]],
            parts,
        )
    return ChainComplex._trusted(field, dims, diff)


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    field = src.field
    comp = {}
    for n in src.dims:
        if not tgt.dim(n):
            continue
        rows = _tensor_blocks(f.target, g.target, n)
        cols = _tensor_blocks(f.source, g.source, n)
        ridx = {(i, j): t for t, (i, j, _) in enumerate(rows)}
        parts = {}
        for s, (i, j, _) in enumerate(cols):
            if (i, j) in ridx:
                parts[(ridx[(i, j)], s)] = f.at(i).kron(g.at(j))
        comp[n] = Matrix.block(
            field,
            [f.target.dim(i) * g.target.dim(j) for i, j, _ in rows],
            [f.source.dim(i) * g.source.dim(j) for i, j, _ in cols],
            parts,
        )
    return ChainMap._trusted(src, tgt, comp)


def _hom_blocks(a: ChainComplex, b: ChainComplex, n: int) -> list[int]:
    return [k for k in a.dims if b.dim(k + n)]


def _hom_degrees(a: ChainComplex, b: ChainComplex) -> list[int]:
    return sorted({j - i for i in a.dims for j in b.dims})


def hom_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    field = _same_field(a.field, b.field)
    degs = _hom_degrees(a, b)
    blocks = {n: _hom_blocks(a, b, n) for n in degs}
    dims = {n: sum(a.dim(k) * b.dim(k + n) for k in ks) for n, ks in blocks.items()}
    diff = {}
    for n in degs:
        if n - 1 not in blocks:
            continue
        rows = blocks[n - 1]
        ridx = {k: t for t, k in enumerate(rows)}
        sign = -1 if n % 2 == 0 else 1  # coefficient of φ∘d is -(-1)^n
        parts = {}
        for s, k in enumerate(blocks[n]):
            if k in ridx:
                parts[(ridx[k], s)] = b.d(k + n).kron(Matrix.identity(field, a.dim(k)))
            if k + 1 in ridx:
                m = Matrix.identity(field, b.dim(k + n)).kron(a.d(k + 1).T)
                parts[(ridx[k + 1], s)] = m.scale(sign)
        diff[n] = Matrix.block(
            field,
            [a.dim(k) * b.dim(k + n - 1) for k in rows],
            [a.dim(k) * b.dim(k + n) for k in blocks[n]],
            parts,
        )
    return ChainComplex._trusted(field, dims, diff)


def _hom_induced(
    src: ChainComplex, tgt: ChainComplex,
    sa: ChainComplex, sb: ChainComplex, ta: ChainComplex, tb: ChainComplex,
    block: Callable[[int, int], Matrix],
) -> ChainMap:
    field = src.field
    comp = {}
    for n in src.dims:
        if not tgt.dim(n):
            continue
        cols = _hom_blocks(sa, sb, n)
        rows = _hom_blocks(ta, tb, n)
        ridx = {k: t for t, k in enumerate(rows)}
        parts = {(ridx[k], s): block(k, n) for s, k in enumerate(cols) if k in ridx}
        comp[n] = Matrix.block(
            field,
            [ta.dim(k) * tb.dim(k + n) for k in rows],
            [sa.dim(k) * sb.dim(k + n) for k in cols],
            parts,
        )
    return ChainMap._trusted(src, tgt, comp)


def precompose(f: ChainMap, b: ChainComplex) -> ChainMap:
    """``Hom(f, b): Hom(A, b) -> Hom(A', b)``, ``φ -> φ ∘ f`` for ``f: A' -> A``."""
    src = hom_complex(f.target, b)
    tgt = hom_complex(f.source, b)
    field = src.field
    return _hom_induced(
        src, tgt, f.target, b, f.source, b,
        lambda k, n: Matrix.identity(field, b.dim(k + n)).kron(f.at(k).T),
    )


def postcompose(g: ChainMap, a: ChainComplex) -> ChainMap:
    """``Hom(a, g): Hom(a, B) -> Hom(a, B')``, ``φ -> g ∘ φ``."""
    src = hom_complex(a, g.source)
    tgt = hom_complex(a, g.target)
    field = src.field
    return _hom_induced(
        src, tgt, a, g.source, a, g.target,
        lambda k, n: g.at(k + n).kron(Matrix.identity(field, a.dim(k))),
    )


def canonical_map(a: ChainComplex, b: ChainComplex) -> ChainMap:
    """``a ⊗ Hom(b, 1) -> Hom(b, a)``, ``x ⊗ φ -> (y -> φ(y) x)``.

    In the chosen coordinates the map is the identity on matching blocks.
    """
    field = _same_field(a.field, b.field)
    dual = hom_complex(b, ChainComplex.unit(field))
    src = tensor(a, dual)
    tgt = hom_complex(b, a)
    comp = {}
    for n in src.dims:
        cols = _tensor_blocks(a, dual, n)
        rows = _hom_blocks(b, a, n)
        ridx = {k: t for t, k in enumerate(rows)}
        parts = {}
        for s, (i, _j, _) in enumerate(cols):
            k = i - n
            parts[(ridx[k], s)] = Matrix.identity(field, a.dim(i) * b.dim(k))
        comp[n] = Matrix.block(
            field,
            [b.dim(k) * a.dim(k + n) for k in rows],
            [a.dim(i) * dual.dim(j) for i, j, _ in cols],
            parts,
        )
    return ChainMap(src, tgt, comp)


def _tensor_index(a: ChainComplex, b: ChainComplex) -> dict[tuple[int, int, int, int], tuple[int, int]]:
    """Basis element ``(i, x, j, y)`` of ``a ⊗ b`` -> ``(degree, position)``."""
    out = {}
    for n in _tensor_degrees(a, b):
        for i, j, off in _tensor_blocks(a, b, n):
            bj = b.dim(j)
            for x in range(a.dim(i)):
                for y in range(bj):
                    out[(i, x, j, y)] = (n, off + x * bj + y)
    return out


def _permutation_map(
    src: ChainComplex, tgt: ChainComplex, pairs: Iterable[tuple[int, int, int, int]]
) -> ChainMap:
    """Signed permutation from ``(degree, src_pos, tgt_pos, sign)`` entries."""
    field = src.field
    data: dict[int, list[list]] = {
        n: [[field.zero] * src.dim(n) for _ in range(tgt.dim(n))] for n in src.dims
    }
    for n, s, t, sign in pairs:
        data[n][t][s] = field(sign)
    return ChainMap(src, tgt, {
        n: Matrix._raw(field, tgt.dim(n), src.dim(n), rows) for n, rows in data.items()
    })


def associator(a: ChainComplex, b: ChainComplex, c: ChainComplex) -> ChainMap:
    """``(a ⊗ b) ⊗ c -> a ⊗ (b ⊗ c)``, no signs."""
    ab, bc = tensor(a, b), tensor(b, c)
    src, tgt = tensor(ab, c), tensor(a, bc)
    ab_idx, bc_idx = _tensor_index(a, b), _tensor_index(b, c)
    left, right = _tensor_index(ab, c), _tensor_index(a, bc)
    pairs = []
    for (i, x, j, y), (s, u) in ab_idx.items():
        for l in c.dims:
            for z in range(c.dim(l)):
                n, sp = left[(s, u, l, z)]
                t, v = bc_idx[(j, y, l, z)]
                _, tp = right[(i, x, t, v)]
                pairs.append((n, sp, tp, 1))
    return _permutation_map(src, tgt, pairs)


def braiding(a: ChainComplex, b: ChainComplex) -> ChainMap:
    """``a ⊗ b -> b ⊗ a``, ``x ⊗ y -> (-1)^{|x||y|} y ⊗ x``."""
    src, tgt = tensor(a, b), tensor(b, a)
    ab, ba = _tensor_index(a, b), _tensor_index(b, a)
    pairs = []
    for (i, x, j, y), (n, sp) in ab.items():
        _, tp = ba[(j, y, i, x)]
        pairs.append((n, sp, tp, -1 if (i * j) % 2 else 1))
    return _permutation_map(src, tgt, pairs)


def coordinate_subcomplex(
    c: ChainComplex, selection: Mapping[int, list[int]]
) -> tuple[ChainComplex, ChainMap]:
    """Subcomplex spanned by standard basis vectors ``selection[k]`` of ``C_k``.

    The caller guarantees closure under ``d``; this is not rechecked.
    """
    field = c.field
    sel = {k: list(selection.get(k, [])) for k in c.dims}
    dims = {k: len(s) for k, s in sel.items()}
    diff = {
        k: c.d(k).select_rows(sel[k - 1]).select_columns(s)
        for k, s in sel.items() if s and sel.get(k - 1)
    }
    sub = ChainComplex._trusted(field, dims, diff)
    inc = {}
    for k, s in sel.items():
        if s:
            inc[k] = Matrix.identity(field, c.dim(k)).select_columns(s)
    return sub, ChainMap._trusted(sub, c, inc)


def selection_matrix(field: Field, big: list[int], small: list[int]) -> Matrix:
    """Inclusion of the coordinates ``small`` into ``big`` (``small ⊆ big``)."""
    pos = {v: i for i, v in enumerate(big)}
    rows = [[field.zero] * len(small) for _ in big]
    for j, v in enumerate(small):
        rows[pos[v]][j] = field.one
    return Matrix._raw(field, len(big), len(small), rows)
