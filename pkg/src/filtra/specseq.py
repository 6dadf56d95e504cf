"""The spectral sequence of a sequence.

With ``C(i, j) = cone(X(i) -> X(j))`` and ``n = p + q``::

    E_r^{p,q} = im( H_n C(p-r, p) -> H_n C(p-1, p+r-1) )

The differential ``d_r: E_r^{p,q} -> E_r^{p-r,q+r-1}`` is the connecting map
of the cone triple ``(p-r-1, p-1, p+r-1)``: the chain map
``C(p-1, p+r-1) -> C(p-r-1, p-1)[1]``, ``(a, c) -> -(0, a)``. Its codomain is
exactly the cone in which the target cell is presented, so no lifts are needed.

``classical_pages`` is the textbook cycle/boundary construction for monic
sequences and serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .chain import ChainComplex, ChainMap, cone, homology, homology_map
from .errors import NotBoundedBelow, NotMonic
from .exactlin import (
    Field,
    Matrix,
    Subquotient,
    preimage,
    quotient_presentation,
    rank,
)
from .graded import GradedObject
from .sequence import Sequence, is_monic

__all__ = [
    "SpectralSequencePage",
    "pages",
    "classical_pages",
    "abutment",
    "page_table",
]


def _empty(field: Field) -> Subquotient:
    z = Matrix.zeros(field, 0, 0)
    return Subquotient(0, z, z, z, z)


@dataclass(frozen=True, eq=False)
class SpectralSequencePage:
    """Page ``E_r``: cells ``grid[(p, q)]`` and differentials ``d[(p, q)]``.

    ``d[(p, q)]`` is the matrix of ``d_r`` out of cell ``(p, q)``; it is present
    only when both ends are nonzero.
    """

    r: int
    grid: dict
    d: dict = dc_field(default_factory=dict)

    def dim(self, p: int, q: int) -> int:
        cell = self.grid.get((p, q))
        return cell.dim if cell is not None else 0

    def d_rank(self, p: int, q: int) -> int:
        m = self.d.get((p, q))
        return rank(m) if m is not None else 0

    def dims(self) -> dict:
        """Nonzero cell dimensions."""
        return {pq: c.dim for pq, c in self.grid.items() if c.dim}

    def d_ranks(self) -> dict:
        """Nonzero differential ranks."""
        out = {}
        for pq, m in self.d.items():
            r = rank(m)
            if r:
                out[pq] = r
        return out

    def summary(self) -> tuple:
        return self.r, self.dims(), self.d_ranks()


def _degree_range(x: Sequence) -> tuple[int, int] | None:
    lo = [c.lo for c in x.levels if not c.is_zero]
    if not lo:
        return None
    hi = [c.hi for c in x.levels if not c.is_zero]
    # cones reach one degree above the top of the levels
    return min(lo), max(hi) + 1


class _Cones:
    """Cache of ``C(i, j)``, its homology and structure maps, indices clamped to the window."""

    def __init__(self, x: Sequence):
        self.x = x
        self._cones: dict = {}
        self._homology: dict = {}
        self._maps: dict = {}

    def key(self, i: int, j: int) -> tuple[int, int]:
        x = self.x
        return min(max(i, x.N), x.M), min(max(j, x.N), x.M)

    def structure(self, i: int, j: int) -> ChainMap:
        k = self.key(i, j)
        f = self._maps.get(k)
        if f is None:
            f = self._maps[k] = self.x.composite(*k)
        return f

    def cone(self, i: int, j: int) -> ChainComplex:
        k = self.key(i, j)
        c = self._cones.get(k)
        if c is None:
            c = self._cones[k] = cone(self.structure(*k)).cone
        return c

    def homology(self, i: int, j: int, n: int) -> Subquotient:
        k = self.key(i, j) + (n,)
        h = self._homology.get(k)
        if h is None:
            h = self._homology[k] = homology(self.cone(i, j), n)
        return h


def _cell(cones: _Cones, p: int, r: int, n: int) -> Subquotient:
    x = cones.x
    field = x.field
    if p <= x.N or p - 1 >= x.M:
        return _empty(field)
    src = cones.homology(p - r, p, n)
    if src.dim == 0:
        return _empty(field)
    # C(p-r, p) -> C(p-1, p+r-1) is (u, v) on the two cone summands
    u = cones.structure(p - r, p - 1).at(n - 1)
    v = cones.structure(p, p + r - 1).at(n)
    image = Matrix.block_diag(field, [u, v]) @ src.basis
    tgt_cone = cones.cone(p - 1, p + r - 1)
    boundaries = tgt_cone.d(n + 1)
    gens = Matrix.hstack(field, tgt_cone.dim(n), [boundaries, image])
    return quotient_presentation(tgt_cone.dim(n), gens, boundaries, check=False)


def _connecting(cones: _Cones, p: int, r: int, n: int) -> Matrix:
    """``(a, c) -> -(0, a)`` from ``C(p-1, p+r-1)_n`` to ``C(p-r-1, p-1)_{n-1}``.

    ``a`` runs over ``X(p-1)_{n-1}``, the first summand of the source and the
    second summand of the target.
    """
    x = cones.x
    field = x.field
    lo, mid = cones.key(p - r - 1, p - 1)
    _, hi = cones.key(p - 1, p + r - 1)
    a_dim = x.at(mid).dim(n - 1)
    return Matrix.block(
        field,
        [x.at(lo).dim(n - 2), a_dim],
        [a_dim, x.at(hi).dim(n)],
        {(1, 0): Matrix.identity(field, a_dim).scale(-1)},
    )


def pages(x: Sequence, r_max: int) -> list[SpectralSequencePage]:
    """Pages ``E_1 .. E_{r_max}`` on the grid ``p ∈ [N - r_max, M + r_max]``.

    Total degrees cover the homological support of all cones. Cells outside
    ``N < p <= M`` vanish because the cones involved are cones of identities.
    """
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    cones = _Cones(x)
    degs = _degree_range(x)
    out = []
    p_range = range(x.N - r_max, x.M + r_max + 1)
    for r in range(1, r_max + 1):
        grid = {}
        for p in p_range:
            if degs is None:
                continue
            for n in range(degs[0], degs[1] + 1):
                grid[(p, n - p)] = _cell(cones, p, r, n)
        d = {}
        for (p, q), cell in grid.items():
            if not cell.dim:
                continue
            tgt = grid.get((p - r, q + r - 1))
            if tgt is None or not tgt.dim:
                continue
            delta = _connecting(cones, p, r, p + q)
            d[(p, q)] = tgt.project @ delta @ cell.basis
        out.append(SpectralSequencePage(r, grid, d))
    return out


def classical_pages(x: Sequence, r_max: int) -> list[SpectralSequencePage]:
    """Textbook pages of the filtration ``F_p = im(X(p) -> X(∞))``.

    ``Z_r^p = F_p ∩ d^{-1} F_{p-r}`` and
    ``E_r^p = Z_r^p / (Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1})`` with ``d_r`` induced by ``d``.
    """
    if not is_monic(x):
        raise NotMonic("classical pages need injective steps")
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    top = x.at(x.M)
    field = x.field
    filt = {}

    def F(p: int, n: int) -> Matrix:
        p = min(max(p, x.N), x.M)
        key = (p, n)
        if key not in filt:
            filt[key] = x.composite(p, x.M).at(n)
        return filt[key]

    def Z(r: int, p: int, n: int) -> Matrix:
        fp = F(p, n)
        if fp.cols == 0:
            return fp
        coeff = preimage(top.d(n) @ fp, F(p - r, n - 1))
        return fp @ coeff

    degs = _degree_range(x)
    out = []
    for r in range(1, r_max + 1):
        grid = {}
        for p in range(x.N - r_max, x.M + r_max + 1):
            if degs is None:
                continue
            for n in range(degs[0], degs[1] + 1):
                dim = top.dim(n)
                if p <= x.N or p - 1 >= x.M or dim == 0:
                    grid[(p, n - p)] = _empty(field)
                    continue
                z = Z(r, p, n)
                rel = Matrix.hstack(field, dim, [Z(r - 1, p - 1, n), top.d(n + 1) @ Z(r - 1, p + r - 1, n + 1)])
                grid[(p, n - p)] = quotient_presentation(dim, z, rel, check=False)
        d = {}
        for (p, q), cell in grid.items():
            if not cell.dim:
                continue
            tgt = grid.get((p - r, q + r - 1))
            if tgt is None or not tgt.dim:
                continue
            d[(p, q)] = tgt.project @ top.d(p + q) @ cell.basis
        out.append(SpectralSequencePage(r, grid, d))
    return out


def abutment(x: Sequence) -> tuple[GradedObject, bool]:
    """Associated graded of ``F_p H(X(∞)) = im(H X(p) -> H X(∞))``, and agreement flag.

    The flag reports whether page ``E_{M-N+1}``, where the spectral sequence of
    a bounded filtration has stabilized, matches it dimensionwise in every cell.
    """
    if not is_monic(x):
        raise NotMonic("abutment needs injective steps")
    if not x.at(x.N).is_zero:
        raise NotBoundedBelow("X(N) must be the zero complex")
    top = x.at(x.M)
    field = x.field
    comps: dict[int, dict[int, int]] = {}
    for n in top.dims:
        prev = 0
        for p in range(x.N + 1, x.M + 1):
            img = homology_map(x.composite(p, x.M), n)
            cur = rank(img)
            if cur > prev:
                comps.setdefault(p, {})[n] = cur - prev
            prev = cur
    graded = GradedObject(field, {p: ChainComplex(field, dims, {}) for p, dims in comps.items()})
    stable = pages(x, x.M - x.N + 1)[-1]
    expected = {(p, n - p): v for p, dims in comps.items() for n, v in dims.items()}
    return graded, stable.dims() == expected


def page_table(page: SpectralSequencePage, width: int | None = None) -> str:
    """Text table of a page: rows ``q`` (descending), columns ``p``, then the nonzero arrows.

    Only the bounding box of the nonzero cells is drawn. Lines longer than
    ``width`` are cut.
    """
    nonzero = page.dims()
    if not nonzero:
        return f"E_{page.r}: all cells zero\n"
    ps = range(min(p for p, _ in nonzero), max(p for p, _ in nonzero) + 1)
    qs = range(max(q for _, q in nonzero), min(q for _, q in nonzero) - 1, -1)
    cell_w = max(3, max(len(str(p)) for p in ps) + 1, max(len(str(v)) for v in nonzero.values()) + 1)
    lines = [f"E_{page.r}", "q\\p".rjust(5) + "".join(str(p).rjust(cell_w) for p in ps)]
    for q in qs:
        lines.append(str(q).rjust(5) + "".join(str(nonzero.get((p, q), ".")).rjust(cell_w) for p in ps))
    for (p, q), rk in sorted(page.d_ranks().items()):
        lines.append(f"  d_{page.r}: ({p},{q}) -> ({p - page.r},{q + page.r - 1}) rank {rk}")
    if width is not None:
        lines = [line[:width] for line in lines]
    return "\n".join(lines) + "\n"
