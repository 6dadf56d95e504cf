"""Finite-support graded objects: families of chain complexes indexed by Z."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .chain import (
    ChainComplex,
    ChainMap,
    betti,
    canonical_map,
    direct_sum,
    direct_sum_map,
    hom_complex,
    is_quasi_iso,
    tensor,
    _same_field,
)
from .errors import FieldMismatch, InvariantViolation
from .exactlin import Field

__all__ = [
    "GradedObject",
    "GradedMap",
    "graded_tensor",
    "graded_hom",
    "reflector_graded",
    "graded_canonical_map",
    "is_dualizable_graded",
    "graded_quasi_isomorphic",
]


@dataclass(frozen=True, eq=False)
class GradedObject:
    """Components ``comps[n]``; zero complexes are dropped."""

    field: Field
    comps: Mapping[int, ChainComplex]

    def __post_init__(self):
        comps = {}
        for n, c in sorted(self.comps.items()):
            if c.field != self.field:
                raise FieldMismatch(f"component {n} over {c.field}, object over {self.field}")
            if not c.is_zero:
                comps[int(n)] = c
        object.__setattr__(self, "comps", comps)

    def at(self, n: int) -> ChainComplex:
        return self.comps.get(n) or ChainComplex.zero(self.field)

    @property
    def support(self) -> list[int]:
        return list(self.comps)

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def betti(self) -> dict[int, dict[int, int]]:
        """Degree -> nonzero homology dimensions; acyclic components are omitted."""
        out = {}
        for n, c in self.comps.items():
            b = betti(c)
            if b:
                out[n] = b
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedObject):
            return NotImplemented
        return self.field == other.field and self.comps == other.comps

    def __repr__(self):
        return f"GradedObject<{self.field} {{{', '.join(f'{n}: {c.dims}' for n, c in self.comps.items())}}}>"


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedObject
    target: GradedObject
    comps: Mapping[int, ChainMap]

    def __post_init__(self):
        _same_field(self.source.field, self.target.field)
        comps = {}
        for n, f in self.comps.items():
            if f.source != self.source.at(n) or f.target != self.target.at(n):
                raise InvariantViolation(f"component {n} has the wrong source or target")
            comps[int(n)] = f
        object.__setattr__(self, "comps", dict(sorted(comps.items())))

    def at(self, n: int) -> ChainMap:
        f = self.comps.get(n)
        if f is None:
            return ChainMap.zero(self.source.at(n), self.target.at(n))
        return f

    def is_quasi_iso(self) -> bool:
        support = set(self.source.comps) | set(self.target.comps)
        return all(is_quasi_iso(self.at(n)) for n in support)


def graded_tensor(x: GradedObject, y: GradedObject) -> GradedObject:
    """``(x ⊗ y)_n = ⊕_{p+q=n} x_p ⊗ y_q``, blocks ascending in ``p``."""
    field = _same_field(x.field, y.field)
    degs = sorted({p + q for p in x.comps for q in y.comps})
    return GradedObject(field, {
        n: direct_sum(*(tensor(x.comps[p], y.comps[n - p]) for p in x.comps if n - p in y.comps))
        for n in degs
    })


def graded_hom(x: GradedObject, y: GradedObject) -> GradedObject:
    """``hom(x, y)_n = ∏_m Hom(x_m, y_{m+n})``, blocks ascending in ``m``."""
    field = _same_field(x.field, y.field)
    degs = sorted({q - p for p in x.comps for q in y.comps})
    return GradedObject(field, {
        n: direct_sum(*(hom_complex(x.comps[m], y.comps[m + n]) for m in x.comps if m + n in y.comps))
        for n in degs
    })


def reflector_graded(x: GradedObject, d: ChainComplex) -> GradedObject:
    """Degree ``n`` component is ``Hom(x_{-n}, d)``."""
    field = _same_field(x.field, d.field)
    return GradedObject(field, {-n: hom_complex(c, d) for n, c in x.comps.items()})


def graded_canonical_map(x: GradedObject) -> GradedMap:
    """``x ⊗ R(x) -> hom(x, x)`` with ``R`` the reflector into the unit."""
    unit = ChainComplex.unit(x.field)
    dual = reflector_graded(x, unit)
    src = graded_tensor(x, dual)
    tgt = graded_hom(x, x)
    comps = {}
    for n in src.comps:
        # summand p of the source maps onto summand m = p - n of the target
        parts = [canonical_map(x.comps[p], x.comps[p - n]) for p in x.comps if p - n in x.comps]
        comps[n] = direct_sum_map(*parts)
    return GradedMap(src, tgt, comps)


def is_dualizable_graded(x: GradedObject) -> bool:
    """Whether the canonical map ``x ⊗ R(x) -> hom(x, x)`` is a degreewise quasi-isomorphism."""
    return graded_canonical_map(x).is_quasi_iso()


def graded_quasi_isomorphic(x: GradedObject, y: GradedObject) -> bool:
    _same_field(x.field, y.field)
    return x.betti() == y.betti()
