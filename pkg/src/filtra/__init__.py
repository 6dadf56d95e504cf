"""Exact computations with filtered chain complexes over Q and F_p."""

from __future__ import annotations

from .chain import ChainComplex, ChainMap, cone, homology, betti, is_quasi_iso, quasi_isomorphic
from .errors import (
    ContainmentViolation,
    FieldMismatch,
    FiltraError,
    InvalidAlgebra,
    InvariantViolation,
    NotBoundedBelow,
    NotMonic,
)
from .exactlin import GF, QQ, Field, Matrix
from .filtalg import FilteredAlgebra, GradedAlgebra, diff_ops_example, gr_algebra, validate_algebra
from .graded import GradedMap, GradedObject, graded_hom, graded_tensor
from .monoidal import (
    completed_tensor,
    day_tensor,
    internal_hom_fil,
    is_dualizable_filtered,
    sequence_reflector,
)
from .sequence import (
    Sequence,
    SequenceMap,
    completion,
    constant_sequence,
    gr,
    is_complete,
    is_graded_equivalence,
    monic_form,
    step_sequence,
)
from .specseq import abutment, classical_pages, pages

__all__ = [
    "ChainComplex",
    "ChainMap",
    "ContainmentViolation",
    "Field",
    "FieldMismatch",
    "FilteredAlgebra",
    "FiltraError",
    "GF",
    "GradedAlgebra",
    "GradedMap",
    "GradedObject",
    "InvalidAlgebra",
    "InvariantViolation",
    "Matrix",
    "NotBoundedBelow",
    "NotMonic",
    "QQ",
    "Sequence",
    "SequenceMap",
    "abutment",
    "betti",
    "classical_pages",
    "completed_tensor",
    "completion",
    "cone",
    "constant_sequence",
    "day_tensor",
    "diff_ops_example",
    "gr",
    "gr_algebra",
    "graded_hom",
    "graded_tensor",
    "homology",
    "internal_hom_fil",
    "is_complete",
    "is_dualizable_filtered",
    "is_graded_equivalence",
    "is_quasi_iso",
    "monic_form",
    "pages",
    "quasi_isomorphic",
    "sequence_reflector",
    "step_sequence",
    "validate_algebra",
]
