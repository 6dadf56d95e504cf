"""Exact dense linear algebra over Q and prime fields.

Matrices are immutable, dense and row-major. All elimination is Gauss-Jordan
with the first nonzero entry of each column (top to bottom) taken as pivot, so
every basis returned here is a deterministic function of its input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _rational = Fraction

from .errors import ContainmentViolation, FieldMismatch

__all__ = [
    "Field",
    "QQ",
    "GF",
    "Matrix",
    "Subquotient",
    "rank",
    "kernel_basis",
    "pivot_columns",
    "column_basis",
    "solve",
    "inverse",
    "is_injective",
    "span_contains",
    "intersection",
    "preimage",
    "quotient_presentation",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``Field("rational")`` or ``Field("prime", p)``."""

    kind: str = "rational"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "prime":
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def zero(self):
        return 0 if self.is_prime else _rational(0)

    @property
    def one(self):
        return 1 if self.is_prime else _rational(1)

    def __call__(self, value):
        """Coerce an int, Fraction, scalar or string into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.is_prime:
            if isinstance(value, int):
                return value % self.p
            q = Fraction(value)
            den = q.denominator % self.p
            if den == 0:
                raise ValueError(f"{value} has no image in F_{self.p}")
            return q.numerator * pow(den, -1, self.p) % self.p
        return _rational(value)

    def inv(self, a):
        if self.is_prime:
            return pow(a, -1, self.p)
        return 1 / a

    def parse(self, text: str):
        text = text.strip()
        if self.is_prime:
            value = int(text)
            if not 0 <= value < self.p:
                raise ValueError(f"{text!r} is not a reduced residue mod {self.p}")
            return value
        if "/" in text:
            num, den = text.split("/")
            if int(den) <= 0:
                raise ValueError(f"bad denominator in {text!r}")
            return _rational(int(num), int(den))
        return _rational(int(text))

    def format(self, a) -> str:
        if self.is_prime:
            return str(int(a) % self.p)
        q = _rational(a)
        if q.denominator == 1:
            return str(int(q.numerator))
        return f"{int(q.numerator)}/{int(q.denominator)}"

    def __str__(self):
        return "Q" if not self.is_prime else f"F_{self.p}"


QQ = Field("rational")


def GF(p: int) -> Field:
    return Field("prime", p)


@dataclass(frozen=True)
class Matrix:
    """Dense ``rows × cols`` matrix with row-major ``entries``."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    # construction

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        return cls(field, rows, cols, (field.zero,) * (rows * cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(field, len(rows), cols, tuple(field(v) for r in rows for v in r))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> Matrix:
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        n = len(columns)
        return cls(field, rows, n, tuple(field(columns[j][i]) for i in range(rows) for j in range(n)))

    @classmethod
    def _raw(cls, field: Field, rows: int, cols: int, row_lists: list[list]) -> Matrix:
        return cls(field, rows, cols, tuple(v for r in row_lists for v in r))

    # access

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic

    def _check(self, other: Matrix):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        n, m, k = self.rows, other.cols, self.cols
        if n == 0 or m == 0:
            return Matrix.zeros(self.field, n, m)
        zero = self.field.zero
        brows = [other.entries[t * m:(t + 1) * m] for t in range(k)]
        out = []
        p = self.field.p if self.field.is_prime else None
        for i in range(n):
            acc = [zero] * m
            arow = self.entries[i * k:(i + 1) * k]
            for t in range(k):
                a = arow[t]
                if a:
                    brow = brows[t]
                    for j in range(m):
                        b = brow[j]
                        if b:
                            acc[j] += a * b
            if p is not None:
                acc = [v % p for v in acc]
            out.extend(acc)
        return Matrix(self.field, n, m, tuple(out))

    def _zip(self, other: Matrix, op) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        vals = tuple(op(a, b) for a, b in zip(self.entries, other.entries))
        if self.field.is_prime:
            vals = tuple(v % self.field.p for v in vals)
        return Matrix(self.field, self.rows, self.cols, vals)

    def __add__(self, other: Matrix) -> Matrix:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> Matrix:
        return self.scale(-1)

    def scale(self, c) -> Matrix:
        c = self.field(c)
        vals = tuple(c * v for v in self.entries)
        if self.field.is_prime:
            vals = tuple(v % self.field.p for v in vals)
        return Matrix(self.field, self.rows, self.cols, vals)

    @property
    def T(self) -> Matrix:
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def select_columns(self, idx: Sequence[int]) -> Matrix:
        idx = list(idx)
        c = self.cols
        return Matrix(
            self.field, self.rows, len(idx),
            tuple(self.entries[i * c + j] for i in range(self.rows) for j in idx),
        )

    def select_rows(self, idx: Sequence[int]) -> Matrix:
        idx = list(idx)
        c = self.cols
        return Matrix(self.field, len(idx), c, tuple(v for i in idx for v in self.entries[i * c:(i + 1) * c]))

    @staticmethod
    def hstack(field: Field, rows: int, blocks: Iterable[Matrix]) -> Matrix:
        blocks = [b for b in blocks]
        for b in blocks:
            if b.rows != rows:
                raise ValueError("hstack row mismatch")
        cols = sum(b.cols for b in blocks)
        out = []
        for i in range(rows):
            for b in blocks:
                out.extend(b.entries[i * b.cols:(i + 1) * b.cols])
        return Matrix(field, rows, cols, tuple(out))

    @staticmethod
    def vstack(field: Field, cols: int, blocks: Iterable[Matrix]) -> Matrix:
        blocks = list(blocks)
        for b in blocks:
            if b.cols != cols:
                raise ValueError("vstack column mismatch")
        return Matrix(field, sum(b.rows for b in blocks), cols, tuple(v for b in blocks for v in b.entries))

    @staticmethod
    def block(field: Field, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> Matrix:
        """Assemble from ``{(bi, bj): Matrix}``; missing blocks are zero."""
        rows, cols = sum(row_sizes), sum(col_sizes)
        data = [[field.zero] * cols for _ in range(rows)]
        roff = [sum(row_sizes[:i]) for i in range(len(row_sizes))]
        coff = [sum(col_sizes[:j]) for j in range(len(col_sizes))]
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block {(bi, bj)} has shape {m.shape}")
            r0, c0 = roff[bi], coff[bj]
            for i in range(m.rows):
                data[r0 + i][c0:c0 + m.cols] = m.entries[i * m.cols:(i + 1) * m.cols]
        return Matrix._raw(field, rows, cols, data)

    @staticmethod
    def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
        return Matrix.block(
            field, [b.rows for b in blocks], [b.cols for b in blocks],
            {(i, i): b for i, b in enumerate(blocks)},
        )

    def kron(self, other: Matrix) -> Matrix:
        self._check(other)
        r, c = self.rows * other.rows, self.cols * other.cols
        out = []
        for i in range(self.rows):
            arow = self.row(i)
            for k in range(other.rows):
                brow = other.row(k)
                for a in arow:
                    if a:
                        out.extend(a * b for b in brow)
                    else:
                        out.extend([self.field.zero] * other.cols)
        if self.field.is_prime:
            out = [v % self.field.p for v in out]
        return Matrix(self.field, r, c, tuple(out))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in self.row(i)) for i in range(self.rows))
        return f"Matrix<{self.field} {self.rows}x{self.cols}>[{body}]"


def _rref(m: Matrix, limit: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivots searched only in the first ``limit`` columns."""
    field = m.field
    r, c = m.rows, m.cols
    if limit is None:
        limit = c
    rows = [list(m.entries[i * c:(i + 1) * c]) for i in range(r)]
    pivots: list[int] = []
    pr = 0
    p = field.p if field.is_prime else None
    for col in range(limit):
        if pr == r:
            break
        piv = None
        for i in range(pr, r):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[pr], rows[piv] = rows[piv], rows[pr]
        prow = rows[pr]
        inv = field.inv(prow[col])
        if p is not None:
            prow = [v * inv % p for v in prow]
        else:
            prow = [v * inv for v in prow]
        rows[pr] = prow
        nz = [j for j in range(col, c) if prow[j]]
        for i in range(r):
            if i == pr:
                continue
            row = rows[i]
            f = row[col]
            if f:
                if p is not None:
                    for j in nz:
                        row[j] = (row[j] - f * prow[j]) % p
                else:
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(col)
        pr += 1
    return rows, pivots


def pivot_columns(m: Matrix) -> list[int]:
    """Indices of the pivot columns, i.e. the greedy independent columns in input order."""
    return _rref(m)[1]


def rank(m: Matrix) -> int:
    return len(_rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form the reduced-echelon basis of ``{v : m v = 0}``."""
    rows, pivots = _rref(m)
    field = m.field
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    cols = []
    for f in free:
        v = [field.zero] * m.cols
        v[f] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
            if field.is_prime:
                v[pc] %= field.p
        cols.append(v)
    return Matrix.from_columns(field, cols, m.cols) if cols else Matrix.zeros(field, m.cols, 0)


def column_basis(m: Matrix) -> Matrix:
    return m.select_columns(pivot_columns(m))


def solve(a: Matrix, b: Matrix) -> Matrix:
    """Return ``x`` with ``a @ x == b`` (free variables set to zero).

    Raises ContainmentViolation when some column of ``b`` is outside the column
    space of ``a``.
    """
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"solve shape mismatch {a.shape} / {b.shape}")
    aug = Matrix.hstack(a.field, a.rows, [a, b])
    rows, pivots = _rref(aug, limit=a.cols)
    n = len(pivots)
    for i in range(n, a.rows):
        if any(rows[i][a.cols:]):
            raise ContainmentViolation("right-hand side is not in the column space")
    out = [[a.field.zero] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(pivots):
        out[pc] = rows[i][a.cols:]
    return Matrix._raw(a.field, a.cols, b.cols, out)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols or rank(m) != m.rows:
        raise ValueError("matrix is not invertible")
    return solve(m, Matrix.identity(m.field, m.rows))


def is_injective(m: Matrix) -> bool:
    return rank(m) == m.cols


def span_contains(a: Matrix, b: Matrix) -> bool:
    """True iff col(b) ⊆ col(a)."""
    if b.cols == 0:
        return True
    return rank(Matrix.hstack(a.field, a.rows, [a, b])) == rank(a)


def intersection(a: Matrix, b: Matrix) -> Matrix:
    """Basis of col(a) ∩ col(b)."""
    k = kernel_basis(Matrix.hstack(a.field, a.rows, [a, -b]))
    return column_basis(a @ k.select_rows(range(a.cols)))


def preimage(a: Matrix, w: Matrix) -> Matrix:
    """Basis of ``{v : a v ∈ col(w)}``."""
    k = kernel_basis(Matrix.hstack(a.field, a.rows, [a, -w]))
    return column_basis(k.select_rows(range(a.cols)))


@dataclass(frozen=True)
class Subquotient:
    """Presentation of V/W with W ⊆ V ⊆ k^ambient_dim.

    ``basis`` holds lifts of a basis of V/W; ``project`` maps ambient vectors
    (meaningfully, those in V) to coordinates in that basis and kills W.
    """

    ambient_dim: int
    generators: Matrix
    relations: Matrix
    basis: Matrix
    project: Matrix

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> Field:
        return self.generators.field

    def coords(self, v: Matrix) -> Matrix:
        return self.project @ v


def quotient_presentation(
    ambient_dim: int, generators: Matrix, relations: Matrix, *, check: bool = True
) -> Subquotient:
    """Present span(generators) / span(relations).

    Lifts are the generator columns that survive greedy elimination after the
    relations, taken in input order.
    """
    field = generators.field
    if generators.rows != ambient_dim or relations.rows != ambient_dim:
        raise ValueError("generators/relations do not live in the ambient space")
    if check and not span_contains(generators, relations):
        raise ContainmentViolation("relations are not contained in the span of the generators")
    combined = Matrix.hstack(field, ambient_dim, [relations, generators])
    piv = pivot_columns(combined)
    rel_piv = [j for j in piv if j < relations.cols]
    lift_idx = [j - relations.cols for j in piv if j >= relations.cols]
    w = relations.select_columns(rel_piv)
    basis = generators.select_columns(lift_idx)
    # complete [w | basis] to an ambient basis with standard vectors
    ident = Matrix.identity(field, ambient_dim)
    partial = Matrix.hstack(field, ambient_dim, [w, basis])
    full_piv = pivot_columns(Matrix.hstack(field, ambient_dim, [partial, ident]))
    extra = [j - partial.cols for j in full_piv if j >= partial.cols]
    frame = Matrix.hstack(field, ambient_dim, [partial, ident.select_columns(extra)])
    frame_inv = solve(frame, ident)
    project = frame_inv.select_rows(range(w.cols, w.cols + basis.cols))
    return Subquotient(ambient_dim, generators, relations, basis, project)
