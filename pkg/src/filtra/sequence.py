"""Z-indexed sequences of chain complexes with eventually constant tails.

A sequence on the window ``(N, M)`` stores ``X(N), ..., X(M)`` and the steps
``x_n: X(n) -> X(n+1)``. Outside the window it is constant with identity
steps, so ``X(-∞) = X(N)`` and ``X(∞) = X(M)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import (
    ChainComplex,
    ChainMap,
    cone,
    cone_map,
    cylinder,
    direct_sum,
    direct_sum_map,
    is_acyclic,
    is_quasi_iso,
    quasi_isomorphic,
    truncate,
    _same_field,
)
from .errors import InvariantViolation
from .exactlin import Field, Matrix, inverse, pivot_columns, solve
from .graded import GradedMap, GradedObject

__all__ = [
    "Sequence",
    "SequenceMap",
    "step_sequence",
    "constant_sequence",
    "lower_constant",
    "gr",
    "gr_map",
    "sequence_cone",
    "is_graded_equivalence",
    "completion",
    "completion_map",
    "is_complete",
    "levelwise_quasi_iso",
    "levelwise_quasi_isomorphic",
    "monic_form",
    "is_monic",
    "truncation_sequence",
    "direct_sum_sequence",
    "align",
]


@dataclass(frozen=True, eq=False)
class Sequence:
    """Levels ``X(N..M)`` and steps ``x_n: X(n) -> X(n+1)`` for ``N <= n < M``."""

    window: tuple[int, int]
    levels: tuple[ChainComplex, ...]
    steps: tuple[ChainMap, ...]

    def __post_init__(self):
        n, m = self.window
        object.__setattr__(self, "window", (int(n), int(m)))
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "steps", tuple(self.steps))
        if n > m:
            raise InvariantViolation(f"window ({n}, {m}) has N > M")
        if len(self.levels) != m - n + 1:
            raise InvariantViolation(f"{len(self.levels)} levels for window ({n}, {m})")
        if len(self.steps) != m - n:
            raise InvariantViolation(f"{len(self.steps)} steps for window ({n}, {m})")
        _same_field(*(c.field for c in self.levels))
        for i, s in enumerate(self.steps):
            if not (s.source is self.levels[i] or s.source == self.levels[i]):
                raise InvariantViolation(f"step {n + i} does not start at level {n + i}")
            if not (s.target is self.levels[i + 1] or s.target == self.levels[i + 1]):
                raise InvariantViolation(f"step {n + i} does not end at level {n + i + 1}")

    @property
    def field(self) -> Field:
        return self.levels[0].field

    @property
    def N(self) -> int:
        return self.window[0]

    @property
    def M(self) -> int:
        return self.window[1]

    def at(self, n: int) -> ChainComplex:
        n = min(max(n, self.N), self.M)
        return self.levels[n - self.N]

    def step_at(self, n: int) -> ChainMap:
        """``x_n: X(n) -> X(n+1)``; identity outside the window."""
        if self.N <= n < self.M:
            return self.steps[n - self.N]
        return ChainMap.identity(self.at(n))

    def composite(self, i: int, j: int) -> ChainMap:
        """Structure map ``X(i) -> X(j)`` for ``i <= j``."""
        if i > j:
            raise ValueError("composite needs i <= j")
        lo, hi = max(i, self.N), min(j, self.M)
        if lo >= hi:
            return ChainMap.identity(self.at(i))
        f = self.steps[lo - self.N]
        for n in range(lo + 1, hi):
            f = self.steps[n - self.N].compose(f)
        return f

    def extend(self, window: tuple[int, int]) -> Sequence:
        """Same sequence on a window containing the current one."""
        n, m = window
        if n > self.N or m < self.M:
            raise ValueError(f"window {window} does not contain {self.window}")
        if (n, m) == self.window:
            return self
        levels = tuple(self.at(k) for k in range(n, m + 1))
        steps = tuple(self.step_at(k) for k in range(n, m))
        return Sequence._trusted((n, m), levels, steps)

    @classmethod
    def _trusted(cls, window, levels, steps) -> Sequence:
        obj = object.__new__(cls)
        object.__setattr__(obj, "window", tuple(window))
        object.__setattr__(obj, "levels", tuple(levels))
        object.__setattr__(obj, "steps", tuple(steps))
        return obj

    def indices(self) -> range:
        return range(self.N, self.M + 1)

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.window == other.window and self.levels == other.levels and self.steps == other.steps

    def __repr__(self):
        return f"Sequence<{self.field} window={self.window} dims={[c.dims for c in self.levels]}>"


def align(*xs: Sequence) -> list[Sequence]:
    """Extend all sequences to the union of their windows."""
    n = min(x.N for x in xs)
    m = max(x.M for x in xs)
    return [x.extend((n, m)) for x in xs]


@dataclass(frozen=True, eq=False)
class SequenceMap:
    """Levelwise chain maps ``f_n: X(n) -> Y(n)`` on a common window."""

    source: Sequence
    target: Sequence
    comps: tuple[ChainMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(self.comps))
        if self.source.window != self.target.window:
            raise InvariantViolation("sequence map needs a common window")
        if len(self.comps) != len(self.source.levels):
            raise InvariantViolation("one component per level required")
        for i, n in enumerate(self.source.indices()):
            f = self.comps[i]
            if f.source != self.source.at(n) or f.target != self.target.at(n):
                raise InvariantViolation(f"component {n} has the wrong source or target")
        for n in range(self.source.N, self.source.M):
            lhs = self.target.step_at(n).compose(self.at(n))
            rhs = self.at(n + 1).compose(self.source.step_at(n))
            if lhs != rhs:
                raise InvariantViolation(f"square at index {n} does not commute")

    @classmethod
    def _trusted(cls, source, target, comps) -> SequenceMap:
        obj = object.__new__(cls)
        object.__setattr__(obj, "source", source)
        object.__setattr__(obj, "target", target)
        object.__setattr__(obj, "comps", tuple(comps))
        return obj

    @classmethod
    def identity(cls, x: Sequence) -> SequenceMap:
        return cls._trusted(x, x, [ChainMap.identity(c) for c in x.levels])

    @property
    def window(self) -> tuple[int, int]:
        return self.source.window

    def at(self, n: int) -> ChainMap:
        n = min(max(n, self.source.N), self.source.M)
        return self.comps[n - self.source.N]

    def extend(self, window: tuple[int, int]) -> SequenceMap:
        src, tgt = self.source.extend(window), self.target.extend(window)
        return SequenceMap._trusted(src, tgt, [self.at(n) for n in src.indices()])

    def compose(self, first: SequenceMap) -> SequenceMap:
        """``self ∘ first``."""
        a, b = align(first.source, self.source)
        w = a.window
        f, g = first.extend(w), self.extend(w)
        return SequenceMap._trusted(f.source, g.target, [g.at(n).compose(f.at(n)) for n in a.indices()])


# constructors


def step_sequence(m: int, a: ChainComplex) -> Sequence:
    """``⟨m, a⟩``: zero below ``m``, constantly ``a`` from ``m`` on."""
    zero = ChainComplex.zero(a.field)
    return Sequence._trusted((m - 1, m), (zero, a), (ChainMap.zero(zero, a),))


def constant_sequence(c: ChainComplex, window: tuple[int, int] = (0, 0)) -> Sequence:
    n, m = window
    return Sequence._trusted(
        window, [c] * (m - n + 1), [ChainMap.identity(c)] * (m - n)
    )


def lower_constant(d: ChainComplex) -> Sequence:
    """``D_{≤0}``: ``D`` at every ``n <= 0`` and zero above."""
    zero = ChainComplex.zero(d.field)
    return Sequence._trusted((0, 1), (d, zero), (ChainMap.zero(d, zero),))


def direct_sum_sequence(*xs: Sequence) -> Sequence:
    xs = align(*xs)
    w = xs[0].window
    levels = [direct_sum(*(x.at(n) for x in xs)) for n in range(w[0], w[1] + 1)]
    steps = [direct_sum_map(*(x.step_at(n) for x in xs)) for n in range(w[0], w[1])]
    return Sequence._trusted(w, levels, steps)


# associated graded and graded equivalences


def gr(x: Sequence) -> GradedObject:
    """``Gr(x)_n = cone(x_{n-1})`` for ``N < n <= M``; zero elsewhere."""
    return GradedObject(x.field, {n: cone(x.step_at(n - 1)).cone for n in range(x.N + 1, x.M + 1)})


def gr_map(f: SequenceMap) -> GradedMap:
    x, y = f.source, f.target
    comps = {}
    for n in range(x.N + 1, x.M + 1):
        comps[n] = cone_map(x.step_at(n - 1), y.step_at(n - 1), f.at(n - 1), f.at(n))
    return GradedMap(gr(x), gr(y), {n: c for n, c in comps.items() if not c.source.is_zero or not c.target.is_zero})


def sequence_cone(f: SequenceMap) -> Sequence:
    """Levelwise cone of ``f`` with induced steps."""
    x, y = f.source, f.target
    levels = [cone(f.at(n)).cone for n in x.indices()]
    steps = [cone_map(f.at(n), f.at(n + 1), x.step_at(n), y.step_at(n)) for n in range(x.N, x.M)]
    return Sequence._trusted(x.window, levels, steps)


def is_graded_equivalence(f: SequenceMap) -> bool:
    """True iff every step of the levelwise cone of ``f`` is a quasi-isomorphism."""
    c = sequence_cone(f)
    return all(is_quasi_iso(s) for s in c.steps)


def levelwise_quasi_iso(f: SequenceMap) -> bool:
    return all(is_quasi_iso(g) for g in f.comps)


def levelwise_quasi_isomorphic(x: Sequence, y: Sequence) -> bool:
    """Levels agree in homology dimensions at every index (no map is compared)."""
    x, y = align(x, y)
    return all(quasi_isomorphic(x.at(n), y.at(n)) for n in x.indices())


# completion


def completion(x: Sequence) -> tuple[Sequence, SequenceMap]:
    """``X̂(n) = cone(X(N) -> X(n))`` and the map ``γ: X -> X̂`` of cone inclusions."""
    ident = ChainMap.identity(x.at(x.N))
    structure = [x.composite(x.N, n) for n in x.indices()]
    cones = [cone(c) for c in structure]
    levels = [c.cone for c in cones]
    steps = [
        cone_map(structure[i], structure[i + 1], ident, x.step_at(n))
        for i, n in enumerate(range(x.N, x.M))
    ]
    xh = Sequence._trusted(x.window, levels, steps)
    gamma = SequenceMap._trusted(x, xh, [c.include for c in cones])
    return xh, gamma


def completion_map(f: SequenceMap) -> SequenceMap:
    """``f̂: X̂ -> Ŷ`` induced levelwise on cones."""
    x, y = f.source, f.target
    xh, _ = completion(x)
    yh, _ = completion(y)
    comps = [
        cone_map(x.composite(x.N, n), y.composite(y.N, n), f.at(x.N), f.at(n))
        for n in x.indices()
    ]
    return SequenceMap._trusted(xh, yh, comps)


def is_complete(x: Sequence) -> bool:
    return is_acyclic(x.at(x.N))


# monic replacement


def is_monic(x: Sequence) -> bool:
    return all(s.is_injective() for s in x.steps)


def monic_form(x: Sequence) -> tuple[Sequence, SequenceMap]:
    """A monic sequence ``X'`` with a levelwise quasi-isomorphism ``X' -> X``.

    Non-injective steps are replaced, left to right, by the inclusion into the
    mapping cylinder of ``X'(n-1) -> X(n)``. Monic input is returned unchanged
    with the identity map.
    """
    if is_monic(x):
        return x, SequenceMap.identity(x)
    levels = [x.at(x.N)]
    rho = [ChainMap.identity(x.at(x.N))]
    steps = []
    for n in range(x.N + 1, x.M + 1):
        psi = x.step_at(n - 1).compose(rho[-1])
        if psi.is_injective():
            levels.append(x.at(n))
            steps.append(psi)
            rho.append(ChainMap.identity(x.at(n)))
        else:
            cyl, inc, proj = cylinder(psi)
            levels.append(cyl)
            steps.append(inc)
            rho.append(proj)
    xp = Sequence._trusted(x.window, levels, steps)
    return xp, SequenceMap._trusted(xp, x, rho)


def _adapted(x: Sequence):
    """Adapted coordinates for a monic ``x``.

    Returns ``(ambient, weights, frame)`` where ``ambient`` is ``X(M)`` rewritten
    in a basis adapted to the filtration, ``weights[k][i]`` is the first index
    at which basis vector ``i`` of degree ``k`` appears (``None`` when it already
    lies in ``X(N)``), and ``frame`` is the chain isomorphism ``ambient -> X(M)``.
    """
    top = x.at(x.M)
    field = x.field
    incl = [x.composite(n, x.M) for n in x.indices()]
    frames, weights = {}, {}
    for k, dim in top.dims.items():
        w: list[int | None] = []
        current = Matrix.zeros(field, dim, 0)
        for i, n in enumerate(x.indices()):
            img = incl[i].at(k)
            if img.cols == 0:
                continue
            stacked = Matrix.hstack(field, dim, [current, img])
            piv = [j - current.cols for j in pivot_columns(stacked) if j >= current.cols]
            if piv:
                new = img.select_columns(piv)
                current = Matrix.hstack(field, dim, [current, new])
                w.extend([None if n == x.N else n] * len(piv))
        frames[k] = current
        weights[k] = w
    diff = {}
    for k in top.dims:
        if top.dim(k - 1):
            diff[k] = solve(frames[k - 1], top.d(k) @ frames[k])
    ambient = ChainComplex._trusted(field, dict(top.dims), diff)
    return ambient, weights, ChainMap._trusted(ambient, top, frames)


def _adapted_inverse(frame: ChainMap) -> ChainMap:
    return ChainMap._trusted(frame.target, frame.source, {k: inverse(m) for k, m in frame.comp.items()})


# truncation towers


def truncation_sequence(c: ChainComplex, window: tuple[int, int], mode: str) -> Sequence:
    """``postnikov``: ``n -> τ_{≥-n} c``; ``whitehead``: ``n -> cone(τ_{≥-n} c -> c)``."""
    n0, m0 = window
    if n0 > m0:
        raise ValueError("window needs N <= M")
    if mode not in ("postnikov", "whitehead"):
        raise ValueError(f"unknown mode {mode!r}")
    truncs = [truncate(c, -n, "at-least") for n in range(n0, m0 + 1)]
    steps = []
    for (a, ia), (b, ib) in zip(truncs, truncs[1:]):
        steps.append(ChainMap._trusted(a, b, {
            k: solve(ib.at(k), ia.at(k)) for k in a.dims if b.dim(k)
        }))
    if mode == "postnikov":
        return Sequence._trusted(window, [t for t, _ in truncs], steps)
    ident = ChainMap.identity(c)
    levels = [cone(i).cone for _, i in truncs]
    wsteps = [
        cone_map(truncs[i][1], truncs[i + 1][1], steps[i], ident) for i in range(len(steps))
    ]
    return Sequence._trusted(window, levels, wsteps)
