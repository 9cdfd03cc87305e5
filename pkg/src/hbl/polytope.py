"""HBL polytopes of rational map families and their primal/dual programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .lp import EQ, GE, LE, InfeasibleError, solve_lp
from .subspace import (
    ClosureLimitError,
    DimensionError,
    Matrix,
    Subspace,
    as_matrix,
    image_dim,
    kernel,
    lattice_closure,
    rank,
    solve_square,
)

__all__ = [
    "HBLInstance", "Constraint", "ConstraintSystem", "DualityMismatch",
    "ClosureLimitError", "InfeasibleError",
    "young", "holder", "loomis_whitney", "BUNDLED",
    "generate_subspace_list", "build_constraints", "enumerate_vertices",
    "solve_primal", "solve_dual", "verify_duality", "dual_objective",
    "dual_image_objective",
]


@dataclass(frozen=True)
class HBLInstance:
    """Surjective rational maps L_j : Q^d -> Q^{d_j} with scale exponents m_j."""

    d: int
    maps: tuple
    m: tuple = ()

    def __post_init__(self):
        maps = tuple(as_matrix(L, self.d) for L in self.maps)
        object.__setattr__(self, "maps", maps)
        for j, L in enumerate(maps):
            if not L:
                raise DimensionError(f"maps[{j}] has no rows")
            if rank(L, self.d) != len(L):
                raise ValueError(f"maps[{j}] is not surjective (rank {rank(L, self.d)} < {len(L)} rows)")
        m = tuple(int(v) for v in self.m) if self.m else (0,) * len(maps)
        if len(m) != len(maps):
            raise ValueError(f"m has {len(m)} entries for {len(maps)} maps")
        if any(v < 0 for v in m):
            raise ValueError("scale exponents m_j must be nonnegative integers")
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(L) for L in self.maps)

    def kernels(self) -> list[Subspace]:
        return [kernel(L, self.d) for L in self.maps]

    def with_m(self, m: Sequence[int]) -> "HBLInstance":
        return HBLInstance(self.d, self.maps, tuple(m))


def young(m=(0, 0, 0)) -> HBLInstance:
    """Young's convolution inequality on R: (x, y) -> y, x - y, x."""
    return HBLInstance(2, ([[0, 1]], [[1, -1]], [[1, 0]]), tuple(m))


def holder(n: int = 2, d: int = 2, m=None) -> HBLInstance:
    eye = [[int(i == j) for j in range(d)] for i in range(d)]
    return HBLInstance(d, tuple(eye for _ in range(n)), tuple(m) if m else (0,) * n)


def loomis_whitney(d: int = 2, m=None) -> HBLInstance:
    """Coordinate projections dropping one axis each; d = 2 keeps (y) and (x)."""
    maps = []
    for drop in range(d):
        maps.append([[int(i == j) for j in range(d)] for i in range(d) if i != drop])
    return HBLInstance(d, tuple(maps), tuple(m) if m else (0,) * d)


BUNDLED = {"young": young, "holder": holder, "loomis_whitney": loomis_whitney}


def coordinate_subspaces(d: int, dims: Iterable[int]) -> list[Subspace]:
    out = []
    for k in sorted(set(dims)):
        if 0 < k < d:
            out.extend(Subspace.coordinate(idx, d) for idx in combinations(range(d), k))
    return out


def generate_subspace_list(inst: HBLInstance, depth: int = 1,
                           coordinate_dims: Iterable[int] | None = None,
                           cap: int = 512,
                           extra: Iterable[Subspace] = ()) -> list[Subspace]:
    """Kernels, 0, Q^d and coordinate subspaces closed ``depth`` times.

    By default only coordinate subspaces of dimension 1 and codimension 1
    are seeded.  The returned list is deduplicated and sorted by
    (dim, basis).  Sufficiency for the polytope is only known for the
    bundled families; pass ``extra`` or an explicit list otherwise.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    d = inst.d
    if coordinate_dims is None:
        coordinate_dims = {1, d - 1}
    seeds = [Subspace.zero(d), Subspace.full(d), *inst.kernels(),
             *coordinate_subspaces(d, coordinate_dims), *extra]
    return lattice_closure(seeds, rounds=depth, cap=cap)


@dataclass(frozen=True)
class Constraint:
    """sum_j coeffs[j] * s_j >= rhs, produced by ``subspace``."""

    subspace: Subspace
    coeffs: tuple[int, ...]
    rhs: int


@dataclass(frozen=True)
class ConstraintSystem:
    """sum_j d_j s_j = d, one inequality per listed subspace, and s >= 0."""

    d: int
    dims: tuple[int, ...]
    inequalities: tuple[Constraint, ...]
    subspaces: tuple[Subspace, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.dims)

    def is_feasible_point(self, s: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in s):
            return False
        if sum(dj * v for dj, v in zip(self.dims, s)) != self.d:
            return False
        return all(sum(c * v for c, v in zip(k.coeffs, s)) >= k.rhs for k in self.inequalities)


def build_constraints(inst: HBLInstance, E: Sequence[Subspace]) -> ConstraintSystem:
    full = Subspace.full(inst.d)
    rows = []
    for V in E:
        if V.ambient_dim != inst.d:
            raise DimensionError(f"subspace {V!r} is not in Q^{inst.d}")
        if V == full:
            continue  # this is the equality row
        coeffs = tuple(image_dim(L, V) for L in inst.maps)
        rows.append(Constraint(V, coeffs, V.dim))
    return ConstraintSystem(inst.d, inst.dims, tuple(rows), tuple(E))


def enumerate_vertices(cs: ConstraintSystem) -> list[tuple[Fraction, ...]]:
    """All extreme points, by brute force over active sets of n-1 constraints.

    Returns an empty list for an empty polytope.
    """
    n = cs.n
    # candidate active rows: each inequality (deduplicated) and each bound s_j >= 0
    rows = {}
    for k in cs.inequalities:
        if any(k.coeffs) or k.rhs:
            rows.setdefault((k.coeffs, k.rhs), None)
    for j in range(n):
        rows.setdefault((tuple(int(i == j) for i in range(n)), 0), None)
    rows = list(rows)
    eq = (tuple(cs.dims), cs.d)
    found = {}
    for active in combinations(rows, n - 1):
        mat = (tuple(Fraction(v) for v in eq[0]),) + tuple(tuple(Fraction(v) for v in a[0]) for a in active)
        rhs = (Fraction(eq[1]),) + tuple(Fraction(a[1]) for a in active)
        s = solve_square(mat, rhs)
        if s is not None and cs.is_feasible_point(s):
            found.setdefault(s, None)
    return sorted(found)


def solve_primal(cs: ConstraintSystem, m: Sequence[int]) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact minimum of m . s over the polytope and a minimizing vertex."""
    rows = [cs.dims] + [k.coeffs for k in cs.inequalities]
    senses = [EQ] + [GE] * len(cs.inequalities)
    rhs = [cs.d] + [k.rhs for k in cs.inequalities]
    res = solve_lp(list(m), rows, senses, rhs)
    return res.value, res.x


def dual_objective(y: dict) -> Fraction:
    return sum((w * V.dim for V, w in y.items()), Fraction(0))


def dual_image_objective(y: dict, L: Matrix) -> Fraction:
    return sum((w * image_dim(L, V) for V, w in y.items()), Fraction(0))


def solve_dual(inst: HBLInstance, E: Sequence[Subspace], m: Sequence[int] | None = None
               ) -> tuple[Fraction, dict]:
    """Maximize y . dim(E) subject to y . dim(L_j E) <= m_j.

    y_V >= 0 except on Q^d, whose weight is free.  Returns the optimum and
    the support of an optimal (basic, hence rational) dual vector.
    """
    m = inst.m if m is None else tuple(m)
    full = Subspace.full(inst.d)
    cols = [V for V in dict.fromkeys(E) if V.dim > 0 and V != full] + [full]
    c = [V.dim for V in cols]
    rows = [[image_dim(L, V) for V in cols] for L in inst.maps]
    try:
        res = solve_lp(c, rows, [LE] * len(rows), list(m), free=[len(cols) - 1], maximize=True)
    except InfeasibleError as exc:  # pragma: no cover - y = 0 is always feasible for m >= 0
        raise InfeasibleError("dual infeasible; the subspace list is inconsistent") from exc
    y = {V: w for V, w in zip(cols, res.x) if w != 0}
    return res.value, y


class DualityMismatch(AssertionError):
    pass


def verify_duality(inst: HBLInstance, E: Sequence[Subspace], m: Sequence[int] | None = None) -> dict:
    m = inst.m if m is None else tuple(m)
    cs = build_constraints(inst, E)
    primal, s = solve_primal(cs, m)
    dual, y = solve_dual(inst, E, m)
    if primal != dual:
        raise DualityMismatch(f"primal {primal} != dual {dual} for m={m}")
    for j, L in enumerate(inst.maps):
        if dual_image_objective(y, L) > m[j]:
            raise DualityMismatch(f"dual vector violates constraint j={j}")
    return {"m": list(m), "primal": primal, "dual": dual, "argmin": s, "y": y}
