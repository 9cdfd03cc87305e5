"""Exact rational linear algebra over Q.

Subspaces are kept in reduced row-echelon form so that two subspaces are
equal exactly when their bases are equal.  Matrices are plain tuples of
tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


class DimensionError(ValueError):
    """Operands live in different ambient spaces or have the wrong shape."""


def to_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"not a rational entry: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {value!r}") from exc
    raise TypeError(f"not a rational entry: {value!r} (use int or 'p/q' string)")


def as_matrix(rows: Iterable[Iterable], cols: int | None = None) -> Matrix:
    """Convert nested sequences of ints / 'p/q' strings to an exact matrix."""
    out = tuple(tuple(to_fraction(v) for v in row) for row in rows)
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise DimensionError(f"ragged matrix: row lengths {sorted(widths)}")
    if cols is not None and out and len(out[0]) != cols:
        raise DimensionError(f"expected {cols} columns, got {len(out[0])}")
    return out


def ncols(mat: Matrix, default: int = 0) -> int:
    return len(mat[0]) if mat else default


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
                 for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def rref(rows: Sequence[Sequence[Fraction]], cols: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]], cols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]) if cols is None else cols)[1])


def determinant(mat: Matrix) -> Fraction:
    n = len(mat)
    m = [list(r) for r in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def solve_square(mat: Matrix, rhs: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Unique solution of mat x = rhs, or None when mat is singular."""
    n = len(mat)
    aug = [list(row) + [Fraction(b)] for row, b in zip(mat, rhs)]
    red, piv = rref(aug, n)
    if piv != tuple(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))


def null_space(mat: Matrix, cols: int) -> Matrix:
    """Basis of {x : mat x = 0} (not canonicalized)."""
    red, piv = rref(mat, cols) if mat else ((), ())
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return tuple(basis)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^d stored by its canonical (RREF) basis."""

    ambient_dim: int
    basis: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        return canonicalize(as_matrix(vectors), ambient_dim)

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d, tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))

    @classmethod
    def coordinate(cls, indices: Iterable[int], d: int) -> "Subspace":
        rows = [[int(i == j) for j in range(d)] for i in sorted(set(indices))]
        return cls.span(rows, d)

    def __le__(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return sum_(self, other).dim == other.dim

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __contains__(self, vector) -> bool:
        v = tuple(to_fraction(x) for x in vector)
        return rank(self.basis + (v,), self.ambient_dim) == self.dim

    def sort_key(self):
        return self.basis

    def tolist(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.basis]

    def __repr__(self) -> str:
        if self.dim == 0:
            return f"Subspace(0 in Q^{self.ambient_dim})"
        if self.dim == self.ambient_dim:
            return f"Subspace(Q^{self.ambient_dim})"
        rows = ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in self.basis)
        return f"span{{{rows}}}"


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def canonicalize(rows: Matrix, ambient_dim: int) -> Subspace:
    if rows and len(rows[0]) != ambient_dim:
        raise DimensionError(f"rows have {len(rows[0])} columns, ambient dimension is {ambient_dim}")
    basis, _ = rref(rows, ambient_dim)
    return Subspace(ambient_dim, basis)


def sum_(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return canonicalize(a.basis + b.basis, a.ambient_dim)


def annihilator(a: Subspace) -> Matrix:
    """Basis of the orthogonal complement {x : <x, v> = 0 for v in a}."""
    return null_space(a.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    d = a.ambient_dim
    # x lies in a and b iff x is annihilated by both annihilators
    constraints = annihilator(a) + annihilator(b)
    return canonicalize(null_space(constraints, d), d)


def image_dim(L: Matrix, v: Subspace) -> int:
    if ncols(L, v.ambient_dim) != v.ambient_dim:
        raise DimensionError(f"map has {ncols(L)} columns, subspace lives in Q^{v.ambient_dim}")
    if v.dim == 0 or not L:
        return 0
    return rank(matmul(v.basis, transpose(L)), len(L))


def kernel(L: Matrix, cols: int | None = None) -> Subspace:
    d = ncols(L) if cols is None else cols
    return canonicalize(null_space(L, d), d)


def image(L: Matrix, v: Subspace) -> Subspace:
    out = canonicalize(matmul(v.basis, transpose(L)), len(L)) if v.dim else Subspace.zero(len(L))
    return out


def is_chain(subspaces: Sequence[Subspace]) -> bool:
    """True when consecutive entries are nested (not necessarily strictly)."""
    return all(a <= b for a, b in zip(subspaces, subspaces[1:]))


def comparable(a: Subspace, b: Subspace) -> bool:
    return a <= b or b <= a


class ClosureLimitError(RuntimeError):
    """Closure under sum/intersection grew past the configured cap."""


def lattice_closure(seeds: Iterable[Subspace], rounds: int | None = None,
                    cap: int = 512) -> list[Subspace]:
    """Close ``seeds`` under pairwise sum and intersection.

    ``rounds=None`` iterates to a fixed point; otherwise at most ``rounds``
    passes are made.  Raises :class:`ClosureLimitError` past ``cap`` elements.
    """
    items = list(dict.fromkeys(seeds))
    known = set(items)
    done = 0
    while rounds is None or done < rounds:
        new = []
        for a, b in combinations(items, 2):
            if comparable(a, b):
                continue
            for s in (sum_(a, b), intersect(a, b)):
                if s not in known:
                    known.add(s)
                    new.append(s)
                    if len(known) > cap:
                        raise ClosureLimitError(
                            f"closure exceeded {cap} subspaces; lower depth or supply E explicitly")
        done += 1
        if not new:
            break
        items.extend(new)
    return sorted(items, key=lambda s: (s.dim, s.basis))


def closure_flag_plus_one(v: Subspace, flag: Sequence[Subspace]) -> list[Subspace]:
    """All subspaces generated from ``v`` and a chain by sums and intersections.

    Finite by the flag-plus-one argument; the result has at most
    ``1 + 3t + t(t-1)/2`` members for a chain of length ``t``.
    """
    flag = list(flag)
    for w in flag:
        _check_same(v, w)
    if not is_chain(flag):
        raise ValueError("flag must be a chain W_1 <= W_2 <= ... under inclusion")
    t = len(flag)
    out = lattice_closure([v, *flag], rounds=None, cap=1 + 3 * t + t * (t - 1) // 2 + 1)
    return out


def flag_plus_one_candidates(v: Subspace, flag: Sequence[Subspace]) -> set[Subspace]:
    """The explicit list {V} u {W_i, V+W_i, V n W_i} u {W_i + (V n W_j) : i < j}."""
    out = {v}
    for w in flag:
        out |= {w, sum_(v, w), intersect(v, w)}
    for i, j in combinations(range(len(flag)), 2):
        out.add(sum_(flag[i], intersect(v, flag[j])))
    return out
