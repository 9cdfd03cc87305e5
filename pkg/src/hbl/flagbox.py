"""Flag reduction of dual vectors and parallelepiped certificates.

Dual vectors are plain ``dict`` objects mapping :class:`Subspace` to
:class:`Fraction` weights.  The pipeline is

    optimal dual -> flag-supported dual -> complements Y_i -> suffix-sum
    weights -> box S with edges e^{q} v -> |S| and |L_j(S)| as sums of c e^q
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .polytope import (
    HBLInstance,
    build_constraints,
    dual_image_objective,
    dual_objective,
    generate_subspace_list,
    solve_dual,
    solve_primal,
)
from .subspace import (
    Matrix,
    Subspace,
    canonicalize,
    comparable,
    determinant,
    intersect,
    is_chain,
    matmul,
    rank,
    sum_,
    transpose,
)


class BasicStepError(ValueError):
    pass


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class Step:
    V: Subspace
    W: Subspace
    amount: Fraction


def basic_step(y: dict, V: Subspace, W: Subspace) -> dict:
    """Move weight y_W from the incomparable pair (V, W) onto V+W and V n W."""
    if comparable(V, W):
        raise BasicStepError(f"{V!r} and {W!r} are nested")
    yv, yw = y.get(V, Fraction(0)), y.get(W, Fraction(0))
    if not (yv >= yw > 0):
        raise BasicStepError(f"need y_V >= y_W > 0, got {yv}, {yw}")
    out = dict(y)
    s, i = sum_(V, W), intersect(V, W)
    out[s] = out.get(s, Fraction(0)) + yw
    out[i] = out.get(i, Fraction(0)) + yw
    out[W] = Fraction(0)
    out[V] = yv - yw
    return {k: w for k, w in out.items() if w != 0}


def _next_pair(y: dict, working: set):
    live = sorted((S for S in working if y.get(S, 0) > 0), key=Subspace.sort_key)
    for a, b in combinations(live, 2):
        if comparable(a, b):
            continue
        # orient so the heavier subspace gives up nothing but y_W
        if y[b] > y[a]:
            a, b = b, a
        return a, b
    return None


def reduce_to_flag(y: dict, E_order: Sequence[Subspace], maps: Sequence[Matrix] = (),
                   max_steps: int = 100_000) -> tuple[dict, list[Step]]:
    """Fold the support of ``y`` into a chain, one subspace of ``E_order`` at a time.

    The weight on the full space and on the zero subspace is never used as a
    pivot.  With ``maps`` given, every step is checked to preserve y . dim and
    not to increase y . dim(L_j .).
    """
    if not y:
        return {}, []
    d = next(iter(y)).ambient_dim
    full, zero = Subspace.full(d), Subspace.zero(d)
    for V, w in y.items():
        if V != full and w < 0:
            raise ValueError(f"negative weight {w} on {V!r}")
    order = [V for V in dict.fromkeys(E_order) if V in y and V not in (full, zero)]
    order += sorted((V for V in y if V not in order and V not in (full, zero)), key=Subspace.sort_key)

    cur = dict(y)
    trace: list[Step] = []
    working: set = set()
    for V in order:
        working.add(V)
        while True:
            pair = _next_pair(cur, working)
            if pair is None:
                break
            a, b = pair
            before = (dual_objective(cur), [dual_image_objective(cur, L) for L in maps])
            moved = cur[b]
            cur = basic_step(cur, a, b)
            trace.append(Step(a, b, moved))
            working |= {sum_(a, b), intersect(a, b)}
            working -= {full, zero}
            if maps:
                after = (dual_objective(cur), [dual_image_objective(cur, L) for L in maps])
                if after[0] != before[0] or any(x > z for x, z in zip(after[1], before[1])):
                    raise AssertionError("basic step broke an invariant")
            if len(trace) > max_steps:
                raise RuntimeError("basic algorithm exceeded its step cap")
    return cur, trace


def support_flag(y: dict, d: int) -> list[Subspace]:
    """Chain of nonzero supported subspaces, ending in the full space."""
    full = Subspace.full(d)
    chain = sorted((V for V, w in y.items() if w != 0 and V.dim > 0 and V != full),
                   key=lambda S: S.dim)
    chain.append(full)
    if not is_chain(chain) or len({S.dim for S in chain}) != len(chain):
        raise ValueError("support is not a flag")
    return chain


def complement_decomposition(flag: Sequence[Subspace]) -> list[Subspace]:
    """Y_1 = W_1 and Y_i spanned by canonical rows of W_i extending W_{i-1}."""
    flag = list(flag)
    if not flag:
        raise ValueError("empty flag")
    d = flag[0].ambient_dim
    if not is_chain(flag) or flag[-1] != Subspace.full(d):
        raise ValueError("flag must be strictly nested and end at the full space")
    ys = []
    acc: tuple = ()
    for W in flag:
        added = []
        for row in W.basis:
            if rank(acc + tuple(added) + (row,), d) > len(acc) + len(added):
                added.append(row)
        if not added:
            raise ValueError("flag is not strictly nested")
        ys.append(canonicalize(tuple(added), d))
        acc = acc + tuple(added)
    return ys


def lift_weights(y_flag: dict, flag: Sequence[Subspace], ys: Sequence[Subspace] | None = None) -> list[Fraction]:
    """Suffix sums y'_{Y_i} = y_{W_i} + ... + y_{W_t}, aligned with ``flag``."""
    w = [y_flag.get(W, Fraction(0)) for W in flag]
    out = []
    acc = Fraction(0)
    for v in reversed(w):
        acc += v
        out.append(acc)
    return out[::-1]


@dataclass(frozen=True)
class Parallelepiped:
    """Edges e^{q} v; ``groups[i]`` lists the edge indices spanning Y_i."""

    edges: tuple  # tuple[(tuple[Fraction,...], Fraction), ...]
    groups: tuple = ()

    @property
    def vectors(self) -> Matrix:
        return tuple(v for v, _ in self.edges)

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(q for _, q in self.edges)


@dataclass(frozen=True)
class VolumeExpr:
    """A nonnegative sum of terms c * e^q with exact c and q."""

    terms: tuple = ()

    @classmethod
    def from_terms(cls, terms) -> "VolumeExpr":
        merged: dict = {}
        for c, q in terms:
            if c:
                merged[Fraction(q)] = merged.get(Fraction(q), Fraction(0)) + Fraction(c)
        return cls(tuple(sorted(((c, q) for q, c in merged.items()), key=lambda t: t[1])))

    def log(self) -> float:
        if not self.terms:
            return -math.inf
        top = max(float(q) for _, q in self.terms)
        return top + math.log(sum(float(c) * math.exp(float(q) - top) for c, q in self.terms))

    def value(self) -> float:
        return math.exp(self.log())

    def tolist(self) -> list[list[str]]:
        return [[str(c), str(q)] for c, q in self.terms]


def build_box(lifted: Sequence[Fraction], ys: Sequence[Subspace]) -> Parallelepiped:
    edges = []
    groups = []
    for q, Y in zip(lifted, ys):
        start = len(edges)
        edges.extend((tuple(v), Fraction(q)) for v in Y.basis)
        groups.append(tuple(range(start, len(edges))))
    return Parallelepiped(tuple(edges), tuple(groups))


def box_volume(S: Parallelepiped) -> VolumeExpr:
    det = abs(determinant(S.vectors))
    if det == 0:
        raise ValueError("degenerate parallelepiped: edges are dependent")
    return VolumeExpr.from_terms([(det, sum(S.exponents, Fraction(0)))])


def image_volume(L: Matrix, S: Parallelepiped) -> VolumeExpr:
    """Exact volume of the zonotope L(S) as a sum over edge subsets."""
    dp, d = len(L), len(S.edges)
    if dp > d:
        raise ValueError(f"target dimension {dp} exceeds {d}")
    images = [tuple(r[0] for r in matmul(L, transpose((v,)))) for v in S.vectors]
    terms = []
    for T in combinations(range(d), dp):
        det = determinant(tuple(tuple(images[t][r] for t in T) for r in range(dp)))
        if det:
            terms.append((abs(det), sum((S.edges[t][1] for t in T), Fraction(0))))
    return VolumeExpr.from_terms(terms)


@dataclass
class BoxCertificate:
    m: tuple
    primal_value: Fraction
    dual_value: Fraction
    dual: dict
    flag_dual: dict
    flag: list
    trace_length: int
    box: Parallelepiped
    box_volume: VolumeExpr
    image_volumes: list
    scale: float = 1.0  # linear factor applied to S
    scaled_log_volume: float = 0.0
    scaled_log_images: list = field(default_factory=list)

    @property
    def margins(self) -> list[float]:
        return [mj - v for mj, v in zip(self.m, self.scaled_log_images)]


def certify(inst: HBLInstance, E: Sequence[Subspace] | None = None, depth: int = 1) -> BoxCertificate:
    """Build the box S with |S| ~ e^{min m.s} and |L_j(S)| <= e^{m_j}."""
    if E is None:
        E = generate_subspace_list(inst, depth)
    cs = build_constraints(inst, E)
    primal, _ = solve_primal(cs, inst.m)
    dual, y = solve_dual(inst, E, inst.m)
    if primal != dual:
        raise CertificateError(f"duality gap: primal {primal}, dual {dual}")
    yf, trace = reduce_to_flag(y, E, inst.maps)
    flag = support_flag(yf, inst.d)
    if dual_objective(yf) != dual:
        raise CertificateError("flag reduction changed the dual objective")
    for j, L in enumerate(inst.maps):
        if dual_image_objective(yf, L) > inst.m[j]:
            raise CertificateError(f"flag dual violates constraint {j}")
    ys = complement_decomposition(flag)
    lifted = lift_weights(yf, flag)
    box = build_box(lifted, ys)
    vol = box_volume(box)
    if vol.terms[0][1] != dual:
        raise CertificateError("box exponent differs from the dual optimum")
    images = [image_volume(L, box) for L in inst.maps]
    # largest uniform factor <= 1 putting every image under e^{m_j}
    log_scale = min([0.0] + [(mj - im.log()) / dj
                             for mj, im, dj in zip(inst.m, images, inst.dims)])
    scaled_images = [im.log() + dj * log_scale for im, dj in zip(images, inst.dims)]
    for j, v in enumerate(scaled_images):
        if v > inst.m[j] + 1e-9:
            raise CertificateError(f"image {j} exceeds its bound after scaling")
    return BoxCertificate(
        m=inst.m, primal_value=primal, dual_value=dual, dual=y, flag_dual=yf, flag=flag,
        trace_length=len(trace), box=box, box_volume=vol, image_volumes=images,
        scale=math.exp(log_scale), scaled_log_volume=vol.log() + inst.d * log_scale,
        scaled_log_images=scaled_images,
    )


def certify_sweep(inst: HBLInstance, ks: Sequence[int], E: Sequence[Subspace] | None = None,
                  depth: int = 1) -> list[BoxCertificate]:
    """Certificates for m = k * inst.m over ``ks`` on one fixed subspace list."""
    if E is None:
        E = generate_subspace_list(inst, depth)
    return [certify(inst.with_m([k * v for v in inst.m]), E) for k in ks]


def log_ratio_spread(certs: Sequence[BoxCertificate]) -> tuple[float, float]:
    """(min, max) of log|S| - primal over a sweep."""
    vals = [c.scaled_log_volume - float(c.primal_value) for c in certs]
    return min(vals), max(vals)
