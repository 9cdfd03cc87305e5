"""Trilinear-form experiments on 1-D grids.

Functions are piecewise constant on cells ``[x0 + i h, x0 + (i+1) h)``.  The
form

    I_B(f, g, h) = iint B(f(y), g(x - y), h(x)) dx dy

is computed exactly for such step functions.  With s = y and t = x - y the
cell pair (i, j) covers a square on which s + t sweeps two consecutive
h-cells with equal weight, so

    I = H^2 sum_{i,j} (B(f_i, g_j, h_{i+j+o}) + B(f_i, g_j, h_{i+j+o+1})) / 2

where H is the spacing and o = x0 / H.  The same sum serves the s + t pairing
used for rearrangement, so no reflection is needed anywhere.  Terms with a
zero argument are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, signal, special

from .bfunc import BFunction

COMPONENTS = ("f", "g", "h")


class GridError(ValueError):
    """Functions live on different grids, or the grid cannot hold the data."""


class NumericError(ArithmeticError):
    """A computation produced non-finite values."""


# ---------------------------------------------------------------- grids


@dataclass(frozen=True, eq=False)
class GridFunction:
    x0: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("values must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(v)):
            raise NumericError("grid function has non-finite values")
        if np.any(v < 0):
            raise ValueError("grid function values must be nonnegative")
        if not self.h > 0:
            raise ValueError("spacing must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "h", float(self.h))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def mass(self) -> float:
        return float(self.h * self.values.sum())

    @property
    def edges(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(self.n + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + self.h * (np.arange(self.n) + 0.5)

    def same_grid(self, other: "GridFunction") -> bool:
        return self.n == other.n and self.x0 == other.x0 and self.h == other.h

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.x0, self.h, values)

    def scaled_to(self, mass: float) -> "GridFunction":
        m = self.mass
        if m <= 0:
            raise ValueError("cannot rescale a function of zero mass")
        return self.with_values(self.values * (mass / m))

    def __eq__(self, other):
        return (isinstance(other, GridFunction) and self.same_grid(other)
                and np.array_equal(self.values, other.values))


def grid(L: float = 16.0, N: int = 2048) -> tuple[float, float]:
    """(x0, h) for N cells on [-L, L]."""
    if N <= 0 or L <= 0:
        raise ValueError("need L > 0 and N > 0")
    return -float(L), 2.0 * L / N


def zeros(L: float = 16.0, N: int = 2048) -> GridFunction:
    x0, h = grid(L, N)
    return GridFunction(x0, h, np.zeros(N))


def indicator(lo: float, hi: float, L: float = 16.0, N: int = 2048, value: float = 1.0) -> GridFunction:
    """value on every cell lying inside [lo, hi]."""
    x0, h = grid(L, N)
    e = x0 + h * np.arange(N + 1)
    eps = 1e-9 * h
    inside = (e[:-1] >= lo - eps) & (e[1:] <= hi + eps)
    return GridFunction(x0, h, np.where(inside, value, 0.0))


@dataclass(frozen=True)
class Triple:
    f: GridFunction
    g: GridFunction
    h: GridFunction
    masses: tuple = ()

    def __post_init__(self):
        if not (self.f.same_grid(self.g) and self.f.same_grid(self.h)):
            raise GridError("f, g, h must share one grid")
        actual = (self.f.mass, self.g.mass, self.h.mass)
        if not self.masses:
            object.__setattr__(self, "masses", actual)
            return
        target = tuple(float(m) for m in self.masses)
        if len(target) != 3:
            raise ValueError("masses must have three entries")
        for name, a, t in zip(COMPONENTS, actual, target):
            if abs(a - t) > 1e-12 * max(abs(t), 1e-300):
                raise ValueError(f"mass of {name} is {a!r}, target {t!r}")
        object.__setattr__(self, "masses", target)

    def parts(self) -> tuple[GridFunction, GridFunction, GridFunction]:
        return self.f, self.g, self.h

    def replace_part(self, k: int, u: GridFunction) -> "Triple":
        parts = list(self.parts())
        parts[k] = u
        return Triple(*parts, masses=self.masses)


def _offset(u: GridFunction) -> int:
    o = u.x0 / u.h
    if abs(o - round(o)) > 1e-9:
        raise GridError("grid must have a node at 0 (x0 a multiple of the spacing)")
    return int(round(o))


# ---------------------------------------------------------------- the form


def _pos_pow(v: np.ndarray, a: float) -> np.ndarray:
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = np.power(v[pos], a)
    return out


def _conv(a, b, method):
    if method == "direct":
        return np.convolve(a, b)
    return signal.convolve(a, b, method=method)


def _h_weights(hc: np.ndarray, o: int) -> np.ndarray:
    """W[k] = (hc[k+o] + hc[k+o+1]) / 2 for k = i + j in 0..2N-2."""
    N = hc.size
    k = np.arange(2 * N - 1)
    out = np.zeros(2 * N - 1)
    for shift in (o, o + 1):
        idx = k + shift
        ok = (idx >= 0) & (idx < N)
        out[ok] += 0.5 * hc[idx[ok]]
    return out


def _monomial_form(terms, t: Triple, method) -> float:
    f, g, h = (u.values for u in t.parts())
    o = _offset(t.f)
    total = 0.0
    for c, (a, b, e) in terms:
        C = _conv(_pos_pow(f, a), _pos_pow(g, b), method)
        total += c * float(C @ _h_weights(_pos_pow(h, e), o))
    return total * t.f.h ** 2


def _general_form(B: BFunction, t: Triple, chunk: int = 64) -> float:
    f, g, h = (u.values for u in t.parts())
    N, o = f.size, _offset(t.f)
    jj = np.nonzero(g > 0)[0]
    rows = np.nonzero(f > 0)[0]
    total = 0.0
    for start in range(0, rows.size, chunk):
        ii = rows[start:start + chunk]
        fi = np.repeat(f[ii], jj.size)
        gj = np.tile(g[jj], ii.size)
        k = (ii[:, None] + jj[None, :]).ravel() + o
        for shift in (0, 1):
            idx = k + shift
            inside = (idx >= 0) & (idx < N)
            hv = np.where(inside, h[np.clip(idx, 0, N - 1)], 0.0)
            ok = hv > 0
            if ok.any():
                y = np.stack([fi[ok], gj[ok], hv[ok]], -1)
                total += 0.5 * float(B.evaluate(y).sum())
    return total * t.f.h ** 2


def eval_functional(B: BFunction, t: Triple, method: str = "auto") -> float:
    """I_B on a grid triple.  Finite monomial sums use convolutions.

    ``method`` is passed to :func:`scipy.signal.convolve` ('auto', 'fft',
    'direct'); 'general' forces the pairwise sum for any B.
    """
    if B.n != 3:
        raise ValueError("the trilinear form needs B of three arguments")
    terms = None if method == "general" else B.monomial_terms()
    if terms is None:
        val = _general_form(B, t)
    else:
        val = _monomial_form(terms, t, "auto" if method == "general" else method)
    if not math.isfinite(val):
        raise NumericError("non-finite objective")
    return val


# ---------------------------------------------------------------- rearrangement


def _center_out(N: int) -> np.ndarray:
    c = (N - 1) // 2
    k = np.arange(1, N)
    off = ((k + 1) // 2) * np.where(k % 2 == 1, 1, -1)
    return np.concatenate([[c], c + off])


def rearrange(u: GridFunction) -> GridFunction:
    """Cell-level symmetric decreasing rearrangement.

    The largest value goes to cell (N-1)//2, then alternately right and left.
    Ties keep their original index order.  When every distinct value occupies
    an even number of cells the result is symmetric about x = 0.
    """
    v = u.values
    order = np.lexsort((np.arange(v.size), -v))
    out = np.zeros_like(v)
    out[_center_out(v.size)] = v[order]
    return u.with_values(out)


def rearrange_triple(t: Triple) -> Triple:
    return Triple(*(rearrange(u) for u in t.parts()))


def rearrangement_gap(B: BFunction, t: Triple, method: str = "auto") -> float:
    """I_B(f*, g*, h*) - I_B(f, g, h)."""
    return eval_functional(B, rearrange_triple(t), method) - eval_functional(B, t, method)


def remark_counterexample(a1, a2, b1, b2, c1, c2, spacing: float = 0.5, L: float = 8.0) -> Triple:
    """Two-level step triple whose gap equals the third difference of B.

    f = a1 on [-5/2, 5/2] raised to a2 on [1/2, 3/2]; g likewise with b's;
    h = c1 on [-5, 5] raised to c2 on [-1, 1].
    """
    for lo, hi, name in ((a1, a2, "a"), (b1, b2, "b"), (c1, c2, "c")):
        if not 0 <= lo <= hi:
            raise ValueError(f"need 0 <= {name}1 <= {name}2, got {lo}, {hi}")
    N = int(round(2 * L / spacing))
    if abs(N * spacing - 2 * L) > 1e-12 or (1 / spacing) % 1:
        raise GridError("spacing must divide 1/2 and 2L")

    def two_level(wide, narrow, v1, v2):
        return (indicator(*wide, L=L, N=N, value=v1).values
                + indicator(*narrow, L=L, N=N, value=v2 - v1).values)

    x0, h = grid(L, N)
    f = GridFunction(x0, h, two_level((-2.5, 2.5), (0.5, 1.5), a1, a2))
    g = GridFunction(x0, h, two_level((-2.5, 2.5), (0.5, 1.5), b1, b2))
    hh = GridFunction(x0, h, two_level((-5, 5), (-1, 1), c1, c2))
    return Triple(f, g, hh)


# ---------------------------------------------------------------- dyadic layers


@dataclass
class LayerProfile:
    """Layer j holds the cells with value in [2^j, 2^{j+1})."""

    measures: dict
    mass: float

    @property
    def layer_masses(self) -> dict:
        return {j: math.ldexp(m, j) for j, m in self.measures.items()}

    def argmax(self) -> int:
        lm = self.layer_masses
        return max(sorted(lm), key=lambda j: lm[j])

    def tail(self, k: int, m: int) -> float:
        return sum(v for j, v in self.layer_masses.items() if abs(j - k) >= m)


def dyadic_decompose(u: GridFunction) -> LayerProfile:
    v = u.values
    pos = v > 0
    _, e = np.frexp(v[pos])
    j = e - 1  # v = mant * 2^e with mant in [1/2, 1)
    idx, counts = np.unique(j, return_counts=True)
    return LayerProfile({int(a): float(c) * u.h for a, c in zip(idx, counts)}, u.mass)


@dataclass
class ScaleReport:
    k: tuple
    peak_layer_mass: tuple
    localized: tuple
    tails: dict
    spread: int
    normalization_tails: dict

    def to_dict(self) -> dict:
        return {"k": list(self.k), "peak_layer_mass": list(self.peak_layer_mass),
                "localized": list(self.localized),
                "tails": {str(m): list(v) for m, v in self.tails.items()},
                "spread": self.spread,
                "normalization_tails": {str(r): list(v) for r, v in self.normalization_tails.items()}}


def scale_diagnostics(t: Triple, c0: float = 0.1, m_list: Sequence[int] = (1, 2, 3, 4),
                      rhos: Sequence[float] = (2.0, 4.0, 16.0)) -> ScaleReport:
    """Dominant dyadic layers of each function and how much mass sits away from them.

    ``c0`` is a report threshold only.  Masses must be normalized to 1.
    """
    for name, m in zip(COMPONENTS, t.masses):
        if abs(m - 1) > 1e-9:
            raise ValueError(f"scale diagnostics need unit masses; {name} has {m}")
    profiles = [dyadic_decompose(u) for u in t.parts()]
    ks = tuple(p.argmax() for p in profiles)
    peaks = tuple(p.layer_masses[k] for p, k in zip(profiles, ks))
    tails = {m: tuple(p.tail(k, m) for p, k in zip(profiles, ks)) for m in m_list}
    norm = {}
    for r in rhos:
        above = tuple(float(u.h * u.values[u.values > r].sum()) for u in t.parts())
        below = tuple(float(u.h * u.values[u.values < 1 / r].sum()) for u in t.parts())
        norm[r] = above + below
    return ScaleReport(ks, peaks, tuple(p >= c0 for p in peaks), tails,
                       abs(ks[0] - ks[1]) + abs(ks[0] - ks[2]), norm)


# ---------------------------------------------------------------- dilation


def dilate(u: GridFunction, lam: float, tol: float = 1e-12) -> GridFunction:
    """x -> lam * u(lam x), by differencing the cumulative mass at lam * edges.

    Exact when u is constant on blocks of lam cells (lam a power of two).
    """
    if not lam > 0:
        raise ValueError("dilation factor must be positive")
    if lam == 1:
        return u
    e = u.edges
    M = np.concatenate([[0.0], np.cumsum(u.values) * u.h])
    Ml = np.interp(lam * e, e, M)  # constant beyond the grid
    out = np.diff(Ml) / u.h
    new = u.with_values(np.maximum(out, 0.0))
    if abs(new.mass - u.mass) > tol * max(u.mass, 1e-300) + 1e-300:
        raise GridError(f"dilation by {lam} pushes mass off the grid")
    return new


def dilate_triple(t: Triple, lam: float) -> Triple:
    return Triple(*(dilate(u, lam) for u in t.parts()), masses=t.masses)


# ---------------------------------------------------------------- Gaussians


def gaussian(sigma: float, mass: float = 1.0, L: float = 16.0, N: int = 2048,
             mu: float = 0.0, max_loss: float = 1e-6) -> GridFunction:
    """Cell averages of mass * N(mu, sigma^2), rescaled to the exact mass."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    x0, h = grid(L, N)
    z = (x0 + h * np.arange(N + 1) - mu) / sigma
    # difference whichever tail is smaller so far cells keep relative accuracy
    right = special.ndtr(-z[:-1]) - special.ndtr(-z[1:])
    left = special.ndtr(z[1:]) - special.ndtr(z[:-1])
    p = np.where(z[:-1] >= 0, right, left)
    captured = float(p.sum())
    if 1 - captured > max_loss:
        raise GridError(f"sigma={sigma} loses {1 - captured:.2e} of its mass past the grid")
    p = np.maximum(p, 0.0)
    return GridFunction(x0, h, p * (mass / (h * p.sum())))


def gaussian_triple(sigmas: Sequence[float], masses: Sequence[float] = (1, 1, 1),
                    L: float = 16.0, N: int = 2048) -> Triple:
    parts = [gaussian(s, m, L, N) for s, m in zip(sigmas, masses)]
    return Triple(*parts, masses=tuple(float(m) for m in masses))


@dataclass
class GaussianFit:
    value: float
    sigmas: tuple
    triple: Triple
    table: list = field(default_factory=list, repr=False)


def best_gaussian(B: BFunction, masses=(1, 1, 1), sigmas: Sequence[float] = (1.0,),
                  L: float = 16.0, N: int = 2048, refine: bool = False) -> GaussianFit:
    """Best centered Gaussian triple over the product grid sigmas^3.

    With ``refine`` the winner is polished by Nelder-Mead on (log sg, log sh)
    with sf held fixed, which the dilation symmetry permits for
    degree-2-homogeneous B.
    """
    sig = [float(s) for s in sigmas]
    if not sig:
        raise ValueError("empty sigma grid")
    cache = {s: [gaussian(s, m, L, N) for m in masses] for s in sig}
    best = None
    table = []
    for sf in sig:
        for sg in sig:
            for sh in sig:
                t = Triple(cache[sf][0], cache[sg][1], cache[sh][2], masses=tuple(masses))
                v = eval_functional(B, t)
                table.append(((sf, sg, sh), v))
                if best is None or v > best[0]:
                    best = (v, (sf, sg, sh), t)
    value, s_best, t_best = best
    if refine:
        sf = s_best[0]

        def neg(p):
            try:
                return -eval_functional(B, gaussian_triple((sf, *np.exp(p)), masses, L, N))
            except GridError:
                return math.inf

        res = optimize.minimize(neg, np.log(s_best[1:]), method="Nelder-Mead",
                                options={"xatol": 1e-6, "fatol": 1e-14, "maxiter": 400})
        if -res.fun > value:
            s_best = (sf, *map(float, np.exp(res.x)))
            t_best = gaussian_triple(s_best, masses, L, N)
            value = eval_functional(B, t_best)
    return GaussianFit(value, tuple(s_best), t_best, table)


# ---------------------------------------------------------------- gradients and residuals


def _corr_weights(W: np.ndarray, v: np.ndarray, method) -> np.ndarray:
    """out[i] = sum_j v[j] W[i + j] for i in 0..N-1."""
    N = v.size
    full = _conv(W, v[::-1], method)  # index i + N - 1
    return full[N - 1:2 * N - 1]


def partial_densities(B: BFunction, t: Triple, k: int, method: str = "direct") -> np.ndarray:
    """dI/du_i divided by the spacing, for u the k-th function.

    Cells where u vanishes get 0.  Only finite monomial sums are supported.
    """
    terms = B.monomial_terms()
    if terms is None:
        raise NotImplementedError("gradients are implemented for monomial sums")
    f, g, h = (u.values for u in t.parts())
    N, o, H = f.size, _offset(t.f), t.f.h
    out = np.zeros(N)
    for c, ex in terms:
        a, b, e = ex
        F, G, Hc = _pos_pow(f, a), _pos_pow(g, b), _pos_pow(h, e)
        if k == 2:
            C = _conv(F, G, method)
            Cp = np.concatenate([[0.0], C, [0.0]])  # Cp[q + 1] = C[q]
            r = np.arange(N)
            val = np.zeros(N)
            for shift in (0, 1):
                q = r - o - shift
                ok = (q >= 0) & (q < C.size)
                val[ok] += 0.5 * Cp[q[ok] + 1]
            own, expo = h, e
        else:
            W = _h_weights(Hc, o)
            other = G if k == 0 else F
            val = _corr_weights(W, other, method)
            own, expo = (f, a) if k == 0 else (g, b)
        if expo == 0:
            continue
        out += c * expo * _pos_pow(own, expo - 1) * val
    out *= H
    out[t.parts()[k].values <= 0] = 0.0
    if not np.all(np.isfinite(out)):
        raise NumericError("non-finite gradient")
    return out


def window(u: GridFunction, k: float = 3.0) -> np.ndarray:
    """Indices of cells whose centre lies within k standard deviations of u's mean."""
    x, w = u.centers, u.values
    m = w.sum()
    if m <= 0:
        raise ValueError("window of a zero function")
    mu = float(x @ w / m)
    sd = math.sqrt(max(float(((x - mu) ** 2) @ w / m), 0.0))
    idx = np.nonzero(np.abs(x - mu) <= k * sd)[0]
    if idx.size == 0:
        idx = np.array([int(np.argmin(np.abs(x - mu)))])
    return idx


def el_residual(B: BFunction, t: Triple, component: str | int = "f", k: float = 3.0,
                method: str = "direct") -> GridFunction:
    """Euler-Lagrange residual of one component on its window.

    It is the derivative density of I_B in that component; a critical point
    under a mass constraint makes it constant on the support.
    """
    c = COMPONENTS.index(component) if isinstance(component, str) else int(component)
    u = t.parts()[c]
    idx = window(u, k)
    if np.any(u.values[idx] <= 0):
        raise ValueError(f"{COMPONENTS[c]} vanishes inside its window")
    r = partial_densities(B, t, c, method)[idx]
    return GridFunction(u.x0 + idx[0] * u.h, u.h, r)  # the window is contiguous


def residual_flatness(r: GridFunction | np.ndarray) -> float:
    """Variance over squared mean; 0 exactly when r is constant."""
    v = r.values if isinstance(r, GridFunction) else np.asarray(r, float)
    if v.size == 0:
        raise ValueError("empty window")
    if v.size == 1:
        return 0.0
    mean = float(v.mean())
    if mean == 0:
        return 0.0 if not np.any(v) else math.inf
    return float(v.var() / mean ** 2)


def triple_flatness(B: BFunction, t: Triple, k: float = 3.0, method: str = "direct"
                    ) -> tuple[float, tuple[float, float, float]]:
    """(max, per-component) residual flatness."""
    per = tuple(residual_flatness(el_residual(B, t, c, k, method)) for c in range(3))
    return max(per), per


def flatness_table(B: BFunction, sigmas: Sequence[float], masses=(1, 1, 1), L: float = 16.0,
                   N: int = 2048, k: float = 3.0) -> list[tuple[tuple, float]]:
    cache = {s: [gaussian(s, m, L, N) for m in masses] for s in sigmas}
    rows = []
    for sf in sigmas:
        for sg in sigmas:
            for sh in sigmas:
                t = Triple(cache[sf][0], cache[sg][1], cache[sh][2])
                rows.append(((sf, sg, sh), triple_flatness(B, t, k)[0]))
    return rows


# ---------------------------------------------------------------- ascent


@dataclass
class AscentResult:
    triple: Triple
    history: list
    steps: list


def ascend(B: BFunction, t: Triple, iters: int = 50, eta: float = 0.1, tol: float = 1e-12,
           rearrange_sweeps: bool = False, min_eta: float = 1e-6,
           method: str = "auto", callback: Callable | None = None) -> AscentResult:
    """Coordinate ascent with mass-preserving multiplicative steps.

    Each step replaces u by u * (1 + eta (D / Dbar - 1)), D the derivative
    density and Dbar its u-weighted mean, then rescales to the target mass.
    A step that lowers I_B is retried with eta halved; below ``min_eta`` the
    component is left unchanged.
    """
    cur = t
    val = eval_functional(B, cur, method)
    history = [val]
    steps = []
    for _ in range(iters):
        start = val
        for c in range(3):
            u = cur.parts()[c]
            D = np.maximum(partial_densities(B, cur, c, method), 0.0)
            Dbar = float(u.values @ D / u.values.sum())
            if not Dbar > 0:
                continue
            e = eta
            while e >= min_eta:
                new = u.values * (1 + e * (D / Dbar - 1))
                cand = cur.replace_part(c, u.with_values(np.maximum(new, 0.0)).scaled_to(cur.masses[c]))
                v = eval_functional(B, cand, method)
                if not math.isfinite(v):
                    raise NumericError("non-finite objective during ascent")
                if v >= val:
                    cur, val = cand, v
                    steps.append((c, e))
                    break
                e /= 2
        if rearrange_sweeps:
            cand = rearrange_triple(cur)
            cand = Triple(*cand.parts(), masses=cur.masses)
            v = eval_functional(B, cand, method)
            if v >= val:
                cur, val = cand, v
        history.append(val)
        if callback is not None:
            callback(len(history) - 1, val)
        if val - start <= tol * abs(start):
            break
    return AscentResult(cur, history, steps)


# ---------------------------------------------------------------- scale separation


def scale_sweep(B: BFunction, ms: Sequence[int] = range(11), sigma: float = 4.0,
                masses=(1.0, 1.0, 1.0), L: float = 32.0, N: int = 2 ** 17,
                c0: float = 0.1) -> list[dict]:
    """Normalized objective and layer spread as g is compressed by 2^m."""
    base = gaussian_triple((sigma,) * 3, masses, L, N)
    norm = float(B.evaluate(np.array(masses, float)))
    unit = Triple(*(u.scaled_to(1.0) for u in base.parts()))
    rows = []
    for m in ms:
        lam = 2.0 ** m
        t = base.replace_part(1, dilate(base.g, lam))
        tu = unit.replace_part(1, dilate(unit.g, lam))
        rep = scale_diagnostics(tu, c0)
        rows.append({"m": int(m), "normalized": eval_functional(B, t) / norm,
                     "spread": rep.spread, "k": list(rep.k)})
    return rows


__all__ = [
    "GridFunction", "Triple", "LayerProfile", "ScaleReport", "GaussianFit", "AscentResult",
    "GridError", "NumericError", "grid", "zeros", "indicator", "eval_functional", "rearrange",
    "rearrange_triple", "rearrangement_gap", "remark_counterexample", "dyadic_decompose",
    "scale_diagnostics", "dilate", "dilate_triple", "gaussian", "gaussian_triple",
    "best_gaussian", "partial_densities", "window", "el_residual", "residual_flatness",
    "triple_flatness", "flatness_table", "ascend", "scale_sweep",
]
