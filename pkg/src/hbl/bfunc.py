"""Size functions B and sampled checks of their structural conditions.

A size function is a small expression tree: monomials, sums, rho-compositions
of monomials, and integral families of monomials in a parameter t.  All node
kinds evaluate on numpy arrays whose last axis holds the n coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

LOG_RANGE = 6.0
TOL = 1e-9


def _pow(y: np.ndarray, s: float) -> np.ndarray:
    return np.power(y, s)


class BFunction:
    """Base node.  Subclasses implement ``evaluate`` on (..., n) arrays."""

    n: int

    def evaluate(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def partial(self, k: int, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def monomial_terms(self) -> list[tuple[float, tuple[float, ...]]] | None:
        """(coefficient, exponents) pairs when B is a finite sum of monomials."""
        return None

    def __call__(self, *args):
        if len(args) == 1:
            return eval_b(self, args[0])
        return eval_b(self, np.stack(np.broadcast_arrays(*[np.asarray(a, float) for a in args]), -1))

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Monomial(BFunction):
    """coeff * prod_j y_j^{s_j}."""

    s: tuple
    coeff: float = 1.0

    def __post_init__(self):
        exact = tuple(Fraction(v) if isinstance(v, (int, str, Fraction)) else v for v in self.s)
        object.__setattr__(self, "s", exact)
        if not all(math.isfinite(float(v)) for v in exact):
            raise ValueError("monomial exponents must be finite")

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def exponents(self) -> np.ndarray:
        return np.array([float(v) for v in self.s])

    def evaluate(self, y):
        out = np.full(y.shape[:-1], float(self.coeff))
        for k, sk in enumerate(self.exponents):
            if sk != 0:
                out = out * _pow(y[..., k], sk)
        return out

    def partial(self, k, y):
        sk = self.exponents[k]
        if sk == 0:
            return np.zeros(y.shape[:-1])
        rest = Monomial(tuple(v if i != k else 0 for i, v in enumerate(self.s)), self.coeff)
        return sk * _pow(y[..., k], sk - 1) * rest.evaluate(y)

    def monomial_terms(self):
        return [(float(self.coeff), tuple(self.exponents))]

    def to_spec(self):
        spec = {"kind": "monomial", "s": [str(v) if isinstance(v, Fraction) else v for v in self.s]}
        if self.coeff != 1:
            spec["coeff"] = self.coeff
        return spec


@dataclass(frozen=True)
class Sum(BFunction):
    terms: tuple

    @property
    def n(self) -> int:
        return self.terms[0].n

    def evaluate(self, y):
        return sum(t.evaluate(y) for t in self.terms)

    def partial(self, k, y):
        return sum(t.partial(k, y) for t in self.terms)

    def monomial_terms(self):
        out = []
        for t in self.terms:
            sub = t.monomial_terms()
            if sub is None:
                return None
            out.extend(sub)
        return out

    def to_spec(self):
        return {"kind": "sum", "terms": [t.to_spec() for t in self.terms]}


@dataclass(frozen=True)
class Rho:
    """Outer function of a rho-composition: weighted sum, min, max or power mean."""

    kind: str
    weights: tuple = ()
    p: float = 1.0

    KINDS = ("sum", "min", "max", "power_mean")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown rho kind {self.kind!r}; expected one of {self.KINDS}")
        if self.kind == "power_mean" and (self.p > 1 or self.p == 0):
            raise ValueError("power_mean exponent must be nonzero and <= 1")

    def _w(self, n):
        w = np.asarray(self.weights, float) if self.weights else np.ones(n)
        if len(w) != n:
            raise ValueError(f"rho has {len(w)} weights for {n} inputs")
        return w

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, float)
        w = self._w(z.shape[-1])
        if self.kind == "sum":
            return z @ w
        if self.kind == "min":
            return np.min(z * w, axis=-1)
        if self.kind == "max":
            return np.max(z * w, axis=-1)
        with np.errstate(divide="ignore"):
            inner = (w * np.power(z, self.p)).sum(-1) / w.sum()
            return np.power(inner, 1.0 / self.p)

    def grad(self, z: np.ndarray) -> np.ndarray:
        w = self._w(z.shape[-1])
        if self.kind == "sum":
            return np.broadcast_to(w, z.shape).copy()
        if self.kind in ("min", "max"):
            pick = np.argmin(z * w, -1) if self.kind == "min" else np.argmax(z * w, -1)
            out = np.zeros_like(z)
            np.put_along_axis(out, pick[..., None], w[pick][..., None], -1)
            return out
        val = self(z)[..., None]
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (w / w.sum()) * np.power(z / val, self.p - 1)
        return np.nan_to_num(g)

    def to_spec(self):
        spec = {"kind": self.kind}
        if self.weights:
            spec["weights"] = list(self.weights)
        if self.kind == "power_mean":
            spec["p"] = self.p
        return spec


@dataclass(frozen=True)
class RhoComposed(BFunction):
    """rho(P_1(y), ..., P_k(y)) for monomials P_i."""

    rho: Rho
    inner: tuple

    @property
    def n(self) -> int:
        return self.inner[0].n

    def evaluate(self, y):
        return self.rho(np.stack([P.evaluate(y) for P in self.inner], -1))

    def partial(self, k, y):
        z = np.stack([P.evaluate(y) for P in self.inner], -1)
        g = self.rho.grad(z)
        return sum(g[..., i] * P.partial(k, y) for i, P in enumerate(self.inner))

    def monomial_terms(self):
        if self.rho.kind != "sum":
            return None
        w = self.rho._w(len(self.inner))
        return [(wi * c, s) for wi, P in zip(w, self.inner) for c, s in P.monomial_terms()]

    def to_spec(self):
        return {"kind": "rho", "rho": self.rho.to_spec(), "inner": [P.to_spec() for P in self.inner]}


def simpson_weights(a: float, b: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError("composite Simpson needs an odd node count >= 3")
    t = np.linspace(a, b, nodes)
    w = np.ones(nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return t, w * (b - a) / (3 * (nodes - 1))


@dataclass(frozen=True)
class IntegralFamily(BFunction):
    """integral over [lower, upper] of prod_j y_j^{base_j + slope_j t} dt.

    The defaults give the family int_{-1/6}^{1/6} y1^{2/3-t/2} y2^{2/3-t/2} y3^{2/3+t} dt.
    """

    lower: float = -1.0 / 6.0
    upper: float = 1.0 / 6.0
    base: tuple = (2 / 3, 2 / 3, 2 / 3)
    slope: tuple = (-0.5, -0.5, 1.0)
    nodes: int = 129

    @property
    def n(self) -> int:
        return len(self.base)

    def _quad(self) -> list[tuple[float, tuple[float, ...]]]:
        t, w = simpson_weights(self.lower, self.upper, self.nodes)
        b, s = np.asarray(self.base, float), np.asarray(self.slope, float)
        return [(float(wi), tuple(b + s * ti)) for ti, wi in zip(t, w)]

    def evaluate(self, y):
        with np.errstate(divide="ignore"):
            logy = np.log(y)
        t, w = simpson_weights(self.lower, self.upper, self.nodes)
        b, s = np.asarray(self.base, float), np.asarray(self.slope, float)
        with np.errstate(invalid="ignore"):
            expo = b[None, :] + t[:, None] * s[None, :]  # (nodes, n)
            vals = np.exp(np.einsum("...k,qk->...q", logy, expo))
        vals = np.nan_to_num(vals)  # 0 * log 0 never arises for positive exponents
        return vals @ w

    def partial(self, k, y):
        return sum(c * Monomial(s).partial(k, y) for c, s in self._quad())

    def monomial_terms(self):
        return self._quad()

    def to_spec(self):
        return {"kind": "integral_family", "range": [self.lower, self.upper],
                "base": list(self.base), "slope": list(self.slope), "nodes": self.nodes}


def from_spec(spec: dict) -> BFunction:
    """Parse the JSON vocabulary used in B files."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("B spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "monomial":
        if "s" not in spec:
            raise ValueError("monomial spec needs field 's'")
        return Monomial(tuple(_exact(v) for v in spec["s"]), float(spec.get("coeff", 1.0)))
    if kind == "sum":
        terms = tuple(from_spec(t) for t in spec.get("terms", ()))
        if not terms:
            raise ValueError("sum spec needs a nonempty 'terms' list")
        return Sum(terms)
    if kind == "rho":
        r = spec.get("rho", {})
        rho = Rho(r.get("kind", "sum"), tuple(r.get("weights", ())), float(r.get("p", 1.0)))
        inner = tuple(from_spec(t) for t in spec.get("inner", ()))
        if not inner or not all(isinstance(P, Monomial) for P in inner):
            raise ValueError("rho spec needs a nonempty 'inner' list of monomials")
        return RhoComposed(rho, inner)
    if kind == "integral_family":
        lo, hi = spec.get("range", (-1 / 6, 1 / 6))
        return IntegralFamily(float(lo), float(hi), tuple(float(v) for v in spec.get("base", (2 / 3,) * 3)),
                              tuple(float(v) for v in spec.get("slope", (-0.5, -0.5, 1.0))),
                              int(spec.get("nodes", 129)))
    raise ValueError(f"unknown B kind {kind!r}")


def _exact(v):
    if isinstance(v, float):
        return v
    return Fraction(v)


def eval_b(B: BFunction, y) -> np.ndarray | float:
    y = np.asarray(y, float)
    if np.any(y < 0):
        raise ValueError("B is defined on the nonnegative orthant only")
    if y.shape[-1] != B.n:
        raise ValueError(f"B takes {B.n} arguments, got {y.shape[-1]}")
    out = B.evaluate(y)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------- checks


@dataclass
class Sampler:
    """Log-uniform draws on [e^-r, e^r] from a seeded generator."""

    samples: int = 10_000
    seed: int = 0
    log_range: float = LOG_RANGE

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def draw(self, rng: np.random.Generator, *shape) -> np.ndarray:
        return np.exp(rng.uniform(-self.log_range, self.log_range, size=shape))


@dataclass
class CheckReport:
    condition: str
    samples: int
    worst: float
    threshold: float
    passed: bool
    witness: dict | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"condition": self.condition, "samples": self.samples, "worst": self.worst,
                "threshold": self.threshold, "passed": self.passed, "witness": self.witness,
                "seed": self.seed, **self.extra}


def _fn(F) -> Callable:
    if isinstance(F, BFunction):
        return lambda x, y, z: F.evaluate(np.stack(np.broadcast_arrays(x, y, z), -1))
    return F


def delta3(F, a, b, c, d, e, f):
    """Third-order difference of F over [a,b] x [c,d] x [e,f]."""
    F = _fn(F)
    return (F(b, d, f) - F(a, d, f) - F(b, c, f) - F(b, d, e)
            + F(b, c, e) + F(a, d, e) + F(a, c, f) - F(a, c, e))


def _corner_scale(F, a, b, c, d, e, f):
    F = _fn(F)
    corners = [F(x, y, z) for x in (a, b) for y in (c, d) for z in (e, f)]
    return np.max(np.abs(np.stack(np.broadcast_arrays(*corners))), axis=0)


def random_rectangles(sampler: Sampler, rng=None) -> tuple[np.ndarray, ...]:
    rng = sampler.rng() if rng is None else rng
    pts = np.sort(sampler.draw(rng, 3, 2, sampler.samples), axis=1)
    return pts[0, 0], pts[0, 1], pts[1, 0], pts[1, 1], pts[2, 0], pts[2, 1]


def check_delta3_nonneg(F, sampler: Sampler | None = None, tol: float = TOL) -> CheckReport:
    """Pass iff every sampled Delta_3 >= -tol relative to the corner magnitudes."""
    sampler = sampler or Sampler()
    R = random_rectangles(sampler)
    vals = delta3(F, *R)
    scale = np.maximum(_corner_scale(F, *R), np.finfo(float).tiny)
    rel = vals / scale
    i = int(np.argmin(rel))
    worst = float(rel[i])
    passed = worst >= -tol
    witness = None if passed else {"rectangle": [float(r[i]) for r in R], "delta3": float(vals[i])}
    return CheckReport("delta3_nonneg", sampler.samples, worst, -tol, passed, witness, sampler.seed)


def polytope_ratio(B: BFunction, vertices, lam, y, mode: str = "max") -> np.ndarray:
    """B(lam * y) / (ext_{s in vertices} lam^s * B(y)), ext = max or min."""
    V = np.asarray([[float(v) for v in s] for s in vertices])
    lam, y = np.asarray(lam, float), np.asarray(y, float)
    logs = np.log(lam) @ V.T
    ext = logs.max(-1) if mode == "max" else logs.min(-1)
    return B.evaluate(lam * y) / (np.exp(ext) * B.evaluate(y))


def check_polytope_conditions(B: BFunction, vertices, mode: str = "max",
                              sampler: Sampler | None = None, bound: float = 1e2,
                              probes: Sequence = ()) -> CheckReport:
    """Sampled sup (mode max) or inf (mode min) of the vertex-normalized ratio.

    The lambda = 1 probe is always included, so an in-polytope monomial
    reports constant exactly 1.  Extra (lambda, y) pairs may be given in
    ``probes``.  Pass iff sup <= bound (max) or inf >= 1/bound (min).
    """
    if mode not in ("max", "min"):
        raise ValueError("mode must be 'max' or 'min'")
    sampler = sampler or Sampler()
    rng = sampler.rng()
    n = B.n
    lam = sampler.draw(rng, sampler.samples, n)
    y = sampler.draw(rng, sampler.samples, n)
    lam = np.vstack([lam, np.ones((1, n))] + [np.atleast_2d(p[0]) for p in probes])
    y = np.vstack([y, np.ones((1, n))] + [np.atleast_2d(p[1]) for p in probes])
    r = polytope_ratio(B, vertices, lam, y, mode)
    i = int(np.argmax(r) if mode == "max" else np.argmin(r))
    worst = float(r[i])
    passed = worst <= bound if mode == "max" else worst >= 1.0 / bound
    cond = "condition2" if mode == "max" else "condition3"
    witness = None if passed else {"lambda": lam[i].tolist(), "y": y[i].tolist(), "ratio": worst}
    return CheckReport(cond, len(r), worst, bound if mode == "max" else 1.0 / bound, passed,
                       witness, sampler.seed)


def scaling_ratio(B: BFunction, d: int, dims, R, y) -> np.ndarray:
    R = np.asarray(R, float)[..., None]
    y = np.asarray(y, float)
    return B.evaluate(np.power(R, np.asarray(dims, float)) * y) / (R[..., 0] ** d * B.evaluate(y))


def check_scaling(B: BFunction, d: int, dims: Sequence[int], sampler: Sampler | None = None,
                  bound: float = 1e2) -> CheckReport:
    """Sampled range of B(R^{d_j} y_j) / (R^d B(y)); pass iff inside [1/bound, bound]."""
    sampler = sampler or Sampler()
    rng = sampler.rng()
    R = sampler.draw(rng, sampler.samples)
    y = sampler.draw(rng, sampler.samples, B.n)
    r = scaling_ratio(B, d, dims, R, y)
    hi, lo = int(np.argmax(r)), int(np.argmin(r))
    worst = float(max(r[hi], 1.0 / r[lo]))
    passed = worst <= bound
    i = hi if r[hi] >= 1.0 / r[lo] else lo
    witness = None if passed else {"R": float(R[i]), "y": y[i].tolist(), "ratio": float(r[i])}
    return CheckReport("scaling", sampler.samples, worst, bound, passed, witness, sampler.seed,
                       {"sup": float(r[hi]), "inf": float(r[lo])})


def check_rho_conditions(rho: Rho, n: int = 2, sampler: Sampler | None = None,
                         bound: float = 1e2, tol: float = TOL) -> CheckReport:
    """Max-homogeneity constant and superadditivity defect of rho.

    Basis-vector pairs (e_i, e_k) are probed in addition to the samples.
    """
    sampler = sampler or Sampler()
    rng = sampler.rng()
    lam = sampler.draw(rng, sampler.samples, n)
    y = sampler.draw(rng, sampler.samples, n)
    C = rho(lam * y) / (lam.max(-1) * rho(y))
    y1 = sampler.draw(rng, sampler.samples, n)
    y2 = sampler.draw(rng, sampler.samples, n)
    eye = np.eye(n)
    pairs = [(i, k) for i in range(n) for k in range(n) if i != k]
    if pairs:
        y1 = np.vstack([y1, eye[[i for i, _ in pairs]]])
        y2 = np.vstack([y2, eye[[k for _, k in pairs]]])
    whole = rho(y1 + y2)
    # min-type rho vanishes on e_i + e_k; measure the defect absolutely there
    defect = (rho(y1) + rho(y2) - whole) / np.where(whole > 0, whole, 1.0)
    ci, di = int(np.argmax(C)), int(np.argmax(defect))
    worst_C, worst_defect = float(C[ci]), float(defect[di])
    passed = worst_C <= bound and worst_defect <= tol
    witness = None
    if not passed:
        witness = ({"y1": y1[di].tolist(), "y2": y2[di].tolist(), "defect": worst_defect}
                   if worst_defect > tol else
                   {"lambda": lam[ci].tolist(), "y": y[ci].tolist(), "C": worst_C})
    return CheckReport("rho", sampler.samples, worst_defect, tol, passed, witness, sampler.seed,
                       {"C": worst_C, "superadditivity_defect": worst_defect})


def check_monotone(B: BFunction, sampler: Sampler | None = None, tol: float = TOL) -> CheckReport:
    """Sampled check that B does not decrease when one coordinate grows."""
    sampler = sampler or Sampler()
    rng = sampler.rng()
    y = sampler.draw(rng, sampler.samples, B.n)
    k = rng.integers(0, B.n, sampler.samples)
    bump = np.exp(rng.uniform(0, 1, sampler.samples))
    y2 = y.copy()
    y2[np.arange(len(k)), k] *= bump
    b1, b2 = B.evaluate(y), B.evaluate(y2)
    rel = (b2 - b1) / np.maximum(np.abs(b1), np.finfo(float).tiny)
    i = int(np.argmin(rel))
    passed = rel[i] >= -tol
    witness = None if passed else {"y": y[i].tolist(), "y_bumped": y2[i].tolist()}
    return CheckReport("monotone", sampler.samples, float(rel[i]), -tol, bool(passed), witness, sampler.seed)


# ---------------------------------------------------------------- bundled B's

YOUNG_SYMMETRIC = Monomial((Fraction(2, 3),) * 3)


def young_vertex_monomials() -> list[Monomial]:
    return [Monomial(s) for s in ((1, 1, 0), (1, 0, 1), (0, 1, 1))]


def two_monomial_example() -> Sum:
    """A sum of two distinct admissible monomials with exponent sums 2."""
    return Sum((Monomial((Fraction(7, 20), Fraction(9, 10), Fraction(3, 4))),
                Monomial((Fraction(19, 20), Fraction(2, 5), Fraction(13, 20)))))
