"""Asymptotically almost periodic functions over a finitely generated frequency module.

A function is a finite sum of tents (the part vanishing at infinity) plus a
trigonometric polynomial ``sum c_k exp(i <k, lambda> t)`` over a fixed
rationally independent frequency basis ``lambda``.  The spectrum of this
algebra is modelled as the real line glued to the torus ``T^d``: a real
point evaluates the function, a torus point ``theta`` evaluates only the
almost periodic part at ``exp(i <k, theta>)`` and kills the tents.

Means are computed by the composite midpoint rule.  For structured inputs
the returned error bound is analytic: a truncation part of order ``1/T``
plus a separately bounded quadrature part.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi
FREQ_ATOL = 1e-9
_CHUNK = 1 << 18


def angular_distance(a: float, b: float) -> float:
    diff = abs(a - b) % TWO_PI
    return min(diff, TWO_PI - diff)


def _angular_distance_array(a: np.ndarray, b: float) -> np.ndarray:
    diff = np.abs(a - b) % TWO_PI
    return np.minimum(diff, TWO_PI - diff)


@dataclass(frozen=True)
class FrequencyBasis:
    """Positive, strictly increasing generators screened for small integer relations.

    Independence is declared by the caller; construction only rejects a
    relation ``|sum k_j lambda_j| < tol_rel`` with ``0 < max|k_j| <= k_rel``.
    """

    lambdas: tuple
    k_rel: int = 10
    tol_rel: float = 1e-9

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if not lam:
            raise ValueError("frequency basis needs at least one generator")
        if any(x <= 0 or not math.isfinite(x) for x in lam):
            raise ValueError("frequencies must be positive and finite")
        if any(b <= a for a, b in zip(lam, lam[1:])):
            raise ValueError("frequencies must be strictly increasing")
        relation = self.find_relation()
        if relation is not None:
            raise ValueError(f"frequencies satisfy the integer relation {relation}")

    @property
    def d(self) -> int:
        return len(self.lambdas)

    def find_relation(self) -> Optional[tuple]:
        if self.d < 2:
            return None
        rng = np.arange(-self.k_rel, self.k_rel + 1)
        grid = np.array(list(itertools.product(rng, repeat=self.d)), dtype=np.int64)
        grid = grid[np.any(grid != 0, axis=1)]
        values = np.abs(grid @ np.array(self.lambdas))
        hit = np.flatnonzero(values < self.tol_rel)
        if hit.size:
            return tuple(int(x) for x in grid[hit[0]])
        return None

    def frequency(self, k: Sequence[int]) -> float:
        return math.fsum(kj * lj for kj, lj in zip(k, self.lambdas))

    def to_json(self) -> dict:
        return {"lambda": list(self.lambdas)}


def _key(k, d: int) -> tuple:
    key = tuple(int(x) for x in k)
    if len(key) != d:
        raise ValueError(f"frequency vector {key} has length {len(key)}, expected {d}")
    return key


@dataclass(frozen=True)
class TrigPolynomial:
    basis: FrequencyBasis
    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        d = self.basis.d
        clean: dict[tuple, complex] = {}
        for k, c in dict(self.coeffs).items():
            key = _key(k, d)
            clean[key] = clean.get(key, 0j) + complex(c)
        clean = {k: c for k, c in sorted(clean.items()) if c != 0}
        object.__setattr__(self, "coeffs", clean)

    def __hash__(self):
        return hash((self.basis, tuple(self.coeffs.items())))

    @classmethod
    def constant(cls, basis: FrequencyBasis, c: complex = 1.0) -> "TrigPolynomial":
        return cls(basis, {(0,) * basis.d: c})

    @classmethod
    def monomial(cls, basis: FrequencyBasis, k: Sequence[int], c: complex = 1.0) -> "TrigPolynomial":
        return cls(basis, {tuple(k): c})

    @property
    def zero_key(self) -> tuple:
        return (0,) * self.basis.d

    @property
    def mean(self) -> complex:
        return self.coeffs.get(self.zero_key, 0j)

    def coefficient(self, k: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(k), 0j)

    def frequencies(self) -> dict[tuple, float]:
        return {k: self.basis.frequency(k) for k in self.coeffs}

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros(t_arr.shape, dtype=complex)
        for k, c in self.coeffs.items():
            out += c * np.exp(1j * self.basis.frequency(k) * t_arr)
        return out if out.ndim else complex(out)

    def at_torus(self, theta: Sequence[float]) -> complex:
        if len(theta) != self.basis.d:
            raise ValueError(f"torus point has {len(theta)} angles, basis has dimension {self.basis.d}")
        return complex(sum(c * np.exp(1j * math.fsum(kj * tj for kj, tj in zip(k, theta)))
                           for k, c in self.coeffs.items()))

    def _check(self, other: "TrigPolynomial") -> None:
        if other.basis != self.basis:
            raise ValueError("trigonometric polynomials over different bases")

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return TrigPolynomial(self.basis, out)

    def __neg__(self) -> "TrigPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + (-other)

    def scale(self, a: complex) -> "TrigPolynomial":
        return TrigPolynomial(self.basis, {k: a * c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, TrigPolynomial):
            return ap_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def abs_sum(self) -> float:
        return math.fsum(abs(c) for c in self.coeffs.values())

    def torus_lipschitz(self) -> float:
        """Lipschitz constant on the torus for the max-angle metric: ``sum |c_k| |k|_1``."""
        return math.fsum(abs(c) * sum(abs(x) for x in k) for k, c in self.coeffs.items())

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(self.coefficient(tuple(-x for x in k)) - c.conjugate()) <= tol
                   for k, c in self.coeffs.items())

    def to_json(self) -> list:
        return [{"k": list(k), "re": c.real, "im": c.imag} for k, c in self.coeffs.items()]


def ap_product(f: TrigPolynomial, g: TrigPolynomial) -> TrigPolynomial:
    """Coefficient convolution ``(fg)_k = sum_{a+b=k} f_a g_b``."""
    f._check(g)
    out: dict[tuple, complex] = {}
    for a, ca in f.coeffs.items():
        for b, cb in g.coeffs.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0j) + ca * cb
    return TrigPolynomial(f.basis, out)


@dataclass(frozen=True)
class Tent:
    center: float
    halfwidth: float
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ValueError("tent half-width must be positive")
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "halfwidth", float(self.halfwidth))
        object.__setattr__(self, "amplitude", complex(self.amplitude))


@dataclass(frozen=True)
class BumpFunction:
    tents: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tents", tuple(self.tents))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros(t_arr.shape, dtype=complex)
        for tent in self.tents:
            out += tent.amplitude * np.maximum(0.0, 1.0 - np.abs(t_arr - tent.center) / tent.halfwidth)
        return out if out.ndim else complex(out)

    @property
    def mass(self) -> complex:
        """Integral over the line."""
        return sum((tent.amplitude * tent.halfwidth for tent in self.tents), 0j)

    @property
    def abs_mass(self) -> float:
        return math.fsum(abs(tent.amplitude) * tent.halfwidth for tent in self.tents)

    def breakpoints(self) -> list[float]:
        pts = set()
        for tent in self.tents:
            pts.update((tent.center - tent.halfwidth, tent.center, tent.center + tent.halfwidth))
        return sorted(pts)

    def sup_norm(self) -> float:
        # |piecewise linear| is convex on each piece, so the max sits on a breakpoint
        pts = self.breakpoints()
        return float(np.max(np.abs(self(np.array(pts))))) if pts else 0.0

    def support(self) -> Optional[tuple[float, float]]:
        if not self.tents:
            return None
        return (min(t.center - t.halfwidth for t in self.tents),
                max(t.center + t.halfwidth for t in self.tents))

    def to_json(self) -> list:
        return [{"center": t.center, "halfwidth": t.halfwidth, "re": t.amplitude.real, "im": t.amplitude.imag}
                for t in self.tents]


@dataclass(frozen=True)
class AAPFunction:
    c0part: BumpFunction
    appart: TrigPolynomial

    @property
    def basis(self) -> FrequencyBasis:
        return self.appart.basis

    def __call__(self, t):
        return self.c0part(t) + self.appart(t)

    def to_json(self) -> dict:
        return {"basis": self.basis.to_json(), "ap": self.appart.to_json(), "bumps": self.c0part.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "AAPFunction":
        try:
            basis = FrequencyBasis(tuple(data["basis"]["lambda"]))
            coeffs: dict[tuple, complex] = {}
            for term in data.get("ap", []):
                k = _key(term["k"], basis.d)
                coeffs[k] = coeffs.get(k, 0j) + complex(term.get("re", 0.0), term.get("im", 0.0))
            tents = tuple(Tent(b["center"], b["halfwidth"], complex(b.get("re", 0.0), b.get("im", 0.0)))
                          for b in data.get("bumps", []))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad AAP function JSON: {exc}") from exc
        return cls(BumpFunction(tents), TrigPolynomial(basis, coeffs))

    @classmethod
    def build(cls, basis: FrequencyBasis, coeffs: Optional[Mapping] = None,
              tents: Iterable[Tent] = ()) -> "AAPFunction":
        return cls(BumpFunction(tuple(tents)), TrigPolynomial(basis, coeffs or {}))


Structured = Union[AAPFunction, TrigPolynomial, BumpFunction]


@dataclass(frozen=True)
class RealPoint:
    t: float


@dataclass(frozen=True)
class TorusPoint:
    theta: tuple

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(x) % TWO_PI for x in self.theta))

    @property
    def d(self) -> int:
        return len(self.theta)


SpectrumPoint = Union[RealPoint, TorusPoint]


def evaluate(f: Structured, t: float) -> complex:
    return complex(f(t))


def natural_map(basis: FrequencyBasis, t: float) -> TorusPoint:
    """Image of ``t`` in the torus: angles ``lambda_j t mod 2 pi``."""
    return TorusPoint(tuple((lam * t) % TWO_PI for lam in basis.lambdas))


def embed(t: float) -> RealPoint:
    """The real line sits inside the spectrum as itself."""
    return RealPoint(float(t))


def evaluate_character(p: SpectrumPoint, f: Structured) -> complex:
    if isinstance(p, RealPoint):
        return evaluate(f, p.t)
    if isinstance(f, BumpFunction):
        return 0j
    ap = f.appart if isinstance(f, AAPFunction) else f
    if p.d != ap.basis.d:
        raise ValueError(f"torus point of dimension {p.d} against basis of dimension {ap.basis.d}")
    return ap.at_torus(p.theta)


@dataclass(frozen=True)
class MeanEstimate:
    value: complex
    bound: float
    truncation: float
    quadrature: float
    T: float
    panels: int


def default_panels(T: float, max_frequency: float) -> int:
    return max(1, math.ceil(4.0 * T * (max_frequency + 1.0)))


def _split(f) -> tuple[Optional[BumpFunction], Optional[TrigPolynomial]]:
    if isinstance(f, AAPFunction):
        return f.c0part, f.appart
    if isinstance(f, TrigPolynomial):
        return None, f
    if isinstance(f, BumpFunction):
        return f, None
    return None, None


def _midpoint_mean(g: Callable, T: float, panels: int) -> complex:
    h = 2.0 * T / panels
    re_parts, im_parts = [], []
    for start in range(0, panels, _CHUNK):
        idx = np.arange(start, min(panels, start + _CHUNK), dtype=float)
        vals = np.asarray(g(-T + (idx + 0.5) * h), dtype=complex)
        re_parts.append(math.fsum(vals.real))
        im_parts.append(math.fsum(vals.imag))
    return complex(math.fsum(re_parts), math.fsum(im_parts)) * (h / (2.0 * T))


def _sinc_ratio(x: float) -> float:
    """``x / sin x`` for the midpoint-rule distortion of an oscillation; infinite past pi."""
    x = abs(x)
    if x == 0:
        return 1.0
    if x >= math.pi:
        return math.inf
    return x / math.sin(x)


def _structured_bounds(bump, ap, mu: float, T: float, h: float) -> tuple[float, float]:
    truncation = quadrature = 0.0
    if ap is not None:
        for k, c in ap.coeffs.items():
            nu = ap.basis.frequency(k) - mu
            if abs(nu) <= FREQ_ATOL:
                if nu != 0.0:
                    truncation += abs(c) * min(2.0, (nu * T) ** 2 / 6.0)
                    quadrature += abs(c) * (_sinc_ratio(nu * h / 2.0) - 1.0)
                continue
            base = abs(c) / (T * abs(nu))
            truncation += base
            quadrature += base * (_sinc_ratio(nu * h / 2.0) - 1.0)
    if bump is not None:
        for tent in bump.tents:
            a, w = abs(tent.amplitude), tent.halfwidth
            truncation += a * w / (2.0 * T)
            if mu == 0.0:
                # linear between kinks; only the (at most three) kink panels err
                quadrature += 3.0 * a * h * h / (4.0 * w) / (2.0 * T)
            else:
                quadrature += a * (1.0 / w + abs(mu)) * (2.0 * w / h + 2.0) * h * h / 4.0 / (2.0 * T)
    return truncation, quadrature


def _rounding(bump, ap, mu: float, T: float) -> float:
    """Floating-point slack: phases ``omega t`` lose about ``|omega| T`` ulps each."""
    scale = (bump.sup_norm() if bump is not None else 0.0) + (ap.abs_sum() if ap is not None else 0.0)
    return 8.0 * sys.float_info.epsilon * scale * (2.0 + T * (_max_frequency(ap) + abs(mu)))


def _max_frequency(ap: Optional[TrigPolynomial]) -> float:
    if ap is None or not ap.coeffs:
        return 0.0
    return max(abs(w) for w in ap.frequencies().values())


def bohr_mean(f, T: float, panels: Optional[int] = None, *, lipschitz: Optional[float] = None) -> MeanEstimate:
    """Midpoint-rule estimate of ``(1/2T) int_{-T}^{T} f`` with an error bound.

    For a structured function the bound is against the Bohr mean ``c_0``;
    for a plain callable only the quadrature error is bounded, and only when
    a Lipschitz constant of the integrand is supplied.
    """
    return _shifted_mean(f, 0.0, T, panels, lipschitz)


def fourier_bohr(f, mu: float, T: float, panels: Optional[int] = None, *,
                 lipschitz: Optional[float] = None) -> MeanEstimate:
    """Bohr mean of ``f(t) exp(-i mu t)``; tends to the coefficient at frequency ``mu``."""
    return _shifted_mean(f, float(mu), T, panels, lipschitz)


def _shifted_mean(f, mu: float, T: float, panels: Optional[int], lipschitz: Optional[float]) -> MeanEstimate:
    if not T > 0:
        raise ValueError("averaging half-length T must be positive")
    bump, ap = _split(f)
    structured = bump is not None or ap is not None
    if panels is None:
        panels = default_panels(T, _max_frequency(ap) + abs(mu))
    if panels < 1:
        raise ValueError("panel count must be positive")
    panels = int(panels)
    h = 2.0 * T / panels
    if mu == 0.0:
        g = f
    else:
        def g(t):
            return f(t) * np.exp(-1j * mu * t)
    value = _midpoint_mean(g, T, panels)
    if structured:
        truncation, quadrature = _structured_bounds(bump, ap, mu, T, h)
        quadrature += _rounding(bump, ap, mu, T)
    else:
        truncation = math.nan
        quadrature = math.inf if lipschitz is None else lipschitz * h / 4.0
    bound = quadrature if not structured else truncation + quadrature
    return MeanEstimate(value, bound, truncation, quadrature, float(T), panels)


def coefficient_target(f: Structured, mu: float) -> complex:
    """The exact Fourier-Bohr coefficient of a structured function at frequency ``mu``."""
    _, ap = _split(f)
    if ap is None:
        return 0j
    return sum((c for k, c in ap.coeffs.items() if abs(ap.basis.frequency(k) - mu) <= FREQ_ATOL), 0j)


@dataclass(frozen=True)
class DecompositionReport:
    estimates: dict
    bounds: dict
    reconstruction: TrigPolynomial
    residuals: tuple          # (window start, max |f - reconstruction| on the window)
    errors: Optional[dict] = None
    support_in_box: Optional[bool] = None
    within_bound: Optional[bool] = None

    @property
    def max_error(self) -> Optional[float]:
        return None if self.errors is None else max(self.errors.values(), default=0.0)


def decompose(f, basis: FrequencyBasis, K: int, T: float, tol: float, *, panels: Optional[int] = None,
              windows: Sequence[float] = (0.0, 10.0, 100.0, 1000.0), width: float = 10.0,
              samples: int = 2001) -> DecompositionReport:
    """Estimate the almost periodic part by Fourier-Bohr coefficients on the box ``|k|_inf <= K``."""
    if K < 0:
        raise ValueError("box size K must be non-negative")
    if not tol > 0:
        raise ValueError("threshold tol must be positive")
    bump, ap = _split(f)
    if ap is not None and ap.basis != basis:
        raise ValueError("function and decomposition use different frequency bases")
    box = list(itertools.product(range(-K, K + 1), repeat=basis.d))
    estimates, bounds = {}, {}
    for k in box:
        est = fourier_bohr(f, basis.frequency(k), T, panels)
        estimates[k] = est.value
        bounds[k] = est.bound
    recon = TrigPolynomial(basis, {k: c for k, c in estimates.items() if abs(c) >= tol})
    residuals = []
    for w0 in windows:
        ts = np.linspace(w0, w0 + width, samples)
        residuals.append((float(w0), float(np.max(np.abs(np.asarray(f(ts)) - recon(ts))))))
    errors = support_ok = ok = None
    if bump is not None or ap is not None:
        truth = ap.coeffs if ap is not None else {}
        errors = {k: abs(estimates[k] - truth.get(k, 0j)) for k in box}
        support_ok = all(k in estimates for k in truth)
        ok = support_ok and all(errors[k] <= bounds[k] for k in box)
    return DecompositionReport(estimates, bounds, recon, tuple(residuals), errors, support_ok, ok)


def kronecker_search(basis: FrequencyBasis, theta: Sequence[float], eps: float, t_max: float) -> Optional[float]:
    """Smallest-|n| time ``t`` whose torus image is within ``eps`` of ``theta``, or None.

    The first angle is hit exactly by ``t_n = (theta_1 + 2 pi n) / lambda_1``;
    ``n`` runs through 0, 1, -1, 2, -2, ... while ``|t_n| <= t_max``.
    """
    if not eps > 0 or not t_max > 0:
        raise ValueError("eps and t_max must be positive")
    if len(theta) != basis.d:
        raise ValueError(f"target has {len(theta)} angles, basis has dimension {basis.d}")
    target = [float(x) % TWO_PI for x in theta]
    lam = basis.lambdas
    if basis.d == 1:
        t = target[0] / lam[0]
        return t if abs(t) <= t_max else None
    n_max = int(math.floor((t_max * lam[0] + target[0]) / TWO_PI)) + 1
    for start in range(0, n_max + 1, _CHUNK):
        mags = np.arange(start, min(n_max + 1, start + _CHUNK), dtype=np.int64)
        ns = np.empty(2 * mags.size, dtype=np.int64)
        ns[0::2] = mags
        ns[1::2] = -mags
        if start == 0:
            ns = ns[1:]
        ts = (target[0] + TWO_PI * ns.astype(float)) / lam[0]
        ok = np.abs(ts) <= t_max
        for j in range(basis.d):
            ok &= _angular_distance_array((lam[j] * ts) % TWO_PI, target[j]) < eps
        hit = np.flatnonzero(ok)
        if hit.size:
            return float(ts[hit[0]])
    return None


@dataclass(frozen=True)
class Arc:
    """Open arc of angles ``(start, start + length)``; ``length == 2 pi`` is the whole circle."""
    start: float
    length: float

    def __post_init__(self):
        if not 0 < self.length <= TWO_PI:
            raise ValueError("arc length must lie in (0, 2 pi]")
        object.__setattr__(self, "start", float(self.start) % TWO_PI)
        object.__setattr__(self, "length", float(self.length))

    @property
    def full(self) -> bool:
        return self.length >= TWO_PI

    def __contains__(self, angle: float) -> bool:
        if self.full:
            return True
        offset = (angle - self.start) % TWO_PI
        return 0.0 < offset < self.length


def _well_formed(intervals) -> tuple:
    out = tuple((float(a), float(b)) for a, b in intervals)
    for a, b in out:
        if not a < b:
            raise ValueError(f"interval ({a}, {b}) is empty or reversed")
    return out


@dataclass(frozen=True)
class Type1:
    """Finite union of open real intervals, with nothing on the torus."""
    intervals: tuple

    def __post_init__(self):
        object.__setattr__(self, "intervals", _well_formed(self.intervals))


@dataclass(frozen=True)
class Type2:
    """Complement of a finite union of closed bounded intervals, together with the whole torus."""
    K: tuple

    def __post_init__(self):
        object.__setattr__(self, "K", _well_formed(self.K))


@dataclass(frozen=True)
class Type3:
    """Box of open arcs on the torus, together with its preimage on the line."""
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))


BasicOpen = Union[Type1, Type2, Type3]


def basic_open_contains(u: BasicOpen, p: SpectrumPoint, basis: FrequencyBasis) -> bool:
    if isinstance(u, Type1):
        return isinstance(p, RealPoint) and any(a < p.t < b for a, b in u.intervals)
    if isinstance(u, Type2):
        return isinstance(p, TorusPoint) or not any(a <= p.t <= b for a, b in u.K)
    if len(u.arcs) != basis.d:
        raise ValueError(f"box has {len(u.arcs)} arcs, basis has dimension {basis.d}")
    theta = p.theta if isinstance(p, TorusPoint) else natural_map(basis, p.t).theta
    if len(theta) != basis.d:
        raise ValueError("torus point dimension does not match the basis")
    return all(angle in arc for angle, arc in zip(theta, u.arcs))


@dataclass(frozen=True)
class PeriodicIntervals:
    """``union over n of (lo + n * period, hi + n * period)``; the whole line when ``full``."""
    period: float
    lo: float
    hi: float
    full: bool = False

    def __contains__(self, t: float) -> bool:
        if self.full:
            return True
        n = math.floor((t - self.lo) / self.period)
        return self.lo + n * self.period < t < self.hi + n * self.period

    def interval(self, n: int) -> tuple[float, float]:
        return (self.lo + n * self.period, self.hi + n * self.period)

    def intervals_between(self, a: float, b: float) -> list[tuple[float, float]]:
        first = math.floor((a - self.hi) / self.period)
        last = math.ceil((b - self.lo) / self.period)
        out = []
        for n in range(first, last + 1):
            lo, hi = self.interval(n)
            if hi > a and lo < b:
                out.append((lo, hi))
        return out

    def escape_certificate(self, radius: float) -> tuple[tuple[float, float], tuple[float, float]]:
        """One interval of the family beyond ``+radius`` and one beyond ``-radius``."""
        up = math.floor((radius - self.lo) / self.period) + 1
        down = math.ceil((-radius - self.hi) / self.period) - 1
        return self.interval(up), self.interval(down)

    def is_unbounded(self) -> bool:
        """A nonempty periodic family reaches past every bound in both directions."""
        return self.full or self.hi > self.lo


def type3_preimage_d1(basis: FrequencyBasis, arc: Arc) -> PeriodicIntervals:
    if basis.d != 1:
        raise NotImplementedError("exact type-3 preimages are only available for one generator")
    lam = basis.lambdas[0]
    period = TWO_PI / lam
    if arc.full:
        return PeriodicIntervals(period, -math.inf, math.inf, full=True)
    return PeriodicIntervals(period, arc.start / lam, (arc.start + arc.length) / lam)
