"""Finite Borel measures on twisted sums.

Twisted and direct sums share one Borel algebra, so a measure on a twisted
sum is nothing but a pair of measures on the two blocks: ``mu(A + B) =
mu_y(A) + mu_z(B)``.  Measures on ``Y`` are finite sums of point masses; on
the torus factor of the AAP spectrum the ``Z``-side may also carry a
multiple of normalized Haar measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from . import aap, fintop, zline
from .aap import TWO_PI, Arc, TrigPolynomial
from .fintop import SumSpace


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        atoms = {}
        for p, w in dict(self.atoms).items():
            w = float(w)
            if w < 0 or not math.isfinite(w):
                raise ValueError(f"atom weight {w} at {p!r} must be finite and non-negative")
            if w:
                atoms[p] = atoms.get(p, 0.0) + w
        object.__setattr__(self, "atoms", atoms)

    def __hash__(self):
        return hash(tuple(sorted(self.atoms.items(), key=repr)))

    @property
    def mass(self) -> float:
        return math.fsum(self.atoms.values())

    def measure(self, contains: Callable[[Any], bool]) -> float:
        return math.fsum(w for p, w in self.atoms.items() if contains(p))

    def support(self) -> list:
        return list(self.atoms)


@dataclass(frozen=True)
class TorusMeasure:
    haar_weight: float = 1.0
    atoms: AtomicMeasure = AtomicMeasure()

    def __post_init__(self):
        if self.haar_weight < 0:
            raise ValueError("Haar weight must be non-negative")
        object.__setattr__(self, "haar_weight", float(self.haar_weight))

    @property
    def mass(self) -> float:
        return self.haar_weight + self.atoms.mass

    @classmethod
    def haar(cls) -> "TorusMeasure":
        return cls(1.0)


ZMeasure = Union[AtomicMeasure, TorusMeasure]


@dataclass(frozen=True)
class SumMeasure:
    mu_y: AtomicMeasure
    mu_z: ZMeasure

    @property
    def mass(self) -> float:
        return self.mu_y.mass + self.mu_z.mass


@dataclass(frozen=True)
class SpectrumSet:
    """``(closed intervals of the line) + (pairwise disjoint boxes of open arcs)`` in the AAP spectrum."""
    intervals: tuple = ()
    boxes: tuple = ()

    def contains_real(self, t: float) -> bool:
        return any(a <= t <= b for a, b in self.intervals)

    def contains_torus(self, theta: Sequence[float]) -> bool:
        return any(all(x in arc for x, arc in zip(theta, box)) for box in self.boxes)

    @classmethod
    def whole(cls, d: int) -> "SpectrumSet":
        return cls(((-math.inf, math.inf),), (tuple(Arc(0.0, TWO_PI) for _ in range(d)),))


def box_haar(box: Sequence[Arc]) -> float:
    return math.prod(arc.length / TWO_PI for arc in box)


def measure_of(m: SumMeasure, s, space: Optional[SumSpace] = None) -> float:
    """Measure of a set in one of the three carriers.

    ``s`` is a :class:`zline.ZSumSet`, a :class:`SpectrumSet`, or an integer
    mask on a finite :class:`fintop.SumSpace` given as ``space``.
    """
    if isinstance(s, zline.ZSumSet):
        if not isinstance(m.mu_z, AtomicMeasure):
            raise TypeError("sets of the integer model need an atomic measure on Z")
        return math.fsum([m.mu_y.measure(lambda k: k in s.ypart),
                          m.mu_z.measure(lambda phi: bool(s.zpart >> phi & 1))])
    if isinstance(s, SpectrumSet):
        y_part = m.mu_y.measure(s.contains_real)
        if isinstance(m.mu_z, TorusMeasure):
            z_part = math.fsum([m.mu_z.haar_weight * math.fsum(box_haar(b) for b in s.boxes),
                                m.mu_z.atoms.measure(s.contains_torus)])
        else:
            z_part = m.mu_z.measure(s.contains_torus)
        return math.fsum([y_part, z_part])
    if isinstance(s, int) and space is not None:
        ymask, zmask = space.split(s)
        if not isinstance(m.mu_z, AtomicMeasure):
            raise TypeError("sets of a finite sum need an atomic measure on Z")
        return math.fsum([m.mu_y.measure(lambda p: bool(ymask >> p & 1)),
                          m.mu_z.measure(lambda p: bool(zmask >> p & 1))])
    raise TypeError(f"cannot measure {type(s).__name__} in this carrier")


@dataclass(frozen=True)
class AlgebraMeasure:
    """A finite measure on a finite Boolean algebra, stored as weights of its atoms."""
    n: int
    atoms: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError("one weight per atom")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    def __call__(self, mask: int) -> float:
        total = []
        for a, w in zip(self.atoms, self.weights):
            inside = a & mask
            if inside and inside != a:
                raise ValueError(f"set {fintop.members(mask)} is not in the algebra")
            if inside:
                total.append(w)
        return math.fsum(total)

    @classmethod
    def from_function(cls, n: int, algebra: Iterable[int], fn: Callable[[int], float]) -> "AlgebraMeasure":
        atoms = tuple(fintop.algebra_atoms(n, algebra))
        return cls(n, atoms, tuple(float(fn(a)) for a in atoms))

    @classmethod
    def from_points(cls, n: int, algebra: Iterable[int], mu: AtomicMeasure) -> "AlgebraMeasure":
        return cls.from_function(n, algebra, lambda a: mu.measure(lambda p: bool(a >> p & 1)))


def decompose_measure(m, space: Optional[SumSpace] = None):
    """Split a measure on a sum into its ``Y``- and ``Z``-restrictions.

    A :class:`SumMeasure` is returned as its two components.  A measure on
    the Borel algebra of a finite sum (an :class:`AlgebraMeasure` or any
    callable on masks, with ``space``) is restricted to the algebras of the
    two blocks, giving two :class:`AlgebraMeasure` values.
    """
    if isinstance(m, SumMeasure):
        return m.mu_y, m.mu_z
    if space is None:
        raise TypeError("restricting a measure on a finite sum needs the sum space")
    algebra = fintop.borel_algebra(space)
    atoms = fintop.algebra_atoms(space.topology.n, algebra)
    y_atoms, y_w, z_atoms, z_w = [], [], [], []
    for a in atoms:
        ya, za = space.split(a)
        if ya and za:
            raise AssertionError("a Borel atom straddles the two blocks")
        if ya:
            y_atoms.append(ya)
            y_w.append(float(m(a)))
        else:
            z_atoms.append(za)
            z_w.append(float(m(a)))
    return (AlgebraMeasure(space.y.n, tuple(y_atoms), tuple(y_w)),
            AlgebraMeasure(space.z.n, tuple(z_atoms), tuple(z_w)))


def recombine(mu_y: AlgebraMeasure, mu_z: AlgebraMeasure, space: SumSpace) -> AlgebraMeasure:
    """``mu_y + mu_z`` as a measure on the Borel algebra of the sum."""
    atoms = tuple(a for a in mu_y.atoms) + tuple(b << space.offset for b in mu_z.atoms)
    return AlgebraMeasure(space.topology.n, atoms, tuple(mu_y.weights) + tuple(mu_z.weights))


def haar_integral(f1: TrigPolynomial) -> complex:
    """Integral against normalized Haar measure on the torus: the constant coefficient."""
    return f1.mean


def translation_action(f1: TrigPolynomial, s: float) -> TrigPolynomial:
    """``t -> f1(t + s)``: each coefficient picks up the phase ``exp(i <k, lambda> s)``."""
    zero = f1.zero_key
    out = {}
    for k, c in f1.coeffs.items():
        if k == zero:
            out[k] = c
        else:
            out[k] = c * complex(math.cos(f1.basis.frequency(k) * s), math.sin(f1.basis.frequency(k) * s))
    return TrigPolynomial(f1.basis, out)


@dataclass(frozen=True)
class RegularityReport:
    value: float
    sup_value: float
    witness: zline.ZSumSet
    compact: bool
    passed: bool


def inner_regularity_check(m: SumMeasure, t: zline.TwistedZ, s: zline.ZSumSet) -> RegularityReport:
    """Exhibit a compact subset of ``s`` carrying all of its mass.

    The atoms of ``mu_y`` inside ``s`` form a finite set ``F``; ``F + s.zpart``
    is compact in the twisted sum and has the same measure as ``s``.
    """
    if not isinstance(m.mu_z, AtomicMeasure):
        raise TypeError("the integer model needs an atomic measure on Z")
    hits = [k for k in m.mu_y.atoms if k in s.ypart]
    witness = zline.ZSumSet(zline.PeriodicSet.finite(hits), s.zpart)
    compact = zline.is_compact(t, witness).compact
    value = measure_of(m, s)
    sup_value = measure_of(m, witness)
    passed = compact and witness.issubset(s) and value == sup_value
    return RegularityReport(value, sup_value, witness, compact, passed)


@dataclass(frozen=True)
class BridgeReport:
    T: float
    time_average: complex
    haar: complex
    gap: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.gap <= self.bound


def bridge(f: aap.AAPFunction, T: float, panels: Optional[int] = None) -> BridgeReport:
    """Compare the time average of ``f`` over ``[-T, T]`` with the Haar integral of its almost periodic part."""
    est = aap.bohr_mean(f, T, panels)
    h = haar_integral(f.appart)
    return BridgeReport(T, est.value, h, abs(est.value - h), est.bound)


def measure_from_json(data: Mapping, *, y_kind: str = "int", z_kind: str = "int") -> SumMeasure:
    """Parse ``{"y_atoms": [{"point", "w"}], "z": {"haar", "atoms"}}``.

    ``y_kind``/``z_kind`` select how atom points are read: ``"int"``,
    ``"real"`` or ``"torus"`` (a list of angles).
    """
    def point(raw, kind):
        if kind == "int":
            return int(raw)
        if kind == "real":
            return float(raw)
        return tuple(float(x) % TWO_PI for x in raw)

    try:
        mu_y = AtomicMeasure({point(a["point"], y_kind): a["w"] for a in data.get("y_atoms", [])})
        zdata = data.get("z", {})
        z_atoms = AtomicMeasure({point(a["point"], z_kind): a["w"] for a in zdata.get("atoms", [])})
        haar = float(zdata.get("haar", 0.0))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad measure JSON: {exc}") from exc
    if z_kind == "torus":
        return SumMeasure(mu_y, TorusMeasure(haar, z_atoms))
    if haar:
        raise ValueError("Haar weight only makes sense on a torus carrier")
    return SumMeasure(mu_y, z_atoms)
