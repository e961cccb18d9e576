"""Twisted sums with ``Y`` the discrete integers and ``Z`` a finite space.

Subsets of ``Z`` are bitmasks as in :mod:`twisted_spectra.fintop`; subsets
of the integers are :class:`PeriodicSet` values (residue classes modulo
``m`` with finitely many points added or removed), which are closed under
the Boolean operations and have a canonical form.

In the discrete integers a set is compact iff it is finite, so openness,
closure and compactness in ``Y + Z`` reduce to finiteness questions about
preimages of the minimal neighbourhoods ``U_phi`` of the ``Z``-points.
Every positive answer of :func:`is_open` comes with a type-1/type-23
decomposition and every negative answer with a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Optional

from .fintop import (
    FiniteTopology,
    TopologyError,
    closure as z_closure,
    is_hausdorff as z_is_hausdorff,
    members,
    minimal_neighborhood,
    to_mask,
)


def _divisors(m: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


@dataclass(frozen=True)
class PeriodicSet:
    """``{k : k mod m in residues} | added  minus  removed``, kept in canonical form."""

    m: int = 1
    residues: frozenset = frozenset()
    added: frozenset = frozenset()
    removed: frozenset = frozenset()

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError("modulus must be at least 1")
        res = frozenset(int(r) % m for r in self.residues)
        for d in _divisors(m):
            if all(((r + d) % m) in res for r in res):
                res = frozenset(r % d for r in res)
                m = d
                break
        added = frozenset(int(k) for k in self.added if int(k) % m not in res)
        removed = frozenset(int(k) for k in self.removed if int(k) % m in res) - added
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "added", added)
        object.__setattr__(self, "removed", removed)

    @classmethod
    def empty(cls) -> "PeriodicSet":
        return cls()

    @classmethod
    def everything(cls) -> "PeriodicSet":
        return cls(1, frozenset({0}))

    @classmethod
    def finite(cls, points: Iterable[int]) -> "PeriodicSet":
        return cls(1, frozenset(), frozenset(points))

    @classmethod
    def residue_class(cls, r: int, m: int) -> "PeriodicSet":
        return cls(m, frozenset({r % m}))

    def __contains__(self, k: int) -> bool:
        if k in self.added:
            return True
        return k % self.m in self.residues and k not in self.removed

    def is_finite(self) -> bool:
        return not self.residues

    def is_cofinite(self) -> bool:
        return len(self.residues) == self.m

    def is_empty(self) -> bool:
        return not self.residues and not self.added

    def elements(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("set is infinite")
        return sorted(self.added)

    def complement(self) -> "PeriodicSet":
        res = frozenset(range(self.m)) - self.residues
        return PeriodicSet(self.m, res, self.removed, self.added)

    def _combine(self, other: "PeriodicSet", op) -> "PeriodicSet":
        m = math.lcm(self.m, other.m)
        res = frozenset(r for r in range(m) if op(r % self.m in self.residues, r % other.m in other.residues))
        added, removed = set(), set()
        for k in self.added | self.removed | other.added | other.removed:
            actual = op(k in self, k in other)
            periodic = k % m in res
            if actual and not periodic:
                added.add(k)
            elif periodic and not actual:
                removed.add(k)
        return PeriodicSet(m, res, frozenset(added), frozenset(removed))

    def __or__(self, other: "PeriodicSet") -> "PeriodicSet":
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other: "PeriodicSet") -> "PeriodicSet":
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other: "PeriodicSet") -> "PeriodicSet":
        return self._combine(other, lambda a, b: a and not b)

    def __xor__(self, other: "PeriodicSet") -> "PeriodicSet":
        return self._combine(other, lambda a, b: a != b)

    def issubset(self, other: "PeriodicSet") -> bool:
        return (self - other).is_empty()

    def window(self, lo: int, hi: int) -> list[int]:
        return [k for k in range(lo, hi + 1) if k in self]

    def to_json(self) -> dict:
        return {"m": self.m, "residues": sorted(self.residues),
                "added": sorted(self.added), "removed": sorted(self.removed)}

    @classmethod
    def from_json(cls, data: Mapping) -> "PeriodicSet":
        try:
            return cls(int(data.get("m", 1)), frozenset(data.get("residues", ())),
                       frozenset(data.get("added", ())), frozenset(data.get("removed", ())))
        except (TypeError, AttributeError) as exc:
            raise ValueError(f"bad periodic set JSON: {exc}") from exc

    def __repr__(self) -> str:
        parts = []
        if self.residues:
            parts.append(f"{sorted(self.residues)} mod {self.m}")
        if self.added:
            parts.append(f"+{sorted(self.added)}")
        if self.removed:
            parts.append(f"-{sorted(self.removed)}")
        return f"PeriodicSet({' '.join(parts) or 'empty'})"


def union_all(sets: Iterable[PeriodicSet]) -> PeriodicSet:
    return reduce(lambda a, b: a | b, sets, PeriodicSet.empty())


@dataclass(frozen=True)
class PeriodicMap:
    """Eventually periodic map from the integers into the points of ``target``."""

    target: FiniteTopology
    residue_values: tuple
    exceptions: Mapping = field(default_factory=dict)

    def __post_init__(self):
        values = tuple(int(v) for v in self.residue_values)
        if not values:
            raise ValueError("a periodic map needs at least one residue value")
        exc = {int(k): int(v) for k, v in dict(self.exceptions).items()}
        for v in list(values) + list(exc.values()):
            if not 0 <= v < self.target.n:
                raise ValueError(f"map value {v} outside target of size {self.target.n}")
        exc = {k: v for k, v in exc.items() if values[k % len(values)] != v}
        object.__setattr__(self, "residue_values", values)
        object.__setattr__(self, "exceptions", _FrozenDict(exc))

    @property
    def m(self) -> int:
        return len(self.residue_values)

    def __call__(self, k: int) -> int:
        if k in self.exceptions:
            return self.exceptions[k]
        return self.residue_values[k % self.m]

    def preimage(self, b: int) -> PeriodicSet:
        res = frozenset(r for r, v in enumerate(self.residue_values) if b >> v & 1)
        added = frozenset(k for k, v in self.exceptions.items() if b >> v & 1)
        removed = frozenset(k for k, v in self.exceptions.items() if not b >> v & 1)
        return PeriodicSet(self.m, res, added, removed)

    def recurring_values(self, a: int = 0, d: int = 1) -> int:
        """Mask of values taken infinitely often along ``a + k*d``."""
        mask = 0
        for k in range(self.m):
            mask |= 1 << self.residue_values[(a + k * d) % self.m]
        return mask

    def to_json(self) -> dict:
        return {"m": self.m, "residue_values": list(self.residue_values),
                "exceptions": {str(k): v for k, v in sorted(self.exceptions.items())}}

    @classmethod
    def from_json(cls, data: Mapping, target: FiniteTopology) -> "PeriodicMap":
        try:
            values = list(data["residue_values"])
            m = int(data.get("m", len(values)))
            if m != len(values):
                raise ValueError(f"modulus {m} does not match {len(values)} residue values")
            exc = data.get("exceptions", {})
            if isinstance(exc, list):
                exc = {k: v for k, v in exc}
            return cls(target, tuple(values), exc)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad periodic map JSON: {exc}") from exc

    @classmethod
    def constant(cls, target: FiniteTopology, value: int = 0) -> "PeriodicMap":
        return cls(target, (value,))


class _FrozenDict(dict):
    def __hash__(self):
        return hash(tuple(sorted(self.items())))

    def _readonly(self, *args, **kwargs):
        raise TypeError("exceptions are read-only")

    __setitem__ = __delitem__ = update = pop = popitem = clear = setdefault = _readonly


@dataclass(frozen=True)
class TwistedZ:
    z: FiniteTopology
    f: PeriodicMap

    def __post_init__(self):
        if self.f.target != self.z:
            raise TopologyError("twisting map must take values in z")

    def neighborhood(self, phi: int) -> int:
        return minimal_neighborhood(self.z, phi)

    def window_preimage(self, phi: int) -> PeriodicSet:
        return self.f.preimage(self.neighborhood(phi))

    def to_json(self) -> dict:
        return {"z": self.z.to_json(), "f": self.f.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "TwistedZ":
        try:
            z = FiniteTopology.from_json(data["z"])
            return cls(z, PeriodicMap.from_json(data["f"], z))
        except KeyError as exc:
            raise ValueError(f"bad model JSON: missing {exc}") from exc


@dataclass(frozen=True)
class ZSumSet:
    ypart: PeriodicSet = PeriodicSet()
    zpart: int = 0

    def __or__(self, other: "ZSumSet") -> "ZSumSet":
        return ZSumSet(self.ypart | other.ypart, self.zpart | other.zpart)

    def __and__(self, other: "ZSumSet") -> "ZSumSet":
        return ZSumSet(self.ypart & other.ypart, self.zpart & other.zpart)

    def __sub__(self, other: "ZSumSet") -> "ZSumSet":
        return ZSumSet(self.ypart - other.ypart, self.zpart & ~other.zpart)

    def issubset(self, other: "ZSumSet") -> bool:
        return self.ypart.issubset(other.ypart) and not self.zpart & ~other.zpart

    def complement(self, t: TwistedZ) -> "ZSumSet":
        return ZSumSet(self.ypart.complement(), t.z.full & ~self.zpart)

    def to_json(self) -> dict:
        return {"y": self.ypart.to_json(), "z": members(self.zpart)}

    @classmethod
    def from_json(cls, data: Mapping) -> "ZSumSet":
        return cls(PeriodicSet.from_json(data.get("y", {})), to_mask(data.get("z", ())))


def whole(t: TwistedZ) -> ZSumSet:
    return ZSumSet(PeriodicSet.everything(), t.z.full)


def preimage(f: PeriodicMap, b: int) -> PeriodicSet:
    return f.preimage(b)


@dataclass(frozen=True)
class BasicSet:
    """Type-1 set ``ypart + {}`` or type-23 set ``(complement(K) & f^-1(W)) + W``."""
    kind: str
    set: ZSumSet
    k: Optional[PeriodicSet] = None
    w: Optional[int] = None


@dataclass(frozen=True)
class OpenResult:
    open: bool
    decomposition: Optional[tuple] = None
    witness: Optional[int] = None
    defect: Optional[PeriodicSet] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.open


def basic_set(t: TwistedZ, k: PeriodicSet, w: int) -> ZSumSet:
    if not k.is_finite():
        raise ValueError("type-2 sets need a finite (compact) K")
    return ZSumSet(t.f.preimage(w) - k, w)


def is_open(t: TwistedZ, s: ZSumSet) -> OpenResult:
    """Openness of ``s`` in the twisted sum, with a certificate either way."""
    if not t.z.is_open(s.zpart):
        for phi in members(s.zpart):
            if t.neighborhood(phi) & ~s.zpart:
                return OpenResult(False, witness=phi, reason="Z-part is not open in z")
    parts = [BasicSet("type1", ZSumSet(s.ypart, 0))]
    for phi in members(s.zpart):
        w = t.neighborhood(phi)
        defect = t.f.preimage(w) - s.ypart
        if not defect.is_finite():
            return OpenResult(False, witness=phi, defect=defect,
                              reason="preimage of the neighbourhood leaves the Y-part infinitely often")
        parts.append(BasicSet("type23", basic_set(t, defect, w), k=defect, w=w))
    union = ZSumSet()
    for b in parts:
        union = union | b.set
    if union != s:
        raise AssertionError(f"decomposition of {s} has union {union}")
    return OpenResult(True, decomposition=tuple(parts))


def is_closed(t: TwistedZ, s: ZSumSet) -> bool:
    return is_open(t, s.complement(t)).open


def _infinite_hits(t: TwistedZ, ypart: PeriodicSet) -> int:
    mask = 0
    for phi in range(t.z.n):
        if not (t.window_preimage(phi) & ypart).is_finite():
            mask |= 1 << phi
    return mask


def closure(t: TwistedZ, s: ZSumSet) -> ZSumSet:
    zpart = z_closure(t.z, s.zpart | _infinite_hits(t, s.ypart))
    return ZSumSet(s.ypart, zpart)


def interior(t: TwistedZ, s: ZSumSet) -> ZSumSet:
    zpart = 0
    for phi in members(s.zpart):
        w = t.neighborhood(phi)
        if not w & ~s.zpart and (t.f.preimage(w) - s.ypart).is_finite():
            zpart |= 1 << phi
    return ZSumSet(s.ypart, zpart)


@dataclass(frozen=True)
class CompactResult:
    compact: bool
    uncovered: PeriodicSet

    def __bool__(self) -> bool:
        return self.compact


def is_compact(t: TwistedZ, s: ZSumSet) -> CompactResult:
    """``s`` is compact iff its Y-part leaves ``f^-1(union of U_phi, phi in s)`` only finitely often."""
    cover = 0
    for phi in members(s.zpart):
        cover |= t.neighborhood(phi)
    uncovered = s.ypart - t.f.preimage(cover)
    return CompactResult(uncovered.is_finite(), uncovered)


def is_hausdorff(t: TwistedZ) -> bool:
    # the integers are locally compact Hausdorff, so only z matters
    return z_is_hausdorff(t.z)


@dataclass(frozen=True)
class CoincidenceReport:
    coincide: bool       # (1) every direct-sum open is twisted-open
    z_open: bool         # (5) empty + Z is open
    nicely_covered: bool  # (6) Z covered by opens with finite preimages

    @property
    def agree(self) -> bool:
        return self.coincide == self.z_open == self.nicely_covered


def coincidence_report(t: TwistedZ, *, exhaustive: bool = False) -> CoincidenceReport:
    """Evaluate statements (1), (5), (6) by separate routes.

    (1) tests every direct-sum generator ``A + W`` with ``A`` empty, all of
    the integers, or a residue class of ``f``; (5) is a single openness
    query; (6) looks for an open cover of Z with finite preimages, using the
    minimal neighbourhoods (or every open containing the point, when
    ``exhaustive``).
    """
    probes = [PeriodicSet.empty(), PeriodicSet.everything()]
    probes += [PeriodicSet.residue_class(r, t.f.m) for r in range(t.f.m)]
    s1 = all(is_open(t, ZSumSet(a, w)).open for w in t.z.opens for a in probes)
    s5 = is_open(t, ZSumSet(PeriodicSet.empty(), t.z.full)).open
    s6 = True
    for phi in range(t.z.n):
        if exhaustive:
            windows = [w for w in t.z.opens if w >> phi & 1]
        else:
            windows = [t.neighborhood(phi)]
        if not any(t.f.preimage(w).is_finite() for w in windows):
            s6 = False
            break
    return CoincidenceReport(s1, s5, s6)


def sums_coincide(t: TwistedZ) -> bool:
    report = coincidence_report(t)
    if not report.agree:
        raise AssertionError(f"statements (1), (5), (6) disagree: {report}")
    return report.coincide


@dataclass(frozen=True)
class LimitResult:
    limits: int
    converges: Optional[int]


def limit_points(t: TwistedZ, a: int, d: int) -> LimitResult:
    """Limits in Z of the progression ``a, a+d, a+2d, ...``.

    The progression leaves every finite set, so it converges to ``phi``
    exactly when its eventual values all lie in ``U_phi``.
    """
    if d < 1:
        raise ValueError("step must be at least 1")
    recurring = t.f.recurring_values(a, d)
    limits = 0
    for phi in range(t.z.n):
        if not recurring & ~t.neighborhood(phi):
            limits |= 1 << phi
    converges = None
    if is_hausdorff(t) and limits and limits & (limits - 1) == 0:
        converges = limits.bit_length() - 1
    return LimitResult(limits, converges)


def onepoint() -> TwistedZ:
    """The integers glued to a single point at infinity."""
    z = FiniteTopology.discrete(1)
    return TwistedZ(z, PeriodicMap.constant(z, 0))


def parity_model(z: Optional[FiniteTopology] = None) -> TwistedZ:
    """Evens to point 0, odds to point 1 of ``z`` (discrete on two points by default)."""
    z = z or FiniteTopology.discrete(2)
    return TwistedZ(z, PeriodicMap(z, (0, 1)))

