"""Topologies on finite ground sets, twisted and direct sums of them.

Subsets of a ground set ``{0, ..., n-1}`` are encoded as integer bitmasks
(bit ``p`` set iff point ``p`` is a member).  A topology is the frozen
family of its open masks, so every query here is exact.

In a sum space the points of ``Y`` keep their indices and point ``k`` of
``Z`` becomes ``y.n + k``.

Finite spaces are compact, so every subset of a finite ``Y`` is compact and
"compact closed" collapses to "closed".  The compactness and local
compactness entries of :class:`DiagramReport` are therefore always true;
genuinely non-compact behaviour lives in :mod:`twisted_spectra.zline`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

MAX_POINTS = 12


class TopologyError(ValueError):
    """Raised for malformed topologies, maps or subsets."""


class NotOpenError(ValueError):
    """Raised by :func:`basis_decomposition` when asked to decompose a non-open set."""

    def __init__(self, mask: int, witness: Optional[int] = None):
        self.mask = mask
        self.witness = witness
        super().__init__(f"set {sorted(members(mask))} is not open"
                         + ("" if witness is None else f" (no basic neighbourhood of point {witness})"))


def to_mask(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        if p < 0:
            raise TopologyError(f"negative point {p}")
        mask |= 1 << p
    return mask


def members(mask: int) -> list[int]:
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    opens: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise TopologyError("ground-set size must be non-negative")
        opens = frozenset(int(u) for u in self.opens)
        object.__setattr__(self, "opens", opens)
        full = full_mask(self.n)
        if 0 not in opens or full not in opens:
            raise TopologyError("opens must contain the empty set and the full ground set")
        for u in opens:
            if u & ~full:
                raise TopologyError(f"open set {members(u)} leaves the ground set of size {self.n}")
        ordered = sorted(opens)
        for i, u in enumerate(ordered):
            for v in ordered[i + 1:]:
                if (u | v) not in opens or (u & v) not in opens:
                    raise TopologyError("opens are not closed under union and intersection")

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def is_closed(self, mask: int) -> bool:
        return (self.full & ~mask) in self.opens

    @property
    def closed_sets(self) -> frozenset:
        return frozenset(self.full & ~u for u in self.opens)

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    def is_indiscrete(self) -> bool:
        return self.opens == frozenset({0, self.full})

    def sorted_opens(self) -> list[list[int]]:
        return [members(u) for u in sorted(self.opens, key=lambda u: (bin(u).count("1"), u))]

    def to_json(self) -> dict:
        return {"n": self.n, "opens": self.sorted_opens()}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteTopology":
        try:
            n = int(data["n"])
            opens = [to_mask(map(int, u)) for u in data["opens"]]
        except (KeyError, TypeError) as exc:
            raise TopologyError(f"bad topology JSON: {exc}") from exc
        return cls(n, frozenset(opens))

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, frozenset(range(1 << n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, frozenset({0, full_mask(n)}))

    @classmethod
    def sierpinski(cls) -> "FiniteTopology":
        return cls(2, frozenset({0b00, 0b01, 0b11}))


def from_subbasis(n: int, subbasis: Iterable[Iterable[int] | int], *, max_points: int = MAX_POINTS) -> FiniteTopology:
    """Smallest topology on ``n`` points containing every member of ``subbasis``.

    Members may be bitmasks or iterables of points.  The topology is built
    from the minimal neighbourhoods ``U_p`` (intersection of the subbasis
    members containing ``p``): the opens are exactly the unions of them.
    """
    if n > max_points:
        raise TopologyError(f"ground set of {n} points exceeds the cap of {max_points}")
    full = full_mask(n)
    masks = []
    for s in subbasis:
        m = s if isinstance(s, int) else to_mask(s)
        if m & ~full:
            raise TopologyError(f"subbasis member {members(m)} leaves the ground set of size {n}")
        masks.append(m)
    opens = _opens_from_neighborhoods(n, _neighborhoods(n, masks))
    return FiniteTopology(n, opens)


def _neighborhoods(n: int, masks: Sequence[int]) -> list[int]:
    nbhd = []
    for p in range(n):
        u = full_mask(n)
        bit = 1 << p
        for m in masks:
            if m & bit:
                u &= m
        nbhd.append(u)
    return nbhd


def _opens_from_neighborhoods(n: int, nbhd: Iterable[int]) -> frozenset:
    opens = {0}
    for u in set(nbhd):
        opens |= {o | u for o in opens}
    opens.add(full_mask(n))
    return frozenset(opens)


def minimal_neighborhood(t: FiniteTopology, p: int) -> int:
    if not 0 <= p < t.n:
        raise TopologyError(f"point {p} outside ground set of size {t.n}")
    bit = 1 << p
    u = t.full
    for o in t.opens:
        if o & bit:
            u &= o
    return u


def minimal_neighborhoods(t: FiniteTopology) -> list[int]:
    return [minimal_neighborhood(t, p) for p in range(t.n)]


def closure(t: FiniteTopology, s: int) -> int:
    hit = 0
    for u in t.opens:
        if not u & s:
            hit |= u
    return t.full & ~hit


def interior(t: FiniteTopology, s: int) -> int:
    inner = 0
    for u in t.opens:
        if u & ~s == 0:
            inner |= u
    return inner


def is_hausdorff(t: FiniteTopology) -> bool:
    """Pairwise separation by disjoint opens.  For finite spaces this happens iff ``t`` is discrete."""
    nbhd = minimal_neighborhoods(t)
    for p, q in itertools.combinations(range(t.n), 2):
        if nbhd[p] & nbhd[q]:
            return False
    return True


def is_compact(t: FiniteTopology, s: int) -> bool:
    """Always true: a finite family of opens covering ``s`` is its own finite subcover."""
    return True


@dataclass(frozen=True)
class ContinuousFiniteMap:
    source: FiniteTopology
    target: FiniteTopology
    values: tuple

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.source.n:
            raise TopologyError(f"map needs {self.source.n} values, got {len(values)}")
        for v in values:
            if not 0 <= v < self.target.n:
                raise TopologyError(f"map value {v} outside target of size {self.target.n}")
        for w in self.target.opens:
            if not self.source.is_open(self.preimage(w)):
                raise TopologyError(f"map is not continuous: preimage of open {members(w)} is not open")

    def __call__(self, p: int) -> int:
        return self.values[p]

    def preimage(self, w: int) -> int:
        mask = 0
        for p, v in enumerate(self.values):
            if w >> v & 1:
                mask |= 1 << p
        return mask

    def image(self, s: Optional[int] = None) -> int:
        mask = 0
        for p, v in enumerate(self.values):
            if s is None or s >> p & 1:
                mask |= 1 << v
        return mask

    def to_json(self) -> dict:
        return {"values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict, source: FiniteTopology, target: FiniteTopology) -> "ContinuousFiniteMap":
        try:
            values = tuple(int(v) for v in data["values"])
        except (KeyError, TypeError) as exc:
            raise TopologyError(f"bad map JSON: {exc}") from exc
        return cls(source, target, values)

    @classmethod
    def identity(cls, t: FiniteTopology) -> "ContinuousFiniteMap":
        return cls(t, t, tuple(range(t.n)))

    @classmethod
    def constant(cls, source: FiniteTopology, target: FiniteTopology, value: int = 0) -> "ContinuousFiniteMap":
        return cls(source, target, (value,) * source.n)


@dataclass(frozen=True)
class SumSpace:
    y: FiniteTopology
    z: FiniteTopology
    topology: FiniteTopology
    flavor: str
    f: Optional[ContinuousFiniteMap] = field(default=None, compare=False)

    @property
    def offset(self) -> int:
        return self.y.n

    @property
    def y_block(self) -> int:
        return self.y.full

    @property
    def z_block(self) -> int:
        return self.z.full << self.y.n

    def join(self, ymask: int, zmask: int) -> int:
        return ymask | (zmask << self.y.n)

    def split(self, mask: int) -> tuple[int, int]:
        return mask & self.y.full, mask >> self.y.n

    def relative_y(self) -> frozenset:
        return frozenset(u & self.y_block for u in self.topology.opens)

    def relative_z(self) -> frozenset:
        return frozenset(u >> self.y.n for u in self.topology.opens)


def _check_map(y: FiniteTopology, z: FiniteTopology, f: ContinuousFiniteMap) -> None:
    if f.source != y or f.target != z:
        raise TopologyError("twisting map must go from y to z")


def standard_sets(y: FiniteTopology, z: FiniteTopology, f: ContinuousFiniteMap) -> dict[str, frozenset]:
    """The type-1, type-2 and type-3 generating sets, as masks on the disjoint union."""
    _check_map(y, z, f)
    ny = y.n
    zfull = z.full << ny
    return {
        "type1": frozenset(y.opens),
        "type2": frozenset((y.full & ~k) | zfull for k in y.closed_sets),
        "type3": frozenset(f.preimage(w) | (w << ny) for w in z.opens),
    }


def twisted_sum(y: FiniteTopology, z: FiniteTopology, f: ContinuousFiniteMap) -> SumSpace:
    gens = standard_sets(y, z, f)
    n = y.n + z.n
    topology = from_subbasis(n, itertools.chain.from_iterable(gens.values()), max_points=max(MAX_POINTS, n))
    return SumSpace(y, z, topology, "twisted", f)


def direct_sum(y: FiniteTopology, z: FiniteTopology) -> SumSpace:
    ny = y.n
    opens = frozenset(v | (w << ny) for v in y.opens for w in z.opens)
    return SumSpace(y, z, FiniteTopology(y.n + z.n, opens), "direct")


@dataclass(frozen=True)
class BasisElement:
    """A type-1 set ``V`` or a type-23 set ``(complement(K) & f^-1(W)) + W``."""
    kind: str
    mask: int
    v: Optional[int] = None
    k: Optional[int] = None
    w: Optional[int] = None


def type23_mask(s: SumSpace, k: int, w: int) -> int:
    return (s.y.full & ~k & s.f.preimage(w)) | (w << s.offset)


def basis_decomposition(s: SumSpace, u: int) -> list[BasisElement]:
    """Write an open set of a twisted sum as a union of type-1 and type-23 sets.

    The Z-part ``W`` of ``u`` is covered by one type-23 set whose ``K`` is the
    closed hull of ``f^-1(W)`` minus the Y-part of ``u``; whatever of the
    Y-part remains is the type-1 set ``V``.  So at most two elements.
    """
    if s.flavor != "twisted" or s.f is None:
        raise TopologyError("basis decomposition needs a twisted sum")
    if not s.topology.is_open(u):
        raise NotOpenError(u)
    uy, uz = s.split(u)
    parts = []
    covered = 0
    if uz:
        k = closure(s.y, s.f.preimage(uz) & ~uy)
        mask = type23_mask(s, k, uz)
        parts.append(BasisElement("type23", mask, k=k, w=uz))
        covered = mask
    if uy & ~covered:
        parts.append(BasisElement("type1", uy, v=uy))
        covered |= uy
    if covered != u or not s.z.is_open(uz) or not s.y.is_open(uy):
        raise AssertionError(f"basis decomposition of {members(u)} produced {members(covered)}")
    return parts


@dataclass(frozen=True)
class DiagramReport:
    coincide: bool          # (1) twisted and direct topologies are equal
    y_compact: bool         # (2)
    y_locally_compact: bool  # (3)
    image_closed: bool      # (4) f(Y) closed in Z
    z_open: bool            # (5) empty + Z open in the twisted sum
    z_nicely_covered: bool  # (6) Z covered by opens with preimages inside compacta
    z_hausdorff: bool
    verdicts: dict

    @property
    def statements(self) -> dict[int, bool]:
        return {1: self.coincide, 2: self.y_compact, 3: self.y_locally_compact,
                4: self.image_closed, 5: self.z_open, 6: self.z_nicely_covered}

    @property
    def holds(self) -> bool:
        return all(v for v in self.verdicts.values() if v is not None)

    def to_json(self) -> dict:
        return {"statements": {str(k): v for k, v in self.statements.items()},
                "z_hausdorff": self.z_hausdorff,
                "verdicts": dict(self.verdicts),
                "holds": self.holds}


def nicely_covered(y: FiniteTopology, z: FiniteTopology, f: ContinuousFiniteMap, *, exhaustive: bool = False) -> bool:
    """Statement (6): some open cover of Z has every preimage inside a compact subset of Y.

    The minimal-neighbourhood cover is tried by default; preimages only grow
    with ``W``, so it is the hardest candidate.  ``exhaustive=True`` searches
    all subfamilies of ``z.opens`` instead.
    """
    def good(w: int) -> bool:
        # the smallest compact superset of a finite preimage is the preimage itself
        pre = f.preimage(w)
        return is_compact(y, pre)

    if not exhaustive:
        return all(good(minimal_neighborhood(z, phi)) for phi in range(z.n))
    candidates = sorted(z.opens)
    for r in range(len(candidates) + 1):
        for family in itertools.combinations(candidates, r):
            cover = 0
            for w in family:
                cover |= w
            if cover == z.full and all(good(w) for w in family):
                return True
    return False


def check_diagram(y: FiniteTopology, z: FiniteTopology, f: ContinuousFiniteMap, *, exhaustive: bool = False) -> DiagramReport:
    _check_map(y, z, f)
    tw = twisted_sum(y, z, f)
    dr = direct_sum(y, z)
    s1 = tw.topology.opens == dr.topology.opens
    s2 = is_compact(y, y.full)
    s3 = all(is_compact(y, closure(y, minimal_neighborhood(y, p))) for p in range(y.n))
    image = f.image()
    s4 = closure(z, image) == image
    s5 = tw.topology.is_open(tw.z_block)
    s6 = nicely_covered(y, z, f, exhaustive=exhaustive)
    zh = is_hausdorff(z)
    verdicts = {
        "1<=>5": s1 == s5,
        "5<=>6": s5 == s6,
        "2=>6": (not s2) or s6,
        "6=>3": (not s6) or s3,
        "6=>4 (Z Hausdorff)": ((not s6) or s4) if zh else None,
    }
    return DiagramReport(s1, s2, s3, s4, s5, s6, zh, verdicts)


def borel_algebra(s: SumSpace) -> frozenset:
    """The Boolean algebra generated by the opens of ``s`` (a sigma-algebra since the ground set is finite)."""
    return generated_algebra(s.topology.n, s.topology.opens)


def generated_algebra(n: int, sets: Iterable[int]) -> frozenset:
    sets = list(sets)
    signature: dict[tuple, int] = {}
    for p in range(n):
        key = tuple(m >> p & 1 for m in sets)
        signature[key] = signature.get(key, 0) | 1 << p
    algebra = {0}
    for atom in signature.values():
        algebra |= {a | atom for a in algebra}
    return frozenset(algebra)


def algebra_atoms(n: int, algebra: Iterable[int]) -> list[int]:
    """Minimal nonempty members of a finite Boolean algebra."""
    algebra = set(algebra)
    atoms = []
    seen = 0
    for p in range(n):
        if seen >> p & 1:
            continue
        atom = full_mask(n)
        for a in algebra:
            if a >> p & 1:
                atom &= a
        atoms.append(atom)
        seen |= atom
    return atoms


def enumerate_topologies(n: int) -> list[FiniteTopology]:
    """Every topology on ``n`` labelled points (1, 1, 4, 29, 355 for n = 0..4)."""
    if n > 4:
        raise TopologyError("exhaustive enumeration is limited to four points")
    full = full_mask(n)
    middle = [m for m in range(1, full)]
    out = []
    for bits in range(1 << len(middle)):
        fam = {0, full} | {m for i, m in enumerate(middle) if bits >> i & 1}
        if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
            out.append(FiniteTopology(n, frozenset(fam)))
    return out


def continuous_maps(y: FiniteTopology, z: FiniteTopology) -> Iterator[ContinuousFiniteMap]:
    if z.n == 0 and y.n > 0:
        return
    for values in itertools.product(range(z.n), repeat=y.n):
        ok = True
        for w in z.opens:
            pre = 0
            for p, v in enumerate(values):
                if w >> v & 1:
                    pre |= 1 << p
            if pre not in y.opens:
                ok = False
                break
        if ok:
            yield ContinuousFiniteMap(y, z, values)


def product_topology(a: FiniteTopology, b: FiniteTopology) -> FiniteTopology:
    """Product of two finite spaces; point ``(i, j)`` has index ``i * b.n + j``."""
    rects = []
    for u in a.opens:
        for v in b.opens:
            rects.append(to_mask(i * b.n + j for i in members(u) for j in members(v)))
    return from_subbasis(a.n * b.n, rects, max_points=max(MAX_POINTS, a.n * b.n))


def first_projection(a: FiniteTopology, b: FiniteTopology) -> ContinuousFiniteMap:
    prod = product_topology(a, b)
    return ContinuousFiniteMap(prod, a, tuple(i for i in range(a.n) for _ in range(b.n)))
