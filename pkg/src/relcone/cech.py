"""Cech cochains on covers and the relative cone of a cover map.

A cover is presented combinatorially by its nerve: one vertex per cover
set, one simplex per declared nonempty intersection.  Cochains assign a
coefficient to each nonempty (p+1)-fold overlap, antisymmetrically in
the listing order.  A map of covered spaces that sends each source set
into a target set induces a pullback on cochains, and the mapping cone
of that pullback computes the cohomology of the map: classes that
restrict to zero upstairs together with a reason why.

All coboundary and pullback matrices are integer matrices acting
through the Z-module structure of the coefficients, so the same code
path serves Z, Q, Z/n and the circle group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

from .chain import (
    ComplexMap,
    GradedComplex,
    cochain_cone_split,
    cochain_complex,
    cochain_map,
    cone_of_cochain_map,
)
from .coeffs import INT, RAT, U1, CoeffRing, Scalar, angle_lift
from .errors import (
    CoverMismatch,
    DegreeMismatch,
    NotACocycle,
    RingMismatch,
    UnsupportedRing,
)
from .homology import AbGroup, HomologyData, homology_at, homology_data
from .matrix import Matrix
from .simplicial import SimplicialComplex, SimplicialMap, chain_complex, chain_map, nerve, _sort_sign


class Cover:
    """An open cover, known only through its nerve."""

    def __init__(self, nerve_complex: SimplicialComplex):
        self.nerve = nerve_complex

    @classmethod
    def from_sets(cls, sets, intersections) -> "Cover":
        return cls(nerve(sets, intersections))

    @property
    def names(self) -> tuple:
        return self.nerve.vertices

    @property
    def dim(self) -> int:
        return self.nerve.dim

    def rank(self, p: int) -> int:
        """Number of stored p-fold-overlap simplices."""
        return self.nerve.n_rank(p)

    def overlaps(self, p: int) -> tuple:
        """The p-simplices of the nerve as name tuples, in basis order."""
        return tuple(self.nerve.labels(s) for s in self.nerve.simplices(p))

    def intersections(self) -> tuple:
        """All multi-set overlaps as sorted index tuples (serialized form)."""
        out = []
        for n in range(1, self.nerve.dim + 1):
            out.extend(self.nerve.simplices(n))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Cover):
            return NotImplemented
        return self.nerve == other.nerve

    def __repr__(self):
        return f"Cover({len(self.names)} sets, nerve dim {self.dim})"


class CoverMap:
    """A refinement-style map of covers.

    `assignment` sends each source set name to a target set name, and
    must carry nonempty overlaps to nonempty overlaps; that is exactly
    the condition that it defines a simplicial map of nerves.
    """

    def __init__(self, src: Cover, dst: Cover, assignment: Mapping):
        self.src = src
        self.dst = dst
        self.assignment = dict(assignment)
        self.nerve_map = SimplicialMap(src.nerve, dst.nerve, self.assignment)

    def __call__(self, name):
        return self.assignment[name]

    def __eq__(self, other):
        if not isinstance(other, CoverMap):
            return NotImplemented
        return (
            self.src == other.src
            and self.dst == other.dst
            and self.assignment == other.assignment
        )

    def __repr__(self):
        return f"CoverMap({len(self.src.names)} -> {len(self.dst.names)} sets)"


def identity_cover_map(cover: Cover) -> CoverMap:
    return CoverMap(cover, cover, {n: n for n in cover.names})


def compose_cover_maps(outer: CoverMap, inner: CoverMap) -> CoverMap:
    if inner.dst != outer.src:
        raise CoverMismatch("composition needs inner.dst == outer.src")
    return CoverMap(inner.src, outer.dst, {n: outer(inner(n)) for n in inner.src.names})


def _as_raw(ring: CoeffRing, v):
    if isinstance(v, Scalar):
        if v.ring != ring:
            raise RingMismatch(f"value over {v.ring} in a {ring} cochain")
        return v.value
    return ring.normalize(v)


class CechCochain:
    """A p-cochain on a cover, stored on sorted overlap tuples.

    Values are looked up and assigned antisymmetrically: listing the
    same sets in a different order flips the sign by the permutation
    parity, and a listing with a repeated set reads as zero.
    """

    def __init__(self, cover: Cover, degree: int, ring: CoeffRing, values: Mapping = ()):
        # degree -1 is the always-zero slot below degree 0; it keeps the
        # source side of cone-degree-0 elements representable
        if degree < -1:
            raise DegreeMismatch("cochain degree must be >= -1")
        self.cover = cover
        self.degree = degree
        self.ring = ring
        vals: Dict[tuple, object] = {}
        for key, raw in dict(values).items():
            idx, sign = self._resolve(key)
            v = _as_raw(ring, raw)
            if sign < 0:
                v = ring.neg(v)
            if idx in vals:
                v = ring.add(vals[idx], v)
            vals[idx] = v
        self._vals = {k: v for k, v in vals.items() if v != ring.zero()}

    def _resolve(self, key) -> Tuple[tuple, int]:
        """Sorted index tuple and parity sign for a name listing."""
        names = (key,) if not isinstance(key, tuple) else key
        if len(names) != self.degree + 1:
            raise DegreeMismatch(
                f"key {names!r} has {len(names)} sets; degree {self.degree} needs {self.degree + 1}"
            )
        k = self.cover.nerve
        try:
            idx = tuple(k._index[n] for n in names)
        except KeyError as bad:
            raise CoverMismatch(f"unknown cover set {bad.args[0]!r}") from None
        if len(set(idx)) != len(idx):
            raise CoverMismatch(f"listing {names!r} repeats a cover set")
        key_sorted = tuple(sorted(idx))
        if key_sorted not in k._pos.get(self.degree, {}):
            raise CoverMismatch(f"sets {names!r} have no recorded common overlap")
        return key_sorted, _sort_sign(idx)

    def value(self, key):
        """The coefficient on a listing of sets, with antisymmetric sign."""
        names = (key,) if not isinstance(key, tuple) else key
        if len(set(names)) != len(names):
            if len(names) != self.degree + 1:
                raise DegreeMismatch(f"listing {names!r} has the wrong length")
            return self.ring.zero()
        idx, sign = self._resolve(names)
        v = self._vals.get(idx, self.ring.zero())
        return self.ring.neg(v) if sign < 0 else v

    def vector(self) -> tuple:
        z = self.ring.zero()
        return tuple(self._vals.get(s, z) for s in self.cover.nerve.simplices(self.degree))

    @classmethod
    def from_vector(cls, cover: Cover, degree: int, ring: CoeffRing, vec) -> "CechCochain":
        out = cls(cover, degree, ring)
        simplices = cover.nerve.simplices(degree)
        if len(vec) != len(simplices):
            raise DegreeMismatch(f"vector length {len(vec)} vs {len(simplices)} overlaps")
        z = ring.zero()
        vals = {}
        for s, v in zip(simplices, vec):
            v = _as_raw(ring, v)
            if v != z:
                vals[s] = v
        out._vals = vals
        return out

    def items(self):
        """(name tuple, value) pairs on the stored sorted listings."""
        k = self.cover.nerve
        return tuple((k.labels(s), v) for s, v in sorted(self._vals.items()))

    @property
    def is_zero(self) -> bool:
        return not self._vals

    def _like(self, other: "CechCochain"):
        if self.cover != other.cover:
            raise CoverMismatch("cochains live on different covers")
        if self.ring != other.ring:
            raise RingMismatch(f"cannot combine {self.ring} with {other.ring}")
        if self.degree != other.degree:
            raise DegreeMismatch(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other: "CechCochain") -> "CechCochain":
        self._like(other)
        vec = [self.ring.add(a, b) for a, b in zip(self.vector(), other.vector())]
        return CechCochain.from_vector(self.cover, self.degree, self.ring, vec)

    def __neg__(self) -> "CechCochain":
        vec = [self.ring.neg(a) for a in self.vector()]
        return CechCochain.from_vector(self.cover, self.degree, self.ring, vec)

    def __sub__(self, other: "CechCochain") -> "CechCochain":
        return self + (-other)

    def zscale(self, k: int) -> "CechCochain":
        """Integer multiple, defined over every coefficient module."""
        vec = [self.ring.zmul(k, a) for a in self.vector()]
        return CechCochain.from_vector(self.cover, self.degree, self.ring, vec)

    def __eq__(self, other):
        if not isinstance(other, CechCochain):
            return NotImplemented
        return (
            self.cover == other.cover
            and self.degree == other.degree
            and self.ring == other.ring
            and self._vals == other._vals
        )

    def __repr__(self):
        return f"CechCochain(deg {self.degree}, {self.ring}, {len(self._vals)} nonzero)"


def _coboundary_matrix(cover: Cover, p: int, ring: CoeffRing = INT) -> Matrix:
    """Matrix of d: C^p -> C^(p+1), the transposed nerve boundary."""
    return chain_complex(cover.nerve, ring).diff(p + 1).transpose()


def cech_diff(c: CechCochain) -> CechCochain:
    """Alternating-sum coboundary, one degree up."""
    m = _coboundary_matrix(c.cover, c.degree)
    return CechCochain.from_vector(c.cover, c.degree + 1, c.ring, m.zapply(c.ring, c.vector()))


def pullback(m: CoverMap, c: CechCochain) -> CechCochain:
    """Pull a target-cover cochain back along a cover map.

    The value on a source overlap is the value on the image overlap;
    listings whose image repeats a set read as zero.
    """
    if c.cover != m.dst:
        raise CoverMismatch("cochain does not live on the map's target cover")
    t = chain_map(m.nerve_map, INT).component(c.degree).transpose()
    return CechCochain.from_vector(m.src, c.degree, c.ring, t.zapply(c.ring, c.vector()))


def cover_cochain_complex(cover: Cover, ring: CoeffRing) -> GradedComplex:
    """The cochain complex of the nerve, in chain storage (degree -p)."""
    d = cover.nerve.dim
    ranks = {p: cover.rank(p) for p in range(d + 1)}
    diffs = {p: _coboundary_matrix(cover, p, ring) for p in range(d + 1)}
    return cochain_complex(ring, ranks, diffs)


def relative_cone_map(m: CoverMap, ring: CoeffRing) -> ComplexMap:
    """The pullback, as a cochain map from target-cover to source-cover cochains."""
    x = cover_cochain_complex(m.dst, ring)
    y = cover_cochain_complex(m.src, ring)
    cm = chain_map(m.nerve_map, ring)
    top = min(m.src.dim, m.dst.dim)
    mats = {p: cm.component(p).transpose() for p in range(top + 1)}
    return cochain_map(x, y, mats)


def relative_cone_complex(m: CoverMap, ring: CoeffRing) -> GradedComplex:
    """Cone of the pullback: degree q holds C^(q-1)(source) + C^q(target).

    Stored in chain orientation, so the degree-q cohomology of the map
    is the homology of this complex at chain degree -q.
    """
    return cone_of_cochain_map(relative_cone_map(m, ring))


def relative_cohomology(m: CoverMap, ring: CoeffRing, q: int) -> AbGroup:
    return homology_at(relative_cone_complex(m, ring), -q)


class RelCechCochain:
    """A relative q-cochain: s of degree q-1 on the source cover, t of
    degree q on the target cover, tied to the cover map they refine."""

    def __init__(self, m: CoverMap, s: CechCochain, t: CechCochain):
        if s.cover != m.src:
            raise CoverMismatch("s must live on the source cover")
        if t.cover != m.dst:
            raise CoverMismatch("t must live on the target cover")
        if s.ring != t.ring:
            raise RingMismatch(f"s over {s.ring} but t over {t.ring}")
        if s.degree + 1 != t.degree:
            raise DegreeMismatch(f"degrees ({s.degree}, {t.degree}) are not (q-1, q)")
        self.m = m
        self.s = s
        self.t = t

    @property
    def degree(self) -> int:
        return self.t.degree

    @property
    def ring(self) -> CoeffRing:
        return self.s.ring

    def vector(self) -> tuple:
        """Coordinates in the cone basis: s block then t block."""
        return self.s.vector() + self.t.vector()

    @classmethod
    def from_vector(cls, m: CoverMap, q: int, ring: CoeffRing, vec) -> "RelCechCochain":
        alpha, beta = cochain_cone_split(relative_cone_map(m, ring), q, vec)
        s = CechCochain.from_vector(m.src, q - 1, ring, alpha)
        t = CechCochain.from_vector(m.dst, q, ring, beta)
        return cls(m, s, t)

    @property
    def is_zero(self) -> bool:
        return self.s.is_zero and self.t.is_zero

    def _like(self, other: "RelCechCochain"):
        if self.m != other.m:
            raise CoverMismatch("relative cochains refine different cover maps")

    def __add__(self, other: "RelCechCochain") -> "RelCechCochain":
        self._like(other)
        return RelCechCochain(self.m, self.s + other.s, self.t + other.t)

    def __neg__(self) -> "RelCechCochain":
        return RelCechCochain(self.m, -self.s, -self.t)

    def __sub__(self, other: "RelCechCochain") -> "RelCechCochain":
        return self + (-other)

    def zscale(self, k: int) -> "RelCechCochain":
        return RelCechCochain(self.m, self.s.zscale(k), self.t.zscale(k))

    def __eq__(self, other):
        if not isinstance(other, RelCechCochain):
            return NotImplemented
        return self.m == other.m and self.s == other.s and self.t == other.t

    def __repr__(self):
        return f"RelCechCochain(deg {self.degree}, {self.ring})"


def rel_diff(u: RelCechCochain) -> RelCechCochain:
    """Cone differential: d(s, t) = (pullback(t) - ds, dt)."""
    s2 = pullback(u.m, u.t) - cech_diff(u.s)
    t2 = cech_diff(u.t)
    return RelCechCochain(u.m, s2, t2)


def is_rel_cocycle(u: RelCechCochain) -> bool:
    return rel_diff(u).is_zero


def lift_angles(c: CechCochain) -> CechCochain:
    """Canonical rational lift of an angle-valued cochain, values in [0, 1)."""
    if c.ring != U1:
        raise RingMismatch("lift_angles expects an angle-valued cochain")
    vec = [angle_lift(Scalar(U1, v)).value for v in c.vector()]
    return CechCochain.from_vector(c.cover, c.degree, RAT, vec)


@dataclass(frozen=True)
class BocksteinResult:
    """Integer cocycle measuring the failure of an angle cocycle to lift.

    `pair` is the integer relative cocycle d(lift), one degree up;
    `coords` are its class coordinates in the generator basis of `data`,
    the integer cohomology of the cone in that degree.
    """

    pair: RelCechCochain
    coords: tuple
    data: HomologyData

    @property
    def group(self) -> AbGroup:
        return self.data.group

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def _integer_rel_cochain(m: CoverMap, q: int, vec) -> RelCechCochain:
    ints = []
    for v in vec:
        assert v.denominator == 1, "connecting cocycle came out non-integral"
        ints.append(int(v))
    return RelCechCochain.from_vector(m, q, INT, ints)


def bockstein(u: RelCechCochain, data: HomologyData | None = None) -> BocksteinResult:
    """Connecting homomorphism of 0 -> Z -> Q -> Q/Z -> 0 on the cone.

    Lifts the angle-valued cocycle to rational cochains, applies the
    cone differential, and reads off the resulting integer cocycle one
    degree up together with its integer cohomology class.  The class
    does not depend on the chosen lift; this is re-checked against a
    shifted lift on every call.  `data` may carry the precomputed
    integer cone homology one degree up.
    """
    if u.ring != U1:
        raise UnsupportedRing("the connecting map applies to angle-valued cocycles")
    if not is_rel_cocycle(u):
        raise NotACocycle("relative cochain is not closed")
    q = u.degree
    lift = RelCechCochain(u.m, lift_angles(u.s), lift_angles(u.t))
    w = _integer_rel_cochain(u.m, q + 1, rel_diff(lift).vector())
    if data is None:
        data = homology_data(relative_cone_complex(u.m, INT), -(q + 1))
    coords = data.express(w.vector())
    ones_s = CechCochain.from_vector(u.m.src, q - 1, RAT, [1] * u.m.src.rank(q - 1))
    ones_t = CechCochain.from_vector(u.m.dst, q, RAT, [-1] * u.m.dst.rank(q))
    shifted = RelCechCochain(u.m, lift.s + ones_s, lift.t + ones_t)
    w2 = _integer_rel_cochain(u.m, q + 1, rel_diff(shifted).vector())
    assert data.express(w2.vector()) == coords, "connecting class depended on the lift"
    return BocksteinResult(w, coords, data)


def star_cover(k: SimplicialComplex) -> Cover:
    """The cover by open vertex stars; its nerve is the complex itself."""
    return Cover(k)


def star_cover_map(phi: SimplicialMap) -> CoverMap:
    """Star covers turn a simplicial map into a cover map via its vertex map."""
    return CoverMap(star_cover(phi.src), star_cover(phi.dst), dict(phi.vmap))
