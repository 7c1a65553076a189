"""Relative functions, line bundles, and gerbes at the cocycle level.

Each geometric object over a map of covered spaces is stored as exactly
the cocycle data its classification produces: an integer or angle-valued
pair on the two covers, closed under the relative coboundary.  The
operations classify such pairs into the integer cohomology of the cone,
produce trivializing witnesses when the obstruction vanishes, compare
pairs up to coboundary, and run the integrality and Bohr-Sommerfeld
checks for closed rational pairs against generating relative cycles.

All verdicts are exact; angle equations are solved by clearing
denominators and working modulo a finite, provably sufficient bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cech import (
    CechCochain,
    Cover,
    CoverMap,
    RelCechCochain,
    _coboundary_matrix,
    bockstein,
    cech_diff,
    cover_cochain_complex,
    lift_angles,
    pullback,
    rel_diff,
    relative_cone_complex,
    star_cover_map,
)
from .chain import cone_of_map, cone_split
from .coeffs import INT, RAT, U1, CoeffRing
from .errors import (
    CoverMismatch,
    DegreeMismatch,
    NontrivialClass,
    NotACocycle,
    NotClosed,
    NotIsotropic,
    RingMismatch,
    UnsupportedRing,
)
from .homology import AbGroup, HomologyData, homology_data, snf, solve_int
from .matrix import Matrix, hstack
from .simplicial import SimplicialMap, chain_map


# ---------------------------------------------------------------------------
# Cocycle types
# ---------------------------------------------------------------------------


def _check_part(c: CechCochain, ring: CoeffRing, degree: int, name: str):
    if c.ring != ring:
        raise RingMismatch(f"component {name} must be {ring}-valued, got {c.ring}")
    if c.degree != degree:
        raise DegreeMismatch(f"component {name} must have degree {degree}, got {c.degree}")


class RelFunctionCocycle:
    """Winding data of a circle-valued function relative to a map.

    `b` records integer branch choices on the source cover, `a` the
    integer winding cocycle on the target cover; closedness says the
    windings match across the map.
    """

    kind = "function"

    def __init__(self, m: CoverMap, b: CechCochain, a: CechCochain):
        _check_part(b, INT, 0, "b")
        _check_part(a, INT, 1, "a")
        self.u = RelCechCochain(m, b, a)

    @property
    def cover_map(self) -> CoverMap:
        return self.u.m

    @property
    def b(self) -> CechCochain:
        return self.u.s

    @property
    def a(self) -> CechCochain:
        return self.u.t

    def __eq__(self, other):
        if not isinstance(other, RelFunctionCocycle):
            return NotImplemented
        return self.u == other.u

    def __repr__(self):
        return f"RelFunctionCocycle({self.u!r})"


class RelLineBundleCocycle:
    """Transition data of a line bundle on the target trivialized upstairs.

    `g` is the angle-valued transition 1-cocycle on the target cover,
    `f` the section phases on the source cover with coboundary the
    pulled-back transitions.
    """

    kind = "line_bundle"

    def __init__(self, m: CoverMap, f: CechCochain, g: CechCochain):
        _check_part(f, U1, 0, "f")
        _check_part(g, U1, 1, "g")
        self.u = RelCechCochain(m, f, g)

    @property
    def cover_map(self) -> CoverMap:
        return self.u.m

    @property
    def f(self) -> CechCochain:
        return self.u.s

    @property
    def g(self) -> CechCochain:
        return self.u.t

    def __eq__(self, other):
        if not isinstance(other, RelLineBundleCocycle):
            return NotImplemented
        return self.u == other.u

    def __repr__(self):
        return f"RelLineBundleCocycle({self.u!r})"


class RelGerbeCocycle:
    """A gerbe on the target with a quasi-line-bundle structure upstairs.

    `t` is the angle-valued gerbe 2-cocycle on the target cover, `s`
    the 1-cochain on the source cover whose coboundary is the pullback
    of `t`; together they form a relative 2-cocycle in the cone.
    """

    kind = "gerbe"

    def __init__(self, m: CoverMap, s: CechCochain, t: CechCochain):
        _check_part(s, U1, 1, "s")
        _check_part(t, U1, 2, "t")
        self.u = RelCechCochain(m, s, t)

    @property
    def cover_map(self) -> CoverMap:
        return self.u.m

    @property
    def s(self) -> CechCochain:
        return self.u.s

    @property
    def t(self) -> CechCochain:
        return self.u.t

    def __eq__(self, other):
        if not isinstance(other, RelGerbeCocycle):
            return NotImplemented
        return self.u == other.u

    def __repr__(self):
        return f"RelGerbeCocycle({self.u!r})"


COCYCLE_KINDS = {
    "function": RelFunctionCocycle,
    "line_bundle": RelLineBundleCocycle,
    "gerbe": RelGerbeCocycle,
}


def _rewrap(c, u: RelCechCochain):
    return type(c)(u.m, u.s, u.t)


# ---------------------------------------------------------------------------
# Validation and group structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Defect:
    """One failing overlap: which cover, which sets, and the residue."""

    side: str
    overlap: tuple
    value: object


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    defects: tuple

    def __bool__(self) -> bool:
        return self.valid


def validate(c) -> ValidationReport:
    """Exact check of both cocycle identities, defects localized.

    `source` defects are failures of d(low) = pullback(high) on source
    overlaps; `target` defects are failures of d(high) = 0.
    """
    w = rel_diff(c.u)
    defects = [Defect("source", names, v) for names, v in w.s.items()]
    defects += [Defect("target", names, v) for names, v in w.t.items()]
    return ValidationReport(w.is_zero, tuple(defects))


def group_op(c1, c2):
    """Componentwise sum; tensor product at the geometric level."""
    if type(c1) is not type(c2):
        raise TypeError(f"cannot combine {type(c1).__name__} with {type(c2).__name__}")
    return _rewrap(c1, c1.u + c2.u)


def inverse(c):
    """Componentwise negation; the dual object."""
    return _rewrap(c, -c.u)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    """A class written in a fixed generator basis of an AbGroup.

    `orders` gives the order of each generator, 0 meaning infinite;
    torsion coordinates are canonicalized into [0, order).
    """

    kind: str
    basis: str
    coords: tuple
    orders: tuple
    group: AbGroup

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def torsion_orders(self) -> tuple:
        return tuple(d for d in self.orders if d)


def _cone_data(m: CoverMap, chain_degree: int) -> HomologyData:
    """Integer cone homology, computed once per cover map and degree."""
    memo = m.__dict__.setdefault("_cone_data_memo", {})
    if chain_degree not in memo:
        memo[chain_degree] = homology_data(relative_cone_complex(m, INT), chain_degree)
    return memo[chain_degree]


def _require_valid(c):
    rep = validate(c)
    if not rep.valid:
        raise NotACocycle(
            f"{c.kind} cocycle conditions fail on {len(rep.defects)} overlap(s)"
        )


def classify(c) -> ClassReport:
    """The class of a cocycle in the integer cohomology of the cone.

    Integer cocycles are expressed directly in their own degree;
    angle-valued cocycles go through the connecting map one degree up.
    """
    _require_valid(c)
    u = c.u
    q = u.degree
    if u.ring == INT:
        data = _cone_data(u.m, -q)
        return ClassReport(c.kind, f"H^{q}(Phi,Z)", data.express(u.vector()), data.orders, data.group)
    res = bockstein(u, _cone_data(u.m, -(q + 1)))
    return ClassReport(c.kind, f"H^{q + 1}(Phi,Z)", res.coords, res.data.orders, res.data.group)


# ---------------------------------------------------------------------------
# Trivialization
# ---------------------------------------------------------------------------


def _scaled_identity(n: int, k: int) -> Matrix:
    return Matrix(INT, n, n, [[k if i == j else 0 for j in range(n)] for i in range(n)])


def _solve_mod_one(mtx: Matrix, target) -> list | None:
    """Exact rational solution of mtx @ w = target (mod 1), or None.

    Denominators are cleared to D = lcm of the target's denominators
    and the equation is solved over Z/(D*e), where e is the lcm of the
    matrix's nonzero elementary divisors; solvability there is
    equivalent to solvability mod 1, which keeps the search finite.
    """
    s = snf(mtx)
    cleared = lcm(*(Fraction(v).denominator for v in target)) if len(target) else 1
    exponent = 1
    for d in s.diag:
        if d:
            exponent = lcm(exponent, d)
    modulus = cleared * exponent
    ints = [int(Fraction(v) * modulus) for v in target]
    aug = hstack(INT, [mtx, _scaled_identity(mtx.nrows, modulus)])
    sol = solve_int(aug, Matrix.column(INT, ints))
    if sol is None:
        return None
    return [Fraction(sol.entry(i, 0), modulus) for i in range(mtx.ncols)]


def trivialize(c) -> RelCechCochain:
    """A witness pair one degree down whose coboundary is the cocycle.

    Over the integers this is an exact lattice solve; over angles the
    solve runs modulo the cleared-denominator bound.  On failure the
    cocycle's class is raised; for angle cocycles a zero class with no
    witness means the obstruction is rational rather than torsion.
    """
    _require_valid(c)
    u = c.u
    q = u.degree
    m = u.m
    mtx = relative_cone_complex(m, INT).diff(-(q - 1))
    target = u.vector()
    if u.ring == INT:
        sol = solve_int(mtx, Matrix.column(INT, list(target)))
        if sol is None:
            raise NontrivialClass(classify(c))
        vec = [sol.entry(i, 0) for i in range(mtx.ncols)]
    else:
        vec = _solve_mod_one(mtx, target)
        if vec is None:
            raise NontrivialClass(classify(c))
    witness = RelCechCochain.from_vector(m, q - 1, u.ring, [u.ring.normalize(v) for v in vec])
    assert rel_diff(witness) == u, "solver returned a non-witness"
    return witness


def is_equivalent(c1, c2):
    """Whether two cocycles differ by a relative coboundary.

    Returns (True, witness) with d(witness) = c1 - c2, or (False, None).
    """
    diff = group_op(c1, inverse(c2))
    try:
        return True, trivialize(diff)
    except NontrivialClass:
        return False, None


# ---------------------------------------------------------------------------
# Absolute (single-cover) classification, for the target data alone
# ---------------------------------------------------------------------------


def absolute_classify(t: CechCochain, kind: str = "absolute") -> ClassReport:
    """Class of a closed cochain on one cover, in the cover's cohomology.

    Angle-valued cocycles map through the connecting homomorphism into
    degree q+1 integer cohomology; integer cocycles are expressed in
    their own degree.
    """
    q = t.degree
    if not cech_diff(t).is_zero:
        raise NotACocycle("cochain is not closed")
    if t.ring == INT:
        data = homology_data(cover_cochain_complex(t.cover, INT), -q)
        return ClassReport(kind, f"H^{q}(N,Z)", data.express(t.vector()), data.orders, data.group)
    if t.ring != U1:
        raise UnsupportedRing(f"no classification over {t.ring}")
    w = cech_diff(lift_angles(t))
    ints = []
    for v in w.vector():
        assert v.denominator == 1, "connecting cocycle came out non-integral"
        ints.append(int(v))
    data = homology_data(cover_cochain_complex(t.cover, INT), -(q + 1))
    coords = data.express(ints)
    shift = CechCochain.from_vector(t.cover, q, RAT, [1] * t.cover.rank(q))
    w2 = cech_diff(lift_angles(t) + shift)
    assert data.express([int(v) for v in w2.vector()]) == coords, "class depended on the lift"
    return ClassReport(kind, f"H^{q + 1}(N,Z)", coords, data.orders, data.group)


def absolute_trivialize(t: CechCochain) -> CechCochain:
    """A cochain one degree down with coboundary t, or NontrivialClass."""
    q = t.degree
    if not cech_diff(t).is_zero:
        raise NotACocycle("cochain is not closed")
    mtx = _coboundary_matrix(t.cover, q - 1)
    target = t.vector()
    if t.ring == INT:
        sol = solve_int(mtx, Matrix.column(INT, list(target)))
        if sol is None:
            raise NontrivialClass(absolute_classify(t))
        vec = [sol.entry(i, 0) for i in range(mtx.ncols)]
    elif t.ring == U1:
        vec = _solve_mod_one(mtx, target)
        if vec is None:
            raise NontrivialClass(absolute_classify(t))
    else:
        raise UnsupportedRing(f"no trivialization over {t.ring}")
    witness = CechCochain.from_vector(t.cover, q - 1, t.ring, [t.ring.normalize(v) for v in vec])
    assert cech_diff(witness) == t, "solver returned a non-witness"
    return witness


def dixmier_douady(c: RelGerbeCocycle) -> ClassReport:
    """The absolute class of the target gerbe data in H^3 of its cover."""
    _require_valid(c)
    return absolute_classify(c.t, kind=c.kind)


# ---------------------------------------------------------------------------
# Integrality and the Bohr-Sommerfeld check
# ---------------------------------------------------------------------------


class RelRealCochainPair:
    """A closed-form stand-in: rational cochains on the vertex-star covers.

    `alpha` has degree n on the target model, `beta` degree n-1 on the
    source model; the pair is relative-closed when d(beta, alpha)
    vanishes in the cone, which is what lets its pairing with relative
    cycles descend to homology.
    """

    def __init__(self, phi: SimplicialMap, alpha: CechCochain, beta: CechCochain):
        if alpha.ring != RAT or beta.ring != RAT:
            raise RingMismatch("real cochain pairs are rational-valued")
        m = star_cover_map(phi)
        if alpha.cover != m.dst:
            raise CoverMismatch("alpha must live on the target model's star cover")
        if beta.cover != m.src:
            raise CoverMismatch("beta must live on the source model's star cover")
        if beta.degree != alpha.degree - 1:
            raise DegreeMismatch(f"degrees ({alpha.degree}, {beta.degree}) are not (n, n-1)")
        self.phi = phi
        self.m = m
        self.alpha = alpha
        self.beta = beta

    @classmethod
    def from_values(cls, phi: SimplicialMap, degree: int, alpha_values, beta_values) -> "RelRealCochainPair":
        m = star_cover_map(phi)
        alpha = CechCochain(m.dst, degree, RAT, alpha_values)
        beta = CechCochain(m.src, degree - 1, RAT, beta_values)
        return cls(phi, alpha, beta)

    @property
    def degree(self) -> int:
        return self.alpha.degree

    def rel(self) -> RelCechCochain:
        return RelCechCochain(self.m, self.beta, self.alpha)

    @property
    def is_closed(self) -> bool:
        return rel_diff(self.rel()).is_zero

    def shift_by_coboundary(self, low: RelCechCochain) -> "RelRealCochainPair":
        """The pair plus d(low); pairings with cycles are unchanged."""
        w = rel_diff(low)
        return RelRealCochainPair(self.phi, self.alpha + w.t, self.beta + w.s)

    def __eq__(self, other):
        if not isinstance(other, RelRealCochainPair):
            return NotImplemented
        return self.phi is other.phi and self.alpha == other.alpha and self.beta == other.beta

    def __repr__(self):
        return f"RelRealCochainPair(deg {self.degree})"


@dataclass(frozen=True)
class GeneratorPairing:
    """Pairing of the pair against one homology generator.

    For free generators (order 0) integrality is judged on the value;
    for torsion generators on order * value, with the raw value kept.
    """

    order: int
    value: Fraction
    ok: bool
    cycle: tuple


@dataclass(frozen=True)
class IntegralityReport:
    degree: int
    pairings: tuple

    @property
    def integral(self) -> bool:
        return all(p.ok for p in self.pairings)


def _chain_cone_data(phi: SimplicialMap, n: int):
    memo = phi.__dict__.setdefault("_cone_data_memo", {})
    if n not in memo:
        f = chain_map(phi, INT)
        memo[n] = (f, homology_data(cone_of_map(f), n))
    return memo[n]


def is_integral(p: RelRealCochainPair) -> IntegralityReport:
    """Pair (alpha, beta) against every generator of the map's homology.

    The pairing of a relative cycle (theta, eta) is alpha(eta) minus
    beta(theta); for a closed pair this depends only on the class.
    """
    if not p.is_closed:
        raise NotClosed("d(beta, alpha) is nonzero in the relative cone")
    n = p.degree
    f, data = _chain_cone_data(p.phi, n)
    alpha_vec = p.alpha.vector()
    beta_vec = p.beta.vector()
    pairings = []
    for order, g in zip(data.orders, data.group.generators):
        theta, eta = cone_split(f, n, g)
        value = Fraction(
            sum(a * y for a, y in zip(alpha_vec, eta))
            - sum(b * x for b, x in zip(beta_vec, theta))
        )
        scaled = value * order if order else value
        pairings.append(GeneratorPairing(order, value, scaled.denominator == 1, tuple(g)))
    return IntegralityReport(n, tuple(pairings))


def bohr_sommerfeld(omega: CechCochain, phi: SimplicialMap) -> IntegralityReport:
    """Integrality of (omega, 0) for a map with isotropic pullback.

    `omega` is a pre-normalized rational 2-cochain on the target model;
    any constant factor is the caller's responsibility.
    """
    m = star_cover_map(phi)
    if omega.ring != RAT:
        raise RingMismatch("omega must be rational-valued")
    if omega.cover != m.dst:
        raise CoverMismatch("omega must live on the target model's star cover")
    if not pullback(m, omega).is_zero:
        raise NotIsotropic("omega pulls back nonzero along the map")
    if not cech_diff(omega).is_zero:
        raise NotClosed("omega is not closed")
    beta = CechCochain(m.src, omega.degree - 1, RAT)
    return is_integral(RelRealCochainPair(phi, omega, beta))
