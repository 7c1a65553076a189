"""Smith normal form, homology presentations, and long exact sequences.

All integer work is exact big-integer arithmetic.  The Smith routine
returns A = U D V with unimodular U, V together with their inverses,
which is what every downstream lattice computation (kernels, solving,
membership, quotient presentations) consumes.

Homology groups are presented as
:class:`AbGroup` values: free rank, divisibility-ordered torsion, and
representative cycles chosen from SNF change-of-basis columns, torsion
generators first.  Exactness of long sequences is decided by
torsion-aware subgroup membership in generator coordinates, never by
rank bookkeeping alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import ComplexMap, GradedComplex, cone_of_map, cone_split
from .coeffs import INT, CoeffRing
from .errors import (
    InvalidChainMap,
    NonCommutingSquare,
    ShapeMismatch,
    UnsupportedRing,
)
from .matrix import Matrix, block, hstack

# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    """A = u @ d @ v with u, v unimodular; uinv, vinv their inverses."""

    u: Matrix
    d: Matrix
    v: Matrix
    uinv: Matrix
    vinv: Matrix
    diag: tuple
    rank: int


def snf(a: Matrix) -> SNFResult:
    """Smith normal form over Z.

    Pivoting picks the minimal absolute nonzero entry of the remaining
    submatrix; the returned diagonal is nonnegative and satisfies
    d1 | d2 | ... .  Postconditions (factorization, inverses,
    divisibility) are asserted on every call in debug builds.
    """
    if a.ring != INT:
        raise UnsupportedRing("snf is defined over Z")
    m, n = a.nrows, a.ncols
    d = [list(r) for r in a.rows]
    u = _eye_rows(m)
    uinv = _eye_rows(m)
    v = _eye_rows(n)
    vinv = _eye_rows(n)

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        for r in u:
            r[i], r[j] = r[j], r[i]
        uinv[i], uinv[j] = uinv[j], uinv[i]

    def row_add(i, j, k):
        # row i of D += k * row j; U col j -= k * U col i; Uinv row i += k * row j
        di, dj = d[i], d[j]
        for c in range(n):
            di[c] += k * dj[c]
        for r in u:
            r[j] -= k * r[i]
        ui, uj = uinv[i], uinv[j]
        for c in range(m):
            ui[c] += k * uj[c]

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        for r in u:
            r[i] = -r[i]
        uinv[i] = [-x for x in uinv[i]]

    def col_swap(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        v[i], v[j] = v[j], v[i]
        for r in vinv:
            r[i], r[j] = r[j], r[i]

    def col_add(i, j, k):
        # col i of D += k * col j; V row j -= k * row i; Vinv col i += k * col j
        for r in d:
            r[i] += k * r[j]
        vj, vi = v[j], v[i]
        for c in range(n):
            vj[c] -= k * vi[c]
        for r in vinv:
            r[i] += k * r[j]

    def find_pivot(t):
        best = None
        bi = bj = -1
        for i in range(t, m):
            di = d[i]
            for j in range(t, n):
                x = di[j]
                if x:
                    ax = -x if x < 0 else x
                    if best is None or ax < best:
                        best, bi, bj = ax, i, j
                        if best == 1:
                            return bi, bj
        return (bi, bj) if best is not None else None

    limit = min(m, n)
    t = 0
    while t < limit:
        piv = find_pivot(t)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            if i0 != t:
                row_swap(t, i0)
            if j0 != t:
                col_swap(t, j0)
            if d[t][t] < 0:
                row_negate(t)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = x // p
                    if q:
                        row_add(i, t, -q)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = d[t][j]
                if x:
                    q = x // p
                    if q:
                        col_add(j, t, -q)
                    if d[t][j]:
                        dirty = True
            if dirty:
                piv = find_pivot(t)
                continue
            bad = None
            for i in range(t + 1, m):
                di = d[i]
                for j in range(t + 1, n):
                    if di[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
            piv = (t, t)
        t += 1

    res = SNFResult(
        u=Matrix(INT, m, m, u),
        d=Matrix(INT, m, n, d),
        v=Matrix(INT, n, n, v),
        uinv=Matrix(INT, m, m, uinv),
        vinv=Matrix(INT, n, n, vinv),
        diag=tuple(d[i][i] for i in range(limit)),
        rank=sum(1 for i in range(limit) if d[i][i]),
    )
    if __debug__:
        _check_snf(a, res)
    return res


def _eye_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _check_snf(a: Matrix, r: SNFResult):
    assert r.u @ r.d @ r.v == a, "snf: A != U D V"
    assert r.u @ r.uinv == Matrix.identity(INT, a.nrows), "snf: U inverse wrong"
    assert r.v @ r.vinv == Matrix.identity(INT, a.ncols), "snf: V inverse wrong"
    diag = r.diag
    assert all(x >= 0 for x in diag), "snf: negative diagonal"
    for i in range(len(diag) - 1):
        if diag[i + 1]:
            assert diag[i] and diag[i + 1] % diag[i] == 0, "snf: divisibility chain broken"
        # zeros must come last
        if not diag[i]:
            assert not diag[i + 1], "snf: zero before nonzero on diagonal"
    for i in range(a.nrows):
        for j in range(a.ncols):
            if i != j:
                assert r.d.entry(i, j) == 0, "snf: D not diagonal"


# ---------------------------------------------------------------------------
# Lattice utilities on top of SNF
# ---------------------------------------------------------------------------


def kernel_int(a: Matrix, s: SNFResult | None = None) -> Matrix:
    """Basis of the (saturated) integer kernel, as columns."""
    if s is None:
        s = snf(a)
    cols = list(range(s.rank, a.ncols))
    return s.vinv.submatrix(range(a.ncols), cols)


def solve_int(a: Matrix, b: Matrix, s: SNFResult | None = None) -> Matrix | None:
    """One integer solution X of A X = B, or None if none exists."""
    if s is None:
        s = snf(a)
    if b.nrows != a.nrows:
        raise ShapeMismatch(f"solve: {a.shape} vs rhs {b.shape}")
    c = s.uinv @ b
    rows = []
    for i in range(a.ncols):
        if i < len(s.diag) and s.diag[i]:
            row = []
            for j in range(b.ncols):
                num = c.entry(i, j)
                if num % s.diag[i]:
                    return None
                row.append(num // s.diag[i])
            rows.append(row)
        else:
            rows.append([0] * b.ncols)
    for i in range(len(s.diag), a.nrows):
        for j in range(b.ncols):
            if c.entry(i, j):
                return None
    for i in range(s.rank, min(len(s.diag), a.nrows)):
        for j in range(b.ncols):
            if c.entry(i, j):
                return None
    y = Matrix(INT, a.ncols, b.ncols, rows)
    return s.vinv @ y


def member_int(gens: Matrix, vec, s: SNFResult | None = None) -> bool:
    """Is vec in the subgroup generated by the columns of gens?"""
    b = Matrix.column(INT, list(vec))
    return solve_int(gens, b, s) is not None


def solve_int_mod(a: Matrix, b: Matrix, k: int) -> Matrix | None:
    """One solution of A X = B (mod k), via the augmented system [A | kI]."""
    if k <= 0:
        raise ShapeMismatch("modulus must be positive")
    aug = hstack(INT, [a, Matrix.identity(INT, a.nrows).zscale(k)])
    sol = solve_int(aug, b)
    if sol is None:
        return None
    return sol.submatrix(range(a.ncols), range(b.ncols))


# ---------------------------------------------------------------------------
# Field elimination (Q and Z/p)
# ---------------------------------------------------------------------------


def _field_check(ring: CoeffRing):
    if not ring.is_field:
        raise UnsupportedRing(f"{ring} is not a supported field")


def field_rank(a: Matrix) -> int:
    _field_check(a.ring)
    return len(_rref(a)[1])


def _rref(a: Matrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    ring = a.ring
    rows = [list(r) for r in a.rows]
    m, n = a.nrows, a.ncols
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if rows[i][c] != ring.zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != ring.zero():
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def kernel_field(a: Matrix) -> Matrix:
    """Basis of the null space over a field, as columns."""
    _field_check(a.ring)
    ring = a.ring
    rows, pivots = _rref(a)
    free = [c for c in range(a.ncols) if c not in pivots]
    basis_cols = []
    for fc in free:
        vec = [ring.zero()] * a.ncols
        vec[fc] = ring.one()
        for r, pc in enumerate(pivots):
            vec[pc] = ring.neg(rows[r][fc])
        basis_cols.append(vec)
    return Matrix(ring, a.ncols, len(basis_cols), list(zip(*basis_cols)) if basis_cols else [[] for _ in range(a.ncols)])


def solve_field(a: Matrix, b: Matrix) -> Matrix | None:
    """One field solution of A X = B, or None."""
    _field_check(a.ring)
    ring = a.ring
    aug = hstack(ring, [a, b])
    rows, pivots = _rref(aug)
    for pc in pivots:
        if pc >= a.ncols:
            return None
    out = [[ring.zero()] * b.ncols for _ in range(a.ncols)]
    for r, pc in enumerate(pivots):
        for j in range(b.ncols):
            out[pc][j] = rows[r][a.ncols + j]
    return Matrix(ring, a.ncols, b.ncols, out)


# ---------------------------------------------------------------------------
# Homology presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbGroup:
    """A finitely generated abelian group with chosen representatives.

    ``torsion`` entries are >= 2 and divisibility-ordered; ``generators``
    lists representative vectors in ambient coordinates, torsion
    generators first (matching ``torsion``), then ``free_rank`` free
    generators.  Over a field, ``free_rank`` is the dimension and
    ``torsion`` is empty.
    """

    free_rank: int
    torsion: tuple
    generators: tuple

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self):
        """Group order: an int when finite, None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def describe(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


class HomologyData:
    """An AbGroup together with the machinery to express cycles in it."""

    def __init__(self, ring, ambient_rank, group, gen_matrix, orders, boundary_gens):
        self.ring = ring
        self.ambient_rank = ambient_rank
        self.group = group
        self.gen_matrix = gen_matrix  # ambient x (number of kept generators)
        self.orders = orders  # per kept generator: d_i for torsion, 0 for free
        self.boundary_gens = boundary_gens  # ambient x b
        self._solver = None

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def relation_matrix(self) -> Matrix:
        """Columns d_i e_i for the torsion generators, in gen coordinates."""
        cols = [i for i, d in enumerate(self.orders) if d]
        rows = [[0] * len(cols) for _ in range(self.ngens)]
        for j, i in enumerate(cols):
            rows[i][j] = self.orders[i]
        mr = INT if self.ring == INT else self.ring
        return Matrix(mr, self.ngens, len(cols), rows)

    def express(self, vec):
        """Coordinates of the class [vec] in the kept generator basis.

        vec must be a cycle (in ambient coordinates).  Torsion
        coordinates are canonicalized into [0, d_i).
        """
        if len(vec) != self.ambient_rank:
            raise ShapeMismatch(f"cycle length {len(vec)} vs ambient {self.ambient_rank}")
        mr = INT if self.ring == INT else self.ring
        if self._solver is None:
            self._solver = hstack(mr, [self.gen_matrix, self.boundary_gens])
            if self.ring == INT:
                self._solver_snf = snf(self._solver)
        b = Matrix.column(mr, list(vec))
        if self.ring == INT:
            sol = solve_int(self._solver, b, self._solver_snf)
        else:
            sol = solve_field(self._solver, b)
        if sol is None:
            raise InvalidChainMap("vector is not a cycle modulo boundaries")
        coords = [sol.entry(i, 0) for i in range(self.ngens)]
        if self.ring == INT:
            coords = [c % d if d else c for c, d in zip(coords, self.orders)]
        return tuple(coords)


def _canonical_sign(col):
    for x in col:
        if x:
            return 1 if x > 0 else -1
    return 1


def _quotient_group_int(ambient_rank: int, num_basis: Matrix, den_gens: Matrix) -> HomologyData:
    """Present span(num_basis)/span(den_gens) with den inside num.

    num_basis columns must be a basis of the numerator lattice; den_gens
    columns must lie in it.
    """
    k = num_basis.ncols
    if k == 0:
        group = AbGroup(0, (), ())
        return HomologyData(INT, ambient_rank, group, num_basis, (), den_gens)
    s_num = snf(num_basis)
    w = solve_int(num_basis, den_gens, s_num)
    assert w is not None, "denominator not contained in numerator lattice"
    s2 = snf(w)
    new_basis = num_basis @ s2.u
    orders = []
    for i in range(k):
        orders.append(s2.diag[i] if i < len(s2.diag) else 0)
    keep = [i for i in range(k) if orders[i] != 1]
    torsion = tuple(orders[i] for i in keep if orders[i] >= 2)
    free_rank = sum(1 for i in keep if orders[i] == 0)
    # torsion generators first (SNF diagonal is divisibility-ordered), then free
    keep_sorted = [i for i in keep if orders[i] >= 2] + [i for i in keep if orders[i] == 0]
    cols = []
    kept_orders = []
    for i in keep_sorted:
        col = list(new_basis.col(i))
        sgn = _canonical_sign(col)
        cols.append([sgn * x for x in col])
        kept_orders.append(orders[i])
    gen_matrix = Matrix(INT, ambient_rank, len(cols), list(zip(*cols)) if cols else [[] for _ in range(ambient_rank)])
    group = AbGroup(free_rank, torsion, tuple(tuple(c) for c in cols))
    return HomologyData(INT, ambient_rank, group, gen_matrix, tuple(kept_orders), den_gens)


def _homology_data_int(c: GradedComplex, n: int) -> HomologyData:
    dn = c.diff(n)
    dnext = c.diff(n + 1)
    kern = kernel_int(dn)
    return _quotient_group_int(c.rank(n), kern, dnext)


def _homology_data_field(c: GradedComplex, n: int) -> HomologyData:
    ring = c.ring
    dn = c.diff(n)
    dnext = c.diff(n + 1)
    kern = kernel_field(dn)
    # image basis: columns of dnext that increase rank
    base_cols = []
    rank_so_far = 0
    for j in range(dnext.ncols):
        cand = base_cols + [list(dnext.col(j))]
        m = Matrix(ring, c.rank(n), len(cand), list(zip(*cand)))
        r = field_rank(m)
        if r > rank_so_far:
            base_cols.append(list(dnext.col(j)))
            rank_so_far = r
    gens = []
    for j in range(kern.ncols):
        cand = base_cols + gens + [list(kern.col(j))]
        m = Matrix(ring, c.rank(n), len(cand), list(zip(*cand)))
        if field_rank(m) > len(base_cols) + len(gens):
            gens.append(list(kern.col(j)))
    gen_matrix = Matrix(ring, c.rank(n), len(gens), list(zip(*gens)) if gens else [[] for _ in range(c.rank(n))])
    boundary = Matrix(ring, c.rank(n), len(base_cols), list(zip(*base_cols)) if base_cols else [[] for _ in range(c.rank(n))])
    group = AbGroup(len(gens), (), tuple(tuple(g) for g in gens))
    return HomologyData(ring, c.rank(n), group, gen_matrix, tuple([0] * len(gens)), boundary)


def homology_data(c: GradedComplex, n: int) -> HomologyData:
    ring = c.ring
    if ring == INT:
        return _homology_data_int(c, n)
    if ring.kind == "U1":
        raise UnsupportedRing(
            "homology over the circle group is undefined; run the integer cone "
            "and the exponential encoder instead"
        )
    if ring.is_field:
        return _homology_data_field(c, n)
    raise UnsupportedRing(f"homology over {ring} is not supported (composite modulus)")


def homology_at(c: GradedComplex, n: int) -> AbGroup:
    """H_n of a chain-stored complex, as an AbGroup presentation."""
    return homology_data(c, n).group


def cohomology_at(c: GradedComplex, q: int) -> AbGroup:
    """H^q of a chain-stored cochain complex (degree reindexing n = -q)."""
    return homology_at(c, -q)


# ---------------------------------------------------------------------------
# Induced and connecting maps
# ---------------------------------------------------------------------------


def induced_map(f: ComplexMap, n: int, src_data: HomologyData | None = None, dst_data: HomologyData | None = None) -> Matrix:
    """Matrix of H_n(f) in the chosen generator bases."""
    if src_data is None:
        src_data = homology_data(f.src, n)
    if dst_data is None:
        dst_data = homology_data(f.dst, n)
    mr = INT if f.ring == INT else f.ring
    cols = []
    fm = f.component(n)
    for g in src_data.group.generators:
        img = fm.apply(g)
        cols.append(list(dst_data.express(img)))
    return Matrix(mr, dst_data.ngens, len(cols), list(zip(*cols)) if cols else [[] for _ in range(dst_data.ngens)])


def connecting_hom(f: ComplexMap, n: int, cone: GradedComplex | None = None) -> Matrix:
    """Connecting map H_n(Cone) -> ... realized at H_(n-1)(X) -> H_(n-1)(Y).

    Computed by the snake recipe on the cone (lift a cycle of X to
    (gamma, 0), push through the cone differential, read off the target
    component) and asserted equal to induced_map(f, n-1).
    """
    if cone is None:
        cone = cone_of_map(f)
    x_data = homology_data(f.src, n - 1)
    y_data = homology_data(f.dst, n - 1)
    mr = INT if f.ring == INT else f.ring
    cols = []
    for g in x_data.group.generators:
        vec = tuple(g) + tuple([0] * f.dst.rank(n))
        img = cone.diff(n).apply(vec)
        theta, eta = cone_split(f, n - 1, img)
        if any(v != 0 for v in theta):
            raise InvalidChainMap("snake lift failed: source component of boundary nonzero")
        cols.append(list(y_data.express(eta)))
    delta = Matrix(mr, y_data.ngens, len(cols), list(zip(*cols)) if cols else [[] for _ in range(y_data.ngens)])
    ind = induced_map(f, n - 1, x_data, y_data)
    if delta != ind:
        raise InvalidChainMap("connecting map disagrees with the induced map")
    return delta


# ---------------------------------------------------------------------------
# Exactness checking
# ---------------------------------------------------------------------------


def _subgroup_leq_int(gens_a: Matrix, gens_b: Matrix):
    """Is span(cols of A) contained in span(cols of B)?  Returns (ok, witness)."""
    s = snf(gens_b)
    for j in range(gens_a.ncols):
        col = gens_a.col(j)
        if not member_int(gens_b, col, s):
            return False, col
    return True, None


def _subgroup_leq_field(gens_a: Matrix, gens_b: Matrix):
    for j in range(gens_a.ncols):
        b = Matrix.column(gens_a.ring, list(gens_a.col(j)))
        if solve_field(gens_b, b) is None:
            return False, gens_a.col(j)
    return True, None


def _image_subgroup(incoming: Matrix, rel: Matrix) -> Matrix:
    return hstack(incoming.ring, [incoming, rel])


def _kernel_subgroup(outgoing: Matrix, target_rel: Matrix, rel: Matrix) -> Matrix:
    """Generators of ker(outgoing) + relations in generator coordinates."""
    ring = outgoing.ring
    stacked = hstack(ring, [outgoing, target_rel])
    if ring == INT:
        kern = kernel_int(stacked)
    else:
        kern = kernel_field(stacked)
    proj = kern.submatrix(range(outgoing.ncols), range(kern.ncols))
    return hstack(ring, [proj, rel])


@dataclass(frozen=True)
class LESPosition:
    label: str
    group: AbGroup
    exact: bool
    defect: str | None


@dataclass(frozen=True)
class LESReport:
    kind: str
    groups: dict
    maps: dict
    positions: tuple

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.positions)


def _exact_at(label, here: HomologyData, incoming: Matrix, outgoing: Matrix, target: HomologyData):
    """Exactness of  prev --incoming--> here --outgoing--> target."""
    rel = here.relation_matrix()
    trel = target.relation_matrix()
    im = _image_subgroup(incoming, rel)
    ker = _kernel_subgroup(outgoing, trel, rel)
    leq = _subgroup_leq_int if here.ring == INT else _subgroup_leq_field
    ok1, w1 = leq(im, ker)
    ok2, w2 = leq(ker, im)
    if ok1 and ok2:
        return LESPosition(label, here.group, True, None)
    if not ok1:
        defect = f"image not contained in kernel; witness {list(w1)}"
    else:
        defect = f"kernel class not hit; witness {list(w2)}"
    return LESPosition(label, here.group, False, defect)


def les_of_cone(f: ComplexMap) -> LESReport:
    """The long exact sequence of the mapping cone.

    ... -> H_n(Y) -j-> H_n(f) -k-> H_(n-1)(X) -delta-> H_(n-1)(Y) -> ...
    with j(beta) = (0, beta), k(theta, eta) = theta, and delta the
    induced map of f in degree n-1 (asserted against the snake recipe).
    Exactness is checked at every position over the full degree range.
    """
    cone = cone_of_map(f)
    x, y = f.src, f.dst
    lo = cone.lo - 1
    hi = cone.hi + 1
    hx = {n: homology_data(x, n) for n in range(lo - 1, hi + 1)}
    hy = {n: homology_data(y, n) for n in range(lo - 1, hi + 1)}
    hc = {n: homology_data(cone, n) for n in range(lo - 1, hi + 1)}
    mr = INT if f.ring == INT else f.ring

    j_maps = {}
    k_maps = {}
    d_maps = {}
    for n in range(lo, hi + 1):
        # j: H_n(Y) -> H_n(cone), beta |-> (0, beta)
        cols = []
        for g in hy[n].group.generators:
            vec = tuple([0] * x.rank(n - 1)) + tuple(g)
            cols.append(list(hc[n].express(vec)))
        j_maps[n] = Matrix(mr, hc[n].ngens, len(cols), list(zip(*cols)) if cols else [[] for _ in range(hc[n].ngens)])
        # k: H_n(cone) -> H_(n-1)(X), (theta, eta) |-> theta
        cols = []
        for g in hc[n].group.generators:
            theta, _eta = cone_split(f, n, g)
            cols.append(list(hx[n - 1].express(theta)))
        k_maps[n] = Matrix(mr, hx[n - 1].ngens, len(cols), list(zip(*cols)) if cols else [[] for _ in range(hx[n - 1].ngens)])
        # delta: H_(n-1)(X) -> H_(n-1)(Y)
        d_maps[n] = connecting_hom(f, n, cone)

    positions = []
    for n in range(lo, hi + 1):
        positions.append(_exact_at(f"H_{n}(cone)", hc[n], j_maps[n], k_maps[n], hx[n - 1]))
        positions.append(_exact_at(f"H_{n - 1}(X)", hx[n - 1], k_maps[n], d_maps[n], hy[n - 1]))
        if n - 1 in j_maps:
            positions.append(_exact_at(f"H_{n - 1}(Y)", hy[n - 1], d_maps[n], j_maps[n - 1], hc[n - 1]))
    groups = {}
    for n in range(lo, hi + 1):
        groups[f"H_{n}(X)"] = hx[n].group
        groups[f"H_{n}(Y)"] = hy[n].group
        groups[f"H_{n}(cone)"] = hc[n].group
    maps = {}
    for n in range(lo, hi + 1):
        maps[f"j_{n}"] = j_maps[n]
        maps[f"k_{n}"] = k_maps[n]
        maps[f"delta_{n}"] = d_maps[n]
    return LESReport("cone", groups, maps, tuple(positions))


def quasi_iso(f: ComplexMap) -> bool:
    """True when the cone of f has vanishing homology in every degree."""
    cone = cone_of_map(f)
    for n in range(cone.lo, cone.hi + 1):
        if not homology_at(cone, n).is_trivial:
            return False
    return True


def five_lemma_transfer(phi: ComplexMap, psi: ComplexMap, f: ComplexMap, f2: ComplexMap) -> bool:
    """Cone-to-cone transfer (theta, eta) |-> (phi theta, psi eta).

    Requires the square psi f = f2 phi to commute exactly.  When phi and
    psi are quasi-isomorphisms the transfer must be one too; that
    implication is asserted.  Returns whether the transfer is a
    quasi-isomorphism.
    """
    if phi.src != f.src or psi.src != f.dst or phi.dst != f2.src or psi.dst != f2.dst:
        raise InvalidChainMap("square shapes do not line up")
    for n in f.degrees():
        if psi.component(n) @ f.component(n) != f2.component(n) @ phi.component(n):
            raise NonCommutingSquare(f"psi f != f2 phi at degree {n}")
    c1 = cone_of_map(f)
    c2 = cone_of_map(f2)
    mr = INT if f.ring == INT else f.ring
    mats = {}
    for n in c1.degrees():
        blocks = [
            [phi.component(n - 1), Matrix.zeros(mr, f2.src.rank(n - 1), f.dst.rank(n))],
            [Matrix.zeros(mr, f2.dst.rank(n), f.src.rank(n - 1)), psi.component(n)],
        ]
        mats[n] = block(mr, blocks)
    transfer = ComplexMap(c1, c2, mats)
    result = quasi_iso(transfer)
    if quasi_iso(phi) and quasi_iso(psi):
        if not result:
            raise InvalidChainMap("five lemma violated: transfer between cones of quasi-isomorphisms is not one")
    return result


# ---------------------------------------------------------------------------
# Kernel / cokernel sequence
# ---------------------------------------------------------------------------


def _kernel(ring, a: Matrix) -> Matrix:
    return kernel_int(a) if ring == INT else kernel_field(a)


def _solve(ring, a: Matrix, b: Matrix):
    return solve_int(a, b) if ring == INT else solve_field(a, b)


def _kernel_complex(f: ComplexMap):
    """The degreewise-kernel subcomplex, with its embedding bases."""
    ring = f.ring
    x = f.src
    bases = {}
    ranks = {}
    for n in range(x.lo, x.hi + 1):
        k = _kernel(ring, f.component(n))
        bases[n] = k
        if k.ncols:
            ranks[n] = k.ncols
    diffs = {}
    for n in ranks:
        kn = bases[n]
        km = bases.get(n - 1, Matrix.zeros(ring, x.rank(n - 1), 0))
        img = x.diff(n) @ kn
        if km.ncols == 0:
            if not img.is_zero():
                raise InvalidChainMap("kernel complex not closed under the differential")
            diffs[n] = Matrix.zeros(ring, 0, kn.ncols)
            continue
        w = _solve(ring, km, img)
        assert w is not None, "kernel complex not closed under the differential"
        diffs[n] = w
    kc = GradedComplex(ring, ranks, diffs)
    return kc, bases


def _coker_homology_data(f: ComplexMap, n: int) -> HomologyData:
    """Homology of the cokernel complex at degree n.

    The cokernel is a complex of presented groups Y_n / im(f_n), not free
    in general; its homology is computed from the presentation.
    """
    ring = f.ring
    y = f.dst
    g = y.rank(n)
    dn = y.diff(n)
    rel_prev = f.component(n - 1)
    rel_here = f.component(n)
    # numerator: {x : d x in im(f_(n-1))}
    stacked = hstack(dn.ring, [dn, rel_prev])
    kern = _kernel(ring, stacked)
    gl = kern.submatrix(range(g), range(kern.ncols))
    den = hstack(dn.ring, [y.diff(n + 1), rel_here])
    if ring == INT:
        s_gl = snf(gl)
        basis_cols = []
        for i in range(s_gl.rank):
            col = s_gl.u.col(i)
            basis_cols.append([s_gl.diag[i] * xv for xv in col])
        num_basis = Matrix(INT, g, len(basis_cols), list(zip(*basis_cols)) if basis_cols else [[] for _ in range(g)])
        return _quotient_group_int(g, num_basis, den)
    return _quotient_space_field(ring, g, gl, den)


def _quotient_space_field(ring, ambient, num_gens: Matrix, den_gens: Matrix) -> HomologyData:
    """span(num)/span(den) over a field, den contained in num."""
    base_cols = []
    rank_so_far = 0
    for j in range(den_gens.ncols):
        cand = base_cols + [list(den_gens.col(j))]
        if field_rank(Matrix(ring, ambient, len(cand), list(zip(*cand)))) > rank_so_far:
            base_cols.append(list(den_gens.col(j)))
            rank_so_far += 1
    gens = []
    for j in range(num_gens.ncols):
        cand = base_cols + gens + [list(num_gens.col(j))]
        if field_rank(Matrix(ring, ambient, len(cand), list(zip(*cand)))) > len(base_cols) + len(gens):
            gens.append(list(num_gens.col(j)))
    gen_matrix = Matrix(ring, ambient, len(gens), list(zip(*gens)) if gens else [[] for _ in range(ambient)])
    boundary = Matrix(ring, ambient, len(base_cols), list(zip(*base_cols)) if base_cols else [[] for _ in range(ambient)])
    group = AbGroup(len(gens), (), tuple(tuple(g) for g in gens))
    return HomologyData(ring, ambient, group, gen_matrix, tuple([0] * len(gens)), boundary)


def ker_coker_les(f: ComplexMap) -> LESReport:
    """The long exact sequence relating ker f, the cone, and coker f.

    ... -> H_(n-1)(ker f) -j-> H_n(f) -k-> H_n(coker f)
        -delta-> H_(n-2)(ker f) -> ...
    with j[theta] = [(theta, 0)], k[(theta, eta)] = [eta mod f], and
    delta[eta] = [d theta] for any theta with f(theta) = d eta.

    When f is degreewise injective, k is asserted to be an isomorphism in
    every degree; when degreewise surjective, j is.
    """
    ring = f.ring
    if ring != INT and not ring.is_field:
        raise UnsupportedRing(f"kernel/cokernel sequence over {ring} is not supported")
    cone = cone_of_map(f)
    x, y = f.src, f.dst
    kc, kbases = _kernel_complex(f)
    lo = cone.lo - 1
    hi = cone.hi + 1
    hker = {n: homology_data(kc, n) for n in range(lo - 2, hi + 1)}
    hcone = {n: homology_data(cone, n) for n in range(lo - 1, hi + 1)}
    hcok = {n: _coker_homology_data(f, n) for n in range(lo - 1, hi + 1)}

    injective = all(kbases[n].ncols == 0 for n in kbases)
    surjective = all(
        _solve(ring, f.component(n), Matrix.identity(ring, y.rank(n))) is not None
        for n in range(y.lo, y.hi + 1)
    )

    def kbasis(n):
        return kbases.get(n, Matrix.zeros(ring, x.rank(n), 0))

    def colmat(cols, nrows):
        return Matrix(ring, nrows, len(cols), list(zip(*cols)) if cols else [[] for _ in range(nrows)])

    zero = ring.zero()
    j_maps = {}
    k_maps = {}
    d_maps = {}
    for n in range(lo, hi + 1):
        # j: H_(n-1)(ker) -> H_n(cone)
        cols = []
        for gvec in hker[n - 1].group.generators:
            theta = kbasis(n - 1).apply(gvec)
            vec = tuple(theta) + tuple([zero] * y.rank(n))
            cols.append(list(hcone[n].express(vec)))
        j_maps[n] = colmat(cols, hcone[n].ngens)
        # k: H_n(cone) -> H_n(coker)
        cols = []
        for gvec in hcone[n].group.generators:
            _theta, eta = cone_split(f, n, gvec)
            cols.append(list(hcok[n].express(eta)))
        k_maps[n] = colmat(cols, hcok[n].ngens)
        # delta: H_n(coker) -> H_(n-2)(ker)
        cols = []
        for gvec in hcok[n].group.generators:
            deta = Matrix.column(ring, list(y.diff(n).apply(gvec)))
            theta = _solve(ring, f.component(n - 1), deta)
            assert theta is not None, "cokernel cycle does not lift"
            theta_vec = [theta.entry(i, 0) for i in range(x.rank(n - 1))]
            dtheta = x.diff(n - 1).apply(theta_vec)
            kb = kbasis(n - 2)
            if kb.ncols == 0:
                if any(v != zero for v in dtheta):
                    raise InvalidChainMap("connecting image misses the kernel complex")
                cols.append([zero] * hker[n - 2].ngens)
                continue
            w = _solve(ring, kb, Matrix.column(ring, list(dtheta)))
            assert w is not None, "connecting image misses the kernel complex"
            wvec = [w.entry(i, 0) for i in range(kb.ncols)]
            cols.append(list(hker[n - 2].express(wvec)))
        d_maps[n] = colmat(cols, hker[n - 2].ngens)

    positions = []
    for n in range(lo, hi + 1):
        positions.append(_exact_at(f"H_{n}(f)", hcone[n], j_maps[n], k_maps[n], hcok[n]))
        positions.append(_exact_at(f"H_{n}(coker)", hcok[n], k_maps[n], d_maps[n], hker[n - 2]))
        if n - 1 in j_maps:
            positions.append(_exact_at(f"H_{n - 2}(ker)", hker[n - 2], d_maps[n], j_maps[n - 1], hcone[n - 1]))

    if injective:
        for n in range(lo, hi + 1):
            if not _is_presentation_iso(k_maps[n], hcone[n], hcok[n]):
                raise InvalidChainMap(f"injective specialization failed: k not iso at degree {n}")
    if surjective:
        for n in range(lo, hi + 1):
            if not _is_presentation_iso(j_maps[n], hker[n - 1], hcone[n]):
                raise InvalidChainMap(f"surjective specialization failed: j not iso at degree {n}")

    groups = {}
    for n in range(lo, hi + 1):
        groups[f"H_{n}(ker)"] = hker[n].group if n in hker else AbGroup(0, (), ())
        groups[f"H_{n}(f)"] = hcone[n].group
        groups[f"H_{n}(coker)"] = hcok[n].group
    maps = {}
    for n in range(lo, hi + 1):
        maps[f"j_{n}"] = j_maps[n]
        maps[f"k_{n}"] = k_maps[n]
        maps[f"delta_{n}"] = d_maps[n]
    rep = LESReport("kercoker", groups, maps, tuple(positions))
    return rep


def _is_presentation_iso(m: Matrix, src: HomologyData, dst: HomologyData) -> bool:
    """Is the induced map of presented groups an isomorphism?"""
    if src.ring != INT:
        return src.ngens == dst.ngens and field_rank(m) == src.ngens
    rel_src = src.relation_matrix()
    rel_dst = dst.relation_matrix()
    # surjective: every target generator lies in im(m) + relations
    cover = hstack(INT, [m, rel_dst])
    s = snf(cover)
    for i in range(dst.ngens):
        e = [0] * dst.ngens
        e[i] = 1
        if not member_int(cover, e, s):
            return False
    # injective: anything mapping into the relations is itself a relation
    stacked = hstack(INT, [m, rel_dst])
    kern = kernel_int(stacked)
    proj = kern.submatrix(range(m.ncols), range(kern.ncols))
    s_rel = snf(rel_src) if rel_src.ncols else None
    for j in range(proj.ncols):
        col = proj.col(j)
        if rel_src.ncols:
            if not member_int(rel_src, col, s_rel):
                return False
        else:
            if any(v != 0 for v in col):
                return False
    return True
