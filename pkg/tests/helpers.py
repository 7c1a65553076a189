"""Seeded random generators for complexes, maps, and homotopies.

The generator builds a block complex out of elementary pieces (free
generators and two-term pieces Z --k--> Z) whose homology is known by
construction, then conjugates every degree by a random unimodular
matrix.  That gives dense integer complexes with an exact, independent
answer key.
"""

from dataclasses import dataclass
from math import gcd

from relcone.coeffs import INT
from relcone.chain import ComplexMap, GradedComplex, Homotopy
from relcone.matrix import Matrix


def shear(n, i, j, k):
    rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    rows[i][j] = k
    return Matrix(INT, n, n, rows)


def swap_mat(n, i, j):
    rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    rows[i][i] = rows[j][j] = 0
    rows[i][j] = rows[j][i] = 1
    return Matrix(INT, n, n, rows)


def flip(n, i):
    rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    rows[i][i] = -1
    return Matrix(INT, n, n, rows)


def random_unimodular(rng, n):
    """A random unimodular matrix together with its exact inverse."""
    u = Matrix.identity(INT, n)
    uinv = Matrix.identity(INT, n)
    if n < 2:
        if n == 1 and rng.random() < 0.3:
            return flip(1, 0), flip(1, 0)
        return u, uinv
    for _ in range(2 * n + rng.randrange(4)):
        t = rng.randrange(6)
        i, j = rng.sample(range(n), 2)
        if t < 4:
            k = rng.choice([-2, -1, 1, 2])
            e, einv = shear(n, i, j, k), shear(n, i, j, -k)
        elif t == 4:
            e = einv = swap_mat(n, i, j)
        else:
            e = einv = flip(n, i)
        u = e @ u
        uinv = uinv @ einv
    return u, uinv


def canonical_torsion(ks):
    """Elementary-divisor chain of a direct sum of Z/k pieces."""
    ks = sorted(k for k in ks if k >= 2)
    changed = True
    while changed:
        changed = False
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                a, b = ks[i], ks[j]
                g = gcd(a, b)
                l = a * b // g
                if (g, l) != (a, b):
                    ks[i], ks[j] = g, l
                    changed = True
        ks.sort()
    return tuple(k for k in ks if k >= 2)


@dataclass
class BlockComplex:
    """A conjugated block complex with its construction data."""

    chain: GradedComplex
    lo: int
    hi: int
    free: dict  # degree -> number of free generators
    pairs: dict  # source degree -> list of multipliers k (maps to degree-1)
    u: dict  # degree -> change of basis
    uinv: dict

    def rank(self, n):
        return self.free.get(n, 0) + len(self.pairs.get(n, ())) + len(self.pairs.get(n + 1, ()))

    def expected_homology(self, n):
        """(free_rank, torsion) of H_n, from the construction."""
        if n < self.lo or n > self.hi:
            return (0, ())
        tors = canonical_torsion(self.pairs.get(n + 1, ()))
        return (self.free.get(n, 0), tors)

    # basis order in degree n: free gens, then sources of pairs at n,
    # then targets of pairs at n+1
    def free_index(self, n, i):
        return i

    def source_index(self, n, i):
        return self.free.get(n, 0) + i

    def target_index(self, n, i):
        return self.free.get(n, 0) + len(self.pairs.get(n, ())) + i


def random_block_complex(rng, lo, hi, max_free=2, max_pairs=2, kmax=6):
    free = {n: rng.randrange(0, max_free + 1) for n in range(lo, hi + 1)}
    pairs = {n: [rng.randrange(1, kmax + 1) for _ in range(rng.randrange(0, max_pairs + 1))] for n in range(lo + 1, hi + 1)}
    data = BlockComplex(None, lo, hi, free, pairs, {}, {})
    ranks = {n: data.rank(n) for n in range(lo, hi + 1) if data.rank(n)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        rn, rp = data.rank(n), data.rank(n - 1)
        rows = [[0] * rn for _ in range(rp)]
        for i, k in enumerate(pairs.get(n, ())):
            rows[data.target_index(n - 1, i)][data.source_index(n, i)] = k
        if rn and rp:
            diffs[n] = Matrix(INT, rp, rn, rows)
    for n in range(lo - 1, hi + 2):
        u, uinv = random_unimodular(rng, data.rank(n))
        data.u[n] = u
        data.uinv[n] = uinv
    conj = {}
    for n, m in diffs.items():
        conj[n] = data.u[n - 1] @ m @ data.uinv[n]
    data.chain = GradedComplex(INT, ranks, conj)
    return data


def random_chain_map(rng, xd: BlockComplex, yd: BlockComplex) -> ComplexMap:
    """A random chain map between two conjugated block complexes.

    Built on the elementary level from the pieces that always commute
    with the block differentials, then conjugated on both sides.
    """
    lo = min(xd.lo, yd.lo)
    hi = max(xd.hi, yd.hi)
    raw = {n: [[0] * xd.rank(n) for _ in range(yd.rank(n))] for n in range(lo, hi + 1)}

    def add_entry(n, yi, xi, c):
        if c:
            raw[n][yi][xi] += c

    for n in range(lo, hi + 1):
        # free source generators map to arbitrary cycles of Y_n
        for i in range(xd.free.get(n, 0)):
            xi = xd.free_index(n, i)
            for j in range(yd.free.get(n, 0)):
                add_entry(n, yd.free_index(n, j), xi, rng.randrange(-2, 3))
            for j in range(len(yd.pairs.get(n + 1, ()))):
                add_entry(n, yd.target_index(n, j), xi, rng.randrange(-2, 3))
        # two-term pieces map to matching pieces or collapse onto cycles
        for i, k in enumerate(xd.pairs.get(n, ())):
            si, ti = xd.source_index(n, i), xd.target_index(n - 1, i)
            mode = rng.randrange(3)
            ypairs = yd.pairs.get(n, ())
            if mode == 0 and ypairs:
                j = rng.randrange(len(ypairs))
                k2 = ypairs[j]
                m0 = k // gcd(k, k2)
                m = m0 * rng.randrange(-2, 3)
                add_entry(n, yd.source_index(n, j), si, m)
                add_entry(n - 1, yd.target_index(n - 1, j), ti, m * k2 // k)
            elif mode == 1:
                # source goes to a cycle, target to zero
                for j in range(yd.free.get(n, 0)):
                    add_entry(n, yd.free_index(n, j), si, rng.randrange(-2, 3))
                for j in range(len(yd.pairs.get(n + 1, ()))):
                    add_entry(n, yd.target_index(n, j), si, rng.randrange(-2, 3))
    mats = {}
    for n in range(lo, hi + 1):
        rn_y, rn_x = yd.rank(n), xd.rank(n)
        if rn_y == 0 or rn_x == 0:
            continue
        b = Matrix(INT, rn_y, rn_x, raw[n])
        mats[n] = yd.u[n] @ b @ xd.uinv[n]
    return ComplexMap(xd.chain, yd.chain, mats)


def random_degreewise(rng, x: GradedComplex, y: GradedComplex, degree_shift=1, bound=2):
    """Arbitrary degreewise matrices X_n -> Y_(n+shift), no conditions."""
    mats = {}
    for n in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 2):
        r, c = y.rank(n + degree_shift), x.rank(n)
        if r and c:
            mats[n] = Matrix(INT, r, c, [[rng.randrange(-bound, bound + 1) for _ in range(c)] for _ in range(r)])
    return mats


def random_homotopy_triple(rng, xd: BlockComplex, yd: BlockComplex):
    """(f, g, h) with h d + d h = f - g, for a random f and random h."""
    f = random_chain_map(rng, xd, yd)
    x, y = f.src, f.dst
    hmats = random_degreewise(rng, x, y, degree_shift=1)

    def hcomp(n):
        m = hmats.get(n)
        if m is None:
            return Matrix.zeros(INT, y.rank(n + 1), x.rank(n))
        return m

    gmats = {}
    for n in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1):
        gm = f.component(n) - (hcomp(n - 1) @ x.diff(n) + y.diff(n + 1) @ hcomp(n))
        if gm.nrows and gm.ncols:
            gmats[n] = gm
    g = ComplexMap(x, y, gmats)
    h = Homotopy(f, g, hmats).validate()
    return f, g, h


def random_vector(rng, n, bound=4):
    return [rng.randrange(-bound, bound + 1) for _ in range(n)]


# ---------------------------------------------------------------------------
# Acceptance-grade ensembles with literal entry bounds
# ---------------------------------------------------------------------------


def zero_diff_complex(rng, lo, hi, rmax=3) -> GradedComplex:
    ranks = {n: rng.randrange(0, rmax + 1) for n in range(lo, hi + 1)}
    return GradedComplex(INT, {n: r for n, r in ranks.items() if r}, {})


def random_cone_style_complex(rng, bound=3) -> GradedComplex:
    """Cone of a random map between zero-differential complexes.

    Any matrix family is a chain map when both differentials vanish, and
    the cone differential's nonzero entries are exactly the drawn
    entries, so a stated entry bound holds on the nose.  Per-degree
    ranks stay <= 2 * rmax.
    """
    from relcone.chain import cone_of_map

    p = zero_diff_complex(rng, 0, 2)
    q = zero_diff_complex(rng, 0, 2)
    mats = {}
    for n in range(0, 3):
        if p.rank(n) and q.rank(n):
            mats[n] = Matrix(
                INT,
                q.rank(n),
                p.rank(n),
                [[rng.randint(-bound, bound) for _ in range(p.rank(n))] for _ in range(q.rank(n))],
            )
    return cone_of_map(ComplexMap(p, q, mats))


def lattice_chain_map(rng, a: GradedComplex, b: GradedComplex, bound=3) -> ComplexMap:
    """A draw from the integer lattice of chain maps a -> b.

    The commutation constraint d_b F = F d_a is one integer linear
    system in the entries of F; its kernel lattice is computed exactly
    and the map is a random combination of the basis with coefficients
    in [-bound, bound].
    """
    from relcone.homology import kernel_int

    lo = min(a.lo, b.lo)
    hi = max(a.hi, b.hi)
    offsets = {}
    total = 0
    for n in range(lo, hi + 1):
        if a.rank(n) and b.rank(n):
            offsets[n] = total
            total += a.rank(n) * b.rank(n)

    def unk(n, k, j):
        return offsets[n] + k * a.rank(n) + j

    rows = []
    for n in range(lo, hi + 1):
        if not (a.rank(n) and b.rank(n - 1)):
            continue
        da, db = a.diff(n), b.diff(n)
        for i in range(b.rank(n - 1)):
            for j in range(a.rank(n)):
                row = [0] * total
                if n in offsets:
                    for k in range(b.rank(n)):
                        row[unk(n, k, j)] += db.entry(i, k)
                if n - 1 in offsets:
                    for l in range(a.rank(n - 1)):
                        row[unk(n - 1, i, l)] -= da.entry(l, j)
                if any(row):
                    rows.append(row)

    if total == 0:
        return ComplexMap(a, b, {})
    if rows:
        basis = kernel_int(Matrix(INT, len(rows), total, rows))
    else:
        basis = Matrix.identity(INT, total)
    coeffs = [rng.randint(-bound, bound) for _ in range(basis.ncols)]
    flat = basis.apply(coeffs)

    mats = {}
    for n, off in offsets.items():
        ra, rb = a.rank(n), b.rank(n)
        mats[n] = Matrix(INT, rb, ra, [[flat[off + k * ra + j] for j in range(ra)] for k in range(rb)])
    return ComplexMap(a, b, mats)
