"""The ten acceptance gates, exact arithmetic throughout.

Each test prints one verdict line so a full run reads as a checklist.
Random ensembles are seeded; entry bounds hold for the drawn data by
construction (see helpers).
"""

import io
import random
from contextlib import redirect_stdout
from fractions import Fraction

from helpers import (
    lattice_chain_map,
    random_block_complex,
    random_cone_style_complex,
    random_homotopy_triple,
    random_vector,
)
from oracles import det_int, smith_diagonal_via_minors
from relcone import cli
from relcone.cech import (
    CechCochain,
    RelCechCochain,
    rel_diff,
    relative_cohomology,
)
from relcone.chain import (
    ComplexMap,
    ConeElement,
    GradedComplex,
    cochain_cone_split,
    cone_of_cochain_map,
    cone_of_map,
    cone_split,
    dual_map,
    homotopy_cone_iso,
    kronecker,
    verify_cone_duality,
)
from relcone.coeffs import INT, RAT, U1
from relcone.fixtures import (
    degree_map,
    disk_area_pair,
    disk_inclusion,
    fixture_registry,
    half_gerbe_cocycle,
    suspension_cover_map,
)
from relcone.geo import RelGerbeCocycle, classify, group_op, is_integral, trivialize
from relcone.homology import (
    homology_at,
    kernel_int,
    ker_coker_les,
    les_of_cone,
    snf,
)
from relcone.matrix import Matrix, block
from relcone.simplicial import chain_complex, chain_map, compare_cones, mapping_cone_space


def _verdict(num: int, label: str, ok: bool, detail: str = ""):
    state = "PASS" if ok else "FAIL"
    line = f"acceptance {num:2d} [{label}]: {state}"
    if detail and not ok:
        line += f" ({detail})"
    print(line)
    assert ok, line


def _shape(g):
    return (g.free_rank, g.torsion)


# -- 1: algebraic cone homology vs cone-space homology ----------------------


def test_criterion_01_cone_theorem_degree_maps():
    expected_h1 = {0: (1, ()), 1: (0, ()), 2: (0, (2,)), 3: (0, (3,)), 6: (0, (6,))}
    failures = []
    for d in (0, 1, 2, 3, 6):
        rep = compare_cones(degree_map(d))
        if not rep.iso:
            failures.append((d, "not iso"))
            continue
        h1 = rep.degrees[1]
        if _shape(h1.algebraic) != expected_h1[d] or _shape(h1.reduced) != expected_h1[d]:
            failures.append((d, _shape(h1.algebraic)))
        h2 = rep.degrees[2]
        want_h2 = (1, ()) if d == 0 else (0, ())
        if _shape(h2.algebraic) != want_h2 or _shape(h2.reduced) != want_h2:
            failures.append((d, "H2", _shape(h2.algebraic)))
    _verdict(1, "cone theorem, degree maps", not failures, repr(failures))


# -- 2: the disk pair, three ways -------------------------------------------


def test_criterion_02_disk_pair_three_ways():
    phi = disk_inclusion()

    f = chain_map(phi, INT)
    cone = cone_of_map(f)
    algebraic = (_shape(homology_at(cone, 1)), _shape(homology_at(cone, 2)))

    space = mapping_cone_space(phi)
    reduced = chain_complex(space, INT, augmented=True)
    topological = (_shape(homology_at(reduced, 1)), _shape(homology_at(reduced, 2)))

    from relcone.fixtures import disk_cover_map

    m = disk_cover_map()
    cech = (
        _shape(relative_cohomology(m, INT, 1)),
        _shape(relative_cohomology(m, INT, 2)),
    )

    want = ((0, ()), (1, ()))
    ok = algebraic == topological == cech == want
    _verdict(2, "disk pair three ways", ok, f"{algebraic} {topological} {cech}")


# -- 3: long exact sequence on random chain maps ----------------------------


def test_criterion_03_les_exactness_50_random_maps():
    rng = random.Random(301)
    failures = 0
    for _ in range(50):
        a = random_cone_style_complex(rng)
        b = random_cone_style_complex(rng)
        f = lattice_chain_map(rng, a, b)
        if not les_of_cone(f).exact:
            failures += 1
    _verdict(3, "LES exact on 50 random maps", failures == 0, f"{failures} failures")


# -- 4: injective and surjective specializations ----------------------------


def _direct_sum_with_maps(x, y):
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    ranks, diffs, incl, proj = {}, {}, {}, {}
    for n in range(lo, hi + 1):
        r = x.rank(n) + y.rank(n)
        if r:
            ranks[n] = r
        grid = [
            [x.diff(n), Matrix.zeros(INT, x.rank(n - 1), y.rank(n))],
            [Matrix.zeros(INT, y.rank(n - 1), x.rank(n)), y.diff(n)],
        ]
        m = block(INT, grid)
        if m.nrows and m.ncols:
            diffs[n] = m
        eye = Matrix.identity(INT, x.rank(n))
        incl[n] = block(INT, [[eye], [Matrix.zeros(INT, y.rank(n), x.rank(n))]])
        proj[n] = block(INT, [[eye, Matrix.zeros(INT, x.rank(n), y.rank(n))]])
    total = GradedComplex(INT, ranks, diffs)
    return total, ComplexMap(x, total, incl), ComplexMap(total, x, proj)


def test_criterion_04_injective_and_surjective_specializations():
    rng = random.Random(401)
    failures = []
    for case in range(50):
        x = random_cone_style_complex(rng)
        y = random_cone_style_complex(rng)
        total, incl, proj = _direct_sum_with_maps(x, y)
        if case < 25:
            rep = ker_coker_les(incl)
            pairs = [("H_%d(f)" % n, "H_%d(coker)" % n) for n in range(total.lo - 1, total.hi + 2)]
        else:
            rep = ker_coker_les(proj)
            pairs = [("H_%d(f)" % n, "H_%d(ker)" % (n - 1)) for n in range(total.lo - 1, total.hi + 2)]
        if not rep.exact:
            failures.append((case, "not exact"))
            continue
        for ka, kb in pairs:
            ga, gb = rep.groups.get(ka), rep.groups.get(kb)
            sa = _shape(ga) if ga else (0, ())
            sb = _shape(gb) if gb else (0, ())
            if sa != sb:
                failures.append((case, ka, sa, kb, sb))
    _verdict(4, "ker/coker specializations 25+25", not failures, repr(failures[:3]))


# -- 5: Smith normal form contract ------------------------------------------


def test_criterion_05_snf_200_random_matrices():
    rng = random.Random(501)
    failures = []
    for case in range(200):
        nr, nc = rng.randint(0, 8), rng.randint(0, 8)
        rows = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        a = Matrix(INT, nr, nc, rows)
        r = snf(a)
        if r.u @ r.d @ r.v != a:
            failures.append((case, "UDV"))
        if nr and abs(det_int([list(row) for row in r.u.rows])) != 1:
            failures.append((case, "detU"))
        if nc and abs(det_int([list(row) for row in r.v.rows])) != 1:
            failures.append((case, "detV"))
        diag = list(r.diag)
        for i in range(len(diag) - 1):
            if diag[i + 1] and diag[i] == 0:
                failures.append((case, "zero order"))
            if diag[i] and diag[i + 1] % diag[i]:
                failures.append((case, "divisibility"))
        if (nr, nc) == (2, 2):
            if tuple(d for d in diag if d) != smith_diagonal_via_minors(rows):
                failures.append((case, "minors oracle"))
    _verdict(5, "SNF contract on 200 matrices", not failures, repr(failures[:3]))


# -- 6: Kronecker annihilation and cone duality -----------------------------


def _combo(rng, basis: Matrix, bound=2):
    return basis.apply([rng.randint(-bound, bound) for _ in range(basis.ncols)])


def test_criterion_06_kronecker_annihilation_and_duality():
    rng = random.Random(601)
    failures = 0
    for _ in range(100):
        a = random_cone_style_complex(rng)
        b = random_cone_style_complex(rng)
        f = lattice_chain_map(rng, a, b)
        fd = dual_map(f)
        ccone = cone_of_map(f)
        dcone = cone_of_cochain_map(fd)
        n = rng.randint(1, 3)
        # cocycle against boundary
        cocycles = kernel_int(dcone.diff(-n))
        bdry = ccone.diff(n + 1).apply(random_vector(rng, ccone.rank(n + 1)))
        xa = ConeElement(INT, n, *cochain_cone_split(fd, n, _combo(rng, cocycles)))
        yb = ConeElement(INT, n, *cone_split(f, n, bdry))
        if kronecker(xa, yb) != 0:
            failures += 1
        # coboundary against cycle
        cobdry = dcone.diff(-(n - 1)).apply(random_vector(rng, dcone.rank(-(n - 1))))
        cycles = kernel_int(ccone.diff(n))
        xc = ConeElement(INT, n, *cochain_cone_split(fd, n, cobdry))
        yz = ConeElement(INT, n, *cone_split(f, n, _combo(rng, cycles)))
        if kronecker(xc, yz) != 0:
            failures += 1

    duality_maps = [
        chain_map(build(), INT)
        for name, (kind, build) in fixture_registry().items()
        if kind == "map"
    ]
    rng2 = random.Random(602)
    for _ in range(50):
        a = random_cone_style_complex(rng2)
        b = random_cone_style_complex(rng2)
        duality_maps.append(lattice_chain_map(rng2, a, b))
    for f in duality_maps:
        residuals = verify_cone_duality(f)
        if not all(r.is_zero() for r in residuals.values()):
            failures += 1
    ok = failures == 0
    _verdict(6, "Kronecker annihilation + cone duality", ok, f"{failures} failures")


# -- 7: homotopy invariance of the cone -------------------------------------


def test_criterion_07_homotopy_invariance_25_homotopies():
    rng = random.Random(701)
    failures = []
    for case in range(25):
        xd = random_block_complex(rng, 0, 3)
        yd = random_block_complex(rng, 0, 3)
        f, g, h = random_homotopy_triple(rng, xd, yd)
        fwd, bwd = homotopy_cone_iso(h)
        cf, cg = fwd.src, fwd.dst
        for n in cf.degrees():
            eye = Matrix.identity(INT, cf.rank(n))
            if bwd.component(n) @ fwd.component(n) != eye:
                failures.append((case, n, "left inverse"))
            if fwd.component(n) @ bwd.component(n) != Matrix.identity(INT, cg.rank(n)):
                failures.append((case, n, "right inverse"))
            if _shape(homology_at(cf, n)) != _shape(homology_at(cg, n)):
                failures.append((case, n, "homology"))
    _verdict(7, "homotopy invariance on 25 homotopies", not failures, repr(failures[:3]))


# -- 8: the torsion gerbe class ---------------------------------------------


def _random_gerbe(rng, base):
    m = base.cover_map

    def rand_cochain(cover, p):
        vec = [U1.normalize(Fraction(rng.randint(0, 11), 12)) for _ in range(cover.rank(p))]
        return CechCochain.from_vector(cover, p, U1, vec)

    low = RelCechCochain(m, rand_cochain(m.src, 0), rand_cochain(m.dst, 1))
    u = base.u.zscale(rng.randint(0, 3)) + rel_diff(low)
    return RelGerbeCocycle(m, u.s, u.t)


def test_criterion_08_gerbe_torsion_class_and_homomorphism():
    m = suspension_cover_map()
    h3 = relative_cohomology(m, INT, 3)
    ok = _shape(h3) == (0, (2,))
    detail = f"H3 = {_shape(h3)}"

    g = half_gerbe_cocycle()
    rep = classify(g)
    ok = ok and rep.coords == (1,) and rep.torsion_orders == (2,) and rep.basis == "H^3(Phi,Z)"

    square = group_op(g, g)
    ok = ok and square.u.t.is_zero and square.u.s == g.u.s.zscale(2)
    witness = trivialize(square)
    ok = ok and rel_diff(witness) == square.u

    rng = random.Random(801)
    hom_failures = 0
    for _ in range(50):
        c1 = _random_gerbe(rng, g)
        c2 = _random_gerbe(rng, g)
        r1, r2 = classify(c1), classify(c2)
        r12 = classify(group_op(c1, c2))
        want = tuple(
            (x + y) % d if d else x + y
            for x, y, d in zip(r1.coords, r2.coords, r1.torsion_orders)
        )
        if r12.coords != want:
            hom_failures += 1
    ok = ok and hom_failures == 0
    _verdict(8, "gerbe class, square witness, homomorphism", ok, detail)


# -- 9: integrality of the disk area pair -----------------------------------


def test_criterion_09_disk_integrality_and_shift_invariance():
    unit = disk_area_pair(1)
    half = disk_area_pair(Fraction(1, 2))
    rep1 = is_integral(unit)
    rep2 = is_integral(half)
    values1 = tuple(p.value for p in rep1.pairings)
    values2 = tuple(p.value for p in rep2.pairings)
    ok = rep1.integral and values1 == (Fraction(1),)
    ok = ok and (not rep2.integral) and values2 == (Fraction(1, 2),)

    rng = random.Random(901)
    m = unit.m
    shift_failures = 0
    for case in range(25):
        base, baseline = (unit, values1) if case % 2 == 0 else (half, values2)

        def rand_rat(cover, p):
            vec = [
                Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                for _ in range(cover.rank(p))
            ]
            return CechCochain.from_vector(cover, p, RAT, vec)

        low = RelCechCochain(m, rand_rat(m.src, 0), rand_rat(m.dst, 1))
        shifted = base.shift_by_coboundary(low)
        rep = is_integral(shifted)
        if rep.integral != (base is unit) or tuple(p.value for p in rep.pairings) != baseline:
            shift_failures += 1
    ok = ok and shift_failures == 0
    _verdict(9, "disk integrality 1 vs 1/2, shift-invariant", ok, f"{values1} {values2}")


# -- 10: byte-identical fixture sweep ---------------------------------------


VERBS_BY_KIND = {
    "complex": (("homology",),),
    "map": (("compare-cones",), ("les",)),
    "cover": (("cech",),),
    "covermap": (("cech",),),
    "cocycle": (("classify",), ("trivialize",)),
    "pair": (("integrality",),),
    "form": (("bohr-sommerfeld",),),
}


def _full_sweep(tmpdir: str) -> str:
    out = io.StringIO()
    with redirect_stdout(out):
        code = cli.main(["fixtures", "emit", "--out", tmpdir])
    assert code == 0
    transcript = [out.getvalue()]
    reg = fixture_registry()
    for name, (kind, _) in reg.items():
        path = f"{tmpdir}/{name}.json"
        for verb in VERBS_BY_KIND[kind]:
            buf = io.StringIO()
            with redirect_stdout(buf):
                code = cli.main([*verb, path])
            transcript.append(f"== {name} {' '.join(verb)} rc={code}\n{buf.getvalue()}")
    return "".join(transcript)


def test_criterion_10_deterministic_fixture_sweep(tmp_path):
    first = _full_sweep(str(tmp_path / "a"))
    second = _full_sweep(str(tmp_path / "b"))
    same_files = True
    for name in fixture_registry():
        fa = (tmp_path / "a" / f"{name}.json").read_bytes()
        fb = (tmp_path / "b" / f"{name}.json").read_bytes()
        if fa != fb:
            same_files = False
    # emitted paths differ between the two sweeps; normalize before comparing
    norm1 = first.replace(str(tmp_path / "a"), "DIR")
    norm2 = second.replace(str(tmp_path / "b"), "DIR")
    ok = same_files and norm1 == norm2 and len(norm1) > 1000
    _verdict(10, "byte-identical fixture sweep", ok)
