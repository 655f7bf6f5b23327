"""Acceptance suite: one test per criterion, exact (zero tolerance).

Every expected value is either a frozen hand-derived oracle from the
module test files or an exact combinatorial identity; runtime budgets are
asserted with the stated limits.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from tropicoh.cohomology import (
    CellularSheafDatum,
    SHEAF,
    SheafCell,
    betti_tables,
    compact_cohomology,
    multitangent_space,
    ordinary_cohomology,
    pd_report,
)
from tropicoh.matroids import (
    all_matroids,
    bergman_fan,
    uniform_matroid,
)
from tropicoh.modifications import (
    MAX,
    PLFunction,
    closed_modification,
    complete_modification,
    project_modification,
    weighted_supports_equal,
)
from tropicoh.polyhedral import (
    Polyhedron,
    build_complex,
    closure_in,
    fundamental_cycle_boundary,
    is_balanced,
    product,
    restrict_to_stratum,
)
from tropicoh.polynomial import Poly
from tropicoh.superforms import (
    PolySuperform,
    balanced_face_cancellation,
    form_from_terms,
    stokes_cell_residual,
)

F = Fraction


def tropical_line(weights=(1, 1, 1)):
    rays = [(-1, 0), (0, -1), (1, 1)]
    return build_complex([(Polyhedron(2, [(0, 0)], [r]), w)
                          for r, w in zip(rays, weights)])


def axes_complex(weights=(1, 1, 1, 1)):
    rays = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return build_complex([(Polyhedron(2, [(0, 0)], [r]), w)
                          for r, w in zip(rays, weights)])


def r1_complex():
    return build_complex([(Polyhedron(1, [(0,)], [(1,)]), 1),
                          (Polyhedron(1, [(0,)], [(-1,)]), 1)])


def rn_complex(n):
    rays = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rays.append(tuple(e))
        rays.append(tuple(-x for x in e))
    return build_complex([(Polyhedron(n, [tuple([0] * n)], rays), 1)])


def t1_complex():
    return build_complex([(Polyhedron(1, [(0,)], [(1,), (-1,)]), 1)],
                         tropical_coords=[0])


def subdivided_line():
    rays = [(-1, 0), (0, -1), (1, 1)]
    cells = []
    for r in rays:
        cells.append((Polyhedron(2, [(0, 0), r]), 1))
        cells.append((Polyhedron(2, [r], [r]), 1))
    return build_complex(cells)


def _report(number, text):
    print(f"ACCEPTANCE {number} PASS: {text}")


def test_criterion_01_tropical_line():
    start = time.time()
    ordinary, compact = betti_tables(tropical_line())
    assert ordinary.h == ((1, 0), (2, 0))
    assert compact.h == ((0, 2), (0, 1))
    assert pd_report(tropical_line())["pd_holds"]
    assert time.time() - start < 1.0
    _report(1, "tropical line tables and PD verdict")


def test_criterion_02_coordinate_axes():
    start = time.time()
    rep = pd_report(axes_complex())
    assert rep["ordinary"].entry(0, 0) == 1
    assert rep["compact"].entry(1, 1) == 2
    assert not rep["pd_holds"]
    assert time.time() - start < 1.0
    _report(2, "coordinate axes h^{0,0}=1, h^{1,1}_c=2, PD fails")


def test_criterion_03_segment_datum():
    start = time.time()
    one = ((F(1),),)
    empty = ((),)
    cells = [SheafCell("v0", 0, 0), SheafCell("vm", 0, 1),
             SheafCell("v1", 0, 0), SheafCell("ea", 1, 1),
             SheafCell("eb", 1, 1)]
    p1 = CellularSheafDatum(
        cells, {(0, 3): empty, (1, 3): one, (1, 4): one, (2, 4): empty},
        SHEAF)
    cells0 = [SheafCell(s, 0, 1) for s in ("v0", "vm", "v1")] + \
        [SheafCell(s, 1, 1) for s in ("ea", "eb")]
    p0 = CellularSheafDatum(
        cells0, {(0, 3): one, (1, 3): one, (1, 4): one, (2, 4): one}, SHEAF)
    assert ordinary_cohomology(p0) == (1, 0)      # h^{0,0} = 1, h^{0,1} = 0
    assert ordinary_cohomology(p1) == (0, 1)      # h^{1,0} = 0, h^{1,1} = 1
    assert compact_cohomology(p0) == (1, 0)
    assert compact_cohomology(p1) == (0, 1)
    assert time.time() - start < 1.0
    _report(3, "compactified segment datum diagonal Betti numbers")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_04_rn(n):
    start = time.time()
    ordinary, compact = betti_tables(rn_complex(n))
    for p in range(n + 1):
        for q in range(n + 1):
            assert ordinary.h[p][q] == (math.comb(n, p) if q == 0 else 0)
            assert compact.h[p][q] == (math.comb(n, p) if q == n else 0)
    assert time.time() - start < 5.0
    _report(4, f"R^{n} tables are binomial rows")


def test_criterion_05_bergman_fans():
    start = time.time()
    fan23 = bergman_fan(uniform_matroid(2, 3))
    assert fan23.same_weighted(tropical_line())
    ray_dirs = {c.rays[0] for c in fan23.cells if c.dim == 1}
    assert ray_dirs == {(-1, 0), (0, -1), (1, 1)}
    assert all(w == 1 for w in fan23.weights.values())

    m34 = uniform_matroid(3, 4)
    fan34 = bergman_fan(m34)
    ok, _ = is_balanced(fan34)
    assert ok
    origin = min(fan34.cells_of_dim(0))
    dims = tuple(multitangent_space(fan34, origin, p).dim for p in range(3))
    assert dims == (1, 3, 3)
    assert m34.os_dims() == dims
    assert time.time() - start < 5.0
    _report(5, "Bergman fans of U_{2,3} and U_{3,4}")


def test_criterion_06_all_small_matroids():
    start = time.time()
    matroids = []
    for n in range(1, 6):
        matroids.extend(all_matroids(n))
    assert len(matroids) == 221
    for m in matroids:
        fan = bergman_fan(m)
        ok, _ = is_balanced(fan)
        assert ok, f"unbalanced fan for {m}"
        n_dim = fan.n
        ordinary, compact = betti_tables(fan)
        for p in range(n_dim + 1):
            for q in range(n_dim + 1):
                if q != n_dim:
                    assert compact.h[p][q] == 0, \
                        f"vanishing fails for {m} at ({p},{q})"
                assert ordinary.h[p][q] == \
                    compact.h[n_dim - p][n_dim - q], \
                    f"PD symmetry fails for {m} at ({p},{q})"
        origin = min(fan.cells_of_dim(0))
        coloops = m.coloops()
        for e in m.ground:
            if e in coloops:
                continue
            dele, cont = m.delete(e), m.contract(e)
            if not cont.is_loopless():
                continue  # parallel elements: the contraction has no fan
            fan_w = bergman_fan(dele)
            fan_d = bergman_fan(cont)
            o_w = min(fan_w.cells_of_dim(0))
            o_d = min(fan_d.cells_of_dim(0))
            for p in range(m.rank):
                dv = multitangent_space(fan, origin, p).dim
                dw = multitangent_space(fan_w, o_w, p).dim
                dd = multitangent_space(fan_d, o_d, p - 1).dim if p else 0
                assert dv == dw + dd, (m, e, p)
    elapsed = time.time() - start
    assert elapsed < 600.0
    _report(6, f"all {len(matroids)} loopless matroids on <=5 elements "
               f"({elapsed:.0f}s)")


@pytest.mark.parametrize("matroid_spec,s", [
    ((2, 3), 1), ((2, 3), 2), ((3, 4), 1), ((3, 4), 2)])
def test_criterion_07_products_with_t(matroid_spec, s):
    start = time.time()
    fan = bergman_fan(uniform_matroid(*matroid_spec))
    c = product(fan, s, tropical=True)
    ordinary, compact = betti_tables(c)
    n = c.n
    for p in range(n + 1):
        for q in range(n + 1):
            assert ordinary.h[p][q] == compact.h[n - p][n - q]
    assert time.time() - start < 120.0
    _report(7, f"PD symmetry for U_{matroid_spec} fan x T^{s}")


def test_criterion_08_modification_golden():
    start = time.time()
    f = PLFunction(MAX, terms=[(0, (0,)), (0, (1,))])
    res = complete_modification(r1_complex(), f)
    assert weighted_supports_equal(res.graph, tropical_line())
    assert res.divisor is not None
    assert res.divisor.cells[0].vertices == ((F(0),),)
    assert res.divisor.weights[0] == 1

    back = project_modification(tropical_line(), 1)
    assert weighted_supports_equal(back.source, r1_complex())
    assert back.divisor is not None
    assert back.divisor.cells[0].vertices == ((F(0),),)

    closed = closed_modification(r1_complex(), f)
    assert betti_tables(closed.graph) == betti_tables(r1_complex())
    assert time.time() - start < 5.0
    _report(8, "modification golden case and closed-modification Betti "
               "invariance")


def _random_form(rng, n, p, q, degree=3):
    terms = {}
    for k in itertools.combinations(range(n), p):
        for l in itertools.combinations(range(n), q):
            poly_terms = {}
            for _ in range(rng.randint(1, 3)):
                mono = tuple(rng.randint(0, degree) for _ in range(n))
                if sum(mono) > degree:
                    continue
                poly_terms[mono] = F(rng.randint(-5, 5), rng.randint(1, 4))
            terms[(k, l)] = Poly(n, poly_terms)
    return PolySuperform(n, p, q, terms)


def _random_simplex(rng, n):
    while True:
        verts = [tuple(F(rng.randint(-6, 6), rng.randint(1, 2))
                       for _ in range(n)) for _ in range(n + 1)]
        cell = Polyhedron(n, verts)
        if cell.dim == n:
            return cell


def _random_prism(rng, n):
    base = _random_simplex(rng, n - 1)
    h1 = F(rng.randint(-4, 0))
    h2 = F(rng.randint(1, 5))
    verts = [tuple(list(v) + [h]) for v in base.vertices for h in (h1, h2)]
    return Polyhedron(n, verts)


def test_criterion_09_stokes_suite():
    start = time.time()
    rng = random.Random(2024)
    cases = 0
    while cases < 100:
        n = rng.choice([1, 2, 3])
        beta = _random_form(rng, n, n, n - 1)
        if n >= 2 and rng.random() < 0.5:
            cell = _random_prism(rng, n)
        else:
            cell = _random_simplex(rng, n)
        assert stokes_cell_residual(beta, cell) == 0
        cases += 1

    box = ((-2, -2), (2, 2))
    beta2 = form_from_terms(2, 1, 0, [((0,), (), 1)])
    for complex_ in (tropical_line(), axes_complex()):
        values = balanced_face_cancellation(complex_, beta2, box)
        assert values and all(v == 0 for v in values.values())
    fan34 = bergman_fan(uniform_matroid(3, 4))
    beta3 = form_from_terms(3, 2, 1, [((0, 1), (0,), 1)])
    box3 = ((-2, -2, -2), (2, 2, 2))
    values = balanced_face_cancellation(fan34, beta3, box3)
    assert values and all(v == 0 for v in values.values())
    mutant = tropical_line((1, 1, 2))
    values = balanced_face_cancellation(mutant, beta2, box)
    assert any(v != 0 for v in values.values())
    elapsed = time.time() - start
    assert elapsed < 120.0
    _report(9, f"100 exact Stokes residuals and face cancellation "
               f"({elapsed:.0f}s)")


def test_criterion_10_fundamental_cycle():
    balanced_corpus = [
        tropical_line(), axes_complex(), r1_complex(), rn_complex(2),
        bergman_fan(uniform_matroid(2, 3)), bergman_fan(uniform_matroid(3, 4)),
        t1_complex(), closure_in(tropical_line(), [1]), subdivided_line(),
        product(tropical_line(), 1, tropical=False),
    ]
    mutants = [
        tropical_line((1, 1, 2)), tropical_line((2, 1, 1)),
        axes_complex((1, 1, 1, 2)),
        build_complex([(Polyhedron(1, [(0,), (1,)]), 1)]),
    ]
    for c in balanced_corpus:
        ok, _ = is_balanced(c)
        boundary = fundamental_cycle_boundary(c)
        assert ok and boundary == {}
    for c in mutants:
        ok, _ = is_balanced(c)
        boundary = fundamental_cycle_boundary(c)
        assert not ok and boundary != {}
    _report(10, "fundamental cycle boundary agrees with balancing on "
                "corpus and mutants")


def _h_row(table, p):
    if p <= table.n:
        return list(table.h[p])
    return [0] * (table.n + 1)


@pytest.mark.parametrize("case", ["closure_line", "t1", "closure_u34"])
def test_criterion_11_euler_additivity(case):
    start = time.time()
    if case == "closure_line":
        omega = closure_in(tropical_line(), [1])
        stratum = {1}
    elif case == "t1":
        omega = t1_complex()
        stratum = {0}
    else:
        omega = closure_in(bergman_fan(uniform_matroid(3, 4)), [2])
        stratum = {2}
    u = restrict_to_stratum(omega, frozenset())
    d = restrict_to_stratum(omega, stratum)
    _, c_omega = betti_tables(omega)
    _, c_u = betti_tables(u)
    _, c_d = betti_tables(d)
    n = omega.n
    for p in range(n + 1):
        total = 0
        for q in range(n + 1):
            hu = _h_row(c_u, p)[q] if q <= c_u.n else 0
            ho = _h_row(c_omega, p)[q] if q <= c_omega.n else 0
            hd = _h_row(c_d, p)[q] if q <= c_d.n else 0
            total += (-1) ** q * (hu - ho + hd)
        assert total == 0, (case, p)
    assert time.time() - start < 60.0
    _report(11, f"compact-support Euler additivity for {case}")


def test_criterion_12_subdivision_invariance():
    assert betti_tables(subdivided_line()) == betti_tables(tropical_line())
    _report(12, "Betti tables invariant under ray subdivision")
