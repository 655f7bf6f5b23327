"""Coefficient systems and both cohomology engines against closed forms."""

import math
from fractions import Fraction

import pytest

from tropicoh.cohomology import (
    SHEAF,
    BettiTable,
    CellularSheafDatum,
    SheafCell,
    betti_tables,
    build_cosheaf,
    build_sheaf,
    canonical_top_cochain,
    compact_cohomology,
    degree,
    inclusion_map,
    multitangent_space,
    ordinary_cohomology,
    pd_report,
)
from tropicoh.errors import BalancingRequiredError, ValidationError
from tropicoh.linalg import Subspace, mat_transpose, mat, mat_vec, vec
from tropicoh.polyhedral import (
    Polyhedron,
    build_complex,
    closure_in,
    product,
)

F = Fraction


def tropical_line(weights=(1, 1, 1)):
    rays = [(-1, 0), (0, -1), (1, 1)]
    return build_complex(
        [(Polyhedron(2, [(0, 0)], [r]), w) for r, w in zip(rays, weights)])


def axes_complex():
    rays = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return build_complex([(Polyhedron(2, [(0, 0)], [r]), 1) for r in rays])


def r1_complex():
    return build_complex([(Polyhedron(1, [(0,)], [(1,)]), 1),
                          (Polyhedron(1, [(0,)], [(-1,)]), 1)])


def t1_complex():
    return build_complex([(Polyhedron(1, [(0,)], [(1,), (-1,)]), 1)],
                         tropical_coords=[0])


def rn_complex(n):
    rays = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rays.append(tuple(e))
        rays.append(tuple(-x for x in e))
    return build_complex([(Polyhedron(n, [tuple([0] * n)], rays), 1)])


# -- multitangent spaces -------------------------------------------------------


def test_multitangent_line_vertex():
    line = tropical_line()
    v = line.cells_of_dim(0)[0]
    f1 = multitangent_space(line, v, 1)
    assert f1 == Subspace(2, [[1, 0], [0, 1]])
    f0 = multitangent_space(line, v, 0)
    assert f0.dim == 1


def test_multitangent_sedentary_vertex_vanishes():
    closed = closure_in(tropical_line(), [0, 1])
    sed = next(i for i, c in enumerate(closed.cells) if c.sedentarity)
    for p in (1, 2):
        assert multitangent_space(closed, sed, p).dim == 0
    assert multitangent_space(closed, sed, 0).dim == 1


def test_multitangent_axes_vertex():
    axes = axes_complex()
    v = axes.cells_of_dim(0)[0]
    assert multitangent_space(axes, v, 1).dim == 2
    assert multitangent_space(axes, v, 2).dim == 0


def test_inclusion_map_vertex_into_ray():
    line = tropical_line()
    v = line.cells_of_dim(0)[0]
    ray = next(i for i in line.cells_of_dim(1)
               if line.cells[i].rays == ((-1, 0),))
    m = inclusion_map(line, v, ray, 1)
    assert m == ((F(1),), (F(0),))


def test_inclusion_map_jump_to_zero_space():
    t1 = t1_complex()
    sed = next(i for i, c in enumerate(t1.cells) if c.sedentarity)
    edge = next(i for i, c in enumerate(t1.cells) if c.dim == 1)
    m = inclusion_map(t1, sed, edge, 1)
    assert m == ()  # zero-dimensional target


def test_cosheaf_and_sheaf_shapes():
    line = tropical_line()
    cos = build_cosheaf(line, 1)
    assert sorted(c.space_dim for c in cos.cells) == [1, 1, 1, 2]
    sh = build_sheaf(line, 1)
    assert sh.direction == SHEAF
    cos0 = build_cosheaf(line, 0)
    assert all(c.space_dim == 1 for c in cos0.cells)
    assert all(m == ((F(1),),) for m in cos0.cover_maps.values())


# -- compact-support engine -----------------------------------------------------


def test_compact_line():
    line = tropical_line()
    assert compact_cohomology(build_sheaf(line, 0)) == (0, 2)
    assert compact_cohomology(build_sheaf(line, 1)) == (0, 1)


def test_compact_axes():
    axes = axes_complex()
    assert compact_cohomology(build_sheaf(axes, 1)) == (0, 2)
    assert compact_cohomology(build_sheaf(axes, 0)) == (0, 3)


def test_compact_t1():
    t1 = t1_complex()
    assert compact_cohomology(build_sheaf(t1, 0)) == (0, 0)
    assert compact_cohomology(build_sheaf(t1, 1)) == (0, 1)


# -- ordinary engine --------------------------------------------------------------


def test_ordinary_line():
    line = tropical_line()
    assert ordinary_cohomology(build_sheaf(line, 1)) == (2, 0)
    assert ordinary_cohomology(build_sheaf(line, 0)) == (1, 0)


def test_ordinary_r1():
    assert ordinary_cohomology(build_sheaf(r1_complex(), 0)) == (1, 0)


def test_ordinary_t1():
    assert ordinary_cohomology(build_sheaf(t1_complex(), 1)) == (0, 0)
    assert ordinary_cohomology(build_sheaf(t1_complex(), 0)) == (1, 0)


def test_fan_concentration():
    # Ordinary cohomology of a fan is concentrated in degree zero with
    # the multitangent dimension of the minimal cone.
    for fan in (tropical_line(), axes_complex(), r1_complex(), rn_complex(2)):
        minimal = min(range(len(fan.cells)), key=lambda i: fan.cells[i].dim)
        for p in range(fan.n + 1):
            got = ordinary_cohomology(build_sheaf(fan, p))
            want_dim = multitangent_space(fan, minimal, p).dim
            assert got[0] == want_dim
            assert all(x == 0 for x in got[1:])


def test_p0_is_singular_cohomology():
    # h^{0,*} matches the singular Betti numbers of the support.
    assert ordinary_cohomology(build_sheaf(tropical_line(), 0)) == (1, 0)
    assert ordinary_cohomology(build_sheaf(axes_complex(), 0)) == (1, 0)
    # Two parallel disjoint lines: two components.
    two = build_complex([
        (Polyhedron(2, [(0, 0)], [(1, 0), (-1, 0)]), 1),
        (Polyhedron(2, [(0, 1)], [(1, 0), (-1, 0)]), 1)])
    assert ordinary_cohomology(build_sheaf(two, 0))[0] == 2


# -- Betti tables -----------------------------------------------------------------


def test_betti_tables_line():
    ordinary, compact = betti_tables(tropical_line())
    assert ordinary.h == ((1, 0), (2, 0))
    assert compact.h == ((0, 2), (0, 1))


def test_betti_tables_r2():
    ordinary, compact = betti_tables(rn_complex(2))
    for p in range(3):
        assert ordinary.h[p][0] == math.comb(2, p)
        assert compact.h[p][2] == math.comb(2, p)
        assert all(ordinary.h[p][q] == 0 for q in (1, 2))
        assert all(compact.h[p][q] == 0 for q in (0, 1))


def test_betti_subdivision_invariance():
    # Subdivide each ray of the line at lattice distance 1.
    plain = betti_tables(tropical_line())
    rays = [(-1, 0), (0, -1), (1, 1)]
    cells = []
    for r in rays:
        cells.append((Polyhedron(2, [(0, 0), r]), 1))
        cells.append((Polyhedron(2, [r], [r]), 1))
    subdivided = build_complex(cells)
    assert betti_tables(subdivided) == plain


def test_tables_render_and_dict():
    t = BettiTable("ordinary", 1, ((1, 0), (2, 0)))
    assert "p\\q" in t.render()
    assert t.as_dict()["h"] == [[1, 0], [2, 0]]


# -- degree and PD report ----------------------------------------------------------


def test_degree_dual_ray_cochain():
    line = tropical_line()
    ray = next(i for i in line.cells_of_dim(1)
               if line.cells[i].rays == ((-1, 0),))
    # Functional dual to the direction -e1: canonical basis is (1,0),
    # so the coordinate is -1.
    assert degree(line, {ray: (F(-1),)}) == 1


def test_degree_vanishes_on_coboundaries():
    line = tropical_line()
    v = line.cells_of_dim(0)[0]
    for b in ((F(1), F(0)), (F(0), F(1)), (F(2), F(-3))):
        cochain = {}
        for s in line.covers_of(v):
            m = inclusion_map(line, v, s, 1)
            r = mat_transpose(mat(m))
            cochain[s] = tuple(x * line.signs[(v, s)] for x in mat_vec(r, vec(b)))
        assert degree(line, cochain) == 0


def test_degree_scales_with_weights():
    line1 = tropical_line()
    line2 = tropical_line((2, 2, 2))
    ray1 = next(i for i in line1.cells_of_dim(1)
                if line1.cells[i].rays == ((-1, 0),))
    ray2 = next(i for i in line2.cells_of_dim(1)
                if line2.cells[i].rays == ((-1, 0),))
    c = {ray1: (F(-1),)}
    assert degree(line2, {ray2: (F(-1),)}) == 2 * degree(line1, c)


def test_degree_requires_balancing():
    with pytest.raises(BalancingRequiredError):
        degree(tropical_line((1, 1, 2)), {})


def test_pd_report_line_passes():
    report = pd_report(tropical_line())
    assert report["balanced"] and report["pd_holds"]
    assert report["degree"]["nondegenerate"]
    assert report["degree"]["canonical_value"] != 0


def test_pd_report_axes_fails():
    report = pd_report(axes_complex())
    assert report["balanced"]
    assert not report["pd_holds"]
    pairs = {(f["p"], f["q"]): (f["ordinary"], f["compact_dual"])
             for f in report["pd_failures"]}
    assert pairs[(0, 0)] == (1, 2)


def test_pd_report_r1_passes():
    report = pd_report(r1_complex())
    assert report["pd_holds"]


# -- abstract cell-sheaf data --------------------------------------------------------


def tp1_datum():
    cells = [
        SheafCell("v0", 0, 0),
        SheafCell("vm", 0, 1),
        SheafCell("v1", 0, 0),
        SheafCell("ea", 1, 1),
        SheafCell("eb", 1, 1),
    ]
    one = ((F(1),),)
    empty = ((),)
    maps = {(0, 3): empty, (1, 3): one, (1, 4): one, (2, 4): empty}
    return CellularSheafDatum(cells, maps, SHEAF)


def tp1_p0_datum():
    cells = [SheafCell(s, 0, 1) for s in ("v0", "vm", "v1")] + \
        [SheafCell(s, 1, 1) for s in ("ea", "eb")]
    one = ((F(1),),)
    maps = {(0, 3): one, (1, 3): one, (1, 4): one, (2, 4): one}
    return CellularSheafDatum(cells, maps, SHEAF)


def test_tp1_betti():
    assert ordinary_cohomology(tp1_datum()) == (0, 1)
    assert compact_cohomology(tp1_datum()) == (0, 1)
    assert ordinary_cohomology(tp1_p0_datum()) == (1, 0)
    assert compact_cohomology(tp1_p0_datum()) == (1, 0)


def test_constant_system_components():
    cells = [SheafCell("a", 0, 1), SheafCell("b", 0, 1)]
    datum = CellularSheafDatum(cells, {}, SHEAF)
    assert ordinary_cohomology(datum) == (2,)


def test_noncommuting_diamond_rejected():
    cells = [SheafCell("p", 0, 1), SheafCell("a", 1, 1), SheafCell("b", 1, 1),
             SheafCell("t", 2, 1)]
    one = ((F(1),),)
    two = ((F(2),),)
    maps = {(0, 1): one, (0, 2): one, (1, 3): one, (2, 3): two}
    with pytest.raises(ValidationError):
        CellularSheafDatum(cells, maps, SHEAF)


def test_products_with_t_factor():
    # L x T^1: a closed modification-flavoured complex; engines must agree
    # with Poincare duality across the anti-diagonal.
    c = product(tropical_line(), 1, tropical=True)
    report = pd_report(c)
    assert report["balanced"]
    assert report["pd_holds"]
