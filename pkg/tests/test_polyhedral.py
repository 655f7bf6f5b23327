"""Polyhedra in T^r, complexes, sedentarity, balancing."""

from fractions import Fraction

import pytest

from tropicoh.errors import ComplexAxiomError
from tropicoh.linalg import Subspace, vec
from tropicoh.polyhedral import (
    NEG_INF,
    Polyhedron,
    build_complex,
    closure_in,
    faces,
    fundamental_cycle_boundary,
    infinite_faces,
    intersect,
    is_balanced,
    product,
    restrict_to_stratum,
    sedentarity_of,
    star,
    stratum_piece,
    vrep_to_hrep,
)

F = Fraction


def tropical_line(weights=(1, 1, 1)):
    rays = [(-1, 0), (0, -1), (1, 1)]
    cells = [(Polyhedron(2, [(0, 0)], [r]), w) for r, w in zip(rays, weights)]
    return build_complex(cells)


def r1_complex():
    return build_complex([
        (Polyhedron(1, [(0,)], [(1,)]), 1),
        (Polyhedron(1, [(0,)], [(-1,)]), 1),
    ])


def axes_complex():
    rays = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return build_complex([(Polyhedron(2, [(0, 0)], [r]), 1) for r in rays])


def t1_complex():
    # The interval T^1: one mobile edge, closed at -infinity.
    return build_complex([(Polyhedron(1, [(0,)], [(1,), (-1,)]), 1)],
                         tropical_coords=[0])


def test_sedentarity_of_point():
    assert sedentarity_of((NEG_INF, F(3), NEG_INF)) == {0, 2}
    assert sedentarity_of((F(1), F(2))) == frozenset()


def test_vrep_to_hrep_segment():
    p = Polyhedron(1, [(0,), (1,)])
    ineqs = vrep_to_hrep(p)
    assert sorted(ineqs) == [((-1,), F(-1)), ((1,), F(0))]


def test_vrep_to_hrep_diagonal_ray():
    p = Polyhedron(2, [(0, 0)], [(1, 1)])
    eqs, ineqs = p.hrep
    assert len(eqs) == 1 and len(ineqs) == 1


def test_vrep_to_hrep_full_plane():
    p = Polyhedron(2, [(0, 0)], [(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert vrep_to_hrep(p) == []


def test_faces_triangle():
    p = Polyhedron(2, [(0, 0), (1, 0), (0, 1)])
    fs = faces(p)
    by_dim = {}
    for f in fs:
        by_dim.setdefault(f.dim, []).append(f)
    assert len(by_dim[2]) == 1
    assert len(by_dim[1]) == 3
    assert len(by_dim[0]) == 3


def test_faces_ray():
    p = Polyhedron(2, [(0, 0)], [(1, 1)])
    fs = faces(p)
    assert len(fs) == 2
    assert {f.dim for f in fs} == {0, 1}


def test_faces_bergman_flag_cone():
    # Cone of the flag {1} in {1,2} of U_{3,4} has two rays and the origin.
    r1 = (-1, 0, 0)
    r2 = (-1, -1, 0)
    p = Polyhedron(3, [(0, 0, 0)], [r1, r2])
    fs = faces(p)
    assert sorted(f.dim for f in fs) == [0, 1, 1, 2]


def test_euler_relation_on_polytopes():
    # Alternating face count of a bounded polytope is 1.
    cube = Polyhedron(3, [(x, y, z) for x in (0, 1) for y in (0, 1)
                          for z in (0, 1)])
    total = sum((-1) ** f.dim for f in faces(cube))
    assert total == 1


def test_infinite_faces_t1():
    p = Polyhedron(1, [(0,)], [(-1,)])
    fs = infinite_faces(p, [0])
    assert len(fs) == 1
    assert fs[0].sedentarity == {0}
    assert fs[0].dim == 0


def test_infinite_faces_halfplane():
    # closure of {y >= x} in T^2, stratum {0}: all of the y-axis copy.
    p = Polyhedron(2, [(0, 0)], [(-1, 0), (1, 1), (-1, -1)])
    fs = infinite_faces(p, [0])
    assert len(fs) == 1
    piece = fs[0]
    assert piece.sedentarity == {0}
    assert piece.dim == 1


def test_infinite_faces_antidiagonal_empty():
    # closure of {y = -x, x <= 0}: no recession vector supported on {0}.
    p = Polyhedron(2, [(0, 0)], [(-1, 1)])
    assert infinite_faces(p, [0]) == []


def test_infinite_faces_composition_consistency():
    # The J2-face of the J1-face equals the (J1 u J2)-face.
    p = Polyhedron(2, [(0, 0)], [(-1, 0), (0, -1), (-1, -1)])
    direct = stratum_piece(p, frozenset({0, 1}))
    step1 = stratum_piece(p, frozenset({0}))
    step2 = stratum_piece(step1, frozenset({1}))
    assert direct is not None and step2 is not None
    assert direct.key == step2.key


def test_build_tropical_line():
    line = tropical_line()
    dims = sorted(c.dim for c in line.cells)
    assert dims == [0, 1, 1, 1]
    assert len(line.facet_indices()) == 3


def test_build_r1():
    c = r1_complex()
    assert sorted(cell.dim for cell in c.cells) == [0, 1, 1]


def test_build_complex_axiom_violation():
    # Two opposite rays overlapping in a segment that is a face of neither.
    bad = [
        (Polyhedron(2, [(0, 0)], [(1, 0)]), 1),
        (Polyhedron(2, [(2, 0)], [(-1, 0)]), 1),
    ]
    with pytest.raises(ComplexAxiomError):
        build_complex(bad)


def test_build_complex_nested_maximal_rejected():
    with pytest.raises(ComplexAxiomError):
        build_complex([
            (Polyhedron(1, [(0,)], [(1,)]), 1),
            (Polyhedron(1, [(1,)], [(1,)]), 1),
        ])


def test_face_relation_is_graded():
    line = closure_in(tropical_line(), [0, 1])
    for t, s in line.covers:
        assert line.cells[s].dim == line.cells[t].dim + 1


def test_closure_of_line_in_t2():
    line = closure_in(tropical_line(), [0, 1])
    sed_cells = [c for c in line.cells if c.sedentarity]
    assert len(sed_cells) == 2
    assert {tuple(sorted(c.sedentarity)) for c in sed_cells} == {(0,), (1,)}


def test_balanced_line():
    ok, failures = is_balanced(tropical_line())
    assert ok and failures == []


def test_unbalanced_line_defect():
    line = tropical_line((1, 1, 2))
    ok, failures = is_balanced(line)
    assert not ok
    assert len(failures) == 1
    t, defect = failures[0]
    assert line.cells[t].dim == 0
    # Direct sum: -e1 - e2 + 2(e1+e2) = e1 + e2.
    assert defect == (F(1), F(1))


def test_balanced_axes():
    ok, _ = is_balanced(axes_complex())
    assert ok


def test_balanced_t1():
    # The sedentary vertex has no same-sedentarity facet: empty sum.
    ok, _ = is_balanced(t1_complex())
    assert ok


def test_fundamental_cycle_matches_balancing():
    for complex_ in (tropical_line(), tropical_line((1, 1, 2)),
                     tropical_line((2, 1, 1)), axes_complex(), r1_complex(),
                     t1_complex(), closure_in(tropical_line(), [1])):
        ok, _ = is_balanced(complex_)
        boundary = fundamental_cycle_boundary(complex_)
        assert ok == (boundary == {})


def test_fundamental_cycle_unbalanced_value():
    line = tropical_line((1, 1, 2))
    boundary = fundamental_cycle_boundary(line)
    (t, value), = boundary.items()
    # The defect class is +-(e1+e2) in wedge-degree-1 coordinates.
    assert value in ((F(1), F(1)), (F(-1), F(-1)))


def test_segment_not_balanced():
    seg = build_complex([(Polyhedron(1, [(0,), (1,)]), 1)])
    ok, failures = is_balanced(seg)
    assert not ok and len(failures) == 2


def test_star_of_line_at_vertex():
    line = tropical_line()
    v = line.cells_of_dim(0)[0]
    st = star(line, v)
    assert st.same_weighted(tropical_line())


def test_star_of_line_on_ray():
    line = tropical_line()
    ray = next(i for i in line.cells_of_dim(1)
               if line.cells[i].rays == ((-1, 0),))
    st = star(line, ray)
    # A full line through the origin with weight 1.
    assert len(st.facet_indices()) == 1
    facet = st.cells[st.facet_indices()[0]]
    assert facet.dim == 1 and not facet.is_bounded()


def test_star_of_sedentary_vertex():
    line = closure_in(tropical_line(), [0, 1])
    sed_vertex = next(i for i, c in enumerate(line.cells) if c.sedentarity)
    st = star(line, sed_vertex)
    assert len(st.cells) == 1
    assert st.cells[0].dim == 0


def test_product_point_with_t1():
    pt = build_complex([(Polyhedron(0, [()]), 1)])
    c = product(pt, 1, tropical=True)
    assert sorted(cell.dim for cell in c.cells) == [0, 1]
    assert c.cells[0].sedentarity == {0}


def test_product_line_with_r1():
    c = product(tropical_line(), 1, tropical=False)
    assert len(c.facet_indices()) == 3
    assert c.n == 2
    ok, _ = is_balanced(c)
    assert ok


def test_product_line_with_t1():
    c = product(tropical_line(), 1, tropical=True)
    # The sedentary copy of the line sits at x3 = -infinity.
    stratum = restrict_to_stratum(c, {2})
    assert stratum.same_cells(tropical_line())


def test_restrict_to_stratum():
    line = closure_in(tropical_line(), [0, 1])
    mobile = restrict_to_stratum(line, frozenset())
    assert mobile.same_weighted(tropical_line())
    t1 = t1_complex()
    pt = restrict_to_stratum(t1, {0})
    assert len(pt.cells) == 1 and pt.cells[0].dim == 0


def test_intersect():
    a = Polyhedron(2, [(0, 0), (2, 0), (0, 2)])
    b = Polyhedron(2, [(1, -1), (3, -1), (3, 1), (1, 1)])
    i = intersect(a, b)
    assert i is not None and i.dim == 2
    assert sorted(i.vertices) == [(1, 0), (1, 1), (2, 0)]
    assert intersect(Polyhedron(1, [(0,)]), Polyhedron(1, [(1,)])) is None


def test_cover_thinness():
    # Every 2-interval in the face poset has exactly two middle elements.
    for complex_ in (closure_in(tropical_line(), [0, 1]),
                     product(tropical_line(), 1, tropical=True)):
        for low in range(len(complex_.cells)):
            ups = complex_.covers_of(low)
            for high in set(c2 for u in ups for c2 in complex_.covers_of(u)):
                middles = [u for u in ups if high in complex_.covers_of(u)]
                assert len(middles) in (0, 2)


def test_diagonal_escape_complex():
    # A cell whose closure escapes two coordinates at once.
    sigma = Polyhedron(2, [(0, 0)], [(-1, 0), (-1, -1)])
    c = build_complex([(sigma, 1)], tropical_coords=[0, 1])
    seds = sorted(tuple(sorted(cell.sedentarity)) for cell in c.cells)
    assert ((0, 1) in seds) and ((0,) in seds)
    for t, s in c.covers:
        assert c.cells[s].dim == c.cells[t].dim + 1
