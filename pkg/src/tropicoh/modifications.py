"""Open and closed tropical modifications of weighted complexes.

The graph of a piecewise integer-affine function over a balanced complex
is completed to a balanced cycle by hanging facets in the last coordinate
direction with the unique clearing weights; the divisor is the projected
shadow of the hung facets.  The inverse analysis classifies the facets of
a cycle by whether the projection kernel lies in their tangent space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BalancingRequiredError,
    IntegralityError,
    ModificationError,
    NotAModificationError,
)
from .linalg import is_zero_vec, solve, vadd, vdot, vec, vscale, vsub, zero_vec
from .polyhedral import (
    Polyhedron,
    PolyhedralComplex,
    build_complex,
    closure_in,
    intersect,
    is_balanced,
    lattice_quotient,
)

MAX = "max"
MIN = "min"


class PLFunction:
    """A piecewise integer-affine function.

    Either a tropical polynomial (mode max or min, terms of the form
    coefficient + <exponents, x>) or explicit affine data per facet of a
    reference complex.  Exponent vectors are integral; per-facet linear
    parts must have integer slopes along the facet lattice.
    """

    def __init__(self, mode=MAX, terms=None, per_facet=None):
        if (terms is None) == (per_facet is None):
            raise ModificationError("need exactly one of terms / per_facet")
        self.mode = mode
        self.terms = None
        self.per_facet = None
        if terms is not None:
            if mode not in (MAX, MIN):
                raise ModificationError(f"unknown mode {mode!r}")
            clean = []
            for coeff, exps in terms:
                exps = tuple(Fraction(e) for e in exps)
                if any(e.denominator != 1 for e in exps):
                    raise IntegralityError(
                        f"non-integral exponent vector {exps}")
                clean.append((Fraction(coeff), tuple(int(e) for e in exps)))
            if not clean:
                raise ModificationError("a tropical polynomial needs terms")
            self.terms = tuple(clean)
        else:
            self.per_facet = {key: (vec(lin), Fraction(const))
                              for key, (lin, const) in per_facet.items()}

    def value(self, x) -> Fraction:
        if self.terms is None:
            raise ModificationError("per-facet functions have no global value")
        x = vec(x)
        vals = [c + vdot(vec(e), x) for c, e in self.terms]
        return max(vals) if self.mode == MAX else min(vals)

    def affine_pieces(self, w: PolyhedralComplex):
        """Refine the facets of w into domains of linearity.

        Returns a list of (piece, weight, linear, constant) with the
        pieces tiling the facets of w.
        """
        out = []
        seen = {}
        if self.per_facet is not None:
            for i in w.facet_indices():
                cell = w.cells[i]
                if cell.key not in self.per_facet:
                    raise ModificationError(
                        f"no affine data for facet {cell}")
                lin, const = self.per_facet[cell.key]
                _check_integral_slopes(cell, lin)
                out.append((cell, w.weights.get(i, 1), lin, const))
            _check_continuity(out, w.ambient_dim)
            return out
        for i in w.facet_indices():
            cell = w.cells[i]
            weight = w.weights.get(i, 1)
            for coeff, exps in self.terms:
                lin = vec(exps)
                eqs = list(cell.hrep[0])
                ineqs = list(cell.hrep[1])
                for c2, e2 in self.terms:
                    if (c2, e2) == (coeff, exps):
                        continue
                    diff = vsub(lin, vec(e2))
                    bound = c2 - coeff
                    if self.mode == MIN:
                        diff = vscale(-1, diff)
                        bound = -bound
                    ineqs.append((diff, bound))
                from .convex import polyhedron_generators
                gen = polyhedron_generators(eqs, ineqs, w.ambient_dim)
                if gen is None:
                    continue
                verts, rays, lin_part = gen
                all_rays = list(rays) + list(lin_part) + \
                    [tuple(-x for x in l) for l in lin_part]
                piece = Polyhedron(w.ambient_dim, verts, all_rays,
                                   cell.sedentarity)
                if piece.dim != cell.dim or piece.key in seen:
                    continue
                seen[piece.key] = True
                out.append((piece, weight, lin, Fraction(coeff)))
        return out


def _check_integral_slopes(cell: Polyhedron, lin):
    for b in cell.lattice.basis:
        s = vdot(vec(lin), vec(b))
        if s.denominator != 1:
            raise IntegralityError(
                f"slope {s} along a lattice direction of {cell}")


def _check_continuity(pieces, ambient):
    """Affine data of adjacent pieces must agree on shared faces."""
    for (a, _, lin_a, c_a), (b, _, lin_b, c_b) in \
            itertools.combinations(pieces, 2):
        common = intersect(a, b)
        if common is None:
            continue
        x = common.relint_point()
        if vdot(lin_a, x) + c_a != vdot(lin_b, x) + c_b:
            raise ModificationError(
                f"per-facet data is discontinuous across {common}")
        for d in common.tangent.basis:
            if vdot(lin_a, vec(d)) != vdot(lin_b, vec(d)):
                raise ModificationError(
                    f"per-facet slopes disagree along {common}")


@dataclass
class ModificationResult:
    graph: PolyhedralComplex          # the completed cycle V (or its closure)
    source: PolyhedralComplex         # W, refined into domains of linearity
    divisor: PolyhedralComplex | None
    function: PLFunction
    projection_coordinate: int        # 0-based index of the modified axis


def _lift(piece: Polyhedron, lin, const):
    r = piece.ambient_dim
    verts = [tuple(list(v) + [vdot(lin, v) + const]) for v in piece.vertices]
    rays = [tuple(list(vec(ray)) + [vdot(lin, vec(ray))])
            for ray in piece.rays]
    return Polyhedron(r + 1, verts, rays, piece.sedentarity)


def graph_complex(w: PolyhedralComplex, p: PLFunction) -> PolyhedralComplex:
    """The graph of p over w, with inherited weights, in one extra
    coordinate; in general unbalanced along the break locus."""
    pieces = p.affine_pieces(w)
    lifted = [(_lift(piece, lin, const), weight)
              for piece, weight, lin, const in pieces]
    return build_complex(lifted)


def complete_modification(w: PolyhedralComplex, p: PLFunction
                          ) -> ModificationResult:
    """The open tropical modification of w along p.

    Hangs a facet in direction -e_last at every unbalanced codimension-one
    face of the graph, with the unique weight restoring balancing, and
    extracts the divisor as the projected shadow of the hung facets.
    """
    ok, _ = is_balanced(w)
    if not ok:
        raise BalancingRequiredError("modification needs a balanced source")
    pieces = p.affine_pieces(w)
    refined_w = build_complex([(piece, weight)
                               for piece, weight, _, _ in pieces])
    graph = graph_complex(w, p)
    r1 = graph.ambient_dim
    e_last = tuple(Fraction(1 if i == r1 - 1 else 0) for i in range(r1))
    n = graph.n
    hung = []
    for t in graph.cells_of_dim(n - 1):
        tau = graph.cells[t]
        total = zero_vec(r1)
        for s in graph.covers_of(t):
            sigma = graph.cells[s]
            if sigma.dim != n or sigma.sedentarity != tau.sedentarity:
                continue
            nu = lattice_quotient(sigma, tau)
            total = vadd(total, vscale(graph.weights.get(s, 1), nu))
        if tau.lattice.contains(total):
            continue
        cols = [vec(b) for b in tau.tangent.basis] + [e_last]
        sol = solve(cols, total)
        if sol is None:
            raise ModificationError(
                f"defect at {tau} is not a vertical multiple")
        weight = sol[-1]
        if weight.denominator != 1 or weight == 0:
            raise ModificationError(
                f"no integer clearing weight at {tau}")
        down = Polyhedron(r1, tau.vertices,
                          list(tau.rays) + [vscale(-1, e_last)],
                          tau.sedentarity)
        hung.append((down, tau, int(weight)))
    maximal = [(graph.cells[i], graph.weights.get(i, 1))
               for i in graph.facet_indices()]
    maximal.extend((down, wt) for down, _, wt in hung)
    cycle = build_complex(maximal)
    ok, failures = is_balanced(cycle)
    if not ok:
        raise ModificationError(f"completion failed to balance: {failures}")
    divisor = None
    if hung:
        div_cells = {}
        for _, tau, wt in hung:
            shadow = Polyhedron(r1 - 1,
                                [v[:-1] for v in tau.vertices],
                                [vec(ray)[:-1] for ray in tau.rays],
                                tau.sedentarity)
            if shadow.key in div_cells and div_cells[shadow.key][1] != wt:
                raise ModificationError("inconsistent divisor weights")
            div_cells[shadow.key] = (shadow, wt)
        divisor = build_complex(list(div_cells.values()))
        ok, _ = is_balanced(divisor)
        if not ok:
            raise ModificationError("divisor of a balanced source must "
                                    "balance")
    return ModificationResult(cycle, refined_w, divisor, p, r1 - 1)


def closed_modification(w: PolyhedralComplex, p: PLFunction
                        ) -> ModificationResult:
    """The closure of the open modification in W x T: adds the faces at
    minus infinity in the new coordinate."""
    open_result = complete_modification(w, p)
    closed = closure_in(open_result.graph,
                        [open_result.projection_coordinate])
    return ModificationResult(closed, open_result.source,
                              open_result.divisor, p,
                              open_result.projection_coordinate)


def _drop_coordinate(cell: Polyhedron, i: int) -> Polyhedron:
    keep = [k for k in range(cell.ambient_dim) if k != i]
    verts = [tuple(v[k] for k in keep) for v in cell.vertices]
    rays = [tuple(vec(ray)[k] for k in keep) for ray in cell.rays]
    rays = [r for r in rays if not is_zero_vec(vec(r))]
    sed = frozenset(k if k < i else k - 1 for k in cell.sedentarity)
    return Polyhedron(cell.ambient_dim - 1, verts, rays, sed)


def _projection_index(cell: Polyhedron, dropped: Polyhedron, i: int) -> int:
    """Lattice index [Z(pi(cell)) : pi(Z(cell))]."""
    from .linalg import Lattice, det, mat
    target = dropped.lattice
    if target.rank == 0:
        return 1
    image = []
    for b in cell.lattice.basis:
        img = tuple(x for k, x in enumerate(vec(b)) if k != i)
        if not is_zero_vec(vec(img)):
            image.append(img)
    image_lattice = Lattice(dropped.ambient_dim, image)
    coords = [target.coords(b) for b in image_lattice.basis]
    d = det(mat(coords))
    if d == 0 or d.denominator != 1:
        raise NotAModificationError("projected lattice is degenerate")
    return abs(int(d))


def project_modification(v: PolyhedralComplex, coordinate: int
                         ) -> ModificationResult:
    """Analyze the coordinate projection of a balanced cycle.

    Facets containing the kernel direction map into the divisor, the rest
    onto the source; the recovered per-facet function is verified by
    reconstructing the modification and comparing weighted supports.
    """
    ok, _ = is_balanced(v)
    if not ok:
        raise BalancingRequiredError("projection analysis needs a balanced "
                                     "cycle")
    r = v.ambient_dim
    i = coordinate
    e_i = tuple(Fraction(1 if k == i else 0) for k in range(r))
    verticals = []
    horizontals = []
    for f in v.facet_indices():
        cell = v.cells[f]
        weight = v.weights.get(f, 1)
        if cell.tangent.contains(e_i):
            from .convex import cone_facets
            eqs, normals = cone_facets(cell.rays, r)
            up = convex_member(e_i, eqs, normals)
            down = convex_member(vscale(-1, e_i), eqs, normals)
            if up and down:
                raise NotAModificationError(
                    f"fibers of {cell} are full lines")
            verticals.append((cell, weight))
        else:
            horizontals.append((cell, weight))
    if not horizontals:
        raise NotAModificationError("no facet maps onto the source")
    # Source facets with pushforward weights; overlapping interiors mean
    # disconnected fibers.
    w_facets = []
    for cell, weight in horizontals:
        shadow = _drop_coordinate(cell, i)
        idx = _projection_index(cell, shadow, i)
        w_facets.append((shadow, weight * idx, cell))
    for (a, _, _), (b, _, _) in itertools.combinations(w_facets, 2):
        common = intersect(a, b)
        if common is not None and common.dim == a.dim:
            raise NotAModificationError(
                "two facets project onto a common region: fibers are "
                "disconnected")
    w = build_complex([(shadow, wt) for shadow, wt, _ in w_facets])
    divisor = None
    if verticals:
        div_cells = {}
        for cell, weight in verticals:
            shadow = _drop_coordinate(cell, i)
            idx = _projection_index(cell, shadow, i)
            if shadow.key in div_cells and \
                    div_cells[shadow.key][1] != weight * idx:
                raise NotAModificationError("inconsistent divisor weights")
            div_cells[shadow.key] = (shadow, weight * idx)
        keys = list(div_cells)
        for key in keys:
            shadow = div_cells[key][0]
            if any(other is not shadow and other.contains_polyhedron(shadow)
                   for other, _ in div_cells.values()):
                del div_cells[key]
        divisor = build_complex(list(div_cells.values()))
    # Recover the function per source facet.
    per_facet = {}
    for shadow, _, cell in w_facets:
        v0 = cell.vertices[0]
        base = tuple(x for k, x in enumerate(v0) if k != i)
        height = v0[i]
        proj_basis = []
        slopes = []
        for b in cell.tangent.basis:
            proj_basis.append(tuple(x for k, x in enumerate(vec(b)) if k != i))
            slopes.append(vec(b)[i])
        lin = _solve_linear_functional(proj_basis, slopes, r - 1)
        const = height - vdot(lin, vec(base))
        per_facet[shadow.key] = (lin, const)
    func = PLFunction(per_facet={k: v_ for k, v_ in per_facet.items()})
    rebuilt = complete_modification(w, func)
    if not weighted_supports_equal(rebuilt.graph, v):
        raise NotAModificationError(
            "reconstruction from the projection differs from the cycle")
    if (divisor is None) != (rebuilt.divisor is None):
        raise NotAModificationError("divisor mismatch in reconstruction")
    if divisor is not None and \
            not weighted_supports_equal(divisor, rebuilt.divisor):
        raise NotAModificationError("divisor mismatch in reconstruction")
    return ModificationResult(v, w, divisor, func, i)


def convex_member(x, eqs, normals) -> bool:
    return (all(vdot(vec(e), vec(x)) == 0 for e in eqs)
            and all(vdot(vec(a), vec(x)) >= 0 for a in normals))


def _solve_linear_functional(directions, values, ambient):
    """Some rational linear functional with the given values on the
    directions (gauge freedom off their span is fixed by the solver)."""
    if not directions:
        return zero_vec(ambient)
    cols = [tuple(d[k] for d in directions) for k in range(ambient)]
    sol = solve(cols, vec(values))
    if sol is None:
        raise NotAModificationError("facet is not a graph over its shadow")
    return vec(sol)


# -- weighted support comparison ---------------------------------------------------


def _subtract(regions, piece):
    """Closed full-dimensional leftovers of regions minus piece."""
    out = []
    for region in regions:
        n = region.dim
        current = region
        inter = intersect(region, piece)
        if inter is None or inter.dim < n:
            out.append(region)
            continue
        for a, b in piece.hrep[1]:
            flipped = _halfspace_cut(current, vscale(-1, vec(a)), -b)
            if flipped is not None and flipped.dim == n:
                out.append(flipped)
            current = _halfspace_cut(current, vec(a), b)
            if current is None or current.dim < n:
                break
    return out


def _halfspace_cut(region, a, b):
    if region is None:
        return None
    from .convex import polyhedron_generators
    eqs = list(region.hrep[0])
    ineqs = list(region.hrep[1]) + [(a, b)]
    gen = polyhedron_generators(eqs, ineqs, region.ambient_dim)
    if gen is None:
        return None
    verts, rays, lin = gen
    return Polyhedron(region.ambient_dim, verts,
                      list(rays) + list(lin) +
                      [tuple(-x for x in l) for l in lin],
                      region.sedentarity)


def weighted_supports_equal(c1: PolyhedralComplex, c2: PolyhedralComplex
                            ) -> bool:
    """Equality of weighted complexes up to common refinement.

    Mobile facets only: supports must cover each other exactly (checked by
    polyhedral subtraction) and weights must agree on every full-
    dimensional overlap.
    """
    if c1.ambient_dim != c2.ambient_dim or c1.n != c2.n:
        return False
    n = c1.n
    f1 = [(c1.cells[idx], c1.weights.get(idx, 1))
          for idx in c1.facet_indices() if not c1.cells[idx].sedentarity]
    f2 = [(c2.cells[idx], c2.weights.get(idx, 1))
          for idx in c2.facet_indices() if not c2.cells[idx].sedentarity]
    for source, target in ((f1, f2), (f2, f1)):
        for cell, weight in source:
            leftovers = [cell]
            for other, w2 in target:
                common = intersect(cell, other)
                if common is None or common.dim < n:
                    continue
                if weight != w2:
                    return False
                leftovers = _subtract(leftovers, other)
                if not leftovers:
                    break
            if leftovers:
                return False
    return True
