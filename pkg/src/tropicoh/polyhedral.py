"""Rational polyhedra and weighted polyhedral complexes in T^r.

A polyhedron of sedentarity I is stored through its mobile part: vertices
and rays are full-length vectors whose entries at the coordinates in I are
zero placeholders (the actual coordinates there are -infinity).  Faces at
infinity are first-class cells, produced by projecting the mobile part
after a recession-cone support test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import convex
from .errors import (
    BalancingRequiredError,
    ComplexAxiomError,
    PurityError,
)
from .linalg import (
    Lattice,
    Subspace,
    Vec,
    det,
    is_zero_vec,
    primitive,
    solve,
    vadd,
    vdot,
    vec,
    vscale,
    vsub,
    wedge_vector,
    zero_vec,
)


class _NegInf:
    """Singleton marker for a -infinity coordinate in user-facing data."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInf()

_HREP_CACHE: dict = {}
_TANGENT_CACHE: dict = {}
_LATTICE_CACHE: dict = {}


def sedentarity_of(point) -> frozenset[int]:
    """Indices of the -infinity coordinates of an extended point."""
    return frozenset(i for i, x in enumerate(point) if x is NEG_INF)


class Polyhedron:
    """conv(vertices) + cone(rays) inside the stratum R^r_I of T^r."""

    __slots__ = ("ambient_dim", "sedentarity", "vertices", "rays",
                 "_hrep", "_tangent", "_lattice", "_key")

    def __init__(self, ambient_dim: int, vertices, rays=(), sedentarity=()):
        self.ambient_dim = ambient_dim
        sed = set(sedentarity)
        verts = []
        for v in vertices:
            row = list(v)
            if len(row) != ambient_dim:
                raise ValueError("vertex of wrong length")
            for i, x in enumerate(row):
                if x is NEG_INF:
                    sed.add(i)
                    row[i] = Fraction(0)
                else:
                    row[i] = Fraction(x)
            verts.append(tuple(row))
        if not verts:
            raise ValueError("polyhedron needs at least one vertex")
        self.sedentarity = frozenset(sed)
        for v in verts:
            for i in self.sedentarity:
                if v[i] != 0:
                    raise ValueError("sedentary coordinate must be -inf on "
                                     "every vertex")
        clean_rays = []
        for r in rays:
            r = vec(r)
            if len(r) != ambient_dim:
                raise ValueError("ray of wrong length")
            if any(r[i] != 0 for i in self.sedentarity):
                raise ValueError("ray has a component in a sedentary direction")
            if not is_zero_vec(r):
                clean_rays.append(primitive(r))
        self.vertices = tuple(sorted(set(verts)))
        self.rays = tuple(sorted(set(clean_rays)))
        self._hrep = None
        self._tangent = None
        self._lattice = None
        self._key = None

    # -- derived geometry ---------------------------------------------------
    # Face enumeration recreates equal cells many times, so the expensive
    # derived data is memoized globally under the canonical V-signature.

    def _signature(self):
        return (self.ambient_dim, tuple(sorted(self.sedentarity)),
                self.vertices, self.rays)

    @property
    def hrep(self):
        """(equations, inequalities) of the mobile part, canonical."""
        if self._hrep is None:
            sig = self._signature()
            cached = _HREP_CACHE.get(sig)
            if cached is None:
                eqs, ineqs = convex.polyhedron_facets(
                    self.vertices, self.rays, self.ambient_dim)
                cached = (tuple(eqs), tuple(ineqs))
                _HREP_CACHE[sig] = cached
            self._hrep = cached
        return self._hrep

    @property
    def dim(self) -> int:
        return self.tangent.dim

    @property
    def tangent(self) -> Subspace:
        """The direction space L(sigma), embedded in Q^r with zeros on I."""
        if self._tangent is None:
            sig = self._signature()
            cached = _TANGENT_CACHE.get(sig)
            if cached is None:
                v0 = self.vertices[0]
                dirs = [vsub(v, v0) for v in self.vertices[1:]] + \
                    [vec(r) for r in self.rays]
                cached = Subspace(self.ambient_dim, dirs)
                _TANGENT_CACHE[sig] = cached
            self._tangent = cached
        return self._tangent

    @property
    def lattice(self) -> Lattice:
        """Z(sigma): the integer points of the tangent space."""
        if self._lattice is None:
            key = (self.ambient_dim, self.tangent.basis)
            cached = _LATTICE_CACHE.get(key)
            if cached is None:
                cached = Lattice.from_subspace(self.tangent)
                _LATTICE_CACHE[key] = cached
            self._lattice = cached
        return self._lattice

    @property
    def key(self):
        """Canonical identity: ambient, sedentarity and H-representation."""
        if self._key is None:
            eqs, ineqs = self.hrep
            self._key = (self.ambient_dim, tuple(sorted(self.sedentarity)),
                         eqs, ineqs)
        return self._key

    def sort_key(self):
        return (self.dim, tuple(sorted(self.sedentarity)),
                self.key[2], self.key[3])

    def relint_point(self) -> Vec:
        p = zero_vec(self.ambient_dim)
        for v in self.vertices:
            p = vadd(p, v)
        p = vscale(Fraction(1, len(self.vertices)), p)
        for r in self.rays:
            p = vadd(p, vec(r))
        return p

    def contains_point(self, x) -> bool:
        x = vec(x)
        eqs, ineqs = self.hrep
        return convex.satisfies(x, eqs, ineqs)

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        """Mobile-part containment; both must have the same sedentarity."""
        if other.sedentarity != self.sedentarity:
            return False
        eqs, ineqs = self.hrep
        for v in other.vertices:
            if not convex.satisfies(vec(v), eqs, ineqs):
                return False
        for r in other.rays:
            r = vec(r)
            if any(vdot(vec(a), r) != 0 for a, _ in eqs):
                return False
            if any(vdot(vec(a), r) < 0 for a, _ in ineqs):
                return False
        return True

    def is_bounded(self) -> bool:
        return not self.rays

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        sed = "" if not self.sedentarity else f", sed={sorted(self.sedentarity)}"
        return (f"Polyhedron(dim {self.dim} in T^{self.ambient_dim}"
                f"{sed}, {len(self.vertices)}V/{len(self.rays)}R)")


def vrep_to_hrep(p: Polyhedron):
    """Irredundant affine inequalities of the mobile part of p."""
    return list(p.hrep[1])


def faces(p: Polyhedron) -> list[Polyhedron]:
    """All faces of the same sedentarity, including p itself."""
    found = {p.key: p}
    frontier = [p]
    while frontier:
        q = frontier.pop()
        eqs, ineqs = q.hrep
        for a, b in ineqs:
            a = vec(a)
            tight_verts = [v for v in q.vertices if vdot(a, v) == b]
            tight_rays = [r for r in q.rays if vdot(a, vec(r)) == 0]
            if not tight_verts:
                continue
            f = Polyhedron(p.ambient_dim, tight_verts, tight_rays,
                           p.sedentarity)
            if f.key not in found:
                found[f.key] = f
                frontier.append(f)
    return sorted(found.values(), key=Polyhedron.sort_key)


def stratum_piece(p: Polyhedron, extra: frozenset[int]):
    """The face of p at infinity in the extra coordinates, or None.

    The piece exists iff the recession cone contains a vector with strictly
    negative entries exactly on `extra` and zero on the other mobile
    coordinates; it is then the coordinate projection of the mobile part.
    """
    if not extra or extra & p.sedentarity:
        raise ValueError("extra coordinates must be new and nonempty")
    mobile = [i for i in range(p.ambient_dim) if i not in p.sedentarity]
    rec_eqs, rec_normals = convex.cone_facets(p.rays, p.ambient_dim)
    eqs = [(vec(e), Fraction(0)) for e in rec_eqs]
    ineqs = [(vec(n), Fraction(0)) for n in rec_normals]
    for i in mobile:
        if i in extra:
            ineqs.append((vscale(-1, vec(unit(p.ambient_dim, i))), Fraction(1)))
        else:
            eqs.append((vec(unit(p.ambient_dim, i)), Fraction(0)))
    if not convex.polyhedron_nonempty(eqs, ineqs, p.ambient_dim):
        return None
    kill = set(extra)
    proj = lambda w: tuple(Fraction(0) if i in kill else Fraction(x)
                           for i, x in enumerate(w))
    verts = [proj(v) for v in p.vertices]
    rays = [proj(r) for r in p.rays]
    rays = [r for r in rays if not is_zero_vec(r)]
    return Polyhedron(p.ambient_dim, verts, rays, p.sedentarity | extra)


def unit(n: int, i: int):
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def infinite_faces(p: Polyhedron, tropical_coords) -> list[Polyhedron]:
    """Faces of strictly larger sedentarity along the tropical coordinates."""
    allowed = sorted(set(tropical_coords) - p.sedentarity)
    out = {}
    for k in range(1, len(allowed) + 1):
        for combo in itertools.combinations(allowed, k):
            piece = stratum_piece(p, frozenset(combo))
            if piece is None:
                continue
            for f in faces(piece):
                out.setdefault(f.key, f)
    return sorted(out.values(), key=Polyhedron.sort_key)


def intersect(a: Polyhedron, b: Polyhedron):
    """Intersection of two same-sedentarity polyhedra, or None if empty.

    The vertex enumeration runs inside the intersection of the two affine
    hulls, which is usually low-dimensional, rather than in the ambient.
    """
    if a.sedentarity != b.sedentarity or a.ambient_dim != b.ambient_dim:
        return None
    from .linalg import kernel_basis, mat, rref, zero_vec as _zv
    r = a.ambient_dim
    eq_rows = [tuple(list(vec(n)) + [off])
               for n, off in list(a.hrep[0]) + list(b.hrep[0])]
    normals = [row[:-1] for row in eq_rows]
    # Particular point of the combined affine hull, if any.
    if eq_rows:
        red, pivots = rref(eq_rows)
        if any(p == r for p in pivots):
            return None  # inconsistent equations: hulls are disjoint
        point = list(_zv(r))
        for row, p in zip(red, pivots):
            point[p] = row[-1]
        point = tuple(point)
        basis = kernel_basis(mat(normals))
    else:
        point = _zv(r)
        basis = [vec(row) for row in
                 rref([[1 if j == i else 0 for j in range(r)]
                       for i in range(r)])[0]]
    # Restrict all inequalities to point + span(basis).
    rest = []
    for n, c in list(a.hrep[1]) + list(b.hrep[1]):
        n = vec(n)
        coeffs = tuple(vdot(n, bv) for bv in basis)
        bound = c - vdot(n, point)
        if is_zero_vec(coeffs):
            if bound > 0:
                return None
            continue
        rest.append((coeffs, bound))
    if is_zero_vec(point) and all(bound == 0 for _, bound in rest):
        # Both sides are cones with a common apex: skip homogenization.
        lin_t, rays_t = convex.cone_rays([c for c, _ in rest], [], len(basis))
        verts_t = [tuple(Fraction(0) for _ in basis)]
    else:
        gen = convex.polyhedron_generators([], rest, len(basis))
        if gen is None:
            return None
        verts_t, rays_t, lin_t = gen

    def back(tvec, base):
        out = list(base)
        for c, bv in zip(tvec, basis):
            for i in range(r):
                out[i] += c * bv[i]
        return tuple(out)

    verts = [back(t, point) for t in verts_t]
    rays = [back(t, _zv(r)) for t in list(rays_t) + list(lin_t) +
            [tuple(-x for x in l) for l in lin_t]]
    return Polyhedron(r, verts, rays, a.sedentarity)


def _tight_face(p: Polyhedron, sub: Polyhedron) -> Polyhedron:
    """The smallest face of p containing the subset sub of p."""
    eqs, ineqs = p.hrep
    tight = []
    for a, b in ineqs:
        a = vec(a)
        if all(vdot(a, v) == b for v in sub.vertices) and \
                all(vdot(a, vec(r)) == 0 for r in sub.rays):
            tight.append((a, b))
    verts = [v for v in p.vertices
             if all(vdot(a, v) == b for a, b in tight)]
    rays = [r for r in p.rays
            if all(vdot(a, vec(r)) == 0 for a, _ in tight)]
    return Polyhedron(p.ambient_dim, verts, rays, p.sedentarity)


class PolyhedralComplex:
    """A face-closed weighted rational polyhedral complex in T^r."""

    def __init__(self, ambient_dim, tropical_coords, cells, covers, weights,
                 orientations, signs):
        self.ambient_dim = ambient_dim
        self.tropical_coords = frozenset(tropical_coords)
        self.cells = tuple(cells)
        self.covers = tuple(sorted(covers))
        self.weights = dict(weights)
        self.orientations = dict(orientations)
        self.signs = dict(signs)
        self._index = {c.key: i for i, c in enumerate(self.cells)}
        self._cofaces_cache = None

    # -- basic queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return max((c.dim for c in self.cells), default=0)

    def facet_indices(self) -> list[int]:
        has_cofacet = {t for t, _ in self.covers}
        return [i for i in range(len(self.cells)) if i not in has_cofacet]

    def is_pure(self) -> bool:
        n = self.n
        return all(self.cells[i].dim == n for i in self.facet_indices())

    def index_of(self, cell: Polyhedron) -> int:
        return self._index[cell.key]

    def cells_of_dim(self, d: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == d]

    def covers_of(self, i: int) -> list[int]:
        return [s for t, s in self.covers if t == i]

    def covered_by(self, i: int) -> list[int]:
        return [t for t, s in self.covers if s == i]

    def cofaces(self, i: int) -> set[int]:
        """All j with cells[i] a face of cells[j], including i."""
        if self._cofaces_cache is None:
            up = {k: set() for k in range(len(self.cells))}
            for t, s in self.covers:
                up[t].add(s)
            letters = sorted(range(len(self.cells)),
                             key=lambda k: -self.cells[k].dim)
            for k in letters:
                extra = set()
                for j in up[k]:
                    extra |= up[j]
                up[k] |= extra
            self._cofaces_cache = {k: v | {k} for k, v in up.items()}
        return self._cofaces_cache[i]

    def weight(self, i: int) -> int:
        return self.weights[i]

    # -- equality as weighted complexes ---------------------------------------

    def same_cells(self, other: "PolyhedralComplex") -> bool:
        return (self.ambient_dim == other.ambient_dim
                and {c.key for c in self.cells} == {c.key for c in other.cells})

    def same_weighted(self, other: "PolyhedralComplex") -> bool:
        if not self.same_cells(other):
            return False
        for i in self.facet_indices():
            j = other._index[self.cells[i].key]
            if self.weights.get(i, 1) != other.weights.get(j, 1):
                return False
        return True

    def __repr__(self):
        counts = {}
        for c in self.cells:
            counts[c.dim] = counts.get(c.dim, 0) + 1
        desc = ", ".join(f"{v}x dim {k}" for k, v in sorted(counts.items()))
        return f"PolyhedralComplex(T^{self.ambient_dim}: {desc})"


def _escape_vector(sigma: Polyhedron, esc: frozenset[int]):
    """Primitive vector of L(sigma) supported on the escaping coordinates.

    Exists and is unique up to sign for a covering sedentarity jump;
    normalized to have negative entries (the direction of escape).
    """
    inter = sigma.tangent.intersection(
        Subspace(sigma.ambient_dim,
                 [unit(sigma.ambient_dim, i) for i in esc]))
    if inter.dim != 1:
        raise ComplexAxiomError("sedentarity jump is not corank one")
    w = primitive(inter.basis[0])
    if any(x > 0 for x in w):
        w = tuple(-x for x in w)
    return vec(w)


def _incidence_sign(tau: Polyhedron, sigma: Polyhedron, nu_cache=None) -> int:
    """Orientation sign of a covering pair using the outward convention."""
    o_sigma = _orientation(sigma)
    o_tau = _orientation(tau)
    if tau.sedentarity == sigma.sedentarity:
        nu = lattice_quotient(sigma, tau, nu_cache)
        outward = vscale(-1, nu)
        cols = [outward] + [vec(b) for b in o_tau]
    else:
        esc = tau.sedentarity - sigma.sedentarity
        w = _escape_vector(sigma, esc)
        pre = []
        proj_basis = [tuple(Fraction(0) if i in esc else x
                            for i, x in enumerate(bv))
                      for bv in sigma.tangent.basis]
        for b in o_tau:
            sol = solve(proj_basis, vec(b))
            if sol is None:
                raise ComplexAxiomError("stratum face not dominated by cell")
            x = zero_vec(sigma.ambient_dim)
            for c, bv in zip(sol, sigma.tangent.basis):
                x = vadd(x, vscale(c, bv))
            pre.append(x)
        cols = [w] + pre
    rows = []
    for b in o_sigma:
        sol = solve(cols, vec(b))
        if sol is None:
            raise ComplexAxiomError("orientation bases are inconsistent")
        rows.append(sol)
    d = det(tuple(rows))
    if d == 0:
        raise ComplexAxiomError("degenerate incidence")
    return 1 if d > 0 else -1


_ORIENT_CACHE: dict = {}


def _orientation(p: Polyhedron):
    """Deterministic ordered basis of L(p): the HNF lattice basis, with
    one-dimensional cells oriented along their geometry."""
    got = _ORIENT_CACHE.get(p.key)
    if got is not None:
        return got
    basis = [vec(b) for b in p.lattice.basis]
    if p.dim == 1:
        direction = None
        if p.rays:
            direction = vec(p.rays[0])
        elif len(p.vertices) >= 2:
            vs = sorted(p.vertices)
            direction = vsub(vs[-1], vs[0])
        if direction is not None and vdot(basis[0], direction) < 0:
            basis[0] = vscale(-1, basis[0])
    out = tuple(basis)
    _ORIENT_CACHE[p.key] = out
    return out


def lattice_quotient(sigma: Polyhedron, tau: Polyhedron, cache=None) -> Vec:
    """Primitive normal of tau in sigma pointing into sigma."""
    from .linalg import lattice_quotient_primitive
    key = (tau.key, sigma.key)
    if cache is not None and key in cache:
        return cache[key]
    witness = vsub(sigma.relint_point(), tau.relint_point())
    nu = vec(lattice_quotient_primitive(sigma.lattice, tau.lattice, witness))
    if cache is not None:
        cache[key] = nu
    return nu


def build_complex(maximal_cells, tropical_coords=(), validate=True
                  ) -> PolyhedralComplex:
    """Face-close a list of (Polyhedron, weight) pairs into a complex.

    `tropical_coords` lists the coordinates compactified to -infinity;
    faces at infinity are generated along them.  Raises ComplexAxiomError
    when cells overlap badly or one listed maximal cell lies in another.
    """
    entries = []
    for item in maximal_cells:
        if isinstance(item, Polyhedron):
            entries.append((item, 1))
        else:
            entries.append((item[0], int(item[1])))
    if not entries:
        raise ComplexAxiomError("a complex needs at least one maximal cell")
    ambient = entries[0][0].ambient_dim
    tropical = frozenset(tropical_coords)
    for c, _ in entries:
        if c.ambient_dim != ambient:
            raise ComplexAxiomError("mixed ambient dimensions")
    # Degenerate input: one maximal cell inside another.
    for (a, _), (b, _) in itertools.combinations(entries, 2):
        if a.key == b.key:
            raise ComplexAxiomError("duplicate maximal cell")
        if a.contains_polyhedron(b) or b.contains_polyhedron(a):
            raise ComplexAxiomError(
                f"maximal cell {b} is contained in {a}")

    cells: dict = {}
    dominated: set = set()  # keys that are proper faces of another cell
    work = []
    for c, _ in entries:
        if c.key not in cells:
            cells[c.key] = c
            work.append(c)
    while work:
        c = work.pop()
        new = []
        for f in faces(c):
            # Same-sedentarity proper faces are dominated within their group.
            if f.key != c.key:
                dominated.add(f.key)
            if f.key not in cells:
                new.append(f)
        if tropical:
            # Stratum pieces live in a deeper group where they may well be
            # maximal; only their own face pass marks their descendants.
            allowed = sorted(set(tropical) - c.sedentarity)
            for k in range(1, len(allowed) + 1):
                for combo in itertools.combinations(allowed, k):
                    piece = stratum_piece(c, frozenset(combo))
                    if piece is not None and piece.key not in cells:
                        new.append(piece)
        for f in new:
            if f.key not in cells:
                cells[f.key] = f
                work.append(f)

    ordered = sorted(cells.values(), key=Polyhedron.sort_key)
    index = {c.key: i for i, c in enumerate(ordered)}

    if validate:
        _validate_intersections(ordered, dominated)

    # Covering relations: containment with dimension difference one.
    piece_cache: dict = {}

    def dominated(tau, sigma):
        if tau.sedentarity == sigma.sedentarity:
            return sigma.contains_polyhedron(tau)
        if not (tau.sedentarity > sigma.sedentarity):
            return False
        extra = tau.sedentarity - sigma.sedentarity
        pkey = (sigma.key, tuple(sorted(extra)))
        if pkey not in piece_cache:
            piece_cache[pkey] = stratum_piece(sigma, extra)
        piece = piece_cache[pkey]
        return piece is not None and piece.contains_polyhedron(tau)

    covers = []
    by_dim: dict = {}
    for i, c in enumerate(ordered):
        by_dim.setdefault(c.dim, []).append(i)
    for d in sorted(by_dim):
        for i in by_dim.get(d, []):
            for j in by_dim.get(d + 1, []):
                if dominated(ordered[i], ordered[j]):
                    covers.append((i, j))

    weights = {}
    for c, w in entries:
        weights[index[c.key]] = w

    orientations = {i: _orientation(c) for i, c in enumerate(ordered)}
    nu_cache: dict = {}
    signs = {(t, s): _incidence_sign(ordered[t], ordered[s], nu_cache)
             for t, s in covers}

    return PolyhedralComplex(ambient, tropical, ordered, covers, weights,
                             orientations, signs)


def _validate_intersections(ordered, dominated):
    """Pairwise intersections of stratum-maximal cells must be common faces."""
    by_sed: dict = {}
    for c in ordered:
        if c.key in dominated:
            continue
        by_sed.setdefault(c.sedentarity, []).append(c)
    for sed, group in by_sed.items():
        maximal = group
        for a, b in itertools.combinations(maximal, 2):
            inter = intersect(a, b)
            if inter is None:
                continue
            fa = _tight_face(a, inter)
            fb = _tight_face(b, inter)
            if fa.key != inter.key or fb.key != inter.key:
                raise ComplexAxiomError(
                    f"intersection of {a} and {b} is not a common face")


# -- balancing ----------------------------------------------------------------


def is_balanced(c: PolyhedralComplex):
    """Check the balancing condition at every codimension-one face.

    Returns (ok, failures) where failures is a list of (cell index, defect
    vector); the defect is the weighted sum of primitive normals reduced
    against the face lattice.
    """
    if not c.is_pure():
        raise PurityError("balancing needs a pure-dimensional complex")
    n = c.n
    failures = []
    nu_cache: dict = {}
    for t in c.cells_of_dim(n - 1):
        tau = c.cells[t]
        total = zero_vec(c.ambient_dim)
        for s in c.covers_of(t):
            sigma = c.cells[s]
            if sigma.dim != n or sigma.sedentarity != tau.sedentarity:
                continue
            nu = lattice_quotient(sigma, tau, nu_cache)
            total = vadd(total, vscale(c.weights.get(s, 1), nu))
        if not tau.lattice.contains(total):
            failures.append((t, tau.lattice.reduce(total)))
    return (not failures), failures


def fundamental_cycle_boundary(c: PolyhedralComplex):
    """Boundary of the weighted fundamental chain in top wedge coordinates.

    Returns a map {codim-1 cell index: wedge-coordinate vector}; the map is
    identically zero exactly when the complex is balanced (an independent
    code path from is_balanced).
    """
    if not c.is_pure():
        raise PurityError("the fundamental cycle needs a pure complex")
    n = c.n
    out = {}
    for t in c.cells_of_dim(n - 1):
        tau = c.cells[t]
        acc = None
        for s in c.covers_of(t):
            sigma = c.cells[s]
            if sigma.dim != n:
                continue
            omega = list(c.orientations[s])
            if sigma.sedentarity != tau.sedentarity:
                esc = tau.sedentarity - sigma.sedentarity
                omega = [tuple(Fraction(0) if i in esc else x
                               for i, x in enumerate(b)) for b in omega]
            w = wedge_vector(omega)
            w = vscale(c.weights.get(s, 1) * c.signs[(t, s)], w)
            acc = w if acc is None else vadd(acc, w)
        if acc is not None and not is_zero_vec(acc):
            out[t] = acc
    return out


# -- derived complexes ---------------------------------------------------------


def star(c: PolyhedralComplex, cell_index: int) -> PolyhedralComplex:
    """The star fan of a cell, translated to the origin of its stratum."""
    base = c.cells[cell_index]
    sed = sorted(base.sedentarity)
    keep = [i for i in range(c.ambient_dim) if i not in base.sedentarity]
    x = base.relint_point()
    cones = {}
    for j in c.cofaces(cell_index):
        tau = c.cells[j]
        if tau.sedentarity != base.sedentarity:
            continue
        rays = [vsub(v, x) for v in tau.vertices] + [vec(r) for r in tau.rays]
        rays = [tuple(r[i] for i in keep) for r in rays]
        rays = [r for r in rays if not is_zero_vec(vec(r))]
        cone = Polyhedron(len(keep), [zero_vec(len(keep))], rays)
        cones[cone.key] = (cone, c.weights.get(j, 1), tau.dim)
    top = max(d for _, _, d in cones.values())
    maximal = [(p, w) for p, w, d in cones.values() if d == top]
    return build_complex(maximal)


def product(c: PolyhedralComplex, extra_dim: int, tropical: bool
            ) -> PolyhedralComplex:
    """The product complex C x R^s or C x T^s."""
    r = c.ambient_dim
    new_coords = list(range(r, r + extra_dim))
    maximal = []
    for i in c.facet_indices():
        cell = c.cells[i]
        verts = [tuple(list(v) + [Fraction(0)] * extra_dim)
                 for v in cell.vertices]
        rays = [tuple(list(vec(ray)) + [Fraction(0)] * extra_dim)
                for ray in cell.rays]
        for j in new_coords:
            e = [Fraction(0)] * (r + extra_dim)
            e[j] = Fraction(1)
            rays.append(tuple(e))
            e2 = list(e)
            e2[j] = Fraction(-1)
            rays.append(tuple(e2))
        sed = cell.sedentarity
        maximal.append((Polyhedron(r + extra_dim, verts, rays, sed),
                        c.weights.get(i, 1)))
    tc = set(c.tropical_coords)
    if tropical:
        tc |= set(new_coords)
    return build_complex(maximal, tropical_coords=tc)


def restrict_to_stratum(c: PolyhedralComplex, stratum) -> PolyhedralComplex:
    """The subcomplex of cells whose interior lies in R^r_I, reindexed."""
    stratum = frozenset(stratum)
    keep = [i for i in range(c.ambient_dim) if i not in stratum]
    group = [i for i, cell in enumerate(c.cells)
             if cell.sedentarity == stratum]
    if not group:
        raise ComplexAxiomError(f"no cells of sedentarity {sorted(stratum)}")
    maximal = []
    for i in group:
        cell = c.cells[i]
        if any(j != i and c.cells[j].sedentarity == stratum
               and c.cells[j].contains_polyhedron(cell) for j in group):
            continue
        verts = [tuple(v[k] for k in keep) for v in cell.vertices]
        rays = [tuple(vec(ray)[k] for k in keep) for ray in cell.rays]
        maximal.append((Polyhedron(len(keep), verts, rays),
                        c.weights.get(i, 1)))
    # The open stratum carries no compactification of its own.
    return build_complex(maximal)


def closure_in(c: PolyhedralComplex, tropical_coords) -> PolyhedralComplex:
    """Rebuild the complex with the given coordinates compactified."""
    maximal = [(c.cells[i], c.weights.get(i, 1)) for i in c.facet_indices()]
    return build_complex(
        maximal, tropical_coords=set(c.tropical_coords) | set(tropical_coords))
