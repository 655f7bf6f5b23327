"""Exact rational and integer linear algebra.

Vectors are tuples of Fraction, matrices are tuples of row tuples.  All
canonical forms (reduced row echelon for subspaces, row Hermite for
lattices) are chosen once so that equality of spans is equality of
representations.  No floating point anywhere.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from .errors import CodimensionError, DimensionError

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def vec(entries) -> Vec:
    return tuple(Fraction(e) for e in entries)


def mat(rows) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c, a: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def vdot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def mat_identity(n: int) -> Mat:
    return tuple(unit_vec(n, i) for i in range(n))


def mat_transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = mat_transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector.

    The sign is kept: the result is a positive multiple of the input.
    Zero maps to zero.
    """
    v = vec(v)
    den = math.lcm(*(f.denominator for f in v)) if v else 1
    ints = [int(f * den) for f in v]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def det(m: Mat) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise DimensionError("determinant of a non-square matrix")
    rows = [list(r) for r in m]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        pv = rows[col][col]
        result *= pv
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                factor = rows[r][col] / pv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return result * sign


def rref(rows) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form.

    Returns (nonzero rows with leading 1s, pivot column indices).
    """
    work = [list(vec(r)) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][col]
        work[rank] = [x / pv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return [tuple(r) for r in work[:rank]], pivots


def solve(a_cols: list[Vec], target: Vec):
    """Solve sum_i x_i * a_cols[i] = target exactly; None if inconsistent."""
    if not a_cols:
        return () if is_zero_vec(target) else None
    # Row-reduce the augmented system [A | target] with a_cols as columns.
    rows = [[a_cols[j][i] for j in range(len(a_cols))] + [target[i]]
            for i in range(len(target))]
    red, pivots = rref(rows)
    x = [Fraction(0)] * len(a_cols)
    for row, pcol in zip(red, pivots):
        if pcol == len(a_cols):
            return None
        x[pcol] = row[-1]
    # Verify (free variables set to zero must still solve the system).
    acc = zero_vec(len(target))
    for xi, col in zip(x, a_cols):
        acc = vadd(acc, vscale(xi, col))
    if acc != vec(target):
        return None
    return tuple(x)


def kernel_basis(m: Mat) -> list[Vec]:
    """Canonical basis of {x : m @ x = 0}, in reduced echelon form."""
    nrows, ncols = mat_shape(m)
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    basis_rows, _ = rref(basis)
    return basis_rows


class Subspace:
    """A linear subspace of Q^n with a canonical reduced-echelon basis.

    Two subspaces are equal iff their canonical bases coincide.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, spanning_vectors=()):
        if ambient_dim < 0:
            raise DimensionError("negative ambient dimension")
        rows = [vec(v) for v in spanning_vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionError(
                    f"vector of length {len(r)} in ambient dimension {ambient_dim}")
        self.ambient_dim = ambient_dim
        self.basis = tuple(rref(rows)[0])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def coords(self, v):
        """Coordinates of v in the canonical basis, or None if v is outside.

        With the basis in reduced echelon form the coordinates can be read
        off the pivot columns; the result is verified by reassembly.
        """
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise DimensionError("coords: ambient mismatch")
        pivots = [next(i for i, x in enumerate(row) if x != 0) for row in self.basis]
        coeffs = tuple(v[p] for p in pivots)
        acc = zero_vec(self.ambient_dim)
        for c, row in zip(coeffs, self.basis):
            acc = vadd(acc, vscale(c, row))
        return coeffs if acc == v else None

    def sum(self, *others: "Subspace") -> "Subspace":
        for o in others:
            if o.ambient_dim != self.ambient_dim:
                raise DimensionError("subspace sum: ambient mismatch")
        rows = list(self.basis)
        for o in others:
            rows.extend(o.basis)
        return Subspace(self.ambient_dim, rows)

    def intersection(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionError("intersection: ambient mismatch")
        # x in both spans: stack equations from the orthogonal complements.
        eqs = list(self.perp().basis) + list(other.perp().basis)
        if not eqs:
            eqs = [zero_vec(self.ambient_dim)]
        return Subspace(self.ambient_dim, kernel_basis(mat(eqs)))

    def perp(self) -> "Subspace":
        """Orthogonal complement under the standard dot product."""
        return Subspace(self.ambient_dim, kernel_basis(self.basis))

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"


def subspace_sum(spaces) -> Subspace:
    spaces = list(spaces)
    if not spaces:
        raise DimensionError("subspace_sum of an empty list")
    return spaces[0].sum(*spaces[1:])


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("subspace_equal: ambient mismatch")
    return a == b


def rank_kernel_image(m: Mat) -> tuple[int, Subspace, Subspace]:
    """Rank, kernel and column span of a rational matrix."""
    nrows, ncols = mat_shape(m)
    red, pivots = rref(m)
    kernel = Subspace(ncols, kernel_basis(m))
    image = Subspace(nrows, mat_transpose(m))
    return len(pivots), kernel, image


# ---------------------------------------------------------------------------
# Integer matrices: Hermite and Smith normal forms, lattices.


def _int_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        row = []
        for x in r:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError(f"non-integer entry {f} in integer matrix")
            row.append(int(f))
        out.append(row)
    return out


def hermite_normal_form(rows) -> list[tuple[int, ...]]:
    """Canonical row Hermite normal form of the lattice spanned by rows.

    Pivots are positive, strictly to the right as you go down, and entries
    above each pivot are reduced into [0, pivot).  Zero rows are dropped,
    so the result is a canonical basis of the row lattice.
    """
    work = _int_rows(rows)
    if not work:
        return []
    ncols = len(work[0])
    basis: list[list[int]] = []
    for v in work:
        v = v[:]
        for row in basis:
            j = next(i for i, x in enumerate(row) if x != 0)
            if v[j] == 0:
                continue
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for k in range(ncols):
                    v[k] -= q * row[k]
            else:
                g, x, y = _xgcd(a, b)
                # replace (row, v) by (x*row + y*v, (-b/g)*row + (a/g)*v)
                new_row = [x * p + y * q_ for p, q_ in zip(row, v)]
                new_v = [(-b // g) * p + (a // g) * q_ for p, q_ in zip(row, v)]
                row[:] = new_row
                v = new_v
        if any(x != 0 for x in v):
            basis.append(v)
    # Sort rows by pivot column, make pivots positive, reduce above pivots.
    basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x != 0))
    # Rows inserted out of order can break echelon shape; re-run once if so.
    pivs = [next(i for i, x in enumerate(r) if x != 0) for r in basis]
    if len(set(pivs)) != len(pivs):
        return hermite_normal_form(basis)
    for r in basis:
        j = next(i for i, x in enumerate(r) if x != 0)
        if r[j] < 0:
            r[:] = [-x for x in r]
    for i in range(len(basis) - 1, -1, -1):
        j = next(k for k, x in enumerate(basis[i]) if x != 0)
        p = basis[i][j]
        for up in range(i):
            q = basis[up][j] // p
            if q != 0:
                basis[up] = [a - q * b for a, b in zip(basis[up], basis[i])]
    return [tuple(r) for r in basis]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def smith_normal_form(m) -> tuple[Mat, Mat, Mat]:
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U @ m @ V = D, U and V unimodular, and the
    diagonal of D a divisibility chain d_1 | d_2 | ...
    """
    work = _int_rows(m)
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def row_op(i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j); ad-bc = +-1
        for t in (work, u):
            ri, rj = t[i], t[j]
            t[i] = [a * p + b * q for p, q in zip(ri, rj)]
            t[j] = [c * p + d * q for p, q in zip(ri, rj)]

    def col_op(i, j, a, b, c, d):
        for t in (work, v):
            for row in t:
                p, q = row[i], row[j]
                row[i] = a * p + b * q
                row[j] = c * p + d * q

    k = 0
    while k < min(nrows, ncols):
        # Find a nonzero pivot in the remaining block.
        pos = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if work[i][j] != 0:
                    pos = (i, j)
                    break
            if pos:
                break
        if pos is None:
            break
        i, j = pos
        if i != k:
            row_op(k, i, 0, 1, 1, 0)
        if j != k:
            col_op(k, j, 0, 1, 1, 0)
        while True:
            # Clear column k with row operations.
            done = True
            for i in range(k + 1, nrows):
                if work[i][k] != 0:
                    a, b = work[k][k], work[i][k]
                    if b % a == 0:
                        q = b // a
                        work[i] = [p - q * r for p, r in zip(work[i], work[k])]
                        u[i] = [p - q * r for p, r in zip(u[i], u[k])]
                    else:
                        g, x, y = _xgcd(a, b)
                        row_op(k, i, x, y, -(b // g), a // g)
                        done = False
            for j in range(k + 1, ncols):
                if work[k][j] != 0:
                    a, b = work[k][k], work[k][j]
                    if b % a == 0:
                        q = b // a
                        col_op(j, k, 1, -q, 0, 1)
                    else:
                        g, x, y = _xgcd(a, b)
                        col_op(k, j, x, y, -(b // g), a // g)
                        done = False
            if done and all(work[i][k] == 0 for i in range(k + 1, nrows)) \
                    and all(work[k][j] == 0 for j in range(k + 1, ncols)):
                break
        k += 1

    # Enforce the divisibility chain with the standard 2x2 block fix.
    rank = sum(1 for i in range(min(nrows, ncols)) if work[i][i] != 0)
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            a, b = work[i][i], work[i + 1][i + 1]
            if a != 0 and b % a != 0:
                row_op(i, i + 1, 1, 1, 0, 1)  # row_i += row_{i+1}
                g, x, y = _xgcd(work[i][i], work[i][i + 1])
                col_op(i, i + 1, x, y,
                       -(work[i][i + 1] // g), work[i][i] // g)
                if work[i + 1][i] != 0:
                    q = work[i + 1][i] // work[i][i]
                    row_op(i, i + 1, 1, 0, -q, 1)  # row_{i+1} -= q*row_i
                changed = True
    for i in range(rank):
        if work[i][i] < 0:
            for row in work:
                row[i] = -row[i]
            for row in v:
                row[i] = -row[i]
    U = mat(u)
    D = mat(work)
    V = mat(v)
    return U, D, V


def _mat_inverse(m: Mat) -> Mat:
    n = len(m)
    aug = [list(m[i]) + [Fraction(1 if j == i else 0) for j in range(n)]
           for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(row[n:]) for row in red)


class Lattice:
    """A full-rank-in-its-span sublattice of Z^n with a canonical HNF basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, generators=()):
        self.ambient_dim = ambient_dim
        gens = []
        for g in generators:
            g = vec(g)
            if len(g) != ambient_dim:
                raise DimensionError("lattice generator of wrong length")
            gens.append(g)
        self.basis = tuple(tuple(x) for x in hermite_normal_form(gens)) if gens else ()

    @classmethod
    def from_subspace(cls, s: Subspace) -> "Lattice":
        """The saturated lattice span(s) ∩ Z^n.

        Clears denominators, then reads the saturation off the Smith normal
        form: with U A V = D, the first rank(A) rows of V^{-1} are a basis.
        """
        if s.dim == 0:
            return cls(s.ambient_dim, ())
        den = math.lcm(*(f.denominator for row in s.basis for f in row))
        a = [[int(f * den) for f in row] for row in s.basis]
        u, d, v = smith_normal_form(a)
        rank = sum(1 for i in range(min(mat_shape(d))) if d[i][i] != 0)
        v_inv = _mat_inverse(v)
        return cls(s.ambient_dim, [v_inv[i] for i in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def span(self) -> Subspace:
        return Subspace(self.ambient_dim, self.basis)

    def contains(self, v) -> bool:
        c = self.coords(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def coords(self, v):
        """Rational coordinates of v in the HNF basis, or None."""
        v = vec(v)
        coeffs = []
        rem = list(v)
        for row in self.basis:
            j = next(i for i, x in enumerate(row) if x != 0)
            c = Fraction(rem[j], row[j])
            coeffs.append(c)
            rem = [x - c * y for x, y in zip(rem, row)]
        if any(x != 0 for x in rem):
            return None
        return tuple(coeffs)

    def reduce(self, v) -> Vec:
        """Canonical representative of v modulo this lattice (v in span+Z^n)."""
        rem = list(vec(v))
        for row in self.basis:
            j = next(i for i, x in enumerate(row) if x != 0)
            q = rem[j] // row[j]  # Fraction floordiv gives the integer floor
            rem = [x - q * y for x, y in zip(rem, row)]
        return tuple(rem)

    def __eq__(self, other):
        return (isinstance(other, Lattice)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Lattice(rank {self.rank} in Z^{self.ambient_dim})"


def lattice_quotient_primitive(z_sigma: Lattice, z_tau: Lattice, interior_witness) -> Vec:
    """Primitive generator of Z(sigma)/Z(tau) pointing toward the witness.

    Requires rank(Z_sigma) = rank(Z_tau) + 1 and Z_tau contained in Z_sigma.
    The result is reduced against the Hermite basis of Z_tau, so it is a
    canonical representative of the generating class.
    """
    if z_sigma.ambient_dim != z_tau.ambient_dim:
        raise DimensionError("lattice quotient: ambient mismatch")
    if z_sigma.rank != z_tau.rank + 1:
        raise CodimensionError(
            f"rank {z_sigma.rank} over rank {z_tau.rank} is not corank one")
    for row in z_tau.basis:
        if not z_sigma.contains(row):
            raise CodimensionError("Z_tau is not a sublattice of Z_sigma")
    k = z_tau.rank
    if k == 0:
        nu = z_sigma.basis[0]
    else:
        # Coordinates of Z_tau in the basis of Z_sigma give an integer
        # k x (k+1) matrix; the free direction of its Smith form lifts to
        # the quotient generator.
        m = [ [int(x) for x in z_sigma.coords(row)] for row in z_tau.basis]
        u, d, v = smith_normal_form(m)
        v_inv = _mat_inverse(v)
        gen_coords = v_inv[k]
        nu = zero_vec(z_sigma.ambient_dim)
        for c, b in zip(gen_coords, z_sigma.basis):
            nu = vadd(nu, vscale(c, b))
    # Orient toward the witness: the witness class in span(sigma)/span(tau)
    # must be a positive multiple of nu's class.
    w = vec(interior_witness)
    cols = [nu] + [vec(b) for b in z_tau.basis]
    sol = solve(cols, w)
    if sol is None:
        raise CodimensionError("witness does not lie in span(Z_sigma)")
    if sol[0] == 0:
        raise CodimensionError("witness lies in span(Z_tau); cannot orient")
    if sol[0] < 0:
        nu = vscale(-1, nu)
    return z_tau.reduce(nu)


# ---------------------------------------------------------------------------
# Wedge powers with the shared lexicographic index convention.


@lru_cache(maxsize=None)
def p_subsets(m: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All p-subsets of range(m) in lexicographic order."""
    return tuple(itertools.combinations(range(m), p))


@lru_cache(maxsize=None)
def wedge_index(m: int, p: int) -> dict:
    return {k: i for i, k in enumerate(p_subsets(m, p))}


def sort_with_sign(indices) -> tuple[tuple[int, ...], int]:
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    A repeated index gives sign 0.
    """
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


def wedge_vector(vectors) -> Vec:
    """Coordinates of v_1 ∧ ... ∧ v_p in the lexicographic wedge basis."""
    vectors = [vec(v) for v in vectors]
    p = len(vectors)
    if p == 0:
        return (Fraction(1),)
    m = len(vectors[0])
    out = []
    for k in p_subsets(m, p):
        minor = tuple(tuple(v[i] for i in k) for v in vectors)
        out.append(det(minor))
    return tuple(out)


def wedge_power(s: Subspace, p: int) -> Subspace:
    """The subspace ⋀^p S inside ⋀^p Q^m, in wedge coordinates."""
    if p < 0:
        raise DimensionError("negative wedge degree")
    m = s.ambient_dim
    ambient = math.comb(m, p)
    if p > s.dim:
        return Subspace(ambient, ())
    gens = [wedge_vector(c) for c in itertools.combinations(s.basis, p)]
    return Subspace(ambient, gens)


def wedge_matrix(linear_map_rows: Mat, m_source: int, p: int) -> Mat:
    """Matrix of ⋀^p(f) in lexicographic wedge bases.

    `linear_map_rows` is the matrix of f: Q^{m_source} -> Q^{m_target} acting
    on column vectors (rows indexed by target coordinates).
    """
    m_target = len(linear_map_rows)
    rows_idx = p_subsets(m_target, p)
    cols_idx = p_subsets(m_source, p)
    out = []
    for kr in rows_idx:
        row = []
        for kc in cols_idx:
            minor = tuple(tuple(linear_map_rows[i][j] for j in kc) for i in kr)
            row.append(det(minor))
        out.append(tuple(row))
    return tuple(out)
