"""Exact rational linear algebra: sparse matrices, kernel, image, subquotients.

Scalars are ``fractions.Fraction`` (always in lowest terms, positive
denominator), so every dimension computed downstream is exact.  Matrices are
sparse maps (row, col) -> Fraction; subspaces are stored with a canonical
reduced-echelon column basis so that equality of subspaces is plain equality
of bases.
"""

from fractions import Fraction

from .errors import NotContained, InvariantViolation

ZERO = Fraction(0)
ONE = Fraction(1)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class Matrix:
    """Immutable sparse matrix over the rationals.

    Entries are stored in a dict keyed by (row, col); zeros are dropped.
    """

    __slots__ = ("rows", "cols", "entries", "_by_col")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise InvariantViolation(
                    "matrix entry index out of range: (%d, %d) in %dx%d" % (r, c, rows, cols)
                )
            v = _as_fraction(v)
            if v != 0:
                clean[(r, c)] = v
        self.entries = clean
        self._by_col = None

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows_data):
        """Build from a dense list of row lists."""
        nr = len(rows_data)
        nc = len(rows_data[0]) if nr else 0
        entries = {}
        for r, row in enumerate(rows_data):
            if len(row) != nc:
                raise InvariantViolation("ragged rows in Matrix.from_rows")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = _as_fraction(v)
        return cls(nr, nc, entries)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from a list of sparse columns ({row: value} dicts)."""
        entries = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    entries[(r, c)] = _as_fraction(v)
        return cls(rows, len(columns), entries)

    def __getitem__(self, rc):
        return self.entries.get(rc, ZERO)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def is_zero(self):
        return not self.entries

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvariantViolation("matrix shape mismatch in addition")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Matrix(self.rows, self.cols, out)

    def __neg__(self):
        return Matrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        other = _as_fraction(other)
        return Matrix(self.rows, self.cols, {k: v * other for k, v in self.entries.items()})

    __rmul__ = __mul__

    def matmul(self, other):
        if self.cols != other.rows:
            raise InvariantViolation("matrix shape mismatch in product")
        by_row = {}
        for (r, c), v in self.entries.items():
            by_row.setdefault(r, {})[c] = v
        other_by_row = {}
        for (r, c), v in other.entries.items():
            other_by_row.setdefault(r, {})[c] = v
        out = {}
        for r, row in by_row.items():
            acc = {}
            for k, v in row.items():
                for c, w in other_by_row.get(k, {}).items():
                    s = acc.get(c, ZERO) + v * w
                    if s:
                        acc[c] = s
                    else:
                        acc.pop(c, None)
            for c, v in acc.items():
                out[(r, c)] = v
        return Matrix(self.rows, other.cols, out)

    def transpose(self):
        return Matrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def apply(self, vec):
        """Apply to a sparse column vector {index: Fraction}."""
        if self._by_col is None:
            by_col = {}
            for (r, c), v in self.entries.items():
                by_col.setdefault(c, []).append((r, v))
            self._by_col = by_col
        out = {}
        for c, x in vec.items():
            if not x:
                continue
            for r, v in self._by_col.get(c, ()):
                s = out.get(r, ZERO) + v * x
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def rank(self):
        rows = _matrix_rows(self)
        reduced, _ = _row_reduce(rows)
        return len(reduced)

    def __repr__(self):
        return "Matrix(%dx%d, %d nonzero)" % (self.rows, self.cols, len(self.entries))


def _matrix_rows(m):
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    return [row for row in rows if row]


def _row_reduce(rows):
    """Reduced row echelon form of sparse rows ({col: Fraction} dicts).

    Returns (reduced_rows, pivot_cols), rows sorted by pivot column, each
    normalized to a leading 1 and fully reduced against the others.  Rows are
    bucketed by their current leading column, so each pivot step touches only
    the rows that can still collide with it; pivot choice is deterministic
    (smallest column, then sparsest candidate).
    """
    import heapq

    buckets = {}
    heap = []
    for r in rows:
        r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        lead = min(r)
        if lead not in buckets:
            buckets[lead] = []
            heapq.heappush(heap, lead)
        buckets[lead].append(r)
    reduced = []
    while heap:
        col = heapq.heappop(heap)
        here = buckets.pop(col, None)
        if not here:
            continue
        best = min(range(len(here)), key=lambda i: (len(here[i]), i))
        piv = here.pop(best)
        inv = ONE / piv[col]
        piv = {c: v * inv for c, v in piv.items()}
        for r in here:
            f = r[col]
            for c, v in piv.items():
                s = r.get(c, ZERO) - f * v
                if s:
                    r[c] = s
                else:
                    r.pop(c, None)
            if r:
                lead = min(r)
                if lead not in buckets:
                    buckets[lead] = []
                    heapq.heappush(heap, lead)
                buckets[lead].append(r)
        for _, r in reduced:
            f = r.get(col)
            if f:
                for c, v in piv.items():
                    s = r.get(c, ZERO) - f * v
                    if s:
                        r[c] = s
                    else:
                        r.pop(c, None)
        reduced.append((col, piv))
    reduced.sort(key=lambda item: item[0])
    return [r for _, r in reduced], [c for c, _ in reduced]


class Subspace:
    """A subspace of Q^n with a canonical reduced-echelon column basis.

    Column i has a pivot row containing 1; every other basis column vanishes
    on that row, and columns are ordered by pivot row.  Two Subspace objects
    are equal iff they are the same subspace.
    """

    __slots__ = ("ambient_dim", "basis", "pivot_rows")

    def __init__(self, ambient_dim, columns):
        self.ambient_dim = ambient_dim
        for col in columns:
            for r in col:
                if not 0 <= r < ambient_dim:
                    raise InvariantViolation("subspace basis index out of range")
        reduced, pivots = _row_reduce(columns)
        self.basis = tuple(
            tuple(sorted(col.items())) for col in reduced
        )
        self.pivot_rows = tuple(pivots)

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, [{i: ONE} for i in range(ambient_dim)])

    @property
    def dim(self):
        return len(self.basis)

    def basis_columns(self):
        return [dict(col) for col in self.basis]

    def basis_matrix(self):
        return Matrix.from_columns(self.ambient_dim, self.basis_columns())

    def coords(self, vec):
        """Coordinates of a vector in the canonical basis, or None.

        In reduced echelon form the coordinate along basis column i is the
        vector's entry at pivot row i; membership is checked by
        reconstruction.
        """
        coeffs = [vec.get(p, ZERO) for p in self.pivot_rows]
        recon = {}
        for x, col in zip(coeffs, self.basis):
            if not x:
                continue
            for r, v in col:
                s = recon.get(r, ZERO) + x * v
                if s:
                    recon[r] = s
                else:
                    recon.pop(r, None)
        target = {r: v for r, v in vec.items() if v}
        if recon != target:
            return None
        return coeffs

    def contains_vector(self, vec):
        return self.coords(vec) is not None

    def contains(self, other):
        if other.ambient_dim != self.ambient_dim:
            return False
        return all(self.contains_vector(dict(col)) for col in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim %d in Q^%d)" % (self.dim, self.ambient_dim)


def kernel(m):
    """Canonical echelon basis of {v : Mv = 0}; dim = cols - rank."""
    reduced, pivots = _row_reduce(_matrix_rows(m))
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    cols = []
    for f in free_cols:
        col = {f: ONE}
        for row, p in zip(reduced, pivots):
            v = row.get(f)
            if v:
                col[p] = -v
        cols.append(col)
    return Subspace(m.cols, cols)


def image(m):
    """Canonical basis of the column space of M."""
    cols_as_rows = [dict() for _ in range(m.cols)]
    for (r, c), v in m.entries.items():
        cols_as_rows[c][r] = v
    return Subspace(m.rows, cols_as_rows)


def span(ambient_dim, vectors):
    """Subspace spanned by sparse vectors."""
    return Subspace(ambient_dim, [dict(v) for v in vectors])


def sum_subspaces(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise InvariantViolation("subspace sum in different ambient spaces")
    return Subspace(a.ambient_dim, a.basis_columns() + b.basis_columns())


def solve(m, rhs):
    """A particular solution x of Mx = rhs (sparse dicts), or None."""
    aug_col = m.cols
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    for r, v in rhs.items():
        if v:
            rows[r][aug_col] = v
    reduced, pivots = _row_reduce([r for r in rows if r])
    x = {}
    for row, p in zip(reduced, pivots):
        if p == aug_col:
            return None
        v = row.get(aug_col)
        if v:
            x[p] = v
    return x


def subquotient(z, b):
    """Quotient data for Z/B with B a subspace of Z.

    Returns (dim, projector, section): projector * section = identity on the
    quotient, projector annihilates B, and section's columns lie in Z.
    Raises NotContained if B is not inside Z.
    """
    if z.ambient_dim != b.ambient_dim:
        raise NotContained("B and Z live in different ambient spaces")
    n = z.ambient_dim
    # Coordinates of B inside Z; fails if B is not contained in Z.
    b_in_z = []
    for col in b.basis_columns():
        coords = z.coords(col)
        if coords is None:
            raise NotContained("subquotient: B is not contained in Z")
        b_in_z.append({i: v for i, v in enumerate(coords) if v})
    bz = Subspace(z.dim, b_in_z)
    if bz.dim != b.dim:
        raise InvariantViolation("subquotient: B coordinates lost rank")
    pb = set(bz.pivot_rows)
    nonpiv = [i for i in range(z.dim) if i not in pb]
    dim = len(nonpiv)

    # Section: lift quotient coordinate j to the NP[j]-th canonical Z column.
    z_cols = z.basis_columns()
    section = Matrix.from_columns(n, [z_cols[i] for i in nonpiv])

    # Projector = select-nonpivot . (I - Bz . select-Bz-pivots) . select-Z-pivots
    proj_z = Matrix(z.dim, n, {(i, p): ONE for i, p in enumerate(z.pivot_rows)})
    if bz.dim:
        bz_mat = Matrix.from_columns(z.dim, bz.basis_columns())
        proj_pb = Matrix(bz.dim, z.dim, {(t, p): ONE for t, p in enumerate(bz.pivot_rows)})
        reducer = Matrix.identity(z.dim) - bz_mat * proj_pb
    else:
        reducer = Matrix.identity(z.dim)
    sel_np = Matrix(dim, z.dim, {(j, i): ONE for j, i in enumerate(nonpiv)})
    projector = sel_np * reducer * proj_z

    if projector * section != Matrix.identity(dim):
        raise InvariantViolation("subquotient: projector*section is not the identity")
    return dim, projector, section
