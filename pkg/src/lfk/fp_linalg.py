"""Exact linear algebra over the prime field F_p.

Everything is tiny (ambient dimension is a handful), so matrices are lists
of tuples and elimination is the schoolbook algorithm.  The canonical form
of a subspace is its reduced row echelon basis with pivots 1, which makes
subspace equality a plain data comparison.
"""

from .errors import MalformedInputError


class FpVector:
    """A coordinate vector over F_p, stored with canonical residues in [0, p)."""

    __slots__ = ("p", "coords")

    def __init__(self, p, coords):
        self.p = p
        self.coords = tuple(c % p for c in coords)

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, FpVector)
            and self.p == other.p
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self):
        return "FpVector(p=%d, %r)" % (self.p, list(self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def add(self, other):
        _check_compatible(self, other)
        return FpVector(self.p, [a + b for a, b in zip(self.coords, other.coords)])

    def scale(self, s):
        return FpVector(self.p, [s * a for a in self.coords])


class FpSubspace:
    """A subspace of F_p^n held as a reduced-row-echelon basis matrix.

    Rows are nonzero, pivots are 1, pivot columns strictly increase and are
    cleared above and below.  Two FpSubspace values are equal iff they are
    the same subspace.
    """

    __slots__ = ("p", "ambient_dim", "basis")

    def __init__(self, p, ambient_dim, basis):
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)  # tuple of coordinate tuples, already reduced

    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, FpSubspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self):
        return "FpSubspace(p=%d, dim %d of %d, basis=%r)" % (
            self.p,
            self.dim(),
            self.ambient_dim,
            [list(r) for r in self.basis],
        )

    def vectors(self):
        """Basis rows as FpVectors."""
        return [FpVector(self.p, row) for row in self.basis]


def _check_compatible(a, b):
    if a.p != b.p or len(a.coords) != len(b.coords):
        raise MalformedInputError(
            "incompatible vectors: p=%s/%s, len=%s/%s"
            % (a.p, b.p, len(a.coords), len(b.coords))
        )


def _row_reduce(rows, p):
    """In-place Gauss-Jordan over F_p on a list of lists; returns pivot cols."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][col] % p != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [(inv * x) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] % p != 0:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def rref(vectors, p=None, ambient_dim=None):
    """Row space of the given FpVectors in canonical reduced echelon form.

    `p` and `ambient_dim` are only needed when `vectors` is empty.
    """
    vectors = list(vectors)
    if not vectors:
        if p is None or ambient_dim is None:
            raise MalformedInputError("empty row list needs explicit p and ambient_dim")
        return FpSubspace(p, ambient_dim, ())
    p0 = vectors[0].p
    n = len(vectors[0])
    for v in vectors:
        if v.p != p0 or len(v) != n:
            raise MalformedInputError("mixed moduli or lengths in rref input")
    if p is not None and p != p0:
        raise MalformedInputError("explicit p disagrees with row modulus")
    if ambient_dim is not None and ambient_dim != n:
        raise MalformedInputError("explicit ambient_dim disagrees with row length")
    rows, _ = _row_reduce([list(v.coords) for v in vectors], p0)
    return FpSubspace(p0, n, tuple(tuple(r) for r in rows))


def member(space, v):
    """True iff v lies in the row space of `space`."""
    if space.p != v.p or space.ambient_dim != len(v):
        raise MalformedInputError("vector/subspace dimension or modulus mismatch")
    p = space.p
    residual = list(v.coords)
    for row in space.basis:
        lead = next(i for i, x in enumerate(row) if x != 0)
        f = residual[lead]
        if f:
            residual = [(a - f * b) % p for a, b in zip(residual, row)]
    return all(x == 0 for x in residual)


def solve(columns, target):
    """Solve sum_j x_j * columns[j] == target over F_p.

    Returns one solution as a tuple of residues, or None when the target is
    outside the column span.  Elimination runs on the augmented matrix, so a
    rank-deficient column set is fine (one preimage of possibly many comes
    back).
    """
    if not columns:
        return () if target.is_zero() else None
    p = target.p
    n = len(target)
    for col in columns:
        _check_compatible(col, target)
    m = len(columns)
    # rows of [A | b] where A's j-th column is columns[j]
    rows = [[columns[j].coords[i] for j in range(m)] + [target.coords[i]] for i in range(n)]
    reduced, _ = _row_reduce(rows, p)
    x = [0] * m
    for row in reduced:
        lead = next(i for i, v in enumerate(row) if v != 0)
        if lead == m:
            return None  # row (0 ... 0 | nonzero): inconsistent
        x[lead] = row[m]
    return tuple(x)


def add_spaces(a, b):
    """Sum a + b as a subspace."""
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise MalformedInputError("subspace sum: modulus or ambient mismatch")
    return rref(a.vectors() + b.vectors(), p=a.p, ambient_dim=a.ambient_dim)


def intersect(a, b):
    """Intersection a ∩ b, by the kernel-of-stacked-bases method (Zassenhaus)."""
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise MalformedInputError("subspace intersection: modulus or ambient mismatch")
    p, n = a.p, a.ambient_dim
    if a.dim() == 0 or b.dim() == 0:
        return FpSubspace(p, n, ())
    # Zassenhaus: rows (u | u) for u in basis(a), (w | 0) for w in basis(b);
    # after elimination, rows with zero left half carry the intersection on
    # the right half.
    rows = [list(u) + list(u) for u in a.basis] + [list(w) + [0] * n for w in b.basis]
    reduced, _ = _row_reduce(rows, p)
    inter = [tuple(row[n:]) for row in reduced if all(x == 0 for x in row[:n])]
    return rref([FpVector(p, r) for r in inter], p=p, ambient_dim=n) if inter else FpSubspace(p, n, ())


def full_space(p, n):
    return FpSubspace(p, n, tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n)))


def left_kernel(pairing_table, p, restrict_to):
    """{v in restrict_to : v · pairing_table = 0}.

    pairing_table[r][c] is the pairing of the r-th ambient basis vector
    against the c-th column; `restrict_to` supplies the ambient dimension.
    """
    n = restrict_to.ambient_dim
    if len(pairing_table) != n:
        raise MalformedInputError(
            "pairing table has %d rows, ambient dimension is %d" % (len(pairing_table), n)
        )
    ncols = len(pairing_table[0]) if n else 0
    for row in pairing_table:
        if len(row) != ncols:
            raise MalformedInputError("ragged pairing table")
    if restrict_to.p != p:
        raise MalformedInputError("restrict_to modulus differs from table modulus")
    if restrict_to.dim() == 0:
        return restrict_to
    # Solve over the coordinates of restrict_to's basis: kernel of the
    # dim(restrict_to) x ncols matrix B·T, then map back to ambient rows.
    bt = []
    for brow in restrict_to.basis:
        bt.append(
            [sum(brow[r] * pairing_table[r][c] for r in range(n)) % p for c in range(ncols)]
        )
    coeff_kernel = _kernel_basis(bt, p)
    ambient_rows = []
    for coeffs in coeff_kernel:
        vec = [0] * n
        for cf, brow in zip(coeffs, restrict_to.basis):
            if cf:
                vec = [(x + cf * y) % p for x, y in zip(vec, brow)]
        ambient_rows.append(FpVector(p, vec))
    if not ambient_rows:
        return FpSubspace(p, n, ())
    return rref(ambient_rows, p=p, ambient_dim=n)


def _kernel_basis(matrix, p):
    """Basis of {x : x·matrix = 0} for a dense list-of-lists matrix."""
    m = len(matrix)
    if m == 0:
        return []
    # Transpose and find the null space of matrix^T · x^T = 0 column-wise:
    # row-reduce the transpose and read off free variables.
    ncols = len(matrix[0])
    tr = [[matrix[r][c] % p for r in range(m)] for c in range(ncols)]
    reduced, pivots = _row_reduce(tr, p) if tr else ([], [])
    pivot_set = set(pivots)
    free = [j for j in range(m) if j not in pivot_set]
    basis = []
    for fj in free:
        x = [0] * m
        x[fj] = 1
        for row, pc in zip(reduced, pivots):
            x[pc] = (-row[fj]) % p
        basis.append(x)
    return basis
