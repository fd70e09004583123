"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow and no rounding.
Lattices are always reported through their Hermite normal form (row echelon,
positive pivots, entries above a pivot reduced into ``[0, pivot)``), which makes
lattice equality a plain comparison of bases.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]  # row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)],
            cols=other.cols,
        )

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_columns([self.column(j) for j in idx], rows=self.rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)], cols=self.cols + other.cols
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _row_op(m, dst, src, q):
    """row[dst] -= q * row[src]"""
    rs, rd = m[src], m[dst]
    for k in range(len(rd)):
        rd[k] -= q * rs[k]


def _col_op(m, dst, src, q):
    for r in m:
        r[dst] -= q * r[src]


@lru_cache(maxsize=4096)
def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Return ``U, D, V`` with ``U @ A @ V == D`` in Smith form.

    Pivot on the smallest nonzero entry, clear its row and column by floor
    division, and fold in any row that breaks divisibility.  Deterministic.
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    u = IntMatrix.identity(m).to_rows()
    vt = IntMatrix.identity(n).to_rows()  # V transposed: column ops become row ops

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        vt[t], vt[pj] = vt[pj], vt[t]

        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _row_op(a, i, t, q)
                    _row_op(u, i, t, q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    _col_op(a, j, t, q)
                    _row_op(vt, j, t, q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder exists in row or column t: move it to the pivot
                cands = [(abs(a[i][t]), 0, i) for i in range(t + 1, m) if a[i][t]]
                cands += [(abs(a[t][j]), 1, j) for j in range(t + 1, n) if a[t][j]]
                _, kind, k = min(cands)
                if kind == 0:
                    a[t], a[k] = a[k], a[t]
                    u[t], u[k] = u[k], u[t]
                else:
                    for r in a:
                        r[t], r[k] = r[k], r[t]
                    vt[t], vt[k] = vt[k], vt[t]
                continue
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            _row_op(a, t, bad, -1)
            _row_op(u, t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    U = IntMatrix.from_rows(u, cols=m)
    D = IntMatrix.from_rows(a, cols=n)
    V = IntMatrix.from_rows(vt, cols=n).T
    return SmithDecomposition(U, D, V)


def hermite_rows(vectors: Sequence[Sequence[int]], dim: int) -> List[Vector]:
    """Hermite normal form basis of the lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    for v in rows:
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)} in dimension {dim}")
    r = 0
    for c in range(dim):
        if r >= len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(rows[i][c]), i))
            rows[r], rows[i0] = rows[i0], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    _row_op(rows, i, r, rows[i][c] // rows[r][c])
                    if rows[i][c]:
                        done = False
            if done:
                break
        if rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                _row_op(rows, i, r, rows[i][c] // rows[r][c])
            r += 1
        rows = rows[:r] + [v for v in rows[r:] if any(v)]
    return [tuple(v) for v in rows[:r]]


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """Columns = Hermite basis of the lattice spanned by ``vectors``."""
    return IntMatrix.from_columns(hermite_rows(vectors, dim), rows=dim)


def reduce_mod_lattice(v: Sequence[int], hermite: Sequence[Vector]) -> Vector:
    """Canonical representative of ``v`` modulo a lattice given in Hermite form."""
    v = list(v)
    for row in hermite:
        p = next(k for k, x in enumerate(row) if x)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def kernel_lattice(A: IntMatrix) -> IntMatrix:
    """Columns form the Hermite basis of ``{x in Z^cols : A x = 0}``."""
    snf = smith_normal_form(A)
    r = snf.rank
    vecs = [snf.V.column(j) for j in range(r, A.cols)]
    return lattice_basis(vecs, A.cols)


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def cokernel_invariants(A: IntMatrix) -> AbelianInvariants:
    """Invariants of ``Z^rows / (column span of A)``."""
    diag = smith_normal_form(A).diagonal
    r = sum(1 for d in diag if d)
    return AbelianInvariants(A.rows - r, tuple(d for d in diag if d > 1))


def solve_integral(A: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """Some integral ``x`` with ``A x = b``, or ``None``.

    The solution is canonical: among all solutions it is the one reduced
    against the Hermite basis of ``ker A`` read from the last coordinate
    backwards (so for ``[[1, 1]] x = 5`` it is ``(5, 0)``).
    """
    b = tuple(int(x) for x in b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    diag = snf.diagonal
    y = [0] * A.cols
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = snf.V.apply(y)
    kernel = [snf.V.column(j)[::-1] for j in range(snf.rank, A.cols)]
    x = reduce_mod_lattice(x[::-1], hermite_rows(kernel, A.cols))[::-1]
    assert A.apply(x) == b
    return x


def quotient_map(generators: Sequence[Sequence[int]], dim: int) -> Tuple[IntMatrix, Tuple[int, ...]]:
    """Coordinates on ``Z^dim / L`` for the lattice ``L`` spanned by ``generators``.

    Returns ``(proj, torsion)``: ``proj`` has as rows the Hermite basis of the
    integral functionals vanishing on ``L``.  When ``torsion`` is empty, ``proj``
    is surjective with kernel exactly ``L`` and so identifies the quotient with a
    free lattice.
    """
    gens = [tuple(g) for g in generators if any(g)]
    if not gens:
        return IntMatrix.identity(dim), ()
    Lmat = IntMatrix.from_columns(gens, rows=dim)
    torsion = cokernel_invariants(Lmat).torsion
    ann = kernel_lattice(Lmat.T)
    return IntMatrix.from_rows(ann.columns(), cols=dim), torsion


def right_inverse(A: IntMatrix) -> IntMatrix:
    """Integral ``S`` with ``A @ S == I``; ``A`` must be surjective onto ``Z^rows``."""
    snf = smith_normal_form(A)
    if snf.rank != A.rows or any(d != 1 for d in snf.diagonal[: A.rows]):
        raise ValueError("matrix is not surjective over the integers")
    # A = U^-1 [I 0] V^-1  =>  S = V [I; 0] U
    top = IntMatrix.identity(A.rows).vstack(IntMatrix.zeros(A.cols - A.rows, A.rows))
    return snf.V @ top @ snf.U


def left_inverse(B: IntMatrix) -> Optional[IntMatrix]:
    """Integral ``T`` with ``T @ B == I`` if the column lattice of ``B`` is a
    saturated sublattice of rank ``B.cols``; otherwise ``None``."""
    if B.cols == 0:
        return IntMatrix.zeros(0, B.rows)
    St = right_inverse_or_none(B.T)
    return None if St is None else St.T


def right_inverse_or_none(A: IntMatrix) -> Optional[IntMatrix]:
    try:
        return right_inverse(A)
    except ValueError:
        return None


def is_unimodular(A: IntMatrix) -> bool:
    return A.rows == A.cols and abs(A.det()) == 1


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], dim: int) -> bool:
    return hermite_rows(a, dim) == hermite_rows(b, dim)
