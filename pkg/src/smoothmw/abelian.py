"""Exact integer linear algebra.

Smith normal form with transforms, cokernels, saturated kernels and
finitely generated abelian groups.  Everything here works with Python
integers only; there is no floating point anywhere in the package.

>>> smith_normal_form(IntegerMatrix([[2, 0], [0, 3]])).diagonal
(1, 6)
>>> cokernel(IntegerMatrix([[0, -2], [0, 0]]))
FgAbelianGroup(free_rank=1, torsion=(2,))
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntegerMatrix:
    """Immutable integer matrix acting on column vectors.

    The shape is stored explicitly so that 0 x n and n x 0 matrices keep
    their dimensions.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntegerMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int | None = None) -> IntegerMatrix:
        if not cols:
            if nrows is None:
                raise ValueError("nrows is required for a matrix with no columns")
            return cls([[] for _ in range(nrows)], 0)
        return cls(zip(*cols), len(cols))

    @classmethod
    def diagonal_matrix(cls, entries: Sequence[int]) -> IntegerMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()!r})"

    @property
    def T(self) -> IntegerMatrix:
        return IntegerMatrix(zip(*self._rows), self.nrows) if self.nrows else IntegerMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntegerMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], other.ncols
        )

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def scale(self, k: int) -> IntegerMatrix:
        return IntegerMatrix([[k * a for a in r] for r in self._rows], self.ncols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __pow__(self, k: int) -> IntegerMatrix:
        if self.nrows != self.ncols or k < 0:
            raise ValueError("only nonnegative powers of square matrices")
        result = IntegerMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._rows for a in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix([[self._rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntegerMatrix([r + s for r, s in zip(self._rows, other._rows)], self.ncols + other.ncols)

    def vstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntegerMatrix(self._rows + other._rows, self.ncols)


def determinant(M: IntegerMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U`` and ``V`` unimodular."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _add_row(a, dst, src, k):
    # row_dst += k * row_src
    rs = a[src]
    rd = a[dst]
    for c in range(len(rd)):
        rd[c] += k * rs[c]


def _add_col(a, dst, src, k):
    for r in a:
        r[dst] += k * r[src]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x a + y b = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _combine_rows(a, s, t, x, y, z, w):
    # (row_s, row_t) <- (x row_s + y row_t, z row_s + w row_t)
    rs, rt = a[s], a[t]
    for c in range(len(rs)):
        u, v = rs[c], rt[c]
        rs[c] = x * u + y * v
        rt[c] = z * u + w * v


def _combine_cols(a, s, t, x, y, z, w):
    for r in a:
        u, v = r[s], r[t]
        r[s] = x * u + y * v
        r[t] = z * u + w * v


def smith_normal_form(M: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form ``U M V = D`` with transforms.

    Pivot rule: the nonzero entry of smallest absolute value in the
    remaining block, ties broken leftmost then topmost.  The diagonal is
    nonnegative with ``d_1 | d_2 | ...``.
    """
    m, n = M.shape
    a = M.tolist()
    u = IntegerMatrix.identity(m).tolist()
    # V is accumulated transposed so that column operations become row operations.
    vt = IntegerMatrix.identity(n).tolist()

    def pick_pivot(t):
        best = None
        for j in range(t, n):
            for i in range(t, m):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    for t in range(min(m, n)):
        while True:
            best = pick_pivot(t)
            if best is None:
                break
            _, i, j = best
            if i != t:
                _swap_rows(a, t, i)
                _swap_rows(u, t, i)
            if j != t:
                _swap_cols(a, t, j)
                _swap_rows(vt, t, j)
            # clear column t, then row t, with one unimodular 2x2 step per entry
            for i in range(t + 1, m):
                b, p = a[i][t], a[t][t]
                if not b:
                    continue
                if b % p == 0:
                    _add_row(a, i, t, -(b // p))
                    _add_row(u, i, t, -(b // p))
                    continue
                g, x, y = _xgcd(p, b)
                _combine_rows(a, t, i, x, y, -b // g, p // g)
                _combine_rows(u, t, i, x, y, -b // g, p // g)
            for j in range(t + 1, n):
                b, p = a[t][j], a[t][t]
                if not b:
                    continue
                if b % p == 0:
                    _add_col(a, j, t, -(b // p))
                    _add_row(vt, j, t, -(b // p))
                    continue
                g, x, y = _xgcd(p, b)
                _combine_cols(a, t, j, x, y, -b // g, p // g)
                _combine_rows(vt, t, j, x, y, -b // g, p // g)
            p = a[t][t]
            if any(a[i][t] for i in range(t + 1, m)):
                continue
            # row and column are clear; enforce divisibility on the rest
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            _add_row(a, t, bad, 1)
            _add_row(u, t, bad, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(
        IntegerMatrix(u, m), IntegerMatrix(a, n), IntegerMatrix(vt, n).T if n else IntegerMatrix.zeros(0, 0)
    )


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank`` plus cyclic factors ``Z/d_1 + ... + Z/d_k`` with ``d_i | d_{i+1}``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"invariant factors {self.torsion} are not a divisibility chain")

    @classmethod
    def from_diagonal(cls, diag: Iterable[int], ambient: int) -> FgAbelianGroup:
        """Group ``Z^ambient / span(diag_i * e_i)`` for a Smith diagonal."""
        diag = [abs(d) for d in diag]
        zeros = ambient - sum(1 for d in diag if d)
        torsion = sorted(d for d in diag if d > 1)
        # Smith diagonals are already a divisibility chain; re-derive it otherwise
        return cls(zeros, tuple(_invariant_factors(torsion)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> int | None:
        """Order of a finite group, ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def to_dict(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, data: dict) -> FgAbelianGroup:
        return cls(int(data["rank"]), tuple(data.get("torsion", ())))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _invariant_factors(divisors: Sequence[int]) -> list[int]:
    """Invariant factors of ``sum Z/d_i`` for arbitrary positive ``d_i``."""
    if not divisors:
        return []
    D = IntegerMatrix.diagonal_matrix(list(divisors))
    diag = _snf_diagonal_only(D)
    return [d for d in diag if d > 1]


def _snf_diagonal_only(M: IntegerMatrix) -> tuple[int, ...]:
    return smith_normal_form(M).diagonal


def cokernel(M: IntegerMatrix) -> FgAbelianGroup:
    """``Z^rows / (column span of M)``."""
    if M.nrows == 0:
        return FgAbelianGroup()
    if M.ncols == 0:
        return FgAbelianGroup(M.nrows)
    return FgAbelianGroup.from_diagonal(smith_normal_form(M).diagonal, M.nrows)


def kernel_saturated(M: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of ``ker M`` inside ``Z^cols``.

    Columns of ``V`` beyond the rank span the kernel and extend to a
    basis of ``Z^cols``, so the result is automatically primitive.
    """
    n = M.ncols
    if M.nrows == 0:
        return IntegerMatrix.identity(n)
    snf = smith_normal_form(M)
    r = snf.rank
    return snf.V.submatrix(range(n), range(r, n))


def rank(M: IntegerMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return smith_normal_form(M).rank


def groups_isomorphic(G: FgAbelianGroup, H: FgAbelianGroup) -> bool:
    return G.free_rank == H.free_rank and G.torsion == H.torsion


def is_unimodular_matrix(M: IntegerMatrix) -> bool:
    return M.nrows == M.ncols and abs(determinant(M)) == 1


def image_basis(M: IntegerMatrix) -> IntegerMatrix:
    """A basis (as columns) of the column span of ``M``.

    From ``U M V = D``: the span equals ``U^{-1} D`` restricted to its
    nonzero columns.
    """
    if M.ncols == 0 or M.nrows == 0:
        return IntegerMatrix.zeros(M.nrows, 0)
    snf = smith_normal_form(M)
    r = snf.rank
    Uinv = unimodular_inverse(snf.U)
    cols = [tuple(snf.diagonal[j] * x for x in Uinv.col(j)) for j in range(r)]
    return IntegerMatrix.from_columns(cols, M.nrows)


def unimodular_inverse(U: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a matrix with determinant +-1 (Gauss-Jordan over Z)."""
    n = U.nrows
    if n != U.ncols:
        raise ValueError("not square")
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(U)]
    for c in range(n):
        # gcd-style elimination keeps everything integral
        while True:
            rows = [i for i in range(c, n) if a[i][c]]
            if not rows:
                raise ValueError("matrix is not unimodular")
            piv = min(rows, key=lambda i: (abs(a[i][c]), i))
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
            done = True
            for i in range(c + 1, n):
                if a[i][c]:
                    q = a[i][c] // a[c][c]
                    _add_row(a, i, c, -q)
                    done = done and a[i][c] == 0
            if done:
                break
        if abs(a[c][c]) != 1:
            raise ValueError("matrix is not unimodular")
        if a[c][c] < 0:
            a[c] = [-x for x in a[c]]
    for c in range(n - 1, -1, -1):
        for i in range(c):
            if a[i][c]:
                _add_row(a, i, c, -a[i][c])
    return IntegerMatrix([r[n:] for r in a], n)


def solve_integer(M: IntegerMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer solution of ``M x = b``, or ``None`` if none exists."""
    if len(b) != M.nrows:
        raise ValueError("right-hand side length mismatch")
    if M.ncols == 0:
        return () if all(x == 0 for x in b) else None
    snf = smith_normal_form(M)
    c = snf.U.apply(b)
    y = [0] * M.ncols
    for i, ci in enumerate(c):
        d = snf.D[i, i] if i < M.ncols else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return snf.V.apply(y)


def subquotient(S: IntegerMatrix, T: IntegerMatrix) -> FgAbelianGroup:
    """``(span S + span T) / span T`` for column generators in a common ``Z^n``."""
    n = S.nrows
    if T.nrows != n:
        raise ValueError("ambient dimension mismatch")
    big = image_basis(S.hstack(T))
    k = big.ncols
    if k == 0:
        return FgAbelianGroup()
    coords = []
    for t in T.columns():
        x = solve_integer(big, t)
        assert x is not None
        coords.append(x)
    return cokernel(IntegerMatrix.from_columns(coords, k))


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def complete_to_basis(v: Sequence[int]) -> IntegerMatrix:
    """Unimodular matrix whose first column is the primitive vector ``v``."""
    if not is_primitive(v):
        raise ValueError(f"{tuple(v)} is not primitive")
    row = IntegerMatrix([list(v)])
    snf = smith_normal_form(row)
    # u v^T V = (1, 0, ..., 0) with u = +-1, so the first row of V^{-1} is +-v^T
    W = unimodular_inverse(snf.V).T
    if tuple(W.col(0)) != tuple(v):
        W = IntegerMatrix([[-x if j == 0 else x for j, x in enumerate(r)] for r in W], W.ncols)
    assert tuple(W.col(0)) == tuple(v)
    return W


def column_hermite_form(M: IntegerMatrix) -> IntegerMatrix:
    """Column-style Hermite form: same column span, echelon from the top.

    Used to present lattice bases with small, readable entries.
    """
    a = [list(c) for c in M.columns()]
    n = M.nrows
    out = []
    row = 0
    while a and row < n:
        nz = [c for c in a if c[row]]
        if not nz:
            row += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda c: abs(c[row]))
            p = nz[0]
            for c in nz[1:]:
                q = c[row] // p[row]
                for k in range(n):
                    c[k] -= q * p[k]
            nz = [c for c in nz if c[row]]
        piv = nz[0]
        if piv[row] < 0:
            for k in range(n):
                piv[k] = -piv[k]
        a = [c for c in a if c is not piv and any(c)]
        # reduce earlier pivot columns above... keep entries in this row small
        for c in out:
            if c[row]:
                q = c[row] // piv[row]
                for k in range(n):
                    c[k] -= q * piv[k]
        out.append(piv)
        row += 1
    return IntegerMatrix.from_columns([tuple(c) for c in out], n)
