"""Integral lattices given by Gram matrices.

Standard pieces (U, I(+1), I(-1), E8(-1), A2(-1)), the lattices
``Lambda(d)`` with their fiber class ``e``, exact signatures, isotropic
quotients ``e^perp / Z e``, Eichler transformations, reflections, a
spinor orientation character, root enumeration in definite lattices and
the classification of even unimodular lattices used by the fibration
computations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Sequence

from .abelian import (
    FgAbelianGroup,
    IntegerMatrix,
    cokernel,
    column_hermite_form,
    complete_to_basis,
    determinant,
    is_primitive,
    kernel_saturated,
    smith_normal_form,
    solve_integer,
    unimodular_inverse,
)

Vector = tuple[int, ...]


class LatticeError(ValueError):
    pass


class DegenerateLatticeError(LatticeError):
    def __init__(self, radical_rank: int):
        super().__init__(f"Gram matrix is degenerate (radical rank {radical_rank})")
        self.radical_rank = radical_rank


@dataclass(eq=False)
class Lattice:
    gram: IntegerMatrix
    labels: tuple[str, ...] | None = None
    marked: dict[str, Vector] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.gram, IntegerMatrix):
            self.gram = IntegerMatrix(self.gram)
        G = self.gram
        if G.nrows != G.ncols:
            raise LatticeError("Gram matrix must be square")
        if G != G.T:
            raise LatticeError("Gram matrix must be symmetric")
        if self.labels is not None and len(self.labels) != G.nrows:
            raise LatticeError("one label per basis vector")
        self.marked = {k: tuple(int(x) for x in v) for k, v in self.marked.items()}
        for k, v in self.marked.items():
            if len(v) != G.nrows:
                raise LatticeError(f"marked vector {k!r} has wrong length")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram and self.marked == other.marked

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, self.gram.apply(y)))

    def norm(self, x: Sequence[int]) -> int:
        return self.dot(x, x)

    def pairing_row(self, x: Sequence[int]) -> Vector:
        """Coefficients of the linear form ``y -> x . y``."""
        return self.gram.apply(x)

    @cached_property
    def determinant(self) -> int:
        return determinant(self.gram)

    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1

    def unit(self, i: int) -> Vector:
        return tuple(int(j == i) for j in range(self.rank))

    def to_dict(self) -> dict:
        out = {"rank": self.rank, "gram": self.gram.tolist()}
        if self.marked:
            out["marked"] = {k: list(v) for k, v in self.marked.items()}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> Lattice:
        if not isinstance(data, dict) or not isinstance(data.get("gram"), list):
            raise LatticeError("lattice JSON needs a 'gram' list of integer rows")
        gram = data["gram"]
        if any(not isinstance(r, list) or not all(isinstance(x, int) for x in r) for r in gram):
            raise LatticeError("'gram' must contain integer rows")
        n = int(data.get("rank", len(gram)))
        if len(gram) != n:
            raise LatticeError(f"rank {n} does not match a {len(gram)}-row Gram matrix")
        if any(len(r) != n for r in gram):
            raise LatticeError("Gram matrix must be square")
        labels = data.get("labels")
        if labels is not None and (not isinstance(labels, list) or not all(isinstance(x, str) for x in labels)):
            raise LatticeError("'labels' must be a list of strings")
        marked = data.get("marked", {})
        if not isinstance(marked, dict) or any(
            not isinstance(v, list) or not all(isinstance(x, int) for x in v) for v in marked.values()
        ):
            raise LatticeError("'marked' must map names to integer vectors")
        return cls(IntegerMatrix(gram, n), tuple(labels) if labels else None, dict(marked))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Lattice:
        return cls.from_dict(json.loads(text))


# -- standard constructions ---------------------------------------------------

_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def e8_cartan() -> IntegerMatrix:
    """Cartan matrix of E8 (Bourbaki numbering, 0-based)."""
    a = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in _E8_EDGES:
        a[i][j] = a[j][i] = -1
    return IntegerMatrix(a)


def hyperbolic_plane() -> Lattice:
    return Lattice(IntegerMatrix([[0, 1], [1, 0]]), ("e", "f"))


def unit_lattice(sign: int) -> Lattice:
    return Lattice(IntegerMatrix([[sign]]))


def e8(sign: int = -1) -> Lattice:
    return Lattice(e8_cartan().scale(sign), tuple(f"a{i + 1}" for i in range(8)))


def a_lattice(n: int, sign: int = -1) -> Lattice:
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    return Lattice(IntegerMatrix(a).scale(sign))


def orthogonal_sum(*parts: Lattice) -> Lattice:
    n = sum(p.rank for p in parts)
    rows = [[0] * n for _ in range(n)]
    labels: list[str] = []
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                rows[off + i][off + j] = p.gram[i, j]
        labels += list(p.labels) if p.labels else [""] * p.rank
        off += p.rank
    return Lattice(IntegerMatrix(rows, n), tuple(labels) if any(labels) else None)


def lambda_lattice(d: int) -> Lattice:
    """``Lambda(d)`` of signature ``(2d-1, 10d-1)`` with its fiber class marked as ``e``.

    Even ``d``: ``U + dE8(-1) + (2d-2)U`` with ``e`` the first isotropic
    vector.  Odd ``d``: ``I(1) + I(-1) + dE8(-1) + (2d-2)U`` with ``e`` the
    difference of the two unit vectors.  In both models the coordinates
    after the first two span a complement of ``Z e`` in ``e^perp``.
    """
    if d < 1:
        raise LatticeError("Lambda(d) needs d >= 1")
    head = hyperbolic_plane() if d % 2 == 0 else orthogonal_sum(unit_lattice(1), unit_lattice(-1))
    L = orthogonal_sum(head, *([e8()] * d), *([hyperbolic_plane()] * (2 * d - 2)))
    e = (1, 0) if d % 2 == 0 else (1, -1)
    L.marked["e"] = e + (0,) * (L.rank - 2)
    return L


def model_quotient_lattice(d: int) -> Lattice:
    """``dE8(-1) + (2d-2)U``."""
    if d < 1:
        raise LatticeError("d must be >= 1")
    return orthogonal_sum(*([e8()] * d), *([hyperbolic_plane()] * (2 * d - 2)))


_ATOM = re.compile(
    r"\s*(?:(\d+)\s*\*?\s*)?"
    r"(U|I\(\s*[+-]?1\s*\)|I|E8\(\s*[+-]?1\s*\)|E8|A(\d+)\(\s*[+-]?1\s*\)|Lambda\(\s*(\d+)\s*\))\s*"
)


def make_standard(expr: str) -> Lattice:
    """Build a lattice from an expression such as ``"2E8(-1) + 2U"``.

    Summands are separated by ``+``, ``(+)``, ``⊥`` or ``perp``;
    ``Lambda(d)`` must stand alone.
    """
    text = expr.replace("\u2212", "-").strip()
    if not text:
        raise LatticeError("empty lattice expression")
    pieces = re.split(r"⊥|\(\+\)|\bperp\b|(?<![(\d])\+(?!\s*1\s*\))", text)
    parts: list[Lattice] = []
    for piece in pieces:
        m = _ATOM.fullmatch(piece)
        if not m:
            raise LatticeError(f"cannot parse lattice summand {piece.strip()!r}")
        count = int(m.group(1) or 1)
        atom = re.sub(r"\s+", "", m.group(2))
        if atom.startswith("Lambda"):
            if len(pieces) != 1 or m.group(1):
                raise LatticeError("Lambda(d) cannot be combined with other summands")
            return lambda_lattice(int(m.group(4)))
        sign = -1 if "-" in atom else 1
        if atom == "U":
            one = hyperbolic_plane()
        elif atom.startswith("I"):
            one = unit_lattice(sign)
        elif atom.startswith("E8"):
            one = e8(sign)
        else:
            n = int(m.group(3))
            if n < 1:
                raise LatticeError("A_n needs n >= 1")
            one = a_lattice(n, sign)
        if count < 1:
            raise LatticeError("multiplicity must be positive")
        parts += [one] * count
    return orthogonal_sum(*parts)


# -- exact diagonalisation ----------------------------------------------------

def diagonalize(gram: IntegerMatrix) -> tuple[list[list[Fraction]], list[Fraction], int]:
    """Congruence diagonalisation over Q.

    Returns ``(P, diag, radical_rank)`` with ``P^T G P = diag(diag + zeros)``,
    ``P`` given as a list of rational columns.
    """
    n = gram.nrows
    A = [[Fraction(x) for x in r] for r in gram]
    P = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]  # P[j] is column j

    def add(i, j, f):
        # basis_i += f * basis_j
        for k in range(n):
            A[i][k] += f * A[j][k]
        for k in range(n):
            A[k][i] += f * A[k][j]
        P[i] = [a + f * b for a, b in zip(P[i], P[j])]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        P[i], P[j] = P[j], P[i]

    diag: list[Fraction] = []
    for t in range(n):
        k = next((k for k in range(t, n) if A[k][k] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(t, n) for j in range(t, n) if A[i][j] != 0), None)
            if pair is None:
                return P, diag, n - t
            add(pair[0], pair[1], Fraction(1))
            k = pair[0]
        if k != t:
            swap(k, t)
        p = A[t][t]
        for k in range(t + 1, n):
            if A[k][t] != 0:
                add(k, t, -A[k][t] / p)
        diag.append(p)
    return P, diag, 0


def signature(L: Lattice) -> tuple[int, int]:
    """``(n_+, n_-)`` for a nondegenerate lattice; raises on a radical."""
    _, diag, rad = diagonalize(L.gram)
    if rad:
        raise DegenerateLatticeError(rad)
    return sum(1 for x in diag if x > 0), sum(1 for x in diag if x < 0)


def is_even(L: Lattice) -> bool:
    return all(L.gram[i, i] % 2 == 0 for i in range(L.rank))


def is_negative_definite(L: Lattice) -> bool:
    _, diag, rad = diagonalize(L.gram)
    return rad == 0 and all(x < 0 for x in diag)


def discriminant_group(L: Lattice) -> FgAbelianGroup:
    """Dual lattice modulo the lattice, as the cokernel of the Gram matrix."""
    G = cokernel(L.gram)
    if G.free_rank:
        raise DegenerateLatticeError(G.free_rank)
    return G


# -- isometries ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Isometry:
    """Integer matrix ``M`` (acting on coordinate columns) with ``M^T G M = G``."""

    lattice: Lattice
    matrix: IntegerMatrix

    def __post_init__(self):
        M, G = self.matrix, self.lattice.gram
        if M.shape != G.shape:
            raise LatticeError("isometry has the wrong size")
        if M.T @ G @ M != G:
            raise LatticeError("matrix does not preserve the Gram matrix")
        if abs(determinant(M)) != 1:
            raise LatticeError("isometry must have determinant +-1")

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __matmul__(self, other: Isometry) -> Isometry:
        return Isometry(self.lattice, self.matrix @ other.matrix)

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.matrix.apply(x)

    def inverse(self) -> Isometry:
        return Isometry(self.lattice, unimodular_inverse(self.matrix))

    @classmethod
    def identity(cls, L: Lattice) -> Isometry:
        return cls(L, IntegerMatrix.identity(L.rank))

    def is_identity(self) -> bool:
        return self.matrix == IntegerMatrix.identity(self.lattice.rank)


def _outer(u: Sequence[int], v: Sequence[int]) -> list[list[int]]:
    return [[a * b for b in v] for a in u]


def eichler(L: Lattice, e: Sequence[int], c: Sequence[int]) -> Isometry:
    """``x -> x + (x.e)c - (x.c)e - (c.c)/2 (x.e) e``."""
    e, c = tuple(e), tuple(c)
    if L.norm(e) != 0 or not is_primitive(e):
        raise LatticeError("e must be primitive and isotropic")
    if L.dot(c, e) != 0:
        raise LatticeError("c must be orthogonal to e")
    ge, gc, cc = L.pairing_row(e), L.pairing_row(c), L.norm(c)
    n = L.rank
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            half = cc * e[i] * ge[j]
            if half % 2:
                raise LatticeError("(c.c)(x.e)/2 is not integral; e^perp/Ze is not even along c")
            row.append(int(i == j) + c[i] * ge[j] - e[i] * gc[j] - half // 2)
        rows.append(row)
    return Isometry(L, IntegerMatrix(rows, n))


def reflection(L: Lattice, c: Sequence[int]) -> Isometry:
    """``x -> x + (c.x) c`` for a ``(-2)``-vector ``c``."""
    c = tuple(c)
    if L.norm(c) != -2:
        raise LatticeError(f"reflection vector has norm {L.norm(c)}, expected -2")
    gc = L.pairing_row(c)
    n = L.rank
    return Isometry(L, IntegerMatrix([[int(i == j) + c[i] * gc[j] for j in range(n)] for i in range(n)], n))


def fixes_vector(g: Isometry, v: Sequence[int]) -> bool:
    return g(v) == tuple(v)


# -- isotropic quotients ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsotropicQuotient:
    """``e^perp / Z e`` with explicit coordinates.

    ``perp_basis`` has ``e`` as its first column; the remaining columns
    (``complement``) lift the quotient basis.
    """

    ambient: Lattice
    e: Vector
    quotient: Lattice
    perp_basis: IntegerMatrix
    _left_inverse: IntegerMatrix

    @property
    def complement(self) -> IntegerMatrix:
        n = self.perp_basis.nrows
        return self.perp_basis.submatrix(range(n), range(1, self.perp_basis.ncols))

    def lift(self, q: Sequence[int]) -> Vector:
        return self.complement.apply(q)

    def perp_coordinates(self, x: Sequence[int]) -> Vector:
        """Coordinates of ``x`` in ``perp_basis``; raises if ``x`` is not in ``e^perp``."""
        if self.ambient.dot(x, self.e) != 0:
            raise LatticeError("vector is not orthogonal to e")
        coords = self._left_inverse.apply(x)
        assert self.perp_basis.apply(coords) == tuple(x)
        return coords

    def project(self, x: Sequence[int]) -> Vector:
        return self.perp_coordinates(x)[1:]

    def e_coefficient(self, x: Sequence[int]) -> int:
        return self.perp_coordinates(x)[0]


def isotropic_quotient(L: Lattice, e: Sequence[int] | None = None,
                       complement: IntegerMatrix | None = None) -> IsotropicQuotient:
    """Quotient ``e^perp / Z e`` of a lattice by a primitive isotropic vector.

    Without ``complement`` a basis of ``e^perp`` is put into column Hermite
    form and completed around ``e``.  A caller-supplied ``complement`` must
    extend ``e`` to a basis of ``e^perp``.
    """
    if e is None:
        if "e" not in L.marked:
            raise LatticeError("no isotropic vector given and none marked")
        e = L.marked["e"]
    e = tuple(e)
    if len(e) != L.rank:
        raise LatticeError("e has the wrong length")
    if not is_primitive(e):
        raise LatticeError("e is not primitive")
    if L.norm(e) != 0:
        raise LatticeError("e is not isotropic")
    n = L.rank
    ge = IntegerMatrix([list(L.pairing_row(e))], n)
    perp = kernel_saturated(ge)
    if complement is not None:
        B = IntegerMatrix.from_columns([e] + complement.columns(), n)
        if B.ncols != perp.ncols:
            raise LatticeError("complement has the wrong size")
        for col in B.columns():
            if L.dot(col, e) != 0:
                raise LatticeError("complement is not inside e^perp")
        # same span as the saturated kernel iff every kernel vector is an integral combination
        for col in perp.columns():
            if solve_integer(B, col) is None:
                raise LatticeError("e and complement do not span e^perp")
    else:
        perp = column_hermite_form(perp)
        u = solve_integer(perp, e)
        assert u is not None
        B = perp @ complete_to_basis(u)
    snf = smith_normal_form(B)
    k = B.ncols
    assert snf.diagonal == (1,) * k, "perp basis is not saturated"
    proj = IntegerMatrix([[int(i == j) for j in range(n)] for i in range(k)], n)
    left = snf.V @ proj @ snf.U
    C = B.submatrix(range(n), range(1, k))
    Q = Lattice(C.T @ L.gram @ C)
    return IsotropicQuotient(L, e, Q, B, left)


def lambda_quotient(d: int) -> IsotropicQuotient:
    """``Lambda(d)(e)`` with the tail coordinates as quotient basis.

    The quotient Gram matrix is then literally ``dE8(-1) + (2d-2)U``.
    """
    L = lambda_lattice(d)
    n = L.rank
    tail = IntegerMatrix.from_columns([L.unit(i) for i in range(2, n)], n)
    return isotropic_quotient(L, L.marked["e"], tail)


def eichler_from_class(quot: IsotropicQuotient, c: Sequence[int]) -> Isometry:
    """``E(e ^ c)`` for a quotient class ``c`` (given in quotient coordinates)."""
    return eichler(quot.ambient, quot.e, quot.lift(c))


def recover_eichler_class(quot: IsotropicQuotient, g: Isometry) -> Vector:
    """The unique quotient class ``c`` with ``g = E(e ^ c)``.

    Raises if ``g`` does not fix ``e``, is not trivial on ``e^perp/Ze``,
    or is not of Eichler form.
    """
    L, e = quot.ambient, quot.e
    if g(e) != e:
        raise LatticeError("isometry does not fix e")
    for col in quot.complement.columns():
        diff = tuple(a - b for a, b in zip(g(col), col))
        if quot.project(diff) != (0,) * quot.quotient.rank:
            raise LatticeError("isometry is not trivial on e^perp/Ze")
    row = IntegerMatrix([list(L.pairing_row(e))], L.rank)
    x0 = solve_integer(row, (1,))
    if x0 is None:
        raise LatticeError("no vector pairs to 1 with e")
    c_lift = tuple(a - b for a, b in zip(g(x0), x0))
    c = quot.project(c_lift)
    if eichler_from_class(quot, c) != g:
        raise LatticeError("isometry is not an Eichler transformation for e")
    return c


# -- spinor orientation -------------------------------------------------------

def _frac_det(rows: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


_POSITIVE_SUBSPACES: dict[IntegerMatrix, list[list[Fraction]]] = {}


def positive_subspace(L: Lattice) -> list[list[Fraction]]:
    """Reference maximal positive-definite subspace, as rational columns.

    Fixed once per Gram matrix by the exact diagonalisation.
    """
    cached = _POSITIVE_SUBSPACES.get(L.gram)
    if cached is None:
        P, diag, rad = diagonalize(L.gram)
        if rad:
            raise DegenerateLatticeError(rad)
        cached = [P[i] for i, x in enumerate(diag) if x > 0]
        _POSITIVE_SUBSPACES[L.gram] = cached
    return cached


def spinor_orientation_sign(L: Lattice, g: Isometry) -> int:
    """``+1`` if ``g`` preserves the orientation of positive-definite subspaces.

    With ``B`` a basis of the reference positive subspace, the projection of
    ``g`` restricted to ``span B`` has matrix ``(B^T G B)^{-1} (B^T G g B)``;
    the first factor is positive definite, so the sign is that of
    ``det(B^T G g B)``.
    """
    if g.lattice.gram != L.gram:
        raise LatticeError("isometry belongs to a different lattice")
    B = positive_subspace(L)
    if not B:
        raise LatticeError("lattice has no positive part")
    G = L.gram
    gB = [[sum(g.matrix[i, k] * b[k] for k in range(L.rank)) for i in range(L.rank)] for b in B]
    GgB = [[sum(G[i, k] * v[k] for k in range(L.rank)) for i in range(L.rank)] for v in gB]
    M = [[sum(x * y for x, y in zip(bi, w)) for w in GgB] for bi in B]
    det = _frac_det(M)
    assert det != 0
    return 1 if det > 0 else -1


# -- definite lattices: roots and E8 certification -----------------------------

def _fincke_pohst_form(Q: list[list[Fraction]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``x^T Q x = sum_i q_i (x_i + sum_{j>i} m_ij x_j)^2`` for positive definite ``Q``."""
    n = len(Q)
    a = [list(r) for r in Q]
    for i in range(n):
        if a[i][i] <= 0:
            raise LatticeError("form is not definite")
        for j in range(i + 1, n):
            a[j][i] = a[i][j]
            a[i][j] = a[i][j] / a[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                a[k][l] -= a[k][i] * a[i][l]
    q = [a[i][i] for i in range(n)]
    m = [[a[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return q, m


def _int_range(center: Fraction, radius2: Fraction) -> range:
    """Integers ``x`` with ``(x - center)^2 <= radius2``."""
    s = isqrt(radius2.numerator // radius2.denominator) + 1
    lo = int(center) - s - 1
    hi = int(center) + s + 1
    while lo <= hi and (lo - center) ** 2 > radius2:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > radius2:
        hi -= 1
    return range(lo, hi + 1)


def short_vectors(L: Lattice, bound: int) -> list[Vector]:
    """All nonzero ``v`` with ``-v.v <= bound`` in a negative definite lattice."""
    n = L.rank
    Q = [[Fraction(-L.gram[i, j]) for j in range(n)] for i in range(n)]
    q, m = _fincke_pohst_form(Q)
    out: list[Vector] = []
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        if i < 0:
            out.append(tuple(x))
            return
        center = -sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for xi in _int_range(center, remaining / q[i]):
            x[i] = xi
            rec(i - 1, remaining - q[i] * (xi - center) ** 2)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    zero = (0,) * n
    return [v for v in out if v != zero]


def roots(L: Lattice, norm: int = -2) -> list[Vector]:
    """All ``v`` with ``v.v == norm`` in a negative definite lattice, sorted."""
    if norm >= 0:
        raise LatticeError("norm must be negative")
    if not is_negative_definite(L):
        raise LatticeError("root enumeration needs a negative definite lattice")
    return sorted(v for v in short_vectors(L, -norm) if L.norm(v) == norm)


def simple_roots(L: Lattice, rts: Sequence[Vector]) -> list[Vector]:
    """Simple roots for the positive system cut out by a generic integral functional."""
    big = 2 * max(abs(x) for v in rts for x in v) + 1
    weights = [big ** i for i in range(L.rank)]

    def height(v):
        return sum(w * x for w, x in zip(weights, v))

    pos = [v for v in rts if height(v) > 0]
    posset = set(pos)
    simple = []
    for v in pos:
        decomposable = any(
            tuple(a - b for a, b in zip(v, u)) in posset for u in pos if u != v
        )
        if not decomposable:
            simple.append(v)
    return sorted(simple)


def dynkin_type(L: Lattice, simple: Sequence[Vector]) -> str | None:
    """Recognise a simply laced connected Dynkin graph of type A, D or E."""
    k = len(simple)
    adj = {i: set() for i in range(k)}
    for i in range(k):
        for j in range(i + 1, k):
            p = L.dot(simple[i], simple[j])
            if p not in (0, 1, -1):
                return None
            if p:
                adj[i].add(j)
                adj[j].add(i)
    edges = sum(len(s) for s in adj.values()) // 2
    if k == 0 or edges != k - 1:
        return None
    seen, stack = {0}, [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != k:
        return None
    branch = [i for i in range(k) if len(adj[i]) >= 3]
    if not branch:
        return f"A{k}"
    if len(branch) > 1 or len(adj[branch[0]]) != 3:
        return None
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{k}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{k}"
    return None


@dataclass(frozen=True)
class E8Certificate:
    root_count: int
    simple_roots: tuple[Vector, ...]
    dynkin: str | None

    @property
    def ok(self) -> bool:
        return self.root_count == 240 and self.dynkin == "E8"


def certify_e8(L: Lattice) -> E8Certificate:
    """Root count plus Dynkin graph of the simple roots."""
    rts = roots(L, -2)
    simple = simple_roots(L, rts)
    kind = dynkin_type(L, simple)
    if kind == "E8":
        # simple roots must also be a Z-basis of the lattice itself
        if abs(determinant(IntegerMatrix.from_columns(simple, L.rank))) != 1:
            kind = None
    return E8Certificate(len(rts), tuple(simple), kind)


def _sum_label(a: int, sign: int, b: int) -> str:
    parts = []
    if a:
        parts.append(f"{'' if a == 1 else a}E8({'-' if sign < 0 else '+'}1)")
    if b:
        parts.append(f"{'' if b == 1 else b}U")
    return " ⊥ ".join(parts) if parts else "0"


def classify_even_unimodular(L: Lattice) -> str:
    """Canonical label ``aE8(-1) ⊥ bU`` of an even unimodular lattice.

    Indefinite lattices are determined by their signature.  Definite ones
    are only handled in rank 8, where the label is certified by 240 roots
    and an E8 Dynkin graph of simple roots.
    """
    if not is_even(L):
        raise LatticeError("lattice is not even")
    if not L.is_unimodular():
        raise LatticeError("lattice is not unimodular")
    if L.rank == 0:
        return "0"
    p, q = signature(L)
    if p and q:
        if (p - q) % 8:
            raise LatticeError("signature of an even unimodular lattice must be 0 mod 8")
        if q >= p:
            return _sum_label((q - p) // 8, -1, p)
        return _sum_label((p - q) // 8, 1, q)
    if L.rank != 8:
        raise LatticeError("definite classification is only implemented in rank 8")
    target = L if q else Lattice(-L.gram)
    if not certify_e8(target).ok:
        raise LatticeError("rank 8 definite lattice failed the E8 certification")
    return "E8(-1)" if q else "E8(+1)"


classify_even_unimodular_indefinite = classify_even_unimodular


def minus_two_basis(d: int) -> tuple[Lattice, list[Vector]]:
    """A basis of ``dE8(-1) + (2d-2)U`` made of ``(-2)``-vectors.

    Each E8(-1) block contributes its simple roots; each pair of U
    summands with isotropic bases ``(e, f), (e', f')`` contributes
    ``a+e, a+f, a+e', a+f'`` for the first simple root ``a``.
    """
    if d < 1:
        raise LatticeError("d must be >= 1")
    M = model_quotient_lattice(d)
    n = M.rank
    unit = M.unit
    alpha = unit(0)
    basis = [unit(i) for i in range(8 * d)]
    for k in range(d - 1):
        off = 8 * d + 4 * k
        for j in range(4):
            basis.append(tuple(a + b for a, b in zip(alpha, unit(off + j))))
    assert len(basis) == n
    return M, basis
