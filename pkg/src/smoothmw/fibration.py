"""Mordell-Weil groups of nodal genus-one fibrations over a disk or a sphere.

A fibration is described by its base and the vanishing cycles of its
nodal fibers, read off along a fixed system of loops ``g_1, ..., g_n``
around the critical values.  Mordell-Weil groups are computed as first
cohomology of the base with coefficients in the pushed-forward fiber
homology, using crossed homomorphisms on the free group:

* a cocycle is a choice ``phi(g_i) = c_i delta_i`` (the local condition
  ``phi(g_i) in im(A_i - I)`` with ``im(A_i - I) = Z delta_i``);
* coboundaries are ``phi_v(g_i) = (A_i - I) v = (v . delta_i) delta_i``;
* over the sphere the relation ``g_n ... g_1 = 1`` forces
  ``sum_i A_n ... A_{i+1} c_i delta_i = 0``.

Over the disk the same data restricted to the boundary loop
``g_n ... g_1`` gives the map to the boundary group, and the relative
group comes from the mapping cone of that restriction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .abelian import (
    FgAbelianGroup,
    IntegerMatrix,
    cokernel,
    determinant,
    kernel_saturated,
    rank,
    solve_integer,
    subquotient,
)
from .lattice import (
    IsotropicQuotient,
    Lattice,
    certify_e8,
    classify_even_unimodular,
    is_even,
    isotropic_quotient,
    lambda_quotient,
    signature,
)
from .monodromy import (
    IDENTITY,
    CycleTuple,
    MonodromyError,
    check_cycle,
    picard_lefschetz,
    product_monodromy,
    torus_bundle_mw,
)

BASES = ("disk", "sphere")


class FibrationError(ValueError):
    def __init__(self, message: str, violations: list[dict] | None = None):
        super().__init__(message)
        self.violations = violations or []


@dataclass(frozen=True)
class FibrationDescription:
    base: str
    cycles: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple((int(p), int(q)) for p, q in self.cycles))

    @property
    def genus(self) -> int | None:
        """Arithmetic genus ``n/12`` of a sphere description."""
        if self.base != "sphere" or len(self.cycles) % 12:
            return None
        return len(self.cycles) // 12

    def to_dict(self) -> dict:
        return {"base": self.base, "cycles": [list(c) for c in self.cycles]}

    @classmethod
    def from_dict(cls, data: dict) -> FibrationDescription:
        if not isinstance(data, dict) or "base" not in data or "cycles" not in data:
            raise FibrationError("fibration JSON needs 'base' and 'cycles'")
        cycles = data["cycles"]
        if not isinstance(cycles, list) or any(
            not isinstance(c, list) or len(c) != 2 or not all(isinstance(x, int) for x in c) for c in cycles
        ):
            raise FibrationError("'cycles' must be a list of integer pairs")
        return cls(str(data["base"]), tuple(tuple(c) for c in cycles))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> FibrationDescription:
        return cls.from_dict(json.loads(text))


def standard_sphere(d: int) -> FibrationDescription:
    """``d`` concatenated copies of ``[(1,0),(0,1)] x 6``."""
    return FibrationDescription("sphere", ((1, 0), (0, 1)) * 6 * d)


def validate(F: FibrationDescription) -> list[dict]:
    """Structured list of violations; empty when the description is valid."""
    out = []
    if F.base not in BASES:
        out.append({"code": "bad_base", "message": f"base must be one of {BASES}, got {F.base!r}"})
    for i, c in enumerate(F.cycles):
        try:
            check_cycle(c)
        except MonodromyError as exc:
            out.append({"code": "not_primitive", "index": i + 1, "message": str(exc)})
    if F.base == "sphere":
        n = len(F.cycles)
        if n == 0:
            out.append({"code": "empty", "message": "a sphere description needs singular fibers"})
        if n % 12:
            out.append({"code": "count_not_divisible_by_12", "message": f"{n} nodal fibers; need a multiple of 12"})
        if not any(v["code"] == "not_primitive" for v in out) and product_monodromy(F.cycles) != IDENTITY:
            out.append({
                "code": "nontrivial_monodromy",
                "message": "total monodromy around all critical values is not the identity",
                "monodromy": product_monodromy(F.cycles).tolist(),
            })
    return out


def _require(F: FibrationDescription, base: str):
    if F.base != base:
        raise FibrationError(f"expected a {base} description, got base {F.base!r}")
    problems = validate(F)
    if problems:
        raise FibrationError("invalid fibration description", problems)


# -- cocycle model ------------------------------------------------------------

def coboundary_matrix(cycles: CycleTuple) -> IntegerMatrix:
    """``v -> (v . delta_i)_i``, an ``n x 2`` matrix."""
    return IntegerMatrix([[q, -p] for p, q in cycles], 2)


def boundary_evaluation(cycles: CycleTuple) -> IntegerMatrix:
    """``c -> phi(g_n ... g_1) = sum_i A_n ... A_{i+1} c_i delta_i`` as a ``2 x n`` matrix."""
    n = len(cycles)
    cols = []
    suffix = IDENTITY
    for i in range(n - 1, -1, -1):
        cols.append(suffix.apply(cycles[i]))
        suffix = suffix @ picard_lefschetz(cycles[i])
    cols.reverse()
    return IntegerMatrix.from_columns(cols, 2)


def _quotient_of_kernel(K: IntegerMatrix, gens: IntegerMatrix) -> FgAbelianGroup:
    """``span K / span gens`` where ``gens`` lies in the saturated ``span K``."""
    coords = []
    for g in gens.columns():
        x = solve_integer(K, g)
        if x is None:
            raise AssertionError("generator does not lie in the kernel")
        coords.append(x)
    if K.ncols == 0:
        return FgAbelianGroup()
    return cokernel(IntegerMatrix.from_columns(coords, K.ncols))


@dataclass(frozen=True)
class MWReport:
    """Disk computations.

    ``relative_cokernel`` is ``MW / image(MW_rel)``; by exactness it is
    isomorphic to ``restriction_image``.
    """

    mw: FgAbelianGroup
    mw_boundary: FgAbelianGroup
    mw_relative: FgAbelianGroup
    restriction_image: FgAbelianGroup
    relative_cokernel: FgAbelianGroup
    relative_rank_formula: int
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "mw": self.mw.to_dict(),
            "mw_boundary": self.mw_boundary.to_dict(),
            "mw_relative": self.mw_relative.to_dict(),
            "restriction_image": self.restriction_image.to_dict(),
            "relative_image_index": self.relative_cokernel.to_dict(),
            "notes": list(self.notes),
        }


def mw_disk(F: FibrationDescription) -> FgAbelianGroup:
    _require(F, "disk")
    return cokernel(coboundary_matrix(F.cycles)) if F.cycles else FgAbelianGroup()


def mw_boundary_disk(F: FibrationDescription) -> FgAbelianGroup:
    _require(F, "disk")
    return torus_bundle_mw(product_monodromy(F.cycles))


def _relative_cone(cycles: CycleTuple) -> tuple[FgAbelianGroup, FgAbelianGroup]:
    """``H^1(B, dB)`` from the cone of the restriction to the boundary, and
    the cokernel of its image in ``H^1(B)``."""
    n = len(cycles)
    A = product_monodromy(cycles)
    d0 = coboundary_matrix(cycles)          # n x 2
    r1 = boundary_evaluation(cycles)        # 2 x n
    # relative 0-cochains v; 1-cochains (c, w) in Z^n + Z^2; 2-cochains Z^2
    delta0 = d0.vstack(IntegerMatrix.identity(2)) if n else IntegerMatrix.identity(2)
    delta1 = r1.hstack(-(A - IDENTITY)) if n else -(A - IDENTITY)
    K = kernel_saturated(delta1)
    rel = _quotient_of_kernel(K, delta0)
    if n == 0:
        return rel, FgAbelianGroup()
    proj = K.submatrix(range(n), range(K.ncols))
    return rel, cokernel(proj.hstack(d0))


def mw_relative_disk(F: FibrationDescription) -> FgAbelianGroup:
    """Relative group over the disk; always free (asserted)."""
    report = disk_report(F)
    return report.mw_relative


def disk_report(F: FibrationDescription) -> MWReport:
    _require(F, "disk")
    cycles = F.cycles
    A = product_monodromy(cycles)
    mw = mw_disk(F)
    mwb = torus_bundle_mw(A)
    if cycles:
        image = subquotient(boundary_evaluation(cycles), A - IDENTITY)
    else:
        image = FgAbelianGroup()
    rel, rel_coker = _relative_cone(cycles)

    # rank(coker(H^0(B) -> H^0(dB))) + rank(ker(MW -> MW_boundary))
    h0_b = 2 - rank(coboundary_matrix(cycles)) if cycles else 2
    h0_db = 2 - rank(A - IDENTITY)
    formula = (h0_db - h0_b) + (mw.free_rank - image.free_rank)
    notes = []
    if rel.free_rank != formula:
        raise AssertionError("relative rank from the cone disagrees with the exact sequence")
    if rel.torsion:
        raise AssertionError("relative Mordell-Weil group has torsion")
    notes.append("relative group: rank certified by the exact sequence, freeness checked on the cone")
    return MWReport(mw, mwb, rel, image, rel_coker, formula, tuple(notes))


@dataclass(frozen=True)
class SphereReport:
    mw: FgAbelianGroup
    genus: int
    lattice_label: str
    model_rank: int
    model_signature: tuple[int, int]
    model_even: bool
    model_determinant: int

    def __iter__(self):
        """Unpacks as ``(group, lattice_label)``."""
        return iter((self.mw, self.lattice_label))

    def to_dict(self) -> dict:
        return {
            "mw": self.mw.to_dict(),
            "genus": self.genus,
            "lattice_label": self.lattice_label,
            "model_lattice": {
                "rank": self.model_rank,
                "signature": list(self.model_signature),
                "even": self.model_even,
                "determinant": self.model_determinant,
            },
        }


def mw_sphere_group(cycles: CycleTuple) -> FgAbelianGroup:
    """Cocycles killed by the sphere relation, modulo coboundaries."""
    Z1 = kernel_saturated(boundary_evaluation(cycles))
    return _quotient_of_kernel(Z1, coboundary_matrix(cycles))


_MODEL_CACHE: dict[int, tuple] = {}


def model_label(d: int) -> tuple[str, Lattice]:
    """Label and lattice of ``Lambda(d)(e)``, classified independently of the cocycles."""
    label, Q, _, _ = _model_facts(d)
    return label, Q


def _model_facts(d: int) -> tuple[str, Lattice, tuple[int, int], bool]:
    if d not in _MODEL_CACHE:
        Q = lambda_quotient(d).quotient
        _MODEL_CACHE[d] = (classify_even_unimodular(Q), Q, signature(Q), is_even(Q))
    return _MODEL_CACHE[d]


def mw_sphere(F: FibrationDescription) -> SphereReport:
    _require(F, "sphere")
    d = F.genus
    G = mw_sphere_group(F.cycles)
    label, Q, sig, even = _model_facts(d)
    return SphereReport(G, d, label, Q.rank, sig, even, Q.determinant)


def fiber_connected_sum(F: FibrationDescription, G: FibrationDescription) -> FibrationDescription:
    """Glue two sphere fibrations along a smooth fiber: discriminants are disjoint, cycles concatenate."""
    for X in (F, G):
        if X.base != "sphere":
            raise FibrationError("fiber connected sum needs two sphere descriptions")
        problems = validate(X)
        if problems:
            raise FibrationError("invalid fibration description", problems)
    return FibrationDescription("sphere", F.cycles + G.cycles)


# -- the rational elliptic surface ----------------------------------------------

def rational_elliptic_lattice() -> Lattice:
    """``I + 9 I(-1)`` with basis ``(l, e_0, ..., e_8)`` and fiber class ``3l - sum e_i``."""
    gram = IntegerMatrix.diagonal_matrix([1] + [-1] * 9)
    labels = ("l",) + tuple(f"e{i}" for i in range(9))
    return Lattice(gram, labels, {"e": (3,) + (-1,) * 9})


def rational_elliptic_sections() -> list[tuple[int, ...]]:
    """``l - e1 - e2 - e3, e1 - e2, ..., e7 - e8`` in the basis ``(l, e_0, ..., e_8)``."""
    first = (1, 0, -1, -1, -1, 0, 0, 0, 0, 0)
    rest = []
    for i in range(1, 8):
        v = [0] * 10
        v[1 + i] = 1
        v[2 + i] = -1
        rest.append(tuple(v))
    return [first] + rest


@dataclass(frozen=True)
class RationalEllipticReport:
    quotient: IsotropicQuotient
    basis: tuple[tuple[int, ...], ...]   # quotient coordinates of the 8 section classes
    basis_gram: IntegerMatrix
    basis_determinant: int
    root_count: int
    label: str

    def __iter__(self):
        """Unpacks as ``(quotient lattice, basis)``."""
        return iter((self.quotient.quotient, list(self.basis)))

    def to_dict(self) -> dict:
        return {
            "quotient": self.quotient.quotient.to_dict(),
            "basis": [list(b) for b in self.basis],
            "basis_gram": self.basis_gram.tolist(),
            "basis_determinant": self.basis_determinant,
            "root_count": self.root_count,
            "label": self.label,
        }


def rational_elliptic_mw() -> RationalEllipticReport:

    L = rational_elliptic_lattice()
    quot = isotropic_quotient(L, L.marked["e"])
    basis = tuple(quot.project(v) for v in rational_elliptic_sections())
    B = IntegerMatrix.from_columns(basis, quot.quotient.rank)
    gram = B.T @ quot.quotient.gram @ B
    cert = certify_e8(quot.quotient)
    label = classify_even_unimodular(quot.quotient)
    return RationalEllipticReport(quot, basis, gram, determinant(B), cert.root_count, label)
