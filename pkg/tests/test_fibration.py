import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from smoothmw.abelian import FgAbelianGroup
from smoothmw.fibration import (
    FibrationDescription,
    FibrationError,
    disk_report,
    fiber_connected_sum,
    mw_boundary_disk,
    mw_disk,
    mw_relative_disk,
    mw_sphere,
    rational_elliptic_lattice,
    rational_elliptic_mw,
    rational_elliptic_sections,
    standard_sphere,
    validate,
)
from smoothmw.lattice import e8_cartan, is_even, is_negative_definite
from smoothmw.monodromy import hurwitz_move


def disk(*cycles):
    return FibrationDescription("disk", tuple(cycles))


def span_cokernel_oracle(a, b):
    """``Z^2 / (Z a + Z b)`` without Smith forms.

    Full rank: the order is ``|det|`` and the exponent is the least ``k``
    with ``k Z^2`` inside the span (Cramer's rule).  Lower rank: the
    group is ``Z^(2-r)`` plus ``Z/g`` where ``g`` is the content.
    """
    det = a[0] * b[1] - a[1] * b[0]
    if det:
        n = abs(det)

        def in_span(v):
            x = Fraction(v[0] * b[1] - v[1] * b[0], det)
            y = Fraction(a[0] * v[1] - a[1] * v[0], det)
            return x.denominator == 1 and y.denominator == 1

        k = next(k for k in range(1, n + 1) if in_span((k, 0)) and in_span((0, k)))
        tors = tuple(t for t in (n // k, k) if t > 1)
        return FgAbelianGroup(0, tors)
    g = gcd(gcd(*a), gcd(*b))
    if g == 0:
        return FgAbelianGroup(2)
    return FgAbelianGroup(1, (g,) if g > 1 else ())


def primitive(bound):
    return st.tuples(st.integers(-bound, bound), st.integers(-bound, bound)).filter(
        lambda v: gcd(*v) == 1
    )


# -- validation -----------------------------------------------------------------

def test_validate_examples():
    assert validate(disk((1, 0), (1, 0))) == []
    assert validate(standard_sphere(1)) == []
    assert standard_sphere(1).genus == 1
    codes = [v["code"] for v in validate(FibrationDescription("sphere", ((1, 0),) * 12))]
    assert codes == ["nontrivial_monodromy"]


def test_validate_other_violations():
    codes = {v["code"] for v in validate(FibrationDescription("torus", ()))}
    assert "bad_base" in codes
    codes = {v["code"] for v in validate(FibrationDescription("sphere", ((1, 0), (0, 1)) * 5))}
    assert "count_not_divisible_by_12" in codes
    codes = {v["code"] for v in validate(disk((2, 0)))}
    assert codes == {"not_primitive"}
    assert {v["code"] for v in validate(FibrationDescription("sphere", ()))} >= {"empty"}


def test_invalid_descriptions_raise():
    with pytest.raises(FibrationError) as info:
        mw_sphere(FibrationDescription("sphere", ((1, 0),) * 12))
    assert info.value.violations
    with pytest.raises(FibrationError):
        mw_disk(standard_sphere(1))
    with pytest.raises(FibrationError):
        FibrationDescription.from_dict({"base": "disk", "cycles": [[1, 0, 0]]})


def test_json_round_trip():
    F = disk((1, 0), (-1, 2))
    assert FibrationDescription.from_json(F.to_json()) == F


# -- disk groups ----------------------------------------------------------------

def test_mw_disk_examples():
    assert mw_disk(disk((1, 0), (1, 0))) == FgAbelianGroup(1)
    assert mw_disk(disk((1, 0), (0, 1))) == FgAbelianGroup()
    assert mw_disk(disk((1, 0), (2, 1))) == FgAbelianGroup()
    assert mw_disk(disk((1, 0), (-1, 0))) == FgAbelianGroup(1)
    assert mw_disk(disk()) == FgAbelianGroup()


@given(primitive(10), primitive(10))
def test_mw_disk_matches_span_oracle(a, b):
    assert mw_disk(disk(a, b)) == span_cokernel_oracle(a, b)


def test_boundary_examples():
    assert mw_boundary_disk(disk((1, 0), (1, 0))) == FgAbelianGroup(1, (2,))
    assert mw_boundary_disk(disk((1, 0), (0, 1))) == FgAbelianGroup()
    assert mw_boundary_disk(disk()) == FgAbelianGroup(2)


def test_relative_examples():
    rep = disk_report(disk((1, 0), (1, 0)))
    assert rep.mw_relative == FgAbelianGroup(1)
    assert rep.restriction_image == FgAbelianGroup(0, (2,))
    assert rep.restriction_image.order == 2
    assert mw_relative_disk(disk((1, 0), (0, 1))) == FgAbelianGroup()
    assert mw_relative_disk(disk()) == FgAbelianGroup()


@pytest.mark.parametrize("cycles,mw,boundary", [
    (((1, 0), (1, 2)), FgAbelianGroup(0, (2,)), FgAbelianGroup(0, (2, 2))),
    (((1, 0), (1, 3)), FgAbelianGroup(0, (3,)), FgAbelianGroup(0, (9,))),
    (((1, 0), (0, 1)) * 3, FgAbelianGroup(4), FgAbelianGroup(0, (2, 2))),
])
def test_more_disks(cycles, mw, boundary):
    rep = disk_report(disk(*cycles))
    assert rep.mw == mw and rep.mw_boundary == boundary


def _divides_into(sub: FgAbelianGroup, G: FgAbelianGroup) -> bool:
    """Invariant-factor test for ``sub`` being isomorphic to a subgroup of ``G``."""
    if sub.free_rank > G.free_rank:
        return False
    # pad the finite parts; free summands of G can host any cyclic piece
    a = list(reversed(sub.torsion))
    b = list(reversed(G.torsion)) + [0] * (G.free_rank - sub.free_rank)
    if len(a) > len(b):
        return False
    return all(y == 0 or y % x == 0 for x, y in zip(a, b))


@given(st.lists(primitive(4), min_size=0, max_size=5))
def test_exact_sequence_consistency(cycles):
    rep = disk_report(disk(*cycles))
    kernel_rank = rep.mw.free_rank - rep.restriction_image.free_rank
    assert rep.mw_relative.free_rank >= kernel_rank
    assert rep.mw_relative.torsion == ()
    assert rep.mw_relative.free_rank == rep.relative_rank_formula
    assert _divides_into(rep.restriction_image, rep.mw_boundary)
    # MW / image(relative) is the restriction image
    assert rep.relative_cokernel == rep.restriction_image


# -- spheres ---------------------------------------------------------------------

@pytest.mark.parametrize("d,label", [(1, "E8(-1)"), (2, "2E8(-1) ⊥ 2U"), (3, "3E8(-1) ⊥ 4U")])
def test_sphere_groups(d, label):
    G, got_label = mw_sphere(standard_sphere(d))
    assert G == FgAbelianGroup(12 * d - 4)
    assert got_label == label
    rep = mw_sphere(standard_sphere(d))
    assert rep.model_rank == G.free_rank
    assert rep.model_even and abs(rep.model_determinant) == 1


def test_fiber_connected_sum_rank():
    one, two = standard_sphere(1), standard_sphere(2)
    r1, r2 = mw_sphere(one).mw.free_rank, mw_sphere(two).mw.free_rank
    assert mw_sphere(fiber_connected_sum(one, one)).mw.free_rank == r1 + r1 + 4 == 20
    assert mw_sphere(fiber_connected_sum(one, two)).mw.free_rank == r1 + r2 + 4 == 32
    with pytest.raises(FibrationError):
        fiber_connected_sum(one, disk((1, 0)))


def _random_moves(cycles, rng, k):
    t = tuple(cycles)
    for _ in range(k):
        t = hurwitz_move(t, rng.randint(1, len(t) - 1), rng.choice(["left", "right"]))
    return t


@pytest.mark.parametrize("cycles", [
    ((1, 0), (1, 0)), ((1, 0), (0, 1)), ((1, 0), (1, 3)), ((1, 0), (0, 1)) * 3,
])
def test_disk_outputs_hurwitz_invariant(cycles):
    rng = random.Random(len(cycles))
    base = disk_report(disk(*cycles)).to_dict()
    for _ in range(10):
        moved = _random_moves(cycles, rng, 12)
        assert disk_report(disk(*moved)).to_dict() == base


def test_sphere_outputs_hurwitz_invariant():
    rng = random.Random(3)
    F = standard_sphere(1)
    base = mw_sphere(F).to_dict()
    for _ in range(5):
        moved = FibrationDescription("sphere", _random_moves(F.cycles, rng, 20))
        assert mw_sphere(moved).to_dict() == base


# -- rational elliptic surface ------------------------------------------------------

def test_rational_elliptic():
    L = rational_elliptic_lattice()
    e = L.marked["e"]
    assert L.norm(e) == 0
    first = rational_elliptic_sections()[0]
    assert L.norm(first) == -2
    rep = rational_elliptic_mw()
    Q, basis = rep
    assert Q.rank == 8 and is_even(Q) and Q.is_unimodular() and is_negative_definite(Q)
    assert rep.root_count == 240 and rep.label == "E8(-1)"
    assert abs(rep.basis_determinant) == 1
    assert len(basis) == 8
    # Gram of the listed basis is minus a Cartan matrix of type E8 (same graph, maybe relabelled)
    G = rep.basis_gram
    assert all(G[i, i] == -2 for i in range(8))
    edges = sorted(tuple(sorted((i, j))) for i in range(8) for j in range(i + 1, 8) if G[i, j])
    assert all(G[i, j] == 1 for i, j in edges)
    C = e8_cartan()
    ref = sorted(tuple(sorted((i, j))) for i in range(8) for j in range(i + 1, 8) if C[i, j])
    degree = lambda es: sorted(sum(1 for e in es if v in e) for v in range(8))
    assert len(edges) == len(ref) == 7 and degree(edges) == degree(ref)
