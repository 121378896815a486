import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smoothmw.abelian import FgAbelianGroup, IntegerMatrix, determinant, is_primitive
from smoothmw.lattice import (
    Isometry,
    Lattice,
    DegenerateLatticeError,
    LatticeError,
    a_lattice,
    certify_e8,
    classify_even_unimodular,
    classify_even_unimodular_indefinite,
    discriminant_group,
    e8,
    eichler,
    eichler_from_class,
    hyperbolic_plane,
    is_even,
    is_negative_definite,
    isotropic_quotient,
    lambda_lattice,
    lambda_quotient,
    make_standard,
    minus_two_basis,
    recover_eichler_class,
    reflection,
    roots,
    signature,
    spinor_orientation_sign,
)
from smoothmw.fibration import rational_elliptic_lattice


def numpy_signature(L):
    """Floating-point oracle, fine for the small integer Gram matrices used here."""
    ev = np.linalg.eigvalsh(np.array(L.gram.tolist(), dtype=float))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())


def weyl_orbit_roots(L):
    """Closure of the simple roots under simple reflections: an oracle for root enumeration."""
    n = L.rank
    simple = [L.unit(i) for i in range(n)]
    refl = [reflection(L, s) for s in simple]
    seen = set(simple)
    stack = list(simple)
    while stack:
        v = stack.pop()
        for r in refl:
            w = r(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# -- construction -------------------------------------------------------------

def test_make_standard_examples():
    assert make_standard("U").gram.tolist() == [[0, 1], [1, 0]]
    L1 = make_standard("Lambda(1)")
    assert L1.rank == 10 and signature(L1) == (1, 9)
    assert L1.norm(L1.marked["e"]) == 0
    E = make_standard("E8(-1)")
    assert E.rank == 8 and is_even(E) and E.determinant == 1 and is_negative_definite(E)


def test_make_standard_sums_and_unicode_minus():
    L = make_standard("2E8(−1) ⊥ 2U")
    assert L.rank == 20 and signature(L) == (2, 18)
    assert make_standard("2E8(-1) + 2U").gram == L.gram


@pytest.mark.parametrize("bad", ["", "V", "E7(-1)", "Lambda(0)", "Lambda(1) + U", "0U"])
def test_make_standard_rejects(bad):
    with pytest.raises(LatticeError):
        make_standard(bad)


def test_json_round_trip_and_validation():
    L = lambda_lattice(1)
    assert Lattice.from_json(L.to_json()).gram == L.gram
    with pytest.raises(LatticeError):
        Lattice.from_dict({"gram": [[1, 2], [3, 4]]})
    with pytest.raises(LatticeError):
        Lattice.from_dict({"gram": [[1, 2]]})


# -- invariants -----------------------------------------------------------------

@pytest.mark.parametrize("expr,sig", [
    ("U", (1, 1)), ("Lambda(2)", (3, 19)), ("E8(-1)", (0, 8)), ("Lambda(3)", (5, 29)),
    ("I(+1)", (1, 0)), ("A2(-1) + U", (1, 3)),
])
def test_signature_examples(expr, sig):
    L = make_standard(expr)
    assert signature(L) == sig == numpy_signature(L)


@given(st.lists(st.integers(-6, 6), min_size=9, max_size=9))
def test_signature_matches_numpy(entries):
    a = [entries[0:3], entries[3:6], entries[6:9]]
    sym = [[a[i][j] + a[j][i] for j in range(3)] for i in range(3)]
    L = Lattice(IntegerMatrix(sym))
    if determinant(L.gram) == 0:
        with pytest.raises(DegenerateLatticeError):
            signature(L)
        return
    assert signature(L) == numpy_signature(L)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lambda_signature(d):
    assert signature(lambda_lattice(d)) == (2 * d - 1, 10 * d - 1)
    assert lambda_lattice(d).is_unimodular()


def test_is_even_examples():
    assert is_even(hyperbolic_plane())
    assert not is_even(make_standard("I(+1)"))
    assert not is_even(lambda_lattice(1))
    assert is_even(lambda_lattice(2))


def test_discriminant_groups():
    assert discriminant_group(e8()) == FgAbelianGroup()
    assert discriminant_group(lambda_lattice(2)) == FgAbelianGroup()
    assert discriminant_group(a_lattice(1)) == FgAbelianGroup(0, (2,))
    assert discriminant_group(a_lattice(2)) == FgAbelianGroup(0, (3,))


# -- isotropic quotients ----------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2])
def test_lambda_quotient(d):
    Q = lambda_quotient(d).quotient
    assert Q.rank == 12 * d - 4
    assert is_even(Q) and Q.is_unimodular()
    assert signature(Q) == (2 * d - 2, 10 * d - 2)


def test_quotient_of_elliptic_class_is_e8():
    L = rational_elliptic_lattice()
    e = L.marked["e"]
    assert L.norm(e) == 0 and is_primitive(e)
    Q = isotropic_quotient(L, e).quotient
    assert Q.rank == 8 and is_even(Q) and Q.is_unimodular() and is_negative_definite(Q)
    assert classify_even_unimodular(Q) == "E8(-1)"


def test_quotient_of_conic_class_is_odd():
    L = rational_elliptic_lattice()
    e_conic = (1, 0, -1) + (0,) * 7
    Q = isotropic_quotient(L, e_conic).quotient
    assert Q.rank == 8 and not is_even(Q)
    assert Q.is_unimodular() and is_negative_definite(Q)
    # same invariants as 8I(-1): 16 vectors of norm -1
    assert len(roots(Q, -1)) == 16


def test_quotient_errors():
    L = lambda_lattice(1)
    with pytest.raises(LatticeError):
        isotropic_quotient(L, (1,) + (0,) * 9)       # not isotropic
    with pytest.raises(LatticeError):
        isotropic_quotient(L, (2, -2) + (0,) * 8)    # not primitive


# -- roots ----------------------------------------------------------------------

def test_e8_roots_match_weyl_orbit():
    L = e8()
    rts = roots(L, -2)
    assert len(rts) == 240
    assert set(rts) == weyl_orbit_roots(L)
    cert = certify_e8(L)
    assert cert.ok and cert.dynkin == "E8"


def test_small_root_systems():
    assert roots(a_lattice(1), -2) == [(-1,), (1,)]
    A2 = a_lattice(2)
    brute = sorted(v for v in product(range(-3, 4), repeat=2) if A2.norm(v) == -2)
    assert roots(A2, -2) == brute and len(brute) == 6


def test_roots_need_definite():
    with pytest.raises(LatticeError):
        roots(hyperbolic_plane(), -2)


def test_reflection_permutes_e8_roots():
    L = e8()
    rts = set(roots(L, -2))
    for i in range(8):
        r = reflection(L, L.unit(i))
        assert {r(v) for v in rts} == rts


# -- classification ------------------------------------------------------------

def test_classification_labels():
    assert classify_even_unimodular_indefinite(make_standard("2E8(-1) + 2U")) == "2E8(-1) ⊥ 2U"
    assert classify_even_unimodular_indefinite(hyperbolic_plane()) == "U"
    assert classify_even_unimodular(e8()) == "E8(-1)"
    assert classify_even_unimodular(lambda_quotient(3).quotient) == "3E8(-1) ⊥ 4U"
    with pytest.raises(LatticeError):
        classify_even_unimodular(lambda_lattice(1))     # odd
    with pytest.raises(LatticeError):
        classify_even_unimodular(a_lattice(2))          # not unimodular


# -- isometries -------------------------------------------------------------------

def test_eichler_examples():
    L = rational_elliptic_lattice()
    e = L.marked["e"]
    c = (0, 0, 1, -1) + (0,) * 6
    g = eichler(L, e, c)
    M, G = g.matrix, L.gram
    assert M.T @ G @ M == G
    assert g(e) == e
    assert eichler(L, e, (0,) * 10).is_identity()


def test_eichler_errors():
    L = lambda_lattice(1)
    e = L.marked["e"]
    with pytest.raises(LatticeError):
        eichler(L, e, (1,) + (0,) * 9)     # not orthogonal to e
    with pytest.raises(LatticeError):
        eichler(L, (1,) + (0,) * 9, e)     # first vector not isotropic


def test_reflection_examples():
    L = e8()
    c = L.unit(3)
    r = reflection(L, c)
    assert (r @ r).is_identity()
    assert r(c) == tuple(-x for x in c)
    with pytest.raises(LatticeError):
        reflection(hyperbolic_plane(), (1, 0))


def test_isometry_rejects_non_isometries():
    with pytest.raises(LatticeError):
        Isometry(hyperbolic_plane(), IntegerMatrix([[1, 1], [0, 1]]))


def _quotient_vectors(n, rng, k=3):
    return tuple(rng.randint(-k, k) for _ in range(n))


@pytest.mark.parametrize("d", [1, 2])
def test_eichler_group_law_and_recovery(d):
    rng = random.Random(d)
    quot = lambda_quotient(d)
    n = quot.quotient.rank
    for _ in range(15):
        a, b = _quotient_vectors(n, rng), _quotient_vectors(n, rng)
        Ea, Eb = eichler_from_class(quot, a), eichler_from_class(quot, b)
        ab = tuple(x + y for x, y in zip(a, b))
        assert Ea @ Eb == eichler_from_class(quot, ab)
        assert recover_eichler_class(quot, Ea) == a
        assert Ea.inverse() == eichler_from_class(quot, tuple(-x for x in a))


def test_recover_rejects_non_eichler():
    quot = lambda_quotient(1)
    L = quot.ambient
    with pytest.raises(LatticeError):
        recover_eichler_class(quot, reflection(L, (0, 0, 1) + (0,) * 7))


# -- spinor orientation -----------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2])
def test_spinor_examples(d):
    L = lambda_lattice(d)
    n = L.rank
    assert spinor_orientation_sign(L, Isometry.identity(L)) == 1
    minus = Isometry(L, IntegerMatrix.identity(n).scale(-1))
    assert spinor_orientation_sign(L, minus) == -1
    r = reflection(L, (0, 0, 1) + (0,) * (n - 3))
    assert spinor_orientation_sign(L, r) == 1


def test_spinor_is_multiplicative():
    rng = random.Random(7)
    L = lambda_lattice(1)
    quot = lambda_quotient(1)
    gens = [reflection(L, (0, 0) + v) for v in minus_two_basis(1)[1]]
    gens += [eichler_from_class(quot, _quotient_vectors(8, rng, 1)) for _ in range(4)]
    # a reflection in a positive vector flips the orientation
    gens.append(Isometry(L, IntegerMatrix.diagonal_matrix([-1] + [1] * 9)))
    for _ in range(30):
        g, h = rng.choice(gens), rng.choice(gens)
        assert spinor_orientation_sign(L, g @ h) == spinor_orientation_sign(L, g) * spinor_orientation_sign(L, h)
    assert spinor_orientation_sign(L, gens[-1]) == -1


# -- (-2)-bases -------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2, 3])
def test_minus_two_basis(d):
    M, basis = minus_two_basis(d)
    assert len(basis) == 12 * d - 4
    assert all(M.norm(v) == -2 for v in basis)
    assert abs(determinant(IntegerMatrix.from_columns(basis, M.rank))) == 1
