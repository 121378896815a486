"""Relative mapping classes of the equinodal disk.

Elements are normal forms ``F^m t^k`` where ``F`` is the basic fiberwise
translation and ``t`` the Dehn twist along the matching sphere ``C``.
The twist inverts ``F`` under conjugation, so

    (m1, k1) * (m2, k2) = (m1 + (-1)**k1 * m2, k1 + k2).

Homology bookkeeping uses the basis ``(e, c)`` of ``H_2(X)`` (fiber class
and sphere class, ``e.e = 0``, ``c.c = -2``, ``e.c = 0``) and the basis
``(sigma0, sigma1)`` of ``H_2(X, dX)`` given by two relative section
classes.  A mapping class acts on both groups; the difference ``h(x) - x``
of a relative class is absolute, which defines the variation
``var(h): H_2(X, dX) -> H_2(X)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .abelian import IntegerMatrix, unimodular_inverse

# pairing <sigma_i | x_j>, rows sigma0, sigma1; columns e, c
PAIRING = IntegerMatrix([[1, 0], [1, -1]])
# intersection form on (e, c)
INTERSECTION = IntegerMatrix([[0, 0], [0, -2]])

F_H2 = IntegerMatrix([[1, 2], [0, 1]])      # e -> e, c -> c + 2e
T_H2 = IntegerMatrix([[1, 0], [0, -1]])     # e -> e, c -> -c
PHI_H2 = IntegerMatrix([[1, 1], [0, 1]])    # square root of F on H_2: c -> c + e


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class H2Basis:
    """Intersection and duality data on ``(e, c)`` and ``(sigma0, sigma1)``."""

    pairing: IntegerMatrix = PAIRING
    intersection: IntegerMatrix = INTERSECTION

    def __post_init__(self):
        assert self.intersection.tolist() == [[0, 0], [0, -2]]
        assert self.pairing.tolist() == [[1, 0], [1, -1]]

    def dot(self, x, y) -> int:
        return sum(x[i] * self.intersection[i, j] * y[j] for i in range(2) for j in range(2))

    def pair(self, sigma, x) -> int:
        """``<sigma | x>`` for sigma in ``(sigma0, sigma1)`` coordinates."""
        return sum(sigma[i] * self.pairing[i, j] * x[j] for i in range(2) for j in range(2))

    def j_matrix(self) -> IntegerMatrix:
        """``H_2(X) -> H_2(X, dX)``, characterised by ``<j x | y> = x . y``."""
        return unimodular_inverse(self.pairing.T) @ self.intersection


BASIS = H2Basis()
J = BASIS.j_matrix()


@dataclass(frozen=True)
class ModPiWord:
    m: int = 0
    k: int = 0

    def __mul__(self, other: ModPiWord) -> ModPiWord:
        return mp_multiply(self, other)

    def inverse(self) -> ModPiWord:
        return ModPiWord(-((-1) ** self.k) * self.m, -self.k)

    def __pow__(self, n: int) -> ModPiWord:
        base = self if n >= 0 else self.inverse()
        out = IDENTITY_WORD
        for _ in range(abs(n)):
            out = out * base
        return out

    def to_dict(self) -> dict:
        return {"m": self.m, "k": self.k}

    def __str__(self) -> str:
        return f"F^{self.m} t^{self.k}"


IDENTITY_WORD = ModPiWord(0, 0)
F_WORD = ModPiWord(1, 0)
T_WORD = ModPiWord(0, 1)
# twist along the sphere C_1 = Phi(C); F = tau(C_1) tau(C)^{-1}
T1_WORD = ModPiWord(1, 1)


def mp_multiply(w1: ModPiWord, w2: ModPiWord) -> ModPiWord:
    sign = -1 if w1.k % 2 else 1
    return ModPiWord(w1.m + sign * w2.m, w1.k + w2.k)


def to_mod_x(w: ModPiWord) -> tuple[int, int]:
    """Image in the infinite dihedral group: the twist has order two there."""
    return w.m, w.k % 2


def mod_x_multiply(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    sign = -1 if a[1] else 1
    return a[0] + sign * b[0], (a[1] + b[1]) % 2


_TOKEN = re.compile(r"\s*(F|t)(')?(?:\^(-?\d+))?\s*[*.]?")


def parse_word(text: str) -> ModPiWord:
    """Parse words like ``"F t F'"``, ``"F^3 t'"``, ``"tFt'"``; ``"1"`` or ``""`` is the identity."""
    s = text.strip()
    if s in ("", "1", "id"):
        return IDENTITY_WORD
    out = IDENTITY_WORD
    pos = 0
    while pos < len(s):
        match = _TOKEN.match(s, pos)
        if not match or match.end() == pos:
            raise WordError(f"cannot parse word {text!r} at position {pos}")
        gen = F_WORD if match.group(1) == "F" else T_WORD
        power = int(match.group(3)) if match.group(3) is not None else 1
        if match.group(2):
            power = -power
        out = out * gen ** power
        pos = match.end()
    return out


# -- homology actions -----------------------------------------------------------

def h2_action(w: ModPiWord) -> IntegerMatrix:
    """Matrix on ``(e, c)`` (columns are images)."""
    return IntegerMatrix([[1, 2 * w.m], [0, 1]]) @ T_H2 ** (w.k % 2)


def relative_action_from_absolute(H: IntegerMatrix) -> IntegerMatrix:
    """Action on ``(sigma0, sigma1)`` preserving the duality pairing."""
    P = PAIRING
    return (P @ unimodular_inverse(H) @ unimodular_inverse(P)).T


@dataclass(frozen=True)
class Action:
    """Absolute action ``H``, relative action ``R`` and variation ``V``."""

    H: IntegerMatrix
    R: IntegerMatrix
    V: IntegerMatrix

    def __matmul__(self, other: Action) -> Action:
        # (h1 h2) x - x = var(h1)(h2 x) + var(h2)(x)
        return Action(self.H @ other.H, self.R @ other.R, self.V @ other.R + other.V)

    def inverse(self) -> Action:
        Rinv = unimodular_inverse(self.R)
        return Action(unimodular_inverse(self.H), Rinv, -(self.V @ Rinv))

    def check(self) -> None:
        """``H = I + V j`` and ``R = I + j V``."""
        I2 = IntegerMatrix.identity(2)
        assert self.H == I2 + self.V @ J
        assert self.R == I2 + J @ self.V


def twist_action(sphere: tuple[int, int]) -> Action:
    """Dehn twist along a ``(-2)``-sphere with class ``sphere`` in ``(e, c)``.

    Its variation is ``x -> <x | s> s``.
    """
    s = sphere
    assert BASIS.dot(s, s) == -2
    cols = []
    for sigma in ((1, 0), (0, 1)):
        p = BASIS.pair(sigma, s)
        cols.append((p * s[0], p * s[1]))
    V = IntegerMatrix.from_columns(cols, 2)
    I2 = IntegerMatrix.identity(2)
    return Action(I2 + V @ J, I2 + J @ V, V)


ACTION_T = twist_action((0, 1))
ACTION_T1 = twist_action((1, 1))
ACTION_F = ACTION_T1 @ ACTION_T.inverse()
ACTION_ID = Action(IntegerMatrix.identity(2), IntegerMatrix.identity(2), IntegerMatrix.zeros(2, 2))


def _power(a: Action, n: int) -> Action:
    base = a if n >= 0 else a.inverse()
    out = ACTION_ID
    for _ in range(abs(n)):
        out = out @ base
    return out


def action(w: ModPiWord) -> Action:
    return _power(ACTION_F, w.m) @ _power(ACTION_T, w.k)


def relative_action(w: ModPiWord) -> IntegerMatrix:
    return action(w).R


def variation(w: ModPiWord) -> IntegerMatrix:
    """``var(w)``: columns are the images of ``sigma0, sigma1`` in ``(e, c)``."""
    return action(w).V


def eichler_variation(sigma) -> tuple[int, int]:
    """``<x,e> c - <x,c> e + <x,e> e`` for ``x`` in ``(sigma0, sigma1)`` coordinates."""
    xe = BASIS.pair(sigma, (1, 0))
    xc = BASIS.pair(sigma, (0, 1))
    return (-xc + xe, xe)


# -- sections and spheres -------------------------------------------------------

def sphere_class(n: int) -> tuple[int, int]:
    """Class ``c + n e`` of the sphere ``Phi^n(C)``."""
    return (n, 1)


def section_class(m: int) -> tuple[int, int]:
    """``sigma_m = Phi^m(sigma0)`` in ``(sigma0, sigma1)`` coordinates."""
    R = relative_action_from_absolute(PHI_H2)
    M = R ** m if m >= 0 else unimodular_inverse(R) ** (-m)
    return M.apply((1, 0))


def section_sphere_pairing(m: int, n: int) -> int:
    """Intersection number of the section ``sigma_m`` with the sphere ``C_n``: ``m - n``.

    The duality pairing from the table gives ``<sigma_m | c + n e> = n - m``;
    the two conventions differ by an overall sign, which is checked here.
    """
    table = BASIS.pair(section_class(m), sphere_class(n))
    if table != n - m:
        raise AssertionError("section bookkeeping disagrees with the pairing table")
    return m - n


def report(w: ModPiWord) -> dict:
    a = action(w)
    return {
        "normal_form": w.to_dict(),
        "mod_x": {"m": to_mod_x(w)[0], "k": to_mod_x(w)[1]},
        "h2_action": h2_action(w).tolist(),
        "relative_action": a.R.tolist(),
        "variation": a.V.tolist(),
    }
