"""Monodromy of nodal genus-one fibrations on ``H_1(T^2) = Z^2``.

Conventions, fixed once for the whole package:

* the fiber basis ``(e1, e2)`` has ``e1 . e2 = +1``, so
  ``(x, y) . (p, q) = x q - y p``;
* a vanishing cycle ``d`` acts by the transvection ``a -> a + (a . d) d``;
* in a tuple of cycles the first one acts first, so the total monodromy
  of ``(d_1, ..., d_n)`` is ``T_n ... T_1``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .abelian import FgAbelianGroup, IntegerMatrix, cokernel, determinant

Cycle = tuple[int, int]
CycleTuple = tuple[Cycle, ...]

IDENTITY = IntegerMatrix.identity(2)


class MonodromyError(ValueError):
    pass


def pairing(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def check_cycle(delta: Sequence[int]) -> Cycle:
    if len(delta) != 2:
        raise MonodromyError(f"vanishing cycle {tuple(delta)} is not a pair")
    p, q = int(delta[0]), int(delta[1])
    if gcd(p, q) != 1:
        raise MonodromyError(f"vanishing cycle {(p, q)} is not primitive")
    return p, q


def as_cycle_tuple(cycles: Iterable[Sequence[int]]) -> CycleTuple:
    return tuple(check_cycle(c) for c in cycles)


def picard_lefschetz(delta: Sequence[int]) -> IntegerMatrix:
    p, q = check_cycle(delta)
    return IntegerMatrix([[1 + p * q, -p * p], [q * q, 1 - p * q]])


def inverse_sl2(A: IntegerMatrix) -> IntegerMatrix:
    (a, b), (c, d) = A.tolist()
    return IntegerMatrix([[d, -b], [-c, a]])


def check_sl2(A: IntegerMatrix) -> IntegerMatrix:
    if A.shape != (2, 2) or determinant(A) != 1:
        raise MonodromyError("matrix is not in SL(2, Z)")
    return A


def product_monodromy(cycles: Iterable[Sequence[int]]) -> IntegerMatrix:
    A = IDENTITY
    for d in cycles:
        A = picard_lefschetz(d) @ A
    return A


def trace(A: IntegerMatrix) -> int:
    return A[0, 0] + A[1, 1]


@dataclass(frozen=True)
class SL2Class:
    kind: str  # identity | minus_identity | elliptic | parabolic | hyperbolic
    trace: int
    order: int | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "trace": self.trace}
        if self.order is not None:
            out["order"] = self.order
        return out

    def __str__(self) -> str:
        if self.kind == "elliptic":
            return f"elliptic of order {self.order}"
        return self.kind


def classify_sl2(A: IntegerMatrix) -> SL2Class:
    check_sl2(A)
    t = trace(A)
    if A == IDENTITY:
        return SL2Class("identity", t, 1)
    if A == -IDENTITY:
        return SL2Class("minus_identity", t, 2)
    if abs(t) < 2:
        B, k = A, 1
        while B != IDENTITY:
            B, k = B @ A, k + 1
            assert k <= 6
        return SL2Class("elliptic", t, k)
    if abs(t) == 2:
        return SL2Class("parabolic", t)
    return SL2Class("hyperbolic", t)


def two_nodal_trace(p: int, q: int) -> int:
    """Trace of the monodromy around two nodes with cycles ``(1, 0)`` then ``(p, q)``.

    Computed by multiplying the transvections and checked against ``2 - q^2``.
    """
    if gcd(p, q) != 1:
        raise MonodromyError(f"{(p, q)} is not primitive")
    t = trace(product_monodromy([(1, 0), (p, q)]))
    assert t == 2 - q * q
    return t


def two_nodal_report(p: int, q: int) -> dict:
    """Trace and type of a two-nodal disk's boundary monodromy.

    ``|q| == 2`` gives trace ``-2``: a parabolic element with negative trace,
    not a hyperbolic one; the report marks it as the boundary case.
    """
    A = product_monodromy([(1, 0), (p, q)])
    cls = classify_sl2(A)
    return {
        "p": p,
        "q": q,
        "trace": two_nodal_trace(p, q),
        "class": cls.to_dict(),
        "trace_at_most_minus_3": cls.trace <= -3,
        "boundary_case": abs(q) == 2,
    }


def torus_bundle_mw(A: IntegerMatrix) -> FgAbelianGroup:
    """Coinvariants ``coker(A - I)`` of a torus bundle over the circle."""
    check_sl2(A)
    return cokernel(A - IDENTITY)


# -- Hurwitz moves ------------------------------------------------------------

def hurwitz_move(cycles: Sequence[Sequence[int]], i: int, direction: str) -> CycleTuple:
    """Elementary braid move on the pair at positions ``i, i+1`` (1-based).

    ``right``: ``(a, b) -> (b, T_b a)``; ``left`` is its inverse,
    ``(a, b) -> (T_a^{-1} b, a)``.  Both keep the total monodromy.
    """
    t = as_cycle_tuple(cycles)
    if not 1 <= i < len(t):
        raise MonodromyError(f"move index {i} out of range for {len(t)} cycles")
    a, b = t[i - 1], t[i]
    if direction == "right":
        new = (b, picard_lefschetz(b).apply(a))
    elif direction == "left":
        new = (inverse_sl2(picard_lefschetz(a)).apply(b), a)
    else:
        raise MonodromyError(f"unknown direction {direction!r}")
    return t[: i - 1] + new + t[i + 1:]


def parse_move(token: str) -> tuple[int, str]:
    """``"R3"`` -> ``(3, "right")``, ``"L1"`` -> ``(1, "left")``."""
    token = token.strip()
    if len(token) < 2 or token[0] not in "RL" or not token[1:].isdigit():
        raise MonodromyError(f"bad move {token!r}; expected R<i> or L<i>")
    return int(token[1:]), "right" if token[0] == "R" else "left"


def apply_moves(cycles: Sequence[Sequence[int]], word: Sequence[str]) -> CycleTuple:
    t = as_cycle_tuple(cycles)
    for tok in word:
        i, direction = parse_move(tok)
        t = hurwitz_move(t, i, direction)
    return t


def normalize_cycle(delta: Sequence[int]) -> Cycle:
    """Representative of ``+-delta`` with first nonzero entry positive."""
    p, q = delta
    return (p, q) if (p > 0 or (p == 0 and q > 0)) else (-p, -q)


def same_vanishing_homology(a: Sequence[int], b: Sequence[int]) -> bool:
    return normalize_cycle(a) == normalize_cycle(b)


def equinodal_pairs(cycles: Sequence[Sequence[int]]) -> list[int]:
    """1-based positions ``i`` where cycles ``i`` and ``i+1`` span the same line."""
    return [i + 1 for i in range(len(cycles) - 1) if same_vanishing_homology(cycles[i], cycles[i + 1])]


@dataclass(frozen=True)
class EquinodalHit:
    moves: tuple[str, ...]
    index: int
    cycle: Cycle
    cycles: CycleTuple

    def to_dict(self) -> dict:
        return {
            "moves": list(self.moves),
            "pair_index": self.index,
            "class": list(self.cycle),
            "cycles": [list(c) for c in self.cycles],
        }


def find_equinodal_pairs(cycles: Sequence[Sequence[int]], max_moves: int,
                         stop_at_first_depth: bool = True,
                         max_states: int = 2_000_000) -> list[EquinodalHit]:
    """Breadth-first search of the Hurwitz orbit for adjacent equinodal pairs.

    States are tuples with each cycle normalised up to sign (the
    transvection only sees ``+-delta``).  Moves are tried in the order
    ``R1, L1, R2, L2, ...`` so the result order is (depth, move word).
    With ``stop_at_first_depth`` the search ends after the first depth
    that produced a hit.  A bounded search: an empty result proves nothing.
    """
    start = tuple(normalize_cycle(c) for c in as_cycle_tuple(cycles))
    n = len(start)
    moves = [f"{s}{i}" for i in range(1, n) for s in "RL"]
    seen = {start}
    frontier: deque[tuple[CycleTuple, tuple[str, ...]]] = deque([(start, ())])
    hits: list[EquinodalHit] = []
    for depth in range(max_moves + 1):
        for state, word in frontier:
            for idx in equinodal_pairs(state):
                hits.append(EquinodalHit(word, idx, state[idx - 1], state))
        if hits and stop_at_first_depth:
            break
        if depth == max_moves:
            break
        nxt: deque = deque()
        for state, word in frontier:
            for m in moves:
                i, direction = parse_move(m)
                new = tuple(normalize_cycle(c) for c in hurwitz_move(state, i, direction))
                if new not in seen:
                    if len(seen) >= max_states:
                        raise MonodromyError("Hurwitz search exceeded its state budget")
                    seen.add(new)
                    nxt.append((new, word + (m,)))
        frontier = nxt
    return hits


def cycles_to_json(cycles: Sequence[Sequence[int]]) -> str:
    return json.dumps([list(c) for c in cycles])


def cycles_from_json(text: str) -> CycleTuple:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("cycles")
    if not isinstance(data, list):
        raise MonodromyError("expected a JSON list of integer pairs")
    for c in data:
        if not isinstance(c, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
            raise MonodromyError(f"vanishing cycle {c!r} is not a pair of integers")
    return as_cycle_tuple(data)
