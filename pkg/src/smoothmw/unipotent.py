"""Unipotent isometries of ``Lambda(d)`` and their isotropic fixed vectors.

Words are products of generators acting on ``Lambda(d)`` (rightmost acts
first).  Generators:

* ``E<i>``: the Eichler transformation ``E(e ^ c_i)`` for the ``i``-th
  (1-based) ``(-2)``-vector of the standard basis of the quotient,
  lifted by zeros in the first two coordinates;
* ``R<i>``: the reflection in the same vector;
* ``E[v]`` / ``R[v]``: the same with an explicit ambient vector ``v``;
* a trailing ``'`` inverts, ``^n`` takes a power.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from math import gcd
from typing import Iterator, Sequence

from .abelian import IntegerMatrix, column_hermite_form, is_primitive, kernel_saturated
from .lattice import (
    Isometry,
    Lattice,
    LatticeError,
    eichler,
    lambda_lattice,
    minus_two_basis,
    reflection,
)


class NotUnipotentError(ValueError):
    pass


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class UnipotentCertificate:
    nilpotency_index: int
    fixed_lattice: IntegerMatrix  # saturated basis of ker(g - I), as columns

    @property
    def fixed_rank(self) -> int:
        return self.fixed_lattice.ncols

    def to_dict(self) -> dict:
        return {
            "nilpotency_index": self.nilpotency_index,
            "fixed_rank": self.fixed_rank,
            "fixed_lattice": [list(c) for c in self.fixed_lattice.columns()],
        }


def is_unipotent(g: Isometry) -> UnipotentCertificate | None:
    """Certificate with the least ``k`` such that ``(g - I)^k = 0``, or ``None``."""
    n = g.lattice.rank
    N = g.matrix - IntegerMatrix.identity(n)
    P = N
    for k in range(1, n + 1):
        if P.is_zero():
            return UnipotentCertificate(k, kernel_saturated(N))
        P = P @ N
    return None


def _require_unipotent(g: Isometry) -> UnipotentCertificate:
    cert = is_unipotent(g)
    if cert is None:
        raise NotUnipotentError("isometry is not unipotent")
    return cert


def fixed_rank_bound(d: int) -> int:
    return 4 * d + 2


def fixed_rank_bound_check(g: Isometry, d: int) -> bool:
    cert = _require_unipotent(g)
    return cert.fixed_rank >= fixed_rank_bound(d)


@dataclass(frozen=True)
class FixedIsotropicVector:
    vector: tuple[int, ...]
    coefficients: tuple[int, ...]
    shell: int
    examined: int

    def to_dict(self) -> dict:
        return {
            "vector": list(self.vector),
            "coefficients": list(self.coefficients),
            "shell": self.shell,
            "candidates_examined": self.examined,
        }


def _shell_values(s: int) -> list[int]:
    out = []
    for a in range(1, s + 1):
        out += [a, -a]
    return out


def coefficient_order(r: int, bound: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Canonical enumeration of nonzero coefficient vectors up to sign.

    Order: sup-norm ``s = 1..bound``, then support size, then support
    positions lexicographically, then values ordered ``1, -1, 2, -2, ...``.
    Only vectors with content 1 whose first nonzero entry is positive are
    produced (``v`` and ``-v`` are the same line).
    """
    for s in range(1, bound + 1):
        values = _shell_values(s)
        for size in range(1, r + 1):
            for support in combinations(range(r), size):
                for vals in product(values, repeat=size):
                    if vals[0] < 0 or max(abs(v) for v in vals) != s:
                        continue
                    g = 0
                    for v in vals:
                        g = gcd(g, v)
                    if g != 1:
                        continue
                    coeffs = [0] * r
                    for i, v in zip(support, vals):
                        coeffs[i] = v
                    yield s, tuple(coeffs)


def find_primitive_isotropic_fixed(g: Isometry, bound: int,
                                   max_candidates: int = 5_000_000) -> FixedIsotropicVector | None:
    """Bounded search in the fixed lattice; ``None`` is a bounded-search outcome only.

    The returned vector is checked to be fixed, isotropic and primitive
    independently of how it was found.
    """
    cert = _require_unipotent(g)
    L = g.lattice
    B = column_hermite_form(cert.fixed_lattice)
    r = B.ncols
    if r == 0:
        return None
    G = (B.T @ L.gram @ B).tolist()
    cols = B.columns()
    examined = 0
    for shell, coeffs in coefficient_order(r, bound):
        examined += 1
        if examined > max_candidates:
            return None
        support = [i for i in range(r) if coeffs[i]]
        q = sum(coeffs[i] * G[i][j] * coeffs[j] for i in support for j in support)
        if q:
            continue
        v = tuple(sum(coeffs[i] * cols[i][k] for i in support) for k in range(L.rank))
        if g(v) != v or L.norm(v) != 0 or not is_primitive(v):
            raise AssertionError("search produced a vector failing the post-hoc certificate")
        return FixedIsotropicVector(v, coeffs, shell, examined)
    return None


# -- words ----------------------------------------------------------------------

_LAMBDA = re.compile(r"\s*Lambda\s*\(\s*(\d+)\s*\)\s*$")
_GEN = re.compile(r"\s*([ER])(?:(\d+)|\[([-\d,\s]*)\])(')?(?:\^(-?\d+))?\s*[*.]?")


def parse_lambda(text: str) -> int:
    match = _LAMBDA.match(text)
    if not match or int(match.group(1)) < 1:
        raise WordSyntaxError(f"expected Lambda(d) with d >= 1, got {text!r}")
    return int(match.group(1))


@dataclass(frozen=True)
class LambdaWords:
    """Generator vocabulary for words acting on ``Lambda(d)``."""

    d: int

    @property
    def lattice(self) -> Lattice:
        return _lambda_cached(self.d)

    @property
    def e(self) -> tuple[int, ...]:
        return self.lattice.marked["e"]

    def basis_vector(self, i: int) -> tuple[int, ...]:
        _, vecs = minus_two_basis(self.d)
        if not 1 <= i <= len(vecs):
            raise WordSyntaxError(f"generator index {i} out of range 1..{len(vecs)}")
        return (0, 0) + tuple(vecs[i - 1])

    def generator(self, kind: str, vec: Sequence[int]) -> Isometry:
        L = self.lattice
        if len(vec) != L.rank:
            raise WordSyntaxError(f"vector has length {len(vec)}, expected {L.rank}")
        try:
            return eichler(L, self.e, vec) if kind == "E" else reflection(L, vec)
        except LatticeError as exc:
            raise WordSyntaxError(str(exc)) from exc

    def parse(self, text: str) -> Isometry:
        L = self.lattice
        out = Isometry.identity(L)
        s = text.strip()
        if s in ("", "1", "id"):
            return out
        pos = 0
        while pos < len(s):
            match = _GEN.match(s, pos)
            if not match or match.end() == pos:
                raise WordSyntaxError(f"cannot parse word {text!r} at position {pos}")
            kind, idx, explicit, prime, power = match.groups()
            if idx is not None:
                vec = self.basis_vector(int(idx))
            else:
                try:
                    vec = tuple(int(x) for x in explicit.split(",") if x.strip())
                except ValueError as exc:
                    raise WordSyntaxError(f"bad vector in {match.group(0)!r}") from exc
            gen = self.generator(kind, vec)
            n = int(power) if power is not None else 1
            if prime:
                n = -n
            if n < 0:
                gen, n = gen.inverse(), -n
            for _ in range(n):
                out = out @ gen
            pos = match.end()
        return out


_LAMBDA_CACHE: dict[int, Lattice] = {}


def _lambda_cached(d: int) -> Lattice:
    if d not in _LAMBDA_CACHE:
        _LAMBDA_CACHE[d] = lambda_lattice(d)
    return _LAMBDA_CACHE[d]


def random_unipotent_word(d: int, rng, max_length: int = 5) -> str:
    """Product of Eichler generators, sometimes conjugated by a reflection."""
    n = 12 * d - 4
    parts = []
    for _ in range(rng.randint(1, max_length)):
        tok = f"E{rng.randint(1, n)}"
        if rng.random() < 0.5:
            tok += "'"
        parts.append(tok)
    word = " ".join(parts)
    if rng.random() < 0.5:
        j = rng.randint(1, n)
        word = f"R{j} {word} R{j}"
    return word


def fix_report(d: int, word: str, bound: int) -> dict:
    words = LambdaWords(d)
    g = words.parse(word)
    cert = is_unipotent(g)
    out = {"lattice": f"Lambda({d})", "word": word, "unipotent": cert is not None}
    if cert is None:
        return out
    out.update({
        "nilpotency_index": cert.nilpotency_index,
        "fixed_rank": cert.fixed_rank,
        "fixed_rank_bound": fixed_rank_bound(d),
        "fixed_rank_bound_holds": cert.fixed_rank >= fixed_rank_bound(d),
        "bound": bound,
    })
    hit = find_primitive_isotropic_fixed(g, bound)
    out["found"] = hit is not None
    if hit is not None:
        out.update(hit.to_dict())
    return out
