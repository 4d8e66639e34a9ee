"""Fedder's criterion: ``S/I`` is F-pure iff ``(I^[p] : I)`` is not inside ``m^[p]``.

A monomial lies outside ``m^[p] = (x_1^p, ..., x_n^p)`` exactly when every
exponent is below ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ffrt.field_poly import Exponents, Poly, grlex_key, is_prime
from ffrt.monomial import canonical_ideal, exponent_vector


@dataclass(frozen=True)
class PurityVerdict:
    f_pure: bool
    witness: Exponents | None = None
    colon: tuple[Exponents, ...] | None = field(default=None, compare=False)


def outside_frobenius_max(m: Exponents, p: int) -> bool:
    return all(a < p for a in m)


def _first_outside(monomials, p: int) -> Exponents | None:
    hits = [m for m in monomials if outside_frobenius_max(m, p)]
    return min(hits, key=grlex_key) if hits else None


def fedder_principal(f: Poly, p: int | None = None) -> PurityVerdict:
    """For ``I = (f)`` the colon ideal is ``(f^(p-1))``; look for a term of ``f^(p-1)`` outside ``m^[p]``."""
    p = f.ring.p if p is None else p
    if p != f.ring.p:
        raise ValueError(f"f lives in characteristic {f.ring.p}, not {p}")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.constant():
        raise ValueError("f is a unit")
    g = f ** (p - 1)
    witness = _first_outside(g.terms, p)
    return PurityVerdict(witness is not None, witness)


def colon_by_monomial(ideal: Sequence[Exponents], m: Exponents) -> tuple[Exponents, ...]:
    """``(J : x^m)`` for a monomial ideal ``J``."""
    return canonical_ideal(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in ideal)


def intersect(a: Sequence[Exponents], b: Sequence[Exponents]) -> tuple[Exponents, ...]:
    """Intersection of monomial ideals via pairwise lcms."""
    return canonical_ideal(tuple(max(x, y) for x, y in zip(g, h)) for g in a for h in b)


def frobenius_colon(gens: Sequence[Exponents], p: int) -> tuple[Exponents, ...]:
    """Minimal generators of ``(I^[p] : I)`` for a monomial ideal ``I``."""
    bracket = [tuple(p * a for a in g) for g in gens]
    out = None
    for m in gens:
        piece = colon_by_monomial(bracket, m)
        out = piece if out is None else intersect(out, piece)
    return out


def fedder_monomial_ideal(gens: Sequence[Sequence[int]], p: int) -> PurityVerdict:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not gens:
        raise ValueError("need at least one generator")
    gens = [exponent_vector(g, allow_zero=True) for g in gens]
    if len({len(g) for g in gens}) != 1:
        raise ValueError("generators have different lengths")
    if any(not any(g) for g in gens):
        raise ValueError("a generator is a unit")
    colon = frobenius_colon(gens, p)
    witness = _first_outside(colon, p)
    return PurityVerdict(witness is not None, witness, colon)
