"""Exact combinatorics for monomial hypersurfaces and monomial ideals.

For ``f = x^d`` the matrix ``M(f^k, e)`` has exactly one monomial entry in
every row and column, so it is equivalent to a diagonal matrix whose
entries are read off directly.  The multiplicity of ``x^c`` among those
entries is ``eta_k(c) = prod_j max(0, q - |c_j q - k d_j|)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Iterable, Sequence

from ffrt.field_poly import Exponents, default_names, format_monomial, grlex_key
from ffrt.frobenius_basis import frobenius_basis
from ffrt.relmat import PolyMatrix


def exponent_vector(d: Iterable[int], allow_zero: bool = False) -> Exponents:
    """Validate an exponent vector; entries must be >= 1 unless ``allow_zero``."""
    d = tuple(int(x) for x in d)
    if not d:
        raise ValueError("exponent vector must be nonempty")
    low = 0 if allow_zero else 1
    if any(x < low for x in d):
        raise ValueError(f"exponents must be >= {low}, got {d}")
    return d


@dataclass
class DiagonalSummary:
    """Multiset of diagonal entries ``x^c`` (keyed by ``c``) of a diagonalized matrix."""

    counts: Counter = field(default_factory=Counter)

    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, c) -> int:
        return self.counts.get(tuple(c), 0)

    def __eq__(self, other):
        if not isinstance(other, DiagonalSummary):
            return NotImplemented
        return +self.counts == +other.counts

    def items(self) -> list[tuple[Exponents, int]]:
        return sorted(((c, m) for c, m in self.counts.items() if m), key=lambda t: grlex_key(t[0]))


def eta_factor(c: int, d: int, k: int, q: int) -> int:
    gap = abs(c * q - k * d)
    return q - gap if gap < q else 0


def eta(c: Sequence[int], d: Sequence[int], k: int, q: int) -> int:
    """Multiplicity of ``x^c`` on the diagonal of ``M(x^(kd), e)``."""
    out = 1
    for cj, dj in zip(c, d):
        out *= eta_factor(cj, dj, k, q)
        if not out:
            return 0
    return out


def eta_count(d: Sequence[int], k: int, p: int, e: int) -> DiagonalSummary:
    """All diagonal multiplicities for ``f = x^d``, ``1 <= k <= q-1``, over the box ``prod [0, d_j]``."""
    d = exponent_vector(d)
    q = p**e
    if not 1 <= k <= q - 1:
        raise ValueError(f"k must lie in [1, {q - 1}]")
    # factors are independent per coordinate, so tabulate them first
    tables = [[eta_factor(c, dj, k, q) for c in range(dj + 1)] for dj in d]
    counts = Counter()
    for c in product(*(range(dj + 1) for dj in d)):
        m = prod(tables[j][cj] for j, cj in enumerate(c))
        if m:
            counts[c] = m
    return DiagonalSummary(counts)


def eta_free_count(d: Sequence[int], k: int, q: int) -> int:
    """Free ``S/f`` summands of ``F_*^e(S/f^k)``: ``prod_j (q - d_j q + d_j k)`` when every factor is positive."""
    out = 1
    for dj in d:
        factor = q - dj * q + dj * k
        if factor <= 0:
            return 0
        out *= factor
    return out


def diagonalize_monomial_matrix(A: PolyMatrix) -> DiagonalSummary:
    """Diagonal entries of a matrix with a single monic monomial in each row and column."""
    seen_rows = set()
    counts = Counter()
    for j, col in enumerate(A.cols):
        if len(col) != 1:
            raise ValueError(f"column {j} has {len(col)} nonzero entries")
        (i, v), = col.items()
        if i in seen_rows:
            raise ValueError(f"row {i} has more than one nonzero entry")
        seen_rows.add(i)
        if len(v.terms) != 1:
            raise ValueError(f"entry ({i}, {j}) is not a monomial")
        (c, coef), = v.terms.items()
        if coef != 1:
            raise ValueError(f"entry ({i}, {j}) has coefficient {coef}")
        counts[c] += 1
    if len(seen_rows) != A.size:
        raise ValueError("some row has no nonzero entry")
    return DiagonalSummary(counts)


# monomial ideals

Ideal = tuple[Exponents, ...]


def divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def ideal_key(g: Exponents) -> tuple:
    # by degree, then x1 before x2 within a degree
    return (sum(g), tuple(-a for a in g))


def canonical_ideal(gens: Iterable[Exponents]) -> Ideal:
    """Sorted minimal generating set; the unit ideal becomes ``((0,...,0),)``."""
    gens = sorted(set(tuple(g) for g in gens), key=ideal_key)
    if not gens:
        raise ValueError("ideal needs at least one generator")
    minimal: list[Exponents] = []
    for g in gens:
        # degree order puts every proper divisor first
        if not any(divides(m, g) for m in minimal):
            minimal.append(g)
    return tuple(minimal)


def is_unit_ideal(J: Ideal) -> bool:
    return any(not any(g) for g in J)


def format_ideal(J: Ideal, names: Sequence[str] | None = None) -> list[str]:
    names = tuple(names) if names else default_names(len(J[0]))
    return [format_monomial(g, names) for g in J]


@dataclass
class IdealDecomposition:
    """``F_*^e(S/I) = sum_J (S/J)^alpha(J)`` for a monomial ideal ``I``."""

    p: int
    e: int
    n: int
    summands: Counter

    @property
    def q(self) -> int:
        return self.p**self.e

    def total(self) -> int:
        return sum(self.summands.values())

    def items(self) -> list[tuple[Ideal, int]]:
        """Summands ordered by generator count, then generators."""
        return sorted(self.summands.items(), key=lambda t: (len(t[0]), [ideal_key(g) for g in t[0]]))

    def multiplicity(self, J: Iterable[Exponents]) -> int:
        return self.summands.get(canonical_ideal(J), 0)

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "summands": [{"ideal": format_ideal(J, names), "multiplicity": m} for J, m in self.items()],
            "total": self.total(),
        }


def ideal_row(gens: Sequence[Exponents], u: Exponents, q: int) -> Ideal:
    """Ideal ``J_u`` read from row ``u`` of ``[M(x^{d_1}, e) ... M(x^{d_t}, e)]``."""
    out = []
    for d in gens:
        c = []
        for ui, di in zip(u, d):
            beta = (ui - di) % q
            c.append((beta + di) // q)
        out.append(tuple(c))
    return canonical_ideal(out)


def decompose_monomial_quotient(gens: Sequence[Sequence[int]], p: int, e: int) -> IdealDecomposition:
    if not gens:
        raise ValueError("need at least one generator")
    gens = [exponent_vector(g, allow_zero=True) for g in gens]
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators have different lengths")
    if any(not any(g) for g in gens):
        raise ValueError("the unit ideal has a zero quotient")
    basis = frobenius_basis(p, e, n)
    summands = Counter(ideal_row(gens, u, basis.q) for u in basis.monomials)
    return IdealDecomposition(p, e, n, summands)


def within_predicted_set(J: Ideal, gens: Sequence[Exponents]) -> bool:
    """Every generator of ``J`` divides some generator of ``I``."""
    return all(any(divides(g, d) for d in gens) for g in J)


def ffrt_witness(gens: Sequence[Sequence[int]], p: int, levels: Iterable[int] = (1, 2, 3)) -> dict:
    """Distinct summands across ``levels`` and whether they stay inside the finite predicted set."""
    gens = [tuple(g) for g in gens]
    seen: set[Ideal] = set()
    for e in levels:
        seen.update(decompose_monomial_quotient(gens, p, e).summands)
    outside = sorted((J for J in seen if not within_predicted_set(J, gens)), key=str)
    return {"ideals": sorted(seen, key=str), "outside": outside, "ok": not outside}
