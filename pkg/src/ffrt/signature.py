"""F-signatures: closed forms, per-level free-rank sequences, and the Artin-Schreier case.

Everything is exact (:class:`fractions.Fraction`).  The coefficient field is
``F_p``, so ``alpha(R) = 0`` and the ``b^e`` factors that would multiply the
counts are all 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, prod
from typing import Iterable, Sequence

from ffrt.field_poly import Poly, Ring
from ffrt.matfac import count_free_summands, default_precision, split_pair
from ffrt.monomial import eta_free_count, exponent_vector
from ffrt.relmat import PolyMatrix, build_block_extended, build_rel_matrix


# W-vectors


@dataclass(frozen=True)
class WVector:
    """``W_s = sum over s-subsets T of prod_{j in T} (d - d_j) * prod_{j not in T} d_j``."""

    d: Fraction
    d_list: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __getitem__(self, s: int) -> Fraction:
        return self.values[s]

    def __len__(self):
        return len(self.values)


def w_vector(d, d_list: Sequence) -> WVector:
    """W-vector by the one-variable-at-a-time recurrence."""
    if not d_list:
        raise ValueError("need at least one exponent")
    d = Fraction(d)
    ds = tuple(Fraction(x) for x in d_list)
    w = [ds[0], d - ds[0]]
    for dj in ds[1:]:
        nxt = [dj * w[0]]
        for j in range(1, len(w)):
            nxt.append(dj * w[j] + (d - dj) * w[j - 1])
        nxt.append((d - dj) * w[-1])
        w = nxt
    return WVector(d, ds, tuple(w))


def w_vector_direct(d, d_list: Sequence) -> tuple[Fraction, ...]:
    """Same values by summing over subsets; exponential, for checking."""
    d = Fraction(d)
    ds = [Fraction(x) for x in d_list]
    n = len(ds)
    out = []
    for s in range(n + 1):
        total = Fraction(0)
        for T in combinations(range(n), s):
            total += prod((d - ds[j]) if j in T else ds[j] for j in range(n))
        out.append(total)
    return tuple(out)


def signature_uv_closed(d_list: Sequence[int]) -> Fraction:
    """Exact F-signature of ``K[[x, u, v]] / (x^d + uv)``."""
    ds = exponent_vector(d_list)
    n = len(ds)
    d = max(ds)
    w = w_vector(d, ds)
    inner = sum((w[j] / (n + 1 - j) for j in range(n)), Fraction(0))
    return 2 * inner / Fraction(d) ** (n + 1)


# Faulhaber


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2``."""
    if m < 0:
        raise ValueError("index must be non-negative")
    if m == 0:
        return Fraction(1)
    return -sum((comb(m + 1, j) * bernoulli(j) for j in range(m)), Fraction(0)) / (m + 1)


def faulhaber_sum(s: int, delta: int) -> Fraction:
    """``sum_{r=1}^{delta} r^s`` via Bernoulli numbers."""
    if s < 0 or delta < 0:
        raise ValueError("s and delta must be non-negative")
    total = sum(
        ((-1) ** j * comb(s + 1, j) * bernoulli(j) * Fraction(delta) ** (s + 1 - j) for j in range(s + 1)),
        Fraction(0),
    )
    return total / (s + 1)


def _poly_in_m(q: int, ds: Sequence[int]) -> list[int]:
    """Coefficients of ``prod_j (q - d_j m)`` as a polynomial in ``m``."""
    coeffs = [1]
    for dj in ds:
        nxt = [0] * (len(coeffs) + 1)
        for s, c in enumerate(coeffs):
            nxt[s] += q * c
            nxt[s + 1] -= dj * c
        coeffs = nxt
    return coeffs


def free_count_sum(d_list: Sequence[int], q: int) -> int:
    """``sum_{k=1}^{q-1} eta_k(d)`` without looping over ``k``.

    With ``m = q - k`` the summand is ``prod_j (q - d_j m)``, positive exactly
    for ``m <= (q - 1) // max(d)``, so the sum is a power-sum combination.
    """
    ds = exponent_vector(d_list)
    top = (q - 1) // max(ds)
    if top < 1:
        return 0
    total = sum((c * faulhaber_sum(s, top) for s, c in enumerate(_poly_in_m(q, ds))), Fraction(0))
    assert total.denominator == 1
    return int(total)


# reports


@dataclass
class Estimate:
    e: int
    count: int
    ratio: Fraction


@dataclass
class SignatureReport:
    dimension: int
    exact: Fraction | None = None
    estimates: list[Estimate] = field(default_factory=list)
    alpha: int = 0

    def last_ratio(self) -> Fraction | None:
        return self.estimates[-1].ratio if self.estimates else None


def _levels(e_range: Iterable[int]) -> list[int]:
    levels = sorted(set(int(e) for e in e_range))
    if not levels:
        raise ValueError("need at least one level")
    if levels[0] < 1:
        raise ValueError("levels must be >= 1")
    return levels


def uv_count(d_list: Sequence[int], p: int, e: int) -> int:
    """``a_e`` of ``K[[x, u, v]] / (x^d + uv)``: ``q^n + 2 sum_k eta_k(d)``."""
    ds = exponent_vector(d_list)
    q = p**e
    return q ** len(ds) + 2 * free_count_sum(ds, q)


def signature_uv_empirical(d_list: Sequence[int], p: int, e_range: Iterable[int]) -> SignatureReport:
    ds = exponent_vector(d_list)
    dim = len(ds) + 1
    report = SignatureReport(dimension=dim, exact=signature_uv_closed(ds))
    for e in _levels(e_range):
        a = uv_count(ds, p, e)
        report.estimates.append(Estimate(e, a, Fraction(a, p ** (e * dim))))
    return report


def sharp_count(d_list: Sequence[int], p: int, e: int) -> int:
    """``a_e`` of ``K[[x, z]] / (x^d + z^2)``: ``eta_{(q-1)/2}(d) + eta_{(q+1)/2}(d)``."""
    if p == 2:
        raise ValueError("the z^2 construction needs p odd")
    ds = exponent_vector(d_list)
    q = p**e
    return eta_free_count(ds, (q - 1) // 2, q) + eta_free_count(ds, (q + 1) // 2, q)


def signature_sharp(d_list: Sequence[int], p: int, e_range: Iterable[int]) -> SignatureReport:
    if p == 2:
        raise ValueError("the z^2 construction needs p odd")
    ds = exponent_vector(d_list)
    n = len(ds)
    exact = Fraction(1, 2 ** (n - 1)) if max(ds) == 1 else Fraction(0)
    report = SignatureReport(dimension=n, exact=exact)
    for e in _levels(e_range):
        a = sharp_count(ds, p, e)
        report.estimates.append(Estimate(e, a, Fraction(a, p ** (e * n))))
    return report


# Artin-Schreier


def artin_schreier_pair(f: Poly, d: int) -> tuple[PolyMatrix, PolyMatrix, Poly]:
    """``(yI + A, (yI + A)^(q-1))`` with ``A = M(f, d)``, ``q = p^d``: a factorization of ``y^q + f``."""
    ring = f.ring
    q = ring.p**d
    big = ring.extend("y")
    y = big.var(big.nvars - 1)

    def lift(m: PolyMatrix) -> PolyMatrix:
        # keyed by id, so only valid while m is alive
        lifted: dict = {}
        cols = []
        for col in m.cols:
            new = {}
            for i, v in col.items():
                w = lifted.get(id(v))
                if w is None:
                    w = lifted[id(v)] = v.embed(big)
                new[i] = w
            cols.append(new)
        return PolyMatrix(big, m.size, cols)

    A = build_rel_matrix(f, d)
    phi = lift(A) + PolyMatrix.scalar(y, A.size)
    # (yI + A)^(q-1) = sum_i C(q-1, i) y^i A^(q-1-i), and A^j = M(f^j, d)
    psi = PolyMatrix(big, A.size)
    for i in range(q):
        c = comb(q - 1, i) % ring.p
        if c:
            term = lift(build_rel_matrix(f ** (q - 1 - i), d)).scale(y**i * c)
            psi = psi + term
    return phi, psi, y**q + f.embed(big)


def artin_schreier_count(f: Poly, d: int, N: int | None = None) -> tuple[int, int]:
    """Free rank of ``F_*^d`` of ``K[[x, y]] / (y^(p^d) + f)`` and the precision used.

    ``M(y^q + f, d)`` over ``K[[x, y]]`` is block diagonal with ``q`` copies
    of ``yI + M(f, d)``, so the free rank is ``q`` times the count for one
    block.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.constant():
        raise ValueError("f must have zero constant term")
    q = f.ring.p**d
    phi, psi, g = artin_schreier_pair(f, d)
    if N is None:
        N = default_precision(g, q)
    res = split_pair(phi, psi, g, N)
    return q * res.t, res.precision_used


def signature_artin_schreier(f: Poly, d: int, N: int | None = None) -> Fraction:
    """Exact F-signature of ``K[[x, y]] / (y^(p^d) + f)``: the level-``d`` free rank over ``p^(nd)``."""
    a, _ = artin_schreier_count(f, d, N)
    return Fraction(a, f.ring.p ** (f.ring.nvars * d))


# count identity under adjoining a variable


@dataclass
class CountIdentity:
    d_list: tuple[int, ...]
    p: int
    e: int
    left: int
    right: int

    @property
    def holds(self) -> bool:
        return self.left == self.right


def count_identity_extend_variable(d_list: Sequence[int], p: int, e: int, N: int | None = None) -> CountIdentity:
    """Free rank of ``F_*^e`` over ``S[[y]]/f`` two ways.

    Left: split the block-diagonal matrix of ``q`` copies of ``M(f, e)``.
    Right: ``q`` times the monomial free count ``eta_1(d)`` for ``S/f``.
    """
    ds = exponent_vector(d_list)
    q = p**e
    ring = Ring(p, len(ds))
    f = ring.monomial(ds)
    phi = build_block_extended([f], e)
    psi = build_block_extended([f ** (q - 1)], e)
    big_f = f.embed(phi.ring)
    if N is None:
        N = default_precision(big_f, q)
    left = count_free_summands(phi, big_f, N, complement=psi)
    right = q * eta_free_count(ds, 1, q)
    return CountIdentity(ds, p, e, left, right)

