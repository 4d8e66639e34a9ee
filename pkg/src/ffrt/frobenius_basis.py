"""The monomial basis of ``F_*^e(S)`` over ``S`` and Frobenius coordinates."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from ffrt.field_poly import Exponents, Poly, grlex_key


class FrobBasis:
    """The ``q^n`` monomials ``x^a`` with ``0 <= a_i < q``, ranked in graded-lex order.

    Over a prime field the coefficient part of the basis is trivial, so the
    basis is exactly these monomials.
    """

    def __init__(self, p: int, e: int, n: int):
        if e < 1:
            raise ValueError("level e must be positive")
        if n < 0:
            raise ValueError("variable count must be non-negative")
        self.p = p
        self.e = e
        self.n = n
        self.q = p**e
        self.size = self.q**n
        self._monomials = None
        self._index = None
        self._rank_by_code = None

    def __repr__(self):
        return f"FrobBasis(p={self.p}, e={self.e}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, FrobBasis) and (self.p, self.e, self.n) == (other.p, other.e, other.n)

    def __hash__(self):
        return hash((self.p, self.e, self.n))

    # the enumeration is built on first use, so huge bases stay cheap to describe

    @property
    def monomials(self) -> tuple[Exponents, ...]:
        if self._monomials is None:
            self._monomials = tuple(sorted(product(range(self.q), repeat=self.n), key=grlex_key))
        return self._monomials

    @property
    def index(self) -> dict[Exponents, int]:
        if self._index is None:
            self._index = {m: i for i, m in enumerate(self.monomials)}
        return self._index

    def rank_by_code(self) -> np.ndarray:
        """Lookup array: mixed-radix code ``sum a_i q^i`` -> graded-lex rank."""
        if self._rank_by_code is None:
            table = np.empty(self.size, dtype=np.int64)
            codes = self.exponent_array() @ self.radix()
            table[codes] = np.arange(self.size, dtype=np.int64)
            self._rank_by_code = table
        return self._rank_by_code

    def radix(self) -> np.ndarray:
        return self.q ** np.arange(self.n, dtype=np.int64)

    def exponent_array(self) -> np.ndarray:
        return np.array(self.monomials, dtype=np.int64).reshape(self.size, self.n)


@lru_cache(maxsize=32)
def frobenius_basis(p: int, e: int, n: int) -> FrobBasis:
    return FrobBasis(p, e, n)


def basis_index(b: FrobBasis, m: Exponents) -> int:
    m = tuple(m)
    if len(m) != b.n or any(a < 0 or a >= b.q for a in m):
        raise ValueError(f"exponent vector {m} outside [0, {b.q})^{b.n}")
    return b.index[m]


def basis_monomial(b: FrobBasis, i: int) -> Exponents:
    if not 0 <= i < b.size:
        raise ValueError(f"basis index {i} out of range")
    return b.monomials[i]


def frobenius_coordinates(b: FrobBasis, g: Poly) -> dict[int, Poly]:
    """Coordinates ``h`` with ``g = sum_rho h_rho^q * x^rho``.

    A term ``c x^a`` splits as ``a = q*beta + rho`` and contributes ``c x^beta``
    to the coordinate of ``x^rho`` (the q-th root of ``c`` is ``c`` in ``F_p``).
    """
    if g.ring.nvars != b.n or g.ring.p != b.p:
        raise ValueError("polynomial ring does not match the basis")
    q = b.q
    buckets: dict[int, dict] = {}
    for a, c in g.terms.items():
        beta = tuple(x // q for x in a)
        rho = tuple(x % q for x in a)
        buckets.setdefault(b.index[rho], {})[beta] = c
    return {i: Poly._raw(g.ring, t) for i, t in sorted(buckets.items())}
