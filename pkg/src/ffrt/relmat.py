"""Matrices of relations ``M_S(f, e)`` and sparse polynomial matrices."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ffrt.field_poly import Exponents, Poly, Ring
from ffrt.frobenius_basis import FrobBasis, frobenius_basis


class PolyMatrix:
    """Square sparse matrix over a polynomial ring, stored column-major.

    ``cols[j]`` maps row index to a nonzero :class:`Poly`.  Treated as
    immutable once built.
    """

    __slots__ = ("ring", "size", "cols")

    def __init__(self, ring: Ring, size: int, cols: Sequence[dict[int, Poly]] | None = None):
        self.ring = ring
        self.size = size
        if cols is None:
            cols = [{} for _ in range(size)]
        if len(cols) != size:
            raise ValueError("column count does not match size")
        self.cols = list(cols)

    # constructors

    @classmethod
    def identity(cls, ring: Ring, size: int) -> PolyMatrix:
        return cls.scalar(ring.one(), size)

    @classmethod
    def scalar(cls, f: Poly, size: int) -> PolyMatrix:
        if f.is_zero():
            return cls(f.ring, size)
        return cls(f.ring, size, [{j: f} for j in range(size)])

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence]) -> PolyMatrix:
        size = len(rows)
        cols = [{} for _ in range(size)]
        for i, row in enumerate(rows):
            if len(row) != size:
                raise ValueError("matrix must be square")
            for j, v in enumerate(row):
                v = ring.const(v) if isinstance(v, int) else v
                if not v.is_zero():
                    cols[j][i] = v
        return cls(ring, size, cols)

    @classmethod
    def blocks(cls, ring: Ring, grid: Sequence[Sequence[PolyMatrix | Poly | None]], block: int) -> PolyMatrix:
        """Assemble from a square grid of blocks; a Poly entry means that scalar times I."""
        nb = len(grid)
        out = cls(ring, nb * block)
        for bi, row in enumerate(grid):
            for bj, blk in enumerate(row):
                if blk is None:
                    continue
                if isinstance(blk, Poly):
                    blk = cls.scalar(blk, block)
                for j, col in enumerate(blk.cols):
                    target = out.cols[bj * block + j]
                    for i, v in col.items():
                        target[bi * block + i] = v
        return out

    # access

    def entry(self, i: int, j: int) -> Poly:
        return self.cols[j].get(i) or self.ring.zero()

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def entries(self) -> Iterable[tuple[int, int, Poly]]:
        """Nonzero entries ordered by (row, col)."""
        out = [(i, j, v) for j, col in enumerate(self.cols) for i, v in col.items()]
        out.sort(key=lambda t: (t[0], t[1]))
        return out

    def to_rows(self) -> list[list[Poly]]:
        zero = self.ring.zero()
        rows = [[zero] * self.size for _ in range(self.size)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def is_scalar(self, f: Poly) -> bool:
        """True when the matrix equals ``f * I``."""
        if f.is_zero():
            return self.nnz() == 0
        return all(len(col) == 1 and col.get(j) == f for j, col in enumerate(self.cols))

    # arithmetic

    def _check(self, other: PolyMatrix):
        if self.size != other.size:
            raise ValueError("matrix size mismatch")
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError("matrix rings differ")

    def _like(self, cols) -> PolyMatrix:
        return PolyMatrix(self.ring, self.size, cols)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        self._check(other)
        cols = []
        for a, b in zip(self.cols, other.cols):
            col = dict(a)
            for i, v in b.items():
                s = col[i] + v if i in col else v
                if s.is_zero():
                    col.pop(i, None)
                else:
                    col[i] = s
            cols.append(col)
        return self._like(cols)

    def __neg__(self) -> PolyMatrix:
        return self._like([{i: -v for i, v in col.items()} for col in self.cols])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + (-other)

    def scale(self, c: Poly) -> PolyMatrix:
        cols = []
        for col in self.cols:
            new = {}
            for i, v in col.items():
                w = v * c
                if not w.is_zero():
                    new[i] = w
            cols.append(new)
        return self._like(cols)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        self._check(other)
        left = self.cols
        cols = []
        for bcol in other.cols:
            acc: dict[int, Poly] = {}
            for k, b in bcol.items():
                for i, a in left[k].items():
                    prod = a * b
                    acc[i] = acc[i] + prod if i in acc else prod
            cols.append({i: v for i, v in acc.items() if not v.is_zero()})
        return self._like(cols)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.size == other.size and all(a == b for a, b in zip(self.cols, other.cols))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, nnz={self.nnz()}, ring={self.ring!r})"


class RelMatrix(PolyMatrix):
    """A matrix indexed by a Frobenius basis; ``labels[i]`` is the monomial of index ``i``.

    Matrices built by :func:`build_rel_matrix` use the graded-lex order of
    ``basis``; block constructions use other orders, recorded in ``labels``.
    """

    __slots__ = ("basis", "labels")

    def __init__(self, ring, basis: FrobBasis, cols=None, labels: Sequence[Exponents] | None = None):
        super().__init__(ring, basis.size, cols)
        self.basis = basis
        self.labels = tuple(labels) if labels is not None else basis.monomials

    def _like(self, cols) -> RelMatrix:
        return RelMatrix(self.ring, self.basis, cols, self.labels)

    def _check(self, other):
        super()._check(other)
        if isinstance(other, RelMatrix) and (other.basis != self.basis or other.labels != self.labels):
            raise ValueError("basis mismatch")

    def __eq__(self, other):
        if isinstance(other, RelMatrix) and other.labels != self.labels:
            return False
        return super().__eq__(other)

    __hash__ = None

    def permuted(self, labels: Sequence[Exponents]) -> RelMatrix:
        """Same linear map written with rows and columns ordered by ``labels``."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels):
            raise ValueError("labels are not a permutation of the basis")
        pos = {m: i for i, m in enumerate(labels)}
        perm = [pos[m] for m in self.labels]
        cols = [None] * self.size
        for j, col in enumerate(self.cols):
            cols[perm[j]] = {perm[i]: v for i, v in col.items()}
        return RelMatrix(self.ring, self.basis, cols, labels)


def build_rel_matrix(f: Poly, e: int) -> RelMatrix:
    """``M_S(f, e)``: column ``j`` holds the Frobenius coordinates of ``x^j * f``."""
    if f.is_zero():
        raise ValueError("matrix of relations of the zero polynomial is undefined")
    ring = f.ring
    basis = frobenius_basis(ring.p, e, ring.nvars)
    q, n, size = basis.q, basis.n, basis.size
    if n == 0:
        return RelMatrix(ring, basis, [{0: f}])
    J = basis.exponent_array()
    rank = basis.rank_by_code()
    radix = basis.radix()
    cols: list[dict] = [{} for _ in range(size)]
    terms = list(f.terms.items())
    col_idx = range(size)

    bradix = None
    per_term = []
    for a, c in terms:
        S = J + np.asarray(a, dtype=np.int64)
        beta = S // q
        rows = rank[(S % q) @ radix]
        per_term.append((beta, rows, c))
        top = int(beta.max()) + 1
        bradix = top if bradix is None else max(bradix, top)
    bweights = bradix ** np.arange(n, dtype=np.int64)

    if len(terms) == 1:
        beta, rows, c = per_term[0]
        codes = beta @ bweights
        uniq, inv = np.unique(codes, return_inverse=True)
        polys = [Poly._raw(ring, {_decode(int(u), bradix, n): c}) for u in uniq]
        for j, i, k in zip(col_idx, rows.tolist(), inv.tolist()):
            cols[j][i] = polys[k]
        return RelMatrix(ring, basis, cols)

    for beta, rows, c in per_term:
        codes = (beta @ bweights).tolist()
        for j, i, code in zip(col_idx, rows.tolist(), codes):
            cols[j].setdefault(i, {})[code] = c
    cache: dict = {}
    for col in cols:
        for i, raw in col.items():
            key = tuple(sorted(raw.items()))
            poly = cache.get(key)
            if poly is None:
                poly = Poly._raw(ring, {_decode(code, bradix, n): c for code, c in key})
                cache[key] = poly
            col[i] = poly
    return RelMatrix(ring, basis, cols)


def _decode(code: int, radix: int, n: int) -> Exponents:
    out = []
    for _ in range(n):
        code, r = divmod(code, radix)
        out.append(r)
    return tuple(out)


def rel_matrix_mul(A: RelMatrix, B: RelMatrix) -> RelMatrix:
    if A.basis != B.basis or A.labels != B.labels:
        raise ValueError("basis mismatch")
    return A @ B


def block_order_labels(inner: Sequence[Exponents], q: int) -> tuple[Exponents, ...]:
    """Labels for ``F_*^e(S[t])``: outer index is the new variable's exponent, inner is ``inner``."""
    return tuple([m + (s,) for s in range(q) for m in inner])


def build_block_extended(g_list: Sequence[Poly], e: int, name: str = "y") -> RelMatrix:
    """``M_L(g, e)`` for ``g = g_0 + g_1 t + ... + g_d t^d`` over ``L = S[t]``, from the blocks ``M_S(g_k, e)``.

    Block ``(s, m)`` collects ``A_k`` when ``s = m + k`` and ``t * A_k`` when
    ``s = m + k - q``.  The result is indexed in block order (see
    :func:`block_order_labels`).
    """
    if not g_list:
        raise ValueError("need at least one coefficient")
    ring = g_list[0].ring
    if any(g.ring != ring for g in g_list):
        raise ValueError("coefficients must share a ring")
    inner = frobenius_basis(ring.p, e, ring.nvars)
    q, r = inner.q, inner.size
    d = len(g_list) - 1
    if d >= q:
        raise ValueError(f"degree {d} in the new variable must be < q = {q}")
    big = ring.extend(name)
    t = big.var(big.nvars - 1)
    out: list[dict] = [{} for _ in range(q * r)]
    for k, g in enumerate(g_list):
        if g.is_zero():
            continue
        A = build_rel_matrix(g, e)
        lifts: dict = {}

        def lift(v: Poly) -> Poly:
            w = lifts.get(id(v))
            if w is None:
                w = lifts[id(v)] = v.embed(big)
            return w

        lifted = [{i: lift(v) for i, v in col.items()} for col in A.cols]
        wrapped = None
        for m in range(q):
            s = m + k
            src = lifted
            if s >= q:
                s -= q
                if wrapped is None:
                    wrapped = [{i: v * t for i, v in col.items()} for col in lifted]
                src = wrapped
            shift = s * r
            for j, col in enumerate(src):
                target = out[m * r + j]
                if not target:
                    out[m * r + j] = {shift + i: v for i, v in col.items()}
                    continue
                for i, v in col.items():
                    key = shift + i
                    if key in target:
                        w = target[key] + v
                        if w.is_zero():
                            del target[key]
                        else:
                            target[key] = w
                    else:
                        target[key] = v
    basis = frobenius_basis(ring.p, e, ring.nvars + 1)
    return RelMatrix(big, basis, out, block_order_labels(inner.monomials, q))


def split_by_variable(g: Poly) -> list[Poly]:
    """Coefficients ``g_k`` of ``g = sum g_k t^k`` in the last variable ``t``."""
    ring = g.ring
    base = Ring(ring.p, ring.nvars - 1, ring.names[:-1], ring.trunc)
    parts: dict[int, dict] = {}
    for a, c in g.terms.items():
        parts.setdefault(a[-1], {})[a[:-1]] = c
    top = max(parts, default=0)
    return [Poly(base, parts.get(k, {})) for k in range(top + 1)]
