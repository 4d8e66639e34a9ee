"""Matrix factorizations, the ``f+uv`` / ``f+z^2`` doublings, and trivial-block splitting.

Splitting works over ``K[[x]] / m^N``.  A unit entry of ``phi`` is pivoted
out with row/column operations; the induced inverse operations on ``psi``
only touch the row and column that disappear together with the pivot, so
``psi`` just loses them.  Once ``phi`` has no unit left, the same procedure
runs on ``psi``, and each of its pivots splits off an ``(f, 1)`` block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ffrt.field_poly import Poly, local_inverse
from ffrt.relmat import PolyMatrix, RelMatrix, build_rel_matrix


class InstabilityError(RuntimeError):
    """Trivial-block counts changed when the precision was doubled."""


@dataclass(frozen=True)
class MatFac:
    """A pair ``(phi, psi)`` with ``phi psi = psi phi = f I``."""

    phi: PolyMatrix
    psi: PolyMatrix
    f: Poly
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.phi.size != self.psi.size:
            raise ValueError("phi and psi must have the same size")
        if self.check:
            if not (self.phi @ self.psi).is_scalar(self.f) or not (self.psi @ self.phi).is_scalar(self.f):
                raise ValueError("pair is not a matrix factorization of f")

    @property
    def size(self) -> int:
        return self.phi.size

    def swapped(self) -> MatFac:
        return MatFac(self.psi, self.phi, self.f, check=False)

    def __add__(self, other: MatFac) -> MatFac:
        """Direct sum."""
        if other.f != self.f:
            raise ValueError("direct sum needs a common f")
        return MatFac(_diag(self.phi, other.phi), _diag(self.psi, other.psi), self.f, check=False)


def _diag(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    s = a.size
    cols = [dict(c) for c in a.cols] + [{i + s: v for i, v in c.items()} for c in b.cols]
    return PolyMatrix(a.ring, s + b.size, cols)


def trivial(f: Poly, t: int = 0, r: int = 0) -> MatFac:
    """``(f, 1)^t + (1, f)^r``."""
    one = f.ring.one()
    phi = PolyMatrix(f.ring, t + r, [{j: f} for j in range(t)] + [{j: one} for j in range(t, t + r)])
    psi = PolyMatrix(f.ring, t + r, [{j: one} for j in range(t)] + [{j: f} for j in range(t, t + r)])
    return MatFac(phi, psi, f, check=False)


def matfac_from_power(f: Poly, k: int, e: int) -> MatFac:
    """``(M(f^k, e), M(f^(q-k), e))``, a factorization of ``f``."""
    q = f.ring.p**e
    if not 1 <= k <= q - 1:
        raise ValueError(f"k must lie in [1, {q - 1}]")
    return MatFac(build_rel_matrix(f**k, e), build_rel_matrix(f ** (q - k), e), f)


def _lift(m: PolyMatrix, ring) -> PolyMatrix:
    return PolyMatrix(ring, m.size, [{i: v.embed(ring) for i, v in col.items()} for col in m.cols])


def maltese(mf: MatFac) -> MatFac:
    """``([phi, -vI; uI, psi], [psi, vI; -uI, phi])``, a factorization of ``f + uv``."""
    ring = mf.phi.ring.extend("u", "v")
    u, v = ring.var(ring.nvars - 2), ring.var(ring.nvars - 1)
    phi, psi = _lift(mf.phi, ring), _lift(mf.psi, ring)
    s = mf.size
    big_phi = PolyMatrix.blocks(ring, [[phi, -v], [u, psi]], s)
    big_psi = PolyMatrix.blocks(ring, [[psi, v], [-u, phi]], s)
    return MatFac(big_phi, big_psi, mf.f.embed(ring) + u * v)


def sharp(mf: MatFac) -> MatFac:
    """``([phi, -zI; zI, psi], [psi, zI; -zI, phi])``, a factorization of ``f + z^2``."""
    ring = mf.phi.ring.extend("z")
    z = ring.var(ring.nvars - 1)
    phi, psi = _lift(mf.phi, ring), _lift(mf.psi, ring)
    s = mf.size
    big_phi = PolyMatrix.blocks(ring, [[phi, -z], [z, psi]], s)
    big_psi = PolyMatrix.blocks(ring, [[psi, z], [-z, phi]], s)
    return MatFac(big_phi, big_psi, mf.f.embed(ring) + z * z)


@dataclass
class SplitResult:
    t: int
    r: int
    reduced_size: int
    precision_used: int
    reduced_phi: PolyMatrix | None = field(default=None, repr=False, compare=False)
    reduced_psi: PolyMatrix | None = field(default=None, repr=False, compare=False)

    def counts(self) -> tuple[int, int, int]:
        return self.t, self.r, self.reduced_size


def default_precision(f: Poly, q: int = 1) -> int:
    return 4 * q * (1 + max(f.degree(), 0))


class _Sparse:
    """Mutable working copy: columns and a row index."""

    def __init__(self, m: PolyMatrix, ring, cache: dict):
        self.cols: dict[int, dict[int, Poly]] = {}
        self.rows: dict[int, set[int]] = {i: set() for i in range(m.size)}
        self.dropped = False
        for j, col in enumerate(m.cols):
            new = {}
            for i, v in col.items():
                w = cache.get(id(v))
                if w is None:
                    w = Poly(ring, v.terms)
                    if len(w.terms) != len(v.terms):
                        self.dropped = True
                    cache[id(v)] = w
                if w.terms:
                    new[i] = w
                    self.rows[i].add(j)
            self.cols[j] = new

    def delete_line(self, i: int, j: int):
        """Remove row ``i`` and column ``j``."""
        for c in self.rows.pop(i):
            if c != j:
                del self.cols[c][i]
        for k in self.cols.pop(j):
            if k != i:
                self.rows[k].discard(j)

    def to_matrix(self, ring) -> PolyMatrix:
        rmap = {i: n for n, i in enumerate(sorted(self.rows))}
        cols = [{rmap[i]: v for i, v in self.cols[j].items()} for j in sorted(self.cols)]
        return PolyMatrix(ring, len(cols), cols)


def _pivot_out(A: _Sparse, B: _Sparse, N: int, zero_exp: tuple, p: int) -> int:
    """Pivot every unit of ``A`` away; delete the matching lines of ``B``."""
    count = 0
    again = True
    while again:
        again = False
        for j in sorted(A.cols):
            col = A.cols.get(j)
            if not col:
                continue
            units = [i for i, v in col.items() if zero_exp in v.terms]
            if not units:
                continue
            i = min(units)
            u = col[i]
            others_col = [(k, a) for k, a in col.items() if k != i]
            others_row = [(c, A.cols[c][i]) for c in A.rows[i] if c != j]
            if others_col and others_row:
                again = True
                if len(u.terms) == 1:
                    inv = pow(u.terms[zero_exp], p - 2, p)
                    factors = [(k, a.scale(inv)) for k, a in others_col]
                else:
                    uinv = local_inverse(u, N)
                    A.dropped = True
                    factors = []
                    for k, a in others_col:
                        fa, dr = a.mul_tracked(uinv)
                        A.dropped |= dr
                        factors.append((k, fa))
                for k, fa in factors:
                    for c, b in others_row:
                        prod, dr = fa.mul_tracked(b)
                        A.dropped |= dr
                        target = A.cols[c]
                        if k in target:
                            w = target[k] - prod
                            if w.terms:
                                target[k] = w
                            else:
                                del target[k]
                                A.rows[k].discard(c)
                        elif prod.terms:
                            target[k] = -prod
                            A.rows[k].add(c)
            A.delete_line(i, j)
            B.delete_line(j, i)
            count += 1
    return count


def _unit_positions(m: PolyMatrix, N: int, zero_exp: tuple) -> list[bool] | None:
    """Per column, whether its only entry is a unit; None unless every column holds one entry of degree < N."""
    rows = set()
    out = []
    seen: dict = {}
    for col in m.cols:
        if len(col) != 1:
            return None
        (i, v), = col.items()
        if i in rows:
            return None
        rows.add(i)
        unit = seen.get(id(v))
        if unit is None:
            if v.degree() >= N:
                return None
            unit = seen[id(v)] = zero_exp in v.terms
        out.append(unit)
    return out


def _split_permutation(phi: PolyMatrix, psi: PolyMatrix, N: int) -> SplitResult | None:
    """Shortcut when both factors have one entry per row and column.

    Every pivot then has an empty row and column, so pivoting only deletes
    lines and never multiplies.  A unit ``phi[i, j]`` pairs with the non-unit
    ``psi[j, i] = f / phi[i, j]``, so the two unit sets are disjoint and the
    counts are just the numbers of units.
    """
    zero_exp = (0,) * phi.ring.nvars
    a = _unit_positions(phi, N, zero_exp)
    if a is None:
        return None
    b = _unit_positions(psi, N, zero_exp)
    if b is None:
        return None
    r, t = sum(a), sum(b)
    return SplitResult(t, r, phi.size - t - r, N)


def _split_once(phi: PolyMatrix, psi: PolyMatrix, N: int, keep: bool, shortcut: bool = True) -> tuple[SplitResult, bool]:
    if shortcut and not keep:
        res = _split_permutation(phi, psi, N)
        if res is not None:
            return res, False
    ring = phi.ring.with_trunc(N)
    zero_exp = (0,) * ring.nvars
    cache: dict = {}
    A = _Sparse(phi, ring, cache)
    B = _Sparse(psi, ring, cache)
    r = _pivot_out(A, B, N, zero_exp, ring.p)
    t = _pivot_out(B, A, N, zero_exp, ring.p)
    res = SplitResult(t, r, len(A.cols), N)
    if keep:
        res.reduced_phi = A.to_matrix(ring)
        res.reduced_psi = B.to_matrix(ring)
    return res, A.dropped or B.dropped


def split_pair(
    phi: PolyMatrix,
    psi: PolyMatrix,
    f: Poly,
    N: int | None = None,
    *,
    max_precision: int | None = None,
    keep_reduced: bool = False,
    shortcut: bool = True,
) -> SplitResult:
    """Split ``(phi, psi) ~ (alpha, beta) + (f,1)^t + (1,f)^r`` over the local ring.

    The counts are recomputed at ``2N`` whenever truncation discarded any
    term; disagreement doubles ``N`` again up to ``max_precision`` and then
    raises :class:`InstabilityError`.  ``shortcut=False`` forces the general
    pivoting path even for permutation-shaped pairs.
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.constant():
        raise ValueError("f is a unit in the local ring")
    if phi.size != psi.size:
        raise ValueError("phi and psi must have the same size")
    if N is None:
        N = default_precision(f)
    if N < 1:
        raise ValueError("precision must be >= 1")
    cap = max_precision if max_precision is not None else 8 * N
    while True:
        res, truncated = _split_once(phi, psi, N, keep_reduced, shortcut)
        if not truncated:
            return res
        check, _ = _split_once(phi, psi, 2 * N, False, shortcut)
        if check.counts() == res.counts():
            return res
        N *= 2
        if N > cap:
            raise InstabilityError(f"split counts unstable up to precision {cap}")


def split_trivial(mf: MatFac, N: int | None = None, **kw) -> SplitResult:
    return split_pair(mf.phi, mf.psi, mf.f, N, **kw)


def _find_complement(A: RelMatrix, f: Poly) -> RelMatrix:
    e, q = A.basis.e, A.basis.q
    for k in range(q + 1):
        if build_rel_matrix(f**k, e).permuted(A.labels) == A:
            return build_rel_matrix(f ** (q - k), e).permuted(A.labels)
    raise ValueError("cannot infer the complementary factor; pass complement=")


def count_free_summands(
    A: PolyMatrix,
    f: Poly,
    N: int | None = None,
    *,
    complement: PolyMatrix | None = None,
    **kw,
) -> int:
    """Number of free ``S/f``-summands of ``Cok(A)``.

    ``complement`` is the matrix ``B`` with ``AB = BA = fI``; for a matrix of
    relations ``M(f^k, e)`` it is inferred as ``M(f^(q-k), e)``.
    """
    if complement is None:
        if not isinstance(A, RelMatrix):
            raise ValueError("complement is required for a plain PolyMatrix")
        complement = _find_complement(A, f)
    if N is None:
        q = A.basis.q if isinstance(A, RelMatrix) else 1
        N = default_precision(f, q)
    return split_pair(A, complement, f, N, **kw).t


def count_power_summands(f: Poly, k: int, e: int, N: int | None = None, **kw) -> SplitResult:
    """Split ``(M(f^k, e), M(f^(q-k), e))``; ``t`` counts free summands of ``F_*^e(S/f^k)`` over ``S/f``."""
    q = f.ring.p**e
    if not 0 <= k <= q:
        raise ValueError(f"k must lie in [0, {q}]")
    phi = build_rel_matrix(f**k, e)
    psi = build_rel_matrix(f ** (q - k), e)
    if N is None:
        N = default_precision(f, q)
    return split_pair(phi, psi, f, N, **kw)
