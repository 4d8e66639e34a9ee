"""End-to-end acceptance checks, one test per criterion, each with its own time budget."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from ffrt.fedder import fedder_monomial_ideal, fedder_principal
from ffrt.field_poly import Poly, Ring
from ffrt.matfac import count_free_summands, default_precision
from ffrt.monomial import (
    decompose_monomial_quotient,
    diagonalize_monomial_matrix,
    eta_count,
    eta_free_count,
)
from ffrt.relmat import PolyMatrix, build_block_extended, build_rel_matrix
from ffrt.signature import (
    count_identity_extend_variable,
    sharp_count,
    signature_artin_schreier,
    signature_sharp,
    signature_uv_closed,
    signature_uv_empirical,
)

from reference_data import REFERENCE_ORDER, reference_matrix
from test_monomial import matrix_oracle


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


def monomial_grid():
    """(p, e, d) with n <= 3, d_j in 1..3, q <= 25 and max(d) + 1 < q."""
    for p, e in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2)]:
        q = p**e
        for n in (1, 2, 3):
            for d in product(range(1, 4), repeat=n):
                if max(d) + 1 < q:
                    yield p, e, d


def naive_free_count(d, k, q):
    out = 1
    for dj in d:
        out *= max(0, q - abs(dj * q - k * dj))
    return out


@pytest.mark.criterion(1, "matrix of relations for x^2+xy at p=3 matches the printed 9x9 matrix")
def test_criterion_01_matrix_fidelity():
    with Budget(1):
        R = Ring(3, 2, ("x", "y"))
        A = build_rel_matrix(R.parse("x^2 + x*y"), 1).permuted(REFERENCE_ORDER)
        assert PolyMatrix(R, 9, A.cols) == reference_matrix(R)


@pytest.mark.criterion(2, "block construction matches the printed block matrix and the direct build")
def test_criterion_02_block_fidelity():
    with Budget(1):
        Rx = Ring(3, 1, ("x",))
        A = build_block_extended([Rx.parse("x^2"), Rx.parse("x")], 1)
        assert A.labels == REFERENCE_ORDER
        assert PolyMatrix(A.ring, 9, A.cols) == reference_matrix(A.ring)
        direct = build_rel_matrix(A.ring.parse("x^2 + x*y"), 1).permuted(A.labels)
        assert A == direct


@pytest.mark.criterion(3, "x1x2 - uv: exact 2/3 and p=5 estimates within 1e-2 at e=8")
def test_criterion_03_uv_two_variables():
    with Budget(1):
        assert signature_uv_closed((1, 1)) == Fraction(2, 3)
        r = signature_uv_empirical((1, 1), 5, range(1, 9))
        assert r.estimates[-1].e == 8
        assert abs(r.last_ratio() - Fraction(2, 3)) < Fraction(1, 100)


@pytest.mark.criterion(4, "x^d + uv: exact 1/d for d=2..10 and p=3 estimates within 1e-2")
def test_criterion_04_uv_one_variable():
    with Budget(1):
        for d in range(2, 11):
            assert signature_uv_closed((d,)) == Fraction(1, d)
            r = signature_uv_empirical((d,), 3, range(1, 11))
            assert abs(r.last_ratio() - Fraction(1, d)) < Fraction(1, 100)


@pytest.mark.criterion(5, "x1...xn + z^2: exact 1/2^(n-1), exact counts for e<=6, zero when some d_j>=2")
def test_criterion_05_sharp():
    with Budget(1):
        for n in range(1, 6):
            r = signature_sharp((1,) * n, 3, range(1, 7))
            assert r.exact == Fraction(1, 2 ** (n - 1))
            for est in r.estimates:
                q = 3**est.e
                assert est.count == ((q - 1) // 2) ** n + ((q + 1) // 2) ** n
        for d in [(2,), (3,), (2, 1), (1, 3), (2, 2, 1), (1, 1, 2, 1)]:
            r = signature_sharp(d, 3, range(1, 7))
            assert r.exact == 0
            big = sum(dj >= 2 for dj in d)
            for est in r.estimates:
                q = 3**est.e
                # each coordinate with d_j >= 2 contributes a factor of at most 1
                assert est.count <= 2 * ((q + 1) // 2) ** (len(d) - big)
                assert est.count == sum(naive_free_count(d, k, q) for k in ((q - 1) // 2, (q + 1) // 2))
        for p in (5, 7):
            assert sharp_count((1, 2), p, 3) == sum(
                naive_free_count((1, 2), k, p**3) for k in ((p**3 - 1) // 2, (p**3 + 1) // 2)
            )


@pytest.mark.criterion(6, "eta multiset equals diagonalization of M(f^k) on the monomial grid")
def test_criterion_06_eta_oracle():
    cases = 0
    with Budget(120):
        for p, e, d in monomial_grid():
            q = p**e
            R = Ring(p, len(d))
            for k in range(1, q):
                A = build_rel_matrix(R.monomial(tuple(k * dj for dj in d)), e)
                assert diagonalize_monomial_matrix(A) == eta_count(d, k, p, e), (p, e, d, k)
                cases += 1
    assert cases > 1000


@pytest.mark.criterion(7, "M(f+g)=M(f)+M(g), M(fg)=M(f)M(g), M(f^k)M(f^(q-k))=fI on random inputs")
def test_criterion_07_algebra_laws():
    rng = random.Random(20261015)

    def rand_poly(R):
        while True:
            terms = {
                tuple(rng.randint(0, 3) for _ in range(R.nvars)): rng.randint(1, R.p - 1)
                for _ in range(rng.randint(1, 4))
            }
            f = Poly(R, terms)
            if not f.is_zero():
                return f

    checked = 0
    with Budget(60):
        while checked < 240:
            p = rng.choice([2, 3])
            R = Ring(p, rng.randint(1, 2))
            f, g = rand_poly(R), rand_poly(R)
            k = rng.randint(1, p - 1) if p > 2 else 1
            Mf, Mg = build_rel_matrix(f, 1), build_rel_matrix(g, 1)
            if not (f + g).is_zero():
                assert build_rel_matrix(f + g, 1) == Mf + Mg
            assert build_rel_matrix(f * g, 1) == Mf @ Mg
            assert (build_rel_matrix(f**k, 1) @ build_rel_matrix(f ** (p - k), 1)).is_scalar(f)
            checked += 1


@pytest.mark.criterion(8, "pivoting free counts equal eta_k(d) at default precision, stable under 2N")
def test_criterion_08_pivot_bridge():
    with Budget(120):
        for p, e, d in monomial_grid():
            q = p**e
            R = Ring(p, len(d))
            f = R.monomial(d)
            powers = {k: build_rel_matrix(f**k, e) for k in range(1, q)}
            N = default_precision(f, q)
            for k in range(1, q):
                A, B = powers[k], powers[q - k]
                t = count_free_summands(A, f, complement=B)
                assert t == eta_free_count(d, k, q) == naive_free_count(d, k, q), (p, e, d, k)
                assert count_free_summands(A, f, 2 * N, complement=B) == t


@pytest.mark.criterion(9, "monomial ideal decomposition totals q^n and matches the matrix oracle")
def test_criterion_09_ideal_decomposition():
    rng = random.Random(9)
    with Budget(10):
        dec = decompose_monomial_quotient([(2, 0), (1, 1)], 2, 1)
        assert dict(dec.summands) == {((1, 0),): 2, ((1, 0), (0, 1)): 1, ((0, 0),): 1}
        assert dec.summands == matrix_oracle([(2, 0), (1, 1)], 2, 1)
        for _ in range(40):
            n = rng.randint(1, 3)
            p = rng.choice([2, 3, 5])
            e = rng.randint(1, 3 if p == 2 else 2)
            gens = []
            while len(gens) < rng.randint(1, 3) or not gens:
                g = tuple(rng.randint(0, 4) for _ in range(n))
                if any(g):
                    gens.append(g)
            dec = decompose_monomial_quotient(gens, p, e)
            assert dec.total() == (p**e) ** n
            if (p**e) ** n <= 81:
                assert dec.summands == matrix_oracle(gens, p, e)


@pytest.mark.criterion(10, "Artin-Schreier with f=x, d=1 gives signature 1 for p in {2,3,5}")
def test_criterion_10_artin_schreier():
    with Budget(10):
        for p in (2, 3, 5):
            assert signature_artin_schreier(Ring(p, 1).var(0), 1) == 1


@pytest.mark.criterion(11, "Fedder: x1...xn pure, x^2 not pure at p=2, principal and ideal paths agree")
def test_criterion_11_fedder():
    rng = random.Random(11)
    with Budget(10):
        for p in (2, 3, 5):
            for n in range(1, 5):
                assert fedder_principal(Ring(p, n).monomial((1,) * n)).f_pure
                assert fedder_monomial_ideal([(1,) * n], p).f_pure
        assert not fedder_principal(Ring(2, 1).parse("x1^2")).f_pure
        for _ in range(100):
            n = rng.randint(1, 4)
            p = rng.choice([2, 3, 5])
            d = tuple(rng.randint(0, 4) for _ in range(n))
            if not any(d):
                d = (1,) + d[1:]
            a = fedder_principal(Ring(p, n).monomial(d))
            b = fedder_monomial_ideal([d], p)
            assert (a.f_pure, a.witness) == (b.f_pure, b.witness)
            assert a.f_pure == all(dj <= 1 for dj in d)


@pytest.mark.criterion(12, "free rank after adjoining a variable is q times the original, two ways")
def test_criterion_12_count_identity():
    with Budget(60):
        for p, e, d in monomial_grid():
            rec = count_identity_extend_variable(d, p, e)
            assert rec.holds, rec
            assert rec.right == p**e * naive_free_count(d, 1, p**e)
