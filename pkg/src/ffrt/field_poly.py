"""Prime fields and sparse multivariate polynomials over them.

A :class:`Poly` is an immutable mapping from exponent tuples to nonzero
residues mod ``p``.  When the owning :class:`Ring` carries a truncation
bound ``N`` every product discards terms of total degree ``>= N``, which
turns the ring into ``K[[x]] / m^N`` and lets the same class stand in for
truncated power series.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

Exponents = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class Ring:
    """``F_p[x_1..x_n]``, or ``F_p[[x_1..x_n]] / m^trunc`` when ``trunc`` is set."""

    p: int
    nvars: int
    names: tuple[str, ...] = ()
    trunc: int | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p!r}")
        if self.nvars < 0:
            raise ValueError("variable count must be non-negative")
        if not self.names:
            object.__setattr__(self, "names", default_names(self.nvars))
        if len(self.names) != self.nvars:
            raise ValueError("need one name per variable")
        if self.trunc is not None and self.trunc < 1:
            raise ValueError("truncation bound must be >= 1")

    # construction helpers

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c: int) -> Poly:
        return self.monomial((0,) * self.nvars, c)

    def var(self, i: int) -> Poly:
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(tuple(exps))

    def gens(self) -> tuple[Poly, ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def monomial(self, exps: Iterable[int], c: int = 1) -> Poly:
        exps = tuple(exps)
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ValueError(f"bad exponent vector {exps} for {self.nvars} variables")
        return Poly(self, {exps: c})

    def with_trunc(self, trunc: int | None) -> Ring:
        return replace(self, trunc=trunc)

    def extend(self, *names: str) -> Ring:
        """Ring with extra variables appended (names made unique)."""
        taken = set(self.names)
        new = []
        for name in names:
            base, i = name, 1
            while name in taken:
                name = f"{base}{i}"
                i += 1
            taken.add(name)
            new.append(name)
        return Ring(self.p, self.nvars + len(new), self.names + tuple(new), self.trunc)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self)

    def __repr__(self):
        base = f"F_{self.p}[{','.join(self.names)}]"
        return base if self.trunc is None else f"{base}/m^{self.trunc}"


def _mul_terms(a: Mapping, b: Mapping, p: int, trunc: int | None) -> tuple[dict, bool]:
    """Product of two term dicts; the flag reports whether truncation dropped anything."""
    out: dict = {}
    dropped = False
    if trunc is None:
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = out.get(e, 0) + ca * cb
    else:
        bdeg = [(eb, cb, sum(eb)) for eb, cb in b.items()]
        for ea, ca in a.items():
            da = sum(ea)
            for eb, cb, db in bdeg:
                if da + db >= trunc:
                    dropped = True
                    continue
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = out.get(e, 0) + ca * cb
    return {e: c % p for e, c in out.items() if c % p}, dropped


class Poly:
    """Sparse polynomial over ``F_p``; immutable after construction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponents, int]):
        p = ring.p
        clean = {}
        for e, c in terms.items():
            c %= p
            if not c:
                continue
            if ring.trunc is not None and sum(e) >= ring.trunc:
                continue
            clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> Poly:
        # terms already reduced and truncated
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading_exponents(self) -> Exponents:
        return max(self.terms, key=grlex_key)

    # arithmetic

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"ambient mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly._raw(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms, _ = _mul_terms(self.terms, other.terms, self.ring.p, self.ring.trunc)
        return Poly._raw(self.ring, terms)

    __rmul__ = __mul__

    def mul_tracked(self, other: Poly) -> tuple[Poly, bool]:
        """Product plus a flag telling whether truncation discarded terms."""
        other = self._coerce(other)
        terms, dropped = _mul_terms(self.terms, other.terms, self.ring.p, self.ring.trunc)
        return Poly._raw(self.ring, terms), dropped

    def scale(self, c: int) -> Poly:
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Exponents, c: int = 1) -> Poly:
        return self * self.ring.monomial(exps, c)

    # conversions

    def embed(self, ring: Ring, offset: int = 0) -> Poly:
        """Image in ``ring`` with this ring's variables placed at ``offset``."""
        if ring.p != self.ring.p or offset + self.ring.nvars > ring.nvars:
            raise ValueError(f"cannot embed {self.ring!r} into {ring!r}")
        pad_l = (0,) * offset
        pad_r = (0,) * (ring.nvars - offset - self.ring.nvars)
        return Poly(ring, {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def truncate(self, trunc: int | None) -> Poly:
        return Poly(self.ring.with_trunc(trunc), self.terms)

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.p == other.ring.p and self.ring.nvars == other.ring.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.p, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponents, int]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={self.ring.p})"


def grlex_key(exps: Exponents) -> tuple:
    return (sum(exps), exps)


def format_monomial(exps: Exponents, names: tuple[str, ...]) -> str:
    parts = []
    for name, a in zip(names, exps):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) or "1"


def format_poly(f: Poly) -> str:
    """Canonical string: descending graded-lex, coefficients in [1, p-1]."""
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms():
        mono = format_monomial(e, f.ring.names)
        if mono == "1":
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


def is_local_unit(a: Poly) -> bool:
    return a.constant() != 0


def local_inverse(a: Poly, N: int) -> Poly:
    """Inverse of a power-series unit modulo terms of total degree ``>= N``."""
    if not is_local_unit(a):
        raise ValueError(f"{a} is not a unit in the local ring")
    ring = a.ring.with_trunc(N)
    a = a.truncate(N)
    p = ring.p
    b = ring.const(pow(a.constant(), p - 2, p))
    # Newton iteration b <- b(2 - ab) doubles the correct precision each step
    prec = 1
    while prec < N:
        b = b * (2 - a * b)
        prec *= 2
    return b


def _check_ring(ring: Ring, name: str) -> int:
    if name in ring.names:
        return ring.names.index(name)
    if ring.nvars <= 3:
        aliases = {"x": 0, "y": 1, "z": 2}
        if name in aliases and aliases[name] < ring.nvars:
            return aliases[name]
    if name.startswith("x") and name[1:].isdigit():
        i = int(name[1:]) - 1
        if 0 <= i < ring.nvars:
            return i
    raise ValueError(f"unknown variable {name!r} for ring {ring!r}")


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``+ - * ^`` expressions with integer literals and ring variables."""
    src = text.replace("^", "**").strip()
    if not src:
        raise ValueError("empty polynomial expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return ring.const(node.value)
        if isinstance(node, ast.Name):
            return ring.var(_check_ring(ring, node.id))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int):
                    raise ValueError("exponents must be integer literals")
                return walk(node.left) ** node.right.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)
