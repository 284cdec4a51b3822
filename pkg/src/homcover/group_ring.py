"""Exact arithmetic in the group ring Z[Z^r] (integer Laurent polynomials).

Exponent vectors are dense integer tuples.  Characters are rational rotation
vectors ``q``; the character sends ``v`` to ``exp(2 pi i <q, v>)``.
"""
from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

SPECIALIZE_TOL = 1e-10
VARIABLES = "xyzwuvst"


def _var(i):
    return VARIABLES[i] if i < len(VARIABLES) else f"x{i}"


class LaurentPoly:
    """Finitely supported function Z^r -> Z, immutable."""

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[tuple, int] | Iterable = ()):
        self.rank = rank
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for v, c in items:
            v = tuple(int(x) for x in v)
            if len(v) != rank:
                raise ValueError(f"exponent {v} has wrong length for rank {rank}")
            c = int(c)
            if c:
                clean[v] = clean.get(v, 0) + c
                if not clean[v]:
                    del clean[v]
        self.terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def zero(cls, rank):
        return cls(rank)

    @classmethod
    def one(cls, rank):
        return cls(rank, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, int):
                return LaurentPoly(self.rank, {(0,) * self.rank: other})
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for v, c in other.terms.items():
            out[v] = out.get(v, 0) + c
        return LaurentPoly(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.rank, {v: -c for v, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = {}
        for v, c in self.terms.items():
            for w, d in other.terms.items():
                key = tuple(a + b for a, b in zip(v, w))
                out[key] = out.get(key, 0) + c * d
        return LaurentPoly(self.rank, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers only exist for monomials")
        out = LaurentPoly.one(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(self.rank, {(0,) * self.rank: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"

    def support(self) -> set:
        return set(self.terms)

    def coefficient(self, exponent) -> int:
        return self.terms.get(tuple(exponent), 0)

    def restrict(self, exponents) -> "LaurentPoly":
        keep = set(map(tuple, exponents))
        return LaurentPoly(self.rank, {v: c for v, c in self.terms.items() if v in keep})


def l1_norm(p: LaurentPoly) -> int:
    return sum(abs(c) for c in p.terms.values())


def l2_norm_sq(p: LaurentPoly) -> int:
    return sum(c * c for c in p.terms.values())


def sigma_twist(p: LaurentPoly, sigma) -> LaurentPoly:
    """Replace every exponent ``v`` by ``sigma @ v``."""
    S = [[int(x) for x in row] for row in np.asarray(sigma, dtype=object)]
    if len(S) != p.rank or any(len(row) != p.rank for row in S):
        raise ValueError(f"sigma must be {p.rank}x{p.rank}")
    out = {}
    for v, c in p.terms.items():
        w = tuple(sum(S[i][j] * v[j] for j in range(p.rank)) for i in range(p.rank))
        out[w] = out.get(w, 0) + c
    return LaurentPoly(p.rank, out)


class Character:
    """Finite-image character of Z^r given by rational angles in [0, 1)."""

    __slots__ = ("q",)

    def __init__(self, q):
        self.q = tuple(Fraction(x) % 1 for x in q)

    @property
    def rank(self):
        return len(self.q)

    @property
    def order(self) -> int:
        return math.lcm(*(x.denominator for x in self.q)) if self.q else 1

    def __call__(self, v) -> complex:
        phase = sum((x * int(a) for x, a in zip(self.q, v)), Fraction(0)) % 1
        return cmath.exp(2j * math.pi * float(phase))

    def __eq__(self, other):
        return isinstance(other, Character) and self.q == other.q

    def __hash__(self):
        return hash(self.q)

    def __repr__(self):
        return f"Character(({', '.join(str(x) for x in self.q)}))"


def specialize(p: LaurentPoly, psi: Character) -> complex:
    if psi.rank != p.rank:
        raise ValueError(f"character rank {psi.rank} != polynomial rank {p.rank}")
    return sum((c * psi(v) for v, c in p.terms.items()), 0j)


def parseval_check(p: LaurentPoly, N: int):
    """Return ``(||p||_2^2, mean of |p(psi)|^2 over the N-torsion characters)``."""
    if N < 1:
        raise ValueError("grid size must be positive")
    exps = list(p.terms)
    coeffs = np.array([p.terms[v] for v in exps], dtype=float)
    if not exps:
        return 0, 0.0
    E = np.array(exps, dtype=np.int64) % N
    total = 0.0
    count = 0
    for q in itertools.product(range(N), repeat=p.rank):
        phase = (E @ np.array(q, dtype=np.int64)) % N
        val = np.dot(coeffs, np.exp(2j * np.pi * phase / N))
        total += abs(val) ** 2
        count += 1
    return l2_norm_sq(p), total / count


def support_diameter(p: LaurentPoly) -> int:
    """Largest side of the bounding box of the support (0 for <= 1 term)."""
    if not p.terms:
        return 0
    cols = list(zip(*p.terms))
    return max(max(c) - min(c) for c in cols)


def character_grid(rank: int, N: int):
    """Characters of denominator dividing ``N`` in lexicographic order."""
    for num in itertools.product(range(N), repeat=rank):
        yield Character(tuple(Fraction(a, N) for a in num))


def find_large_character(p: LaurentPoly, threshold: float, denominators):
    """First finite-image character with ``|p(psi)| > threshold``, or ``None``.

    Grids are scanned in the given denominator order; characters already seen
    on an earlier grid are skipped.
    """
    seen = set()
    for N in denominators:
        for psi in character_grid(p.rank, N):
            if psi in seen:
                continue
            seen.add(psi)
            if abs(specialize(p, psi)) > threshold:
                return psi
    return None


def format_laurent(p: LaurentPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    # constant first, then by total degree so that "1 + x^-1" reads naturally
    order = sorted(p.terms, key=lambda v: (any(v) and 1, sum(abs(a) for a in v), [-a for a in v]))
    for v in order:
        c = p.terms[v]
        mono = "*".join(
            _var(i) if a == 1 else f"{_var(i)}^{a}" for i, a in enumerate(v) if a
        )
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_laurent(text: str, rank: int) -> LaurentPoly:
    """Inverse of :func:`format_laurent`, e.g. ``"3 - 2*x^-1*y^2"``."""
    names = {_var(i): i for i in range(rank)}
    text = text.replace(" ", "")
    if text in ("", "0"):
        return LaurentPoly.zero(rank)
    terms = []
    i = 0
    chunks = []
    start = 0
    for i, ch in enumerate(text):
        if ch in "+-" and i > start and text[i - 1] != "^":
            chunks.append(text[start:i])
            start = i
    chunks.append(text[start:])
    for chunk in chunks:
        sign = -1 if chunk.startswith("-") else 1
        chunk = chunk.lstrip("+-")
        coeff = 1
        exp = [0] * rank
        for factor in chunk.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, e = factor.partition("^")
            if name not in names:
                raise ValueError(f"unknown variable {name!r}")
            exp[names[name]] += int(e) if e else 1
        terms.append((tuple(exp), sign * coeff))
    return LaurentPoly(rank, terms)


def laurent_to_json(p: LaurentPoly):
    return [[list(v), c] for v, c in p.terms.items()]


def laurent_from_json(data, rank: int) -> LaurentPoly:
    return LaurentPoly(rank, [(tuple(v), c) for v, c in data])


class GroupRingMatrix:
    """Square matrix over Z[Z^r]; rows and columns are indexed alike."""

    __slots__ = ("rank", "rows")

    def __init__(self, rank: int, rows):
        self.rank = rank
        self.rows = [list(r) for r in rows]
        m = len(self.rows)
        for r in self.rows:
            if len(r) != m:
                raise ValueError("matrix must be square")
            for x in r:
                if x.rank != rank:
                    raise ValueError("all entries must share the same rank")

    @classmethod
    def zeros(cls, rank, m):
        z = LaurentPoly.zero(rank)
        return cls(rank, [[z] * m for _ in range(m)])

    @classmethod
    def identity(cls, rank, m):
        out = cls.zeros(rank, m)
        for i in range(m):
            out.rows[i][i] = LaurentPoly.one(rank)
        return out

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, GroupRingMatrix) and self.rank == other.rank
                and self.rows == other.rows)

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        m = self.dim
        if other.dim != m or other.rank != self.rank:
            raise ValueError("shape mismatch")
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = {}
                for k in range(m):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if not a.terms or not b.terms:
                        continue
                    for v, c in a.terms.items():
                        for w, d in b.terms.items():
                            key = tuple(x + y for x, y in zip(v, w))
                            acc[key] = acc.get(key, 0) + c * d
                row.append(LaurentPoly(self.rank, acc))
            out.append(row)
        return GroupRingMatrix(self.rank, out)

    def twist(self, sigma) -> "GroupRingMatrix":
        return GroupRingMatrix(self.rank, [[sigma_twist(x, sigma) for x in r] for r in self.rows])

    def trace(self) -> LaurentPoly:
        out = LaurentPoly.zero(self.rank)
        for i in range(self.dim):
            out = out + self.rows[i][i]
        return out

    def is_zero(self) -> bool:
        return all(not x.terms for r in self.rows for x in r)

    def specialize(self, psi: Character) -> np.ndarray:
        return specialize_matrix(self, psi)

    def format(self) -> str:
        cells = [[format_laurent(x) for x in r] for r in self.rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"GroupRingMatrix(rank={self.rank}, dim={self.dim})"


def specialize_matrix(A: GroupRingMatrix, psi: Character) -> np.ndarray:
    return np.array([[specialize(x, psi) for x in r] for r in A.rows], dtype=complex)
