"""Free nilpotent quotients through the truncated Magnus expansion.

``magnus(w, c)`` sends generator ``i`` to ``1 + X_i`` in the ring of
noncommuting power series truncated above degree ``c``.  Its kernel on the
free group is the ``(c+1)``-st term of the lower central series, so level
``i`` below (``pi_level(w, i) = magnus(w, i)``) kills exactly the ``i``-fold
nested commutators and everything deeper.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .graphs import BudgetError
from .transition import TransitionGraph, closed_walks, cycle_word
from .words import FreeAut, nested_commutator, power_word

COEFF_BUDGET = 10**6


@dataclass(frozen=True)
class NilpotentElement:
    """Truncated Magnus series; ``terms`` excludes the constant term 1."""

    rank: int
    cls: int
    terms: tuple  # sorted ((word, coeff), ...), words are tuples of 0-based generators

    @property
    def is_identity(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return dict(self.terms)

    def degree_part(self, d: int) -> dict:
        return {u: c for u, c in self.terms if len(u) == d}

    def __mul__(self, other: "NilpotentElement") -> "NilpotentElement":
        _same(self, other)
        return _pack(self.rank, self.cls, _mul({(): 1, **self.as_dict()},
                                               {(): 1, **other.as_dict()}, self.cls))

    def format(self) -> str:
        if not self.terms:
            return "1"
        parts = []
        for u, c in sorted(self.terms, key=lambda t: (len(t[0]), t[0])):
            mono = "".join(f"X{j + 1}" for j in u)
            parts.append(f"{'+' if c > 0 else '-'} {abs(c) if abs(c) != 1 else ''}{mono}")
        return "1 " + " ".join(parts)


def _same(a, b):
    if a.rank != b.rank or a.cls != b.cls:
        raise ValueError("elements live in different nilpotent quotients")


def _pack(rank, cls, d) -> NilpotentElement:
    return NilpotentElement(rank, cls, tuple(sorted((u, c) for u, c in d.items() if u and c)))


def _mul(s, t, c):
    out = {}
    for u, a in s.items():
        lu = len(u)
        for v, b in t.items():
            if lu + len(v) <= c:
                key = u + v
                out[key] = out.get(key, 0) + a * b
    return {u: x for u, x in out.items() if x}


@lru_cache(maxsize=None)
def _letter(x: int, c: int):
    i = abs(x) - 1
    if x > 0:
        return {(): 1, (i,): 1}
    # (1 + X)^-1 = 1 - X + X^2 - ...
    return {(i,) * k: (-1) ** k for k in range(c + 1)}


def _check_budget(rank, c):
    if rank ** c > COEFF_BUDGET:
        raise BudgetError(f"{rank}^{c} Magnus coefficients exceed the budget")


def magnus_series(w, rank: int, c: int) -> dict:
    if c < 1:
        raise ValueError("class must be positive")
    _check_budget(rank, c)
    out = {(): 1}
    for x in w:
        out = _mul(out, _letter(x, c), c)
    return out


def magnus(w, c: int, rank: int | None = None) -> NilpotentElement:
    if rank is None:
        rank = max((abs(x) for x in w), default=1)
    return _pack(rank, c, magnus_series(w, rank, c))


def pi_level(w, i: int, rank: int | None = None) -> NilpotentElement:
    """Image of ``w`` in the free nilpotent quotient of class ``i``."""
    if i < 1:
        raise ValueError("level must be positive")
    return magnus(w, i, rank)


def apply_endomorphism(g: NilpotentElement, f: FreeAut) -> NilpotentElement:
    """``pi(f(w))`` from ``pi(w)`` by substituting ``X_j -> magnus(f(x_j)) - 1``."""
    c = g.cls
    Y = []
    for img in f.images:
        s = magnus_series(img, f.rank, c)
        s.pop((), None)
        Y.append(s)
    memo = {(): {(): 1}}

    def prod(u):
        if u not in memo:
            memo[u] = _mul(prod(u[:-1]), Y[u[-1]], c)
        return memo[u]

    out = {(): 1}
    for u, a in g.terms:
        for v, b in prod(u).items():
            out[v] = out.get(v, 0) + a * b
    return _pack(g.rank, c, out)


def congruence_check(p: int, i: int, generators, rank: int | None = None) -> bool:
    """``[a_1^p, ..., a_i^p]`` against ``p^i [a_1, ..., a_i]`` one level past the commutators.

    Both sides vanish below degree ``i`` and their degree-``i`` parts differ by
    the factor ``p^i``; equivalently ``lhs * rhs^(-p^i)`` is trivial at class ``i``.
    """
    gens = [tuple(g) for g in generators]
    if len(gens) != i:
        raise ValueError(f"need {i} generators")
    if rank is None:
        rank = max(abs(x) for g in gens for x in g)
    lhs = nested_commutator([power_word(g, p) for g in gens])
    rhs = nested_commutator(gens)
    L, R = magnus(lhs, i, rank), magnus(rhs, i, rank)
    if any(len(u) < i for u, _ in L.terms + R.terms):
        return False
    Ltop, Rtop = L.degree_part(i), R.degree_part(i)
    scaled = {u: p ** i * c for u, c in Rtop.items()}
    if Ltop != scaled:
        return False
    diff = magnus(lhs + power_word(rhs, -(p ** i)), i, rank)
    return diff.is_identity


# formal integer combinations of nilpotent elements ------------------------

def _add_into(acc: dict, g: NilpotentElement, c: int):
    v = acc.get(g, 0) + c
    if v:
        acc[g] = v
    else:
        acc.pop(g, None)


def nilpotent_trace(T: TransitionGraph, sub, i: int, k: int, method: str = "enumerate") -> dict:
    """``sum_gamma s(gamma) [pi_i(G(gamma))]`` over based length-``k`` cycles of ``sub``."""
    if method == "matrix":
        return _trace_by_matrix(T, sub, i, k)
    acc = {}
    for c in closed_walks(T, k, sub):
        sign = 1
        for e in c.edges:
            sign *= T.edges[e].sign
        _add_into(acc, pi_level(cycle_word(T, c), i, T.rank), sign)
    return acc


def _trace_by_matrix(T: TransitionGraph, sub, i: int, k: int) -> dict:
    r = T.rank
    edges = range(len(T.edges)) if sub is None else sorted(sub)
    verts = sorted({T.edges[e].source for e in edges} | {T.edges[e].target for e in edges})
    A = {}  # (u, v) -> {element: coeff}
    for e in edges:
        ed = T.edges[e]
        _add_into(A.setdefault((ed.source, ed.target), {}), pi_level(ed.word, i, r), ed.sign)
    f = T.induced_aut
    img_cache = {}

    def fimg(g):
        if g not in img_cache:
            img_cache[g] = apply_endomorphism(g, f)
        return img_cache[g]

    B = {key: dict(val) for key, val in A.items() if val}
    for _ in range(k - 1):
        nxt = {}
        for (s, u), entry in B.items():
            twisted = [(fimg(g), c) for g, c in entry.items()]
            for v in verts:
                a = A.get((u, v))
                if not a:
                    continue
                cell = nxt.setdefault((s, v), {})
                for g, c in twisted:
                    for h, d in a.items():
                        _add_into(cell, g * h, c * d)
        B = {key: val for key, val in nxt.items() if val}
    acc = {}
    for v in verts:
        for g, c in B.get((v, v), {}).items():
            _add_into(acc, g, c)
    return acc


@dataclass(frozen=True)
class LevelVerdict:
    level: int | None       # None when the budget is exceeded
    k: int | None = None
    witness: NilpotentElement | None = None
    coefficient: int = 0

    @property
    def exceeded(self) -> bool:
        return self.level is None


def enfeoffment_level(T: TransitionGraph, sub, i_max: int, k_max: int,
                      method: str = "enumerate") -> LevelVerdict:
    """Smallest level with a nonvanishing nilpotent trace for some ``k <= k_max``."""
    for i in range(1, i_max + 1):
        for k in range(1, k_max + 1):
            tr = nilpotent_trace(T, sub, i, k, method)
            if tr:
                g, c = min(tr.items(), key=lambda gc: gc[0].terms)
                return LevelVerdict(i, k, g, c)
    return LevelVerdict(None)
