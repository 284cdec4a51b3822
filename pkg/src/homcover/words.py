"""Free group words, automorphisms of F_n and their abelianization.

A word is a tuple of nonzero integers: ``i`` is the i-th generator (1-based),
``-i`` its inverse.  In text, lowercase letters are generators and uppercase
letters are inverses, so ``"Aba"`` is ``(-1, 2, 1)``.

The abelianization matrix uses the column convention: column ``j`` holds the
abelianized image of generator ``j``, so ``sigma @ ab(w) == ab(f(w))``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Word = tuple

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


class ParseError(ValueError):
    """Malformed automorphism or word text."""

    def __init__(self, msg, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + msg)
        self.line = line
        self.column = column


def reduce(w: Iterable[int]) -> Word:
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return multiply(u, v, inverse(u), inverse(v))


def nested_commutator(words: Sequence[Sequence[int]]) -> Word:
    """Right-normed ``[w_1, [w_2, [..., w_k]]]``; a single word is returned as is."""
    out = reduce(words[-1])
    for w in reversed(words[:-1]):
        out = commutator(w, out)
    return out


def power_word(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power_word(inverse(w), -k)
    return reduce(tuple(w) * k)


def parse_word(text: str, rank: int | None = None) -> Word:
    letters = []
    for col, ch in enumerate(text, start=1):
        if ch.isspace() or ch == "1":
            continue
        idx = ALPHABET.find(ch.lower())
        if idx < 0:
            raise ParseError(f"unexpected character {ch!r}", column=col)
        if rank is not None and idx >= rank:
            raise ParseError(f"letter {ch!r} exceeds rank {rank}", column=col)
        letters.append(idx + 1 if ch.islower() else -(idx + 1))
    return reduce(letters)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return "".join(ALPHABET[x - 1] if x > 0 else ALPHABET[-x - 1].upper() for x in w)


@dataclass(frozen=True)
class FreeAut:
    """Endomorphism of F_n given by the images of the generators.

    ``is_automorphism`` is ``None`` until :func:`check_automorphism` has run
    through :meth:`verified`.
    """

    rank: int
    images: tuple
    is_automorphism: bool | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(self.images) != self.rank:
            raise ValueError(f"expected {self.rank} images, got {len(self.images)}")
        imgs = []
        for w in self.images:
            w = reduce(w)
            if any(abs(x) > self.rank or x == 0 for x in w):
                raise ValueError(f"image {w} uses letters beyond rank {self.rank}")
            imgs.append(w)
        object.__setattr__(self, "images", tuple(imgs))

    def __call__(self, w):
        return apply_aut(self, w)

    def __eq__(self, other):
        if not isinstance(other, FreeAut):
            return NotImplemented
        return self.rank == other.rank and self.images == other.images

    def __hash__(self):
        return hash((self.rank, self.images))

    def verified(self) -> "FreeAut":
        return FreeAut(self.rank, self.images, check_automorphism(self))

    def __str__(self):
        return format_aut(self)


def identity_aut(n: int) -> FreeAut:
    return FreeAut(n, tuple((i,) for i in range(1, n + 1)), True)


def apply_aut(f: FreeAut, w: Sequence[int]) -> Word:
    out = []
    for x in w:
        if x == 0 or abs(x) > f.rank:
            raise IndexError(f"letter {x} out of range for rank {f.rank}")
        img = f.images[x - 1] if x > 0 else inverse(f.images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose(f: FreeAut, g: FreeAut) -> FreeAut:
    """``f o g``: first ``g``, then ``f``."""
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    return FreeAut(f.rank, tuple(apply_aut(f, w) for w in g.images))


def power(f: FreeAut, k: int) -> FreeAut:
    if k < 1:
        raise ValueError("power must be positive")
    # square-and-multiply; composition of powers of f commutes
    result, base = None, f
    while k:
        if k & 1:
            result = base if result is None else compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return FreeAut(result.rank, result.images, f.is_automorphism)


def abelianize(w: Sequence[int], rank: int | None = None) -> tuple:
    if rank is None:
        rank = max((abs(x) for x in w), default=0)
    v = [0] * rank
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def abelianization_matrix(f: FreeAut) -> np.ndarray:
    """Integer matrix (object dtype) of the action on H_1; columns are images."""
    M = np.zeros((f.rank, f.rank), dtype=object)
    for j, w in enumerate(f.images):
        M[:, j] = abelianize(w, f.rank)
    return M


def check_automorphism(f: FreeAut) -> bool:
    """Decide whether the images of ``f`` form a basis of F_n.

    The images generate F_n exactly when the Stallings folding of the bouquet
    of image loops is the rose with ``n`` petals; a generating ``n``-tuple of a
    Hopfian group is then a basis.
    """
    if any(len(w) == 0 for w in f.images):
        return False
    det = round(float(np.linalg.det(abelianization_matrix(f).astype(float))))
    if abs(det) != 1:
        return False
    return _folds_to_rose(f.images, f.rank)


def _folds_to_rose(words, n) -> bool:
    edges = []  # (source, generator, target)
    nxt = 1
    for w in words:
        cur = 0
        for pos, x in enumerate(w):
            end = 0 if pos == len(w) - 1 else nxt
            nxt += end != 0
            edges.append((cur, x, end) if x > 0 else (end, -x, cur))
            cur = end

    parent = list(range(nxt))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    while True:
        seen = {}
        merged = False
        for u, x, v in edges:
            u, v = find(u), find(v)
            for key, val in (((u, x, 1), v), ((v, x, -1), u)):
                other = seen.setdefault(key, val)
                other = find(other)
                if other != val:
                    a, b = sorted((other, val))
                    parent[b] = a
                    merged = True
        if not merged:
            break
    if {find(v) for v in range(nxt)} != {0}:
        return False
    labels = {x for _, x, _ in edges}
    distinct = {(find(u), x, find(v)) for u, x, v in edges}
    return labels == set(range(1, n + 1)) and len(distinct) == n


def nielsen_moves(n: int):
    """All elementary Nielsen automorphisms of F_n (as FreeAut)."""
    moves = []
    gens = [(i,) for i in range(1, n + 1)]
    for i in range(n):
        imgs = list(gens)
        imgs[i] = (-(i + 1),)
        moves.append(FreeAut(n, tuple(imgs), True))
        for j in range(n):
            if i == j:
                continue
            for e in (1, -1):
                imgs = list(gens)
                imgs[i] = reduce((i + 1, e * (j + 1)))
                moves.append(FreeAut(n, tuple(imgs), True))
                imgs = list(gens)
                imgs[i] = reduce((e * (j + 1), i + 1))
                moves.append(FreeAut(n, tuple(imgs), True))
    for i in range(n):
        for j in range(i + 1, n):
            imgs = list(gens)
            imgs[i], imgs[j] = imgs[j], imgs[i]
            moves.append(FreeAut(n, tuple(imgs), True))
    return moves


def random_automorphism(n: int, moves: int, rng: random.Random) -> FreeAut:
    """Product of ``moves`` random elementary Nielsen automorphisms."""
    pool = nielsen_moves(n)
    f = identity_aut(n)
    for _ in range(moves):
        f = compose(rng.choice(pool), f)
    return FreeAut(n, f.images, True)


def parse_aut(text: str) -> FreeAut:
    """Parse ``rank: n`` followed by one ``a -> Aba`` line per generator."""
    rank = None
    images = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if rank is None:
            head, sep, rest = line.partition(":")
            if not sep or head.strip().lower() != "rank":
                raise ParseError("expected 'rank: n'", line=lineno, column=1)
            try:
                rank = int(rest.strip())
            except ValueError:
                raise ParseError("rank must be an integer", line=lineno,
                                 column=len(head) + 2) from None
            if not 1 <= rank <= len(ALPHABET):
                raise ParseError(f"rank {rank} out of range", line=lineno)
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise ParseError("expected 'x -> word'", line=lineno, column=1)
        gen = lhs.strip()
        if len(gen) != 1 or not gen.islower() or ALPHABET.find(gen) < 0:
            raise ParseError(f"bad generator {gen!r}", line=lineno, column=1)
        idx = ALPHABET.index(gen)
        if idx >= rank:
            raise ParseError(f"generator {gen!r} exceeds rank {rank}", line=lineno, column=1)
        if idx in images:
            raise ParseError(f"generator {gen!r} given twice", line=lineno, column=1)
        offset = raw.find("->") + 3
        try:
            images[idx] = parse_word(rhs, rank)
        except ParseError as exc:
            col = None if exc.column is None else exc.column + offset - 1
            raise ParseError(str(exc).split(": ", 1)[-1], line=lineno, column=col) from None
    if rank is None:
        raise ParseError("empty automorphism text")
    missing = [ALPHABET[i] for i in range(rank) if i not in images]
    if missing:
        raise ParseError(f"missing images for {', '.join(missing)}")
    return FreeAut(rank, tuple(images[i] for i in range(rank)))


def format_aut(f: FreeAut) -> str:
    lines = [f"rank: {f.rank}"]
    for i, w in enumerate(f.images):
        lines.append(f"{ALPHABET[i]} -> {format_word(w)}")
    return "\n".join(lines) + "\n"
