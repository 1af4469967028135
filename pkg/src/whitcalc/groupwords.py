"""Free-group words, truncated Magnus expansion, and longitudes from tree data.

A word is a tuple of nonzero ints: ``i`` is x_i and ``-i`` is x_i^{-1}.
Commutators follow the convention [a, b] = a b a^-1 b^-1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .freelie import LieElement, NotLieError, Word, project_to_lyndon
from .treecalc import RootedTree, TreeSum, check_tree, reroot_all, reroot_twisted


def free_reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class GroupWord:
    m: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = free_reduce(int(x) for x in self.letters)
        if any(abs(x) > self.m for x in letters):
            raise ValueError(f"letter out of range for m={self.m}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, m: int) -> "GroupWord":
        return cls(m, ())

    @classmethod
    def generator(cls, m: int, i: int) -> "GroupWord":
        return cls(m, (i,))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if self.m != other.m:
            raise ValueError("generator count mismatch")
        return GroupWord(self.m, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.m, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(self.m, base.letters * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def conjugate(self, g: "GroupWord") -> "GroupWord":
        """g w g^-1."""
        return g * self * g.inverse()

    def exponent_sum(self, i: int) -> int:
        return sum(1 if x == i else -1 if x == -i else 0 for x in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{x}" if x > 0 else f"X{-x}" for x in self.letters)


def commutator(a: GroupWord, b: GroupWord) -> GroupWord:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


_TOKEN = re.compile(r"\s*(\[|\]|,|[xX]\d+|1)")


def parse_word(text: str, m: int) -> GroupWord:
    """Parse ``"x1 x2 X1 X2"`` (capital = inverse), with ``[u, v]`` commutator sugar."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        tokens.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def product_until(k: int, stop: set) -> tuple[GroupWord, int]:
        w = GroupWord.identity(m)
        while k < len(tokens) and tokens[k] not in stop:
            tok = tokens[k]
            if tok == "[":
                a, k = product_until(k + 1, {","})
                if k >= len(tokens) or tokens[k] != ",":
                    raise ValueError("expected ',' in commutator")
                b, k = product_until(k + 1, {"]"})
                if k >= len(tokens) or tokens[k] != "]":
                    raise ValueError("expected ']' in commutator")
                w = w * commutator(a, b)
                k += 1
            elif tok == "1":
                k += 1
            elif tok in (",", "]"):
                raise ValueError(f"unexpected {tok!r}")
            else:
                i = int(tok[1:])
                w = w * GroupWord(m, (i if tok[0] == "x" else -i,))
                k += 1
        return w, k

    w, k = product_until(0, set())
    if k != len(tokens):
        raise ValueError("unbalanced word expression")
    return w


# ---------------------------------------------------------------- Magnus expansion


@dataclass
class MagnusPoly:
    """Truncated noncommutative power series over Z (monomials up to degree q)."""

    m: int
    q: int
    coords: dict[Word, int] = field(default_factory=dict)

    @classmethod
    def one(cls, m: int, q: int) -> "MagnusPoly":
        return cls(m, q, {(): 1})

    def __mul__(self, other: "MagnusPoly") -> "MagnusPoly":
        q = min(self.q, other.q)
        out: dict = {}
        for u, a in self.coords.items():
            for v, b in other.coords.items():
                if len(u) + len(v) <= q:
                    w = u + v
                    out[w] = out.get(w, 0) + a * b
        return MagnusPoly(self.m, q, {w: c for w, c in out.items() if c})

    def __eq__(self, other):
        if not isinstance(other, MagnusPoly):
            return NotImplemented
        return (self.m, self.q, self.coords) == (other.m, other.q, other.coords)

    def homogeneous(self, d: int) -> dict[Word, int]:
        return {w: c for w, c in self.coords.items() if len(w) == d}

    def lowest_nonconstant_degree(self) -> int | None:
        degs = [len(w) for w, c in self.coords.items() if w and c]
        return min(degs) if degs else None

    def coefficient(self, w: Word) -> int:
        return self.coords.get(tuple(w), 0)


def _times_letter(p: dict, x: int, q: int) -> dict:
    # right-multiply by the expansion of x_i^{+-1}
    i = abs(x)
    out = dict(p)
    if x > 0:
        for w, c in p.items():
            if len(w) < q:
                k = w + (i,)
                out[k] = out.get(k, 0) + c
    else:
        # 1 - X + X^2 - ...
        for w, c in p.items():
            k, sign = w, 1
            while len(k) < q:
                k = k + (i,)
                sign = -sign
                out[k] = out.get(k, 0) + sign * c
    return {w: c for w, c in out.items() if c}


def magnus_expand(w: GroupWord, q: int) -> MagnusPoly:
    """Magnus expansion x_i -> 1 + X_i, truncated above degree q."""
    if q < 1:
        raise ValueError("truncation degree must be >= 1")
    p: dict = {(): 1}
    for x in w.letters:
        p = _times_letter(p, x, q)
    return MagnusPoly(w.m, q, p)


# ---------------------------------------------------------------- trees to words


def word_from_tree(t: RootedTree, m: int) -> GroupWord:
    """Iterated group commutator spelled by the rooted tree."""
    check_tree(t, m)
    if isinstance(t, int):
        return GroupWord.generator(m, t)
    return commutator(word_from_tree(t[0], m), word_from_tree(t[1], m))


class LowerCentralError(ValueError):
    """Word is not in the requested lower central subgroup."""


def lie_class(w: GroupWord, q: int) -> LieElement:
    """Class of w in F_q/F_{q+1} = L_q, in Lyndon coordinates."""
    p = magnus_expand(w, q)
    low = p.lowest_nonconstant_degree()
    if low is not None and low < q:
        raise LowerCentralError(f"word has Magnus terms in degree {low} < {q}")
    try:
        coords = project_to_lyndon(p.homogeneous(q))
    except NotLieError as exc:
        raise LowerCentralError(f"degree {q} part is not primitive: {exc}") from exc
    return LieElement(w.m, q, coords)


def assemble_longitudes(ts: TreeSum) -> list[GroupWord]:
    """Longitude words lambda_1..lambda_m read off a tree sum.

    Plain trees t (coefficient a) contribute B(t_v)^a for each leaf v
    labelled i; twisted trees contribute B(<t,t>_u)^b over the leaves u of
    the first copy.  Factors follow the sorted term order, then leaf order.
    """
    m = ts.m
    lam = [GroupWord.identity(m) for _ in range(m)]
    for t, a in ts.sorted_plain():
        for label, tv in reroot_all(t):
            lam[label - 1] = lam[label - 1] * word_from_tree(tv, m) ** a
    for t, b in ts.sorted_twisted():
        for label, tu in reroot_twisted(t, 0):
            lam[label - 1] = lam[label - 1] * word_from_tree(tu, m) ** b
    return lam
