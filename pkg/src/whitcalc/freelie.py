"""Free Lie algebra over Z in the Lyndon basis, and its quasi-Lie cousin.

Lie elements are stored by their coordinates on standard-bracketed Lyndon
words.  Arithmetic goes through the tensor algebra: a Lie element is expanded
into noncommutative polynomials, combined there, and projected back using
the triangularity of the Lyndon basis (the standard bracketing of a Lyndon
word w expands to w plus lexicographically larger words).

Words are tuples of generator indices ``1..m``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from sympy import divisors, mobius

from .exactlinalg import (
    AbelianGroupStructure,
    IntMatrix,
    cokernel_structure,
    f2_rank,
    kernel_basis,
    lattice_basis,
    smith_normal_form,
)

Word = tuple[int, ...]
TensorPoly = dict  # Word -> int


class NotLieError(ValueError):
    """A tensor polynomial that is not in the image of the free Lie algebra."""


# ---------------------------------------------------------------- words / ranks


def lyndon_words(m: int, n: int) -> list[Word]:
    """All Lyndon words of length ``n`` over ``1..m``, in lexicographic order."""
    if n < 1 or m < 1:
        return []
    return [w for w in _duval(m, n) if len(w) == n]


def _duval(m: int, n: int) -> Iterator[Word]:
    # Duval's generation of Lyndon words of length <= n
    w = [0]
    while w:
        yield tuple(x + 1 for x in w)
        k = len(w)
        while len(w) < n:
            w.append(w[len(w) - k])
        while w and w[-1] == m - 1:
            w.pop()
        if w:
            w[-1] += 1


def is_lyndon(w: Word) -> bool:
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


def witt_rank(m: int, n: int) -> int:
    """Rank of the degree-n part of the free Lie algebra on m generators."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    if m < 1:
        raise ValueError("need at least one generator")
    total = sum(int(mobius(d)) * m ** (n // d) for d in divisors(n))
    return total // n


def milnor_rank(m: int, n: int) -> int:
    """M(m, n) = m R(m, n+1) - R(m, n+2), the rank of D_n."""
    if n < 0:
        raise ValueError("order must be >= 0")
    return m * witt_rank(m, n + 1) - witt_rank(m, n + 2)


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word (len >= 2) as uv with v its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no proper Lyndon suffix")


# ---------------------------------------------------------------- tensor algebra


def tensor_add(p: TensorPoly, q: TensorPoly, c: int = 1) -> TensorPoly:
    out = dict(p)
    for w, x in q.items():
        v = out.get(w, 0) + c * x
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def tensor_mul(p: TensorPoly, q: TensorPoly, max_degree: int | None = None) -> TensorPoly:
    out: dict = {}
    for u, a in p.items():
        for v, b in q.items():
            if max_degree is not None and len(u) + len(v) > max_degree:
                continue
            w = u + v
            out[w] = out.get(w, 0) + a * b
    return {w: x for w, x in out.items() if x}


def tensor_commutator(p: TensorPoly, q: TensorPoly) -> TensorPoly:
    return tensor_add(tensor_mul(p, q), tensor_mul(q, p), -1)


@lru_cache(maxsize=None)
def _lyndon_expansion(w: Word) -> tuple:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    p = tensor_commutator(dict(_lyndon_expansion(u)), dict(_lyndon_expansion(v)))
    return tuple(sorted(p.items()))


def lyndon_expansion(w: Word) -> TensorPoly:
    """Tensor-algebra expansion of the standard bracketing of Lyndon word ``w``."""
    return dict(_lyndon_expansion(tuple(w)))


def project_to_lyndon(p: TensorPoly) -> dict[Word, int]:
    """Lyndon coordinates of a Lie polynomial; raises NotLieError otherwise."""
    p = dict(p)
    coords: dict[Word, int] = {}
    while p:
        w = min(p)
        if not is_lyndon(w):
            raise NotLieError(f"leading word {w} is not Lyndon")
        c = p[w]
        coords[w] = c
        p = tensor_add(p, lyndon_expansion(w), -c)
    return coords


# ---------------------------------------------------------------- Lie elements


def _word_str(w: Word) -> str:
    return "".join(map(str, w)) if all(x < 10 for x in w) else ".".join(map(str, w))


def _parse_word(s: str) -> Word:
    return tuple(int(x) for x in (s.split(".") if "." in s else s))


@dataclass
class LieElement:
    """Element of L_degree with integer coordinates on Lyndon words."""

    m: int
    degree: int
    coords: dict[Word, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1 or self.degree < 1:
            raise ValueError("need m >= 1 and degree >= 1")
        clean = {}
        for w, c in self.coords.items():
            w = tuple(w)
            if len(w) != self.degree or not is_lyndon(w) or not all(1 <= x <= self.m for x in w):
                raise ValueError(f"{w} is not a Lyndon word of length {self.degree} over 1..{self.m}")
            if c:
                clean[w] = int(c)
        self.coords = clean

    @classmethod
    def generator(cls, m: int, i: int) -> "LieElement":
        if not 1 <= i <= m:
            raise ValueError(f"generator index {i} out of range 1..{m}")
        return cls(m, 1, {(i,): 1})

    @classmethod
    def zero(cls, m: int, degree: int) -> "LieElement":
        return cls(m, degree, {})

    @classmethod
    def from_tensor(cls, m: int, degree: int, p: TensorPoly) -> "LieElement":
        if any(len(w) != degree for w in p):
            raise NotLieError("polynomial is not homogeneous of the stated degree")
        return cls(m, degree, project_to_lyndon(p))

    def to_tensor(self) -> TensorPoly:
        out: TensorPoly = {}
        for w, c in self.coords.items():
            out = tensor_add(out, lyndon_expansion(w), c)
        return out

    def is_zero(self) -> bool:
        return not self.coords

    def _check(self, other: "LieElement"):
        if self.m != other.m:
            raise ValueError(f"generator count mismatch: {self.m} vs {other.m}")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        out = dict(self.coords)
        for w, c in other.coords.items():
            out[w] = out.get(w, 0) + c
        return LieElement(self.m, self.degree, out)

    def __neg__(self) -> "LieElement":
        return LieElement(self.m, self.degree, {w: -c for w, c in self.coords.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, k: int) -> "LieElement":
        return LieElement(self.m, self.degree, {w: k * c for w, c in self.coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self.m, self.degree, self.coords) == (other.m, other.degree, other.coords)

    def vector(self) -> list[int]:
        return [self.coords.get(w, 0) for w in lyndon_words(self.m, self.degree)]

    def __repr__(self) -> str:
        if not self.coords:
            return f"LieElement(m={self.m}, degree={self.degree}, 0)"
        terms = " + ".join(f"{c}*[{_word_str(w)}]" for w, c in sorted(self.coords.items()))
        return f"LieElement(m={self.m}, degree={self.degree}, {terms})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "degree": self.degree,
            "terms": [{"word": _word_str(w), "coeff": str(c)} for w, c in sorted(self.coords.items())],
        }

    @classmethod
    def from_json(cls, data) -> "LieElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            int(data["m"]),
            int(data["degree"]),
            {_parse_word(t["word"]): int(t["coeff"]) for t in data["terms"]},
        )


def lie_bracket(a: LieElement, b: LieElement) -> LieElement:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return LieElement.zero(a.m, a.degree + b.degree)
    p = tensor_commutator(a.to_tensor(), b.to_tensor())
    return LieElement.from_tensor(a.m, a.degree + b.degree, p)


# ---------------------------------------------------------------- L_1 (x) L_{n+1}


def tensor_basis(m: int, n: int) -> list[tuple[int, Word]]:
    """Basis (i, Lyndon word of length n+1) of L_1 (x) L_{n+1}, lexicographic."""
    return [(i, w) for i in range(1, m + 1) for w in lyndon_words(m, n + 1)]


@lru_cache(maxsize=None)
def _tensor_index(m: int, n: int) -> dict:
    return {b: k for k, b in enumerate(tensor_basis(m, n))}


@dataclass
class TensorElement:
    """Element of L_1 (x) L_{degree+1}; ``degree`` is the Milnor order n."""

    m: int
    degree: int
    coords: dict[tuple[int, Word], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("order must be >= 0")
        idx = _tensor_index(self.m, self.degree)
        clean = {}
        for (i, w), c in self.coords.items():
            key = (int(i), tuple(w))
            if key not in idx:
                raise ValueError(f"{key} is not a basis element of L_1 (x) L_{self.degree + 1}")
            if c:
                clean[key] = int(c)
        self.coords = clean

    @classmethod
    def zero(cls, m: int, degree: int) -> "TensorElement":
        return cls(m, degree, {})

    @classmethod
    def from_vector(cls, m: int, degree: int, vec) -> "TensorElement":
        basis = tensor_basis(m, degree)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match basis size")
        return cls(m, degree, {b: int(c) for b, c in zip(basis, vec) if c})

    @classmethod
    def simple(cls, i: int, u: LieElement) -> "TensorElement":
        """X_i (x) u."""
        return cls(u.m, u.degree - 1, {(i, w): c for w, c in u.coords.items()})

    def vector(self) -> list[int]:
        return [self.coords.get(b, 0) for b in tensor_basis(self.m, self.degree)]

    def sparse_vector(self) -> dict[int, int]:
        idx = _tensor_index(self.m, self.degree)
        return {idx[b]: c for b, c in self.coords.items()}

    def component(self, i: int) -> LieElement:
        """The u_i in sum_i X_i (x) u_i."""
        return LieElement(self.m, self.degree + 1, {w: c for (j, w), c in self.coords.items() if j == i})

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if (self.m, self.degree) != (other.m, other.degree):
            raise ValueError("mismatched tensor elements")
        out = dict(self.coords)
        for k, c in other.coords.items():
            out[k] = out.get(k, 0) + c
        return TensorElement(self.m, self.degree, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.m, self.degree, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, k: int) -> "TensorElement":
        return TensorElement(self.m, self.degree, {b: k * c for b, c in self.coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.m, self.degree, self.coords) == (other.m, other.degree, other.coords)

    def __repr__(self) -> str:
        if not self.coords:
            return f"TensorElement(m={self.m}, n={self.degree}, 0)"
        terms = " + ".join(f"{c}*X{i}(x)[{_word_str(w)}]" for (i, w), c in sorted(self.coords.items()))
        return f"TensorElement(m={self.m}, n={self.degree}, {terms})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "degree": self.degree,
            "terms": [
                {"gen": i, "word": _word_str(w), "coeff": str(c)}
                for (i, w), c in sorted(self.coords.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "TensorElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            int(data["m"]),
            int(data["degree"]),
            {(int(t["gen"]), _parse_word(t["word"])): int(t["coeff"]) for t in data["terms"]},
        )


@lru_cache(maxsize=None)
def _bracket_map_rows(m: int, n: int) -> tuple:
    target = lyndon_words(m, n + 2)
    tindex = {w: r for r, w in enumerate(target)}
    rows = [[0] * (m * len(lyndon_words(m, n + 1))) for _ in target]
    for col, (i, w) in enumerate(tensor_basis(m, n)):
        image = lie_bracket(LieElement.generator(m, i), LieElement(m, n + 1, {w: 1}))
        for u, c in image.coords.items():
            rows[tindex[u]][col] = c
    return tuple(tuple(r) for r in rows)


def bracket_map_matrix(m: int, n: int) -> IntMatrix:
    """Matrix of X (x) Y -> [X, Y] from L_1 (x) L_{n+1} to L_{n+2}."""
    if n < 0:
        raise ValueError("order must be >= 0")
    cols = m * witt_rank(m, n + 1)
    return IntMatrix(witt_rank(m, n + 2), cols, [list(r) for r in _bracket_map_rows(m, n)])


def bracket_image(x: TensorElement) -> LieElement:
    """Image of x under the bracket map."""
    out = LieElement.zero(x.m, x.degree + 2)
    for (i, w), c in x.coords.items():
        out = out + c * lie_bracket(LieElement.generator(x.m, i), LieElement(x.m, x.degree + 1, {w: 1}))
    return out


def in_dn(x: TensorElement) -> bool:
    return bracket_image(x).is_zero()


@lru_cache(maxsize=None)
def _dn_basis_vectors(m: int, n: int) -> tuple:
    return tuple(tuple(v) for v in kernel_basis(bracket_map_matrix(m, n)))


def dn_basis(m: int, n: int) -> list[TensorElement]:
    """Saturated Z-basis of D_n, the kernel of the bracket map."""
    return [TensorElement.from_vector(m, n, v) for v in _dn_basis_vectors(m, n)]


# ---------------------------------------------------------------- bracket presentations
#
# Generators of both L_n and L'_n are bracket trees with n leaves.  Using the
# antisymmetry relation, every ordered tree is +- a "sorted" tree whose
# children are in canonical order, so only sorted trees are kept as
# generators.  A sorted tree with two identical children at some node is
# 2-torsion under antisymmetry (quasi-Lie) and zero under alternativity (Lie).


def _key(t) -> tuple:
    return (0, t) if isinstance(t, int) else (1, _key(t[0]), _key(t[1]))


def sort_bracket(t) -> tuple[int, object]:
    """(sign, sorted tree) for a nested-tuple bracket expression."""
    if isinstance(t, int):
        return 1, t
    sl, l = sort_bracket(t[0])
    sr, r = sort_bracket(t[1])
    s = sl * sr
    if _key(l) > _key(r):
        return -s, (r, l)
    return s, (l, r)


def has_equal_children(t) -> bool:
    if isinstance(t, int):
        return False
    return t[0] == t[1] or has_equal_children(t[0]) or has_equal_children(t[1])


@lru_cache(maxsize=None)
def sorted_brackets(m: int, degree: int) -> tuple:
    """All sorted bracket trees with ``degree`` leaves labelled 1..m."""
    if degree == 1:
        return tuple(range(1, m + 1))
    out = set()
    for a in range(1, degree // 2 + 1):
        for l in sorted_brackets(m, a):
            for r in sorted_brackets(m, degree - a):
                out.add(sort_bracket((l, r))[1])
    return tuple(sorted(out, key=_key))


def _jacobi_terms(a, b, c):
    # [[a,b],c] + [[b,c],a] + [[c,a],b]
    return [((a, b), c), ((b, c), a), ((c, a), b)]


def _positions(t, path=()):
    if isinstance(t, int):
        return
    yield path, t
    yield from _positions(t[0], path + (0,))
    yield from _positions(t[1], path + (1,))


def _replace(t, path, new):
    if not path:
        return new
    if path[0] == 0:
        return (_replace(t[0], path[1:], new), t[1])
    return (t[0], _replace(t[1], path[1:], new))


@dataclass
class QuasiLiePresentation:
    degree: int
    num_generators: int
    generator_trees: list
    relation_matrix: IntMatrix

    def structure(self) -> AbelianGroupStructure:
        return cokernel_structure(self.relation_matrix)


_presentation_lock = threading.Lock()
_presentation_cache: dict = {}


def bracket_presentation(m: int, degree: int, alternating: bool = False) -> QuasiLiePresentation:
    """Presentation of L'_degree (or of L_degree when ``alternating``).

    Columns of the relation matrix are relations among the sorted bracket
    trees: Jacobi at every internal node, plus 2t (quasi-Lie) or t
    (Lie) for each tree with a node whose children coincide.
    """
    key = (m, degree, alternating)
    with _presentation_lock:
        if key not in _presentation_cache:
            _presentation_cache[key] = _build_presentation(m, degree, alternating)
        return _presentation_cache[key]


def _build_presentation(m: int, degree: int, alternating: bool) -> QuasiLiePresentation:
    if degree < 1:
        raise ValueError("degree must be >= 1")
    gens = list(sorted_brackets(m, degree))
    index = {g: k for k, g in enumerate(gens)}
    relations = []
    for g in gens:
        if has_equal_children(g):
            relations.append({index[g]: 1 if alternating else 2})
        for path, node in _positions(g):
            for inner, other in ((node[0], node[1]), (node[1], node[0])):
                if isinstance(inner, int):
                    continue
                rel: dict[int, int] = {}
                # node = +-[inner, other]; the overall sign is irrelevant
                for term in _jacobi_terms(inner[0], inner[1], other):
                    s, st = sort_bracket(_replace(g, path, term))
                    rel[index[st]] = rel.get(index[st], 0) + s
                rel = {k: v for k, v in rel.items() if v}
                if rel:
                    relations.append(rel)
    basis = lattice_basis(relations, len(gens))
    mat = IntMatrix.from_columns(basis, len(gens)) if basis else IntMatrix(len(gens), 0)
    return QuasiLiePresentation(degree, m, gens, mat)


def quasi_lie_structure(m: int, degree: int) -> AbelianGroupStructure:
    """Isomorphism type of the degree part of Levine's quasi-Lie algebra."""
    return bracket_presentation(m, degree).structure()


def lie_presentation_rank(m: int, degree: int) -> int:
    """Rank of L_degree computed from the bracket presentation (Witt oracle)."""
    st = bracket_presentation(m, degree, alternating=True).structure()
    if st.torsion:
        raise ArithmeticError(f"free Lie algebra presentation has torsion {st}")
    return st.free_rank


@lru_cache(maxsize=None)
def _bracket_coords(t, m: int) -> tuple:
    if isinstance(t, int):
        return (((t,), 1),)
    l = LieElement(m, _leaves(t[0]), dict(_bracket_coords(t[0], m)))
    r = LieElement(m, _leaves(t[1]), dict(_bracket_coords(t[1], m)))
    return tuple(sorted(lie_bracket(l, r).coords.items()))


def _leaves(t) -> int:
    return 1 if isinstance(t, int) else _leaves(t[0]) + _leaves(t[1])


def evaluate_bracket(t, m: int) -> LieElement:
    """Value in L of a nested-tuple bracket expression."""
    return LieElement(m, _leaves(t), dict(_bracket_coords(t, m)))


def bsl_kernel_dimension(m: int, ell: int) -> int:
    """F_2-dimension of ker(Z_2 (x) L'_{ell+1} -> Z_2 (x) L_{ell+1})."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    degree = ell + 1
    pres = bracket_presentation(m, degree)
    gens = pres.generator_trees
    words = lyndon_words(m, degree)
    windex = {w: k for k, w in enumerate(words)}
    # F_2 matrix of the renaming map, one column per generator tree
    images = []
    for g in gens:
        col = [0] * len(words)
        for w, c in evaluate_bracket(g, m).coords.items():
            col[windex[w]] = c & 1
        images.append(col)
    rel_rank = f2_rank(pres.relation_matrix.transpose())
    # sanity: relations must die in Z_2 (x) L
    for rel in pres.relation_matrix.columns():
        img = [sum(rel[k] * images[k][r] for k in range(len(gens))) & 1 for r in range(len(words))]
        if any(img):
            raise ArithmeticError("quasi-Lie relation does not vanish in Z_2 (x) L")
    image_rank = f2_rank([list(r) for r in zip(*images)]) if images else 0
    return len(gens) - image_rank - rel_rank


# ---------------------------------------------------------------- Levine quotient


class LevineQuotient:
    """D_{2k} modulo the eta-images of plain order-2k trees, identified with Z_2 (x) L_{k+1}.

    The identification sends the class of eta(J-twisted) to B(J) mod 2 for
    every rooted tree J of order k; it is fixed on the standard bracketings
    of Lyndon words and checked to be a basis change.
    """

    def __init__(self, m: int, k: int):
        from .treecalc import eta_twisted, lyndon_tree

        if k < 1:
            raise ValueError("k must be >= 1")
        self.m, self.k, self.n = m, k, 2 * k
        self.rank_target = witt_rank(m, k + 1)
        U, diag, self.structure = _plain_eta_quotient(m, self.n)
        self._U, self._diag = U, diag
        expected = AbelianGroupStructure(0, (2,) * self.rank_target)
        if self.structure != expected:
            raise ArithmeticError(
                f"Levine quotient of D_{self.n} for m={m} is {self.structure}, expected {expected}"
            )
        self._two_rows = [i for i, d in enumerate(diag) if d == 2]
        # identification matrix: columns are raw quotient coords of eta(P(w)^twist)
        words = lyndon_words(m, k + 1)
        cols = [self._raw(eta_twisted(lyndon_tree(w), m)) for w in words]
        self._inverse = _f2_inverse([list(r) for r in zip(*cols)] if cols else [])

    def _raw(self, x: TensorElement) -> list[int]:
        v = x.vector()
        y = self._U.apply(v)
        for i, d in enumerate(self._diag):
            if d == 0 and y[i]:
                raise ArithmeticError("element has a component outside D_n")
            if d > 2 and y[i] % d:
                raise ArithmeticError("unexpected torsion in Levine quotient")
        return [y[i] & 1 for i in self._two_rows]

    def __call__(self, x: TensorElement) -> list[int]:
        if (x.m, x.degree) != (self.m, self.n):
            raise ValueError(f"expected an element of L_1 (x) L_{self.n + 1} on {self.m} generators")
        if not in_dn(x):
            raise ValueError("element is not in D_n (bracket map does not kill it)")
        raw = self._raw(x)
        return [sum(a * b for a, b in zip(row, raw)) & 1 for row in self._inverse]


def _plain_eta_quotient(m: int, n: int):
    from .treecalc import eta_plain_images

    N = len(tensor_basis(m, n))
    gens = [x.sparse_vector() for x in eta_plain_images(m, n)]
    basis = lattice_basis(gens, N)
    A = IntMatrix.from_columns(basis, N) if basis else IntMatrix(N, 0)
    S, U, _ = smith_normal_form(A)
    diag = [S.entries[i][i] for i in range(min(S.rows, S.cols))]
    diag += [0] * (N - len(diag))
    in_ambient = AbelianGroupStructure.from_diagonal(diag[: len(basis)], N)
    # D_n is saturated in the ambient lattice, so the ambient cokernel splits
    # as (free part of rank N - M) + D_n/<images>
    free_in_dn = in_ambient.free_rank - (N - milnor_rank(m, n))
    return U, diag, AbelianGroupStructure(free_in_dn, in_ambient.torsion)


def plain_eta_quotient_structure(m: int, n: int) -> AbelianGroupStructure:
    """D_n modulo the eta-images of plain order-n trees."""
    return _plain_eta_quotient(m, n)[2]


def _f2_inverse(M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    a = [[x & 1 for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ArithmeticError("identification with Z_2 (x) L is not a basis change")
        a[c], a[p] = a[p], a[c]
        for r in range(n):
            if r != c and a[r][c]:
                a[r] = [x ^ y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


_levine_lock = threading.Lock()
_levine_cache: dict = {}


def levine_quotient(m: int, k: int) -> LevineQuotient:
    with _levine_lock:
        if (m, k) not in _levine_cache:
            _levine_cache[(m, k)] = LevineQuotient(m, k)
        return _levine_cache[(m, k)]


def sl_quotient(x: TensorElement, m: int, k: int) -> list[int]:
    """Image of x in D_{2k}/<eta(plain trees)> = Z_2 (x) L_{k+1}, in Lyndon coordinates mod 2."""
    if x.m != m or x.degree != 2 * k:
        raise ValueError(f"expected an element of D_{2 * k} on {m} generators")
    return levine_quotient(m, k)(x)
