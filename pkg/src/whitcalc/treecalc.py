"""Decorated uni-trivalent trees and the summation map eta.

Rooted trees are nested tuples: an ``int`` is a leaf carrying that label and
a pair ``(left, right)`` is a trivalent vertex.  The cyclic order at a vertex
is (edge towards the root, left, right); swapping the two children reverses
it, which is the antisymmetry sign.  The same nested tuples double as
bracket expressions, so B(t) is just the bracket they spell.

An unrooted tree is stored rooted at one of its leaves: ``UnrootedTree(a, t)``
is the tree obtained by attaching a leaf labelled ``a`` to the root of ``t``.
The canonical representative is the lexicographically least (label, sorted
body) over all choices of leaf.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .freelie import (
    LieElement,
    TensorElement,
    Word,
    evaluate_bracket,
    has_equal_children,
    sort_bracket,
    sorted_brackets,
    standard_factorization,
)

RootedTree = Union[int, tuple]

DEFAULT_MAX_ORDER = 6


class TreeLimitError(ValueError):
    """Requested enumeration is above the configured order ceiling."""


def max_order() -> int:
    return int(os.environ.get("WHITCALC_MAX_ORDER", DEFAULT_MAX_ORDER))


# ---------------------------------------------------------------- rooted trees


def tree_order(t: RootedTree) -> int:
    return 0 if isinstance(t, int) else 1 + tree_order(t[0]) + tree_order(t[1])


def tree_labels(t: RootedTree) -> list[int]:
    return [t] if isinstance(t, int) else tree_labels(t[0]) + tree_labels(t[1])


def tree_key(t: RootedTree) -> tuple:
    return (0, t) if isinstance(t, int) else (1, tree_key(t[0]), tree_key(t[1]))


def check_tree(t: RootedTree, m: int | None = None) -> RootedTree:
    if isinstance(t, bool):
        raise TypeError("bool is not a tree")
    if isinstance(t, int):
        if t < 1 or (m is not None and t > m):
            raise ValueError(f"leaf label {t} out of range")
        return t
    if not (isinstance(t, tuple) and len(t) == 2):
        raise TypeError(f"not a rooted tree: {t!r}")
    check_tree(t[0], m)
    check_tree(t[1], m)
    return t


def swap_children(t: tuple) -> tuple:
    return (t[1], t[0])


def tree_bracket(t: RootedTree, m: int) -> LieElement:
    """B(t) in L_{order+1}."""
    check_tree(t, m)
    return evaluate_bracket(t, m)


def lyndon_tree(w: Word) -> RootedTree:
    """Rooted tree of the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(tuple(w))
    return (lyndon_tree(u), lyndon_tree(v))


def to_sexpr(t: RootedTree) -> str:
    return str(t) if isinstance(t, int) else f"({to_sexpr(t[0])},{to_sexpr(t[1])})"


# ---------------------------------------------------------------- unrooted trees


@dataclass(frozen=True, order=True)
class UnrootedTree:
    """<root_label, body>: the leaf ``root_label`` joined to the root of ``body``."""

    root_label: int
    body: RootedTree = field(compare=False)
    _key: tuple = field(default=(), repr=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "_key", (self.root_label, tree_key(self.body)))

    @property
    def order(self) -> int:
        return tree_order(self.body)

    def labels(self) -> list[int]:
        return [self.root_label] + tree_labels(self.body)

    def sexpr(self) -> str:
        return f"<{self.root_label},{to_sexpr(self.body)}>"



@dataclass(frozen=True, order=True)
class TwistedTree:
    """A twisted (box-rooted) tree; ``body`` is the rooted tree hanging off the box."""

    body: RootedTree = field(compare=False)
    _key: tuple = field(default=(), repr=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "_key", tree_key(self.body))

    @property
    def order(self) -> int:
        return tree_order(self.body)

    def sexpr(self) -> str:
        return f"twist:{to_sexpr(self.body)}"



class _Graph:
    """Explicit uni-trivalent graph with cyclic orders, used for re-rooting."""

    def __init__(self):
        self.nbrs: list[list] = []
        self.label: dict[int, int] = {}
        self.copy: dict[int, int] = {}

    def _new(self) -> int:
        self.nbrs.append([])
        return len(self.nbrs) - 1

    def build(self, t: RootedTree, parent, tag: int = 0) -> int:
        v = self._new()
        if isinstance(t, int):
            self.label[v] = t
            self.copy[v] = tag
            self.nbrs[v] = [parent]
        else:
            self.nbrs[v] = [parent, None, None]
            self.nbrs[v][1] = self.build(t[0], v, tag)
            self.nbrs[v][2] = self.build(t[1], v, tag)
        return v

    @classmethod
    def joined(cls, a: RootedTree, b: RootedTree) -> "_Graph":
        g = cls()
        ta = g.build(a, None, 0)
        tb = g.build(b, ta, 1)
        g.nbrs[ta][0] = tb
        return g

    @classmethod
    def rooted_at_leaf(cls, label: int, body: RootedTree) -> "_Graph":
        g = cls()
        r = g._new()
        g.label[r] = label
        g.copy[r] = 0
        top = g.build(body, r, 1)
        g.nbrs[r] = [top]
        return g

    def leaves(self) -> list[int]:
        return sorted(self.label)

    def hang(self, v: int, parent: int) -> RootedTree:
        if v in self.label:
            return self.label[v]
        nb = self.nbrs[v]
        k = nb.index(parent)
        return (self.hang(nb[(k + 1) % 3], v), self.hang(nb[(k + 2) % 3], v))

    def rerooted(self, leaf: int) -> tuple[int, RootedTree]:
        """(label of leaf, t_v) for the tree re-rooted at ``leaf``."""
        return self.label[leaf], self.hang(self.nbrs[leaf][0], leaf)


def _canonical_from_graph(g: _Graph) -> tuple[int, UnrootedTree]:
    best = None
    for v in g.leaves():
        label, body = g.rerooted(v)
        s, sb = sort_bracket(body)
        key = (label, tree_key(sb))
        if best is None or key < best[0] or (key == best[0] and s > best[1]):
            best = (key, s, label, sb)
    _, s, label, sb = best
    return s, UnrootedTree(label, sb)


def canonical_unrooted(root_label: int, body: RootedTree) -> tuple[int, UnrootedTree]:
    """(sign, canonical tree) with <root_label, body> = sign * canonical tree."""
    check_tree(body)
    return _canonical_from_graph(_Graph.rooted_at_leaf(root_label, body))


@lru_cache(maxsize=None)
def is_two_torsion(u: UnrootedTree) -> bool:
    """True when an orientation-reversing symmetry gives u = -u, so 2u = 0."""
    if has_equal_children(u.body):
        return True
    g = _Graph.rooted_at_leaf(u.root_label, u.body)
    for v in g.leaves():
        label, body = g.rerooted(v)
        if label == u.root_label:
            s, sb = sort_bracket(body)
            if s < 0 and sb == u.body:
                return True
    return False


def inner_product(a: RootedTree, b: RootedTree) -> tuple[int, UnrootedTree]:
    """Join the roots of ``a`` and ``b``; returns (sign, canonical tree)."""
    check_tree(a)
    check_tree(b)
    if isinstance(a, int):
        return canonical_unrooted(a, b)
    if isinstance(b, int):
        return canonical_unrooted(b, a)
    return _canonical_from_graph(_Graph.joined(a, b))


def canonical_twisted(body: RootedTree) -> TwistedTree:
    """Canonical twisted tree.  Reversing orientation does not change a twisted
    tree (eta only sees <t, t> = <-t, -t>), so the sorting sign is dropped."""
    check_tree(body)
    return TwistedTree(sort_bracket(body)[1])


def reroot_all(u: UnrootedTree) -> list[tuple[int, RootedTree]]:
    """(label(v), t_v) for every univalent vertex v of ``u``."""
    g = _Graph.rooted_at_leaf(u.root_label, u.body)
    return [g.rerooted(v) for v in g.leaves()]


def reroot_twisted(t: TwistedTree, copy: int = 0) -> list[tuple[int, RootedTree]]:
    """(label(u), <t,t>_u) over the leaves u of one fixed copy of t in <t,t>."""
    g = _Graph.joined(t.body, t.body)
    return [g.rerooted(v) for v in g.leaves() if g.copy[v] == copy]


# ---------------------------------------------------------------- formal sums


@dataclass
class TreeSum:
    """Integer combination of order-n trees and (n even) order-n/2 twisted trees."""

    m: int
    order: int
    plain: dict[UnrootedTree, int] = field(default_factory=dict)
    twisted: dict[TwistedTree, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1 or self.order < 0:
            raise ValueError("need m >= 1 and order >= 0")
        plain, twisted = self.plain, self.twisted
        self.plain, self.twisted = {}, {}
        for t, c in plain.items():
            self.add_plain(t.root_label, t.body, c)
        for t, c in twisted.items():
            self.add_twisted(t.body, c)

    def add_plain(self, root_label: int, body: RootedTree, coeff: int = 1) -> "TreeSum":
        check_tree(body, self.m)
        if not 1 <= root_label <= self.m:
            raise ValueError(f"leaf label {root_label} out of range")
        if tree_order(body) != self.order:
            raise ValueError(f"tree of order {tree_order(body)} in an order {self.order} sum")
        s, t = canonical_unrooted(root_label, body)
        c = self.plain.get(t, 0) + s * int(coeff)
        if is_two_torsion(t):
            c %= 2
        if c:
            self.plain[t] = c
        else:
            self.plain.pop(t, None)
        return self

    def add_twisted(self, body: RootedTree, coeff: int = 1) -> "TreeSum":
        check_tree(body, self.m)
        if self.order % 2:
            raise ValueError("twisted trees only occur in even order")
        if 2 * tree_order(body) != self.order:
            raise ValueError(f"twisted tree of order {tree_order(body)} in an order {self.order} sum")
        t = canonical_twisted(body)
        c = self.twisted.get(t, 0) + int(coeff)
        if c:
            self.twisted[t] = c
        else:
            self.twisted.pop(t, None)
        return self

    def __add__(self, other: "TreeSum") -> "TreeSum":
        if (self.m, self.order) != (other.m, other.order):
            raise ValueError("mismatched tree sums")
        out = TreeSum(self.m, self.order, dict(self.plain), dict(self.twisted))
        for t, c in other.plain.items():
            out.add_plain(t.root_label, t.body, c)
        for t, c in other.twisted.items():
            out.add_twisted(t.body, c)
        return out

    def __mul__(self, k: int) -> "TreeSum":
        return TreeSum(
            self.m,
            self.order,
            {t: k * c for t, c in self.plain.items() if k * c},
            {t: k * c for t, c in self.twisted.items() if k * c},
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TreeSum):
            return NotImplemented
        return (self.m, self.order, self.plain, self.twisted) == (
            other.m,
            other.order,
            other.plain,
            other.twisted,
        )

    def is_zero(self) -> bool:
        return not self.plain and not self.twisted

    def sorted_plain(self) -> list[tuple[UnrootedTree, int]]:
        return sorted(self.plain.items())

    def sorted_twisted(self) -> list[tuple[TwistedTree, int]]:
        return sorted(self.twisted.items())

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "order": self.order,
            "terms": [{"tree": t.sexpr(), "coeff": str(c)} for t, c in self.sorted_plain()],
            "twisted": [{"tree": t.sexpr(), "coeff": str(c)} for t, c in self.sorted_twisted()],
        }

    @classmethod
    def from_json(cls, data) -> "TreeSum":
        if isinstance(data, str):
            data = json.loads(data)
        ts = cls(int(data["m"]), int(data["order"]))
        for term in data.get("terms", []):
            kind, a, b = parse_tree(term["tree"])
            if kind != "plain":
                raise ValueError(f"expected a plain tree, got {term['tree']!r}")
            s, t = inner_product(a, b)
            ts.add_plain(t.root_label, t.body, s * int(term["coeff"]))
        for term in data.get("twisted", []):
            kind, body, _ = parse_tree(term["tree"])
            if kind != "twisted":
                raise ValueError(f"expected a twisted tree, got {term['tree']!r}")
            ts.add_twisted(body, int(term["coeff"]))
        return ts


# ---------------------------------------------------------------- s-expressions


def parse_rooted(text: str) -> RootedTree:
    tree, rest = _parse_rooted(text.replace(" ", ""))
    if rest:
        raise ValueError(f"trailing input {rest!r}")
    return tree


def _parse_rooted(s: str):
    if not s:
        raise ValueError("unexpected end of tree expression")
    if s[0] == "(":
        left, s = _parse_rooted(s[1:])
        if not s.startswith(","):
            raise ValueError(f"expected ',' at {s!r}")
        right, s = _parse_rooted(s[1:])
        if not s.startswith(")"):
            raise ValueError(f"expected ')' at {s!r}")
        return (left, right), s[1:]
    k = 0
    while k < len(s) and s[k].isdigit():
        k += 1
    if k == 0:
        raise ValueError(f"expected a label at {s!r}")
    return int(s[:k]), s[k:]


def parse_tree(text: str):
    """Parse ``<A,B>`` (plain), ``twist:A`` (twisted) or a rooted tree ``A``.

    Returns (kind, a, b) with kind in {"plain", "twisted", "rooted"}.
    """
    s = text.replace(" ", "")
    if s.startswith("twist:"):
        return "twisted", parse_rooted(s[len("twist:"):]), None
    if s.startswith("<"):
        if not s.endswith(">"):
            raise ValueError(f"unterminated inner product {text!r}")
        a, rest = _parse_rooted(s[1:-1])
        if not rest.startswith(","):
            raise ValueError(f"expected ',' in {text!r}")
        b, rest = _parse_rooted(rest[1:])
        if rest:
            raise ValueError(f"trailing input in {text!r}")
        return "plain", a, b
    return "rooted", parse_rooted(s), None


# ---------------------------------------------------------------- eta


def eta_tree(u: UnrootedTree, m: int) -> TensorElement:
    """sum_v X_label(v) (x) B(t_v)."""
    out: dict = {}
    for label, tv in reroot_all(u):
        for w, c in tree_bracket(tv, m).coords.items():
            out[(label, w)] = out.get((label, w), 0) + c
    return TensorElement(m, u.order, out)


def eta_twisted(body: RootedTree, m: int, copy: int = 0) -> TensorElement:
    """eta of the twisted tree with this body: half of eta(<t,t>), summed on one copy."""
    t = body if isinstance(body, TwistedTree) else TwistedTree(body)
    out: dict = {}
    for label, tv in reroot_twisted(t, copy):
        for w, c in tree_bracket(tv, m).coords.items():
            out[(label, w)] = out.get((label, w), 0) + c
    return TensorElement(m, 2 * t.order, out)


def eta_twisted_by_halving(body: RootedTree, m: int) -> TensorElement:
    """Literal half of eta(<t,t>); raises if a coefficient is odd."""
    s, u = inner_product(body, body)
    full = eta_tree(u, m) * s
    odd = [k for k, c in full.coords.items() if c % 2]
    if odd:
        raise ArithmeticError(f"eta(<t,t>) has odd coefficients at {odd}")
    return TensorElement(m, full.degree, {k: c // 2 for k, c in full.coords.items()})


def eta(ts: TreeSum) -> TensorElement:
    """The summation map on a formal tree sum."""
    out = TensorElement.zero(ts.m, ts.order)
    for t, c in ts.plain.items():
        out = out + c * eta_tree(t, ts.m)
    for t, c in ts.twisted.items():
        out = out + c * eta_twisted(t.body, ts.m)
    return out


# ---------------------------------------------------------------- enumeration


def rooted_trees(m: int, order: int) -> tuple:
    """All sorted rooted trees of the given order (order+1 leaves)."""
    return sorted_brackets(m, order + 1)


def _check_limit(n: int, limit: int | None):
    limit = max_order() if limit is None else limit
    if n > limit:
        raise TreeLimitError(f"order {n} exceeds the enumeration ceiling {limit} (WHITCALC_MAX_ORDER)")


def estimate_tree_count(m: int, n: int) -> int:
    """Upper bound on labelled planar trees visited when enumerating order n."""
    from math import comb

    catalan = comb(2 * n, n) // (n + 1)
    return catalan * m ** (n + 2)


@lru_cache(maxsize=None)
def _enumerate_trees(m: int, n: int) -> tuple:
    seen = set()
    for label in range(1, m + 1):
        for body in rooted_trees(m, n):
            seen.add(canonical_unrooted(label, body)[1])
    return tuple(sorted(seen))


def enumerate_trees(m: int, n: int, limit: int | None = None) -> list[UnrootedTree]:
    """Every canonical decorated unrooted tree of order n, once each."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    _check_limit(n, limit)
    return list(_enumerate_trees(m, n))


def enumerate_twisted(m: int, order: int, limit: int | None = None) -> list[TwistedTree]:
    _check_limit(2 * order, limit)
    return [TwistedTree(b) for b in rooted_trees(m, order)]


@lru_cache(maxsize=None)
def _eta_plain(m: int, n: int) -> tuple:
    out = []
    for t in enumerate_trees(m, n):
        x = eta_tree(t, m)
        if not x.is_zero():
            out.append(x)
    return tuple(out)


def eta_plain_images(m: int, n: int) -> list[TensorElement]:
    """Nonzero eta-images of all order-n plain trees."""
    return list(_eta_plain(m, n))


def eta_image_generators(m: int, n: int) -> list[TensorElement]:
    """eta of every order-n tree, plus every order-n/2 twisted tree when n is even."""
    out = [eta_tree(t, m) for t in enumerate_trees(m, n)]
    if n % 2 == 0:
        out += [eta_twisted(t.body, m) for t in enumerate_twisted(m, n // 2)]
    return out


# ---------------------------------------------------------------- boundary twist


def _ihx_to_leaf_form(body: RootedTree) -> list[tuple[int, RootedTree]]:
    """Write a rooted tree as a signed sum of trees (i, J) or (J, i) with i a leaf.

    Uses [[a,b],Q] = [a,[b,Q]] - [b,[a,Q]] on the root vertex until one
    child of the root is a leaf.
    """
    if isinstance(body, int):
        raise ValueError("order-0 twisted trees have no boundary twist")
    left, right = body
    if isinstance(left, int) or isinstance(right, int):
        return [(1, body)]
    a, b = left
    out = []
    for s, t in ((1, (a, (b, right))), (-1, (b, (a, right)))):
        out += [(s * s2, t2) for s2, t2 in _ihx_to_leaf_form(t)]
    return out


def boundary_twist(t: TwistedTree | RootedTree, m: int) -> TreeSum:
    """Boundary twist: the twisted tree <box, (i, J)> goes to the order 2l-1 tree <i, (J, J)>.

    A body whose root has no leaf child is first rewritten by IHX; since
    the image is 2-torsion, the signs of the IHX terms only matter mod 2.
    """
    body = t.body if isinstance(t, TwistedTree) else t
    check_tree(body, m)
    # act on the canonical representative so the result depends only on the class
    body = canonical_twisted(body).body
    ell = tree_order(body)
    if ell < 1:
        raise ValueError("boundary twist needs a twisted tree of order >= 1")
    out = TreeSum(m, 2 * ell - 1)
    for s, (left, right) in _ihx_to_leaf_form(body):
        if isinstance(left, int):
            i, J = left, right
        else:
            i, J = right, left
        out.add_plain(i, (J, J), s)
    return out


def random_tree(rng, m: int, order: int) -> RootedTree:
    """Uniformly random planar shape with random labels (for tests and scripts)."""
    if order == 0:
        return rng.randint(1, m)
    k = rng.randint(0, order - 1)
    return (random_tree(rng, m, k), random_tree(rng, m, order - 1 - k))


def random_tree_sum(rng, m: int, order: int, terms: int = 3, coeff: int = 3) -> TreeSum:
    ts = TreeSum(m, order)
    for _ in range(terms):
        c = rng.randint(-coeff, coeff)
        if order % 2 == 0 and rng.random() < 0.4:
            ts.add_twisted(random_tree(rng, m, order // 2), c)
        else:
            ts.add_plain(rng.randint(1, m), random_tree(rng, m, order), c)
    return ts

