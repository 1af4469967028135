"""Milnor invariants of links given as planar diagram (PD) codes.

PD convention: each crossing is a 4-tuple of edge labels listed
counterclockwise starting from the incoming under-edge, so positions 0 and 2
are the under-strand (in, out) and positions 1, 3 the over-strand.  The
crossing is positive when the over-strand runs from position 3 to position 1.

Meridians are right-handed (linking number +1 with their arc), the base
point is above the diagram, and at a crossing of sign e with over-arc O the
under-strand passes from arc A to arc B with x_B = x_O^-e x_A x_O^e.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .freelie import TensorElement, in_dn, sl_quotient, witt_rank
from .groupwords import GroupWord, LowerCentralError, lie_class, magnus_expand


class DiagramError(ValueError):
    """Malformed or inconsistent PD code."""


@dataclass(frozen=True)
class Pass:
    """One passage of a component through a crossing."""

    crossing: int
    edge_in: int
    edge_out: int
    under: bool


@dataclass
class LinkDiagram:
    m: int
    pd: list[tuple[int, int, int, int]]
    components: dict[int, int] = field(default_factory=dict)
    framings: list[int] = field(default_factory=list)
    name: str = ""
    # filled in by _analyse
    passes: list[list[Pass]] = field(default_factory=list, repr=False)
    signs: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.pd = [tuple(int(x) for x in c) for c in self.pd]
        if not self.framings:
            self.framings = [0] * self.m
        if len(self.framings) != self.m:
            raise DiagramError(f"expected {self.m} framings, got {len(self.framings)}")
        self.framings = [int(f) for f in self.framings]
        _analyse(self)

    # -------------------------------------------------------------- views

    @property
    def edges(self) -> list[int]:
        return sorted({e for c in self.pd for e in c})

    def writhe(self, i: int) -> int:
        """Sum of signs of crossings where component i crosses itself."""
        comp = self.components
        return sum(
            s for c, s in zip(self.pd, self.signs) if comp[c[0]] == i and comp[c[1]] == i
        )

    def linking_number(self, i: int, j: int) -> int:
        comp = self.components
        total = sum(
            s
            for c, s in zip(self.pd, self.signs)
            if {comp[c[0]], comp[c[1]]} == {i, j}
        )
        return total // 2

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "m": self.m,
            "pd": [list(c) for c in self.pd],
            "components": {str(e): c for e, c in sorted(self.components.items())},
            "framings": list(self.framings),
        }

    def with_framings(self, framings) -> "LinkDiagram":
        return LinkDiagram(self.m, list(self.pd), dict(self.components), list(framings), self.name)

    def permute_components(self, perm) -> "LinkDiagram":
        """Renumber components: old component i becomes perm[i-1]."""
        if sorted(perm) != list(range(1, self.m + 1)):
            raise DiagramError("not a permutation of the components")
        comps = {e: perm[c - 1] for e, c in self.components.items()}
        framings = [0] * self.m
        for i, f in enumerate(self.framings):
            framings[perm[i] - 1] = f
        return LinkDiagram(self.m, list(self.pd), comps, framings, self.name)

    def mirror(self) -> "LinkDiagram":
        """Mirror image: every crossing changes sign."""
        # the old over-strand becomes the under-strand, listed from its incoming edge
        pd = [(c[3], c[0], c[1], c[2]) if s > 0 else (c[1], c[2], c[3], c[0]) for c, s in zip(self.pd, self.signs)]
        return LinkDiagram(self.m, pd, dict(self.components), [-f for f in self.framings], self.name + "*")


def _analyse(d: LinkDiagram) -> None:
    appearances: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(d.pd):
        if len(c) != 4:
            raise DiagramError(f"crossing {ci} does not have 4 entries")
        for p, e in enumerate(c):
            appearances.setdefault(e, []).append((ci, p))
    for e, apps in appearances.items():
        if len(apps) != 2:
            raise DiagramError(f"edge {e} appears {len(apps)} times (must be exactly 2)")

    # trace strand cycles; a cycle is a list of (edge, exit appearance)
    seen: set[int] = set()
    cycles = []
    for e0 in sorted(appearances):
        if e0 in seen:
            continue
        cyc = []
        e, exit_app = e0, appearances[e0][0]
        while True:
            seen.add(e)
            cyc.append((e, exit_app))
            ci, p = exit_app
            entry = (ci, (p + 2) % 4)
            e = d.pd[ci][entry[1]]
            a, b = appearances[e]
            exit_app = b if a == entry else a
            if e == e0 and exit_app == cyc[0][1]:
                break
            if e == e0:
                # came back along the other direction: impossible in a valid PD
                raise DiagramError(f"edge {e0} closes up inconsistently")
        cycles.append(cyc)

    def orient(cyc):
        forward = backward = False
        for _, (ci, p) in cyc:
            if p == 0:
                forward = True
            elif p == 2:
                backward = True
        if forward and backward:
            raise DiagramError("inconsistent orientation cycle: under-strands disagree")
        if backward:
            return _reverse_cycle(cyc, appearances)
        if forward:
            return cyc
        # never an under-strand: orient so labels increase from the smallest edge
        rev = _reverse_cycle(cyc, appearances)
        for cand in (cyc, rev):
            labels = [e for e, _ in cand]
            k = labels.index(min(labels))
            if len(labels) > 1 and labels[(k + 1) % len(labels)] == labels[k] + 1:
                return cand
        return cyc

    cycles = [orient(c) for c in cycles]
    cycles.sort(key=lambda cyc: min(e for e, _ in cyc))

    n_cycles = len(cycles)
    if n_cycles > d.m:
        raise DiagramError(f"diagram has {n_cycles} strand cycles but m = {d.m}")
    comp_of_cycle: list[int] = []
    if d.components:
        given = {int(k): int(v) for k, v in d.components.items()}
        for e, c in given.items():
            if not 1 <= c <= d.m:
                raise DiagramError(f"unknown component index {c} for edge {e}")
            if e not in appearances:
                raise DiagramError(f"component map names unknown edge {e}")
        for cyc in cycles:
            vals = {given.get(e) for e, _ in cyc}
            if None in vals:
                raise DiagramError("component map does not cover every edge")
            if len(vals) != 1:
                raise DiagramError("one strand cycle is assigned to several components")
            comp_of_cycle.append(vals.pop())
        if len(set(comp_of_cycle)) != n_cycles:
            raise DiagramError("two strand cycles are assigned the same component")
    else:
        comp_of_cycle = list(range(1, n_cycles + 1))
    d.components = {e: comp_of_cycle[k] for k, cyc in enumerate(cycles) for e, _ in cyc}

    # crossing signs from the over-strand direction
    signs = [0] * len(d.pd)
    passes: list[list[Pass]] = [[] for _ in range(d.m)]
    for k, cyc in enumerate(cycles):
        comp = comp_of_cycle[k]
        seq = []
        for idx, (e, (ci, p)) in enumerate(cyc):
            e_out = cyc[(idx + 1) % len(cyc)][0]
            if p in (1, 3):
                signs[ci] = 1 if p == 3 else -1
            seq.append(Pass(ci, e, e_out, p == 0))
        passes[comp - 1] = seq
    d.signs = signs
    # rotate each component so that it starts right after an undercrossing
    for i, seq in enumerate(passes):
        unders = [k for k, ps in enumerate(seq) if ps.under]
        if unders:
            k = unders[-1] + 1
            passes[i] = seq[k:] + seq[:k]
    d.passes = passes


def _reverse_cycle(cyc, appearances):
    # reversed traversal: each edge now exits through its other appearance
    out = []
    for e, app in reversed(cyc):
        a, b = appearances[e]
        out.append((e, b if a == app else a))
    return out


# ---------------------------------------------------------------- parsing / corpus


def parse_pd(text) -> LinkDiagram:
    """Build a validated diagram from JSON text, a dict, or a path."""
    if isinstance(text, Path):
        text = text.read_text()
    data = json.loads(text) if isinstance(text, str) else dict(text)
    try:
        m = int(data["m"])
    except KeyError as exc:
        raise DiagramError("diagram JSON needs an 'm' field") from exc
    comps = {int(k): int(v) for k, v in data.get("components", {}).items()}
    return LinkDiagram(
        m,
        [tuple(c) for c in data.get("pd", [])],
        comps,
        [int(f) for f in data.get("framings", [])] or [0] * m,
        data.get("name", ""),
    )


CORPUS = ("hopf", "borromean", "whitehead", "unlink2", "trefoil")


def load_corpus(name: str) -> LinkDiagram:
    text = resources.files("whitcalc.data").joinpath(f"{name}.json").read_text()
    return parse_pd(text)


def braid_closure(word: list[int], strands: int, name: str = "") -> LinkDiagram:
    """PD code of the closure of a braid word (``i`` = sigma_i, ``-i`` = inverse).

    sigma_i is drawn with the strand from position i passing over, which
    makes it a positive crossing.
    """
    next_label = 1
    current = []
    for _ in range(strands):
        current.append(next_label)
        next_label += 1
    start = list(current)
    crossings = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < strands - 1:
            raise DiagramError(f"generator {g} out of range for {strands} strands")
        a, b = current[i], current[i + 1]
        na, nb = next_label, next_label + 1
        next_label += 2
        # the strand at position i moves to i+1 and vice versa
        if g > 0:
            # over: a -> nb ; under: b -> na
            crossings.append([b, nb, na, a])
        else:
            # over: b -> na ; under: a -> nb
            crossings.append([a, b, nb, na])
        current[i], current[i + 1] = na, nb
    rename = {}
    for s, e in zip(start, current):
        rename[e] = s
    # resolve chains of renames (an untouched strand maps to itself)
    def final(x):
        while x in rename and rename[x] != x:
            x = rename[x]
        return x

    pd = [[final(x) for x in c] for c in crossings]
    used = sorted({x for c in pd for x in c})
    relabel = {x: k + 1 for k, x in enumerate(used)}
    pd = [tuple(relabel[x] for x in c) for c in pd]
    # count components: cycles of the braid permutation
    perm = list(range(strands))
    for g in word:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, m = set(), 0
    for s in range(strands):
        if s not in seen:
            m += 1
            x = s
            while x not in seen:
                seen.add(x)
                x = perm.index(x)
    return LinkDiagram(m, pd, {}, [0] * m, name)


def split_union(a: LinkDiagram, b: LinkDiagram) -> LinkDiagram:
    """Disjoint union with b's components numbered after a's."""
    off = max(a.edges, default=0)
    pd = list(a.pd) + [tuple(x + off for x in c) for c in b.pd]
    comps = dict(a.components)
    comps.update({e + off: c + a.m for e, c in b.components.items()})
    return LinkDiagram(a.m + b.m, pd, comps, a.framings + b.framings, f"{a.name}+{b.name}")


def _edge_ends(d: LinkDiagram) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
    """edge -> (tail appearance, head appearance)."""
    ends: dict = {}
    for seq in d.passes:
        for ps in seq:
            c = d.pd[ps.crossing]
            pin = next(p for p in range(4) if c[p] == ps.edge_in and c[(p + 2) % 4] == ps.edge_out)
            ends.setdefault(ps.edge_in, [None, None])[1] = (ps.crossing, pin)
            ends.setdefault(ps.edge_out, [None, None])[0] = (ps.crossing, (pin + 2) % 4)
    return {e: tuple(v) for e, v in ends.items()}


def faces(d: LinkDiagram) -> list[list[tuple[int, int]]]:
    """Faces of the diagram as cycles of (crossing, position) corners."""
    other = {}
    for e, (t, h) in _edge_ends(d).items():
        other[t], other[h] = h, t
    seen, out = set(), []
    for dart in sorted(other):
        if dart in seen:
            continue
        cyc, x = [], dart
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            y = other[x]
            x = (y[0], (y[1] + 1) % 4)
        out.append(cyc)
    return out


def _graph_components(d: LinkDiagram) -> int:
    parent = list(range(len(d.pd)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in _edge_ends(d).values():
        parent[find(t[0])] = find(h[0])
    return len({find(i) for i in range(len(d.pd))})


def is_planar(d: LinkDiagram) -> bool:
    """Euler characteristic check: V - E + F = 1 + (#connected pieces)."""
    if not d.pd:
        return True
    v = len(d.pd)
    return v - 2 * v + len(faces(d)) == 1 + _graph_components(d)


def band_sum(a: LinkDiagram, b: LinkDiagram, pairs: list[tuple[int, int]]) -> LinkDiagram:
    """Componentwise band sum of split diagrams along edge pairs (edge of a, edge of b).

    ``pairs[i]`` joins component i+1 of both links.  Raises DiagramError if
    the reconnected code is not planar (the bands would have to cross).
    """
    if a.m != b.m or len(pairs) != a.m:
        raise DiagramError("band sum needs equal component counts and one band per component")
    u = split_union(a, b)
    off = max(a.edges, default=0)
    ends = _edge_ends(u)
    pd = [list(c) for c in u.pd]
    comps = {}
    for i, (ea, eb) in enumerate(pairs, start=1):
        eb = eb + off
        if a.components.get(ea) != i or b.components.get(eb - off) != i:
            raise DiagramError(f"band {i} does not join component {i} of both links")
        (ha_c, ha_p) = ends[ea][1]
        (hb_c, hb_p) = ends[eb][1]
        pd[ha_c][ha_p] = eb
        pd[hb_c][hb_p] = ea
    for e, c in u.components.items():
        comps[e] = c if c <= a.m else c - a.m
    out = LinkDiagram(
        a.m, [tuple(c) for c in pd], comps, [x + y for x, y in zip(a.framings, b.framings)], f"{a.name}#{b.name}"
    )
    if not is_planar(out):
        raise DiagramError("band sum along these edges is not planar")
    return out


def find_band_sum(a: LinkDiagram, b: LinkDiagram) -> LinkDiagram:
    """First planar componentwise band sum found by searching faces of a and b."""
    from itertools import product

    def candidates(d):
        ends = _edge_ends(d)
        head_at = {h: e for e, (_, h) in ends.items()}
        tail_at = {t: e for e, (t, _) in ends.items()}
        for f in faces(d):
            edges = set()
            for corner in f:
                for table in (head_at, tail_at):
                    if corner in table:
                        edges.add(table[corner])
            by_comp = {}
            for e in sorted(edges):
                by_comp.setdefault(d.components[e], []).append(e)
            if len(by_comp) == d.m:
                yield [by_comp[i] for i in range(1, d.m + 1)]

    for fa in candidates(a):
        for fb in candidates(b):
            for ea in product(*fa):
                for eb in product(*fb):
                    try:
                        return band_sum(a, b, list(zip(ea, eb)))
                    except DiagramError:
                        continue
    raise DiagramError("no planar band sum found")


# ---------------------------------------------------------------- Wirtinger data


@dataclass
class WirtingerPresentation:
    """Generators are arcs; each relator says x_out = x_over^-sign x_in x_over^sign."""

    num_arcs: int
    arc_component: list[int]
    component_arcs: list[list[int]]
    relators: list[tuple[int, int, int, int]]  # (out_arc, over_arc, in_arc, sign)
    arc_of_edge: dict[int, int]

    def relator_words(self) -> list[GroupWord]:
        """Relators as words in the arc generators x_1..x_A (1-based)."""
        out = []
        for b, o, a, s in self.relators:
            w = GroupWord(self.num_arcs, (-(b + 1),))
            w = w * GroupWord(self.num_arcs, ((o + 1) * -s,))
            w = w * GroupWord(self.num_arcs, (a + 1,))
            w = w * GroupWord(self.num_arcs, ((o + 1) * s,))
            out.append(w)
        return out


def wirtinger(d: LinkDiagram) -> WirtingerPresentation:
    arc_of_edge: dict[int, int] = {}
    arc_component: list[int] = []
    component_arcs: list[list[int]] = []
    for i, seq in enumerate(d.passes, start=1):
        arcs = []
        if not seq:
            arcs.append(len(arc_component))
            arc_component.append(i)
        else:
            current = None
            for ps in seq:
                if current is None:
                    current = len(arc_component)
                    arc_component.append(i)
                    arcs.append(current)
                arc_of_edge[ps.edge_in] = current
                if ps.under:
                    current = None
        component_arcs.append(arcs)
    relators = []
    for seq in d.passes:
        for ps in seq:
            if ps.under:
                c = d.pd[ps.crossing]
                over = arc_of_edge[c[1]]
                relators.append((arc_of_edge[ps.edge_out], over, arc_of_edge[ps.edge_in], d.signs[ps.crossing]))
    return WirtingerPresentation(len(arc_component), arc_component, component_arcs, relators, arc_of_edge)


def _base_arcs(w: WirtingerPresentation, base_arcs) -> list[int]:
    """Index into each component's arc list; returns global arc ids."""
    if base_arcs is None:
        base_arcs = [0] * len(w.component_arcs)
    out = []
    for arcs, k in zip(w.component_arcs, base_arcs):
        out.append(arcs[k % len(arcs)])
    return out


def _under_sequence(d: LinkDiagram, w: WirtingerPresentation, comp: int, start_arc: int):
    """Undercrossings of a component in order, starting from ``start_arc``.

    Yields (over_arc, sign, arc_before, arc_after)."""
    seq = [ps for ps in d.passes[comp - 1] if ps.under]
    items = [
        (w.arc_of_edge[d.pd[ps.crossing][1]], d.signs[ps.crossing], w.arc_of_edge[ps.edge_in], w.arc_of_edge[ps.edge_out])
        for ps in seq
    ]
    k = next((j for j, it in enumerate(items) if it[2] == start_arc), 0)
    return items[k:] + items[:k]


def nilpotent_arc_words(d: LinkDiagram, q: int, base_arcs=None) -> dict[int, GroupWord]:
    """Arc meridians as words in x_1..x_m, correct modulo F_{q+1}.

    Level 1 sends every arc to its component's generator; each further
    round re-derives arcs along every component from the previous round's
    over-arc words.
    """
    if q < 1:
        raise ValueError("class must be >= 1")
    w = wirtinger(d)
    m = d.m
    base = _base_arcs(w, base_arcs)
    words = {a: GroupWord.generator(m, w.arc_component[a]) for a in range(w.num_arcs)}
    for _ in range(q - 1):
        new = {}
        for comp in range(1, m + 1):
            cur = base[comp - 1]
            new[cur] = GroupWord.generator(m, comp)
            for over, sign, _, after in _under_sequence(d, w, comp, cur):
                if after == base[comp - 1]:
                    break
                o = words[over]
                new[after] = (o ** -sign) * new[cur] * (o ** sign)
                cur = after
        words = new
    return words


def longitudes(d: LinkDiagram, q: int, base_arcs=None) -> list[GroupWord]:
    """Framed longitude words, correct modulo F_{q+1}."""
    if q < 1:
        raise ValueError("class must be >= 1")
    w = wirtinger(d)
    base = _base_arcs(w, base_arcs)
    words = nilpotent_arc_words(d, q, base_arcs)
    out = []
    for comp in range(1, d.m + 1):
        lam = GroupWord.identity(d.m)
        for over, sign, _, _ in _under_sequence(d, w, comp, base[comp - 1]):
            lam = lam * words[over] ** sign
        correction = d.framings[comp - 1] - d.writhe(comp)
        lam = lam * GroupWord.generator(d.m, comp) ** correction
        out.append(lam)
    return out


@dataclass
class MilnorResult:
    order: int
    lower_orders_vanish: bool
    total: TensorElement | None = None
    coefficients: dict[tuple[int, ...], int] = field(default_factory=dict)
    first_nonvanishing_order: int | None = None

    def to_json(self) -> dict:
        out = {"order": self.order, "lower_orders_vanish": self.lower_orders_vanish}
        if self.lower_orders_vanish:
            out["total"] = self.total.to_json()
            out["mu_bar"] = [
                {"indices": list(k), "value": str(v)} for k, v in sorted(self.coefficients.items())
            ]
        else:
            out["first_nonvanishing_order"] = self.first_nonvanishing_order
        return out


def milnor_mu(d: LinkDiagram, n: int, base_arcs=None) -> MilnorResult:
    """Total Milnor invariant of order n, or a refusal if a lower order is nonzero."""
    if n < 0:
        raise ValueError("order must be >= 0")
    q = n + 2
    lams = longitudes(d, q, base_arcs)
    expansions = [magnus_expand(lam, n + 1) for lam in lams]
    lows = [p.lowest_nonconstant_degree() for p in expansions]
    lows = [x for x in lows if x is not None]
    if lows and min(lows) <= n:
        return MilnorResult(n, False, first_nonvanishing_order=min(lows) - 1)
    total = TensorElement.zero(d.m, n)
    coeffs = {}
    for i, (lam, p) in enumerate(zip(lams, expansions), start=1):
        try:
            u = lie_class(lam, n + 1)
        except LowerCentralError as exc:  # pragma: no cover - guarded above
            raise ArithmeticError(str(exc)) from exc
        total = total + TensorElement.simple(i, u)
        for word, c in p.homogeneous(n + 1).items():
            coeffs[word + (i,)] = c
    if not in_dn(total):
        raise ArithmeticError("computed Milnor invariant violates cyclic symmetry")
    return MilnorResult(n, True, total, coeffs)


@dataclass
class SatoLevineResult:
    k: int
    value: list[int] | None
    first_nonvanishing_order: int | None = None

    @property
    def refused(self) -> bool:
        return self.value is None

    def to_json(self) -> dict:
        if self.value is None:
            return {"k": self.k, "refused": True, "first_nonvanishing_order": self.first_nonvanishing_order}
        return {"k": self.k, "refused": False, "value": self.value}


def sato_levine(d: LinkDiagram, k: int, base_arcs=None) -> SatoLevineResult:
    """Higher-order Sato-Levine invariant SL_{2k-1} as a vector in (Z_2)^R(m, k+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    res = milnor_mu(d, 2 * k, base_arcs)
    if not res.lower_orders_vanish:
        return SatoLevineResult(k, None, res.first_nonvanishing_order)
    vec = sl_quotient(res.total, d.m, k)
    assert len(vec) == witt_rank(d.m, k + 1)
    return SatoLevineResult(k, vec)
