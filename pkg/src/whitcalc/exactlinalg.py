"""Exact integer and mod-2 linear algebra.

Everything here works on Python ints, so entries never overflow.  Matrices
are small (a few hundred rows at most), so dense list-of-lists storage is
used throughout, with a sparse echelon helper for reducing long lists of
generators before a Smith normal form is taken.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntMatrix",
    "AbelianGroupStructure",
    "smith_normal_form",
    "kernel_basis",
    "cokernel_structure",
    "f2_rank",
    "f2_kernel_dimension",
    "lattice_basis",
]


@dataclass
class IntMatrix:
    rows: int
    cols: int
    entries: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if not self.entries:
            self.entries = [[0] * self.cols for _ in range(self.rows)]
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the stated shape")
        for r in self.entries:
            for x in r:
                if not isinstance(x, int):
                    raise TypeError(f"non-integer entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [[operator.index(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = [list(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls(rows, len(cols), [[operator.index(c[i]) for c in cols] for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ot = list(zip(*other.entries)) if other.rows else [() for _ in range(other.cols)]
        out = [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries]
        if not ot:
            out = [[] for _ in range(self.rows)]
        return IntMatrix(self.rows, other.cols, out)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [list(c) for c in zip(*self.entries)] if self.rows else [[] for _ in range(self.cols)])

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum(a * b for a, b in zip(r, v)) for r in self.entries]

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [list(r) for r in self.entries])

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Z^free_rank plus cyclic torsion summands d_1 | d_2 | ..."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"invariant factors must be >= 2, got {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"invariant factors do not form a divisibility chain: {t}")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], ambient: int) -> "AbelianGroupStructure":
        """Structure of Z^ambient modulo the span of d_i e_i."""
        diagonal = [abs(d) for d in diagonal]
        nonzero = [d for d in diagonal if d]
        return cls(ambient - len(nonzero), tuple(sorted(d for d in nonzero if d > 1)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def two_rank(self) -> int:
        """Dimension of the torsion tensored with Z_2."""
        return sum(1 for d in self.torsion if d % 2 == 0)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        counts: dict[int, int] = {}
        for d in self.torsion:
            counts[d] = counts.get(d, 0) + 1
        for d, c in sorted(counts.items()):
            parts.append(f"Z_{d}" if c == 1 else f"(Z_{d})^{c}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": [str(d) for d in self.torsion]}


def _as_rows(A) -> tuple[list[list[int]], int, int]:
    if isinstance(A, IntMatrix):
        return [list(r) for r in A.entries], A.rows, A.cols
    rows = [[int(x) for x in r] for r in A]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with S = U A V, U and V unimodular, S diagonal.

    The diagonal of S is nonnegative and satisfies d_1 | d_2 | ... with the
    zeros last.  Pivots are chosen with minimal absolute value to keep the
    intermediate coefficients small.
    """
    a, m, n = _as_rows(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row dst += c * row src
        if c:
            rs, rd = a[src], a[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += c * rs[k]
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += c * us[k]

    def add_col(src, dst, c):  # col dst += c * col src
        if c:
            for r in a:
                if r[src]:
                    r[dst] += c * r[src]
            for r in V:
                if r[src]:
                    r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(t, i, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(t, j, -q)
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest leftover into the pivot position and retry
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(m, n, a), IntMatrix(m, m, U), IntMatrix(n, n, V)


def _diagonal(S: IntMatrix) -> list[int]:
    return [S.entries[i][i] for i in range(min(S.rows, S.cols))]


def kernel_basis(A) -> list[list[int]]:
    """Basis of the saturated lattice {v in Z^cols : A v = 0}."""
    S, _, V = smith_normal_form(A)
    r = sum(1 for d in _diagonal(S) if d)
    return [V.column(j) for j in range(r, V.cols)]


def cokernel_structure(A) -> AbelianGroupStructure:
    """Isomorphism type of Z^rows / (column span of A)."""
    rows, m, n = _as_rows(A)
    if m == 0:
        return AbelianGroupStructure(0)
    cols = [[rows[i][j] for i in range(m)] for j in range(n)]
    basis = lattice_basis(cols, m)
    if not basis:
        return AbelianGroupStructure(m)
    S, _, _ = smith_normal_form(IntMatrix.from_columns(basis, m))
    return AbelianGroupStructure.from_diagonal(_diagonal(S), m)


def lattice_basis(vectors: Iterable, length: int) -> list[list[int]]:
    """Echelon basis of the Z-span of ``vectors``.

    Vectors may be dense sequences or sparse ``{index: value}`` mappings.
    Reduction is done sparsely with unimodular gcd steps, so the returned
    vectors span exactly the same lattice.
    """
    pivots: dict[int, dict[int, int]] = {}

    def combine(x: dict, y: dict, a: int, b: int) -> dict:
        out = {}
        for k in x.keys() | y.keys():
            v = a * x.get(k, 0) + b * y.get(k, 0)
            if v:
                out[k] = v
        return out

    for vec in vectors:
        if isinstance(vec, Mapping):
            v = {int(k): int(x) for k, x in vec.items() if x}
        else:
            v = {k: int(x) for k, x in enumerate(vec) if x}
        while v:
            p = min(v)
            u = pivots.get(p)
            if u is None:
                if v[p] < 0:
                    v = {k: -x for k, x in v.items()}
                pivots[p] = v
                break
            a, b = u[p], v[p]
            if b % a == 0:
                v = combine(v, u, 1, -(b // a))
                continue
            g, s, t = _ext_gcd(a, b)
            new_pivot = combine(u, v, s, t)
            v = combine(u, v, b // g, -(a // g))
            pivots[p] = new_pivot
        # keep pivots small: reduce entries sitting over later pivots lazily
    out = []
    for p in sorted(pivots):
        row = [0] * length
        for k, x in pivots[p].items():
            row[k] = x
        out.append(row)
    return out


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def f2_rank(A) -> int:
    """Rank over the two-element field; rows may be any integer sequences."""
    rows, m, n = _as_rows(A)
    # pack each row into an int bitmask
    masks = []
    for r in rows:
        bits = 0
        for j, x in enumerate(r):
            if x & 1:
                bits |= 1 << j
        if bits:
            masks.append(bits)
    return _f2_rank_masks(masks)


def _f2_rank_masks(masks: list[int]) -> int:
    basis: dict[int, int] = {}
    for v in masks:
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                break
    return len(basis)


def f2_kernel_dimension(A) -> int:
    """Dimension over F_2 of the kernel of A mod 2."""
    _, _, n = _as_rows(A)
    return n - f2_rank(A)
