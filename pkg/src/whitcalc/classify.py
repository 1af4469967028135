"""Graded quotients of the rational Whitney tower filtration and their verification.

Each (m, n) cell is computed independently; tables list cells in (m, n)
order regardless of how they were produced.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .exactlinalg import AbelianGroupStructure, IntMatrix, lattice_basis, smith_normal_form
from .freelie import (
    bsl_kernel_dimension,
    dn_basis,
    lyndon_words,
    milnor_rank,
    plain_eta_quotient_structure,
    tensor_basis,
    witt_rank,
)
from .treecalc import TreeLimitError, eta_image_generators, max_order

FLAVORS = ("twisted", "framed")
MAX_M = 4


def check_limits(m: int, n: int) -> None:
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    if m > MAX_M:
        raise TreeLimitError(f"m = {m} exceeds the ceiling {MAX_M}")
    if n > max_order():
        raise TreeLimitError(f"order {n} exceeds the ceiling {max_order()} (set WHITCALC_MAX_ORDER)")


def arf_degree(n: int) -> int | None:
    """k with n = 4k - 2, or None."""
    return (n + 2) // 4 if n % 4 == 2 else None


@dataclass
class GradedQuotientReport:
    m: int
    n: int
    flavor: str
    structure: AbelianGroupStructure
    invariant_basis_description: str
    annihilated_arf_dimension: int = 0

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "flavor": self.flavor,
            "structure": str(self.structure),
            "free_rank": str(self.structure.free_rank),
            "torsion": [str(t) for t in self.structure.torsion],
            "invariants": self.invariant_basis_description,
            "annihilated_arf_dimension": str(self.annihilated_arf_dimension),
        }


def twisted_quotient(m: int, n: int) -> GradedQuotientReport:
    check_limits(m, n)
    M = milnor_rank(m, n)
    computed = len(dn_basis(m, n))
    if computed != M:
        raise ArithmeticError(f"rank of D_{n} is {computed}, formula gives {M}")
    k = arf_degree(n)
    arf = witt_rank(m, k) if k else 0
    desc = f"mu_{n} in D_{n}, free of rank {M}"
    if k:
        desc += f"; rationally annihilates Z_2 (x) L_{k} (dimension {arf})"
    return GradedQuotientReport(m, n, "twisted", AbelianGroupStructure(M), desc, arf)


def framed_quotient(m: int, n: int) -> GradedQuotientReport:
    check_limits(m, n)
    M = milnor_rank(m, n)
    if n % 2 == 0:
        return GradedQuotientReport(
            m, n, "framed", AbelianGroupStructure(M), f"mu_{n} on plain trees, free of rank {M}"
        )
    ell = (n + 1) // 2
    r = witt_rank(m, ell + 1)
    levine = plain_eta_quotient_structure(m, n + 1)
    if levine != AbelianGroupStructure(0, (2,) * r):
        raise ArithmeticError(f"Levine quotient of D_{n + 1} is {levine}, expected (Z_2)^{r}")
    desc = f"mu_{n} (rank {M}) and SL_{n} in (Z_2)^{r}"
    return GradedQuotientReport(m, n, "framed", AbelianGroupStructure(M, (2,) * r), desc)


def graded_quotient(m: int, n: int, flavor: str) -> GradedQuotientReport:
    if flavor == "twisted":
        return twisted_quotient(m, n)
    if flavor == "framed":
        return framed_quotient(m, n)
    raise ValueError(f"unknown flavor {flavor!r}")


def eta_cokernel_structure(m: int, n: int) -> AbelianGroupStructure:
    """D_n modulo the span of eta over all order-n trees (and twisted trees, n even)."""
    N = len(tensor_basis(m, n))
    gens = [x.sparse_vector() for x in eta_image_generators(m, n)]
    basis = lattice_basis(gens, N)
    if not basis:
        return AbelianGroupStructure(milnor_rank(m, n))
    S, _, _ = smith_normal_form(IntMatrix.from_columns(basis, N))
    diag = [S.entries[i][i] for i in range(len(basis))]
    ambient = AbelianGroupStructure.from_diagonal(diag, N)
    return AbelianGroupStructure(ambient.free_rank - (N - milnor_rank(m, n)), ambient.torsion)


# ---------------------------------------------------------------- checklist


@dataclass
class CheckResult:
    m: int
    n: int
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "check": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class Checklist:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [r.to_json() for r in self.results]}

    def to_text(self) -> str:
        lines = [
            f"{'PASS' if r.passed else 'FAIL'}  m={r.m} n={r.n}  {r.name}: {r.detail}" for r in self.results
        ]
        ok = sum(r.passed for r in self.results)
        lines.append(f"{ok}/{len(self.results)} checks passed")
        return "\n".join(lines)


def _cell_checks(m: int, n: int) -> list[CheckResult]:
    out = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(m, n, name, bool(ok), detail))

    M = milnor_rank(m, n)

    def witt():
        a, b = witt_rank(m, n + 1), len(lyndon_words(m, n + 1))
        return a == b, f"R(m,{n + 1}) = {a}, Lyndon words = {b}"

    def dn_rank():
        r = len(dn_basis(m, n))
        return r == M, f"rank D_{n} = {r}, M(m,n) = {M}"

    def surjective():
        s = eta_cokernel_structure(m, n)
        return s.is_trivial, f"cokernel of eta in D_{n}: {s}"

    def twisted():
        rep = twisted_quotient(m, n)
        ok = rep.structure == AbelianGroupStructure(M)
        return ok, f"{rep.structure} vs Z^{M}"

    def framed():
        rep = framed_quotient(m, n)
        if n % 2:
            r = witt_rank(m, (n + 1) // 2 + 1)
            want = AbelianGroupStructure(M, (2,) * r)
        else:
            want = AbelianGroupStructure(M)
        plain = plain_eta_quotient_structure(m, n)
        ok = rep.structure == want and plain.free_rank == 0
        return ok, f"{rep.structure} vs {want}; plain-tree image has full rank: {plain.free_rank == 0}"

    check("witt-rank", witt)
    check("dn-rank", dn_rank)
    check("eta-surjective", surjective)
    check("twisted-structure", twisted)
    check("framed-structure", framed)

    if n >= 2 and n % 2 == 0:
        k = n // 2

        def levine():
            s = plain_eta_quotient_structure(m, n)
            want = AbelianGroupStructure(0, (2,) * witt_rank(m, k + 1))
            return s == want, f"D_{n}/<plain eta> = {s} vs {want}"

        check("levine-quotient", levine)

    if n >= 1:

        def bsl():
            d = bsl_kernel_dimension(m, n)
            want = witt_rank(m, (n + 1) // 2) if n % 2 else 0
            return d == want, f"dim B^SL_{n} = {d}, expected {want}"

        check("bsl-dichotomy", bsl)

    k = arf_degree(n)
    if k:

        def arf():
            a = twisted_quotient(m, n).annihilated_arf_dimension
            b = bsl_kernel_dimension(m, 2 * k - 1)
            return a == b == witt_rank(m, k), f"annihilated {a}, B^SL_{2 * k - 1} {b}, R(m,{k}) = {witt_rank(m, k)}"

        check("arf-annihilation", arf)
    return out


def verify_theorems(m_max: int = 3, n_max: int = 4) -> Checklist:
    check_limits(m_max, n_max)
    report = Checklist()
    for m in range(1, m_max + 1):
        for n in range(n_max + 1):
            report.results.extend(_cell_checks(m, n))
    return report


# ---------------------------------------------------------------- tables


TABLE_FIELDS = ("m", "n", "R(m,n+1)", "M(m,n)", "flavor", "structure", "annihilated_arf_dimension")


def rank_table(m_max: int, n_max: int, flavor: str = "twisted") -> list[dict]:
    rows = []
    for m in range(1, m_max + 1):
        for n in range(n_max + 1):
            rep = graded_quotient(m, n, flavor)
            rows.append(
                {
                    "m": m,
                    "n": n,
                    "R(m,n+1)": witt_rank(m, n + 1),
                    "M(m,n)": milnor_rank(m, n),
                    "flavor": flavor,
                    "structure": str(rep.structure),
                    "annihilated_arf_dimension": rep.annihilated_arf_dimension,
                }
            )
    return rows


def format_table(rows: list[dict], fmt: str = "text") -> str:
    if fmt == "json":
        # exact integers as strings so no consumer rounds them
        return json.dumps([{k: str(v) if isinstance(v, int) else v for k, v in r.items()} for r in rows], indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [list(TABLE_FIELDS)] + [[str(r[k]) for k in TABLE_FIELDS] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(TABLE_FIELDS))]
    return "\n".join("  ".join(c[i].rjust(widths[i]) for i in range(len(c))) for c in cells)
