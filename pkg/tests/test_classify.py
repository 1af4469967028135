import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from whitcalc.classify import (
    TABLE_FIELDS,
    arf_degree,
    check_limits,
    eta_cokernel_structure,
    format_table,
    framed_quotient,
    graded_quotient,
    rank_table,
    twisted_quotient,
    verify_theorems,
)
from whitcalc.cli import main
from whitcalc.exactlinalg import AbelianGroupStructure as G
from whitcalc.freelie import bsl_kernel_dimension, dn_basis, milnor_rank, plain_eta_quotient_structure, witt_rank
from whitcalc.treecalc import TreeLimitError, TreeSum


@pytest.mark.parametrize(
    "m,n,structure,arf",
    [(2, 0, G(3), 0), (2, 2, G(1), 2), (3, 1, G(1), 0), (1, 2, G(0), 1), (3, 2, G(6), 3)],
)
def test_twisted_examples(m, n, structure, arf):
    r = twisted_quotient(m, n)
    assert r.structure == structure and r.annihilated_arf_dimension == arf


@pytest.mark.parametrize(
    "m,n,structure",
    [(2, 1, G(0, (2,))), (2, 2, G(1)), (3, 1, G(1, (2, 2, 2))), (1, 1, G(0)), (2, 3, G(0, (2, 2)))],
)
def test_framed_examples(m, n, structure):
    assert framed_quotient(m, n).structure == structure


cells = st.tuples(st.integers(1, 3), st.integers(0, 4))


@given(cells)
def test_twisted_is_free_of_dn_rank(cell):
    m, n = cell
    s = twisted_quotient(m, n).structure
    assert s.torsion == () and s.free_rank == len(dn_basis(m, n)) == milnor_rank(m, n)


@given(cells)
def test_framed_torsion_two_routes(cell):
    m, n = cell
    s = framed_quotient(m, n).structure
    if n % 2:
        ell = (n + 1) // 2
        levine = plain_eta_quotient_structure(m, n + 1)
        assert len(s.torsion) == witt_rank(m, ell + 1) == len(levine.torsion)
        assert s.two_rank == len(s.torsion)
    else:
        assert s.torsion == ()


@given(cells)
def test_arf_dimension_matches_bsl(cell):
    m, n = cell
    k = arf_degree(n)
    a = twisted_quotient(m, n).annihilated_arf_dimension
    if k is None:
        assert a == 0
    else:
        assert a == bsl_kernel_dimension(m, 2 * k - 1) == witt_rank(m, k)


def test_arf_degree():
    assert [arf_degree(n) for n in range(11)] == [None, None, 1, None, None, None, 2, None, None, None, 3]


def test_eta_cokernel_trivial_small():
    for m in (1, 2, 3):
        for n in range(5):
            assert eta_cokernel_structure(m, n).is_trivial


def test_graded_quotient_dispatch():
    assert graded_quotient(2, 1, "framed") == framed_quotient(2, 1)
    with pytest.raises(ValueError):
        graded_quotient(2, 1, "oriented")


def test_limits(monkeypatch):
    with pytest.raises(TreeLimitError):
        check_limits(5, 1)
    with pytest.raises(ValueError):
        check_limits(0, 1)
    monkeypatch.setenv("WHITCALC_MAX_ORDER", "2")
    with pytest.raises(TreeLimitError):
        twisted_quotient(2, 3)
    twisted_quotient(2, 2)


# ---------------------------------------------------------------- verification


def test_verify_2_4():
    r = verify_theorems(2, 4)
    assert r.passed, r.to_text()
    names = {c.name for c in r.results}
    assert {"witt-rank", "dn-rank", "eta-surjective", "levine-quotient", "bsl-dichotomy", "arf-annihilation"} <= names


def test_verify_degenerate_m1():
    r = verify_theorems(1, 2)
    assert r.passed
    assert all(c.m == 1 for c in r.results)


def test_verify_reports_levine_3_2():
    r = verify_theorems(3, 2)
    (lev,) = [c for c in r.results if (c.m, c.n, c.name) == (3, 2, "levine-quotient")]
    assert lev.passed and "(Z_2)^3" in lev.detail


def test_checklist_serialization():
    r = verify_theorems(1, 1)
    data = json.loads(json.dumps(r.to_json()))
    assert data["passed"] is True
    assert len(data["checks"]) == len(r.results)
    assert r.to_text().splitlines()[-1] == f"{len(r.results)}/{len(r.results)} checks passed"


# ---------------------------------------------------------------- tables


def test_table_rows_in_cell_order():
    rows = rank_table(3, 3)
    assert [(r["m"], r["n"]) for r in rows] == [(m, n) for m in (1, 2, 3) for n in range(4)]


def test_table_golden_text():
    expected = """\
m  n  R(m,n+1)  M(m,n)   flavor  structure  annihilated_arf_dimension
1  0         1       1  twisted          Z                          0
1  1         0       0  twisted          0                          0
1  2         0       0  twisted          0                          1
2  0         2       3  twisted        Z^3                          0
2  1         1       0  twisted          0                          0
2  2         2       1  twisted          Z                          2"""
    assert format_table(rank_table(2, 2), "text") == expected


def test_table_csv_and_json_agree():
    rows = rank_table(3, 3, "framed")
    parsed = list(csv.DictReader(io.StringIO(format_table(rows, "csv"))))
    js = json.loads(format_table(rows, "json"))
    assert list(parsed[0]) == list(TABLE_FIELDS)
    assert parsed == js
    assert all(isinstance(v, str) for r in js for v in r.values())


def test_table_unknown_format():
    with pytest.raises(ValueError):
        format_table([], "xml")


# ---------------------------------------------------------------- CLI


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_ranks(capsys):
    code, out, _ = run(capsys, "ranks", "--m", "3", "--n", "1", "--flavor", "framed", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[-1]["structure"] == "Z + (Z_2)^3"


def test_cli_milnor(capsys):
    code, out, _ = run(capsys, "milnor", "--diagram", "hopf", "--order", "0")
    data = json.loads(out)
    assert code == 0 and data["lower_orders_vanish"] is True
    code, out, _ = run(capsys, "milnor", "--diagram", "hopf", "--order", "1")
    data = json.loads(out)
    assert data["lower_orders_vanish"] is False and "total" not in data


def test_cli_milnor_from_file_with_framings(capsys, tmp_path):
    f = tmp_path / "hopf.json"
    f.write_text(json.dumps({"m": 2, "pd": [[1, 3, 2, 4], [3, 1, 4, 2]]}))
    code, out, _ = run(capsys, "milnor", "--diagram", str(f), "--order", "0", "--framings", "5", "0")
    assert code == 0
    assert "5" in json.dumps(json.loads(out)["total"])


def test_cli_sato_levine(capsys):
    code, out, _ = run(capsys, "sato-levine", "--diagram", "whitehead", "--k", "1")
    assert code == 0 and json.loads(out)["value"] == [1]


def test_cli_eta_and_longitudes(capsys, tmp_path):
    f = tmp_path / "ts.json"
    f.write_text(json.dumps(TreeSum(3, 1).add_plain(1, (2, 3)).to_json()))
    code, out, _ = run(capsys, "eta", "--treesum", str(f))
    assert code == 0
    eta_json = json.loads(out)
    code, out, _ = run(capsys, "longitudes", "--treesum", str(f))
    data = json.loads(out)
    assert code == 0 and data["matches_eta"] is True and data["mu"] == eta_json
    assert len(data["longitudes"]) == 3


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--m-max", "2", "--n-max", "2")
    assert code == 0 and out.strip().endswith("checks passed")
    code, out, _ = run(capsys, "verify", "--m-max", "2", "--n-max", "1", "--format", "json")
    assert json.loads(out)["passed"] is True


def test_cli_errors(capsys, monkeypatch):
    code, _, err = run(capsys, "milnor", "--diagram", "no-such-link", "--order", "0")
    assert code == 2 and err.startswith("whitcalc: error:")
    code, _, err = run(capsys, "ranks", "--m", "6", "--n", "1")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["ranks"])
