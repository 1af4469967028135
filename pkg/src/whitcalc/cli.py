"""Command line interface: ``whitcalc <subcommand> ...`` or ``python3 -m whitcalc``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import FLAVORS, format_table, rank_table, verify_theorems
from .groupwords import assemble_longitudes, lie_class
from .milnorlink import CORPUS, DiagramError, LinkDiagram, load_corpus, milnor_mu, parse_pd, sato_levine
from .freelie import TensorElement
from .treecalc import TreeLimitError, TreeSum, eta


def _diagram(source: str) -> LinkDiagram:
    path = Path(source)
    if path.exists():
        return parse_pd(path.read_text())
    if source in CORPUS:
        return load_corpus(source)
    raise DiagramError(f"no such file or bundled diagram: {source}")


def _treesum(path: str) -> TreeSum:
    return TreeSum.from_json(json.loads(Path(path).read_text()))


def _dump(obj) -> None:
    print(json.dumps(obj, indent=1))


def cmd_ranks(args) -> int:
    print(format_table(rank_table(args.m, args.n, args.flavor), args.format))
    return 0


def cmd_milnor(args) -> int:
    d = _diagram(args.diagram)
    if args.framings is not None:
        d = d.with_framings(args.framings)
    _dump(milnor_mu(d, args.order).to_json())
    return 0


def cmd_sato_levine(args) -> int:
    _dump(sato_levine(_diagram(args.diagram), args.k).to_json())
    return 0


def cmd_eta(args) -> int:
    _dump(eta(_treesum(args.treesum)).to_json())
    return 0


def cmd_longitudes(args) -> int:
    ts = _treesum(args.treesum)
    words = assemble_longitudes(ts)
    total = TensorElement.zero(ts.m, ts.order)
    for i, w in enumerate(words, start=1):
        total = total + TensorElement.simple(i, lie_class(w, ts.order + 1))
    agrees = total == eta(ts)
    _dump({"longitudes": [str(w) for w in words], "mu": total.to_json(), "matches_eta": agrees})
    return 0 if agrees else 1


def cmd_verify(args) -> int:
    report = verify_theorems(args.m_max, args.n_max)
    if args.format == "json":
        _dump(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="whitcalc", description="Whitney tower and Milnor invariant calculator")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ranks", help="structure table of the graded quotients")
    s.add_argument("--m", type=int, required=True, help="largest number of components")
    s.add_argument("--n", type=int, required=True, help="largest order")
    s.add_argument("--flavor", choices=FLAVORS, default="twisted")
    s.add_argument("--format", choices=("text", "csv", "json"), default="text")
    s.set_defaults(func=cmd_ranks)

    s = sub.add_parser("milnor", help="total Milnor invariant of a PD diagram")
    s.add_argument("--diagram", required=True, help=f"JSON file or one of {', '.join(CORPUS)}")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--framings", type=int, nargs="+")
    s.set_defaults(func=cmd_milnor)

    s = sub.add_parser("sato-levine", help="higher-order Sato-Levine invariant")
    s.add_argument("--diagram", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_sato_levine)

    s = sub.add_parser("eta", help="eta of a tree sum")
    s.add_argument("--treesum", required=True)
    s.set_defaults(func=cmd_eta)

    s = sub.add_parser("longitudes", help="longitude words of a tree sum and their Milnor invariant")
    s.add_argument("--treesum", required=True)
    s.set_defaults(func=cmd_longitudes)

    s = sub.add_parser("verify", help="run the structural checklist")
    s.add_argument("--m-max", type=int, default=3)
    s.add_argument("--n-max", type=int, default=4)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DiagramError, TreeLimitError, ValueError, OSError) as exc:
        print(f"whitcalc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
