"""Write twisted and framed structure tables (text, CSV, JSON) to a directory."""

import argparse
from pathlib import Path

from whitcalc.classify import FLAVORS, format_table, rank_table, verify_theorems


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--out", type=Path, default=Path("tables"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for flavor in FLAVORS:
        rows = rank_table(args.m_max, args.n_max, flavor)
        for fmt, ext in (("text", "txt"), ("csv", "csv"), ("json", "json")):
            (args.out / f"{flavor}.{ext}").write_text(format_table(rows, fmt) + "\n")
        print(f"== {flavor}")
        print(format_table(rows))

    report = verify_theorems(args.m_max, args.n_max)
    (args.out / "checklist.txt").write_text(report.to_text() + "\n")
    print(report.to_text().splitlines()[-1])


if __name__ == "__main__":
    main()
