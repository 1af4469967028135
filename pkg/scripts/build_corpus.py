"""Regenerate the bundled link diagrams in src/whitcalc/data/."""

import json
from pathlib import Path

from whitcalc.milnorlink import LinkDiagram, braid_closure

DATA = Path(__file__).resolve().parents[1] / "src" / "whitcalc" / "data"


def corpus() -> dict[str, LinkDiagram]:
    return {
        "hopf": LinkDiagram(2, [(1, 3, 2, 4), (3, 1, 4, 2)], name="hopf"),
        # (s1 s2^-1)^3, six alternating crossings
        "borromean": braid_closure([1, -2] * 3, 3, "borromean"),
        # knot-table PD of the five-crossing Whitehead link
        "whitehead": LinkDiagram(
            2, [(6, 1, 7, 2), (10, 7, 5, 8), (4, 5, 1, 6), (2, 10, 3, 9), (8, 4, 9, 3)], name="whitehead"
        ),
        # two circles related by a Reidemeister II move
        "unlink2": braid_closure([1, -1], 2, "unlink2"),
        "trefoil": braid_closure([1, 1, 1], 2, "trefoil"),
    }


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, d in corpus().items():
        (DATA / f"{name}.json").write_text(json.dumps(d.to_json(), indent=1) + "\n")
        print(f"wrote {name}.json: {len(d.pd)} crossings, m={d.m}")


if __name__ == "__main__":
    main()
