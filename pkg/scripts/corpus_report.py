"""Print the first non-vanishing Milnor invariant of each bundled link, plus Sato-Levine at k=1."""

import json

from whitcalc.milnorlink import CORPUS, load_corpus, milnor_mu, sato_levine


def first_invariant(d, top=4):
    for n in range(top + 1):
        r = milnor_mu(d, n)
        if not r.lower_orders_vanish:
            return milnor_mu(d, r.first_nonvanishing_order)
        if not r.total.is_zero():
            return r
    return None


def main() -> None:
    for name in CORPUS:
        d = load_corpus(name)
        r = first_invariant(d)
        sl = sato_levine(d, 1)
        print(f"{name}: m={d.m}, {len(d.pd)} crossings")
        if r is None:
            print("  all mu_n vanish through order 4")
        else:
            print(f"  first non-vanishing order {r.order}: {json.dumps(r.to_json()['mu_bar'])}")
        print(f"  SL_1: {'refused' if sl.refused else sl.value}")


if __name__ == "__main__":
    main()
