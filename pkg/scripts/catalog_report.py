#!/usr/bin/env python3
"""Print break functions, Artin characters, bisections and conductors for the
built-in fixture catalog.  A quick eyeball check of everything at once."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from ramcond.catalog import catalog
from ramcond.characters import artin_conductor
from ramcond.conductors import conductor, module_character, regular_module, trivial_module
from ramcond.groups import subgroup
from ramcond.ramification import artin_character, bisection, disc_valuation, i_gamma


def main():
    for rd in catalog():
        grp = rd.group
        print(f"== {rd.name}  (|G|={grp.order}, p={rd.p}, n={rd.n})")
        a = artin_character(rd)
        ba = bisection(rd)
        for s in range(grp.order):
            i_s = "-" if s == 0 else i_gamma(rd, s)
            print(f"   s={s:<3} i={i_s!s:<3} a={a.values[s]!s:<6} bA={ba.values[s]}")
        v = disc_valuation(rd, subgroup(grp, (0,)))
        print(f"   v(disc K'/K) = {v}")
        for m in (trivial_module(grp, rd.p), regular_module(grp, rd.p)):
            c = conductor(m, rd)
            f = artin_conductor(rd, module_character(m))
            print(f"   c({m.name}) = {c}   artin = {f}")
        print()


if __name__ == "__main__":
    main()
