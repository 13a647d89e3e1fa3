#!/usr/bin/env python3
"""Decay-constant tables for the dyadic multiplier pieces at d = 3 and 5.

The three normalized columns staying flat in l is the numerical shadow of
the sup-norm and kernel-decay estimates behind the L^2 square-function
bound.
"""

import pathlib

from maxop.multiplier import decay_constants, decay_table_csv

OUT = pathlib.Path(__file__).resolve().parent.parent / "outputs"
OUT.mkdir(exist_ok=True)

for d in (3, 5):
    rows = decay_constants(d, 6)
    path = OUT / f"decay_d{d}.csv"
    decay_table_csv(rows, str(path))
    print(f"d={d}  (written to {path})")
    print("  l    c1        c2        c3")
    for r in rows:
        print(f"  {r.l}  {r.c1:8.5f}  {r.c2:8.5f}  {r.c3:8.5f}")
