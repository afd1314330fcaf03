#!/usr/bin/env python3
"""Timing sweep of the low-rank Poisson solver over grid sizes.

Writes poisson_scaling.csv (n, rhs_rank, seconds) plus a factor bundle
for each grid into --out.  The seconds column is wall-clock and is the
one part of any experiment that is not byte-reproducible.  Pass --rhs
to select a registry right-hand side or point at a .mtx file.
"""
import sys

from lrsylv.cli import main

if __name__ == "__main__":
    sys.exit(main(["--experiment", "poisson-scaling", *sys.argv[1:]]))
