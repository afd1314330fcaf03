#!/usr/bin/env python3
"""Singular-value decay of Cauchy matrices on antipodal disks.

Writes cauchy_decay.csv (k, per-gamma sigma ratios, bound) into --out.
Pass --n, --seed, --out to override the defaults; the internal check
that every measured ratio sits under the bound makes the exit status
meaningful on its own.
"""
import sys

from lrsylv.cli import main

if __name__ == "__main__":
    sys.exit(main(["--experiment", "cauchy-decay", *sys.argv[1:]]))
