#!/usr/bin/env python3
"""Sandwich check on the squared-distance matrix.

Writes ctilde_bounds.csv (t, sigma_ratio, fiadi_error, bound) into
--out: measured trailing singular values, the error of the explicit
rank-t approximant, and the a-priori bound curve at each triangular t.
Override --n, --z0, --eta, --seed as needed.
"""
import sys

from lrsylv.cli import main

if __name__ == "__main__":
    sys.exit(main(["--experiment", "ctilde-bounds", *sys.argv[1:]]))
