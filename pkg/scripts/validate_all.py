#!/usr/bin/env python3
"""One-shot validation sweep across every solver and bound family.

Writes validate_all.csv (check, measured, threshold, status) into
--out and exits nonzero if any row fails.  This is the quick smoke
test for a fresh install; the full guarantees live in the test suite.
"""
import sys

from lrsylv.cli import main

if __name__ == "__main__":
    sys.exit(main(["--experiment", "validate-all", *sys.argv[1:]]))
