#!/usr/bin/env python
"""Stability of periodic Euler-Poisson waves: profile, spectrum, crossings,
indices and verify operations."""

import os
import sys

SOURCE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "src")
sys.path.insert(0, SOURCE_DIR)

from entrypoint import entrypoint  # noqa: E402


if __name__ == "__main__":
    entrypoint()
