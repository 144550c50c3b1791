"""Cached Gauss-Legendre nodes (computing them dominates small quadratures)."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def nodes(n):
    xs, ws = np.polynomial.legendre.leggauss(n)
    xs.setflags(write=False)
    ws.setflags(write=False)
    return xs, ws
