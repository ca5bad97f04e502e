"""Shared bits for the test suite: random trig data and constant phi."""

import numpy as np

from halfinv.core import GridSpec, SampledFunction, l2_norm
from halfinv.glm import PhiExtension


def rand_trig(rng, grid, cap, kmax=6):
    """Random cosine polynomial on the grid, L2 norm rescaled into (0, cap]."""
    c = rng.uniform(-1.0, 1.0, kmax + 1)
    x = grid.nodes
    vals = np.full_like(x, c[0])
    for k in range(1, kmax + 1):
        vals += c[k] * np.cos(2.0 * np.pi * k * (x - grid.a) / (grid.b - grid.a))
    f = SampledFunction(grid, vals)
    s = cap * rng.uniform(0.3, 1.0) / max(l2_norm(f), 1e-30)
    return SampledFunction(grid, s * vals)


def const_phi(value, n=513):
    """PhiExtension identically equal to `value` on [0, 2]."""
    g = GridSpec(n, 0.0, 2.0)
    return PhiExtension(SampledFunction(g, np.full(n, float(value))), value)
