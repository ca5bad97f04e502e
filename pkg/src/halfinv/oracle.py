"""Closed-form one-parameter family used as ground truth in the tests.

For 0 <= gamma < 2 the potential primitive

    sigma_gamma(x) = 2*gamma/(1 - gamma*x) - gamma

has transformation kernel l(x,t) = -gamma/(1 - gamma*t), GLM kernel
k(x,t) = gamma/(1 - gamma*x), boundary constant h = -gamma**2/(1-gamma),
and (for gamma < 1) spectrum {(pi*n)**2} with explicit eigenfunctions.
Everything here is an exact formula; no quadrature, no iteration.
"""

import math

import numpy as np

from .errors import PoleReached


def sigma_gamma(gamma, x):
    """sigma(x) = 2*gamma/(1 - gamma*x) - gamma.  Pole at x = 1/gamma."""
    x = np.asarray(x, dtype=float)
    den = 1.0 - gamma * x
    if np.any(den <= 0.0):
        raise PoleReached("sigma_gamma evaluated at or past x = 1/gamma")
    out = 2.0 * gamma / den - gamma
    return float(out) if out.ndim == 0 else out


def kernel_gamma(gamma, x, t, kind="k"):
    """Transformation kernels of the family.

    kind="k": k(x,t) = gamma/(1 - gamma*x), the GLM solution;
    kind="l": l(x,t) = -gamma/(1 - gamma*t), the inverse kernel.
    Constant in the other triangle variable in both cases.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if kind == "k":
        out = gamma / (1.0 - gamma * x) + 0.0 * t
    elif kind == "l":
        out = -gamma / (1.0 - gamma * t) + 0.0 * x
    else:
        raise ValueError("kind must be 'k' or 'l'")
    return float(out) if out.ndim == 0 else out


def h_gamma(gamma):
    """Boundary constant h = -gamma**2/(1 - gamma).  Needs gamma < 1."""
    return -gamma * gamma / (1.0 - gamma)


def eigenfunction_gamma(gamma, n, x):
    """Shooting solution at lambda = pi*n, normalized to w(0) = 1.

    w_0(x) = 1/(1 - gamma*x);
    w_n(x) = cos(pi*n*x) + (gamma/(pi*n)) * sin(pi*n*x)/(1 - gamma*x).
    """
    x = np.asarray(x, dtype=float)
    den = 1.0 - gamma * x
    if np.any(den <= 0.0):
        raise PoleReached("eigenfunction_gamma evaluated at or past x = 1/gamma")
    if n == 0:
        out = 1.0 / den
    else:
        ang = math.pi * n * x
        out = np.cos(ang) + (gamma / (math.pi * n)) * np.sin(ang) / den
    return float(out) if out.ndim == 0 else out


def shoot_solution_gamma(gamma, lam, x):
    """u(x, lambda) = cos(lambda*x) + (gamma/lambda)*sin(lambda*x)/(1-gamma*x),
    the u-component of the shot trajectory at any lambda > 0."""
    x = np.asarray(x, dtype=float)
    den = 1.0 - gamma * x
    if np.any(den <= 0.0):
        raise PoleReached("shoot_solution_gamma evaluated at or past x = 1/gamma")
    out = np.cos(lam * x) + (gamma / lam) * np.sin(lam * x) / den
    return float(out) if out.ndim == 0 else out


def trig_defect(a, b):
    """|cos(a+b) - cos(a) + b*sin(a)|, the first-order Taylor defect of
    the cosine; bounded by b**2/sqrt(3)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.abs(np.cos(a + b) - np.cos(a) + b * np.sin(a))
    return float(out) if out.ndim == 0 else out
