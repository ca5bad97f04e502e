"""Direct spectral problem for the quasi-derivative system.

The equation -(y' - sigma*y)' - sigma*(y' - sigma*y) - sigma**2*y = z*y
is integrated as the first-order system

    u' = sigma*u + v,   v' = -sigma*(sigma*u + v) - z*u,

with u = y, v = y^[1] = y' - sigma*y and u(0) = 1, v(0) = 0.  sigma
enters pointwise only, so rough (L2) primitives need no smoothing.  The
system is polynomial in z = lambda**2, which is what lets the eigenvalue
search continue below z = 0 when the bottom of the spectrum sits there.
"""

import math

import numpy as np

from .core import GridSpec, simpson_weights
from ._backend import shoot_classical
from .errors import BracketFailure, ConfigError, NotAnEigenvalue, NumericalError


class BoundaryParam:
    """Right-endpoint condition: Robin y^[1](1) = h*y(1), or Dirichlet."""

    def __init__(self, kind, h=0.0):
        if kind not in ("robin", "dirichlet"):
            raise ConfigError("boundary kind must be 'robin' or 'dirichlet'")
        self.kind = kind
        self.h = float(h)

    @classmethod
    def robin(cls, h=0.0):
        return cls("robin", h)

    @classmethod
    def dirichlet(cls):
        return cls("dirichlet")

    def __repr__(self):
        if self.kind == "robin":
            return "BoundaryParam.robin(%g)" % self.h
        return "BoundaryParam.dirichlet()"


class Trajectory:
    """Shot solution at the grid nodes: u = y, v = y' - sigma*y."""

    def __init__(self, grid, lam, u, v):
        self.grid = grid
        self.lam = lam
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)


class Eigensystem:
    """Eigenvalue square roots lambda_n and norming constants alpha_n."""

    def __init__(self, lambdas, alphas):
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.alphas = np.asarray(alphas, dtype=float)


def _half_samples(sigma, grid):
    return np.asarray(sigma.eval(grid.half_nodes()), dtype=float)


def _shoot_z(sigma, zs, grid):
    sh = _half_samples(sigma, grid)
    return shoot_classical(sh, np.asarray(zs, dtype=float), grid.step)


def _char_end(U, V, bc):
    if bc.kind == "robin":
        return V[:, -1] - bc.h * U[:, -1]
    return U[:, -1]


def shoot(sigma, lam, grid):
    """Integrate the system at a single real lambda; lambda = 0 is fine."""
    lam = float(lam)
    U, V = _shoot_z(sigma, [lam * lam], grid)
    return Trajectory(grid, lam, U[0], V[0])


def characteristic(sigma, bc, lam, grid):
    """Delta(lambda): zero exactly at the eigenvalues.

    Robin(h): Delta = v(1) - h*u(1); Dirichlet: Delta = u(1).  Accepts a
    scalar or an array of lambda values (one batched integration).
    """
    lams = np.atleast_1d(np.asarray(lam, dtype=float))
    U, V = _shoot_z(sigma, lams * lams, grid)
    vals = _char_end(U, V, bc)
    return float(vals[0]) if np.ndim(lam) == 0 else vals


def _char_z(sigma, bc, zs, grid):
    # characteristic as a function of z = lambda**2 (any sign)
    U, V = _shoot_z(sigma, zs, grid)
    return _char_end(U, V, bc)


def _zeta(z):
    # monotone coordinate sign(z)*sqrt(|z|); equals lambda for z >= 0
    return np.sign(z) * np.sqrt(np.abs(z))


_SCAN_POINTS = 64
_WIDEN = (1.0, 1.7, 2.9)


def eigenvalues(sigma, bc, count, grid):
    """First `count` zeros of the characteristic function.

    Each zero is bracketed in a window around its asymptotic seed (pi*n
    for Robin, pi*(n - 1/2) for Dirichlet), then refined by bisection in
    z = lambda**2 to 1e-10 in lambda.  The n = 0 Robin window continues
    below z = 0; a genuinely negative bottom eigenvalue is reported as an
    error rather than silently clamped.
    """
    if count < 1:
        raise ConfigError("count must be >= 1")
    if bc.kind == "robin":
        seeds = math.pi * np.arange(count)
    else:
        seeds = math.pi * (np.arange(1, count + 1) - 0.5)
    base_w = math.pi / 2.0 - 1e-3

    brackets = []  # (za, zb, fa, fb)
    for k, seed in enumerate(seeds):
        found = None
        for widen in _WIDEN:
            w = base_w * widen
            lam_lo = seed - w
            lam_hi = seed + w
            z_lo = -lam_lo * lam_lo if lam_lo < 0.0 else lam_lo * lam_lo
            z_hi = lam_hi * lam_hi
            zs = np.linspace(z_lo, z_hi, _SCAN_POINTS)
            vals = _char_z(sigma, bc, zs, grid)
            sign_change = np.nonzero(vals[:-1] * vals[1:] <= 0.0)[0]
            if sign_change.size == 0:
                continue
            mid = 0.5 * (zs[sign_change] + zs[sign_change + 1])
            best = sign_change[np.argmin(np.abs(_zeta(mid) - seed))]
            found = (zs[best], zs[best + 1], vals[best], vals[best + 1])
            break
        if found is None:
            raise BracketFailure(
                "no sign change near lambda = %.6g after widening; "
                "grid too coarse for this potential" % seed)
        brackets.append(found)

    za = np.array([b[0] for b in brackets])
    zb = np.array([b[1] for b in brackets])
    fa = np.array([b[2] for b in brackets])
    active = np.arange(count)
    for _ in range(240):
        lam_scale = np.maximum(_zeta(np.maximum(za[active], 0.0)), 0.0)
        tol = np.maximum(2e-10 * lam_scale, 1e-20)
        still = (zb[active] - za[active]) > tol
        active = active[still]
        if active.size == 0:
            break
        zm = 0.5 * (za[active] + zb[active])
        fm = _char_z(sigma, bc, zm, grid)
        left = np.sign(fm) == np.sign(fa[active])
        za[active[left]] = zm[left]
        fa[active[left]] = fm[left]
        zb[active[~left]] = zm[~left]

    z_roots = 0.5 * (za + zb)
    if z_roots[0] < -1e-9:
        raise NumericalError(
            "lowest eigenvalue is negative (z = %.3e); shift the potential "
            "by a constant to make the spectrum nonnegative" % z_roots[0])
    lams = np.sqrt(np.maximum(z_roots, 0.0))
    if np.any(np.diff(lams) <= 0.0):
        raise BracketFailure("bracketing produced non-increasing eigenvalues")
    return lams


def norming_constants(sigma, bc, lams, grid):
    """alpha_n = 1 / ||u_n||^2 for u_n the shot solution scaled to
    u_n(0) = sqrt(2); each lambda must satisfy the boundary condition."""
    lams = np.asarray(lams, dtype=float)
    U, V = _shoot_z(sigma, lams * lams, grid)
    delta = _char_end(U, V, bc)
    bad = np.abs(delta) > 1e-6 * (1.0 + np.abs(lams))
    if np.any(bad):
        i = int(np.nonzero(bad)[0][0])
        raise NotAnEigenvalue(
            "lambda = %.9g: |Delta| = %.3e exceeds tolerance"
            % (lams[i], abs(delta[i])))
    w = simpson_weights(grid)
    norms2 = 2.0 * (U * U) @ w
    return 1.0 / norms2
