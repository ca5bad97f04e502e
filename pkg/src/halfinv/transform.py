"""Transformation-operator kernel l0(x,t) on the half interval and the
mixed-data function phi0.

Two independent constructions of the kernel:

* goursat_kernel: q0 = sigma0' must exist in L2. The hyperbolic problem
  l_xx = l_tt - q0(t) l, l(x,x) = -1/2 * int_0^x q0, l_t(x,0) = 0 is
  rewritten in characteristic variables u = x+t, v = x-t and solved by
  successive approximation of the resulting Volterra-type integral
  equation.  Anchors the primitive at sigma0(0) = 0.
* collocation_kernel: needs only pointwise values of sigma0, so it covers
  primitives whose derivative is not a function.  Imposes the defining
  identity cos(lambda x) = y0(x,lambda) + int_0^x l(x,t) y0(t,lambda) dt
  at the half-interval cosine frequencies and solves each row by least
  squares.

Agreement of the two on smooth inputs is the correctness evidence for
collocation on rough ones.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import cho_factor, cho_solve, get_lapack_funcs

from ._backend import goursat_sweep, shoot_rotating
from .core import GridSpec, SampledFunction
from .errors import ConfigError, IllConditioned, NoConvergence


class KernelTriangle:
    """Lower-triangular table l(x_i, t_j), t_j <= x_i, on grid on [0,X]."""

    def __init__(self, grid, values):
        self.grid = grid
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (grid.n_points, grid.n_points):
            raise ConfigError("kernel table shape does not match the grid")

    def row(self, i):
        return self.values[i, : i + 1]

    def diagonal(self):
        return np.diag(self.values).copy()


_SWEEP_TOL = 1e-12
_SWEEP_MAX = 50


def goursat_kernel(q0, grid):
    """Kernel of the transformation operator for sigma0 = int_0^x q0.

    q0 is sampled/evaluable on [0, X]; the returned triangle lives on
    `grid` (uniform on [0, X]).  Successive approximation, sup-change
    below 1e-12 or NoConvergence after 50 sweeps.
    """
    if grid.a != 0.0:
        raise ConfigError("kernel grids must start at 0")
    n = grid.n_points
    h = grid.step
    m = 2 * n - 1
    # characteristic triangle on [0, 2X] has the same spacing h
    half = grid.half_nodes()
    qhalf = np.asarray(q0.eval(half), dtype=float)
    sig_half = np.concatenate(([0.0], np.cumsum(0.25 * h * (qhalf[1:] + qhalf[:-1]))))
    forcing = np.tril(-0.5 * (sig_half[:, None] + sig_half[None, :]))
    idx = np.subtract.outer(np.arange(m), np.arange(m))
    qmat = np.where(idx >= 0, qhalf[np.clip(idx, 0, m - 1)], 0.0)

    a = forcing.copy()
    for _ in range(_SWEEP_MAX):
        a_new = goursat_sweep(a, qmat, forcing, h)
        change = np.max(np.abs(a_new - a))
        a = a_new
        if change <= _SWEEP_TOL:
            break
    else:
        raise NoConvergence(
            "kernel iteration did not settle in %d sweeps; q0 is far from "
            "the perturbative regime" % _SWEEP_MAX)

    ii, jj = np.tril_indices(n)
    values = np.zeros((n, n))
    values[ii, jj] = a[ii + jj, ii - jj]
    return KernelTriangle(grid, values)


def _filon_moments(lams, h):
    """Hat-function moments against the local solution basis on one cell.

    C0 = int_0^h cos(lam*t) dt          S0 = int_0^h sin(lam*t)/lam dt
    C1 = int_0^h (t/h) cos(lam*t) dt    S1 = int_0^h (t/h) sin(lam*t)/lam dt

    Series below lam*h = 1e-4: the closed forms lose all digits to
    cancellation there (and divide by zero at lam = 0).
    """
    t = lams * h
    small = np.abs(t) < 1e-4
    tb = np.where(small, 1.0, t)
    lb = tb / h
    st, ct = np.sin(tb), np.cos(tb)
    t2 = t * t
    C0 = np.where(small, h * (1.0 - t2 / 6.0), st / lb)
    S0 = np.where(small, h * h * (0.5 - t2 / 24.0), (1.0 - ct) / (lb * lb))
    C1 = np.where(small, h * (0.5 - t2 / 8.0), (ct + tb * st - 1.0) / (lb * lb * h))
    S1 = np.where(small, h * h * (1.0 / 3.0 - t2 / 30.0),
                  (st - tb * ct) / (lb * lb * lb * h))
    return C0, S0, C1, S1


def _row_solve(i, Gfull, Ccross, dl, Wfull, Wl, b, pocon):
    y = np.empty(i + 1)
    y[:i] = Wfull[:, :i].T @ b
    y[i] = Wl[:, i] @ b
    G = np.empty((i + 1, i + 1))
    G[:i, :i] = Gfull[:i, :i]
    G[:i, i] = Ccross[:i, i]
    G[i, :i] = Ccross[:i, i]
    G[i, i] = dl[i]
    # symmetric Jacobi scaling; pure change of units, not a regularizer
    d = np.sqrt(np.diag(G))
    if np.any(d <= 0.0) or not np.all(np.isfinite(d)):
        raise IllConditioned("row %d normal equations degenerate" % i)
    Ge = G / np.outer(d, d)
    anorm = np.abs(Ge).sum(axis=0).max()
    try:
        fac = cho_factor(Ge, lower=False)
    except np.linalg.LinAlgError:
        raise IllConditioned("row %d normal equations not positive definite" % i)
    rcond, info = pocon(fac[0], anorm)
    if info != 0 or rcond <= 0.0 or 1.0 / rcond > 1e8:
        raise IllConditioned(
            "row %d condition estimate %.3e exceeds 1e8; increase the "
            "frequency count or refine the grid" % (i, 1.0 / max(rcond, 1e-300)))
    return cho_solve(fac, y / d) / d


def collocation_kernel(sigma0, grid, M=None, threads=1):
    """Kernel from the defining identity at frequencies pi*j/(2X), j <= M.

    Row x_i: unknowns l(x_i, t_0..t_i), treated as nodal values of a
    piecewise-linear function of t.  Plain trapezoid weights are useless
    here: the top frequencies run up to the grid Nyquist rate, where a
    trapezoid sum of l*u no longer resembles the integral, and the least
    squares step dumps that inconsistency into the near-diagonal
    unknowns.  Instead each hat function is integrated against the local
    solution model u(t_k+s) = u_k cos(lam s) + u'_k sin(lam s)/lam in
    closed form (u' = v + sigma0*u from the shooter), which is exact in
    lam and second order in h uniformly over the frequency range.

    Each row's least-squares system is solved through its normal
    equations (no regularization -- ill-conditioning raises instead).
    M defaults to 2*(n_points - 1) + 8: the frequencies must reach the
    Nyquist rate pi/h of the point unknowns or the row Gram degenerates.
    """
    if grid.a != 0.0:
        raise ConfigError("kernel grids must start at 0")
    n = grid.n_points
    h = grid.step
    X = grid.b
    if M is None:
        M = 2 * (n - 1) + 8
    if M < n:
        raise ConfigError("M must be at least the node count of the grid")
    lams = np.pi * np.arange(M + 1) / (2.0 * X)
    sh = np.asarray(sigma0.eval(grid.half_nodes()), dtype=float)
    U, V = shoot_rotating(sh, lams * lams, h)
    Up = V + sh[::2][None, :] * U
    cosmat = np.cos(np.outer(lams, grid.nodes))

    C0, S0, C1, S1 = _filon_moments(lams, h)
    # Wl[:,k]: weight of unknown k through its left cell, Wr through its
    # right cell.  A full interior hat gets both; the t = 0 end only the
    # right one and the diagonal t = x_i only the left one.
    Wl = np.zeros_like(U)
    Wl[:, 1:] = C1[:, None] * U[:, :-1] + S1[:, None] * Up[:, :-1]
    Wfull = Wl.copy()
    Wfull[:, :-1] += (C0 - C1)[:, None] * U[:, :-1] + (S0 - S1)[:, None] * Up[:, :-1]
    Gfull = Wfull.T @ Wfull
    Ccross = Wfull.T @ Wl
    dl = np.sum(Wl * Wl, axis=0)
    (pocon,) = get_lapack_funcs(("pocon",), (Gfull,))

    values = np.zeros((n, n))
    values[0, 0] = -float(sigma0.eval(0.0))

    def fill(i):
        b = cosmat[:, i] - U[:, i]
        values[i, : i + 1] = _row_solve(i, Gfull, Ccross, dl, Wfull, Wl, b, pocon)

    rows = range(1, n)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill, rows))
    else:
        for i in rows:
            fill(i)
    return KernelTriangle(grid, values)


def phi0(sigma0, kern):
    """phi0(2x) = -1/2*sigma0(x) + int_0^x l(x,t)^2 dt, trapezoid rows.

    Returned on the natural uniform grid: n nodes on [0, 2X], which for
    X = 1/2 is exactly the unit interval.
    """
    grid = kern.grid
    n = grid.n_points
    h = grid.step
    s0 = np.asarray(sigma0.eval(grid.nodes), dtype=float)
    vals = np.empty(n)
    for i in range(n):
        row = kern.values[i, : i + 1]
        sq = row * row
        vals[i] = h * (sq.sum() - 0.5 * (sq[0] + sq[-1])) if i else 0.0
    vals -= 0.5 * s0
    out_grid = GridSpec(n, 0.0, 2.0 * grid.b)
    return SampledFunction(out_grid, vals)
