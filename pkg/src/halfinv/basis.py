"""Riesz-basis machinery for the perturbed cosine system {cos(lambda_n x)}.

psi_lambda sums the basis-shift function Sigma[cos(lambda_n x) - cos(pi n x)]
with the Coulomb tail folded into Bernoulli-polynomial closed forms, expand
projects onto the basis through the closed-form Gram matrix, and on top of
those sit the solvability certificate (membership_check), the quantitative
local-existence test and the W21 regularity heuristic.
"""

import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve, get_lapack_funcs

from .core import CoefficientSequence, SampledFunction, l2_norm, simpson_weights
from .errors import ConfigError, IllConditioned

_CHUNK = 256


def _tail_partials(y, nmax):
    """Partial sums over n = 1..nmax of the four harmonic tail series.

    P1 = sum sin(ny)/n, P2 = sum cos(ny)/n^2, P3 = sum sin(ny)/n^3,
    P4 = sum cos(ny)/n^4, accumulated in chunks to bound memory.
    """
    P1 = np.zeros_like(y)
    P2 = np.zeros_like(y)
    P3 = np.zeros_like(y)
    P4 = np.zeros_like(y)
    for start in range(1, nmax + 1, _CHUNK):
        ns = np.arange(start, min(start + _CHUNK, nmax + 1), dtype=float)
        ny = np.outer(ns, y)
        sy = np.sin(ny)
        cy = np.cos(ny)
        P1 += (1.0 / ns) @ sy
        P2 += (1.0 / ns ** 2) @ cy
        P3 += (1.0 / ns ** 3) @ sy
        P4 += (1.0 / ns ** 4) @ cy
    return P1, P2, P3, P4


def psi_lambda(lam, grid):
    """psi_Lambda = Sigma_{n>=0} [cos(lambda_n x) - cos(pi n x)] on grid.

    Head terms are summed directly.  A Coulomb tail lambda_n = pi n + c/n
    is split at N*: terms up to N* are summed exactly (in the product form
    -2 sin((pi n + c/2n)x) sin(cx/2n), which does not cancel), and beyond
    N* the Taylor expansion in cx/n through fourth order is summed in
    closed form,

        sum sin(ny)/n   = (pi - y)/2            on (0, 2pi), 0 at the ends
        sum cos(ny)/n^2 = pi^2/6 - pi y/2 + y^2/4
        sum sin(ny)/n^3 = pi^2 y/6 - pi y^2/4 + y^3/12
        sum cos(ny)/n^4 = pi^4/90 - pi^2 y^2/12 + pi y^3/12 - y^4/48

    with y = pi x.  N* is fixed so the fifth-order remainder is below
    1e-12; an exact-pi tail contributes nothing.
    """
    if grid.a != 0.0 or grid.b > 2.0 + 1e-12:
        raise ConfigError("psi_lambda grids live on [0, L] with L <= 2")
    x = grid.nodes
    vals = np.zeros_like(x)
    H = lam.head.size
    for start in range(0, H, _CHUNK):
        ns = np.arange(start, min(start + _CHUNK, H))
        vals += np.sum(np.cos(np.outer(lam.head[ns], x))
                       - np.cos(np.pi * np.outer(ns, x)), axis=0)
    c = lam.c
    if lam.tail_kind != "coulomb" or c == 0.0:
        return SampledFunction(grid, vals)

    nstar = max(H, 8, int(math.ceil(((2.0 * abs(c)) ** 5 * 1e12 / 480.0) ** 0.25)))
    for start in range(H, nstar + 1, _CHUNK):
        ns = np.arange(start, min(start + _CHUNK, nstar + 1), dtype=float)
        big = np.outer(np.pi * ns + 0.5 * c / ns, x)
        small = np.outer(0.5 * c / ns, x)
        vals += -2.0 * np.sum(np.sin(big) * np.sin(small), axis=0)

    y = np.pi * x
    P1, P2, P3, P4 = _tail_partials(y, nstar)
    # the sawtooth series is 0 at x = 0 and x = 2, not the branch value
    S1 = np.where((x < 1e-12) | (x > 2.0 - 1e-12), 0.0, 0.5 * (np.pi - y))
    C2 = np.pi ** 2 / 6.0 - 0.5 * np.pi * y + 0.25 * y * y
    S3 = np.pi ** 2 * y / 6.0 - 0.25 * np.pi * y ** 2 + y ** 3 / 12.0
    C4 = (np.pi ** 4 / 90.0 - np.pi ** 2 * y ** 2 / 12.0
          + np.pi * y ** 3 / 12.0 - y ** 4 / 48.0)
    cx = c * x
    vals += (-cx * (S1 - P1) - 0.5 * cx ** 2 * (C2 - P2)
             + cx ** 3 / 6.0 * (S3 - P3) + cx ** 4 / 24.0 * (C4 - P4))
    return SampledFunction(grid, vals)


def gram_matrix(lam, M):
    """G_ij = int_0^1 cos(lambda_i x) cos(lambda_j x) dx, closed form.

    np.sinc handles every degeneracy exactly: equal frequencies give
    1/2 + sin(2 lambda)/(4 lambda) and the (0,0) entry is 1.
    """
    lams = lam.lambdas(M)
    D = np.subtract.outer(lams, lams)
    S = np.add.outer(lams, lams)
    return 0.5 * (np.sinc(D / np.pi) + np.sinc(S / np.pi))


def expand(g, lam, M):
    """Coefficients of g in {cos(lambda_n x)}_{n<M} and the L2 misfit.

    Normal equations G c = d with d from composite Simpson; the Gram
    condition is estimated and anything past 1e8 raises IllConditioned
    rather than returning garbage coefficients.
    """
    x = g.grid.nodes
    lams = lam.lambdas(M)
    C = np.cos(np.outer(lams, x))
    w = simpson_weights(g.grid)
    d = C @ (w * g.values)
    G = gram_matrix(lam, M)
    (pocon,) = get_lapack_funcs(("pocon",), (G,))
    anorm = np.abs(G).sum(axis=0).max()
    try:
        fac = cho_factor(G, lower=False)
    except np.linalg.LinAlgError:
        raise IllConditioned("basis Gram matrix is not positive definite")
    rcond, info = pocon(fac[0], anorm)
    if info != 0 or rcond <= 0.0 or 1.0 / rcond > 1e8:
        raise IllConditioned(
            "basis Gram condition estimate %.3e exceeds 1e8; the spectrum "
            "is too far from harmonic for this truncation"
            % (1.0 / max(rcond, 1e-300)))
    coeff = cho_solve(fac, d)
    resid = l2_norm(SampledFunction(g.grid, g.values - coeff @ C))
    return coeff, resid


class MembershipReport:
    """Outcome of the Pi_Lambda membership test for phi0."""

    def __init__(self, beta, alpha, min_alpha, solvable, expansion_residual,
                 marginal):
        self.beta = beta
        self.alpha = alpha
        self.min_alpha = min_alpha
        self.solvable = solvable
        self.expansion_residual = expansion_residual
        self.marginal = marginal

    def __repr__(self):
        tag = "solvable" if self.solvable else "unsolvable"
        if self.solvable and self.marginal:
            tag = "solvable (marginal)"
        return ("MembershipReport(%s, min_alpha=%.6g, residual=%.3g)"
                % (tag, self.min_alpha, self.expansion_residual))


_MARGINAL = 0.05


def membership_check(phi0_func, lam, M=None):
    """Expand phi0 - psi_Lambda - 1/2 in the basis; solvable iff all
    alpha_n = 1 + beta_n over the truncation are positive.

    M defaults to head length + 8, capped at 64 (the tail adds nothing:
    beyond the head the basis is exactly harmonic and beta_n = 0 by the
    data model).  min_alpha below 0.05 is flagged marginal: discretization
    error of the expansion could flip such a sign.
    """
    if M is None:
        M = min(lam.head.size + 8, 64)
    psi = psi_lambda(lam, phi0_func.grid)
    g = SampledFunction(phi0_func.grid,
                        phi0_func.values - psi.values - 0.5)
    coeff, resid = expand(g, lam, M)
    alpha = 1.0 + coeff
    min_alpha = float(alpha.min())
    solvable = bool(min_alpha > 0.0)
    return MembershipReport(
        CoefficientSequence(coeff, tail=0.0),
        CoefficientSequence(alpha, tail=1.0),
        min_alpha, solvable, resid,
        solvable and min_alpha < _MARGINAL)


def local_existence_check(q0, lam):
    """Sufficient smallness certificate: ||q0||_L2 <= 1/2 and the full
    l2 norm of (lambda_n - pi n) <= 1/4 guarantee solvability.

    False only means the certificate does not apply, never that the
    problem is unsolvable.
    """
    return bool(l2_norm(q0) <= 0.5 and lam.mu_l2() <= 0.25)


def regularity_diagnostic(report, lam):
    """Heuristic W21 classification from the decay pattern of beta.

    A W21 extension forces beta_n ~ c/n; fit that shape over the head
    (n >= 1) and call the result consistent when the fit residual stays
    within 10% of the head norm.  Never blocks reconstruction.
    """
    # the data model only has exact-pi and coulomb tails, both 1/n shaped
    if lam.tail_kind not in ("exact_pi", "coulomb"):
        return "inconclusive"
    b = report.beta.head[1:]
    if b.size == 0:
        return "consistent-with-W21"
    ns = np.arange(1, b.size + 1, dtype=float)
    c_fit = float((b / ns).sum() / (1.0 / ns ** 2).sum())
    resid = float(np.linalg.norm(b - c_fit / ns))
    if resid <= 0.1 * float(np.linalg.norm(b)):
        return "consistent-with-W21"
    return "inconclusive"
