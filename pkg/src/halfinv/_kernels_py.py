"""NumPy implementations of the hot numerical kernels.

Three entry points, shared with the compiled extension in _kernels.pyx:

* shoot_classical -- fixed-step classical RK4 on the quasi-derivative
  system u' = s*u + v, v' = -s*(s*u + v) - z*u, batched over z = lambda**2;
* shoot_rotating  -- the same system integrated in the rotating frame of
  the free equation (exact for sigma = 0), used where the spectral
  parameter is large;
* goursat_sweep   -- one successive-approximation sweep of the
  characteristic-variable integral equation for the transformation kernel.

The NumPy versions vectorize over the spectral batch (shooting) and over
the whole triangle (Goursat) so per-step Python overhead amortizes.
"""

import numpy as np


def shoot_classical(sig_half, z, h):
    """Integrate the quasi-derivative system for a batch of z values.

    Parameters
    ----------
    sig_half : (2n-1,) array
        sigma at the grid nodes and midpoints (spacing h/2).
    z : (m,) array
        Spectral parameters lambda**2; any sign, 0 allowed.
    h : float
        Grid step.

    Returns
    -------
    U, V : (m, n) arrays
        Trajectories of (u, v) = (y, y' - sigma*y) at the nodes, with
        u(0) = 1, v(0) = 0.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    sig_half = np.asarray(sig_half, dtype=float)
    n = (sig_half.size + 1) // 2
    m = z.size
    U = np.empty((m, n))
    V = np.empty((m, n))
    u = np.ones(m)
    v = np.zeros(m)
    U[:, 0] = u
    V[:, 0] = v
    for i in range(n - 1):
        s0 = sig_half[2 * i]
        s1 = sig_half[2 * i + 1]
        s2 = sig_half[2 * i + 2]
        du1 = s0 * u + v
        dv1 = -s0 * du1 - z * u
        ua = u + 0.5 * h * du1
        va = v + 0.5 * h * dv1
        du2 = s1 * ua + va
        dv2 = -s1 * du2 - z * ua
        ub = u + 0.5 * h * du2
        vb = v + 0.5 * h * dv2
        du3 = s1 * ub + vb
        dv3 = -s1 * du3 - z * ub
        uc = u + h * du3
        vc = v + h * dv3
        du4 = s2 * uc + vc
        dv4 = -s2 * du4 - z * uc
        u = u + (h / 6.0) * (du1 + 2.0 * du2 + 2.0 * du3 + du4)
        v = v + (h / 6.0) * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4)
        U[:, i + 1] = u
        V[:, i + 1] = v
    return U, V


def free_propagator(z, xi):
    """Entries c = cos(lambda*xi), s = sin(lambda*xi)/lambda of the free
    fundamental matrix [[c, s], [-z*s, c]], as entire functions of z.

    z : (m,) array, any sign; xi : (p,) array of nonnegative offsets.
    Returns (c, s) of shape (m, p).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    xi = np.asarray(xi, dtype=float)
    t = np.multiply.outer(z, xi * xi)  # (lambda*xi)**2, signed
    lam = np.sqrt(np.abs(z))
    arg = np.multiply.outer(lam, xi)
    small = np.abs(t) < 1e-8
    # ratio r = sin(lambda*xi)/(lambda*xi), so s = r*xi works for all z
    c = np.empty_like(t)
    r = np.empty_like(t)
    mpos = ~small & (z > 0.0)[:, None]
    mneg = ~small & (z < 0.0)[:, None]
    c[mpos] = np.cos(arg[mpos])
    r[mpos] = np.sin(arg[mpos]) / arg[mpos]
    c[mneg] = np.cosh(arg[mneg])
    r[mneg] = np.sinh(arg[mneg]) / arg[mneg]
    # series in t near 0; truncation error < 1e-34 at the threshold
    ts = t[small]
    c[small] = 1.0 - ts / 2.0 + ts * ts / 24.0 - ts ** 3 / 720.0
    r[small] = 1.0 - ts / 6.0 + ts * ts / 120.0 - ts ** 3 / 5040.0
    return c, r * xi[None, :]


def _rotating_group(sig_half, z, h, ns, n):
    # integrate one group sharing the substep count ns
    m = z.size
    hs = h / ns
    q_count = 2 * ns * (n - 1) + 1
    xi = 0.5 * hs * np.arange(q_count)
    half = 0.5 * h * np.arange(2 * n - 1)
    sig = np.interp(xi, half, sig_half)
    c, s = free_propagator(z, xi)
    U = np.empty((m, n))
    V = np.empty((m, n))
    w1 = np.ones(m)
    w2 = np.zeros(m)
    U[:, 0] = 1.0
    V[:, 0] = 0.0

    def omega_apply(q, a1, a2):
        sg = sig[q]
        cp = c[:, q]
        sp = s[:, q]
        cc = cp * cp
        ss = sp * sp
        cs = cp * sp
        o11 = sg * cc + sg * sg * cs - z * sg * ss
        o12 = 2.0 * sg * cs + sg * sg * ss
        o21 = 2.0 * z * sg * cs - sg * sg * cc
        return o11 * a1 + o12 * a2, o21 * a1 - o11 * a2

    for i in range(n - 1):
        for r in range(ns):
            q0 = 2 * ns * i + 2 * r
            k1a, k1b = omega_apply(q0, w1, w2)
            k2a, k2b = omega_apply(q0 + 1, w1 + 0.5 * hs * k1a,
                                   w2 + 0.5 * hs * k1b)
            k3a, k3b = omega_apply(q0 + 1, w1 + 0.5 * hs * k2a,
                                   w2 + 0.5 * hs * k2b)
            k4a, k4b = omega_apply(q0 + 2, w1 + hs * k3a, w2 + hs * k3b)
            w1 = w1 + (hs / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
            w2 = w2 + (hs / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        q = 2 * ns * (i + 1)
        U[:, i + 1] = c[:, q] * w1 + s[:, q] * w2
        V[:, i + 1] = -z * s[:, q] * w1 + c[:, q] * w2
    return U, V


_PHASE_PER_STEP = 0.5


def substep_counts(z, h):
    """Substeps per grid step so the free phase advance lambda*h/ns stays
    below _PHASE_PER_STEP; plain RK4 resonates when lambda*h nears pi."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    lam = np.sqrt(np.abs(z))
    return np.maximum(1, np.ceil(lam * h / _PHASE_PER_STEP)).astype(np.int64)


def shoot_rotating(sig_half, z, h):
    """Same contract as shoot_classical, integrated in the rotating frame.

    With E(xi) the free fundamental matrix, w := E(-xi) (u, v) satisfies
    w' = Omega(xi) w where Omega = E(-xi) B E(xi), B = [[s, 0], [-s*s, -s]].
    RK4 is applied to w, which is constant when sigma = 0, so the free
    problem is integrated exactly.  Omega itself oscillates at frequency
    2*lambda, so steps are subdivided to keep lambda*h_sub bounded; sigma
    at substep points comes from linear interpolation on the half-grid.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    sig_half = np.asarray(sig_half, dtype=float)
    n = (sig_half.size + 1) // 2
    nsub = substep_counts(z, h)
    U = np.empty((z.size, n))
    V = np.empty((z.size, n))
    for ns in np.unique(nsub):
        sel = np.nonzero(nsub == ns)[0]
        Ug, Vg = _rotating_group(sig_half, z[sel], h, int(ns), n)
        U[sel] = Ug
        V[sel] = Vg
    return U, V


def goursat_sweep(a, qmat, forcing, h):
    """One sweep a -> F(a) of the kernel integral equation.

    On the triangle 0 <= v <= u (indices j <= i, spacing h):

        F(a)(u,v) = -1/4 * int_v^u dal int_0^v q0((al-be)/2) a(al,be) dbe
                    -1/2 * int_0^v dal int_0^al q0((al-be)/2) a(al,be) dbe
                    + forcing(u,v)

    qmat holds q0((u_i - v_j)/2) on the lower triangle (zeros above), so
    g = qmat * a needs no masking; all integrals are cumulative trapezoids.
    """
    m = a.shape[0]
    g = qmat * a
    # C[i, j] = int_0^{v_j} g(u_i, be) dbe
    C = np.empty_like(g)
    C[:, 0] = 0.0
    np.cumsum((g[:, 1:] + g[:, :-1]) * (0.5 * h), axis=1, out=C[:, 1:])
    # row integrals along alpha; entries above the diagonal of C equal
    # C[i, i] (g vanishes there), which is what the alpha-integrals need
    Ucum = np.empty_like(C)
    Ucum[0, :] = 0.0
    np.cumsum((C[1:, :] + C[:-1, :]) * (0.5 * h), axis=0, out=Ucum[1:, :])
    udiag = Ucum[np.arange(m), np.arange(m)]
    term1 = -0.25 * (Ucum - udiag[None, :])
    # D[p] = C[p, p] = int_0^{al_p} g(al_p, be) dbe
    D = C[np.arange(m), np.arange(m)]
    CD = np.empty(m)
    CD[0] = 0.0
    np.cumsum((D[1:] + D[:-1]) * (0.5 * h), out=CD[1:])
    out = term1 - 0.5 * CD[None, :] + forcing
    return np.tril(out)
