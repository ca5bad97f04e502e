"""Grids, quadrature, and the data model for potentials and spectra.

Everything downstream works with four carriers: uniform grids with an odd
number of nodes (so composite Simpson applies), functions sampled on such
grids (piecewise-linear between nodes), the primitive sigma of the
potential q = sigma' in one of several representations, and spectra given
as a finite perturbed head followed by an analytic tail model.
"""

import math

import numpy as np

from .errors import ConfigError, PoleReached


class GridSpec:
    """Uniform grid x_i = a + i*(b-a)/(n_points-1), n_points odd and >= 5."""

    def __init__(self, n_points, a=0.0, b=1.0):
        n_points = int(n_points)
        if n_points < 5 or n_points % 2 == 0:
            raise ConfigError(
                "grid needs an odd number of nodes >= 5, got %d" % n_points)
        if not b > a:
            raise ConfigError("empty grid domain [%g, %g]" % (a, b))
        self.n_points = n_points
        self.a = float(a)
        self.b = float(b)
        self.nodes = np.linspace(self.a, self.b, n_points)

    @property
    def step(self):
        return (self.b - self.a) / (self.n_points - 1)

    def half_nodes(self):
        """Nodes plus midpoints: 2*n_points - 1 values at spacing step/2."""
        return np.linspace(self.a, self.b, 2 * self.n_points - 1)

    def refine(self):
        """Grid on the same domain with the step halved."""
        return GridSpec(2 * self.n_points - 1, self.a, self.b)

    def __eq__(self, other):
        return (isinstance(other, GridSpec)
                and self.n_points == other.n_points
                and self.a == other.a and self.b == other.b)

    def __repr__(self):
        return "GridSpec(%d, %g, %g)" % (self.n_points, self.a, self.b)


class SampledFunction:
    """Real function given by its values on a GridSpec.

    Evaluation between nodes is piecewise-linear; outside the domain the
    boundary value is held (np.interp semantics).
    """

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ConfigError("values length %s does not match grid %r"
                              % (values.shape, grid))
        self.grid = grid
        self.values = values

    def eval(self, x):
        return np.interp(x, self.grid.nodes, self.values)

    __call__ = eval


def simpson_weights(grid):
    """Composite Simpson weights h/3 * (1,4,2,...,2,4,1)."""
    w = np.full(grid.n_points, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (grid.step / 3.0)


def trapezoid_weights(grid):
    """Composite trapezoid weights h * (1/2,1,...,1,1/2)."""
    w = np.full(grid.n_points, grid.step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def integrate(f):
    """Composite-Simpson approximation of the integral of f over its domain."""
    return float(simpson_weights(f.grid) @ f.values)


def l2_norm(f):
    """L2 norm of f over its domain, by composite Simpson on f**2."""
    s = simpson_weights(f.grid) @ (f.values * f.values)
    return math.sqrt(max(s, 0.0))


class Primitive:
    """The primitive sigma (an L2 antiderivative of the potential q).

    One of four representations:

    * ``zero``            -- sigma identically 0;
    * ``sampled``         -- a SampledFunction on [0, X];
    * ``antiderivative``  -- sigma(x) = integral of a sampled q from the
                             left endpoint (zero-anchored), evaluated by
                             cumulative trapezoid quadrature;
    * ``example_gamma``   -- the closed family sigma(x) = 2g/(1-gx) - g,
                             0 <= g < 2 (L2 membership needs g < 2).

    Use the classmethod constructors; evaluation is vectorized.
    """

    def __init__(self, kind, sample=None, q=None, gamma=None):
        self.kind = kind
        self.sample = sample
        self.q = q
        self.gamma = gamma

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def sampled(cls, f):
        return cls("sampled", sample=f)

    @classmethod
    def antiderivative_of(cls, q):
        grid = q.grid
        # exact integral of the piecewise-linear interpolant of q
        seg = 0.5 * grid.step * (q.values[1:] + q.values[:-1])
        vals = np.concatenate(([0.0], np.cumsum(seg)))
        return cls("antiderivative", sample=SampledFunction(grid, vals), q=q)

    @classmethod
    def example_gamma(cls, gamma):
        gamma = float(gamma)
        if not 0.0 <= gamma < 2.0:
            raise ConfigError("example family needs 0 <= gamma < 2, got %g"
                              % gamma)
        return cls("example_gamma", gamma=gamma)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(x)
        elif self.kind in ("sampled", "antiderivative"):
            out = self.sample.eval(x)
        else:
            g = self.gamma
            den = 1.0 - g * x
            if np.any(den <= 0.0):
                raise PoleReached(
                    "sigma_gamma pole: gamma*x >= 1 inside the requested "
                    "domain (gamma=%g)" % g)
            out = 2.0 * g / den - g
        return out if out.ndim else float(out)

    __call__ = eval


class SpectralSequence:
    """Spectrum Lambda = (lambda_n): finite head plus an analytic tail.

    head holds lambda_0 < ... < lambda_N; beyond the head either
    lambda_n = pi*n exactly (``exact_pi``) or lambda_n = pi*n + c/n
    (``coulomb``).  mu_n = lambda_n - pi*n is the perturbation sequence.
    """

    def __init__(self, head, tail_kind="exact_pi", c=0.0):
        head = np.asarray(head, dtype=float)
        if head.ndim != 1 or head.size < 1:
            raise ConfigError("spectrum head must be a nonempty 1-d sequence")
        if head[0] < 0.0:
            raise ConfigError("lambda_0 must be nonnegative, got %g" % head[0])
        if np.any(np.diff(head) <= 0.0):
            raise ConfigError("spectrum head must be strictly increasing")
        if tail_kind not in ("exact_pi", "coulomb"):
            raise ConfigError("unknown tail model %r" % tail_kind)
        c = float(c)
        if tail_kind == "exact_pi":
            c = 0.0
        if not c < math.pi:
            # pi*n + c/n must keep increasing for every n >= 1
            raise ConfigError("coulomb constant must satisfy c < pi")
        self.head = head
        self.tail_kind = tail_kind
        self.c = c
        n1 = head.size  # first tail index
        if self._tail_value(n1) <= head[-1]:
            raise ConfigError("head does not increase into the tail")

    @classmethod
    def exact_pi(cls, head):
        return cls(head, "exact_pi")

    @classmethod
    def coulomb(cls, head, c):
        return cls(head, "coulomb", c)

    @classmethod
    def harmonic(cls):
        """Lambda = (pi*n): the unperturbed spectrum."""
        return cls([0.0], "exact_pi")

    def _tail_value(self, n):
        return math.pi * n + (self.c / n if n > 0 else 0.0)

    def lambda_at(self, n):
        if n < 0:
            raise ConfigError("negative spectral index")
        if n < self.head.size:
            return float(self.head[n])
        return self._tail_value(n)

    def lambdas(self, count):
        """First `count` values lambda_0..lambda_{count-1} as an array."""
        return np.array([self.lambda_at(n) for n in range(count)])

    def mu_at(self, n):
        return self.lambda_at(n) - math.pi * n

    def mu_l2(self):
        """l2 norm of (mu_n), tail summed in closed form."""
        n = np.arange(self.head.size)
        mu = self.head - math.pi * n
        s = float(mu @ mu)
        if self.tail_kind == "coulomb" and self.c != 0.0:
            ntail = self.head.size  # tail starts here; always >= 1
            k = np.arange(1, ntail)
            s += self.c ** 2 * (math.pi ** 2 / 6.0 - float(np.sum(1.0 / k ** 2)))
        return math.sqrt(s)


class CoefficientSequence:
    """Finite head c_0..c_M plus a constant tail value (1 for alphas)."""

    def __init__(self, head, tail=1.0):
        self.head = np.asarray(head, dtype=float)
        self.tail = float(tail)

    def at(self, n):
        if n < self.head.size:
            return float(self.head[n])
        return self.tail

    def __len__(self):
        return self.head.size
