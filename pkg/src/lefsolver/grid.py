"""Radial meshes, fields on them, and the finite-difference radial Laplacian."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing nodes 0 = r_0 < ... < r_J = R."""

    nodes: np.ndarray
    spacing: str = "custom"

    def __post_init__(self):
        r = np.asarray(self.nodes, dtype=float)
        if r.ndim != 1 or r.size < 3:
            raise PreconditionError("a radial grid needs at least 3 nodes")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise PreconditionError("grid nodes must start at 0 and increase strictly")
        r.setflags(write=False)
        object.__setattr__(self, "nodes", r)

    @classmethod
    def uniform(cls, R, J):
        return cls(np.linspace(0.0, float(R), int(J) + 1), "uniform")

    @classmethod
    def with_spacing(cls, R, dr):
        """Uniform grid with a prescribed step; R must be a multiple of dr."""
        J = int(round(R / dr))
        if not np.isclose(J * dr, R, rtol=1e-12, atol=0):
            raise PreconditionError(f"R={R} is not a multiple of dr={dr}")
        return cls(np.arange(J + 1) * float(dr), "uniform")

    @classmethod
    def graded(cls, R, J, power=2.0):
        """Nodes clustered toward R: r_j = R (1 - (1 - j/J)^power)."""
        s = np.arange(int(J) + 1) / J
        r = R * (1.0 - (1.0 - s) ** power)
        r[0], r[-1] = 0.0, R
        return cls(r, "graded")

    @property
    def R(self):
        return float(self.nodes[-1])

    @property
    def J(self):
        return self.nodes.size - 1

    @property
    def is_uniform(self):
        d = np.diff(self.nodes)
        return bool(np.allclose(d, d[0], rtol=1e-12, atol=0))

    def coarsen(self):
        if self.J % 2:
            raise PreconditionError("coarsening needs an even number of intervals")
        return RadialGrid(self.nodes[::2], self.spacing)

    def refine(self, factor=2):
        r = self.nodes
        fine = [r[:-1] + (r[1:] - r[:-1]) * k / factor for k in range(factor)]
        out = np.empty(self.J * factor + 1)
        for k in range(factor):
            out[k:-1:factor] = fine[k]
        out[-1] = r[-1]
        return RadialGrid(out, self.spacing)

    def prefix_of(self, other):
        """True if self's nodes are the leading nodes of ``other``."""
        n = self.nodes.size
        return other.nodes.size >= n and np.array_equal(other.nodes[:n], self.nodes)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Nodal values of a radial function in R^N; ``values[-1]`` is the Dirichlet value."""

    grid: RadialGrid
    values: np.ndarray
    N: int = 3

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.nodes.shape:
            raise PreconditionError("field values must match the grid")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def r(self):
        return self.grid.nodes

    @property
    def boundary_value(self):
        return float(self.values[-1])

    def gradient(self):
        return kernels.central_gradient(self.r, self.values)

    def laplacian(self):
        return kernels.radial_laplacian(self.r, self.values, self.N)

    def zero_extend(self, grid):
        """Values on a larger grid whose leading nodes coincide with ours."""
        if not self.grid.prefix_of(grid):
            raise PreconditionError("target grid does not extend this field's grid")
        out = np.zeros(grid.nodes.size)
        out[: self.values.size] = self.values
        return RadialField(grid, out, self.N)

    def restrict(self, grid):
        """Values on a grid that is a prefix of ours; the last value is kept as is."""
        if not grid.prefix_of(self.grid):
            raise PreconditionError("target grid is not a prefix of this field's grid")
        return RadialField(grid, self.values[: grid.nodes.size], self.N)

    def at(self, r):
        return np.interp(r, self.r, self.values)


def radial_laplacian(u):
    """Discrete Lap u = u'' + (N-1)/r u' (N u''(0) at the centre) as a field.

    The operator is not defined at the Dirichlet node; its entry there is the
    linear extrapolation of the two preceding nodes.
    """
    lap = u.laplacian()
    r = u.r
    lap[-1] = lap[-2] + (lap[-2] - lap[-3]) * (r[-1] - r[-2]) / (r[-2] - r[-3])
    return RadialField(u.grid, lap, u.N)


def dirichlet_operator(grid, N):
    """Tridiagonal coefficients of -Lap_h on the unknowns r_0..r_{J-1}.

    Returns (lower, diag, upper, coupling) where ``coupling`` multiplies the
    prescribed boundary value u_J in the last row.
    """
    r = grid.nodes
    J = grid.J
    lower = np.zeros(J)
    diag = np.zeros(J)
    upper = np.zeros(J)
    h1 = r[1] - r[0]
    diag[0] = 2.0 * N / h1 ** 2
    upper[0] = -2.0 * N / h1 ** 2
    hm = r[1:J] - r[0:J - 1]
    hp = r[2:J + 1] - r[1:J]
    rc = r[1:J]
    k = (N - 1) / rc
    lower[1:] = -2.0 / (hm * (hm + hp)) + k * hp / (hm * (hm + hp))
    diag[1:] = 2.0 / (hm * hp) - k * (hp - hm) / (hm * hp)
    upper[1:] = -2.0 / (hp * (hm + hp)) - k * hm / (hp * (hm + hp))
    coupling = upper[-1]
    upper[-1] = 0.0
    return lower, diag, upper, coupling


def solve_poisson(grid, N, rhs, boundary=0.0, operator=None):
    """Solve -Lap_h u = rhs at r_0..r_{J-1} with u(R) = boundary (one Thomas sweep)."""
    lower, diag, upper, coupling = operator or dirichlet_operator(grid, N)
    b = np.array(rhs[: grid.J], dtype=float)
    b[-1] -= coupling * boundary
    u = np.empty(grid.J + 1)
    u[:-1] = kernels.tridiag_solve(lower, diag, upper, b)
    u[-1] = boundary
    return u
