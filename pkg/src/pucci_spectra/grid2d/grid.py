"""Uniform Cartesian grids with wide directional stencils.

Directions are primitive lattice vectors (closed under quarter turns), the
smallest family with at least the requested count: 4, 8, 16, 24, ...
Directional second differences then hit lattice nodes exactly in the
interior, which keeps the scheme monotone and second-order consistent;
arms that leave the domain are shortened to the analytic boundary
intersection (Shortley-Weller).
"""
import math
from dataclasses import dataclass, field as dfield

import numpy as np

from ..errors import GridError, InputError
from .domains import DomainSpec


def _primitive_directions(width):
    dirs = []
    for aa in range(-width, width + 1):
        for bb in range(width + 1):
            if (aa, bb) == (0, 0) or max(abs(aa), abs(bb)) > width:
                continue
            if bb == 0 and aa <= 0:
                continue
            if math.gcd(abs(aa), abs(bb)) != 1:
                continue
            dirs.append((aa, bb))
    dirs.sort(key=lambda z: math.atan2(z[1], z[0]) % math.pi)
    return dirs


@dataclass(frozen=True)
class StencilConfig:
    """Directional stencil: lattice realization of K half-circle directions."""

    num_directions: int = 16

    def __post_init__(self):
        if self.num_directions < 2:
            raise InputError("need at least 2 stencil directions")

    @property
    def directions(self):
        width = 1
        while len(_primitive_directions(width)) < self.num_directions:
            width += 1
            if width > 24:
                raise InputError("stencil direction count too large")
        return _primitive_directions(width)

    @property
    def angles(self):
        return [math.atan2(b, a) % math.pi for a, b in self.directions]

    @property
    def width(self):
        return max(max(abs(a), abs(b)) for a, b in self.directions)


class Grid2D:
    """Immutable grid data: node classification, stencil arms, coefficients.

    For interior node i and direction k the second difference is
        d2[i, k] = cp[i, k] * u_plus + cm[i, k] * u_minus + cdiag[i, k] * u_i
    where u_plus/minus are neighbor values (0 when the arm was shortened to
    the boundary, indices nbr_plus/minus == -1).
    """

    def __init__(self, dom, h, stencil, offset=(0.0, 0.0)):
        self.dom = dom
        self.h = float(h)
        self.stencil = stencil
        self.offset = (float(offset[0]), float(offset[1]))
        self._build()

    def _build(self):
        dom, h = self.dom, self.h
        xmin, xmax, ymin, ymax = dom.bounding_box()
        pad = self.stencil.width + 1
        ox, oy = self.offset
        i_lo = int(math.floor((xmin - ox) / h)) - pad
        i_hi = int(math.ceil((xmax - ox) / h)) + pad
        j_lo = int(math.floor((ymin - oy) / h)) - pad
        j_hi = int(math.ceil((ymax - oy) / h)) + pad
        self.i0, self.j0 = i_lo, j_lo
        self.nx = i_hi - i_lo + 1
        self.ny = j_hi - j_lo + 1
        ii, jj = np.meshgrid(np.arange(i_lo, i_hi + 1),
                             np.arange(j_lo, j_hi + 1), indexing="ij")
        xx = ox + ii * h
        yy = oy + jj * h
        inside = dom.contains(xx, yy)
        self.idx_map = np.full((self.nx, self.ny), -1, dtype=np.int32)
        self.idx_map[inside] = np.arange(int(inside.sum()), dtype=np.int32)
        self.interior_ij = np.stack([ii[inside], jj[inside]], axis=1)
        self.x = xx[inside]
        self.y = yy[inside]
        self.n_interior = len(self.x)
        if self.n_interior == 0:
            raise GridError("grid too coarse: no interior nodes")

        dirs = self.stencil.directions
        K = len(dirs)
        n = self.n_interior
        self.dir_vectors = np.asarray(dirs, dtype=np.int64)
        self.nbr_plus = np.empty((n, K), dtype=np.int32)
        self.nbr_minus = np.empty((n, K), dtype=np.int32)
        self.s_plus = np.ones((n, K))
        self.s_minus = np.ones((n, K))
        self.cp = np.empty((n, K))
        self.cm = np.empty((n, K))
        self.cdiag = np.empty((n, K))
        li = self.interior_ij[:, 0] - i_lo
        lj = self.interior_ij[:, 1] - j_lo
        for k, (za, zb) in enumerate(dirs):
            step2 = (za * za + zb * zb) * h * h
            for sgn, nbr, sfrac in ((1, self.nbr_plus, self.s_plus),
                                    (-1, self.nbr_minus, self.s_minus)):
                dx, dy = sgn * za * h, sgn * zb * h
                s = dom.first_exit(self.x, self.y, dx, dy)
                cut = np.isfinite(s) & (s <= 1.0)
                nidx = self.idx_map[li + sgn * za, lj + sgn * zb]
                nbr[:, k] = np.where(cut, -1, nidx)
                sfrac[:, k] = np.where(cut, s, 1.0)
                # uncut arms must land on interior nodes of the same lattice
                if np.any(~cut & (nidx < 0)):
                    bad = np.where(~cut & (nidx < 0))[0][0]
                    raise GridError(
                        f"arm from node {bad} direction {(za, zb)} landed on "
                        "an exterior node without crossing the boundary")
            sp, sm = self.s_plus[:, k], self.s_minus[:, k]
            self.cp[:, k] = 2.0 / (sp * (sp + sm)) / step2
            self.cm[:, k] = 2.0 / (sm * (sp + sm)) / step2
            self.cdiag[:, k] = -2.0 / (sp * sm) / step2

        # axis direction columns, used by near-boundary queries
        self.k_axis_x = dirs.index((1, 0))
        self.k_axis_y = dirs.index((0, 1))

    # -- node helpers ----------------------------------------------------
    def near_boundary(self):
        """Nodes within one h of the boundary along a coordinate axis."""
        kx, ky = self.k_axis_x, self.k_axis_y
        return ((self.s_plus[:, kx] < 1.0) | (self.s_minus[:, kx] < 1.0) |
                (self.s_plus[:, ky] < 1.0) | (self.s_minus[:, ky] < 1.0))

    def index_at(self, i, j):
        """Interior index of lattice node (i, j), -1 if exterior/outside."""
        i = np.asarray(i) - self.i0
        j = np.asarray(j) - self.j0
        ok = (i >= 0) & (i < self.nx) & (j >= 0) & (j < self.ny)
        out = np.where(ok, self.idx_map[np.clip(i, 0, self.nx - 1),
                                        np.clip(j, 0, self.ny - 1)], -1)
        return out

    def value_at_nodes(self, values, i, j, fill=0.0):
        idx = self.index_at(i, j)
        return np.where(idx >= 0, values[np.clip(idx, 0, None)], fill)


@dataclass
class ScalarField:
    """Real values on the interior nodes; boundary values are implicitly 0."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if len(self.values) != self.grid.n_interior:
            raise GridError("field length does not match the grid")

    def copy(self):
        return ScalarField(self.grid, self.values.copy())

    @property
    def norm_inf(self):
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


def build_grid(dom, h, stencil=None, min_interior=1, offset=(0.0, 0.0)):
    """Classify lattice nodes and precompute stencil arms for a domain."""
    if h <= 0.0:
        raise InputError("h must be positive")
    grid = Grid2D(dom, h, stencil or StencilConfig(), offset)
    if grid.n_interior < min_interior:
        raise GridError(f"grid too coarse: {grid.n_interior} interior nodes, "
                        f"need {min_interior}")
    return grid


def const_field(grid, value=0.0):
    return ScalarField(grid, np.full(grid.n_interior, float(value)))


def field_from_function(grid, fn):
    return ScalarField(grid, np.asarray(fn(grid.x, grid.y), dtype=float))


def sample_radial_profile(profile, grid):
    """Radial profile evaluated at the grid nodes (linear interpolation)."""
    r = np.hypot(grid.x, grid.y)
    return ScalarField(grid, np.interp(r, profile.radii, profile.values))


# -- snapshot format ------------------------------------------------------
def save_field(field, path):
    """Plain-text snapshot: header then `i j x y value` per interior node."""
    g = field.grid
    lines = [f"h={g.h:.17g} nx={g.nx} ny={g.ny} kind={g.dom.kind}"]
    for (i, j), x, y, v in zip(g.interior_ij, g.x, g.y, field.values):
        lines.append(f"{i} {j} {x:.17g} {y:.17g} {v:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_snapshot(path):
    """Parse a snapshot file into header fields plus node arrays."""
    with open(path) as fh:
        header = fh.readline().split()
        meta = dict(kv.split("=", 1) for kv in header)
        rows = [ln.split() for ln in fh if ln.strip()]
    ij = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64)
    xy = np.array([[float(r[2]), float(r[3])] for r in rows])
    vals = np.array([float(r[4]) for r in rows])
    return {"h": float(meta["h"]), "nx": int(meta["nx"]), "ny": int(meta["ny"]),
            "kind": meta["kind"], "ij": ij, "xy": xy, "values": vals}


def field_from_snapshot(grid, snap):
    """Rebind snapshot values onto a freshly built grid via lattice indices."""
    idx = grid.index_at(snap["ij"][:, 0], snap["ij"][:, 1])
    if np.any(idx < 0) or len(idx) != grid.n_interior:
        raise GridError("snapshot does not match the grid layout")
    vals = np.empty(grid.n_interior)
    vals[idx] = snap["values"]
    return ScalarField(grid, vals)
