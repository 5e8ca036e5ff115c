"""Symmetry certification and nodal analysis of planar fields.

Reflection differences w_e = u - u o sigma_e drive the foliated Schwarz
classification: a field is FSS with axis p exactly when w_e is one-signed
on every half-domain B(e), nonnegative for e . p >= 0.  Angular
derivatives, discrete subsolution residuals and nodal-set reports supply
the remaining certificates; two-subdomain eigenvalue estimators scan
parametric cut families (caps, concentric splits).
"""
import math
from dataclasses import dataclass, field as dfield
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from .errors import DomainError, InputError
from .grid2d.domains import DomainSpec, _unit
from .grid2d.eigen import principal_eigenvalue_grid
from .grid2d.grid import ScalarField, build_grid
from .grid2d.operators import discrete_pucci


# ---------------------------------------------------------------------------
# interpolation helpers
# ---------------------------------------------------------------------------
def _lattice_coords(grid, px, py):
    gx = (px - grid.offset[0]) / grid.h - grid.i0
    gy = (py - grid.offset[1]) / grid.h - grid.j0
    return gx, gy


def _lattice_array(grid, values):
    arr = np.zeros((grid.nx, grid.ny))
    arr[grid.idx_map >= 0] = values[grid.idx_map[grid.idx_map >= 0]]
    return arr


def interp_bilinear(field, px, py):
    """Bilinear interpolation with zero extension; also reports whether the
    surrounding cell is entirely made of interior nodes."""
    g = field.grid
    gx, gy = _lattice_coords(g, np.asarray(px, float), np.asarray(py, float))
    ix = np.clip(np.floor(gx).astype(int), 0, g.nx - 2)
    iy = np.clip(np.floor(gy).astype(int), 0, g.ny - 2)
    fx, fy = gx - ix, gy - iy
    arr = _lattice_array(g, field.values)
    inter = g.idx_map >= 0
    v00, v10 = arr[ix, iy], arr[ix + 1, iy]
    v01, v11 = arr[ix, iy + 1], arr[ix + 1, iy + 1]
    vals = ((1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10
            + (1 - fx) * fy * v01 + fx * fy * v11)
    complete = (inter[ix, iy] & inter[ix + 1, iy]
                & inter[ix, iy + 1] & inter[ix + 1, iy + 1])
    return vals, complete


def _ghost_extended(field, layers=3):
    """Lattice array with exterior nodes filled by extrapolation.

    First layer: quadratic through two interior neighbors and the boundary
    zero along a lattice line; further layers: linear continuation.  Keeps
    cubic interpolation accurate and C1 across near-boundary cells.
    """
    g = field.grid
    arr = _lattice_array(g, field.values)
    known = (g.idx_map >= 0).copy()
    h = g.h
    # boundary fractions along +-x / +-y from each interior node
    sfrac = {(1, 0): g.s_plus[:, g.k_axis_x], (-1, 0): g.s_minus[:, g.k_axis_x],
             (0, 1): g.s_plus[:, g.k_axis_y], (0, -1): g.s_minus[:, g.k_axis_y]}
    ij = g.interior_ij
    li, lj = ij[:, 0] - g.i0, ij[:, 1] - g.j0
    for layer in range(layers):
        acc = np.zeros_like(arr)
        cnt = np.zeros(arr.shape, dtype=int)
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if layer == 0:
                # target exterior node E = N1 + (dx,dy), support N2 = N1 - d
                e_i, e_j = li + dx, lj + dy
                n2_i, n2_j = li - dx, lj - dy
                ok = ((e_i >= 0) & (e_i < g.nx) & (e_j >= 0) & (e_j < g.ny)
                      & (n2_i >= 0) & (n2_i < g.nx) & (n2_j >= 0) & (n2_j < g.ny))
                e_i, e_j = e_i[ok], e_j[ok]
                tgt = ~known[e_i, e_j]
                s = sfrac[(dx, dy)][ok]
                n2_known = known[n2_i[ok], n2_j[ok]] & (s < 1.0) & (s > 1e-9)
                sel = tgt & n2_known
                u1 = field.values[ok][sel]
                u2 = arr[n2_i[ok][sel], n2_j[ok][sel]]
                ss = s[sel]
                # quadratic q(t) with q(0)=u1, q(-h)=u2, q(ss*h)=0 -> q(h)
                cc = (ss * u2 - u1 * (1.0 + ss)) / (h * h * ss * (1.0 + ss))
                bb = (-u1 / (ss * h)) - cc * ss * h
                ghost = u1 + bb * h + cc * h * h
                acc[e_i[sel], e_j[sel]] += ghost
                cnt[e_i[sel], e_j[sel]] += 1
            else:
                # linear continuation from two known nodes
                sl_e = (slice(2, None), slice(None)) if dx == 1 else \
                       (slice(None, -2), slice(None)) if dx == -1 else \
                       (slice(None), slice(2, None)) if dy == 1 else \
                       (slice(None), slice(None, -2))
                sl_1 = (slice(1, -1), slice(None)) if dx != 0 else \
                       (slice(None), slice(1, -1))
                sl_2 = (slice(None, -2), slice(None)) if dx == 1 else \
                       (slice(2, None), slice(None)) if dx == -1 else \
                       (slice(None), slice(None, -2)) if dy == 1 else \
                       (slice(None), slice(2, None))
                good = known[sl_1] & known[sl_2] & ~known[sl_e]
                vals = 2.0 * arr[sl_1] - arr[sl_2]
                tgt_acc, tgt_cnt = acc[sl_e], cnt[sl_e]
                tgt_acc[good] += vals[good]
                tgt_cnt[good] += 1
        new = cnt > 0
        arr[new] = acc[new] / cnt[new]
        known |= new
    return arr, known


def _keys_weights(t):
    """Cubic convolution kernel (Keys, a = -1/2) weights for offsets
    -1, 0, 1, 2 at fractional position t in [0, 1]; globally C1."""
    t2, t3 = t * t, t * t * t
    w0 = -0.5 * t3 + t2 - 0.5 * t
    w1 = 1.5 * t3 - 2.5 * t2 + 1.0
    w2 = -1.5 * t3 + 2.0 * t2 + 0.5 * t
    w3 = 0.5 * t3 - 0.5 * t2
    return w0, w1, w2, w3


def interp_cubic(field, px, py):
    """C1 cubic interpolation on the ghost-extended lattice."""
    g = field.grid
    arr, _known = _ghost_extended(field)
    gx, gy = _lattice_coords(g, np.asarray(px, float), np.asarray(py, float))
    ix = np.clip(np.floor(gx).astype(int), 1, g.nx - 3)
    iy = np.clip(np.floor(gy).astype(int), 1, g.ny - 3)
    fx, fy = gx - ix, gy - iy
    wx = _keys_weights(fx)
    wy = _keys_weights(fy)
    vals = np.zeros_like(gx)
    for a in range(4):
        row = np.zeros_like(gx)
        for b in range(4):
            row += wy[b] * arr[ix + a - 1, iy + b - 1]
        vals += wx[a] * row
    return vals


# ---------------------------------------------------------------------------
# reflections and the FSS detector
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class DirectionSet:
    """m unit vectors uniformly spaced on the half-circle (antipodes merged)."""

    count: int = 16

    def __post_init__(self):
        if self.count < 8:
            raise InputError("need at least 8 directions")

    @property
    def vectors(self):
        ang = [k * math.pi / self.count for k in range(self.count)]
        return [(math.cos(t), math.sin(t)) for t in ang]


def default_sign_tol(field):
    """Classification band matched to the bilinear interpolation error."""
    return 10.0 * field.grid.h**2 * field.norm_inf


def reflect_field(u, e, method="bilinear"):
    """Values u(sigma_e(x)) on the grid; reflections leaving the interior
    take the boundary value 0 (bilinear) or the extended value (cubic)."""
    g = u.grid
    ex, ey = _unit(e)
    g.dom.require_reflection_symmetric((ex, ey))
    dot = g.x * ex + g.y * ey
    rx, ry = g.x - 2.0 * dot * ex, g.y - 2.0 * dot * ey
    if method == "bilinear":
        vals, _ = interp_bilinear(u, rx, ry)
    elif method == "cubic":
        vals = interp_cubic(u, rx, ry)
    else:
        raise InputError(f"unknown interpolation method {method!r}")
    return ScalarField(g, vals)


@dataclass
class ReflectionGap:
    sign: str                    # nonneg | nonpos | zero | mixed
    w: ScalarField               # u - u o sigma_e
    max_violation: float         # min over one-sided hypotheses of the excess
    tol: float
    n_classified: int


def reflection_gap(u, e, tol=None, method="bilinear"):
    """Sign classification of w_e = u - u o sigma_e on the half-domain B(e).

    Nodes whose reflected point has an incomplete interpolation cell sit in
    an O(h) boundary shell and are left out of the classification; their
    count is reported through n_classified.
    """
    g = u.grid
    ex, ey = _unit(e)
    if tol is None:
        tol = default_sign_tol(u)
    refl = reflect_field(u, (ex, ey), method=method)
    w = ScalarField(g, u.values - refl.values)
    dot = g.x * ex + g.y * ey
    if method == "bilinear":
        _, complete = interp_bilinear(u, g.x - 2 * dot * ex, g.y - 2 * dot * ey)
    else:
        complete = np.ones(g.n_interior, dtype=bool)
    mask = (dot > 1e-12) & complete
    vals = w.values[mask]
    if len(vals) == 0:
        return ReflectionGap("zero", w, 0.0, tol, 0)
    lo, hi = float(vals.min()), float(vals.max())
    excess_nonneg = max(0.0, -lo)    # how far the nonneg hypothesis fails
    excess_nonpos = max(0.0, hi)
    if max(abs(lo), abs(hi)) <= tol:
        sign = "zero"
    elif lo >= -tol:
        sign = "nonneg"
    elif hi <= tol:
        sign = "nonpos"
    else:
        sign = "mixed"
    return ReflectionGap(sign, w, min(excess_nonneg, excess_nonpos),
                         tol, int(mask.sum()))


@dataclass
class FssReport:
    classification: str                      # radial | foliated_schwarz | not_fss
    axis_p: Optional[Tuple[float, float]]
    per_direction_sign: List[str]
    max_violation: float
    directions: int
    tol: float
    diagnostics: dict = dfield(default_factory=dict)

    def to_text(self):
        p = "none" if self.axis_p is None else \
            f"{self.axis_p[0]:.17g} {self.axis_p[1]:.17g}"
        lines = ["FssReport {",
                 f"  classification = {self.classification}",
                 f"  axis_p = {p}",
                 f"  per_direction_sign = {' '.join(self.per_direction_sign)}",
                 f"  max_violation = {self.max_violation:.17g}",
                 f"  directions = {self.directions}",
                 f"  tol = {self.tol:.17g}",
                 "}"]
        return "\n".join(lines)


def _axis_consistent(signs, vectors, p, band):
    bad = 0
    for s, (ex, ey) in zip(signs, vectors):
        d = ex * p[0] + ey * p[1]
        if abs(d) <= band:
            continue
        if d > 0 and s == "nonpos":
            bad += 1
        if d < 0 and s == "nonneg":
            bad += 1
    return bad


def detect_fss(u, dirs=None, tol=None):
    """Classify a field on a disc or annulus as radial, foliated Schwarz
    symmetric about some axis, or neither.

    Uses the reflection characterization: FSS with axis p iff
    u >= u o sigma_e on B(e) for every e with e . p >= 0.  The axis is
    first estimated from the field's first moment, then re-fitted against
    the sampled sign pattern if the moment estimate is inconsistent.
    """
    g = u.grid
    if not g.dom.is_rotation_symmetric():
        raise DomainError("foliated Schwarz detection needs a disc or annulus")
    dirs = dirs or DirectionSet()
    if tol is None:
        tol = default_sign_tol(u)
    vectors = dirs.vectors
    gaps = [reflection_gap(u, e, tol=tol) for e in vectors]
    signs = [gap.sign for gap in gaps]
    max_violation = max(gap.max_violation for gap in gaps)

    mx = float(np.sum(g.x * u.values)) * g.h**2
    my = float(np.sum(g.y * u.values)) * g.h**2
    mnorm = math.hypot(mx, my)
    moment_scale = max(u.norm_inf, 1e-300) * g.h**2 * g.n_interior
    diagnostics = {"moment": (mx, my), "gap_violations":
                   [round(gap.max_violation, 12) for gap in gaps]}

    if all(s == "zero" for s in signs) and mnorm <= 1e-9 * moment_scale:
        return FssReport("radial", None, signs, max_violation,
                         dirs.count, tol, diagnostics)
    if any(s == "mixed" for s in signs):
        return FssReport("not_fss", None, signs, max_violation,
                         dirs.count, tol, diagnostics)

    band = math.sin(0.5 * math.pi / dirs.count) + 1e-12
    if mnorm > 0.0:
        p = (mx / mnorm, my / mnorm)
        if _axis_consistent(signs, vectors, p, band) == 0:
            return FssReport("foliated_schwarz", p, signs, max_violation,
                             dirs.count, tol, diagnostics)
    # moment estimate failed: fit the axis to the sign pattern
    best_p, best_score = None, None
    for k in range(720):
        ang = 2.0 * math.pi * k / 720
        cand = (math.cos(ang), math.sin(ang))
        bad = _axis_consistent(signs, vectors, cand, band)
        score = (bad, -sum({"nonneg": 1, "nonpos": -1}.get(s, 0)
                           * (v[0] * cand[0] + v[1] * cand[1])
                           for s, v in zip(signs, vectors)))
        if best_score is None or score < best_score:
            best_score, best_p = score, cand
    if best_score[0] == 0:
        diagnostics["axis_refit"] = True
        return FssReport("foliated_schwarz", best_p, signs, max_violation,
                         dirs.count, tol, diagnostics)
    return FssReport("not_fss", None, signs, max_violation,
                     dirs.count, tol, diagnostics)


# ---------------------------------------------------------------------------
# angular derivative and subsolution residual
# ---------------------------------------------------------------------------
def _axis_derivative(field, axis):
    g = field.grid
    k = g.k_axis_x if axis == 0 else g.k_axis_y
    u = field.values
    sp, sm = g.s_plus[:, k], g.s_minus[:, k]
    upv = np.where(g.nbr_plus[:, k] >= 0,
                   u[np.maximum(g.nbr_plus[:, k], 0)], 0.0)
    umv = np.where(g.nbr_minus[:, k] >= 0,
                   u[np.maximum(g.nbr_minus[:, k], 0)], 0.0)
    h = g.h
    # quadratic fit through (-sm h, um), (0, u0), (sp h, up): O(h^2) also
    # against the Dirichlet boundary
    return (sm**2 * upv - sp**2 * umv + (sp**2 - sm**2) * u) / \
        (sp * sm * (sp + sm) * h)


def angular_derivative(u):
    """u_theta = grad u . (-y, x) by centered/boundary-aware differences."""
    if not u.grid.dom.is_rotation_symmetric():
        raise DomainError("angular derivative needs a disc or annulus")
    ux = _axis_derivative(u, 0)
    uy = _axis_derivative(u, 1)
    return ScalarField(u.grid, -u.grid.y * ux + u.grid.x * uy)


def subsolution_residual(v, c, ell):
    """max over nodes of  -M+(v) - c v ; <= 0 (up to scheme error) certifies
    a discrete viscosity subsolution of the linearized inequality."""
    if v.grid is not c.grid:
        raise InputError("v and c must share a grid")
    value = discrete_pucci(v, ell, "plus")
    return float(np.max(-value.values - c.values * v.values))


# ---------------------------------------------------------------------------
# nodal analysis
# ---------------------------------------------------------------------------
@dataclass
class NodalReport:
    sign_change_edges: list
    touches_boundary: bool
    contains_origin: bool
    num_nodal_regions: int
    zero_band: float
    diagnostics: dict = dfield(default_factory=dict)

    def to_text(self):
        lines = ["NodalReport {",
                 f"  sign_change_edges = {len(self.sign_change_edges)}",
                 f"  touches_boundary = {str(self.touches_boundary).lower()}",
                 f"  contains_origin = {str(self.contains_origin).lower()}",
                 f"  num_nodal_regions = {self.num_nodal_regions}",
                 f"  zero_band = {self.zero_band:.17g}",
                 "}"]
        return "\n".join(lines)


def _region_count(grid, values, band):
    pos2d = np.zeros((grid.nx, grid.ny), dtype=bool)
    neg2d = np.zeros_like(pos2d)
    inter = grid.idx_map >= 0
    vals2d = _lattice_array(grid, values)
    pos2d[inter] = vals2d[inter] > band
    neg2d[inter] = vals2d[inter] < -band
    four = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    npos = ndimage.label(pos2d, structure=four)[1]
    nneg = ndimage.label(neg2d, structure=four)[1]
    return npos + nneg


def nodal_analysis(u, zero_band=None):
    """Sign-change edges, nodal regions and the boundary/origin predicates."""
    g = u.grid
    if zero_band is None:
        zero_band = 1e-3 * u.norm_inf
    vals = u.values
    near = g.near_boundary()

    edges = []
    edge_nodes = set()
    kx, ky = g.k_axis_x, g.k_axis_y
    for k in (kx, ky):
        nbr = g.nbr_plus[:, k]
        ok = nbr >= 0
        a = np.where(ok)[0]
        b = nbr[ok]
        strict = (np.abs(vals[a]) > zero_band) & (np.abs(vals[b]) > zero_band)
        flip = strict & (np.sign(vals[a]) != np.sign(vals[b]))
        for i, j in zip(a[flip], b[flip]):
            edges.append((tuple(g.interior_ij[i]), tuple(g.interior_ij[j])))
            edge_nodes.add(int(i))
            edge_nodes.add(int(j))

    # near-zero nodes flanked by both signs: nodal line passing through nodes
    band_nodes = []
    arr = _lattice_array(g, vals)
    inter = g.idx_map >= 0
    li = g.interior_ij[:, 0] - g.i0
    lj = g.interior_ij[:, 1] - g.j0
    in_band = np.abs(vals) <= zero_band
    for i in np.where(in_band)[0]:
        has_pos = has_neg = False
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                ii, jj = li[i] + di, lj[i] + dj
                if 0 <= ii < g.nx and 0 <= jj < g.ny and inter[ii, jj]:
                    v = arr[ii, jj]
                    has_pos |= v > zero_band
                    has_neg |= v < -zero_band
        if has_pos and has_neg:
            band_nodes.append(i)

    nodal_idx = sorted(edge_nodes | set(band_nodes))
    touches = bool(any(near[i] for i in nodal_idx))

    block = (np.abs(g.x) <= g.h + 1e-12) & (np.abs(g.y) <= g.h + 1e-12)
    has_pos = bool(np.any(vals[block] > zero_band))
    has_neg = bool(np.any(vals[block] < -zero_band))
    contains_origin = has_pos and has_neg

    regions = _region_count(g, vals, zero_band)
    diagnostics = {
        "regions_half_band": _region_count(g, vals, 0.5 * zero_band),
        "regions_double_band": _region_count(g, vals, 2.0 * zero_band),
        "n_band_nodes": len(band_nodes),
    }
    return NodalReport(edges, touches, contains_origin, max(regions, 1),
                       zero_band, diagnostics)


# ---------------------------------------------------------------------------
# two-subdomain eigenvalue estimators
# ---------------------------------------------------------------------------
def _restrict_field(c, subgrid):
    parent = c.grid
    idx = parent.index_at(subgrid.interior_ij[:, 0], subgrid.interior_ij[:, 1])
    if np.any(idx < 0):
        raise InputError("subdomain grid escapes the parent grid")
    return ScalarField(subgrid, c.values[idx])


def _sub_eigen(c, dom_sub, ell, sign, cone, tol):
    grid = build_grid(dom_sub, c.grid.h, stencil=c.grid.stencil,
                      min_interior=10, offset=c.grid.offset)
    c_sub = _restrict_field(c, grid)
    return principal_eigenvalue_grid(c=c_sub, ell=ell, sign=sign,
                                     cone=cone, tol=tol)


def _family_cuts(dom, family, resolution, dirs_list=None, offsets_list=None,
                 radii_list=None):
    if family == "caps":
        n_dir = resolution
        n_off = resolution // 2 + 1
        if dirs_list is None:
            dirs_list = [(math.cos(k * math.pi / n_dir),
                          math.sin(k * math.pi / n_dir)) for k in range(n_dir)]
        if offsets_list is None:
            xmin, xmax, ymin, ymax = dom.bounding_box()
            t_max = 0.8 * min(xmax, ymax)
            offsets_list = list(np.linspace(-t_max, t_max, n_off)) \
                if n_off > 1 else [0.0]
        cuts = []
        for e in dirs_list:
            for t in offsets_list:
                cuts.append(("cap", e, float(t)))
        return cuts
    if family == "concentric":
        base = dom.base_kind
        if base not in ("disc", "annulus"):
            raise InputError("concentric family needs a disc or annulus")
        r_in = 0.0 if base == "disc" else dom.R0
        r_out = dom.R if base == "disc" else dom.R1
        n_rad = resolution + 1
        if radii_list is None:
            radii_list = list(np.linspace(r_in + 0.1 * (r_out - r_in),
                                          r_out - 0.1 * (r_out - r_in), n_rad))
        return [("concentric", None, float(r)) for r in radii_list]
    raise InputError(f"unknown family {family!r}")


def _cut_subdomains(dom, cut):
    kind, e, t = cut
    if kind == "cap":
        d = DomainSpec.cap_of(dom, e, t)
        comp = DomainSpec.cap_of(dom, (-e[0], -e[1]), -t)
        return d, comp
    base = dom.base_kind
    if base == "disc":
        return DomainSpec.disc(t), DomainSpec.annulus(t, dom.R)
    return DomainSpec.annulus(dom.R0, t), DomainSpec.annulus(t, dom.R1)


def family_estimates(c, dom, ell, family="caps", resolution=32, sign="plus",
                     tol=1e-6, dirs_list=None, offsets_list=None,
                     radii_list=None):
    """min over the cut family of max{lam1+(D), lam1+-(complement)}.

    Returns a dict with the upper-bound estimates using the positive cone on
    the complement (mu-type) and the negative cone (gamma-type), their
    minimizers, and the full table.  Both are upper bounds over the sampled
    family only.
    """
    cuts = _family_cuts(dom, family, resolution, dirs_list, offsets_list,
                        radii_list)
    table = []
    for cut in cuts:
        d_sub, comp = _cut_subdomains(dom, cut)
        try:
            lam_d = _sub_eigen(c, d_sub, ell, sign, "positive", tol).lam
            lam_c_plus = _sub_eigen(c, comp, ell, sign, "positive", tol).lam
            lam_c_minus = _sub_eigen(c, comp, ell, sign, "negative", tol).lam
        except Exception as exc:   # too-coarse subgrid etc.: skip this cut
            table.append({"cut": cut, "skipped": str(exc)})
            continue
        table.append({"cut": cut, "lam_d": lam_d, "lam_comp_plus": lam_c_plus,
                      "lam_comp_minus": lam_c_minus,
                      "mu_pair": max(lam_d, lam_c_plus),
                      "gamma_pair": max(lam_d, lam_c_minus)})
    usable = [row for row in table if "mu_pair" in row]
    if not usable:
        raise InputError("every cut in the family was skipped")
    mu_row = min(usable, key=lambda r: r["mu_pair"])
    ga_row = min(usable, key=lambda r: r["gamma_pair"])
    return {"mu2": mu_row["mu_pair"], "mu2_minimizer": mu_row["cut"],
            "gamma2": ga_row["gamma_pair"], "gamma2_minimizer": ga_row["cut"],
            "table": table}


def mu2_family_estimate(c, dom, ell, family="caps", resolution=32, **kw):
    """Upper bound of the two-subdomain value inf max{lam1+(D), lam1+(comp)}
    over a parametric cut family."""
    est = family_estimates(c, dom, ell, family, resolution, **kw)
    return est["mu2"], est["mu2_minimizer"]


def gamma2_family_estimate(c, dom, ell, family="caps", resolution=32, **kw):
    """Like mu2_family_estimate with the negative cone on the complement;
    dominates the mu estimate on identical families."""
    est = family_estimates(c, dom, ell, family, resolution, **kw)
    scale = 1.0 + abs(est["mu2"])
    if est["gamma2"] < est["mu2"] - 1e-12 * scale:
        raise InputError("gamma estimate fell below the mu estimate; "
                         "cone ordering violated")
    return est["gamma2"], est["gamma2_minimizer"]
