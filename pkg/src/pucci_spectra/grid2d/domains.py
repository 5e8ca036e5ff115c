"""Planar computational domains with closed-form boundary intersections.

Base shapes are discs, annuli, axis-aligned rectangles and ellipses; any of
them can carry a half-space cut x . e > t (a "cap"), whose straight edge is
part of the Dirichlet boundary.  All membership tests are strict, and
segment/boundary intersections are analytic (circle, line, ellipse).
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import DomainError, InputError

_CAP_KINDS = {"cap_disc": "disc", "cap_annulus": "annulus",
              "cap_rectangle": "rectangle", "cap_ellipse": "ellipse"}
_BASE_KINDS = ("disc", "annulus", "rectangle", "ellipse")


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    R: float = 0.0            # disc radius
    R0: float = 0.0           # annulus inner radius
    R1: float = 0.0           # annulus outer radius
    a: float = 0.0            # rectangle / ellipse half-width
    b: float = 0.0            # rectangle / ellipse half-height
    cap_direction: Optional[Tuple[float, float]] = None
    cap_offset: float = 0.0

    def __post_init__(self):
        if self.kind not in _BASE_KINDS and self.kind not in _CAP_KINDS:
            raise InputError(f"unknown domain kind {self.kind!r}")
        base = self.base_kind
        if base == "disc" and not self.R > 0.0:
            raise InputError("disc needs R > 0")
        if base == "annulus" and not (0.0 < self.R0 < self.R1):
            raise InputError("annulus needs 0 < R0 < R1")
        if base in ("rectangle", "ellipse") and not (self.a > 0.0 and self.b > 0.0):
            raise InputError(f"{base} needs positive half-widths a, b")
        if self.kind in _CAP_KINDS:
            e = self.cap_direction
            if e is None:
                raise InputError("cap domains need a cap_direction")
            norm = float(np.hypot(e[0], e[1]))
            if abs(norm - 1.0) > 1e-12:
                raise InputError("cap_direction must be unit to 1e-12")

    # -- constructors ----------------------------------------------------
    @staticmethod
    def disc(R):
        return DomainSpec("disc", R=float(R))

    @staticmethod
    def annulus(R0, R1):
        return DomainSpec("annulus", R0=float(R0), R1=float(R1))

    @staticmethod
    def rectangle(a, b):
        return DomainSpec("rectangle", a=float(a), b=float(b))

    @staticmethod
    def ellipse(a, b):
        return DomainSpec("ellipse", a=float(a), b=float(b))

    @staticmethod
    def cap_disc(R, e, offset=0.0):
        return DomainSpec("cap_disc", R=float(R), cap_direction=_unit(e),
                          cap_offset=float(offset))

    @staticmethod
    def cap_annulus(R0, R1, e, offset=0.0):
        return DomainSpec("cap_annulus", R0=float(R0), R1=float(R1),
                          cap_direction=_unit(e), cap_offset=float(offset))

    @staticmethod
    def cap_of(base, e, offset=0.0):
        """Half-space cut x . e > offset applied to a base domain."""
        if base.kind not in _BASE_KINDS:
            raise InputError("cap_of expects an uncut base domain")
        return DomainSpec("cap_" + base.kind, R=base.R, R0=base.R0, R1=base.R1,
                          a=base.a, b=base.b, cap_direction=_unit(e),
                          cap_offset=float(offset))

    # -- geometry --------------------------------------------------------
    @property
    def base_kind(self):
        return _CAP_KINDS.get(self.kind, self.kind)

    @property
    def is_cap(self):
        return self.kind in _CAP_KINDS

    def base(self):
        if not self.is_cap:
            return self
        return DomainSpec(self.base_kind, R=self.R, R0=self.R0, R1=self.R1,
                          a=self.a, b=self.b)

    def bounding_box(self):
        base = self.base_kind
        if base == "disc":
            r = self.R
            return (-r, r, -r, r)
        if base == "annulus":
            r = self.R1
            return (-r, r, -r, r)
        return (-self.a, self.a, -self.b, self.b)

    def contains(self, x, y):
        """Strict membership test, vectorized."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        base = self.base_kind
        if base == "disc":
            ok = x * x + y * y < self.R**2
        elif base == "annulus":
            r2 = x * x + y * y
            ok = (r2 > self.R0**2) & (r2 < self.R1**2)
        elif base == "rectangle":
            ok = (np.abs(x) < self.a) & (np.abs(y) < self.b)
        else:
            ok = (x / self.a) ** 2 + (y / self.b) ** 2 < 1.0
        if self.is_cap:
            ex, ey = self.cap_direction
            ok = ok & (x * ex + y * ey > self.cap_offset)
        return ok

    def _crossing_times(self, px, py, dx, dy):
        """Candidate boundary-crossing fractions t in (0, 1], one column each."""
        cols = []

        def circle(rad):
            aa = dx * dx + dy * dy
            bb = 2.0 * (px * dx + py * dy)
            cc = px * px + py * py - rad * rad
            disc = bb * bb - 4.0 * aa * cc
            good = disc >= 0.0
            sq = np.sqrt(np.where(good, disc, 0.0))
            for sgn in (-1.0, 1.0):
                t = np.where(good, (-bb + sgn * sq) / (2.0 * aa), np.inf)
                cols.append(np.where((t > 0.0) & (t <= 1.0), t, np.inf))

        def line(ex, ey, off):
            den = dx * ex + dy * ey
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (off - (px * ex + py * ey)) / den
            t = np.where(np.isfinite(t), t, np.inf)
            cols.append(np.where((t > 0.0) & (t <= 1.0), t, np.inf))

        base = self.base_kind
        if base == "disc":
            circle(self.R)
        elif base == "annulus":
            circle(self.R1)
            circle(self.R0)
        elif base == "rectangle":
            line(1.0, 0.0, self.a)
            line(-1.0, 0.0, self.a)
            line(0.0, 1.0, self.b)
            line(0.0, -1.0, self.b)
        else:
            aa = (dx / self.a) ** 2 + (dy / self.b) ** 2
            bb = 2.0 * (px * dx / self.a**2 + py * dy / self.b**2)
            cc = (px / self.a) ** 2 + (py / self.b) ** 2 - 1.0
            disc = bb * bb - 4.0 * aa * cc
            good = disc >= 0.0
            sq = np.sqrt(np.where(good, disc, 0.0))
            for sgn in (-1.0, 1.0):
                t = np.where(good, (-bb + sgn * sq) / (2.0 * aa), np.inf)
                cols.append(np.where((t > 0.0) & (t <= 1.0), t, np.inf))
        if self.is_cap:
            ex, ey = self.cap_direction
            line(ex, ey, self.cap_offset)
        return np.stack(cols, axis=-1)

    def first_exit(self, px, py, dx, dy):
        """Fraction s in (0, 1] where the segment p -> p + d first leaves the
        open domain; +inf when the whole segment stays inside.

        Points are assumed to start inside.  Segments that exit and re-enter
        (annulus chords, cap corners) are cut at the first crossing.
        """
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        ts = np.sort(self._crossing_times(px, py, dx, dy), axis=-1)
        n_c = ts.shape[-1]
        out = np.full(px.shape, np.inf)
        done = np.zeros(px.shape, dtype=bool)
        prev = np.zeros(px.shape)
        for j in range(n_c):
            tj = ts[..., j]
            has = np.isfinite(tj)
            mid = 0.5 * (prev + np.where(has, tj, prev))
            outside = ~self.contains(px + mid * dx, py + mid * dy)
            hit = has & outside & ~done
            out[hit] = prev[hit]
            done |= hit
            prev = np.where(has, tj, prev)
        # segment between the last crossing and the endpoint
        mid = 0.5 * (prev + 1.0)
        outside = ~self.contains(px + mid * dx, py + mid * dy)
        hit = outside & ~done
        out[hit] = prev[hit]
        # endpoint outside without a recorded crossing: numerical grazing
        end_out = ~self.contains(px + dx, py + dy) & ~np.isfinite(out)
        out[end_out] = 1.0
        out[out == 0.0] = 1e-12
        return out

    # -- symmetry --------------------------------------------------------
    def is_rotation_symmetric(self):
        return self.kind in ("disc", "annulus")

    def is_reflection_symmetric(self, e, tol=1e-9):
        ex, ey = _unit(e)
        if self.kind in ("disc", "annulus"):
            return True
        if self.kind in ("rectangle", "ellipse"):
            return abs(ex) <= tol or abs(ey) <= tol
        # caps: need the base symmetric about H(e) and the cut line invariant
        dx, dy = self.cap_direction
        perp = abs(ex * dx + ey * dy) <= tol
        return perp and self.base().is_reflection_symmetric(e, tol)

    def require_reflection_symmetric(self, e):
        if not self.is_reflection_symmetric(e):
            raise DomainError(f"domain {self.kind} is not symmetric under "
                              f"reflection across e={tuple(np.round(e, 6))}")


def _unit(e):
    ex, ey = float(e[0]), float(e[1])
    norm = np.hypot(ex, ey)
    if norm == 0.0:
        raise InputError("direction must be nonzero")
    return (ex / norm, ey / norm)
