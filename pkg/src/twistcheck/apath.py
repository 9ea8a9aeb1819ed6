"""Discretized A-paths for the algebroid attached to a twisted Jacobi
structure: anchor-compatibility residuals, cocycle integration against the
section (-E, 0), two-speed concatenation, and reparameterization.

A path is stored as uniform samples on [0, 1] of a base curve gamma in the
chart, a covector field zeta along it, and a scalar component f.  An
optional sampler callable gives exact values at arbitrary times, which lets
concatenation and reparameterization resample without interpolation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .expr import Expr, ExprError
from .jacobi import TwistedJacobi

__all__ = [
    "APath",
    "Sampler",
    "path_from_exprs",
    "anchor_residual",
    "cocycle_integral",
    "concatenate",
    "reparameterize",
]

# sampler: t in [0,1] -> (gamma(t), zeta(t), f(t))
Sampler = Callable[[float], tuple[np.ndarray, np.ndarray, float]]


@dataclass
class APath:
    j: TwistedJacobi
    gamma: np.ndarray  # (n+1, dim) base points
    zeta: np.ndarray  # (n+1, dim) covector components
    f: np.ndarray  # (n+1,) scalar components
    sampler: Optional[Sampler] = field(default=None, repr=False)
    # populated by concatenate: the integrand may jump at the junction, so
    # integration runs over the halves separately
    halves: Optional[tuple["APath", "APath"]] = field(default=None, repr=False)

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        self.zeta = np.asarray(self.zeta, dtype=float)
        self.f = np.asarray(self.f, dtype=float)
        dim = self.j.chart.dim
        n = self.gamma.shape[0] - 1
        if n < 8 or n % 2 != 0:
            raise ExprError("an A-path needs at least 8 segments, an even count")
        if self.gamma.shape != (n + 1, dim) or self.zeta.shape != (n + 1, dim):
            raise ExprError("gamma and zeta must be (n+1, chart dim) arrays")
        if self.f.shape != (n + 1,):
            raise ExprError("f must be an (n+1,) array")
        if np.max(np.abs(self.gamma)) > 1.0 + 1e-12:
            raise ExprError("base points must stay inside the unit sample box")

    @property
    def n(self) -> int:
        return self.gamma.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)

    def at(self, t: float) -> tuple[np.ndarray, np.ndarray, float]:
        """Exact values when a sampler exists, linear interpolation otherwise."""
        if self.sampler is not None:
            g, z, fv = self.sampler(t)
            return np.asarray(g, dtype=float), np.asarray(z, dtype=float), float(fv)
        ts = self.times
        g = np.array([np.interp(t, ts, self.gamma[:, k]) for k in range(self.gamma.shape[1])])
        z = np.array([np.interp(t, ts, self.zeta[:, k]) for k in range(self.zeta.shape[1])])
        fv = float(np.interp(t, ts, self.f))
        return g, z, fv

    def resampled(self, n: int) -> "APath":
        ts = np.linspace(0.0, 1.0, n + 1)
        rows = [self.at(t) for t in ts]
        return APath(
            self.j,
            np.stack([r[0] for r in rows]),
            np.stack([r[1] for r in rows]),
            np.array([r[2] for r in rows]),
            sampler=self.sampler,
        )


def from_sampler(j: TwistedJacobi, sampler: Sampler, n: int = 64) -> APath:
    ts = np.linspace(0.0, 1.0, n + 1)
    rows = [sampler(t) for t in ts]
    return APath(
        j,
        np.stack([np.asarray(r[0], dtype=float) for r in rows]),
        np.stack([np.asarray(r[1], dtype=float) for r in rows]),
        np.array([float(r[2]) for r in rows]),
        sampler=sampler,
    )


def path_from_exprs(
    j: TwistedJacobi,
    gamma: Sequence[Expr],
    zeta: Sequence[Expr],
    f: Expr,
    n: int = 64,
) -> APath:
    """Closed-form path data: expressions on a one-coordinate chart, sampled
    on load and kept as the exact sampler."""
    dim = j.chart.dim
    if len(gamma) != dim or len(zeta) != dim:
        raise ExprError("gamma and zeta need one expression per chart coordinate")

    def sampler(t: float):
        pt = (t,)
        return (
            np.array([g.eval(pt) for g in gamma]),
            np.array([z.eval(pt) for z in zeta]),
            float(f.eval(pt)),
        )

    return from_sampler(j, sampler, n)


def _anchor_at(j: TwistedJacobi, point: np.ndarray, zeta: np.ndarray, fv: float) -> np.ndarray:
    """The anchor image Lambda#(zeta) + f E evaluated numerically."""
    dim = j.chart.dim
    pt = tuple(point)
    out = np.zeros(dim)
    for b in range(dim):
        acc = fv * j.e.component(b).eval(pt)
        for a in range(dim):
            if a != b:
                acc += zeta[a] * j.lam.component(a, b).eval(pt)
        out[b] = acc
    return out


def anchor_residual(c: APath) -> float:
    """Max-norm mismatch between the anchor image of the section values and
    the central-difference velocity of the base path, over interior samples."""
    h = 1.0 / c.n
    worst = 0.0
    for i in range(1, c.n):
        vel = (c.gamma[i + 1] - c.gamma[i - 1]) / (2.0 * h)
        anchor = _anchor_at(c.j, c.gamma[i], c.zeta[i], float(c.f[i]))
        worst = max(worst, float(np.max(np.abs(anchor - vel))))
    return worst


def _simpson(values: np.ndarray) -> float:
    n = values.shape[0] - 1
    h = 1.0 / n
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(weights, values))


def cocycle_integral(c: APath) -> float:
    """Integral of the path paired with the canonical cocycle section
    (-E, 0): composite Simpson quadrature of -<zeta(t), E(gamma(t))>.

    Concatenations integrate half by half, which keeps the quadrature away
    from the junction discontinuity and makes additivity exact."""
    if c.halves is not None:
        return sum(cocycle_integral(h) for h in c.halves)
    dim = c.j.chart.dim
    vals = np.zeros(c.n + 1)
    for i in range(c.n + 1):
        pt = tuple(c.gamma[i])
        vals[i] = -sum(c.zeta[i, k] * c.j.e.component(k).eval(pt) for k in range(dim))
    return _simpson(vals)


def concatenate(c0: APath, c1: APath) -> APath:
    """Two-speed concatenation: run c0 on [0, 1/2] and c1 on [1/2, 1], with
    the section values doubled to keep the anchor equation."""
    if c0.j is not c1.j and c0.j.chart != c1.j.chart:
        raise ExprError("paths live over different structures")
    if float(np.max(np.abs(c1.gamma[0] - c0.gamma[-1]))) > 1e-9:
        raise ExprError("paths are not composable: endpoint mismatch")

    def sampler(t: float):
        if t <= 0.5:
            g, z, fv = c0.at(min(2.0 * t, 1.0))
        else:
            g, z, fv = c1.at(2.0 * t - 1.0)
        return g, 2.0 * z, 2.0 * fv

    out = from_sampler(c0.j, sampler, max(c0.n, c1.n))
    out.halves = (c0, c1)
    return out


def reparameterize(c: APath, tau: Expr) -> APath:
    """Time change by a monotone cutoff tau on [0, 1]: the base path becomes
    gamma(tau(t)) and the section values pick up the factor tau'(t)."""
    chart = tau.chart
    if chart.dim != 1:
        raise ExprError("tau must live on a one-coordinate chart")
    coord = chart.coords[0]
    dtau = tau.diff(coord)
    if abs(tau.eval((0.0,))) > 1e-12 or abs(tau.eval((1.0,)) - 1.0) > 1e-12:
        raise ExprError("tau must fix the endpoints: tau(0)=0, tau(1)=1")
    for t in np.linspace(0.0, 1.0, 4 * c.n + 1):
        if dtau.eval((float(t),)) < -1e-12:
            raise ExprError(f"tau is not monotone: tau'({t}) < 0")

    def sampler(t: float):
        u = min(max(tau.eval((t,)), 0.0), 1.0)
        speed = dtau.eval((t,))
        g, z, fv = c.at(u)
        return g, speed * z, speed * fv

    return from_sampler(c.j, sampler, c.n)
