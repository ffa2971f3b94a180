"""Domain types shared by all solvers.

Natural units hbar = c = 1 throughout: energies, masses and inverse lengths
share one unit. The electric coupling enters only through the product
U(x) = kappa * W(x); the charge and the bare potential are never represented
separately.

The superpotential catalog carries three families:

* Linear:    W(x) = w1 * x,            W'(x) = w1           (whole real line)
* Tangent:   W(x) = alpha0 * tan(x),   W'(x) = alpha0/cos^2(x)   on (-pi/2, pi/2)
* Tabulated: (x, W, W') samples, monotone cubic interpolation, certified for
  the lattice route only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import ConfigError, DomainError

__all__ = [
    "Family",
    "Superpotential",
    "PhysicalParams",
    "Grid",
    "LevelIndex",
    "SpectrumRecord",
    "SpinorState",
    "eval_superpotential",
    "potential_energy",
    "build_grid",
]

HALF_PI = math.pi / 2.0


class Family(str, Enum):
    """Superpotential family tag (values double as config-file spellings)."""

    LINEAR = "linear"
    TANGENT = "tan"
    TABULATED = "tabulated"


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Superpotential:
    """Descriptor for W(x) and W'(x). Construct via the factory classmethods."""

    family: Family
    w1: float | None = None
    alpha0: float | None = None
    table_x: np.ndarray | None = field(default=None, repr=False)
    table_w: np.ndarray | None = field(default=None, repr=False)
    table_wp: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def linear(cls, w1: float) -> "Superpotential":
        if not math.isfinite(w1):
            raise ConfigError(f"linear slope w1 must be finite, got {w1!r}")
        return cls(family=Family.LINEAR, w1=float(w1))

    @classmethod
    def tangent(cls, alpha0: float) -> "Superpotential":
        if not (math.isfinite(alpha0) and alpha0 > 0.0):
            raise ConfigError(f"tangent strength alpha0 must be > 0, got {alpha0!r}")
        return cls(family=Family.TANGENT, alpha0=float(alpha0))

    @classmethod
    def tabulated(cls, x, w, wp) -> "Superpotential":
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        wp = np.asarray(wp, dtype=float)
        if x.ndim != 1 or x.shape != w.shape or x.shape != wp.shape:
            raise ConfigError("tabulated samples need matching 1-D x, W, W' arrays")
        if x.size < 4:
            raise ConfigError("tabulated superpotential needs at least 4 samples")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(w)) or not np.all(np.isfinite(wp)):
            raise ConfigError("tabulated samples must be finite")
        if not np.all(np.diff(x) > 0.0):
            raise ConfigError("tabulated x values must be strictly increasing")
        _validate_table_derivative(x, w, wp)
        return cls(
            family=Family.TABULATED,
            table_x=_readonly(x),
            table_w=_readonly(w),
            table_wp=_readonly(wp),
        )

    @property
    def domain(self) -> tuple[float, float]:
        """(lo, hi) of the domain of definition. Tangent is an open interval;
        Tabulated is the closed sample range; Linear is the whole line."""
        if self.family is Family.LINEAR:
            return (-math.inf, math.inf)
        if self.family is Family.TANGENT:
            return (-HALF_PI, HALF_PI)
        return (float(self.table_x[0]), float(self.table_x[-1]))

    @cached_property
    def _interpolants(self):
        from scipy.interpolate import PchipInterpolator

        return (
            PchipInterpolator(self.table_x, self.table_w),
            PchipInterpolator(self.table_x, self.table_wp),
        )


def _validate_table_derivative(x: np.ndarray, w: np.ndarray, wp: np.ndarray) -> None:
    # supplied W' must agree with centered differences of W at interior
    # points: |W' - FD| <= 10 h^2 max|W''| (plus a scale floor for W'' ~ 0)
    fd = np.gradient(w, x)
    wpp = np.gradient(fd, x)
    h = float(np.max(np.diff(x)))
    scale = max(1.0, float(np.max(np.abs(w))))
    tol = 10.0 * h * h * float(np.max(np.abs(wpp))) + 1e-12 * scale
    err = float(np.max(np.abs(wp[1:-1] - fd[1:-1])))
    if err > tol:
        raise ConfigError(
            f"tabulated W' disagrees with centered differences of W: "
            f"max deviation {err:.3e} exceeds tolerance {tol:.3e}"
        )


def _check_domain(sp: Superpotential, x: np.ndarray) -> None:
    lo, hi = sp.domain
    if sp.family is Family.TANGENT:
        if np.any(x <= lo) or np.any(x >= hi):
            raise DomainError(f"coordinate outside the open interval ({lo}, {hi})")
    elif sp.family is Family.TABULATED:
        if np.any(x < lo) or np.any(x > hi):
            raise DomainError(f"coordinate outside the tabulated range [{lo}, {hi}]")


def eval_superpotential(sp: Superpotential, x):
    """Pointwise (W(x), W'(x)). Accepts scalars or arrays; preserves shape.

    Raises DomainError if any coordinate leaves the family's domain.
    """
    arr = np.asarray(x, dtype=float)
    _check_domain(sp, arr)
    if sp.family is Family.LINEAR:
        w = sp.w1 * arr
        wp = np.full_like(arr, sp.w1)
    elif sp.family is Family.TANGENT:
        w = sp.alpha0 * np.tan(arr)
        c = np.cos(arr)
        wp = sp.alpha0 / (c * c)
    else:
        f_w, f_wp = sp._interpolants
        w = f_w(arr)
        wp = f_wp(arr)
    if np.isscalar(x) or arr.ndim == 0:
        return float(w), float(wp)
    return w, wp


def potential_energy(sp: Superpotential, kappa: float, x):
    """U(x) = kappa * W(x) (the only place the electric field enters)."""
    w = eval_superpotential(sp, x)[0]
    return kappa * w


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, coupling and superpotential. |kappa| < 1 is required by the
    closed-form and SUSY routes; the direct lattice route accepts any kappa."""

    mass: float
    kappa: float
    superpotential: Superpotential

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass >= 0.0):
            raise ConfigError(f"mass must be finite and >= 0, got {self.mass!r}")
        if not math.isfinite(self.kappa):
            raise ConfigError(f"kappa must be finite, got {self.kappa!r}")


@dataclass(frozen=True)
class Grid:
    """Uniform interior lattice on (-L, L) with Dirichlet walls.

    Interior points x_i = -L + i h, i = 1..n, spacing h = 2L/(n+1). Both
    spinor components vanish at +-L. For the Tangent family L = pi/2, so the
    points are automatically clipped one spacing inside the open domain.
    """

    half_width: float
    n: int

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n + 1)

    @cached_property
    def x(self) -> np.ndarray:
        pts = -self.half_width + self.h * np.arange(1, self.n + 1)
        pts.setflags(write=False)
        return pts


def build_grid(L: float, N: int, family: Family = Family.LINEAR) -> Grid:
    """Uniform interior grid. N >= 3 so a centered stencil exists everywhere;
    for the Tangent family pass L = pi/2 (the builder keeps the points strictly
    inside the open interval by construction)."""
    if not (isinstance(N, (int, np.integer)) and N >= 3):
        raise ConfigError(f"grid needs at least 3 interior points, got {N!r}")
    if not (math.isfinite(L) and L > 0.0):
        raise ConfigError(f"grid half-width must be positive, got {L!r}")
    if family is Family.TANGENT and L > HALF_PI + 1e-15:
        raise ConfigError(
            f"tangent-family grid half-width must not exceed pi/2, got {L!r}"
        )
    return Grid(half_width=float(L), n=int(N))


@dataclass(frozen=True)
class LevelIndex:
    """Quantum numbers (n, sigma) with the unified level label
    n_sigma = n + (1+sigma)/2: sigma=-1 counts 0,1,2,... and sigma=+1 counts
    1,2,3,..., so both ladders meet at every n_sigma >= 1."""

    n: int
    sigma: int

    def __post_init__(self):
        if self.sigma not in (-1, 1):
            raise ConfigError(f"sigma must be -1 or +1, got {self.sigma!r}")
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 0):
            raise ConfigError(f"n must be a non-negative integer, got {self.n!r}")

    @property
    def n_sigma(self) -> int:
        return int(self.n) + (1 + self.sigma) // 2


ROUTES = ("analytic", "dirac", "susy")


@dataclass(frozen=True)
class SpectrumRecord:
    """One energy level as seen by one route.

    branch is the sign of E (+1/-1); sign(E) must match branch whenever
    E != 0. epsilon is the reduced eigenvalue E^2/(1-kappa^2) - m^2 when the
    route can compute it (nan above the critical field). err_est is None when
    the route reports no error estimate.
    """

    route: str
    branch: int
    sigma: int
    n: int
    E: float
    epsilon: float
    converged: bool
    err_est: float | None = None

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ConfigError(f"unknown route {self.route!r}")
        if self.branch not in (-1, 1):
            raise ConfigError(f"branch must be -1 or +1, got {self.branch!r}")
        if self.sigma not in (-1, 1):
            raise ConfigError(f"sigma must be -1 or +1, got {self.sigma!r}")
        if self.n < 0:
            raise ConfigError(f"n must be non-negative, got {self.n!r}")
        if self.E != 0.0 and math.copysign(1.0, self.E) != self.branch:
            raise ConfigError(
                f"sign of E={self.E!r} does not match branch={self.branch:+d}"
            )

    @property
    def n_sigma(self) -> int:
        return self.n + (1 + self.sigma) // 2


def _site_probabilities(psi1: np.ndarray, psi2: np.ndarray, h: float):
    q = np.abs(psi1) ** 2 + np.abs(psi2) ** 2
    total = h * float(np.sum(q))
    return q, total


def localization_of(psi1: np.ndarray, psi2: np.ndarray, x: np.ndarray, h: float):
    """(participation ratio, rms width) of a two-component amplitude sample.

    PR = h (sum q)^2 / sum q^2 with q the per-site probability density: a
    uniform state gives the box length, a single-site spike gives h. The rms
    width is taken about the probability centroid.
    """
    q, total = _site_probabilities(psi1, psi2, h)
    if total <= 0.0:
        raise ValueError("cannot compute localization of a null state")
    pr = h * float(np.sum(q)) ** 2 / float(np.sum(q * q))
    p = q / np.sum(q)
    centroid = float(np.sum(p * x))
    rms = math.sqrt(float(np.sum(p * (x - centroid) ** 2)))
    return pr, rms


@dataclass(frozen=True)
class SpinorState:
    """Normalized two-component eigenvector samples plus localization metrics.

    Normalization convention: h * sum(|psi1|^2 + |psi2|^2) = 1. residual is
    the reported first-order-equation residual when the state came from the
    reconstruction path (None for direct lattice eigenvectors, whose residual
    is checked against the matrix instead).
    """

    E: float
    psi1: np.ndarray
    psi2: np.ndarray
    norm: float
    participation_ratio: float
    rms_width: float
    residual: float | None = None

    @classmethod
    def from_samples(cls, E, psi1, psi2, grid: Grid, residual=None) -> "SpinorState":
        psi1 = np.asarray(psi1, dtype=complex)
        psi2 = np.asarray(psi2, dtype=complex)
        if psi1.shape != (grid.n,) or psi2.shape != (grid.n,):
            raise ValueError("component samples must match the grid size")
        _, total = _site_probabilities(psi1, psi2, grid.h)
        if total <= 0.0:
            raise ValueError("cannot normalize a null state")
        scale = 1.0 / math.sqrt(total)
        psi1 = psi1 * scale
        psi2 = psi2 * scale
        _, norm_sq = _site_probabilities(psi1, psi2, grid.h)
        pr, rms = localization_of(psi1, psi2, grid.x, grid.h)
        psi1.setflags(write=False)
        psi2.setflags(write=False)
        return cls(
            E=float(E),
            psi1=psi1,
            psi2=psi2,
            norm=math.sqrt(norm_sq),
            participation_ratio=pr,
            rms_width=rms,
            residual=None if residual is None else float(residual),
        )
