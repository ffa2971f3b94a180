"""Reduction of the two-component first-order problem to partner Schrodinger
problems, and the inverse (spinor reconstruction).

Chain: the spin matrix -sigma_z + i kappa sigma_x has eigenvalues
lambda = sigma sqrt(1-kappa^2). Projecting onto an eigenvector chi decouples
the system into a scalar second-order equation

    (p^2 + Weff^2 + sigma * Weff') phi = epsilon phi,

where the effective superpotential absorbs the coupling and the energy,

    Weff(x) = sqrt(1-kappa^2) * (W(x) + kappa E / (1-kappa^2)),

and epsilon = E^2/(1-kappa^2) - m^2. Because Weff depends on E, the level
condition  epsilon_n(Weff(E)) = E^2/(1-kappa^2) - m^2  is nonlinear in E;
solve_nonlinear_level finds its roots by bracketing. This route needs no
closed form, so it generalizes beyond the certified families; on them it
must reproduce the closed-form levels, which is the cross-check the package
leans on.

Everything here refuses |kappa| >= 1: the spin matrix becomes defective at
the critical coupling and its eigenvalues go imaginary beyond, so no
reduction exists (consistent with the absence of bound states there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import analytic
from .dirac_solver import default_grid
from .errors import (
    BracketError,
    CriticalFieldError,
    DegenerateStateError,
    DomainError,
    NoRealEnergyError,
)
from .linalg import Tridiagonal, _indexed_eigenvalues, tridiagonal_eigenvectors
from .model import (
    Family,
    Grid,
    PhysicalParams,
    SpectrumRecord,
    SpinorState,
    Superpotential,
    eval_superpotential,
)

__all__ = [
    "SpinEigenpair",
    "spin_eigensystem",
    "EffectiveSuperpotential",
    "effective_superpotential",
    "epsilon_from_E",
    "E_from_epsilon",
    "schrodinger_operator",
    "squared_form_potential",
    "solve_nonlinear_level",
    "reconstruct_spinor",
    "susy_state",
]


def _require_subcritical(kappa: float) -> float:
    if not abs(kappa) < 1.0:
        raise CriticalFieldError(
            f"spin reduction undefined at |kappa| = {abs(kappa)} >= 1: the "
            "spin matrix is defective at the critical coupling and its "
            "eigenvalues are imaginary beyond it"
        )
    return 1.0 - kappa * kappa


@dataclass(frozen=True)
class SpinEigenpair:
    """Eigenpair of the non-Hermitian spin matrix -sigma_z + i kappa sigma_x.

    lam = sigma * sqrt(1-kappa^2); chi has unit Euclidean norm with its
    dominant component rotated to the positive real axis. The two chi are
    not orthogonal (the matrix is not Hermitian) and nothing here assumes
    they are.
    """

    sigma: int
    lam: float
    chi: np.ndarray

    def __post_init__(self):
        self.chi.setflags(write=False)


def spin_eigensystem(kappa: float) -> tuple[SpinEigenpair, SpinEigenpair]:
    """Both eigenpairs of -sigma_z + i kappa sigma_x, sigma=+1 first.

    Raises CriticalFieldError for |kappa| >= 1.
    """
    omk = _require_subcritical(kappa)
    out = []
    for sigma in (1, -1):
        lam = sigma * math.sqrt(omk)
        # (-sigma_z + i kappa sigma_x) (a, b) = lam (a, b) reads
        # -a + i kappa b = lam a; the unnormalized solution is
        # (i kappa, 1 + lam), degenerating to the sigma_z eigenvectors at
        # kappa = 0 where 1 + lam can vanish.
        if kappa == 0.0:
            chi = np.array([0.0 + 0.0j, 1.0 + 0.0j] if sigma == 1 else [1.0 + 0.0j, 0.0 + 0.0j])
        else:
            chi = np.array([1j * kappa, 1.0 + lam], dtype=complex)
        chi = chi / np.linalg.norm(chi)
        k = int(np.argmax(np.abs(chi)))
        phase = chi[k] / abs(chi[k])
        chi = chi / phase
        out.append(SpinEigenpair(sigma=sigma, lam=lam, chi=chi))
    return out[0], out[1]


@dataclass(frozen=True)
class EffectiveSuperpotential:
    """The energy-instantiated superpotential Weff of the reduced problem.

    Generic form: Weff = scale * W + offset with scale = sqrt(1-kappa^2) and
    offset = kappa E / sqrt(1-kappa^2). The certified families re-express it
    in their own parameters - linear: slope * (x + x0); trigonometric:
    alpha tan x + beta - and value() evaluates through those, while
    value_reference() always takes the generic path, keeping the two
    derivations independently checkable.
    """

    base: Superpotential
    kappa: float
    E: float
    scale: float
    offset: float
    slope: float | None = None
    x0: float | None = None
    alpha: float | None = None
    beta: float | None = None

    def value(self, x):
        if self.base.family is Family.LINEAR:
            return self.slope * (np.asarray(x, dtype=float) + self.x0)
        if self.base.family is Family.TANGENT:
            w, _ = eval_superpotential(self.base, x)
            return (self.alpha / self.base.alpha0) * w + self.beta
        return self.value_reference(x)

    def value_reference(self, x):
        w, _ = eval_superpotential(self.base, x)
        return self.scale * w + self.offset

    def derivative(self, x):
        _, wp = eval_superpotential(self.base, x)
        return self.scale * wp


def effective_superpotential(
    sp: Superpotential, kappa: float, E: float
) -> EffectiveSuperpotential:
    """Instantiate Weff = sqrt(1-kappa^2) (W + kappa E/(1-kappa^2)) with the
    family-specific parameters filled in. Raises CriticalFieldError for
    |kappa| >= 1."""
    omk = _require_subcritical(kappa)
    scale = math.sqrt(omk)
    offset = kappa * E / scale
    slope = x0 = alpha = beta = None
    if sp.family is Family.LINEAR:
        slope = scale * sp.w1
        x0 = kappa * E / (sp.w1 * omk)
    elif sp.family is Family.TANGENT:
        alpha = scale * sp.alpha0
        beta = offset
    return EffectiveSuperpotential(
        base=sp, kappa=kappa, E=E, scale=scale, offset=offset,
        slope=slope, x0=x0, alpha=alpha, beta=beta,
    )


def epsilon_from_E(E: float, kappa: float, m: float) -> float:
    """Reduced-problem eigenvalue from an energy: E^2/(1-kappa^2) - m^2."""
    omk = _require_subcritical(kappa)
    return E * E / omk - m * m


def E_from_epsilon(epsilon: float, kappa: float, m: float) -> tuple[float, float]:
    """Energies (+E, -E) from a reduced eigenvalue; inverse of
    epsilon_from_E to 1e-12 relative. Raises NoRealEnergyError when
    epsilon + m^2 < 0."""
    omk = _require_subcritical(kappa)
    s = epsilon + m * m
    if s < 0.0:
        raise NoRealEnergyError(
            f"epsilon + m^2 = {s} < 0 admits no real energy"
        )
    e = math.sqrt(omk * s)
    return e, -e


def schrodinger_operator(
    weff: EffectiveSuperpotential, sigma: int, grid: Grid
) -> Tridiagonal:
    """Lattice p^2 + Weff^2 + sigma Weff' with a 3-point Laplacian and
    Dirichlet walls; symmetric tridiagonal. Raises DomainError if the grid
    leaves the base superpotential's domain."""
    if sigma not in (-1, 1):
        raise ValueError("sigma must be -1 or +1")
    x = grid.x
    v = weff.value(x) ** 2 + sigma * weff.derivative(x)
    h2 = grid.h * grid.h
    d = 2.0 / h2 + v
    e = np.full(grid.n - 1, -1.0 / h2)
    return Tridiagonal(d, e)


def squared_form_potential(
    sp: Superpotential, kappa: float, E: float, sigma: int, x
) -> np.ndarray:
    """The reduced-problem potential written directly in the base
    superpotential, (1-kappa^2) W^2 + 2 E kappa W + sigma sqrt(1-kappa^2) W'.

    Independent of the Weff route: expanding Weff^2 + sigma Weff' must
    reproduce this plus the constant kappa^2 E^2/(1-kappa^2), which is the
    pointwise identity the tests pin."""
    omk = _require_subcritical(kappa)
    w, wp = eval_superpotential(sp, x)
    return omk * w * w + 2.0 * E * kappa * w + sigma * math.sqrt(omk) * wp


def _reduced_level(params, sigma, n, grid, E, track=None):
    """epsilon level n of the operator instantiated at energy E, fetched by
    its sorted index (Sturm-verified). Near the top of the admissible window
    the level moves faster in E than the ladder spacing, so picking by value
    continuity can slide onto a neighbor between root-finder steps; the index
    cannot. The previous value only warm-starts the bisection."""
    weff = effective_superpotential(params.superpotential, params.kappa, E)
    t = schrodinger_operator(weff, sigma, grid)
    ks = np.asarray([n + 1], dtype=np.int64)
    warm = None
    if track is not None and track[1] is not None and track[1].size == ks.size:
        warm = track[1]
    vals = _indexed_eigenvalues(t, ks, warm=warm)
    return float(vals[0]), vals


def _level_f(params, sigma, n, grid, E, track):
    eps, vals = _reduced_level(params, sigma, n, grid, E, track)
    omk = 1.0 - params.kappa**2
    f = eps - (E * E / omk - params.mass**2)
    return f, (eps, vals)


def _bracket_root(params, sigma, n, grid, branch):
    """Sign-changing interval of f along one branch. Certified families seed
    from the closed form +-25%; otherwise scan outward in steps of m/4."""
    sp = params.superpotential
    n_sigma = n + (1 + sigma) // 2
    track = (None, None)
    if sp.family in (Family.LINEAR, Family.TANGENT):
        ep, em = analytic.level_energies(params, n_sigma)
        seed = ep if branch > 0 else em
        if seed == 0.0:
            # the E=0 level: the condition must already hold there up to
            # lattice bias, with no second root nearby to confuse it with
            f0, track = _level_f(params, sigma, n, grid, 0.0, track)
            if abs(f0) <= 1e-4:
                return 0.0, 0.0, 0.0, 0.0, track
            raise BracketError(
                f"level condition fails at the E=0 seed for (sigma={sigma}, "
                f"n={n}): f(0) = {f0:.3g}"
            )
        a, b = sorted((0.75 * seed, 1.25 * seed))
        fa, track = _level_f(params, sigma, n, grid, a, track)
        fb, track = _level_f(params, sigma, n, grid, b, track)
        if fa * fb <= 0.0:
            return a, b, fa, fb, track
        raise BracketError(
            f"no sign change around the closed-form seed {seed:.6g} for "
            f"(sigma={sigma}, n={n}); no such bound level"
        )
    step = params.mass / 4.0 if params.mass > 0.0 else 0.25
    e_max = 100.0 * max(params.mass, 1.0)
    a = branch * 1e-6
    fa, track = _level_f(params, sigma, n, grid, a, track)
    k = 1
    while k * step <= e_max:
        b = branch * k * step
        fb, track = _level_f(params, sigma, n, grid, b, track)
        if fa * fb <= 0.0:
            return (a, b, fa, fb, track) if a < b else (b, a, fb, fa, track)
        a, fa = b, fb
        k += 1
    raise BracketError(
        f"no sign change of the level condition on (0, {e_max:.3g}] for "
        f"(sigma={sigma}, n={n}); no such bound level"
    )


def _illinois(params, sigma, n, grid, a, b, fa, fb, track, tol=1e-12):
    """Regula falsi with the Illinois weighting; falls back to bisection
    steps when the secant stalls."""
    if fa == 0.0:
        return a, track
    if fb == 0.0:
        return b, track
    if a == b:
        return a, track
    side = 0
    for _ in range(120):
        denom = fb - fa
        c = (a * fb - b * fa) / denom if denom != 0.0 else 0.5 * (a + b)
        if not (min(a, b) < c < max(a, b)):
            c = 0.5 * (a + b)
        fc, track = _level_f(params, sigma, n, grid, c, track)
        if fc == 0.0 or abs(b - a) <= tol * max(1.0, abs(c)):
            return c, track
        if fa * fc < 0.0:
            b, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
    return 0.5 * (a + b), track


def _solve_branch(params, sigma, n, grid, branch):
    a, b, fa, fb, track = _bracket_root(params, sigma, n, grid, branch)
    e1, track = _illinois(params, sigma, n, grid, a, b, fa, fb, track)
    # second pass on a nested half-spacing grid; the paired extrapolation
    # (4 E2 - E1)/3 cancels the O(h^2) lattice bias of the 3-point Laplacian
    fine = Grid(half_width=grid.half_width, n=2 * grid.n + 1)
    delta = max(1e-4 * max(abs(e1), 1.0), 1e-9)
    # coarse-grid eigenvalues shift only O(h^2) on the nested grid, well
    # inside the warm-bracket width, so they seed the fine solves too
    track_f = (track[0], track[1])
    for _ in range(4):
        aa, bb = e1 - delta, e1 + delta
        faa, track_f = _level_f(params, sigma, n, fine, aa, track_f)
        fbb, track_f = _level_f(params, sigma, n, fine, bb, track_f)
        if faa * fbb <= 0.0:
            e2, _ = _illinois(params, sigma, n, fine, aa, bb, faa, fbb, track_f)
            e = (4.0 * e2 - e1) / 3.0
            return e, abs(e2 - e1) / 3.0
        delta *= 4.0
    return e1, abs(b - a)


_SOLVE_CACHE: dict = {}


def _solve_key(params, sigma, n, grid):
    sp = params.superpotential
    if sp.family is Family.TABULATED:
        return None
    return (
        sp.family, sp.w1, sp.alpha0, params.mass, params.kappa,
        sigma, n, grid.half_width, grid.n,
    )


def solve_nonlinear_level(
    params: PhysicalParams, sigma: int, n: int, grid: Grid | None = None
) -> tuple[SpectrumRecord, SpectrumRecord]:
    """Level n of the sigma-projected reduced problem, found as a root of

        f(E) = epsilon_n(operator at Weff(E)) - (E^2/(1-kappa^2) - m^2).

    epsilon_n is the n-th ascending eigenvalue of the instantiated operator,
    fetched by Sturm-verified sorted index at every E so the root-finder
    always sees the same level regardless of step size. The two energy
    branches are solved independently (they coincide in magnitude for the
    certified families, where f is even in E) and returned as (plus, minus)
    records with route "susy".

    Raises CriticalFieldError for |kappa| >= 1 and BracketError when the
    search window contains no sign change (no such bound level).
    """
    _require_subcritical(params.kappa)
    if sigma not in (-1, 1):
        raise ValueError("sigma must be -1 or +1")
    if n < 0:
        raise ValueError("n must be >= 0")
    if grid is None:
        # half the lattice route's default density; the paired-grid
        # extrapolation in _solve_branch recovers the lost order
        base = default_grid(params)
        grid = Grid(half_width=base.half_width, n=2000)
    key = _solve_key(params, sigma, n, grid)
    if key is not None and key in _SOLVE_CACHE:
        return _SOLVE_CACHE[key]
    omk = 1.0 - params.kappa**2
    records = []
    for branch in (1, -1):
        e, err = _solve_branch(params, sigma, n, grid, branch)
        e = abs(e) if branch > 0 else -abs(e)
        records.append(
            SpectrumRecord(
                route="susy",
                branch=branch,
                sigma=sigma,
                n=n,
                E=e,
                epsilon=e * e / omk - params.mass**2,
                converged=True,
                err_est=err,
            )
        )
    result = (records[0], records[1])
    if key is not None:
        if len(_SOLVE_CACHE) >= 128:
            _SOLVE_CACHE.pop(next(iter(_SOLVE_CACHE)))
        _SOLVE_CACHE[key] = result
    return result


def _centered_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """Centered first derivative with Dirichlet ghost points."""
    g = np.zeros(f.size + 2, dtype=f.dtype)
    g[1:-1] = f
    return (g[2:] - g[:-2]) / (2.0 * h)


def _apply_dirac(params, grid, psi1, psi2):
    """The first-order operator applied with centered differences (the
    reconstruction-side discretization, independent of the solver lattice)."""
    w, _ = eval_superpotential(params.superpotential, grid.x)
    u = params.kappa * w
    m = params.mass
    d1 = _centered_derivative(psi1, grid.h)
    d2 = _centered_derivative(psi2, grid.h)
    r1 = (m + u) * psi1 + 1j * (w * psi2 - d2)
    r2 = -1j * (w * psi1 + d1) + (-m + u) * psi2
    return r1, r2


def reconstruct_spinor(
    params: PhysicalParams,
    E: float,
    chi: SpinEigenpair,
    phi: np.ndarray,
    grid: Grid,
) -> SpinorState:
    """Rebuild the two-component state from a reduced-problem eigenfunction:
    apply the first-order operator (with E - U in place of the mass-shifted
    diagonal) to chi * phi, derivative by centered differences.

    The substitution annihilates specific states (the |E|-minimal level of
    one branch). Annihilation cannot reach exact zero on a lattice - the
    centered derivative leaves O(h^2) noise - so it is detected against the
    healthy reconstruction scale |E| + m + 1 instead of an absolute floor,
    and raises DegenerateStateError rather than normalizing that noise. The
    returned state is normalized and carries the first-order eigenvalue
    residual, which is discretization-limited (shrinking at least linearly
    with spacing) and should be at or below 1e-3 on default grids.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != grid.x.shape:
        raise ValueError("phi must be sampled on the grid")
    w, _ = eval_superpotential(params.superpotential, grid.x)
    u = params.kappa * w
    m = params.mass
    dphi = _centered_derivative(phi, grid.h)
    c1, c2 = chi.chi
    psi1 = (E - u + m) * c1 * phi + 1j * c2 * (w * phi - dphi)
    psi2 = -1j * c1 * (w * phi + dphi) + (E - u - m) * c2 * phi
    raw = math.sqrt(grid.h * float(np.sum(np.abs(psi1) ** 2 + np.abs(psi2) ** 2)))
    if raw < 1e-3 * (abs(E) + m + 1.0):
        raise DegenerateStateError(
            f"reconstruction annihilated the state at E = {E:.6g} "
            f"(norm {raw:.3g}); it has no counterpart on this branch"
        )
    state = SpinorState.from_samples(E, psi1, psi2, grid)
    r1, r2 = _apply_dirac(params, grid, state.psi1, state.psi2)
    r1 = r1 - E * state.psi1
    r2 = r2 - E * state.psi2
    residual = math.sqrt(grid.h * float(np.sum(np.abs(r1) ** 2 + np.abs(r2) ** 2)))
    return replace(state, residual=residual)


def susy_state(
    params: PhysicalParams,
    sigma: int,
    n: int,
    grid: Grid | None = None,
    branch: int = 1,
) -> tuple[SpectrumRecord, SpinorState]:
    """End-to-end reduced route for one level: solve the nonlinear level
    condition, take the reduced eigenfunction at the solved energy, and
    reconstruct the two-component state."""
    if grid is None:
        grid = default_grid(params)
    plus, minus = solve_nonlinear_level(params, sigma, n, grid)
    rec = plus if branch > 0 else minus
    weff = effective_superpotential(params.superpotential, params.kappa, rec.E)
    t = schrodinger_operator(weff, sigma, grid)
    lo = max(n - 1, 0)
    ks = np.arange(lo + 1, n + 2, dtype=np.int64)
    vals = _indexed_eigenvalues(t, ks)
    eps = vals[np.argmin(np.abs(vals - rec.epsilon))]
    phi = tridiagonal_eigenvectors(t, np.array([eps]))[:, 0]
    pair = spin_eigensystem(params.kappa)
    chi = pair[0] if sigma > 0 else pair[1]
    state = reconstruct_spinor(params, rec.E, chi, phi, grid)
    return rec, state
