"""Direct lattice route: assemble the first-order Dirac operator as a real
symmetric matrix and diagonalize it. This is the model-independent oracle the
closed-form and SUSY routes are validated against.

Gauge and storage
-----------------
Multiplying the lower spinor component by the imaginary unit turns the complex
operator sigma_x p - sigma_y W + m sigma_z + U into the real block form

    [[ m+U,  W - d/dx ],
     [ W + d/dx, -m+U ]]

Forward differencing in the upper-right block and backward in the lower-left
make the lattice matrix exactly symmetric and exclude fermion doublers (the
split one-sided scheme has no spurious low-energy branch; its price is O(h)
accuracy away from kappa=0, recovered below by Richardson extrapolation).

Interleaving the unknowns as (lower_1, upper_1, lower_2, upper_2, ...) turns
the 2N x 2N block matrix into a plain symmetric tridiagonal:

    diagonal      (-m+U_1, m+U_1, -m+U_2, m+U_2, ...)
    off-diagonal  (W_1 + 1/h, -1/h, W_2 + 1/h, -1/h, ..., W_N + 1/h)

which is what the eigensolver kernels consume. Output spinors are gauge
restored: psi1 = upper, psi2 = -i * lower.

Level labels
------------
Lattice eigenvalues carry no quantum numbers. For the certified families each
eigenvalue's level index n_sigma is recovered by inverting the closed-form
level law at the measured energy and rounding; an eigenvalue with
n_sigma = k >= 1 is reported under both of its equivalent labels
(sigma=-1, n=k) and (sigma=+1, n=k-1) - one physical state, two bookkeeping
views - so degeneracy pairing works uniformly across routes. Tabulated
superpotentials get per-branch ordinal labels instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceError
from .linalg import (
    SymmetricBanded,
    Tridiagonal,
    _indexed_eigenvalues,
    sturm_count,
    tridiagonal_eigenvectors,
)
from .model import (
    Family,
    Grid,
    HALF_PI,
    PhysicalParams,
    SpectrumRecord,
    SpinorState,
    build_grid,
    eval_superpotential,
    localization_of,
)

__all__ = [
    "DiracMatrix",
    "assemble_dirac_matrix",
    "dirac_spectrum",
    "converge_box",
    "converge_box_full",
    "ConvergeResult",
    "localization_metrics",
    "eigenvalue_count_in_window",
    "default_grid",
]

DEFAULT_N = 4000
DEFAULT_L = 20.0
DEFAULT_DIM_CAP = 65536
DEFAULT_MAX_DOUBLINGS = 6


def default_grid(params: PhysicalParams, n: int = DEFAULT_N, L: float | None = None) -> Grid:
    """Desk-scale default lattice: L=20, N=4000 for unbounded families;
    the clipped (-pi/2, pi/2) interval with N=4000 for the tangent family."""
    family = params.superpotential.family
    if family is Family.TANGENT:
        return build_grid(HALF_PI, n, family)
    if family is Family.TABULATED:
        lo, hi = params.superpotential.domain
        half = min(hi, -lo)
        return build_grid(half if L is None else min(L, half), n, family)
    return build_grid(DEFAULT_L if L is None else L, n, family)


@dataclass(frozen=True)
class DiracMatrix:
    """Assembled lattice operator (interleaved storage, bandwidth 1)."""

    banded: SymmetricBanded
    grid: Grid
    params: PhysicalParams

    def tridiagonal(self) -> Tridiagonal:
        n = self.banded.n
        return Tridiagonal(self.banded.bands[0], self.banded.bands[1][: n - 1])

    def offdiag_block(self) -> np.ndarray:
        """Dense N x N upper-right block B = diag(W) - D_forward (for
        inspection and structural tests; the solver never materializes it)."""
        n = self.grid.n
        h = self.grid.h
        w = eval_superpotential(self.params.superpotential, self.grid.x)[0]
        b = np.diag(w + 1.0 / h)
        idx = np.arange(n - 1)
        b[idx, idx + 1] = -1.0 / h
        return b

    def diagonal_blocks(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonals of the upper-left (m+U) and lower-right (-m+U) blocks."""
        u = self.params.kappa * eval_superpotential(
            self.params.superpotential, self.grid.x
        )[0]
        m = self.params.mass
        return m + u, -m + u


def assemble_dirac_matrix(params: PhysicalParams, grid: Grid) -> DiracMatrix:
    """2N x 2N real symmetric lattice operator with Dirichlet walls.

    Raises DomainError if the grid leaves the superpotential's domain.
    """
    w = eval_superpotential(params.superpotential, grid.x)[0]
    u = params.kappa * w
    m = params.mass
    n = grid.n
    h = grid.h
    d = np.empty(2 * n)
    d[0::2] = -m + u
    d[1::2] = m + u
    e = np.empty(2 * n - 1)
    e[0::2] = w + 1.0 / h
    e[1::2] = -1.0 / h
    bands = np.zeros((2, 2 * n))
    bands[0] = d
    bands[1, : 2 * n - 1] = e
    return DiracMatrix(
        banded=SymmetricBanded(n=2 * n, b=1, bands=bands), grid=grid, params=params
    )


def _lattice_eigenvalues(params, grid, count, warm=None):
    """The `count` smallest-|E| eigenvalues of each sign.

    Returns (tridiagonal, E_neg, E_pos); E_pos ascending (closest to zero
    first), E_neg descending (closest to zero first). Zero eigenvalues land on
    the positive side. `warm` = optional (neg, pos) guess arrays, same layout.
    """
    t = assemble_dirac_matrix(params, grid).tridiagonal()
    c0 = sturm_count(t, 0.0)
    k_neg = np.arange(max(c0 - count + 1, 1), c0 + 1, dtype=np.int64)
    k_pos = np.arange(c0 + 1, min(c0 + count, t.n) + 1, dtype=np.int64)
    ks = np.concatenate([k_neg, k_pos])
    warm_vals = None
    if warm is not None:
        wneg, wpos = warm
        if wneg.size >= k_neg.size and wpos.size >= k_pos.size:
            warm_vals = np.concatenate(
                [wneg[: k_neg.size][::-1], wpos[: k_pos.size]]
            )
    vals = _indexed_eigenvalues(t, ks, warm=warm_vals)
    e_neg = vals[: k_neg.size][::-1]
    e_pos = vals[k_neg.size :]
    return t, e_neg, e_pos


def _quantize_n_sigma(E: float, params: PhysicalParams) -> int | None:
    """Invert the closed-form level law at a measured energy; None when no
    law applies (tabulated family or |kappa| >= 1)."""
    sp = params.superpotential
    kappa = params.kappa
    if abs(kappa) >= 1.0 or sp.family is Family.TABULATED:
        return None
    omk = 1.0 - kappa * kappa
    eps = E * E / omk - params.mass**2
    if sp.family is Family.LINEAR:
        if not (sp.w1 > 0.0):
            return None
        step = 2.0 * sp.w1 * math.sqrt(omk)
        return max(int(round(eps / step)), 0)
    alpha = sp.alpha0 * math.sqrt(omk)
    beta = kappa * E / math.sqrt(omk)
    acc = alpha * alpha + eps - beta * beta
    t_sq = 0.5 * (acc + math.sqrt(acc * acc + 4.0 * (alpha * beta) ** 2))
    return max(int(round(math.sqrt(t_sq) - alpha)), 0)


def _labels_for(E: float, ordinal: int, params: PhysicalParams):
    """(sigma, n) label views of one eigenvalue. Certified families with
    n_sigma >= 1 yield both equivalent labels; the ground and unlabeled cases
    yield one."""
    k = _quantize_n_sigma(E, params)
    if k is None:
        return [(-1, ordinal)]
    if k == 0:
        return [(-1, 0)]
    return [(-1, k), (1, k - 1)]


def _epsilon_of(E: float, params: PhysicalParams) -> float:
    omk = 1.0 - params.kappa**2
    if omk <= 0.0:
        return math.nan
    return E * E / omk - params.mass**2


def _record_sort_key(rec: SpectrumRecord):
    return (abs(rec.E), -rec.branch, rec.sigma)


def _build_records(params, e_neg, e_pos, converged=None, err=None):
    """Expand signed eigenvalue lists into label-view SpectrumRecords.

    converged/err are optional parallel dicts keyed by (branch, ordinal).
    Returns records plus a parallel list of (branch, ordinal) provenance used
    to attach states.
    """
    vals_neg = np.asarray(e_neg, dtype=float)
    vals_pos = np.asarray(e_pos, dtype=float)
    spread = max(
        float(np.max(np.abs(vals_neg), initial=0.0)),
        float(np.max(np.abs(vals_pos), initial=0.0)),
    )
    # zero modes (massless ground level) emerge as +-1e-13 noise; snap them so
    # branch bookkeeping does not see a sign
    snap = 1e-11 * max(1.0, spread)
    records = []
    origins = []
    for branch, values in ((1, vals_pos), (-1, vals_neg)):
        for j, raw in enumerate(values):
            val = 0.0 if abs(float(raw)) <= snap else float(raw)
            b = branch if val != 0.0 else 1
            flag = converged[(branch, j)] if converged is not None else False
            estimate = err[(branch, j)] if err is not None else None
            for sigma, n in _labels_for(float(val), j, params):
                records.append(
                    SpectrumRecord(
                        route="dirac",
                        branch=b,
                        sigma=sigma,
                        n=n,
                        E=float(val),
                        epsilon=_epsilon_of(float(val), params),
                        converged=flag,
                        err_est=estimate,
                    )
                )
                origins.append((branch, j))
    order = sorted(range(len(records)), key=lambda i: _record_sort_key(records[i]))
    return [records[i] for i in order], [origins[i] for i in order]


def _states_for(params, grid, t, e_neg, e_pos):
    """Inverse-iteration eigenvectors for the given eigenvalues, gauge
    restored and normalized; keyed by (branch, ordinal)."""
    lams = np.concatenate([np.asarray(e_neg), np.asarray(e_pos)])
    keys = [(-1, j) for j in range(len(e_neg))] + [(1, j) for j in range(len(e_pos))]
    vecs = tridiagonal_eigenvectors(t, lams)
    states = {}
    for col, (key, lam) in enumerate(zip(keys, lams)):
        z = vecs[:, col]
        psi1 = z[1::2].astype(complex)
        psi2 = -1j * z[0::2]
        states[key] = SpinorState.from_samples(lam, psi1, psi2, grid)
    return states


def dirac_spectrum(params: PhysicalParams, grid: Grid, count: int, refine: int = 0):
    """The `count` smallest-|E| eigenpairs of each sign, as (record, state)
    pairs sorted by |E| (records expanded per label view; aliased records
    share one state). converged=False on every record: box convergence is a
    separate step (converge_box).

    refine adds that many nested half-spacing grids and Richardson-combines
    the eigenvalues, cancelling the split-difference scheme's leading error
    terms; eigenvectors are then sampled on the finest grid at its own raw
    eigenvalues.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if refine not in (0, 1, 2):
        raise ValueError("refine must be 0, 1, or 2")
    if refine == 0:
        t, e_neg, e_pos = _lattice_eigenvalues(params, grid, count)
        records, origins = _build_records(params, e_neg, e_pos)
        states = _states_for(params, grid, t, e_neg, e_pos)
        return [(rec, states[origin]) for rec, origin in zip(records, origins)]
    warm_map: dict = {}
    e_neg, e_pos, _ = _richardson_levels(
        params, grid, count, DEFAULT_DIM_CAP, warm_map, depth=refine + 1
    )
    fine = _refined_grid(grid, refine)
    raw_neg, raw_pos = warm_map[(fine.half_width, fine.n)]
    t = assemble_dirac_matrix(params, fine).tridiagonal()
    records, origins = _build_records(params, e_neg, e_pos)
    states = _states_for(
        params, fine, t, raw_neg[: len(e_neg)], raw_pos[: len(e_pos)]
    )
    return [(rec, states[origin]) for rec, origin in zip(records, origins)]


@dataclass(frozen=True)
class ConvergeResult:
    """converge_box output: records (converged flags and error estimates set),
    states sampled on the caller's base grid, that grid, and the number of
    refinement rounds actually run."""

    records: list
    states: list
    base_grid: Grid
    rounds: int


def _refined_grid(grid: Grid, factor_log2: int) -> Grid:
    # halving h exactly: N -> 2N+1 keeps x_i = -L + i h nested
    n = grid.n
    for _ in range(factor_log2):
        n = 2 * n + 1
    return Grid(half_width=grid.half_width, n=n)


def _richardson_levels(params, grid, count, dim_cap, warm_map, depth=3):
    """Eigenvalues on (h, h/2, h/4) grids combined as (8 E3 - 6 E2 + E1)/3,
    which cancels both the h and h^2 error terms of the split-difference
    scheme. Degrades to a two-grid or single-grid estimate near the dimension
    cap (or when depth < 3). Returns (E_neg, E_pos, scheme_used)."""
    grids = [_refined_grid(grid, k) for k in range(depth)]
    grids = [g for g in grids if 2 * g.n <= dim_cap]
    if not grids:
        raise ResourceError(
            f"grid with 2N = {2 * grid.n} exceeds the dimension cap {dim_cap}"
        )
    sols = []
    for g in grids:
        key = (g.half_width, g.n)
        warm = warm_map.get(key) or warm_map.get("last")
        t, e_neg, e_pos = _lattice_eigenvalues(params, g, count, warm=warm)
        warm_map[key] = (e_neg, e_pos)
        warm_map["last"] = (e_neg, e_pos)
        sols.append((e_neg, e_pos))
    k = min(min(len(s[0]) for s in sols), count)
    j = min(min(len(s[1]) for s in sols), count)

    def guard(extrap, raw):
        # a sign flip means the sequence is not in the asymptotic regime
        # (under-resolved grids); the raw finest value is then the honest one
        return np.where(np.sign(extrap) != np.sign(raw), raw, extrap)

    if len(sols) == 3:
        combine = lambda a, b, c: guard((8.0 * c - 6.0 * b + a) / 3.0, c)
        e_neg = combine(sols[0][0][:k], sols[1][0][:k], sols[2][0][:k])
        e_pos = combine(sols[0][1][:j], sols[1][1][:j], sols[2][1][:j])
        scheme = "h3"
    elif len(sols) == 2:
        e_neg = guard(2.0 * sols[1][0][:k] - sols[0][0][:k], sols[1][0][:k])
        e_pos = guard(2.0 * sols[1][1][:j] - sols[0][1][:j], sols[1][1][:j])
        scheme = "h2"
    else:
        e_neg, e_pos = sols[0][0][:k], sols[0][1][:j]
        scheme = "h1"
    return e_neg, e_pos, scheme


# the staggered coupling W + 1/h must keep one sign across the box, or the
# scheme grows spurious interior states; h * sup|W| is held below this
_SCHEME_VALIDITY = 0.7


def _doubled_box(params: PhysicalParams, cur: Grid) -> Grid:
    """Next box for the wall-artifact test: half-width doubles, and N grows
    at least proportionally (fixed h) but further if the larger box pushes
    h * sup|W| past the validity bound."""
    half = 2.0 * cur.half_width
    xs = np.linspace(-half, half, 1025)
    w_sup = float(np.max(np.abs(eval_superpotential(params.superpotential, xs)[0])))
    n_valid = int(math.ceil(2.0 * half * w_sup / _SCHEME_VALIDITY))
    return Grid(half_width=half, n=max(2 * cur.n, n_valid))


_CONVERGE_CACHE: dict = {}


def _cache_key(params, count, tol, grid, max_doublings, dim_cap):
    sp = params.superpotential
    if sp.family is Family.TABULATED:
        return None
    return (
        sp.family,
        sp.w1,
        sp.alpha0,
        params.mass,
        params.kappa,
        count,
        tol,
        grid.half_width,
        grid.n,
        max_doublings,
        dim_cap,
    )


def converge_box_full(
    params: PhysicalParams,
    count: int,
    tol: float = 1e-6,
    grid: Grid | None = None,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> ConvergeResult:
    """Refine until every level is stationary or the budget runs out.

    Linear (and tabulated) family: doubles the box half-width with N growing
    proportionally (fixed h), the wall-artifact test. Tangent family: the
    domain is pinned at (-pi/2, pi/2), so rounds refine N only. Every round's
    value is Richardson-extrapolated over an (h, h/2, h/4) triple internally.

    A level is converged when its value moves by less than tol (relative,
    against max(|E|, 1)) between rounds; for the tangent family a
    participation ratio jumping by 2x or more between rounds also blocks the
    flag (wall-collapsing states). Levels still moving when rounds stop are
    classified unbound (converged=False). Raises ResourceError only if the
    initial grid already exceeds the dimension cap; later rounds stop early
    instead.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    base = grid if grid is not None else default_grid(params)
    key = _cache_key(params, count, tol, base, max_doublings, dim_cap)
    if key is not None and key in _CONVERGE_CACHE:
        return _CONVERGE_CACHE[key]
    if 2 * base.n > dim_cap:
        raise ResourceError(
            f"initial grid with 2N = {2 * base.n} exceeds the dimension cap {dim_cap}"
        )
    family = params.superpotential.family
    lo, hi = params.superpotential.domain
    grow_box = math.isinf(hi) and math.isinf(lo)
    warm_map: dict = {}

    cur = base
    e_neg, e_pos, _ = _richardson_levels(params, cur, count, dim_cap, warm_map)
    base_vals = warm_map.get((base.half_width, base.n))
    prev_pr = _round_pr(params, cur, e_neg, e_pos) if family is Family.TANGENT else None
    converged = {(-1, j): False for j in range(len(e_neg))}
    converged.update({(1, j): False for j in range(len(e_pos))})
    err = {k: None for k in converged}
    rounds = 0
    for _ in range(max_doublings):
        if grow_box:
            nxt = _doubled_box(params, cur)
        else:
            nxt = Grid(half_width=cur.half_width, n=2 * cur.n + 1)
        # each round must afford its full (h, h/2, h/4) triple: a degraded
        # scheme would fold discretization error into the inter-round delta
        if 2 * _refined_grid(nxt, 2).n > dim_cap:
            break
        try:
            n_neg, n_pos, _ = _richardson_levels(params, nxt, count, dim_cap, warm_map)
        except ResourceError:
            break
        rounds += 1
        k = min(len(e_neg), len(n_neg))
        j = min(len(e_pos), len(n_pos))
        pr_now = _round_pr(params, nxt, n_neg, n_pos) if family is Family.TANGENT else None
        for branch, old, new, span in ((-1, e_neg, n_neg, k), (1, e_pos, n_pos, j)):
            for i in range(span):
                delta = abs(float(new[i]) - float(old[i]))
                err[(branch, i)] = delta
                flag = delta <= tol * max(abs(float(new[i])), 1.0)
                if pr_now is not None and prev_pr is not None:
                    ratio = pr_now[(branch, i)] / prev_pr[(branch, i)]
                    if ratio >= 2.0 or ratio <= 0.5:
                        flag = False
                converged[(branch, i)] = flag
        e_neg, e_pos = n_neg[:k], n_pos[:j]
        cur = nxt
        prev_pr = pr_now
        if all(converged.values()):
            break

    records, origins = _build_records(params, e_neg, e_pos, converged, err)
    t_base = assemble_dirac_matrix(params, base).tridiagonal()
    b_neg, b_pos = base_vals
    state_map = _states_for(params, base, t_base, b_neg, b_pos)
    states = [state_map.get(origin) for origin in origins]
    result = ConvergeResult(records=records, states=states, base_grid=base, rounds=rounds)
    if key is not None:
        if len(_CONVERGE_CACHE) >= 32:
            _CONVERGE_CACHE.pop(next(iter(_CONVERGE_CACHE)))
        _CONVERGE_CACHE[key] = result
    return result


def _round_pr(params, grid, e_neg, e_pos):
    """Participation ratios of this round's states (tangent diagnostic)."""
    t = assemble_dirac_matrix(params, grid).tridiagonal()
    states = _states_for(params, grid, t, e_neg, e_pos)
    return {key: st.participation_ratio for key, st in states.items()}


def converge_box(
    params: PhysicalParams,
    count: int,
    tol: float = 1e-6,
    grid: Grid | None = None,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    dim_cap: int = DEFAULT_DIM_CAP,
):
    """Spectrum records with convergence flags set (see converge_box_full)."""
    return converge_box_full(params, count, tol, grid, max_doublings, dim_cap).records


def localization_metrics(state: SpinorState, grid: Grid):
    """(participation ratio, rms width) of a normalized state on its grid."""
    return localization_of(state.psi1, state.psi2, grid.x, grid.h)


def eigenvalue_count_in_window(
    params: PhysicalParams, grid: Grid, lo: float, hi: float
) -> int:
    """Exact lattice eigenvalue count in (lo, hi] by Sturm counting (used by
    the fermion-doubling audit: doublers would double it)."""
    t = assemble_dirac_matrix(params, grid).tridiagonal()
    return sturm_count(t, hi) - sturm_count(t, lo)
