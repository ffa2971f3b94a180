"""Reduced route: spin eigensystem, effective superpotential, energy maps,
the energy-dependent operator, level solving, and spinor reconstruction."""

import math

import numpy as np
import pytest

from diracosc.errors import (
    BracketError,
    CriticalFieldError,
    DegenerateStateError,
    DomainError,
    NoRealEnergyError,
)
from diracosc.linalg import _indexed_eigenvalues
from diracosc.model import Grid, PhysicalParams, Superpotential
from diracosc.susy_reduction import (
    E_from_epsilon,
    effective_superpotential,
    epsilon_from_E,
    reconstruct_spinor,
    schrodinger_operator,
    solve_nonlinear_level,
    spin_eigensystem,
    squared_form_potential,
    susy_state,
)
from diracosc.dirac_solver import converge_box_full

from conftest import linear_params, tan_params

SPIN_MATRIX = lambda kappa: np.array(
    [[-1.0, 1j * kappa], [1j * kappa, 1.0]], dtype=complex
)


def lowest(t, k):
    return _indexed_eigenvalues(t, np.arange(1, k + 1, dtype=np.int64))


# ------------------------------------------------------------ spin system


def test_spin_eigensystem_zero_coupling():
    plus, minus = spin_eigensystem(0.0)
    assert (plus.sigma, minus.sigma) == (1, -1)
    assert plus.lam == 1.0 and minus.lam == -1.0
    np.testing.assert_allclose(plus.chi, [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(minus.chi, [1.0, 0.0], atol=1e-15)


def test_spin_eigensystem_worked_values():
    plus, minus = spin_eigensystem(0.6)
    assert plus.lam == pytest.approx(0.8, abs=1e-15)
    assert minus.lam == pytest.approx(-0.8, abs=1e-15)
    np.testing.assert_allclose(plus.chi, [0.31623j, 0.94868], atol=1e-5)
    # dominant component rotated to the positive real axis
    assert plus.chi[1].imag == 0.0 and plus.chi[1].real > 0


@pytest.mark.parametrize("kappa", [0.0, 0.3, 0.6, 0.9, 0.999, -0.8])
def test_spin_eigensystem_invariants(kappa):
    mat = SPIN_MATRIX(kappa)
    for pair in spin_eigensystem(kappa):
        assert pair.lam**2 + kappa**2 == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(pair.chi) == pytest.approx(1.0, abs=1e-12)
        resid = mat @ pair.chi - pair.lam * pair.chi
        assert np.linalg.norm(resid) <= 1e-12


@pytest.mark.parametrize("kappa", [1.0, -1.0, 1.05])
def test_spin_eigensystem_critical(kappa):
    with pytest.raises(CriticalFieldError):
        spin_eigensystem(kappa)


# ------------------------------------------------- effective superpotential


def test_effective_superpotential_identity_at_zero_coupling():
    xs = np.linspace(-5.0, 5.0, 101)
    for sp in (Superpotential.linear(1.0), Superpotential.tangent(5.0)):
        weff = effective_superpotential(sp, 0.0, 7.3)
        xs_in = xs if sp.family.value == "linear" else xs * 0.3
        w = sp.w1 * xs_in if sp.family.value == "linear" else 5.0 * np.tan(xs_in)
        np.testing.assert_allclose(weff.value(xs_in), w, atol=1e-12)


def test_effective_superpotential_linear_worked_values():
    weff = effective_superpotential(Superpotential.linear(1.0), 0.6, 1.0)
    assert weff.slope == pytest.approx(0.8, abs=1e-15)
    assert weff.x0 == pytest.approx(0.9375, abs=1e-15)
    xs = np.linspace(-3.0, 3.0, 7)
    np.testing.assert_allclose(weff.value(xs), 0.8 * xs + 0.75, atol=1e-14)


def test_effective_superpotential_tangent_worked_values():
    weff = effective_superpotential(Superpotential.tangent(5.0), 0.5, 2.0)
    assert weff.alpha == pytest.approx(4.330127, abs=1e-6)
    assert weff.beta == pytest.approx(1.154701, abs=1e-6)


@pytest.mark.parametrize(
    "sp,kappa,E",
    [
        (Superpotential.linear(2.0), 0.6, 1.3),
        (Superpotential.linear(1.0), -0.4, -0.7),
        (Superpotential.tangent(5.0), 0.5, 2.87),
        (Superpotential.tangent(2.5), 0.9, 0.9),
    ],
)
def test_family_form_matches_generic_form(sp, kappa, E):
    weff = effective_superpotential(sp, kappa, E)
    xs = np.linspace(-4.0, 4.0, 401) if sp.family.value == "linear" else np.linspace(
        -1.4, 1.4, 401
    )
    np.testing.assert_allclose(weff.value(xs), weff.value_reference(xs), atol=1e-12)


def test_effective_superpotential_critical():
    with pytest.raises(CriticalFieldError):
        effective_superpotential(Superpotential.linear(1.0), 1.0, 1.0)


# ------------------------------------------------------------- energy maps


def test_epsilon_from_E_examples():
    assert epsilon_from_E(1.0, 0.0, 1.0) == 0.0
    assert epsilon_from_E(1.289961, 0.6, 1.0) == pytest.approx(1.6, abs=1e-5)
    assert epsilon_from_E(0.0, 0.3, 2.0) == -4.0


def test_E_from_epsilon_examples():
    assert E_from_epsilon(0.0, 0.0, 1.0) == (1.0, -1.0)
    ep, em = E_from_epsilon(1.6, 0.6, 1.0)
    assert ep == pytest.approx(math.sqrt(0.64 * 2.6), rel=1e-12)
    assert em == -ep
    with pytest.raises(NoRealEnergyError):
        E_from_epsilon(-5.0, 0.0, 2.0)


def test_energy_epsilon_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(50):
        kappa = float(rng.uniform(-0.95, 0.95))
        m = float(rng.uniform(0.1, 3.0))
        eps = float(rng.uniform(-m * m, 40.0))
        ep, em = E_from_epsilon(eps, kappa, m)
        for e in (ep, em):
            back = epsilon_from_E(e, kappa, m)
            assert back == pytest.approx(eps, rel=1e-12, abs=1e-12)


# ------------------------------------------------------- reduced operator


def test_reduced_operator_ladder_both_projections():
    # sigma=-1 keeps the annihilated ground at 0; sigma=+1 starts at 2
    weff = effective_superpotential(Superpotential.linear(1.0), 0.0, 1.0)
    for sigma, expect in ((-1, [0.0, 2.0, 4.0]), (1, [2.0, 4.0, 6.0])):
        vals = []
        for n in (2000, 4001):
            t = schrodinger_operator(weff, sigma, Grid(half_width=20.0, n=n))
            vals.append(lowest(t, 3))
        ext = (4.0 * vals[1] - vals[0]) / 3.0
        np.testing.assert_allclose(ext, expect, atol=1e-5)


def test_partner_spectra_shift_by_one_level():
    weff = effective_superpotential(Superpotential.linear(1.0), 0.6, 1.3)
    ems, eps_ = [], []
    for n in (2000, 4001):
        g = Grid(half_width=20.0, n=n)
        ems.append(lowest(schrodinger_operator(weff, -1, g), 5))
        eps_.append(lowest(schrodinger_operator(weff, 1, g), 4))
    em = (4.0 * ems[1] - ems[0]) / 3.0
    ep = (4.0 * eps_[1] - eps_[0]) / 3.0
    np.testing.assert_allclose(ep, em[1:], atol=1e-6)


@pytest.mark.parametrize(
    "sp,kappa,E,sigma",
    [
        (Superpotential.linear(1.0), 0.0, 1.0, -1),
        (Superpotential.linear(2.0), 0.6, 1.3, 1),
        (Superpotential.tangent(5.0), 0.5, 2.87, -1),
        (Superpotential.tangent(2.5), 0.9, 0.9, 1),
    ],
)
def test_potential_identity_between_forms(sp, kappa, E, sigma):
    # the operator diagonal minus the direct squared-form potential must be
    # the constant kappa^2 E^2/(1-kappa^2) at every node
    grid = (
        Grid(half_width=10.0, n=301)
        if sp.family.value == "linear"
        else Grid(half_width=1.5, n=301)
    )
    weff = effective_superpotential(sp, kappa, E)
    t = schrodinger_operator(weff, sigma, grid)
    direct = squared_form_potential(sp, kappa, E, sigma, grid.x)
    const = t.d - 2.0 / grid.h**2 - direct
    expect = kappa**2 * E**2 / (1.0 - kappa**2)
    np.testing.assert_allclose(const, expect, atol=1e-10 * max(1.0, abs(expect)))


def test_reduced_operator_validation():
    weff = effective_superpotential(Superpotential.tangent(5.0), 0.0, 1.0)
    with pytest.raises(ValueError):
        schrodinger_operator(weff, 0, Grid(half_width=1.0, n=10))
    with pytest.raises(DomainError):
        schrodinger_operator(weff, 1, Grid(half_width=2.0, n=10))


# ------------------------------------------------------------ level solving


def test_solve_level_zero_coupling_exact():
    plus, minus = solve_nonlinear_level(linear_params(0.0), -1, 1)
    assert plus.E == pytest.approx(math.sqrt(3.0), rel=1e-6)
    assert minus.E == pytest.approx(-math.sqrt(3.0), rel=1e-6)
    assert plus.route == "susy" and plus.converged
    assert plus.err_est is not None
    assert plus.epsilon == pytest.approx(plus.E**2 - 1.0, abs=1e-12)


def test_solve_level_couples_through_energy():
    # n_sigma = 1 via both of its label views; the two independently solved
    # operators must agree on the energy
    a, _ = solve_nonlinear_level(linear_params(0.6), -1, 1)
    b, _ = solve_nonlinear_level(linear_params(0.6), 1, 0)
    assert a.E == pytest.approx(1.289961, abs=1e-5)
    assert b.E == pytest.approx(a.E, abs=1e-8)


@pytest.mark.parametrize("family", ["linear", "tan"])
def test_solve_matches_closed_form_at_zero_coupling(family):
    params = linear_params(0.0) if family == "linear" else tan_params(0.0)
    from diracosc import analytic

    for n in range(5):
        plus, _ = solve_nonlinear_level(params, -1, n)
        exact, _ = analytic.level_energies(params, n)
        assert plus.E == pytest.approx(exact, rel=1e-6)


def test_solve_supercritical_refuses():
    with pytest.raises(CriticalFieldError):
        solve_nonlinear_level(tan_params(1.05), -1, 0)
    with pytest.raises(CriticalFieldError):
        solve_nonlinear_level(linear_params(1.0), -1, 0)


def test_solve_massless_zero_level():
    params = PhysicalParams(mass=0.0, kappa=0.0, superpotential=Superpotential.linear(1.0))
    plus, minus = solve_nonlinear_level(params, -1, 0)
    assert plus.E == 0.0 and minus.E == 0.0
    assert plus.converged


def test_solve_coarse_grid_cannot_bracket():
    # lattice bias on a 25-node grid pushes the level far outside the seeded
    # search window; the honest outcome is a refusal, not a wrong level
    with pytest.raises(BracketError):
        solve_nonlinear_level(linear_params(0.6), -1, 8, grid=Grid(half_width=20.0, n=25))


def test_solve_argument_validation():
    with pytest.raises(ValueError):
        solve_nonlinear_level(linear_params(0.0), 0, 1)
    with pytest.raises(ValueError):
        solve_nonlinear_level(linear_params(0.0), -1, -1)


# ---------------------------------------------------------- reconstruction


def test_reconstructed_ground_matches_lattice_route():
    res = converge_box_full(linear_params(0.0), count=8, tol=1e-6)
    idx = min(
        range(len(res.records)),
        key=lambda i: (abs(res.records[i].E), -res.records[i].branch),
    )
    rec, st = susy_state(linear_params(0.0), -1, 0, grid=res.base_grid)
    assert rec.E == pytest.approx(res.records[idx].E, abs=1e-6)
    direct = res.states[idx]
    h = res.base_grid.h
    overlap = abs(
        h * np.sum(np.conj(st.psi1) * direct.psi1 + np.conj(st.psi2) * direct.psi2)
    )
    assert overlap >= 0.999
    assert st.norm == pytest.approx(1.0, abs=1e-10)
    assert st.residual <= 1e-3


def test_reconstruction_residual_shrinks_with_spacing():
    resids = []
    for n in (1000, 2001):
        _, st = susy_state(linear_params(0.0), -1, 1, grid=Grid(half_width=20.0, n=n))
        resids.append(st.residual)
    assert resids[0] / resids[1] >= 1.5  # at least first order


def test_reconstruction_annihilates_minimal_negative_level():
    with pytest.raises(DegenerateStateError):
        susy_state(linear_params(0.0), -1, 0, branch=-1)


def test_negative_branch_excited_level_reconstructs():
    rec, st = susy_state(linear_params(0.0), -1, 1, branch=-1)
    assert rec.E == pytest.approx(-math.sqrt(3.0), rel=1e-6)
    assert st.norm == pytest.approx(1.0, abs=1e-10)
    assert st.residual <= 1e-3


def test_reconstruct_spinor_validates_sampling():
    params = linear_params(0.0)
    grid = Grid(half_width=20.0, n=100)
    plus, _ = spin_eigensystem(0.0)
    with pytest.raises(ValueError):
        reconstruct_spinor(params, 1.0, plus, np.ones(7), grid)
