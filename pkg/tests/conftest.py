"""Shared parameter builders.

Expensive lattice convergence runs are cached inside the library keyed on the
exact call signature, so every test that needs a converged spectrum uses the
same canonical calls: linear families with count=8, tan families with count=5,
tol=1e-6, default grid.
"""

from diracosc.model import PhysicalParams, Superpotential


def linear_params(kappa: float, mass: float = 1.0, w1: float = 1.0) -> PhysicalParams:
    return PhysicalParams(
        mass=mass, kappa=kappa, superpotential=Superpotential.linear(w1)
    )


def tan_params(kappa: float, alpha0: float = 5.0, mass: float = 1.0) -> PhysicalParams:
    return PhysicalParams(
        mass=mass, kappa=kappa, superpotential=Superpotential.tangent(alpha0)
    )
