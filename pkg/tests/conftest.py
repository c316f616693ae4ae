"""Shared random-input generators for the test suite."""

import numpy as np

import bogodiag as bd


def random_fermion_form(rng, n):
    a = rng.uniform(-1.0, 1.0, (n, n))
    b = rng.uniform(-1.0, 1.0, (n, n))
    return bd.QuadraticForm(
        bd.Statistics.FERMION,
        U=(a - a.T) / 2.0,
        V=(b + b.T) / 2.0,
        const=float(rng.uniform(-1.0, 1.0)),
    )


def random_boson_form(rng, n):
    a = rng.uniform(-1.0, 1.0, (n, n))
    b = rng.uniform(-1.0, 1.0, (n, n))
    return bd.QuadraticForm(
        bd.Statistics.BOSON,
        U=(a + a.T) / 2.0,
        V=(b + b.T) / 2.0,
        const=float(rng.uniform(-1.0, 1.0)),
    )


def bounded_boson_form(rng, n, seed, spread=0.3):
    """Bounded-below discrete form: diagonal t > 0, r < 0 data pushed
    through a random positive canonical transform.

    Frequencies and squeezing are kept moderate so that truncated-oracle
    comparisons converge well below the test tolerances.
    """
    nu = rng.uniform(0.8, 1.3, n)
    rho = rng.uniform(0.85, 1.2, n)
    std0 = bd.StandardForm(
        statistics=bd.Statistics.BOSON,
        T=np.diag(nu * rho),
        R=np.diag(-nu / rho),
        k0=float(rng.uniform(-1.0, 1.0)),
    )
    b = bd.random_canonical(bd.Statistics.BOSON, n, seed=seed, positive=True, spread=spread)
    return bd.from_standard(bd.apply_transform(std0, b))


def random_invertible_jacobian(rng, n, min_det=1e-2):
    while True:
        jac = rng.uniform(-1.0, 1.0, (n, n))
        if abs(np.linalg.det(jac)) > min_det:
            return jac
