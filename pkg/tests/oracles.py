"""Independent reference implementations used to cross-check the fast paths."""

import numpy as np

from phaselift.measurement import apply_adjoint, apply_measurement
from phaselift.solver import prox_psd_trace


def plain_proximal_gradient(ens, b, lam, step, iters):
    """Unaccelerated projected proximal gradient, fixed step, from zero."""
    dtype = np.float64 if ens.field == "real" else np.complex128
    X = np.zeros((ens.n, ens.n), dtype=dtype)
    for _ in range(iters):
        grad = apply_adjoint(ens, apply_measurement(ens, X) - b)
        X = prox_psd_trace(X - step * grad, step * lam)
    r = apply_measurement(ens, X) - b
    obj = 0.5 * float(r @ r) + lam * float(np.trace(X).real)
    return X, obj


def phase_grid_rel_mse(x, x_hat, num_phases=100_000):
    """Brute-force minimization of ||c x - x_hat||^2 / ||x||^2 over a phase grid."""
    phases = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, num_phases, endpoint=False))
    if not np.iscomplexobj(x) and not np.iscomplexobj(x_hat):
        phases = np.array([1.0, -1.0])
    nx2 = float(np.real(np.vdot(x, x)))
    nh2 = float(np.real(np.vdot(x_hat, x_hat)))
    cross = np.vdot(x_hat, x)
    vals = nx2 + nh2 - 2.0 * np.real(np.conj(phases) * cross)
    return float(vals.min()) / nx2
