"""Rank-1 extraction, debiasing, and phase-invariant error metrics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hermitian import TOL, as_hermitian, as_signal, eig


@dataclass(frozen=True)
class RecoveryResult:
    x_hat: np.ndarray
    x_hat_debiased: np.ndarray
    lambda1: float
    spectrum: np.ndarray
    rel_mse: float | None = None
    rel_rms: float | None = None


def extract_rank1(X_hat: np.ndarray) -> tuple[np.ndarray, float]:
    """Top rank-1 component of a (numerically) PSD matrix.

    Returns (sqrt(lambda_1) * u_1, lambda_1) using the deterministic
    eigenvector convention of `hermitian.eig`.  Warns when the top
    eigenvalue is (nearly) degenerate, since the choice of u_1 is then
    ill-posed.
    """
    X_hat = as_hermitian(X_hat)
    ed = eig(X_hat)
    fro = float(np.linalg.norm(ed.eigenvalues))
    if ed.eigenvalues[-1] < -TOL.psd_extraction_rtol * max(fro, 1e-300):
        raise ValueError("matrix is significantly non-PSD; cannot extract a rank-1 component")
    lam1 = max(float(ed.eigenvalues[0]), 0.0)
    if lam1 == 0.0:
        return np.zeros(X_hat.shape[0], dtype=X_hat.dtype), 0.0
    if X_hat.shape[0] > 1 and ed.eigenvalues[0] - ed.eigenvalues[1] <= 1e-9 * max(1.0, lam1):
        warnings.warn("top eigenvalue is nearly degenerate; rank-1 extraction is ill-posed")
    return np.sqrt(lam1) * ed.eigenvectors[:, 0], lam1


def debias(x_hat: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    """Rescale x_hat to carry the full (nonnegative part of the) spectral energy.

    Multiplies by s = sqrt(sum_k max(lambda_k, 0)) / ||x_hat||; eigenvalues
    are clipped at zero so tiny negative leakage cannot corrupt s.
    """
    x_hat = np.asarray(x_hat)
    nrm = float(np.linalg.norm(x_hat))
    if nrm == 0.0:
        return x_hat.copy()
    energy = float(np.sum(np.maximum(np.asarray(spectrum, dtype=np.float64), 0.0)))
    return x_hat * (np.sqrt(energy) / nrm)


def rel_mse(x: np.ndarray, x_hat: np.ndarray) -> float:
    """Relative MSE modulo a global phase: min_{|c|=1} ||c x - x_hat||^2 / ||x||^2.

    Closed form (||x||^2 + ||x_hat||^2 - 2|<x_hat, x>|) / ||x||^2; the
    optimizer is c = phase(<x_hat, x>) (or the sign, in the real field).
    """
    x = np.asarray(x)
    x_hat = np.asarray(x_hat)
    if x.shape != x_hat.shape:
        raise ValueError("signals must have the same length")
    if np.iscomplexobj(x) != np.iscomplexobj(x_hat):
        raise ValueError("signals must share a field")
    nx2 = float(np.real(np.vdot(x, x)))
    if nx2 == 0.0:
        raise ValueError("reference signal must be nonzero")
    nh2 = float(np.real(np.vdot(x_hat, x_hat)))
    cross = abs(np.vdot(x_hat, x))
    return (nx2 + nh2 - 2.0 * cross) / nx2


def recover(X_hat: np.ndarray, x_true: np.ndarray | None = None) -> RecoveryResult:
    """Full recovery pipeline: extraction, debiasing, optional error metrics."""
    X_hat = as_hermitian(X_hat)
    spectrum = eig(X_hat).eigenvalues
    x_hat, lam1 = extract_rank1(X_hat)
    x_deb = debias(x_hat, spectrum)
    err = err_rms = None
    if x_true is not None:
        err = rel_mse(as_signal(x_true), x_hat)
        err_rms = float(np.sqrt(max(err, 0.0)))
    return RecoveryResult(
        x_hat=x_hat,
        x_hat_debiased=x_deb,
        lambda1=lam1,
        spectrum=spectrum,
        rel_mse=err,
        rel_rms=err_rms,
    )
