"""Trace-regularized least squares over the PSD cone.

Accelerated proximal gradient (with adaptive restart) for

    minimize  0.5 * ||A(X) - b||^2 + lam * Tr(X)   s.t.  X >= 0,

plus a bisection wrapper that finds the largest lam whose solution
satisfies the residual constraint ||A(X) - b||_2 <= eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .hermitian import REAL, as_hermitian
from .measurement import IntensityData, SensingEnsemble, apply_adjoint, apply_measurement

#: Noiseless data is solved with this relative residual target instead of eps=0.
NOISELESS_EPS_REL = 1e-8
#: Relative width of the final lambda bracket in the bisection.
LAMBDA_REL_TOL = 1e-3
MAX_BISECTION_PROBES = 50


@dataclass
class SolverOptions:
    max_iters: int = 5000
    rel_tol: float = 1e-8
    step_safety: float = 0.9
    restart: bool = True

    def __post_init__(self):
        if self.max_iters <= 0 or self.rel_tol <= 0 or self.rel_tol >= 1:
            raise ValueError("max_iters must be positive and 0 < rel_tol < 1")
        if not (0 < self.step_safety <= 1):
            raise ValueError("step_safety must lie in (0, 1]")


@dataclass
class SolveReport:
    X_hat: np.ndarray
    iterations: int
    objective_trace: list[float] = field(repr=False, default_factory=list)
    residual: float = 0.0
    lambda_used: float = 0.0
    converged: bool = False

    def summary_line(self) -> str:
        obj = self.objective_trace[-1] if self.objective_trace else float("nan")
        return (
            f"iterations={self.iterations} lambda={self.lambda_used!r} "
            f"residual={self.residual!r} objective={obj!r} converged={self.converged}"
        )


def prox_psd_trace(V: np.ndarray, tau: float) -> np.ndarray:
    """Prox of tau*Tr(.) restricted to the PSD cone: shrink eigenvalues by tau, clip at 0."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    V = as_hermitian(V)
    w, U = np.linalg.eigh(V)  # sign convention irrelevant: only U w U* is used
    w = np.maximum(w - tau, 0.0)
    pos = w > 0
    if not np.any(pos):
        return np.zeros_like(V)
    U = U[:, pos]
    X = (U * w[pos]) @ U.conj().T
    return (X + X.conj().T) / 2


def estimate_lipschitz(ens: SensingEnsemble, rel_tol: float = 1e-4, max_iters: int = 500) -> float:
    """Upper bound (with 5% margin) on the operator norm of X -> A*(A(X)).

    Power iteration on Hermitian matrices; A*A is self-adjoint and PSD
    in the trace inner product, so the iteration converges to the norm.
    """
    if ens.m < 1:
        raise ValueError("empty ensemble")
    rng = substream(ens.seed, 2)
    n = ens.n
    X = rng.standard_normal((n, n))
    if ens.field != REAL:
        X = X + 1j * rng.standard_normal((n, n))
    X = (X + X.conj().T) / 2
    X /= np.linalg.norm(X)
    lam_prev = 0.0
    for _ in range(max_iters):
        Y = apply_adjoint(ens, apply_measurement(ens, X))
        lam = float(np.real(np.vdot(X, Y)))  # Rayleigh quotient; ||X||_F = 1
        nrm = float(np.linalg.norm(Y))
        if nrm == 0.0:
            return 1.05 * max(lam, 0.0)
        X = Y / nrm
        if abs(lam - lam_prev) <= rel_tol * max(1.0, abs(lam)):
            return 1.05 * lam
        lam_prev = lam
    raise RuntimeError(f"power iteration did not converge; last estimate {lam_prev}")


def _objective(ens, b, lam, X):
    r = apply_measurement(ens, X) - b
    return 0.5 * float(r @ r) + lam * float(np.trace(X).real), r


def solve_regularized(
    ens: SensingEnsemble,
    b: np.ndarray,
    lam: float,
    opts: SolverOptions | None = None,
    lipschitz: float | None = None,
    X0: np.ndarray | None = None,
) -> SolveReport:
    """FISTA with adaptive restart for the trace-regularized problem."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (ens.m,):
        raise ValueError("data length does not match ensemble")
    opts = opts or SolverOptions()
    L = lipschitz if lipschitz is not None else estimate_lipschitz(ens)
    step = opts.step_safety / L

    dtype = np.float64 if ens.field == REAL else np.complex128
    X = np.zeros((ens.n, ens.n), dtype=dtype) if X0 is None else as_hermitian(X0).astype(dtype)
    Y = X.copy()
    t = 1.0
    obj, _ = _objective(ens, b, lam, X)
    best = obj
    trace = [best]
    converged = False
    iters = 0
    for k in range(opts.max_iters):
        iters = k + 1
        grad = apply_adjoint(ens, apply_measurement(ens, Y) - b)
        X_new = prox_psd_trace(Y - step * grad, step * lam)
        obj_new, _ = _objective(ens, b, lam, X_new)
        if not np.isfinite(obj_new):
            raise RuntimeError("objective diverged; Lipschitz bound is likely invalid")
        if opts.restart and obj_new > obj:
            # kill momentum and retake the step from the last iterate
            t = 1.0
            grad = apply_adjoint(ens, apply_measurement(ens, X) - b)
            X_new = prox_psd_trace(X - step * grad, step * lam)
            obj_new, _ = _objective(ens, b, lam, X_new)
        best = min(best, obj_new)
        trace.append(best)
        t_new = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
        dX = X_new - X
        Y = X_new + ((t - 1.0) / t_new) * dX
        step_small = np.linalg.norm(dX) <= opts.rel_tol * max(1.0, np.linalg.norm(X_new))
        X, t, obj = X_new, t_new, obj_new
        if step_small:
            converged = True
            break
    residual = float(np.linalg.norm(apply_measurement(ens, X) - b))
    return SolveReport(
        X_hat=X,
        iterations=iters,
        objective_trace=trace,
        residual=residual,
        lambda_used=float(lam),
        converged=converged,
    )


def zero_solution_lambda(ens: SensingEnsemble, b: np.ndarray) -> float:
    """Smallest lambda at which X = 0 solves the regularized problem.

    First-order optimality of 0 over the PSD cone reduces to
    lam >= lambda_max(A*(b)).
    """
    w = np.linalg.eigvalsh(apply_adjoint(ens, np.asarray(b, dtype=np.float64)))
    return max(float(w[-1]), 0.0)


def solve_constrained(
    ens: SensingEnsemble,
    data: IntensityData,
    opts: SolverOptions | None = None,
) -> SolveReport:
    """Solve the residual-constrained problem by bisection on lambda.

    Finds the largest lambda whose regularized solution has residual at
    most eps (warm-starting each probe), with eps floored at
    NOISELESS_EPS_REL * ||b|| so noiseless data needs no special path.
    If even the smallest probed lambda cannot meet eps, the
    minimal-residual iterate is returned with converged=False.
    """
    opts = opts or SolverOptions()
    b = np.asarray(data.b, dtype=np.float64)
    b_norm = float(np.linalg.norm(b))
    eps = max(float(data.eps), NOISELESS_EPS_REL * b_norm)

    lam_hi = zero_solution_lambda(ens, b)
    if b_norm <= eps or lam_hi == 0.0:
        # X = 0 is feasible (or optimal for every lambda)
        dtype = np.float64 if ens.field == REAL else np.complex128
        return SolveReport(
            X_hat=np.zeros((ens.n, ens.n), dtype=dtype),
            iterations=0,
            objective_trace=[0.5 * b_norm**2],
            residual=b_norm,
            lambda_used=lam_hi,
            converged=True,
        )

    L = estimate_lipschitz(ens)
    lam_lo = lam_hi * 1e-8
    total_iters = 0

    rep = solve_regularized(ens, b, lam_lo, opts, lipschitz=L)
    total_iters += rep.iterations
    if rep.residual > eps:
        # eps is infeasibly small for this data; report the best we have
        rep.iterations = total_iters
        rep.converged = False
        return rep

    lo, rep_lo = lam_lo, rep
    hi = lam_hi
    probes = 1
    warm = rep.X_hat
    while hi / lo > 1.0 + LAMBDA_REL_TOL and probes < MAX_BISECTION_PROBES:
        mid = np.sqrt(lo * hi)
        rep_mid = solve_regularized(ens, b, mid, opts, lipschitz=L, X0=warm)
        total_iters += rep_mid.iterations
        probes += 1
        warm = rep_mid.X_hat
        if rep_mid.residual <= eps:
            lo, rep_lo = mid, rep_mid
        else:
            hi = mid
    rep_lo.iterations = total_iters
    return rep_lo
