"""Random sensing ensembles and the quadratic intensity operator.

An ensemble is a set of m sensing vectors z_i.  The forward operator
maps a Hermitian matrix X to the real vector (z_i* X z_i)_i; applied to
xx* it returns the phaseless intensities |<x, z_i>|^2.  Noise models
rescale the realized noise vector to hit a target SNR exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import substream
from .hermitian import COMPLEX, REAL, as_hermitian, as_signal, field_of

GAUSSIAN_MODELS = ("real-gaussian", "complex-gaussian")
SPHERE_MODELS = ("real-unit-sphere", "complex-unit-sphere", "sphere-radius-sqrt-n")
MODELS = GAUSSIAN_MODELS + SPHERE_MODELS

NOISE_MODELS = ("gaussian", "poisson", "none")


@dataclass(frozen=True)
class SensingEnsemble:
    """m sensing vectors stored as the rows of an (m, n) array."""

    vectors: np.ndarray
    model: str
    seed: int

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def field(self) -> str:
        return field_of(self.vectors)


@dataclass(frozen=True)
class IntensityData:
    """Measured intensities b, the noise realization nu, and its l2 bound eps."""

    b: np.ndarray
    nu: np.ndarray
    eps: float

    def __post_init__(self):
        nrm = float(np.linalg.norm(self.nu))
        if nrm > self.eps * (1 + 1e-9) + 1e-300:
            raise ValueError("noise norm exceeds the stated bound eps")
        if np.any(self.b - self.nu < -1e-9 * max(1.0, float(np.abs(self.b).max(initial=0.0)))):
            raise ValueError("clean intensities b - nu must be nonnegative")

    @property
    def m(self) -> int:
        return self.b.size


def _draw_gaussian(rng: np.random.Generator, m: int, n: int, field: str) -> np.ndarray:
    if field == REAL:
        return rng.standard_normal((m, n))
    # real and imaginary parts each of variance 1/2, so E|z_jk|^2 = 1
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2.0)


def sample_ensemble(n: int, m: int, model: str, seed: int) -> SensingEnsemble:
    """Draw m sensing vectors of length n, deterministically in (args, seed)."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if model not in MODELS:
        raise ValueError(f"unknown ensemble model {model!r}")
    field = REAL if model.startswith("real") else COMPLEX
    rng = substream(seed, 0)
    Z = _draw_gaussian(rng, m, n, field)
    if model in SPHERE_MODELS:
        radius = np.sqrt(n) if model == "sphere-radius-sqrt-n" else 1.0
        norms = np.linalg.norm(Z, axis=1)
        bad = norms == 0.0
        if np.any(bad):
            Z[bad] = _draw_gaussian(rng, int(bad.sum()), n, field)
            norms = np.linalg.norm(Z, axis=1)
            if np.any(norms == 0.0):
                raise RuntimeError("zero-norm Gaussian draw twice in a row")
        Z = Z * (radius / norms)[:, None]
    return SensingEnsemble(vectors=Z, model=model, seed=int(seed))


def apply_measurement(ens: SensingEnsemble, X: np.ndarray) -> np.ndarray:
    """Quadratic forms (z_i* X z_i)_i; real output for Hermitian X."""
    X = as_hermitian(X)
    if X.shape[0] != ens.n:
        raise ValueError("matrix dimension does not match ensemble")
    Z = ens.vectors
    return np.sum((Z.conj() @ X) * Z, axis=1).real


def apply_adjoint(ens: SensingEnsemble, y: np.ndarray) -> np.ndarray:
    """Adjoint map y -> sum_i y_i z_i z_i* (Hermitian output)."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (ens.m,):
        raise ValueError("weight vector length does not match ensemble")
    Z = ens.vectors
    A = (Z * y[:, None]).T @ Z.conj()
    return (A + A.conj().T) / 2


def intensities(ens: SensingEnsemble, x: np.ndarray) -> np.ndarray:
    """Phaseless measurements |<x, z_i>|^2 of a signal x."""
    x = as_signal(x, field=ens.field)
    if x.size != ens.n:
        raise ValueError("signal length does not match ensemble")
    inner = ens.vectors @ x.conj()  # <x, z_i> = sum_t conj(x_t) z_{i,t}
    return np.abs(inner) ** 2


def add_noise(
    b_clean: np.ndarray,
    model: str,
    snr_db: float,
    seed: int,
    ref_power: float | None = None,
) -> IntensityData:
    """Corrupt clean intensities with noise rescaled to an exact SNR.

    The realized noise nu is scaled so 10*log10(ref / ||nu||^2) equals
    snr_db, where ref defaults to ||b_clean||^2 (measurement-relative
    SNR).  Pass ref_power=||x||^2 for the signal-relative convention.
    snr_db = +inf or model 'none' yields nu = 0.
    """
    b_clean = np.asarray(b_clean, dtype=np.float64)
    if np.any(b_clean < 0):
        raise ValueError("clean intensities must be nonnegative")
    if model not in NOISE_MODELS:
        raise ValueError(f"unknown noise model {model!r}")
    if model == "none" or np.isposinf(snr_db):
        z = np.zeros_like(b_clean)
        return IntensityData(b=b_clean.copy(), nu=z, eps=0.0)
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite or +inf")
    ref = float(np.sum(b_clean**2)) if ref_power is None else float(ref_power)
    if ref <= 0:
        raise ValueError("cannot set a finite SNR against a zero-power reference")
    target = np.sqrt(ref) * 10.0 ** (-snr_db / 20.0)

    rng = substream(seed, 1)
    if model == "gaussian":
        nu = rng.standard_normal(b_clean.size)
    else:  # poisson
        nu = rng.poisson(b_clean).astype(np.float64) - b_clean
    nrm = float(np.linalg.norm(nu))
    if nrm == 0.0:
        # degenerate draw (e.g. all-zero rates); nothing to rescale
        return IntensityData(b=b_clean.copy(), nu=nu, eps=0.0)
    nu *= target / nrm
    return IntensityData(b=b_clean + nu, nu=nu, eps=float(np.linalg.norm(nu)))


# --- provenance serialization -------------------------------------------------
#
# Columnar text format, one file per object.  Ensembles:
#   # phaselift-ensemble v1
#   # n=<n> m=<m> model=<model> seed=<seed>
#   <m rows of n columns; complex fields store re/im pairs, 2n columns>
# Intensity data:
#   # phaselift-intensity v1
#   # m=<m> eps=<repr>
#   <m rows of "b nu">


def save_ensemble(path: str, ens: SensingEnsemble) -> None:
    header = f"phaselift-ensemble v1\nn={ens.n} m={ens.m} model={ens.model} seed={ens.seed}"
    Z = ens.vectors
    if ens.field == COMPLEX:
        Z = np.column_stack([Z.real, Z.imag])
    np.savetxt(path, Z, fmt="%.17g", header=header)


def load_ensemble(path: str) -> SensingEnsemble:
    with open(path) as fh:
        magic = fh.readline()
        if "phaselift-ensemble v1" not in magic:
            raise ValueError("not a phaselift ensemble file")
        meta = dict(kv.split("=") for kv in fh.readline().lstrip("# ").split())
        data = np.loadtxt(fh, ndmin=2)
    n, m, model, seed = int(meta["n"]), int(meta["m"]), meta["model"], int(meta["seed"])
    if model.startswith("real"):
        Z = data
    else:
        Z = data[:, :n] + 1j * data[:, n:]
    if Z.shape != (m, n):
        raise ValueError("ensemble file shape does not match its header")
    return SensingEnsemble(vectors=Z, model=model, seed=seed)


def save_intensity(path: str, data: IntensityData) -> None:
    header = f"phaselift-intensity v1\nm={data.m} eps={data.eps!r}"
    np.savetxt(path, np.column_stack([data.b, data.nu]), fmt="%.17g", header=header)


def load_intensity(path: str) -> IntensityData:
    with open(path) as fh:
        magic = fh.readline()
        if "phaselift-intensity v1" not in magic:
            raise ValueError("not a phaselift intensity file")
        meta = dict(kv.split("=") for kv in fh.readline().lstrip("# ").split())
        arr = np.loadtxt(fh, ndmin=2)
    return IntensityData(b=arr[:, 0], nu=arr[:, 1], eps=float(meta["eps"]))
