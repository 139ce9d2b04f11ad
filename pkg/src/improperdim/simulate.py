"""Synthetic scenario generation.

Uniform-linear-array mixing of independent improper Gaussian sources with
prescribed circularity coefficients, plus proper Gaussian noise that is
either white or spatially colored by an autoregressive filter across the
sensor axis. Everything is a pure function of the scenario config,
including its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .stats import CovariancePair

__all__ = [
    "AR_BURN_IN",
    "DEFAULT_PHASE_FACTOR",
    "NoiseSpec",
    "ScenarioConfig",
    "SourceSpec",
    "ar_spatial_covariance",
    "generate_noise",
    "generate_scenario",
    "generate_sources",
    "population_covariances",
    "steering_matrix",
]

# phase factor multiplying cos(theta) in the steering vector; array
# conventions differ, so it is configurable everywhere it is used
DEFAULT_PHASE_FACTOR = 0.5 * math.pi

# AR recursion steps discarded before the first sensor; the recursion is
# then stationary to well below sampling noise for any stable polynomial
AR_BURN_IN = 200


@dataclass(frozen=True)
class SourceSpec:
    """One source: variance and circularity coefficient in [0, 1]."""

    variance: float
    circularity: float

    def __post_init__(self):
        object.__setattr__(self, "variance", float(self.variance))
        object.__setattr__(self, "circularity", float(self.circularity))
        if not self.variance > 0.0:
            raise ValueError("source variance must be positive")
        if not 0.0 <= self.circularity <= 1.0:
            raise ValueError("circularity must lie in [0, 1]")


@dataclass(frozen=True)
class NoiseSpec:
    """Proper Gaussian noise model.

    ``kind`` is "white" or "spatial_ar". ``variance`` is the per-sensor
    variance for white noise, or the innovation variance for the AR kind.
    The AR polynomial must be stable (all characteristic roots strictly
    inside the unit circle).
    """

    kind: str
    variance: float
    ar_coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variance", float(self.variance))
        object.__setattr__(
            self, "ar_coefficients", tuple(float(a) for a in self.ar_coefficients)
        )
        if self.kind not in ("white", "spatial_ar"):
            raise ValueError("noise kind must be 'white' or 'spatial_ar'")
        if not self.variance > 0.0:
            raise ValueError("noise variance must be positive")
        if self.kind == "white":
            if self.ar_coefficients:
                raise ValueError("white noise takes no AR coefficients")
        elif self.ar_coefficients:
            roots = np.roots(np.concatenate(([1.0], self.ar_coefficients)))
            if roots.size and np.max(np.abs(roots)) >= 1.0:
                raise ValueError("unstable AR polynomial")


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one synthetic dataset."""

    sensor_count: int
    angles_deg: tuple[float, ...]
    sources: tuple[SourceSpec, ...]
    noise: NoiseSpec
    snapshot_count: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "angles_deg", tuple(float(a) for a in self.angles_deg))
        object.__setattr__(self, "sources", tuple(self.sources))
        if self.sensor_count < 1:
            raise ValueError("sensor_count must be at least 1")
        if self.snapshot_count < 1:
            raise ValueError("snapshot_count must be at least 1")
        if len(self.angles_deg) != len(self.sources):
            raise ValueError("need one arrival angle per source")
        if len(self.sources) >= self.sensor_count:
            raise ValueError("source count must be smaller than the sensor count")
        if len(set(self.angles_deg)) != len(self.angles_deg):
            raise ValueError("arrival angles must be distinct")
        for angle in self.angles_deg:
            if not 0.0 <= angle <= 180.0:
                raise ValueError("arrival angles must lie in [0, 180] degrees")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def steering_matrix(
    angles_deg, sensor_count: int, phase_factor: float = DEFAULT_PHASE_FACTOR
) -> np.ndarray:
    """Steering matrix with entry (p, q) = exp(j*phase_factor*p*cos(theta_q)),
    p = 0..sensor_count-1, angles in degrees."""
    angles = np.atleast_1d(np.asarray(angles_deg, dtype=float))
    if angles.size == 0:
        raise ValueError("at least one arrival angle is required")
    if sensor_count < 1:
        raise ValueError("sensor_count must be at least 1")
    if np.any(angles < 0.0) or np.any(angles > 180.0):
        raise ValueError("arrival angles must lie in [0, 180] degrees")
    phases = phase_factor * np.cos(np.deg2rad(angles))
    return np.exp(1j * np.outer(np.arange(sensor_count), phases))


def generate_sources(specs, snapshot_count: int, rng: np.random.Generator) -> np.ndarray:
    """Independent zero-mean complex Gaussian sources, one row per spec.

    Each source has E[|s|^2] = variance and E[s^2] = circularity * variance
    (real, nonnegative): the real and imaginary parts are independent
    normals with variances variance*(1 +/- circularity)/2. Circularity 1
    collapses the imaginary part (maximally improper), circularity 0 gives
    a proper source.
    """
    specs = tuple(specs)
    out = np.empty((len(specs), snapshot_count), dtype=np.complex128)
    for row, spec in enumerate(specs):
        re_scale = math.sqrt(0.5 * spec.variance * (1.0 + spec.circularity))
        im_scale = math.sqrt(0.5 * spec.variance * (1.0 - spec.circularity))
        out[row] = re_scale * rng.standard_normal(snapshot_count) + (
            1j * im_scale
        ) * rng.standard_normal(snapshot_count)
    return out


def ar_spatial_covariance(coefficients, innovation_variance: float, size: int) -> np.ndarray:
    """Stationary covariance (real Toeplitz) of the spatial AR recursion.

    Solves the Yule-Walker-type system for the autocovariances up to the
    AR order and extends them by the recursion.
    """
    coeffs = np.asarray(coefficients, dtype=float)
    order = coeffs.size
    if order == 0:
        return innovation_variance * np.eye(size)
    system = np.zeros((order + 1, order + 1))
    rhs = np.zeros(order + 1)
    rhs[0] = float(innovation_variance)
    for k in range(order + 1):
        system[k, k] += 1.0
        for j in range(1, order + 1):
            system[k, abs(k - j)] += coeffs[j - 1]
    gamma = list(np.linalg.solve(system, rhs))
    for k in range(order + 1, size):
        gamma.append(-sum(coeffs[j - 1] * gamma[k - j] for j in range(1, order + 1)))
    return toeplitz(np.asarray(gamma[:size]))


def generate_noise(
    spec: NoiseSpec,
    sensor_count: int,
    snapshot_count: int,
    rng: np.random.Generator,
    exact_covariance: bool = False,
) -> np.ndarray:
    """Proper Gaussian noise, one column per snapshot.

    The "spatial_ar" kind runs n[p] = w[p] - sum_j a_j n[p-j] down the
    sensor axis independently for every snapshot, discarding AR_BURN_IN
    leading steps, so snapshots stay i.i.d. and the spatial covariance is
    the stationary AR covariance to high accuracy. With
    ``exact_covariance`` the stationary covariance is factored and applied
    to white noise instead (useful for validating the recursion).
    """
    shape = (sensor_count, snapshot_count)
    if spec.kind == "white":
        scale = math.sqrt(0.5 * spec.variance)
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    if exact_covariance:
        cov = ar_spatial_covariance(spec.ar_coefficients, spec.variance, sensor_count)
        values, vectors = np.linalg.eigh(cov)
        root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.T
        white = math.sqrt(0.5) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        return root @ white
    coeffs = np.asarray(spec.ar_coefficients, dtype=float)
    order = coeffs.size
    total = AR_BURN_IN + sensor_count
    scale = math.sqrt(0.5 * spec.variance)
    innovations = scale * (
        rng.standard_normal((total, snapshot_count))
        + 1j * rng.standard_normal((total, snapshot_count))
    )
    out = np.zeros((total, snapshot_count), dtype=np.complex128)
    for p in range(total):
        acc = innovations[p]
        for j in range(1, min(order, p) + 1):
            acc = acc - coeffs[j - 1] * out[p - j]
        out[p] = acc
    return out[AR_BURN_IN:]


def generate_scenario(config: ScenarioConfig) -> np.ndarray:
    """Data matrix (mixing @ sources + noise) for the scenario.

    A pure function of the config: the same config (including seed)
    always yields the bit-identical matrix.
    """
    rng = np.random.default_rng(config.seed)
    sources = generate_sources(config.sources, config.snapshot_count, rng)
    noise = generate_noise(config.noise, config.sensor_count, config.snapshot_count, rng)
    if config.sources:
        mixing = steering_matrix(config.angles_deg, config.sensor_count)
        return mixing @ sources + noise
    return noise


def population_covariances(config: ScenarioConfig) -> CovariancePair:
    """Model covariance pair implied by a scenario config.

    The returned pair's sample_count is 0 to mark population quantities.
    """
    size = config.sensor_count
    if config.noise.kind == "white":
        noise_cov = config.noise.variance * np.eye(size)
    else:
        noise_cov = ar_spatial_covariance(
            config.noise.ar_coefficients, config.noise.variance, size
        )
    covariance = np.asarray(noise_cov, dtype=np.complex128)
    complementary = np.zeros((size, size), dtype=np.complex128)
    if config.sources:
        mixing = steering_matrix(config.angles_deg, size)
        powers = np.array([s.variance for s in config.sources])
        pseudo_powers = np.array([s.variance * s.circularity for s in config.sources])
        covariance = covariance + (mixing * powers) @ mixing.conj().T
        complementary = (mixing * pseudo_powers) @ mixing.T
    return CovariancePair(covariance, complementary, sample_count=0)
