"""Second-order statistics of complex multichannel data.

Sample covariance and complementary covariance, augmented covariance
assembly, circularity coefficients (canonical correlations between the
data and its conjugate), and PCA rank reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import hermitian_inv_sqrt

__all__ = [
    "CircularitySpectrum",
    "CovariancePair",
    "DEFAULT_RCOND",
    "as_data_matrix",
    "augmented_covariance",
    "circularity_coefficients",
    "circularity_profile",
    "pca_reduce",
    "sample_covariances",
]

DEFAULT_RCOND = 1e-12


@dataclass(frozen=True)
class CovariancePair:
    """Sample covariance (Hermitian) and complementary covariance
    (complex symmetric) of one data matrix, with the snapshot count they
    were estimated from."""

    covariance: np.ndarray
    complementary: np.ndarray
    sample_count: int


@dataclass(frozen=True)
class CircularitySpectrum:
    """Descending circularity coefficients in [0, 1].

    ``rank_context`` is the dimension of the space the coefficients were
    computed in: the channel count for full-space estimates, or r after
    reduction to PCA rank r.
    """

    coefficients: np.ndarray
    rank_context: int
    sample_count: int


def as_data_matrix(samples) -> np.ndarray:
    """Validate and return a complex channels-by-snapshots matrix."""
    data = np.asarray(samples, dtype=np.complex128)
    if data.ndim != 2:
        raise ValueError("data matrix must be 2-D (channels x snapshots)")
    if data.shape[0] < 1 or data.shape[1] < 1:
        raise ValueError("data matrix needs at least one channel and one snapshot")
    if not np.all(np.isfinite(data.real)) or not np.all(np.isfinite(data.imag)):
        raise ValueError("data matrix contains non-finite entries")
    return data


def sample_covariances(samples) -> CovariancePair:
    """Sample covariance and complementary covariance with 1/M scaling.

    Zero-mean convention: no sample mean is subtracted. The covariance is
    re-Hermitized and the complementary re-symmetrized so the pair
    satisfies its structure exactly, not just to rounding.
    """
    data = as_data_matrix(samples)
    count = data.shape[1]
    covariance = data @ data.conj().T / count
    complementary = data @ data.T / count
    return CovariancePair(
        covariance=0.5 * (covariance + covariance.conj().T),
        complementary=0.5 * (complementary + complementary.T),
        sample_count=count,
    )


def augmented_covariance(pair: CovariancePair) -> np.ndarray:
    """Covariance of the stacked vector [x; conj(x)], assembled on demand."""
    cov, comp = pair.covariance, pair.complementary
    return np.block([[cov, comp], [comp.conj(), cov.conj()]])


def circularity_coefficients(
    pair: CovariancePair, rcond: float = DEFAULT_RCOND
) -> CircularitySpectrum:
    """Circularity coefficients of a covariance pair.

    Singular values of the coherence matrix (the complementary covariance
    whitened on both sides by the Hermitian inverse square root of the
    covariance), sorted descending and clamped to [0, 1].
    """
    root = hermitian_inv_sqrt(pair.covariance, rcond)
    # root is Hermitian, so root.T is its conjugate and the coherence
    # matrix stays complex symmetric
    coherence = root @ pair.complementary @ root.T
    coherence = 0.5 * (coherence + coherence.T)
    values = np.linalg.svd(coherence, compute_uv=False)
    return CircularitySpectrum(
        coefficients=np.clip(values, 0.0, 1.0),
        rank_context=pair.covariance.shape[0],
        sample_count=pair.sample_count,
    )


def _principal_basis(covariance: np.ndarray, rank: int) -> np.ndarray:
    values, vectors = np.linalg.eigh(covariance)
    basis = vectors[:, ::-1][:, :rank]
    # rotate each eigenvector so its largest-modulus entry is real positive
    lead = basis[np.argmax(np.abs(basis), axis=0), np.arange(rank)]
    scale = np.abs(lead)
    phase = np.where(scale > 0.0, lead / np.where(scale > 0.0, scale, 1.0), 1.0)
    return basis * phase.conj()


def pca_reduce(samples, rank: int) -> np.ndarray:
    """Project the data onto its ``rank`` leading principal directions.

    Eigenvectors of the sample covariance are taken in descending
    eigenvalue order with a deterministic phase convention (largest
    modulus entry rotated real positive), so the output is reproducible
    across platforms.
    """
    data = as_data_matrix(samples)
    channels, count = data.shape
    if not 1 <= rank <= min(channels, count):
        raise ValueError("rank must lie in 1..min(channels, snapshots)")
    pair = sample_covariances(data)
    return _principal_basis(pair.covariance, rank).conj().T @ data


def circularity_profile(
    samples, r_max: int, rcond: float = DEFAULT_RCOND
) -> list[CircularitySpectrum]:
    """Circularity coefficients of the rank-r PCA description, r = 1..r_max.

    Equivalent to pca_reduce -> sample_covariances ->
    circularity_coefficients at every rank, but the eigendecomposition of
    the full sample covariance is reused: in the principal basis the
    rank-r covariance is diagonal, so the whole sweep costs one
    eigendecomposition plus r_max small SVDs.
    """
    data = as_data_matrix(samples)
    channels, count = data.shape
    if not 1 <= r_max <= min(channels, count):
        raise ValueError("r_max must lie in 1..min(channels, snapshots)")
    pair = sample_covariances(data)
    values, vectors = np.linalg.eigh(pair.covariance)
    values = values[::-1]
    vectors = vectors[:, ::-1]
    if values[0] <= 0.0:
        raise ValueError("rank zero covariance")
    rotated = vectors.conj().T @ pair.complementary @ vectors.conj()
    rotated = 0.5 * (rotated + rotated.T)
    spectra = []
    for rank in range(1, r_max + 1):
        leading = values[:rank]
        keep = leading > rcond * values[0]
        inv_roots = np.where(keep, 1.0 / np.sqrt(np.where(keep, leading, 1.0)), 0.0)
        coherence = (inv_roots[:, None] * rotated[:rank, :rank]) * inv_roots[None, :]
        coeffs = np.linalg.svd(0.5 * (coherence + coherence.T), compute_uv=False)
        spectra.append(CircularitySpectrum(np.clip(coeffs, 0.0, 1.0), rank, count))
    return spectra
