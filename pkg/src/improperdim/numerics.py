"""Numerical primitives behind the detectors.

Chi-squared quantiles (own regularized incomplete gamma plus bracketed
root finding, so no statistics package is involved), Takagi factorization
of complex symmetric matrices, and Hermitian pseudoinverse square roots.
General eigendecomposition and SVD come from numpy.linalg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm

__all__ = [
    "TakagiFactorization",
    "chi2_quantile",
    "hermitian_inv_sqrt",
    "regularized_gamma_p",
    "takagi",
]

_MAX_ITER = 10_000
_REL_EPS = 1e-16


def regularized_gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x).

    Power series for x < a + 1, modified Lentz continued fraction for the
    upper tail otherwise; roughly 1e-14 relative accuracy in double
    precision.

    Parameters
    ----------
    a : float
        Shape parameter, must be positive.
    x : float
        Nonnegative evaluation point.
    """
    if a <= 0.0:
        raise ValueError("shape parameter a must be positive")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    log_prefactor = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        term = 1.0 / a
        total = term
        k = a
        for _ in range(_MAX_ITER):
            k += 1.0
            term *= x / k
            total += term
            if abs(term) < abs(total) * _REL_EPS:
                break
        return min(1.0, total * math.exp(log_prefactor))
    # Lentz's algorithm for the continued fraction of Q(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _REL_EPS:
            break
    return max(0.0, 1.0 - h * math.exp(log_prefactor))


def _chi2_pdf(df: int, x: float) -> float:
    if x <= 0.0:
        return 0.0
    a = 0.5 * df
    return 0.5 * math.exp((a - 1.0) * math.log(0.5 * x) - 0.5 * x - math.lgamma(a))


def chi2_quantile(df: int, p: float) -> float:
    """Quantile of the chi-squared distribution with ``df`` degrees of freedom.

    Returns x such that the regularized lower incomplete gamma
    P(df/2, x/2) equals ``p``, solved by bracketing plus bisection with a
    final Newton polish (safeguarded to stay inside the bracket).

    Parameters
    ----------
    df : int
        Degrees of freedom, at least 1.
    p : float
        Probability strictly between 0 and 1.
    """
    if int(df) != df or df < 1:
        raise ValueError("df must be a positive integer")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    df = int(df)
    a = 0.5 * df

    def cdf(x: float) -> float:
        return regularized_gamma_p(a, 0.5 * x)

    lo = 0.0
    hi = df + 10.0 * math.sqrt(2.0 * df) + 10.0
    for _ in range(_MAX_ITER):
        if cdf(hi) >= p:
            break
        lo = hi
        hi *= 2.0
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(20):
        err = cdf(x) - p
        if abs(err) <= 1e-13:
            break
        if err < 0.0:
            lo = x
        else:
            hi = x
        slope = _chi2_pdf(df, x)
        candidate = x - err / slope if slope > 0.0 else x
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if candidate == x:
            break
        x = candidate
    return x


@dataclass(frozen=True)
class TakagiFactorization:
    """Takagi factorization S = F diag(k) F^T of a complex symmetric matrix.

    ``factor_unitary`` (F) is unitary; ``singular_values`` (k) are the
    nonnegative singular values of S in descending order.
    """

    factor_unitary: np.ndarray
    singular_values: np.ndarray


def takagi(matrix: np.ndarray, symmetry_tol: float = 1e-8) -> TakagiFactorization:
    """Factor a complex symmetric matrix as F diag(k) F^T with unitary F.

    Built from the SVD S = U diag(k) V^H: the coupling Z = U^T V is block
    diagonal across distinct singular values and unitary symmetric on each
    block, so F = U conj(sqrt(Z)) absorbs it. Blocks of (near-)equal
    singular values are treated as a unit because the SVD mixes their
    subspaces.

    Parameters
    ----------
    matrix : ndarray
        Square complex symmetric matrix (max entry of S - S^T within
        ``symmetry_tol``).
    """
    sym = np.asarray(matrix, dtype=np.complex128)
    if sym.ndim != 2 or sym.shape[0] != sym.shape[1] or sym.shape[0] == 0:
        raise ValueError("takagi expects a nonempty square matrix")
    if np.max(np.abs(sym - sym.T)) > symmetry_tol:
        raise ValueError("matrix is not complex symmetric")
    size = sym.shape[0]
    sym = 0.5 * (sym + sym.T)
    left, values, right_h = np.linalg.svd(sym)
    if values[0] == 0.0:
        return TakagiFactorization(np.eye(size, dtype=np.complex128), np.zeros(size))
    right = right_h.conj().T
    factor = np.empty_like(left)
    gap_tol = 1e-8 * values[0]
    start = 0
    for stop in range(1, size + 1):
        if stop < size and values[stop - 1] - values[stop] <= gap_tol:
            continue
        block = slice(start, stop)
        coupling = left[:, block].T @ right[:, block]
        root = np.sqrt(coupling) if stop - start == 1 else np.asarray(sqrtm(coupling))
        factor[:, block] = left[:, block] @ np.conj(root)
        start = stop
    # sign flips leave F diag(k) F^T unchanged; pin them so e.g. real
    # positive diagonal input yields F = I regardless of LAPACK signs
    lead = factor[np.argmax(np.abs(factor), axis=0), np.arange(size)]
    flip = (lead.real < 0.0) | ((lead.real == 0.0) & (lead.imag < 0.0))
    factor[:, flip] *= -1.0
    return TakagiFactorization(factor, values)


def hermitian_inv_sqrt(matrix: np.ndarray, rcond: float = 1e-12) -> np.ndarray:
    """Hermitian (pseudo)inverse square root of a Hermitian PSD matrix.

    Eigenvalues at or below ``rcond`` times the largest are treated as
    zero and their inverse roots set to 0, so near-singular covariances
    yield the inverse root of the retained eigenspace only. The Hermitian
    choice of root keeps whitened complementary covariances complex
    symmetric.

    Parameters
    ----------
    matrix : ndarray
        Square Hermitian PSD matrix (max deviation from Hermitian 1e-8).
    rcond : float
        Relative eigenvalue cutoff in (0, 1).
    """
    mat = np.asarray(matrix, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    if not 0.0 < rcond < 1.0:
        raise ValueError("rcond must lie in (0, 1)")
    if np.max(np.abs(mat - mat.conj().T)) > 1e-8:
        raise ValueError("matrix is not Hermitian")
    values, vectors = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    largest = values[-1]
    if largest <= 0.0:
        raise ValueError("rank zero covariance")
    keep = values > rcond * largest
    inv_roots = np.where(keep, 1.0 / np.sqrt(np.where(keep, values, 1.0)), 0.0)
    out = (vectors * inv_roots) @ vectors.conj().T
    return 0.5 * (out + out.conj().T)
