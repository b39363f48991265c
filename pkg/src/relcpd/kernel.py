"""Gaussian kernel evaluation, design matrices, and the median-distance
bandwidth heuristic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import DegenerateBandwidthError, DimensionMismatchError, ParameterError


@dataclass(frozen=True)
class KernelConfig:
    """Validated Gaussian kernel width."""

    sigma: float

    def __post_init__(self) -> None:
        s = float(self.sigma)
        if not np.isfinite(s) or s <= 0.0:
            raise ParameterError(f"kernel width must be positive and finite, got {s}")
        object.__setattr__(self, "sigma", s)


@dataclass(frozen=True)
class DesignMatrices:
    """Kernel evaluations of numerator/denominator samples against centers.

    k_num[i, l] = K(Y_i, C_l) for numerator samples Y_i;
    k_den[j, l] = K(Y'_j, C_l) for denominator samples Y'_j.
    """

    k_num: np.ndarray
    k_den: np.ndarray
    centers: np.ndarray
    sigma: float


def gaussian_kernel(y: np.ndarray, y2: np.ndarray, sigma: float) -> float:
    """exp(-||y - y2||^2 / (2 sigma^2)); symmetric, in (0, 1]."""
    cfg = KernelConfig(sigma)
    a = np.asarray(y, dtype=np.float64).ravel()
    b = np.asarray(y2, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"kernel arguments have lengths {a.size} and {b.size}"
        )
    diff = a - b
    return float(np.exp(-(diff @ diff) / (2.0 * cfg.sigma**2)))


def median_distance(samples: np.ndarray) -> float:
    """Median of all pairwise Euclidean distances (exact, over all pairs).

    For an even number of pairs this is the mean of the two middle order
    statistics.  A zero median would collapse the bandwidth grid, so it is
    rejected.
    """
    arr = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if arr.shape[0] < 2:
        raise ParameterError(
            f"median distance needs at least 2 samples, got {arr.shape[0]}"
        )
    med = float(np.median(pdist(arr)))
    if med == 0.0:
        raise DegenerateBandwidthError(
            "median pairwise distance is zero (samples nearly all identical)"
        )
    return med


def design_matrices(
    numerator: np.ndarray,
    denominator: np.ndarray,
    centers: np.ndarray,
    sigma: float,
) -> DesignMatrices:
    """Evaluate the Gaussian kernel of both sample sets against the centers."""
    cfg = KernelConfig(sigma)
    num = np.atleast_2d(np.asarray(numerator, dtype=np.float64))
    den = np.atleast_2d(np.asarray(denominator, dtype=np.float64))
    cen = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if num.shape[1] != cen.shape[1] or den.shape[1] != cen.shape[1]:
        raise DimensionMismatchError(
            f"sample dimensions {num.shape[1]}/{den.shape[1]} do not match "
            f"center dimension {cen.shape[1]}"
        )
    scale = 2.0 * cfg.sigma**2
    k_num = np.exp(-cdist(num, cen, "sqeuclidean") / scale)
    k_den = np.exp(-cdist(den, cen, "sqeuclidean") / scale)
    return DesignMatrices(k_num=k_num, k_den=k_den, centers=cen, sigma=cfg.sigma)
