"""Grid cross-validation for (sigma, lambda), per estimator and direction.

The bandwidth grid is expressed as factors of the median pairwise distance
of the pooled numerator + denominator samples, so both fit directions of a
segment pair share one candidate set.  Fold assignment is one seeded shuffle
of sample indices followed by contiguous blocks; numerator and denominator
sets are folded independently.

Held-out criteria:

* uLSIF / RuLSIF: the squared-loss objective without the regularizer,
  J = 0.5 theta' H_hold theta - h_hold' theta, minimized.  With the
  alpha-mixed H this expands to
  0.5 [alpha mean(g_num_hold^2) + (1-alpha) mean(g_den_hold^2)]
  - mean(g_num_hold).
* KLIEP: the held-out numerator log-likelihood, maximized.  The lambda axis
  is ignored (KLIEP has no ridge term); the score table repeats the
  per-sigma score across lambda so the table stays exhaustive.

Ties are broken toward the larger sigma, then the larger lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import seeding
from .errors import ParameterError
from .estimators import (
    ESTIMATOR_KINDS,
    KLIEP,
    LOG_FLOOR,
    _solve_spd,
    kliep_fit,
)
from .kernel import DesignMatrices, median_distance
from scipy.spatial.distance import cdist

DEFAULT_SIGMA_FACTORS = (0.6, 0.8, 1.0, 1.2, 1.4)
DEFAULT_LAMBDAS = (1e-3, 1e-2, 1e-1, 1e0, 1e1)


@dataclass(frozen=True)
class CvGrid:
    """Candidate grid; sigma candidates are ``factor * d_med``."""

    sigma_factors: tuple[float, ...] = DEFAULT_SIGMA_FACTORS
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    folds: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        factors = tuple(sorted({float(f) for f in self.sigma_factors}))
        lambdas = tuple(sorted({float(v) for v in self.lambdas}))
        if not factors or not lambdas:
            raise ParameterError("CV grid axes must be non-empty")
        if any(not np.isfinite(f) or f <= 0 for f in factors):
            raise ParameterError(f"sigma factors must be positive, got {factors}")
        if any(not np.isfinite(v) or v <= 0 for v in lambdas):
            raise ParameterError(f"lambda candidates must be positive, got {lambdas}")
        if int(self.folds) < 2:
            raise ParameterError(f"folds must be >= 2, got {self.folds}")
        object.__setattr__(self, "sigma_factors", factors)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "folds", int(self.folds))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class CvResult:
    best_sigma: float
    best_lambda: float
    score_table: dict[tuple[float, float], float] = field(repr=False)


def _fold_blocks(count: int, folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    return np.array_split(rng.permutation(count), folds)


def cv_select(
    numerator_samples: np.ndarray,
    denominator_samples: np.ndarray,
    grid: CvGrid,
    estimator_kind: str,
    alpha: float = 0.0,
) -> CvResult:
    """Exhaustive grid search; returns the best pair and the full table."""
    if estimator_kind not in ESTIMATOR_KINDS:
        raise ParameterError(f"unknown estimator kind {estimator_kind!r}")
    num = np.atleast_2d(np.asarray(numerator_samples, dtype=np.float64))
    den = np.atleast_2d(np.asarray(denominator_samples, dtype=np.float64))
    if min(num.shape[0], den.shape[0]) < grid.folds:
        raise ParameterError(
            f"sample sets of sizes {num.shape[0]}/{den.shape[0]} are smaller "
            f"than the fold count {grid.folds}"
        )

    d_med = median_distance(np.vstack([num, den]))
    sigmas = [f * d_med for f in grid.sigma_factors]

    rng = seeding.rng_from(grid.seed)
    num_blocks = _fold_blocks(num.shape[0], grid.folds, rng)
    den_blocks = _fold_blocks(den.shape[0], grid.folds, rng)
    num_train = [
        np.concatenate([b for j, b in enumerate(num_blocks) if j != f])
        for f in range(grid.folds)
    ]
    den_train = [
        np.concatenate([b for j, b in enumerate(den_blocks) if j != f])
        for f in range(grid.folds)
    ]

    centers = num
    sq_num = cdist(num, centers, "sqeuclidean")
    sq_den = cdist(den, centers, "sqeuclidean")

    table: dict[tuple[float, float], float] = {}
    for sigma in sigmas:
        scale = 2.0 * sigma**2
        k_num = np.exp(-sq_num / scale)
        k_den = np.exp(-sq_den / scale)
        if estimator_kind == KLIEP:
            fold_scores = np.empty(grid.folds)
            for f in range(grid.folds):
                design = DesignMatrices(
                    k_num=k_num[num_train[f]],
                    k_den=k_den[den_train[f]],
                    centers=centers,
                    sigma=sigma,
                )
                model, _ = kliep_fit(design)
                g_hold = k_num[num_blocks[f]] @ model.theta
                fold_scores[f] = np.mean(np.log(np.maximum(g_hold, LOG_FLOOR)))
            score = float(fold_scores.mean())
            for lam in grid.lambdas:
                table[(sigma, lam)] = score
        else:
            sums = {lam: 0.0 for lam in grid.lambdas}
            for f in range(grid.folds):
                b_tr = k_num[num_train[f]]
                a_tr = k_den[den_train[f]]
                h_mat = (alpha / b_tr.shape[0]) * (b_tr.T @ b_tr) + (
                    (1.0 - alpha) / a_tr.shape[0]
                ) * (a_tr.T @ a_tr)
                h_mat = 0.5 * (h_mat + h_mat.T)
                h_vec = b_tr.mean(axis=0)
                b_ho = k_num[num_blocks[f]]
                a_ho = k_den[den_blocks[f]]
                for lam in grid.lambdas:
                    theta = _solve_spd(h_mat, lam, h_vec)
                    g_num = b_ho @ theta
                    g_den = a_ho @ theta
                    sums[lam] += 0.5 * (
                        alpha * float(np.mean(g_num**2))
                        + (1.0 - alpha) * float(np.mean(g_den**2))
                    ) - float(np.mean(g_num))
            for lam in grid.lambdas:
                table[(sigma, lam)] = sums[lam] / grid.folds

    maximize = estimator_kind == KLIEP
    best_key = None
    best_score = None
    for sigma in sigmas:  # ascending; ties resolve to the larger sigma/lambda
        for lam in grid.lambdas:
            score = table[(sigma, lam)]
            if best_score is None:
                better = True
            elif maximize:
                better = score >= best_score
            else:
                better = score <= best_score
            if better:
                best_key = (sigma, lam)
                best_score = score
    return CvResult(
        best_sigma=best_key[0], best_lambda=best_key[1], score_table=table
    )
