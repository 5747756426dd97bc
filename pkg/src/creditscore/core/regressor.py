"""
Linear performance model fitted by batch gradient descent.

The optimizer works on min-max scaled features (train-set statistics) and
reports coefficients in raw feature units. A normal-equations solver gives
an independent closed-form answer for the same least-squares cost.
"""
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import (
    DegenerateFeatureError,
    DivergenceError,
    InvalidInputError,
    SingularSystemError,
)
from ..models.cohort import FEATURE_NAMES, StudentRecord
from ..models.regression import (
    CostHistory,
    GradientCheck,
    ModelParams,
    NormMeta,
    SplitDataset,
    TrainConfig,
)
from ..utils.logging import get_logger
from .rng_stats import RngState, sample_gaussian, shuffled

logger = get_logger(__name__)

SPLIT_STREAM = 2

# Pivots below this fraction of the largest matrix entry count as zero
PIVOT_TOLERANCE = 1e-10

RecordsOrMatrix = Union[Sequence[StudentRecord], np.ndarray]


# ── Data extraction ─────────────────────────────────────────────────────────

def feature_matrix(records: Sequence[StudentRecord]) -> np.ndarray:
    """m x 5 matrix of raw features in cohort column order."""
    if not records:
        return np.empty((0, len(FEATURE_NAMES)), dtype=float)
    return np.array([r.features() for r in records], dtype=float)


def target_vector(records: Sequence[StudentRecord]) -> np.ndarray:
    """
    Performance values of ``records``.

    Raises:
        InvalidInputError: If a record has no performance value
    """
    missing = [i for i, r in enumerate(records) if r.performance is None]
    if missing:
        raise InvalidInputError(
            f"{len(missing)} record(s) have no performance value",
            context={"first_missing_index": missing[0]}
        )
    return np.array([r.performance for r in records], dtype=float)


def _with_intercept(X: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((X.shape[0], 1)), X])


def _check_shapes(theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> None:
    if X.ndim != 2 or y.ndim != 1 or theta.ndim != 1:
        raise InvalidInputError(
            "theta and y must be vectors and X a matrix",
            context={"theta_ndim": theta.ndim, "X_ndim": X.ndim, "y_ndim": y.ndim}
        )
    m, k = X.shape
    if m < 1 or y.shape[0] != m or theta.shape[0] != k + 1:
        raise InvalidInputError(
            "Shape mismatch between theta, X and y",
            context={"theta": theta.shape[0], "X": [m, k], "y": y.shape[0]}
        )


# ── Split ───────────────────────────────────────────────────────────────────

def split(cohort: Sequence[StudentRecord], cfg: TrainConfig) -> SplitDataset:
    """
    Shuffle with ``cfg.shuffle_seed`` (Fisher-Yates) and partition.

    The training partition holds round(split_ratio * n) records, kept
    between 1 and n - 1 so neither side is empty.

    Raises:
        InvalidInputError: If the cohort has fewer than two records
    """
    n = len(cohort)
    if n < 2:
        raise InvalidInputError(
            "Cohort must contain at least two records to split",
            context={"n_records": n}
        )

    n_train = int(math.floor(cfg.split_ratio * n + 0.5))
    n_train = min(n - 1, max(1, n_train))

    order = shuffled(RngState(cfg.shuffle_seed, stream=SPLIT_STREAM), range(n))
    train = [cohort[i] for i in order[:n_train]]
    test = [cohort[i] for i in order[n_train:]]

    logger.info("split_completed", n_records=n, n_train=len(train), n_test=len(test))
    return SplitDataset(train=train, test=test)


# ── Normalization ───────────────────────────────────────────────────────────

def normalize(
    records: RecordsOrMatrix,
    existing_meta: Optional[NormMeta] = None
) -> Tuple[np.ndarray, NormMeta]:
    """
    Min-max scale features to [0, 1].

    With ``existing_meta`` the given offsets and scales are applied as-is
    (the test-set path); otherwise they are computed from ``records``.

    Raises:
        InvalidInputError: If there are no records
        DegenerateFeatureError: If a feature column has zero range
    """
    X = records if isinstance(records, np.ndarray) else feature_matrix(records)
    if X.ndim != 2 or X.shape[0] == 0:
        raise InvalidInputError("Cannot normalize an empty feature matrix", context={})

    if existing_meta is None:
        mins = X.min(axis=0)
        ranges = X.max(axis=0) - mins
        for j, width in enumerate(ranges):
            if not width > 0:
                column = FEATURE_NAMES[j] if X.shape[1] == len(FEATURE_NAMES) else f"x{j + 1}"
                raise DegenerateFeatureError(
                    f"Feature '{column}' has zero variance and cannot be scaled",
                    context={"column": column, "value": float(mins[j])}
                )
        existing_meta = NormMeta(
            offsets=tuple(float(v) for v in mins),
            scales=tuple(float(v) for v in ranges),
        )

    offsets = np.asarray(existing_meta.offsets, dtype=float)
    scales = np.asarray(existing_meta.scales, dtype=float)
    if offsets.shape[0] != X.shape[1]:
        raise InvalidInputError(
            "Normalization metadata does not match the feature count",
            context={"features": X.shape[1], "meta": offsets.shape[0]}
        )
    return (X - offsets) / scales, existing_meta


def denormalize(X_norm: np.ndarray, meta: NormMeta) -> np.ndarray:
    """Inverse of ``normalize`` for a given meta."""
    return X_norm * np.asarray(meta.scales) + np.asarray(meta.offsets)


# ── Hypothesis, cost, gradient ──────────────────────────────────────────────

def hypothesis(theta: Sequence[float], x: Sequence[float]) -> float:
    """theta0 + sum(theta_i * x_i)."""
    if len(theta) != len(x) + 1:
        raise InvalidInputError(
            "theta must have one more entry than x",
            context={"theta": len(theta), "x": len(x)}
        )
    return theta[0] + math.fsum(t * v for t, v in zip(theta[1:], x))


def cost(theta: Sequence[float], X: np.ndarray, y: np.ndarray) -> float:
    """
    Least-squares cost J = (1/2m) * sum((H(x) - y)^2).

    Raises:
        InvalidInputError: On shape mismatch or an empty X
    """
    theta = np.asarray(theta, dtype=float)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_shapes(theta, X, y)

    residuals = theta[0] + X @ theta[1:] - y
    return float(residuals @ residuals) / (2 * X.shape[0])


def gradient(theta: Sequence[float], X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Partial derivatives of the cost: (1/m) * sum((H(x) - y) * x_j), x_0 = 1.

    Raises:
        InvalidInputError: On shape mismatch or an empty X
    """
    theta = np.asarray(theta, dtype=float)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_shapes(theta, X, y)

    residuals = theta[0] + X @ theta[1:] - y
    m = X.shape[0]
    return np.concatenate(([residuals.sum()], X.T @ residuals)) / m


def finite_difference_gradient(
    theta: Sequence[float],
    X: np.ndarray,
    y: np.ndarray,
    step: float = 1e-6
) -> np.ndarray:
    """Central finite-difference approximation of ``gradient``."""
    theta = np.asarray(theta, dtype=float)
    approx = np.empty_like(theta)
    for j in range(theta.shape[0]):
        forward = theta.copy()
        backward = theta.copy()
        forward[j] += step
        backward[j] -= step
        approx[j] = (cost(forward, X, y) - cost(backward, X, y)) / (2 * step)
    return approx


def gradient_relative_error(analytic: np.ndarray, approx: np.ndarray) -> float:
    """Largest component error, relative to max(1, |analytic|, |approx|)."""
    scale = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(approx)))
    return float(np.max(np.abs(analytic - approx) / scale))


def check_gradient(
    X: np.ndarray,
    y: np.ndarray,
    seed: int,
    points: int = 10,
    step: float = 1e-6,
    tolerance: float = 1e-5
) -> GradientCheck:
    """Compare analytic and finite-difference gradients at random theta points."""
    state = RngState(seed, stream=SPLIT_STREAM + 1)
    worst = 0.0
    for _ in range(points):
        theta = np.array([sample_gaussian(state, 0.0, 1.0) for _ in range(X.shape[1] + 1)])
        worst = max(
            worst,
            gradient_relative_error(
                gradient(theta, X, y), finite_difference_gradient(theta, X, y, step)
            )
        )
    return GradientCheck(
        points=points,
        step=step,
        max_relative_error=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
    )


# ── Gradient descent ────────────────────────────────────────────────────────

def fit(records: Sequence[StudentRecord], cfg: TrainConfig) -> Tuple[ModelParams, CostHistory]:
    """
    Run ``cfg.iterations`` full-batch updates from theta = 0 on ``records``.

    Raises:
        DegenerateFeatureError: If a feature column is constant
        DivergenceError: If the cost becomes non-finite
    """
    X_norm, meta = normalize(records)
    y = target_vector(records)
    Xb = _with_intercept(X_norm)
    Xt = np.ascontiguousarray(Xb.T)
    m = Xb.shape[0]
    alpha = cfg.alpha

    theta = np.zeros(Xb.shape[1])
    costs = np.empty(cfg.iterations + 1)

    with np.errstate(over="ignore", invalid="ignore"):
        for iteration in range(cfg.iterations + 1):
            residuals = Xb @ theta - y
            j = float(residuals @ residuals) / (2 * m)
            if not math.isfinite(j):
                logger.error("divergence_detected", iteration=iteration, alpha=alpha)
                raise DivergenceError(
                    f"Cost became non-finite at iteration {iteration} with alpha={alpha}",
                    context={"iteration": iteration, "alpha": alpha}
                )
            costs[iteration] = j
            if iteration < cfg.iterations:
                theta = theta - alpha * (Xt @ residuals) / m

    params = ModelParams.from_normalized(tuple(float(t) for t in theta), meta)
    history = CostHistory(costs=costs.tolist())

    logger.info(
        "training_completed",
        n_records=m,
        iterations=cfg.iterations,
        alpha=alpha,
        initial_cost=history.initial,
        final_cost=history.final
    )
    return params, history


def train(split_data: SplitDataset, cfg: TrainConfig) -> Tuple[ModelParams, CostHistory]:
    """Fit on the training partition."""
    return fit(split_data.train, cfg)


def refit_on_test(split_data: SplitDataset, cfg: TrainConfig) -> Tuple[ModelParams, CostHistory]:
    """Fit a fresh model on the test partition (mirrors a fitted-on-test comparison row)."""
    return fit(split_data.test, cfg)


# ── Closed-form oracle ──────────────────────────────────────────────────────

def gaussian_elimination(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Solve A x = b by Gaussian elimination with partial pivoting.

    Raises:
        SingularSystemError: If a pivot vanishes relative to the largest entry of A
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    n = A.shape[0]
    threshold = PIVOT_TOLERANCE * max(float(np.max(np.abs(A))), np.finfo(float).tiny)

    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[pivot_row, col]) <= threshold:
            raise SingularSystemError(
                "Normal equations are singular (rank-deficient design matrix)",
                context={"column": col, "pivot": float(A[pivot_row, col])}
            )
        if pivot_row != col:
            A[[col, pivot_row]] = A[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]

        factors = A[col + 1:, col] / A[col, col]
        A[col + 1:, col:] -= np.outer(factors, A[col, col:])
        b[col + 1:] -= factors * b[col]

    x = np.empty(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - A[row, row + 1:] @ x[row + 1:]) / A[row, row]
    return x


def solve_normal_equations(split_data: SplitDataset) -> ModelParams:
    """
    Exact least-squares minimizer on the training partition.

    The system is formed in the same min-max scaled space gradient descent
    uses, which keeps it well conditioned, then converted to raw units.

    Raises:
        DegenerateFeatureError: If a feature column is constant
        SingularSystemError: If the design matrix is rank deficient
    """
    X_norm, meta = normalize(split_data.train)
    y = target_vector(split_data.train)
    Xb = _with_intercept(X_norm)

    theta_norm = gaussian_elimination(Xb.T @ Xb, Xb.T @ y)
    params = ModelParams.from_normalized(tuple(float(t) for t in theta_norm), meta)

    logger.info("normal_equations_solved", n_records=Xb.shape[0], theta=list(params.theta))
    return params


# ── Evaluation ──────────────────────────────────────────────────────────────

def predict(params: ModelParams, records: Sequence[StudentRecord]) -> List[float]:
    """Raw-space predictions, one per record."""
    return [hypothesis(params.theta, r.features()) for r in records]


def evaluate(params: ModelParams, records: Sequence[StudentRecord]) -> Tuple[float, List[float]]:
    """
    Cost and per-record predictions on ``records``.

    An empty record list evaluates to a cost of 0.0 and no predictions.
    """
    predictions = predict(params, records)
    if not records:
        return 0.0, predictions

    residuals = np.asarray(predictions) - target_vector(records)
    return float(residuals @ residuals) / (2 * len(records)), predictions
