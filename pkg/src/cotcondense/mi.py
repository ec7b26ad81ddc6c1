"""Kraskov k-nearest-neighbor mutual information between embedding matrices.

Given paired sample matrices A (m x d_a) and B (m x d_b), the estimator
computes, for each sample i, the Chebyshev (l-infinity) distance to its
k-th nearest neighbor in the joint space,

    rho_i = k-th smallest over j != i of max(||a_i - a_j||_inf, ||b_i - b_j||_inf),

counts the neighbors strictly inside rho_i in each marginal space, and
returns

    I(A; B) = psi(k) + psi(m) - (1/m) * sum_i [psi(n_i^A + 1) + psi(n_i^B + 1)]

in nats. Marginal counts use strict inequality, so points at distance
exactly rho_i are excluded. Duplicate joint points make rho_i = 0 and
poison the psi terms; they raise unless jitter is enabled.

Two routes are kept deliberately: a vectorized production path and a
literal O(m^2) reference path built from the scalar operations below.
They must agree bit-for-bit on every radius and count.

References:
    Kraskov, A., Stoegbauer, H., & Grassberger, P. (2004).
    Estimating mutual information. Physical Review E, 69(6), 066138.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .digamma import digamma
from .errors import DegenerateMathError, DimensionMismatchError, DomainError

DEFAULT_K = 5

_CHUNK_ROWS = 256


@dataclass(frozen=True)
class EmbeddingMatrix:
    """m x d matrix of per-trace embeddings with provenance metadata."""

    data: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise DomainError(f"embedding matrix must be 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise DomainError("embedding matrix contains non-finite values")
        object.__setattr__(self, "data", arr)

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class MIEstimate:
    """Mutual information in nats plus the parameters that produced it."""

    value: float
    k: int
    m: int
    d_a: int
    d_b: int
    duplicates_detected: bool = False
    jitter_applied: float | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "mi",
            "value_nats": self.value,
            "k": self.k,
            "m": self.m,
            "d_a": self.d_a,
            "d_b": self.d_b,
            "duplicates_detected": self.duplicates_detected,
            "jitter_applied": self.jitter_applied,
        }


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, EmbeddingMatrix):
        return matrix.data
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2:
        raise DomainError(f"expected a 2-D sample matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise DomainError("sample matrix contains non-finite values")
    return arr


def _joint_radius_raw(i: int, a: np.ndarray, b: np.ndarray, k: int) -> float:
    dists = []
    for j in range(a.shape[0]):
        if j == i:
            continue
        da = np.max(np.abs(a[i] - a[j]))
        db = np.max(np.abs(b[i] - b[j]))
        dists.append(max(da, db))
    return float(sorted(dists)[k - 1])


def _marginal_counts_raw(i: int, matrix: np.ndarray, rho: float) -> int:
    count = 0
    for j in range(matrix.shape[0]):
        if j == i:
            continue
        if np.max(np.abs(matrix[i] - matrix[j])) < rho:
            count += 1
    return count


def joint_radius(i: int, a: np.ndarray, b: np.ndarray, k: int) -> float:
    """Distance to the k-th joint neighbor of row ``i`` (0-based).

    Literal per-pair evaluation; the reference route for the vectorized
    path. A zero radius means row ``i`` has at least k exact joint
    duplicates, which poisons the estimator, so it raises.
    """
    a = _as_array(a)
    b = _as_array(b)
    m = a.shape[0]
    if not 1 <= k <= m - 1:
        raise DomainError(f"need 1 <= k <= m-1, got k={k}, m={m}")
    rho = _joint_radius_raw(i, a, b, k)
    if rho == 0:
        raise DegenerateMathError(
            f"row {i} has duplicate joint points (rho = 0); enable jitter to break ties"
        )
    return rho


def marginal_counts(i: int, matrix: np.ndarray, rho: float) -> int:
    """Number of rows j != i with ``||m_i - m_j||_inf`` strictly below ``rho``."""
    matrix = _as_array(matrix)
    if rho < 0:
        raise DomainError(f"radius must be >= 0, got {rho}")
    return _marginal_counts_raw(i, matrix, rho)


def reference_radii_and_counts(
    a: np.ndarray, b: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """O(m^2) loop evaluation of every radius and marginal count."""
    a = _as_array(a)
    b = _as_array(b)
    m = a.shape[0]
    rho = np.empty(m)
    n_a = np.empty(m, dtype=np.int64)
    n_b = np.empty(m, dtype=np.int64)
    for i in range(m):
        rho[i] = _joint_radius_raw(i, a, b, k)
        n_a[i] = _marginal_counts_raw(i, a, rho[i])
        n_b[i] = _marginal_counts_raw(i, b, rho[i])
    return rho, n_a, n_b


def fast_radii_and_counts(
    a: np.ndarray, b: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized radii and counts; bit-identical to the reference route.

    Works in row chunks so the m x m distance matrix is never fully
    materialized. The joint Chebyshev distance is the max of the two
    per-matrix l-infinity distances, which avoids concatenating A and B.
    """
    a = _as_array(a)
    b = _as_array(b)
    m = a.shape[0]
    rho = np.empty(m)
    n_a = np.empty(m, dtype=np.int64)
    n_b = np.empty(m, dtype=np.int64)
    for start in range(0, m, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, m)
        dist_a = cdist(a[start:stop], a, metric="chebyshev")
        dist_b = cdist(b[start:stop], b, metric="chebyshev")
        joint = np.maximum(dist_a, dist_b)
        rows = np.arange(start, stop)
        joint[rows - start, rows] = np.inf  # exclude self from the k smallest
        chunk_rho = np.partition(joint, k - 1, axis=1)[:, k - 1]
        rho[start:stop] = chunk_rho
        # Strict inequality; subtract the self distance of 0 when rho > 0.
        within_a = dist_a < chunk_rho[:, None]
        within_b = dist_b < chunk_rho[:, None]
        n_a[start:stop] = within_a.sum(axis=1) - (chunk_rho > 0)
        n_b[start:stop] = within_b.sum(axis=1) - (chunk_rho > 0)
    return rho, n_a, n_b


def _standardize(arr: np.ndarray) -> np.ndarray:
    mean = arr.mean(axis=0)
    std = arr.std(axis=0)
    std[std == 0] = 1.0
    return (arr - mean) / std


def estimate_mi(
    a,
    b,
    k: int = DEFAULT_K,
    jitter: float | None = None,
    jitter_seed: int = 0,
    standardize: bool = False,
    allow_dim_mismatch: bool = False,
    use_reference: bool = False,
) -> MIEstimate:
    """Estimate I(A; B) in nats from paired sample matrices.

    Args:
        a, b: paired matrices (rows from the same example must share the
            row index); EmbeddingMatrix or anything array-like.
        k: neighbor count, defaults to 5.
        jitter: when set, adds uniform noise in [0, jitter) to both
            matrices (seeded) before distances, breaking duplicate points.
        standardize: per-column (x - mean) / std on each matrix first;
            off by default since l-infinity distances are scale-sensitive
            on purpose.
        allow_dim_mismatch: permit d_a != d_b (only meaningful when both
            matrices came from the same embedding model).
        use_reference: run the literal O(m^2) route instead of the
            vectorized one; results are identical.

    The estimate is symmetric in (a, b) and invariant under joint row
    permutation; summation order is fixed (exact compensated sum) so
    results are bit-stable.
    """
    a = _as_array(a)
    b = _as_array(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(
            f"paired matrices need equal sample counts, got {a.shape[0]} and {b.shape[0]}"
        )
    if a.shape[1] != b.shape[1] and not allow_dim_mismatch:
        raise DimensionMismatchError(
            f"matrices have widths {a.shape[1]} and {b.shape[1]}; "
            "pass allow_dim_mismatch=True if both came from the same model"
        )
    m = a.shape[0]
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if m < k + 1:
        raise DomainError(f"need at least k+1 = {k + 1} samples, got {m}")

    if standardize:
        a = _standardize(a)
        b = _standardize(b)

    joint = np.concatenate([a, b], axis=1)
    duplicates = np.unique(joint, axis=0).shape[0] < m

    applied = None
    if jitter is not None:
        if jitter <= 0:
            raise DomainError(f"jitter magnitude must be positive, got {jitter}")
        rng = np.random.default_rng(jitter_seed)
        a = a + rng.uniform(0.0, jitter, size=a.shape)
        b = b + rng.uniform(0.0, jitter, size=b.shape)
        applied = jitter

    route = reference_radii_and_counts if use_reference else fast_radii_and_counts
    rho, n_a, n_b = route(a, b, k)

    if np.any(rho == 0):
        hint = (
            "increase the jitter magnitude"
            if applied is not None
            else "enable jitter (e.g. magnitude 1e-10) to break ties"
        )
        raise DegenerateMathError(
            f"{int((rho == 0).sum())} samples have duplicate joint points (rho = 0); {hint}"
        )

    psi_cache: dict[int, float] = {}

    def psi_count(count: int) -> float:
        if count not in psi_cache:
            psi_cache[count] = digamma(count + 1)
        return psi_cache[count]

    total = math.fsum(psi_count(int(n_a[i])) + psi_count(int(n_b[i])) for i in range(m))
    value = digamma(k) + digamma(m) - total / m
    return MIEstimate(
        value=value,
        k=k,
        m=m,
        d_a=a.shape[1],
        d_b=b.shape[1],
        duplicates_detected=bool(duplicates),
        jitter_applied=applied,
    )
