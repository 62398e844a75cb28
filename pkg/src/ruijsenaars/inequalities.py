"""Direct evaluation and randomized testing of the convergence inequalities.

Three elementary functions of real tuples control every convergence proof in
the integral modules:

    S_n: recursively built from pairwise distances of a chain of tuples,
         bounded by half the final-tuple spread plus slack terms;
    L_n: the (n+1, n) interlacing combination, always <= 0;
    R_n: the (n, n) combination, bounded by eps (||y|| - ||x||).

All evaluations are vectorized over sample batches; samplers mix uniform
boxes with adversarial near-coincident clusters where the triangle
inequalities the proofs rest on become tight.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .report import VerificationReport

# comparisons of sums of |differences| accumulate roundoff proportional to
# the magnitudes involved; violations are only counted beyond this slack
_SLACK = 1e-9


def _pair_sum(x: np.ndarray) -> np.ndarray:
    """sum_{i != j} |x_i - x_j| batched over the leading axis."""
    return np.abs(x[:, :, None] - x[:, None, :]).sum(axis=(1, 2))


def _cross_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """sum_{i, j} |a_i - b_j| batched over the leading axis."""
    return np.abs(a[:, :, None] - b[:, None, :]).sum(axis=(1, 2))


def eval_S(tuples) -> np.ndarray:
    """S_n of a chain (y_1, ..., y_{n-1}, x_n); each y_k has k entries.

    Accepts a sequence of batched arrays, tuples[k] of shape (B, k+1).
    """
    arrs = [np.atleast_2d(np.asarray(t, dtype=float)) for t in tuples]
    n = len(arrs)
    for k, a in enumerate(arrs):
        if a.shape[1] != k + 1:
            raise ShapeMismatch(
                f"tuple {k} has {a.shape[1]} entries, expected {k + 1}")
    batches = {a.shape[0] for a in arrs}
    if len(batches) != 1:
        raise ShapeMismatch("inconsistent batch sizes")
    out = np.zeros(arrs[0].shape[0])
    for k in range(1, n):
        out += _pair_sum(arrs[k]) - _cross_sum(arrs[k], arrs[k - 1])
    return out


def eval_L(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """L_n(y_n, x_{n+1}), batched; x has one more column than y."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != y.shape[1] + 1:
        raise ShapeMismatch("x must have one more entry than y")
    return 0.5 * _pair_sum(x) + 0.5 * _pair_sum(y) - _cross_sum(x, y)


def eval_R(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """R_n(y_n, x_n), batched; equal column counts."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != y.shape[1]:
        raise ShapeMismatch("x and y must have equal lengths")
    return 0.5 * _pair_sum(x) + 0.5 * _pair_sum(y) - _cross_sum(x, y)


def sample_box(rng: np.random.Generator, shape, half_width: float,
               cluster_fraction: float = 0.25) -> np.ndarray:
    """Uniform box sample with a fraction of near-coincident clusters."""
    out = rng.uniform(-half_width, half_width, shape)
    b, m = shape
    k = int(b * cluster_fraction)
    if k and m >= 2:
        rows = rng.choice(b, size=k, replace=False)
        i, j = rng.integers(0, m, size=(2, k))
        out[rows, i] = out[rows, j] + rng.uniform(-1e-9, 1e-9, k)
    return out


def _scale(*arrays) -> np.ndarray:
    return sum(np.abs(a).sum(axis=1) for a in arrays) + 1.0


def check_S_bound(n: int, eps: float, n_samples: int = 100_000,
                  seed: int = 0, half_width: float = 10.0) -> VerificationReport:
    """S_n <= (1/2) sum |x_i - x_j| + eps ||x|| - eps/((n-1)! e) sum ||y_k||."""
    if not 0 <= eps <= 2 * (n - 1):
        raise ValueError("eps outside [0, 2(n-1)]")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    ys = [sample_box(rng, (n_samples, k), half_width) for k in range(1, n)]
    x = sample_box(rng, (n_samples, n), half_width)
    s = eval_S(ys + [x])
    bound = 0.5 * _pair_sum(x) + eps * np.abs(x).sum(axis=1)
    coef = eps / (math.factorial(n - 1) * math.e)
    for y in ys:
        bound -= coef * np.abs(y).sum(axis=1)
    excess = s - bound
    slack = _SLACK * _scale(x, *ys)
    violations = int(np.sum(excess > slack))
    worst = float(np.max(excess / _scale(x, *ys)))
    return VerificationReport(
        check=f"S-bound-n{n}-eps{eps}", n=n, residual=max(worst, 0.0),
        tolerance=0.0, passed=violations == 0,
        runtime_ms=1e3 * (time.perf_counter() - t0),
        metadata={"violations": violations, "samples": n_samples,
                  "half_width": half_width, "eps": eps})


def check_L_nonpositive(n: int, n_samples: int = 100_000, seed: int = 0,
                        half_width: float = 10.0) -> VerificationReport:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    y = sample_box(rng, (n_samples, n), half_width)
    x = sample_box(rng, (n_samples, n + 1), half_width)
    vals = eval_L(y, x)
    slack = _SLACK * _scale(x, y)
    violations = int(np.sum(vals > slack))
    return VerificationReport(
        check=f"L-nonpositive-n{n}", n=n,
        residual=max(float(np.max(vals / _scale(x, y))), 0.0),
        tolerance=0.0, passed=violations == 0,
        runtime_ms=1e3 * (time.perf_counter() - t0),
        metadata={"violations": violations, "samples": n_samples,
                  "half_width": half_width})


def check_R_bound(n: int, eps: float, n_samples: int = 100_000, seed: int = 0,
                  half_width: float = 10.0) -> VerificationReport:
    """R_n <= eps (||y|| - ||x||) for eps in [0, 1]."""
    if not 0 <= eps <= 1:
        raise ValueError("eps outside [0, 1]")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    y = sample_box(rng, (n_samples, n), half_width)
    x = sample_box(rng, (n_samples, n), half_width)
    vals = eval_R(y, x) - eps * (np.abs(y).sum(axis=1) - np.abs(x).sum(axis=1))
    slack = _SLACK * _scale(x, y)
    violations = int(np.sum(vals > slack))
    return VerificationReport(
        check=f"R-bound-n{n}-eps{eps}", n=n,
        residual=max(float(np.max(vals / _scale(x, y))), 0.0),
        tolerance=0.0, passed=violations == 0,
        runtime_ms=1e3 * (time.perf_counter() - t0),
        metadata={"violations": violations, "samples": n_samples,
                  "half_width": half_width, "eps": eps})
