"""Chernoff information between discrete distributions, in nats.

The Chernoff information is ``-min over lambda in [0,1] of log f_lambda``
with ``f_lambda = sum_x p1(x)^lambda p2(x)^(1-lambda)``.  ``log f_lambda``
is convex in lambda (each term is log-linear), so a golden-section search
finds the minimizer reliably.  Endpoint values are the one-sided limits:
``f_0 = sum over {x : p1(x) > 0} of p2(x)`` and symmetrically for ``f_1``,
which restricting every sum to the common support produces automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .mixtures import MixtureDistribution

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = 1.0 - _INVPHI

LAMBDA_TOL = 1e-12
MAX_ITER = 200


@dataclass(frozen=True)
class ChernoffResult:
    """Minimized exponent with solver diagnostics.

    ``value`` is nonnegative and may be ``inf`` (disjoint supports).  When
    the distributions are identical the reported ``lambda_star`` is 0.5 by
    convention, since every lambda attains the minimum.
    """

    value: float
    lambda_star: float
    iterations: int
    converged: bool


def _as_probs(dist) -> np.ndarray:
    if isinstance(dist, MixtureDistribution):
        return dist.probs
    return np.asarray(dist, dtype=float)


def _log_f(lp1: np.ndarray, lp2: np.ndarray, lam: float) -> float:
    t = lam * lp1 + (1.0 - lam) * lp2
    tmax = t.max()
    return float(tmax + np.log(np.exp(t - tmax).sum()))


def _chernoff_raw(p1: np.ndarray, p2: np.ndarray) -> ChernoffResult:
    # Distributions identical within 1e-12 per component carry no
    # distinguishing information; report exactly zero.
    if np.abs(p1 - p2).max() <= 1e-12:
        return ChernoffResult(value=0.0, lambda_star=0.5,
                              iterations=0, converged=True)
    common = (p1 > 0.0) & (p2 > 0.0)
    if not common.any():
        return ChernoffResult(value=math.inf, lambda_star=0.5,
                              iterations=0, converged=True)
    lp1 = np.log(p1[common])
    lp2 = np.log(p2[common])

    a, b = 0.0, 1.0
    c = a + _INVPHI2 * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _log_f(lp1, lp2, c)
    fd = _log_f(lp1, lp2, d)
    iterations = 0
    while b - a > LAMBDA_TOL and iterations < MAX_ITER:
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + _INVPHI2 * (b - a)
            fc = _log_f(lp1, lp2, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _log_f(lp1, lp2, d)
        iterations += 1

    lam = 0.5 * (a + b)
    candidates = [
        (_log_f(lp1, lp2, lam), lam),
        (_log_f(lp1, lp2, 0.0), 0.0),
        (_log_f(lp1, lp2, 1.0), 1.0),
    ]
    log_f_min, lam_star = min(candidates, key=lambda t: t[0])
    value = max(0.0, -log_f_min)
    if value == 0.0:
        lam_star = 0.5
    return ChernoffResult(value=value, lambda_star=lam_star,
                          iterations=iterations,
                          converged=(b - a) <= LAMBDA_TOL)


def f_lambda(p1, p2, lam: float) -> float:
    """Evaluate ``sum_x p1(x)^lam p2(x)^(1-lam)`` with 0^lam * c = 0.

    Result lies in [0, 1]; it is 0 exactly when the supports are disjoint.
    """
    a1, a2 = _as_probs(p1), _as_probs(p2)
    if a1.shape != a2.shape:
        raise InvalidInputError(f"dimension mismatch: {a1.shape} vs {a2.shape}")
    if not 0.0 <= lam <= 1.0:
        raise InvalidInputError(f"lambda {lam!r} outside [0, 1]")
    common = (a1 > 0.0) & (a2 > 0.0)
    if not common.any():
        return 0.0
    value = math.exp(_log_f(np.log(a1[common]), np.log(a2[common]), lam))
    return min(1.0, value)


def chernoff_info(p1, p2) -> ChernoffResult:
    """Chernoff information between two distributions on the same outcome set."""
    a1, a2 = _as_probs(p1), _as_probs(p2)
    if a1.shape != a2.shape:
        raise InvalidInputError(f"dimension mismatch: {a1.shape} vs {a2.shape}")
    return _chernoff_raw(a1, a2)


def bernoulli_ci(p: float, q: float) -> float:
    """Chernoff information between Bernoulli(p) and Bernoulli(q)."""
    for name, value in (("p", p), ("q", q)):
        if not 0.0 <= value <= 1.0 or value != value:
            raise InvalidInputError(f"{name}={value!r} outside [0, 1]")
    return _chernoff_raw(np.array([1.0 - p, p]), np.array([1.0 - q, q])).value


def symmetric_ci(epsilon: float) -> float:
    """Closed form for the pair Bernoulli((1-e)/2), Bernoulli((1+e)/2).

    Equals ``-log sqrt(1 - e^2)``; infinite at e = 1.
    """
    if not 0.0 <= epsilon <= 1.0 or epsilon != epsilon:
        raise InvalidInputError(f"epsilon={epsilon!r} outside [0, 1]")
    if epsilon == 1.0:
        return math.inf
    return -0.5 * math.log1p(-epsilon * epsilon)


def chernoff_info_batch(logp1: np.ndarray, logp2: np.ndarray,
                        n_iter: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Chernoff information for many fully supported pairs.

    Inputs are finite log-probability arrays of shape (B, K).  60 golden
    section steps shrink the lambda bracket below 1e-12.  Returns
    ``(values, lambda_stars)``; identical pairs report lambda 0.5.
    """

    def log_f(lam: np.ndarray) -> np.ndarray:
        t = lam[:, None] * logp1 + (1.0 - lam[:, None]) * logp2
        tmax = t.max(axis=1, keepdims=True)
        return (tmax[:, 0] + np.log(np.exp(t - tmax).sum(axis=1)))

    n = logp1.shape[0]
    a = np.zeros(n)
    b = np.ones(n)
    c = a + _INVPHI2 * (b - a)
    d = a + _INVPHI * (b - a)
    fc = log_f(c)
    fd = log_f(d)
    for _ in range(n_iter):
        shrink_right = fc < fd
        b = np.where(shrink_right, d, b)
        a = np.where(shrink_right, a, c)
        c_old, fc_old = c, fc
        d_old, fd_old = d, fd
        h = b - a
        c = np.where(shrink_right, a + _INVPHI2 * h, d_old)
        d = np.where(shrink_right, c_old, a + _INVPHI * h)
        probe = np.where(shrink_right, c, d)
        f_new = log_f(probe)
        fc = np.where(shrink_right, f_new, fd_old)
        fd = np.where(shrink_right, fc_old, f_new)

    lam = 0.5 * (a + b)
    values = np.maximum(0.0, -log_f(lam)) + 0.0  # +0.0 normalizes -0.0
    identical = np.all(logp1 == logp2, axis=1)
    values = np.where(identical, 0.0, values)
    lam = np.where(values == 0.0, 0.5, lam)
    return values, lam
