"""Photon-number statistics of the initial cavity field.

Builds truncated number-basis data for coherent, thermal, and user-supplied
field states. Truncation keeps the discarded probability mass below a
caller-chosen tail bound, so sums over Fock blocks downstream are finite and
reproducible. Truncated weights are used as-is, never renormalized: the
missing mass is bounded by ``tail_epsilon`` by construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InvalidInputError

DEFAULT_TAIL_EPSILON = 1e-12

# Chunk size for the incremental coherent-state truncation search.
_CHUNK = 64


@dataclass(frozen=True)
class PhotonDistribution:
    """Truncated photon-number content of the initial field state.

    ``weights[n]`` is the occupation probability P_n for n = 0 .. n_max.
    ``amplitudes`` holds the number-basis coefficients C_n when the state is
    pure (then ``|C_n|**2 == weights[n]``) and is None for mixed fields.
    ``mean_n`` is the mean photon number of the untruncated state.
    """

    kind: str
    weights: np.ndarray
    amplitudes: np.ndarray | None
    mean_n: float
    tail_epsilon: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidInputError("weights must be a non-empty 1-D array")
        if not np.all(np.isfinite(w)) or np.any(w < 0.0):
            raise InvalidInputError("weights must be finite and non-negative")
        object.__setattr__(self, "weights", w)
        if self.amplitudes is not None:
            a = np.asarray(self.amplitudes, dtype=complex)
            if a.shape != w.shape:
                raise InvalidInputError("amplitudes must match weights in length")
            if not np.all(np.isfinite(a)):
                raise InvalidInputError("amplitudes must be finite")
            object.__setattr__(self, "amplitudes", a)
        if not (math.isfinite(self.mean_n) and self.mean_n >= 0.0):
            raise InvalidInputError("mean_n must be finite and non-negative")
        if not (0.0 < self.tail_epsilon < 1.0):
            raise InvalidInputError("tail_epsilon must lie in (0, 1)")
        total = math.fsum(w)
        # Slack of a few ulps on either side; the tail bound itself is part
        # of the construction contract, not re-derived here.
        if not (1.0 - self.tail_epsilon - 1e-13 <= total <= 1.0 + 1e-12):
            raise InvalidInputError(
                f"weights sum to {total!r}, outside [1 - tail_epsilon, 1]"
            )

    @property
    def n_max(self) -> int:
        """Largest retained photon number."""
        return self.weights.size - 1

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None


def _check_tail(tail_epsilon):
    if not (isinstance(tail_epsilon, (int, float)) and 0.0 < tail_epsilon < 1.0):
        raise InvalidInputError("tail_epsilon must lie in (0, 1)")


def coherent_amplitudes(alpha, tail_epsilon=DEFAULT_TAIL_EPSILON) -> PhotonDistribution:
    """Truncated number-basis expansion of a coherent state.

    C_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!), evaluated in log space so
    large |alpha| cannot overflow the factorial. n_max is the smallest index
    whose discarded Poisson tail stays below ``tail_epsilon``.
    """
    _check_tail(tail_epsilon)
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise InvalidInputError("alpha must be finite")
    a2 = abs(alpha) ** 2
    if a2 == 0.0:
        return PhotonDistribution(
            kind="coherent",
            weights=np.array([1.0]),
            amplitudes=np.array([1.0 + 0.0j]),
            mean_n=0.0,
            tail_epsilon=tail_epsilon,
        )
    phase = cmath.phase(alpha)
    target = 1.0 - tail_epsilon
    # Grow the retained range chunk by chunk until the cumulative Poisson
    # mass crosses 1 - tail_epsilon.
    upper = _CHUNK
    while True:
        n = np.arange(upper)
        log_p = -a2 + n * math.log(a2) - gammaln(n + 1.0)
        cum = np.cumsum(np.exp(log_p))
        hits = np.nonzero(cum > target)[0]
        if hits.size:
            n_max = int(hits[0])
            break
        upper += max(_CHUNK, upper // 2)
    n = np.arange(n_max + 1)
    log_p = -a2 + n * math.log(a2) - gammaln(n + 1.0)
    amps = np.exp(0.5 * log_p + 1j * phase * n)
    return PhotonDistribution(
        kind="coherent",
        weights=np.abs(amps) ** 2,
        amplitudes=amps,
        mean_n=a2,
        tail_epsilon=tail_epsilon,
    )


def thermal_weights(mean_n, tail_epsilon=DEFAULT_TAIL_EPSILON) -> PhotonDistribution:
    """Truncated geometric photon distribution of a thermal field.

    P_n = q^n / (1 + mean_n) with q = mean_n / (1 + mean_n). The geometric
    tail past n_max equals q^(n_max + 1), so the cutoff comes from a
    logarithm rather than a summation loop.
    """
    _check_tail(tail_epsilon)
    if not (isinstance(mean_n, (int, float)) and math.isfinite(mean_n)):
        raise InvalidInputError("mean_n must be a finite number")
    if mean_n < 0.0:
        raise InvalidInputError("mean_n must be non-negative")
    mean_n = float(mean_n)
    if mean_n == 0.0:
        return PhotonDistribution(
            kind="thermal",
            weights=np.array([1.0]),
            amplitudes=None,
            mean_n=0.0,
            tail_epsilon=tail_epsilon,
        )
    q = mean_n / (1.0 + mean_n)
    log_q = math.log(q)
    n_max = max(0, math.ceil(math.log(tail_epsilon) / log_q) - 1)
    # Guard against rounding in the closed form: enforce q^(n_max+1) < eps
    # with n_max minimal.
    while q ** (n_max + 1) >= tail_epsilon:
        n_max += 1
    while n_max > 0 and q**n_max < tail_epsilon:
        n_max -= 1
    n = np.arange(n_max + 1)
    weights = np.exp(n * log_q) * (1.0 - q)
    return PhotonDistribution(
        kind="thermal",
        weights=weights,
        amplitudes=None,
        mean_n=mean_n,
        tail_epsilon=tail_epsilon,
    )


def mean_n_from_temperature(frequency_over_kT) -> float:
    """Bose-Einstein mean occupation for a mode at the given h*nu/kT ratio.

    Uses expm1 so small ratios (high temperature) do not lose precision to
    cancellation.
    """
    if not (
        isinstance(frequency_over_kT, (int, float))
        and math.isfinite(frequency_over_kT)
    ):
        raise InvalidInputError("frequency_over_kT must be a finite number")
    if frequency_over_kT <= 0.0:
        raise InvalidInputError("frequency_over_kT must be positive")
    return 1.0 / math.expm1(frequency_over_kT)


def custom_distribution(
    weights=None, amplitudes=None, tail_epsilon=DEFAULT_TAIL_EPSILON
) -> PhotonDistribution:
    """Field state from an explicit finite number-basis table.

    Exactly one of ``weights`` (mixed) or ``amplitudes`` (pure) must be
    given. The table must already be normalized to within 1e-9; it is then
    rescaled to unit total so downstream invariants hold exactly.
    """
    _check_tail(tail_epsilon)
    if (weights is None) == (amplitudes is None):
        raise InvalidInputError("give exactly one of weights or amplitudes")
    if amplitudes is not None:
        a = np.asarray(amplitudes, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise InvalidInputError("amplitudes must be a non-empty 1-D array")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("amplitudes must be finite")
        total = math.fsum(np.abs(a) ** 2)
        if abs(total - 1.0) >= 1e-9:
            raise InvalidInputError(
                f"amplitude norm {total!r} deviates from 1 by 1e-9 or more"
            )
        a = a / math.sqrt(total)
        w = np.abs(a) ** 2
        mean = float(np.arange(a.size) @ w)
        return PhotonDistribution(
            kind="custom",
            weights=w,
            amplitudes=a,
            mean_n=mean,
            tail_epsilon=tail_epsilon,
        )
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidInputError("weights must be a non-empty 1-D array")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise InvalidInputError("weights must be finite and non-negative")
    total = math.fsum(w)
    if abs(total - 1.0) >= 1e-9:
        raise InvalidInputError(f"weight sum {total!r} deviates from 1 by 1e-9 or more")
    w = w / total
    mean = float(np.arange(w.size) @ w)
    return PhotonDistribution(
        kind="custom",
        weights=w,
        amplitudes=None,
        mean_n=mean,
        tail_epsilon=tail_epsilon,
    )
