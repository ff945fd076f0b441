"""Worst-case Chernoff information bounds and the pairs that attain them.

For N-row, L-column sources under constant flip rate f the minimum
Chernoff information over all unequal pairs is pinned between closed-form
bounds whose shape switches at f = 1/4: below the threshold the binding
pairs perturb the frequencies of two words at Hamming distance one, above
it they offset the even- against the odd-parity words.  A per-column
profile generalizes the high-noise branch through the count of columns
noisier than 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .chernoff import bernoulli_ci, chernoff_info
from .exceptions import InvalidInputError, UnsupportedRegimeError
from .mixtures import BinaryMatrix, FlipProfile, mixture_distribution
from .reductions import MatrixPair

REGIME_LOW_NOISE_ODD = "low_noise_odd"
REGIME_LOW_NOISE_EVEN = "low_noise_even"
REGIME_HIGH_NOISE = "high_noise"
REGIME_GENERALIZED = "generalized"


@dataclass(frozen=True)
class Decomposition:
    """Active-column count with the split N = 2**(cal-1) * k + R, k odd."""

    cal: int
    k: int
    r: int
    epsilon: float
    eta: Optional[float] = None


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    regime: str
    tight: bool
    decomposition: Decomposition
    f_folded: bool = False

    def __post_init__(self) -> None:
        if math.isinf(self.lower) and not math.isinf(self.upper):
            raise InvalidInputError("infinite lower bound with finite upper bound")
        if (not math.isinf(self.lower)
                and self.lower > self.upper + 1e-12):
            raise InvalidInputError(
                f"lower bound {self.lower} exceeds upper bound {self.upper}"
            )
        if self.tight and not (math.isinf(self.lower) and math.isinf(self.upper)):
            if abs(self.lower - self.upper) > 1e-12:
                raise InvalidInputError("tight report with unequal bounds")


@dataclass(frozen=True)
class ExtremalPair:
    """A constructed candidate pair with its exactly predicted value.

    ``predicted_ci`` is the pair's actual Chernoff information (closed form
    where one exists, otherwise computed from the reduced mixtures), so the
    construct/measure round trip agrees for every kind.  ``upper_bound``
    restates the closed-form bound the construction certifies.
    """

    pair: MatrixPair
    predicted_ci: float
    construction: str
    upper_bound: float


def _sym_bound(x: float) -> float:
    # -log sqrt(1 - x^2); infinite at |x| = 1.
    x = abs(x)
    if x >= 1.0:
        return math.inf
    return -0.5 * math.log1p(-x * x)


def active_width(n_rows: int, n_cols: int) -> int:
    """min(L, floor(log2 N) + 1): columns the worst-case pair can exploit."""
    return min(n_cols, n_rows.bit_length())


def decompose(n_rows: int, cal: int) -> tuple[int, int]:
    """Split N = 2**(cal-1) * k + R with k the largest odd choice, R >= 0.

    Requires 2**(cal-1) <= N; then R < 2**cal holds automatically.
    """
    if cal < 1 or n_rows < 1:
        raise InvalidInputError(f"need cal >= 1 and N >= 1, got {cal}, {n_rows}")
    block = 1 << (cal - 1)
    if block > n_rows:
        raise InvalidInputError(
            f"decomposition undefined: 2**{cal - 1} = {block} exceeds N = {n_rows}"
        )
    q = n_rows // block
    k = q if q % 2 == 1 else q - 1
    r = n_rows - block * k
    return k, r


def _validate_source_shape(n_rows: int, n_cols: int) -> None:
    if n_rows < 1:
        raise InvalidInputError(f"need at least one row, got {n_rows}")
    if n_cols < 1:
        raise InvalidInputError(f"need at least one column, got {n_cols}")


def worst_case_ci_bounds(n_rows: int, n_cols: int, flip: float) -> BoundReport:
    """Bounds on the minimum Chernoff information over all unequal pairs.

    Flip rates above 1/2 are folded to their complement (channel symmetry)
    and flagged.  Below the 1/4 threshold odd N gives an exact value; above
    it the bounds are exact precisely when the decomposition remainder
    vanishes.
    """
    _validate_source_shape(n_rows, n_cols)
    if not 0.0 <= flip <= 1.0 or flip != flip:
        raise InvalidInputError(f"flip probability {flip!r} outside [0, 1]")
    folded = flip > 0.5
    if folded:
        flip = 1.0 - flip

    cal = active_width(n_rows, n_cols)
    k, r = decompose(n_rows, cal)
    epsilon = (2.0 * (1.0 - 2.0 * flip)) ** cal / (2.0 * n_rows)

    if flip <= 0.25:
        eta = (1.0 - 2.0 * flip) / n_rows
        lower = _sym_bound(eta)
        deco = Decomposition(cal=cal, k=k, r=r, epsilon=epsilon, eta=eta)
        if n_rows % 2 == 1:
            return BoundReport(lower=lower, upper=lower,
                               regime=REGIME_LOW_NOISE_ODD, tight=True,
                               decomposition=deco, f_folded=folded)
        eta_prev = (1.0 - 2.0 * flip) / (n_rows - 1)
        inner = (1.0 / n_rows
                 + (n_rows - 1) / n_rows * math.sqrt(max(0.0, 1.0 - eta_prev ** 2)))
        upper = -math.log(inner) if inner > 0.0 else math.inf
        return BoundReport(lower=lower, upper=upper,
                           regime=REGIME_LOW_NOISE_EVEN, tight=False,
                           decomposition=deco, f_folded=folded)

    lower = _sym_bound(epsilon)
    # With no remainder the two formulas coincide; reuse the lower value so
    # a tight report is exactly self-consistent.
    upper = lower if r == 0 else _high_noise_upper(n_rows, r, epsilon)
    deco = Decomposition(cal=cal, k=k, r=r, epsilon=epsilon, eta=None)
    return BoundReport(lower=lower, upper=upper, regime=REGIME_HIGH_NOISE,
                       tight=(r == 0), decomposition=deco, f_folded=folded)


def _high_noise_upper(n_rows: int, r: int, epsilon: float) -> float:
    body = ((n_rows - r) / n_rows) ** 2 - epsilon ** 2
    inner = math.sqrt(max(0.0, body)) + r / n_rows
    if inner <= 0.0:
        return math.inf
    return -math.log(inner)


def worst_case_ci_bounds_profile(n_rows: int, n_cols: int,
                                 profile: FlipProfile) -> BoundReport:
    """Per-column generalization driven by the columns noisier than 1/4.

    With no such column the formulas are undefined and the call fails
    explicitly rather than guessing a regime.
    """
    _validate_source_shape(n_rows, n_cols)
    if len(profile) != n_cols:
        raise InvalidInputError(
            f"profile length {len(profile)} != column count {n_cols}"
        )
    folded = any(f > 0.5 for f in profile.flips)
    flips = [min(f, 1.0 - f) for f in profile.flips]
    gamma = sum(1 for f in flips if f > 0.25)
    if gamma == 0:
        raise UnsupportedRegimeError(
            "no column has flip rate above 1/4; the generalized bounds are "
            "undefined in this regime"
        )
    cal = min(gamma, n_rows.bit_length())
    k, r = decompose(n_rows, cal)
    largest = sorted(flips, reverse=True)[:cal]
    product = 1.0
    for f in largest:
        product *= 1.0 - 2.0 * f
    epsilon = (1 << (cal - 1)) * product / n_rows

    lower = _sym_bound(epsilon)
    upper = lower if r == 0 else _high_noise_upper(n_rows, r, epsilon)
    deco = Decomposition(cal=cal, k=k, r=r, epsilon=epsilon, eta=None)
    return BoundReport(lower=lower, upper=upper, regime=REGIME_GENERALIZED,
                       tight=(r == 0), decomposition=deco, f_folded=folded)


CONSTRUCTION_HAMMING_ONE = "hamming_one_odd"
CONSTRUCTION_EVEN_ALMOST = "even_almost"
CONSTRUCTION_NEAR_OPTIMAL = "near_optimal_noisy"


def build_hamming_one_pair(n_rows: int, n_cols: int, flip: float) -> ExtremalPair:
    """Low-noise extremal pair for odd N: two words at Hamming distance one
    with multiplicities n and n+1, swapped between the sides."""
    _validate_source_shape(n_rows, n_cols)
    if n_rows % 2 == 0:
        raise InvalidInputError(f"odd row count required, got {n_rows}")
    if not 0.0 <= flip <= 1.0:
        raise InvalidInputError(f"flip probability {flip!r} outside [0, 1]")
    n = (n_rows - 1) // 2
    v1, v2 = 0, 1
    rows_a = (v1,) * n + (v2,) * (n + 1)
    rows_b = (v1,) * (n + 1) + (v2,) * n
    pair = MatrixPair(
        a=BinaryMatrix(rows_a, n_cols),
        b=BinaryMatrix(rows_b, n_cols),
        profile=FlipProfile.constant(flip, n_cols),
    )
    eta = (1.0 - 2.0 * flip) / n_rows
    value = _sym_bound(eta)
    return ExtremalPair(pair=pair, predicted_ci=value,
                        construction=CONSTRUCTION_HAMMING_ONE,
                        upper_bound=value)


def build_even_n_pair(n_rows: int, n_cols: int, flip: float) -> ExtremalPair:
    """Even-N candidate: multiplicities (n-1, n+1) against (n, n).

    Its value reduces exactly to the Bernoulli pair (1/2, 1/2 + eta_N); the
    stored upper bound is the weaker closed form it certifies.
    """
    _validate_source_shape(n_rows, n_cols)
    if n_rows % 2 == 1 or n_rows < 2:
        raise InvalidInputError(f"even row count >= 2 required, got {n_rows}")
    if not 0.0 <= flip <= 1.0:
        raise InvalidInputError(f"flip probability {flip!r} outside [0, 1]")
    n = n_rows // 2
    v1, v2 = 0, 1
    rows_a = (v1,) * (n - 1) + (v2,) * (n + 1)
    rows_b = (v1,) * n + (v2,) * n
    pair = MatrixPair(
        a=BinaryMatrix(rows_a, n_cols),
        b=BinaryMatrix(rows_b, n_cols),
        profile=FlipProfile.constant(flip, n_cols),
    )
    eta = (1.0 - 2.0 * flip) / n_rows
    value = bernoulli_ci(0.5, 0.5 + eta)
    eta_prev = (1.0 - 2.0 * flip) / (n_rows - 1)
    inner = ((n_rows - 1) / n_rows * math.sqrt(max(0.0, 1.0 - eta_prev ** 2))
             + 1.0 / n_rows)
    upper = -math.log(inner) if inner > 0.0 else math.inf
    return ExtremalPair(pair=pair, predicted_ci=value,
                        construction=CONSTRUCTION_EVEN_ALMOST,
                        upper_bound=upper)


def parity_words(width: int, parity: int) -> tuple[int, ...]:
    """All ``width``-bit words whose popcount has the given parity."""
    return tuple(w for w in range(1 << width) if (w.bit_count() & 1) == parity)


def build_parity_split_pair(n_rows: int, n_cols: int, flip: float) -> ExtremalPair:
    """High-noise candidate: offset even- vs odd-parity words by one replica.

    Uses the active width cal = min(L, floor(log2 N) + 1); columns beyond it
    are all zero, so they carry no information.  With remainder R the pair
    is padded with R copies of the zero word on both sides.  When R = 0 the
    value meets the high-noise lower bound exactly.
    """
    _validate_source_shape(n_rows, n_cols)
    if not 0.0 <= flip <= 1.0:
        raise InvalidInputError(f"flip probability {flip!r} outside [0, 1]")
    cal = active_width(n_rows, n_cols)
    k, r = decompose(n_rows, cal)
    n = (k - 1) // 2
    shift = n_cols - cal
    evens = tuple(w << shift for w in parity_words(cal, 0))
    odds = tuple(w << shift for w in parity_words(cal, 1))
    rows_a = evens * (n + 1) + odds * n + (0,) * r
    rows_b = evens * n + odds * (n + 1) + (0,) * r
    pair = MatrixPair(
        a=BinaryMatrix(rows_a, n_cols),
        b=BinaryMatrix(rows_b, n_cols),
        profile=FlipProfile.constant(flip, n_cols),
    )
    epsilon = (2.0 * (1.0 - 2.0 * flip)) ** cal / (2.0 * n_rows)
    upper = _high_noise_upper(n_rows, r, epsilon)
    if r == 0:
        value = _sym_bound(epsilon)
    else:
        value = _reduced_pair_ci(rows_a, rows_b, cal, shift, flip)
    return ExtremalPair(pair=pair, predicted_ci=value,
                        construction=CONSTRUCTION_NEAR_OPTIMAL,
                        upper_bound=upper)


def _reduced_pair_ci(rows_a, rows_b, cal, shift, flip) -> float:
    # The zero columns are identical and constant, so dropping them keeps
    # the value exact while the outcome space shrinks to 2**cal.
    small_a = BinaryMatrix(tuple(r >> shift for r in rows_a), cal)
    small_b = BinaryMatrix(tuple(r >> shift for r in rows_b), cal)
    prof = FlipProfile.constant(flip, cal)
    return chernoff_info(
        mixture_distribution(small_a, prof),
        mixture_distribution(small_b, prof),
    ).value


def phase_sweep(n_rows: int, n_cols: int,
                f_grid: Sequence[float]) -> list[tuple[float, float, float]]:
    """Evaluate both bound families across flip rates.

    Emits (f, low-noise bound, high-noise bound) per grid point; the two
    values coincide exactly at f = 1/4, where both gaps equal 1/(2N).
    """
    _validate_source_shape(n_rows, n_cols)
    cal = active_width(n_rows, n_cols)
    out = []
    for f in f_grid:
        if not 0.0 <= f <= 0.5:
            raise InvalidInputError(f"sweep flip rate {f!r} outside [0, 0.5]")
        eta = (1.0 - 2.0 * f) / n_rows
        epsilon = (2.0 * (1.0 - 2.0 * f)) ** cal / (2.0 * n_rows)
        out.append((f, _sym_bound(eta), _sym_bound(epsilon)))
    return out
