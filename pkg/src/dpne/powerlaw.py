"""Power-law fitting for degree sequences, with a K-S goodness measure.

Integer degrees are fitted with the continuous maximum-likelihood
approximation using the standard -0.5 offset: a degree d is treated as a
continuous observation on [d - 0.5, d + 0.5], so the model CDF is anchored at
d_min - 0.5 and compared to the empirical CDF at bin edges. The lower cutoff
d_min is chosen to minimize the K-S distance over all candidate cutoffs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_TAIL = 10  # fits on fewer points are meaningless


class PowerLawFitError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    d_min: int
    ks: float
    n_tail: int
    norm_const: float

    def __post_init__(self):
        if not (self.alpha > 1.0):
            raise PowerLawFitError(f"exponent must exceed 1, got {self.alpha}")
        if self.d_min < 1 or not (0.0 <= self.ks <= 1.0) or not self.norm_const > 0.0:
            raise PowerLawFitError(f"inconsistent fit: {self}")


def ks_distance(samples, alpha: float, d_min: float) -> float:
    """Sup gap between the sample's empirical CDF and the fitted power-law CDF.

    Samples are integer-valued degrees >= d_min; each is compared on its bin
    [d - 0.5, d + 0.5] against the continuous model anchored at d_min - 0.5,
    taking the larger deviation of the two bin edges.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise PowerLawFitError("empty tail")
    if not alpha > 1.0:
        raise PowerLawFitError(f"alpha must exceed 1, got {alpha}")
    if x.min() < d_min:
        raise PowerLawFitError("samples below the cutoff")

    x0 = d_min - 0.5
    vals, counts = np.unique(x, return_counts=True)
    ecdf_hi = np.cumsum(counts) / x.size       # P(D <= v), at the jump
    ecdf_lo = ecdf_hi - counts / x.size        # just below the jump
    model_hi = 1.0 - ((vals + 0.5) / x0) ** (1.0 - alpha)
    model_lo = 1.0 - (np.maximum(vals - 0.5, x0) / x0) ** (1.0 - alpha)
    return float(max(np.abs(ecdf_hi - model_hi).max(),
                     np.abs(ecdf_lo - model_lo).max()))


def fit_power_law(degrees) -> PowerLawFit:
    """Fit exponent and lower cutoff to a positive integer degree sequence.

    Candidate cutoffs are the distinct observed degrees up to the 90th
    percentile that keep at least MIN_TAIL points in the tail. For each, the
    exponent is the continuous MLE 1 + n / sum(log(d / (d_min - 0.5))) and the
    candidate minimizing the K-S distance wins (smaller cutoff on ties).
    """
    d = np.asarray(degrees)
    if d.size and not np.issubdtype(d.dtype, np.integer):
        rounded = np.rint(d)
        if not np.array_equal(rounded, d):
            raise PowerLawFitError("degree sequence must be integer-valued")
        d = rounded
    d = d[d >= 1].astype(np.int64)
    if d.size < MIN_TAIL:
        raise PowerLawFitError(f"need at least {MIN_TAIL} positive samples, got {d.size}")

    distinct = np.unique(d)
    if distinct.size < 2:
        raise PowerLawFitError("degenerate degree sequence: no tail variation")

    p90 = np.quantile(d, 0.90)
    candidates = distinct[distinct <= p90]

    d_sorted = np.sort(d).astype(np.float64)
    log_d = np.log(d_sorted)
    # suffix sums of log-degrees, so each candidate's tail is O(1)
    suffix_log = np.concatenate([np.cumsum(log_d[::-1])[::-1], [0.0]])

    best: PowerLawFit | None = None
    for d_min in candidates:
        start = int(np.searchsorted(d_sorted, d_min, side="left"))
        n_tail = d_sorted.size - start
        if n_tail < MIN_TAIL:
            continue
        denom = suffix_log[start] - n_tail * np.log(d_min - 0.5)
        if denom <= 0.0:
            continue
        alpha = 1.0 + float(n_tail) / float(denom)  # plain float so overflow raises
        ks = ks_distance(d_sorted[start:], alpha, float(d_min))
        if best is None or ks < best.ks:
            try:
                norm_const = (alpha - 1.0) * float(d_min) ** (alpha - 1.0)
            except OverflowError:  # pathological near-constant tails
                norm_const = np.inf
            best = PowerLawFit(
                alpha=float(alpha),
                d_min=int(d_min),
                ks=float(ks),
                n_tail=int(n_tail),
                norm_const=float(norm_const),
            )
    if best is None:
        raise PowerLawFitError("no candidate cutoff keeps a usable tail; fit meaningless")
    return best


def format_fit(fit: PowerLawFit) -> str:
    return (f"alpha {fit.alpha:.6g}\nd_min {fit.d_min}\nks {fit.ks:.6g}\n"
            f"n_tail {fit.n_tail}\nnorm_const {fit.norm_const:.6g}")
