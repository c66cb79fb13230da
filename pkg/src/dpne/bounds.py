"""Packing bounds: how many mutually far-apart points fit inside a ball.

For points in a k-dimensional ball of radius r that must stay pairwise at
distance > r from each other, the count M satisfies

    floor((3/2)^k)  <=  M  <=  floor(3^k * 2^(-0.599 k))

via the optimal sphere-packing density, which is bounded below by 2^(-k) and,
in high dimension (k >= 115), above by 2^(-0.599 k). Everything is computed
in log2 space; exact integer floors are materialized where representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

EXACT_DIM_LIMIT = 40       # floors reported as exact integers up to here
UPPER_VALID_FROM = 115     # dimension where the density upper bound kicks in

_LOG2_3 = math.log2(3.0)
_LOG2_LOWER_BASE = math.log2(1.5)
_UPPER_EXPONENT = _LOG2_3 - 0.599


@dataclass(frozen=True)
class BoundReport:
    """Point-count and packing-density bounds for dimension k."""

    k: int
    lower: float                 # floor((3/2)^k), exact when small enough
    upper: float                 # floor(3^k 2^(-0.599k))
    lower_density: float         # 2^(-k); 0.0 once it underflows float64
    upper_density: float         # 2^(-0.599k)
    lower_log2: float
    upper_log2: float
    lower_exact: int | None      # exact integers for k <= EXACT_DIM_LIMIT
    upper_exact: int | None
    lower_sci: tuple[float, int]  # (mantissa in [1, 10), base-10 exponent)
    upper_sci: tuple[float, int]
    upper_bound_valid: bool      # the upper bound's high-dimension regime


def _sci_from_log2(log2_value: float) -> tuple[float, int]:
    log10_value = log2_value * math.log10(2.0)
    exp10 = math.floor(log10_value)
    return 10.0 ** (log10_value - exp10), exp10


def sphere_bounds(k: int) -> BoundReport:
    """Evaluate both point-count bounds and both density bounds at dimension k."""
    if k < 1:
        raise ValueError(f"dimension must be a positive integer, got {k}")

    if k <= EXACT_DIM_LIMIT:
        lower_exact = 3 ** k // 2 ** k
        with mpmath.workdps(60):
            upper_val = mpmath.power(3, k) * mpmath.power(2, -mpmath.mpf("0.599") * k)
            upper_exact = int(mpmath.floor(upper_val))
            # a float-rounding floor would be wrong only if the true value sat
            # within 1e-40 of an integer; guard rather than assume
            if upper_val - upper_exact < mpmath.mpf("1e-40"):
                raise ArithmeticError(f"upper bound at k={k} too close to an integer to floor safely")
        lower = float(lower_exact)
        upper = float(upper_exact)
        lower_log2 = math.log2(lower_exact)
        upper_log2 = math.log2(upper_exact)
    else:
        lower_exact = upper_exact = None
        lower_log2 = k * _LOG2_LOWER_BASE
        upper_log2 = k * _UPPER_EXPONENT
        lower = 2.0 ** lower_log2 if lower_log2 < 1024 else math.inf
        upper = 2.0 ** upper_log2 if upper_log2 < 1024 else math.inf

    return BoundReport(
        k=k,
        lower=lower,
        upper=upper,
        lower_density=2.0 ** -k,
        upper_density=2.0 ** (-0.599 * k),
        lower_log2=lower_log2,
        upper_log2=upper_log2,
        lower_exact=lower_exact,
        upper_exact=upper_exact,
        lower_sci=_sci_from_log2(lower_log2),
        upper_sci=_sci_from_log2(upper_log2),
        upper_bound_valid=k >= UPPER_VALID_FROM,
    )


def format_report(r: BoundReport) -> str:
    lines = [f"dimension k = {r.k}"]
    if r.lower_exact is not None:
        lines.append(f"lower bound  floor(1.5^k)            = {r.lower_exact}")
        lines.append(f"upper bound  floor(3^k 2^-0.599k)    = {r.upper_exact}")
    else:
        lm, le = r.lower_sci
        um, ue = r.upper_sci
        lines.append(f"lower bound  floor(1.5^k)            ~ {lm:.6f}e{le}")
        lines.append(f"upper bound  floor(3^k 2^-0.599k)    ~ {um:.6f}e{ue}")
    lines.append(f"lower log2 = {r.lower_log2:.6f}   upper log2 = {r.upper_log2:.6f}")
    lines.append(f"packing density bounds: 2^-k = {r.lower_density:.6g}, "
                 f"2^-0.599k = {r.upper_density:.6g}")
    if not r.upper_bound_valid:
        lines.append(f"note: the upper bound is asymptotic (valid regime k >= {UPPER_VALID_FROM})")
    return "\n".join(lines)
