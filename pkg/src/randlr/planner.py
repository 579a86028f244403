"""Expected-error bound, tail energy, and oversampling selection.

For a target rank r and oversampling s >= 2, the expected squared error of
the randomized factorization is bounded by ``(1 + r/(s-1)) * tau`` where
``tau`` is the tail energy, the sum of squared singular values past index
r.  By the Eckart-Young theorem tau is also the smallest squared error any
rank-r approximation can achieve, so the bound misses the optimum by the
factor ``1 + r/(s-1)`` and an error budget at or below tau is infeasible.

Two norm interpretations ("modes") are threaded through all reports:

* ``squared-consistent`` (default): the budget epsilon and the bound are
  squared Frobenius norms; this is the reading under which the bound's
  derivation is dimensionally consistent.
* ``literal``: the formulas are evaluated exactly as in the derivation's
  final line, comparing the bound value against a plain-norm epsilon.

The formulas are identical in both modes; only the units of epsilon and
the empirical quantity compared against it change.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import RANK_TOL, SingularSpectrum

__all__ = [
    "MODE_SQUARED",
    "MODE_LITERAL",
    "MODES",
    "ApproximationPlan",
    "tail_energy",
    "effective_tail_energy",
    "expected_error_bound",
    "choose_oversampling",
    "plan",
]

MODE_SQUARED = "squared-consistent"
MODE_LITERAL = "literal"
MODES = (MODE_SQUARED, MODE_LITERAL)

# epsilon - tau must exceed this fraction of epsilon to count as feasible;
# otherwise rounding noise near the optimal-error floor would produce
# astronomically large oversampling values.
FEASIBILITY_MARGIN = 1e-12

INFEASIBLE_REASON = "below Eckart-Young floor"


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")
    return mode


def tail_energy(spectrum, r: int) -> float:
    """Sum of squared singular values with index > r (0-based: values[r:]).

    Accepts a :class:`SingularSpectrum` or a plain non-increasing array.
    Zero when r reaches past the end of the spectrum.
    """
    if r < 0:
        raise ValueError(f"rank must be non-negative, got {r}")
    vals = spectrum.values if isinstance(spectrum, SingularSpectrum) else np.asarray(spectrum, dtype=np.float64)
    return float(np.sum(vals[r:] ** 2))


def effective_tail_energy(spectrum: SingularSpectrum, r: int) -> float:
    """Tail energy with values at the numerical-rank noise floor snapped to 0.

    Tail singular values below the pseudoinverse rank cutoff carry only
    rounding dust, not real energy; without the snap an exactly-rank-r
    matrix measured through floating point would block every small budget.
    """
    tau = tail_energy(spectrum, r)
    if len(spectrum.values) and spectrum.values[0] > 0.0:
        noise_floor = (RANK_TOL * float(spectrum.values[0])) ** 2 * len(spectrum)
        if tau <= noise_floor:
            return 0.0
    return tau


def expected_error_bound(r: int, s: int, tau: float) -> float:
    """The bound value ``(1 + r/(s-1)) * tau``.

    Decreases strictly in s for tau > 0 and approaches tau as s grows.
    """
    if r < 1:
        raise ValueError(f"rank must be positive, got {r}")
    if s < 2:
        raise ValueError(f"oversampling must be at least 2, got {s}")
    if tau < 0.0:
        raise ValueError(f"tail energy must be non-negative, got {tau}")
    return (1.0 + r / (s - 1.0)) * tau


def _least_oversampling(r: int, tau: float, epsilon: float) -> tuple[int | None, bool]:
    """Smallest s >= 2 with ``(1 + r/(s-1)) * tau`` strictly below epsilon.

    Returns (s, bumped) where bumped records that the ceiling formula
    ``ceil(r*tau/(epsilon-tau) + 1)`` landed on an exact integer, i.e. on
    the boundary where the bound equals epsilon, and one was added to
    restore strictness.  Returns (None, False) when no s works.
    """
    if tau == 0.0:
        # Exact-rank input: any oversampling succeeds, take the minimum legal.
        return (2, False) if epsilon > 0.0 else (None, False)
    if epsilon - tau <= FEASIBILITY_MARGIN * epsilon:
        return None, False
    raw = r * tau / (epsilon - tau) + 1.0
    s = math.ceil(raw)
    bumped = s == raw
    if bumped:
        s += 1
    s = max(s, 2)
    # Floating-point repair: the postconditions (strict feasibility,
    # minimality) must hold exactly as tested, not just in real arithmetic.
    while expected_error_bound(r, s, tau) >= epsilon:
        s += 1
    while s > 2 and expected_error_bound(r, s - 1, tau) < epsilon:
        s -= 1
    return s, bumped


def choose_oversampling(r: int, tau: float, epsilon: float, mode: str = MODE_SQUARED) -> int | None:
    """Least oversampling making the expected-error bound beat epsilon.

    Returns None when the budget is infeasible, i.e. at or below the tail
    energy: no amount of oversampling brings the bound under the
    optimal-error floor.  The mode does not change the arithmetic, only
    what units epsilon is understood in.
    """
    _check_mode(mode)
    if r < 1:
        raise ValueError(f"rank must be positive, got {r}")
    if tau < 0.0:
        raise ValueError(f"tail energy must be non-negative, got {tau}")
    s, _ = _least_oversampling(r, tau, epsilon)
    return s


@dataclass(frozen=True)
class ApproximationPlan:
    """Outcome of planning: the chosen oversampling plus bookkeeping.

    ``oversampling``/``predicted_bound`` are None exactly when the plan is
    infeasible; ``fallback`` flags that rank + oversampling reaches
    min(dims), where the factorization switches to an exact basis.
    """

    target_rank: int
    oversampling: int | None
    tail_energy: float
    error_budget: float
    predicted_bound: float | None
    mode: str
    fallback: bool
    feasible: bool
    strictness_bumped: bool
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "r": self.target_rank,
            "s": self.oversampling,
            "tau": self.tail_energy,
            "epsilon": self.error_budget,
            "bound": self.predicted_bound,
            "mode": self.mode,
            "fallback": self.fallback,
            "feasible": self.feasible,
            "strictness_bumped": self.strictness_bumped,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def plan(spectrum: SingularSpectrum, r: int, epsilon: float, mode: str = MODE_SQUARED) -> ApproximationPlan:
    """Compose tail energy, oversampling selection, and the bound.

    Infeasible budgets produce a plan with ``feasible=False`` and a reason
    instead of raising; degenerate spectra (all zeros, short tails) are
    handled through the tau = 0 special case.
    """
    _check_mode(mode)
    if r < 1 or r > len(spectrum):
        raise ValueError(f"rank {r} out of range for spectrum of length {len(spectrum)}")
    tau = effective_tail_energy(spectrum, r)
    s, bumped = _least_oversampling(r, tau, epsilon)
    if s is None:
        return ApproximationPlan(
            target_rank=r,
            oversampling=None,
            tail_energy=tau,
            error_budget=epsilon,
            predicted_bound=None,
            mode=mode,
            fallback=False,
            feasible=False,
            strictness_bumped=False,
            reason=INFEASIBLE_REASON,
        )
    return ApproximationPlan(
        target_rank=r,
        oversampling=s,
        tail_energy=tau,
        error_budget=epsilon,
        predicted_bound=expected_error_bound(r, s, tau),
        mode=mode,
        fallback=r + s >= min(spectrum.source_dims),
        feasible=True,
        strictness_bumped=bumped,
    )
