"""Deposition rate and the resolution/deposition utility trade-off.

A detector with a designated null outcome (k = 0, reading value 0) deposits
nothing when that outcome occurs.  Reading the null element pixel by pixel,
the expected number of pixels exposed per shot is

    D = sum_x (1 - p_0(x))

which for an M-photon absorber under an M-photon interference source falls
off as N^-(M-1) with the pixel count.  The utility U = F0 * D^c weighs the
phase information F0 carried by a single recorded event against the rate D
at which events accumulate, with c > 0 expressing how costly slow
deposition is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PhotonFieldModel, Povm, _validated_conditional, no_detection_probabilities

__all__ = ["UtilityReport", "deposition_rate", "utility", "utility_report"]


@dataclass(frozen=True)
class UtilityReport:
    fisher_zero: float
    deposition: float
    cost_exponent: float
    utility: float


def _require_null_outcome(povm: Povm, n_max: int) -> None:
    values, _ = _validated_conditional(povm, n_max)
    if values.size == 0 or values[0] != 0.0:
        raise ValueError(
            "deposition rate needs a designated null outcome (k = 0 with reading value 0); "
            f"this detector's first outcome reads {values[0] if values.size else None!r}"
        )


def deposition_rate(
    field_model: PhotonFieldModel,
    povm: Povm,
    *,
    normalized: bool = False,
    reading: str = "per_pixel",
) -> float:
    """Expected number of pixels registering a detection event per shot.

    ``reading='per_pixel'`` sums 1 - p_0(x) over pixels; ``'global'``
    instead counts N times the probability that any pixel at all fires
    (the literal one-null-element-for-the-whole-substrate reading, kept for
    comparison).  ``normalized=True`` divides by the pixel count so the
    result lands in [0, 1].
    """
    _require_null_outcome(povm, field_model.max_count)
    n = field_model.grid.n_pixels
    if reading == "per_pixel":
        rate = float(np.sum(1.0 - no_detection_probabilities(field_model, povm)))
    elif reading == "global":
        rate = n * (1.0 - _all_quiet_probability(field_model, povm))
    else:
        raise ValueError(f"reading must be 'per_pixel' or 'global' (got {reading!r})")
    return rate / n if normalized else rate


def _all_quiet_probability(field_model: PhotonFieldModel, povm: Povm) -> float:
    """Probability that no pixel registers anything in one shot."""
    if not povm.is_local:
        raise ValueError("global deposition reading is unsupported for bleeding detectors")
    _, matrix = _validated_conditional(povm, field_model.max_count)
    q0 = matrix[0]
    if field_model.kind == "independent_pixels":
        return float(np.prod(field_model.expected_values(q0)))
    # single cluster: pixels away from the bunch hold zero photons
    m = field_model.cluster_size
    loc = field_model.location.probabilities
    w = field_model.weight
    n = field_model.grid.n_pixels
    quiet_vacuum = q0[0] ** n
    quiet_bunched = float(np.sum(loc)) * q0[m] * q0[0] ** (n - 1)
    return (1.0 - w) * quiet_vacuum + w * quiet_bunched


def utility(fisher_zero: float, deposition: float, cost_exponent: float) -> float:
    """U = F0 * D^c; c must be positive (c -> 0 recovers F0 alone)."""
    if not (cost_exponent > 0.0):
        raise ValueError(f"cost_exponent must be positive (got {cost_exponent!r})")
    if not (fisher_zero >= 0.0):
        raise ValueError(f"fisher_zero must be non-negative (got {fisher_zero!r})")
    if not (deposition >= 0.0):
        raise ValueError(f"deposition must be non-negative (got {deposition!r})")
    return float(fisher_zero) * float(deposition) ** float(cost_exponent)


def utility_report(
    fisher_zero: float,
    field_model: PhotonFieldModel,
    povm: Povm,
    cost_exponent: float = 1.0,
    *,
    normalized: bool = True,
) -> UtilityReport:
    """Bundle F0 with the deposition rate (per-shot normalized by default)."""
    deposition = deposition_rate(field_model, povm, normalized=normalized)
    return UtilityReport(
        fisher_zero=float(fisher_zero),
        deposition=deposition,
        cost_exponent=float(cost_exponent),
        utility=utility(fisher_zero, deposition, cost_exponent),
    )
