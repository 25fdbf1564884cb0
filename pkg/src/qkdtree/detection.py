"""Two-detector click statistics for photons arriving at Bob.

Each detector has two independent avalanche sources: photons (real counts)
and dark carriers (dark counts). A click whose real source fired is
attributed to the real count even if the dark source fired as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np

from .system import Detector
from .transmission import binomial_transmission


class Kind(str, Enum):
    NONE = "none"
    SINGLE = "single"
    DOUBLE = "double"


class Cause(str, Enum):
    REAL = "real"
    DARK = "dark"


@dataclass(frozen=True)
class DetectionOutcome:
    """What Bob's pair of detectors reports for one pulse.

    ``detector`` is 1 or 2 for a single click. Trees built with detectors
    aggregated use ``detector=None`` on single clicks.
    """

    kind: Kind
    detector: Optional[int] = None
    cause: Optional[Cause] = None

    def __post_init__(self):
        if self.kind is Kind.SINGLE:
            if self.cause is None or self.detector not in (1, 2, None):
                raise ValueError("single click needs a cause and detector 1 or 2")
        elif self.detector is not None or self.cause is not None:
            raise ValueError(f"{self.kind.value} outcome carries no detector or cause")

    @classmethod
    def none(cls) -> "DetectionOutcome":
        return cls(Kind.NONE)

    @classmethod
    def double(cls) -> "DetectionOutcome":
        return cls(Kind.DOUBLE)

    @classmethod
    def single(cls, detector: Optional[int], cause: Cause) -> "DetectionOutcome":
        return cls(Kind.SINGLE, detector, cause)

    def sort_key(self) -> tuple:
        order = {Kind.NONE: 0, Kind.SINGLE: 1, Kind.DOUBLE: 2}
        return (order[self.kind], self.detector or 0, self.cause.value if self.cause else "")

    def __str__(self) -> str:
        if self.kind is not Kind.SINGLE:
            return self.kind.value
        where = "any" if self.detector is None else f"d{self.detector}"
        return f"single:{where}"


OutcomeDistribution = Dict[DetectionOutcome, float]


def real_count_probability(i: int, detector: Detector) -> float:
    """Probability that ``i`` photons trigger a real avalanche."""
    if i < 0:
        raise ValueError(f"photon count must be >= 0, got {i!r}")
    return -math.expm1(-detector.avalanche_prob * detector.efficiency * i)


def dark_count_probability(detector: Detector) -> float:
    return -math.expm1(-detector.avalanche_prob * detector.dark_carriers)


def outcome_distribution(m: int, signal_detector: int, e_det: float,
                         d1: Detector, d2: Detector) -> OutcomeDistribution:
    """Click distribution for ``m`` photons aimed at ``signal_detector``.

    Each photon independently reaches the other detector with probability
    ``e_det``. Returns all six outcomes, zero entries included.
    """
    if m < 0:
        raise ValueError(f"photon count must be >= 0, got {m!r}")
    if signal_detector not in (1, 2):
        raise ValueError(f"signal detector must be 1 or 2, got {signal_detector!r}")
    if not 0 <= e_det <= 0.5:
        raise ValueError(f"misrouting probability must lie in [0, 0.5], got {e_det!r}")

    k = np.arange(m + 1)  # photons reaching the signal detector
    split = np.array([binomial_transmission(m, int(x), 1.0 - e_det) for x in k])
    photons = {signal_detector: k, 3 - signal_detector: m - k}

    real, dark_only, silent = {}, {}, {}
    for j, det in ((1, d1), (2, d2)):
        r = -np.expm1(-det.avalanche_prob * det.efficiency * photons[j])
        d = dark_count_probability(det)
        real[j] = r
        dark_only[j] = (1.0 - r) * d
        silent[j] = (1.0 - r) * (1.0 - d)

    def total(weights: np.ndarray) -> float:
        return float(np.dot(split, weights))

    clicked = {j: real[j] + dark_only[j] for j in (1, 2)}
    return {
        DetectionOutcome.none(): total(silent[1] * silent[2]),
        DetectionOutcome.single(1, Cause.REAL): total(real[1] * silent[2]),
        DetectionOutcome.single(1, Cause.DARK): total(dark_only[1] * silent[2]),
        DetectionOutcome.single(2, Cause.REAL): total(real[2] * silent[1]),
        DetectionOutcome.single(2, Cause.DARK): total(dark_only[2] * silent[1]),
        DetectionOutcome.double(): total(clicked[1] * clicked[2]),
    }
