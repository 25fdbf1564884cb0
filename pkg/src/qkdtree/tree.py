"""Event tree of the key-generation chain.

Every pulse follows one path: photons generated, photons surviving the
channel, basis compatibility, detector response, and finally the sifted bit
being right or wrong. The tree is stored as a flat list of its leaves.
"""
from __future__ import annotations

import hashlib
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .detection import Cause, DetectionOutcome, Kind, outcome_distribution
from .photons import PhotonSource, lumped_distribution, truncated_distribution
from .system import SystemConfig, channel_survival_probability, mean_photon_number
from .transmission import binomial_transmission, correct_basis_probability, signal_detector_probs


class Basis(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"


class Bit(str, Enum):
    CORRECT = "correct"
    ERROR = "error"


class Subgroup(str, Enum):
    ERR_DARK = "err_dark"
    BIT_DARK = "bit_dark"
    ERR_REAL = "err_real"
    BIT_REAL = "bit_real"
    DISCARD = "discard"


def subgroup_for(cause: Optional[Cause], bit: Optional[Bit]) -> Subgroup:
    """Classify a terminal event; anything without a sifted bit is discarded."""
    if bit is None:
        return Subgroup.DISCARD
    if cause is Cause.DARK:
        return Subgroup.ERR_DARK if bit is Bit.ERROR else Subgroup.BIT_DARK
    return Subgroup.ERR_REAL if bit is Bit.ERROR else Subgroup.BIT_REAL


def sifted_bit(clicked: int, signal: int) -> Bit:
    return Bit.CORRECT if clicked == signal else Bit.ERROR


@dataclass(frozen=True)
class LeafEvent:
    n: int
    m: int
    basis: Basis
    outcome: Optional[DetectionOutcome]  # None on incompatible-basis leaves
    bit: Optional[Bit]
    prob: float

    @property
    def subgroup(self) -> Subgroup:
        return subgroup_for(self.outcome.cause if self.outcome else None, self.bit)

    def sort_key(self) -> tuple:
        return (self.n, self.m, self.basis is Basis.INCORRECT,
                self.outcome.sort_key() if self.outcome else (-1,),
                "" if self.bit is None else self.bit.value)


@dataclass(frozen=True)
class SubgroupSums:
    err_dark: float
    bit_dark: float
    err_real: float
    bit_real: float

    @property
    def total(self) -> float:
        return self.err_dark + self.bit_dark + self.err_real + self.bit_real


@dataclass(frozen=True)
class EventTree:
    leaves: tuple
    tail_discard: float
    config_digest: str
    mode: str
    mu: float

    def total_probability(self) -> float:
        return math.fsum([leaf.prob for leaf in self.leaves] + [self.tail_discard])

    def classified(self) -> list:
        return [leaf for leaf in self.leaves if leaf.bit is not None]


def config_digest(config: SystemConfig) -> str:
    from .config import config_to_dict

    blob = json.dumps(config_to_dict(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def build_tree(config: SystemConfig, photon_source: Optional[PhotonSource] = None,
               aggregate_detectors: Optional[bool] = None) -> EventTree:
    """Enumerate every leaf of the tree for ``config``.

    In ``"lumped"`` mode the photon number has three branches (0, 1, 2+, the
    last treated as two photons) and single clicks are aggregated over the
    two detectors, reproducing the 18 numbered events. ``"exact"`` mode
    uses the truncated Poisson distribution and keeps detectors apart.

    ``photon_source`` replaces the Poisson source in exact mode.
    ``aggregate_detectors`` overrides the mode's default detector handling.
    """
    mu = mean_photon_number(config)
    p_qc = channel_survival_probability(config)
    p_cb = correct_basis_probability(config.protocol)
    q = dict(zip((1, 2), signal_detector_probs(config.protocol)))
    e_det = config.protocol.optical_error_prob
    lumped = config.mode == "lumped"
    aggregate = lumped if aggregate_detectors is None else aggregate_detectors

    if lumped:
        dist = lumped_distribution(mu)
    else:
        dist = (photon_source or truncated_distribution)(mu, config.tail_tol, config.n_max)

    clicks = {}
    for m in range(dist.n_max + 1):
        for s in (1, 2):
            clicks[m, s] = outcome_distribution(m, s, e_det, config.detector1, config.detector2)

    leaves = []
    for n, p_n in enumerate(dist.probs):
        for m in range(n + 1):
            w = float(p_n) * binomial_transmission(n, m, p_qc)
            leaves.append(LeafEvent(n, m, Basis.INCORRECT, None, None, w * (1.0 - p_cb)))
            acc = defaultdict(float)
            for s in (1, 2):
                for outcome, p in clicks[m, s].items():
                    if outcome.kind is not Kind.SINGLE:
                        acc[outcome, None] += w * p_cb * q[s] * p
                        continue
                    if m == 0 and outcome.cause is Cause.REAL:
                        continue
                    bit = sifted_bit(outcome.detector, s)
                    if aggregate:
                        outcome = DetectionOutcome.single(None, outcome.cause)
                    acc[outcome, bit] += w * p_cb * q[s] * p
            leaves.extend(LeafEvent(n, m, Basis.CORRECT, o, b, p) for (o, b), p in acc.items())

    leaves.sort(key=LeafEvent.sort_key)
    return EventTree(leaves=tuple(leaves), tail_discard=float(dist.tail_mass),
                     config_digest=config_digest(config), mode=config.mode, mu=mu)


def subgroup_sums(tree: EventTree) -> SubgroupSums:
    sums = defaultdict(float)
    for leaf in tree.leaves:
        sums[leaf.subgroup] += leaf.prob
    return SubgroupSums(sums[Subgroup.ERR_DARK], sums[Subgroup.BIT_DARK],
                        sums[Subgroup.ERR_REAL], sums[Subgroup.BIT_REAL])


def classified_leaf_count(tree: EventTree) -> int:
    """Number of leaves that yield a sifted bit.

    18 for the lumped reproduction mode. With detectors kept apart the count
    is ``4 * (paths with m >= 1) + 4 * (all paths)``: four real-count leaves
    (two detectors, two bit values) on paths where photons arrive, and four
    dark-count leaves on every path. Aggregating detectors halves both terms.
    """
    return len(tree.classified())


def format_tree_dump(tree: EventTree) -> str:
    """One line per leaf, tab separated, preceded by a header line."""
    lines = ["n\tm\tbasis\toutcome\tcause\tbit\tprobability"]
    for leaf in tree.leaves:
        outcome = str(leaf.outcome) if leaf.outcome else "-"
        cause = leaf.outcome.cause.value if leaf.outcome and leaf.outcome.cause else "-"
        bit = leaf.bit.value if leaf.bit else "-"
        lines.append(f"{leaf.n}\t{leaf.m}\t{leaf.basis.value}\t{outcome}\t{cause}\t{bit}\t{leaf.prob:.17g}")
    if tree.tail_discard:
        lines.append(f"#tail_discard\t{tree.tail_discard:.17g}")
    return "\n".join(lines) + "\n"
