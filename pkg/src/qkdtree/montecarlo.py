"""Pulse-by-pulse Monte Carlo of the key-generation chain.

Serves as an independent check on the analytic tree: each stage is sampled
directly (Poisson photon number without truncation, binomial channel loss,
explicit state and basis draws, per-photon avalanche trials) and only the
final classification rules are shared with the tree.

Pulses are processed in fixed-size blocks. Block ``i`` draws from a stream
seeded by ``(seed, i)``, so results do not depend on how many workers run.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from .detection import Cause, dark_count_probability
from .system import SystemConfig, channel_survival_probability, mean_photon_number
from .transmission import BIT_ZERO_STATES, COMPATIBLE_PAIRS
from .tree import Bit, subgroup_for

BLOCK_SIZE = 1 << 20

_COUNT_FIELDS = ("err_dark", "bit_dark", "err_real", "bit_real",
                 "no_detection", "double", "wrong_basis")


@dataclass(frozen=True)
class SimulationResult:
    pulses: int
    seed: int
    err_dark: int
    bit_dark: int
    err_real: int
    bit_real: int
    no_detection: int
    double: int
    wrong_basis: int

    @property
    def sifted_bits(self) -> int:
        return self.err_dark + self.bit_dark + self.err_real + self.bit_real

    @property
    def error_bits(self) -> int:
        return self.err_dark + self.err_real

    @property
    def p_sigma_hat(self) -> float:
        return self.sifted_bits / self.pulses

    @property
    def qber_hat(self) -> Optional[float]:
        return self.error_bits / self.sifted_bits if self.sifted_bits else None

    def to_dict(self) -> dict:
        se_p, se_q = estimate_standard_errors(self)
        out = asdict(self)
        out.update(sifted_bits=self.sifted_bits, error_bits=self.error_bits,
                   p_sigma_hat=self.p_sigma_hat, p_sigma_se=se_p,
                   qber_hat=self.qber_hat, qber_se=se_q)
        return out


def estimate_standard_errors(result: SimulationResult) -> Tuple[float, Optional[float]]:
    """Binomial standard errors of the effectiveness and QBER estimates.

    The QBER error is ``None`` when no sifted bits were observed.
    """
    p = result.p_sigma_hat
    se_p = math.sqrt(p * (1 - p) / result.pulses)
    if not result.sifted_bits:
        return se_p, None
    q = result.qber_hat
    return se_p, math.sqrt(q * (1 - q) / result.sifted_bits)


# Subgroup labels indexed by [cause is dark][bit is error]
_LABELS = {
    (dark, err): subgroup_for(Cause.DARK if dark else Cause.REAL, Bit.ERROR if err else Bit.CORRECT)
    for dark in (False, True) for err in (False, True)
}


def _compatibility_table() -> np.ndarray:
    table = np.zeros((4, 2), dtype=bool)
    for a, b in COMPATIBLE_PAIRS:
        table[a, b] = True
    return table


class _Chain:
    """Per-trial parameters of one configuration, frozen for sampling."""

    def __init__(self, config: SystemConfig):
        proto = config.protocol
        self.mu = mean_photon_number(config)
        self.p_qc = channel_survival_probability(config)
        self.alice = np.asarray(proto.alice_state_probs)
        self.bob = np.asarray(proto.bob_basis_probs)
        self.override = proto.sifting_ratio_override
        self.e_det = proto.optical_error_prob
        # per-photon avalanche probability and per-gate dark probability
        self.photon_fire = [-math.expm1(-d.avalanche_prob * d.efficiency) for d in config.detectors]
        self.dark = [dark_count_probability(d) for d in config.detectors]
        self.compatible = _compatibility_table()
        self.bit_one = np.array([i not in BIT_ZERO_STATES for i in range(4)])

    def run_block(self, seed: int, index: int, size: int) -> dict:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
        n = rng.poisson(self.mu, size)
        m = rng.binomial(n, self.p_qc)
        state = rng.choice(4, size=size, p=self.alice)
        if self.override is None:
            basis = rng.choice(2, size=size, p=self.bob)
            sifted = self.compatible[state, basis]
        else:
            sifted = rng.random(size) < self.override
        signal = np.where(self.bit_one[state], 2, 1)

        to_signal = rng.binomial(m, 1.0 - self.e_det)
        photons_1 = np.where(signal == 1, to_signal, m - to_signal)
        photons = (photons_1, m - photons_1)
        real = [rng.binomial(photons[j], self.photon_fire[j]) > 0 for j in (0, 1)]
        dark = [rng.random(size) < self.dark[j] for j in (0, 1)]
        click = [real[j] | dark[j] for j in (0, 1)]

        counts = dict.fromkeys(_COUNT_FIELDS, 0)
        counts["wrong_basis"] = int(np.count_nonzero(~sifted))
        counts["no_detection"] = int(np.count_nonzero(sifted & ~click[0] & ~click[1]))
        counts["double"] = int(np.count_nonzero(sifted & click[0] & click[1]))
        for j, detector in ((0, 1), (1, 2)):
            single = sifted & click[j] & ~click[1 - j]
            err = signal != detector
            for is_dark in (False, True):
                cause_mask = ~real[j] if is_dark else real[j]
                for is_err in (False, True):
                    mask = single & cause_mask & (err if is_err else ~err)
                    counts[_LABELS[is_dark, is_err].value] += int(np.count_nonzero(mask))
        return counts


def simulate(config: SystemConfig, pulses: int, seed: int, workers: int = 1,
             block_size: int = BLOCK_SIZE) -> SimulationResult:
    """Simulate ``pulses`` laser pulses and tally every terminal category."""
    if pulses <= 0:
        raise ValueError(f"pulses must be > 0, got {pulses!r}")
    chain = _Chain(config)
    sizes = [block_size] * (pulses // block_size)
    if pulses % block_size:
        sizes.append(pulses % block_size)
    jobs = list(enumerate(sizes))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda job: chain.run_block(seed, *job), jobs))
    else:
        blocks = [chain.run_block(seed, i, size) for i, size in jobs]

    totals = dict.fromkeys(_COUNT_FIELDS, 0)
    for block in blocks:
        for key, value in block.items():
            totals[key] += value
    return SimulationResult(pulses=pulses, seed=seed, **totals)
