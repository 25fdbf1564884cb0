"""Photon survival through the quantum channel and basis sifting."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .system import ProtocolConfig

# (Alice state index, Bob basis index) pairs that survive sifting:
# {0|0}, {pi/2|pi/2}, {0|pi}, {pi/2|3pi/2} in p{B|A} notation
COMPATIBLE_PAIRS = ((0, 0), (1, 1), (2, 0), (3, 1))
# Alice states encoding bit 0; the rest encode bit 1
BIT_ZERO_STATES = (0, 1)


@dataclass(frozen=True)
class TransmissionBranch:
    n: int
    m: int
    prob: float


def binomial_transmission(n: int, m: int, p_qc: float) -> float:
    """Probability that exactly ``m`` of ``n`` photons cross the channel."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    if not 0 <= p_qc <= 1:
        raise ValueError(f"survival probability must lie in [0, 1], got {p_qc!r}")
    # 0.0 ** 0 == 1.0 keeps both endpoints exact
    return math.comb(n, m) * p_qc ** m * (1.0 - p_qc) ** (n - m)


def transmission_branches(n: int, p_qc: float) -> list[TransmissionBranch]:
    return [TransmissionBranch(n, m, binomial_transmission(n, m, p_qc)) for m in range(n + 1)]


def correct_basis_probability(protocol: ProtocolConfig) -> float:
    """Probability that Bob's basis is compatible with Alice's state.

    Alice and Bob choose independently. ``sifting_ratio_override`` replaces
    the alphabet-derived value, e.g. 0.25 for SARG04-style sifting.
    """
    if protocol.sifting_ratio_override is not None:
        return float(protocol.sifting_ratio_override)
    a, b = protocol.alice_state_probs, protocol.bob_basis_probs
    return math.fsum(a[i] * b[j] for i, j in COMPATIBLE_PAIRS)


def signal_detector_probs(protocol: ProtocolConfig) -> tuple[float, float]:
    """Probability that detector 1 or detector 2 is the one matching Alice's bit.

    Conditioned on a compatible basis. Under an override, or when no pair is
    compatible, Alice's marginal bit distribution is used.
    """
    a, b = protocol.alice_state_probs, protocol.bob_basis_probs
    matched = [a[i] * b[j] for i, j in COMPATIBLE_PAIRS]
    total = math.fsum(matched)
    if protocol.sifting_ratio_override is None and total > 0:
        q1 = math.fsum(w for (i, _), w in zip(COMPATIBLE_PAIRS, matched) if i in BIT_ZERO_STATES) / total
    else:
        q1 = math.fsum(a[i] for i in BIT_ZERO_STATES)
    return q1, 1.0 - q1
