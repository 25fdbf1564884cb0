"""Photon-number statistics of an attenuated laser pulse."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gammainc

# hard stop for the adaptive truncation search
_N_LIMIT = 10_000


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Distribution over photons per pulse, truncated at ``n_max``.

    ``probs[n]`` is the probability of exactly ``n`` photons; ``tail_mass`` is
    the probability of more than ``n_max`` photons, kept so that the total
    stays checkable at one.
    """

    probs: np.ndarray
    tail_mass: float
    mu: float

    @property
    def n_max(self) -> int:
        return len(self.probs) - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))


# (mu, tail_tol, n_max) -> distribution; n_max is None for adaptive truncation
PhotonSource = Callable[[float, float, Optional[int]], PhotonNumberDistribution]


def poisson_pn(mu: float, n: int) -> float:
    """Probability of ``n`` photons in a coherent pulse of mean ``mu``.

    Evaluated in log space so that large ``n`` does not overflow.

    >>> round(poisson_pn(0.5, 2), 4)
    0.0758
    """
    if mu < 0 or not math.isfinite(mu):
        raise ValueError(f"mean photon number must be >= 0, got {mu!r}")
    if n < 0:
        raise ValueError(f"photon count must be >= 0, got {n!r}")
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def poisson_tail(mu: float, n_max: int) -> float:
    """Probability of strictly more than ``n_max`` photons."""
    if mu == 0:
        return 0.0
    # P(X > k) is the regularized lower incomplete gamma P(k + 1, mu)
    return float(gammainc(n_max + 1, mu))


def lumped_three_branch(mu: float) -> Tuple[float, float, float]:
    """Vacuum, single-photon and multi-photon probabilities.

    The multi-photon branch collects every pulse with two or more photons.
    """
    p0 = poisson_pn(mu, 0)
    p1 = poisson_pn(mu, 1)
    p2plus = min(1.0, max(0.0, 1.0 - p0 - p1))
    return p0, p1, p2plus


def truncated_distribution(mu: float, tail_tol: float = 1e-12,
                           n_max: Optional[int] = None) -> PhotonNumberDistribution:
    """Exact Poisson probabilities up to the smallest ``n_max`` whose tail is below ``tail_tol``.

    Passing ``n_max`` fixes the truncation point instead; the tail may then
    exceed ``tail_tol``.
    """
    if mu < 0 or not math.isfinite(mu):
        raise ValueError(f"mean photon number must be >= 0, got {mu!r}")
    if not 0 < tail_tol < 1:
        raise ValueError(f"tail tolerance must lie in (0, 1), got {tail_tol!r}")
    if n_max is None:
        n_max = 0
        while poisson_tail(mu, n_max) >= tail_tol:
            n_max += 1
            if n_max > _N_LIMIT:
                raise ValueError(f"mean photon number {mu} needs more than {_N_LIMIT} terms")
    probs = np.array([poisson_pn(mu, n) for n in range(n_max + 1)])
    return PhotonNumberDistribution(probs=probs, tail_mass=poisson_tail(mu, n_max), mu=mu)


def lumped_distribution(mu: float, tail_tol: float = 1e-12,
                        n_max: Optional[int] = None) -> PhotonNumberDistribution:
    """Three-branch form: the ``n = 2`` slot stands for all multi-photon pulses."""
    return PhotonNumberDistribution(probs=np.array(lumped_three_branch(mu)), tail_mass=0.0, mu=mu)
