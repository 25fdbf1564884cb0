"""Sifted-key effectiveness, QBER and private-key rate."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .tree import EventTree, SubgroupSums, build_tree, subgroup_sums


class UndefinedQBERError(ArithmeticError):
    """No sifted bits are produced, so the error rate is 0/0."""


def binary_entropy(x: float) -> float:
    """Shannon entropy of a Bernoulli(x) variable, in bits."""
    if not 0 <= x <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {x!r}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


@dataclass(frozen=True)
class IdealShannon:
    """``1 - 2 h(p)``: Shannon-limit reconciliation plus privacy amplification."""

    kind = "ideal"

    def __call__(self, p_err: float) -> float:
        if p_err > 0.5:
            return 0.0
        return max(0.0, 1.0 - 2.0 * binary_entropy(p_err))


@dataclass(frozen=True)
class LinearEfficiency:
    """Reconciliation leaking ``f_ec`` times the Shannon limit."""

    f_ec: float = 1.2
    kind = "linear"

    def __post_init__(self):
        if not (math.isfinite(self.f_ec) and self.f_ec >= 1):
            raise ValueError(f"f_ec must be >= 1, got {self.f_ec!r}")

    def __call__(self, p_err: float) -> float:
        if p_err > 0.5:
            return 0.0
        h = binary_entropy(p_err)
        return max(0.0, 1.0 - self.f_ec * h - h)


@dataclass(frozen=True)
class Table:
    """Piecewise-linear shortening curve, held flat beyond its endpoints."""

    points: Tuple[Tuple[float, float], ...]
    kind = "table"

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("table needs at least one point")
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("table error rates must be strictly increasing")
        if any(not 0 <= y <= 1 for _, y in pts):
            raise ValueError("table shortening factors must lie in [0, 1]")

    def __call__(self, p_err: float) -> float:
        xs, ys = zip(*self.points)
        return float(np.interp(p_err, xs, ys))


EpsilonStrategy = Union[IdealShannon, LinearEfficiency, Table]


def epsilon(strategy: EpsilonStrategy, p_err: float) -> float:
    return strategy(p_err)


def sifted_key_effectiveness(sums: SubgroupSums) -> float:
    """Probability that one laser pulse yields a sifted-key bit."""
    return math.fsum((sums.err_dark, sums.bit_dark, sums.bit_real, sums.err_real))


def bit_error_probability(sums: SubgroupSums) -> float:
    p_sigma = sifted_key_effectiveness(sums)
    if p_sigma <= 0:
        raise UndefinedQBERError("no sifted key: effectiveness is zero")
    return min(1.0, (sums.err_dark + sums.err_real) / p_sigma)


def private_key_rate(config, p_sigma: float, eps: float) -> float:
    return config.source.pulse_rate * p_sigma * eps


def sifted_key_rate(config, p_sigma: float) -> float:
    return config.source.pulse_rate * p_sigma


@dataclass(frozen=True)
class KeyMetrics:
    p_sigma: float
    subgroups: SubgroupSums
    p_err: float
    epsilon: float
    sifted_rate: float
    private_rate: float

    def to_dict(self) -> dict:
        """Flat record using the field names of the JSON and CSV outputs."""
        return {
            "p_sigma": self.p_sigma,
            "p_err_dark": self.subgroups.err_dark,
            "p_bit_dark": self.subgroups.bit_dark,
            "p_err_real": self.subgroups.err_real,
            "p_bit_real": self.subgroups.bit_real,
            "qber": self.p_err,
            "epsilon": self.epsilon,
            "sifted_rate_bps": self.sifted_rate,
            "private_rate_bps": self.private_rate,
        }


def key_metrics(config, tree: EventTree = None) -> KeyMetrics:
    """Evaluate the tree for ``config`` and derive every headline quantity.

    Raises :class:`UndefinedQBERError` when no sifted key is produced.
    """
    if tree is None:
        tree = build_tree(config)
    sums = subgroup_sums(tree)
    p_sigma = sifted_key_effectiveness(sums)
    p_err = bit_error_probability(sums)
    eps = epsilon(config.epsilon, p_err)
    return KeyMetrics(
        p_sigma=p_sigma,
        subgroups=sums,
        p_err=p_err,
        epsilon=eps,
        sifted_rate=sifted_key_rate(config, p_sigma),
        private_rate=private_key_rate(config, p_sigma, eps),
    )


def strategy_from_dict(data: dict) -> EpsilonStrategy:
    kind = data.get("kind")
    if kind == "ideal":
        return IdealShannon()
    if kind == "linear":
        return LinearEfficiency(float(data.get("f_ec", 1.2)))
    if kind == "table":
        return Table(tuple(tuple(p) for p in data["points"]))
    raise ValueError(f"unknown epsilon strategy {kind!r}")


def strategy_to_dict(strategy: EpsilonStrategy) -> dict:
    if isinstance(strategy, LinearEfficiency):
        return {"kind": "linear", "f_ec": strategy.f_ec}
    if isinstance(strategy, Table):
        return {"kind": "table", "points": [list(p) for p in strategy.points]}
    return {"kind": "ideal"}

