"""Physical and protocol parameters of a single QKD link.

All losses enter in dB and are converted to linear transfer ratios
internally. A transfer ratio doubles as the survival probability of a
single photon crossing the element.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

PLANCK = 6.62607015e-34  # J s, exact SI
SPEED_OF_LIGHT = 299792458.0  # m/s, exact SI

MU_COMPOSITIONS = ("one-way", "loop-back")
PHOTON_MODES = ("exact", "lumped")


class ConfigurationError(ValueError):
    """Raised when a parameter set is outside its physical domain."""


def _check(cond: bool, name: str, msg: str) -> None:
    if not cond:
        raise ConfigurationError(f"{name}: {msg}")


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class LaserSource:
    """Attenuated laser at Alice.

    ``pulse_energy`` may be left unset when the mean photon number is
    given directly through ``SystemConfig.mu_override``.
    """

    pulse_rate: float
    pulse_energy: Optional[float] = None
    wavelength: float = 1550e-9

    def __post_init__(self):
        _check(_finite(self.pulse_rate) and self.pulse_rate > 0, "pulse_rate", "must be > 0")
        _check(_finite(self.wavelength) and self.wavelength > 0, "wavelength", "must be > 0")
        if self.pulse_energy is not None:
            _check(_finite(self.pulse_energy) and self.pulse_energy > 0,
                   "pulse_energy", "must be > 0")


@dataclass(frozen=True)
class OpticalPath:
    channel_atten_db_per_km: float = 0.0
    channel_length_km: float = 0.0
    extra_loss_db: float = 0.0
    voa_alice_db: float = 0.0
    voa_bob_db: float = 0.0

    def __post_init__(self):
        for name in ("channel_atten_db_per_km", "channel_length_km", "extra_loss_db",
                     "voa_alice_db", "voa_bob_db"):
            value = getattr(self, name)
            _check(_finite(value) and value >= 0, name, "must be a finite value >= 0")

    @property
    def channel_loss_db(self) -> float:
        return self.channel_atten_db_per_km * self.channel_length_km + self.extra_loss_db


@dataclass(frozen=True)
class Detector:
    """Gated avalanche-photodiode single-photon detector.

    Attributes
    ----------
    efficiency : float
        Quantum efficiency in [0, 1].
    dark_carriers : float
        Mean number of dark carriers in the multiplication region per gate.
    avalanche_prob : float
        Probability that a carrier triggers an avalanche above threshold.
    """

    efficiency: float
    dark_carriers: float = 0.0
    avalanche_prob: float = 1.0

    def __post_init__(self):
        _check(_finite(self.efficiency) and 0 <= self.efficiency <= 1,
               "efficiency", "must lie in [0, 1]")
        _check(_finite(self.dark_carriers) and self.dark_carriers >= 0,
               "dark_carriers", "must be >= 0")
        _check(_finite(self.avalanche_prob) and 0 <= self.avalanche_prob <= 1,
               "avalanche_prob", "must lie in [0, 1]")


@dataclass(frozen=True)
class ProtocolConfig:
    """Basis/state alphabet and optical misalignment.

    ``alice_state_probs`` is indexed by phase ``(0, pi/2, pi, 3pi/2)``,
    ``bob_basis_probs`` by ``(0, pi/2)``. States ``0`` and ``pi/2`` carry bit 0.
    """

    alice_state_probs: Tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    bob_basis_probs: Tuple[float, float] = (0.5, 0.5)
    sifting_ratio_override: Optional[float] = None
    optical_error_prob: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "alice_state_probs", tuple(float(p) for p in self.alice_state_probs))
        object.__setattr__(self, "bob_basis_probs", tuple(float(p) for p in self.bob_basis_probs))
        for name, vec, size in (("alice_state_probs", self.alice_state_probs, 4),
                                ("bob_basis_probs", self.bob_basis_probs, 2)):
            _check(len(vec) == size, name, f"needs {size} entries")
            _check(all(math.isfinite(p) and p >= 0 for p in vec), name, "entries must be >= 0")
            _check(abs(math.fsum(vec) - 1.0) <= 1e-12, name, "must sum to 1")
        if self.sifting_ratio_override is not None:
            _check(_finite(self.sifting_ratio_override) and 0 <= self.sifting_ratio_override <= 1,
                   "sifting_ratio_override", "must lie in [0, 1]")
        _check(_finite(self.optical_error_prob) and 0 <= self.optical_error_prob <= 0.5,
               "optical_error_prob", "must lie in [0, 0.5]")


@dataclass(frozen=True)
class SystemConfig:
    """Complete parameter set of one link plus evaluation options.

    ``mu_composition`` selects which transfer ratios shape the mean photon
    number: ``"one-way"`` uses Alice's VOA only, ``"loop-back"`` (plug-and-play)
    also includes the channel and Bob's VOA crossed by the bright outbound pulse.
    """

    source: LaserSource
    detector1: Detector
    detector2: Detector
    path: OpticalPath = field(default_factory=OpticalPath)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    mu_override: Optional[float] = None
    n_max: Optional[int] = None
    tail_tol: float = 1e-12
    mode: str = "exact"
    mu_composition: str = "one-way"
    epsilon: object = None  # EpsilonStrategy; None means the library default

    def __post_init__(self):
        if self.mu_override is not None:
            _check(_finite(self.mu_override) and self.mu_override > 0, "mu_override", "must be > 0")
        elif self.source.pulse_energy is None:
            raise ConfigurationError("source.pulse_energy: required when mu_override is not set")
        if self.n_max is not None:
            _check(isinstance(self.n_max, int) and not isinstance(self.n_max, bool)
                   and self.n_max >= 0, "n_max", "must be an integer >= 0")
        _check(_finite(self.tail_tol) and 0 < self.tail_tol < 1, "tail_tol", "must lie in (0, 1)")
        _check(self.mode in PHOTON_MODES, "mode", f"must be one of {PHOTON_MODES}")
        _check(self.mu_composition in MU_COMPOSITIONS, "mu_composition",
               f"must be one of {MU_COMPOSITIONS}")
        if self.epsilon is None:
            from .metrics import LinearEfficiency
            object.__setattr__(self, "epsilon", LinearEfficiency())

    @property
    def detectors(self) -> Tuple[Detector, Detector]:
        return self.detector1, self.detector2


def photon_energy(wavelength: float) -> float:
    """Energy of one photon, ``h c / wavelength``, in joules."""
    if not (_finite(wavelength) and wavelength > 0):
        raise ValueError(f"wavelength must be > 0, got {wavelength!r}")
    return PLANCK * SPEED_OF_LIGHT / wavelength


def transfer_ratio(loss_db: float) -> float:
    """Linear transmittance of an element with ``loss_db`` of attenuation."""
    if not (_finite(loss_db) and loss_db >= 0):
        raise ValueError(f"loss must be a finite value >= 0 dB, got {loss_db!r}")
    return 10.0 ** (-loss_db / 10.0)


def channel_survival_probability(config: SystemConfig) -> float:
    return transfer_ratio(config.path.channel_loss_db)


def mean_photon_number(config: SystemConfig) -> float:
    """Mean photons per pulse leaving Alice toward the quantum channel."""
    if config.mu_override is not None:
        return float(config.mu_override)
    path = config.path
    if config.mu_composition == "one-way":
        loss_db = path.voa_alice_db
    else:
        loss_db = path.voa_alice_db + path.channel_loss_db + path.voa_bob_db
    mu = config.source.pulse_energy / photon_energy(config.source.wavelength) * transfer_ratio(loss_db)
    if not (math.isfinite(mu) and mu > 0):
        raise ConfigurationError(f"derived mean photon number is not usable: {mu!r}")
    return mu
