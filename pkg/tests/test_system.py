import dataclasses

import pytest
from hypothesis import given, strategies as st

from qkdtree import (ConfigurationError, Detector, LaserSource, OpticalPath, SystemConfig,
                     channel_survival_probability, mean_photon_number, photon_energy,
                     transfer_ratio)

from conftest import make_config

# h*c/1550nm with exact SI constants, evaluated at 40 digits
E_1550 = 1.281577972354147548387096774193548e-19


def test_photon_energy_1550():
    assert photon_energy(1550e-9) == pytest.approx(E_1550, rel=1e-14)
    assert photon_energy(1550e-9) == pytest.approx(1.2816e-19, abs=5e-24)


def test_photon_energy_halving_wavelength_doubles_energy():
    assert photon_energy(775e-9) == pytest.approx(2 * photon_energy(1550e-9), rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1e-6, float("nan")])
def test_photon_energy_domain(bad):
    with pytest.raises(ValueError):
        photon_energy(bad)


@pytest.mark.parametrize("db, ratio", [(0, 1.0), (5, 0.31622776601683794), (10, 0.1)])
def test_transfer_ratio_values(db, ratio):
    assert transfer_ratio(db) == pytest.approx(ratio, rel=1e-15)


def test_transfer_ratio_rejects_gain():
    with pytest.raises(ValueError):
        transfer_ratio(-0.1)


@given(st.floats(0, 200), st.floats(0, 200))
def test_transfer_ratio_composes(a, b):
    assert transfer_ratio(a + b) == pytest.approx(transfer_ratio(a) * transfer_ratio(b), rel=1e-12)


@given(st.floats(0, 200), st.floats(0.001, 50))
def test_transfer_ratio_strictly_decreasing(a, step):
    assert transfer_ratio(a + step) < transfer_ratio(a)


def _energy_config(pulse_energy, voa_alice_db=0.0, composition="one-way", length=0.0):
    return SystemConfig(
        source=LaserSource(pulse_rate=1e6, pulse_energy=pulse_energy, wavelength=1550e-9),
        path=OpticalPath(0.2, length, 0.0, voa_alice_db, 3.0),
        detector1=Detector(0.1), detector2=Detector(0.1),
        mu_composition=composition,
    )


def test_mu_override_passthrough():
    assert mean_photon_number(make_config(mu=0.5)) == 0.5


def test_mu_from_energy_ratio():
    cfg = _energy_config(2 * photon_energy(1550e-9))
    assert mean_photon_number(cfg) == pytest.approx(2.0, rel=1e-14)


def test_mu_with_source_attenuation():
    cfg = _energy_config(100 * photon_energy(1550e-9), voa_alice_db=23)
    assert mean_photon_number(cfg) == pytest.approx(0.50118723362727228, rel=1e-13)


def test_mu_loop_back_includes_channel_and_bob_voa():
    one_way = _energy_config(1e-15, voa_alice_db=10, length=25)
    loop = dataclasses.replace(one_way, mu_composition="loop-back")
    # 25 km * 0.2 dB/km + 3 dB at Bob's VOA
    assert mean_photon_number(loop) == pytest.approx(mean_photon_number(one_way) * 10 ** -0.8, rel=1e-13)


@given(st.floats(1e-20, 1e-12), st.floats(1.1, 10))
def test_mu_linear_in_pulse_energy(energy, factor):
    base = mean_photon_number(_energy_config(energy))
    assert mean_photon_number(_energy_config(energy * factor)) == pytest.approx(base * factor, rel=1e-12)


def test_mu_requires_energy_or_override():
    with pytest.raises(ConfigurationError, match="pulse_energy"):
        SystemConfig(LaserSource(1e6), Detector(0.1), Detector(0.1), path=OpticalPath())


@pytest.mark.parametrize("length, expected", [(25, 0.31622776601683794), (0, 1.0), (50, 0.1)])
def test_channel_survival(length, expected):
    assert channel_survival_probability(make_config(length_km=length)) == pytest.approx(expected, rel=1e-14)


@given(st.floats(0, 200))
def test_channel_survival_squares_when_length_doubles(length):
    single = channel_survival_probability(make_config(length_km=length))
    double = channel_survival_probability(make_config(length_km=2 * length))
    assert double == pytest.approx(single ** 2, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("kwargs", [
    dict(efficiency=1.5), dict(efficiency=-0.1), dict(efficiency=0.1, dark_carriers=-1),
    dict(efficiency=0.1, avalanche_prob=2),
])
def test_detector_validation(kwargs):
    with pytest.raises(ConfigurationError):
        Detector(**kwargs)


def test_optical_path_rejects_negative_loss():
    with pytest.raises(ConfigurationError, match="voa_bob_db"):
        OpticalPath(voa_bob_db=-1)
