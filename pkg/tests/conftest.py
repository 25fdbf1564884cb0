import math

import pytest
from hypothesis import strategies as st

import qkdtree
from qkdtree import Detector, LaserSource, OpticalPath, ProtocolConfig, SystemConfig

CLAVIS_DARK = -math.log1p(-1e-5)  # dark carriers giving 1e-5 per gate at p_a = 1


def make_config(mu=0.5, length_km=25.0, eta=0.1, dark=CLAVIS_DARK, p_a=1.0, e_det=0.01,
                eta2=None, dark2=None, rate=5e6, **kw):
    protocol = kw.pop("protocol", ProtocolConfig(optical_error_prob=e_det))
    return SystemConfig(
        source=LaserSource(pulse_rate=rate),
        path=OpticalPath(channel_atten_db_per_km=0.2, channel_length_km=length_km),
        detector1=Detector(eta, dark, p_a),
        detector2=Detector(eta if eta2 is None else eta2, dark if dark2 is None else dark2, p_a),
        protocol=protocol,
        mu_override=mu,
        **kw,
    )


@pytest.fixture
def clavis():
    return qkdtree.load_config(qkdtree.fixture_path())


unit = st.floats(0.0, 1.0)


@st.composite
def probability_vector(draw, size):
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=size, max_size=size))
    total = math.fsum(weights)
    probs = [w / total for w in weights]
    probs[-1] = 1.0 - math.fsum(probs[:-1])
    return tuple(probs)


@st.composite
def random_configs(draw, max_mu=3.0):
    return SystemConfig(
        source=LaserSource(pulse_rate=draw(st.floats(1e3, 1e9))),
        path=OpticalPath(channel_atten_db_per_km=draw(st.floats(0.15, 0.35)),
                         channel_length_km=draw(st.floats(0.0, 150.0)),
                         extra_loss_db=draw(st.floats(0.0, 5.0))),
        detector1=Detector(draw(unit), draw(st.floats(0.0, 1e-2)), draw(unit)),
        detector2=Detector(draw(unit), draw(st.floats(0.0, 1e-2)), draw(unit)),
        protocol=ProtocolConfig(alice_state_probs=draw(probability_vector(4)),
                                bob_basis_probs=draw(probability_vector(2)),
                                optical_error_prob=draw(st.floats(0.0, 0.5))),
        mu_override=draw(st.floats(1e-3, max_mu)),
        mode=draw(st.sampled_from(["exact", "lumped"])),
    )


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed again in the terminal summary."""
    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        request.config._acceptance_lines.append(line)
        return ok
    return record


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
