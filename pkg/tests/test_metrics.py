import dataclasses

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qkdtree import (IdealShannon, LinearEfficiency, SubgroupSums, Table, UndefinedQBERError,
                     binary_entropy, bit_error_probability, epsilon, key_metrics,
                     private_key_rate, sifted_key_effectiveness)

from conftest import make_config, random_configs

sums4 = st.tuples(*[st.floats(0, 0.25)] * 4).map(lambda t: SubgroupSums(*t))


def hp_binary_entropy(x):
    x = mpmath.mpf(x)
    return -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)


def test_effectiveness_of_empty_sums():
    assert sifted_key_effectiveness(SubgroupSums(0, 0, 0, 0)) == 0


@given(sums4)
def test_effectiveness_is_order_free_sum(s):
    flipped = SubgroupSums(s.bit_real, s.err_real, s.bit_dark, s.err_dark)
    assert sifted_key_effectiveness(s) == pytest.approx(sifted_key_effectiveness(flipped), rel=1e-15)
    assert sifted_key_effectiveness(s) == pytest.approx(s.total, rel=1e-15)


def test_qber_without_errors():
    assert bit_error_probability(SubgroupSums(0, 0.1, 0, 0.3)) == 0


def test_qber_undefined_without_key():
    with pytest.raises(UndefinedQBERError):
        bit_error_probability(SubgroupSums(0, 0, 0, 0))


def test_blind_detectors_give_coin_flip_bits():
    metrics = key_metrics(make_config(eta=0.0, dark=1e-3))
    assert metrics.p_err == pytest.approx(0.5, abs=1e-12)


@given(sums4, st.floats(1e-3, 1e3))
def test_qber_scale_invariant(s, c):
    if s.total == 0:
        return
    scaled = SubgroupSums(s.err_dark * c, s.bit_dark * c, s.err_real * c, s.bit_real * c)
    assert bit_error_probability(scaled) == pytest.approx(bit_error_probability(s), rel=1e-12, abs=1e-300)


def test_binary_entropy_exact_points():
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    assert binary_entropy(0.5) == 1.0


@given(st.floats(0, 1))
def test_binary_entropy_symmetric(x):
    assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)


@pytest.mark.parametrize("x", [1e-6, 0.01, 0.11, 0.3, 0.5])
def test_binary_entropy_against_mpmath(x):
    assert binary_entropy(x) == pytest.approx(float(hp_binary_entropy(x)), rel=1e-13)


def test_ideal_shannon_points():
    assert epsilon(IdealShannon(), 0.0) == 1.0
    value = epsilon(IdealShannon(), 0.11)
    assert value <= 2e-4
    assert value == pytest.approx(float(1 - 2 * hp_binary_entropy(0.11)), rel=1e-9)


def test_linear_efficiency_formula():
    p = 0.03
    h = float(hp_binary_entropy(p))
    assert epsilon(LinearEfficiency(1.2), p) == pytest.approx(1 - 2.2 * h, rel=1e-13)


def test_analytic_strategies_give_nothing_past_half():
    assert epsilon(IdealShannon(), 0.6) == 0.0
    assert epsilon(LinearEfficiency(1.1), 0.51) == 0.0


def test_table_interpolation_and_clamping():
    table = Table(((0, 1), (0.1, 0.4)))
    assert epsilon(table, 0.05) == pytest.approx(0.7, rel=1e-15)
    assert epsilon(table, 0.5) == 0.4
    assert epsilon(table, 0.0) == 1.0


@pytest.mark.parametrize("points", [((0.1, 1), (0.1, 0.5)), ((0.2, 1), (0.1, 0.5)), ((0, 1.5),)])
def test_table_validation(points):
    with pytest.raises(ValueError):
        Table(points)


def test_linear_efficiency_rejects_sub_shannon():
    with pytest.raises(ValueError):
        LinearEfficiency(0.9)


def test_private_rate_product():
    cfg = make_config(rate=5e6)
    assert private_key_rate(cfg, 1e-4, 0.5) == pytest.approx(250.0, rel=1e-15)
    assert private_key_rate(cfg, 1e-4, 0.0) == 0.0


@given(st.floats(0, 0.5), st.floats(0, 0.5))
def test_private_rate_nonincreasing_in_qber(a, b):
    lo, hi = sorted((a, b))
    cfg = make_config()
    assert private_key_rate(cfg, 1e-3, epsilon(IdealShannon(), hi)) <= \
        private_key_rate(cfg, 1e-3, epsilon(IdealShannon(), lo))


@settings(max_examples=100, deadline=None)
@given(random_configs())
def test_metric_bounds(cfg):
    try:
        m = key_metrics(cfg)
    except UndefinedQBERError:
        return
    assert 0 <= m.p_err <= 1
    assert m.private_rate <= m.sifted_rate
    assert m.p_sigma == pytest.approx(m.subgroups.total, abs=1e-12)


def test_default_strategy_is_linear_1_2():
    assert make_config().epsilon == LinearEfficiency(1.2)


def test_metrics_record_names():
    record = key_metrics(make_config()).to_dict()
    assert list(record) == ["p_sigma", "p_err_dark", "p_bit_dark", "p_err_real", "p_bit_real",
                            "qber", "epsilon", "sifted_rate_bps", "private_rate_bps"]


def test_clavis_sifted_rate_is_reported(clavis):
    m = key_metrics(clavis)
    assert m.sifted_rate == pytest.approx(5e6 * m.p_sigma)
    assert 0.009 < m.p_err < 0.012
