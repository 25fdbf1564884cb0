"""
Cross-checking the tree with Monte Carlo
========================================

The simulator samples every stage pulse by pulse. Its estimates should
bracket the analytic values within a few standard errors.
"""

import dataclasses

import qkdtree
from qkdtree import estimate_standard_errors, key_metrics, simulate

config = qkdtree.load_config(qkdtree.fixture_path())

for length in (0.0, 25.0, 50.0):
    cfg = dataclasses.replace(config, path=dataclasses.replace(config.path, channel_length_km=length))
    analytic = key_metrics(cfg)
    res = simulate(cfg, 2_000_000, seed=1, workers=4)
    se_p, se_q = estimate_standard_errors(res)
    print(f"L={length:>4.0f} km  p_sigma {analytic.p_sigma:.5e} vs {res.p_sigma_hat:.5e} "
          f"({abs(analytic.p_sigma - res.p_sigma_hat) / se_p:.2f} se)  "
          f"qber {analytic.p_err:.5f} vs {res.qber_hat:.5f} "
          f"({abs(analytic.p_err - res.qber_hat) / se_q:.2f} se)")

###############################################################################
# Results depend only on the seed, never on the worker count.

a = simulate(config, 500_000, seed=9, workers=1, block_size=50_000)
b = simulate(config, 500_000, seed=9, workers=8, block_size=50_000)
print("identical across worker counts:", a == b)
