"""Probabilistic event-tree model of key generation in QKD links.

Modules
-------
system
    Link parameters, photon energy, dB transfer ratios, mean photon number.
photons
    Poisson photon-number statistics, three-branch and truncated forms.
transmission
    Binomial channel survival and basis sifting.
detection
    Two-detector click distribution with real and dark causes.
tree
    Leaf enumeration and subgroup sums.
metrics
    Sifted-key effectiveness, QBER, shortening strategies, key rates.
montecarlo
    Seeded pulse-by-pulse simulator used to cross-check the tree.
config, cli
    JSON configuration and the command-line tool.
"""

__version__ = "0.1.0"

from .system import (ConfigurationError, Detector, LaserSource, OpticalPath, ProtocolConfig,
                     SystemConfig, channel_survival_probability, mean_photon_number,
                     photon_energy, transfer_ratio)
from .photons import (PhotonNumberDistribution, lumped_three_branch, poisson_pn,
                      truncated_distribution)
from .transmission import binomial_transmission, correct_basis_probability
from .detection import (Cause, DetectionOutcome, Kind, dark_count_probability,
                        outcome_distribution, real_count_probability)
from .tree import (Basis, Bit, EventTree, LeafEvent, Subgroup, SubgroupSums, build_tree,
                   classified_leaf_count, format_tree_dump, subgroup_sums)
from .metrics import (IdealShannon, KeyMetrics, LinearEfficiency, Table, UndefinedQBERError,
                      binary_entropy, bit_error_probability, epsilon, key_metrics,
                      private_key_rate, sifted_key_effectiveness)
from .montecarlo import SimulationResult, estimate_standard_errors, simulate
from .config import ConfigParseError, dump_config, load_config, parse_config


def fixture_path(name: str = "clavis2_like.json"):
    """Path of a configuration shipped with the package."""
    from importlib.resources import files

    return files(__name__) / "data" / name
