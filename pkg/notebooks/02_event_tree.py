"""
The event tree and its 18 numbered events
=========================================

Builds the tree in the three-branch reproduction mode, lists the leaves that
produce a sifted bit, and sums them into the four subgroups.
"""

import dataclasses

import qkdtree
from qkdtree import build_tree, classified_leaf_count, format_tree_dump, subgroup_sums

config = qkdtree.load_config(qkdtree.fixture_path())
lumped = dataclasses.replace(config, mode="lumped")
tree = build_tree(lumped)

###############################################################################
# Only single clicks on a compatible basis give a bit. There are 18 of them:
# a dark-count pair on every (n, m) path, a real-count pair where photons
# arrived.

print("classified leaves:", classified_leaf_count(tree))
for leaf in tree.classified():
    print(f"n={leaf.n} m={leaf.m} {leaf.subgroup.value:<9} p={leaf.prob:.3e}")

###############################################################################
# Subgroup sums, lumped versus exact photon statistics.

for label, cfg in (("lumped", lumped), ("exact", config)):
    sums = subgroup_sums(build_tree(cfg))
    print(f"{label:<7} err_dark={sums.err_dark:.3e} bit_dark={sums.bit_dark:.3e} "
          f"err_real={sums.err_real:.3e} bit_real={sums.bit_real:.3e}")

###############################################################################
# The same leaves as a tab-separated dump (first lines only).

print("".join(format_tree_dump(tree).splitlines(keepends=True)[:8]))
