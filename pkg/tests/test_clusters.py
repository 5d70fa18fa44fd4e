import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisim.clusters import (
    analyze_cluster,
    channels_per_iteration,
    lift_noise_nn,
    orbit,
    product_strings_over_pairs,
)
from noisim.pauli import multiply, parse


def test_two_member_orbit():
    members = orbit("XZ", ["XX"])
    assert {s.text for s in members} == {"XZ", "IY"}


def test_all_to_all_cluster():
    c = analyze_cluster("YI", ["XX", "YY", "ZZ"])
    assert {s.text for s in c.members} == {"YI", "ZX", "XZ", "IY"}
    assert c.branching_dimension == 3
    assert c.cluster_dimension == 4
    assert c.all_to_all
    assert c.leakage_entropy == 0.0


def test_partial_cluster_leaks():
    c = analyze_cluster("YI", ["XX", "ZZ"])
    assert c.branching_dimension == 2
    assert c.cluster_dimension == 4
    assert not c.all_to_all
    assert c.leakage_entropy == pytest.approx(math.log(4 / 3))


def test_identity_images_are_not_branches():
    # the node is in the generator set, so one image is the identity string
    c = analyze_cluster("XZ", ["XZ", "XX"])
    assert c.branching_dimension == 1
    assert parse("II") in c.members


def test_orbit_rejects_size_mismatch():
    with pytest.raises(ValueError):
        orbit("XZ", ["X"])


strings2 = st.text(alphabet="IXYZ", min_size=2, max_size=2)


@given(strings2, st.lists(strings2, min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_orbit_is_closed(node, generators):
    members = orbit(node, generators)
    assert parse(node) in members
    for s in members:
        for g in generators:
            assert multiply(parse(g), s).string in members


def test_lift_disjoint_pairs():
    lifted = lift_noise_nn(["XX", "YY"], 4)
    assert [s.text for s in lifted] == ["XXII", "YYII", "IIXX", "IIYY"]
    with pytest.raises(ValueError):
        lift_noise_nn(["XX"], 5)
    with pytest.raises(ValueError):
        lift_noise_nn(["XXX"], 4)


def test_lift_overlapping_pairs():
    lifted = lift_noise_nn(["XX"], 3, overlapping=True)
    assert [s.text for s in lifted] == ["XXI", "IXX"]


def test_channels_per_iteration_counts_products():
    assert channels_per_iteration(3, 2) == 3
    assert channels_per_iteration(3, 4) == 15
    assert channels_per_iteration(1, 6) == 7
    with pytest.raises(ValueError):
        channels_per_iteration(2, 3)


def test_product_strings_match_count():
    per_pair = [parse("XX"), parse("YY"), parse("ZZ")]
    for n_pairs in (1, 2):
        combos = product_strings_over_pairs(per_pair, n_pairs)
        assert len(combos) == channels_per_iteration(3, 2 * n_pairs)
        assert len(set(combos)) == len(combos)
        assert all(not s.is_identity() for s in combos)
    two = product_strings_over_pairs(["XX"], 2)
    assert {s.text for s in two} == {"XXII", "IIXX", "XXXX"}
