"""Noise-orbit clusters and decoherence-free structure.

A node string together with a set of noise strings generates a cluster: the
closure of the node under left multiplication by noise generators. Phases
are dropped because channels conjugate, so only the string part matters.

`branching_dimension` counts distinct non-identity neighbours reachable in
one product from the node; `cluster_dimension` is the orbit size. A cluster
is all-to-all when one step already reaches the whole orbit, in which case
the subspace leakage entropy ln(cluster / (branching + 1)) vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log
from typing import Iterable, Sequence

from .pauli import PauliString, multiply, parse, tensor

__all__ = [
    "Cluster",
    "analyze_cluster",
    "channels_per_iteration",
    "lift_noise_nn",
    "orbit",
    "product_strings_over_pairs",
]


def _as_string(s: PauliString | str) -> PauliString:
    return parse(s) if isinstance(s, str) else s


def orbit(
    node: PauliString | str, generators: Iterable[PauliString | str]
) -> frozenset[PauliString]:
    """Closure of node under left multiplication by the generators."""
    node = _as_string(node)
    gens = [_as_string(g) for g in generators]
    for g in gens:
        if g.n_qubits != node.n_qubits:
            raise ValueError(f"generator {g.text} acts on {g.n_qubits} qubits, node on {node.n_qubits}")
    seen = {node}
    frontier = [node]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = multiply(g, s).string
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(seen)


@dataclass(frozen=True, slots=True)
class Cluster:
    node: PauliString
    members: frozenset[PauliString]
    branching_dimension: int
    cluster_dimension: int
    all_to_all: bool
    leakage_entropy: float


def analyze_cluster(
    node: PauliString | str, generators: Iterable[PauliString | str]
) -> Cluster:
    """Orbit plus its branching/cluster dimensions and leakage entropy."""
    node = _as_string(node)
    gens = [_as_string(g) for g in generators]
    members = orbit(node, gens)
    # one-step neighbours, identity excluded
    step = {multiply(g, node).string for g in gens}
    step.discard(node)
    step = {s for s in step if not s.is_identity()}
    d_b = len(step)
    d_c = len(members)
    all_to_all = d_c == d_b + 1
    entropy = log(d_c / (d_b + 1))
    return Cluster(
        node=node,
        members=members,
        branching_dimension=d_b,
        cluster_dimension=d_c,
        all_to_all=all_to_all,
        leakage_entropy=entropy,
    )


def lift_noise_nn(
    pair_strings: Sequence[PauliString | str],
    n_sites: int,
    *,
    overlapping: bool = False,
) -> list[PauliString]:
    """Embed two-site noise strings into an n_sites chain.

    Default placement tiles disjoint nearest-neighbour pairs (1-2, 3-4, ...),
    requiring even n_sites. With overlapping=True every adjacent pair
    (1-2, 2-3, ...) receives a copy instead.
    """
    pairs = [_as_string(s) for s in pair_strings]
    for s in pairs:
        if s.n_qubits != 2:
            raise ValueError(f"expected two-site strings, got {s.text}")
    if n_sites < 2:
        raise ValueError(f"need at least two sites, got {n_sites}")
    if not overlapping and n_sites % 2:
        raise ValueError("disjoint pairing needs an even number of sites")
    starts = range(0, n_sites - 1) if overlapping else range(0, n_sites - 1, 2)
    out = []
    for start in starts:
        for s in pairs:
            lifted = PauliString(
                n_sites,
                s.x_mask << start,
                s.z_mask << start,
            )
            out.append(lifted)
    return out


def channels_per_iteration(n_noise_strings: int, n_sites: int) -> int:
    """Distinct non-identity products available per encoding sweep.

    With m noise strings per disjoint pair and n_sites/2 pairs, products
    over independent pairs give (m+1)**(n_sites/2) - 1 non-identity
    combinations.
    """
    if n_noise_strings < 0:
        raise ValueError("negative noise string count")
    if n_sites < 2 or n_sites % 2:
        raise ValueError("need an even number of sites >= 2")
    return (n_noise_strings + 1) ** (n_sites // 2) - 1


def product_strings_over_pairs(
    per_pair: Sequence[PauliString | str], n_pairs: int
) -> list[PauliString]:
    """All tensor combinations of {II, per_pair...} across disjoint pairs.

    The identity combination is dropped, so the result has
    (len(per_pair) + 1)**n_pairs - 1 strings, matching
    `channels_per_iteration`.
    """
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    choices = [parse("II"), *(_as_string(s) for s in per_pair)]
    combos: list[PauliString] = list(choices)
    for _ in range(n_pairs - 1):
        combos = [tensor(c, extra) for c in combos for extra in choices]
    return [s for s in combos if not s.is_identity()]
