"""Iterative encoding of a target Pauli channel onto intrinsic noise.

Both encoders keep a residue ledger: the mass of each target string still
unaccounted for. Scheduling a node string with mass m means conjugating by
the node with probability m; the hardware noise then dresses it, moving
mass m * w(Q) onto (Q * node) for every noise term Q. Each iteration
schedules one node and updates the ledger accordingly, so

    fsum(residues) + encoded_mass == 1

holds throughout (weights of both channels sum to one).

The identity string is exempt from targeting and from the convergence
check: identity mass is realized for free by doing nothing, so its ledger
entry only participates in conservation and in the adaptive mass budget.

The fixed encoder reuses a single node and takes the largest positive
non-identity residue among the node's one-step images as the scheduled
mass. When the noise weights do not match the target ratios this
deliberately overshoots and residues go negative; the adaptive encoder
avoids that by re-deriving the node each iteration from the worst residue
and clamping the mass to the remaining budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .channels import PauliChannel
from .pauli import PauliString, identity, multiply, parse

__all__ = [
    "STOP_ALL_WITHIN_TOL",
    "STOP_MAX_ITERS",
    "STOP_STALLED",
    "EncodingResult",
    "EncodingStep",
    "OverEncodedError",
    "effective_channel",
    "encode_adaptive",
    "encode_fixed",
]

STOP_ALL_WITHIN_TOL = "all_within_tol"
STOP_MAX_ITERS = "max_iters"
STOP_STALLED = "stalled"

ENCODED_MASS_ATOL = 1e-9


class OverEncodedError(ValueError):
    """Scheduled mass exceeds unity; the schedule is not a channel."""

    def __init__(self, encoded_mass: float) -> None:
        self.encoded_mass = encoded_mass
        self.over_mass = encoded_mass - 1.0
        super().__init__(
            f"scheduled mass {encoded_mass!r} exceeds 1 by {self.over_mass:.3e}; "
            "the fixed encoder can overshoot, rerun with a looser tol, fewer "
            "iterations, or the adaptive encoder"
        )


@dataclass(frozen=True, slots=True)
class EncodingStep:
    """One scheduled node, with the residue ledger after applying it."""

    iteration: int
    node: PauliString
    mass: float
    residues: tuple[tuple[PauliString, float], ...]


def _snapshot(ledger: Mapping[PauliString, float]) -> tuple[tuple[PauliString, float], ...]:
    return tuple(sorted(ledger.items(), key=lambda kv: kv[0].text))


class EncodingResult:
    """Outcome of an encoding run.

    `residues` maps every touched string (identity included) to its final
    ledger value; `steps` is the schedule in execution order.
    """

    __slots__ = ("mode", "target", "noise", "steps", "residues", "encoded_mass", "stop_reason")

    def __init__(
        self,
        mode: str,
        target: PauliChannel,
        noise: PauliChannel,
        steps: tuple[EncodingStep, ...],
        residues: dict[PauliString, float],
        encoded_mass: float,
        stop_reason: str,
    ) -> None:
        self.mode = mode
        self.target = target
        self.noise = noise
        self.steps = steps
        self.residues = MappingProxyType(dict(residues))
        self.encoded_mass = encoded_mass
        self.stop_reason = stop_reason

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def converged(self) -> bool:
        return self.stop_reason == STOP_ALL_WITHIN_TOL

    def _nonidentity_residues(self) -> list[float]:
        return [r for s, r in self.residues.items() if not s.is_identity()]

    @property
    def max_residue(self) -> float:
        vals = self._nonidentity_residues()
        return max(vals) if vals else 0.0

    @property
    def min_residue(self) -> float:
        vals = self._nonidentity_residues()
        return min(vals) if vals else 0.0

    def __repr__(self) -> str:
        return (
            f"EncodingResult(mode={self.mode!r}, iterations={self.iterations}, "
            f"encoded_mass={self.encoded_mass:.6g}, stop_reason={self.stop_reason!r})"
        )


def _check_inputs(target: PauliChannel, noise: PauliChannel, tol: float, max_iters: int) -> None:
    if target.n_qubits != noise.n_qubits:
        raise ValueError(
            f"target acts on {target.n_qubits} qubits, noise on {noise.n_qubits}"
        )
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    if max_iters < 0:
        raise ValueError(f"max_iters must be nonnegative, got {max_iters}")


def _ledger_from_target(target: PauliChannel) -> dict[PauliString, float]:
    return {s: w for w, s in target.terms}


def _within_tol(ledger: Mapping[PauliString, float], tol: float) -> bool:
    # identity exempt; negative residues are settled, not pending
    return all(r <= tol for s, r in ledger.items() if not s.is_identity())


def _apply_schedule(
    ledger: dict[PauliString, float],
    noise: PauliChannel,
    node: PauliString,
    mass: float,
) -> None:
    for w, q in noise.terms:
        image = multiply(q, node).string
        ledger[image] = ledger.get(image, 0.0) - mass * w


def encode_fixed(
    target: PauliChannel,
    noise: PauliChannel,
    node: PauliString | str,
    *,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> EncodingResult:
    """Repeatedly schedule one node until residues drop below tol.

    Per iteration the mass is the largest positive residue among the
    non-identity images {Q * node} of the node under the noise support.
    No budget clamp is applied; with mismatched weights the total can pass
    unity, which `effective_channel` rejects.
    """
    node = parse(node) if isinstance(node, str) else node
    _check_inputs(target, noise, tol, max_iters)
    if node.n_qubits != target.n_qubits:
        raise ValueError(f"node acts on {node.n_qubits} qubits, target on {target.n_qubits}")
    if node.is_identity():
        raise ValueError("node must not be the identity string")

    images = []
    for _, q in noise.terms:
        img = multiply(q, node).string
        if not img.is_identity() and img not in images:
            images.append(img)

    ledger = _ledger_from_target(target)
    masses: list[float] = []
    steps: list[EncodingStep] = []
    while True:
        if _within_tol(ledger, tol):
            reason = STOP_ALL_WITHIN_TOL
            break
        if len(steps) >= max_iters:
            reason = STOP_MAX_ITERS
            break
        mass = max((ledger.get(s, 0.0) for s in images), default=0.0)
        if mass <= 0.0:
            reason = STOP_STALLED
            break
        masses.append(mass)
        _apply_schedule(ledger, noise, node, mass)
        steps.append(EncodingStep(len(steps), node, mass, _snapshot(ledger)))

    return EncodingResult(
        mode="fixed",
        target=target,
        noise=noise,
        steps=tuple(steps),
        residues=ledger,
        encoded_mass=math.fsum(masses),
        stop_reason=reason,
    )


def encode_adaptive(
    target: PauliChannel,
    noise: PauliChannel,
    *,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> EncodingResult:
    """Re-derive the node each iteration from the largest residue.

    Picks the pending string s* with the largest residue (ties broken by
    text order), the noise term Q* with the largest weight (same
    tie-break), and schedules node = Q* * s* so that Q* maps the node back
    onto s*. The mass min(residue(s*) / w(Q*), remaining budget) settles
    s* exactly whenever the budget allows and can never push the total
    past unity.
    """
    _check_inputs(target, noise, tol, max_iters)
    id_string = identity(target.n_qubits)
    # Q* is fixed by the noise channel; compute once
    w_star, q_star = min(noise.terms, key=lambda wq: (-wq[0], wq[1].text))

    ledger = _ledger_from_target(target)
    masses: list[float] = []
    steps: list[EncodingStep] = []
    while True:
        if _within_tol(ledger, tol):
            reason = STOP_ALL_WITHIN_TOL
            break
        if len(steps) >= max_iters:
            reason = STOP_MAX_ITERS
            break
        pending = [
            (r, s) for s, r in ledger.items() if not s.is_identity() and r > 0.0
        ]
        if not pending:
            reason = STOP_STALLED
            break
        r_star, s_star = min(pending, key=lambda rs: (-rs[0], rs[1].text))
        budget = 1.0 - math.fsum(masses) - max(ledger.get(id_string, 0.0), 0.0)
        mass = min(r_star / w_star, budget)
        if mass <= 0.0:
            reason = STOP_STALLED
            break
        node = multiply(q_star, s_star).string
        masses.append(mass)
        _apply_schedule(ledger, noise, node, mass)
        steps.append(EncodingStep(len(steps), node, mass, _snapshot(ledger)))

    return EncodingResult(
        mode="adaptive",
        target=target,
        noise=noise,
        steps=tuple(steps),
        residues=ledger,
        encoded_mass=math.fsum(masses),
        stop_reason=reason,
    )


def effective_channel(result: EncodingResult) -> PauliChannel:
    """Channel actually realized by a schedule under the given noise.

    Each scheduled step contributes mass * w(Q) to (Q * node) per noise
    term; unscheduled mass 1 - encoded_mass idles as identity. Per-string
    contributions are fsum-ed in schedule order, so equal schedules give
    bitwise-equal channels.
    """
    if result.encoded_mass > 1.0 + ENCODED_MASS_ATOL:
        raise OverEncodedError(result.encoded_mass)
    contribs: dict[PauliString, list[float]] = {}
    for step in result.steps:
        for w, q in result.noise.terms:
            image = multiply(q, step.node).string
            contribs.setdefault(image, []).append(step.mass * w)
    terms = [(math.fsum(parts), s) for s, parts in contribs.items()]
    remainder = 1.0 - math.fsum(w for w, _ in terms)
    id_string = identity(result.target.n_qubits)
    terms.append((max(remainder, 0.0), id_string))
    return PauliChannel(terms)
