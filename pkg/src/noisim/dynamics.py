"""Exciton chain evolution with interleaved Pauli decoherence.

The chain Hamiltonian on n sites with open boundaries is

    H = omega0/2 * sum_q sigma_z(q) + g * sum_q (sp(q) sm(q+1) + sm(q) sp(q+1)),

with sp = [[0, 0], [1, 0]], so basis label bit 1 marks an excited site and
the occupation of site q is the expectation of (I - Z_q)/2. Site 1 is the
leftmost label character and the most significant Kronecker factor.

A simulation step applies the step unitaries in order, then one round of
the decoherence channel. Channel weights therefore play the role of
per-step probabilities; halving dt while keeping a fixed physical
decoherence rate means halving the non-identity weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import DensityMatrix, PauliChannel, _apply_pauli_channel_raw
from .encoder import EncodingResult, effective_channel, encode_adaptive, encode_fixed
from .pauli import identity, parse

__all__ = [
    "BenchmarkConfig",
    "BenchmarkResult",
    "EXACT_SITE_CAP",
    "chain_hamiltonian",
    "default_benchmark_config",
    "default_noise_channel",
    "default_target_channel",
    "evolve_occupations",
    "run_benchmark",
    "scale_channel_weights",
    "site_occupations",
    "trotter_step_unitaries",
]

EXACT_SITE_CAP = 2

_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_SP = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
_SM = _SP.conj().T


def _embed(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside 1..{n_sites}")
    out = np.eye(2 ** (site - 1), dtype=complex)
    out = np.kron(out, op)
    return np.kron(out, np.eye(2 ** (n_sites - site), dtype=complex))


def _hop(bond: int, n_sites: int) -> np.ndarray:
    a = _embed(_SP, bond, n_sites) @ _embed(_SM, bond + 1, n_sites)
    return a + a.conj().T


def chain_hamiltonian(n_sites: int, omega0: float, g: float) -> np.ndarray:
    if n_sites < 1:
        raise ValueError(f"need at least one site, got {n_sites}")
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for q in range(1, n_sites + 1):
        h += 0.5 * omega0 * _embed(_SZ, q, n_sites)
    for bond in range(1, n_sites):
        h += g * _hop(bond, n_sites)
    return h


def _expm_herm(h: np.ndarray, t: float) -> np.ndarray:
    # exp(-i h t) for Hermitian h via eigendecomposition
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def trotter_step_unitaries(
    n_sites: int,
    omega0: float,
    g: float,
    dt: float,
    *,
    method: str = "trotter",
) -> tuple[np.ndarray, ...]:
    """Unitary factors of one time step, applied left to right.

    "trotter" splits into onsite, odd-bond and even-bond parts; the bond
    parts are sums of commuting two-site terms, so each factor is exact.
    "exact_exponential" returns the single full-step unitary and is a
    small-system reference only, refused above EXACT_SITE_CAP sites.
    """
    if dt <= 0:
        raise ValueError(f"need dt > 0, got {dt}")
    if method == "exact_exponential":
        if n_sites > EXACT_SITE_CAP:
            raise ValueError(
                f"exact_exponential is a reference for up to {EXACT_SITE_CAP} "
                f"sites, got {n_sites}; use method='trotter'"
            )
        return (_expm_herm(chain_hamiltonian(n_sites, omega0, g), dt),)
    if method != "trotter":
        raise ValueError(f"unknown step method {method!r}")
    dim = 2**n_sites
    onsite = np.zeros((dim, dim), dtype=complex)
    for q in range(1, n_sites + 1):
        onsite += 0.5 * omega0 * _embed(_SZ, q, n_sites)
    odd = np.zeros((dim, dim), dtype=complex)
    even = np.zeros((dim, dim), dtype=complex)
    for bond in range(1, n_sites):
        part = odd if bond % 2 else even
        part += g * _hop(bond, n_sites)
    return (
        _expm_herm(onsite, dt),
        _expm_herm(odd, dt),
        _expm_herm(even, dt),
    )


def site_occupations(rho: DensityMatrix | np.ndarray, n_sites: int) -> np.ndarray:
    """Expectation of (I - Z_q)/2 for each site, in site order."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    diag = np.real(np.diagonal(mat))
    if diag.size != 2**n_sites:
        raise ValueError(f"state dim {diag.size} != 2**{n_sites}")
    idx = np.arange(diag.size)
    occ = np.empty(n_sites)
    for q in range(1, n_sites + 1):
        mask = 1 << (n_sites - q)
        occ[q - 1] = diag[(idx & mask) != 0].sum()
    return occ


def evolve_occupations(
    initial: DensityMatrix | str,
    unitaries: Sequence[np.ndarray],
    channel: PauliChannel | None,
    n_steps: int,
) -> np.ndarray:
    """Site occupations over time, shape (n_steps + 1, n_sites).

    Row 0 is the initial state; each later row follows one application of
    all unitaries (in the given order) and one channel round.
    """
    if isinstance(initial, str):
        initial = DensityMatrix.from_basis_label(initial)
    if n_steps < 0:
        raise ValueError(f"need n_steps >= 0, got {n_steps}")
    n_sites = initial.n_qubits
    for u in unitaries:
        if u.shape != (initial.dim, initial.dim):
            raise ValueError(f"unitary shape {u.shape} != state dim {initial.dim}")
    if channel is not None and channel.n_qubits != n_sites:
        raise ValueError(f"channel acts on {channel.n_qubits} qubits, state on {n_sites}")
    rho = np.array(initial.matrix)
    out = np.empty((n_steps + 1, n_sites))
    out[0] = site_occupations(rho, n_sites)
    for step in range(1, n_steps + 1):
        for u in unitaries:
            rho = u @ rho @ u.conj().T
        if channel is not None:
            rho = _apply_pauli_channel_raw(channel, rho)
        out[step] = site_occupations(rho, n_sites)
    return out


def default_target_channel() -> PauliChannel:
    return PauliChannel([(0.95, "II"), (0.03, "XZ"), (0.02, "IY")])


def default_noise_channel() -> PauliChannel:
    return PauliChannel([(0.6, "II"), (0.4, "XX")])


@dataclass(frozen=True)
class BenchmarkConfig:
    target: PauliChannel
    noise: PauliChannel
    n_sites: int = 2
    omega0: float = 1.0
    coupling: float = 0.5
    dt: float = 0.05
    n_steps: int = 200
    initial: str = "10"
    encoder: str = "adaptive"
    node: str | None = None
    tol: float = 1e-6
    max_iters: int = 1000
    step_method: str = "auto"


def default_benchmark_config() -> BenchmarkConfig:
    return BenchmarkConfig(target=default_target_channel(), noise=default_noise_channel())


@dataclass(frozen=True)
class BenchmarkResult:
    config: BenchmarkConfig
    encoding: EncodingResult
    effective: PauliChannel
    times: np.ndarray
    target_occupations: np.ndarray
    encoded_occupations: np.ndarray
    max_gap: float


def run_benchmark(config: BenchmarkConfig) -> BenchmarkResult:
    """Evolve under the target channel and under its encoding, compare.

    Both runs share the same step unitaries, so `max_gap` isolates the
    decoherence mismatch left by the encoder.
    """
    cfg = config
    if len(cfg.initial) != cfg.n_sites:
        raise ValueError(
            f"initial label {cfg.initial!r} has {len(cfg.initial)} sites, expected {cfg.n_sites}"
        )
    if cfg.encoder == "fixed":
        if cfg.node is None:
            raise ValueError("fixed encoding needs a node string")
        encoding = encode_fixed(
            cfg.target, cfg.noise, parse(cfg.node), tol=cfg.tol, max_iters=cfg.max_iters
        )
    elif cfg.encoder == "adaptive":
        encoding = encode_adaptive(cfg.target, cfg.noise, tol=cfg.tol, max_iters=cfg.max_iters)
    else:
        raise ValueError(f"unknown encoder {cfg.encoder!r}")
    effective = effective_channel(encoding)

    method = cfg.step_method
    if method == "auto":
        method = "exact_exponential" if cfg.n_sites <= EXACT_SITE_CAP else "trotter"
    unitaries = trotter_step_unitaries(
        cfg.n_sites, cfg.omega0, cfg.coupling, cfg.dt, method=method
    )
    reference = evolve_occupations(cfg.initial, unitaries, cfg.target, cfg.n_steps)
    encoded = evolve_occupations(cfg.initial, unitaries, effective, cfg.n_steps)
    gap = float(np.abs(reference - encoded).max())
    times = np.arange(cfg.n_steps + 1) * cfg.dt
    return BenchmarkResult(
        config=cfg,
        encoding=encoding,
        effective=effective,
        times=times,
        target_occupations=reference,
        encoded_occupations=encoded,
        max_gap=gap,
    )


def scale_channel_weights(channel: PauliChannel, factor: float) -> PauliChannel:
    """Scale non-identity weights by factor, absorbing the change into identity.

    Used when refining dt at fixed physical decoherence rate: the per-step
    error probabilities shrink proportionally to the step.
    """
    if factor < 0:
        raise ValueError(f"need factor >= 0, got {factor}")
    terms = []
    id_weight = 0.0
    for w, s in channel.terms:
        if s.is_identity():
            id_weight = w
        else:
            terms.append((w * factor, s))
            id_weight += w * (1.0 - factor)
    if id_weight < 0:
        raise ValueError(f"scaling by {factor} drives identity weight to {id_weight}")
    terms.append((id_weight, identity(channel.n_qubits)))
    return PauliChannel(terms)
