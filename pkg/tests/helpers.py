"""Dense-matrix oracles and random generators shared across the tests.

Everything here is built from first principles (explicit 2x2 matrices and
Kronecker products) so the tests cross-check the package against an
independent implementation rather than against itself.
"""

from itertools import product

import numpy as np

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_string(text: str) -> np.ndarray:
    """Kronecker product of the letters, first letter most significant."""
    out = PAULIS[text[0]]
    for letter in text[1:]:
        out = np.kron(out, PAULIS[letter])
    return out


def all_texts(n: int) -> list[str]:
    return ["".join(p) for p in product("IXYZ", repeat=n)]


def apply_channel_dense(terms, rho: np.ndarray) -> np.ndarray:
    """sum_i w_i P_i rho P_i from (weight, text) pairs."""
    out = np.zeros_like(rho, dtype=complex)
    for w, text in terms:
        m = dense_string(text)
        out += w * (m @ rho @ m)
    return out


def random_channel_terms(rng, n: int, *, max_terms: int = 6, identity_weight=None):
    """Random normalized (weight, text) list over distinct strings.

    identity_weight, if given, pins the identity term's weight and splits
    the rest over random non-identity strings.
    """
    pool = all_texts(n)
    if identity_weight is None:
        k = int(rng.integers(1, min(max_terms, len(pool)) + 1))
        texts = list(rng.choice(pool, size=k, replace=False))
        weights = rng.random(k) + 1e-3
        weights = weights / weights.sum()
        return list(zip(weights.tolist(), texts))
    k = int(rng.integers(1, min(max_terms, len(pool) - 1) + 1))
    nonid = [t for t in pool if set(t) != {"I"}]
    texts = list(rng.choice(nonid, size=k, replace=False))
    weights = rng.random(k) + 1e-3
    weights = weights / weights.sum() * (1.0 - identity_weight)
    return [(identity_weight, "I" * n)] + list(zip(weights.tolist(), texts))


def random_density(rng, dim: int, *, pure: bool = False) -> np.ndarray:
    if pure:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v = v / np.linalg.norm(v)
        return np.outer(v, v.conj())
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
