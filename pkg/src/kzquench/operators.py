"""Sparse Pauli-string builders on N qubits.

Site 0 is the most significant bit of the computational-basis index, and
basis state ``0`` is spin up (sigma^z = +1).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DEFAULT_MAX_SITES = 14


def check_size(n_sites: int, max_sites: int = DEFAULT_MAX_SITES):
    if n_sites < 1:
        raise ValueError("need at least one site")
    if n_sites > max_sites:
        raise MemoryError(f"2**{n_sites} exceeds the dimension cap 2**{max_sites}")


@lru_cache(maxsize=512)
def _pauli_cached(n_sites: int, ops: tuple) -> sp.csr_matrix:
    factors = ["i"] * n_sites
    for site, name in ops:
        factors[site] = name
    out = sp.csr_matrix(PAULI[factors[0]])
    for name in factors[1:]:
        out = sp.kron(out, sp.csr_matrix(PAULI[name]), format="csr")
    return out


def pauli_at(n_sites: int, ops: dict[int, str]) -> sp.csr_matrix:
    """Tensor product with ``ops[site]`` on the given sites and identity elsewhere."""
    key = []
    for site, name in sorted(ops.items()):
        if not 0 <= site < n_sites:
            raise IndexError(f"site {site} outside a chain of {n_sites}")
        key.append((site, name.lower()))
    return _pauli_cached(n_sites, tuple(key)).copy()


def two_site(n_sites: int, i: int, j: int, a: str, b: str) -> sp.csr_matrix:
    """sigma^a_i sigma^b_j; for i == j the single-site product is used."""
    if i == j:
        prod = PAULI[a] @ PAULI[b]
        return sp.kron(
            sp.kron(sp.identity(2**i, format="csr"), sp.csr_matrix(prod)),
            sp.identity(2 ** (n_sites - i - 1), format="csr"),
            format="csr",
        )
    return pauli_at(n_sites, {i: a, j: b})


def field_sum(n_sites: int, axis: str) -> sp.csr_matrix:
    dim = 2**n_sites
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for i in range(n_sites):
        out = out + pauli_at(n_sites, {i: axis})
    return out


def collective_spin(n_sites: int, axis: str) -> sp.csr_matrix:
    """S^a = (1/2) sum_i sigma_i^a."""
    return 0.5 * field_sum(n_sites, axis)


def bonds(n_sites: int, boundary: str = "ring") -> list[tuple[int, int]]:
    """Nearest-neighbour pairs (i, i+1); a ring of two sites keeps both (0,1) and (1,0)."""
    if boundary == "ring":
        return [(i, (i + 1) % n_sites) for i in range(n_sites)] if n_sites > 1 else []
    if boundary == "open":
        return [(i, i + 1) for i in range(n_sites - 1)]
    raise ValueError(f"boundary must be 'ring' or 'open', got {boundary!r}")


def flip_operator(n_sites: int, axis: str) -> sp.csr_matrix:
    """prod_i sigma_i^axis."""
    return pauli_at(n_sites, {i: axis for i in range(n_sites)})


def as_real_if_possible(mat):
    if sp.issparse(mat):
        if mat.nnz == 0 or np.max(np.abs(mat.data.imag)) == 0:
            return mat.real.tocsr()
        return mat
    if np.max(np.abs(np.imag(mat))) == 0:
        return np.real(mat)
    return mat
