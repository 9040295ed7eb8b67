"""Lipkin-Meshkov-Glick model: pairwise, collective and point-split forms.

The isotropic model

    H = (1/N) sum_{i<j} (X_i X_j + g Y_i Y_j) + lam sum_i Z_i

equals (2/N)(S^2 - (S^z)^2 - N/2) + 2 lam S^z at g = 1. Restricting the
split product S_k . S_k' to nearest neighbours gives

    H_reg = J sum_nn (X X + Y Y + Z Z) - J sum_nn Z Z - 1 + lam sum Z,  J = 1/(2N),

which regroups as H1 + H2 - 1 with an XXX part H1 and an Ising part H2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import operators as ops
from .entanglement_scaling import max_block_size, max_entropy
from .kzm_defects import kz_length, lmg_kink_density

DENSE_MAX_SITES = 10


@dataclass(frozen=True)
class LMGSpec:
    n_sites: int
    field: float = 0.0
    gamma: float = 1.0
    max_sites: int = DENSE_MAX_SITES

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("the LMG model needs N >= 2")
        ops.check_size(self.n_sites, self.max_sites)

    @property
    def coupling(self) -> float:
        return 1.0 / (2 * self.n_sites)

    @property
    def coupling_exact(self) -> Fraction:
        return Fraction(1, 2 * self.n_sites)


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    label: str

    def __post_init__(self):
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12:
            raise ValueError(f"{self.label} is not Hermitian")

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _dense(mat) -> np.ndarray:
    out = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    return np.real(out) if np.max(np.abs(np.imag(out)), initial=0.0) == 0 else out


def _pair_sum(n: int, pairs, axes) -> sp.csr_matrix:
    dim = 2**n
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for i, j in pairs:
        for a in axes:
            out = out + ops.two_site(n, i, j, a, a)
    return out


def build_lmg_pairwise(spec: LMGSpec) -> OperatorMatrix:
    n = spec.n_sites
    dim = 2**n
    H = sp.csr_matrix((dim, dim), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            H = H + ops.pauli_at(n, {i: "x", j: "x"}) + spec.gamma * ops.pauli_at(n, {i: "y", j: "y"})
    H = H / n + spec.field * ops.field_sum(n, "z")
    return OperatorMatrix(_dense(H), "H_pairwise")


def build_lmg_collective(spec: LMGSpec) -> OperatorMatrix:
    if spec.gamma != 1.0:
        raise ValueError("the collective form holds only for gamma = 1")
    n = spec.n_sites
    sx, sy, sz = (ops.collective_spin(n, a) for a in "xyz")
    s2 = sx @ sx + sy @ sy + sz @ sz
    ident = sp.identity(2**n, format="csr")
    H = (2.0 / n) * (s2 - sz @ sz - (n / 2.0) * ident) + 2.0 * spec.field * sz
    return OperatorMatrix(_dense(H), "H_collective")


def _pairs(spec: LMGSpec, pair_set: str):
    return ops.bonds(spec.n_sites, pair_set)


def _require_isotropic(spec: LMGSpec):
    if spec.gamma != 1.0:
        raise ValueError("point-splitting regularization is defined only for gamma = 1")


def build_regularized(spec: LMGSpec, pair_set: str = "ring") -> OperatorMatrix:
    _require_isotropic(spec)
    n, J = spec.n_sites, spec.coupling
    pairs = _pairs(spec, pair_set)
    H = (
        J * _pair_sum(n, pairs, "xyz")
        - J * _pair_sum(n, pairs, "z")
        - sp.identity(2**n, format="csr")
        + spec.field * ops.field_sum(n, "z")
    )
    return OperatorMatrix(_dense(H), "H_reg")


def decompose(spec: LMGSpec, pair_set: str = "ring") -> tuple[OperatorMatrix, OperatorMatrix]:
    """(H1, H2): XXX part with field lam/2 and Ising part with field lam/2.

    The field coefficient lam/(2J) inside the brackets is multiplied back by J.
    """
    _require_isotropic(spec)
    n, J = spec.n_sites, spec.coupling
    pairs = _pairs(spec, pair_set)
    zsum = ops.field_sum(n, "z")
    h_field = spec.field / (2.0 * J)
    H1 = J * (_pair_sum(n, pairs, "xyz") + h_field * zsum)
    H2 = -J * (_pair_sum(n, pairs, "z") - h_field * zsum)
    return OperatorMatrix(_dense(H1), "H1_xxx"), OperatorMatrix(_dense(H2), "H2_ising")


def decomposition_residual(spec: LMGSpec, pair_set: str = "ring") -> float:
    H1, H2 = decompose(spec, pair_set)
    H = build_regularized(spec, pair_set).matrix
    diff = H - (H1.matrix + H2.matrix - np.eye(H.shape[0]))
    return float(np.max(np.abs(diff)))


def pairwise_collective_residual(spec: LMGSpec) -> float:
    return float(np.max(np.abs(build_lmg_pairwise(spec).matrix - build_lmg_collective(spec).matrix)))


def commutator_norm(a: OperatorMatrix, b) -> float:
    bm = b.matrix if isinstance(b, OperatorMatrix) else _dense(b)
    return float(np.max(np.abs(a.matrix @ bm - bm @ a.matrix)))


def critical_field_bound(n_min: int = 2) -> float:
    """|lam| at which |lam|/(2J) = 2 with J = 1/(2 n_min), i.e. 2 / n_min."""
    if n_min < 2:
        raise ValueError("an entangled cluster needs at least two spins")
    return 2.0 / n_min


@dataclass(frozen=True)
class LMGQuenchSummary:
    tau_q: float
    n4: float
    s_max: float
    l_max: int
    coherence_number: float
    coherence_note: str = "coherence number identified with the KZ length sqrt(tau_q)"


def lmg_quench_summary(tau_q: float) -> LMGQuenchSummary:
    if not tau_q > 1:
        raise ValueError("tau_q must exceed 1")
    return LMGQuenchSummary(
        tau_q=float(tau_q),
        n4=lmg_kink_density(tau_q),
        s_max=max_entropy("lmg", tau_q).value,
        l_max=max_block_size("lmg", tau_q),
        coherence_number=kz_length(tau_q),
    )
