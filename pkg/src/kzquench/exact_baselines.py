"""Exact reference computations for small and free-fermion chains.

* exact diagonalization of the chain Hamiltonians with the sign conventions

      ising : H = -sum (Z Z + lam X)
      xy    : H = -sum ((1+g)/2 X X + (1-g)/2 Y Y + lam Z)
      xx    : H = -sum (X X + Y Y) + lam sum Z
      xxx   : H = +sum (X X + Y Y + Z Z) + lam sum Z
      xxz   : H = +sum (X X + Y Y + D Z Z) + lam sum Z

* von Neumann block entropy and Wootters concurrence of reduced states;
* the XX chain as free fermions: block correlation matrices for the infinite
  chain and for finite rings, and the entropy from their eigenvalues.

Entropies are in bits throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.special import entr

from . import operators as ops
from .entanglement_scaling import Base, EntropyValue
from .models import ModelKind, SpinModel

DENSE_MAX_SITES = 10
RESIDUAL_TOL = 1e-10
DEGENERACY_TOL = 1e-8
EIGENVALUE_SLACK = 1e-10


class DegenerateGroundState(ValueError):
    """The requested free-fermion ground state is not unique."""


@dataclass(frozen=True)
class ChainSpec:
    model: SpinModel
    n_sites: int
    boundary: str = "ring"
    max_sites: int = ops.DEFAULT_MAX_SITES

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("a chain needs at least two sites")
        ops.bonds(self.n_sites, self.boundary)  # validates boundary
        ops.check_size(self.n_sites, self.max_sites)


@dataclass(frozen=True)
class GroundState:
    vector: np.ndarray
    energy: float
    degeneracy: int
    n_sites: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True)
class ReducedDensityMatrix:
    matrix: np.ndarray
    sites: tuple[int, ...]

    def __post_init__(self):
        rho = self.matrix
        if abs(np.trace(rho) - 1) > 1e-12:
            raise ValueError("reduced density matrix must have unit trace")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("reduced density matrix must be Hermitian")
        if np.min(np.linalg.eigvalsh(rho)) < -1e-12:
            raise ValueError("reduced density matrix must be positive semidefinite")


@dataclass(frozen=True)
class FermionCorrelationMatrix:
    matrix: np.ndarray
    fermi_momentum: float
    trivial: bool = False


@dataclass(frozen=True)
class ConcurrenceResult:
    sites: tuple[int, int]
    value: float
    degeneracy: int = field(default=1, compare=False)


# --------------------------------------------------------------------------
# Hamiltonians and ground states


def chain_hamiltonian(spec: ChainSpec) -> sp.csr_matrix:
    m, n = spec.model, spec.n_sites
    pairs = ops.bonds(n, spec.boundary)
    dim = 2**n
    H = sp.csr_matrix((dim, dim), dtype=complex)

    def coupling(a, b=None):
        b = b or a
        out = sp.csr_matrix((dim, dim), dtype=complex)
        for i, j in pairs:
            out = out + ops.two_site(n, i, j, a, b)
        return out

    lam = m.field
    if m.kind is ModelKind.TRANSVERSE_ISING:
        H = -(coupling("z") + lam * ops.field_sum(n, "x"))
    elif m.kind is ModelKind.XY:
        g = m.gamma
        H = -(0.5 * (1 + g) * coupling("x") + 0.5 * (1 - g) * coupling("y") + lam * ops.field_sum(n, "z"))
    elif m.kind is ModelKind.XX:
        H = -(coupling("x") + coupling("y")) + lam * ops.field_sum(n, "z")
    elif m.kind in (ModelKind.XXX, ModelKind.XXZ):
        delta = 1.0 if m.kind is ModelKind.XXX else m.delta
        H = coupling("x") + coupling("y") + delta * coupling("z") + lam * ops.field_sum(n, "z")
    elif m.kind is ModelKind.LMG_REGULARIZED:
        from .lmg import LMGSpec, build_regularized

        H = sp.csr_matrix(build_regularized(LMGSpec(n, lam), pair_set=spec.boundary).matrix)
    else:  # pragma: no cover
        raise ValueError(f"unsupported model {m.kind}")
    return ops.as_real_if_possible(H.tocsr())


def _symmetry_candidates(model: SpinModel) -> list[str]:
    if model.kind is ModelKind.TRANSVERSE_ISING:
        return ["x"]
    if model.kind is ModelKind.XY:
        return ["z"]
    return ["x", "z"]


def _lowest_eigenpairs(H, n_sites: int, dense_max_sites: int, k: int = 6):
    dim = H.shape[0]
    if n_sites <= dense_max_sites or dim <= k + 1:
        w, v = np.linalg.eigh(H.toarray())
        return w[:k], v[:, :k]
    v0 = np.random.default_rng(12345).standard_normal(dim)
    w, v = spla.eigsh(H, k=k, which="SA", tol=1e-13, v0=v0, ncv=min(dim, 40))
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    resid = np.linalg.norm(H @ v[:, 0] - w[0] * v[:, 0])
    if resid > RESIDUAL_TOL:
        w_all, v_all = np.linalg.eigh(H.toarray())
        return w_all[:k], v_all[:, :k]
    return w, v


def ground_state(spec: ChainSpec, *, dense_max_sites: int = DENSE_MAX_SITES) -> GroundState:
    """Lowest eigenvector; a degenerate ground space is resolved toward the
    +1 sector of the model's spin-flip symmetry."""
    H = chain_hamiltonian(spec)
    w, v = _lowest_eigenpairs(H, spec.n_sites, dense_max_sites)
    e0 = float(w[0])
    tol = DEGENERACY_TOL * max(1.0, abs(e0))
    degeneracy = int(np.sum(w - e0 <= tol))
    psi = v[:, 0]
    if degeneracy > 1:
        space = v[:, :degeneracy]
        for axis in _symmetry_candidates(spec.model):
            F = ops.flip_operator(spec.n_sites, axis)
            if sp.linalg.norm(F @ H - H @ F) > 1e-10:
                continue
            Fsub = space.conj().T @ (F @ space)
            fw, fv = np.linalg.eigh(0.5 * (Fsub + Fsub.conj().T))
            if fw[-1] > 0.5:
                psi = space @ fv[:, -1]
                break
    psi = psi / np.linalg.norm(psi)
    # fix a global phase so results are reproducible
    idx = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[idx]) / psi[idx])
    if np.max(np.abs(psi.imag)) < 1e-14:
        psi = psi.real
    return GroundState(psi, e0, degeneracy, spec.n_sites)


# --------------------------------------------------------------------------
# reduced states, entropy, concurrence


def _as_vector(state) -> tuple[np.ndarray, int]:
    vec = state.vector if isinstance(state, GroundState) else np.asarray(state)
    n = int(round(math.log2(vec.size)))
    if 2**n != vec.size:
        raise ValueError("state length must be a power of two")
    return vec, n


def _block_matrix(state, block) -> tuple[np.ndarray, tuple[int, ...]]:
    vec, n = _as_vector(state)
    block = tuple(int(s) for s in block)
    if not block or len(set(block)) != len(block):
        raise ValueError("block must be a non-empty list of distinct sites")
    if any(not 0 <= s < n for s in block):
        raise ValueError("block site out of range")
    if len(block) >= n:
        raise ValueError("block must be a proper subset of the chain")
    rest = [s for s in range(n) if s not in block]
    psi = vec.reshape((2,) * n).transpose(list(block) + rest)
    return psi.reshape(2 ** len(block), -1), block


def reduced_density_matrix(state, block) -> ReducedDensityMatrix:
    A, block = _block_matrix(state, block)
    rho = A @ A.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return ReducedDensityMatrix(rho / np.trace(rho).real, block)


def _binary_bits(p: np.ndarray) -> float:
    return float(np.sum(entr(p)) / math.log(2.0))


def block_entropy_ed(state, block) -> EntropyValue:
    """-Tr rho log2 rho via the Schmidt decomposition."""
    A, _ = _block_matrix(state, block)
    s = np.linalg.svd(A, compute_uv=False)
    p = s**2
    p = p / p.sum()
    return EntropyValue(max(_binary_bits(p), 0.0), Base.BITS)


_YY = np.kron(ops.PAULI["y"], ops.PAULI["y"])


def concurrence(rho) -> ConcurrenceResult:
    """Wootters concurrence of a two-qubit density matrix."""
    if isinstance(rho, ReducedDensityMatrix):
        mat, sites = rho.matrix, rho.sites
    else:
        mat, sites = np.asarray(rho, dtype=complex), (0, 1)
    if mat.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    if np.min(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))) < -1e-12:
        raise ValueError("density matrix is not positive semidefinite")
    rho_tilde = _YY @ mat.conj() @ _YY
    mu = np.linalg.eigvals(mat @ rho_tilde).real
    lam = np.sqrt(np.clip(np.sort(mu)[::-1], 0.0, None))
    value = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return ConcurrenceResult(tuple(sites), float(min(value, 1.0)))


def nn_concurrence(spec: ChainSpec, sites: tuple[int, int] = (0, 1)) -> ConcurrenceResult:
    gs = ground_state(spec)
    res = concurrence(reduced_density_matrix(gs, sites))
    return ConcurrenceResult(res.sites, res.value, gs.degeneracy)


# --------------------------------------------------------------------------
# XX chain as free fermions


def xx_fermi_momentum(lam: float) -> float:
    """Modes with 2 lam - 4 cos k < 0 are filled: k_F = arccos(lam / 2)."""
    return math.acos(min(1.0, max(-1.0, lam / 2.0)))


def xx_correlation_matrix(L: int, lam: float = 0.0) -> FermionCorrelationMatrix:
    """<c_m^dag c_n> on a block of ``L`` sites of the infinite XX chain."""
    if L < 1:
        raise ValueError("block size must be >= 1")
    if abs(lam) >= 2:
        # empty (lam >= 2) or full (lam <= -2) band
        mat = np.zeros((L, L)) if lam >= 2 else np.eye(L)
        return FermionCorrelationMatrix(mat, 0.0 if lam >= 2 else math.pi, trivial=True)
    kf = xx_fermi_momentum(lam)
    d = np.arange(L, dtype=float)
    col = np.empty(L)
    col[0] = kf / math.pi
    col[1:] = np.sin(kf * d[1:]) / (math.pi * d[1:])
    return FermionCorrelationMatrix(sla.toeplitz(col), kf)


def entropy_from_correlations(C) -> EntropyValue:
    mat = C.matrix if isinstance(C, FermionCorrelationMatrix) else np.asarray(C)
    nu = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if nu.size and (nu[0] < -EIGENVALUE_SLACK or nu[-1] > 1 + EIGENVALUE_SLACK):
        raise ValueError("correlation-matrix eigenvalues must lie in [0, 1]")
    nu = np.clip(nu, 0.0, 1.0)
    return EntropyValue(max(_binary_bits(nu) + _binary_bits(1.0 - nu), 0.0), Base.BITS)


def xx_block_entropy(L: int, lam: float = 0.0) -> EntropyValue:
    return entropy_from_correlations(xx_correlation_matrix(L, lam))


def _ring_sector(n_sites: int, lam: float, odd: bool):
    """Filled momenta and energy of the best state with fermion-number parity ``odd``.

    Odd particle number sees periodic fermion boundary conditions, even
    particle number antiperiodic ones.
    """
    shift = 0.0 if odd else 0.5
    k = 2 * math.pi * (np.arange(n_sites) + shift) / n_sites
    k = np.where(k > math.pi, k - 2 * math.pi, k)
    eps = 2 * lam - 4 * np.cos(k)
    order = np.argsort(eps, kind="stable")
    eps_sorted = eps[order]
    best = None
    for n_f in range(1 if odd else 0, n_sites + 1, 2):
        energy = float(np.sum(eps_sorted[:n_f])) - lam * n_sites
        if best is None or energy < best[0] - 1e-12:
            best = (energy, n_f, False)
        elif abs(energy - best[0]) <= 1e-12:
            best = (best[0], best[1], True)
    energy, n_f, tie = best
    if 0 < n_f < n_sites and abs(eps_sorted[n_f - 1] - eps_sorted[n_f]) <= 1e-12:
        tie = True
    return energy, k[order[:n_f]], tie


def xx_ring_ground_modes(n_sites: int, lam: float = 0.0) -> tuple[float, np.ndarray]:
    """Energy and filled momenta of the XX ring ground state (raises if degenerate)."""
    e_odd, k_odd, tie_odd = _ring_sector(n_sites, lam, odd=True)
    e_even, k_even, tie_even = _ring_sector(n_sites, lam, odd=False)
    if abs(e_odd - e_even) <= 1e-10:
        raise DegenerateGroundState(f"XX ring N={n_sites}, lam={lam}: parity sectors are degenerate")
    energy, kf, tie = (e_odd, k_odd, tie_odd) if e_odd < e_even else (e_even, k_even, tie_even)
    if tie:
        raise DegenerateGroundState(f"XX ring N={n_sites}, lam={lam}: open shell")
    return energy, kf


def xx_ring_correlation_matrix(n_sites: int, L: int, lam: float = 0.0) -> FermionCorrelationMatrix:
    """(1/N) sum_{filled k} exp(i k (m - n)) on the first ``L`` sites of an N-site ring."""
    if not 1 <= L <= n_sites:
        raise ValueError("block must fit in the ring")
    _, kf = xx_ring_ground_modes(n_sites, lam)
    d = np.arange(L)[:, None] - np.arange(L)[None, :]
    mat = np.exp(1j * d[..., None] * kf[None, None, :]).sum(axis=-1) / n_sites
    mat = ops.as_real_if_possible(np.where(np.abs(mat.imag) < 1e-14, mat.real, mat))
    kmax = float(np.max(np.abs(kf))) if kf.size else 0.0
    return FermionCorrelationMatrix(mat, kmax)


def xx_exact_curve(L_values, lam: float = 0.0) -> list[tuple[int, float]]:
    return [(int(L), xx_block_entropy(int(L), lam).value) for L in L_values]


def fit_log2_slope(L_values, entropies) -> tuple[float, float]:
    """Least-squares (slope, intercept) of S against log2 L."""
    x = np.log2(np.asarray(L_values, dtype=float))
    slope, intercept = np.polyfit(x, np.asarray(entropies, dtype=float), 1)
    return float(slope), float(intercept)
