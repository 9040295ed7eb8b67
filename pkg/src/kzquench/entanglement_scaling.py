"""Entanglement-entropy scaling at criticality, with and without a quench.

Two bookkeeping bases are kept apart by :class:`EntropyValue`:

* ``Base.BITS`` -- conformal / Berry-factor laws ``S = prefactor * log2 L``;
* ``Base.RATIO`` -- the quench law ``S = u ln L / ln tau_q`` and the
  maximum entropy ``beta ln tau_q + 1.85``, which carry no logarithm base.

The published maximum-entropy lines (0.12, 0.25, 0.36 per ln tau_q) are used as
the canonical values. :func:`max_entropy` with ``form="symbolic"``
evaluates ``2 (|phi| log2 xi + 1) kappa`` instead, whose slope is twice the
printed one.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .kzm_defects import kz_length
from .models import ModelKind

BLOCK_CORRECTION = 0.926
UNIVERSAL_PREFACTOR = 3.7
UNIVERSAL_PREFACTOR_SYMBOLIC = 4 * BLOCK_CORRECTION
SMAX_INTERCEPT = 1.85
INT64_MAX = 2**63 - 1


class Base(str, enum.Enum):
    BITS = "bits"
    RATIO = "dimensionless_ratio"


@dataclass(frozen=True)
class EntropyValue:
    value: float
    base: Base

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"entropy must be non-negative, got {self.value}")

    def __float__(self):
        return float(self.value)

    def __add__(self, other: "EntropyValue") -> "EntropyValue":
        if not isinstance(other, EntropyValue):
            return NotImplemented
        if other.base is not self.base:
            raise TypeError(f"cannot add entropies in {self.base.value} and {other.base.value}")
        return EntropyValue(self.value + other.value, self.base)


@dataclass(frozen=True)
class ScalingLaw:
    """Per-model scaling coefficients.

    ``berry_factor`` is the nearest-neighbour concurrence |phi| (for LMG the
    combined factor 0.386 + 0.18); ``rg_slope`` is |a| in |phi|_L = a ln L.
    ``central_charge`` is None for LMG, which has no single CFT.
    """

    model: str
    central_charge: float | None
    berry_factor: float
    smax_slope: float
    lmax_coeff: float
    correction: float = BLOCK_CORRECTION
    universal_prefactor: float = UNIVERSAL_PREFACTOR
    smax_intercept: float = SMAX_INTERCEPT

    @property
    def combined_berry_factor(self) -> float | None:
        return self.berry_factor if self.model == "lmg" else None

    @property
    def rg_slope(self) -> float:
        # |phi|_L = a ln L = |phi| log2 L; the printed sign a <= 0 is not reproduced
        return self.berry_factor / math.log(2.0)


ISING_PHI = 0.18
ANTIFERRO_PHI = 0.386

SCALING_LAWS = {
    "ising": ScalingLaw("ising", 0.5, ISING_PHI, 0.12, 0.03),
    "xx": ScalingLaw("xx", 1.0, ANTIFERRO_PHI, 0.25, 0.07),
    "xxx": ScalingLaw("xxx", 1.0, ANTIFERRO_PHI, 0.25, 0.07),
    "lmg": ScalingLaw("lmg", None, ANTIFERRO_PHI + ISING_PHI, 0.36, 0.097),
}


def scaling_law(model) -> ScalingLaw:
    kind = ModelKind.parse(model)
    if kind is ModelKind.XY:
        kind = ModelKind.TRANSVERSE_ISING
    try:
        return SCALING_LAWS[kind.value]
    except KeyError:
        raise ValueError(f"no scaling law for model {kind.value}") from None


def correction_factor() -> float:
    """(1/6) / 0.18, the block-spin correction recomputed from its definition."""
    return (1.0 / 6.0) / ISING_PHI


def conformal_entropy(central_charge: float, L: float) -> EntropyValue:
    if central_charge <= 0:
        raise ValueError("central charge must be positive")
    if L < 1:
        raise ValueError("block size must be >= 1")
    return EntropyValue(central_charge / 3.0 * math.log2(L), Base.BITS)


def rg_phase_entropy(berry_factor: float, L: float) -> EntropyValue:
    if L < 2:
        raise ValueError("block size must be >= 2")
    return EntropyValue(abs(berry_factor) * math.log2(L), Base.BITS)


def _check_tau(tau_q):
    if not tau_q > 1:
        raise ValueError(f"tau_q must exceed 1 (ln tau_q > 0), got {tau_q}")


def quench_entropy(L: float, tau_q: float, model=None, *, prefactor: float = UNIVERSAL_PREFACTOR) -> EntropyValue:
    """u ln L / ln tau_q, identical for every model.

    ``model`` is used only to warn when ``L`` exceeds that model's block cap.
    """
    if L < 2:
        raise ValueError("block size must be >= 2")
    _check_tau(tau_q)
    if model is not None and L > max_block_size(model, tau_q):
        warnings.warn(f"L={L} exceeds the allowed block size for {model} at tau_q={tau_q}")
    return EntropyValue(prefactor * math.log(L) / math.log(tau_q), Base.RATIO)


def quench_entropy_from_berry(berry_factor: float, L: float, tau_q: float) -> float:
    """2 kappa |phi| log2 L / (|phi| log2 xi), the unsimplified form; |phi| cancels."""
    xi = kz_length(tau_q)
    return 2.0 * BLOCK_CORRECTION * (berry_factor * math.log2(L)) / (berry_factor * math.log2(xi))


def max_entropy(model, tau_q: float, form: str = "numeric") -> EntropyValue:
    _check_tau(tau_q)
    law = scaling_law(model)
    if form == "numeric":
        value = law.smax_slope * math.log(tau_q) + law.smax_intercept
    elif form == "symbolic":
        value = 2.0 * (law.berry_factor * math.log2(kz_length(tau_q)) + 1.0) * law.correction
    else:
        raise ValueError("form must be 'numeric' or 'symbolic'")
    return EntropyValue(value, Base.RATIO)


def log_block_bound(model, tau_q: float) -> float:
    """q (ln tau_q)^2 + 0.5 ln tau_q, the upper bound on ln L."""
    _check_tau(tau_q)
    lt = math.log(tau_q)
    return scaling_law(model).lmax_coeff * lt * lt + 0.5 * lt


def max_block_size(model, tau_q: float, *, with_saturation: bool = False):
    """floor(exp(q (ln tau_q)^2 + 0.5 ln tau_q)), saturating at 2**63 - 1."""
    bound = log_block_bound(model, tau_q)
    saturated = bound >= math.log(INT64_MAX)
    value = INT64_MAX if saturated else max(1, math.floor(math.exp(bound)))
    return (value, saturated) if with_saturation else value


def check_constraint(L: float, tau_q: float, model) -> tuple[float, bool]:
    """Return (S / S_max, S / S_max <= 1)."""
    ratio = quench_entropy(L, tau_q).value / max_entropy(model, tau_q).value
    return ratio, ratio <= 1.0


def lmg_combined_entropy(L: float) -> EntropyValue:
    """XXX (c=1) plus Ising (c=1/2) conformal parts: (1/2) log2 L."""
    if L < 2:
        raise ValueError("block size must be >= 2")
    return conformal_entropy(1.0, L) + conformal_entropy(0.5, L)
