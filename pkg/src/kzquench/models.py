"""Spin-chain model catalog: parameters, critical points, dispersions and quench ramps.

All momenta live in [-pi, pi] with unit lattice constant and all times are
dimensionless lattice units.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np


class ModelKind(str, enum.Enum):
    TRANSVERSE_ISING = "ising"
    XY = "xy"
    XX = "xx"
    XXX = "xxx"
    XXZ = "xxz"
    LMG_REGULARIZED = "lmg"

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        key = str(value).strip().lower()
        aliases = {"transverseising": "ising", "tfim": "ising", "lmgregularized": "lmg"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class SpinModel:
    """A 1D spin model and its parameters.

    Parameters
    ----------
    kind : ModelKind
    gamma : float
        XY anisotropy in [0, 1]; ``gamma == 1`` is the transverse Ising point.
    delta : float
        XXZ anisotropy in [-1, 1].
    field : float
        Magnetic field lambda.
    sites : int or None
        Number of sites, needed only for finite constructions.
    """

    kind: ModelKind
    gamma: float = 1.0
    delta: float = 1.0
    field: float = 0.0
    sites: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.kind is ModelKind.XXZ and not -1.0 <= self.delta <= 1.0:
            raise ValueError(f"XXZ delta must lie in [-1, 1], got {self.delta}")
        if self.sites is not None and self.sites < 1:
            raise ValueError("sites must be a positive integer")
        if self.kind is ModelKind.LMG_REGULARIZED:
            if self.sites is None or self.sites < 2:
                raise ValueError("the regularized LMG model needs sites >= 2")

    @property
    def coupling(self) -> float:
        """LMG coupling J = 1/(2N)."""
        if self.kind is not ModelKind.LMG_REGULARIZED:
            raise AttributeError("coupling J is defined only for the regularized LMG model")
        return 1.0 / (2 * self.sites)

    @property
    def is_ising(self) -> bool:
        return self.kind is ModelKind.TRANSVERSE_ISING or (
            self.kind is ModelKind.XY and self.gamma == 1.0
        )

    def with_field(self, field: float) -> "SpinModel":
        return SpinModel(self.kind, self.gamma, self.delta, field, self.sites)

    def to_items(self) -> dict[str, str]:
        """Flat key-value form used by the CLI config files."""
        items = {"kind": self.kind.value, "field": repr(self.field)}
        if self.kind is ModelKind.XY:
            items["gamma"] = repr(self.gamma)
        if self.kind is ModelKind.XXZ:
            items["delta"] = repr(self.delta)
        if self.sites is not None:
            items["sites"] = str(self.sites)
        return items

    @classmethod
    def from_items(cls, items: dict[str, str]) -> "SpinModel":
        sites = items.get("sites")
        return cls(
            kind=ModelKind.parse(items["kind"]),
            gamma=float(items.get("gamma", 1.0)),
            delta=float(items.get("delta", 1.0)),
            field=float(items.get("field", 0.0)),
            sites=int(sites) if sites is not None else None,
        )


# (ramp multiplier r, critical field)
_SCHEDULES = {
    ModelKind.TRANSVERSE_ISING: (1.0, 1.0),
    ModelKind.XX: (2.0, 2.0),
    ModelKind.XXX: (2.0, 2.0),
    ModelKind.LMG_REGULARIZED: (1.0, 1.0),
}


@dataclass(frozen=True)
class QuenchSchedule:
    """Linear ramp lambda(t) = -rate * t / tau_q for t <= 0."""

    tau_q: float
    rate: float
    critical_field: float

    def field(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr > 0):
            raise ValueError("the quench ramp is defined for t <= 0 only")
        out = -self.rate * t_arr / self.tau_q
        return float(out) if out.ndim == 0 else out


def quench_schedule(model: SpinModel, tau_q: float) -> QuenchSchedule:
    if not tau_q > 0:
        raise ValueError(f"tau_q must be positive, got {tau_q}")
    kind = ModelKind.TRANSVERSE_ISING if model.is_ising else model.kind
    try:
        rate, crit = _SCHEDULES[kind]
    except KeyError:
        raise ValueError(f"no quench schedule for model {model.kind.value}") from None
    return QuenchSchedule(float(tau_q), rate, crit)


@dataclass(frozen=True)
class Dispersion:
    """Critical-point quasiparticle dispersion.

    ``curvature`` is alpha in eps_k ~ alpha k**2, ``amplitude`` the prefactor A
    multiplying the excitation probability.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    curvature: float
    amplitude: float

    def __call__(self, k):
        return self.evaluator(k)


def _cosine_band(scale: float) -> Callable:
    def eps(k):
        k = np.asarray(k, dtype=float)
        # 2 scale sin^2(k/2) is the cancellation-free form of scale (1 - cos k)
        out = 2.0 * scale * np.sin(0.5 * k) ** 2
        return float(out) if out.ndim == 0 else out

    return eps


def dispersion(model: SpinModel) -> Dispersion:
    if model.is_ising:
        return Dispersion(_cosine_band(2.0), curvature=1.0, amplitude=1.0)
    if model.kind is ModelKind.XX:
        return Dispersion(_cosine_band(2.0), curvature=1.0, amplitude=0.5)
    if model.kind is ModelKind.XXX:
        return Dispersion(_cosine_band(4.0), curvature=2.0, amplitude=0.5)
    raise ValueError(
        f"no critical dispersion for {model.kind.value}"
        + (f" with gamma={model.gamma}" if model.kind is ModelKind.XY else "")
    )


def berry_phase_factor(theta):
    """Berry phase fraction (1 - cos theta)/2 for a spin tilted by ``theta``.

    Angles outside [0, pi] are rejected rather than wrapped.
    """
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > np.pi)) or np.any(np.isnan(theta)):
        raise ValueError("theta must lie in [0, pi]")
    out = np.sin(0.5 * theta) ** 2
    return float(out) if out.ndim == 0 else out
