"""Defect densities and entanglement scaling for quenched 1D spin chains."""

__version__ = "0.1.0"

from .entanglement_scaling import (
    Base,
    EntropyValue,
    ScalingLaw,
    check_constraint,
    conformal_entropy,
    lmg_combined_entropy,
    max_block_size,
    max_entropy,
    quench_entropy,
    rg_phase_entropy,
    scaling_law,
)
from .kzm_defects import (
    KinkModelSpec,
    excitation_probability,
    kink_density,
    kink_density_closed_form,
    kink_density_quadrature,
    kink_spec,
    kz_length,
    lmg_kink_density,
)
from .models import ModelKind, SpinModel, berry_phase_factor, dispersion, quench_schedule
