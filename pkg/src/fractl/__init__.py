"""Fractional heat Duhamel operator and Triebel-Lizorkin norms on the periodic torus."""

__version__ = "0.1.0"

from .spectral_core import (  # noqa: E402
    RealField,
    SpaceTimeField,
    SpectralField,
    TorusGrid,
    apply_multiplier,
    forward_transform,
    inverse_transform,
    lp_norm,
    space_time_lp_norm,
)
from .littlewood_paley import (  # noqa: E402
    BumpProfile,
    FilterBank,
    band_overlap_check,
    build_filter_bank,
    delta_j,
    make_profile,
    partition_residual,
    s0,
)
from .function_spaces import TLIndex, bessel_sobolev_norm, space_time_tl_norm, tl_norm  # noqa: E402
from .frac_heat import (  # noqa: E402
    HeatParams,
    band_kernel_l1,
    decay_bound_report,
    duhamel_apply,
    kernel_eval,
    semigroup_apply,
)
from .rademacher import khinchine_exact, rademacher_value  # noqa: E402
from .probes import ProbeSpec, RatioRecord, dyadic_split_sums, generate_probe, measure_ratio  # noqa: E402

__all__ = [
    "__version__",
    "RealField",
    "SpaceTimeField",
    "SpectralField",
    "TorusGrid",
    "apply_multiplier",
    "forward_transform",
    "inverse_transform",
    "lp_norm",
    "space_time_lp_norm",
    "BumpProfile",
    "FilterBank",
    "band_overlap_check",
    "build_filter_bank",
    "delta_j",
    "make_profile",
    "partition_residual",
    "s0",
    "TLIndex",
    "bessel_sobolev_norm",
    "space_time_tl_norm",
    "tl_norm",
    "HeatParams",
    "band_kernel_l1",
    "decay_bound_report",
    "duhamel_apply",
    "kernel_eval",
    "semigroup_apply",
    "khinchine_exact",
    "rademacher_value",
    "ProbeSpec",
    "RatioRecord",
    "dyadic_split_sums",
    "generate_probe",
    "measure_ratio",
]
