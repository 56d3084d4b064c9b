"""Naimark extensions and joint-measurability checks for finite-outcome POVMs."""

from ._naimark_lab import (
    ExtensionCheck,
    FeasibilityResult,
    IncompatibilityEstimate,
    JointPovm,
    NaimarkExtension,
    Povm,
    common_extension_joint,
    dichotomic_extension,
    feasibility_oracle,
    find_w,
    general_extension,
    incompatibility_estimate,
    joint_from_w,
    minimal_ancilla_dim,
    region_scan,
    run_examples,
    unsharp_spin,
    unsharp_trio_joint,
    verify_extension,
    w_residual,
    xy_closed_form_theta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
