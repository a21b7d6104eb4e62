"""Exact eta-invariants, fixed-point data, classification arithmetic and Cheeger
deformations for the quotients Sigma(d)/tau of Brieskorn spheres."""
from __future__ import annotations

from .brieskorn import BrieskornData, ComplexPoint, isotropy_at, tau_fixed_points
from .classify import (KervaireType, Verdict, component_lower_bound, diffeo_necessary_condition, generate_family,
                       giffen_type_count, kervaire_type, plumbing_fixed_points, same_oriented_diffeo_dim5)
from .eta import (CharacterTable, FixedPointSet, RotationData, brieskorn_relative_eta, covering_eta,
                  dolbeault_local_contribution, equivariant_eta_from_fixed_points, plumbing_relative_eta,
                  relative_eta_z2)
from .exact import EtaValue

__all__ = [
    "BrieskornData", "CharacterTable", "ComplexPoint", "EtaValue", "FixedPointSet", "KervaireType",
    "RotationData", "Verdict", "brieskorn_relative_eta", "component_lower_bound", "covering_eta",
    "diffeo_necessary_condition", "dolbeault_local_contribution", "equivariant_eta_from_fixed_points",
    "generate_family", "giffen_type_count", "isotropy_at", "kervaire_type", "plumbing_fixed_points",
    "plumbing_relative_eta", "relative_eta_z2", "same_oriented_diffeo_dim5", "tau_fixed_points",
]
__version__ = "0.1.0"
