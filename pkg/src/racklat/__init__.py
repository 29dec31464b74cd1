"""Subrack lattices of finite groups and lattice-only structure recovery."""

from .groups import FiniteGroup, GroupBuildError, oracle_suite
from .racks import Rack, conjugation_quandle
from .lattice import CapExceeded, ImplicitOnly, SubrackLattice
from .catalog import CATALOG, UnknownGroupError, build_group, catalog_names
from .invariants import InvariantReport, MSet, invariant_report, m_set
from .nilpotence import (LatticeConsistencyError, NilpotenceResult,
                         hypercenter_quotient, nilpotence_class_from_lattice,
                         partition_survey)
from .cycleforms import (AtomPartition, ConditionNotMet, PrimeAssignment,
                         all_cycle_forms, all_pseudo_forms, b_set,
                         cycle_form_condition, p_nilpotent_from_lattice,
                         pseudo_cycle_form, refine_to_cycle_form,
                         theta_assignment)
from .verify import VerificationReport, verify_catalog

__all__ = [
    "FiniteGroup",
    "GroupBuildError",
    "oracle_suite",
    "Rack",
    "conjugation_quandle",
    "CapExceeded",
    "ImplicitOnly",
    "SubrackLattice",
    "CATALOG",
    "UnknownGroupError",
    "build_group",
    "catalog_names",
    "InvariantReport",
    "MSet",
    "invariant_report",
    "m_set",
    "LatticeConsistencyError",
    "NilpotenceResult",
    "hypercenter_quotient",
    "nilpotence_class_from_lattice",
    "partition_survey",
    "AtomPartition",
    "ConditionNotMet",
    "PrimeAssignment",
    "all_cycle_forms",
    "all_pseudo_forms",
    "b_set",
    "cycle_form_condition",
    "p_nilpotent_from_lattice",
    "pseudo_cycle_form",
    "refine_to_cycle_form",
    "theta_assignment",
    "VerificationReport",
    "verify_catalog",
]

__version__ = "0.1.0"
