"""Exact HeLP and PAP-adapted HeLP analysis of torsion units in integral group rings."""

from .cyclotomics import Cyclotomic, zeta
from .engine import (
    Char,
    ConstraintSystem,
    HeLPOptions,
    PAPVector,
    VirtualUnit,
    compile_constraints,
    irr_n,
    mu_class,
    mu_of_expansion,
    mu_virtual,
    pap_check,
    pap_expand,
    trivial_candidate,
)
from .group_model import (
    CharacterTable,
    GroupRingElement,
    TableError,
    build_abelian_table,
    classes_of_order,
    fixture_names,
    load_fixture,
    load_table,
    power_class,
    validate_table,
)
from .solver import (
    AnalysisReport,
    SolutionSet,
    SolverOptions,
    analyze,
    bounding_box,
    enumerate_pap,
    enumerate_standard,
)

__version__ = "0.1.0"
