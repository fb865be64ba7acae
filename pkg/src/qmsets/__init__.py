"""Quantum mechanics over sets: partition logic, GF(2) linear algebra,
and measurement as partition join."""

from .errors import (
    BasisError,
    BoundError,
    CompatibilityError,
    EmptyStateError,
    GroupError,
    QmSetsError,
    ScenarioError,
)
from .universe import (
    DitSet,
    SetPartition,
    Universe,
    block_sizes,
    discrete,
    dit,
    enumerate_partitions,
    indiscrete,
    join,
    logical_entropy,
    meet,
    refines,
)
from .attributes import (
    AnnotatedJoin,
    Attribute,
    compatible,
    eigen_sets,
    inverse_image_partition,
    is_csca,
    join_attributes,
)
from .group_action import (
    AxiomReport,
    Permutation,
    TransformationGroup,
    generate_group,
    is_invariant,
    orbit_partition,
    verify_group_axioms,
)
from .gf2 import (
    Basis,
    LinearMap,
    SetKet,
    add,
    apply_map,
    check_basis,
    identity_map,
    is_nonsingular,
    ket_table,
    permutation_map,
    standard_basis,
    standard_ket,
    to_basis,
)
from .calculus import (
    MeasurementRecord,
    MeasurementStep,
    Outcome,
    OutcomeDistribution,
    born_distribution,
    bracket,
    csca_final_distribution,
    csca_measure,
    evolve,
    ketbra_resolve,
    measure_distribution,
    measure_sample,
    measurement_join,
    norm,
    pythagoras_check,
    spectral_decompose,
)
from .scenario import Scenario, parse_scenario
from .cli import lattice_render, run_scenario

__version__ = "0.1.0"
