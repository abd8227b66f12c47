"""Coherence of an atom in a dissipative cavity under weak measurement and reversal."""
from .errors import DomainError, NumericalError, ValidationError
from .model import (
    DressedPropagator,
    MemoryIntegrals,
    PhysicalParams,
    embed_atom_with_vacuum,
    evolve_atom,
    evolve_dressed,
    gamma_minus,
    gamma_plus,
    memory_integrals,
    propagator,
    reduce_to_atom,
)
from .nonmarkov import (
    StatePair,
    blp_measure,
    canonical_pair,
    equatorial_pair,
    evolve_pair,
    maximize_over_pairs,
    trace_distance,
)
from .oracle import TimeGrid, compare_closed_form, integrate, master_rhs
from .protocol import (
    InitialPreparation,
    MeasurementStrengths,
    ProtocolConfig,
    apply_reversal,
    apply_weak_measurement,
    coherence_l1,
    coherence_rel_entropy,
    prepare_initial,
    run_protocol,
)

__version__ = "0.1.0"
