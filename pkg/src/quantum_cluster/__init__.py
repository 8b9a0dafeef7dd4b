"""Truncated quantum cluster expansion for high-temperature partition functions."""

from .cluster import (
    Cluster,
    ExpansionResult,
    choose_truncation_order,
    connected_multisets,
    enumerate_clusters,
    estimate,
    expansion_coefficients,
    ordering_multiplicity,
    truncated_expansion,
)
from .errors import ModelError, NumericError, QuantumClusterError, RegionError, ResourceError
from .model import BetaSpec, SpinModel, emit_model, load_model, preset, validate_beta
from .oracle import ExactResult, build_hamiltonian, compare, exact_partition, log_partition_taylor
from .polymer import (
    Polymer,
    enumerate_connected_edge_sets,
    enumerate_polymers,
    incompatible,
    polymer_weight,
    polymer_weight_oracle,
)
from .ursell import IncompatibilityGraph, ursell_bruteforce, ursell_fast

__version__ = "0.1.0"
