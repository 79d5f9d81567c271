"""Neighbourhood complexity and the sparsity parameters that bound it, on small graphs."""

from .centred import (CentredVerdict, EliminationForest, centred_colouring_from_forest,
                      chi_r_exact, is_r_centred, treedepth_exact, treedepth_heuristic)
from .complexity import (NuReport, TraceTable, nu_exact, nu_fixed, nu_lower_bound,
                         theorem_bounds, trace_table)
from .errors import ContractViolation, GraphParseError, GuardExceeded, VertexRangeError
from .expansion import (EmbeddingCertificate, GradReport, corollary14_check, grad0_exact,
                        gradr_bruteforce, lemma12_oracle, lemma13_check, theorem15_check,
                        validate_embedding)
from .graph import (Graph, SubgraphSpec, blowup, canonical_form, closed_ball,
                    enumerate_small_graphs, exact_sphere, format_graph, generate,
                    nonisomorphic_graphs, parse_graph)
from .signatures import (Colouring, Partition, check_dichotomy, check_laminarity,
                         hatted_class_count_check, hatted_colouring, lemma7_count_check,
                         refinement_chain_check, sigma_in_neighbourhood, sigma_neighbourhood)
from .verdict import Verdict
from .wcol import (Ordering, WitnessBundle, WReachIndex, check_witness_bundle, degeneracy,
                   wcol_exact, wcol_given_order, wcol_heuristic, witness_bundle, wreach)

__version__ = "0.1.0"

__all__ = [
    "blowup", "canonical_form", "centred_colouring_from_forest", "CentredVerdict",
    "check_dichotomy", "check_laminarity", "check_witness_bundle", "chi_r_exact",
    "closed_ball", "Colouring", "ContractViolation", "corollary14_check", "degeneracy",
    "EliminationForest", "EmbeddingCertificate", "enumerate_small_graphs", "exact_sphere",
    "format_graph", "generate", "grad0_exact", "gradr_bruteforce", "GradReport", "Graph",
    "GraphParseError", "GuardExceeded", "hatted_class_count_check", "hatted_colouring",
    "is_r_centred", "lemma12_oracle", "lemma13_check", "lemma7_count_check",
    "nonisomorphic_graphs", "nu_exact", "nu_fixed", "nu_lower_bound", "NuReport", "Ordering",
    "parse_graph", "Partition", "refinement_chain_check", "sigma_in_neighbourhood",
    "sigma_neighbourhood", "SubgraphSpec", "theorem15_check", "theorem_bounds", "trace_table",
    "TraceTable", "treedepth_exact", "treedepth_heuristic", "validate_embedding", "Verdict",
    "VertexRangeError", "wcol_exact", "wcol_given_order", "wcol_heuristic", "witness_bundle",
    "WitnessBundle", "wreach", "WReachIndex",
]
