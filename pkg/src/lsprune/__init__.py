"""Locality-sensitive MinHash edge pruning for attributed graphs."""

from .analysis import (
    NeighborhoodStats,
    VarianceCurve,
    bernoulli_edge_pruner,
    bernoulli_thinning_variance,
    jaccard_locality,
    khop_sizes,
    neighborhood_stats,
    neighborhood_variance_curve,
    variance_scaling_check,
)
from .attrs import (
    CANONICAL,
    CENTER_FIRST,
    CONSTRUCTION_MODES,
    ENDPOINT_ORDERS,
    NODE_AND_EDGE,
    NODE_ONLY,
    RAW_EDGE,
    EdgeAttrTable,
    build_edge_attrs,
    embed_scalar_attrs,
    embedding_table,
)
from .container import (
    ContainerFormatError,
    parse_config_file,
    parse_container,
    parse_container_detailed,
    parse_family,
    write_container,
    write_family,
)
from .generator import (
    ClassTemplate,
    GeneratedSample,
    GeneratorConfig,
    generate_class_template,
    generate_dataset,
    generate_sample,
)
from .graph import AdjacencyView, Graph, GraphStructureError, build_adjacency, degree
from .hashing import (
    LSP_P,
    LSP_T,
    LshFamily,
    LshFamilyConfig,
    collision_rate,
    hash_p,
    hash_t,
)
from .prune import (
    PruneResult,
    PruneStats,
    RandomPruneConfig,
    lsp_prune,
    prune_dataset,
    random_prune,
    resolve_attr_mode,
)
from .seeding import mix_seed

__version__ = "0.1.0"

__all__ = [
    "AdjacencyView",
    "CANONICAL",
    "CENTER_FIRST",
    "CONSTRUCTION_MODES",
    "ClassTemplate",
    "ContainerFormatError",
    "EdgeAttrTable",
    "ENDPOINT_ORDERS",
    "GeneratedSample",
    "GeneratorConfig",
    "Graph",
    "GraphStructureError",
    "LSP_P",
    "LSP_T",
    "LshFamily",
    "LshFamilyConfig",
    "NODE_AND_EDGE",
    "NODE_ONLY",
    "NeighborhoodStats",
    "PruneResult",
    "PruneStats",
    "RAW_EDGE",
    "RandomPruneConfig",
    "VarianceCurve",
    "bernoulli_edge_pruner",
    "bernoulli_thinning_variance",
    "build_adjacency",
    "build_edge_attrs",
    "collision_rate",
    "degree",
    "embed_scalar_attrs",
    "embedding_table",
    "generate_class_template",
    "generate_dataset",
    "generate_sample",
    "hash_p",
    "hash_t",
    "jaccard_locality",
    "khop_sizes",
    "lsp_prune",
    "mix_seed",
    "neighborhood_stats",
    "neighborhood_variance_curve",
    "parse_config_file",
    "parse_container",
    "parse_container_detailed",
    "parse_family",
    "prune_dataset",
    "random_prune",
    "resolve_attr_mode",
    "variance_scaling_check",
    "write_container",
    "write_family",
]
