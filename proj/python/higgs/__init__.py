"""Hierarchical graph synthesis toolkit.

Thin python surface over the C++ core: attributed graphs, Louvain
partitioning, hierarchical dataset construction, the pluggable three-stage
samplers, the BTER baseline and the fidelity evaluation suite.
"""

try:
    from higgs._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree cmake build: the module sits directly on sys.path
    from _core import *  # noqa: F401,F403

__all__ = [
    "AttributedGraph",
    "Partition",
    "HierarchicalDataset",
    "GeneratorBackend",
    "StatisticalBackend",
    "EmpiricalBackend",
    "PipelineConfig",
    "ConfigError",
    "DataError",
    "read_graph",
    "write_graph",
    "read_corpus",
    "write_corpus",
    "largest_connected_component",
    "generate_sbm_corpus",
    "modularity",
    "louvain",
    "partition_stats",
    "build_from_large_graph",
    "build_from_corpus",
    "save_dataset",
    "load_dataset",
    "sample_graph",
    "graph_stats",
    "corpus_mmd",
    "community_eval",
    "quantiles",
    "bter_sample",
    "run_experiment",
    "mix64",
]
