"""Degree-penalized network embedding toolkit.

Learns vertex representations that keep the heavy-tailed degree structure of
scale-free graphs intact, via two routes: a spectral solve on a
degree-penalized proximity Laplacian, and degree-penalized random walks fed
to a skip-gram model. Includes network reconstruction, power-law fitting,
packing bounds, and downstream task evaluation.
"""

__version__ = "0.1.0"

from .bounds import BoundReport, sphere_bounds
from .embedding import Embedding, read_embedding, write_embedding
from .generator import PaConfig, generate_pa
from .graph import (Graph, common_neighbor_matrix, load_edge_list,
                    penalized_weight_matrix, proximity_matrix, save_edge_list)
from .powerlaw import PowerLawFit, fit_power_law, ks_distance
from .reconstruct import (ReconstructionReport, degree_correlations,
                          edge_probability, reconstruct, sweep_epsilon)
from .skipgram import SkipGramConfig, build_huffman_tree, train_skipgram
from .spectral import SpectralConfig, embed_spectral, normalized_laplacian
from .tasks import (LabeledExample, TaskReport, link_prediction_eval,
                    logistic_train, vertex_classification_eval)
from .walker import (WalkConfig, WalkCorpus, embed_walker, generate_walks,
                     transition_distribution)

__all__ = [
    "BoundReport", "Embedding", "Graph", "LabeledExample", "PaConfig",
    "PowerLawFit", "ReconstructionReport", "SkipGramConfig", "SpectralConfig",
    "TaskReport", "WalkConfig", "WalkCorpus", "__version__",
    "build_huffman_tree", "common_neighbor_matrix", "degree_correlations",
    "edge_probability", "embed_spectral", "embed_walker", "fit_power_law",
    "generate_pa", "generate_walks", "ks_distance", "link_prediction_eval",
    "load_edge_list", "logistic_train", "normalized_laplacian",
    "penalized_weight_matrix", "proximity_matrix", "read_embedding",
    "reconstruct", "save_edge_list", "sphere_bounds", "sweep_epsilon",
    "train_skipgram", "transition_distribution", "vertex_classification_eval",
    "write_embedding",
]
