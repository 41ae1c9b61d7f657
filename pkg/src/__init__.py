# -*- coding: utf-8 -*-
"""
HTAK 图核 - 包初始化
"""
from .version import __version__
from .models import (Graph, GraphCollection, LoadReport, DistanceRow, LayerSet, DbTable, PointSet,
                     KmeansResult, PrototypeHierarchy, AffinityMatrix, AssignmentVector,
                     FeatureBank, GramMatrix, GramReport, UNREACHABLE, EXCLUDED)
from .errors import (HtakError, InputError, DatasetFormatError, ArgumentError, ConfigError,
                     VerificationError, PipelineError)
from .config_manager import ConfigManager, RunConfig
from .dataset_loader import load_tu_dataset, write_tu_dataset, describe_collection
from .shortest_paths import bfs_distances, compute_global_k
from .db_repr import steady_state_entropy, layer_set, expansion_subgraph, db_table
from .prototypes import kmeans, level0_points, build_hierarchy, build_hierarchies
from .alignment import affinity, assign, align_graph, feature_bank, correspondence_matrix
from .kernel import htak_pair_fast, htak_pair_direct, gram_from_banks, check_gram
from .evaluation import knn_cv, stratified_folds
from .pipeline import HtakPipeline, gram_matrix

__all__ = [
    'Graph', 'GraphCollection', 'LoadReport', 'DistanceRow', 'LayerSet', 'DbTable', 'PointSet',
    'KmeansResult', 'PrototypeHierarchy', 'AffinityMatrix', 'AssignmentVector',
    'FeatureBank', 'GramMatrix', 'GramReport', 'UNREACHABLE', 'EXCLUDED',
    'HtakError', 'InputError', 'DatasetFormatError', 'ArgumentError', 'ConfigError',
    'VerificationError', 'PipelineError',
    'ConfigManager', 'RunConfig',
    'load_tu_dataset', 'write_tu_dataset', 'describe_collection',
    'bfs_distances', 'compute_global_k',
    'steady_state_entropy', 'layer_set', 'expansion_subgraph', 'db_table',
    'kmeans', 'level0_points', 'build_hierarchy', 'build_hierarchies',
    'affinity', 'assign', 'align_graph', 'feature_bank', 'correspondence_matrix',
    'htak_pair_fast', 'htak_pair_direct', 'gram_from_banks', 'check_gram',
    'knn_cv', 'stratified_folds',
    'HtakPipeline', 'gram_matrix',
]
