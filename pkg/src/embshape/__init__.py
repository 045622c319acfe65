"""embshape: simplex-shaped macro structure of word embedding clouds.

Enumerates interpretable corner words of an embedding point cloud from
PCA-axis extremes, deduplicates them by neighborhood overlap, screens
them with a triangle-projection convexity test, and reports containment
statistics and 2-d projections.
"""

__version__ = "0.1.0"

from .embeddings import (
    EmbeddingSpace,
    detect_format,
    format_glove_text,
    load_embeddings,
    normalized,
    parse_embeddings,
    write_glove_text,
)
from .errors import (
    DegenerateSamplingError,
    DegenerateTriangleError,
    EmbeddingFormatError,
    EmbshapeError,
)
from .extractor import (
    ExtractionParams,
    Vertex,
    VertexCandidate,
    describe_vertex,
    filter_false_vertices,
    find_candidates,
    glue_candidates,
    topk_neighbors,
    vertex_profile,
)
from .geometry import (
    TriangleProjection,
    TripleStats,
    barycentric,
    incircle,
    inside_triangle,
    plane_basis,
    project_to_plane,
    project_triple,
    triangle_stats,
)
from .pca import PcaModel, fit_pca, informative_axis_count, project_onto_axis
from .report import (
    AnalysisConfig,
    AnalysisReport,
    analyze_space,
    emit_projection,
    emit_report,
    run_analysis,
)
from .synthetic import SyntheticCloud, generate_simplex_cloud, write_ground_truth

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "DegenerateSamplingError",
    "DegenerateTriangleError",
    "EmbeddingFormatError",
    "EmbeddingSpace",
    "EmbshapeError",
    "ExtractionParams",
    "PcaModel",
    "SyntheticCloud",
    "TriangleProjection",
    "TripleStats",
    "Vertex",
    "VertexCandidate",
    "analyze_space",
    "barycentric",
    "describe_vertex",
    "detect_format",
    "emit_projection",
    "emit_report",
    "filter_false_vertices",
    "find_candidates",
    "fit_pca",
    "format_glove_text",
    "generate_simplex_cloud",
    "glue_candidates",
    "incircle",
    "informative_axis_count",
    "inside_triangle",
    "load_embeddings",
    "normalized",
    "parse_embeddings",
    "plane_basis",
    "project_onto_axis",
    "project_to_plane",
    "project_triple",
    "run_analysis",
    "topk_neighbors",
    "triangle_stats",
    "vertex_profile",
    "write_glove_text",
    "write_ground_truth",
]
