"""Combinatorial Ricci flow on circle-packed surfaces, with metric curvature tools."""

from .curvature import CurvatureField, curvature, face_angles, face_areas, vertex_areas, vertex_defects
from .embed import VertexEmbeddabilityReport, check_surface, check_vertex
from .errors import *  # noqa: F401,F403
from .flow import (ConvergenceReport, FlowOptions, FlowProblem, FlowTrace, convergence_report,
                   detect_singularity, flow_rhs, integrate, roundtrip)
from .mesh import (LengthAssignment, TriangulatedSurface, build_surface, euler_characteristic,
                   genus, lengths_from_embedding, validate_lengths)
from .packing import CirclePacking, edge_lengths, lengths_from_packing, scale_packing
from .wald import (EmbeddingCurvatureResult, KappaSolverOptions, MetricQuadruple, cayley_menger,
                   comparison_angle, embedding_curvature, gauge_determinant,
                   region_curvature_at_least, v_kappa, vertex_wald_curvature)

__version__ = "0.1.0"
