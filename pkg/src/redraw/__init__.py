"""Force-directed order diagram layout with dimension reduction."""

from .drawing import Drawing, satisfies_vertical_constraint
from .engine import (
    LayoutParams,
    ProgressEvent,
    candidate_sets,
    dimension_reduction,
    initial_drawing,
    line_step,
    node_step,
    overshooting_protection,
    redraw,
)
from .fca import FormalContext, concept_lattice, parse_cxt
from .freese import FreeseParams, freese_layout, rank_assignment
from .io import (
    DiagramDocument,
    document_from_drawing,
    parse_cover_edges,
    read_json,
    write_json,
    write_svg,
    write_tikz,
)
from .metrics import MetricsReport, crossing_count, metrics_report, rtd, validate_drawing
from .order import (
    AxiomViolation,
    CoverRelation,
    CycleDetected,
    LinearExtension,
    NotALattice,
    OrderedSet,
    cover_relation,
    is_lattice,
    join,
    meet,
    order_from_covers,
    random_linear_extension,
    transitive_closure,
    validate_order,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "CoverRelation",
    "CycleDetected",
    "DiagramDocument",
    "Drawing",
    "FormalContext",
    "FreeseParams",
    "LayoutParams",
    "LinearExtension",
    "MetricsReport",
    "NotALattice",
    "OrderedSet",
    "ProgressEvent",
    "candidate_sets",
    "concept_lattice",
    "cover_relation",
    "crossing_count",
    "dimension_reduction",
    "document_from_drawing",
    "freese_layout",
    "initial_drawing",
    "is_lattice",
    "join",
    "line_step",
    "meet",
    "metrics_report",
    "node_step",
    "order_from_covers",
    "overshooting_protection",
    "parse_cover_edges",
    "parse_cxt",
    "random_linear_extension",
    "rank_assignment",
    "read_json",
    "redraw",
    "rtd",
    "satisfies_vertical_constraint",
    "transitive_closure",
    "validate_drawing",
    "validate_order",
    "write_json",
    "write_svg",
    "write_tikz",
]
