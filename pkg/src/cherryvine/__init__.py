"""Cherry-tree copulas and truncated R-vines.

Structure algebra (junction trees, cherry-trees, vine sequences), the
truncated R-vine test, the Backward Algorithm, the order-(k+1) embedding,
and Gaussian evaluation of the corresponding copula densities.
"""
from .density import (
    CorrelationMatrix,
    PairCopulaSpec,
    cherry_log_density,
    gaussian_assignment,
    gaussian_copula_log_density,
    h_func,
    markov_projection,
    partial_correlation,
    pc_density,
    vine_log_density,
)
from .exceptions import (
    BackwardFailure,
    CherryTreeError,
    CherryVineError,
    NotTruncatedRVineError,
    SingularMatrixError,
    StructureError,
)
from .structures import (
    CherryTree,
    JunctionTree,
    SeparatorTable,
    ValidationReport,
    VertexSet,
    canonicalize,
    check_rip,
    junction_tree_exists,
    separator_table,
    validate_cherry,
)
from .fileformat import ParseError, SemanticError, emit_dot, format_structure, parse
from .transforms import TruncationWitness, backward, embed, is_truncated_rvine, two_separator_check
from .vine import BaseTree, EdgeLabel, TruncatedRVine, edge_labels, proximity_equiv, validate_sequence

__version__ = "0.1.0"
