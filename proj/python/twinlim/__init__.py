"""Twinned inverse sequences of graphs: validation, encoding and checks."""

from ._core import (
    AxiomViolation,
    Check,
    Encoding,
    Graph,
    GraphSequence,
    ParseError,
    RefinementCapExceeded,
    Report,
    StructuralError,
    TwinnedSequence,
    __version__,
    compose,
    cover_successor,
    encode,
    is_edge_surjective_graph,
    is_edge_surjective_hom,
    is_graph_cover,
    is_homomorphism,
    is_plus_directional,
    load,
    loads,
    quotient_at_depth,
    surjectivity_at_depth,
    t_step,
    validate_sequence,
    validate_twinned,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
