"""Tours of length at most 1.3n - 2 in bridgeless cubic graphs, with certificates."""

from .graph import Graph, parse_graph, serialize_graph, validate, generate

__version__ = "0.1.0"

__all__ = ["Graph", "parse_graph", "serialize_graph", "validate", "generate", "__version__"]
