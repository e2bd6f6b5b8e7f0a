"""Factor graphs of projected systems, built from the substitutive hierarchy."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, TypeAlias

import networkx as nx
from structlog import get_logger

from subconj.core import Alphabet, Word, apply, language, power
from subconj.util_classes import InvalidInputError, UnsupportedError

if TYPE_CHECKING:
    from logging import Logger

    from subconj.blocks import ProjectedSystem

_logger: Logger = get_logger(__name__)

Edge: TypeAlias = tuple[Word, Word]


@dataclass(frozen=True, slots=True)
class FactorGraph:
    """A simple directed graph on words; loops allowed, vertices sorted."""

    alphabet: Alphabet
    vertices: tuple[Word, ...]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        """Validate the graph.

        Raises:
            InvalidInputError: raised if the vertices are unsorted or an edge leaves the vertex set.

        """
        if list(self.vertices) != sorted(set(self.vertices)):
            raise InvalidInputError("Vertices must be distinct and sorted.")
        known = set(self.vertices)
        if any(u not in known or v not in known for u, v in self.edges):
            raise InvalidInputError("Every edge endpoint must be a vertex.")

    @classmethod
    def build(cls, alphabet: Alphabet, vertices: set[Word], edges: set[Edge]) -> FactorGraph:
        """Create a graph from unordered vertex and edge sets."""
        return cls(alphabet, tuple(sorted(vertices)), frozenset(edges))

    def label(self, vertex: Word) -> str:
        """Spell a vertex with the alphabet's symbols."""
        return self.alphabet.spell(vertex)

    def sorted_edges(self) -> list[Edge]:
        """Return the edges in lexicographic order."""
        return sorted(self.edges)

    def as_digraph(self) -> nx.DiGraph:
        """Return a networkx view of the graph."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def to_json(self) -> dict[str, Any]:
        """Return ``{vertices: [word], edges: [[i, j]]}`` with indices into the vertex list."""
        index = {vertex: i for i, vertex in enumerate(self.vertices)}
        return {
            "vertices": [self.label(vertex) for vertex in self.vertices],
            "edges": [[index[u], index[v]] for u, v in self.sorted_edges()],
        }

    def to_dot(self, name: str = "G") -> str:
        """Render the graph in DOT with a deterministic vertex order."""
        lines = [f"digraph {name} {{"]
        lines.extend(f"  {json.dumps(self.label(vertex))};" for vertex in self.vertices)
        lines.extend(f"  {json.dumps(self.label(u))} -> {json.dumps(self.label(v))};" for u, v in self.sorted_edges())
        lines.append("}")
        return "\n".join(lines)


def letter_graph(p: ProjectedSystem) -> FactorGraph:
    """Build the graph of order 1: projected letters, with an edge for every projected 2-factor.

    Args:
        p: A projected system with a primitive generator.

    Returns:
        The letter graph.

    """
    vertices = {p.project(word) for word in language(p.generator, 1)}
    edges = {(p.project(word[:1]), p.project(word[1:])) for word in language(p.generator, 2)}
    return FactorGraph.build(p.target, vertices, edges)


def _exponent(target_length: int, length: int) -> int:
    exponent, reach = 0, 1
    while reach < target_length and length > 1:
        reach *= length
        exponent += 1
    if reach != target_length or exponent < 1:
        raise UnsupportedError(f"Graph length {target_length} is not a positive power of {length}.")
    return exponent


def block_graph(p: ProjectedSystem, target_length: int, residue: int) -> FactorGraph:
    """Build the graph of the L-words cut at positions congruent to M modulo L.

    The fixed point of the generator is cut at multiples of L = ``gen_length**r``. A window of length
    L (or 2L) starting at such a cut plus M lies inside the image under ``gen**r`` of a 2-factor (or
    3-factor), so the vertex and edge sets are read off those images exactly.

    Args:
        p: A projected system with a primitive generator.
        target_length: The word length L, a positive power of the generator length.
        residue: The residue M, with 0 <= M < L.

    Raises:
        UnsupportedError: raised if L is not a positive power of the generator length.
        InvalidInputError: raised if the residue is out of range.

    Returns:
        The block graph.

    """
    exponent = _exponent(target_length, p.generator.length)
    if not 0 <= residue < target_length:
        raise InvalidInputError(f"Residue {residue} outside 0..{target_length - 1}.")
    iterate = power(p.generator, exponent)
    end = residue + target_length
    vertices = {p.project(apply(iterate, word)[residue:end]) for word in language(p.generator, 2)}
    edges: set[Edge] = set()
    for word in language(p.generator, 3):
        window = p.project(apply(iterate, word)[residue : end + target_length])
        edges.add((window[:target_length], window[target_length:]))
    _logger.debug(
        "Built block graph",
        extra={"length": target_length, "residue": residue, "vertices": len(vertices), "edges": len(edges)},
    )
    return FactorGraph.build(p.target, vertices, edges)


def loops(g: FactorGraph) -> tuple[Word, ...]:
    """Return the vertices carrying a loop."""
    return tuple(vertex for vertex in g.vertices if (vertex, vertex) in g.edges)


def loop_count(g: FactorGraph) -> int:
    """Return the number of loops."""
    return len(loops(g))


def cycle_census(g: FactorGraph, k: int) -> list[tuple[Word, ...]]:
    """List the simple cycles of length k, each rotated to start at its smallest vertex.

    Args:
        g: The graph.
        k: The cycle length, 2 or 3.

    Returns:
        The cycles in lexicographic order.

    """
    if k not in {2, 3}:
        raise InvalidInputError("Only 2-cycles and 3-cycles are listed.")
    cycles: set[tuple[Word, ...]] = set()
    for cycle in nx.simple_cycles(g.as_digraph(), length_bound=k):
        if len(cycle) == k:
            start = cycle.index(min(cycle))
            cycles.add(tuple(cycle[start:] + cycle[:start]))
    return sorted(cycles)


def cycle_vertices(g: FactorGraph, k: int) -> frozenset[Word]:
    """Return the vertices lying on some simple cycle of length k."""
    return frozenset(vertex for cycle in cycle_census(g, k) for vertex in cycle)
