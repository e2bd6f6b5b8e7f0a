"""Enumeration of graph epimorphisms from the letter graph onto a block graph."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING

from structlog import get_logger

from subconj.core import Substitution, Word
from subconj.graphs import cycle_vertices, loop_count
from subconj.util_classes import InvalidInputError, UnsupportedError

if TYPE_CHECKING:
    from collections.abc import Sequence
    from logging import Logger

    from subconj.graphs import FactorGraph

_logger: Logger = get_logger(__name__)


@dataclass(frozen=True, slots=True, order=True)
class EpiCandidate:
    """A vertex map of the letter graph; ``images[i]`` is the image of ``sources[i]``."""

    sources: tuple[Word, ...]
    images: tuple[Word, ...]

    @property
    def induced(self) -> Substitution:
        """Read the image of every letter as a substitution on the letter graph's alphabet.

        Raises:
            InvalidInputError: raised if the sources are not the single letters 1..k.

        """
        if self.sources != tuple((letter,) for letter in range(1, len(self.sources) + 1)):
            raise InvalidInputError("The letter graph must have the vertices 1..k.")
        return Substitution.from_images(self.images)


@dataclass
class SearchStats:
    """Counters of one epimorphism search."""

    nodes_expanded: int = 0
    pruned_T1: int = 0  # noqa: N815
    pruned_T2: int = 0  # noqa: N815
    pruned_T3: int = 0  # noqa: N815
    pruned_cycles: int = 0
    pruned_surjectivity: int = 0
    candidates_found: int = 0

    def merge(self, other: SearchStats) -> None:
        """Add the counters of another search."""
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))


def is_epimorphism(g1: FactorGraph, glm: FactorGraph, images: Sequence[Word]) -> bool:
    """Check a vertex map from scratch: edges preserved, onto the vertices and onto the edges."""
    assignment = dict(zip(g1.vertices, images, strict=True))
    mapped = {(assignment[u], assignment[v]) for u, v in g1.edges}
    return mapped == glm.edges and set(images) == set(glm.vertices)


def _neighbours(g: FactorGraph) -> tuple[dict[Word, set[Word]], dict[Word, set[Word]]]:
    successors: dict[Word, set[Word]] = {vertex: set() for vertex in g.vertices}
    predecessors: dict[Word, set[Word]] = {vertex: set() for vertex in g.vertices}
    for u, v in g.edges:
        successors[u].add(v)
        predecessors[v].add(u)
    return successors, predecessors


def _fails_prechecks(g1: FactorGraph, glm: FactorGraph, stats: SearchStats) -> bool:
    if len(glm.vertices) > len(g1.vertices):
        stats.pruned_T1 += 1
        return True
    if loop_count(g1) and not loop_count(glm):
        stats.pruned_T2 += 1
        return True
    if len(glm.vertices) == len(g1.vertices) and len(glm.edges) != len(g1.edges):
        stats.pruned_T3 += 1
        return True
    if len(glm.edges) > len(g1.edges):
        stats.pruned_surjectivity += 1
        return True
    return False


def _initial_domains(g1: FactorGraph, glm: FactorGraph, stats: SearchStats, *, pruning: bool) -> dict[Word, set[Word]]:
    target_loops = {vertex for vertex in glm.vertices if (vertex, vertex) in glm.edges}
    domains: dict[Word, set[Word]] = {}
    for vertex in g1.vertices:
        domains[vertex] = target_loops.copy() if (vertex, vertex) in g1.edges else set(glm.vertices)
    if pruning and not target_loops:
        # without target loops, 2-cycles and 3-cycles must land on cycles of the same length
        for k in (2, 3):
            allowed = cycle_vertices(glm, k)
            for vertex in cycle_vertices(g1, k):
                removed = domains[vertex] - allowed
                stats.pruned_cycles += len(removed)
                domains[vertex] -= removed
    return domains


def enumerate_epis(
    g1: FactorGraph, glm: FactorGraph, *, pruning: bool = True
) -> tuple[list[EpiCandidate], SearchStats]:
    """Enumerate every epimorphism from the letter graph onto a block graph.

    Vertices are assigned in descending degree order, values tried in lexicographic order. Each
    assignment restricts the domains of the unassigned neighbours (forward checking), and branches
    that can no longer cover every target vertex are cut. Edge surjectivity is checked at the leaves.

    Args:
        g1: The letter graph.
        glm: The block graph.
        pruning: Apply the vertex/loop/edge-count pre-checks and the cycle filter.

    Returns:
        The epimorphisms sorted by their images, and the search counters.

    """
    stats = SearchStats()
    if pruning and _fails_prechecks(g1, glm, stats):
        return [], stats
    if not g1.vertices:
        return [], stats
    successors, predecessors = _neighbours(g1)
    target_successors, target_predecessors = _neighbours(glm)
    order = sorted(g1.vertices, key=lambda vertex: (-len(successors[vertex]) - len(predecessors[vertex]), vertex))
    domains = _initial_domains(g1, glm, stats, pruning=pruning)
    needed = len(glm.vertices)
    found: list[EpiCandidate] = []

    def search(depth: int, assignment: dict[Word, Word], domains: dict[Word, set[Word]]) -> None:
        if depth == len(order):
            images = tuple(assignment[vertex] for vertex in g1.vertices)
            if {(assignment[u], assignment[v]) for u, v in g1.edges} == glm.edges:
                found.append(EpiCandidate(g1.vertices, images))
            return
        if needed - len(set(assignment.values())) > len(order) - depth:
            stats.pruned_surjectivity += 1
            return
        vertex = order[depth]
        for value in sorted(domains[vertex]):
            stats.nodes_expanded += 1
            narrowed = dict(domains)
            consistent = True
            for neighbour in successors[vertex]:
                if neighbour not in assignment and neighbour != vertex:
                    narrowed[neighbour] = narrowed[neighbour] & target_successors[value]
                    consistent = consistent and bool(narrowed[neighbour])
            for neighbour in predecessors[vertex]:
                if neighbour not in assignment and neighbour != vertex:
                    narrowed[neighbour] = narrowed[neighbour] & target_predecessors[value]
                    consistent = consistent and bool(narrowed[neighbour])
            if consistent:
                search(depth + 1, {**assignment, vertex: value}, narrowed)

    search(0, {}, domains)
    found.sort(key=lambda candidate: candidate.images)
    stats.candidates_found = len(found)
    _logger.debug("Enumerated epimorphisms", extra={"found": len(found), "nodes": stats.nodes_expanded})
    return found, stats


def brute_force_epis(g1: FactorGraph, glm: FactorGraph, *, budget: int = 1_000_000) -> list[EpiCandidate]:
    """Try every vertex map; the reference the pruned search is checked against.

    Args:
        g1: The letter graph.
        glm: The block graph.
        budget: Largest number of vertex maps to try.

    Raises:
        UnsupportedError: raised if there are more maps than the budget allows.

    Returns:
        The epimorphisms sorted by their images.

    """
    total = len(glm.vertices) ** len(g1.vertices)
    if total > budget:
        raise UnsupportedError(f"{total} vertex maps exceed the budget of {budget}.")
    return [
        EpiCandidate(g1.vertices, images)
        for images in itertools.product(glm.vertices, repeat=len(g1.vertices))
        if is_epimorphism(g1, glm, images)
    ]
