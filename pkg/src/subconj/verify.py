"""Certificates that a candidate substitution does, or does not, generate a projected system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeAlias

from structlog import get_logger

from subconj.catalog import Intertwining, Undecided, WordRefutation
from subconj.core import find_intertwinings, intertwines, language, power
from subconj.epimorph import enumerate_epis
from subconj.graphs import block_graph, letter_graph, loop_count
from subconj.settings import Settings
from subconj.util_classes import Direction

if TYPE_CHECKING:
    from collections.abc import Iterator
    from logging import Logger

    from subconj.blocks import ProjectedSystem
    from subconj.core import LetterMap, Substitution, Word

_logger: Logger = get_logger(__name__)

Certificate: TypeAlias = Intertwining | WordRefutation | Undecided


def is_amalgamation_of(candidate: Substitution, source: Substitution, pi: LetterMap) -> bool:
    """Check that pi(source(a)) = candidate(pi(a)) for every letter a."""
    return intertwines(pi, source, candidate)


def _powers(p_sys: ProjectedSystem, settings: Settings) -> Iterator[int]:
    length = p_sys.generator.length
    for p in range(1, p_sys.generator.size + 1):
        if length**p > settings.max_power_length:
            return
        yield p


def find_intertwining(p_sys: ProjectedSystem, phi: Substitution, settings: Settings) -> Intertwining | None:
    """Search for p and a lag M with pi o gen_M**p = phi**p o pi.

    The system's own projection is tried for every p and M first. Any other surjective letter map
    satisfying the equation also proves that the candidate generates a factor, so a general search
    follows.

    Args:
        p_sys: The projected system.
        phi: The candidate substitution.
        settings: Bounds on the powers searched.

    Returns:
        The certificate, or None.

    """
    if phi.length != p_sys.generator.length:
        return None
    for p in _powers(p_sys, settings):
        target = power(phi, p)
        for lag in p_sys.lags:
            if intertwines(p_sys.projection, power(p_sys.lagged_generator(lag), p), target):
                return Intertwining(power=p, lag=lag, projection=p_sys.projection)
    for p in _powers(p_sys, settings):
        target = power(phi, p)
        for lag in p_sys.lags:
            pi = next(find_intertwinings(power(p_sys.lagged_generator(lag), p), target), None)
            if pi is not None:
                return Intertwining(power=p, lag=lag, projection=pi)
    return None


def refute(p_sys: ProjectedSystem, phi: Substitution, k_max: int) -> WordRefutation | None:
    """Compare the exact factor sets of the system and of the candidate up to length k_max.

    Returns:
        The smallest word of the first length where the sets differ, or None.

    """
    for k in range(2, k_max + 1):
        system_words = {p_sys.project(word) for word in language(p_sys.generator, k)}
        candidate_words = language(phi, k)
        if missing := system_words - candidate_words:
            return WordRefutation(word=min(missing), length=k, direction=Direction.SYSTEM_NOT_IN_CANDIDATE)
        if extra := candidate_words - system_words:
            return WordRefutation(word=min(extra), length=k, direction=Direction.CANDIDATE_NOT_IN_SYSTEM)
    return None


def verify_factor(p_sys: ProjectedSystem, phi: Substitution, settings: Settings | None = None) -> Certificate:
    """Decide whether a primitive candidate generates the projected system.

    Args:
        p_sys: The projected system.
        phi: A primitive candidate of the generator's length.
        settings: Power cap and refutation depth; the defaults if omitted.

    Returns:
        An intertwining, a refuting word, or Undecided with the depth that was checked.

    """
    settings = settings or Settings()
    if (certificate := find_intertwining(p_sys, phi, settings)) is not None:
        _logger.debug("Certified candidate", extra={"candidate": phi.rules(), "power": certificate.power})
        return certificate
    k_max = settings.refutation_depth(phi.length, phi.size)
    if (refutation := refute(p_sys, phi, k_max)) is not None:
        return refutation
    _logger.info("Candidate undecided", extra={"candidate": phi.rules(), "k_max": k_max})
    return Undecided(checked_up_to=k_max)


@dataclass(frozen=True, slots=True)
class EvidenceRow:
    """The block graph of one length and residue, with the number of epimorphisms onto it."""

    exponent: int
    residue: int
    loops: int
    epimorphisms: int


@dataclass(frozen=True, slots=True)
class EvidenceReport:
    """Epimorphism counts onto block graphs of every tested length and residue."""

    letter_loops: int
    rows: tuple[EvidenceRow, ...]

    @property
    def non_substitutive(self) -> bool:
        """Whether no tested block graph receives an epimorphism."""
        return all(row.epimorphisms == 0 for row in self.rows)


def non_substitutive_evidence(p_sys: ProjectedSystem, n_max: int) -> EvidenceReport:
    """Count the epimorphisms from the letter graph onto every G_{L**n, M}, n <= n_max.

    A system generated by a substitution of length L**n would make one of these counts positive,
    so zeros everywhere are evidence that the system is not substitutive at these lengths.

    Args:
        p_sys: The projected system; L is its generator's length.
        n_max: The largest exponent tested.

    Returns:
        The report.

    """
    g1 = letter_graph(p_sys)
    length = p_sys.generator.length
    rows: list[EvidenceRow] = []
    for n in range(1, n_max + 1):
        for residue in range(length**n):
            glm = block_graph(p_sys, length**n, residue)
            epis, _ = enumerate_epis(g1, glm)
            rows.append(EvidenceRow(n, residue, loop_count(glm), len(epis)))
    return EvidenceReport(loop_count(g1), tuple(rows))


def square_roots(p_sys: ProjectedSystem, exponent: int, residue: int) -> frozenset[Word]:
    """Return the words w of length L**n with ww cut at positions congruent to M modulo L**n."""
    glm = block_graph(p_sys, p_sys.generator.length**exponent, residue)
    return frozenset(vertex for vertex in glm.vertices if (vertex, vertex) in glm.edges)
