"""Factor lists, conjugacy lists and the pairwise conjugacy decision."""

from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from structlog import get_logger

from subconj.blocks import ProjectedSystem, hat_substitution, max_lag
from subconj.catalog import Catalog, CatalogEntry, ConjugacyList, FactorList, Provenance, Undecided, WordRefutation
from subconj.core import (
    LetterMap,
    Substitution,
    find_intertwinings,
    injectivize,
    is_aperiodic,
    is_injective,
    is_primitive,
    power,
    standard_form,
)
from subconj.epimorph import SearchStats, enumerate_epis
from subconj.graphs import block_graph, letter_graph
from subconj.settings import Settings
from subconj.util_classes import Aperiodicity, UnsupportedError, Verdict
from subconj.verify import verify_factor

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence
    from logging import Logger

    from subconj.core import Alphabet

_logger: Logger = get_logger(__name__)

PRESENTATION_BLOCK_LENGTH = 3


# Partitions


def _restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    word = [0] * n

    def fill(position: int, highest: int) -> Iterator[tuple[int, ...]]:
        if position == n:
            yield tuple(word)
            return
        for value in range(1, highest + 2):
            word[position] = value
            yield from fill(position + 1, max(highest, value))

    yield from fill(0, 0)


def _canonical_growth_string(images: Sequence[int]) -> tuple[int, ...]:
    rank: dict[int, int] = {}
    return tuple(rank.setdefault(image, len(rank) + 1) for image in images)


def _permuted(growth: tuple[int, ...], permutation: Sequence[int]) -> tuple[int, ...]:
    moved = [0] * len(growth)
    for letter, block in enumerate(growth, start=1):
        moved[permutation[letter - 1] - 1] = block
    return _canonical_growth_string(moved)


def partition_stream(alphabet: Alphabet, symmetries: Iterable[Sequence[int]] = ()) -> Iterator[LetterMap]:
    """Enumerate the set partitions of an alphabet as canonical letter maps.

    Partitions come in restricted-growth-string order. With symmetries, only the partition whose
    growth string is smallest over its orbit is yielded.

    Args:
        alphabet: The alphabet to partition.
        symmetries: Permutations in one-line notation (``P[a - 1]`` is the image of a).

    Yields:
        One letter map per partition, or per orbit.

    """
    moves = [tuple(permutation) for permutation in symmetries if tuple(permutation) != tuple(alphabet.letters)]
    for growth in _restricted_growth_strings(alphabet.size):
        if all(growth <= _permuted(growth, permutation) for permutation in moves):
            yield LetterMap(alphabet, growth)


def commuting_permutations(s: Substitution) -> tuple[tuple[int, ...], ...]:
    """Return the letter permutations P with P o s = s o P, identity included."""
    return tuple(pi.images for pi in find_intertwinings(s, s, bijective=True))


# Factor list


@dataclass(frozen=True, slots=True)
class _Case:
    index: int
    base: Substitution
    partition: LetterMap
    residue: int
    settings: Settings


@dataclass(slots=True)
class CaseOutcome:
    """The entries produced by one (partition, residue) case."""

    index: int
    certified: list[CatalogEntry] = field(default_factory=list)
    undecided: list[CatalogEntry] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)


def _examine_case(case: _Case) -> CaseOutcome:
    system = ProjectedSystem.block_presentation(case.base, PRESENTATION_BLOCK_LENGTH, case.partition)
    length = system.generator.length
    epis, stats = enumerate_epis(letter_graph(system), block_graph(system, length, case.residue))
    outcome = CaseOutcome(case.index, stats=stats)
    for epi in epis:
        phi = epi.induced
        if not is_primitive(phi):
            continue
        aperiodicity = is_aperiodic(phi, case.settings.aperiodicity_depth(length, phi.size))
        if aperiodicity is Aperiodicity.PERIODIC:
            continue
        certificate = verify_factor(system, phi, case.settings)
        if isinstance(certificate, WordRefutation):
            continue
        form, _ = standard_form(injectivize(phi)[0])
        entry = CatalogEntry(
            standard_form=form,
            alphabet_size=form.size,
            provenance=Provenance(partition=case.partition, residue=case.residue, epimorphism=phi),
            certificate=certificate,
            injective=is_injective(form),
            primitive=is_primitive(form),
            aperiodic=aperiodicity,
        )
        (outcome.undecided if isinstance(certificate, Undecided) else outcome.certified).append(entry)
    return outcome


def _check_domain(alpha: Substitution, settings: Settings) -> None:
    if alpha.length < 2:
        raise UnsupportedError("The procedures need substitutions of length at least 2.")
    if not is_primitive(alpha):
        raise UnsupportedError(f"{alpha.rules()} is not primitive.")
    depth = settings.aperiodicity_depth(alpha.length, alpha.size)
    if is_aperiodic(alpha, depth) is Aperiodicity.PERIODIC:
        raise UnsupportedError(f"{alpha.rules()} generates a finite (periodic) system.")


def _run_cases(cases: list[_Case], settings: Settings) -> tuple[list[CaseOutcome], bool]:
    deadline = None if settings.budget is None else time.monotonic() + settings.budget
    outcomes: list[CaseOutcome] = []
    step = max(1, len(cases) // 20)

    def report() -> None:
        if len(outcomes) % step == 0 or len(outcomes) == len(cases):
            _logger.info("Factor search progress", extra={"processed": len(outcomes), "total": len(cases)})

    if settings.jobs == 1:
        for case in cases:
            if deadline is not None and time.monotonic() > deadline:
                return outcomes, False
            outcomes.append(_examine_case(case))
            report()
        return outcomes, True

    # An expired budget must return without joining the cases still running.
    executor = ProcessPoolExecutor(max_workers=settings.jobs)
    complete = False
    try:
        pending: set[Future[CaseOutcome]] = {executor.submit(_examine_case, case) for case in cases}
        while pending:
            timeout = None if deadline is None else max(0.0, deadline - time.monotonic())
            done, pending = wait(pending, timeout=timeout, return_when=FIRST_COMPLETED)
            if not done:
                _logger.info("Budget expired", extra={"processed": len(outcomes), "total": len(cases)})
                return outcomes, False
            for future in done:
                outcomes.append(future.result())
                report()
        complete = True
    finally:
        executor.shutdown(wait=complete, cancel_futures=not complete)
    return outcomes, True


def _merge(outcomes: list[CaseOutcome]) -> tuple[list[CatalogEntry], list[CatalogEntry], SearchStats]:
    certified: dict[str, CatalogEntry] = {}
    undecided: dict[str, CatalogEntry] = {}
    totals = SearchStats()
    for outcome in sorted(outcomes, key=lambda outcome: outcome.index):
        totals.merge(outcome.stats)
        for entry in outcome.certified:
            certified.setdefault(entry.key, entry)
        for entry in outcome.undecided:
            undecided.setdefault(entry.key, entry)
    kept_undecided = [entry for key, entry in undecided.items() if key not in certified]
    return (
        sorted(certified.values(), key=lambda entry: entry.sort_key),
        sorted(kept_undecided, key=lambda entry: entry.sort_key),
        totals,
    )


def _options(settings: Settings) -> dict[str, Any]:
    return {
        "symmetry": settings.symmetry,
        "k_max": settings.k_max,
        "aperiodicity_bound": settings.aperiodicity_bound,
        "max_power_length": settings.max_power_length,
    }


def reduced_form(alpha: Substitution) -> Substitution:
    """Return the standard form of the injectivization."""
    return standard_form(injectivize(alpha)[0])[0]


def factor_list(alpha: Substitution, settings: Settings | None = None, catalog: Catalog | None = None) -> FactorList:
    """List the injective substitutions of length L generating a factor of the system of alpha.

    The 3-block presentation (lag 0) of the reduced substitution is projected by every letter map
    of its alphabet. For every residue M, the epimorphisms from the letter graph onto the block
    graph give candidates; primitive, infinite candidates are verified, and the survivors are
    injectivized and deduplicated by standard form.

    Args:
        alpha: A primitive aperiodic substitution of length at least 2.
        settings: Search settings; the defaults if omitted.
        catalog: Optional persistent cache of complete lists.

    Raises:
        UnsupportedError: raised if alpha is too short, not primitive or periodic.

    Returns:
        The list, with undecided candidates kept apart.

    """
    settings = settings or Settings()
    _check_domain(alpha, settings)
    base = reduced_form(alpha)
    if catalog is not None and (stored := catalog.load(base)) is not None:
        return stored
    generator = hat_substitution(base, PRESENTATION_BLOCK_LENGTH, 0)
    symmetries = commuting_permutations(generator) if settings.symmetry else ()
    cases = [
        _Case(index, base, partition, residue, settings)
        for index, (partition, residue) in enumerate(
            (partition, residue)
            for partition in partition_stream(generator.alphabet, symmetries)
            for residue in range(base.length)
        )
    ]
    _logger.info(
        "Starting factor search",
        extra={"source": base.rules(), "block_letters": generator.size, "cases": len(cases)},
    )
    outcomes, complete = _run_cases(cases, settings)
    entries, undecided, totals = _merge(outcomes)
    _logger.info(
        "Finished factor search",
        extra={
            "entries": len(entries),
            "undecided": len(undecided),
            "complete": complete,
            "nodes": totals.nodes_expanded,
        },
    )
    result = FactorList(
        source=base,
        length=base.length,
        entries=tuple(entries),
        undecided=tuple(undecided),
        complete=complete,
        options=_options(settings),
    )
    if catalog is not None:
        catalog.store(result)
    return result


# Conjugacy


def find_factor_map(beta: Substitution, target: Substitution, settings: Settings) -> bool:
    """Look for an explicit factor map from the system of beta onto the system of target.

    Letter maps from powers of beta and of its 2- and 3-block hat substitutions are tried.

    Returns:
        Whether a surjective letter map intertwines some power of a presentation with target**p.

    """
    if beta.length != target.length:
        return False
    presentations = [beta]
    for n in (2, PRESENTATION_BLOCK_LENGTH):
        presentations.extend(hat_substitution(beta, n, lag) for lag in range(max_lag(beta.length, n) + 1))
    for presentation in presentations:
        p = 1
        while p <= presentation.size and beta.length**p <= settings.max_power_length:
            if next(find_intertwinings(power(presentation, p), power(target, p)), None) is not None:
                return True
            p += 1
    return False


def conjugacy_list(
    alpha: Substitution, settings: Settings | None = None, catalog: Catalog | None = None
) -> ConjugacyList:
    """Keep the members of the factor list whose systems are conjugate to the system of alpha.

    An entry beta is kept if alpha's reduced form appears on the factor list of beta: two systems
    that are factors of each other are conjugate by coalescence. An explicit factor map from beta
    onto alpha, or onto an entry already kept, settles the question without computing beta's list.

    Args:
        alpha: A primitive aperiodic substitution of length at least 2.
        settings: Search settings; the defaults if omitted.
        catalog: Optional persistent cache of complete factor lists.

    Returns:
        The conjugacy list; entries that cannot be settled go to the undecided bucket.

    """
    settings = settings or Settings()
    factors = factor_list(alpha, settings, catalog)
    target = factors.source
    kept: list[CatalogEntry] = []
    undecided: list[CatalogEntry] = list(factors.undecided)
    complete = factors.complete
    for processed, entry in enumerate(factors.entries, start=1):
        beta = entry.standard_form
        conjugates = [target, *(found.standard_form for found in kept if found.standard_form != target)]
        if beta == target or any(find_factor_map(beta, other, settings) for other in conjugates):
            kept.append(entry)
        else:
            sub_list = factor_list(beta, settings, catalog)
            complete = complete and sub_list.complete
            if target.rules() in sub_list.forms():
                kept.append(entry)
            elif target.rules() in sub_list.undecided_forms() or not sub_list.complete:
                undecided.append(entry)
        _logger.info("Conjugacy search progress", extra={"processed": processed, "total": len(factors.entries)})
    return ConjugacyList(
        source=target,
        length=target.length,
        entries=tuple(sorted(kept, key=lambda entry: entry.sort_key)),
        undecided=tuple(sorted(undecided, key=lambda entry: entry.sort_key)),
        complete=complete,
        options=_options(settings),
    )


def decide_conjugate(
    alpha: Substitution, beta: Substitution, settings: Settings | None = None, catalog: Catalog | None = None
) -> Verdict:
    """Decide whether two substitutions of the same length generate conjugate systems.

    Beta is on the conjugacy list of alpha exactly when each reduced form is on the factor list of
    the other. Explicit factor maps in both directions answer first; the factor lists are computed
    only when they do not.

    Raises:
        UnsupportedError: raised if the lengths differ or an input is outside the procedures' domain.

    """
    settings = settings or Settings()
    if alpha.length != beta.length:
        raise UnsupportedError("Take powers first: the lengths differ.")
    _check_domain(alpha, settings)
    _check_domain(beta, settings)
    first, second = reduced_form(alpha), reduced_form(beta)
    if first == second:
        return Verdict.CONJUGATE
    if find_factor_map(first, second, settings) and find_factor_map(second, first, settings):
        return Verdict.CONJUGATE
    settled = True
    for source, wanted in ((second, first), (first, second)):
        found = factor_list(source, settings, catalog)
        if wanted.rules() in found.forms():
            continue
        if found.complete and wanted.rules() not in found.undecided_forms():
            return Verdict.NOT_CONJUGATE
        settled = False
    return Verdict.CONJUGATE if settled else Verdict.UNDECIDED
