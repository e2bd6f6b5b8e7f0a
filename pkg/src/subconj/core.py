"""Constant-length substitutions and the operations that act on their letters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache, lru_cache
from typing import TYPE_CHECKING, Final

import numpy as np
from structlog import get_logger

from subconj.util_classes import Aperiodicity, InvalidInputError, UnsupportedError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence
    from logging import Logger

    import numpy.typing as npt

_logger: Logger = get_logger(__name__)

SYMBOLS: Final[str] = "123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"

Word = tuple[int, ...]


@cache
def _canonical_names(size: int) -> tuple[str, ...]:
    if size <= len(SYMBOLS):
        return tuple(SYMBOLS[:size])
    return tuple(str(letter) for letter in range(1, size + 1))


@dataclass(frozen=True, slots=True)
class Alphabet:
    """The letters 1..size together with the external symbol of each letter."""

    size: int
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        """Validate the alphabet.

        Raises:
            InvalidInputError: raised if the size is not positive or the names are not distinct.

        """
        if self.size < 1:
            raise InvalidInputError("An alphabet needs at least one letter.")
        if len(self.names) != self.size or len(set(self.names)) != self.size:
            raise InvalidInputError("An alphabet needs exactly one distinct name per letter.")

    @classmethod
    def canonical(cls, size: int) -> Alphabet:
        """Create the alphabet 1..size named by the canonical symbols.

        Args:
            size: Number of letters.

        Returns:
            The canonical alphabet.

        """
        if size < 1:
            raise InvalidInputError("An alphabet needs at least one letter.")
        return cls(size, _canonical_names(size))

    @property
    def letters(self) -> range:
        """Return the canonical letters."""
        return range(1, self.size + 1)

    @property
    def is_canonical(self) -> bool:
        """Whether the letters carry the canonical symbols."""
        return self.names == _canonical_names(self.size)

    def name(self, letter: int) -> str:
        """Return the external symbol of a letter."""
        return self.names[letter - 1]

    def letter(self, name: str) -> int:
        """Return the canonical letter of an external symbol.

        Raises:
            InvalidInputError: raised if the symbol is not part of the alphabet.

        """
        try:
            return self.names.index(name) + 1
        except ValueError as e:
            raise InvalidInputError(f"Symbol {name!r} is not in the alphabet.") from e

    def spell(self, word: Iterable[int]) -> str:
        """Write a word with the external symbols.

        Args:
            word: The word to spell.

        Returns:
            The symbols, separated by spaces only if some symbol is longer than one character.

        """
        separator = "" if all(len(name) == 1 for name in self.names) else " "
        return separator.join(self.names[letter - 1] for letter in word)

    def read(self, text: str) -> Word:
        """Read a word written with single-character symbols."""
        return tuple(self.letter(symbol) for symbol in text)

    def check(self, word: Iterable[int]) -> None:
        """Check that every letter of a word belongs to the alphabet.

        Raises:
            InvalidInputError: raised on the first letter outside 1..size.

        """
        for letter in word:
            if not 1 <= letter <= self.size:
                raise InvalidInputError(f"Letter {letter} is outside the alphabet 1..{self.size}.")


@dataclass(frozen=True, slots=True)
class Substitution:
    """A constant-length substitution; images[a - 1] is the image of letter a."""

    alphabet: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        """Validate the substitution.

        Raises:
            InvalidInputError: raised if the images do not match the alphabet or differ in length.

        """
        if len(self.images) != self.alphabet.size:
            raise InvalidInputError("A substitution needs exactly one image per letter.")
        if len({len(image) for image in self.images}) != 1:
            raise InvalidInputError("All images of a constant-length substitution have the same length.")
        if not self.images[0]:
            raise InvalidInputError("Images must not be empty.")
        for image in self.images:
            self.alphabet.check(image)

    @classmethod
    def from_images(cls, images: Iterable[Iterable[int]]) -> Substitution:
        """Create a substitution on the canonical alphabet.

        Args:
            images: The image of letter 1, letter 2, ...

        Returns:
            The substitution.

        """
        frozen = tuple(tuple(image) for image in images)
        return cls(Alphabet.canonical(len(frozen)), frozen)

    @property
    def length(self) -> int:
        """Return the common length L of the images."""
        return len(self.images[0])

    @property
    def size(self) -> int:
        """Return the alphabet size c."""
        return self.alphabet.size

    def image(self, letter: int) -> Word:
        """Return the image of a letter."""
        return self.images[letter - 1]

    @property
    def characteristic_word(self) -> Word:
        """Return the concatenation of the images in alphabet order."""
        return tuple(itertools.chain.from_iterable(self.images))

    def rules(self) -> str:
        """Render the substitution in the rule text format, e.g. ``1->12,2->21``."""
        name, spell = self.alphabet.name, self.alphabet.spell
        return ",".join(f"{name(letter)}->{spell(self.image(letter))}" for letter in self.alphabet.letters)

    def __str__(self) -> str:
        """Render the substitution as rules."""
        return self.rules()


@dataclass(frozen=True, slots=True)
class LetterMap:
    """A surjective letter-to-letter map; images[a - 1] is the target letter of source letter a.

    The target alphabet is 1..k. A map is canonical when its classes are numbered in order of
    their smallest member, which is how partitions are written in the tables.
    """

    source: Alphabet
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        """Validate the map.

        Raises:
            InvalidInputError: raised if the map does not cover the source or is not onto 1..k.

        """
        if len(self.images) != self.source.size:
            raise InvalidInputError("A letter map needs exactly one target letter per source letter.")
        if set(self.images) != set(range(1, max(self.images) + 1)):
            raise InvalidInputError("A letter map must be onto the target letters 1..k.")

    @classmethod
    def identity(cls, source: Alphabet) -> LetterMap:
        """Return the identity map of an alphabet."""
        return cls(source, tuple(source.letters))

    @classmethod
    def from_partition(cls, source: Alphabet, classes: Iterable[Iterable[int]]) -> LetterMap:
        """Create the canonical map whose fibres are the given classes.

        Args:
            source: The source alphabet.
            classes: Disjoint nonempty classes covering the source letters.

        Raises:
            InvalidInputError: raised if the classes are not a partition of the source letters.

        Returns:
            The canonical letter map.

        """
        blocks = sorted((tuple(sorted(block)) for block in classes), key=lambda block: block[:1])
        images = [0] * source.size
        for target, block in enumerate(blocks, start=1):
            if not block:
                raise InvalidInputError("Partition classes must not be empty.")
            for letter in block:
                if not 1 <= letter <= source.size or images[letter - 1]:
                    raise InvalidInputError(f"Letter {letter} is outside the alphabet or repeated.")
                images[letter - 1] = target
        if 0 in images:
            raise InvalidInputError("The partition does not cover the alphabet.")
        return cls(source, tuple(images))

    @property
    def target_size(self) -> int:
        """Return the number of target letters."""
        return max(self.images)

    @property
    def target(self) -> Alphabet:
        """Return the canonical target alphabet."""
        return Alphabet.canonical(self.target_size)

    @property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Return the fibre of every target letter, in target order."""
        fibres: list[list[int]] = [[] for _ in range(self.target_size)]
        for letter, target in enumerate(self.images, start=1):
            fibres[target - 1].append(letter)
        return tuple(tuple(fibre) for fibre in fibres)

    @property
    def is_canonical(self) -> bool:
        """Whether the target letters are numbered by smallest class member."""
        highest = 0
        for target in self.images:
            if target > highest + 1:
                return False
            highest = max(highest, target)
        return True

    @property
    def is_identity(self) -> bool:
        """Whether the map is the identity."""
        return self.images == tuple(self.source.letters)

    def canonical(self) -> LetterMap:
        """Return the canonical map with the same classes."""
        return LetterMap.from_partition(self.source, self.classes)

    def __call__(self, letter: int) -> int:
        """Map a single letter."""
        return self.images[letter - 1]

    def project(self, word: Iterable[int]) -> Word:
        """Map a word letter by letter."""
        images = self.images
        return tuple(images[letter - 1] for letter in word)

    def then(self, other: LetterMap) -> LetterMap:
        """Return the composition that applies this map first and ``other`` second."""
        if other.source.size != self.target_size:
            raise InvalidInputError("The maps cannot be composed.")
        return LetterMap(self.source, tuple(other.images[target - 1] for target in self.images))

    def partition_string(self) -> str:
        """Render the classes as ``{1,2,3}{4,5,6}``, class i being the fibre of target letter i."""
        return "".join("{" + ",".join(str(letter) for letter in fibre) + "}" for fibre in self.classes)

    def __str__(self) -> str:
        """Render the map as a partition string."""
        return self.partition_string()


@dataclass(frozen=True, slots=True)
class AnalysisReport:
    """Summary of the letter-level properties of a substitution."""

    primitive: bool
    injective: bool
    aperiodic: Aperiodicity
    standard_form: Substitution
    permutation: tuple[int, ...]
    characteristic_word: Word


# Application and iteration


def _apply(s: Substitution, word: Iterable[int]) -> Word:
    images = s.images
    return tuple(itertools.chain.from_iterable(images[letter - 1] for letter in word))


def apply(s: Substitution, word: Sequence[int]) -> Word:
    """Apply a substitution to a word.

    Args:
        s: The substitution.
        word: A word over the substitution's alphabet.

    Raises:
        InvalidInputError: raised if the word has a letter outside the alphabet.

    Returns:
        The concatenation of the images of the letters of ``word``.

    """
    s.alphabet.check(word)
    return _apply(s, word)


@lru_cache(maxsize=1024)
def _power(s: Substitution, n: int) -> Substitution:
    images = [(letter,) for letter in s.alphabet.letters]
    for _ in range(n):
        images = [_apply(s, image) for image in images]
    return Substitution(s.alphabet, tuple(images))


def power(s: Substitution, n: int) -> Substitution:
    """Return the n-th iterate of a substitution.

    Args:
        s: The substitution.
        n: A positive exponent.

    Raises:
        InvalidInputError: raised if n is not positive.

    Returns:
        The substitution of length L**n.

    """
    if n < 1:
        raise InvalidInputError("Only positive powers keep a constant length.")
    if n == 1:
        return s
    return _power(s, n)


def relabel(s: Substitution, permutation: Sequence[int]) -> Substitution:
    """Rename the letters of a substitution.

    Args:
        s: The substitution.
        permutation: One-line notation, ``permutation[a - 1]`` is the new name of letter a.

    Returns:
        The renamed substitution on the canonical alphabet.

    """
    if sorted(permutation) != list(s.alphabet.letters):
        raise InvalidInputError("Not a permutation of the alphabet.")
    images: list[Word] = [()] * s.size
    for letter in s.alphabet.letters:
        images[permutation[letter - 1] - 1] = tuple(permutation[x - 1] for x in s.image(letter))
    return Substitution.from_images(images)


# Letter-level properties


def incidence_matrix(s: Substitution) -> npt.NDArray[np.int64]:
    """Return the incidence matrix; entry [a - 1, b - 1] counts the letter a in the image of b."""
    matrix = np.zeros((s.size, s.size), dtype=np.int64)
    for column, image in enumerate(s.images):
        for letter in image:
            matrix[letter - 1, column] += 1
    return matrix


@lru_cache(maxsize=4096)
def is_primitive(s: Substitution) -> bool:
    """Check primitivity by matrix-power positivity up to the Wielandt bound (c - 1)**2 + 1."""
    adjacency = (incidence_matrix(s) > 0).astype(np.int64)
    reach = adjacency.copy()
    for _ in range((s.size - 1) ** 2 + 1):
        if reach.all():
            return True
        reach = np.minimum(reach @ adjacency, 1)
    return False


def is_injective(s: Substitution) -> bool:
    """Check that distinct letters have distinct images."""
    return len(set(s.images)) == s.size


# Languages


@lru_cache(maxsize=4096)
def _two_letter_words(s: Substitution) -> frozenset[Word]:
    # seeds are the 2-factors inside single images; the closure adds those straddling two images
    found = {image[i : i + 2] for image in s.images for i in range(len(image) - 1)}
    frontier = set(found)
    while frontier:
        fresh: set[Word] = set()
        for word in frontier:
            block = _apply(s, word)
            for i in range(len(block) - 1):
                factor = block[i : i + 2]
                if factor not in found:
                    found.add(factor)
                    fresh.add(factor)
        frontier = fresh
    return frozenset(found)


@lru_cache(maxsize=8192)
def _factors(s: Substitution, n: int) -> frozenset[Word]:
    if n == 1:
        return frozenset((letter,) for image in s.images for letter in image)
    if s.length == 1:
        # a primitive substitution of length 1 has a single letter
        return frozenset((letter,) * n for letter in s.alphabet.letters)
    level = 1
    while s.length**level < n - 1:
        level += 1
    iterate = power(s, level)
    found: set[Word] = set()
    for pair in _two_letter_words(s):
        block = _apply(iterate, pair)
        found.update(block[i : i + n] for i in range(len(block) - n + 1))
    return frozenset(found)


def language(s: Substitution, n: int) -> frozenset[Word]:
    """Return the exact set of length-n factors of the minimal system of a primitive substitution.

    The 2-letter words are the least fixpoint of ``w -> 2-factors of s(w)`` seeded by the images of
    the letters. Every n-factor sits inside ``s**k(v)`` for a 2-letter word v once ``L**k >= n - 1``.

    Args:
        s: A primitive substitution.
        n: The factor length.

    Raises:
        InvalidInputError: raised if n is not positive.
        UnsupportedError: raised if the substitution is not primitive.

    Returns:
        The factor set.

    """
    if n < 1:
        raise InvalidInputError("Factor lengths are positive.")
    if not is_primitive(s):
        raise UnsupportedError("Languages are only computed for primitive substitutions.")
    return _factors(s, n)


def _complexity_counts(s: Substitution, n_max: int) -> Iterator[tuple[int, int]]:
    for n in range(1, n_max + 1):
        yield n, len(language(s, n))


def complexity(s: Substitution, n_max: int) -> list[int]:
    """Return the factor counts p(1), ..., p(n_max)."""
    return [count for _, count in _complexity_counts(s, n_max)]


def is_aperiodic(s: Substitution, bound: int | None = None) -> Aperiodicity:
    """Test aperiodicity with the Morse-Hedlund criterion.

    Args:
        s: A primitive substitution.
        bound: Largest factor length tested; defaults to L * c**2 + 1.

    Returns:
        PERIODIC if p(n) <= n for a tested n, else APERIODIC (certified up to ``bound``).

    """
    n_max = bound if bound is not None else s.length * s.size**2 + 1
    if any(count <= n for n, count in _complexity_counts(s, n_max)):
        return Aperiodicity.PERIODIC
    return Aperiodicity.APERIODIC


# Standard form


def standard_form(s: Substitution) -> tuple[Substitution, tuple[int, ...]]:
    """Find the relabeling with the lexicographically smallest characteristic word.

    The search labels letters in order of first appearance in the characteristic word, branching
    only when the next letter to expand has no label yet. Ties, which only non-injective
    substitutions can produce, go to the smallest permutation in one-line notation.

    Args:
        s: The substitution.

    Returns:
        The standard form and the permutation (``permutation[a - 1]`` is the new name of a).

    """
    best: list[Word] = []
    winners: list[tuple[int, ...]] = []

    def extend(old_of_new: list[int], new_of_old: list[int], word: list[int]) -> None:
        new_letter = len(word) // s.length + 1
        if new_letter > s.size:
            candidate = tuple(word)
            if not best or candidate < best[0]:
                best[:] = [candidate]
                winners.clear()
            if candidate == best[0]:
                winners.append(tuple(new_of_old))
            return
        if len(old_of_new) < new_letter:
            for old in s.alphabet.letters:
                if not new_of_old[old - 1]:
                    labels = list(new_of_old)
                    labels[old - 1] = new_letter
                    extend([*old_of_new, old], labels, word)
            return
        labels = list(new_of_old)
        order = list(old_of_new)
        extended = list(word)
        for letter in s.image(order[new_letter - 1]):
            if not labels[letter - 1]:
                order.append(letter)
                labels[letter - 1] = len(order)
            extended.append(labels[letter - 1])
        if best and tuple(extended) > best[0][: len(extended)]:
            return
        extend(order, labels, extended)

    extend([], [0] * s.size, [])
    permutation = min(winners)
    word = best[0]
    images = [word[i : i + s.length] for i in range(0, len(word), s.length)]
    return Substitution.from_images(images), permutation


# Amalgamation and injectivization


def intertwines(pi: LetterMap, source: Substitution, target: Substitution) -> bool:
    """Check the intertwining equation pi o source = target o pi letter by letter."""
    if pi.source.size != source.size or pi.target_size != target.size or source.length != target.length:
        return False
    return all(pi.project(source.image(a)) == target.image(pi(a)) for a in source.alphabet.letters)


def amalgamate(s: Substitution, pi: LetterMap) -> Substitution | None:
    """Return the substitution t with pi o s = t o pi, if one exists.

    Args:
        s: The substitution.
        pi: A surjective letter map from the alphabet of ``s``.

    Raises:
        InvalidInputError: raised if the map does not start from the substitution's alphabet.

    Returns:
        The amalgamation on the target alphabet of ``pi``, or None.

    """
    if pi.source.size != s.size:
        raise InvalidInputError("The letter map does not start from the substitution's alphabet.")
    images: list[Word | None] = [None] * pi.target_size
    for letter in s.alphabet.letters:
        projected = pi.project(s.image(letter))
        target = pi(letter)
        if images[target - 1] is None:
            images[target - 1] = projected
        elif images[target - 1] != projected:
            return None
    return Substitution(pi.target, tuple(image for image in images if image is not None))


def injectivization_steps(s: Substitution) -> list[tuple[Substitution, LetterMap]]:
    """Identify letters with equal images, one round at a time.

    Each round merges every class of equal-image letters into its smallest member. The surviving
    letters keep their external names.

    Args:
        s: The substitution.

    Returns:
        For every round, the amalgamated substitution and the merge map of that round.

    """
    steps: list[tuple[Substitution, LetterMap]] = []
    current = s
    while not is_injective(current):
        first: dict[Word, int] = {}
        for letter in current.alphabet.letters:
            first.setdefault(current.image(letter), letter)
        representatives = [first[current.image(letter)] for letter in current.alphabet.letters]
        kept = sorted(set(representatives))
        rank = {letter: index for index, letter in enumerate(kept, start=1)}
        merge = LetterMap(current.alphabet, tuple(rank[letter] for letter in representatives))
        merged = amalgamate(current, merge)
        if merged is None:  # pragma: no cover
            raise AssertionError("Equal-image classes always amalgamate.")
        names = tuple(current.alphabet.name(letter) for letter in kept)
        current = Substitution(Alphabet(len(kept), names), merged.images)
        steps.append((current, merge))
    if steps:
        _logger.debug("Injectivized substitution", extra={"rounds": len(steps), "size": current.size})
    return steps


def injectivize(s: Substitution) -> tuple[Substitution, LetterMap]:
    """Return the injectivization of a substitution and the letter map onto its alphabet."""
    result = s
    total = LetterMap.identity(s.alphabet)
    for merged, merge in injectivization_steps(s):
        result = merged
        total = total.then(merge)
    return result, total


def analyze(s: Substitution) -> AnalysisReport:
    """Collect the letter-level properties of a substitution."""
    primitive = is_primitive(s)
    form, permutation = standard_form(s)
    return AnalysisReport(
        primitive=primitive,
        injective=is_injective(s),
        aperiodic=is_aperiodic(s) if primitive else Aperiodicity.UNKNOWN,
        standard_form=form,
        permutation=permutation,
        characteristic_word=form.characteristic_word,
    )


# Intertwining search


def _propagate(
    source: Substitution, target: Substitution, assignment: list[int], letter: int, value: int, *, bijective: bool
) -> list[int] | None:
    trial = list(assignment)
    pending = [(letter, value)]
    while pending:
        a, b = pending.pop()
        if trial[a - 1] == b:
            continue
        if trial[a - 1] or (bijective and b in trial):
            return None
        trial[a - 1] = b
        for x, y in zip(source.image(a), target.image(b), strict=True):
            if not trial[x - 1]:
                pending.append((x, y))
            elif trial[x - 1] != y:
                return None
    return trial


def _extend_intertwining(
    source: Substitution, target: Substitution, assignment: list[int], *, bijective: bool
) -> Iterator[LetterMap]:
    if 0 not in assignment:
        if len(set(assignment)) == target.size:
            yield LetterMap(source.alphabet, tuple(assignment))
        return
    free = assignment.index(0) + 1
    for value in target.alphabet.letters:
        trial = _propagate(source, target, assignment, free, value, bijective=bijective)
        if trial is not None:
            yield from _extend_intertwining(source, target, trial, bijective=bijective)


def find_intertwinings(source: Substitution, target: Substitution, *, bijective: bool = False) -> Iterator[LetterMap]:
    """Enumerate the surjective letter maps pi with pi o source = target o pi.

    Assigning one letter fixes every letter occurring in its image, so for a primitive source a
    single choice determines the whole map.

    Args:
        source: The substitution on the domain alphabet.
        target: The substitution on the target alphabet, of the same length.
        bijective: Only yield bijections.

    Raises:
        InvalidInputError: raised if the lengths differ.

    Yields:
        The intertwining maps, in lexicographic order of their images.

    """
    if source.length != target.length:
        raise InvalidInputError("Intertwined substitutions have the same length.")
    if target.size > source.size or (bijective and source.size != target.size):
        return
    yield from _extend_intertwining(source, target, [0] * source.size, bijective=bijective)
