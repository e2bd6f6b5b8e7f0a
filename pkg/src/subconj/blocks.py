"""N-block alphabets, hat substitutions with a lag, and projected systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Any

from bidict import bidict
from structlog import get_logger

from subconj.core import Alphabet, LetterMap, Substitution, Word, apply, language
from subconj.util_classes import InvalidInputError

if TYPE_CHECKING:
    from collections.abc import Iterable
    from logging import Logger

_logger: Logger = get_logger(__name__)


@dataclass(frozen=True)
class BlockCoding:
    """The N-factors of a primitive substitution, coded 1..n in lexicographic order."""

    base: Alphabet
    block_length: int
    blocks: tuple[Word, ...]
    codes: bidict[Word, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        """Build the two-way lookup between blocks and codes.

        Raises:
            InvalidInputError: raised if the blocks are not sorted, distinct and of length N.

        """
        if any(len(block) != self.block_length for block in self.blocks):
            raise InvalidInputError(f"Every block must have length {self.block_length}.")
        if list(self.blocks) != sorted(set(self.blocks)):
            raise InvalidInputError("Blocks must be distinct and sorted lexicographically.")
        object.__setattr__(self, "codes", bidict({block: code for code, block in enumerate(self.blocks, start=1)}))

    @property
    def alphabet(self) -> Alphabet:
        """Return the coded alphabet."""
        return Alphabet.canonical(len(self.blocks))

    def code_of(self, block: Word) -> int:
        """Return the code of an N-factor.

        Raises:
            InvalidInputError: raised if the word is not one of the blocks.

        """
        try:
            return self.codes[block]
        except KeyError as e:
            raise InvalidInputError(f"{block} is not a factor of length {self.block_length}.") from e

    def word_of(self, code: int) -> Word:
        """Return the N-factor behind a code."""
        return self.codes.inverse[code]

    def encode(self, word: Word) -> Word:
        """Code every N-window of a word."""
        n = self.block_length
        return tuple(self.code_of(word[i : i + n]) for i in range(len(word) - n + 1))

    def to_table(self) -> list[dict[str, Any]]:
        """Return the coding as ``[{code, word}]`` rows."""
        return [{"code": code, "word": self.base.spell(block)} for code, block in enumerate(self.blocks, start=1)]


@lru_cache(maxsize=256)
def block_coding(s: Substitution, n: int) -> BlockCoding:
    """Code the language of length n of a primitive substitution.

    Args:
        s: A primitive substitution.
        n: The block length N.

    Raises:
        UnsupportedError: raised if the substitution is not primitive.

    Returns:
        The lexicographic coding of the N-factors.

    """
    return BlockCoding(s.alphabet, n, tuple(sorted(language(s, n))))


def max_lag(length: int, n: int) -> int:
    """Return the largest admissible lag (L - 1)(N - 1)."""
    return (length - 1) * (n - 1)


@lru_cache(maxsize=1024)
def hat_substitution(s: Substitution, n: int, lag: int) -> Substitution:
    """Build the substitution generating the N-block presentation, with a lag.

    The image of a block a_0...a_{N-1} is read off v = s(a_0...a_{N-1}): it is the sequence of the
    L consecutive N-windows of v starting at offset ``lag``.

    Args:
        s: A primitive substitution.
        n: The block length N.
        lag: The lag M, with 0 <= M <= (L - 1)(N - 1).

    Raises:
        InvalidInputError: raised if N is not positive or the lag is out of range.
        UnsupportedError: raised if the substitution is not primitive.

    Returns:
        The hat substitution on the coded alphabet of ``block_coding(s, n)``.

    """
    if n < 1:
        raise InvalidInputError("The block length must be positive.")
    if not 0 <= lag <= max_lag(s.length, n):
        raise InvalidInputError(f"Lag {lag} outside 0..{max_lag(s.length, n)}.")
    if n == 1:
        return s
    coding = block_coding(s, n)
    images: list[Word] = []
    for block in coding.blocks:
        expanded = apply(s, block)
        images.append(tuple(coding.code_of(expanded[lag + i : lag + i + n]) for i in range(s.length)))
    _logger.debug("Built hat substitution", extra={"block_length": n, "lag": lag, "size": len(images)})
    return Substitution.from_images(images)


def compose_lags(lag: int, lag_prime: int, length: int) -> int:
    """Return the lag M'L + M of the composition of the lag-M and lag-M' hat maps."""
    return lag_prime * length + lag


def iterated_lag(lag: int, length: int, n: int) -> int:
    """Return the lag M(L**n - 1)/(L - 1) of the n-fold composition with a constant lag M."""
    total = 0
    for _ in range(n):
        total = compose_lags(lag, total, length)
    return total


@dataclass(frozen=True, slots=True)
class ProjectedSystem:
    """The letter-to-letter image of the system of a primitive generator.

    A block presentation also remembers the base substitution and N, so that the generator can be
    rebuilt for every lag.
    """

    generator: Substitution
    projection: LetterMap
    base: Substitution | None = None
    block_length: int = 1

    def __post_init__(self) -> None:
        """Check that the projection starts from the generator's alphabet.

        Raises:
            InvalidInputError: raised on an alphabet mismatch.

        """
        if self.projection.source.size != self.generator.size:
            raise InvalidInputError("The projection must start from the generator's alphabet.")

    @classmethod
    def identity(cls, generator: Substitution) -> ProjectedSystem:
        """Return the system of a substitution, unprojected."""
        return cls(generator, LetterMap.identity(generator.alphabet))

    @classmethod
    def block_presentation(
        cls, base: Substitution, n: int, projection: LetterMap | None = None, lag: int = 0
    ) -> ProjectedSystem:
        """Project the N-block presentation of a primitive substitution.

        Args:
            base: The primitive substitution.
            n: The block length N.
            projection: Letter map from the N-block alphabet; the identity if omitted.
            lag: Lag of the generating hat substitution.

        Returns:
            The projected system.

        """
        generator = hat_substitution(base, n, lag)
        return cls(generator, projection or LetterMap.identity(generator.alphabet), base, n)

    @property
    def target(self) -> Alphabet:
        """Return the alphabet of the projected sequences."""
        return self.projection.target

    @property
    def lags(self) -> range:
        """Return every lag the generator can be rebuilt with."""
        if self.base is None:
            return range(1)
        return range(max_lag(self.base.length, self.block_length) + 1)

    def lagged_generator(self, lag: int) -> Substitution:
        """Return the generator rebuilt with another lag."""
        if self.base is None:
            if lag:
                raise InvalidInputError("Only block presentations can change the lag.")
            return self.generator
        return hat_substitution(self.base, self.block_length, lag)

    def with_projection(self, projection: LetterMap) -> ProjectedSystem:
        """Return the same presentation under another projection."""
        return ProjectedSystem(self.generator, projection, self.base, self.block_length)

    def project(self, word: Iterable[int]) -> Word:
        """Project a generator word letter by letter."""
        return self.projection.project(word)


def project_word(p: ProjectedSystem, word: Word) -> Word:
    """Map a word over the generator's alphabet to the projected alphabet.

    Raises:
        InvalidInputError: raised if the word has a letter outside the generator's alphabet.

    """
    p.generator.alphabet.check(word)
    return p.project(word)
