"""Text formats: substitution rules, words and partition strings."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Final

from subconj.core import Alphabet, LetterMap, Substitution, Word
from subconj.util_classes import InvalidInputError, ParseError

if TYPE_CHECKING:
    from collections.abc import Iterator

_ARROW: Final[str] = "->"
_RULE_TOKEN: Final[re.Pattern[str]] = re.compile(r"[^,\s]+")
_PARTITION_CLASS: Final[re.Pattern[str]] = re.compile(r"\s*\{([^{}]*)\}\s*")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _error(message: str, text: str, offset: int, token: str) -> ParseError:
    line, column = _position(text, offset)
    return ParseError(message, line=line, column=column, token=token)


def _rules(text: str) -> Iterator[tuple[int, str, str]]:
    for match in _RULE_TOKEN.finditer(text):
        token = match.group()
        if token.count(_ARROW) != 1:
            raise _error("Expected a rule of the form X->W", text, match.start(), token)
        left, right = token.split(_ARROW)
        if len(left) != 1 or not left.isalnum():
            raise _error("The left-hand side must be a single alphanumeric symbol", text, match.start(), left)
        if not right:
            raise _error("Images must not be empty", text, match.start(), token)
        yield match.start(), left, right


def parse_substitution(text: str) -> Substitution:
    """Parse the rule format, e.g. ``1->1233,2->2313,3->3123``.

    Rules are separated by commas or whitespace. The alphabet is made of the left-hand sides in
    order of appearance, so its first symbol becomes letter 1.

    Args:
        text: The rules.

    Raises:
        ParseError: raised on malformed rules, duplicate left-hand sides, undeclared symbols
            or images of different lengths.

    Returns:
        The substitution, keeping the symbols as external names.

    """
    rules = list(_rules(text))
    if not rules:
        raise _error("No rules found", text, 0, text)
    names: list[str] = []
    for offset, left, _ in rules:
        if left in names:
            raise _error("Duplicate left-hand side", text, offset, left)
        names.append(left)
    length = len(rules[0][2])
    images: list[Word] = []
    for offset, left, right in rules:
        if len(right) != length:
            raise _error(f"Image length differs from {length}", text, offset + len(left) + len(_ARROW), right)
        for index, symbol in enumerate(right):
            if symbol not in names:
                raise _error("Undeclared symbol", text, offset + len(left) + len(_ARROW) + index, symbol)
        images.append(tuple(names.index(symbol) + 1 for symbol in right))
    return Substitution(Alphabet(len(names), tuple(names)), tuple(images))


def format_substitution(s: Substitution) -> str:
    """Render a substitution in the rule format; ``parse_substitution`` reads it back unchanged."""
    return s.rules()


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a word written with the alphabet's single-character symbols.

    Raises:
        ParseError: raised on a symbol outside the alphabet.

    """
    word: list[int] = []
    for offset, symbol in enumerate(text.strip()):
        if symbol not in alphabet.names:
            raise _error("Symbol outside the alphabet", text, offset, symbol)
        word.append(alphabet.letter(symbol))
    return tuple(word)


def parse_partition(text: str, source: Alphabet | None = None) -> LetterMap:
    """Parse a partition string such as ``{1,4,5}{2,3}{6}`` into its canonical letter map.

    Letters are the canonical numbers 1..c of the source alphabet.

    Args:
        text: The partition string.
        source: The alphabet being partitioned; defaults to 1..c, c being the number of listed letters.

    Raises:
        ParseError: raised if the text is not a sequence of brace groups of letters.
        InvalidInputError: raised if the groups are not a partition of the alphabet.

    Returns:
        The canonical letter map.

    """
    classes: list[list[int]] = []
    offset = 0
    while offset < len(text):
        match = _PARTITION_CLASS.match(text, offset)
        if match is None:
            raise _error("Expected a class {a,b,...}", text, offset, text[offset:])
        block: list[int] = []
        for item in match.group(1).split(","):
            if not item.strip().isdigit():
                raise _error("Expected a letter number", text, match.start(1), match.group(1))
            block.append(int(item))
        classes.append(block)
        offset = match.end()
    if not classes:
        raise _error("Empty partition", text, 0, text)
    if source is None:
        source = Alphabet.canonical(sum(len(block) for block in classes))
    try:
        return LetterMap.from_partition(source, classes)
    except InvalidInputError as e:
        raise InvalidInputError(f"{text!r} is not a partition of 1..{source.size}: {e}") from e
