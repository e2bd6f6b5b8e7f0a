"""Wire models for certificates and catalogs, and the persistent sub-list cache."""

from __future__ import annotations

import json
import os
import tempfile
from logging import Logger
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, TypeAdapter, WithJsonSchema
from structlog import get_logger

from subconj import __version__
from subconj.core import SYMBOLS, Alphabet, LetterMap, Substitution, Word
from subconj.parsing import parse_partition, parse_substitution
from subconj.util_classes import Aperiodicity, Direction

_logger: Logger = get_logger(__name__)


def _to_substitution(value: Any) -> Substitution:
    if isinstance(value, Substitution):
        return value
    return parse_substitution(str(value))


def _to_letter_map(value: Any) -> LetterMap:
    if isinstance(value, LetterMap):
        return value
    text = str(value).strip()
    if text.startswith("["):
        images = tuple(json.loads(text))
        return LetterMap(Alphabet.canonical(len(images)), images)
    return parse_partition(text)


def _dump_letter_map(pi: LetterMap) -> str:
    # partition strings cannot say which class gets which target letter
    return pi.partition_string() if pi.is_canonical else json.dumps(list(pi.images))


def _to_word(value: Any) -> Word:
    if isinstance(value, tuple):
        return value
    return Alphabet.canonical(len(SYMBOLS)).read(str(value))


SubstitutionField = Annotated[
    Substitution,
    PlainValidator(_to_substitution),
    PlainSerializer(lambda s: s.rules(), return_type=str),
    WithJsonSchema({"type": "string", "description": "rules such as 1->12,2->21"}),
]
LetterMapField = Annotated[
    LetterMap,
    PlainValidator(_to_letter_map),
    PlainSerializer(_dump_letter_map, return_type=str),
    WithJsonSchema({"type": "string", "description": "partition such as {1,4,5}{2,3}{6}"}),
]
WordField = Annotated[
    Word,
    PlainValidator(_to_word),
    PlainSerializer(lambda word: Alphabet.canonical(max(word, default=1)).spell(word), return_type=str),
    WithJsonSchema({"type": "string"}),
]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class Intertwining(_Frozen):
    """Positive certificate: pi o gen_M**p = phi**p o pi holds letter by letter."""

    kind: Literal["intertwining"] = "intertwining"
    power: int
    lag: int
    projection: LetterMapField


class WordRefutation(_Frozen):
    """Negative certificate: a word of one exact factor set missing from the other."""

    kind: Literal["word_refutation"] = "word_refutation"
    word: WordField
    length: int
    direction: Direction


class Undecided(_Frozen):
    """Both factor sets agree up to the checked length."""

    kind: Literal["undecided"] = "undecided"
    checked_up_to: int


Certificate = Annotated[Intertwining | WordRefutation | Undecided, Field(discriminator="kind")]


class Provenance(_Frozen):
    """Where a catalog entry came from."""

    partition: LetterMapField
    residue: int
    epimorphism: SubstitutionField


class CatalogEntry(_Frozen):
    """One injective substitution of a factor or conjugacy list."""

    standard_form: SubstitutionField
    alphabet_size: int
    provenance: Provenance | None = None
    certificate: Certificate
    injective: bool
    primitive: bool
    aperiodic: Aperiodicity

    @property
    def key(self) -> str:
        """Return the deduplication key, the rules of the standard form."""
        return self.standard_form.rules()

    @property
    def sort_key(self) -> tuple[int, Word]:
        """Order entries by alphabet size, then characteristic word."""
        return self.standard_form.size, self.standard_form.characteristic_word


class FactorList(_Frozen):
    """Every injective substitution of the source's length generating a factor of its system."""

    source: SubstitutionField
    length: int
    entries: tuple[CatalogEntry, ...] = ()
    undecided: tuple[CatalogEntry, ...] = ()
    complete: bool = True
    tool_version: str = __version__
    options: dict[str, Any] = Field(default_factory=dict)

    def forms(self) -> set[str]:
        """Return the keys of the certified entries."""
        return {entry.key for entry in self.entries}

    def undecided_forms(self) -> set[str]:
        """Return the keys of the undecided entries."""
        return {entry.key for entry in self.undecided}


class ConjugacyList(FactorList):
    """The members of a factor list that generate a system conjugate to the source's."""


_CACHE_ADAPTER: TypeAdapter[dict[str, FactorList]] = TypeAdapter(dict[str, FactorList])


def cache_key(factor_source: Substitution) -> str:
    """Return the cache key ``<L>:<rules>`` of a standard form."""
    return f"{factor_source.length}:{factor_source.rules()}"


class Catalog:
    """Factor lists stored in one JSON file, keyed by length and standard form."""

    def __init__(self, path: Path) -> None:
        """Initialize the catalog.

        Args:
            path: The JSON file; created on the first store.

        """
        self.path = path
        self._lists: dict[str, FactorList] = {}
        if path.exists():
            self._lists = _CACHE_ADAPTER.validate_json(path.read_bytes())
            _logger.info("Loaded catalog", extra={"path": str(path), "lists": len(self._lists)})

    def __len__(self) -> int:
        """Return the number of stored lists."""
        return len(self._lists)

    def load(self, source: Substitution) -> FactorList | None:
        """Return the stored complete factor list of a standard form, if any."""
        found = self._lists.get(cache_key(source))
        return found if found is not None and found.complete else None

    def store(self, factor_list: FactorList) -> None:
        """Store a complete factor list and rewrite the file atomically."""
        if not factor_list.complete:
            return
        self._lists[cache_key(factor_list.source)] = factor_list
        payload = json.dumps(_CACHE_ADAPTER.dump_python(self._lists, mode="json"), indent=2, sort_keys=True)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        handle, temporary = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        with os.fdopen(handle, "w", encoding="utf-8") as stream:
            stream.write(payload)
        Path(temporary).replace(self.path)
        _logger.info("Stored factor list", extra={"path": str(self.path), "key": cache_key(factor_list.source)})
