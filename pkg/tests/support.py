"""Shared fixtures for the test modules."""

from __future__ import annotations

import os
import random

from subconj.blocks import ProjectedSystem
from subconj.core import Substitution, Word, apply, is_primitive, power
from subconj.graphs import Edge, FactorGraph
from subconj.parsing import parse_partition, parse_substitution

THUE_MORSE = parse_substitution("1->12,2->21")
ROTATED_THUE_MORSE = parse_substitution("1->21,2->12")
TOEPLITZ = parse_substitution("1->12,2->11")
TOEPLITZ_BINARY = parse_substitution("0->01,1->00")
MEPHISTO_COVER = parse_substitution("1->123,2->124,3->341,4->431")
MEPHISTO_WALTZ = parse_substitution("1->112,2->221")
QUEFFELEC = parse_substitution("1->121,2->233,3->312")

THUE_MORSE_FACTORS = frozenset(
    {
        "1->12,2->21",
        "1->21,2->12",
        "1->21,2->11",
        "1->12,2->11",
        "1->12,2->31,3->21",
        "1->21,2->13,3->12",
        "1->23,2->13,3->12",
        "1->12,2->31,3->34,4->13",
        "1->23,2->14,3->21,4->12",
        "1->21,2->13,3->43,4->31",
        "1->23,2->13,3->41,4->31",
        "1->12,2->31,3->45,4->35,5->14",
        "1->21,2->13,3->45,4->51,5->43",
        "1->23,2->14,3->21,4->56,5->63,6->54",
        "1->23,2->13,3->41,4->56,5->46,6->25",
    }
)
TOEPLITZ_CLASS = frozenset({"1->12,2->11", "1->21,2->11", "1->23,2->13,3->12"})

RUN_SLOW = bool(os.environ.get("SUBCONJ_RUN_SLOW"))


def toeplitz_two_block(partition: str | None = None) -> ProjectedSystem:
    """Return the 2-block presentation of the binary Toeplitz substitution, optionally projected."""
    system = ProjectedSystem.block_presentation(TOEPLITZ_BINARY, 2)
    if partition is None:
        return system
    return system.with_projection(parse_partition(partition, system.generator.alphabet))


def doubled_toeplitz() -> ProjectedSystem:
    """Return the Toeplitz 2-block system with the letters 2 and 3 identified."""
    return toeplitz_two_block("{1}{2,3}")


def fixed_point_prefix(s: Substitution, length: int) -> Word:
    """Return a prefix of a one-sided fixed point of some power of s."""
    for p in range(1, s.size + 1):
        iterate = power(s, p)
        for letter in iterate.alphabet.letters:
            if iterate.image(letter)[0] == letter:
                word: Word = (letter,)
                while len(word) < length:
                    word = apply(iterate, word)
                return word[:length]
    msg = "No power of the substitution has a fixed point."
    raise AssertionError(msg)


def prefix_block_graph(p: ProjectedSystem, target_length: int, residue: int, prefix: int = 4096) -> FactorGraph:
    """Read the block graph off a long prefix of a fixed point."""
    x = p.project(fixed_point_prefix(p.generator, prefix))
    cuts = range(residue, len(x) - 2 * target_length + 1, target_length)
    vertices: set[Word] = set()
    edges: set[Edge] = set()
    for start in cuts:
        first = x[start : start + target_length]
        second = x[start + target_length : start + 2 * target_length]
        vertices.update((first, second))
        edges.add((first, second))
    return FactorGraph.build(p.target, vertices, edges)


def random_primitive(rng: random.Random, max_size: int = 4, max_length: int = 3) -> Substitution:
    """Draw a primitive substitution with 2..max_size letters and length 2..max_length."""
    while True:
        size = rng.randint(2, max_size)
        length = rng.randint(2, max_length)
        s = Substitution.from_images(
            tuple(rng.randint(1, size) for _ in range(length)) for _ in range(size)
        )
        if is_primitive(s):
            return s
