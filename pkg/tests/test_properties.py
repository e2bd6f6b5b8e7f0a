import random
import unittest

from subconj.blocks import ProjectedSystem, compose_lags, hat_substitution, iterated_lag, max_lag
from subconj.core import (
    LetterMap,
    Substitution,
    amalgamate,
    apply,
    intertwines,
    is_aperiodic,
    is_primitive,
    language,
    power,
    relabel,
    standard_form,
)
from subconj.epimorph import brute_force_epis, enumerate_epis
from subconj.graphs import block_graph, letter_graph
from subconj.procedures import (
    PRESENTATION_BLOCK_LENGTH,
    commuting_permutations,
    factor_list,
    partition_stream,
    reduced_form,
)
from subconj.settings import Settings
from subconj.util_classes import Aperiodicity, UnsupportedError
from tests.support import random_primitive

SAMPLES = 200


def _samples(seed: int) -> list[Substitution]:
    rng = random.Random(seed)
    return [random_primitive(rng) for _ in range(SAMPLES)]


def _small_aperiodic(seed: int, count: int) -> list[Substitution]:
    rng = random.Random(seed)
    found: dict[str, Substitution] = {}
    for _ in range(SAMPLES):
        s = random_primitive(rng, max_size=2, max_length=3)
        if is_aperiodic(s, Settings().aperiodicity_depth(s.length, s.size)) is Aperiodicity.PERIODIC:
            continue
        base = reduced_form(s)
        if base.size > 1 and hat_substitution(base, PRESENTATION_BLOCK_LENGTH, 0).size <= 6:
            found.setdefault(base.rules(), s)
        if len(found) == count:
            break
    return list(found.values())


def _random_map(rng: random.Random, s: Substitution) -> LetterMap:
    images = [rng.randint(1, s.size) for _ in s.alphabet.letters]
    rank = {image: index for index, image in enumerate(sorted(set(images)), start=1)}
    return LetterMap(s.alphabet, tuple(rank[image] for image in images))


class TestProperties(unittest.TestCase):
    def test_intertwining_survives_powers(self) -> None:
        rng = random.Random(11)
        checked = 0
        for s in _samples(1):
            pi = _random_map(rng, s)
            target = amalgamate(s, pi)
            if target is None:
                continue
            checked += 1
            for n in range(1, 6):
                self.assertTrue(intertwines(pi, power(s, n), power(target, n)), msg=f"{s} {pi} n={n}")
        self.assertGreater(checked, 0)

    def test_lag_composition(self) -> None:
        rng = random.Random(12)
        for s in _samples(2):
            outer = rng.randint(0, max_lag(s.length, 2))
            inner = rng.randint(0, max_lag(s.length, 2))
            composed = Substitution.from_images(
                apply(hat_substitution(s, 2, outer), image) for image in hat_substitution(s, 2, inner).images
            )
            expected = hat_substitution(power(s, 2), 2, compose_lags(outer, inner, s.length))
            self.assertEqual(composed, expected, msg=f"{s} M={outer} M'={inner}")

    def test_iterated_lag(self) -> None:
        for s in _samples(3)[:50]:
            lag = max_lag(s.length, 2)
            expected = hat_substitution(power(s, 3), 2, iterated_lag(lag, s.length, 3))
            self.assertEqual(power(hat_substitution(s, 2, lag), 3), expected, msg=str(s))

    def test_first_letters_of_blocks_stay_in_base_language(self) -> None:
        rng = random.Random(14)
        for s in _samples(4):
            hat = hat_substitution(s, 2, rng.randint(0, max_lag(s.length, 2)))
            if not is_primitive(hat):
                continue
            first_letter = LetterMap(hat.alphabet, tuple(block[0] for block in sorted(language(s, 2))))
            for k in (1, 2, 5, 12):
                projected = {first_letter.project(word) for word in language(hat, k)}
                self.assertLessEqual(projected, language(s, k), msg=f"{s} k={k}")

    def test_pruned_search_matches_brute_force(self) -> None:
        for s in _samples(5):
            system = ProjectedSystem.identity(s)
            g1 = letter_graph(system)
            for residue in range(s.length):
                glm = block_graph(system, s.length, residue)
                try:
                    expected = brute_force_epis(g1, glm, budget=200_000)
                except UnsupportedError:
                    continue
                self.assertEqual(enumerate_epis(g1, glm)[0], expected, msg=f"{s} M={residue}")
                self.assertEqual(enumerate_epis(g1, glm, pruning=False)[0], expected, msg=f"{s} M={residue}")

    def test_standard_form_is_a_class_invariant(self) -> None:
        rng = random.Random(16)
        for s in _samples(6):
            form, permutation = standard_form(s)
            self.assertEqual(relabel(s, permutation), form)
            self.assertEqual(standard_form(form)[0], form)
            shuffled = list(s.alphabet.letters)
            rng.shuffle(shuffled)
            self.assertEqual(standard_form(relabel(s, shuffled))[0], form, msg=f"{s} {shuffled}")

    def test_symmetry_reduction_keeps_every_factor(self) -> None:
        samples = _small_aperiodic(8, 4)
        self.assertGreater(len(samples), 0)
        for s in samples:
            with self.subTest(s=str(s)):
                reduced = factor_list(s, Settings(symmetry=True))
                full = factor_list(s, Settings(symmetry=False))
                self.assertEqual(reduced.forms(), full.forms())
                self.assertEqual(reduced.undecided_forms(), full.undecided_forms())

    def test_symmetry_reduction_covers_every_partition(self) -> None:
        for s in _samples(7):
            group = commuting_permutations(s)
            covered = set()
            for pi in partition_stream(s.alphabet, group):
                for permutation in group:
                    moved = tuple(pi(permutation.index(letter) + 1) for letter in s.alphabet.letters)
                    covered.add(LetterMap(s.alphabet, moved).canonical().images)
            self.assertEqual(covered, {pi.images for pi in partition_stream(s.alphabet)}, msg=str(s))
