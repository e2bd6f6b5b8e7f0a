import unittest

from subconj.blocks import ProjectedSystem
from subconj.core import Alphabet
from subconj.graphs import FactorGraph, block_graph, cycle_census, cycle_vertices, letter_graph, loop_count, loops
from subconj.util_classes import InvalidInputError, UnsupportedError
from tests.support import THUE_MORSE, doubled_toeplitz, prefix_block_graph, toeplitz_two_block


class TestLetterGraph(unittest.TestCase):
    def test_thue_morse_letters_form_complete_graph(self) -> None:
        g1 = letter_graph(ProjectedSystem.identity(THUE_MORSE))
        self.assertEqual(g1.vertices, ((1,), (2,)))
        self.assertEqual(len(g1.edges), 4)

    def test_toeplitz_two_block_letters(self) -> None:
        g1 = letter_graph(toeplitz_two_block())
        self.assertEqual(g1.vertices, ((1,), (2,), (3,)))
        self.assertEqual(g1.edges, frozenset({((1,), (1,)), ((1,), (2,)), ((2,), (3,)), ((3,), (2,)), ((3,), (1,))}))

    def test_thue_morse_three_blocks(self) -> None:
        g1 = letter_graph(ProjectedSystem.block_presentation(THUE_MORSE, 3))
        self.assertEqual(len(g1.vertices), 6)
        self.assertEqual(len(g1.edges), 10)
        self.assertIn(((2,), (5,)), g1.edges)
        self.assertIn(((5,), (2,)), g1.edges)


class TestBlockGraph(unittest.TestCase):
    def test_toeplitz_residue_zero(self) -> None:
        g = block_graph(toeplitz_two_block(), 2, 0)
        self.assertEqual(g.vertices, ((1, 1), (2, 3)))
        self.assertEqual(g.edges, frozenset({((2, 3), (1, 1)), ((1, 1), (2, 3)), ((2, 3), (2, 3))}))
        self.assertEqual(loops(g), ((2, 3),))

    def test_toeplitz_residue_one(self) -> None:
        g = block_graph(toeplitz_two_block(), 2, 1)
        self.assertEqual(g.vertices, ((1, 2), (3, 1), (3, 2)))
        self.assertEqual(
            g.edges,
            frozenset({((3, 1), (1, 2)), ((1, 2), (3, 2)), ((3, 2), (3, 2)), ((3, 2), (3, 1)), ((1, 2), (3, 1))}),
        )

    def test_thue_morse_odd_residue_has_no_loops(self) -> None:
        g = block_graph(ProjectedSystem.identity(THUE_MORSE), 2, 1)
        self.assertEqual(len(g.vertices), 4)
        self.assertEqual(len(g.edges), 6)
        self.assertEqual(loop_count(g), 0)

    def test_agrees_with_fixed_point_prefix(self) -> None:
        for system in (toeplitz_two_block(), doubled_toeplitz(), ProjectedSystem.block_presentation(THUE_MORSE, 3)):
            for target_length in (2, 4):
                for residue in range(target_length):
                    with self.subTest(system=system.projection.partition_string(), L=target_length, M=residue):
                        self.assertEqual(
                            block_graph(system, target_length, residue),
                            prefix_block_graph(system, target_length, residue),
                        )

    def test_doubled_toeplitz_has_one_loop(self) -> None:
        system = doubled_toeplitz()
        for n in range(1, 4):
            for residue in range(2**n):
                with self.subTest(n=n, M=residue):
                    self.assertEqual(loop_count(block_graph(system, 2**n, residue)), 1)

    def test_length_must_be_a_power(self) -> None:
        with self.assertRaises(UnsupportedError):
            block_graph(toeplitz_two_block(), 3, 0)
        with self.assertRaises(UnsupportedError):
            block_graph(toeplitz_two_block(), 1, 0)

    def test_residue_range(self) -> None:
        with self.assertRaises(InvalidInputError):
            block_graph(toeplitz_two_block(), 2, 2)


class TestCycles(unittest.TestCase):
    def test_toeplitz_cycles(self) -> None:
        g1 = letter_graph(toeplitz_two_block())
        self.assertEqual(cycle_census(g1, 2), [((2,), (3,))])
        self.assertEqual(cycle_census(g1, 3), [((1,), (2,), (3,))])
        self.assertEqual(cycle_vertices(g1, 2), frozenset({(2,), (3,)}))

    def test_only_short_cycles(self) -> None:
        with self.assertRaises(InvalidInputError):
            cycle_census(letter_graph(toeplitz_two_block()), 4)


class TestExport(unittest.TestCase):
    def test_json_uses_vertex_indices(self) -> None:
        data = block_graph(toeplitz_two_block(), 2, 0).to_json()
        self.assertEqual(data, {"vertices": ["11", "23"], "edges": [[0, 1], [1, 0], [1, 1]]})

    def test_dot(self) -> None:
        dot = block_graph(toeplitz_two_block(), 2, 0).to_dot("G2_0")
        self.assertEqual(
            dot.splitlines(),
            ["digraph G2_0 {", '  "11";', '  "23";', '  "11" -> "23";', '  "23" -> "11";', '  "23" -> "23";', "}"],
        )

    def test_digraph_view(self) -> None:
        digraph = letter_graph(toeplitz_two_block()).as_digraph()
        self.assertEqual(digraph.number_of_nodes(), 3)
        self.assertEqual(digraph.number_of_edges(), 5)

    def test_validation(self) -> None:
        with self.assertRaises(InvalidInputError):
            FactorGraph(Alphabet.canonical(2), ((2,), (1,)), frozenset())
        with self.assertRaises(InvalidInputError):
            FactorGraph.build(Alphabet.canonical(2), {(1,)}, {((1,), (2,))})
