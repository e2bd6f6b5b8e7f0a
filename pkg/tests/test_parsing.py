import unittest

from subconj.core import Alphabet
from subconj.parsing import format_substitution, parse_partition, parse_substitution, parse_word
from subconj.util_classes import InvalidInputError, ParseError


class TestParseSubstitution(unittest.TestCase):
    def test_rules(self) -> None:
        s = parse_substitution("1->1233,2->2313,3->3123")
        self.assertEqual(s.size, 3)
        self.assertEqual(s.length, 4)
        self.assertEqual(s.image(2), (2, 3, 1, 3))

    def test_alphabet_follows_left_hand_sides(self) -> None:
        s = parse_substitution("b->ba a->ab")
        self.assertEqual(s.alphabet.names, ("b", "a"))
        self.assertEqual(s.image(1), (1, 2))

    def test_rules_over_several_lines(self) -> None:
        s = parse_substitution("1->12,\n2->21\n")
        self.assertEqual(format_substitution(s), "1->12,2->21")

    def test_length_mismatch(self) -> None:
        with self.assertRaises(ParseError) as raised:
            parse_substitution("1->12,2->1")
        self.assertEqual(raised.exception.token, "1")
        self.assertEqual(raised.exception.column, 10)

    def test_duplicate_left_hand_side(self) -> None:
        with self.assertRaises(ParseError) as raised:
            parse_substitution("1->12,1->21")
        self.assertEqual(raised.exception.column, 7)

    def test_undeclared_symbol_position(self) -> None:
        with self.assertRaises(ParseError) as raised:
            parse_substitution("1->12\n2->2x")
        self.assertEqual((raised.exception.line, raised.exception.column), (2, 5))
        self.assertEqual(raised.exception.token, "x")

    def test_malformed_rules(self) -> None:
        for text in ("", "1-12", "12->1", "1->", "1->2->1"):
            with self.subTest(text=text), self.assertRaises(ParseError):
                parse_substitution(text)

    def test_parse_error_is_invalid_input(self) -> None:
        with self.assertRaises(InvalidInputError):
            parse_substitution("1=>1")


class TestParseWord(unittest.TestCase):
    def test_word(self) -> None:
        self.assertEqual(parse_word("0110", Alphabet(2, ("0", "1"))), (1, 2, 2, 1))

    def test_foreign_symbol(self) -> None:
        with self.assertRaises(ParseError):
            parse_word("012", Alphabet(2, ("0", "1")))


class TestParsePartition(unittest.TestCase):
    def test_partition(self) -> None:
        pi = parse_partition("{1,4,5}{2,3}{6}")
        self.assertEqual(pi.images, (1, 2, 2, 1, 1, 3))
        self.assertEqual(pi.source.size, 6)

    def test_partition_with_spaces(self) -> None:
        self.assertEqual(parse_partition(" {2} {1, 3} ").images, (1, 2, 1))

    def test_partition_of_given_alphabet(self) -> None:
        with self.assertRaises(InvalidInputError):
            parse_partition("{1,2}", Alphabet.canonical(3))

    def test_overlapping_classes(self) -> None:
        with self.assertRaises(InvalidInputError):
            parse_partition("{1,2}{2,3}")

    def test_malformed_partitions(self) -> None:
        for text in ("", "1,2", "{1,a}", "{1}{2"):
            with self.subTest(text=text), self.assertRaises(ParseError):
                parse_partition(text)
