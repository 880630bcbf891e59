
from django.test import SimpleTestCase
from hypothesis import HealthCheck, given, settings

from cubik import surface
from cubik.errors import ParseError
from cubik.syntax import (
    ONE,
    TRUTH,
    ZERO,
    App,
    Cond,
    Conj,
    ExtTy,
    HComp,
    IAnd,
    INeg,
    IOr,
    Lam,
    PApp,
    PartialEl,
    Pi,
    PLam,
    Sigma,
    TrivialPartial,
    Univ,
    Var,
    alpha_eq,
)
from cubik.tests.strategies import cofibrations, terms
from cubik.tests.utils import CORPUS


class ParseTests(SimpleTestCase):
    def test_application_is_left_nested(self):
        self.assertEqual(surface.parse_expr("f a b"), App(App(Var("f"), Var("a")), Var("b")))

    def test_lambda_binds_several_names(self):
        self.assertEqual(surface.parse_expr("\\x y. x"), Lam("x", Lam("y", Var("x"))))
        self.assertEqual(surface.parse_expr("\\lam x. x"), Lam("x", Var("x")))

    def test_telescope(self):
        t = surface.parse_expr("(A : U) (a b : A) -> A")
        self.assertEqual(t, Pi("A", Univ(), Pi("a", Var("A"), Pi("b", Var("A"), Var("A")))))

    def test_arrows_and_products(self):
        self.assertEqual(surface.parse_expr("A -> B -> C"), Pi("_", Var("A"), Pi("_", Var("B"), Var("C"))))
        self.assertEqual(surface.parse_expr("A * B -> C"), Pi("_", Sigma("_", Var("A"), Var("B")), Var("C")))

    def test_interval_precedence(self):
        t = surface.parse_expr("~x /\\ y \\/ z")
        self.assertEqual(t, IOr(IAnd(INeg(Var("x")), Var("y")), Var("z")))

    def test_path_application_collects_arguments(self):
        self.assertEqual(surface.parse_expr("p @ i @ 0"), PApp(Var("p"), (Var("i"), ZERO)))
        self.assertEqual(surface.parse_expr("f p @ ~i"), App(Var("f"), PApp(Var("p"), (INeg(Var("i")),))))

    def test_path_lambda(self):
        self.assertEqual(surface.parse_expr("\\^i j. a"), PLam(("i", "j"), Var("a")))

    def test_faces(self):
        t = surface.parse_expr("[| i = 0 \\/ j = 1 -> a | i = 1 /\\ j = 0 -> b |]")
        faces = (
            (Conj((Cond("i", 0),)), Var("a")),
            (Conj((Cond("j", 1),)), Var("a")),
            (Conj((Cond("i", 1), Cond("j", 0))), Var("b")),
        )
        self.assertEqual(t, PartialEl(faces))

    def test_trivial_and_empty_blocks(self):
        self.assertEqual(surface.parse_expr("[| a |]"), TrivialPartial(Var("a")))
        self.assertEqual(surface.parse_expr("[| |]"), PartialEl(()))
        self.assertEqual(surface.parse_expr("Ext (i) A [| a |]"), ExtTy(("i",), Var("A"), ((Conj(), Var("a")),)))

    def test_keyword_forms_take_atoms(self):
        t = surface.parse_expr("hcomp TOP A (\\j. [| a |]) a")
        self.assertEqual(t, HComp(Var("A"), Lam("j", TrivialPartial(Var("a"))), Var("a"), TRUTH))

    def test_spans(self):
        t = surface.parse_expr("f  ab")
        self.assertEqual(t.arg.span, (3, 5))
        self.assertEqual(t.span, (0, 5))

    def test_comments_are_skipped(self):
        self.assertEqual(surface.parse_expr("a -- trailing\n"), Var("a"))

    def test_corpus_files_parse(self):
        for path in sorted(CORPUS.glob("*.cub")):
            if path.name == "parse_error.cub":
                continue
            with self.subTest(path=path.name):
                source = surface.parse(path.read_text(), str(path))
                self.assertEqual(len(source.names()), len(set(source.names())))

class ParseErrorTests(SimpleTestCase):
    def assertParseError(self, text, line, col, expected):
        with self.assertRaises(ParseError) as cm:
            surface.parse(text)
        self.assertEqual(surface.line_col(text, cm.exception.span[0]), (line, col))
        self.assertTrue(set(expected) <= cm.exception.expected, cm.exception.expected)
        return cm.exception

    def test_missing_dot(self):
        error = self.assertParseError("def f (A : U) : A -> A\n  => \\x x\n", 3, 1, {"DOT"})
        self.assertEqual(error.message, "expected '.', found end of input")
        self.assertEqual(error.code, "E-PARSE")

    def test_missing_declaration_body(self):
        self.assertParseError("def f : U", 1, 10, {"FAT_ARROW"})

    def test_not_a_declaration(self):
        self.assertParseError("\n  f : U => U", 2, 3, {"def"})

    def test_bad_interval_constant(self):
        error = self.assertParseError("def f : I => 2", 1, 14, {"NUM"})
        self.assertIn("0 and 1", error.message)

    def test_unknown_character(self):
        with self.assertRaises(ParseError) as cm:
            surface.parse_expr("a $ b")
        self.assertEqual(cm.exception.span[0], 2)

    def test_trailing_input(self):
        with self.assertRaises(ParseError) as cm:
            surface.parse_expr("a )")
        self.assertIn("EOF", cm.exception.expected)

    def test_bad_face_reports_furthest_error(self):
        with self.assertRaises(ParseError) as cm:
            surface.parse_expr("[| i = 0 -> a | j b |]")
        self.assertEqual(cm.exception.span[0], 18)

class PrettyTests(SimpleTestCase):
    def test_non_dependent_function_type(self):
        self.assertEqual(surface.pretty(Pi("x", Var("A"), Var("B"))), "A -> B")
        self.assertEqual(surface.pretty(Pi("x", Var("A"), App(Var("B"), Var("x")))), "(x : A) -> B x")

    def test_minimal_parentheses(self):
        self.assertEqual(surface.pretty(App(Var("f"), App(Var("g"), Var("a")))), "f (g a)")
        self.assertEqual(surface.pretty(App(Lam("x", Var("x")), Var("a"))), "(\\x. x) a")
        self.assertEqual(surface.pretty(INeg(IOr(Var("i"), Var("j")))), "~(i \\/ j)")

    def test_path_application(self):
        self.assertEqual(surface.pretty(PApp(Var("p"), (INeg(Var("i")), ONE))), "p @ ~i @ 1")

    def test_cofibrations(self):
        self.assertEqual(surface.pretty_cofib(surface.parse_cofib("i = 0 \\/ i = 1")), "(i = 0 \\/ i = 1)")
        self.assertEqual(surface.pretty_cofib(surface.parse_cofib("(i = 0)")), "i = 0")
        self.assertEqual(surface.pretty_cofib(surface.parse_cofib("j = 1 /\\ i = 0")), "(i = 0 /\\ j = 1)")
        self.assertEqual(surface.pretty_cofib(surface.parse_cofib("i = 0 /\\ i = 1")), "BOT")

    @settings(deadline=None, max_examples=5_000, suppress_health_check=[HealthCheck.too_slow])
    @given(terms())
    def test_print_then_parse(self, t):
        text = surface.pretty(t)
        self.assertTrue(alpha_eq(surface.parse_expr(text), t), text)

    @given(cofibrations())
    def test_cofibration_print_then_parse(self, c):
        self.assertEqual(surface.parse_cofib(surface.pretty_cofib(c)), c)
