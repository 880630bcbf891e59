import itertools

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from cubik import cofib, evaluator, tyck
from cubik.conversion import convert
from cubik.errors import InternalError
from cubik.syntax import (
    ABSURD,
    ONE,
    TRUTH,
    ZERO,
    App,
    Coe,
    Cond,
    Conj,
    HComp,
    IAnd,
    InS,
    Lam,
    OutS,
    Pair,
    PApp,
    PartialEl,
    PLam,
    TrivialPartial,
    Var,
    alpha_eq,
    subst,
)
from cubik.tests.strategies import INTERVAL_NAMES, faces, interval_substitutions
from cubik.tests.utils import context, load, parameters, term

PATH = "p : Ext (i) A [| i = 0 -> a | i = 1 -> b |]"


def _at_vertex(value, vertex):
    return vertex[value.name] if isinstance(value, Var) else value.value


def _holding(faces, point):
    """Bodies of the faces whose conditions all hold at ``point``."""
    return {body for theta, body in faces if all(point[k.var] == k.value for k in theta.conds)}


class PartialElementTests(SimpleTestCase):
    def setUp(self):
        self.faces = term("[| i = 0 -> a | i = 1 /\\ j = 0 -> b |]").faces

    def test_satisfied_face_wins(self):
        self.assertEqual(evaluator.reduce_partial(self.faces, {"i": ZERO}), TrivialPartial(Var("a")))

    def test_contradicted_faces_are_dropped(self):
        self.assertEqual(evaluator.reduce_partial(self.faces, {"j": ONE}), PartialEl(self.faces[:1]))
        self.assertEqual(evaluator.reduce_partial(self.faces[1:], {"i": ZERO}), PartialEl(()))

    def test_other_faces_are_renamed(self):
        reduced = evaluator.reduce_partial(self.faces[:1], {"i": Var("k")})
        self.assertEqual(reduced, term("[| k = 0 -> a |]"))

    def test_empty_condition_is_trivial(self):
        ctx = context("a : A")
        self.assertEqual(evaluator.whnf(ctx, PartialEl(((Conj(), Var("a")),))), TrivialPartial(Var("a")))

    def test_reduction_agrees_with_vertices(self):
        conds = [Cond(name, value) for name in INTERVAL_NAMES for value in (0, 1)]
        conjs = [Conj((k,)) for k in conds]
        conjs += [Conj((k, l)) for k, l in itertools.combinations(conds, 2) if k.var != l.var]
        element_lists = [((theta, Var("a")),) for theta in conjs]
        element_lists += [((p, Var("a")), (q, Var("b"))) for p, q in itertools.combinations(conjs, 2)]
        choices = [(ZERO, ONE, Var(name), Var("w")) for name in INTERVAL_NAMES]
        vertices = [dict(zip(INTERVAL_NAMES + ("w",), bits)) for bits in itertools.product((0, 1), repeat=4)]
        for values in itertools.product(*choices):
            s = dict(zip(INTERVAL_NAMES, values))
            for element in element_lists:
                reduced = evaluator.reduce_partial(element, s)
                for vertex in vertices:
                    moved = {name: _at_vertex(value, vertex) for name, value in s.items()}
                    before = _holding(element, {**vertex, **moved})
                    if isinstance(reduced, TrivialPartial):
                        self.assertIn(reduced.body, before)
                    else:
                        self.assertEqual(_holding(reduced.faces, vertex), before)

    @given(faces(st.sampled_from((Var("a"), Var("b")))), interval_substitutions(), interval_substitutions())
    @settings(max_examples=1_000)
    def test_reduction_commutes_with_composition(self, element, first, second):
        composed = {name: subst(value, second) for name, value in first.items()}
        composed.update((name, value) for name, value in second.items() if name not in first)
        stepwise = evaluator.reduce_partial(element, first)
        if isinstance(stepwise, PartialEl):
            stepwise = evaluator.reduce_partial(stepwise.faces, second)
        direct = evaluator.reduce_partial(element, composed)
        if isinstance(direct, TrivialPartial):
            self.assertIsInstance(stepwise, TrivialPartial)
        else:
            self.assertEqual(stepwise, direct)


class WeakHeadTests(SimpleTestCase):
    def test_beta(self):
        self.assertEqual(evaluator.whnf(context(), term("(\\x. x) a")), Var("a"))

    def test_path_beta_normalizes_interval_arguments(self):
        self.assertEqual(evaluator.whnf(context(), term("(\\^i. f i) @ (~~j /\\ 1)")), term("f j"))

    def test_projections(self):
        self.assertEqual(evaluator.whnf(context(), term("snd (a, b)")), Var("b"))

    def test_boundary_of_a_path_variable(self):
        ctx = context("A : U", "a b : A", PATH, "j : I")
        self.assertEqual(evaluator.whnf(ctx, term("p @ 0")), Var("a"))
        self.assertEqual(evaluator.whnf(ctx, term("p @ ~0")), Var("b"))
        self.assertEqual(evaluator.whnf(ctx, term("p @ j")), term("p @ j"))

    def test_subtype_cancellation(self):
        ctx = context("A : U", "u : A", "i : I", "s : Sub A (i = 1) [| i = 1 -> u |]", "t : Sub A TOP [| u |]")
        self.assertEqual(evaluator.whnf(ctx, term("outS TOP (inS TOP u)")), Var("u"))
        self.assertEqual(evaluator.whnf(ctx, term("inS (i = 1) (outS (i = 1) s)")), Var("s"))
        self.assertEqual(evaluator.whnf(ctx, term("outS TOP t")), Var("u"))
        self.assertEqual(evaluator.whnf(ctx, term("outS (i = 1) s")), term("outS (i = 1) s"))

    def test_definitions_unfold(self):
        _, ctx, _ = load("sigma.cub")
        ctx = context("A B : U", "a : A", "b : B", ctx=ctx)
        self.assertEqual(evaluator.whnf(ctx, term("fst (swap A B (a, b))")), Var("b"))

    def test_steps_are_traced(self):
        with self.assertLogs("cubik.evaluator", level="DEBUG") as cm:
            evaluator.whnf(context(), term("(\\x. x) a"))
        self.assertEqual(cm.output, ["DEBUG:cubik.evaluator:beta: (\\x. x) a ~> a"])


class CoercionTests(SimpleTestCase):
    def setUp(self):
        self.ctx = context("A : I -> U", "u : A 0", "i : I")

    def test_frozen_everywhere_is_identity(self):
        self.assertEqual(evaluator.whnf(self.ctx, term("coe TOP (\\^k. A k) u")), Var("u"))

    def test_neutral_line_is_stuck(self):
        result = evaluator.whnf(self.ctx, term("coe BOT A u"))
        self.assertIsInstance(result, App)
        self.assertEqual(result.fn, Coe(Var("A"), ABSURD))

    def test_restriction_entailing_the_freeze(self):
        restricted = self.ctx.under(cofib.cond("i", 1))
        self.assertEqual(evaluator.whnf(restricted, term("coe (i = 1) A u")), Var("u"))
        self.assertNotEqual(evaluator.whnf(self.ctx, term("coe (i = 1) A u")), Var("u"))

    def test_function_types_coerce_pointwise(self):
        ctx = context("A B : I -> U", "f : A 0 -> B 0")
        result = evaluator.whnf(ctx, term("coe BOT (\\k. A k -> B k) f"))
        self.assertIsInstance(result, Lam)
        tyck.check(ctx, result, term("A 1 -> B 1"))

    def test_pairs_coerce_componentwise(self):
        ctx = context("A B : I -> U", "p : A 0 * B 0")
        result = evaluator.whnf(ctx, term("coe BOT (\\k. A k * B k) p"))
        self.assertEqual(result.fst, term("coe BOT (\\k. A k) (fst p)"))
        tyck.check(ctx, result, term("A 1 * B 1"))

    def test_fill_endpoints(self):
        fill = evaluator.trans_fill(self.ctx, Var("A"), ABSURD, Var("u"))
        self.assertEqual(evaluator.normalize(self.ctx, PApp(fill, (ZERO,))), Var("u"))
        at_one = evaluator.normalize(self.ctx, PApp(fill, (ONE,)))
        self.assertTrue(alpha_eq(at_one, term("coe BOT (\\z. A z) u")))

    def test_forward_from_one(self):
        ctx = context("A : I -> U", "u : A 1")
        forward = evaluator.forward(ctx, Var("A"), ONE)
        self.assertEqual(forward.cofib, TRUTH)
        self.assertEqual(evaluator.normalize(ctx, App(forward, Var("u"))), Var("u"))

    def test_extension_types_coerce_by_composition(self):
        ctx = context(
            "A : I -> U",
            "a b : (k : I) -> A k",
            "p : Ext (i) (A 0) [| i = 0 -> a 0 | i = 1 -> b 0 |]",
        )
        t = term("coe BOT (\\k. Ext (i) (A k) [| i = 0 -> a k | i = 1 -> b k |]) p")
        ty = tyck.infer(ctx, t)
        result = evaluator.whnf(ctx, t)
        self.assertIsInstance(result, PLam)
        tyck.check(ctx, result, ty)
        self.assertEqual(evaluator.normalize(ctx, PApp(result, (ZERO,))), term("a 1"))
        self.assertEqual(evaluator.normalize(ctx, PApp(result, (ONE,))), term("b 1"))


class FreezeTests(SimpleTestCase):
    def setUp(self):
        self.ctx = context("L : I -> U", "i : I")

    def test_constant_line_freezes_everywhere(self):
        ctx = context("B : U")
        self.assertTrue(evaluator.freezes(ctx, term("\\k. B"), TRUTH))

    def test_moving_line(self):
        self.assertFalse(evaluator.freezes(self.ctx, Var("L"), TRUTH))
        self.assertTrue(evaluator.freezes(self.ctx, Var("L"), ABSURD))

    def test_line_constant_on_a_face(self):
        line = Lam("k", App(Var("L"), IAnd(Var("k"), Var("i"))))
        self.assertTrue(evaluator.freezes(self.ctx, line, cofib.cond("i", 0)))
        self.assertFalse(evaluator.freezes(self.ctx, line, cofib.cond("i", 1)))


class CompositionTests(SimpleTestCase):
    def test_absurd_walls(self):
        ctx = context("A : U", "a : A")
        self.assertEqual(evaluator.whnf(ctx, term("hcomp BOT A (\\j. [| |]) a")), InS(ABSURD, Var("a")))

    def test_total_walls(self):
        ctx = context("A : U", "a b : A")
        self.assertEqual(evaluator.whnf(ctx, term("hcomp TOP A (\\j. [| b |]) a")), InS(TRUTH, Var("b")))
        self.assertEqual(evaluator.whnf(ctx, term("outS TOP (hcomp TOP A (\\j. [| b |]) a)")), Var("b"))

    def test_neutral_carrier_is_stuck(self):
        ctx = context("A : U", "a : A", "i : I")
        t = term("hcomp (i = 0) A (\\j. [| i = 0 -> a |]) a")
        self.assertEqual(evaluator.whnf(ctx, t), t)

    def test_function_composition_goes_pointwise(self):
        ctx = context("A B : U", "f : A -> B", "i : I")
        result = evaluator.whnf(ctx, term("hcomp (i = 0) (A -> B) (\\j. [| i = 0 -> f |]) f"))
        self.assertIsInstance(result, InS)
        self.assertIsInstance(result.body, Lam)
        self.assertIsInstance(result.body.body, OutS)
        self.assertIsInstance(result.body.body.body, HComp)

    def test_heterogeneous_composition_forwards_the_floor(self):
        ctx = context("A : I -> U", "u : A 0", "i : I")
        walls = term("\\j. [| i = 0 -> coe BOT (\\k. A (k /\\ j)) u |]")
        result = evaluator.comp(ctx, Var("A"), cofib.cond("i", 0), walls, Var("u"))
        self.assertIsInstance(result, OutS)
        self.assertEqual(result.body.floor, App(evaluator.forward(ctx, Var("A"), ZERO), Var("u")))

    def test_walls_must_be_partial(self):
        ctx = context("A : U", "a : A", "i : I", "w : I -> Partial (i = 0) A")
        with self.assertRaises(InternalError):
            evaluator.comp(ctx, term("\\k. A"), cofib.cond("i", 0), Var("w"), Var("a"))

    def test_pair_composition_goes_componentwise(self):
        ctx = context("A : U", "B : A -> U", "u : (x : A) * B x", "i : I")
        t = term("hcomp (i = 0) ((x : A) * B x) (\\j. [| i = 0 -> u |]) u")
        result = evaluator.whnf(ctx, t)
        self.assertIsInstance(result, InS)
        self.assertIsInstance(result.body, Pair)
        tyck.check(ctx, result, tyck.infer(ctx, t))
        on_the_face = subst(result.body.fst, {"i": ZERO})
        self.assertEqual(evaluator.normalize(ctx, on_the_face), term("fst u"))

    def test_extension_composition_keeps_the_boundary(self):
        ctx = context("A : U", "a b : A", "p : Ext (k) A [| k = 0 -> a | k = 1 -> b |]", "i : I")
        t = term("hcomp (i = 0) (Ext (k) A [| k = 0 -> a | k = 1 -> b |]) (\\j. [| i = 0 -> p |]) p")
        result = evaluator.whnf(ctx, t)
        self.assertIsInstance(result, InS)
        self.assertIsInstance(result.body, PLam)
        tyck.check(ctx, result, tyck.infer(ctx, t))
        self.assertEqual(evaluator.normalize(ctx, PApp(result.body, (ZERO,))), Var("a"))

    def test_constant_line_without_frozen_forwards_stays_stuck(self):
        ctx = context("A : U", "a : A", "j : I")
        result = evaluator.comp(ctx, term("\\k. A"), cofib.cond("j", 0), term("\\k. [| j = 0 -> a |]"), Var("a"))
        stuck = evaluator.whnf(ctx, result)
        self.assertIsInstance(stuck, OutS)
        self.assertIsInstance(stuck.body, HComp)
        homogeneous = term("outS (j = 0) (hcomp (j = 0) A (\\k. [| j = 0 -> a |]) a)")
        self.assertFalse(convert(ctx, result, homogeneous, Var("A")))

    def test_constant_line_with_frozen_forwards_is_homogeneous(self):
        ctx = context("A : U", "a b : A", PATH)
        result = evaluator.comp(ctx, term("\\k. A"), TRUTH, term("\\k. [| p @ k |]"), Var("a"))
        homogeneous = term("outS TOP (hcomp TOP A (\\k. [| p @ k |]) a)")
        self.assertEqual(evaluator.whnf(ctx, result), Var("b"))
        self.assertEqual(evaluator.whnf(ctx, homogeneous), Var("b"))
        self.assertTrue(convert(ctx, result, homogeneous, Var("A")))


class SubjectReductionTests(SimpleTestCase):
    """Normal forms of checked definitions still check at the declared type."""

    def test_corpus(self):
        for name in ("paths.cub", "partial.cub", "subtypes.cub", "kan.cub", "sigma.cub"):
            source, ctx, results = load(name)
            self.assertEqual([error for _, error in results], [None] * len(results))
            for declaration in source.declarations:
                with self.subTest(file=name, definition=declaration.name):
                    inner = parameters(ctx, declaration)
                    tyck.check(inner, evaluator.normalize(inner, declaration.body), declaration.type)
