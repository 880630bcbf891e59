"""
Bidirectional type checking.

Introduction forms (functions, paths, pairs, partial elements, ``inS``) are
checked against a type; variables, eliminators and the Kan operations infer
their type. Switching from inference to checking goes through conversion.

Judgments under a face are checked by substituting the face into the
context, the term and the type, never by carrying the face around.
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Tuple

from cubik import cofib
from cubik.context import Binding, Context, Definition
from cubik.conversion import conv_under_conj, convert
from cubik.errors import (
    BoundaryMismatch,
    CannotInfer,
    DuplicateDefinition,
    FaceDisagreement,
    FloorWallDisagreement,
    FreezeViolation,
    IllFormedCofibration,
    KernelError,
    NotAType,
    NotFibrant,
    TypeMismatch,
    UnboundVariable,
    UnsupportedCoercion,
)
from cubik.evaluator import ceiling_faces, freezes, open_binder, open_binders, whnf
from cubik.surface import pretty, pretty_cofib, pretty_conj
from cubik.syntax import (
    INTERVAL,
    ONE,
    UNIV,
    ZERO,
    Absurd,
    App,
    Coe,
    ExtTy,
    Fst,
    HComp,
    IAnd,
    IConst,
    INeg,
    InS,
    Interval,
    IOr,
    Lam,
    OutS,
    PApp,
    Pair,
    PartialEl,
    PartialTy,
    Pi,
    PLam,
    Sigma,
    Snd,
    SubTy,
    Term,
    TrivialPartial,
    Univ,
    Var,
    free_names,
    fresh,
    subst,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Binding",
    "Context",
    "Definition",
    "check",
    "check_declaration",
    "check_file",
    "check_partial",
    "check_type",
    "conv_under_conj",
    "convert",
    "fibrant",
    "infer",
    "open_telescope",
]


def _attach(error, t):
    if error.span is None:
        error.span = t.span
    return error


def _mismatch(expected, t, what):
    return TypeMismatch(f"expected a term of type {pretty(expected)}, but {what} {pretty(t)} was given")


def fibrant(ty: Term) -> bool:
    """Pretypes (the interval, partial types and subtypes) have no Kan operations."""
    return not isinstance(ty, (Interval, PartialTy, SubTy))


def check_cofib(ctx: Context, c, span=None):
    if not cofib.well_formed(ctx.psi, c):
        names = ", ".join(sorted(cofib.variables(c) - set(ctx.psi)))
        raise IllFormedCofibration(
            f"cofibration {pretty_cofib(c)} mentions {names}, which is not an interval variable in scope",
            span=span,
        )


def check_type(ctx: Context, ty: Term) -> Term:
    """Check that ``ty`` is a type and return it."""
    try:
        _check_type(ctx, ty)
    except KernelError as e:
        raise _attach(e, ty)
    return ty


def _check_type(ctx, ty):
    match ty:
        case Univ() | Interval():
            return
        case Pi(x, dom, cod) | Sigma(x, dom, cod):
            check_type(ctx, dom)
            x, cod = open_binder(ctx, x, cod)
            check_type(ctx.extend(x, dom), cod)
        case PartialTy(c, carrier):
            check_cofib(ctx, c, ty.span)
            check_type(ctx, carrier)
        case ExtTy(binders, carrier, faces):
            names, renaming = open_binders(ctx, binders, carrier, PartialEl(faces))
            carrier = subst(carrier, renaming)
            faces = subst(PartialEl(faces), renaming).faces
            bound = set(names)
            for theta, _ in faces:
                outside = cofib.variables(cofib.of_conj(theta)) - bound
                if outside:
                    raise IllFormedCofibration(
                        f"faces of an extension type may only mention its own binders, not {', '.join(sorted(outside))}"
                    )
            inner = ctx.extend_intervals(names)
            check_type(inner, carrier)
            check_partial(inner, faces, carrier)
        case SubTy(carrier, c, faces):
            check_type(ctx, carrier)
            check_cofib(ctx, c, ty.span)
            covered = check_partial(ctx, faces, carrier)
            if not cofib.cofib_equiv(covered, c):
                raise TypeMismatch(
                    f"the faces of this subtype cover {pretty_cofib(covered)}, but its cofibration is {pretty_cofib(c)}"
                )
        case _:
            sort = whnf(ctx, infer(ctx, ty))
            if not isinstance(sort, Univ):
                raise NotAType(f"{pretty(ty)} is not a type; it has type {pretty(sort)}")


def check(ctx: Context, t: Term, ty: Term) -> None:
    try:
        _check(ctx, t, ty)
    except KernelError as e:
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("rejected %s : %s", pretty(t), pretty(ty))
        raise _attach(e, t)


def _check(ctx, t, ty):
    expected = whnf(ctx, ty)
    match t, expected:
        case Lam(x, body), Pi(y, dom, cod):
            x, body = open_binder(ctx, x, body)
            check(ctx.extend(x, dom), body, subst(cod, {y: Var(x)}))

        case PLam((x,), body), Pi(y, Interval(), cod):
            x, body = open_binder(ctx, x, body)
            check(ctx.extend(x, INTERVAL), body, subst(cod, {y: Var(x)}))

        case PLam(xs, body), ExtTy(ys, carrier, faces) if len(xs) == len(ys):
            names, renaming = open_binders(ctx, xs, body)
            body = subst(body, renaming)
            points = dict(zip(ys, (Var(n) for n in names)))
            carrier = subst(carrier, points)
            faces = subst(PartialEl(faces), points).faces
            inner = ctx.extend_intervals(names)
            check(inner, body, carrier)
            for theta, u in faces:
                if not conv_under_conj(inner, theta, body, u, carrier):
                    raise BoundaryMismatch(
                        f"the path does not agree with {pretty(u)} on the face {pretty_conj(theta)}",
                        substitution=cofib.conj_to_subst(theta),
                    )

        case Pair(a, b), Sigma(y, dom, cod):
            check(ctx, a, dom)
            check(ctx, b, subst(cod, {y: a}))

        case PartialEl(faces), PartialTy(c, carrier):
            check_cofib(ctx, c, t.span)
            covered = check_partial(ctx, faces, carrier)
            if not cofib.cofib_equiv(covered, c):
                raise TypeMismatch(
                    f"this partial element is defined on {pretty_cofib(covered)}, but {pretty_cofib(c)} was expected"
                )

        case TrivialPartial(body), PartialTy(c, carrier):
            check_cofib(ctx, c, t.span)
            check(ctx, body, carrier)

        case InS(c, body), SubTy(carrier, c2, faces):
            check_cofib(ctx, c, t.span)
            if not cofib.cofib_equiv(c, c2):
                raise TypeMismatch(f"inS is annotated with {pretty_cofib(c)}, but the subtype has {pretty_cofib(c2)}")
            check(ctx, body, carrier)
            for theta, u in faces:
                if not conv_under_conj(ctx, theta, body, u, carrier):
                    raise BoundaryMismatch(
                        f"{pretty(body)} does not agree with {pretty(u)} on the face {pretty_conj(theta)}",
                        substitution=cofib.conj_to_subst(theta),
                    )

        case (Lam() | PLam() | Pair() | PartialEl() | TrivialPartial() | InS()), _:
            raise _mismatch(expected, t, "the introduction form")

        case _:
            inferred = infer(ctx, t)
            if not convert(ctx, inferred, expected, UNIV):
                raise TypeMismatch(
                    f"expected a term of type {pretty(expected)}, but {pretty(t)} has type {pretty(whnf(ctx, inferred))}"
                )


def infer(ctx: Context, t: Term) -> Term:
    """Infer the type of ``t``."""
    try:
        return _infer(ctx, t)
    except KernelError as e:
        raise _attach(e, t)


def _infer(ctx, t):
    match t:
        case Var(name):
            binding = ctx.lookup(name)
            if binding is not None:
                if binding.type is None:
                    raise CannotInfer(f"the type of {name} is unknown")
                return binding.type
            definition = ctx.definitions.get(name)
            if definition is not None:
                return definition.type
            raise UnboundVariable(f"unbound variable {name}")

        case Univ() | Interval():
            return UNIV

        case IConst():
            return INTERVAL

        case INeg(body):
            check(ctx, body, INTERVAL)
            return INTERVAL

        case IAnd(left, right) | IOr(left, right):
            check(ctx, left, INTERVAL)
            check(ctx, right, INTERVAL)
            return INTERVAL

        case Pi() | Sigma() | PartialTy() | ExtTy() | SubTy():
            check_type(ctx, t)
            return UNIV

        case App(fn, arg):
            fn_type = whnf(ctx, infer(ctx, fn))
            if not isinstance(fn_type, Pi):
                raise TypeMismatch(f"{pretty(fn)} is applied to an argument, but its type {pretty(fn_type)} is not a function type")
            check(ctx, arg, fn_type.dom)
            return subst(fn_type.cod, {fn_type.binder: arg})

        case Fst(p) | Snd(p):
            pair_type = whnf(ctx, infer(ctx, p))
            if not isinstance(pair_type, Sigma):
                raise TypeMismatch(f"{pretty(p)} is projected, but its type {pretty(pair_type)} is not a pair type")
            if isinstance(t, Fst):
                return pair_type.dom
            return subst(pair_type.cod, {pair_type.binder: Fst(p)})

        case PApp(fn, args):
            path_type = whnf(ctx, infer(ctx, fn))
            if not isinstance(path_type, ExtTy) or len(path_type.binders) != len(args):
                raise TypeMismatch(
                    f"{pretty(fn)} is applied to {len(args)} interval argument(s), "
                    f"but its type {pretty(path_type)} is not an extension type of that dimension"
                )
            for a in args:
                check(ctx, a, INTERVAL)
            return subst(path_type.carrier, dict(zip(path_type.binders, args)))

        case OutS(c, body):
            check_cofib(ctx, c, t.span)
            sub_type = whnf(ctx, infer(ctx, body))
            if not isinstance(sub_type, SubTy):
                raise TypeMismatch(f"outS expects an element of a subtype, but {pretty(body)} has type {pretty(sub_type)}")
            if not cofib.cofib_equiv(c, sub_type.cofib):
                raise TypeMismatch(
                    f"outS is annotated with {pretty_cofib(c)}, but the subtype has {pretty_cofib(sub_type.cofib)}"
                )
            return sub_type.carrier

        case Coe(line, c):
            return _infer_coe(ctx, t, line, c)

        case HComp(carrier, walls, floor, c):
            return _infer_hcomp(ctx, t, carrier, walls, floor, c)

        case Lam() | PLam() | Pair() | PartialEl() | TrivialPartial() | InS():
            raise CannotInfer(f"cannot infer the type of {pretty(t)}; add a type annotation by making it a definition")

    raise CannotInfer(f"cannot infer the type of {pretty(t)}")


def _infer_coe(ctx, t, line, c):
    x = fresh("x", set(ctx.names()) | free_names(line))
    check(ctx, line, Pi(x, INTERVAL, UNIV))
    check_cofib(ctx, c, t.span)
    body = whnf(ctx.extend(x, INTERVAL), App(line, Var(x)))
    if not fibrant(body):
        raise NotFibrant(f"cannot coerce along a line of pretypes: {pretty(body)}")
    if isinstance(body, ExtTy) and len(body.binders) != 1:
        raise UnsupportedCoercion(
            f"coercion along extension types of dimension {len(body.binders)} is not supported"
        )
    if not freezes(ctx, line, c):
        raise FreezeViolation(f"the type line {pretty(line)} is not constant on {pretty_cofib(c)}")
    binder = fresh("_", free_names(line))
    return Pi(binder, App(line, ZERO), App(line, ONE))


def _infer_hcomp(ctx, t, carrier, walls, floor, c):
    check_type(ctx, carrier)
    if not fibrant(whnf(ctx, carrier)):
        raise NotFibrant(f"cannot compose in the pretype {pretty(carrier)}")
    check_cofib(ctx, c, t.span)
    check(ctx, floor, carrier)
    i = fresh("i", set(ctx.names()) | free_names(carrier))
    check(ctx, walls, Pi(i, INTERVAL, PartialTy(c, carrier)))
    partial = PartialTy(c, carrier)
    for theta in cofib.clauses(cofib.simplify(c)):
        if not conv_under_conj(ctx, theta, TrivialPartial(floor), App(walls, ZERO), partial):
            raise FloorWallDisagreement(
                f"the floor {pretty(floor)} does not agree with the walls at 0 on {pretty_conj(theta)}",
                substitution=cofib.conj_to_subst(theta),
            )
    return SubTy(carrier, c, ceiling_faces(ctx, walls, c) or ())


def check_partial(ctx: Context, faces, carrier: Term):
    """
    Check a list of faces as a partial element of ``carrier``.

    Each body is checked on its own face, and every two faces must agree
    where they overlap. Returns the disjunction of the faces.
    """
    for theta, u in faces:
        check_cofib(ctx, cofib.of_conj(theta))
        theta = cofib.simplify_conj(theta)
        if isinstance(theta, Absurd):
            continue
        s = cofib.conj_to_subst(theta)
        check(ctx.restrict(s), subst(u, s), subst(carrier, s))

    for i, (theta_i, u_i) in enumerate(faces):
        for j in range(i + 1, len(faces)):
            theta_j, u_j = faces[j]
            overlap = cofib.meet_conj(theta_i, theta_j)
            if isinstance(overlap, Absurd):
                continue
            if not conv_under_conj(ctx, overlap, u_i, u_j, carrier):
                raise FaceDisagreement(
                    f"faces {i + 1} and {j + 1} disagree on {pretty_conj(overlap)}: "
                    f"{pretty(u_i)} is not {pretty(u_j)}",
                    i=i,
                    j=j,
                    substitution=cofib.conj_to_subst(overlap),
                )

    return cofib.disj_or(*(cofib.of_conj(theta) for theta, _ in faces))


def open_telescope(ctx: Context, params, *terms):
    """
    Rename parameters that clash with names in scope, definitions included.

    A clashing parameter gets a fresh name in the rest of the telescope and in
    ``terms``, so the bodies of unfolded definitions keep their meaning.
    Returns the renamed parameters and terms.
    """
    params, terms = list(params), list(terms)
    taken = set(ctx.names())
    for k, (name, ty) in enumerate(params):
        if name in taken:
            avoid = taken | {n for n, _ in params}
            for t in terms + [t for _, t in params]:
                avoid |= free_names(t)
            new = fresh(name, avoid)
            s = {name: Var(new)}
            params[k] = (new, ty)
            for m in range(k + 1, len(params)):
                later, later_type = params[m]
                params[m] = (later, subst(later_type, s))
                if later == name:
                    break
            else:
                terms = [subst(t, s) for t in terms]
            name = new
        taken.add(name)
    return tuple(params), terms


def check_declaration(ctx: Context, declaration) -> Context:
    """Check one declaration against the earlier ones and return the extended context."""
    if declaration.name in ctx.definitions or ctx.is_local(declaration.name):
        raise DuplicateDefinition(f"{declaration.name} is already defined", span=declaration.span)

    params, (ty, body) = open_telescope(ctx, declaration.params, declaration.type, declaration.body)
    inner = ctx
    for name, param_type in params:
        check_type(inner, param_type)
        inner = inner.extend(name, param_type)
    check_type(inner, ty)
    check(inner, body, ty)

    for name, param_type in reversed(params):
        ty = Pi(name, param_type, ty)
        body = Lam(name, body)
    logger.info("checked %s", declaration.name)
    return ctx.define(Definition(declaration.name, ty, body, params, declaration.span))


def check_file(
    declarations: Iterable, ctx: Optional[Context] = None
) -> Tuple[Context, List[Tuple[object, Optional[KernelError]]]]:
    """
    Check declarations in order.

    A rejected declaration is reported and left out of scope; checking goes
    on with the next one.
    """
    ctx = ctx if ctx is not None else Context()
    results = []
    for declaration in declarations:
        try:
            ctx = check_declaration(ctx, declaration)
        except KernelError as e:
            if e.span is None:
                e.span = declaration.span
            results.append((declaration, e))
        else:
            results.append((declaration, None))
    return ctx, results
