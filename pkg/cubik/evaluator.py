"""
The normalizer.

Values are terms in weak head normal form; a neutral value is a term whose
head is a variable, a stuck coercion or a stuck composition. ``whnf`` runs
beta for functions and paths, the boundary rule of ``@``, the cancellation
rules of ``inS``/``outS``, reduction of partial elements, and the Kan
operations. ``normalize`` iterates ``whnf`` under binders.

There is no regularity rule: a coercion along a neutral line stays stuck even
when the line happens to be constant.
"""

from __future__ import annotations

import logging
from typing import Mapping, Optional

from cubik import cofib, interval
from cubik.context import Context
from cubik.errors import InternalError
from cubik.syntax import (
    INTERVAL,
    ONE,
    UNIV,
    ZERO,
    Absurd,
    App,
    Clauses,
    Coe,
    ExtTy,
    Fst,
    HComp,
    IAnd,
    IConst,
    INeg,
    InS,
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
    Truth,
    Var,
    free_names,
    fresh,
    subst,
)
from cubik.surface import pretty

logger = logging.getLogger(__name__)


def _trace(rule, before, after):
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("%s: %s ~> %s", rule, pretty(before), pretty(after))


def _iarg(t):
    if interval.is_iexpr(t) and not isinstance(t, Var):
        return interval.normalize(t)
    return t


def _avoid(ctx, *terms):
    names = set(ctx.names())
    for t in terms:
        names |= free_names(t)
    return names


def open_binder(ctx, binder, body, *others):
    """Rename ``binder`` if it clashes with the context, so it can be pushed onto ``ctx``."""
    if binder not in ctx.names():
        return binder, body
    new = fresh(binder, _avoid(ctx, body, *others))
    return new, subst(body, {binder: Var(new)})


def open_binders(ctx, binders, *bodies):
    avoid = _avoid(ctx, *bodies)
    mapping, names = {}, []
    for b in binders:
        if b in ctx.names() or b in names:
            nb = fresh(b, avoid | set(names))
            mapping[b] = Var(nb)
            names.append(nb)
        else:
            names.append(b)
    return tuple(names), mapping


def whnf(ctx: Context, t: Term) -> Term:
    """Reduce ``t`` until its head is stable."""
    while True:
        match t:
            case Var(name):
                definition = ctx.definition(name)
                if definition is None:
                    return t
                _trace("delta", t, definition.body)
                t = definition.body
                continue

            case App(fn, arg):
                head = whnf(ctx, fn)
                match head:
                    case Lam(x, body) | PLam((x,), body):
                        result = subst(body, {x: _iarg(arg)})
                        _trace("beta", t, result)
                        t = result
                        continue
                    case Coe(line, c):
                        result = coe_reduce(ctx, line, c, arg)
                        if result is not None:
                            _trace("coe", t, result)
                            t = result
                            continue
                return App(head, arg, span=t.span)

            case Fst(p) | Snd(p):
                head = whnf(ctx, p)
                if isinstance(head, Pair):
                    t = head.fst if isinstance(t, Fst) else head.snd
                    continue
                return type(t)(head, span=t.span)

            case PApp(fn, args):
                args = tuple(_iarg(a) for a in args)
                head = whnf(ctx, fn)
                if isinstance(head, PLam) and len(head.binders) == len(args):
                    result = subst(head.body, dict(zip(head.binders, args)))
                    _trace("path-beta", t, result)
                    t = result
                    continue
                boundary = _boundary(ctx, head, args)
                if boundary is not None:
                    _trace("boundary", t, boundary)
                    t = boundary
                    continue
                return PApp(head, args, span=t.span)

            case OutS(c, body):
                head = whnf(ctx, body)
                if isinstance(head, InS):
                    _trace("outS-inS", t, head.body)
                    t = head.body
                    continue
                face = _subtype_face(ctx, head)
                if face is not None:
                    _trace("outS-face", t, face)
                    t = face
                    continue
                return OutS(c, head, span=t.span)

            case InS(c, body):
                head = whnf(ctx, body)
                if isinstance(head, OutS):
                    _trace("inS-outS", t, head.body)
                    t = head.body
                    continue
                return InS(c, head, span=t.span)

            case PartialEl(faces):
                return reduce_partial(faces, {})

            case IConst() | INeg() | IAnd() | IOr():
                return interval.normalize(t) if interval.is_iexpr(t) else t

            case HComp(carrier, walls, floor, c):
                result = hcomp_reduce(ctx, carrier, c, walls, floor)
                if result is None:
                    return t
                _trace("hcomp", t, result)
                t = result
                continue

            case _:
                return t


def _boundary(ctx, head, args):
    ty = neutral_type(ctx, head)
    if ty is None:
        return None
    ty = whnf(ctx, ty)
    if not isinstance(ty, ExtTy) or len(ty.binders) != len(args):
        return None
    reduced = reduce_partial(ty.faces, dict(zip(ty.binders, args)))
    if isinstance(reduced, TrivialPartial):
        return reduced.body
    return None


def _subtype_face(ctx, head):
    ty = neutral_type(ctx, head)
    if ty is None:
        return None
    ty = whnf(ctx, ty)
    if not isinstance(ty, SubTy):
        return None
    reduced = reduce_partial(ty.faces, {})
    if isinstance(reduced, TrivialPartial):
        return reduced.body
    return None


def neutral_type(ctx: Context, t: Term) -> Optional[Term]:
    """The type of a neutral term, read off the context; ``None`` when unknown."""
    match t:
        case Var(name):
            binding = ctx.lookup(name)
            if binding is not None:
                return binding.type
            definition = ctx.definitions.get(name)
            return definition.type if definition else None
        case App(Coe(line, _), _):
            return App(line, ONE)
        case App(fn, arg):
            ty = _whnf_type(ctx, fn)
            if isinstance(ty, Pi):
                return subst(ty.cod, {ty.binder: arg})
        case PApp(fn, args):
            ty = _whnf_type(ctx, fn)
            if isinstance(ty, ExtTy) and len(ty.binders) == len(args):
                return subst(ty.carrier, dict(zip(ty.binders, args)))
        case Fst(p):
            ty = _whnf_type(ctx, p)
            if isinstance(ty, Sigma):
                return ty.dom
        case Snd(p):
            ty = _whnf_type(ctx, p)
            if isinstance(ty, Sigma):
                return subst(ty.cod, {ty.binder: Fst(p)})
        case OutS(_, body):
            ty = _whnf_type(ctx, body)
            if isinstance(ty, SubTy):
                return ty.carrier
        case HComp(carrier, walls, _, c):
            return SubTy(carrier, c, ceiling_faces(ctx, walls, c) or ())
    return None


def _whnf_type(ctx, t):
    ty = neutral_type(ctx, t)
    return whnf(ctx, ty) if ty is not None else None


def reduce_partial(faces, s: Mapping[str, Term]):
    """
    Reduce the faces of a partial element under the interval substitution ``s``.

    A satisfied face turns the whole element into a trivial one, ignoring the
    other faces; a contradicted face is dropped; other faces are rewritten.
    """
    kept = []
    for conj, body in faces:
        outcome = cofib.subst_conj(conj, s)
        body = subst(body, s)
        match outcome:
            case Truth():
                return TrivialPartial(body)
            case Absurd():
                continue
            case Clauses(conjs):
                kept.extend((c, body) for c in conjs)
    return PartialEl(tuple(kept))


def partial_faces(p, c):
    """The faces of a partial element value; a trivial one is spread over ``c``."""
    match p:
        case PartialEl(faces):
            return faces
        case TrivialPartial(body):
            return tuple((theta, body) for theta in cofib.clauses(c))
    return None


def map_partial(p, c, fn):
    faces = partial_faces(p, c)
    if faces is None:
        return None
    return PartialEl(tuple((theta, fn(body)) for theta, body in faces))


def ceiling_faces(ctx, walls, c):
    """Faces of the walls at the top of a composition."""
    return partial_faces(whnf(ctx, App(walls, ONE)), c)


# Kan reducts never put a literal function, path or pair in an eliminator's head.


def _apply(fn, arg):
    match fn:
        case Lam(x, body) | PLam((x,), body):
            return subst(body, {x: arg})
    return App(fn, arg)


def _papp(path, args):
    if isinstance(path, PLam) and len(path.binders) == len(args):
        return subst(path.body, dict(zip(path.binders, args)))
    return PApp(path, args)


def _fst(p):
    return p.fst if isinstance(p, Pair) else Fst(p)


def _snd(p):
    return p.snd if isinstance(p, Pair) else Snd(p)


def _line_body(ctx, line, *others):
    head = whnf(ctx, line)
    match head:
        case Lam(x, body) | PLam((x,), body):
            return open_binder(ctx, x, body, *others)
    x = fresh("i", _avoid(ctx, line, *others))
    return x, App(head, Var(x))


def _restriction_entails(ctx, c):
    restriction = cofib.simplify(ctx.restriction)
    if not isinstance(restriction, Clauses):
        return False
    return all(cofib.entails(theta, c) for theta in restriction.conjs)


def coe_reduce(ctx: Context, line: Term, c, arg: Term) -> Optional[Term]:
    """
    Coercion along ``line`` frozen on ``c``, applied to ``arg``.

    Returns ``None`` when no rule applies: the line is neutral, lands in the
    universe or in a pretype, or is a multi-dimensional extension type.
    """
    c = cofib.simplify(c)
    if isinstance(c, Truth) or _restriction_entails(ctx, c):
        return arg
    x, body = _line_body(ctx, line, arg)
    ty = whnf(ctx.extend(x, INTERVAL), body)
    avoid = _avoid(ctx, line, arg, ty) | {x}

    match ty:
        case Pi(y, dom, cod):
            a = fresh("a", avoid)
            z = fresh("z", avoid | {a})
            dom_line = Lam(x, dom)

            def backward(r):
                line_back = Lam(z, _apply(dom_line, IOr(INeg(Var(z)), r)))
                return App(Coe(line_back, cofib.disj_or(c, interval.to_cofib(r))), Var(a))

            cod_line = Lam(x, subst(cod, {y: backward(Var(x))}))
            return Lam(a, App(Coe(cod_line, c), _apply(arg, backward(ZERO))))

        case Sigma(y, dom, cod):
            z = fresh("z", avoid)
            dom_line = Lam(x, dom)
            first = _fst(arg)

            def fill(r):
                line_up = Lam(z, _apply(dom_line, IAnd(r, Var(z))))
                return App(Coe(line_up, cofib.disj_or(c, interval.to_cofib(INeg(r)))), first)

            cod_line = Lam(x, subst(cod, {y: fill(Var(x))}))
            return Pair(App(Coe(dom_line, c), first), App(Coe(cod_line, c), _snd(arg)))

        case ExtTy(binders, carrier, faces):
            if len(binders) != 1:
                return None
            (b,) = binders
            x2 = fresh(b, avoid)
            carrier = subst(carrier, {b: Var(x2)})
            faces = subst(PartialEl(faces), {b: Var(x2)}).faces
            floor = _papp(arg, (Var(x2),))
            frozen = tuple((theta, floor) for theta in cofib.clauses(c))
            walls = Lam(x, PartialEl(frozen + faces))
            total = cofib.disj_or(c, *(cofib.of_conj(theta) for theta, _ in faces))
            inner = ctx.extend(x2, INTERVAL)
            return PLam((x2,), comp(inner, Lam(x, carrier), total, walls, floor))

    return None


def hcomp_reduce(ctx: Context, carrier: Term, c, walls: Term, floor: Term) -> Optional[Term]:
    """Homogeneous composition; ``None`` when stuck."""
    c = cofib.simplify(c)
    if isinstance(c, Truth):
        top = whnf(ctx, App(walls, ONE))
        if isinstance(top, TrivialPartial):
            return InS(c, top.body)
        return None
    if isinstance(c, Absurd):
        return InS(c, floor)

    ty = whnf(ctx, carrier)
    avoid = _avoid(ctx, carrier, walls, floor, ty)
    i = fresh("i", avoid)
    avoid.add(i)
    at_i = whnf(ctx.extend(i, INTERVAL), App(walls, Var(i)))

    match ty:
        case Pi(y, _, cod):
            a = fresh("a", avoid)
            mapped = map_partial(at_i, c, lambda f: _apply(f, Var(a)))
            if mapped is None:
                return None
            inner = HComp(subst(cod, {y: Var(a)}), Lam(i, mapped), _apply(floor, Var(a)), c)
            return InS(c, Lam(a, OutS(c, inner)))

        case Sigma(y, dom, cod):
            firsts = map_partial(at_i, c, _fst)
            seconds = map_partial(at_i, c, _snd)
            if firsts is None:
                return None
            j = fresh("j", avoid)
            first = OutS(c, HComp(dom, Lam(i, firsts), _fst(floor), c))

            def fill(r):
                c_r = cofib.disj_or(c, interval.to_cofib(INeg(r)))
                shifted = subst(firsts, {i: IAnd(r, Var(i))}).faces
                bottom = tuple((theta, _fst(floor)) for theta in cofib.clauses(interval.to_cofib(INeg(r))))
                return OutS(c_r, HComp(dom, Lam(i, PartialEl(shifted + bottom)), _fst(floor), c_r))

            line = Lam(j, subst(cod, {y: fill(Var(j))}))
            second = comp(ctx, line, c, Lam(i, seconds), _snd(floor))
            return InS(c, Pair(first, second))

        case ExtTy(binders, body, faces):
            names, renaming = open_binders(ctx.extend(i, INTERVAL), binders, body, PartialEl(faces), walls, floor)
            if renaming:
                body = subst(body, renaming)
                faces = subst(PartialEl(faces), renaming).faces
            points = tuple(Var(n) for n in names)
            mapped = map_partial(at_i, c, lambda p: _papp(p, points))
            if mapped is None:
                return None
            total = cofib.disj_or(c, *(cofib.of_conj(theta) for theta, _ in faces))
            inner = HComp(body, Lam(i, PartialEl(mapped.faces + faces)), _papp(floor, points), total)
            return InS(c, PLam(names, OutS(total, inner)))

    return None


def trans_fill(ctx: Context, line: Term, c, u: Term) -> Term:
    """The path from ``u`` to its coercion along ``line``."""
    avoid = _avoid(ctx, line, u)
    x = fresh("x", avoid)
    y = fresh("y", avoid | {x})
    squeezed = Lam(y, _apply(line, IAnd(Var(x), Var(y))))
    return PLam((x,), App(Coe(squeezed, cofib.disj_or(c, cofib.cond(x, 0))), u))


def forward(ctx: Context, line: Term, r: Term) -> Term:
    """Coercion from ``line r`` to ``line 1``, frozen where ``r = 1``."""
    x = fresh("x", _avoid(ctx, line, r))
    return Coe(Lam(x, _apply(line, IOr(Var(x), r))), interval.to_cofib(r))


def comp(ctx: Context, line: Term, c, walls: Term, floor: Term) -> Term:
    """Heterogeneous composition: forward walls and floor to ``line 1``, then compose there."""
    i = fresh("i", _avoid(ctx, line, walls, floor))
    at_i = whnf(ctx.extend(i, INTERVAL), App(walls, Var(i)))
    forwarded = map_partial(at_i, c, lambda w: App(forward(ctx, line, Var(i)), w))
    if forwarded is None:
        raise InternalError("composition walls must be a partial element")
    bottom = App(forward(ctx, line, ZERO), floor)
    return OutS(c, HComp(_apply(line, ONE), Lam(i, forwarded), bottom, c))


def freezes(ctx: Context, line: Term, c) -> bool:
    """Is ``line`` constant under every conjunction of ``c``?"""
    from cubik.conversion import conv_under_conj

    x = fresh("x", _avoid(ctx, line))
    inner = ctx.extend(x, INTERVAL)
    for theta in cofib.clauses(cofib.simplify(c)):
        if not conv_under_conj(inner, theta, App(line, ZERO), App(line, Var(x)), UNIV):
            return False
    return True


def normalize(ctx: Context, t: Term) -> Term:
    """Full normal form, by ``whnf`` and recursion into every subterm."""
    t = whnf(ctx, t)
    match t:
        case Lam(x, body):
            x, body = open_binder(ctx, x, body)
            return Lam(x, normalize(ctx.extend(x, None), body), span=t.span)
        case Pi(x, dom, cod) | Sigma(x, dom, cod):
            x, cod = open_binder(ctx, x, cod)
            return type(t)(x, normalize(ctx, dom), normalize(ctx.extend(x, dom), cod), span=t.span)
        case Pair(a, b):
            return Pair(normalize(ctx, a), normalize(ctx, b), span=t.span)
        case App(fn, arg):
            return App(normalize(ctx, fn), normalize(ctx, arg), span=t.span)
        case Fst(p) | Snd(p):
            return type(t)(normalize(ctx, p), span=t.span)
        case PApp(fn, args):
            return PApp(normalize(ctx, fn), args, span=t.span)
        case PLam(binders, body):
            binders, renaming = open_binders(ctx, binders, body)
            body = subst(body, renaming)
            return PLam(binders, normalize(ctx.extend_intervals(binders), body), span=t.span)
        case ExtTy(binders, carrier, faces):
            binders, renaming = open_binders(ctx, binders, carrier, PartialEl(faces))
            carrier = subst(carrier, renaming)
            faces = subst(PartialEl(faces), renaming).faces
            inner = ctx.extend_intervals(binders)
            return ExtTy(binders, normalize(inner, carrier), _normalize_faces(inner, faces), span=t.span)
        case PartialEl(faces):
            return PartialEl(_normalize_faces(ctx, faces), span=t.span)
        case TrivialPartial(body):
            return TrivialPartial(normalize(ctx, body), span=t.span)
        case PartialTy(c, carrier):
            return PartialTy(c, normalize(ctx, carrier), span=t.span)
        case SubTy(carrier, c, faces):
            return SubTy(normalize(ctx, carrier), c, _normalize_faces(ctx, faces), span=t.span)
        case InS(c, body) | OutS(c, body):
            return type(t)(c, normalize(ctx, body), span=t.span)
        case Coe(line, c):
            return Coe(normalize(ctx, line), c, span=t.span)
        case HComp(carrier, walls, floor, c):
            return HComp(normalize(ctx, carrier), normalize(ctx, walls), normalize(ctx, floor), c, span=t.span)
    return t


def _normalize_faces(ctx, faces):
    return tuple((conj, normalize(ctx, body)) for conj, body in faces)
