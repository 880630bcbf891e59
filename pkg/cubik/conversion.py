"""
Definitional equality.

Comparison is type-directed where the type has an eta law (functions,
extension types, pairs, partial elements and subtypes) and structural on weak
head normal forms otherwise. A restricted context is handled by comparing
once per conjunction of the restriction, with the face substituted in.
"""

from __future__ import annotations

import logging
from typing import Optional

from cubik import cofib, interval
from cubik.context import Context
from cubik.evaluator import neutral_type, whnf
from cubik.syntax import (
    INTERVAL,
    UNIV,
    ZERO,
    Absurd,
    App,
    Coe,
    ExtTy,
    Fst,
    HComp,
    InS,
    Interval,
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
    Univ,
    Var,
    alpha_eq,
    free_names,
    fresh,
    subst,
)
from cubik.surface import pretty

logger = logging.getLogger(__name__)

LINE = Pi("_", INTERVAL, UNIV)


def convert(ctx: Context, a: Term, b: Term, ty: Optional[Term]) -> bool:
    """Are ``a`` and ``b`` definitionally equal at ``ty`` (``None`` if unknown)?"""
    restriction = cofib.simplify(ctx.restriction)
    if isinstance(restriction, Truth):
        result = _conv(ctx, a, b, ty)
    else:
        free = ctx.under(cofib.TRUTH)
        result = all(conv_under_conj(free, theta, a, b, ty) for theta in cofib.clauses(restriction))
    if not result and logger.isEnabledFor(logging.DEBUG):
        logger.debug("not convertible: %s vs %s", pretty(a), pretty(b))
    return result


def conv_under_conj(ctx: Context, theta, a: Term, b: Term, ty: Optional[Term]) -> bool:
    """Compare after substituting the face ``theta`` everywhere."""
    theta = cofib.simplify_conj(theta)
    if isinstance(theta, Absurd):
        return True
    s = cofib.conj_to_subst(theta)
    return convert(
        ctx.restrict(s),
        subst(a, s),
        subst(b, s),
        subst(ty, s) if ty is not None else None,
    )


def conv_type(ctx, a, b):
    return _conv(ctx, a, b, UNIV)


def _fresh(ctx, base, *terms):
    avoid = set(ctx.names())
    for t in terms:
        if t is not None:
            avoid |= free_names(t)
    return fresh(base, avoid)


def _conv(ctx, a, b, ty):
    if alpha_eq(a, b):
        return True
    if ty is None:
        return _structural(ctx, whnf(ctx, a), whnf(ctx, b))

    match whnf(ctx, ty):
        case Pi(x, dom, cod):
            v = _fresh(ctx, x, a, b, cod)
            return _conv(ctx.extend(v, dom), App(a, Var(v)), App(b, Var(v)), subst(cod, {x: Var(v)}))
        case Sigma(x, dom, cod):
            return _conv(ctx, Fst(a), Fst(b), dom) and _conv(ctx, Snd(a), Snd(b), subst(cod, {x: Fst(a)}))
        case ExtTy(binders, carrier, _):
            names = []
            for x in binders:
                names.append(_fresh(ctx, x, a, b, carrier, *(Var(n) for n in names)))
            points = tuple(Var(n) for n in names)
            return _conv(
                ctx.extend_intervals(names),
                PApp(a, points),
                PApp(b, points),
                subst(carrier, dict(zip(binders, points))),
            )
        case PartialTy(c, carrier):
            return _conv_partial(ctx, a, b, c, carrier)
        case SubTy(carrier, c, _):
            return _conv(ctx, OutS(c, a), OutS(c, b), carrier)
        case Interval():
            if interval.is_iexpr(a) and interval.is_iexpr(b):
                return interval.iconv(a, b)
    return _structural(ctx, whnf(ctx, a), whnf(ctx, b))


def _conv_partial(ctx, p, q, c, carrier):
    """Partial elements agree when their projections agree on every conjunction of ``c``."""
    for theta in cofib.clauses(cofib.simplify(c)):
        s = cofib.conj_to_subst(theta)
        inner = ctx.restrict(s)
        left, right = whnf(inner, subst(p, s)), whnf(inner, subst(q, s))
        if isinstance(left, TrivialPartial) and isinstance(right, TrivialPartial):
            ty = subst(carrier, s) if carrier is not None else None
            if not _conv(inner, left.body, right.body, ty):
                return False
        elif not _structural(inner, left, right):
            return False
    return True


def _faces_cofib(faces):
    return cofib.disj_or(*(cofib.of_conj(theta) for theta, _ in faces))


def _structural(ctx, a, b):
    if alpha_eq(a, b):
        return True

    if isinstance(a, (Lam, PLam)) or isinstance(b, (Lam, PLam)):
        return _eta(ctx, a, b)
    if isinstance(a, Pair) or isinstance(b, Pair):
        return _conv(ctx, Fst(a), Fst(b), None) and _conv(ctx, Snd(a), Snd(b), None)
    if interval.is_iexpr(a) and interval.is_iexpr(b):
        return interval.iconv(a, b)

    match a, b:
        case (Univ(), Univ()) | (Interval(), Interval()):
            return True
        case Var(x), Var(y):
            return x == y
        case (Pi(x, d1, c1), Pi(y, d2, c2)) | (Sigma(x, d1, c1), Sigma(y, d2, c2)):
            if not conv_type(ctx, d1, d2):
                return False
            v = _fresh(ctx, x, c1, c2)
            inner = ctx.extend(v, d1)
            return conv_type(inner, subst(c1, {x: Var(v)}), subst(c2, {y: Var(v)}))
        case App(f, x), App(g, y):
            if not _structural(ctx, f, g):
                return False
            return _conv(ctx, x, y, _argument_type(ctx, f))
        case (Fst(p), Fst(q)) | (Snd(p), Snd(q)):
            return _structural(ctx, p, q)
        case PApp(f, xs), PApp(g, ys):
            return (
                len(xs) == len(ys)
                and _structural(ctx, f, g)
                and all(interval.iconv(x, y) for x, y in zip(xs, ys))
            )
        case Coe(l1, c1), Coe(l2, c2):
            return cofib.cofib_equiv(c1, c2) and _conv(ctx, l1, l2, LINE)
        case OutS(_, u), OutS(_, v):
            return _structural(ctx, u, v)
        case InS(c1, u), InS(c2, v):
            return cofib.cofib_equiv(c1, c2) and _conv(ctx, u, v, None)
        case PartialTy(c1, t1), PartialTy(c2, t2):
            return cofib.cofib_equiv(c1, c2) and conv_type(ctx, t1, t2)
        case SubTy(t1, c1, f1), SubTy(t2, c2, f2):
            return (
                cofib.cofib_equiv(c1, c2)
                and conv_type(ctx, t1, t2)
                and _conv_partial(ctx, PartialEl(f1), PartialEl(f2), c1, t1)
            )
        case ExtTy(xs, t1, f1), ExtTy(ys, t2, f2):
            if len(xs) != len(ys):
                return False
            names = []
            for x in xs:
                names.append(_fresh(ctx, x, t1, t2, PartialEl(f1), PartialEl(f2), *(Var(n) for n in names)))
            points = tuple(Var(n) for n in names)
            inner = ctx.extend_intervals(names)
            t1, t2 = subst(t1, dict(zip(xs, points))), subst(t2, dict(zip(ys, points)))
            f1 = subst(PartialEl(f1), dict(zip(xs, points)))
            f2 = subst(PartialEl(f2), dict(zip(ys, points)))
            c1, c2 = _faces_cofib(f1.faces), _faces_cofib(f2.faces)
            return (
                cofib.cofib_equiv(c1, c2)
                and conv_type(inner, t1, t2)
                and _conv_partial(inner, f1, f2, c1, t1)
            )
        case (PartialEl() | TrivialPartial()), (PartialEl() | TrivialPartial()):
            c1 = cofib.TRUTH if isinstance(a, TrivialPartial) else _faces_cofib(a.faces)
            c2 = cofib.TRUTH if isinstance(b, TrivialPartial) else _faces_cofib(b.faces)
            return cofib.cofib_equiv(c1, c2) and _conv_partial(ctx, a, b, c1, None)
        case HComp(t1, w1, fl1, c1), HComp(t2, w2, fl2, c2):
            walls = Pi("_", INTERVAL, PartialTy(c1, t1))
            return (
                cofib.cofib_equiv(c1, c2)
                and conv_type(ctx, t1, t2)
                and _conv(ctx, fl1, fl2, t1)
                and _conv(ctx, w1, w2, walls)
            )
    return False


def _eta(ctx, a, b):
    if isinstance(a, PLam) or isinstance(b, PLam):
        binders = a.binders if isinstance(a, PLam) else b.binders
        names = []
        for x in binders:
            names.append(_fresh(ctx, x, a, b, *(Var(n) for n in names)))
        points = tuple(Var(n) for n in names)
        inner = ctx.extend_intervals(names)
        left = PApp(a, points) if not isinstance(a, Lam) else App(a, points[0])
        right = PApp(b, points) if not isinstance(b, Lam) else App(b, points[0])
        return _conv(inner, left, right, None)
    binder = a.binder if isinstance(a, Lam) else b.binder
    v = _fresh(ctx, binder, a, b)
    return _conv(ctx.extend(v, None), App(a, Var(v)), App(b, Var(v)), None)


def _argument_type(ctx, fn):
    if isinstance(fn, Coe):
        return App(fn.line, ZERO)
    ty = neutral_type(ctx, fn)
    if ty is None:
        return None
    ty = whnf(ctx, ty)
    return ty.dom if isinstance(ty, Pi) else None
