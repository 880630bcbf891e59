"""
Core syntax of the kernel.

Terms are immutable dataclasses, one class per term former. Interval
expressions are ordinary terms (``IConst``, ``Var``, ``INeg``, ``IAnd``,
``IOr``) so a single substitution function serves both worlds. Cofibrations
(``Cond``, ``Conj`` and the ``Disj`` variants) live here as well because
faces of partial elements, extension types and subtypes embed them.

Bindings use names. ``subst`` renames a binder only when it would capture a
free variable of the replacement; ``alpha_eq`` compares up to renaming.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple, Union


Span = Tuple[int, int]


# Cofibrations


@dataclass(frozen=True)
class Cond:
    """A face condition ``var = value`` with value 0 or 1."""

    var: str
    value: int


@dataclass(frozen=True)
class Conj:
    """A conjunction of conditions; the empty conjunction holds everywhere."""

    conds: Tuple[Cond, ...] = ()


@dataclass(frozen=True)
class Absurd:
    """The cofibration selecting no face."""


@dataclass(frozen=True)
class Truth:
    """The cofibration selecting every face."""


@dataclass(frozen=True)
class Clauses:
    """A nonempty disjunction of conjunctions."""

    conjs: Tuple[Conj, ...]


Disj = Union[Absurd, Truth, Clauses]

ABSURD = Absurd()
TRUTH = Truth()


# Terms


@dataclass(frozen=True)
class Term:
    span: Optional[Span] = field(default=None, compare=False, repr=False, kw_only=True)


Face = Tuple[Conj, Term]
Faces = Tuple[Face, ...]


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    binder: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Pi(Term):
    binder: str
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Sigma(Term):
    binder: str
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True)
class Univ(Term):
    pass


@dataclass(frozen=True)
class Interval(Term):
    """The interval pretype."""


@dataclass(frozen=True)
class IConst(Term):
    value: int


@dataclass(frozen=True)
class INeg(Term):
    body: Term


@dataclass(frozen=True)
class IAnd(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class IOr(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class PartialEl(Term):
    faces: Faces = ()


@dataclass(frozen=True)
class TrivialPartial(Term):
    body: Term


@dataclass(frozen=True)
class PartialTy(Term):
    cofib: Disj
    carrier: Term


@dataclass(frozen=True)
class ExtTy(Term):
    binders: Tuple[str, ...]
    carrier: Term
    faces: Faces = ()


@dataclass(frozen=True)
class PLam(Term):
    binders: Tuple[str, ...]
    body: Term


@dataclass(frozen=True)
class PApp(Term):
    fn: Term
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class SubTy(Term):
    carrier: Term
    cofib: Disj
    faces: Faces = ()


@dataclass(frozen=True)
class InS(Term):
    cofib: Disj
    body: Term


@dataclass(frozen=True)
class OutS(Term):
    cofib: Disj
    body: Term


@dataclass(frozen=True)
class Coe(Term):
    line: Term
    cofib: Disj


@dataclass(frozen=True)
class HComp(Term):
    carrier: Term
    walls: Term
    floor: Term
    cofib: Disj


ZERO = IConst(0)
ONE = IConst(1)
UNIV = Univ()
INTERVAL = Interval()


def fresh(base, avoid):
    """Return ``base`` or a numbered variant of it that is not in ``avoid``."""
    if base not in avoid:
        return base
    root = base.rstrip("0123456789") or base
    n = 1
    while f"{root}{n}" in avoid:
        n += 1
    return f"{root}{n}"


# Free variables


def free_vars(t):
    """Return ``(term variables, interval variables)`` occurring free in ``t``."""
    terms, intervals = set(), set()
    _collect(t, frozenset(), False, terms, intervals)
    return terms, intervals


def free_names(t):
    terms, intervals = free_vars(t)
    return terms | intervals


def cofib_vars(c):
    if isinstance(c, Clauses):
        return {cond.var for conj in c.conjs for cond in conj.conds}
    return set()


def _collect_conj(conj, bound, intervals):
    for cond in conj.conds:
        if cond.var not in bound:
            intervals.add(cond.var)


def _collect_faces(faces, bound, terms, intervals):
    for conj, body in faces:
        _collect_conj(conj, bound, intervals)
        _collect(body, bound, False, terms, intervals)


def _collect(t, bound, interval_pos, terms, intervals):
    match t:
        case Var(name):
            if name not in bound:
                (intervals if interval_pos else terms).add(name)
        case IConst() | Univ() | Interval():
            pass
        case INeg(body):
            _collect(body, bound, True, terms, intervals)
        case IAnd(left, right) | IOr(left, right):
            _collect(left, bound, True, terms, intervals)
            _collect(right, bound, True, terms, intervals)
        case Lam(binder, body):
            _collect(body, bound | {binder}, False, terms, intervals)
        case App(fn, arg):
            _collect(fn, bound, False, terms, intervals)
            _collect(arg, bound, False, terms, intervals)
        case Pi(binder, dom, cod) | Sigma(binder, dom, cod):
            _collect(dom, bound, False, terms, intervals)
            _collect(cod, bound | {binder}, False, terms, intervals)
        case Pair(a, b):
            _collect(a, bound, False, terms, intervals)
            _collect(b, bound, False, terms, intervals)
        case Fst(p) | Snd(p):
            _collect(p, bound, False, terms, intervals)
        case PartialEl(faces):
            _collect_faces(faces, bound, terms, intervals)
        case TrivialPartial(body):
            _collect(body, bound, False, terms, intervals)
        case PartialTy(cofib, carrier):
            intervals.update(cofib_vars(cofib) - bound)
            _collect(carrier, bound, False, terms, intervals)
        case ExtTy(binders, carrier, faces):
            inner = bound | set(binders)
            _collect(carrier, inner, False, terms, intervals)
            _collect_faces(faces, inner, terms, intervals)
        case PLam(binders, body):
            _collect(body, bound | set(binders), False, terms, intervals)
        case PApp(fn, args):
            _collect(fn, bound, False, terms, intervals)
            for arg in args:
                _collect(arg, bound, True, terms, intervals)
        case SubTy(carrier, cofib, faces):
            _collect(carrier, bound, False, terms, intervals)
            intervals.update(cofib_vars(cofib) - bound)
            _collect_faces(faces, bound, terms, intervals)
        case InS(cofib, body) | OutS(cofib, body):
            intervals.update(cofib_vars(cofib) - bound)
            _collect(body, bound, False, terms, intervals)
        case Coe(line, cofib):
            _collect(line, bound, False, terms, intervals)
            intervals.update(cofib_vars(cofib) - bound)
        case HComp(carrier, walls, floor, cofib):
            _collect(carrier, bound, False, terms, intervals)
            _collect(walls, bound, False, terms, intervals)
            _collect(floor, bound, False, terms, intervals)
            intervals.update(cofib_vars(cofib) - bound)
        case _:
            raise TypeError(f"not a term: {t!r}")


# Substitution


def subst(t, bindings: Mapping[str, Term]):
    """
    Simultaneous capture-avoiding substitution.

    Faces are rewritten through ``cofib.subst_conj`` but never reduced: a face
    that becomes satisfied stays a face with the empty conjunction, and the
    partial element around it is left for the evaluator to collapse. A face
    whose condition is contradicted is dropped, since no face can express it.
    """
    if not bindings:
        return t
    match t:
        case Var(name):
            return bindings.get(name, t)
        case IConst() | Univ() | Interval():
            return t
        case INeg(body):
            return INeg(subst(body, bindings), span=t.span)
        case IAnd(left, right):
            return IAnd(subst(left, bindings), subst(right, bindings), span=t.span)
        case IOr(left, right):
            return IOr(subst(left, bindings), subst(right, bindings), span=t.span)
        case Lam(binder, body):
            (binder,), inner = _enter((binder,), bindings, body)
            return Lam(binder, subst(body, inner), span=t.span)
        case App(fn, arg):
            return App(subst(fn, bindings), subst(arg, bindings), span=t.span)
        case Pi(binder, dom, cod):
            (b,), inner = _enter((binder,), bindings, cod)
            return Pi(b, subst(dom, bindings), subst(cod, inner), span=t.span)
        case Sigma(binder, dom, cod):
            (b,), inner = _enter((binder,), bindings, cod)
            return Sigma(b, subst(dom, bindings), subst(cod, inner), span=t.span)
        case Pair(a, b):
            return Pair(subst(a, bindings), subst(b, bindings), span=t.span)
        case Fst(p):
            return Fst(subst(p, bindings), span=t.span)
        case Snd(p):
            return Snd(subst(p, bindings), span=t.span)
        case PartialEl(faces):
            return PartialEl(subst_faces(faces, bindings), span=t.span)
        case TrivialPartial(body):
            return TrivialPartial(subst(body, bindings), span=t.span)
        case PartialTy(cofib, carrier):
            return PartialTy(_subst_cofib(cofib, bindings), subst(carrier, bindings), span=t.span)
        case ExtTy(binders, carrier, faces):
            binders, inner = _enter(binders, bindings, carrier, PartialEl(faces))
            return ExtTy(binders, subst(carrier, inner), subst_faces(faces, inner), span=t.span)
        case PLam(binders, body):
            binders, inner = _enter(binders, bindings, body)
            return PLam(binders, subst(body, inner), span=t.span)
        case PApp(fn, args):
            return PApp(subst(fn, bindings), tuple(subst(a, bindings) for a in args), span=t.span)
        case SubTy(carrier, cofib, faces):
            return SubTy(
                subst(carrier, bindings),
                _subst_cofib(cofib, bindings),
                subst_faces(faces, bindings),
                span=t.span,
            )
        case InS(cofib, body):
            return InS(_subst_cofib(cofib, bindings), subst(body, bindings), span=t.span)
        case OutS(cofib, body):
            return OutS(_subst_cofib(cofib, bindings), subst(body, bindings), span=t.span)
        case Coe(line, cofib):
            return Coe(subst(line, bindings), _subst_cofib(cofib, bindings), span=t.span)
        case HComp(carrier, walls, floor, cofib):
            return HComp(
                subst(carrier, bindings),
                subst(walls, bindings),
                subst(floor, bindings),
                _subst_cofib(cofib, bindings),
                span=t.span,
            )
    raise TypeError(f"not a term: {t!r}")


def subst_faces(faces, bindings):
    from cubik import cofib

    result = []
    for conj, body in faces:
        body = subst(body, bindings)
        match cofib.subst_conj(conj, bindings):
            case Absurd():
                continue
            case Truth():
                result.append((Conj(), body))
            case Clauses(conjs):
                result.extend((c, body) for c in conjs)
    return tuple(result)


def _subst_cofib(c, bindings):
    from cubik import cofib

    return cofib.subst_cofib(c, bindings)


def _enter(binders, bindings, *bodies):
    """
    Move a substitution under ``binders``.

    Returns the (possibly renamed) binders and the substitution to apply to the
    bodies. Shadowed keys are dropped; a binder free in some replacement is
    renamed to a fresh name.
    """
    inner = {k: v for k, v in bindings.items() if k not in binders}
    if not inner:
        return tuple(binders), inner
    danger = set()
    for value in inner.values():
        danger |= free_names(value)
    if not danger.intersection(binders):
        return tuple(binders), inner
    avoid = danger | set(inner) | set(binders)
    for body in bodies:
        avoid |= free_names(body)
    renamed = []
    for b in binders:
        if b in danger:
            nb = fresh(b, avoid)
            avoid.add(nb)
            inner[b] = Var(nb)
            renamed.append(nb)
        else:
            renamed.append(b)
    return tuple(renamed), inner


# Alpha equivalence


def alpha_eq(a, b):
    """Equality up to renaming of bound variables; faces compare as ordered lists."""
    return _alpha(a, b, {}, {}, 0)


def _bind(env, names, depth):
    env = dict(env)
    for n in names:
        env[n] = depth
        depth += 1
    return env, depth


def _alpha_var(x, y, ea, eb):
    lx, ly = ea.get(x), eb.get(y)
    if lx is None and ly is None:
        return x == y
    return lx == ly


def _alpha_conj(c1, c2, ea, eb):
    return len(c1.conds) == len(c2.conds) and all(
        p.value == q.value and _alpha_var(p.var, q.var, ea, eb) for p, q in zip(c1.conds, c2.conds)
    )


def _alpha_cofib(c1, c2, ea, eb):
    if isinstance(c1, Clauses) and isinstance(c2, Clauses):
        return len(c1.conjs) == len(c2.conjs) and all(
            _alpha_conj(p, q, ea, eb) for p, q in zip(c1.conjs, c2.conjs)
        )
    return c1 == c2


def _alpha_faces(f1, f2, ea, eb, d):
    return len(f1) == len(f2) and all(
        _alpha_conj(c1, c2, ea, eb) and _alpha(u1, u2, ea, eb, d) for (c1, u1), (c2, u2) in zip(f1, f2)
    )


def _alpha(a, b, ea, eb, d):
    if type(a) is not type(b):
        return False
    match a:
        case Var(x):
            return _alpha_var(x, b.name, ea, eb)
        case IConst(v):
            return v == b.value
        case Univ() | Interval():
            return True
        case INeg(x) | Fst(x) | Snd(x) | TrivialPartial(x):
            return _alpha(x, _only_child(b), ea, eb, d)
        case IAnd(l, r) | IOr(l, r):
            return _alpha(l, b.left, ea, eb, d) and _alpha(r, b.right, ea, eb, d)
        case App(f, x):
            return _alpha(f, b.fn, ea, eb, d) and _alpha(x, b.arg, ea, eb, d)
        case Pair(x, y):
            return _alpha(x, b.fst, ea, eb, d) and _alpha(y, b.snd, ea, eb, d)
        case Lam(x, body):
            ea2, d2 = _bind(ea, (x,), d)
            eb2, _ = _bind(eb, (b.binder,), d)
            return _alpha(body, b.body, ea2, eb2, d2)
        case Pi(x, dom, cod) | Sigma(x, dom, cod):
            if not _alpha(dom, b.dom, ea, eb, d):
                return False
            ea2, d2 = _bind(ea, (x,), d)
            eb2, _ = _bind(eb, (b.binder,), d)
            return _alpha(cod, b.cod, ea2, eb2, d2)
        case PartialEl(faces):
            return _alpha_faces(faces, b.faces, ea, eb, d)
        case PartialTy(c, carrier):
            return _alpha_cofib(c, b.cofib, ea, eb) and _alpha(carrier, b.carrier, ea, eb, d)
        case ExtTy(xs, carrier, faces):
            if len(xs) != len(b.binders):
                return False
            ea2, d2 = _bind(ea, xs, d)
            eb2, _ = _bind(eb, b.binders, d)
            return _alpha(carrier, b.carrier, ea2, eb2, d2) and _alpha_faces(faces, b.faces, ea2, eb2, d2)
        case PLam(xs, body):
            if len(xs) != len(b.binders):
                return False
            ea2, d2 = _bind(ea, xs, d)
            eb2, _ = _bind(eb, b.binders, d)
            return _alpha(body, b.body, ea2, eb2, d2)
        case PApp(f, args):
            return (
                len(args) == len(b.args)
                and _alpha(f, b.fn, ea, eb, d)
                and all(_alpha(x, y, ea, eb, d) for x, y in zip(args, b.args))
            )
        case SubTy(carrier, c, faces):
            return (
                _alpha(carrier, b.carrier, ea, eb, d)
                and _alpha_cofib(c, b.cofib, ea, eb)
                and _alpha_faces(faces, b.faces, ea, eb, d)
            )
        case InS(c, body) | OutS(c, body):
            return _alpha_cofib(c, b.cofib, ea, eb) and _alpha(body, b.body, ea, eb, d)
        case Coe(line, c):
            return _alpha(line, b.line, ea, eb, d) and _alpha_cofib(c, b.cofib, ea, eb)
        case HComp(carrier, walls, floor, c):
            return (
                _alpha(carrier, b.carrier, ea, eb, d)
                and _alpha(walls, b.walls, ea, eb, d)
                and _alpha(floor, b.floor, ea, eb, d)
                and _alpha_cofib(c, b.cofib, ea, eb)
            )
    raise TypeError(f"not a term: {a!r}")


def _only_child(t):
    match t:
        case INeg(x) | Fst(x) | Snd(x) | TrivialPartial(x):
            return x
    raise TypeError(f"unexpected term: {t!r}")
