"""
The free De Morgan algebra on interval variables.

An interval expression normalizes to an antichain of clauses: a disjunction
of conjunctions of literals ``x`` / ``~x``. The free De Morgan algebra is the
free distributive lattice on the literals, so the antichain is unique and
structural equality of normal forms decides equality in the algebra. ``x`` and
``~x`` are independent atoms: ``x /\\ ~x`` is not ``0``.

The four-element algebra ``DM4`` generates the variety of De Morgan algebras,
so evaluating in it gives an independent, brute-force decision procedure that
the test-suite checks the normalizer against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Tuple

from cubik.errors import InternalError
from cubik.syntax import (
    ABSURD,
    ONE,
    TRUTH,
    ZERO,
    Absurd,
    Clauses,
    Cond,
    Conj,
    IAnd,
    IConst,
    INeg,
    IOr,
    Truth,
    Var,
)

# (name, negated); the positive literal sorts first
Literal = Tuple[str, bool]


@dataclass(frozen=True)
class INormal:
    """Canonical antichain of clauses. ``()`` is 0, ``((),)`` is 1."""

    clauses: Tuple[Tuple[Literal, ...], ...]

    @property
    def is_zero(self):
        return not self.clauses

    @property
    def is_one(self):
        return self.clauses == ((),)


NORMAL_ZERO = INormal(())
NORMAL_ONE = INormal(((),))


def is_iexpr(t):
    match t:
        case IConst() | Var():
            return True
        case INeg(body):
            return is_iexpr(body)
        case IAnd(left, right) | IOr(left, right):
            return is_iexpr(left) and is_iexpr(right)
    return False


def _dnf(e, negated):
    match e:
        case IConst(value):
            return frozenset({frozenset()}) if value ^ negated else frozenset()
        case Var(name):
            return frozenset({frozenset({(name, negated)})})
        case INeg(body):
            return _dnf(body, not negated)
        case IAnd(left, right):
            combine = _join if negated else _meet
            return combine(_dnf(left, negated), _dnf(right, negated))
        case IOr(left, right):
            combine = _meet if negated else _join
            return combine(_dnf(left, negated), _dnf(right, negated))
    raise InternalError(f"not an interval expression: {e!r}")


def _meet(a, b):
    return frozenset(x | y for x in a for y in b)


def _join(a, b):
    return a | b


def _absorb(clauses):
    return [c for c in clauses if not any(d < c for d in clauses)]


def inorm(e) -> INormal:
    """Normalize ``e``: push negations to literals, distribute, absorb, sort."""
    clauses = _absorb(_dnf(e, False))
    return INormal(tuple(sorted(tuple(sorted(c)) for c in clauses)))


def embed(n: INormal):
    """Read a normal form back as an interval expression."""
    if n.is_zero:
        return ZERO
    if n.is_one:
        return ONE

    def literal(lit):
        name, negated = lit
        return INeg(Var(name)) if negated else Var(name)

    def clause(c):
        return reduce(IAnd, (literal(lit) for lit in c))

    return reduce(IOr, (clause(c) for c in n.clauses))


def normalize(e):
    return embed(inorm(e))


def iconv(a, b):
    """Decide equality of two interval expressions in the free De Morgan algebra."""
    return inorm(a) == inorm(b)


def to_cofib(e):
    """
    Send an interval expression to a cofibration: ``x`` to ``x = 1``, ``~x`` to
    ``x = 0``, homomorphically on ``/\\`` and ``\\/``. A clause holding both
    ``x`` and ``~x`` names no face and is dropped.
    """
    n = inorm(e)
    if n.is_zero:
        return ABSURD
    if n.is_one:
        return TRUTH
    conjs = []
    for clause in n.clauses:
        names = [name for name, _ in clause]
        if len(names) != len(set(names)):
            continue
        conjs.append(Conj(tuple(Cond(name, 0 if negated else 1) for name, negated in clause)))
    return Clauses(tuple(conjs)) if conjs else ABSURD


def from_cofib(c):
    """Inverse of ``to_cofib``: ``x = 1`` to ``x``, ``x = 0`` to ``~x``."""
    match c:
        case Absurd():
            return ZERO
        case Truth():
            return ONE
        case Clauses(conjs):

            def cond(k):
                return Var(k.var) if k.value == 1 else INeg(Var(k.var))

            def conj(j):
                return reduce(IAnd, (cond(k) for k in j.conds)) if j.conds else ONE

            return reduce(IOr, (conj(j) for j in conjs))
    raise InternalError(f"not a cofibration: {c!r}")


# DM4: 0 = (0, 0), a = (1, 0), b = (0, 1), 1 = (1, 1); meet and join are
# componentwise and negation swaps and flips the components, fixing a and b.

DM4 = ((0, 0), (1, 0), (0, 1), (1, 1))


def dm4_eval(e, assignment):
    match e:
        case IConst(value):
            return (value, value)
        case Var(name):
            return assignment[name]
        case INeg(body):
            p, q = dm4_eval(body, assignment)
            return (1 - q, 1 - p)
        case IAnd(left, right):
            (p1, q1), (p2, q2) = dm4_eval(left, assignment), dm4_eval(right, assignment)
            return (p1 & p2, q1 & q2)
        case IOr(left, right):
            (p1, q1), (p2, q2) = dm4_eval(left, assignment), dm4_eval(right, assignment)
            return (p1 | p2, q1 | q2)
    raise InternalError(f"not an interval expression: {e!r}")


def variables(e):
    match e:
        case Var(name):
            return {name}
        case INeg(body):
            return variables(body)
        case IAnd(left, right) | IOr(left, right):
            return variables(left) | variables(right)
    return set()


def dm4_equal(a, b):
    """Decide equality by evaluating under every assignment into DM4."""
    names = sorted(variables(a) | variables(b))
    for values in itertools.product(DM4, repeat=len(names)):
        assignment = dict(zip(names, values))
        if dm4_eval(a, assignment) != dm4_eval(b, assignment):
            return False
    return True
