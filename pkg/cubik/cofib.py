"""
Cofibrations: well-formedness, simplification, substitution, entailment and
equivalence.

A cofibration is kept in disjunctive normal form. Simplification deduplicates
conditions, drops self-contradictory conjunctions and collapses to ``Truth``
as soon as one conjunction is empty.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from cubik import interval
from cubik.errors import InternalError
from cubik.syntax import (
    ABSURD,
    TRUTH,
    Absurd,
    Clauses,
    Cond,
    Conj,
    IConst,
    INeg,
    Truth,
    Var,
)


def clauses(c):
    """The conjunctions of ``c``; ``Truth`` is the single empty conjunction."""
    match c:
        case Absurd():
            return ()
        case Truth():
            return (Conj(),)
        case Clauses(conjs):
            return conjs
    raise InternalError(f"not a cofibration: {c!r}")


def cond(var, value):
    return Clauses((Conj((Cond(var, value),)),))


def of_conj(conj):
    simplified = simplify_conj(conj)
    if isinstance(simplified, Absurd):
        return ABSURD
    return TRUTH if not simplified.conds else Clauses((simplified,))


def variables(c):
    return {k.var for conj in clauses(c) for k in conj.conds}


def well_formed(psi: Iterable[str], c):
    """Every condition must mention an interval variable of ``psi``."""
    scope = set(psi)
    return variables(c) <= scope


def simplify_conj(conj):
    """Deduplicate and sort by variable; ``ABSURD`` when some ``x = 0`` meets ``x = 1``."""
    seen = {}
    for k in conj.conds:
        previous = seen.get(k.var)
        if previous is None:
            seen[k.var] = k.value
        elif previous != k.value:
            return ABSURD
    return Conj(tuple(Cond(var, seen[var]) for var in sorted(seen)))


def simplify(c):
    match c:
        case Absurd() | Truth():
            return c
    kept = []
    for conj in clauses(c):
        simplified = simplify_conj(conj)
        if isinstance(simplified, Absurd):
            continue
        if not simplified.conds:
            return TRUTH
        if simplified not in kept:
            kept.append(simplified)
    return Clauses(tuple(kept)) if kept else ABSURD


def disj_or(*cs):
    conjs = []
    for c in cs:
        if isinstance(c, Truth):
            return TRUTH
        conjs.extend(clauses(c))
    return simplify(Clauses(tuple(conjs))) if conjs else ABSURD


def conj_and(a, b):
    return Conj(a.conds + b.conds)


def disj_and(a, b):
    conjs = tuple(conj_and(p, q) for p in clauses(a) for q in clauses(b))
    return simplify(Clauses(conjs)) if conjs else ABSURD


def conj_to_subst(conj):
    """Read a simplified conjunction as the substitution it denotes."""
    if isinstance(conj, Absurd):
        raise InternalError("an absurd conjunction has no substitution")
    return {k.var: IConst(k.value) for k in conj.conds}


def _subst_cond(k, replacement):
    match replacement:
        case None:
            return Clauses((Conj((k,)),))
        case Var(name):
            return cond(name, k.value)
        case IConst(value):
            return TRUTH if value == k.value else ABSURD
    if not interval.is_iexpr(replacement):
        raise InternalError(f"cannot substitute a non-interval term into the condition {k.var} = {k.value}")
    return interval.to_cofib(replacement if k.value == 1 else INeg(replacement))


def subst_conj(conj, s: Mapping[str, object]):
    result = TRUTH
    for k in conj.conds:
        result = disj_and(result, _subst_cond(k, s.get(k.var)))
        if isinstance(result, Absurd):
            return ABSURD
    return result


def subst_cofib(c, s: Mapping[str, object]):
    """
    Apply an interval substitution: renamed variables are renamed, satisfied
    conditions are dropped, contradicted conjunctions are dropped. Compound
    interval expressions go through the interval/cofibration isomorphism.
    """
    match c:
        case Absurd() | Truth():
            return c
    if not s or not (variables(c) & set(s)):
        return simplify(c)
    return disj_or(*(subst_conj(conj, s) for conj in clauses(c)))


def entails(theta, c):
    """Does every point of the face ``theta`` lie in ``c``?"""
    if isinstance(theta, Absurd):
        return True
    return isinstance(subst_cofib(c, conj_to_subst(theta)), Truth)


def cofib_equiv(a, b):
    """Mutual entailment, conjunction by conjunction."""
    a, b = simplify(a), simplify(b)
    return all(entails(theta, b) for theta in clauses(a)) and all(entails(theta, a) for theta in clauses(b))


def meet_conj(a, b):
    return simplify_conj(conj_and(a, b))
