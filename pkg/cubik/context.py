"""
Typing contexts.

One ordered sequence holds interval and term bindings alike; the interval
part (Psi) is a computed view. Earlier declarations of a file are kept
alongside as definitions that the evaluator unfolds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

from cubik.syntax import INTERVAL, TRUTH, Disj, Interval, Term, subst


@dataclass(frozen=True)
class Binding:
    name: str
    type: Optional[Term]

    @property
    def is_interval(self):
        return isinstance(self.type, Interval)


@dataclass(frozen=True)
class Definition:
    """A checked declaration: ``params`` are the telescope, ``type``/``body`` are closed over it."""

    name: str
    type: Term
    body: Term
    params: Tuple[Tuple[str, Term], ...] = ()
    span: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class Context:
    bindings: Tuple[Binding, ...] = ()
    definitions: Mapping[str, Definition] = field(default_factory=lambda: MappingProxyType({}))
    restriction: Disj = TRUTH

    def extend(self, name, type_):
        return replace(self, bindings=self.bindings + (Binding(name, type_),))

    def extend_intervals(self, names):
        ctx = self
        for name in names:
            ctx = ctx.extend(name, INTERVAL)
        return ctx

    def define(self, definition):
        definitions = dict(self.definitions)
        definitions[definition.name] = definition
        return replace(self, definitions=MappingProxyType(definitions))

    def under(self, restriction):
        return replace(self, restriction=restriction)

    def lookup(self, name) -> Optional[Binding]:
        for binding in reversed(self.bindings):
            if binding.name == name:
                return binding
        return None

    def is_local(self, name):
        return self.lookup(name) is not None

    def definition(self, name) -> Optional[Definition]:
        if self.is_local(name):
            return None
        return self.definitions.get(name)

    @property
    def psi(self):
        return tuple(b.name for b in self.bindings if b.is_interval)

    def names(self):
        return {b.name for b in self.bindings} | set(self.definitions)

    def restrict(self, s):
        """Apply an interval substitution to every type in the context."""
        if not s:
            return self
        bindings = tuple(
            Binding(b.name, subst(b.type, s) if b.type is not None and not b.is_interval else b.type)
            for b in self.bindings
        )
        return replace(self, bindings=bindings)
