from pathlib import Path

from cubik import surface, tyck
from cubik.context import Context

CORPUS = Path(__file__).resolve().parent / "corpus"


def corpus_path(name):
    return str(CORPUS / name)


def context(*assumptions, ctx=None):
    """Build a context from ``"x y : A"`` lines, in order."""
    ctx = ctx if ctx is not None else Context()
    for line in assumptions:
        names, ty = surface.parse_assumption(line)
        for name in names:
            ctx = ctx.extend(name, ty)
    return ctx


def load(name):
    """Check a corpus file; returns the parsed source, the final context and the results."""
    source = surface.parse((CORPUS / name).read_text(), corpus_path(name))
    ctx, results = tyck.check_file(source.declarations)
    return source, ctx, results


def parameters(ctx, declaration):
    for name, ty in declaration.params:
        ctx = ctx.extend(name, ty)
    return ctx


term = surface.parse_expr
