"""
The ``cubik`` command: check files, normalize definitions, or run a REPL.

    cubik check FILE
    cubik normalize FILE --def NAME
    cubik repl

Results go to standard output, diagnostics to standard error. Exit codes:
0 success, 1 type error, 2 parse error, 3 I/O error, 4 unknown definition.
"""

import logging
import sys

from django.core.management.base import BaseCommand, CommandError, handle_default_options

from cubik import evaluator, surface, tyck
from cubik.context import Context
from cubik.diagnostics import Diagnostic
from cubik.errors import CannotInfer, DuplicateDefinition, KernelError, ParseError

logger = logging.getLogger(__name__)

TYPE_ERROR = 1
PARSE_ERROR = 2
IO_ERROR = 3
UNKNOWN_NAME = 4

REPL_USAGE = (
    "usage: :check <expr> : <type> | :infer <expr> | :norm <expr> | :conv <expr> == <expr> : <type> | "
    ":load <file> | :assume <names> : <type> | :restrict <cofibration> | :quit"
)


class Command(BaseCommand):
    help = "Type-check, normalize and explore cubical type theory files."
    requires_system_checks = []
    stealth_options = ("stdin",)

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest="action", required=True)

        check = actions.add_parser("check", help="Check every declaration of a file.")
        check.add_argument("path")

        normalize = actions.add_parser("normalize", help="Print the normal form of a definition.")
        normalize.add_argument("path")
        normalize.add_argument("--def", dest="name", required=True, help="Name of the definition.")

        actions.add_parser("repl", help="Start an interactive session.")

    def run_from_argv(self, argv):
        # Diagnostics are already on stderr: exit with the code alone.
        self._called_from_command_line = True
        parser = self.create_parser(argv[0], argv[1])
        options = parser.parse_args(argv[2:])
        cmd_options = vars(options)
        args = cmd_options.pop("args", ())
        handle_default_options(options)
        try:
            self.execute(*args, **cmd_options)
        except CommandError as e:
            if options.traceback:
                raise
            sys.exit(e.returncode)

    def handle(self, *args, **options):
        action = options["action"]
        if action == "check":
            self.check(options["path"])
        elif action == "normalize":
            self.normalize(options["path"], options["name"])
        else:
            self.repl(options.get("stdin") or sys.stdin)

    # Files

    def report(self, error, path, text):
        self.stderr.write(Diagnostic.from_error(error, path, text).format())

    def read(self, path):
        try:
            with open(path, encoding="utf-8") as f:
                return f.read()
        except (OSError, UnicodeDecodeError) as e:
            self.stderr.write(f"{path}: error[E-IO]: {getattr(e, 'strerror', None) or e}")
            raise CommandError(f"cannot read {path}", returncode=IO_ERROR)

    def load(self, path, ctx=None):
        """Read, parse and check ``path``; returns the source and the resulting context."""
        logger.info("checking %s", path)
        text = self.read(path)
        try:
            source = surface.parse(text, path)
        except ParseError as e:
            self.report(e, path, text)
            raise CommandError(f"{path} does not parse", returncode=PARSE_ERROR)
        ctx, results = tyck.check_file(source.declarations, ctx)
        return source, ctx, results

    def check(self, path):
        source, _, results = self.load(path)
        rejected = 0
        for declaration, error in results:
            if error is None:
                self.stdout.write(f"OK {declaration.name}")
            else:
                rejected += 1
                self.report(error, path, source.text)
        if rejected:
            raise CommandError(f"{rejected} declaration(s) rejected", returncode=TYPE_ERROR)

    def normalize(self, path, name):
        source, ctx, results = self.load(path)
        errors = [error for _, error in results if error is not None]
        for error in errors:
            self.report(error, path, source.text)
        if errors:
            raise CommandError(f"{len(errors)} declaration(s) rejected", returncode=TYPE_ERROR)

        declaration = source.declaration(name)
        if declaration is None:
            self.stderr.write(f"{path}: error: no definition named {name}")
            raise CommandError(f"unknown definition {name}", returncode=UNKNOWN_NAME)

        params, (body,) = tyck.open_telescope(ctx, declaration.params, declaration.body)
        inner = ctx
        for param, ty in params:
            inner = inner.extend(param, ty)
        self.stdout.write(surface.pretty(evaluator.normalize(inner, body)))

    # REPL

    def repl(self, stdin):
        session = Session(self)
        for raw in stdin:
            line = raw.strip()
            if not line or line.startswith("--"):
                continue
            if not session.run(line):
                return


class Session:
    """State of a REPL session: the context built by ``:load``, ``:assume`` and ``:restrict``."""

    def __init__(self, command):
        self.command = command
        self.ctx = Context()

    def say(self, text):
        self.command.stdout.write(text)

    def run(self, line):
        """Run one command; returns ``False`` once the session should end."""
        keyword, _, argument = line.partition(" ")
        argument = argument.strip()
        handler = {
            ":check": self.check,
            ":infer": self.infer,
            ":norm": self.norm,
            ":conv": self.conv,
            ":load": self.load,
            ":assume": self.assume,
            ":restrict": self.restrict,
        }.get(keyword)

        if keyword == ":quit":
            return False
        if handler is None or not argument:
            self.command.stderr.write(REPL_USAGE)
            return True
        try:
            handler(argument)
        except KernelError as e:
            self.command.stderr.write(Diagnostic.from_error(e, "<repl>", argument).format())
        except CommandError:
            pass
        return True

    def check(self, argument):
        term, ty = surface.parse_typed(argument)
        tyck.check_type(self.ctx, ty)
        tyck.check(self.ctx, term, ty)
        self.say("ok")

    def infer(self, argument):
        term = surface.parse_expr(argument)
        ty = tyck.infer(self.ctx, term)
        self.say(surface.pretty(evaluator.normalize(self.ctx, ty)))

    def norm(self, argument):
        term = surface.parse_expr(argument)
        try:
            tyck.infer(self.ctx, term)
        except CannotInfer:
            pass
        self.say(surface.pretty(evaluator.normalize(self.ctx, term)))

    def conv(self, argument):
        left, right, ty = surface.parse_conversion(argument)
        tyck.check_type(self.ctx, ty)
        tyck.check(self.ctx, left, ty)
        tyck.check(self.ctx, right, ty)
        self.say("yes" if tyck.convert(self.ctx, left, right, ty) else "no")

    def load(self, argument):
        source, ctx, results = self.command.load(argument, self.ctx)
        for _, error in results:
            if error is not None:
                self.command.report(error, argument, source.text)
        self.ctx = ctx
        accepted = sum(1 for _, error in results if error is None)
        self.say(f"loaded {accepted} definition(s) from {argument}")

    def assume(self, argument):
        names, ty = surface.parse_assumption(argument)
        defined = [name for name in names if name in self.ctx.definitions]
        if defined:
            raise DuplicateDefinition(f"{defined[0]} is already defined; assumptions cannot shadow definitions")
        tyck.check_type(self.ctx, ty)
        for name in names:
            self.ctx = self.ctx.extend(name, ty)
        self.say("assumed " + " ".join(names))

    def restrict(self, argument):
        c = surface.parse_cofib(argument)
        tyck.check_cofib(self.ctx, c)
        self.ctx = self.ctx.under(c)
        self.say(f"restricted to {surface.pretty_cofib(c)}")
