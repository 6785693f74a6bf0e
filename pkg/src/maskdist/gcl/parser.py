"""Recursive-descent parser and static resolver for guarded-command models.

Surface syntax::

    Global a, b: BOOL;
    Process P(x: BOOL) {
        s0, s1: BOOL;
        Initial: !s0 && !s1;
        Normative: true;
        [step] faulty s0 -> s1 = !s1, x = s0;
    }
    Main() {
        p1: P;
        run p1(a);
    }

Operator precedence, tightest first: ``!``, ``==``, ``&&``, ``||``.
"""

from ..errors import ParseError, ResolveError
from .lexer import tokenize
from .syntax import (
    Action, ActionKind, And, Assignment, Const, Eq, InstanceDecl, MainBlock, Not,
    Or, Paren, ProcessDecl, Program, RunStmt, Var, VarDecl,
)

RESERVED_LABELS = frozenset({"M", "tau"})


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers

    @property
    def tok(self):
        return self.tokens[self.i]

    def at(self, text):
        t = self.tok
        return t.kind in ("kw", "punct") and t.text == text

    def fail(self, expected):
        t = self.tok
        raise ParseError(f"unexpected {t.describe()}", t.line, t.col, expected)

    def expect(self, text):
        if not self.at(text):
            self.fail([text])
        t = self.tok
        self.i += 1
        return t

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self):
        t = self.tok
        if t.kind != "ident":
            self.fail(["identifier"])
        self.i += 1
        return t

    # grammar

    def program(self):
        start = self.tok.pos
        globals_, processes = [], []
        while True:
            if self.at("Global"):
                globals_.extend(self.global_decl())
            elif self.at("Process"):
                processes.append(self.process())
            elif self.at("Main"):
                break
            else:
                self.fail(["Global", "Process", "Main"])
        main = self.main()
        if self.tok.kind != "eof":
            self.fail(["end of input"])
        return Program(tuple(globals_), tuple(processes), main, start)

    def id_list(self):
        names = [self.ident()]
        while self.accept(","):
            names.append(self.ident())
        return names

    def var_decls(self):
        names = self.id_list()
        self.expect(":")
        self.expect("BOOL")
        self.expect(";")
        return [VarDecl(t.text, "BOOL", t.pos) for t in names]

    def global_decl(self):
        self.expect("Global")
        return self.var_decls()

    def process(self):
        start = self.expect("Process").pos
        name = self.ident()
        formals = []
        if self.accept("("):
            if not self.at(")"):
                formals.append(self.formal())
                while self.accept(","):
                    formals.append(self.formal())
            self.expect(")")
        self.expect("{")
        locals_ = []
        while self.tok.kind == "ident":
            locals_.extend(self.var_decls())
        self.expect("Initial")
        self.expect(":")
        initial = self.expr()
        self.expect(";")
        normative = Const(True)
        if self.accept("Normative"):
            self.expect(":")
            normative = self.expr()
            self.expect(";")
        actions = []
        while self.at("["):
            actions.append(self.action())
        if not actions:
            self.fail(["["])
        self.expect("}")
        return ProcessDecl(name.text, tuple(formals), tuple(locals_), initial,
                           normative, tuple(actions), start)

    def formal(self):
        name = self.ident()
        self.expect(":")
        self.expect("BOOL")
        return VarDecl(name.text, "BOOL", name.pos)

    def action(self):
        start = self.expect("[").pos
        label = self.ident()
        self.expect("]")
        kind = ActionKind.NORMAL
        if self.accept("faulty"):
            kind = ActionKind.FAULTY
        elif self.accept("internal"):
            kind = ActionKind.INTERNAL
        guard = self.expr()
        self.expect("->")
        assignments = [self.assignment()]
        while self.accept(","):
            assignments.append(self.assignment())
        self.expect(";")
        return Action(label.text, kind, guard, tuple(assignments), start)

    def assignment(self):
        target = self.ident()
        self.expect("=")
        return Assignment(target.text, self.expr(), target.pos)

    def main(self):
        start = self.expect("Main").pos
        self.expect("(")
        self.expect(")")
        self.expect("{")
        instances, runs = [], []
        while not self.at("}"):
            if self.at("run"):
                runs.append(self.run_stmt())
            elif self.tok.kind == "ident":
                name = self.ident()
                self.expect(":")
                proc = self.ident()
                self.expect(";")
                instances.append(InstanceDecl(name.text, proc.text, name.pos))
            else:
                self.fail(["run", "identifier", "}"])
        self.expect("}")
        return MainBlock(tuple(instances), tuple(runs), start)

    def run_stmt(self):
        start = self.expect("run").pos
        inst = self.ident()
        self.expect("(")
        actuals = []
        if not self.at(")"):
            actuals = [t.text for t in self.id_list()]
        self.expect(")")
        self.expect(";")
        return RunStmt(inst.text, tuple(actuals), start)

    # expressions

    def expr(self):
        left = self.conj()
        while self.at("||"):
            pos = self.tok.pos
            self.i += 1
            left = Or(left, self.conj(), pos)
        return left

    def conj(self):
        left = self.equality()
        while self.at("&&"):
            pos = self.tok.pos
            self.i += 1
            left = And(left, self.equality(), pos)
        return left

    def equality(self):
        left = self.unary()
        while self.at("=="):
            pos = self.tok.pos
            self.i += 1
            left = Eq(left, self.unary(), pos)
        return left

    def unary(self):
        if self.at("!"):
            pos = self.tok.pos
            self.i += 1
            return Not(self.unary(), pos)
        return self.atom()

    def atom(self):
        t = self.tok
        if self.accept("true"):
            return Const(True, t.pos)
        if self.accept("false"):
            return Const(False, t.pos)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return Paren(inner, t.pos)
        if t.kind == "ident":
            self.i += 1
            return Var(t.text, t.pos)
        self.fail(["!", "(", "true", "false", "identifier"])


def _check_vars(expr, scope):
    if isinstance(expr, Var):
        if expr.name not in scope:
            raise ResolveError(f"unknown identifier {expr.name!r}", *expr.pos)
    elif isinstance(expr, Not):
        _check_vars(expr.operand, scope)
    elif isinstance(expr, Paren):
        _check_vars(expr.inner, scope)
    elif isinstance(expr, (And, Or, Eq)):
        _check_vars(expr.left, scope)
        _check_vars(expr.right, scope)


def _declare(decls, seen):
    for d in decls:
        if d.name in seen:
            raise ResolveError(f"duplicate declaration of {d.name!r}", *d.pos)
        seen.add(d.name)


def resolve(program):
    """Check scoping and arity rules; return ``program`` unchanged if it is valid."""
    global_names = set()
    _declare(program.globals, global_names)

    proc_names = set()
    for proc in program.processes:
        if proc.name in proc_names:
            raise ResolveError(f"duplicate process {proc.name!r}", *proc.pos)
        proc_names.add(proc.name)
        scope = set(global_names)
        _declare(proc.formals, scope)
        _declare(proc.locals, scope)
        _check_vars(proc.initial, scope)
        _check_vars(proc.normative, scope)
        for action in proc.actions:
            if action.label in RESERVED_LABELS:
                raise ResolveError(f"action label {action.label!r} is reserved", *action.pos)
            _check_vars(action.guard, scope)
            assigned = set()
            for asg in action.assignments:
                if asg.target not in scope:
                    raise ResolveError(f"unknown identifier {asg.target!r}", *asg.pos)
                if asg.target in assigned:
                    raise ResolveError(f"{asg.target!r} assigned twice in one action", *asg.pos)
                assigned.add(asg.target)
                _check_vars(asg.value, scope)

    instances = {}
    for inst in program.main.instances:
        if inst.name in instances:
            raise ResolveError(f"duplicate instance {inst.name!r}", *inst.pos)
        if inst.process not in proc_names:
            raise ResolveError(f"unknown process {inst.process!r}", *inst.pos)
        instances[inst.name] = inst
    started = set()
    for run in program.main.runs:
        inst = instances.get(run.instance)
        if inst is None:
            raise ResolveError(f"unknown instance {run.instance!r}", *run.pos)
        if run.instance in started:
            raise ResolveError(f"instance {run.instance!r} is run twice", *run.pos)
        started.add(run.instance)
        proc = program.process(inst.process)
        if len(run.actuals) != len(proc.formals):
            raise ResolveError(
                f"process {proc.name!r} takes {len(proc.formals)} parameter(s), "
                f"{len(run.actuals)} given", *run.pos)
        for actual in run.actuals:
            if actual not in global_names:
                raise ResolveError(f"actual parameter {actual!r} is not a global variable", *run.pos)
    return program


def parse(text, filename=None):
    """Parse and resolve model source text into a :class:`Program`."""
    try:
        return resolve(_Parser(text).program())
    except (ParseError, ResolveError) as exc:
        exc.filename = filename
        raise


def parse_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), filename=str(path))
