from .syntax import ActionKind, And, Const, Eq, Not, Or, Paren, Var

# binding strength; larger binds tighter
_PREC = {Or: 1, And: 2, Eq: 3}


def format_expr(expr, parent=0):
    if isinstance(expr, Const):
        return "true" if expr.value else "false"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Paren):
        return "(" + format_expr(expr.inner) + ")"
    if isinstance(expr, Not):
        inner = expr.operand
        text = format_expr(inner, 4)
        return "!" + text
    prec = _PREC[type(expr)]
    op = {Or: "||", And: "&&", Eq: "=="}[type(expr)]
    # left-associative: the right operand needs parens at equal precedence
    text = f"{format_expr(expr.left, prec)} {op} {format_expr(expr.right, prec + 1)}"
    if prec < parent:
        text = "(" + text + ")"
    return text


def _decl_line(decls):
    return ", ".join(d.name for d in decls) + ": BOOL;"


def pretty_print(program):
    out = []
    if program.globals:
        out.append("Global " + _decl_line(program.globals))
        out.append("")
    for proc in program.processes:
        header = f"Process {proc.name}"
        if proc.formals:
            header += "(" + ", ".join(f"{f.name}: BOOL" for f in proc.formals) + ")"
        out.append(header + " {")
        if proc.locals:
            out.append("\t" + _decl_line(proc.locals))
        out.append(f"\tInitial: {format_expr(proc.initial)};")
        out.append(f"\tNormative: {format_expr(proc.normative)};")
        for action in proc.actions:
            modifier = "" if action.kind is ActionKind.NORMAL else action.kind.value + " "
            body = ", ".join(f"{a.target} = {format_expr(a.value)}" for a in action.assignments)
            out.append(f"\t[{action.label}] {modifier}{format_expr(action.guard)} -> {body};")
        out.append("}")
        out.append("")
    out.append("Main() {")
    for inst in program.main.instances:
        out.append(f"\t{inst.name}: {inst.process};")
    for run in program.main.runs:
        out.append(f"\trun {run.instance}({', '.join(run.actuals)});")
    out.append("}")
    return "\n".join(out) + "\n"
