"""Generators for the bundled case-study models.

Each ``*_impl`` function returns guarded-command source for a fault-tolerant
implementation and each ``*_nominal`` the matching fault-free system.  The
files under ``corpus/`` are produced by ``tools/gen_corpus.py`` from these.
"""

from itertools import combinations
from math import ceil, log2


def _names(prefix, n, start=0):
    return [f"{prefix}{k}" for k in range(start, start + n)]


def majority(terms):
    """DNF that holds when a strict majority of ``terms`` holds."""
    need = len(terms) // 2 + 1
    return " || ".join("(" + " && ".join(c) + ")" for c in combinations(terms, need))


def _bits_equal(bits, value):
    """Conjunction stating that the big-endian bit vector ``bits`` equals ``value``."""
    width = len(bits)
    lits = []
    for pos, b in enumerate(bits):
        on = value >> (width - 1 - pos) & 1
        lits.append(b if on else "!" + b)
    return " && ".join(lits) if lits else "true"


def _assign_bits(bits, value):
    width = len(bits)
    return [f"{b} = {'true' if value >> (width - 1 - pos) & 1 else 'false'}"
            for pos, b in enumerate(bits)]


# -- redundant memory cell ------------------------------------------------------

def memory_nominal():
    return """\
// a one-bit memory cell: reads return the last value written
Process Memory {
\tw: BOOL; // last value written
\tr: BOOL; // value a read returns
\tInitial: w && r;
\tNormative: w == r;
\t[write] true -> w = !w, r = !r;
\t[read0] !r -> r = r;
\t[read1] r -> r = r;
}

Main() {
\tm1: Memory;
\trun m1();
}
"""


def memory_impl(bits):
    cells = _names("c", bits)
    out = [f"// a memory cell stored in {bits} redundant bits; reads return the majority",
           "Process Memory {",
           "\tw: BOOL; // last value written",
           "\tr: BOOL; // majority of the cells",
           f"\t{', '.join(cells)}: BOOL;",
           f"\tInitial: w && r && {' && '.join(cells)};",
           "\tNormative: " + " && ".join(f"{a} == {b}" for a, b in zip(cells, cells[1:]))
           + " && w == r;",
           "\t[write] true -> w = !w, " + ", ".join(f"{c} = !{c}" for c in cells) + ", r = !r;",
           "\t[read0] !r -> r = r;",
           "\t[read1] r -> r = r;"]
    for k, c in enumerate(cells):
        flipped = [f"!{x}" if x == c else x for x in cells]
        out.append(f"\t[fail{k + 1}] faulty true -> {c} = !{c}, r = {majority(flipped)};")
    out += ["}", "", "Main() {", "\tm1: Memory;", "\trun m1();", "}"]
    return "\n".join(out) + "\n"


# -- N-modular redundancy -------------------------------------------------------

def nmr_nominal():
    return """\
// a single perfect module feeding the voter
Global i0: BOOL;

Process Voter {
\tInitial: !i0;
\tNormative: true;
\t[vote] i0 -> i0 = i0;
}

Process Environment {
\tInitial: !i0;
\tNormative: true;
\t[input0] true -> i0 = false;
\t[input1] true -> i0 = true;
}

Main() {
\tv0: Voter;
\te0: Environment;
\trun v0();
\trun e0();
}
"""


def nmr_impl(modules):
    inputs = _names("i", modules)
    none = " && ".join(f"!{i}" for i in inputs)
    out = [f"// {modules} modules whose outputs feed a majority voter",
           f"Global {', '.join(inputs)}: BOOL;",
           "",
           "Process Module(out: BOOL) {",
           f"\tInitial: {none};",
           "\tNormative: true;",
           "\t[fail] faulty true -> out = !out;",
           "}",
           "",
           "Process Voter {",
           f"\tInitial: {none};",
           "\tNormative: true;",
           f"\t[vote] {majority(inputs)} -> i0 = i0;",
           "}",
           "",
           "Process Environment {",
           f"\tInitial: {none};",
           "\tNormative: true;",
           "\t[input0] true -> " + ", ".join(f"{i} = false" for i in inputs) + ";",
           "\t[input1] true -> " + ", ".join(f"{i} = true" for i in inputs) + ";",
           "}",
           "",
           "Main() {"]
    out += [f"\tm{k}: Module;" for k in range(modules)]
    out += ["\tv0: Voter;", "\te0: Environment;"]
    out += [f"\trun m{k}({i});" for k, i in enumerate(inputs)]
    out += ["\trun v0();", "\trun e0();", "}"]
    return "\n".join(out) + "\n"


# -- dining philosophers --------------------------------------------------------
# Only progress is observable: every ordinary action reports the same `step`
# event, so the nominal system can be told apart from a faulty one only once
# the table deadlocks.

def _phil(name, first, second, faulty):
    lines = [
        f"Process {name}(forkL: BOOL, forkR: BOOL) {{",
        "\ts0, s1: BOOL; // thinking 00, hungry 01, eating 10",
        "\thasL, hasR: BOOL;",
        "\tInitial: !s0 && !s1 && !hasL && !hasR && forkL && forkR;",
        f"\tNormative: !(has{second} && !has{first});",
        "\t[step] !s0 && !s1 -> s1 = true;",
        f"\t[step] !s0 && s1 && fork{first} && !hasL && !hasR -> fork{first} = false, has{first} = true;",
        f"\t[step] !s0 && s1 && has{first} && fork{second} && !has{second} -> "
        f"fork{second} = false, has{second} = true;",
    ]
    if faulty:
        # picking up the wrong fork first, as an odd philosopher would
        lines.append("\t[getLeft] faulty !s0 && s1 && forkL && !hasL && !hasR -> "
                     "forkL = false, hasL = true;")
        lines.append("\t[step] !s0 && s1 && hasL && forkR && !hasR -> forkR = false, hasR = true;")
    lines += [
        "\t[step] !s0 && s1 && hasL && hasR -> s1 = false, s0 = true;",
        "\t[step] s0 && !s1 -> s0 = false, forkL = true, forkR = true, hasL = false, hasR = false;",
        "}",
        "",
    ]
    return lines


def philosophers(n, faulty=True):
    forks = _names("fork", n)
    out = [f"// {n} philosophers: one takes the left fork first, the others the right",
           f"Global {', '.join(forks)}: BOOL;", ""]
    out += _phil("OddPhil", "L", "R", False)
    out += _phil("EvenPhil", "R", "L", faulty)
    out.append("Main() {")
    out.append("\tphil1: OddPhil;")
    out += [f"\tphil{k}: EvenPhil;" for k in range(2, n + 1)]
    for k in range(1, n + 1):
        out.append(f"\trun phil{k}({forks[(k - 2) % n]}, {forks[k - 1]});")
    out.append("}")
    return "\n".join(out) + "\n"


def philosophers_nominal(n):
    return philosophers(n, faulty=False)


def philosophers_impl(n):
    return philosophers(n, faulty=True)


# -- Byzantine generals ---------------------------------------------------------

def byzantine(generals, faulty=True):
    """One commander and ``generals - 1`` lieutenants exchanging one round of relays.

    Message ``cXA``/``cXR`` is the commander's attack/retreat order to
    lieutenant X; ``XYA``/``XYR`` is X's relay to Y.  A lieutenant decides once
    every message addressed to it has arrived and attacks on a strict majority.
    """
    lts = _names("g", generals - 1, start=2)
    msgs = []
    for x in lts:
        msgs += [f"c{x}A", f"c{x}R"]
    for x in lts:
        for y in lts:
            if x != y:
                msgs += [f"{x}{y}A", f"{x}{y}R"]
    others = len(lts) - 1
    out = [f"// Byzantine agreement among {generals} generals",
           f"Global {', '.join(msgs)}: BOOL;",
           "",
           "Process Commander {",
           "\ts0, s1: BOOL;",
           "\tInitial: s0 && !s1 && " + " && ".join(f"!{m}" for m in msgs) + ";",
           "\tNormative: true;",
           "\t[sA] s0 -> " + ", ".join(f"c{x}A = true" for x in lts) + ", s0 = false, s1 = true;",
           "\t[sR] s0 -> " + ", ".join(f"c{x}R = true" for x in lts) + ", s0 = false, s1 = true;",
           "\t[wait] s1 -> s1 = s1;",
           "}",
           ""]
    formals = ["attack", "retreat"]
    formals += [f"fw{k}A" for k in range(1, others + 1)] + [f"fw{k}R" for k in range(1, others + 1)]
    formals += [f"a{k}" for k in range(1, others + 1)] + [f"r{k}" for k in range(1, others + 1)]
    ins_a = ["attack"] + [f"a{k}" for k in range(1, others + 1)]
    ins_r = ["retreat"] + [f"r{k}" for k in range(1, others + 1)]
    arrived = " && ".join(f"({a} || {r})" for a, r in zip(ins_a, ins_r))
    fwd_a = ", ".join(f"fw{k}A = true" for k in range(1, others + 1))
    fwd_r = ", ".join(f"fw{k}R = true" for k in range(1, others + 1))
    traitor = " && !traitor" if faulty else ""
    local = "s0, s1, s2, traitor" if faulty else "s0, s1, s2"
    out += [f"Process Lieutenant({', '.join(f + ': BOOL' for f in formals)}) {{",
            f"\t{local}: BOOL;",
            "\tInitial: s0 && !s1 && !s2" + (" && !traitor" if faulty else "") + ";",
            "\tNormative: true;",
            f"\t[fA] s0 && attack{traitor} -> {fwd_a}, s0 = false, s1 = true;",
            f"\t[fR] s0 && retreat{traitor} -> {fwd_r}, s0 = false, s1 = true;"]
    if faulty:
        out += [f"\t[fA] s0 && attack && traitor -> {fwd_r}, s0 = false, s1 = true;",
                f"\t[fR] s0 && retreat && traitor -> {fwd_a}, s0 = false, s1 = true;",
                "\t[Betray] faulty s0 && !traitor -> traitor = true;"]
    out += [f"\t[Attack] s1 && {arrived} && ({majority(ins_a)}) -> s1 = false, s2 = true;",
            f"\t[Retreat] s1 && {arrived} && !({majority(ins_a)}) -> s1 = false, s2 = true;",
            "}",
            "",
            "Main() {",
            "\tg1: Commander;"]
    out += [f"\t{x}: Lieutenant;" for x in lts]
    out.append("\trun g1();")
    for x in lts:
        peers = [y for y in lts if y != x]
        actuals = [f"c{x}A", f"c{x}R"]
        actuals += [f"{x}{y}A" for y in peers] + [f"{x}{y}R" for y in peers]
        actuals += [f"{y}{x}A" for y in peers] + [f"{y}{x}R" for y in peers]
        out.append(f"\trun {x}({', '.join(actuals)});")
    out.append("}")
    return "\n".join(out) + "\n"


def byzantine_nominal(generals):
    return byzantine(generals, faulty=False)


def byzantine_impl(generals):
    return byzantine(generals, faulty=True)


# -- bounded retransmission protocol --------------------------------------------

def _brp_sender(chunks, retransmissions):
    """Sender process; ``retransmissions is None`` gives the lossless nominal sender."""
    cnt = _names("n", max(1, ceil(log2(chunks)))) if chunks > 1 else []
    first = _bits_equal(cnt, 0)
    last = _bits_equal(cnt, chunks - 1)
    lossy = retransmissions is not None
    rt = _names("rt", max(1, ceil(log2(retransmissions + 1)))) if lossy else []
    frame = f"fs = {first}, ls = {last}, bs = sab"
    out = ["Process Sender {",
           "\ts0, s1, s2: BOOL; // idle 000, next frame 001, wait ack 010, retransmit 011,",
           "\t// success 100, error 101",
           "\tsrep0, srep1: BOOL; // report: none 00, not ok 01, don't know 10, ok 11",
           "\tsab: BOOL; // alternating bit"]
    if cnt:
        out.append(f"\t{', '.join(cnt)}: BOOL; // index of the current chunk")
    if rt:
        out.append(f"\t{', '.join(rt)}: BOOL; // retransmissions of the current chunk")
    init = ["!s0", "!s1", "!s2", "!srep0", "!srep1", "!sab"] + [f"!{b}" for b in cnt + rt]
    init += ["!fs", "!ls", "!bs", "!flagK", "!flagL"]
    out += [f"\tInitial: {' && '.join(init)};",
            "\tNormative: true;",
            "",
            "\t// idle",
            "\t[NewFile] !s0 && !s1 && !s2 -> s2 = true, srep0 = false, srep1 = false"
            + "".join(f", {a}" for a in _assign_bits(cnt, 0)) + ";",
            "",
            "\t// next frame",
            "\t[sendChunk] !s0 && !s1 && s2 && !flagK -> s1 = true, s2 = false, "
            + frame + "".join(f", {a}" for a in _assign_bits(rt, 0)) + ", flagK = true;",
            "",
            "\t// wait ack",
            f"\t[receiveAck] !s0 && s1 && !s2 && !flagK && flagL && {last} -> "
            "s0 = true, s1 = false, sab = !sab, flagL = false;"]
    for v in range(chunks - 1):
        out.append(f"\t[receiveAck] !s0 && s1 && !s2 && !flagK && flagL && {_bits_equal(cnt, v)} -> "
                   "s1 = false, s2 = true, sab = !sab, flagL = false, "
                   + ", ".join(_assign_bits(cnt, v + 1)) + ";")
    if lossy:
        out += ["\t[TOMsg] faulty !s0 && s1 && !s2 && flagK -> s2 = true, flagK = false;",
                "",
                "\t// retransmit"]
        for v in range(retransmissions):
            out.append(f"\t[sendChunk] internal !s0 && s1 && s2 && {_bits_equal(rt, v)} && !flagK -> "
                       f"s2 = false, {frame}, " + ", ".join(_assign_bits(rt, v + 1)) + ", flagK = true;")
        full = _bits_equal(rt, retransmissions)
        out += [f"\t[error] internal !s0 && s1 && s2 && {full} -> s0 = true, s1 = false, "
                "srep0 = false, srep1 = true;",
                f"\t[error] internal !s0 && s1 && s2 && {full} -> s0 = true, s1 = false, "
                "srep0 = true, srep1 = false;"]
    out += ["",
            "\t// success",
            "\t[success] s0 && !s1 && !s2 -> s0 = false, srep0 = true, srep1 = true;"]
    if lossy:
        out += ["",
                "\t// error",
                "\t[restart] s0 && !s1 && s2 -> s0 = false, s2 = false;"]
    out += ["}", ""]
    return out


_BRP_RECEIVER = """\
Process Receiver {
\tr0, r1, r2: BOOL; // new file 000, first safe 001, frame received 010,
\t// frame reported 011, idle 100, finish 101
\trrep0, rrep1, rrep2: BOOL; // none 000, first 001, incomplete 010, ok 011, not ok 100
\tfr, lr, br, rab, recv: BOOL;
\tInitial: !r0 && !r1 && !r2 && !rrep0 && !rrep1 && !rrep2 && !fr && !lr && !br &&
\t\t!rab && !recv && !fs && !ls && !bs && !flagK && !flagL;
\tNormative: true;

\t// new file
\t[receiveFirstChunk] !r0 && !r1 && !r2 && flagK && !flagL -> r2 = true, fr = fs,
\t\tlr = ls, br = bs, recv = true, flagK = false;

\t// first safe frame
\t[e] !r0 && !r1 && r2 && !flagL -> r1 = true, r2 = false, rab = br;

\t// frame received
\t[setIndication] !r0 && r1 && !r2 && rab == br && fr && !lr && !flagL -> r2 = true,
\t\trrep0 = false, rrep1 = false, rrep2 = true;
\t[setIndication] !r0 && r1 && !r2 && rab == br && !fr && !lr && !flagL -> r2 = true,
\t\trrep0 = false, rrep1 = true, rrep2 = false;
\t[setIndication] !r0 && r1 && !r2 && rab == br && !fr && lr && !flagL -> r2 = true,
\t\trrep0 = false, rrep1 = true, rrep2 = true;
\t[setIndication] !r0 && r1 && !r2 && rab == br && fr && lr && !flagL -> r2 = true,
\t\trrep0 = false, rrep1 = true, rrep2 = true;
\t[sendAck] !r0 && r1 && !r2 && !(rab == br) && !flagL -> r0 = true, r1 = false,
\t\tflagL = true;

\t// frame reported
\t[sendAck] !r0 && r1 && r2 && !flagL && !lr -> r0 = true, r1 = false, r2 = false,
\t\trab = !rab, flagL = true;
\t[sendAck] !r0 && r1 && r2 && !flagL && lr -> r0 = true, r1 = false, r2 = true,
\t\trab = !rab, flagL = true;

\t// idle
\t[receiveChunk] r0 && !r1 && !r2 && flagK && !flagL -> r0 = false, r1 = true,
\t\tfr = fs, lr = ls, br = bs, recv = true, flagK = false;

\t// finish
\t[restart] r0 && !r1 && r2 -> r1 = false, r2 = false;
}

Main() {
\ts: Sender;
\tr: Receiver;
\trun s();
\trun r();
}
"""


def _brp(chunks, retransmissions):
    head = [f"// bounded retransmission protocol, {chunks} chunk(s)"
            + (f", at most {retransmissions} retransmission(s)" if retransmissions is not None
               else ", lossless channel"),
            "Global fs, ls, bs: BOOL; // first, last and alternating bit of the frame in transit",
            "Global flagK, flagL: BOOL; // a frame, respectively an ack, is in transit",
            ""]
    return "\n".join(head + _brp_sender(chunks, retransmissions)) + "\n" + _BRP_RECEIVER


def brp_nominal(chunks):
    return _brp(chunks, None)


def brp_impl(chunks, retransmissions):
    return _brp(chunks, retransmissions)


# -- running example --------------------------------------------------------------

CELL_NOMINAL = """\
// one-bit memory cell
Process Cell {
\tm: BOOL;
\tInitial: !m;
\tNormative: true;
\t[W0] true -> m = false;
\t[W1] true -> m = true;
\t[R0] !m -> m = m;
\t[R1] m -> m = m;
}

Main() {
\tc: Cell;
\trun c();
}
"""

CELL_ONE_FAULT = """\
// the cell may spuriously set a flag while holding 0; writes clear it
Process Cell {
\tm, f: BOOL;
\tInitial: !m && !f;
\tNormative: !f;
\t[W0] true -> m = false, f = false;
\t[W1] true -> m = true, f = false;
\t[R0] !m -> m = m;
\t[R1] m -> m = m;
\t[F1] faulty !m && !f -> f = true;
}

Main() {
\tc: Cell;
\trun c();
}
"""

CELL_TWO_FAULTS = """\
// a second fault on top of the first one corrupts the stored 0 into a 1
Process Cell {
\tm, f, g: BOOL;
\tInitial: !m && !f && !g;
\tNormative: !f && !g;
\t[W0] true -> m = false, f = false, g = false;
\t[W1] true -> m = true, f = false, g = false;
\t[R0] !m && !g -> m = m;
\t[R1] m || g -> m = m;
\t[F1] faulty !m && !f -> f = true;
\t[F2] faulty f && !g -> g = true;
}

Main() {
\tc: Cell;
\trun c();
}
"""


def corpus_files():
    """Mapping from corpus file name to source text."""
    files = {
        "cell.nominal.gcl": CELL_NOMINAL,
        "cell_1.impl.gcl": CELL_ONE_FAULT,
        "cell_2.impl.gcl": CELL_TWO_FAULTS,
        "memory.nominal.gcl": memory_nominal(),
        "nmr.nominal.gcl": nmr_nominal(),
    }
    for bits in (3, 5, 7, 9):
        files[f"memory_{bits}.impl.gcl"] = memory_impl(bits)
    for mods in (3, 5, 7, 9):
        files[f"nmr_{mods}.impl.gcl"] = nmr_impl(mods)
    for n in (2, 3, 4, 5):
        files[f"philosophers_{n}.nominal.gcl"] = philosophers_nominal(n)
        files[f"philosophers_{n}.impl.gcl"] = philosophers_impl(n)
    for g in (3, 4):
        files[f"byzantine_{g}.nominal.gcl"] = byzantine_nominal(g)
        files[f"byzantine_{g}.impl.gcl"] = byzantine_impl(g)
    for chunks in (1, 3, 5):
        files[f"brp_{chunks}.nominal.gcl"] = brp_nominal(chunks)
        for rt in (1, 3, 5, 7):
            files[f"brp_{chunks}_{rt}.impl.gcl"] = brp_impl(chunks, rt)
    return files
