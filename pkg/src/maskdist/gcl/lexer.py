import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset({
    "Global", "Process", "Main", "Initial", "Normative", "run",
    "faulty", "internal", "true", "false", "BOOL",
})

# longest operators first
_PUNCT = ["->", "==", "&&", "||", "{", "}", "(", ")", "[", "]", ";", ":", ",", "=", "!"]

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)"
    r"|(?P<nl>\n)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in _PUNCT) + r")"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'kw', 'punct' or 'eof'
    text: str
    line: int
    col: int

    @property
    def pos(self):
        return (self.line, self.col)

    def describe(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text):
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
        elif kind == "punct":
            tokens.append(Token("punct", m.group(), line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens
