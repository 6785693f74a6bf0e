"""Regenerate the bundled model corpus and its expected-value fixtures.

Run from the repository root:  python3 tools/gen_corpus.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from maskdist.models import corpus_files  # noqa: E402

CORPUS = ROOT / "src" / "maskdist" / "corpus"

REFERENCE = """\
# model;params;mode;expected distance
memory;3;strong;1/3
memory;5;strong;1/4
nmr;3;strong;1/3
philosophers;2;strong;1/2
philosophers;3;strong;1/3
byzantine;3;strong;1/2
byzantine;4;strong;1/3
brp;1,1;weak;1/3
brp;1,3;weak;1/5
brp;1,5;weak;1/7
brp;1,7;weak;1/9
"""

REFERENCE_EXTENDED = """\
# larger instances; minutes of runtime and gigabytes of memory for some rows
memory;7;strong;1/5
memory;9;strong;1/6
nmr;5;strong;1/4
nmr;7;strong;1/5
nmr;9;strong;1/6
philosophers;4;strong;1/4
philosophers;5;strong;1/5
brp;3,1;weak;1/3
brp;3,3;weak;1/5
brp;3,5;weak;1/7
brp;3,7;weak;1/9
brp;5,1;weak;1/3
brp;5,3;weak;1/5
brp;5,5;weak;1/7
brp;5,7;weak;1/9
"""

EXAMPLES = """\
# the memory cell with one and with two fault kinds
cell;1;strong;0/1
cell;2;strong;1/3
"""


def main():
    CORPUS.mkdir(exist_ok=True)
    for old in CORPUS.glob("*.gcl"):
        old.unlink()
    files = corpus_files()
    for name, text in sorted(files.items()):
        (CORPUS / name).write_text(text, encoding="utf-8")
    (CORPUS / "reference.txt").write_text(REFERENCE, encoding="utf-8")
    (CORPUS / "reference_extended.txt").write_text(REFERENCE_EXTENDED, encoding="utf-8")
    (CORPUS / "examples.txt").write_text(EXAMPLES, encoding="utf-8")
    print(f"wrote {len(files)} models to {CORPUS}")


if __name__ == "__main__":
    main()
