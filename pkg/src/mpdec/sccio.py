"""Reading and writing presentations in the scc2020 exchange format.

Layout: a magic line ``scc2020``; comment lines starting with ``#`` anywhere;
the number of parameters d; a size line ``n_rel n_gen [0]``; then n_rel
relation lines (d integer grades, a literal ``;``, then column entries) and
n_gen generator lines (d integer grades, ``;``). Over F_2 entries are bare
0-based generator indices; over larger prime fields they are ``index:value``
pairs (``index:1`` is also accepted over F_2).
"""

from __future__ import annotations

from .fields import FieldConfig
from .grading import GradedMatrix, leq


class SccParseError(Exception):
    """Malformed scc2020 input; message carries the offending line number."""


def _logical_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_scc2020(text: str, field: FieldConfig | None = None) -> GradedMatrix:
    """Parse an scc2020 document into a GradedMatrix.

    Args:
        text: document contents.
        field: coefficient field (default F_2).

    Returns:
        GradedMatrix with generator degrees on rows and relation degrees on
        columns; the graded invariant is verified on load.

    Raises:
        SccParseError: on any grammar or consistency violation.
    """
    fq = field if field is not None else FieldConfig(2)
    lines = list(_logical_lines(text))
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(lines):
            raise SccParseError(f"unexpected end of input, expected {what}")
        item = lines[pos]
        pos += 1
        return item

    lineno, magic = take("magic line")
    if magic != "scc2020":
        raise SccParseError(f"line {lineno}: expected 'scc2020', got {magic!r}")

    lineno, dline = take("parameter count")
    try:
        d = int(dline)
    except ValueError:
        raise SccParseError(f"line {lineno}: parameter count must be an integer")
    if d < 1:
        raise SccParseError(f"line {lineno}: parameter count must be >= 1")

    lineno, sline = take("size line")
    toks = sline.split()
    if len(toks) not in (2, 3):
        raise SccParseError(f"line {lineno}: size line needs 2 or 3 integers")
    try:
        sizes = [int(t) for t in toks]
    except ValueError:
        raise SccParseError(f"line {lineno}: size line must be integers")
    if len(sizes) == 3 and sizes[2] != 0:
        raise SccParseError(f"line {lineno}: trailing size must be 0")
    n_rel, n_gen = sizes[0], sizes[1]
    if n_rel < 0 or n_gen < 0:
        raise SccParseError(f"line {lineno}: negative size")

    def parse_grade_line(expect_entries):
        lineno, line = take("grade line")
        if ";" not in line:
            raise SccParseError(f"line {lineno}: missing ';'")
        head, _, tail = line.partition(";")
        gtoks = head.split()
        if len(gtoks) != d:
            raise SccParseError(
                f"line {lineno}: expected {d} grade coordinates, got {len(gtoks)}"
            )
        try:
            grade = tuple(int(t) for t in gtoks)
        except ValueError:
            raise SccParseError(f"line {lineno}: grades must be integers")
        etoks = tail.split()
        if not expect_entries and etoks:
            raise SccParseError(f"line {lineno}: generator line must have no entries")
        return lineno, grade, etoks

    relations = []
    for _ in range(n_rel):
        relations.append(parse_grade_line(expect_entries=True))
    generators = []
    for _ in range(n_gen):
        lineno, grade, _ = parse_grade_line(expect_entries=False)
        generators.append(grade)

    if pos != len(lines):
        lineno, line = lines[pos]
        raise SccParseError(f"line {lineno}: trailing content {line!r}")

    m = GradedMatrix(generators, [g for _, g, _ in relations], field=fq)
    for j, (lineno, grade, etoks) in enumerate(relations):
        col = {}
        for tok in etoks:
            if ":" in tok:
                istr, _, vstr = tok.partition(":")
            else:
                if fq.q != 2:
                    raise SccParseError(
                        f"line {lineno}: entry {tok!r} needs an explicit "
                        f"coefficient over F_{fq.q}"
                    )
                istr, vstr = tok, "1"
            try:
                idx, val = int(istr), int(vstr)
            except ValueError:
                raise SccParseError(f"line {lineno}: bad entry token {tok!r}")
            if not (0 <= idx < n_gen):
                raise SccParseError(
                    f"line {lineno}: generator index {idx} out of range [0,{n_gen})"
                )
            val %= fq.q
            if val == 0:
                raise SccParseError(f"line {lineno}: explicit zero entry {tok!r}")
            if idx in col:
                raise SccParseError(f"line {lineno}: duplicate generator index {idx}")
            if not leq(generators[idx], grade):
                raise SccParseError(
                    f"line {lineno}: grading violated, generator {idx} at "
                    f"{generators[idx]} not below relation grade {grade}"
                )
            col[idx] = val
        m.columns[j] = col
    return m


def write_scc2020(m: GradedMatrix) -> str:
    """Serialize a GradedMatrix; parse(write(m)) reproduces m exactly."""
    out = ["scc2020", str(m.dim if m.dim else 1)]
    out.append(f"{m.num_cols} {m.num_rows} 0")
    for j in range(m.num_cols):
        grade = " ".join(str(x) for x in m.col_degrees[j])
        if m.field.q == 2:
            ents = " ".join(str(i) for i, _ in m.entries(j))
        else:
            ents = " ".join(f"{i}:{v}" for i, v in m.entries(j))
        out.append(f"{grade} ; {ents}".rstrip())
    for i in range(m.num_rows):
        grade = " ".join(str(x) for x in m.row_degrees[i])
        out.append(f"{grade} ;")
    return "\n".join(out) + "\n"


def strip_comments(text: str) -> str:
    """Canonical text form: comments and blank lines removed."""
    return "\n".join(line for _, line in _logical_lines(text)) + "\n"
