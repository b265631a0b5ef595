"""Minimal structural checker for generated schema.sql files.

Accepts exactly the shape the generator promises: a header comment, then
CREATE TABLE blocks whose entries are column definitions, one optional
PRIMARY KEY, and FOREIGN KEY constraints.  Also enforces that referenced
tables are defined before their referencing tables (self-references
aside) and that every constraint names real columns.
"""

import re

_HEADER_RE = re.compile(r"^-- SQL schema for model '[A-Za-z_]\w*'$")
_CREATE_RE = re.compile(r"^CREATE TABLE ([a-z_]\w*) \($")
_COLUMN_RE = re.compile(
    r"^  ([a-z_]\w*) (INTEGER|REAL|TEXT|BOOLEAN)"
    r"( NOT NULL)?"
    r"( CHECK \(([a-z_]\w*) IN \('[^']*'(, '[^']*')*\)\))?$")
_PK_RE = re.compile(r"^  PRIMARY KEY \(([a-z_]\w*(, [a-z_]\w*)*)\)$")
_FK_RE = re.compile(
    r"^  FOREIGN KEY \(([a-z_]\w*(, [a-z_]\w*)*)\) "
    r"REFERENCES ([a-z_]\w*) \(([a-z_]\w*(, [a-z_]\w*)*)\)$")


def check_sql(text: str) -> list[str]:
    """Structural problems found in the schema text; empty means it parses."""
    problems: list[str] = []
    lines = text.split("\n")
    if not lines or not _HEADER_RE.match(lines[0]):
        problems.append("missing or malformed header comment")
        return problems
    if lines[-1] != "":
        problems.append("no trailing newline")

    tables: dict[str, set[str]] = {}
    current: str | None = None
    current_cols: set[str] = set()
    pk_seen = False
    pending_constraint_zone = False

    for number, line in enumerate(lines[1:-1], start=2):
        if line == "":
            if current is not None:
                problems.append(f"line {number}: blank line inside a table")
            continue
        m = _CREATE_RE.match(line)
        if m:
            if current is not None:
                problems.append(f"line {number}: CREATE TABLE inside a table")
                continue
            name = m.group(1)
            if name in tables:
                problems.append(f"line {number}: duplicate table '{name}'")
            current = name
            current_cols = set()
            pk_seen = False
            pending_constraint_zone = False
            continue
        if current is None:
            problems.append(f"line {number}: statement outside a table: {line!r}")
            continue
        if line == ");":
            tables[current] = current_cols
            current = None
            continue

        body = line[:-1] if line.endswith(",") else line
        column = _COLUMN_RE.match(body)
        if column:
            if pending_constraint_zone:
                problems.append(f"line {number}: column after constraints")
            col_name = column.group(1)
            if col_name in current_cols:
                problems.append(f"line {number}: duplicate column '{col_name}'")
            current_cols.add(col_name)
            check_target = column.group(5)
            if check_target is not None and check_target != col_name:
                problems.append(
                    f"line {number}: CHECK names '{check_target}', not the column")
            continue
        pk = _PK_RE.match(body)
        if pk:
            pending_constraint_zone = True
            if pk_seen:
                problems.append(f"line {number}: second PRIMARY KEY")
            pk_seen = True
            for col in pk.group(1).split(", "):
                if col not in current_cols:
                    problems.append(
                        f"line {number}: PRIMARY KEY names unknown column '{col}'")
            continue
        fk = _FK_RE.match(body)
        if fk:
            pending_constraint_zone = True
            own_cols = fk.group(1).split(", ")
            ref_table = fk.group(3)
            ref_cols = fk.group(4).split(", ")
            for col in own_cols:
                if col not in current_cols:
                    problems.append(
                        f"line {number}: FOREIGN KEY names unknown column '{col}'")
            if ref_table != current:
                if ref_table not in tables:
                    problems.append(
                        f"line {number}: references '{ref_table}' before it is "
                        f"defined")
                else:
                    for col in ref_cols:
                        if col not in tables[ref_table]:
                            problems.append(
                                f"line {number}: references unknown column "
                                f"'{ref_table}.{col}'")
            if len(own_cols) != len(ref_cols):
                problems.append(f"line {number}: FOREIGN KEY arity mismatch")
            continue
        problems.append(f"line {number}: unrecognized table entry: {line!r}")

    if current is not None:
        problems.append(f"table '{current}' never closed")
    return problems
